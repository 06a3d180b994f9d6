//! Seminorms on the target space, sup-norms of polynomials and multilinear
//! forms over the unit max-norm ball, and C^l seminorms of functions on
//! compact grids.
//!
//! Sup-norms over balls are sample estimates: the sample set is the ball's
//! corners, the axis directions, and a seeded uniform sample, so results are
//! deterministic given the scheme and are lower estimates of the true sup.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::jet::Jet;
use crate::calculus::multi_index::{factorial, multi_indices_exact};
use crate::calculus::polynomial::{PolynomialMap, SymmetricForm};
use crate::error::Result;
use crate::provider::JetProvider;

/// A continuous seminorm on `R^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SeminormSpec {
    /// `q(v) = max_i |v_i|`
    CoordinateMax,
    /// `q(v) = (Σ v_i^2)^{1/2}`
    Euclidean,
    /// `q(v) = max_i w_i |v_i|` with positive weights
    WeightedMax { weights: Vec<f64> },
}

impl SeminormSpec {
    pub fn apply(&self, v: &[f64]) -> f64 {
        match self {
            SeminormSpec::CoordinateMax => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            SeminormSpec::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            SeminormSpec::WeightedMax { weights } => v
                .iter()
                .zip(weights)
                .fold(0.0, |m, (x, w)| m.max(w * x.abs())),
        }
    }
}

/// Deterministic sample scheme for sup-norm estimates over the unit
/// max-norm ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleScheme {
    pub seed: u64,
    pub count: usize,
}

impl Default for SampleScheme {
    fn default() -> Self {
        SampleScheme {
            seed: 0x5EED_0001,
            count: 128,
        }
    }
}

impl SampleScheme {
    pub fn new(seed: u64, count: usize) -> Self {
        SampleScheme { seed, count }
    }

    /// Sample directions in the closed unit max-ball of `R^d`:
    /// all corners, the signed axis directions, then seeded uniforms.
    pub fn directions(&self, d: usize) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        if d <= 10 {
            for mask in 0u32..(1 << d) {
                let corner = (0..d)
                    .map(|i| if mask & (1 << i) != 0 { 1.0 } else { -1.0 })
                    .collect();
                out.push(corner);
            }
        }
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            out.push(e.clone());
            e[i] = -1.0;
            out.push(e);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.count {
            out.push((0..d).map(|_| rng.random_range(-1.0..=1.0)).collect());
        }
        out
    }
}

/// Sample estimate of `sup { q(p(y)) : ||y||_inf <= 1 }`.
pub fn polynomial_sup_norm(p: &PolynomialMap, q: &SeminormSpec, scheme: &SampleScheme) -> f64 {
    scheme
        .directions(p.dim())
        .iter()
        .fold(0.0, |m, y| m.max(q.apply(&p.eval(y))))
}

/// Dense-grid estimate of the same sup; the independent oracle for tests.
pub fn polynomial_sup_norm_grid(p: &PolynomialMap, q: &SeminormSpec, per_axis: usize) -> f64 {
    let d = p.dim();
    let mut best: f64 = 0.0;
    let mut idx = vec![0usize; d];
    loop {
        let y: Vec<f64> = idx
            .iter()
            .map(|&i| -1.0 + 2.0 * i as f64 / (per_axis - 1) as f64)
            .collect();
        best = best.max(q.apply(&p.eval(&y)));
        let mut pos = 0;
        loop {
            if pos == d {
                return best;
            }
            idx[pos] += 1;
            if idx[pos] < per_axis {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Sample estimate of `sup { q(β(y_1..y_j)) : ||y_k||_inf <= 1 }`.
///
/// The sample set contains the diagonal tuples of the polynomial scheme, so
/// the estimate always dominates `polynomial_sup_norm` of the diagonal
/// restriction under the same scheme.
pub fn form_sup_norm(beta: &SymmetricForm, q: &SeminormSpec, scheme: &SampleScheme) -> f64 {
    let d = beta.dim();
    let j = beta.arity();
    let dirs = scheme.directions(d);
    let mut best: f64 = 0.0;
    for y in &dirs {
        let tuple: Vec<&[f64]> = (0..j).map(|_| y.as_slice()).collect();
        best = best.max(q.apply(&beta.apply(&tuple)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(scheme.seed ^ 0x00F0_74B1);
    for _ in 0..scheme.count {
        let tuple: Vec<Vec<f64>> = (0..j)
            .map(|_| (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect())
            .collect();
        let refs: Vec<&[f64]> = tuple.iter().map(|v| v.as_slice()).collect();
        best = best.max(q.apply(&beta.apply(&refs)));
    }
    best
}

/// Degree-`j` Gateaux polynomial of a jet:
/// `y ↦ Σ_{|α| = j} (j!/α!) ∂^α γ(x) y^α`.
pub fn gateaux_polynomial(jet: &Jet, j: usize) -> PolynomialMap {
    let jf = factorial(j);
    let mut coeffs = std::collections::BTreeMap::new();
    for alpha in multi_indices_exact(jet.dim(), j) {
        let scale = jf / alpha.factorial();
        let c: Vec<f64> = jet.partial(&alpha).iter().map(|v| scale * v).collect();
        if c.iter().any(|&v| v != 0.0) {
            coeffs.insert(alpha, c);
        }
    }
    PolynomialMap::new(jet.dim(), jet.target_dim(), j, coeffs)
        .expect("gateaux polynomial is well-formed")
}

/// Partial-derivative C^l seminorm over a finite point set:
/// `max over points and |α| ≤ l of q(∂^α γ(x))`.
///
/// A lower estimate of the true sup over the compact set, converging under
/// grid refinement.
pub fn seminorm_cl(
    provider: &dyn JetProvider,
    points: &[Vec<f64>],
    ell: usize,
    q: &SeminormSpec,
) -> Result<f64> {
    let mut best: f64 = 0.0;
    for x in points {
        let jet = provider.jet(x, ell)?;
        for (_, v) in jet.iter() {
            best = best.max(q.apply(v));
        }
    }
    Ok(best)
}

/// Gateaux-differential C^l seminorm over a finite point set:
/// `max_{j ≤ l} max over points of sup-norm of the degree-j Gateaux
/// polynomial` (sup over the unit max-ball, sampled).
pub fn seminorm_cl_gateaux(
    provider: &dyn JetProvider,
    points: &[Vec<f64>],
    ell: usize,
    q: &SeminormSpec,
    scheme: &SampleScheme,
) -> Result<f64> {
    let mut best: f64 = 0.0;
    for x in points {
        let jet = provider.jet(x, ell)?;
        for j in 0..=ell {
            let p = gateaux_polynomial(&jet, j);
            best = best.max(polynomial_sup_norm(&p, q, scheme));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::multi_index::{multi_indices, MultiIndex};
    use crate::calculus::polynomial::polarize;
    use approx::assert_abs_diff_eq;
    use std::collections::BTreeMap;

    #[test]
    fn seminorm_axioms_spot_checks() {
        let v = [3.0, -4.0];
        assert_eq!(SeminormSpec::CoordinateMax.apply(&v), 4.0);
        assert_eq!(SeminormSpec::Euclidean.apply(&v), 5.0);
        let w = SeminormSpec::WeightedMax {
            weights: vec![2.0, 0.5],
        };
        assert_eq!(w.apply(&v), 6.0);
    }

    #[test]
    fn identity_poly_norm_is_one() {
        // p(y) = y on [-1,1]
        let mut coeffs = BTreeMap::new();
        coeffs.insert(MultiIndex::new(vec![1]), vec![1.0]);
        let p = PolynomialMap::new(1, 1, 1, coeffs).unwrap();
        let n = polynomial_sup_norm(&p, &SeminormSpec::CoordinateMax, &SampleScheme::default());
        assert_abs_diff_eq!(n, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn product_poly_norm_grid_oracle() {
        // p(y) = y1 y2 on the max ball: sup = 1, attained at corners.
        // Grid oracle and the sampled estimate must both find it.
        let mut coeffs = BTreeMap::new();
        coeffs.insert(MultiIndex::new(vec![1, 1]), vec![1.0]);
        let p = PolynomialMap::new(2, 1, 2, coeffs).unwrap();
        let q = SeminormSpec::CoordinateMax;
        let oracle = polynomial_sup_norm_grid(&p, &q, 81);
        assert_abs_diff_eq!(oracle, 1.0, epsilon = 1e-12);
        let sampled = polynomial_sup_norm(&p, &q, &SampleScheme::default());
        assert_abs_diff_eq!(sampled, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn diagonal_never_beats_form_on_shared_samples() {
        // mixed cubic: the diagonal sup can only shrink
        let mut coeffs = BTreeMap::new();
        coeffs.insert(MultiIndex::new(vec![2, 1]), vec![1.0]);
        let p = PolynomialMap::new(2, 1, 3, coeffs).unwrap();
        let beta = polarize(&p).unwrap();
        let q = SeminormSpec::CoordinateMax;
        let scheme = SampleScheme::default();
        let np = polynomial_sup_norm(&p, &q, &scheme);
        let nb = form_sup_norm(&beta, &q, &scheme);
        assert!(np <= nb + 1e-14);
    }

    #[test]
    fn gateaux_polynomial_coefficients() {
        // jet of x1 x2 at (0,0): δ^2(y) = 2 y1 y2
        let mut table = BTreeMap::new();
        for a in multi_indices(2, 2) {
            let v = if a == MultiIndex::new(vec![1, 1]) { 1.0 } else { 0.0 };
            table.insert(a, vec![v]);
        }
        let jet = Jet::new(vec![0.0, 0.0], 2, table).unwrap();
        let p = gateaux_polynomial(&jet, 2);
        assert_eq!(p.coeff(&MultiIndex::new(vec![1, 1])), vec![2.0]);
    }
}
