//! Vector-valued polynomials in monomial form, Taylor polynomials,
//! symmetric multilinear forms, and the polarization identity.

use std::collections::BTreeMap;

use crate::calculus::jet::Jet;
use crate::calculus::multi_index::{multi_indices, MultiIndex, MAX_ORDER};
use crate::error::{Error, Result};

/// A polynomial `p(y) = Σ_α y^α c_α` with coefficients `c_α ∈ R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialMap {
    dim: usize,
    target_dim: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, Vec<f64>>,
}

impl PolynomialMap {
    pub fn new(
        dim: usize,
        target_dim: usize,
        degree: usize,
        coeffs: BTreeMap<MultiIndex, Vec<f64>>,
    ) -> Result<Self> {
        if degree > MAX_ORDER {
            return Err(Error::Precondition(format!(
                "polynomial degree {degree} exceeds supported maximum {MAX_ORDER}"
            )));
        }
        for (alpha, c) in &coeffs {
            if alpha.dim() != dim || alpha.order() > degree {
                return Err(Error::Precondition(format!(
                    "coefficient index ({alpha}) out of range for degree {degree}"
                )));
            }
            if c.len() != target_dim {
                return Err(Error::Precondition(format!(
                    "coefficient ({alpha}) has dimension {} != {target_dim}",
                    c.len()
                )));
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(format!("coefficient ({alpha})")));
            }
        }
        Ok(PolynomialMap {
            dim,
            target_dim,
            degree,
            coeffs,
        })
    }

    pub fn zero(dim: usize, target_dim: usize, degree: usize) -> Self {
        PolynomialMap {
            dim,
            target_dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, Vec<f64>> {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Vec<f64> {
        self.coeffs
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| vec![0.0; self.target_dim])
    }

    /// Evaluate `p(y) = Σ_α y^α c_α`.
    pub fn eval(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.target_dim];
        for (alpha, c) in &self.coeffs {
            let mono = alpha.monomial(y);
            if mono == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(c) {
                *o += mono * v;
            }
        }
        out
    }

    /// Partial derivative along axis `i`; degree drops by one.
    pub fn derivative(&self, axis: usize) -> PolynomialMap {
        let mut coeffs: BTreeMap<MultiIndex, Vec<f64>> = BTreeMap::new();
        for (alpha, c) in &self.coeffs {
            let k = alpha.entry(axis);
            if k == 0 {
                continue;
            }
            let down = alpha
                .checked_sub(&MultiIndex::unit(self.dim, axis))
                .unwrap();
            let scaled = c.iter().map(|v| v * k as f64).collect::<Vec<_>>();
            coeffs
                .entry(down)
                .and_modify(|acc: &mut Vec<f64>| {
                    for (a, b) in acc.iter_mut().zip(&scaled) {
                        *a += b;
                    }
                })
                .or_insert(scaled);
        }
        PolynomialMap {
            dim: self.dim,
            target_dim: self.target_dim,
            degree: self.degree.saturating_sub(1),
            coeffs,
        }
    }

    /// Exact jet of the polynomial at `y`, up to order `k`:
    /// `∂^α p(y) = Σ_{β ≥ α} (β! / (β-α)!) y^{β-α} c_β`.
    pub fn jet_at(&self, y: &[f64], k: usize) -> Jet {
        let mut table = BTreeMap::new();
        for alpha in multi_indices(self.dim, k) {
            let mut acc = vec![0.0; self.target_dim];
            for (beta, c) in &self.coeffs {
                if let Some(rest) = beta.checked_sub(&alpha) {
                    let fall = beta.factorial() / rest.factorial();
                    let mono = rest.monomial(y);
                    if mono == 0.0 {
                        continue;
                    }
                    for (a, v) in acc.iter_mut().zip(c) {
                        *a += fall * mono * v;
                    }
                }
            }
            table.insert(alpha, acc);
        }
        Jet::new(y.to_vec(), k, table).expect("polynomial jet is total and finite")
    }

    pub fn scale(&self, s: f64) -> PolynomialMap {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(a, c)| (a.clone(), c.iter().map(|v| s * v).collect()))
            .collect();
        PolynomialMap {
            dim: self.dim,
            target_dim: self.target_dim,
            degree: self.degree,
            coeffs,
        }
    }

    pub fn add(&self, other: &PolynomialMap) -> PolynomialMap {
        let mut coeffs = self.coeffs.clone();
        for (a, c) in &other.coeffs {
            coeffs
                .entry(a.clone())
                .and_modify(|acc| {
                    for (x, y) in acc.iter_mut().zip(c) {
                        *x += y;
                    }
                })
                .or_insert_with(|| c.clone());
        }
        PolynomialMap {
            dim: self.dim,
            target_dim: self.target_dim,
            degree: self.degree.max(other.degree),
            coeffs,
        }
    }

    /// `Some(j)` if all nonzero coefficients sit in total order exactly `j`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut deg = None;
        for (alpha, c) in &self.coeffs {
            if c.iter().all(|&v| v == 0.0) {
                continue;
            }
            match deg {
                None => deg = Some(alpha.order()),
                Some(d) if d != alpha.order() => return None,
                _ => {}
            }
        }
        deg.or(Some(0))
    }
}

/// A symmetric `j`-linear form stored densely on sorted index tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricForm {
    arity: usize,
    dim: usize,
    target_dim: usize,
    /// entries indexed by non-decreasing tuples `i_1 ≤ ... ≤ i_j`
    entries: BTreeMap<Vec<usize>, Vec<f64>>,
}

impl SymmetricForm {
    pub fn new(
        arity: usize,
        dim: usize,
        target_dim: usize,
        entries: BTreeMap<Vec<usize>, Vec<f64>>,
    ) -> Result<Self> {
        for key in entries.keys() {
            if key.len() != arity || key.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Precondition(format!(
                    "entry key {key:?} is not a sorted {arity}-tuple"
                )));
            }
            if key.iter().any(|&i| i >= dim) {
                return Err(Error::Precondition(format!("entry key {key:?} out of range")));
            }
        }
        Ok(SymmetricForm {
            arity,
            dim,
            target_dim,
            entries,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, Vec<f64>> {
        &self.entries
    }

    /// Entry `β(e_{i_1}, ..., e_{i_j})` for an arbitrary-order tuple.
    pub fn entry(&self, tuple: &[usize]) -> Vec<f64> {
        let mut key = tuple.to_vec();
        key.sort_unstable();
        self.entries
            .get(&key)
            .cloned()
            .unwrap_or_else(|| vec![0.0; self.target_dim])
    }

    /// Apply the form to `j` vectors:
    /// `β(y_1, ..., y_j) = Σ_{i_1..i_j} β(e_{i_1},..,e_{i_j}) Π_k y_k[i_k]`.
    pub fn apply(&self, vectors: &[&[f64]]) -> Vec<f64> {
        debug_assert_eq!(vectors.len(), self.arity);
        let mut out = vec![0.0; self.target_dim];
        let mut tuple = vec![0usize; self.arity];
        loop {
            let weight: f64 = tuple
                .iter()
                .zip(vectors)
                .map(|(&i, y)| y[i])
                .product();
            if weight != 0.0 {
                let e = self.entry(&tuple);
                for (o, v) in out.iter_mut().zip(&e) {
                    *o += weight * v;
                }
            }
            // odometer over {0..dim}^arity
            let mut pos = 0;
            loop {
                if pos == self.arity {
                    return out;
                }
                tuple[pos] += 1;
                if tuple[pos] < self.dim {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Diagonal restriction `β̄(y) = β(y, ..., y)`, a homogeneous polynomial
    /// of degree `j`. The monomial coefficient of `y^α` is
    /// `(j! / α!) β(e^α)` (number of tuples with content `α` times the entry).
    pub fn diagonal(&self) -> PolynomialMap {
        let j = self.arity;
        let jfact = crate::calculus::multi_index::factorial(j);
        let mut coeffs: BTreeMap<MultiIndex, Vec<f64>> = BTreeMap::new();
        for (key, value) in &self.entries {
            let mut counts = vec![0u8; self.dim];
            for &i in key {
                counts[i] += 1;
            }
            let alpha = MultiIndex::new(counts);
            let mult = jfact / alpha.factorial();
            let scaled = value.iter().map(|v| mult * v).collect::<Vec<_>>();
            coeffs
                .entry(alpha)
                .and_modify(|acc| {
                    for (a, b) in acc.iter_mut().zip(&scaled) {
                        *a += b;
                    }
                })
                .or_insert(scaled);
        }
        PolynomialMap {
            dim: self.dim,
            target_dim: self.target_dim,
            degree: j,
            coeffs,
        }
    }
}

/// Taylor polynomial `P^l_x(γ)` from a jet: coefficients `c_α = ∂^α γ(x)/α!`.
///
/// Satisfies `p(0) = γ(x)` exactly, and reproduces `γ` exactly when `γ` is a
/// polynomial of degree ≤ l.
pub fn taylor_polynomial(jet: &Jet, ell: usize) -> Result<PolynomialMap> {
    if jet.order() < ell {
        return Err(Error::Precondition(format!(
            "jet of order {} cannot produce a Taylor polynomial of order {ell}",
            jet.order()
        )));
    }
    let mut coeffs = BTreeMap::new();
    for alpha in multi_indices(jet.dim(), ell) {
        let fact = alpha.factorial();
        let c = jet
            .partial(&alpha)
            .iter()
            .map(|v| v / fact)
            .collect::<Vec<_>>();
        if c.iter().any(|&v| v != 0.0) {
            coeffs.insert(alpha, c);
        }
    }
    PolynomialMap::new(jet.dim(), jet.target_dim(), ell, coeffs)
}

/// Recover the symmetric `j`-linear form from a homogeneous polynomial of
/// degree `j` by the 2^j-term signed polarization sum
/// `β(x_1,..,x_j) = (1/j!) Σ_{ε ∈ {0,1}^j} (-1)^{j-|ε|} p(ε_1 x_1 + ... + ε_j x_j)`.
pub fn polarize(p: &PolynomialMap) -> Result<SymmetricForm> {
    let is_zero = p
        .coeffs()
        .values()
        .all(|c| c.iter().all(|&v| v == 0.0));
    // the zero polynomial is homogeneous of every degree; use the declared one
    let j = if is_zero {
        p.degree()
    } else {
        p.homogeneous_degree().ok_or_else(|| {
            Error::Precondition("polarize requires a homogeneous polynomial".into())
        })?
    };
    if j == 0 {
        return Err(Error::Precondition(
            "polarize requires a homogeneous degree >= 1".into(),
        ));
    }
    let d = p.dim();
    let jfact = crate::calculus::multi_index::factorial(j);
    let mut entries = BTreeMap::new();
    for key in sorted_tuples(d, j) {
        let mut acc = vec![0.0; p.target_dim()];
        for mask in 0u32..(1 << j) {
            let ones = mask.count_ones() as usize;
            let sign = if (j - ones) % 2 == 0 { 1.0 } else { -1.0 };
            let mut arg = vec![0.0; d];
            for (slot, &axis) in key.iter().enumerate() {
                if mask & (1 << slot) != 0 {
                    arg[axis] += 1.0;
                }
            }
            let val = p.eval(&arg);
            for (a, v) in acc.iter_mut().zip(&val) {
                *a += sign * v;
            }
        }
        for a in acc.iter_mut() {
            *a /= jfact;
        }
        entries.insert(key, acc);
    }
    SymmetricForm::new(j, d, p.target_dim(), entries)
}

/// All non-decreasing `j`-tuples over `{0..d}`.
pub fn sorted_tuples(d: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut tuple = vec![0usize; j];
    fn rec(out: &mut Vec<Vec<usize>>, tuple: &mut Vec<usize>, pos: usize, min: usize, d: usize) {
        if pos == tuple.len() {
            out.push(tuple.clone());
            return;
        }
        for i in min..d {
            tuple[pos] = i;
            rec(out, tuple, pos + 1, i, d);
        }
    }
    rec(&mut out, &mut tuple, 0, 0, d);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn mi(e: &[u8]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    #[test]
    fn taylor_of_square_at_one() {
        // γ(t) = t^2 at t=1, order 2 -> p(y) = 1 + 2y + y^2
        let mut table = BTreeMap::new();
        table.insert(mi(&[0]), vec![1.0]);
        table.insert(mi(&[1]), vec![2.0]);
        table.insert(mi(&[2]), vec![2.0]);
        let jet = Jet::new(vec![1.0], 2, table).unwrap();
        let p = taylor_polynomial(&jet, 2).unwrap();
        assert_eq!(p.coeff(&mi(&[0])), vec![1.0]);
        assert_eq!(p.coeff(&mi(&[1])), vec![2.0]);
        assert_eq!(p.coeff(&mi(&[2])), vec![1.0]);
        // p(0) equals the jet value exactly
        assert_eq!(p.eval(&[0.0]), vec![1.0]);
    }

    #[test]
    fn taylor_of_exp_at_zero() {
        // exp jet at 0, order 2 -> 1 + y + y^2/2
        let mut table = BTreeMap::new();
        for k in 0..=2 {
            table.insert(mi(&[k]), vec![1.0]);
        }
        let jet = Jet::new(vec![0.0], 2, table).unwrap();
        let p = taylor_polynomial(&jet, 2).unwrap();
        assert_eq!(p.coeff(&mi(&[2])), vec![0.5]);
        assert_abs_diff_eq!(p.eval(&[0.1])[0], 1.105, epsilon = 1e-12);
    }

    #[test]
    fn taylor_of_product_function() {
        // γ(x) = x1 x2 at (0,0): only the mixed second derivative is 1
        let mut table = BTreeMap::new();
        for a in multi_indices(2, 2) {
            let v = if a == mi(&[1, 1]) { 1.0 } else { 0.0 };
            table.insert(a, vec![v]);
        }
        let jet = Jet::new(vec![0.0, 0.0], 2, table).unwrap();
        let p = taylor_polynomial(&jet, 2).unwrap();
        assert_eq!(p.coeff(&mi(&[1, 1])), vec![1.0]);
        assert_eq!(p.eval(&[3.0, 5.0]), vec![15.0]);
    }

    #[test]
    fn taylor_order_mismatch_rejected() {
        let jet = Jet::zero(vec![0.0], 1, 1);
        assert!(taylor_polynomial(&jet, 2).is_err());
    }

    #[test]
    fn polarize_univariate_square() {
        // p(y) = y^2 -> β(u, v) = uv
        let mut coeffs = BTreeMap::new();
        coeffs.insert(mi(&[2]), vec![1.0]);
        let p = PolynomialMap::new(1, 1, 2, coeffs).unwrap();
        let beta = polarize(&p).unwrap();
        assert_abs_diff_eq!(
            beta.apply(&[&[3.0], &[5.0]])[0],
            15.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn polarize_zero_polynomial() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(mi(&[2]), vec![0.0]);
        let p = PolynomialMap::new(1, 1, 2, coeffs).unwrap();
        let beta = polarize(&p).unwrap();
        assert_eq!(beta.apply(&[&[1.0], &[1.0]])[0], 0.0);
    }

    #[test]
    fn polarize_mixed_cubic() {
        // p(y) = y1^2 y2, j = 3: β(e1, e1, e2) = 1/3.
        // Frozen from a by-hand expansion of the 2^3-term polarization sum.
        let mut coeffs = BTreeMap::new();
        coeffs.insert(mi(&[2, 1]), vec![1.0]);
        let p = PolynomialMap::new(2, 1, 3, coeffs).unwrap();
        let beta = polarize(&p).unwrap();
        assert_abs_diff_eq!(beta.entry(&[0, 0, 1])[0], 1.0 / 3.0, epsilon = 1e-12);
        // diagonal restriction recovers p
        let back = beta.diagonal();
        assert_abs_diff_eq!(back.coeff(&mi(&[2, 1]))[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn polarize_rejects_nonzero_constant() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(mi(&[0]), vec![3.0]);
        let p = PolynomialMap::new(1, 1, 2, coeffs).unwrap();
        assert!(polarize(&p).is_err());
    }

    #[test]
    fn polarize_rejects_inhomogeneous() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(mi(&[1]), vec![1.0]);
        coeffs.insert(mi(&[2]), vec![1.0]);
        let p = PolynomialMap::new(1, 1, 2, coeffs).unwrap();
        assert!(polarize(&p).is_err());
    }

    #[test]
    fn derivative_reduces_degree() {
        // p(y) = y1^2 y2 -> ∂_1 p = 2 y1 y2
        let mut coeffs = BTreeMap::new();
        coeffs.insert(mi(&[2, 1]), vec![1.0]);
        let p = PolynomialMap::new(2, 1, 3, coeffs).unwrap();
        let dp = p.derivative(0);
        assert_eq!(dp.coeff(&mi(&[1, 1])), vec![2.0]);
        assert_eq!(dp.degree(), 2);
    }

    #[test]
    fn polynomial_jet_matches_derivatives() {
        // p(y) = y1^2 y2 at (2, 3)
        let mut coeffs = BTreeMap::new();
        coeffs.insert(mi(&[2, 1]), vec![1.0]);
        let p = PolynomialMap::new(2, 1, 3, coeffs).unwrap();
        let jet = p.jet_at(&[2.0, 3.0], 2);
        assert_eq!(jet.value()[0], 12.0);
        assert_eq!(jet.partial(&mi(&[1, 0]))[0], 12.0); // 2 y1 y2
        assert_eq!(jet.partial(&mi(&[0, 1]))[0], 4.0); // y1^2
        assert_eq!(jet.partial(&mi(&[1, 1]))[0], 4.0); // 2 y1
        assert_eq!(jet.partial(&mi(&[2, 0]))[0], 6.0); // 2 y2
    }
}
