//! Smoothing operators: Taylor polynomials at lattice points blended
//! through the scaled periodic partition of unity.
//!
//! `build_stilde` realizes
//!
//! ```text
//! S~_n(γ)(x) = Σ_{z ∈ M_n} h_{n,z}(x) · P^l_{z/n}(γ)(x - z/n)
//! ```
//!
//! as a finite list of `(z, n, polynomial)` terms; `build_sn` is the
//! compactly supported stage variant over an exhaustion, `interpolated`
//! the continuously parametrized family, and `cube_smoothing` the
//! extend-smooth-restrict composition on the unit cube.
//!
//! On an unbounded Ω only finitely many terms can be materialized, so
//! `build_stilde` takes a bounded evaluation window and keeps exactly the
//! terms whose support meets it. Local finiteness of the partition makes
//! this lossless: the result agrees with the full sum everywhere inside
//! the window.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bump::{active_scaled_lattice, profile_value, scaled_partition_jet, scaled_partition_value};
use crate::calculus::jet::Jet;
use crate::calculus::multi_index::{MultiIndex, MAX_ORDER};
use crate::calculus::polynomial::{taylor_polynomial, PolynomialMap};
use crate::domains::{cube_in_domain, lattice_sets, AxisBox, BoxUnion, Exhaustion};
use crate::error::{Error, Result};
use crate::provider::JetProvider;

/// One bump term: lattice point, scale, and local Taylor polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub scale: u32,
    pub z: Vec<i64>,
    pub poly: PolynomialMap,
}

impl Term {
    pub fn center(&self) -> Vec<f64> {
        self.z.iter().map(|&zi| zi as f64 / self.scale as f64).collect()
    }

    /// Closure of the term's support: the closed cube `z/n ± 1/n`.
    pub fn support_cube(&self) -> AxisBox {
        AxisBox::cube(&self.center(), 1.0 / self.scale as f64)
    }
}

/// Exact closed-form representation of a smoothed function
/// `S(x) = Σ_terms h_{n,z}(x) · poly(x - z/n)`.
///
/// Immutable after construction; evaluation is pure and concurrent-safe.
#[derive(Debug, Clone)]
pub struct SmoothedFunction {
    dim: usize,
    target_dim: usize,
    ell: usize,
    terms: Vec<Term>,
    domain: BoxUnion,
}

impl SmoothedFunction {
    fn new(
        dim: usize,
        target_dim: usize,
        ell: usize,
        mut terms: Vec<Term>,
        domain: BoxUnion,
    ) -> Self {
        terms.sort_by(|a, b| (a.scale, &a.z).cmp(&(b.scale, &b.z)));
        SmoothedFunction {
            dim,
            target_dim,
            ell,
            terms,
            domain,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_arc(self) -> Arc<dyn JetProvider> {
        Arc::new(self)
    }

    fn term_index(&self, scale: u32, z: &[i64]) -> Option<usize> {
        self.terms
            .binary_search_by(|t| (t.scale, t.z.as_slice()).cmp(&(scale, z)))
            .ok()
    }

    fn distinct_scales(&self) -> Vec<u32> {
        let mut scales: Vec<u32> = self.terms.iter().map(|t| t.scale).collect();
        scales.dedup();
        scales
    }

    /// Value by the defining formula.
    pub fn value(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.target_dim];
        for n in self.distinct_scales() {
            for z in active_scaled_lattice(n, x) {
                if let Some(idx) = self.term_index(n, &z) {
                    let t = &self.terms[idx];
                    let h = scaled_partition_value(n, &z, x)?;
                    if h == 0.0 {
                        continue;
                    }
                    let shifted: Vec<f64> = x
                        .iter()
                        .zip(t.center())
                        .map(|(&xi, ci)| xi - ci)
                        .collect();
                    let p = t.poly.eval(&shifted);
                    for (o, v) in out.iter_mut().zip(&p) {
                        *o += h * v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exact derivatives of the closed form at `x`, up to order `k`;
    /// the zero jet outside the union of term supports.
    pub fn jet(&self, x: &[f64], k: usize) -> Result<Jet> {
        if k > MAX_ORDER {
            return Err(Error::Precondition(format!(
                "jet order {k} exceeds supported maximum {MAX_ORDER}"
            )));
        }
        let mut acc = Jet::zero(x.to_vec(), k, self.target_dim);
        for n in self.distinct_scales() {
            for z in active_scaled_lattice(n, x) {
                if let Some(idx) = self.term_index(n, &z) {
                    let t = &self.terms[idx];
                    let h_jet = scaled_partition_jet(n, &z, x, k)?;
                    let shifted: Vec<f64> = x
                        .iter()
                        .zip(t.center())
                        .map(|(&xi, ci)| xi - ci)
                        .collect();
                    let p_jet = t.poly.jet_at(&shifted, k);
                    // translate the polynomial jet's base point back to x
                    let term_jet = Jet::leibniz(&h_jet, &p_jet);
                    acc = acc.linear_combination(1.0, &term_jet, 1.0);
                }
            }
        }
        Ok(acc)
    }

    /// Exact set inclusion: is every term support cube contained in `region`?
    /// Certified from term geometry, not sampling.
    pub fn support_within(&self, region: &BoxUnion) -> bool {
        self.terms
            .iter()
            .all(|t| region.covers_closed_box(&t.support_cube()))
    }

    /// Drop terms whose polynomial is identically zero; the remaining
    /// support cubes carry the actual support of the function.
    pub fn pruned(&self) -> SmoothedFunction {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.poly.coeffs().values().any(|c| c.iter().any(|&v| v != 0.0)))
            .cloned()
            .collect();
        SmoothedFunction {
            dim: self.dim,
            target_dim: self.target_dim,
            ell: self.ell,
            terms,
            domain: self.domain.clone(),
        }
    }

    /// Scale all polynomials by `s` (the terms keep their geometry).
    pub fn scaled(&self, s: f64) -> SmoothedFunction {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                scale: t.scale,
                z: t.z.clone(),
                poly: t.poly.scale(s),
            })
            .collect();
        SmoothedFunction {
            dim: self.dim,
            target_dim: self.target_dim,
            ell: self.ell,
            terms,
            domain: self.domain.clone(),
        }
    }

    /// Serialize to the interchange schema
    /// `{ell, m, d, terms: [{n, z, coeffs: {"a1,a2,..": [floats]}}]}`
    /// with terms ordered lexicographically in `(n, z)`.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|t| {
                let coeffs: serde_json::Map<String, serde_json::Value> = t
                    .poly
                    .coeffs()
                    .iter()
                    .map(|(a, c)| (a.to_string(), serde_json::json!(c)))
                    .collect();
                serde_json::json!({
                    "n": t.scale,
                    "z": t.z,
                    "coeffs": coeffs,
                })
            })
            .collect();
        serde_json::json!({
            "ell": self.ell,
            "m": self.target_dim,
            "d": self.dim,
            "terms": terms,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SmoothedFunction> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Config("smoothed function: expected object".into()))?;
        let ell = obj
            .get("ell")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Config("missing field `ell`".into()))? as usize;
        let m = obj
            .get("m")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Config("missing field `m`".into()))? as usize;
        let d = obj
            .get("d")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Config("missing field `d`".into()))? as usize;
        let mut terms = Vec::new();
        for t in obj
            .get("terms")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Config("missing field `terms`".into()))?
        {
            let scale = t
                .get("n")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| Error::Config("term missing `n`".into()))? as u32;
            let z: Vec<i64> = t
                .get("z")
                .and_then(|x| x.as_array())
                .ok_or_else(|| Error::Config("term missing `z`".into()))?
                .iter()
                .map(|zi| zi.as_i64().ok_or_else(|| Error::Config("bad z entry".into())))
                .collect::<Result<_>>()?;
            let mut coeffs = BTreeMap::new();
            for (key, val) in t
                .get("coeffs")
                .and_then(|x| x.as_object())
                .ok_or_else(|| Error::Config("term missing `coeffs`".into()))?
            {
                let alpha: MultiIndex = key
                    .parse()
                    .map_err(|_| Error::Config(format!("bad multi-index key `{key}`")))?;
                let c: Vec<f64> = val
                    .as_array()
                    .ok_or_else(|| Error::Config("coefficient must be an array".into()))?
                    .iter()
                    .map(|x| x.as_f64().ok_or_else(|| Error::Config("bad float".into())))
                    .collect::<Result<_>>()?;
                coeffs.insert(alpha, c);
            }
            terms.push(Term {
                scale,
                z,
                poly: PolynomialMap::new(d, m, ell, coeffs)?,
            });
        }
        Ok(SmoothedFunction::new(
            d,
            m,
            ell,
            terms,
            BoxUnion::full_space(d),
        ))
    }
}

impl JetProvider for SmoothedFunction {
    fn dim(&self) -> usize {
        self.dim
    }
    fn target_dim(&self) -> usize {
        self.target_dim
    }
    fn order(&self) -> usize {
        MAX_ORDER // the blend is C^infinity; jets available to the cap
    }
    fn domain(&self) -> &BoxUnion {
        &self.domain
    }
    fn jet(&self, x: &[f64], k: usize) -> Result<Jet> {
        SmoothedFunction::jet(self, x, k)
    }
}

/// Build `S~_n(γ)` over the window: one term per `z ∈ Φ_n(window)`, with
/// `poly = P^l_{z/n}(γ)`. Linear in `γ`.
pub fn build_stilde(
    gamma: &dyn JetProvider,
    ell: usize,
    n: u32,
    omega: &BoxUnion,
    window: &BoxUnion,
) -> Result<SmoothedFunction> {
    if n == 0 {
        return Err(Error::Precondition("scale n must be >= 1".into()));
    }
    if ell > gamma.order() {
        return Err(Error::Precondition(format!(
            "provider supplies order {} but l = {ell} requested",
            gamma.order()
        )));
    }
    if gamma.dim() != omega.dim() || gamma.dim() != window.dim() {
        return Err(Error::Precondition("dimension mismatch".into()));
    }
    let zs = lattice_sets(n, omega, Some(window))?;
    let nf = n as f64;
    let mut terms = Vec::with_capacity(zs.len());
    for z in zs {
        let center: Vec<f64> = z.iter().map(|&zi| zi as f64 / nf).collect();
        let jet = gamma.jet(&center, ell)?;
        let poly = taylor_polynomial(&jet, ell)?;
        terms.push(Term { scale: n, z, poly });
    }
    Ok(SmoothedFunction::new(
        gamma.dim(),
        gamma.target_dim(),
        ell,
        terms,
        omega.clone(),
    ))
}

/// Lattice points whose bump touches the window but whose cube escapes Ω.
/// Where these exist the partition of unity is incomplete (the function is
/// still the exact lattice sum; constants are only reproduced at points
/// `dist_inf(x, ∂Ω) ≥ 2/n`). The CLI surfaces them as a warning.
pub fn missing_cubes(n: u32, omega: &BoxUnion, window: &BoxUnion) -> Result<Vec<Vec<i64>>> {
    let bound = window.bounding_box()?;
    let d = bound.dim();
    let nf = n as f64;
    let lo: Vec<i64> = bound.lo.iter().map(|&l| (nf * l - 1.0).floor() as i64).collect();
    let hi: Vec<i64> = bound.hi.iter().map(|&h| (nf * h + 1.0).ceil() as i64).collect();
    let mut out = Vec::new();
    let mut z = lo.clone();
    loop {
        let center: Vec<f64> = z.iter().map(|&zi| zi as f64 / nf).collect();
        let touches = window.intersects_open_box(&AxisBox::cube(&center, 1.0 / nf));
        if touches && !cube_in_domain(&z, n, omega) {
            out.push(z.clone());
        }
        let mut pos = 0;
        loop {
            if pos == d {
                out.sort();
                return Ok(out);
            }
            z[pos] += 1;
            if z[pos] <= hi[pos] {
                break;
            }
            z[pos] = lo[pos];
            pos += 1;
        }
    }
}

/// Build the compactly supported stage operator `S_j(γ)` over an exhaustion:
/// terms at scale `m_j` whose support meets `K_j`. The support is contained
/// in `interior(K_{j+1})` by the margin invariant; `support_within` checks
/// this exactly.
pub fn build_sn(
    gamma: &dyn JetProvider,
    ell: usize,
    exhaustion: &Exhaustion,
    stage: usize,
) -> Result<SmoothedFunction> {
    let st = exhaustion.stage(stage)?;
    // the support certificate needs the next stage to exist
    exhaustion.stage(stage + 1)?;
    build_stilde(gamma, ell, st.scale, &exhaustion.omega, &st.set)
}

/// Smooth monotone collar: 0 on `[0, 1/4]`, 1 on `[3/4, 1]`, in between the
/// normalized integral of the bump profile.
pub fn collar(s: f64) -> f64 {
    const EPS: f64 = 0.25;
    if s <= EPS {
        return 0.0;
    }
    if s >= 1.0 - EPS {
        return 1.0;
    }
    let u = (s - EPS) / (1.0 - 2.0 * EPS);
    bump_integral(u) / bump_integral(1.0)
}

/// `∫_0^u g(2v-1) dv` by composite Simpson (deterministic).
fn bump_integral(u: f64) -> f64 {
    let n = 2048usize;
    let h = u / n as f64;
    let f = |v: f64| profile_value(2.0 * v - 1.0);
    let mut acc = f(0.0) + f(u);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h);
    }
    acc * h / 3.0
}

/// Scale/parameter schedule for the interpolated family:
/// `t_j = 2^{1-j}` and doubling scales `n_j = 2^{j+1}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Schedule {
    pub t: Vec<f64>,
    pub n: Vec<u32>,
}

impl Schedule {
    pub fn doubling(depth: usize) -> Self {
        let t = (1..=depth).map(|j| 2f64.powi(1 - j as i32)).collect();
        let n = (1..=depth).map(|j| 2u32.pow(j as u32 + 1)).collect();
        Schedule { t, n }
    }

    pub fn depth(&self) -> usize {
        self.t.len()
    }
}

/// The interpolated family `S_t` (t ∈ (0, 1]):
/// `S_t = H_{j+1} + ρ((t - t_{j+1})/(t_j - t_{j+1})) (H_j - H_{j+1})`
/// on `(t_{j+1}, t_j]`, where `H_j` is `build_stilde` at scale `n_j`.
/// At `t = t_j` the output is exactly `H_j`; near the collar ends it is
/// locally constant in `t`.
pub fn interpolated(
    gamma: &dyn JetProvider,
    ell: usize,
    omega: &BoxUnion,
    window: &BoxUnion,
    t: f64,
    schedule: &Schedule,
) -> Result<SmoothedFunction> {
    if !(t > 0.0) {
        return Err(Error::Precondition(
            "t must be in (0, 1]; S_0 is the identity and is handled by the caller".into(),
        ));
    }
    if t > schedule.t[0] {
        return Err(Error::Precondition(format!(
            "t = {t} above the schedule start t_1 = {}",
            schedule.t[0]
        )));
    }
    let depth = schedule.depth();
    if t < schedule.t[depth - 1] {
        return Err(Error::Precondition(format!(
            "t = {t} below the realized schedule tail t_{depth} = {}; deepen the schedule",
            schedule.t[depth - 1]
        )));
    }
    // find j with t in (t_{j+1}, t_j]
    let mut j = 0;
    while j + 1 < depth && t <= schedule.t[j + 1] {
        j += 1;
    }
    if j + 1 >= depth || t == schedule.t[j] {
        // exactly on a knot (or the tail): the family equals H_j there
        return build_stilde(gamma, ell, schedule.n[j], omega, window);
    }
    let s = (t - schedule.t[j + 1]) / (schedule.t[j] - schedule.t[j + 1]);
    let rho = collar(s);
    if rho == 1.0 {
        return build_stilde(gamma, ell, schedule.n[j], omega, window);
    }
    let low = build_stilde(gamma, ell, schedule.n[j + 1], omega, window)?;
    if rho == 0.0 {
        return Ok(low);
    }
    let high = build_stilde(gamma, ell, schedule.n[j], omega, window)?;
    // termwise convex combination; terms at distinct scales concatenate
    let mut terms = high.scaled(rho).terms;
    terms.extend(low.scaled(1.0 - rho).terms);
    Ok(SmoothedFunction::new(
        gamma.dim(),
        gamma.target_dim(),
        ell,
        terms,
        omega.clone(),
    ))
}

/// Smoothing on the closed unit cube: extend across all faces by axis
/// reflections, smooth on all of `R^d`, restrict back to the cube. The
/// output is `C^infinity` on the cube, and exact for polynomials of degree
/// ≤ l once every Taylor base point lands in the pure-reflection collar
/// (`n ≥ 8 (l+1)` with the default nodes).
pub fn cube_smoothing(
    gamma: &Arc<dyn JetProvider>,
    ell: usize,
    n: u32,
) -> Result<SmoothedFunction> {
    let d = gamma.dim();
    let extended = crate::extension::extend_cube(gamma, ell)?;
    let omega = BoxUnion::full_space(d);
    let margin = 2.0 / n as f64;
    let window = BoxUnion::closed_box(vec![-margin; d], vec![1.0 + margin; d]);
    let mut sf = build_stilde(&extended, ell, n, &omega, &window)?;
    sf.domain = BoxUnion::closed_box(vec![0.0; d], vec![1.0; d]);
    Ok(sf)
}

/// Rank factorization `S = Σ_i v_i ⊗ φ_i` of a smoothed function: the
/// witness that the image spans a finite-dimensional subspace of `R^m`.
#[derive(Debug, Clone)]
pub struct TensorWitness {
    pub rank: usize,
    pub vectors: Vec<Vec<f64>>,
    pub scalars: Vec<SmoothedFunction>,
}

impl TensorWitness {
    /// Reconstruct `S(x) = Σ_i v_i φ_i(x)`.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        let m = self.vectors.first().map(|v| v.len()).unwrap_or(0);
        let mut out = vec![0.0; m];
        for (v, phi) in self.vectors.iter().zip(&self.scalars) {
            let s = phi.value(x)?[0];
            for (o, vi) in out.iter_mut().zip(v) {
                *o += s * vi;
            }
        }
        Ok(out)
    }
}

/// Factor the coefficient matrix by modified Gram-Schmidt over the value
/// space `R^m`: rank ≤ min(m, #coefficients), and the scalar parts reuse the
/// term geometry.
pub fn tensor_witness(s: &SmoothedFunction) -> TensorWitness {
    let m = s.target_dim;
    // orthonormal basis of the span of all coefficient vectors
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut max_norm = 0.0f64;
    let columns: Vec<&Vec<f64>> = s
        .terms
        .iter()
        .flat_map(|t| t.poly.coeffs().values())
        .collect();
    for c in &columns {
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        max_norm = max_norm.max(norm);
    }
    for c in &columns {
        if basis.len() == m {
            break;
        }
        let mut v: Vec<f64> = (*c).clone();
        for u in &basis {
            let dot: f64 = u.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= dot * ui;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 * max_norm.max(1e-300) {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            basis.push(v);
        }
    }
    let rank = basis.len();
    let scalars = basis
        .iter()
        .map(|u| {
            let terms = s
                .terms
                .iter()
                .map(|t| {
                    let coeffs: BTreeMap<MultiIndex, Vec<f64>> = t
                        .poly
                        .coeffs()
                        .iter()
                        .map(|(a, c)| {
                            let lam: f64 = u.iter().zip(c).map(|(x, y)| x * y).sum();
                            (a.clone(), vec![lam])
                        })
                        .collect();
                    Term {
                        scale: t.scale,
                        z: t.z.clone(),
                        poly: PolynomialMap::new(s.dim, 1, s.ell, coeffs)
                            .expect("projected coefficients are finite"),
                    }
                })
                .collect();
            SmoothedFunction::new(s.dim, 1, s.ell, terms, s.domain.clone())
        })
        .collect();
    TensorWitness {
        rank,
        vectors: basis,
        scalars,
    }
}
