//! Extension operators: finite-order axis reflections (Hestenes/Seeley
//! style) with a smooth cutoff, composed per axis for corners and cubes;
//! projection retraction onto a slice; componentwise vector lifting.
//!
//! Across a flat face the extension is
//!
//! ```text
//! E(γ)(t, y) = γ(t, y)                        for t ≥ 0
//! E(γ)(t, y) = χ(-t) Σ_k a_k γ(-b_k t, y)     for t < 0
//! ```
//!
//! with nodes `b_0 < ... < b_l` and weights solving
//! `Σ_k a_k (-b_k)^i = 1` for `i = 0..l`, which matches one-sided
//! derivatives up to order `l`. The cutoff `χ` is 1 on `[0, 1/(4 b_l)]` and
//! vanishes beyond `1/(2 b_l)`, so reflected arguments never leave `[0, 1]`
//! wherever `χ ≠ 0`. Outside the cutoff's reach the extension is zero by
//! construction; its far-field values are irrelevant to every stated
//! property of the operator.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bump::{profile_series, profile_value};
use crate::calculus::jet::Jet;
use crate::calculus::multi_index::{multi_indices, MultiIndex};
use crate::calculus::series::Series;
use crate::domains::BoxUnion;
use crate::error::{Error, Result};
use crate::provider::{ComponentProvider, JetProvider, StackProvider};

/// Solve `Σ_k a_k (-b_k)^i = 1` for `i = 0..l` by Gaussian elimination with
/// partial pivoting. Nodes must be positive, distinct, and `l+1` many.
pub fn solve_axis_weights(ell: usize, nodes: &[f64]) -> Result<Vec<f64>> {
    if nodes.len() != ell + 1 {
        return Err(Error::Precondition(format!(
            "need {} nodes for order {ell}, got {}",
            ell + 1,
            nodes.len()
        )));
    }
    if nodes.iter().any(|&b| b <= 0.0) {
        return Err(Error::Precondition("nodes must be positive".into()));
    }
    let n = ell + 1;
    let mut a = vec![vec![0.0f64; n + 1]; n];
    for (i, row) in a.iter_mut().enumerate() {
        for (k, &b) in nodes.iter().enumerate() {
            row[k] = (-b).powi(i as i32);
        }
        row[n] = 1.0;
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r1, &r2| a[r1][col].abs().partial_cmp(&a[r2][col].abs()).unwrap())
            .unwrap();
        if a[pivot][col].abs() < 1e-12 {
            return Err(Error::Precondition(
                "near-singular Vandermonde system (duplicate nodes?)".into(),
            ));
        }
        a.swap(col, pivot);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            for j in col..=n {
                a[row][j] -= f * a[col][j];
            }
        }
    }
    let mut x = vec![0.0f64; n];
    for row in (0..n).rev() {
        let mut acc = a[row][n];
        for j in (row + 1)..n {
            acc -= a[row][j] * x[j];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// Residuals `|Σ_k a_k (-b_k)^i - 1|` for `i = 0..l`.
pub fn weight_residuals(nodes: &[f64], weights: &[f64]) -> Vec<f64> {
    (0..nodes.len())
        .map(|i| {
            let s: f64 = nodes
                .iter()
                .zip(weights)
                .map(|(&b, &a)| a * (-b).powi(i as i32))
                .sum();
            (s - 1.0).abs()
        })
        .collect()
}

/// Smooth cutoff: `χ ≡ 1` on `[0, lo]`, `supp χ ⊆ [0, hi]`, with the
/// transition built from the normalized bump integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub lo: f64,
    pub hi: f64,
}

impl Cutoff {
    fn unit_integral(u: f64) -> f64 {
        // ∫_0^u g(2v-1) dv, composite Simpson
        let n = 2048usize;
        let h = u / n as f64;
        let f = |v: f64| profile_value(2.0 * v - 1.0);
        let mut acc = f(0.0) + f(u);
        for i in 1..n {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        acc * h / 3.0
    }

    pub fn value(&self, s: f64) -> f64 {
        if s <= self.lo {
            1.0
        } else if s >= self.hi {
            0.0
        } else {
            let u = (self.hi - s) / (self.hi - self.lo);
            Self::unit_integral(u) / Self::unit_integral(1.0)
        }
    }

    /// Taylor series of `χ` at `s` (order `k`). In the transition region the
    /// value comes from quadrature; all derivative entries are exact series
    /// of the bump profile.
    pub fn series(&self, s: f64, k: usize) -> Series {
        if s <= self.lo {
            return Series::constant(1.0, k);
        }
        if s >= self.hi {
            return Series::constant(0.0, k);
        }
        let width = self.hi - self.lo;
        let u = (self.hi - s) / width;
        let norm = Self::unit_integral(1.0);
        let mut coeffs = vec![0.0; k + 1];
        coeffs[0] = Self::unit_integral(u) / norm;
        if k >= 1 {
            // χ^(i)(s) = (-1/width)^i ĝ^(i-1)(u) / norm, ĝ(v) = g(2v - 1)
            let g = profile_series(2.0 * u - 1.0, k.saturating_sub(1));
            for i in 1..=k {
                let ghat = g.derivative(i - 1) * 2f64.powi(i as i32 - 1);
                let chain = (-1.0 / width).powi(i as i32);
                coeffs[i] =
                    chain * ghat / (norm * crate::calculus::multi_index::factorial(i));
            }
        }
        Series::from_coeffs(coeffs)
    }
}

/// Reflection data for one axis: order, nodes, weights, cutoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisExtension {
    pub ell: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub cutoff: Cutoff,
}

impl AxisExtension {
    /// Default nodes `b_k = k + 1`.
    pub fn with_default_nodes(ell: usize) -> Result<Self> {
        let nodes: Vec<f64> = (0..=ell).map(|k| (k + 1) as f64).collect();
        AxisExtension::with_nodes(ell, nodes)
    }

    pub fn with_nodes(ell: usize, nodes: Vec<f64>) -> Result<Self> {
        let weights = solve_axis_weights(ell, &nodes)?;
        let b_max = nodes.iter().fold(0.0f64, |m, &b| m.max(b));
        let cutoff = Cutoff {
            lo: 1.0 / (4.0 * b_max),
            hi: 1.0 / (2.0 * b_max),
        };
        let ext = AxisExtension {
            ell,
            nodes,
            weights,
            cutoff,
        };
        let max_residual = weight_residuals(&ext.nodes, &ext.weights)
            .into_iter()
            .fold(0.0f64, f64::max);
        if max_residual > 1e-9 {
            return Err(Error::InternalInvariant(format!(
                "Vandermonde residual {max_residual:.3e} exceeds 1e-9"
            )));
        }
        Ok(ext)
    }

    /// Replace the weights (deliberate-fault injection for the harness).
    pub fn with_perturbed_weight(mut self, index: usize, delta: f64) -> Self {
        self.weights[index] += delta;
        self
    }
}

/// Which faces of an axis get extended by reflection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisFaces {
    /// reflect below 0
    pub lower: bool,
    /// reflect above this coordinate (the cube uses 1)
    pub upper: Option<f64>,
}

impl AxisFaces {
    pub const NONE: AxisFaces = AxisFaces {
        lower: false,
        upper: None,
    };
}

/// Axis-by-axis reflection extension of a source function; the restriction
/// to the source domain reproduces the source exactly (the in-range branch
/// forwards to it untouched).
pub struct ReflectionExtension {
    source: Arc<dyn JetProvider>,
    ell: usize,
    faces: Vec<AxisFaces>,
    axis_ext: AxisExtension,
    ambient: BoxUnion,
}

impl ReflectionExtension {
    pub fn new(
        source: Arc<dyn JetProvider>,
        ell: usize,
        faces: Vec<AxisFaces>,
        axis_ext: AxisExtension,
    ) -> Result<Self> {
        if ell > source.order() {
            return Err(Error::Precondition(format!(
                "source supplies order {} but l = {ell} requested",
                source.order()
            )));
        }
        if faces.len() != source.dim() {
            return Err(Error::Precondition("faces must cover every axis".into()));
        }
        let ambient = BoxUnion::full_space(source.dim());
        Ok(ReflectionExtension {
            source,
            ell,
            faces,
            axis_ext,
            ambient,
        })
    }

    pub fn axis_extension(&self) -> &AxisExtension {
        &self.axis_ext
    }

    /// Process axes outermost-first; the source is reached when every axis
    /// coordinate is inside its face interval.
    fn jet_rec(&self, x: &mut Vec<f64>, axis: usize, k: usize) -> Result<Jet> {
        if axis == 0 {
            return self.source.jet(x, k);
        }
        let a = axis - 1;
        let faces = self.faces[a];
        let t = x[a];
        let below = faces.lower && t < 0.0;
        let above = faces.upper.is_some_and(|c| t > c);
        if !below && !above {
            return self.jet_rec(x, a, k);
        }
        let m = self.source.target_dim();
        let (s, face_at) = if below {
            (-t, 0.0)
        } else {
            let c = faces.upper.unwrap();
            (t - c, c)
        };
        if s >= self.axis_ext.cutoff.hi {
            return Ok(Jet::zero(x.clone(), k, m));
        }
        // Σ_k a_k γ(..., face_at - b_k (t - face_at), ...) with axis
        // derivatives scaled by (-b_k)^j
        let mut sum = Jet::zero(x.clone(), k, m);
        for (&b, &w) in self.axis_ext.nodes.iter().zip(&self.axis_ext.weights) {
            let reflected = face_at - b * (t - face_at);
            let saved = x[a];
            x[a] = reflected;
            let inner = self.jet_rec(x, a, k)?;
            x[a] = saved;
            let transformed = reflect_axis_jet(&inner, x, a, -b);
            sum = sum.linear_combination(1.0, &transformed, w);
        }
        // Leibniz with the cutoff jet χ(±(t - face_at)) along this axis
        let chi = self.axis_ext.cutoff.series(s, k);
        let sign: f64 = if below { -1.0 } else { 1.0 };
        let chi_jet = univariate_scalar_jet(x, a, k, |i| {
            chi.derivative(i) * sign.powi(i as i32)
        });
        Ok(Jet::leibniz(&chi_jet, &sum))
    }
}

/// Re-base a jet taken at a reflected point: derivative entries pick up the
/// chain factor `scale^{α_a}` and the base point becomes `x`.
fn reflect_axis_jet(inner: &Jet, x: &[f64], axis: usize, scale: f64) -> Jet {
    let mut table = std::collections::BTreeMap::new();
    for (alpha, v) in inner.iter() {
        let f = scale.powi(alpha.entry(axis) as i32);
        table.insert(alpha.clone(), v.iter().map(|c| f * c).collect());
    }
    Jet::new(x.to_vec(), inner.order(), table).expect("reflected jet stays total and finite")
}

/// Scalar jet at `x` living on a single axis: entry at `α = i e_axis` is
/// `deriv(i)`, all mixed entries zero.
fn univariate_scalar_jet(x: &[f64], axis: usize, k: usize, deriv: impl Fn(usize) -> f64) -> Jet {
    let d = x.len();
    let mut table = std::collections::BTreeMap::new();
    for alpha in multi_indices(d, k) {
        let on_axis = alpha.order() == alpha.entry(axis);
        let v = if on_axis { deriv(alpha.entry(axis)) } else { 0.0 };
        table.insert(alpha, vec![v]);
    }
    Jet::new(x.to_vec(), k, table).expect("cutoff jet is total and finite")
}

impl JetProvider for ReflectionExtension {
    fn dim(&self) -> usize {
        self.source.dim()
    }
    fn target_dim(&self) -> usize {
        self.source.target_dim()
    }
    fn order(&self) -> usize {
        self.ell
    }
    fn domain(&self) -> &BoxUnion {
        &self.ambient
    }
    fn jet(&self, x: &[f64], k: usize) -> Result<Jet> {
        if k > self.ell {
            return Err(Error::Precondition(format!(
                "jet order {k} exceeds extension order {}",
                self.ell
            )));
        }
        let mut x = x.to_vec();
        let axes = self.faces.len();
        self.jet_rec(&mut x, axes, k)
    }
}

/// Extend across the single face `x_axis = 0` of a half-space source.
pub fn extend_halfspace(
    gamma: &Arc<dyn JetProvider>,
    axis: usize,
    ell: usize,
) -> Result<ReflectionExtension> {
    let mut faces = vec![AxisFaces::NONE; gamma.dim()];
    faces[axis] = AxisFaces {
        lower: true,
        upper: None,
    };
    ReflectionExtension::new(
        gamma.clone(),
        ell,
        faces,
        AxisExtension::with_default_nodes(ell)?,
    )
}

/// Extend the corner `[0,∞)^m × R^{d-m}`: the first `m` axes reflect at 0,
/// composed in fixed axis order.
pub fn extend_corner(
    gamma: &Arc<dyn JetProvider>,
    m: usize,
    ell: usize,
) -> Result<ReflectionExtension> {
    let mut faces = vec![AxisFaces::NONE; gamma.dim()];
    for face in faces.iter_mut().take(m) {
        face.lower = true;
    }
    ReflectionExtension::new(
        gamma.clone(),
        ell,
        faces,
        AxisExtension::with_default_nodes(ell)?,
    )
}

/// Extend the unit cube `[0,1]^d` to all of `R^d`: every axis reflects below
/// 0 and above 1; on `(0,1)` both branches equal the source, so the gluing
/// is exact.
pub fn extend_cube(gamma: &Arc<dyn JetProvider>, ell: usize) -> Result<ReflectionExtension> {
    let d = gamma.dim();
    let faces = vec![
        AxisFaces {
            lower: true,
            upper: Some(1.0),
        };
        d
    ];
    ReflectionExtension::new(
        gamma.clone(),
        ell,
        faces,
        AxisExtension::with_default_nodes(ell)?,
    )
}

/// Extension by coordinate projection: the source lives on the slice
/// `R^{d1} × {c}` and `E(γ)(x, y) = γ(x)`; every derivative in a `y`
/// direction vanishes identically.
pub struct ProjectionExtension {
    source: Arc<dyn JetProvider>,
    fixed: Vec<f64>,
    ambient: BoxUnion,
}

impl ProjectionExtension {
    pub fn new(source: Arc<dyn JetProvider>, fixed: Vec<f64>) -> Self {
        let ambient = BoxUnion::full_space(source.dim() + fixed.len());
        ProjectionExtension {
            source,
            fixed,
            ambient,
        }
    }
}

impl JetProvider for ProjectionExtension {
    fn dim(&self) -> usize {
        self.source.dim() + self.fixed.len()
    }
    fn target_dim(&self) -> usize {
        self.source.target_dim()
    }
    fn order(&self) -> usize {
        self.source.order()
    }
    fn domain(&self) -> &BoxUnion {
        &self.ambient
    }
    fn jet(&self, x: &[f64], k: usize) -> Result<Jet> {
        let d1 = self.source.dim();
        let inner = self.source.jet(&x[..d1], k)?;
        let d = self.dim();
        let m = self.target_dim();
        let mut table = std::collections::BTreeMap::new();
        for alpha in multi_indices(d, k) {
            let slice_part = MultiIndex::new(alpha.entries()[..d1].to_vec());
            let pure_slice = alpha.order() == slice_part.order();
            let v = if pure_slice {
                inner.partial(&slice_part)
            } else {
                vec![0.0; m]
            };
            table.insert(alpha, v);
        }
        Jet::new(x.to_vec(), k, table)
    }
}

/// Apply a scalar extension operator to each of the `m` components of a
/// vector-valued function and reassemble. For rank-one inputs `γ ⊗ v` this
/// agrees with scaling the scalar extension by `v`.
pub fn lift_componentwise<F>(
    scalar_op: F,
    gamma: Arc<dyn JetProvider>,
) -> Result<Arc<dyn JetProvider>>
where
    F: Fn(Arc<dyn JetProvider>) -> Result<Arc<dyn JetProvider>>,
{
    let m = gamma.target_dim();
    let mut components: Vec<Arc<dyn JetProvider>> = Vec::with_capacity(m);
    for i in 0..m {
        let view: Arc<dyn JetProvider> = Arc::new(ComponentProvider {
            source: gamma.clone(),
            component: i,
        });
        components.push(scalar_op(view)?);
    }
    Ok(Arc::new(StackProvider { components }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ExprFunction;
    use approx::assert_abs_diff_eq;

    fn halfspace_source(texts: &[&str], d: usize) -> Arc<dyn JetProvider> {
        let mut lo = vec![f64::NEG_INFINITY; d];
        lo[0] = 0.0;
        let domain = BoxUnion {
            boxes: vec![crate::domains::AxisBox::new(lo, vec![f64::INFINITY; d])],
            open: false,
        };
        Arc::new(ExprFunction::parse_components(texts, d, domain).unwrap())
    }

    fn cube_source(texts: &[&str], d: usize) -> Arc<dyn JetProvider> {
        let domain = BoxUnion::closed_box(vec![0.0; d], vec![1.0; d]);
        Arc::new(ExprFunction::parse_components(texts, d, domain).unwrap())
    }

    #[test]
    fn weights_for_low_orders() {
        // l = 0: even reflection
        assert_eq!(solve_axis_weights(0, &[1.0]).unwrap(), vec![1.0]);
        // l = 1, b = (1,2): a = (3, -2); oracle: solve the 2x2 system by hand
        let w = solve_axis_weights(1, &[1.0, 2.0]).unwrap();
        assert_abs_diff_eq!(w[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], -2.0, epsilon = 1e-12);
    }

    #[test]
    fn residuals_small_up_to_order_four() {
        for ell in 0..=4 {
            let ext = AxisExtension::with_default_nodes(ell).unwrap();
            let worst = weight_residuals(&ext.nodes, &ext.weights)
                .into_iter()
                .fold(0.0f64, f64::max);
            assert!(worst <= 1e-9, "l = {ell}: residual {worst:.3e}");
        }
    }

    #[test]
    fn duplicate_nodes_rejected() {
        assert!(solve_axis_weights(1, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn linear_continuation_in_the_collar() {
        // γ(t) = t, l = 1, nodes (1,2): E(γ)(-0.1) = 3(0.1) - 2(0.2) = -0.1
        let gamma = halfspace_source(&["x1"], 1);
        let ext = extend_halfspace(&gamma, 0, 1).unwrap();
        // collar: χ ≡ 1 on [0, 1/8]
        let v = ext.value(&[-0.1]).unwrap()[0];
        assert_abs_diff_eq!(v, -0.1, epsilon = 1e-12);
    }

    #[test]
    fn constants_extended_in_the_collar() {
        let gamma = halfspace_source(&["4"], 1);
        let ext = extend_halfspace(&gamma, 0, 0).unwrap();
        // l = 0: collar is [0, 1/4]
        let v = ext.value(&[-0.2]).unwrap()[0];
        assert_abs_diff_eq!(v, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn far_field_is_zero() {
        let gamma = halfspace_source(&["1"], 1);
        let ext = extend_halfspace(&gamma, 0, 0).unwrap();
        // reach is 1/2 for l = 0; beyond it the extension vanishes
        assert_eq!(ext.value(&[-0.6]).unwrap()[0], 0.0);
    }

    #[test]
    fn restriction_is_identity() {
        let gamma = cube_source(&["exp(x1)*cos(x2)"], 2);
        let ext = extend_cube(&gamma, 1).unwrap();
        for x in [[0.0, 0.0], [0.5, 0.25], [1.0, 1.0], [0.0, 0.77]] {
            let a = ext.value(&x).unwrap()[0];
            let b = gamma.value(&x).unwrap()[0];
            assert_eq!(a, b);
        }
    }

    #[test]
    fn cube_linear_continuation() {
        // γ = x1 + x2 on [0,1]^2, l = 1, at (-0.05, 0.5) -> 0.45
        let gamma = cube_source(&["x1+x2"], 2);
        let ext = extend_cube(&gamma, 1).unwrap();
        let v = ext.value(&[-0.05, 0.5]).unwrap()[0];
        assert_abs_diff_eq!(v, 0.45, epsilon = 1e-12);
        // linearity of the whole pipeline
        let gamma2 = cube_source(&["2*x1+2*x2"], 2);
        let ext2 = extend_cube(&gamma2, 1).unwrap();
        for x in [[-0.05, 0.3], [0.4, 1.04], [-0.03, -0.02]] {
            assert_abs_diff_eq!(
                2.0 * ext.value(&x).unwrap()[0],
                ext2.value(&x).unwrap()[0],
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn one_sided_jets_match_across_face() {
        // exact jets just inside and just outside the face agree to O(h)
        let gamma = halfspace_source(&["exp(x1)"], 1);
        let ell = 2;
        let ext = extend_halfspace(&gamma, 0, ell).unwrap();
        let h = 1e-6;
        let plus = ext.jet(&[h], ell).unwrap();
        let minus = ext.jet(&[-h], ell).unwrap();
        for alpha in multi_indices(1, ell) {
            let a = plus.partial(&alpha)[0];
            let b = minus.partial(&alpha)[0];
            let scale = a.abs().max(1.0);
            assert!(
                (a - b).abs() / scale < 1e-4,
                "order {}: {a} vs {b}",
                alpha.order()
            );
        }
    }

    #[test]
    fn perturbed_weight_breaks_face_smoothness() {
        // deliberate fault: the derivative match fails once a weight is off
        let gamma = halfspace_source(&["exp(x1)"], 1);
        let ell = 1;
        let ax = AxisExtension::with_default_nodes(ell)
            .unwrap()
            .with_perturbed_weight(0, 1e-3);
        let mut faces = vec![AxisFaces::NONE; 1];
        faces[0].lower = true;
        let ext = ReflectionExtension::new(gamma, ell, faces, ax).unwrap();
        let h = 1e-5;
        let plus = ext.jet(&[h], ell).unwrap();
        let minus = ext.jet(&[-h], ell).unwrap();
        let a = plus.value()[0];
        let b = minus.value()[0];
        assert!((a - b).abs() / a.abs().max(1.0) > 1e-4);
    }

    #[test]
    fn projection_extension_flat_in_y() {
        let slice = {
            let domain = BoxUnion::full_space(1);
            Arc::new(ExprFunction::parse_components(&["sin(x1)"], 1, domain).unwrap())
                as Arc<dyn JetProvider>
        };
        let ext = ProjectionExtension::new(slice.clone(), vec![0.5]);
        // restriction to the slice is the identity
        let v = ext.value(&[0.3, 0.5]).unwrap()[0];
        assert_eq!(v, slice.value(&[0.3]).unwrap()[0]);
        // derivatives in the y direction vanish
        let j = ext.jet(&[0.3, 2.0], 2).unwrap();
        assert_eq!(j.partial(&MultiIndex::new(vec![0, 1]))[0], 0.0);
        assert_eq!(j.partial(&MultiIndex::new(vec![1, 1]))[0], 0.0);
        assert_eq!(j.partial(&MultiIndex::new(vec![0, 2]))[0], 0.0);
        // x derivatives carry over
        assert_abs_diff_eq!(
            j.partial(&MultiIndex::new(vec![1, 0]))[0],
            0.3f64.cos(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn projection_preserves_cl_seminorm() {
        // sampled seminorm equality: ||E(γ)||_{C^l, K x K'} = ||γ||_{C^l, K}
        use crate::calculus::seminorm::{seminorm_cl, SeminormSpec};
        use crate::domains::grid_points;
        let slice: Arc<dyn JetProvider> = Arc::new(
            ExprFunction::parse_components(&["sin(2*x1)"], 1, BoxUnion::full_space(1)).unwrap(),
        );
        let ext = ProjectionExtension::new(slice.clone(), vec![0.0]);
        let q = SeminormSpec::CoordinateMax;
        let k = crate::domains::AxisBox::new(vec![-1.0], vec![1.0]);
        let kk = crate::domains::AxisBox::new(vec![-1.0, -2.0], vec![1.0, 2.0]);
        let on_slice = seminorm_cl(slice.as_ref(), &grid_points(&k, 41), 2, &q).unwrap();
        let ambient = seminorm_cl(&ext, &grid_points(&kk, 41), 2, &q).unwrap();
        assert_abs_diff_eq!(on_slice, ambient, epsilon = 1e-12);
    }

    #[test]
    fn componentwise_lift_scalar_case_is_identity() {
        // m = 1: lifting is the scalar operator itself
        let gamma = halfspace_source(&["exp(x1)"], 1);
        let lifted = lift_componentwise(
            |g| extend_halfspace(&g, 0, 1).map(|e| Arc::new(e) as Arc<dyn JetProvider>),
            gamma.clone(),
        )
        .unwrap();
        let direct = extend_halfspace(&gamma, 0, 1).unwrap();
        for x in [-0.3, -0.1, 0.0, 0.8] {
            assert_eq!(lifted.value(&[x]).unwrap(), direct.value(&[x]).unwrap());
        }
    }

    #[test]
    fn componentwise_lift_matches_rank_one() {
        // rank-one input v * γ: lifting the scalar operator componentwise
        // equals scaling the scalar extension
        let gamma3 = halfspace_source(&["2*sin(x1)", "-1*sin(x1)", "0.5*sin(x1)"], 1);
        let lifted = lift_componentwise(
            |g| extend_halfspace(&g, 0, 1).map(|e| Arc::new(e) as Arc<dyn JetProvider>),
            gamma3,
        )
        .unwrap();
        let scalar = halfspace_source(&["sin(x1)"], 1);
        let ext = extend_halfspace(&scalar, 0, 1).unwrap();
        for x in [-0.12, -0.04, 0.3, 1.5] {
            let got = lifted.value(&[x]).unwrap();
            let base = ext.value(&[x]).unwrap()[0];
            assert_abs_diff_eq!(got[0], 2.0 * base, epsilon = 1e-12);
            assert_abs_diff_eq!(got[1], -base, epsilon = 1e-12);
            assert_abs_diff_eq!(got[2], 0.5 * base, epsilon = 1e-12);
        }
    }
}
