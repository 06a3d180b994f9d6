//! A Dugundji-style extension operator for continuous functions on closed
//! subsets of `R^d`, built from dyadic shells and the periodic bump
//! partition, with lazily resolved anchor points.
//!
//! For `x ∉ Y` the extension is a convex combination `Σ_j h_j(x) γ(y_j)` of
//! values at anchor points `y_j ∈ Y`. The weights come from two exact
//! partitions of unity multiplied together:
//!
//! * a radial blend over shell indices: `λ_n(x) = h_n(u)` with
//!   `u = -log2 d_Y(x)`, whose support is exactly the dyadic shell
//!   `d_Y(x) ∈ (2^{-n-1}, 2^{-n+1})`;
//! * per shell, the scaled lattice partition `p_{n,z}(x) = h_z(x / s_n)`
//!   with spacing `s_n = 2^{-n-1} / sqrt(d)`, whose member supports are open
//!   boxes of Euclidean diameter `2^{-n}`.
//!
//! Every used cell `(n, z)` resolves one anchor pair `(x(j), y(j))`: the
//! cell node, projected radially into the shell when necessary, and an exact
//! nearest point of `Y`. The strict bound `d(x(j), y(j)) < 2^{-n+1}` then
//! holds by construction and is checked at resolution time. The anchor cache
//! is insert-once; everything else is pure.

use std::collections::BTreeMap;
use std::sync::Mutex;

use crate::bump::{active_lattice, partition_value};
use crate::calculus::seminorm::SeminormSpec;
use crate::domains::{grid_points, BoxUnion, ClosedSet};
use crate::error::{Error, Result};
use crate::provider::JetProvider;

/// Value oracle: the minimal `C^0` contract the extension needs.
pub trait ValueOracle: Send + Sync {
    fn target_dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> Result<Vec<f64>>;
}

impl<T: JetProvider + ?Sized> ValueOracle for T {
    fn target_dim(&self) -> usize {
        JetProvider::target_dim(self)
    }
    fn value(&self, x: &[f64]) -> Result<Vec<f64>> {
        JetProvider::value(self, x)
    }
}

/// A resolved anchor pair for one cover cell.
#[derive(Debug, Clone)]
pub struct Anchor {
    /// shell index of the cell
    pub shell: i32,
    /// the cell point inside the shell
    pub x: Vec<f64>,
    /// an exact nearest point of `Y` to `x`
    pub y: Vec<f64>,
    /// `d(x, y)`, strictly below `2^{-shell+1}`
    pub distance: f64,
}

/// One weight contribution at a query point.
#[derive(Debug, Clone)]
pub struct WeightedAnchor {
    pub shell: i32,
    pub cell: Vec<i64>,
    pub weight: f64,
    pub anchor: Anchor,
}

/// Shell bookkeeping for one closed set `Y`.
pub struct ShellStructure {
    target: ClosedSet,
    dim: usize,
    shell_min: i32,
    shell_max: i32,
    anchors: Mutex<BTreeMap<(i32, Vec<i64>), Anchor>>,
}

impl ShellStructure {
    pub fn new(target: ClosedSet) -> Result<Self> {
        if target.is_empty() {
            return Err(Error::Geometry("Dugundji extension needs a nonempty Y".into()));
        }
        let dim = target.dim();
        Ok(ShellStructure {
            target,
            dim,
            shell_min: -30,
            shell_max: 40,
            anchors: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn target(&self) -> &ClosedSet {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn spacing(&self, shell: i32) -> f64 {
        2f64.powi(-shell - 1) / (self.dim as f64).sqrt()
    }

    /// Resolve (or fetch) the anchor pair of cell `(shell, z)`.
    fn anchor(&self, shell: i32, z: &[i64]) -> Result<Anchor> {
        if let Some(hit) = self.anchors.lock().unwrap().get(&(shell, z.to_vec())) {
            return Ok(hit.clone());
        }
        let s = self.spacing(shell);
        let node: Vec<f64> = z.iter().map(|&zi| zi as f64 * s).collect();
        let lo = 2f64.powi(-shell - 1);
        let hi = 2f64.powi(-shell + 1);
        let dc = self.target.distance(&node)?;
        let x_j = if dc > lo && dc < hi {
            node
        } else if dc == 0.0 {
            // the node lies in Y; it anchors to itself
            node
        } else {
            // project along the segment to the nearest point until the
            // distance is the shell midpoint 2^{-shell}; the projected point
            // has that exact distance by the 1-Lipschitz property
            let nearest = self.target.nearest_point(&node)?;
            let t_mid = 2f64.powi(-shell);
            let f = t_mid / dc;
            nearest
                .iter()
                .zip(&node)
                .map(|(&y, &c)| y + f * (c - y))
                .collect()
        };
        let y_j = self.target.nearest_point(&x_j)?;
        let distance = y_j
            .iter()
            .zip(&x_j)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if !(distance < hi) {
            return Err(Error::InternalInvariant(format!(
                "anchor bound failed for cell ({shell}, {z:?}): d = {distance} >= {hi}"
            )));
        }
        let anchor = Anchor {
            shell,
            x: x_j,
            y: y_j,
            distance,
        };
        let mut cache = self.anchors.lock().unwrap();
        let entry = cache
            .entry((shell, z.to_vec()))
            .or_insert(anchor);
        Ok(entry.clone())
    }

    /// Shell index and weight list at an off-`Y` point; the boolean flags a
    /// clamped (out of dyadic range) query.
    pub fn weights_at(&self, x: &[f64]) -> Result<(f64, i32, Vec<WeightedAnchor>, bool)> {
        let dist = self.target.distance(x)?;
        if dist <= 0.0 {
            return Err(Error::Precondition(
                "weights_at is defined off Y only".into(),
            ));
        }
        let u = -dist.log2();
        // radial blend over the at most two shells with |u - n| < 1
        let mut blend: BTreeMap<i32, f64> = BTreeMap::new();
        let mut clamped = false;
        for n in [u.floor() as i32, u.floor() as i32 + 1] {
            if (u - n as f64).abs() >= 1.0 {
                continue;
            }
            let lambda = partition_value(&[n as i64], &[u])?;
            if lambda == 0.0 {
                continue;
            }
            let nc = n.clamp(self.shell_min, self.shell_max);
            if nc != n {
                clamped = true;
            }
            *blend.entry(nc).or_insert(0.0) += lambda;
        }
        let mut out = Vec::new();
        let mut primary_shell = self.shell_min;
        let mut best_lambda = -1.0;
        for (&n, &lambda) in &blend {
            if lambda > best_lambda {
                best_lambda = lambda;
                primary_shell = n;
            }
            let s = self.spacing(n);
            let scaled: Vec<f64> = x.iter().map(|&xi| xi / s).collect();
            for z in active_lattice(&scaled) {
                let p = partition_value(&z, &scaled)?;
                if p == 0.0 {
                    continue;
                }
                let anchor = self.anchor(n, &z)?;
                out.push(WeightedAnchor {
                    shell: n,
                    cell: z,
                    weight: lambda * p,
                    anchor,
                });
            }
        }
        Ok((dist, primary_shell, out, clamped))
    }

    /// Evaluate the extension of `γ` at `x`: `γ(x)` on `Y`, otherwise the
    /// convex combination of anchor values.
    pub fn eval<G: ValueOracle + ?Sized>(&self, gamma: &G, x: &[f64]) -> Result<Vec<f64>> {
        let dist = self.target.distance(x)?;
        if dist == 0.0 {
            return gamma.value(x);
        }
        let (_, _, weights, _) = self.weights_at(x)?;
        let mut out = vec![0.0; gamma.target_dim()];
        for w in &weights {
            let v = gamma.value(&w.anchor.y)?;
            for (o, vi) in out.iter_mut().zip(&v) {
                *o += w.weight * vi;
            }
        }
        Ok(out)
    }
}

/// One row of the extension report.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub query: Vec<f64>,
    pub distance: f64,
    pub shell: Option<i32>,
    pub value: Vec<f64>,
    pub hull_ok: bool,
}

/// Continuity/bound report for the extension over a window grid.
#[derive(Debug)]
pub struct DugundjiReport {
    pub rows: Vec<ReportRow>,
    /// max |E(γ) - γ| over grid points on Y (exact-branch check)
    pub max_restriction_error: f64,
    /// sampled sup-norm ratio ||E(γ)||_∞ / ||γ||_∞ (anchors included in the
    /// denominator sample, so ≤ 1 up to rounding)
    pub sup_ratio: f64,
    /// componentwise bounds of the sampled γ values on Y
    pub hull_lo: Vec<f64>,
    pub hull_hi: Vec<f64>,
    /// modulus of continuity along a path x_k → y* ∈ Y: (d_Y(x_k), error)
    pub continuity: Vec<(f64, f64)>,
}

impl DugundjiReport {
    /// CSV with the per-query rows.
    pub fn to_csv(&self) -> String {
        let m = self.hull_lo.len();
        let mut s = String::new();
        let mut header: Vec<String> = vec!["query".into(), "d_Y".into(), "shell".into()];
        for i in 0..m {
            header.push(format!("value_{i}"));
        }
        header.push("hull_ok".into());
        s.push_str(&header.join(","));
        s.push('\n');
        for r in &self.rows {
            let q = r
                .query
                .iter()
                .map(|x| format!("{x:.16e}"))
                .collect::<Vec<_>>()
                .join(";");
            let shell = r.shell.map(|n| n.to_string()).unwrap_or_else(|| "Y".into());
            let mut row = vec![q, format!("{:.16e}", r.distance), shell];
            for v in &r.value {
                row.push(format!("{v:.16e}"));
            }
            row.push(if r.hull_ok { "1".into() } else { "0".into() });
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// Run the report: restriction errors on `Y ∩ grid`, sup-norm ratio, hull
/// containment, and a modulus-of-continuity table near `∂Y`.
pub fn dugundji_report<G: ValueOracle + ?Sized>(
    shells: &ShellStructure,
    gamma: &G,
    window: &BoxUnion,
    per_axis: usize,
    q: &SeminormSpec,
) -> Result<DugundjiReport> {
    let bound = window.bounding_box()?;
    let m = gamma.target_dim();
    let mut rows = Vec::new();
    let mut y_values: Vec<Vec<f64>> = Vec::new();
    let mut max_restriction_error = 0.0f64;

    // pass 1: evaluate on the grid, collecting Y samples and anchor values
    let mut queries = Vec::new();
    for x in grid_points(&bound, per_axis) {
        let dist = shells.target().distance(&x)?;
        if dist == 0.0 {
            let g = gamma.value(&x)?;
            let e = shells.eval(gamma, &x)?;
            let err = g
                .iter()
                .zip(&e)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            max_restriction_error = max_restriction_error.max(err);
            y_values.push(g.clone());
            rows.push(ReportRow {
                query: x,
                distance: 0.0,
                shell: None,
                value: e,
                hull_ok: true,
            });
        } else {
            queries.push(x);
        }
    }
    let mut sup_num = 0.0f64;
    let mut pending: Vec<(Vec<f64>, f64, i32, Vec<f64>)> = Vec::new();
    for x in queries {
        let (dist, shell, weights, _) = shells.weights_at(&x)?;
        let mut value = vec![0.0; m];
        for w in &weights {
            let v = gamma.value(&w.anchor.y)?;
            for (o, vi) in value.iter_mut().zip(&v) {
                *o += w.weight * vi;
            }
            y_values.push(v);
        }
        sup_num = sup_num.max(q.apply(&value));
        pending.push((x, dist, shell, value));
    }

    // hull bounds over every γ(Y) sample seen (grid ∩ Y plus all anchors)
    let mut hull_lo = vec![f64::INFINITY; m];
    let mut hull_hi = vec![f64::NEG_INFINITY; m];
    let mut sup_den = 0.0f64;
    for v in &y_values {
        sup_den = sup_den.max(q.apply(v));
        for i in 0..m {
            hull_lo[i] = hull_lo[i].min(v[i]);
            hull_hi[i] = hull_hi[i].max(v[i]);
        }
    }
    for (x, dist, shell, value) in pending {
        let hull_ok = value
            .iter()
            .enumerate()
            .all(|(i, &v)| v >= hull_lo[i] - 1e-12 && v <= hull_hi[i] + 1e-12);
        rows.push(ReportRow {
            query: x,
            distance: dist,
            shell: Some(shell),
            value,
            hull_ok,
        });
    }
    let sup_ratio = if sup_den > 0.0 { sup_num / sup_den } else { 0.0 };

    // continuity path: approach a boundary point of Y from outside
    let y_star = shells.target().nearest_point(&bound.hi)?;
    let gref = gamma.value(&y_star)?;
    let mut dir: Vec<f64> = bound
        .hi
        .iter()
        .zip(&y_star)
        .map(|(&h, &y)| h - y)
        .collect();
    let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        dir = vec![1.0; shells.dim()];
    } else {
        for v in dir.iter_mut() {
            *v /= norm;
        }
    }
    let mut continuity = Vec::new();
    for k in 1..=14 {
        let step = 2f64.powi(-k);
        let xk: Vec<f64> = y_star.iter().zip(&dir).map(|(&y, &u)| y + step * u).collect();
        let d = shells.target().distance(&xk)?;
        if d == 0.0 {
            continue;
        }
        let v = shells.eval(gamma, &xk)?;
        let err = v
            .iter()
            .zip(&gref)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        continuity.push((d, err));
    }

    rows.sort_by(|a, b| a.query.partial_cmp(&b.query).unwrap());
    Ok(DugundjiReport {
        rows,
        max_restriction_error,
        sup_ratio,
        hull_lo,
        hull_hi,
        continuity,
    })
}
