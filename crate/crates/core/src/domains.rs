//! Domain geometry: axis-aligned box unions, exact containment tests,
//! lattice cube enumeration, compact exhaustions, and distance queries.
//!
//! Restricting domains to finite unions of axis-aligned boxes keeps every
//! set query exact: membership, cube containment, and exhaustion margins
//! are decided by comparisons alone, never by sampling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single axis-aligned box with per-axis bounds; infinite bounds allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl AxisBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        AxisBox { lo, hi }
    }

    /// Cube `center ± halfwidth` (closed).
    pub fn cube(center: &[f64], halfwidth: f64) -> Self {
        AxisBox {
            lo: center.iter().map(|c| c - halfwidth).collect(),
            hi: center.iter().map(|c| c + halfwidth).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty_closed(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    pub fn is_empty_open(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l >= h)
    }

    pub fn contains_open(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&xi, (&l, &h))| l < xi && xi < h)
    }

    pub fn contains_closed(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&xi, (&l, &h))| l <= xi && xi <= h)
    }

    /// Shrink by `r` on every side (may become empty).
    pub fn shrink(&self, r: f64) -> AxisBox {
        AxisBox {
            lo: self.lo.iter().map(|l| l + r).collect(),
            hi: self.hi.iter().map(|h| h - r).collect(),
        }
    }

    /// Inflate by `r` on every side.
    pub fn inflate(&self, r: f64) -> AxisBox {
        self.shrink(-r)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.iter().all(|l| l.is_finite()) && self.hi.iter().all(|h| h.is_finite())
    }

    /// Euclidean distance from `x` to the closed box (0 inside).
    pub fn euclidean_distance(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&xi, (&l, &h))| {
                let c = xi.clamp(l, h);
                (xi - c) * (xi - c)
            })
            .sum::<f64>()
            .sqrt()
    }

    /// The open boxes `(a, b)` and `[a, b]` overlap iff `a < b` per axis with
    /// the right strictness; this is the open-vs-closed variant used for
    /// support intersection tests.
    pub fn open_intersects(&self, other: &AxisBox) -> bool {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(other.lo.iter().zip(&other.hi))
            .all(|((&l1, &h1), (&l2, &h2))| l1.max(l2) < h1.min(h2))
    }
}

/// A finite union of axis-aligned boxes, open or closed as a whole.
///
/// JSON schema: `{"boxes": [[[lo,hi],...], ...], "open": bool}`, with `null`
/// bounds encoding ±∞.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxUnion {
    pub boxes: Vec<AxisBox>,
    pub open: bool,
}

#[derive(Serialize, Deserialize)]
struct BoxUnionRepr {
    boxes: Vec<Vec<[Option<f64>; 2]>>,
    open: bool,
}

impl Serialize for BoxUnion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let boxes = self
            .boxes
            .iter()
            .map(|b| {
                b.lo.iter()
                    .zip(&b.hi)
                    .map(|(&l, &h)| {
                        [
                            if l.is_finite() { Some(l) } else { None },
                            if h.is_finite() { Some(h) } else { None },
                        ]
                    })
                    .collect()
            })
            .collect();
        BoxUnionRepr {
            boxes,
            open: self.open,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoxUnion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = BoxUnionRepr::deserialize(d)?;
        let boxes = repr
            .boxes
            .into_iter()
            .map(|axes| {
                let lo = axes
                    .iter()
                    .map(|[l, _]| l.unwrap_or(f64::NEG_INFINITY))
                    .collect();
                let hi = axes.iter().map(|[_, h]| h.unwrap_or(f64::INFINITY)).collect();
                AxisBox::new(lo, hi)
            })
            .collect();
        Ok(BoxUnion {
            boxes,
            open: repr.open,
        })
    }
}

impl BoxUnion {
    pub fn open_box(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        BoxUnion {
            boxes: vec![AxisBox::new(lo, hi)],
            open: true,
        }
    }

    pub fn closed_box(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        BoxUnion {
            boxes: vec![AxisBox::new(lo, hi)],
            open: false,
        }
    }

    /// All of `R^d`.
    pub fn full_space(d: usize) -> Self {
        BoxUnion {
            boxes: vec![AxisBox::new(
                vec![f64::NEG_INFINITY; d],
                vec![f64::INFINITY; d],
            )],
            open: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.boxes.first().map(|b| b.dim()).unwrap_or(0)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if self.open {
            self.boxes.iter().any(|b| b.contains_open(x))
        } else {
            self.boxes.iter().any(|b| b.contains_closed(x))
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.boxes.iter().all(|b| b.is_bounded())
    }

    pub fn is_empty(&self) -> bool {
        if self.open {
            self.boxes.iter().all(|b| b.is_empty_open())
        } else {
            self.boxes.iter().all(|b| b.is_empty_closed())
        }
    }

    /// A bounding box of the union (must be bounded).
    pub fn bounding_box(&self) -> Result<AxisBox> {
        if !self.is_bounded() {
            return Err(Error::Geometry("bounding box of an unbounded union".into()));
        }
        if self.boxes.is_empty() {
            return Err(Error::Geometry("bounding box of an empty union".into()));
        }
        let d = self.dim();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for b in &self.boxes {
            for i in 0..d {
                lo[i] = lo[i].min(b.lo[i]);
                hi[i] = hi[i].max(b.hi[i]);
            }
        }
        Ok(AxisBox::new(lo, hi))
    }

    /// Exact test: is the closed box `target` contained in this union?
    ///
    /// Collects the per-axis critical coordinates (the union's box bounds
    /// clipped to the target, plus the target's own bounds and the midpoints
    /// of consecutive values) and tests each candidate grid point for
    /// membership. No box boundary crosses an arrangement cell, so a cell is
    /// covered iff its candidate representatives are; the test is exact for
    /// open and closed unions alike.
    pub fn covers_closed_box(&self, target: &AxisBox) -> bool {
        if target.is_empty_closed() {
            return true;
        }
        let d = target.dim();
        let mut axes: Vec<Vec<f64>> = Vec::with_capacity(d);
        for i in 0..d {
            let mut vals = vec![target.lo[i], target.hi[i]];
            for b in &self.boxes {
                for v in [b.lo[i], b.hi[i]] {
                    if v > target.lo[i] && v < target.hi[i] {
                        vals.push(v);
                    }
                }
            }
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            vals.dedup();
            let mut with_mid = Vec::with_capacity(vals.len() * 2);
            for w in vals.windows(2) {
                with_mid.push(w[0]);
                with_mid.push(0.5 * (w[0] + w[1]));
            }
            with_mid.push(*vals.last().unwrap());
            axes.push(with_mid);
        }
        let mut idx = vec![0usize; d];
        loop {
            let x: Vec<f64> = idx.iter().enumerate().map(|(i, &k)| axes[i][k]).collect();
            if !self.contains(&x) {
                return false;
            }
            let mut pos = 0;
            loop {
                if pos == d {
                    return true;
                }
                idx[pos] += 1;
                if idx[pos] < axes[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Open/closed intersection of the union with an open box.
    pub fn intersects_open_box(&self, b: &AxisBox) -> bool {
        self.boxes.iter().any(|own| own.open_intersects(b))
    }

    /// Minimum Euclidean distance from `x` to the closed union.
    pub fn euclidean_distance(&self, x: &[f64]) -> Result<f64> {
        if self.boxes.is_empty() {
            return Err(Error::Geometry("distance to an empty union".into()));
        }
        Ok(self
            .boxes
            .iter()
            .map(|b| b.euclidean_distance(x))
            .fold(f64::INFINITY, f64::min))
    }

    /// Shrink every box by `r`, dropping emptied boxes. The result is closed.
    pub fn shrink_closed(&self, r: f64) -> BoxUnion {
        let boxes = self
            .boxes
            .iter()
            .map(|b| b.shrink(r))
            .filter(|b| !b.is_empty_closed())
            .collect();
        BoxUnion { boxes, open: false }
    }

    /// Shrink every box by `r`, keeping the result open (the interior used
    /// for margin checks).
    pub fn shrink_open(&self, r: f64) -> BoxUnion {
        let boxes = self
            .boxes
            .iter()
            .map(|b| b.shrink(r))
            .filter(|b| !b.is_empty_open())
            .collect();
        BoxUnion { boxes, open: true }
    }
}

/// Is the closed cube `z/n ± 1/n` contained in the domain?
pub fn cube_in_domain(z: &[i64], n: u32, omega: &BoxUnion) -> bool {
    let n = n as f64;
    let center: Vec<f64> = z.iter().map(|&zi| zi as f64 / n).collect();
    omega.covers_closed_box(&AxisBox::cube(&center, 1.0 / n))
}

/// The lattice set `M_n = {z : z/n + [-1/n, 1/n]^d ⊆ Ω}`, optionally
/// filtered to `Φ_n(window) = {z ∈ M_n : supp h_{n,z} ∩ window ≠ ∅}`.
///
/// Enumeration must be finite: either the window or Ω must be bounded.
pub fn lattice_sets(n: u32, omega: &BoxUnion, window: Option<&BoxUnion>) -> Result<Vec<Vec<i64>>> {
    let bound = match window {
        Some(w) => {
            if !w.is_bounded() {
                return Err(Error::Geometry("window must be bounded".into()));
            }
            w.bounding_box()?
        }
        None => {
            if !omega.is_bounded() {
                return Err(Error::Geometry(
                    "unbounded enumeration: Ω is unbounded and no window given".into(),
                ));
            }
            omega.bounding_box()?
        }
    };
    let d = bound.dim();
    let nf = n as f64;
    // supp h_{n,z} = z/n + (-1/n, 1/n)^d intersects the bounding box only if
    // z_i ∈ (n lo_i - 1, n hi_i + 1)
    let lo: Vec<i64> = bound.lo.iter().map(|&l| (nf * l - 1.0).floor() as i64).collect();
    let hi: Vec<i64> = bound.hi.iter().map(|&h| (nf * h + 1.0).ceil() as i64).collect();
    let mut out = Vec::new();
    let mut z = lo.clone();
    loop {
        let keep = cube_in_domain(&z, n, omega)
            && match window {
                Some(w) => {
                    let center: Vec<f64> = z.iter().map(|&zi| zi as f64 / nf).collect();
                    w.intersects_open_box(&AxisBox::cube(&center, 1.0 / nf))
                }
                None => true,
            };
        if keep {
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

/// One stage of a compact exhaustion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Stage {
    /// The closed set `K_j`.
    pub set: BoxUnion,
    /// Scale index `m_j`.
    pub scale: u32,
    /// Shrink radius used to build `K_j`.
    pub radius: f64,
}

/// An increasing sequence of closed box unions `K_1 ⊆ K_2 ⊆ ...` inside an
/// open domain, with scale indices `m_1 < m_2 < ...` satisfying the margin
/// `K_j + [-2/m_j, 2/m_j]^d ⊆ interior(K_{j+1})`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Exhaustion {
    pub omega: BoxUnion,
    pub stages: Vec<Stage>,
}

impl Exhaustion {
    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn stage(&self, j: usize) -> Result<&Stage> {
        self.stages.get(j - 1).ok_or_else(|| {
            Error::Geometry(format!(
                "stage {j} beyond exhaustion depth {}",
                self.stages.len()
            ))
        })
    }

    /// Exact margin check: `K_j + [-2/m_j, 2/m_j]^d ⊆ interior(K_{j+1})`
    /// for every consecutive pair.
    pub fn margins_hold(&self) -> bool {
        self.stages.windows(2).all(|w| {
            let delta = 2.0 / w[0].scale as f64;
            let interior = w[1].set.shrink_open(0.0);
            w[0]
                .set
                .boxes
                .iter()
                .all(|b| interior.covers_closed_box(&b.inflate(delta)))
        })
    }
}

/// Default compact exhaustion of a bounded open box union:
/// `K_j` is Ω with every box shrunk by `r_j = r_0 2^{-j}` (so `K_j` grows as
/// the radius halves), and `m_j` is the smallest admissible scale index.
///
/// The shrink radii are a free choice; they are recorded in every stage so
/// reports can reproduce the construction.
pub fn default_exhaustion(omega: &BoxUnion, depth: usize) -> Result<Exhaustion> {
    if !omega.is_bounded() || omega.is_empty() {
        return Err(Error::Geometry(
            "default exhaustion requires a bounded nonempty Ω".into(),
        ));
    }
    if depth == 0 || depth > 12 {
        return Err(Error::Geometry("exhaustion depth must be in 1..=12".into()));
    }
    // r_0 = quarter of the smallest box extent
    let min_extent = omega
        .boxes
        .iter()
        .flat_map(|b| b.lo.iter().zip(&b.hi).map(|(l, h)| h - l))
        .fold(f64::INFINITY, f64::min);
    let r0 = min_extent / 4.0;
    let k1 = omega.shrink_closed(r0 / 2.0);
    if k1.is_empty() {
        return Err(Error::Geometry(
            "K_1 is empty: Ω is too thin for the default radii; widen Ω or use a custom exhaustion"
                .into(),
        ));
    }
    let mut stages: Vec<Stage> = Vec::with_capacity(depth);
    let mut prev_scale = 0u32;
    for j in 1..=depth {
        let r = r0 * 0.5f64.powi(j as i32);
        let set = omega.shrink_closed(r);
        // minimal m_j > m_{j-1} with the margin into the NEXT stage; the next
        // stage has radius r/2, so inflation by 2/m must stay below r/2.
        let next_interior = omega.shrink_open(r / 2.0);
        let mut m = prev_scale + 1;
        loop {
            let delta = 2.0 / m as f64;
            let ok = set
                .boxes
                .iter()
                .all(|b| next_interior.covers_closed_box(&b.inflate(delta)));
            if ok {
                break;
            }
            m += 1;
            if m > 1_000_000 {
                return Err(Error::Geometry("no admissible scale index found".into()));
            }
        }
        prev_scale = m;
        stages.push(Stage {
            set,
            scale: m,
            radius: r,
        });
    }
    Ok(Exhaustion {
        omega: omega.clone(),
        stages,
    })
}

/// Distance target: a closed box union together with a finite point cloud.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosedSet {
    pub boxes: BoxUnion,
    #[serde(default)]
    pub points: Vec<Vec<f64>>,
}

impl ClosedSet {
    pub fn from_boxes(boxes: BoxUnion) -> Self {
        ClosedSet {
            boxes: BoxUnion {
                boxes: boxes.boxes,
                open: false,
            },
            points: Vec::new(),
        }
    }

    pub fn from_points(points: Vec<Vec<f64>>) -> Self {
        ClosedSet {
            boxes: BoxUnion {
                boxes: Vec::new(),
                open: false,
            },
            points,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.boxes.is_empty() && self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.boxes
            .boxes
            .first()
            .map(|b| b.dim())
            .or_else(|| self.points.first().map(|p| p.len()))
            .unwrap_or(0)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.boxes.boxes.iter().any(|b| b.contains_closed(x))
            || self.points.iter().any(|p| p == x)
    }

    /// Exact Euclidean distance (per-axis clamping for boxes, minimum over
    /// cloud points).
    pub fn distance(&self, x: &[f64]) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::Geometry("distance to an empty set".into()));
        }
        let mut best = f64::INFINITY;
        for b in &self.boxes.boxes {
            best = best.min(b.euclidean_distance(x));
        }
        for p in &self.points {
            let d2: f64 = p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
            best = best.min(d2.sqrt());
        }
        Ok(best)
    }

    /// An exact nearest point of the set to `x`.
    pub fn nearest_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        if self.is_empty() {
            return Err(Error::Geometry("nearest point of an empty set".into()));
        }
        let mut best = f64::INFINITY;
        let mut best_point = Vec::new();
        for b in &self.boxes.boxes {
            let p: Vec<f64> = x
                .iter()
                .zip(b.lo.iter().zip(&b.hi))
                .map(|(&xi, (&l, &h))| xi.clamp(l, h))
                .collect();
            let d2: f64 = p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 < best {
                best = d2;
                best_point = p;
            }
        }
        for p in &self.points {
            let d2: f64 = p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 < best {
                best = d2;
                best_point = p.clone();
            }
        }
        Ok(best_point)
    }
}

/// Uniform grid over a closed box, `per_axis` points per axis (endpoints
/// included; `per_axis >= 2`).
pub fn grid_points(b: &AxisBox, per_axis: usize) -> Vec<Vec<f64>> {
    let d = b.dim();
    let mut out = Vec::new();
    let mut idx = vec![0usize; d];
    loop {
        let x: Vec<f64> = idx
            .iter()
            .enumerate()
            .map(|(i, &k)| b.lo[i] + (b.hi[i] - b.lo[i]) * k as f64 / (per_axis - 1) as f64)
            .collect();
        out.push(x);
        let mut pos = 0;
        loop {
            if pos == d {
                return out;
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_in_open_interval() {
        // Ω = (-1, 1): only z = 0 fits at n = 2
        let omega = BoxUnion::open_box(vec![-1.0], vec![1.0]);
        assert!(cube_in_domain(&[0], 2, &omega));
        assert!(!cube_in_domain(&[1], 2, &omega));
        assert!(!cube_in_domain(&[-1], 2, &omega));
    }

    #[test]
    fn full_space_accepts_everything() {
        let omega = BoxUnion::full_space(2);
        assert!(cube_in_domain(&[173, -55], 3, &omega));
    }

    #[test]
    fn m4_for_unit_interval() {
        // Ω = (-1,1), n = 4: enumeration oracle gives z ∈ {-2..2}
        let omega = BoxUnion::open_box(vec![-1.0], vec![1.0]);
        let m4 = lattice_sets(4, &omega, None).unwrap();
        let expect: Vec<Vec<i64>> = (-2..=2).map(|z| vec![z]).collect();
        assert_eq!(m4, expect);
        // |M_n| grows like 2n: n=8 gives 13
        let m8 = lattice_sets(8, &omega, None).unwrap();
        assert_eq!(m8.len(), 13);
    }

    #[test]
    fn lattice_window_symmetry() {
        // Ω = (0,1)^2, n = 8, window = Ω: set symmetric under coordinate swap
        let omega = BoxUnion::open_box(vec![0.0, 0.0], vec![1.0, 1.0]);
        let phi = lattice_sets(8, &omega, Some(&omega)).unwrap();
        assert!(!phi.is_empty());
        for z in &phi {
            let swapped = vec![z[1], z[0]];
            assert!(phi.contains(&swapped));
        }
    }

    #[test]
    fn unbounded_enumeration_rejected() {
        let omega = BoxUnion::full_space(1);
        assert!(lattice_sets(4, &omega, None).is_err());
    }

    #[test]
    fn covering_needs_both_boxes() {
        // [0,1] is covered by (-1, 0.6) ∪ (0.2, 1.5) jointly but by neither alone
        let union = BoxUnion {
            boxes: vec![
                AxisBox::new(vec![-1.0], vec![0.6]),
                AxisBox::new(vec![0.2], vec![1.5]),
            ],
            open: true,
        };
        assert!(union.covers_closed_box(&AxisBox::new(vec![0.0], vec![1.0])));
        // but not the gap case
        let gap = BoxUnion {
            boxes: vec![
                AxisBox::new(vec![-1.0], vec![0.4]),
                AxisBox::new(vec![0.6], vec![1.5]),
            ],
            open: true,
        };
        assert!(!gap.covers_closed_box(&AxisBox::new(vec![0.0], vec![1.0])));
        // touching open boxes leave the seam uncovered
        let seam = BoxUnion {
            boxes: vec![
                AxisBox::new(vec![-1.0], vec![0.5]),
                AxisBox::new(vec![0.5], vec![1.5]),
            ],
            open: true,
        };
        assert!(!seam.covers_closed_box(&AxisBox::new(vec![0.0], vec![1.0])));
    }

    #[test]
    fn default_exhaustion_unit_interval() {
        // Ω = (0,1): r_j = 2^{-j-2}, K_1 = [1/8, 7/8], K_2 = [1/16, 15/16]
        let omega = BoxUnion::open_box(vec![0.0], vec![1.0]);
        let ex = default_exhaustion(&omega, 3).unwrap();
        let k1 = &ex.stages[0].set.boxes[0];
        assert_eq!((k1.lo[0], k1.hi[0]), (0.125, 0.875));
        let k2 = &ex.stages[1].set.boxes[0];
        assert_eq!((k2.lo[0], k2.hi[0]), (0.0625, 0.9375));
        assert!(ex.margins_hold());
        let scales: Vec<u32> = ex.stages.iter().map(|s| s.scale).collect();
        assert!(scales.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn exhaustion_areas_grow() {
        let omega = BoxUnion::open_box(vec![0.0, 0.0], vec![1.0, 1.0]);
        let ex = default_exhaustion(&omega, 2).unwrap();
        let area = |s: &Stage| {
            let b = &s.set.boxes[0];
            (b.hi[0] - b.lo[0]) * (b.hi[1] - b.lo[1])
        };
        assert!(area(&ex.stages[0]) < area(&ex.stages[1]));
    }

    #[test]
    fn thin_domain_rejected() {
        // Squeeze until K_1 would be empty is impossible for a single box with
        // the default radii (r_1 = extent/8); an empty Ω still errors.
        let omega = BoxUnion {
            boxes: vec![],
            open: true,
        };
        assert!(default_exhaustion(&omega, 2).is_err());
    }

    #[test]
    fn distances() {
        // Y = [0,1]^2, x = (2,0) -> 1
        let y = ClosedSet::from_boxes(BoxUnion::closed_box(vec![0.0, 0.0], vec![1.0, 1.0]));
        assert_eq!(y.distance(&[2.0, 0.0]).unwrap(), 1.0);
        assert_eq!(y.distance(&[0.5, 0.5]).unwrap(), 0.0);
        // Y = {0} ∪ [2,3] ⊂ R, x = 1.2 -> 0.8
        let mut y = ClosedSet::from_boxes(BoxUnion::closed_box(vec![2.0], vec![3.0]));
        y.points.push(vec![0.0]);
        let d = y.distance(&[1.2]).unwrap();
        assert!((d - 0.8).abs() < 1e-15);
        let empty = ClosedSet {
            boxes: BoxUnion {
                boxes: vec![],
                open: false,
            },
            points: vec![],
        };
        assert!(empty.distance(&[0.0]).is_err());
    }

    #[test]
    fn json_round_trip_with_infinite_bounds() {
        let u = BoxUnion {
            boxes: vec![AxisBox::new(vec![0.0, f64::NEG_INFINITY], vec![1.0, f64::INFINITY])],
            open: true,
        };
        let s = serde_json::to_string(&u).unwrap();
        assert!(s.contains("null"));
        let back: BoxUnion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, u);
    }
}
