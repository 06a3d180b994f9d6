//! Jets: the full table of partial derivatives of a vector-valued function
//! at a point, up to a fixed order.

use std::collections::BTreeMap;

use crate::calculus::multi_index::{multi_indices, MultiIndex, MAX_ORDER};
use crate::error::{Error, Result};

/// All partial derivatives `∂^α γ(x) ∈ R^m` for `|α| ≤ order` at a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    basepoint: Vec<f64>,
    order: usize,
    target_dim: usize,
    table: BTreeMap<MultiIndex, Vec<f64>>,
}

impl Jet {
    /// Build a jet from a total derivative table. Fails if the table misses
    /// a multi-index with `|α| ≤ order`, has inconsistent target dimensions,
    /// or contains a non-finite entry.
    pub fn new(
        basepoint: Vec<f64>,
        order: usize,
        table: BTreeMap<MultiIndex, Vec<f64>>,
    ) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::Precondition(format!(
                "jet order {order} exceeds supported maximum {MAX_ORDER}"
            )));
        }
        let d = basepoint.len();
        let target_dim = table
            .get(&MultiIndex::zero(d))
            .ok_or_else(|| Error::Precondition("jet table missing value entry".into()))?
            .len();
        for alpha in multi_indices(d, order) {
            let v = table.get(&alpha).ok_or_else(|| {
                Error::Precondition(format!("jet table missing entry for alpha = ({alpha})"))
            })?;
            if v.len() != target_dim {
                return Err(Error::Precondition(format!(
                    "jet entry ({alpha}) has dimension {} != {target_dim}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(format!("jet entry ({alpha})")));
            }
        }
        Ok(Jet {
            basepoint,
            order,
            target_dim,
            table,
        })
    }

    /// The jet of the zero function (all entries zero).
    pub fn zero(basepoint: Vec<f64>, order: usize, target_dim: usize) -> Self {
        let d = basepoint.len();
        let table = multi_indices(d, order)
            .into_iter()
            .map(|a| (a, vec![0.0; target_dim]))
            .collect();
        Jet {
            basepoint,
            order,
            target_dim,
            table,
        }
    }

    /// Jet of a scalar function given per-axis derivative factors
    /// `∂^α f = Π_i u_i^(α_i)` (product structure), from univariate
    /// derivative lists `factors[i][j] = u_i^(j)(x_i)`.
    pub fn from_axis_products(basepoint: Vec<f64>, order: usize, factors: &[Vec<f64>]) -> Self {
        let d = basepoint.len();
        debug_assert_eq!(factors.len(), d);
        let mut table = BTreeMap::new();
        for alpha in multi_indices(d, order) {
            let value = (0..d).map(|i| factors[i][alpha.entry(i)]).product::<f64>();
            table.insert(alpha, vec![value]);
        }
        Jet {
            basepoint,
            order,
            target_dim: 1,
            table,
        }
    }

    pub fn basepoint(&self) -> &[f64] {
        &self.basepoint
    }

    pub fn dim(&self) -> usize {
        self.basepoint.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    /// The function value (entry at `α = 0`).
    pub fn value(&self) -> &[f64] {
        &self.table[&MultiIndex::zero(self.dim())]
    }

    /// `∂^α γ(x)`; zero vector if `|α| > order` is requested.
    pub fn partial(&self, alpha: &MultiIndex) -> Vec<f64> {
        self.table
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| vec![0.0; self.target_dim])
    }

    pub fn table(&self) -> &BTreeMap<MultiIndex, Vec<f64>> {
        &self.table
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Vec<f64>)> {
        self.table.iter()
    }

    /// `a * self + b * other` entrywise; jets must share base point layout.
    pub fn linear_combination(&self, a: f64, other: &Jet, b: f64) -> Jet {
        debug_assert_eq!(self.dim(), other.dim());
        debug_assert_eq!(self.target_dim, other.target_dim);
        let order = self.order.min(other.order);
        let mut table = BTreeMap::new();
        for alpha in multi_indices(self.dim(), order) {
            let u = self.partial(&alpha);
            let v = other.partial(&alpha);
            let w = u
                .iter()
                .zip(&v)
                .map(|(x, y)| a * x + b * y)
                .collect::<Vec<_>>();
            table.insert(alpha, w);
        }
        Jet {
            basepoint: self.basepoint.clone(),
            order,
            target_dim: self.target_dim,
            table,
        }
    }

    /// Leibniz product of a scalar jet with a vector jet at the same point:
    /// `∂^α (f g) = Σ_{β ≤ α} C(α, β) ∂^β f ∂^{α-β} g`.
    pub fn leibniz(scalar: &Jet, vector: &Jet) -> Jet {
        debug_assert_eq!(scalar.target_dim, 1);
        debug_assert_eq!(scalar.dim(), vector.dim());
        let order = scalar.order.min(vector.order);
        let d = scalar.dim();
        let m = vector.target_dim;
        let mut table = BTreeMap::new();
        for alpha in multi_indices(d, order) {
            let mut acc = vec![0.0; m];
            for beta in multi_indices(d, alpha.order()) {
                if !alpha.dominates(&beta) {
                    continue;
                }
                let c = alpha.binomial(&beta);
                let f = scalar.partial(&beta)[0];
                if f == 0.0 {
                    continue;
                }
                let rest = alpha.checked_sub(&beta).unwrap();
                let g = vector.partial(&rest);
                for (a, b) in acc.iter_mut().zip(&g) {
                    *a += c * f * b;
                }
            }
            table.insert(alpha, acc);
        }
        Jet {
            basepoint: scalar.basepoint.clone(),
            order,
            target_dim: m,
            table,
        }
    }

    /// Restrict to one target component (a scalar jet).
    pub fn component(&self, i: usize) -> Jet {
        let table = self
            .table
            .iter()
            .map(|(a, v)| (a.clone(), vec![v[i]]))
            .collect();
        Jet {
            basepoint: self.basepoint.clone(),
            order: self.order,
            target_dim: 1,
            table,
        }
    }

    /// Stack scalar jets into a vector jet.
    pub fn stack(components: &[Jet]) -> Jet {
        let first = &components[0];
        let m = components.len();
        let mut table = BTreeMap::new();
        for alpha in multi_indices(first.dim(), first.order) {
            let v = components
                .iter()
                .map(|j| j.partial(&alpha)[0])
                .collect::<Vec<_>>();
            table.insert(alpha, v);
        }
        Jet {
            basepoint: first.basepoint.clone(),
            order: first.order,
            target_dim: m,
            table,
        }
    }

    /// Truncate to a lower order.
    pub fn truncated(&self, order: usize) -> Jet {
        let order = order.min(self.order);
        let table = self
            .table
            .iter()
            .filter(|(a, _)| a.order() <= order)
            .map(|(a, v)| (a.clone(), v.clone()))
            .collect();
        Jet {
            basepoint: self.basepoint.clone(),
            order,
            target_dim: self.target_dim,
            table,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jet_of_square(x: f64) -> Jet {
        // γ(t) = t^2
        let mut table = BTreeMap::new();
        table.insert(MultiIndex::new(vec![0]), vec![x * x]);
        table.insert(MultiIndex::new(vec![1]), vec![2.0 * x]);
        table.insert(MultiIndex::new(vec![2]), vec![2.0]);
        Jet::new(vec![x], 2, table).unwrap()
    }

    #[test]
    fn totality_enforced() {
        let mut table = BTreeMap::new();
        table.insert(MultiIndex::new(vec![0]), vec![1.0]);
        assert!(Jet::new(vec![0.0], 1, table).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        let mut table = BTreeMap::new();
        table.insert(MultiIndex::new(vec![0]), vec![f64::NAN]);
        table.insert(MultiIndex::new(vec![1]), vec![0.0]);
        assert!(matches!(
            Jet::new(vec![0.0], 1, table),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn leibniz_product_rule() {
        // f = g = t^2 at t=3: (fg) = t^4, ∂(fg) = 4 t^3 = 108
        let j = jet_of_square(3.0);
        let p = Jet::leibniz(&j, &j);
        assert_eq!(p.partial(&MultiIndex::new(vec![0]))[0], 81.0);
        assert_eq!(p.partial(&MultiIndex::new(vec![1]))[0], 108.0);
        // ∂^2 (t^4) = 12 t^2 = 108
        assert_eq!(p.partial(&MultiIndex::new(vec![2]))[0], 108.0);
    }

    #[test]
    fn component_stack_round_trip() {
        let j = jet_of_square(2.0);
        let v = Jet::stack(&[j.clone(), j.clone()]);
        assert_eq!(v.target_dim(), 2);
        assert_eq!(v.component(1).value()[0], 4.0);
    }
}
