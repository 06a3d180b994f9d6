//! Multi-index arithmetic: the index set for partial derivatives and
//! monomial exponents.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest derivative/polynomial order supported anywhere in the crate.
pub const MAX_ORDER: usize = 6;

/// A multi-index `α = (α_1, ..., α_d)` of non-negative integers.
///
/// Indexes both partial derivatives `∂^α` and monomials `y^α`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn new(entries: Vec<u8>) -> Self {
        MultiIndex(entries)
    }

    /// The zero multi-index in `d` variables.
    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    /// `i`-th standard unit index in `d` variables.
    pub fn unit(d: usize, i: usize) -> Self {
        let mut e = vec![0; d];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    pub fn entry(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// Total order `|α| = Σ α_i`.
    pub fn order(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    /// `α! = Π α_i!` as an exact f64 (orders are small).
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a as usize)).product()
    }

    /// Monomial power `y^α = Π y_i^{α_i}`.
    pub fn monomial(&self, y: &[f64]) -> f64 {
        debug_assert_eq!(y.len(), self.0.len());
        self.0
            .iter()
            .zip(y)
            .map(|(&a, &yi)| yi.powi(a as i32))
            .product()
    }

    /// Componentwise sum.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    /// Componentwise difference, `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(self.0.len());
        for (&a, &b) in self.0.iter().zip(&other.0) {
            if b > a {
                return None;
            }
            out.push(a - b);
        }
        Some(MultiIndex(out))
    }

    /// `β ≤ α` componentwise.
    pub fn dominates(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| b <= a)
    }

    /// Increment entry `i` by one.
    pub fn bump(&self, i: usize) -> MultiIndex {
        let mut e = self.0.clone();
        e[i] += 1;
        MultiIndex(e)
    }

    /// Multi-binomial `C(α, β) = Π C(α_i, β_i)`; zero unless `β ≤ α`.
    pub fn binomial(&self, other: &MultiIndex) -> f64 {
        if !self.dominates(other) {
            return 0.0;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| binomial(a as usize, b as usize))
            .product()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for MultiIndex {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let entries = s
            .split(',')
            .map(|p| p.trim().parse::<u8>())
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(MultiIndex(entries))
    }
}

/// `n!` as f64; exact for n ≤ 18.
pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Binomial coefficient `C(n, k)` as an exact f64 for small arguments.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut num = 1.0;
    let mut den = 1.0;
    for i in 0..k {
        num *= (n - i) as f64;
        den *= (i + 1) as f64;
    }
    num / den
}

/// All multi-indices in `d` variables with `|α| ≤ k`, in lexicographic order.
pub fn multi_indices(d: usize, k: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u8; d];
    collect(&mut out, &mut current, 0, k);
    out.sort();
    out
}

/// All multi-indices in `d` variables with `|α| = k` exactly.
pub fn multi_indices_exact(d: usize, k: usize) -> Vec<MultiIndex> {
    multi_indices(d, k)
        .into_iter()
        .filter(|a| a.order() == k)
        .collect()
}

fn collect(out: &mut Vec<MultiIndex>, current: &mut Vec<u8>, pos: usize, budget: usize) {
    if pos == current.len() {
        out.push(MultiIndex(current.clone()));
        return;
    }
    for v in 0..=budget {
        current[pos] = v as u8;
        collect(out, current, pos + 1, budget - v);
    }
    current[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_factorial() {
        let a = MultiIndex::new(vec![2, 0, 3]);
        assert_eq!(a.order(), 5);
        assert_eq!(a.factorial(), 12.0); // 2! * 0! * 3!
    }

    #[test]
    fn monomial_power() {
        let a = MultiIndex::new(vec![2, 1]);
        assert_eq!(a.monomial(&[3.0, -2.0]), -18.0);
        // y^0 = 1 even at y = 0
        assert_eq!(MultiIndex::zero(2).monomial(&[0.0, 0.0]), 1.0);
    }

    #[test]
    fn enumeration_counts() {
        // #{|α| ≤ k in d vars} = C(d + k, k)
        assert_eq!(multi_indices(1, 3).len(), 4);
        assert_eq!(multi_indices(2, 2).len(), 6);
        assert_eq!(multi_indices(3, 3).len(), 20);
        assert_eq!(multi_indices_exact(2, 2).len(), 3);
    }

    #[test]
    fn display_round_trip() {
        let a = MultiIndex::new(vec![1, 0, 2]);
        let s = a.to_string();
        assert_eq!(s, "1,0,2");
        assert_eq!(s.parse::<MultiIndex>().unwrap(), a);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(2, 3), 0.0);
        let a = MultiIndex::new(vec![2, 1]);
        let b = MultiIndex::new(vec![1, 1]);
        assert_eq!(a.binomial(&b), 2.0);
    }
}
