//! Univariate truncated Taylor series with coefficient-exact arithmetic.
//!
//! A `Series` holds the Taylor coefficients `c_i = f^(i)(x0) / i!` of a
//! function around some (implicit) base point, truncated at a fixed order.
//! Products use the Cauchy convolution, quotients back-substitution, and
//! `exp`/`sin`/`cos` the classical ODE recurrences, so every coefficient is
//! exact up to floating-point rounding.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    coeffs: Vec<f64>,
}

impl Series {
    /// Series with the given Taylor coefficients (length = order + 1).
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty());
        Series { coeffs }
    }

    /// The constant function `c`, truncated at `order`.
    pub fn constant(c: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = c;
        Series { coeffs }
    }

    /// The identity `t ↦ x0 + t`, truncated at `order`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = x0;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    /// Value of the underlying function at the base point.
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `i`-th derivative at the base point (`c_i * i!`).
    pub fn derivative(&self, i: usize) -> f64 {
        self.coeff(i) * crate::calculus::multi_index::factorial(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn neg(&self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| s * c).collect(),
        }
    }

    pub fn add(&self, other: &Series) -> Series {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Series, f: impl Fn(f64, f64) -> f64) -> Series {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f(self.coeff(i), other.coeff(i))).collect();
        Series { coeffs }
    }

    /// Cauchy product truncated at `max(order)`.
    pub fn mul(&self, other: &Series) -> Series {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0.0; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if i + j < n {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Series { coeffs }
    }

    /// Quotient; requires the divisor's constant term to be nonzero.
    pub fn div(&self, other: &Series) -> Result<Series> {
        if other.coeffs[0] == 0.0 {
            return Err(Error::Singularity(
                "division by a series with zero constant term".into(),
            ));
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.coeff(i);
            for k in 1..=i {
                acc -= other.coeff(k) * coeffs[i - k];
            }
            coeffs[i] = acc / other.coeffs[0];
        }
        Ok(Series { coeffs })
    }

    /// Reciprocal `1 / self`.
    pub fn recip(&self) -> Result<Series> {
        Series::constant(1.0, self.order()).div(self)
    }

    /// `exp(self)` via the recurrence `n u_n = Σ_{k=1..n} k f_k u_{n-k}`.
    pub fn exp(&self) -> Series {
        let n = self.coeffs.len();
        let mut u = vec![0.0; n];
        u[0] = self.coeffs[0].exp();
        for m in 1..n {
            let mut acc = 0.0;
            for k in 1..=m {
                acc += (k as f64) * self.coeff(k) * u[m - k];
            }
            u[m] = acc / m as f64;
        }
        Series { coeffs: u }
    }

    /// `sin(self)` and `cos(self)` computed jointly.
    pub fn sin_cos(&self) -> (Series, Series) {
        let n = self.coeffs.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for m in 1..n {
            let mut acc_s = 0.0;
            let mut acc_c = 0.0;
            for k in 1..=m {
                let kf = (k as f64) * self.coeff(k);
                acc_s += kf * c[m - k];
                acc_c -= kf * s[m - k];
            }
            s[m] = acc_s / m as f64;
            c[m] = acc_c / m as f64;
        }
        (Series { coeffs: s }, Series { coeffs: c })
    }

    pub fn sin(&self) -> Series {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Series {
        self.sin_cos().1
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, k: u32) -> Series {
        let mut acc = Series::constant(1.0, self.order());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Composition `self ∘ inner`. `self` must be expanded around
    /// `inner.value()`; the shifted inner series `inner - inner(0)` is
    /// substituted by Horner evaluation over truncated polynomials.
    pub fn compose(&self, inner: &Series) -> Series {
        let order = self.order().max(inner.order());
        let mut shifted = inner.clone();
        shifted.coeffs[0] = 0.0;
        let mut acc = Series::constant(0.0, order);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&shifted);
            acc.coeffs[0] += c;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exp_of_zero_series() {
        let z = Series::constant(0.0, 3);
        assert_eq!(z.exp().coeffs(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn product_one_plus_one_minus() {
        // (1+t)(1-t) = 1 - t^2
        let a = Series::from_coeffs(vec![1.0, 1.0, 0.0]);
        let b = Series::from_coeffs(vec![1.0, -1.0, 0.0]);
        assert_eq!(a.mul(&b).coeffs(), &[1.0, 0.0, -1.0]);
    }

    #[test]
    fn division_by_zero_constant_term_fails() {
        let a = Series::constant(1.0, 2);
        let b = Series::from_coeffs(vec![0.0, 1.0, 0.0]);
        assert!(matches!(a.div(&b), Err(Error::Singularity(_))));
    }

    #[test]
    fn bump_profile_jet_at_half() {
        // f(t) = exp(-1/(1-t^2)) at t = 1/2: value e^{-4/3},
        // derivative e^{-4/3} * (-16/9). Frozen from the closed form;
        // cross-checked against central differences below.
        let t = Series::variable(0.5, 1);
        let w = Series::constant(1.0, 1).sub(&t.mul(&t));
        let f = w.recip().unwrap().neg().exp();
        let v = (-4.0_f64 / 3.0).exp();
        assert_abs_diff_eq!(f.value(), v, epsilon = 1e-15);
        assert_abs_diff_eq!(f.derivative(1), v * (-16.0 / 9.0), epsilon = 1e-14);

        // independent oracle: central finite difference, step 1e-5
        let g = |t: f64| (-1.0 / (1.0 - t * t)).exp();
        let h = 1e-5;
        let fd = (g(0.5 + h) - g(0.5 - h)) / (2.0 * h);
        assert_abs_diff_eq!(f.derivative(1), fd, epsilon = 1e-8);
    }

    #[test]
    fn sin_cos_derivatives() {
        let t = Series::variable(0.3, 4);
        let (s, c) = t.sin_cos();
        assert_abs_diff_eq!(s.derivative(1), 0.3_f64.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.derivative(2), -0.3_f64.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(c.derivative(3), 0.3_f64.sin(), epsilon = 1e-15);
    }

    #[test]
    fn compose_matches_direct() {
        // exp(sin(t)) at t0 = 0.7, order 3, via compose vs direct chain
        let t = Series::variable(0.7, 3);
        let inner = t.sin();
        let outer = Series::variable(inner.value(), 3).exp();
        let composed = outer.compose(&inner);
        let direct = inner.exp();
        for i in 0..=3 {
            assert_abs_diff_eq!(composed.coeff(i), direct.coeff(i), epsilon = 1e-13);
        }
    }

    #[test]
    fn powi_matches_mul() {
        let t = Series::variable(1.5, 3);
        let p = t.powi(3);
        assert_abs_diff_eq!(p.value(), 3.375, epsilon = 1e-15);
        assert_abs_diff_eq!(p.derivative(1), 3.0 * 1.5 * 1.5, epsilon = 1e-14);
    }
}
