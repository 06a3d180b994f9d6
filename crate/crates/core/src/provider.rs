//! The jet evaluation contract shared by expression functions, smoothed
//! functions, and extension operators.

use std::sync::Arc;

use crate::calculus::jet::Jet;
use crate::domains::BoxUnion;
use crate::error::{Error, Result};

/// A `C^l` function given through its jets: every consumer of a function in
/// this crate goes through this trait.
///
/// Implementations must be pure: `jet` has no side effects and may be called
/// concurrently.
pub trait JetProvider: Send + Sync {
    /// Dimension `d` of the domain.
    fn dim(&self) -> usize;

    /// Dimension `m` of the target space.
    fn target_dim(&self) -> usize;

    /// Highest jet order the provider can supply.
    fn order(&self) -> usize;

    /// The domain the function lives on.
    fn domain(&self) -> &BoxUnion;

    /// Jet of order `k ≤ order()` at `x`; base point and order of the result
    /// match the request.
    fn jet(&self, x: &[f64], k: usize) -> Result<Jet>;

    /// Function value (order-0 jet shortcut).
    fn value(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.jet(x, 0)?.value().to_vec())
    }
}

impl JetProvider for Arc<dyn JetProvider> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn target_dim(&self) -> usize {
        (**self).target_dim()
    }
    fn order(&self) -> usize {
        (**self).order()
    }
    fn domain(&self) -> &BoxUnion {
        (**self).domain()
    }
    fn jet(&self, x: &[f64], k: usize) -> Result<Jet> {
        (**self).jet(x, k)
    }
}

/// A provider backed by a plain closure producing jets.
pub struct FnJetProvider<F> {
    pub dim: usize,
    pub target_dim: usize,
    pub order: usize,
    pub domain: BoxUnion,
    pub f: F,
}

impl<F> JetProvider for FnJetProvider<F>
where
    F: Fn(&[f64], usize) -> Result<Jet> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn target_dim(&self) -> usize {
        self.target_dim
    }
    fn order(&self) -> usize {
        self.order
    }
    fn domain(&self) -> &BoxUnion {
        &self.domain
    }
    fn jet(&self, x: &[f64], k: usize) -> Result<Jet> {
        if k > self.order {
            return Err(Error::Precondition(format!(
                "jet order {k} exceeds provider order {}",
                self.order
            )));
        }
        (self.f)(x, k)
    }
}

/// View of a single target component of a vector-valued provider.
pub struct ComponentProvider {
    pub source: Arc<dyn JetProvider>,
    pub component: usize,
}

impl JetProvider for ComponentProvider {
    fn dim(&self) -> usize {
        self.source.dim()
    }
    fn target_dim(&self) -> usize {
        1
    }
    fn order(&self) -> usize {
        self.source.order()
    }
    fn domain(&self) -> &BoxUnion {
        self.source.domain()
    }
    fn jet(&self, x: &[f64], k: usize) -> Result<Jet> {
        Ok(self.source.jet(x, k)?.component(self.component))
    }
}

/// Stack of scalar providers into a vector-valued provider.
pub struct StackProvider {
    pub components: Vec<Arc<dyn JetProvider>>,
}

impl JetProvider for StackProvider {
    fn dim(&self) -> usize {
        self.components[0].dim()
    }
    fn target_dim(&self) -> usize {
        self.components.len()
    }
    fn order(&self) -> usize {
        self.components.iter().map(|c| c.order()).min().unwrap_or(0)
    }
    fn domain(&self) -> &BoxUnion {
        self.components[0].domain()
    }
    fn jet(&self, x: &[f64], k: usize) -> Result<Jet> {
        let jets = self
            .components
            .iter()
            .map(|c| c.jet(x, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Jet::stack(&jets))
    }
}

/// Scalar multiple `s · γ` of a provider (used to scale corpus functions).
pub struct ScaledProvider {
    pub source: Arc<dyn JetProvider>,
    pub scalar: f64,
}

impl JetProvider for ScaledProvider {
    fn dim(&self) -> usize {
        self.source.dim()
    }
    fn target_dim(&self) -> usize {
        self.source.target_dim()
    }
    fn order(&self) -> usize {
        self.source.order()
    }
    fn domain(&self) -> &BoxUnion {
        self.source.domain()
    }
    fn jet(&self, x: &[f64], k: usize) -> Result<Jet> {
        let j = self.source.jet(x, k)?;
        Ok(j.linear_combination(self.scalar, &j, 0.0))
    }
}

/// Pointwise combination `a γ + b η` of two providers on a common domain.
pub struct LinearCombinationProvider {
    pub a: f64,
    pub gamma: Arc<dyn JetProvider>,
    pub b: f64,
    pub eta: Arc<dyn JetProvider>,
}

impl JetProvider for LinearCombinationProvider {
    fn dim(&self) -> usize {
        self.gamma.dim()
    }
    fn target_dim(&self) -> usize {
        self.gamma.target_dim()
    }
    fn order(&self) -> usize {
        self.gamma.order().min(self.eta.order())
    }
    fn domain(&self) -> &BoxUnion {
        self.gamma.domain()
    }
    fn jet(&self, x: &[f64], k: usize) -> Result<Jet> {
        let u = self.gamma.jet(x, k)?;
        let v = self.eta.jet(x, k)?;
        Ok(u.linear_combination(self.a, &v, self.b))
    }
}
