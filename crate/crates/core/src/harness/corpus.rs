//! The test corpus: ten expression functions spanning polynomials,
//! trigonometric and exponential functions, rank-one and full-rank
//! vector-valued forms, in one and two variables.

use std::sync::Arc;

use crate::domains::BoxUnion;
use crate::expr::ExprFunction;
use crate::error::Result;
use crate::provider::JetProvider;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub components: Vec<&'static str>,
    pub dim: usize,
}

impl CorpusEntry {
    /// Ω = (-2, 2)^d for every corpus function.
    pub fn omega(&self) -> BoxUnion {
        BoxUnion::open_box(vec![-2.0; self.dim], vec![2.0; self.dim])
    }

    pub fn provider(&self) -> Result<Arc<dyn JetProvider>> {
        Ok(Arc::new(ExprFunction::parse_components(
            &self.components,
            self.dim,
            self.omega(),
        )?))
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }
}

/// The fixed corpus (order matters: reports list it in this order).
pub fn corpus() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "poly-quadratic",
            components: vec!["0.5+x1-0.25*x1^2"],
            dim: 1,
        },
        CorpusEntry {
            name: "sin",
            components: vec!["sin(x1)"],
            dim: 1,
        },
        CorpusEntry {
            name: "exp-half",
            components: vec!["exp(0.5*x1)"],
            dim: 1,
        },
        CorpusEntry {
            name: "cos-three",
            components: vec!["cos(3*x1)"],
            dim: 1,
        },
        CorpusEntry {
            name: "product-2d",
            components: vec!["x1*x2"],
            dim: 2,
        },
        CorpusEntry {
            name: "sin-sum-2d",
            components: vec!["sin(x1+2*x2)"],
            dim: 2,
        },
        CorpusEntry {
            name: "exp-cos-2d",
            components: vec!["exp(x1)*cos(x2)"],
            dim: 2,
        },
        CorpusEntry {
            name: "rank-one-vec",
            components: vec!["sin(x1)", "2*sin(x1)", "-0.5*sin(x1)"],
            dim: 1,
        },
        CorpusEntry {
            name: "full-rank-vec",
            components: vec!["sin(x1)", "cos(x1)", "x1^2"],
            dim: 1,
        },
        CorpusEntry {
            name: "vec-2d",
            components: vec!["x1+x2", "x1*x2", "exp(0.2*x1)*sin(x2)"],
            dim: 2,
        },
    ]
}

/// Corpus entries restricted to domain dimension `d`.
pub fn corpus_dim(d: usize) -> Vec<CorpusEntry> {
    corpus().into_iter().filter(|c| c.dim == d).collect()
}
