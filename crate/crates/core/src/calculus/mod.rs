//! The symbol layer: multi-indices, truncated Taylor series, jets,
//! polynomials, symmetric forms, and seminorms.

pub mod jet;
pub mod multi_index;
pub mod polynomial;
pub mod seminorm;
pub mod series;

pub use jet::Jet;
pub use multi_index::{multi_indices, multi_indices_exact, MultiIndex, MAX_ORDER};
pub use polynomial::{polarize, taylor_polynomial, PolynomialMap, SymmetricForm};
pub use seminorm::{
    form_sup_norm, gateaux_polynomial, polynomial_sup_norm, polynomial_sup_norm_grid,
    seminorm_cl, seminorm_cl_gateaux, SampleScheme, SeminormSpec,
};
pub use series::Series;
