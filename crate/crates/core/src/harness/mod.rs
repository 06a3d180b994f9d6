//! Machine-checkable reports: convergence tables, the explicit operator
//! bound certificate, rate fits, and the property suites.

pub mod corpus;
pub mod reports;
pub mod suites;
pub mod tolerances;

pub use corpus::{corpus, corpus_dim, CorpusEntry};
pub use reports::{
    bound_certificate, bound_constant, cl_errors, constant_growth_table, convergence_report,
    fit_log_slope, BoundCertificate, ConvergenceReport,
};
pub use suites::{property_suites, SuiteResult};
