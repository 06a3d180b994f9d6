//! Per-check tolerances and run budgets, in one place.
//!
//! Every numeric threshold used by the property suites and the acceptance
//! checks lives here; nothing is tuned inline at the call sites.

/// Polynomials of degree ≤ l are reproduced to this absolute error.
pub const POLY_EXACTNESS: f64 = 1e-10;

/// Partition of unity: |Σ_z h_z - 1|.
pub const PARTITION_SUM: f64 = 1e-12;

/// Differentiated partition identity: |Σ_z ∂^α h_z| for 1 ≤ |α| ≤ 3.
pub const PARTITION_DERIV_SUM: f64 = 1e-9;

/// polarize(diagonal(β)) returns β, componentwise.
pub const POLARIZE_ROUNDTRIP: f64 = 1e-9;

/// Series arithmetic vs central finite differences, relative, orders ≤ 3.
pub const JET_ARITH_FD_REL: f64 = 1e-5;

/// Expression first derivatives vs central differences, relative.
pub const EXPR_FD_REL: f64 = 1e-6;

/// Slack multiplier on the polarization norm inequality (sampling gap).
pub const CONSPOL_SLACK: f64 = 1e-6;

/// Linearity of the smoothing operators on a grid.
pub const LINEARITY: f64 = 1e-10;

/// Smoothed-function jet order 0 vs direct formula evaluation.
pub const EVAL_JET_DIRECT: f64 = 1e-14;

/// Smoothed-function first derivatives vs finite differences, relative.
pub const EVAL_JET_FD_REL: f64 = 1e-6;

/// Stage operator agreement with the window operator on K_j.
pub const STAGE_AGREEMENT: f64 = 1e-12;

/// Extension operators restricted to the source domain.
pub const RESTRICTION: f64 = 1e-12;

/// One-sided jets across an extended face, relative, orders ≤ l.
pub const CROSS_FACE_REL: f64 = 1e-4;

/// Interior agreement of two axis orders of the cube extension.
pub const AXIS_ORDER_INDEPENDENCE: f64 = 1e-10;

/// Tensor witness reconstruction on a grid.
pub const TENSOR_RECONSTRUCTION: f64 = 1e-10;

/// Dugundji weights: nonnegativity slack and |Σ - 1|.
pub const DUGUNDJI_WEIGHT_SUM: f64 = 1e-12;

/// Dugundji sup-norm ratio may exceed 1 by at most this.
pub const DUGUNDJI_SUP_RATIO_SLACK: f64 = 1e-12;

/// Hull containment slack (componentwise).
pub const DUGUNDJI_HULL_SLACK: f64 = 1e-12;

/// Cube smoothing reproduces polynomials to this error.
pub const CUBE_REPRODUCTION: f64 = 1e-8;

/// Fitted extension operator norm stability under corpus reshuffling.
pub const OPNORM_STABILITY_REL: f64 = 0.10;

/// 1-Lipschitz distance check slack.
pub const LIPSCHITZ_SLACK: f64 = 1e-12;

/// Finite-difference steps.
pub const FD_STEP_FIRST: f64 = 1e-5;
pub const FD_STEP_HIGH: f64 = 1e-3;

/// Offset for one-sided jet comparisons across an extended face. The
/// order-l entries differ by O(h) with a constant involving the first
/// unmatched reflection moment, so h must sit well below CROSS_FACE_REL.
pub const FACE_STEP: f64 = 1e-6;

/// Grid resolution used for seminorm estimates in reports (points per axis).
/// Dense enough to resolve the lattice-scale oscillation of the error (the
/// construction interpolates jets exactly at the points z/n, so a sparse or
/// lattice-aligned grid understates the sup).
pub const REPORT_GRID: usize = 37;

/// Wall-clock budgets (seconds).
pub const BUDGET_POLY_EXACTNESS: f64 = 5.0;
pub const BUDGET_CONVERGENCE: f64 = 30.0;
pub const BUDGET_SELFTEST: f64 = 120.0;
