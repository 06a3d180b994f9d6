//! Property suites: every module's invariants, run with fixed seeds and
//! hard tolerances. `property_suites` returns one verdict per suite; the
//! CLI `selftest` subcommand exits nonzero if any fails.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bump::{active_lattice, h0_cl_norm_with, partition_jet, partition_value};
use crate::calculus::jet::Jet;
use crate::calculus::multi_index::{factorial, multi_indices, MultiIndex};
use crate::calculus::polynomial::{polarize, sorted_tuples, SymmetricForm};
use crate::calculus::seminorm::{
    form_sup_norm, polynomial_sup_norm, polynomial_sup_norm_grid, seminorm_cl_gateaux,
    SampleScheme, SeminormSpec,
};
use crate::calculus::series::Series;
use crate::domains::{
    cube_in_domain, default_exhaustion, grid_points, AxisBox, BoxUnion, ClosedSet,
};
use crate::dugundji::{dugundji_report, ShellStructure};
use crate::error::Result;
use crate::expr::{parse, ExprFunction};
use crate::extension::{
    extend_corner, extend_cube, extend_halfspace, AxisExtension, AxisFaces, ProjectionExtension,
    ReflectionExtension,
};
use crate::harness::corpus::{corpus, corpus_dim, CorpusEntry};
use crate::harness::reports::{bound_certificate, cl_errors, convergence_report};
use crate::harness::tolerances as tol;
use crate::provider::{JetProvider, LinearCombinationProvider};
use crate::smoothing::{
    build_sn, build_stilde, cube_smoothing, interpolated, tensor_witness, Schedule,
    SmoothedFunction,
};

/// Verdict of one property suite.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub pass: bool,
    pub max_violation: f64,
    pub tolerance: f64,
    pub detail: String,
}

struct Check {
    suite: &'static str,
    tolerance: f64,
    worst: f64,
    detail: String,
}

impl Check {
    fn new(suite: &'static str, tolerance: f64) -> Self {
        Check {
            suite,
            tolerance,
            worst: 0.0,
            detail: String::new(),
        }
    }

    fn observe(&mut self, violation: f64, ctx: &str) {
        if violation > self.worst {
            self.worst = violation;
            self.detail = ctx.to_string();
        }
    }

    /// For boolean conditions: a failure counts as violation 1.
    fn require(&mut self, ok: bool, ctx: &str) {
        if !ok {
            self.observe(1.0, ctx);
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            suite: self.suite,
            pass: self.worst <= self.tolerance,
            max_violation: self.worst,
            tolerance: self.tolerance,
            detail: self.detail,
        }
    }
}

fn fail(suite: &'static str, err: impl std::fmt::Display) -> SuiteResult {
    SuiteResult {
        suite,
        pass: false,
        max_violation: f64::INFINITY,
        tolerance: 0.0,
        detail: format!("error: {err}"),
    }
}

macro_rules! suite {
    ($vec:expr, $name:expr, $body:expr) => {
        $vec.push(match $body {
            Ok(r) => r,
            Err(e) => fail($name, e),
        });
    };
}

/// Run every suite with the given seed. Verdicts are seed-stable: the
/// tolerances absorb sampling noise by design.
pub fn property_suites(seed: u64) -> Vec<SuiteResult> {
    let mut out = Vec::new();
    suite!(out, "taylor-polarization", taylor_polarization(seed));
    suite!(out, "series-arithmetic", series_arithmetic(seed));
    suite!(out, "bump-partition", bump_partition(seed));
    suite!(out, "domain-geometry", domain_geometry(seed));
    suite!(out, "expr-parser", expr_parser(seed));
    suite!(out, "smoothing-linearity", smoothing_linearity(seed));
    suite!(out, "smoothing-bound", smoothing_bound());
    suite!(out, "smoothing-stage-bound", smoothing_stage_bound());
    suite!(out, "smoothing-support", smoothing_support());
    suite!(out, "smoothing-uniform-family", smoothing_uniform_family());
    suite!(out, "tensor-witness", tensor_witness_suite());
    suite!(out, "interpolated-family", interpolated_family_suite());
    suite!(out, "cube-smoothing", cube_smoothing_suite());
    suite!(out, "extension-right-inverse", extension_right_inverse());
    suite!(out, "extension-smoothness", extension_smoothness());
    suite!(out, "extension-fault-detection", extension_fault_detection());
    suite!(out, "extension-operator-norm", extension_operator_norm(seed));
    suite!(out, "extension-axis-order", extension_axis_order());
    suite!(out, "dugundji-properties", dugundji_properties(seed));
    suite!(out, "serialization-determinism", serialization_determinism());
    out
}

fn random_symmetric_form(rng: &mut ChaCha8Rng, d: usize, j: usize) -> SymmetricForm {
    let entries: BTreeMap<Vec<usize>, Vec<f64>> = sorted_tuples(d, j)
        .into_iter()
        .map(|t| (t, vec![rng.random_range(-1.0..1.0)]))
        .collect();
    SymmetricForm::new(j, d, 1, entries).unwrap()
}

fn taylor_polarization(seed: u64) -> Result<SuiteResult> {
    let mut check = Check::new("taylor-polarization", tol::POLARIZE_ROUNDTRIP);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x01);
    let scheme = SampleScheme::default();
    let q = SeminormSpec::CoordinateMax;
    for d in 1..=3usize {
        for j in 1..=4usize {
            for _ in 0..5 {
                let beta = random_symmetric_form(&mut rng, d, j);
                let p = beta.diagonal();
                let back = polarize(&p)?;
                for (key, v) in beta.entries() {
                    let w = back.entry(key);
                    let diff = (v[0] - w[0]).abs();
                    check.observe(diff, &format!("roundtrip d={d} j={j} key={key:?}"));
                }
                // sampled norms: diagonal restriction can only shrink the sup
                let np = polynomial_sup_norm(&p, &q, &scheme);
                let nb = form_sup_norm(&beta, &q, &scheme);
                check.observe(np - nb, &format!("|p| > |beta| at d={d} j={j}"));
                // polarization constant: |beta| <= (2j)^j / j! |p| (dense grid
                // estimate of |p|, with slack for the sampling gap)
                let dense = polynomial_sup_norm_grid(&p, &q, 41);
                let bound = (2.0 * j as f64).powi(j as i32) / factorial(j) * dense;
                check.observe(
                    nb - bound * (1.0 + tol::CONSPOL_SLACK),
                    &format!("conspol d={d} j={j}: {nb} vs {bound}"),
                );
            }
        }
    }
    // Taylor polynomial evaluated at 0 equals the jet value exactly
    let gamma = ExprFunction::parse_components(
        &["exp(x1)*cos(x2)"],
        2,
        BoxUnion::full_space(2),
    )?;
    for _ in 0..20 {
        let x = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let jet = gamma.jet(&x, 2)?;
        let p = crate::calculus::polynomial::taylor_polynomial(&jet, 2)?;
        let diff = (p.eval(&[0.0, 0.0])[0] - jet.value()[0]).abs();
        check.require(diff == 0.0, "P(0) != jet value");
    }
    Ok(check.finish())
}

fn series_arithmetic(seed: u64) -> Result<SuiteResult> {
    let mut check = Check::new("series-arithmetic", tol::JET_ARITH_FD_REL);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x02);
    // composite expressions, derivative orders up to 3, away from poles
    let funcs: [(&str, Box<dyn Fn(f64) -> f64>); 3] = [
        ("exp(sin t) cos t", Box::new(|t: f64| t.sin().exp() * t.cos())),
        ("1/(2+sin t)", Box::new(|t: f64| 1.0 / (2.0 + t.sin()))),
        ("bump profile", Box::new(crate::bump::profile_value)),
    ];
    let build = |idx: usize, t: f64, k: usize| -> Result<Series> {
        let tt = Series::variable(t, k);
        Ok(match idx {
            0 => tt.sin().exp().mul(&tt.cos()),
            1 => Series::constant(2.0, k).add(&tt.sin()).recip()?,
            _ => crate::bump::profile_series(t, k),
        })
    };
    // central differences with one Richardson step (the bump profile's
    // higher derivatives grow fast toward the support edge, so a plain
    // O(h^2) stencil is not accurate enough as an oracle there)
    let fd1 = |f: &dyn Fn(f64) -> f64, t: f64, h: f64| (f(t + h) - f(t - h)) / (2.0 * h);
    let fd2 = |f: &dyn Fn(f64) -> f64, t: f64, h: f64| {
        (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)
    };
    let fd3 = |f: &dyn Fn(f64) -> f64, t: f64, h: f64| {
        (f(t + 2.0 * h) - 2.0 * f(t + h) + 2.0 * f(t - h) - f(t - 2.0 * h))
            / (2.0 * h * h * h)
    };
    let richardson = |coarse: f64, fine: f64| (4.0 * fine - coarse) / 3.0;
    for (idx, (name, f)) in funcs.iter().enumerate() {
        for _ in 0..40 {
            let t = if idx == 2 {
                rng.random_range(-0.75..0.75)
            } else {
                rng.random_range(-0.9..0.9)
            };
            let s = build(idx, t, 3)?;
            let h = tol::FD_STEP_HIGH;
            let d1 = fd1(f, t, tol::FD_STEP_FIRST);
            let d2 = richardson(fd2(f, t, h), fd2(f, t, h / 2.0));
            let d3 = richardson(fd3(f, t, h), fd3(f, t, h / 2.0));
            for (order, fd) in [(1, d1), (2, d2), (3, d3)] {
                let exact = s.derivative(order);
                let scale = exact.abs().max(1.0);
                check.observe(
                    (exact - fd).abs() / scale,
                    &format!("{name} order {order} at t={t}"),
                );
            }
        }
    }
    Ok(check.finish())
}

fn bump_partition(seed: u64) -> Result<SuiteResult> {
    let mut check = Check::new("bump-partition", tol::PARTITION_DERIV_SUM);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x03);
    for d in 1..=3usize {
        // 1000 seeded points per dimension for the value identity
        for _ in 0..1000 {
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
            let mut total = 0.0f64;
            for z in active_lattice(&x) {
                total += partition_value(&z, &x)?;
            }
            let scaled = (total - 1.0).abs() / tol::PARTITION_SUM * tol::PARTITION_DERIV_SUM;
            check.observe(scaled, &format!("partition sum at {x:?}"));
        }
        // derivative sums on a smaller sample (jets are costlier)
        let samples = if d == 3 { 60 } else { 150 };
        for _ in 0..samples {
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
            let jets: Vec<Jet> = active_lattice(&x)
                .iter()
                .map(|z| partition_jet(z, &x, 3))
                .collect::<Result<_>>()?;
            for alpha in multi_indices(d, 3) {
                if alpha.order() == 0 {
                    continue;
                }
                let total: f64 = jets.iter().map(|j| j.partial(&alpha)[0]).sum();
                check.observe(total.abs(), &format!("derivative sum {alpha} at {x:?}"));
            }
        }
    }
    // ||h_0||_{C^l} is reproducible to three significant digits under a seed
    // change of the direction sampler
    let a = h0_cl_norm_with(2, 1, 0, &SampleScheme::new(seed ^ 0x30, 64))?;
    let b = h0_cl_norm_with(2, 1, 0, &SampleScheme::new(seed ^ 0x31, 64))?;
    let rel = (a.value - b.value).abs() / a.value;
    check.observe(
        rel / 5e-4 * tol::PARTITION_DERIV_SUM,
        "h0 norm seed stability",
    );
    Ok(check.finish())
}

fn domain_geometry(seed: u64) -> Result<SuiteResult> {
    let mut check = Check::new("domain-geometry", tol::LIPSCHITZ_SLACK);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x04);
    let mut y = ClosedSet::from_boxes(BoxUnion {
        boxes: vec![
            AxisBox::new(vec![0.0, 0.0], vec![1.0, 1.0]),
            AxisBox::new(vec![2.0, -1.0], vec![3.0, 0.5]),
        ],
        open: false,
    });
    y.points.push(vec![-2.0, -2.0]);
    // d_Y is 1-Lipschitz on 1000 seeded pairs
    for _ in 0..1000 {
        let a = [rng.random_range(-4.0..5.0), rng.random_range(-4.0..5.0)];
        let b = [rng.random_range(-4.0..5.0), rng.random_range(-4.0..5.0)];
        let da = y.distance(&a)?;
        let db = y.distance(&b)?;
        let dist = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
        check.observe((da - db).abs() - dist, "Lipschitz violation");
    }
    // cube containment agrees with a dense membership sample: whenever the
    // exact test says "inside", no sampled cube point may be outside Ω
    let omega = BoxUnion {
        boxes: vec![
            AxisBox::new(vec![-1.0, -1.0], vec![0.6, 1.0]),
            AxisBox::new(vec![0.2, -1.0], vec![1.5, 1.0]),
        ],
        open: true,
    };
    for _ in 0..1000 {
        let n = rng.random_range(2u32..8);
        let z = [
            rng.random_range(-(2 * n as i64)..2 * n as i64),
            rng.random_range(-(2 * n as i64)..2 * n as i64),
        ];
        let inside = cube_in_domain(&z, n, &omega);
        if inside {
            let c = [z[0] as f64 / n as f64, z[1] as f64 / n as f64];
            for p in grid_points(&AxisBox::cube(&c, 1.0 / n as f64), 5) {
                check.require(omega.contains(&p), &format!("sampled escape at {p:?}"));
            }
        }
    }
    // exhaustion margins hold exactly for the default construction
    for omega in [
        BoxUnion::open_box(vec![0.0], vec![1.0]),
        BoxUnion::open_box(vec![-2.0, -2.0], vec![2.0, 2.0]),
        BoxUnion {
            boxes: vec![
                AxisBox::new(vec![0.0], vec![1.0]),
                AxisBox::new(vec![0.8], vec![2.5]),
            ],
            open: true,
        },
    ] {
        let ex = default_exhaustion(&omega, 4)?;
        check.require(ex.margins_hold(), "margin failure");
        check.require(
            ex.stages.windows(2).all(|w| w[0].scale < w[1].scale),
            "scales not increasing",
        );
    }
    Ok(check.finish())
}

fn expr_parser(seed: u64) -> Result<SuiteResult> {
    let mut check = Check::new("expr-parser", tol::EXPR_FD_REL);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x05);
    for entry in corpus() {
        for text in &entry.components {
            // print/parse round trip is exact on the corpus
            let e1 = parse(text)?;
            let e2 = parse(&e1.to_string())?;
            check.require(e1 == e2, &format!("round trip failed for {text}"));
            // order-1 jets match central differences at 200 seeded points
            for _ in 0..200 {
                let x: Vec<f64> = (0..entry.dim)
                    .map(|_| rng.random_range(-1.5..1.5))
                    .collect();
                let jet = e1.jet(&x, 1)?;
                for axis in 0..entry.dim {
                    let h = tol::FD_STEP_FIRST;
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[axis] += h;
                    xm[axis] -= h;
                    let fd = (e1.eval(&xp)? - e1.eval(&xm)?) / (2.0 * h);
                    let exact = jet.partial(&MultiIndex::unit(entry.dim, axis))[0];
                    let scale = exact.abs().max(1.0);
                    check.observe(
                        (fd - exact).abs() / scale,
                        &format!("{text} axis {axis} at {x:?}"),
                    );
                }
            }
        }
    }
    Ok(check.finish())
}

fn smoothing_linearity(seed: u64) -> Result<SuiteResult> {
    let mut check = Check::new("smoothing-linearity", tol::LINEARITY);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x06);
    for d in 1..=2usize {
        let entries = corpus_dim(d);
        let scalar: Vec<&CorpusEntry> = entries
            .iter()
            .filter(|e| e.target_dim() == 1)
            .collect();
        let gamma = scalar[0].provider()?;
        let eta = scalar[1].provider()?;
        let omega = scalar[0].omega();
        let a = rng.random_range(-2.0..2.0);
        let b = rng.random_range(-2.0..2.0);
        let combo = LinearCombinationProvider {
            a,
            gamma: gamma.clone(),
            b,
            eta: eta.clone(),
        };
        let k_box = AxisBox::new(vec![-1.0; d], vec![1.0; d]);
        let window = BoxUnion {
            boxes: vec![k_box.inflate(0.25)],
            open: false,
        };
        let n = 8;
        let s_combo = build_stilde(&combo, 1, n, &omega, &window)?;
        let s_gamma = build_stilde(&gamma, 1, n, &omega, &window)?;
        let s_eta = build_stilde(&eta, 1, n, &omega, &window)?;
        for x in grid_points(&k_box, 7) {
            let lhs = s_combo.value(&x)?[0];
            let rhs = a * s_gamma.value(&x)?[0] + b * s_eta.value(&x)?[0];
            check.observe((lhs - rhs).abs(), &format!("d={d} x={x:?}"));
        }
    }
    Ok(check.finish())
}

fn smoothing_bound() -> Result<SuiteResult> {
    let mut check = Check::new("smoothing-bound", 0.0);
    let seminorms = [
        SeminormSpec::CoordinateMax,
        SeminormSpec::Euclidean,
        SeminormSpec::WeightedMax {
            weights: vec![2.0, 0.5, 1.0],
        },
    ];
    for d in 1..=2usize {
        for q in &seminorms {
            // the weighted seminorm needs m = 3 components
            let entries: Vec<_> = corpus_dim(d)
                .into_iter()
                .filter(|e| {
                    !matches!(q, SeminormSpec::WeightedMax { .. }) || e.target_dim() == 3
                })
                .collect();
            if entries.is_empty() {
                continue;
            }
            let cert = bound_certificate(&entries, 1, 8, q)?;
            for row in &cert.rows {
                check.observe(
                    row.gateaux_ratio - cert.constant,
                    &format!("{} gateaux ratio {} ({q:?})", row.name, row.gateaux_ratio),
                );
                check.observe(
                    row.partial_ratio - cert.constant,
                    &format!("{} partial ratio {} ({q:?})", row.name, row.partial_ratio),
                );
            }
        }
    }
    Ok(check.finish())
}

fn smoothing_stage_bound() -> Result<SuiteResult> {
    let mut check = Check::new("smoothing-stage-bound", 0.0);
    let q = SeminormSpec::CoordinateMax;
    let scheme = SampleScheme::default();
    let ell = 1;
    for entry in corpus_dim(1) {
        let omega = entry.omega();
        let ex = default_exhaustion(&omega, 4)?;
        let gamma = entry.provider()?;
        let h0 = crate::bump::h0_cl_norm(1, ell)?;
        let constant = crate::harness::reports::bound_constant(1, ell, h0.value);
        for stage in 1..=2usize {
            let s = build_sn(&gamma, ell, &ex, stage)?;
            let k_n = &ex.stage(stage)?.set;
            let k_next = &ex.stage(stage + 1)?.set;
            let pts_n = grid_points(&k_n.boxes[0], tol::REPORT_GRID);
            let pts_next = grid_points(&k_next.boxes[0], tol::REPORT_GRID);
            let num = seminorm_cl_gateaux(&s, &pts_n, ell, &q, &scheme)?;
            let den = seminorm_cl_gateaux(&gamma, &pts_next, ell, &q, &scheme)?;
            check.observe(
                num / den - constant,
                &format!("{} stage {stage}: ratio {}", entry.name, num / den),
            );
        }
    }
    Ok(check.finish())
}

/// A product bump supported in `center ± radius` (exact zero jets outside),
/// the compactly supported test input for the support suite.
pub struct BumpProvider {
    pub center: Vec<f64>,
    pub radius: f64,
    domain: BoxUnion,
}

impl BumpProvider {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        let d = center.len();
        BumpProvider {
            center,
            radius,
            domain: BoxUnion::full_space(d),
        }
    }
}

impl JetProvider for BumpProvider {
    fn dim(&self) -> usize {
        self.center.len()
    }
    fn target_dim(&self) -> usize {
        1
    }
    fn order(&self) -> usize {
        crate::calculus::multi_index::MAX_ORDER
    }
    fn domain(&self) -> &BoxUnion {
        &self.domain
    }
    fn jet(&self, x: &[f64], k: usize) -> Result<Jet> {
        let s = 1.0 / self.radius;
        let factors: Vec<Vec<f64>> = x
            .iter()
            .zip(&self.center)
            .map(|(&xi, &ci)| {
                let series = crate::bump::profile_series(s * (xi - ci), k);
                (0..=k)
                    .map(|j| series.derivative(j) * s.powi(j as i32))
                    .collect()
            })
            .collect();
        Ok(Jet::from_axis_products(x.to_vec(), k, &factors))
    }
}

fn smoothing_support() -> Result<SuiteResult> {
    let mut check = Check::new("smoothing-support", 0.0);
    let omega = BoxUnion::open_box(vec![-2.0], vec![2.0]);
    let ex = default_exhaustion(&omega, 5)?;
    let gamma = ExprFunction::parse_components(&["sin(x1)"], 1, omega.clone())?;
    // every stage's support sits inside interior(K_{j+1}), exactly
    for stage in 1..=3usize {
        let s = build_sn(&gamma, 1, &ex, stage)?;
        let interior = ex.stage(stage + 1)?.set.shrink_open(0.0);
        check.require(
            s.support_within(&interior),
            &format!("stage {stage} support escapes interior(K_{})", stage + 1),
        );
    }
    // a γ supported in K_i keeps all later stages inside interior(K_{i+1}):
    // take a bump well inside K_1 = [-1.5, 1.5]
    let i = 1usize;
    let supported = BumpProvider::new(vec![0.0], 1.0); // supp = [-1, 1] ⊂ K_1
    let interior_next = ex.stage(i + 1)?.set.shrink_open(0.0);
    for stage in i..=3usize {
        let s = build_sn(&supported, 1, &ex, stage)?;
        let pruned = s.pruned();
        check.require(
            pruned.support_within(&interior_next),
            &format!("supported-input stage {stage} escapes interior(K_{})", i + 1),
        );
    }
    Ok(check.finish())
}

fn smoothing_uniform_family() -> Result<SuiteResult> {
    let mut check = Check::new("smoothing-uniform-family", 0.0);
    let omega = BoxUnion::open_box(vec![-2.0], vec![2.0]);
    let k_box = AxisBox::new(vec![-1.0], vec![1.0]);
    let q = SeminormSpec::CoordinateMax;
    let points = grid_points(&k_box, tol::REPORT_GRID);
    let scales = [4u32, 8, 16, 32];
    let mut family_errors = Vec::new();
    for &n in &scales {
        let window = BoxUnion {
            boxes: vec![k_box.inflate(1.0 / n as f64)],
            open: false,
        };
        let mut worst = 0.0f64;
        for si in 0..11 {
            let s_param = 1.0 + si as f64 / 10.0;
            let gamma = ExprFunction::parse_components(
                &[&format!("sin({s_param}*x1)")],
                1,
                omega.clone(),
            )?;
            let sm = build_stilde(&gamma, 1, n, &omega, &window)?;
            let errs = cl_errors(&gamma, &sm, &points, 1, &q)?;
            worst = worst.max(errs[1]);
        }
        family_errors.push(worst);
    }
    for w in family_errors.windows(2) {
        check.observe(w[1] - w[0], &format!("family error not decreasing: {family_errors:?}"));
    }
    Ok(check.finish())
}

fn tensor_witness_suite() -> Result<SuiteResult> {
    let mut check = Check::new("tensor-witness", tol::TENSOR_RECONSTRUCTION);
    let k_box = AxisBox::new(vec![-1.0], vec![1.0]);
    let window = BoxUnion {
        boxes: vec![k_box.inflate(0.25)],
        open: false,
    };
    for entry in corpus_dim(1) {
        let gamma = entry.provider()?;
        let omega = entry.omega();
        let s = build_stilde(&gamma, 1, 8, &omega, &window)?;
        let w = tensor_witness(&s);
        check.require(
            w.rank <= entry.target_dim(),
            &format!("{}: rank {} > m {}", entry.name, w.rank, entry.target_dim()),
        );
        for x in grid_points(&k_box, 100) {
            let rec = w.eval(&x)?;
            let dir = s.value(&x)?;
            for (a, b) in rec.iter().zip(&dir) {
                check.observe((a - b).abs(), &format!("{} at {x:?}", entry.name));
            }
        }
    }
    // the rank-one corpus entry factors through one vector
    let rank_one = corpus()
        .into_iter()
        .find(|e| e.name == "rank-one-vec")
        .unwrap();
    let gamma = rank_one.provider()?;
    let s = build_stilde(&gamma, 1, 8, &rank_one.omega(), &window)?;
    check.require(tensor_witness(&s).rank == 1, "rank-one input has rank != 1");
    Ok(check.finish())
}

fn interpolated_family_suite() -> Result<SuiteResult> {
    let mut check = Check::new("interpolated-family", 0.0);
    let omega = BoxUnion::open_box(vec![-2.0], vec![2.0]);
    let k_box = AxisBox::new(vec![-1.0], vec![1.0]);
    let window = BoxUnion {
        boxes: vec![k_box.inflate(0.25)],
        open: false,
    };
    let gamma = ExprFunction::parse_components(&["sin(x1)"], 1, omega.clone())?;
    let schedule = Schedule::doubling(5);
    // knots reproduce H_j exactly, bit for bit
    for (j, &t_j) in schedule.t.iter().enumerate() {
        let s_t = interpolated(&gamma, 1, &omega, &window, t_j, &schedule)?;
        let h_j = build_stilde(&gamma, 1, schedule.n[j], &omega, &window)?;
        check.require(
            s_t.to_json() == h_j.to_json(),
            &format!("knot t_{} differs from H_{}", j + 1, j + 1),
        );
    }
    // collar constancy: five points inside each collar give identical output
    for j in 0..schedule.depth() - 1 {
        let t_hi = schedule.t[j];
        let t_lo = schedule.t[j + 1];
        let span = t_hi - t_lo;
        let lower_ref = interpolated(&gamma, 1, &omega, &window, t_lo + 0.01 * span, &schedule)?;
        let upper_ref = interpolated(&gamma, 1, &omega, &window, t_lo + 0.99 * span, &schedule)?;
        for i in 0..5 {
            let s_low = t_lo + span * (0.02 + 0.04 * i as f64); // s in (0, 1/4)
            let s_high = t_lo + span * (0.80 + 0.04 * i as f64); // s in (3/4, 1)
            let low = interpolated(&gamma, 1, &omega, &window, s_low, &schedule)?;
            let high = interpolated(&gamma, 1, &omega, &window, s_high, &schedule)?;
            check.require(
                low.to_json() == lower_ref.to_json(),
                &format!("lower collar not constant in ({t_lo}, {t_hi}]"),
            );
            check.require(
                high.to_json() == upper_ref.to_json(),
                &format!("upper collar not constant in ({t_lo}, {t_hi}]"),
            );
        }
    }
    // in the genuine transition region the output is the pointwise convex
    // combination ρ H_j + (1-ρ) H_{j+1}
    let t_mid = schedule.t[1] + 0.5 * (schedule.t[0] - schedule.t[1]);
    let blended = interpolated(&gamma, 1, &omega, &window, t_mid, &schedule)?;
    let h1 = build_stilde(&gamma, 1, schedule.n[0], &omega, &window)?;
    let h2 = build_stilde(&gamma, 1, schedule.n[1], &omega, &window)?;
    let rho = crate::smoothing::collar(0.5);
    check.require(rho > 0.0 && rho < 1.0, "collar(1/2) not in (0,1)");
    for x in grid_points(&k_box, 9) {
        let lhs = blended.value(&x)?[0];
        let rhs = rho * h1.value(&x)?[0] + (1.0 - rho) * h2.value(&x)?[0];
        check.require(
            (lhs - rhs).abs() <= 1e-12,
            &format!("blend mismatch at {x:?}: {lhs} vs {rhs}"),
        );
    }
    // error decreases along the schedule tail
    let q = SeminormSpec::CoordinateMax;
    let points = grid_points(&k_box, tol::REPORT_GRID);
    let mut errs = Vec::new();
    for &t in &schedule.t {
        let s_t = interpolated(&gamma, 1, &omega, &window, t, &schedule)?;
        errs.push(cl_errors(&gamma, &s_t, &points, 1, &q)?[1]);
    }
    for w in errs.windows(2) {
        check.observe(w[1] - w[0], &format!("tail errors not decreasing: {errs:?}"));
    }
    Ok(check.finish())
}

fn cube_smoothing_suite() -> Result<SuiteResult> {
    let mut check = Check::new("cube-smoothing", tol::CUBE_REPRODUCTION);
    let cube1 = BoxUnion::closed_box(vec![0.0], vec![1.0]);
    // polynomials of degree ≤ l are reproduced on the whole closed cube once
    // base points stay inside the pure-reflection collar (n = 32 ≥ 8(l+1))
    let poly: Arc<dyn JetProvider> = Arc::new(ExprFunction::parse_components(
        &["0.25+0.5*x1-0.125*x1^2"],
        1,
        cube1.clone(),
    )?);
    let s = cube_smoothing(&poly, 2, 32)?;
    for x in grid_points(&AxisBox::new(vec![0.0], vec![1.0]), 41) {
        let err = (s.value(&x)?[0] - poly.value(&x)?[0]).abs();
        check.observe(err, &format!("poly reproduction at {x:?}"));
    }
    // linearity of the whole pipeline at grid points
    let f: Arc<dyn JetProvider> = Arc::new(ExprFunction::parse_components(
        &["exp(x1)"],
        1,
        cube1.clone(),
    )?);
    let g: Arc<dyn JetProvider> = Arc::new(ExprFunction::parse_components(
        &["sin(3*x1)"],
        1,
        cube1.clone(),
    )?);
    let combo: Arc<dyn JetProvider> = Arc::new(LinearCombinationProvider {
        a: 2.0,
        gamma: f.clone(),
        b: -0.5,
        eta: g.clone(),
    });
    let sf = cube_smoothing(&f, 1, 8)?;
    let sg = cube_smoothing(&g, 1, 8)?;
    let sc = cube_smoothing(&combo, 1, 8)?;
    for x in grid_points(&AxisBox::new(vec![0.0], vec![1.0]), 21) {
        let lhs = sc.value(&x)?[0];
        let rhs = 2.0 * sf.value(&x)?[0] - 0.5 * sg.value(&x)?[0];
        check.observe(
            (lhs - rhs).abs() / tol::CUBE_REPRODUCTION * tol::LINEARITY,
            "cube smoothing linearity",
        );
    }
    // C^l error on the cube decreases for exp over n ∈ {4, 8, 16}
    let q = SeminormSpec::CoordinateMax;
    let pts = grid_points(&AxisBox::new(vec![0.0], vec![1.0]), tol::REPORT_GRID);
    let mut errs = Vec::new();
    for n in [4u32, 8, 16] {
        let s = cube_smoothing(&f, 1, n)?;
        errs.push(cl_errors(&f, &s, &pts, 1, &q)?[1]);
    }
    for w in errs.windows(2) {
        check.observe(
            (w[1] - w[0]) / tol::CUBE_REPRODUCTION * tol::LINEARITY,
            &format!("cube convergence not decreasing: {errs:?}"),
        );
    }
    Ok(check.finish())
}

fn cube_entry_provider(entry: &CorpusEntry) -> Result<Arc<dyn JetProvider>> {
    let cube = BoxUnion::closed_box(vec![0.0; entry.dim], vec![1.0; entry.dim]);
    Ok(Arc::new(ExprFunction::parse_components(
        &entry.components,
        entry.dim,
        cube,
    )?))
}

fn extension_right_inverse() -> Result<SuiteResult> {
    let mut check = Check::new("extension-right-inverse", tol::RESTRICTION);
    for entry in corpus() {
        let d = entry.dim;
        let gamma = cube_entry_provider(&entry)?;
        let ell = 1;
        let cube_grid = grid_points(&AxisBox::new(vec![0.0; d], vec![1.0; d]), 6);
        // halfspace, corner, cube: the exact branch forwards to the source
        let ops: Vec<(&str, ReflectionExtension)> = vec![
            ("halfspace", extend_halfspace(&gamma, 0, ell)?),
            ("corner", extend_corner(&gamma, d.min(2), ell)?),
            ("cube", extend_cube(&gamma, ell)?),
        ];
        for (name, op) in &ops {
            for x in &cube_grid {
                let a = op.value(x)?;
                let b = gamma.value(x)?;
                let err = a
                    .iter()
                    .zip(&b)
                    .map(|(u, v)| (u - v).abs())
                    .fold(0.0, f64::max);
                check.observe(err, &format!("{} {} at {x:?}", entry.name, name));
            }
        }
        // projection
        let proj = ProjectionExtension::new(gamma.clone(), vec![0.25]);
        for x in &cube_grid {
            let mut amb = x.clone();
            amb.push(0.25);
            let a = proj.value(&amb)?;
            let b = gamma.value(x)?;
            let err = a
                .iter()
                .zip(&b)
                .map(|(u, v)| (u - v).abs())
                .fold(0.0, f64::max);
            check.observe(err, &format!("{} projection at {x:?}", entry.name));
        }
        // Dugundji restriction branch
        let y = ClosedSet::from_boxes(BoxUnion::closed_box(vec![0.0; d], vec![1.0; d]));
        let shells = ShellStructure::new(y)?;
        for x in &cube_grid {
            let a = shells.eval(gamma.as_ref(), x)?;
            let b = gamma.value(x)?;
            let err = a
                .iter()
                .zip(&b)
                .map(|(u, v)| (u - v).abs())
                .fold(0.0, f64::max);
            check.observe(err, &format!("{} dugundji at {x:?}", entry.name));
        }
    }
    Ok(check.finish())
}

fn extension_smoothness() -> Result<SuiteResult> {
    let mut check = Check::new("extension-smoothness", tol::CROSS_FACE_REL);
    let h = tol::FACE_STEP;
    for entry in corpus() {
        let d = entry.dim;
        let ell = 2.min(entry.dim + 1);
        let gamma = cube_entry_provider(&entry)?;
        let ext = extend_cube(&gamma, ell)?;
        // compare exact jets just inside and just outside the x1 = 0 face
        let tangentials: Vec<Vec<f64>> = if d == 1 {
            vec![vec![]]
        } else {
            vec![vec![0.3], vec![0.7]]
        };
        for tang in tangentials {
            let mut inside = vec![h];
            inside.extend(tang.iter());
            let mut outside = vec![-h];
            outside.extend(tang.iter());
            let jp = ext.jet(&inside, ell)?;
            let jm = ext.jet(&outside, ell)?;
            for (alpha, vp) in jp.iter() {
                let vm = jm.partial(alpha);
                for (a, b) in vp.iter().zip(&vm) {
                    let scale = a.abs().max(1.0);
                    check.observe(
                        (a - b).abs() / scale,
                        &format!("{} face jet {alpha}", entry.name),
                    );
                }
            }
        }
    }
    Ok(check.finish())
}

fn extension_fault_detection() -> Result<SuiteResult> {
    // the mutation check: a 1e-3 weight perturbation must break the
    // cross-face value match; the suite passes when the fault is detected
    let mut check = Check::new("extension-fault-detection", 0.0);
    let cube = BoxUnion::closed_box(vec![0.0], vec![1.0]);
    let gamma: Arc<dyn JetProvider> = Arc::new(ExprFunction::parse_components(
        &["exp(x1)"],
        1,
        cube,
    )?);
    let ell = 1;
    let ax = AxisExtension::with_default_nodes(ell)?.with_perturbed_weight(0, 1e-3);
    let faces = vec![AxisFaces {
        lower: true,
        upper: None,
    }];
    let ext = ReflectionExtension::new(gamma, ell, faces, ax)?;
    let h = tol::FD_STEP_FIRST;
    let a = ext.value(&[h])?[0];
    let b = ext.value(&[-h])?[0];
    let mismatch = (a - b).abs() / a.abs().max(1.0);
    check.require(
        mismatch > tol::CROSS_FACE_REL,
        &format!("fault not detected: mismatch {mismatch}"),
    );
    Ok(check.finish())
}

fn extension_operator_norm(seed: u64) -> Result<SuiteResult> {
    let mut check = Check::new("extension-operator-norm", tol::OPNORM_STABILITY_REL);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x07);
    let q = SeminormSpec::CoordinateMax;
    let scheme = SampleScheme::default();
    let ell = 1;
    let fit = |entries: &[(usize, f64)]| -> Result<f64> {
        let all = corpus();
        let mut worst = 0.0f64;
        for &(idx, scale) in entries {
            let entry = &all[idx];
            let d = entry.dim;
            let base = cube_entry_provider(entry)?;
            let gamma: Arc<dyn JetProvider> = Arc::new(crate::provider::ScaledProvider {
                source: base,
                scalar: scale,
            });
            let ext = extend_cube(&gamma, ell)?;
            let ambient = AxisBox::new(vec![-0.2; d], vec![1.2; d]);
            let source = AxisBox::new(vec![0.0; d], vec![1.0; d]);
            let num = seminorm_cl_gateaux(&ext, &grid_points(&ambient, 7), ell, &q, &scheme)?;
            let den =
                seminorm_cl_gateaux(&gamma, &grid_points(&source, 7), ell, &q, &scheme)?;
            worst = worst.max(num / den);
        }
        Ok(worst)
    };
    let baseline: Vec<(usize, f64)> = (0..corpus().len()).map(|i| (i, 1.0)).collect();
    let c_o = fit(&baseline)?;
    check.require(c_o.is_finite() && c_o >= 1.0 - 1e-9, "C_O not a sane bound");
    // reshuffle: permute the corpus and rescale each function; the fitted
    // constant is scale-invariant so it must be stable within ±10%
    let mut shuffled = baseline.clone();
    for i in (1..shuffled.len()).rev() {
        let j = rng.random_range(0..=i);
        shuffled.swap(i, j);
    }
    for s in shuffled.iter_mut() {
        s.1 = rng.random_range(0.5..2.0);
    }
    let c_o_shuffled = fit(&shuffled)?;
    check.observe(
        (c_o - c_o_shuffled).abs() / c_o,
        &format!("C_O {c_o} vs shuffled {c_o_shuffled}"),
    );
    Ok(check.finish())
}

/// Coordinate-swapped view of a 2-D provider (for the axis-order check).
struct Swapped(Arc<dyn JetProvider>, BoxUnion);

impl JetProvider for Swapped {
    fn dim(&self) -> usize {
        2
    }
    fn target_dim(&self) -> usize {
        self.0.target_dim()
    }
    fn order(&self) -> usize {
        self.0.order()
    }
    fn domain(&self) -> &BoxUnion {
        &self.1
    }
    fn jet(&self, x: &[f64], k: usize) -> Result<Jet> {
        let sw = [x[1], x[0]];
        let inner = self.0.jet(&sw, k)?;
        let mut table = BTreeMap::new();
        for (alpha, v) in inner.iter() {
            let swapped = MultiIndex::new(vec![alpha.entries()[1], alpha.entries()[0]]);
            table.insert(swapped, v.clone());
        }
        Jet::new(x.to_vec(), k, table)
    }
}

fn extension_axis_order() -> Result<SuiteResult> {
    // conjugating the cube extension by the coordinate swap changes the
    // axis processing order; on the open interior both reproduce γ
    let mut check = Check::new("extension-axis-order", tol::AXIS_ORDER_INDEPENDENCE);
    let cube = BoxUnion::closed_box(vec![0.0, 0.0], vec![1.0, 1.0]);
    let gamma: Arc<dyn JetProvider> = Arc::new(ExprFunction::parse_components(
        &["exp(x1)*cos(x2)"],
        2,
        cube.clone(),
    )?);
    let direct = extend_cube(&gamma, 1)?;
    let swapped_src: Arc<dyn JetProvider> = Arc::new(Swapped(gamma.clone(), cube.clone()));
    let other = extend_cube(&swapped_src, 1)?;
    for x in grid_points(&AxisBox::new(vec![0.05, 0.05], vec![0.95, 0.95]), 7) {
        let a = direct.value(&x)?[0];
        let b = other.value(&[x[1], x[0]])?[0];
        check.observe((a - b).abs(), &format!("axis order mismatch at {x:?}"));
    }
    Ok(check.finish())
}

fn dugundji_properties(seed: u64) -> Result<SuiteResult> {
    let mut check = Check::new("dugundji-properties", tol::DUGUNDJI_WEIGHT_SUM);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x08);
    let mut y = ClosedSet::from_boxes(BoxUnion::closed_box(vec![0.0, 0.0], vec![1.0, 1.0]));
    y.points.push(vec![-1.5, -1.5]);
    let shells = ShellStructure::new(y)?;
    for _ in 0..300 {
        let x = [rng.random_range(-3.0..4.0), rng.random_range(-3.0..4.0)];
        if shells.target().distance(&x)? == 0.0 {
            continue;
        }
        let (_, _, weights, _) = shells.weights_at(&x)?;
        let total: f64 = weights.iter().map(|w| w.weight).sum();
        check.observe((total - 1.0).abs(), &format!("weight sum at {x:?}"));
        for w in &weights {
            check.observe(-w.weight, "negative weight");
            let bound = 2f64.powi(-w.anchor.shell + 1);
            check.require(
                w.anchor.distance < bound,
                &format!("anchor bound at {x:?} cell {:?}", w.cell),
            );
        }
    }
    // report-level checks on an expression oracle
    let gamma = ExprFunction::parse_components(
        &["sin(3*x1)*exp(x2)", "x1+x2", "cos(x1*x2)"],
        2,
        BoxUnion::full_space(2),
    )?;
    let window = BoxUnion::closed_box(vec![-1.0, -1.0], vec![2.0, 2.0]);
    let report = dugundji_report(&shells, &gamma, &window, 13, &SeminormSpec::CoordinateMax)?;
    check.observe(report.max_restriction_error, "restriction error");
    check.observe(
        report.sup_ratio - 1.0 - tol::DUGUNDJI_SUP_RATIO_SLACK,
        "sup ratio",
    );
    check.require(
        report.rows.iter().all(|r| r.hull_ok),
        "hull containment failed",
    );
    let first = report.continuity.first().map(|c| c.1).unwrap_or(0.0);
    let last = report.continuity.last().map(|c| c.1).unwrap_or(0.0);
    check.require(
        last <= 0.1 * first + 1e-9,
        &format!("continuity trend first={first} last={last}"),
    );
    Ok(check.finish())
}

fn serialization_determinism() -> Result<SuiteResult> {
    let mut check = Check::new("serialization-determinism", 0.0);
    let entry = &corpus_dim(1)[1];
    let gamma = entry.provider()?;
    let omega = entry.omega();
    let k_box = AxisBox::new(vec![-1.0], vec![1.0]);
    // identical runs produce byte-identical CSV
    let rep1 = convergence_report(
        &gamma,
        &omega,
        1,
        &k_box,
        &SeminormSpec::CoordinateMax,
        &[4, 8],
    )?;
    let rep2 = convergence_report(
        &gamma,
        &omega,
        1,
        &k_box,
        &SeminormSpec::CoordinateMax,
        &[4, 8],
    )?;
    check.require(rep1.to_csv() == rep2.to_csv(), "convergence CSV differs");
    // smoothed-function JSON round trip preserves evaluation and bytes
    let window = BoxUnion {
        boxes: vec![k_box.inflate(0.25)],
        open: false,
    };
    let s = build_stilde(&gamma, 1, 8, &omega, &window)?;
    let j = s.to_json();
    // through the string form: parsing must restore bit-identical floats
    let text = j.to_string();
    let reparsed: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| crate::error::Error::Config(e.to_string()))?;
    let back = SmoothedFunction::from_json(&reparsed)?;
    check.require(j == back.to_json(), "JSON round trip changed bytes");
    for x in [-0.7, 0.0, 0.9] {
        check.require(
            s.value(&[x])? == back.value(&[x])?,
            "JSON round trip changed evaluation",
        );
    }
    Ok(check.finish())
}
