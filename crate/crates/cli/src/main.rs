//! `smoothext` — build and inspect smoothing and extension operators for
//! C^l functions on box domains.
//!
//! Expressions use variables `x1..xd`, the functions `sin`, `cos`, `exp`,
//! real literals, `+ - * /`, unary minus, parentheses, and `^k` with a
//! non-negative integer k. Domains are JSON box unions:
//! `{"boxes": [[[lo,hi], ...], ...], "open": bool}` with `null` for ±∞.
//!
//! All floating output is printed with 17 significant digits; identical
//! invocations produce identical output bytes. Timing goes to stderr.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use smoothext_core::bump::PROFILE_DEFINITION;
use smoothext_core::calculus::SeminormSpec;
use smoothext_core::domains::{grid_points, AxisBox, BoxUnion, ClosedSet};
use smoothext_core::dugundji::{dugundji_report, ShellStructure};
use smoothext_core::expr::ExprFunction;
use smoothext_core::extension::{extend_corner, extend_cube, extend_halfspace};
use smoothext_core::harness::reports::{
    bound_certificate, constant_growth_table, convergence_report,
};
use smoothext_core::harness::{corpus_dim, property_suites};
use smoothext_core::provider::JetProvider;
use smoothext_core::smoothing::{build_stilde, missing_cubes};

const GRAMMAR_HELP: &str = "\
Expression grammar (used by every --fn flag):
  expr   := term (('+' | '-') term)*
  term   := unary (('*' | '/') unary)*
  unary  := '-' unary | power
  power  := atom ('^' nat)*            (non-negative integer exponents)
  atom   := number | sin(expr) | cos(expr) | exp(expr) | x<k> | (expr)
Variables are x1..xd. Repeat --fn for vector-valued functions.

Domain/window JSON: {\"boxes\": [[[lo, hi], ...], ...], \"open\": bool}
with null bounds for +-infinity. Closed sets for `dugundji` add an optional
\"points\": [[...], ...] list and wrap the union as {\"boxes\": <union>, ...}.

CSV dialect: comma separated, dot decimals, one header row, LF endings;
lines starting with '#' carry report provenance. Floating output uses 17
significant digits and identical invocations produce identical bytes.";

#[derive(Parser)]
#[command(
    name = "smoothext",
    about = "Smoothing and extension operators for C^l functions on box domains",
    version,
    disable_help_subcommand = true,
    after_help = GRAMMAR_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the lattice smoothing operator for an expression and emit the
    /// closed-form result as JSON
    Smooth(SmoothArgs),
    /// Extend a function across flat faces by weighted reflections and emit
    /// grid values with boundary-smoothness diagnostics
    Extend(ExtendArgs),
    /// Extend a continuous function off a closed set and emit the value CSV
    /// with hull and sup-ratio checks
    Dugundji(DugundjiArgs),
    /// Convergence, bound, or rate report as CSV
    Report(ReportArgs),
    /// Run every property suite; exit code reflects the verdict
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct SmoothArgs {
    /// Component expression; repeat the flag for vector-valued functions
    #[arg(long = "fn", required = true)]
    functions: Vec<String>,
    /// Domain Ω as a JSON box-union file
    #[arg(long)]
    domain: PathBuf,
    /// Taylor order l
    #[arg(long)]
    order: usize,
    /// Lattice scale n
    #[arg(long)]
    scale: u32,
    /// Bounded evaluation window as a JSON box-union file
    #[arg(long)]
    window: PathBuf,
    /// Write the serialized operator here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a CSV of values over a grid on the window
    #[arg(long)]
    grid_csv: Option<PathBuf>,
    /// Grid points per axis for --grid-csv
    #[arg(long, default_value_t = 11)]
    grid: usize,
}

#[derive(Args)]
struct ExtendArgs {
    /// Component expression; repeat for vector-valued functions
    #[arg(long = "fn", required = true)]
    functions: Vec<String>,
    /// Source geometry: `halfspace`, `cube`, or `corner:M`
    #[arg(long)]
    source: String,
    /// Extension order l
    #[arg(long)]
    order: usize,
    /// Domain dimension d
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Grid points per axis over the ambient window
    #[arg(long, default_value_t = 9)]
    grid: usize,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DugundjiArgs {
    /// Component expression; repeat for vector-valued functions
    #[arg(long = "fn", required = true)]
    functions: Vec<String>,
    /// Closed set Y: JSON `{"boxes": ..., "open": false, "points": [[..]]}`
    #[arg(long)]
    set: PathBuf,
    /// Bounded query window as a JSON box-union file
    #[arg(long)]
    window: PathBuf,
    /// Grid points per axis
    #[arg(long, default_value_t = 11)]
    grid: usize,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// `convergence`, `bound`, or `rate`
    #[arg(long)]
    kind: String,
    /// Component expression (convergence/rate)
    #[arg(long = "fn")]
    functions: Vec<String>,
    /// Domain Ω as a JSON box-union file (convergence/rate)
    #[arg(long)]
    domain: Option<PathBuf>,
    /// Order l
    #[arg(long, default_value_t = 1)]
    order: usize,
    /// Comma-separated scale list
    #[arg(long, default_value = "4,8,16,32")]
    scales: String,
    /// Corpus dimension (bound)
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Scale n (bound)
    #[arg(long, default_value_t = 8)]
    scale: u32,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Seed for the sampled checks
    #[arg(long, default_value_t = 0xC0FFEE)]
    seed: u64,
}

fn read_box_union(path: &PathBuf) -> Result<BoxUnion> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading domain file {}", path.display()))?;
    let v: BoxUnion = serde_json::from_str(&text)
        .with_context(|| format!("parsing box union from {}", path.display()))?;
    Ok(v)
}

fn parse_function(components: &[String], dim: usize, domain: BoxUnion) -> Result<ExprFunction> {
    let texts: Vec<&str> = components.iter().map(|s| s.as_str()).collect();
    ExprFunction::parse_components(&texts, dim, domain)
        .map_err(|e| anyhow!("invalid --fn expression: {e}"))
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn run_smooth(args: &SmoothArgs) -> Result<i32> {
    let omega = read_box_union(&args.domain)?;
    let window = read_box_union(&args.window)?;
    let dim = omega.dim();
    let gamma = parse_function(&args.functions, dim, omega.clone())?;
    let started = Instant::now();
    let s = build_stilde(&gamma, args.order, args.scale, &omega, &window)?;
    let missing = missing_cubes(args.scale, &omega, &window)?;
    if !missing.is_empty() {
        eprintln!(
            "warning: {} lattice cubes touching the window escape the domain \
             (partition incomplete there): {:?}",
            missing.len(),
            missing
        );
    }
    let json = serde_json::to_string_pretty(&s.to_json())?;
    emit(&args.out, &format!("{json}\n"))?;
    if let Some(csv_path) = &args.grid_csv {
        let bound = window.bounding_box()?;
        let mut csv = String::from("point,");
        csv.push_str(
            &(0..s.target_dim())
                .map(|i| format!("value_{i}"))
                .collect::<Vec<_>>()
                .join(","),
        );
        csv.push('\n');
        for x in grid_points(&bound, args.grid) {
            let v = s.value(&x)?;
            let pt = x.iter().map(|c| fmt(*c)).collect::<Vec<_>>().join(";");
            let vals = v.iter().map(|c| fmt(*c)).collect::<Vec<_>>().join(",");
            csv.push_str(&format!("{pt},{vals}\n"));
        }
        fs::write(csv_path, csv)?;
    }
    eprintln!(
        "built {} terms at scale {} in {:.1} ms",
        s.terms().len(),
        args.scale,
        started.elapsed().as_secs_f64() * 1e3
    );
    Ok(0)
}

fn run_extend(args: &ExtendArgs) -> Result<i32> {
    let d = args.dim;
    let (source_domain, lower_axes, cube): (BoxUnion, usize, bool) =
        if args.source == "halfspace" {
            let mut lo = vec![f64::NEG_INFINITY; d];
            lo[0] = 0.0;
            (
                BoxUnion {
                    boxes: vec![AxisBox::new(lo, vec![f64::INFINITY; d])],
                    open: false,
                },
                1,
                false,
            )
        } else if args.source == "cube" {
            (
                BoxUnion::closed_box(vec![0.0; d], vec![1.0; d]),
                d,
                true,
            )
        } else if let Some(m) = args.source.strip_prefix("corner:") {
            let m: usize = m.parse().context("corner:M needs an integer M")?;
            if m > d {
                bail!("corner:{m} exceeds the dimension {d}");
            }
            let mut lo = vec![f64::NEG_INFINITY; d];
            for l in lo.iter_mut().take(m) {
                *l = 0.0;
            }
            (
                BoxUnion {
                    boxes: vec![AxisBox::new(lo, vec![f64::INFINITY; d])],
                    open: false,
                },
                m,
                false,
            )
        } else {
            bail!("--source must be `halfspace`, `cube`, or `corner:M`");
        };
    let gamma: Arc<dyn JetProvider> =
        Arc::new(parse_function(&args.functions, d, source_domain)?);
    let ext = if cube {
        extend_cube(&gamma, args.order)?
    } else if lower_axes == 1 {
        extend_halfspace(&gamma, 0, args.order)?
    } else {
        extend_corner(&gamma, lower_axes, args.order)?
    };
    // ambient window: one cutoff reach beyond every extended face
    let mut lo = vec![0.0; d];
    let mut hi = vec![1.0; d];
    let reach = ext.axis_extension().cutoff.hi;
    for i in 0..d {
        if i < lower_axes || cube {
            lo[i] = -reach;
        }
        hi[i] = if cube { 1.0 + reach } else { 1.0 };
    }
    let ambient = AxisBox::new(lo, hi);
    let m = gamma.target_dim();
    let mut csv = String::from("point,");
    csv.push_str(
        &(0..m)
            .map(|i| format!("value_{i}"))
            .collect::<Vec<_>>()
            .join(","),
    );
    csv.push('\n');
    for x in grid_points(&ambient, args.grid) {
        let v = ext.value(&x)?;
        let pt = x.iter().map(|c| fmt(*c)).collect::<Vec<_>>().join(";");
        let vals = v.iter().map(|c| fmt(*c)).collect::<Vec<_>>().join(",");
        csv.push_str(&format!("{pt},{vals}\n"));
    }
    // boundary-smoothness diagnostics across each extended face
    let h = smoothext_core::harness::tolerances::FACE_STEP;
    let mut worst = 0.0f64;
    let extended_axes = if cube { d } else { lower_axes };
    for axis in 0..extended_axes {
        let mut probe = vec![0.5; d];
        for face in [0.0, 1.0] {
            if face == 1.0 && !cube {
                continue;
            }
            probe[axis] = if face == 0.0 { h } else { 1.0 - h };
            let inside = ext.jet(&probe, args.order)?;
            probe[axis] = if face == 0.0 { -h } else { 1.0 + h };
            let outside = ext.jet(&probe, args.order)?;
            for (alpha, vi) in inside.iter() {
                let vo = outside.partial(alpha);
                for (a, b) in vi.iter().zip(&vo) {
                    worst = worst.max((a - b).abs() / a.abs().max(1.0));
                }
            }
            probe[axis] = 0.5;
        }
    }
    csv.push_str(&format!("# max_one_sided_jet_mismatch,{}\n", fmt(worst)));
    emit(&args.out, &csv)?;
    Ok(0)
}

fn run_dugundji(args: &DugundjiArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.set)
        .with_context(|| format!("reading set file {}", args.set.display()))?;
    let set: ClosedSet = serde_json::from_str(&text).context("parsing closed set")?;
    let window = read_box_union(&args.window)?;
    let d = set.dim();
    let gamma = parse_function(&args.functions, d, BoxUnion::full_space(d))?;
    let shells = ShellStructure::new(set)?;
    let report = dugundji_report(
        &shells,
        &gamma,
        &window,
        args.grid,
        &SeminormSpec::CoordinateMax,
    )?;
    let mut out = report.to_csv();
    out.push_str(&format!(
        "# max_restriction_error,{}\n# sup_ratio,{}\n# hull_lo,{}\n# hull_hi,{}\n",
        fmt(report.max_restriction_error),
        fmt(report.sup_ratio),
        report
            .hull_lo
            .iter()
            .map(|v| fmt(*v))
            .collect::<Vec<_>>()
            .join(";"),
        report
            .hull_hi
            .iter()
            .map(|v| fmt(*v))
            .collect::<Vec<_>>()
            .join(";"),
    ));
    out.push_str("# continuity_path: d_Y,error\n");
    for (dy, err) in &report.continuity {
        out.push_str(&format!("# {},{}\n", fmt(*dy), fmt(*err)));
    }
    emit(&args.out, &out)?;
    let ok = report.max_restriction_error <= 1e-12
        && report.sup_ratio <= 1.0 + 1e-12
        && report.rows.iter().all(|r| r.hull_ok);
    Ok(if ok { 0 } else { 1 })
}

fn run_report(args: &ReportArgs) -> Result<i32> {
    match args.kind.as_str() {
        "convergence" | "rate" => {
            let domain = args
                .domain
                .as_ref()
                .ok_or_else(|| anyhow!("--domain is required for this report"))?;
            let omega = read_box_union(domain)?;
            let d = omega.dim();
            if args.functions.is_empty() {
                bail!("--fn is required for this report");
            }
            let gamma = parse_function(&args.functions, d, omega.clone())?;
            let scales: Vec<u32> = args
                .scales
                .split(',')
                .map(|s| s.trim().parse::<u32>().context("bad --scales entry"))
                .collect::<Result<_>>()?;
            let k_box = AxisBox::new(vec![-1.0; d], vec![1.0; d]);
            let started = Instant::now();
            let report = convergence_report(
                &gamma,
                &omega,
                args.order,
                &k_box,
                &SeminormSpec::CoordinateMax,
                &scales,
            )?;
            let mut out = String::new();
            if args.kind == "rate" {
                out.push_str(&format!(
                    "# log-log slope of the C^{} error (reported, not asserted)\n# slope,{}\n",
                    args.order,
                    fmt(report.slope)
                ));
            }
            out.push_str(&report.to_csv());
            if !report.non_monotone.is_empty() {
                out.push_str(&format!(
                    "# non_monotone_rows,{:?}\n",
                    report.non_monotone
                ));
            }
            emit(&args.out, &out)?;
            for row in &report.rows {
                eprintln!("n = {}: {:.1} ms", row.n, row.wall_ms);
            }
            eprintln!("total {:.1} ms", started.elapsed().as_secs_f64() * 1e3);
            Ok(0)
        }
        "bound" => {
            let entries = corpus_dim(args.dim);
            if entries.is_empty() {
                bail!("no corpus entries for dimension {}", args.dim);
            }
            let cert = bound_certificate(
                &entries,
                args.order,
                args.scale,
                &SeminormSpec::CoordinateMax,
            )?;
            let mut out = String::new();
            out.push_str(&format!("# profile: {PROFILE_DEFINITION}\n"));
            out.push_str(&format!(
                "# h0_cl_norm,{} (d={}, l={}, grid_step={}, dir_seed={}, dir_count={})\n",
                fmt(cert.h0.value),
                cert.h0.dim,
                cert.h0.ell,
                cert.h0.grid_step,
                cert.h0.direction_seed,
                cert.h0.direction_count
            ));
            out.push_str(&format!("# constant,{}\n", fmt(cert.constant)));
            out.push_str(&cert.to_csv());
            out.push_str("# growth of the constant across orders\n# l,h0,constant\n");
            for (ell, h0, c) in constant_growth_table(args.dim, 3)? {
                out.push_str(&format!("# {ell},{},{}\n", fmt(h0), fmt(c)));
            }
            emit(&args.out, &out)?;
            Ok(if cert.pass { 0 } else { 1 })
        }
        other => bail!("unknown report kind `{other}` (use convergence|bound|rate)"),
    }
}

fn run_selftest(args: &SelftestArgs) -> Result<i32> {
    let started = Instant::now();
    let results = property_suites(args.seed);
    let mut ok = true;
    for r in &results {
        println!(
            "{:<28} {} max_violation={} tolerance={}",
            r.suite,
            if r.pass { "PASS" } else { "FAIL" },
            fmt(r.max_violation),
            fmt(r.tolerance),
        );
        if !r.pass {
            ok = false;
            println!("  detail: {}", r.detail);
        }
    }
    println!(
        "selftest: {}/{} suites passed",
        results.iter().filter(|r| r.pass).count(),
        results.len()
    );
    eprintln!("wall time {:.1} s", started.elapsed().as_secs_f64());
    Ok(if ok { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Smooth(args) => run_smooth(args),
        Command::Extend(args) => run_extend(args),
        Command::Dugundji(args) => run_dugundji(args),
        Command::Report(args) => run_report(args),
        Command::Selftest(args) => run_selftest(args),
    };
    match code {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
