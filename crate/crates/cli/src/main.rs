//! `gqs`: fit, sample, refine and approximate with generalized quadratic
//! splines from the command line.

mod document;
mod input;
mod svg;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gqs::basis::hermite_to_spline;
use gqs::operators::{
    empirical_order, lagrange_from_nodes, lagrange_nodes, quasi_interpolant_from_values, Operator,
};
use gqs::refine::polygon_sequence;
use gqs::shape::{diagnose, fit_convex, fit_monotone, fit_monotone_convex, Convexity, Monotonicity, ShapeFit, ShapeReport};
use gqs::{BetaSequence, GqsError, GqsSpace, GqsSpline, HermiteData, Partition};
use thiserror::Error;

use document::{DocumentError, SplineDocument};
use input::FunctionTable;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
}

#[derive(Parser)]
#[command(name = "gqs", version, about = "Generalized C1 quadratic splines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Interpolate Hermite data read from a CSV file with header `x,y,p`.
    Fit(FitArgs),
    /// Tabulate or plot a spline document.
    Sample(SampleArgs),
    /// Apply the corner-cutting algorithm and report control polygon gaps.
    Refine(RefineArgs),
    /// Approximate a function with the quasi-interpolant or the Lagrange
    /// interpolant.
    Approx(ApproxArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FitKind {
    Hermite,
    Monotone,
    Convex,
    MonotoneConvex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Sense {
    Increasing,
    Decreasing,
    Convex,
    Concave,
}

#[derive(Args)]
struct FitArgs {
    #[arg(value_enum)]
    kind: FitKind,
    input: PathBuf,
    /// β for every interval, or a comma-separated list (hermite only;
    /// default -1).
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Shape to enforce; `monotone-convex` takes one of each kind,
    /// comma-separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    sense: Vec<Sense>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Args)]
struct SampleArgs {
    document: PathBuf,
    /// Dyadic level: `2^resolution` samples per interval.
    #[arg(long, default_value_t = 6)]
    resolution: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RefineArgs {
    document: PathBuf,
    #[arg(long, default_value_t = 1)]
    levels: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OperatorArg {
    Q,
    Lagrange,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Builtin {
    Sin,
    Exp,
    Runge,
    AbsShifted,
}

impl Builtin {
    fn eval(self, x: f64) -> f64 {
        match self {
            Builtin::Sin => x.sin(),
            Builtin::Exp => x.exp(),
            Builtin::Runge => 1.0 / (1.0 + 25.0 * x * x),
            Builtin::AbsShifted => (x - 1.0 / 3.0).abs(),
        }
    }

    fn domain(self) -> (f64, f64) {
        match self {
            Builtin::Sin => (0.0, std::f64::consts::PI),
            Builtin::Exp => (0.0, 1.0),
            Builtin::Runge | Builtin::AbsShifted => (-1.0, 1.0),
        }
    }
}

#[derive(Args)]
struct ApproxArgs {
    #[arg(value_enum)]
    operator: OperatorArg,
    #[arg(long, value_enum, conflicts_with = "table")]
    builtin: Option<Builtin>,
    /// CSV table with columns `x,y` covering every required node.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Comma-separated knots.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "intervals")]
    knots: Option<String>,
    /// Number of uniform intervals over the domain.
    #[arg(long)]
    intervals: Option<usize>,
    /// Domain `a,b` overriding the builtin's default.
    #[arg(long, allow_hyphen_values = true)]
    domain: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Also fit the convergence order on halved uniform partitions.
    #[arg(long)]
    order_study: bool,
    /// Evaluation tolerance and table lookup tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Refine(a) => cmd_refine(a),
        Command::Approx(a) => cmd_approx(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// 2 validation, 3 shape precondition, 4 I/O.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<GqsError>() {
            return if matches!(e, GqsError::ShapePrecondition { .. }) { 3 } else { 2 };
        }
        if let Some(e) = cause.downcast_ref::<DocumentError>() {
            return match e {
                DocumentError::Geometry(GqsError::ShapePrecondition { .. }) => 3,
                _ => 2,
            };
        }
        if cause.downcast_ref::<CliError>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<csv::Error>() {
            return if matches!(e.kind(), csv::ErrorKind::Io(_)) { 4 } else { 2 };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 4;
        }
    }
    2
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{what}: `{s}` is not a number")).into())
        })
        .collect()
}

/// A scalar is broadcast to every interval.
fn parse_betas(text: Option<&str>, intervals: usize) -> Result<BetaSequence> {
    let values = match text {
        None => vec![-1.0; intervals],
        Some(t) => {
            let v = parse_list(t, "--beta")?;
            if v.len() == 1 {
                vec![v[0]; intervals]
            } else {
                v
            }
        }
    };
    Ok(BetaSequence::new(values)?)
}

fn read_document(path: &Path) -> Result<GqsSpline> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let doc = SplineDocument::parse(&text).with_context(|| format!("invalid document {}", path.display()))?;
    Ok(doc.to_spline()?)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn write_document(path: &Path, spline: &GqsSpline, meta: BTreeMap<String, String>) -> Result<()> {
    write_text(path, &SplineDocument::from_spline(spline, meta).to_text())
}

fn shape_summary(r: &ShapeReport) -> String {
    let mut tags = Vec::new();
    if r.monotone_increasing {
        tags.push("increasing");
    }
    if r.monotone_decreasing {
        tags.push("decreasing");
    }
    if r.convex {
        tags.push("convex");
    }
    if r.concave {
        tags.push("concave");
    }
    if tags.is_empty() {
        "none".to_owned()
    } else {
        tags.join(",")
    }
}

fn print_fit(fit: &ShapeFit) {
    println!("interval  tau  mu  theta_bar  case  theta  beta");
    for (i, (d, b)) in fit.intervals.iter().zip(fit.betas()).enumerate() {
        println!(
            "{:>4}  {:.6e}  {:.6e}  {:.6e}  {:?}  {:.6}  {:.6}",
            i + 1,
            d.tau,
            d.mu,
            d.theta_bar,
            d.case,
            d.theta,
            b
        );
    }
}

fn monotone_sense(senses: &[Sense]) -> Result<Monotonicity> {
    match senses.iter().find(|s| matches!(s, Sense::Increasing | Sense::Decreasing)) {
        Some(Sense::Decreasing) => Ok(Monotonicity::Decreasing),
        _ => Ok(Monotonicity::Increasing),
    }
}

fn convex_sense(senses: &[Sense]) -> Result<Convexity> {
    match senses.iter().find(|s| matches!(s, Sense::Convex | Sense::Concave)) {
        Some(Sense::Concave) => Ok(Convexity::Concave),
        _ => Ok(Convexity::Convex),
    }
}

fn cmd_fit(args: FitArgs) -> Result<()> {
    let table = input::read_hermite(&args.input)?;
    let partition = Partition::new(table.x)?;
    let data = HermiteData::new(table.y, table.p)?;
    if args.kind != FitKind::Hermite && args.beta.is_some() {
        return Err(CliError::Usage("--beta only applies to `fit hermite`; shape fits choose β".into()).into());
    }
    let allowed: &[Sense] = match args.kind {
        FitKind::Hermite => &[],
        FitKind::Monotone => &[Sense::Increasing, Sense::Decreasing],
        FitKind::Convex => &[Sense::Convex, Sense::Concave],
        FitKind::MonotoneConvex => &[Sense::Increasing, Sense::Decreasing, Sense::Convex, Sense::Concave],
    };
    if let Some(s) = args.sense.iter().find(|s| !allowed.contains(s)) {
        return Err(CliError::Usage(format!("--sense {s:?} does not apply to this fit")).into());
    }

    let spline = match args.kind {
        FitKind::Hermite => {
            let betas = parse_betas(args.beta.as_deref(), partition.intervals())?;
            let space = GqsSpace::new(partition, betas)?;
            hermite_to_spline(&space, &data)?
        }
        kind => {
            let fit = match kind {
                FitKind::Monotone => fit_monotone(&partition, &data, monotone_sense(&args.sense)?)?,
                FitKind::Convex => fit_convex(&partition, &data, convex_sense(&args.sense)?)?,
                _ => fit_monotone_convex(
                    &partition,
                    &data,
                    monotone_sense(&args.sense)?,
                    convex_sense(&args.sense)?,
                )?,
            };
            print_fit(&fit);
            fit.spline
        }
    };
    let report = diagnose(&spline);
    println!("shape: {}", shape_summary(&report));
    let name = format!("{:?}", args.kind).to_lowercase();
    let mut meta = BTreeMap::new();
    meta.insert("command".to_owned(), format!("fit {name}"));
    meta.insert("shape".to_owned(), shape_summary(&report));
    write_document(&args.out, &spline, meta)
}

fn cmd_sample(args: SampleArgs) -> Result<()> {
    let spline = read_document(&args.document)?;
    let rows = spline.sample_dyadic(args.resolution)?;
    let text = match args.format {
        Format::Csv => {
            let mut out = String::from("x,value,derivative\n");
            for (x, f, d) in &rows {
                let _ = writeln!(out, "{x},{f},{d}");
            }
            out
        }
        Format::Svg => svg::render(&spline, &rows),
    };
    write_text(&args.out, &text)
}

fn cmd_refine(args: RefineArgs) -> Result<()> {
    let spline = read_document(&args.document)?;
    let seq = polygon_sequence(&spline, args.levels)?;
    let d0 = seq.deltas[0];
    println!("level  delta  delta0/2^m  halved");
    for (m, d) in seq.deltas.iter().enumerate() {
        let bound = d0 / f64::powi(2.0, m as i32);
        let ok = m == 0 || *d <= 0.5 * seq.deltas[m - 1] + 1e-12;
        println!("{m:>5}  {d:.6e}  {bound:.6e}  {}", if ok { "yes" } else { "no" });
    }
    if seq.halving_holds(1e-12) {
        println!("halving bound: holds");
    } else {
        println!("halving bound: violated (worst step ratio {:.4})", seq.worst_ratio());
    }
    let fine = seq.splines.last().expect("sequence starts with the input");
    let mut meta = BTreeMap::new();
    meta.insert("command".to_owned(), format!("refine --levels {}", args.levels));
    meta.insert("shape".to_owned(), shape_summary(&diagnose(fine)));
    write_document(&args.out, fine, meta)
}

fn cmd_approx(args: ApproxArgs) -> Result<()> {
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(GqsError::InvalidTolerance(args.tol).into());
    }
    let table = args.table.as_deref().map(FunctionTable::read).transpose()?;
    let (source, domain) = match (args.builtin, &table) {
        (Some(b), None) => (format!("{b:?}").to_lowercase(), b.domain()),
        (None, Some(t)) => ("table".to_owned(), t.domain()),
        _ => return Err(CliError::Usage("give exactly one of --builtin or --table".into()).into()),
    };
    let domain = match &args.domain {
        Some(d) => match parse_list(d, "--domain")?[..] {
            [a, b] => (a, b),
            _ => return Err(CliError::Usage("--domain expects `a,b`".into()).into()),
        },
        None => domain,
    };
    let partition = match (&args.knots, args.intervals) {
        (Some(k), _) => Partition::new(parse_list(k, "--knots")?)?,
        (None, n) => Partition::uniform(domain.0, domain.1, n.unwrap_or(8))?,
    };
    let betas = parse_betas(args.beta.as_deref(), partition.intervals())?;
    let space = GqsSpace::new(partition, betas)?;

    let sample = |x: f64| -> Result<f64> {
        match (args.builtin, &table) {
            (Some(b), _) => Ok(b.eval(x)),
            (_, Some(t)) => t
                .lookup(x, args.tol)
                .ok_or_else(|| CliError::Input(format!("table has no row within tolerance {:e} of node x = {x}", args.tol)).into()),
            _ => unreachable!("source checked above"),
        }
    };
    let (op, nodes) = match args.operator {
        OperatorArg::Q => (Operator::Quasi, space.greville()),
        OperatorArg::Lagrange => (Operator::Lagrange, lagrange_nodes(&space)),
    };
    let values = nodes.iter().map(|&x| sample(x)).collect::<Result<Vec<_>>>()?;
    let spline = match op {
        Operator::Quasi => quasi_interpolant_from_values(&space, values)?,
        Operator::Lagrange => lagrange_from_nodes(&space, &values)?,
    };

    let max_error = match (args.builtin, &table) {
        (Some(b), _) => spline
            .sample_dyadic(6)?
            .iter()
            .fold(0.0_f64, |m, r| m.max((b.eval(r.0) - r.1).abs())),
        (_, Some(t)) => {
            let mut worst = 0.0_f64;
            for &(x, y) in t.rows() {
                if space.partition().locate(x).is_some() {
                    worst = worst.max((spline.eval(x, args.tol)?.0 - y).abs());
                }
            }
            worst
        }
        _ => unreachable!("source checked above"),
    };
    println!("max error: {max_error:.6e}");

    if args.order_study {
        let Some(b) = args.builtin else {
            return Err(CliError::Usage("--order-study needs --builtin".into()).into());
        };
        let beta = space.betas().as_slice();
        if beta.iter().any(|&v| v != beta[0]) {
            return Err(CliError::Usage("--order-study needs a single --beta value".into()).into());
        }
        let study = empirical_order(|x| b.eval(x), domain, beta[0], op, 4..=9)?;
        println!("h  error");
        for (h, e) in study.hs.iter().zip(&study.errors) {
            println!("{h:.6e}  {e:.6e}");
        }
        match study.slope {
            Some(s) => println!("order slope: {s:.4}"),
            None => println!("order slope: n/a (errors at rounding level)"),
        }
    }

    let mut meta = BTreeMap::new();
    let name = if op == Operator::Quasi { "q" } else { "lagrange" };
    meta.insert("command".to_owned(), format!("approx {name} {source}"));
    meta.insert("max_error".to_owned(), format!("{max_error:e}"));
    write_document(&args.out, &spline, meta)
}
