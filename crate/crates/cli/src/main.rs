//! `ilcp`: check strong LCP matrix classes of interval matrices.
//!
//! Exit codes: 0 all requested properties hold, 1 at least one fails,
//! 2 usage or input error, 3 cap exceeded or engine failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ilcp::input::{self, InputFile, MidRadFile, Parsed};
use ilcp::lcp::{qp_to_lcp, solve_lcp_enumerate, LcpInstance};
use ilcp::oracle::{self, OracleVerdict};
use ilcp::{strong, Caps, CheckConfig, Error, FastPathPolicy, IntervalMatrix, Property, Report, Tolerances};
use serde_json::json;

#[derive(Parser)]
#[command(name = "ilcp", version, about = "Strong LCP matrix classes of interval matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide strong properties of the box in FILE.
    Check(CheckArgs),
    /// Search the box for a realization violating one property.
    Falsify(FalsifyArgs),
    /// Enumerate all solutions of the LCP with a real matrix.
    Lcp(LcpArgs),
    /// Reduce a QP file to an interval LCP and check it.
    Qp2lcp(Qp2lcpArgs),
    /// Re-run the check with radius = scale * |midpoint| for each scale.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone)]
struct CheckOpts {
    /// Comma-separated property tokens, or "all".
    #[arg(long, default_value = "semimonotone,column-sufficient,r,r0,principally-nondegenerate")]
    properties: String,
    #[arg(long, default_value = "auto", value_parser = ["auto", "off", "only"])]
    fast_paths: String,
    /// Decision tolerance for eigenvalue and spectral-radius thresholds
    /// (default from ILCP_TOL, else 1e-9).
    #[arg(long)]
    tol: Option<f64>,
    /// Override every enumeration cap with this dimension.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Cross-validate with the falsification oracle using this many samples per property.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    file: PathBuf,
    #[command(flatten)]
    opts: CheckOpts,
}

#[derive(Args)]
struct FalsifyArgs {
    #[arg(long)]
    file: PathBuf,
    #[arg(long)]
    property: String,
    #[arg(long, default_value_t = 2000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct LcpArgs {
    #[arg(long)]
    file: PathBuf,
    /// Comma-separated right-hand side (defaults to (b, d) for QP files).
    #[arg(long)]
    q: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct Qp2lcpArgs {
    #[arg(long)]
    file: PathBuf,
    /// Replace radB by this multiple of |B|.
    #[arg(long)]
    radb_scale: Option<f64>,
    /// Replace radC by this multiple of |C|.
    #[arg(long)]
    radc_scale: Option<f64>,
    #[command(flatten)]
    opts: CheckOpts,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    file: PathBuf,
    /// Comma-separated radius scales.
    #[arg(long)]
    scales: String,
    #[command(flatten)]
    opts: CheckOpts,
}

enum Failure {
    Usage(String),
    Engine(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } | Error::Engine(_) | Error::NoFastPath(_) => Failure::Engine(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CliResult = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => check(&a),
        Command::Falsify(a) => falsify(&a),
        Command::Lcp(a) => lcp(&a),
        Command::Qp2lcp(a) => qp2lcp(&a),
        Command::Sweep(a) => sweep(&a),
    };
    match result {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Engine(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn parse_list<T>(s: &str, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, Failure> {
    let items: Vec<&str> = s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
    if items.is_empty() {
        return Err(Failure::Usage(format!("empty {what} list")));
    }
    items.into_iter().map(|t| f(t).ok_or_else(|| Failure::Usage(format!("invalid {what} {t:?}")))).collect()
}

fn parse_floats(s: &str, what: &str) -> Result<Vec<f64>, Failure> {
    parse_list(s, what, |t| t.parse::<f64>().ok().filter(|v| v.is_finite()))
}

fn tolerances(tol: Option<f64>) -> Result<Tolerances, Failure> {
    match tol {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(Failure::Usage(format!("--tol must be positive, got {t}"))),
        Some(t) => Ok(Tolerances::default().with_decision_tol(t)),
        None => Ok(Tolerances::from_env()),
    }
}

fn config(o: &CheckOpts) -> Result<CheckConfig, Failure> {
    let properties = if o.properties.trim() == "all" {
        Property::STRONG.to_vec()
    } else {
        parse_list(&o.properties, "property", |t| t.parse::<Property>().ok())?
    };
    let mut cfg = CheckConfig {
        properties,
        fast_paths: o.fast_paths.parse::<FastPathPolicy>()?,
        tol: tolerances(o.tol)?,
        ..CheckConfig::default()
    };
    if let Some(n) = o.cap {
        cfg.caps = Caps::uniform(n);
    }
    Ok(cfg)
}

fn load(path: &Path) -> Result<(InputFile, Parsed), Failure> {
    let file = input::parse_file(path)?;
    let parsed = file.resolve()?;
    Ok((file, parsed))
}

fn source_name(path: &Path, file: &InputFile) -> String {
    let base = path.file_name().map_or_else(|| path.display().to_string(), |f| f.to_string_lossy().into_owned());
    match file.name() {
        Some(n) => format!("{base} ({n})"),
        None => base,
    }
}

fn run_check(a: &IntervalMatrix, o: &CheckOpts, source: String) -> Result<Report, Failure> {
    let cfg = config(o)?;
    let mut report = strong::check_all(a, &cfg)?;
    report.input.source = Some(source);
    if let Some(budget) = o.budget {
        let cons = oracle::cross_validate(a, &report, budget, o.seed, &cfg)?;
        report.config.budget = Some(budget);
        report.config.seed = Some(o.seed);
        let consistent = cons.is_consistent();
        report.oracle = Some(cons);
        if !consistent {
            emit_report(&report, o.format);
            return Err(Failure::Engine("oracle found a counterexample to a positive strong verdict".into()));
        }
    }
    Ok(report)
}

fn emit_report(r: &Report, format: Format) {
    match format {
        Format::Json => println!("{}", r.to_json()),
        Format::Text => print!("{}", r.to_text()),
    }
}

fn check(a: &CheckArgs) -> CliResult {
    let (file, parsed) = load(&a.file)?;
    let report = run_check(&parsed.interval()?, &a.opts, source_name(&a.file, &file))?;
    emit_report(&report, a.opts.format);
    Ok(report.all_hold)
}

fn falsify(a: &FalsifyArgs) -> CliResult {
    let (_, parsed) = load(&a.file)?;
    let property: Property = a.property.parse()?;
    let mut cfg = CheckConfig { tol: tolerances(a.tol)?, ..CheckConfig::default() };
    if let Some(n) = a.cap {
        cfg.caps = Caps::uniform(n);
    }
    let out = oracle::falsify(&parsed.interval()?, property, a.budget, a.seed, &cfg)?;
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out).expect("outcome serializes")),
        Format::Text => {
            println!("property: {}", property.token());
            println!("samples: {} (exhaustive vertices: {})", out.samples, out.exhaustive_vertices);
            match &out.counterexample {
                Some(cx) => {
                    println!("counterexample found at sample {} ({:?}):", cx.sample, cx.kind);
                    for row in &cx.matrix {
                        let cells: Vec<String> = row.iter().map(|v| format!("{v:>12.6}")).collect();
                        println!("  {}", cells.join(" "));
                    }
                    if let Some(c) = &cx.certificate {
                        println!("  {}", ilcp::report::certificate_summary(c));
                    }
                }
                None => println!("no counterexample within budget"),
            }
        }
    }
    Ok(out.verdict == OracleVerdict::NoCounterexampleInBudget)
}

fn lcp(a: &LcpArgs) -> CliResult {
    let (_, parsed) = load(&a.file)?;
    let (matrix, default_q) = match &parsed {
        Parsed::Point(m) => (m.clone(), None),
        Parsed::Interval(b) if b.is_degenerate() => (b.mid().clone(), None),
        Parsed::Interval(_) => return Err(Failure::Usage("lcp needs a real matrix, not an interval box".into())),
        Parsed::Qp { qp, .. } => {
            let inst = qp_to_lcp(qp);
            (inst.a, Some(inst.q))
        }
    };
    let q = match (&a.q, default_q) {
        (Some(s), _) => parse_floats(s, "q entry")?,
        (None, Some(q)) => q,
        (None, None) => return Err(Failure::Usage("--q is required for matrix files".into())),
    };
    let inst = LcpInstance::new(matrix, q)?;
    let sols = solve_lcp_enumerate(&inst, Tolerances::default().pivot)?;
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&sols).expect("solutions serialize")),
        Format::Text => {
            println!("{} solution(s), {} bases tested, {} singular", sols.solutions.len(), sols.bases_tested, sols.singular_bases.len());
            for s in &sols.solutions {
                let basis: Vec<String> = s.basis.iter().map(|i| (i + 1).to_string()).collect();
                println!("  basis {{{}}}: z = {:?}, y = {:?}", basis.join(","), s.z, s.y);
            }
        }
    }
    Ok(!sols.solutions.is_empty())
}

fn qp2lcp(a: &Qp2lcpArgs) -> CliResult {
    let (file, parsed) = load(&a.file)?;
    let Parsed::Qp { qp, mut rad_b, mut rad_c } = parsed else {
        return Err(Failure::Usage("qp2lcp needs a file with a \"qp\" object".into()));
    };
    for s in [a.radb_scale, a.radc_scale].into_iter().flatten() {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Failure::Usage(format!("radius scales must be finite and >= 0, got {s}")));
        }
    }
    if let Some(s) = a.radb_scale {
        rad_b = qp.b_mat.abs() * s;
    }
    if let Some(s) = a.radc_scale {
        rad_c = qp.c.abs() * s;
    }
    let q = qp_to_lcp(&qp).q;
    let box_ = Parsed::Qp { qp, rad_b, rad_c }.interval()?;
    let report = run_check(&box_, &a.opts, source_name(&a.file, &file))?;
    let rows = |m: &ilcp::Matrix| -> Vec<Vec<f64>> { (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect() };
    let lcp_file = MidRadFile {
        name: None,
        n: box_.dim(),
        midpoint: rows(box_.mid()),
        radius: Some(rows(box_.rad())),
        radius_scale: None,
    };
    match a.opts.format {
        Format::Json => {
            let out = json!({ "lcp": lcp_file, "q": q, "report": report });
            println!("{}", serde_json::to_string_pretty(&out).expect("output serializes"));
        }
        Format::Text => {
            println!("LCP matrix (midpoint +- radius), n = {}:", box_.dim());
            for (m, r) in lcp_file.midpoint.iter().zip(lcp_file.radius.as_ref().unwrap()) {
                let cells: Vec<String> = m.iter().zip(r).map(|(a, b)| format!("{a:>8.3} +- {b:<6.3}")).collect();
                println!("  {}", cells.join(" "));
            }
            println!("q = {q:?}");
            print!("{}", report.to_text());
        }
    }
    Ok(report.all_hold)
}

fn sweep(a: &SweepArgs) -> CliResult {
    let (file, parsed) = load(&a.file)?;
    let scales = parse_floats(&a.scales, "scale")?;
    let source = source_name(&a.file, &file);
    let mut rows = Vec::new();
    let mut all = true;
    for &s in &scales {
        let report = run_check(&parsed.rescaled(s)?.interval()?, &a.opts, source.clone())?;
        all &= report.all_hold;
        rows.push((s, report));
    }
    match a.opts.format {
        Format::Json => {
            let table: Vec<_> = rows
                .iter()
                .map(|(s, r)| {
                    let holds: serde_json::Map<String, serde_json::Value> =
                        r.verdicts.iter().map(|v| (v.property.token().to_string(), json!(v.holds))).collect();
                    json!({ "scale": s, "digest": r.input.digest, "holds": holds, "all_hold": r.all_hold })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&json!({ "source": source, "sweep": table })).unwrap());
        }
        Format::Text => {
            let Some((_, first)) = rows.first() else { return Ok(all) };
            let tokens: Vec<&str> = first.verdicts.iter().map(|v| v.property.token()).collect();
            println!("{:>8}  {}", "scale", tokens.join("  "));
            for (s, r) in &rows {
                let cells: Vec<String> = r
                    .verdicts
                    .iter()
                    .zip(&tokens)
                    .map(|(v, t)| format!("{:>w$}", if v.holds { "yes" } else { "no" }, w = t.len()))
                    .collect();
                println!("{s:>8.4}  {}", cells.join("  "));
            }
        }
    }
    Ok(all)
}
