mod config;
mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use chyp::isometry::{classify, classify_trace, goldman_f};
use chyp::linalg::{c, C64};
use chyp::plot::{deltoid_svg, gon18_svg, trajectory_svg};
use chyp::realhyp::{self_intersection_count, to_disk};
use chyp::surfaces::{choose_beta, cover_invariants, lift_count, CoverSpec, HomologyClass, Surface};
use chyp::triangle::{
    adjudicate, alpha_grid, alpha_min, alpha_scan_with_eps, alpha_zero, angular_invariant, build_representation,
    discreteness_falsifier_with_eps, enumerate_words, evaluate_word, projective_order, scan_transition,
    trace_wa_matrix, trace_wb_matrix, w_a, w_b, Convention, Order, TriangleParams, Word,
};

use config::{ConfigFile, RunConfig};
use output::{trace_csv, write_atomic, TraceRow};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] chyp::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) | CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

type CliResult = Result<(), CliError>;

#[derive(Debug, Parser)]
#[command(name = "chyp", version, about = "Complex hyperbolic triangle groups and the (3,3,9) surface subgroup")]
struct Cli {
    /// `key = value` file supplying defaults; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for data files and figures.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Classification tolerance; overrides CHYP_TOL.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Conv {
    HalfAngle,
    RelationEnforcing,
}

impl From<Conv> for Convention {
    fn from(c: Conv) -> Self {
        match c {
            Conv::HalfAngle => Convention::HalfAngle,
            Conv::RelationEnforcing => Convention::RelationEnforcing,
        }
    }
}

impl FromStr for Conv {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Conv as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

/// An order `p`, `q` or `r`: a positive integer or `inf`.
#[derive(Debug, Clone, Copy)]
struct OrderArg(Order);

impl FromStr for OrderArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(OrderArg(Order::Infinite)),
            t => t.parse().map(|n| OrderArg(Order::Finite(n))).map_err(|_| format!("bad order {t}")),
        }
    }
}

/// A homology class written `a,b,c,d`.
#[derive(Debug, Clone, Copy)]
struct BetaArg(HomologyClass);

impl FromStr for BetaArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<i64> = s
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| format!("bad class {s}"))?;
        let arr: [i64; 4] = parts.try_into().map_err(|_| format!("class {s} needs four coordinates"))?;
        Ok(BetaArg(HomologyClass(arr)))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify an SU(2,1) element by its trace.
    #[command(allow_negative_numbers = true)]
    Classify { trace_re: f64, trace_im: f64 },
    /// Plot traces of all words up to a length over the deltoid.
    #[command(allow_negative_numbers = true)]
    DeltoidPlot {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        convention: Option<Conv>,
        #[arg(long)]
        maxlen: Option<usize>,
    },
    /// Classify W_A along the (3,3,n;α) family and locate the transition.
    AlphaScan {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// Build a (p,q,r;α) triangle representation and report its invariants.
    #[command(allow_negative_numbers = true)]
    BuildTriangle {
        #[arg(long)]
        p: Option<OrderArg>,
        #[arg(long)]
        q: Option<OrderArg>,
        #[arg(long)]
        r: Option<OrderArg>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        convention: Option<Conv>,
    },
    /// Search for elliptic images of infinite-order words.
    #[command(allow_negative_numbers = true)]
    Falsify {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        convention: Option<Conv>,
        #[arg(long)]
        maxlen: Option<usize>,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Verify the 18-gon, trace the axis of I1I3I2I3 and draw both.
    Gon18,
    /// Dump coset labels of all words up to a length.
    Cosets {
        #[arg(long)]
        maxlen: Option<usize>,
    },
    /// Invariants of the cyclic cover of genus g cut by a class β.
    Cover {
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long)]
        beta: Option<BetaArg>,
    },
    /// Decide the W_B trace constant and compare conventions.
    Adjudicate,
}

fn print_json<T: Serialize>(value: &T) -> CliResult {
    let s = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    emit(&format!("{s}\n"))
}

/// Writes to stdout; a closed pipe downstream is not an error.
fn emit(text: &str) -> CliResult {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn file_name(path: &std::path::Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn require<T>(v: Option<T>, key: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{key}")))
}

fn cmd_classify(run: &RunConfig, re: f64, im: f64) -> CliResult {
    let z = c(re, im);
    let class = classify_trace(z, run.tol)?;
    #[derive(Serialize)]
    struct Out {
        f_value: f64,
        class: &'static str,
    }
    print_json(&Out { f_value: goldman_f(z), class: class.label() })
}

fn cmd_deltoid(run: &RunConfig, params: TriangleParams, conv: Convention, maxlen: usize) -> CliResult {
    let rep = build_representation(&params, conv)?;
    let mut points = Vec::new();
    let mut counts = std::collections::BTreeMap::<&str, usize>::new();
    for w in enumerate_words(maxlen) {
        let g = evaluate_word(&rep, &w);
        let class = classify(&g, run.tol)?;
        *counts.entry(class.label()).or_default() += 1;
        points.push((g.trace(), class));
    }
    let path = write_atomic(&run.out_dir, "deltoid.svg", &deltoid_svg(&points))?;
    print_json(&json!({
        "params": params,
        "convention": conv,
        "words": points.len(),
        "counts": counts,
        "svg": file_name(&path),
    }))
}

fn cmd_alpha_scan(run: &RunConfig, n: u32, resolution: usize) -> CliResult {
    if resolution < 2 {
        return Err(CliError::Usage("resolution must be at least 2".into()));
    }
    let grid = alpha_grid(n, resolution)?;
    let rows = alpha_scan_with_eps(n, &grid, run.tol)?;
    let step = grid[1] - grid[0];
    let a0 = alpha_zero(n)?;
    let transition = scan_transition(&rows);

    let trace_rows: Vec<TraceRow> =
        rows.iter().map(|r| TraceRow::new(r.alpha.to_string(), r.trace_wa, r.goldman_f, r.class)).collect();
    let params = json!({ "n": n, "resolution": resolution, "word": "1323" });
    let csv = write_atomic(&run.out_dir, "alpha_scan.csv", &trace_csv(&trace_rows))?;
    let body = json!({ "params": params, "convention": Convention::HalfAngle, "rows": trace_rows });
    let js = write_atomic(
        &run.out_dir,
        "alpha_scan.json",
        &serde_json::to_string_pretty(&body).map_err(|e| CliError::Usage(e.to_string()))?,
    )?;
    let path: Vec<C64> = rows.iter().map(|r| r.trace_wb).collect();
    let mark = transition.and_then(|t| rows.iter().find(|r| r.alpha == t)).map(|r| r.trace_wb);
    let svg = write_atomic(&run.out_dir, "alpha_scan.svg", &trajectory_svg(&path, mark))?;

    print_json(&json!({
        "n": n,
        "resolution": resolution,
        "alpha_min": alpha_min(n)?,
        "alpha_zero": a0,
        "grid_step": step,
        "transition": transition,
        "files": [file_name(&csv), file_name(&js), file_name(&svg)],
    }))?;
    match transition {
        Some(t) if (t - a0).abs() <= step => Ok(()),
        Some(t) => Err(CliError::Verification(format!("transition {t} is more than a grid step from {a0}"))),
        None => Err(CliError::Verification("no monotone transition in the scan".into())),
    }
}

fn cmd_build_triangle(run: &RunConfig, params: TriangleParams, conv: Convention) -> CliResult {
    let rep = build_representation(&params, conv)?;
    let g = rep.gram;
    let entry = |i, j| {
        let z = g.g(i, j);
        [z.re, z.im]
    };
    let form = *rep.inversions[0].form();
    let order = |a: usize, b: usize| projective_order(&rep.inversions[a].mul(&rep.inversions[b]), 200);
    let wa = w_a(&rep);
    let wb = w_b(&rep);
    let (twa, twb) = (trace_wa_matrix(&rep), trace_wb_matrix(&rep));
    print_json(&json!({
        "params": params,
        "convention": conv,
        "gram": { "g12": entry(1, 2), "g23": entry(2, 3), "g31": entry(3, 1) },
        "determinant": g.determinant(),
        "angular_invariant": angular_invariant(&form, &rep.polar)?,
        "orders": { "I1I2": order(0, 1), "I2I3": order(1, 2), "I3I1": order(2, 0) },
        "w_a": { "trace": [twa.re, twa.im], "goldman_f": goldman_f(twa), "class": classify(&wa, run.tol)?.label() },
        "w_b": { "trace": [twb.re, twb.im], "goldman_f": goldman_f(twb), "class": classify(&wb, run.tol)?.label() },
    }))
}

fn cmd_falsify(run: &RunConfig, params: TriangleParams, conv: Convention, maxlen: usize, format: Format) -> CliResult {
    let rep = build_representation(&params, conv)?;
    let witnesses = discreteness_falsifier_with_eps(&rep, maxlen, run.tol)?;
    let rows: Vec<TraceRow> =
        witnesses.iter().map(|w| TraceRow::new(w.word.to_string(), w.trace, w.goldman_f, w.class)).collect();
    match format {
        Format::Csv => emit(&trace_csv(&rows)),
        Format::Json => print_json(&json!({
            "params": { "triangle": params, "maxlen": maxlen },
            "convention": conv,
            "rows": rows,
        })),
    }
}

fn cmd_gon18(run: &RunConfig) -> CliResult {
    let s = Surface::new()?;
    let crossings = self_intersection_count(&s.gon, &s.chords.chords)?;
    let poly = &s.gon.polygon;
    let angles = poly.interior_angles();
    let mut csv = String::from("vertex,re,im,disk_re,disk_im,angle\n");
    for (k, (z, a)) in poly.vertices.iter().zip(&angles).enumerate() {
        let d = to_disk(*z);
        csv.push_str(&format!("{k},{},{},{},{},{a}\n", z.re, z.im, d.re, d.im));
    }
    let csv = write_atomic(&run.out_dir, "gon18_vertices.csv", &csv)?;
    let svg = write_atomic(&run.out_dir, "gon18.svg", &gon18_svg(&s.gon, &s.chords, &s.axis))?;
    let r = &s.report;
    print_json(&json!({
        "area": r.area,
        "cycles": r.cycles.len(),
        "angle_sums": r.angle_sums,
        "genus": r.genus_integer(),
        "closure_step": s.chords.closure_step,
        "self_intersections": crossings.total(),
        "files": [file_name(&csv), file_name(&svg)],
    }))?;
    let mut bad = Vec::new();
    if (r.area - 4.0 * PI).abs() > 1e-8 {
        bad.push(format!("area {}", r.area));
    }
    if r.cycles.len() != 6 || r.angle_sums.iter().any(|a| (a - 2.0 * PI).abs() > 1e-9) {
        bad.push("vertex cycles".to_string());
    }
    if r.genus_integer() != Some(2) {
        bad.push(format!("genus {}", r.genus));
    }
    if s.chords.closure_step != 19 || s.chords.midpoint_residual(&s.gon) > 1e-9 {
        bad.push("chord closure".to_string());
    }
    if crossings.total() != 9 {
        bad.push(format!("{} self-intersections", crossings.total()));
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(bad.join(", ")))
    }
}

fn cmd_cosets(run: &RunConfig, maxlen: usize) -> CliResult {
    let s = Surface::new()?;
    let mut csv = String::from("word,label\n");
    let mut seen = [false; 18];
    let mut count = 0;
    for w in std::iter::once(Word::empty()).chain(enumerate_words(maxlen)) {
        let label = s.cosets.label(&w);
        seen[label] = true;
        count += 1;
        csv.push_str(&format!("{w},{label}\n"));
    }
    let path = write_atomic(&run.out_dir, "cosets.csv", &csv)?;
    print_json(&json!({
        "maxlen": maxlen,
        "words": count,
        "labels_realized": seen.iter().filter(|&&b| b).count(),
        "representatives": s.cosets.labels,
        "csv": file_name(&path),
    }))
}

fn cmd_cover(genus: u32, beta: Option<HomologyClass>) -> CliResult {
    let s = Surface::new()?;
    let axis = s.axis_word()?;
    let l = s.axis_class()?;
    let beta = beta.unwrap_or_else(|| choose_beta(&l));
    let spec = CoverSpec::new(genus, beta)?;
    let inv = cover_invariants(&spec);
    let psi = spec.psi_class(&l);
    print_json(&json!({
        "genus": genus,
        "beta": beta.0,
        "degree": inv.degree,
        "euler_characteristic": inv.euler_characteristic,
        "cover_genus": inv.genus,
        "axis_word": axis,
        "axis_class": l.0,
        "psi_axis": psi,
        "axis_lifts": lift_count(psi, &spec),
    }))
}

fn triangle_params(n: u32, alpha: f64) -> Result<TriangleParams, CliError> {
    Ok(TriangleParams::three_three(n, alpha)?)
}

fn run(cli: Cli) -> CliResult {
    let file = ConfigFile::load(cli.config.as_deref())?;
    let run = RunConfig::resolve(&file, cli.out_dir, cli.tol)?;
    let conv = |flag: Option<Conv>| -> Result<Convention, CliError> {
        Ok(file.pick_or(flag, "convention", Conv::HalfAngle)?.into())
    };
    match cli.command {
        Command::Classify { trace_re, trace_im } => cmd_classify(&run, trace_re, trace_im),
        Command::DeltoidPlot { n, alpha, convention, maxlen } => {
            let params = triangle_params(file.pick_or(n, "n", 9)?, file.pick_or(alpha, "alpha", PI)?)?;
            cmd_deltoid(&run, params, conv(convention)?, file.pick_or(maxlen, "maxlen", 6)?)
        }
        Command::AlphaScan { n, resolution } => {
            cmd_alpha_scan(&run, file.pick_or(n, "n", 9)?, file.pick_or(resolution, "resolution", 1000)?)
        }
        Command::BuildTriangle { p, q, r, alpha, convention } => {
            let p = file.pick_or(p, "p", OrderArg(Order::Finite(3)))?;
            let q = file.pick_or(q, "q", OrderArg(Order::Finite(3)))?;
            let r = file.pick_or(r, "r", OrderArg(Order::Finite(9)))?;
            let params = TriangleParams::new(p.0, q.0, r.0, file.pick_or(alpha, "alpha", PI)?)?;
            cmd_build_triangle(&run, params, conv(convention)?)
        }
        Command::Falsify { n, alpha, convention, maxlen, format } => {
            let alpha = require(file.pick(alpha, "alpha")?, "alpha")?;
            let params = triangle_params(file.pick_or(n, "n", 9)?, alpha)?;
            let maxlen = file.pick_or(maxlen, "maxlen", 6)?;
            cmd_falsify(&run, params, conv(convention)?, maxlen, file.pick_or(format, "format", Format::Json)?)
        }
        Command::Gon18 => cmd_gon18(&run),
        Command::Cosets { maxlen } => cmd_cosets(&run, file.pick_or(maxlen, "maxlen", 4)?),
        Command::Cover { genus, beta } => {
            let genus = require(file.pick(genus, "genus")?, "genus")?;
            cmd_cover(genus, file.pick(beta, "beta")?.map(|b| b.0))
        }
        Command::Adjudicate => print_json(&adjudicate()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("chyp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chyp::isometry::IsometryClass;

    #[test]
    fn parses_orders_and_classes() {
        assert!(matches!("inf".parse::<OrderArg>().unwrap().0, Order::Infinite));
        assert!(matches!("9".parse::<OrderArg>().unwrap().0, Order::Finite(9)));
        assert!("x".parse::<OrderArg>().is_err());
        assert_eq!("1,-1,0,2".parse::<BetaArg>().unwrap().0, HomologyClass([1, -1, 0, 2]));
        assert!("1,2".parse::<BetaArg>().is_err());
        assert!(matches!("relation-enforcing".parse::<Conv>().unwrap(), Conv::RelationEnforcing));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Verification(String::new()).exit_code(), 1);
        assert_eq!(CliError::Usage(String::new()).exit_code(), 2);
        assert_eq!(CliError::Domain(chyp::Error::BadN(3)).exit_code(), 3);
    }

    #[test]
    fn hyperbolic_class_label() {
        assert_eq!(classify_trace(c(25.45585, 0.0), 1e-8).unwrap(), IsometryClass::Hyperbolic);
    }
}
