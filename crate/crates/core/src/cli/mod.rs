//! Command-line front end: `analyze`, `search`, `yield`, `verify-paper`,
//! `encode` and `builtin`.
//!
//! Exit codes: `0` success (including "not a distiller" verdicts), `1` input
//! error, `2` verification failure.

pub mod codefile;
pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{self, AnalysisOptions, CodeReport, TightnessRegion};
use crate::cws::{self, GraphMode};
use crate::distill::{self, BlochMap, BlochVector, DistillationMap};
use crate::error::{Error, Result};
use crate::registry::{self, CodeBody, CodeSpec};
use crate::search::{self, DiscoveredPoint, RecordStatus, SearchConfig, SearchRecord};

pub use codefile::{format_code_file, parse_code_file};

type Bloch = BlochVector<f64>;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

/// Environment variable consulted when `--threads` is absent.
pub const THREADS_ENV: &str = "MSD_THREADS";

#[derive(Debug, Parser)]
#[command(name = "msd", version, about = "Small stabilizer and CWS codes as magic state distillation routines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fixed points, threshold, tightness and suppression order of one code.
    Analyze(AnalyzeArgs),
    /// Exhaustive sweep over CWS codes.
    Search(SearchArgs),
    /// Yield as a function of the input noise rate.
    Yield(YieldArgs),
    /// Runs the reproduction checks and prints a pass/fail table.
    VerifyPaper(VerifyArgs),
    /// Graph-state preparation circuit of a CWS code.
    Encode(EncodeArgs),
    /// Lists the built-in codes, or prints one as a code file.
    Builtin(BuiltinArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegionArg {
    Quadrant,
    Cone,
}

impl From<RegionArg> for TightnessRegion {
    fn from(r: RegionArg) -> Self {
        match r {
            RegionArg::Quadrant => TightnessRegion::Quadrant,
            RegionArg::Cone => TightnessRegion::Cone,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct AnalyzeArgs {
    /// Code file or built-in name.
    pub code: String,
    /// Also report one round at depolarizing rate `p`.
    #[arg(long)]
    pub p: Option<f64>,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Retry non-converging starts with every octahedral correction.
    #[arg(long)]
    pub corrections: bool,
    /// Tightness samples.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = RegionArg::Quadrant)]
    pub region: RegionArg,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphModeArg {
    /// All labelled graphs for n ≤ 4, isomorphism classes above.
    Auto,
    All,
    NonIsomorphic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, clap::Args)]
pub struct SearchArgs {
    /// Qubit counts to sweep (comma separated, 2..=6).
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub n: Vec<usize>,
    #[arg(long, value_enum, default_value_t = GraphModeArg::Auto)]
    pub graph_mode: GraphModeArg,
    /// Tightness samples per fixed point.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = RegionArg::Quadrant)]
    pub region: RegionArg,
    /// Seed for starting states and tightness sampling.
    #[arg(long, default_value_t = SearchConfig::default().seed)]
    pub seed: u64,
    /// Retry non-converging starts with every octahedral correction.
    #[arg(long)]
    pub corrections: bool,
    /// Output path (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; inferred from a `.jsonl`/`.json` extension otherwise CSV.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Keep only tight rows.
    #[arg(long)]
    pub tight_only: bool,
    /// Keep one representative per (canonical fixed point, threshold) group.
    #[arg(long)]
    pub dedupe: bool,
    /// Worker threads (falls back to MSD_THREADS, then all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, clap::Args)]
pub struct YieldArgs {
    /// Code file or built-in name.
    pub code: String,
    /// Noise grid `start:stop:step`, stop inclusive.
    #[arg(long, default_value = "0.02:0.26:0.02")]
    pub p_grid: String,
    /// Output infidelity to reach.
    #[arg(long, default_value_t = 1e-10)]
    pub target_eps: f64,
    #[arg(long)]
    pub corrections: bool,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// Include the six-qubit sweep (slow).
    #[arg(long)]
    pub extended: bool,
    #[arg(long, default_value_t = SearchConfig::default().seed)]
    pub seed: u64,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Run only these claim ids.
    #[arg(long, value_delimiter = ',', hide = true)]
    pub only: Option<Vec<u8>>,
    /// Multiply every tolerance by this factor.
    #[arg(long, default_value_t = 1.0, hide = true)]
    pub tolerance_scale: f64,
}

#[derive(Debug, clap::Args)]
pub struct EncodeArgs {
    /// CWS code file or built-in name.
    pub code: String,
}

#[derive(Debug, clap::Args)]
pub struct BuiltinArgs {
    /// Name of the code to print.
    pub name: Option<String>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_INPUT
                }
            };
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(&a, out),
        Command::Search(a) => cmd_search(&a, out, err),
        Command::Yield(a) => cmd_yield(&a, out),
        Command::VerifyPaper(a) => cmd_verify(&a, out),
        Command::Encode(a) => cmd_encode(&a, out),
        Command::Builtin(a) => cmd_builtin(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

/// Entry point used by the `msd` binary.
pub fn main_from_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Reads a code file, or falls back to a built-in of that name.
pub fn load_code(arg: &str) -> Result<CodeSpec> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path)?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
        return parse_code_file(name, &text);
    }
    if registry::BUILTIN_NAMES.contains(&arg) {
        return registry::builtin(arg);
    }
    Err(Error::Parse(format!("`{arg}` is neither a readable code file nor a built-in ({})", registry::BUILTIN_NAMES.join(", "))))
}

/// Six decimals, with negative zero printed as zero.
pub fn fmt6(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn fmt_point(p: &[f64; 3]) -> String {
    format!("({}, {}, {})", fmt6(p[0]), fmt6(p[1]), fmt6(p[2]))
}

fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    let threads = match threads {
        Some(t) => Some(t),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| Error::Parse(format!("{THREADS_ENV}={v} is not a thread count")))?),
            Err(_) => None,
        },
    };
    match threads {
        Some(0) => Err(Error::Parse("thread count must be positive".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

/// Fixed points to analyse: the code's documented point (polished) first,
/// then anything discovered from the starting grid.
fn fixed_points_of(spec: &CodeSpec, map: &DistillationMap<f64>, corrections: bool) -> Vec<DiscoveredPoint> {
    let mut points = Vec::new();
    if let Some(fp) = spec.expected.as_ref().and_then(|e| e.fixed_point) {
        let fp = Bloch::from_array(fp);
        let fp = analysis::refine_fixed_point(map, &fp, 1e-3).unwrap_or(fp);
        points.push(DiscoveredPoint { point: fp, correction: map.correction() });
    }
    let config = SearchConfig { enable_corrections: corrections, ..SearchConfig::default() };
    for d in search::discover_fixed_points(map, &config) {
        if !points.iter().any(|p| analysis::canonically_close(&p.point, &d.point, 1e-5)) {
            points.push(d);
        }
    }
    points
}

fn report_json(r: &CodeReport<f64>) -> Value {
    serde_json::to_value(r).unwrap_or(Value::Null)
}

fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = load_code(&a.code)?;
    if let Some(p) = a.p {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parse(format!("--p {p} outside [0, 1]")));
        }
    }
    let map = distill::compile_map::<f64>(&spec)?;
    let mut opts = AnalysisOptions::default();
    opts.tightness.samples = a.samples;
    opts.tightness.seed = a.seed;
    opts.tightness.region = a.region.into();
    let kind = match spec.body {
        CodeBody::Cws(_) => "cws",
        CodeBody::Stabilizer(_) => "stabilizer",
    };
    let mut entries = Vec::new();
    for d in fixed_points_of(&spec, &map, a.corrections) {
        let corrected = map.with_rotation(d.correction);
        let report = analysis::analyze(&corrected, &d.point, d.correction, &opts);
        let one_round = a.p.map(|p| {
            let input = d.point.scale(1.0 - p);
            let ev = corrected.step(&input);
            (p, ev.output().unwrap_or_else(Bloch::zero), ev.p_success())
        });
        entries.push((d, report, one_round));
    }
    let verdict = if entries.iter().any(|(_, r, _)| r.as_ref().is_ok_and(|r| r.threshold > 1e-6)) {
        "distiller"
    } else {
        "not a distiller"
    };

    if a.json {
        let fps: Vec<Value> = entries
            .iter()
            .map(|(_, r, one)| {
                let mut v = match r {
                    Ok(r) => report_json(r),
                    Err(e) => json!({ "error": e.to_string() }),
                };
                if let (Some((p, o, ps)), Value::Object(m)) = (one, &mut v) {
                    m.insert("one_round".into(), json!({ "p": p, "output": o.to_array(), "p_success": ps }));
                }
                v
            })
            .collect();
        let doc = json!({
            "name": spec.name,
            "format": kind,
            "n": spec.n(),
            "correction": spec.correction.map(|c| c.label()),
            "verdict": verdict,
            "fixed_points": fps,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).map_err(|e| Error::Unsupported(e.to_string()))?)?;
        return Ok(EXIT_OK);
    }

    writeln!(out, "code: {} ({kind}, {} qubits)", spec.name, spec.n())?;
    if entries.is_empty() {
        writeln!(out, "verdict: not a distiller (no attracting non-stabilizer fixed point)")?;
    }
    for (k, (d, report, one)) in entries.iter().enumerate() {
        writeln!(out, "fixed point {}:", k + 1)?;
        match report {
            Ok(r) => {
                writeln!(out, "  fixed point:        {}", fmt_point(&r.fixed_point))?;
                writeln!(out, "  canonical:          {}", fmt_point(&r.canonical_fixed_point))?;
                writeln!(out, "  correction:         {}", r.correction_used.as_deref().unwrap_or("none"))?;
                writeln!(out, "  threshold:          {}", fmt6(r.threshold))?;
                writeln!(out, "  p_oct:              {}", fmt6(r.p_oct))?;
                let tight = if r.tightness_sampled { r.tight.to_string() } else { "false (threshold below p_oct)".into() };
                writeln!(out, "  tight:              {tight}")?;
                writeln!(out, "  convergence order:  {}", fmt6(r.convergence_order))?;
                writeln!(out, "  p_success at fixed: {}", fmt6(r.p_success_at_fixed_point))?;
            }
            Err(e) => {
                writeln!(out, "  fixed point:        {}", fmt_point(&d.point.to_array()))?;
                writeln!(out, "  analysis failed:    {e}")?;
            }
        }
        if let Some((p, o, ps)) = one {
            writeln!(out, "  one round at p = {}: output {}, p_success {}", fmt6(*p), fmt_point(&o.to_array()), fmt6(*ps))?;
        }
    }
    writeln!(out, "verdict: {verdict}")?;
    Ok(EXIT_OK)
}

pub const CSV_HEADER: &str = "n,canonical_graph_bits,codeword,correction,fixed_x,fixed_y,fixed_z,canon_x,canon_y,canon_z,threshold,p_oct,tight,order,p_success_at_fixed_point";

/// One CSV row for a successful record, with the code in canonical labelling.
pub fn csv_row(rec: &SearchRecord, r: &CodeReport<f64>) -> String {
    let canon = cws::canonical_cws(&rec.code);
    let f = r.fixed_point;
    let c = r.canonical_fixed_point;
    [
        rec.code.n().to_string(),
        canon.graph().upper_bits_string(),
        canon.codeword_string(),
        rec.correction.map(|c| c.label()).unwrap_or_else(|| "none".into()),
        fmt6(f[0]),
        fmt6(f[1]),
        fmt6(f[2]),
        fmt6(c[0]),
        fmt6(c[1]),
        fmt6(c[2]),
        fmt6(r.threshold),
        fmt6(r.p_oct),
        r.tight.to_string(),
        fmt6(r.convergence_order),
        fmt6(r.p_success_at_fixed_point),
    ]
    .join(",")
}

fn jsonl_row(rec: &SearchRecord) -> Value {
    let canon = cws::canonical_cws(&rec.code);
    let mut v = json!({
        "n": rec.code.n(),
        "canonical_graph_bits": canon.graph().upper_bits_string(),
        "graph": canon.graph().to_rows_string(),
        "codeword": canon.codeword_string(),
        "correction": rec.correction.map(|c| c.label()),
    });
    if let Value::Object(m) = &mut v {
        match &rec.status {
            RecordStatus::Ok(r) => {
                if let Value::Object(rm) = report_json(r) {
                    m.extend(rm);
                }
            }
            RecordStatus::Failed(e) => {
                m.insert("error".into(), Value::String(e.clone()));
            }
        }
    }
    v
}

fn cmd_search(a: &SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut config = SearchConfig {
        n_values: a.n.clone(),
        graph_mode: match a.graph_mode {
            GraphModeArg::Auto => None,
            GraphModeArg::All => Some(GraphMode::All),
            GraphModeArg::NonIsomorphic => Some(GraphMode::NonIsomorphic),
        },
        seed: a.seed,
        enable_corrections: a.corrections,
        ..SearchConfig::default()
    };
    config.analysis.tightness.samples = a.samples;
    config.analysis.tightness.seed = a.seed;
    config.analysis.tightness.region = a.region.into();
    config.validate()?;
    let format = a.format.unwrap_or_else(|| match a.out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("jsonl") | Some("json") => OutputFormat::Jsonl,
        _ => OutputFormat::Csv,
    });
    // Fail on an unwritable path before the sweep, not after.
    let mut file = match &a.out {
        Some(p) => Some(fs::File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?),
        None => None,
    };

    let output = with_threads(a.threads, || search::run_search(&config))??;
    let mut records: Vec<SearchRecord> = if a.dedupe {
        search::dedupe(&output.records).into_iter().map(|g| g[0].clone()).collect()
    } else {
        output.records
    };
    if a.tight_only {
        records.retain(|r| r.report().is_some_and(|r| r.tight));
    }

    let mut text = String::new();
    let mut failed = 0usize;
    match format {
        OutputFormat::Csv => {
            text += CSV_HEADER;
            text.push('\n');
            for rec in &records {
                match rec.report() {
                    Some(r) => {
                        text += &csv_row(rec, r);
                        text.push('\n');
                    }
                    None => failed += 1,
                }
            }
        }
        OutputFormat::Jsonl => {
            for rec in &records {
                failed += usize::from(rec.report().is_none());
                text += &jsonl_row(rec).to_string();
                text.push('\n');
            }
        }
    }
    match file.as_mut() {
        Some(f) => f.write_all(text.as_bytes())?,
        None => out.write_all(text.as_bytes())?,
    }
    writeln!(err, "examined {} codes, wrote {} rows, {failed} analyses failed", output.codes_examined, records.len() - failed)?;
    Ok(EXIT_OK)
}

/// Expands `start:stop:step` (stop inclusive).
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("grid `{s}` is not start:stop:step"));
    let parts: Vec<f64> =
        s.split(':').map(|t| t.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?;
    let [start, stop, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0) || stop < start || !(0.0..=1.0).contains(&start) || stop > 1.0 {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12).collect())
}

fn cmd_yield(a: &YieldArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = load_code(&a.code)?;
    let grid = parse_grid(&a.p_grid)?;
    if !(a.target_eps > 0.0) {
        return Err(Error::Parse("--target-eps must be positive".into()));
    }
    let map = distill::compile_map::<f64>(&spec)?;
    let points = fixed_points_of(&spec, &map, a.corrections);
    let Some(d) = points.first() else {
        writeln!(out, "p,yield,rounds,flag")?;
        for p in grid {
            writeln!(out, "{},0,0,not_a_distiller", fmt6(p))?;
        }
        return Ok(EXIT_OK);
    };
    let corrected = map.with_rotation(d.correction);
    let threshold = analysis::threshold(&corrected, &d.point, &Default::default())?;
    writeln!(out, "# fixed point {}, threshold {}", fmt_point(&d.point.to_array()), fmt6(threshold))?;
    writeln!(out, "p,yield,rounds,flag")?;
    for p in grid {
        if p / 2.0 <= a.target_eps {
            writeln!(out, "{},1,0,ok", fmt6(p))?;
            continue;
        }
        if p >= threshold {
            writeln!(out, "{},0,0,above_threshold", fmt6(p))?;
            continue;
        }
        match analysis::yield_of(&corrected, &d.point, p, a.target_eps) {
            Ok(y) => writeln!(out, "{},{:.6e},{},ok", fmt6(p), y.value, y.rounds)?,
            Err(_) => writeln!(out, "{},0,0,not_distillable", fmt6(p))?,
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let opts = verify::VerifyOptions {
        extended: a.extended,
        only: a.only.clone(),
        tolerance_scale: a.tolerance_scale,
        seed: a.seed,
    };
    let claims = with_threads(a.threads, || {
        let verifier = verify::Verifier::new(opts);
        let mut lines = Vec::new();
        let claims = verifier.run(&mut |c| lines.push(format_claim(c)));
        (claims, lines)
    })?;
    let (claims, lines) = claims;
    for l in lines {
        write!(out, "{l}")?;
    }
    let failed = claims.iter().filter(|c| !c.pass).count();
    writeln!(out, "{} of {} claims passed", claims.len() - failed, claims.len())?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY })
}

/// Multi-line table entry for one claim.
pub fn format_claim(c: &verify::Claim) -> String {
    format!(
        "[{}] {:>2}  {}\n      source:    {}\n      expected:  {}\n      computed:  {}\n      tolerance: {}\n",
        c.status(),
        c.id,
        c.title,
        c.source,
        c.expected,
        c.computed,
        c.tolerance
    )
}

fn cmd_encode(a: &EncodeArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = load_code(&a.code)?;
    match spec.as_cws() {
        Some(code) => {
            write!(out, "{}", cws::emit_encoding_circuit(code))?;
            Ok(EXIT_OK)
        }
        None => Err(Error::Unsupported(format!("{}: no graph form available for stabilizer-format codes", spec.name))),
    }
}

fn cmd_builtin(a: &BuiltinArgs, out: &mut dyn Write) -> Result<i32> {
    match &a.name {
        None => {
            for name in registry::BUILTIN_NAMES {
                writeln!(out, "{name}")?;
            }
        }
        Some(name) => write!(out, "{}", format_code_file(&registry::builtin(name)?))?,
    }
    Ok(EXIT_OK)
}
