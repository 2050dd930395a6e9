mod manifest;

use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigUint, RandBigInt};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use sidon3_core::analyzer::{attribute_collision, decompose, monte_carlo_coverage, three_fold_range, verify_sidon};
use sidon3_core::auxset::{build_y_table, search, AuxSet};
use sidon3_core::builder::{audit_preconditions, build_sequence, Density, Params, SidonSequence};
use sidon3_core::equidist::{deviation_report, triple_histogram};
use sidon3_core::format::SequenceFile;
use sidon3_core::gbase::MixedRadix;
use sidon3_core::{Poly, PrimeModulus};

use manifest::{read_text, write_text, RunManifest};

/// Build and verify Sidon sequences that are asymptotic bases of order 3.
#[derive(Parser)]
#[command(name = "sidon3", version)]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search primes for an auxiliary pair (p, A) and write it as JSON.
    FindAux(FindAuxArgs),
    /// Build the sequence for a range of k and write it as JSON.
    Build(BuildArgs),
    /// Check a sequence file: Sidon property, coverage, or decompositions.
    Verify(VerifyArgs),
    /// Count triple products of irreducibles in residue classes.
    Equidist(EquidistArgs),
    /// Decompose one integer in the generalised base.
    Decompose(DecomposeArgs),
}

#[derive(Args, Serialize)]
struct FindAuxArgs {
    #[arg(long, default_value_t = 11)]
    p_min: u64,
    #[arg(long, default_value_t = 100_000)]
    p_max: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Attempts per prime for each construction.
    #[arg(long, default_value_t = 200)]
    attempts: u64,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args, Serialize)]
struct BuildArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    aux_file: String,
    /// Density exponent, as a decimal or a fraction.
    #[arg(long, default_value = "7/20")]
    c: String,
    #[arg(long)]
    k_min: usize,
    #[arg(long)]
    k_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Refuse parameters outside the asymptotic regime.
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    Sidon,
    Coverage,
    Decompose,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    seq_file: String,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Coverage window length.
    #[arg(long, default_value_t = 1000)]
    window: u64,
    /// Coverage window start (default: 3 min S).
    #[arg(long)]
    start: Option<String>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Random decompositions to check.
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Witnesses to attribute in sidon mode.
    #[arg(long, default_value_t = 100)]
    max_witnesses: usize,
    /// Per-integer coverage table.
    #[arg(long)]
    csv: Option<String>,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args, Serialize)]
struct EquidistArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    g: String,
    /// Upper bound on the largest normalized deviation.
    #[arg(long, default_value_t = 10.0)]
    alarm: f64,
    /// JSON summary (default: `<out>.summary.json`, or none for stdout).
    #[arg(long)]
    summary: Option<String>,
    /// Per-class CSV.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args, Serialize)]
struct DecomposeArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    aux_file: String,
    #[arg(long)]
    m: String,
    #[arg(long, default_value = "-")]
    out: String,
}

fn params_value<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn read_aux(path: &str) -> Result<AuxSet> {
    AuxSet::from_json(&read_text(path)?).with_context(|| format!("invalid auxiliary set in {path}"))
}

fn read_sequence(path: &str) -> Result<SidonSequence> {
    SequenceFile::from_json(&read_text(path)?)
        .and_then(SequenceFile::into_sequence)
        .with_context(|| format!("malformed sequence file {path}"))
}

fn parse_big(text: &str, what: &str) -> Result<BigUint> {
    text.parse().with_context(|| format!("{what} must be a non-negative integer, got {text:?}"))
}

fn emit(out: &str, mut body: Value, manifest: &mut RunManifest) -> Result<()> {
    manifest.outputs.push(out.to_string());
    body["manifest"] = manifest.to_value();
    write_text(out, &serde_json::to_string_pretty(&body)?)?;
    manifest.write_sidecar(out)
}

fn find_aux(args: &FindAuxArgs) -> Result<bool> {
    if args.p_min > args.p_max {
        bail!(Usage(format!("empty prime range [{}, {}]", args.p_min, args.p_max)));
    }
    let mut manifest = RunManifest::new("find-aux", params_value(args), Some(args.seed));
    match search(args.p_min, args.p_max, args.seed, args.attempts) {
        Ok(report) => {
            manifest.outputs.push(args.out.clone());
            write_text(&args.out, &report.aux.to_json()?)?;
            manifest.warnings.push(format!(
                "p = {} via {} after {} attempts over {} primes",
                report.aux.p(),
                report.aux.method(),
                report.attempts_total,
                report.primes_scanned
            ));
            manifest.write_sidecar(&args.out)?;
            eprintln!("{}", serde_json::to_string(&json!({
                "p": report.aux.p(),
                "method": report.aux.method().to_string(),
                "attempts_total": report.attempts_total,
                "best_random_run": report.best_random_run,
                "sup_norm": report.sup_norm,
            }))?);
            Ok(true)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(false)
        }
    }
}

fn build(args: &BuildArgs) -> Result<bool> {
    let q = PrimeModulus::new(args.q)?;
    let aux = read_aux(&args.aux_file)?;
    let c: Density = args.c.parse()?;
    let mut params = Params::new(q, aux, args.k_min, args.k_max, args.seed);
    params.c = c;
    params.strict = args.strict;
    let seq = build_sequence(&params)?;
    let mut manifest = RunManifest::new("build", params_value(args), Some(args.seed));
    manifest.inputs.push(args.aux_file.clone());
    manifest.outputs.push(args.out.clone());
    manifest.warnings = seq.warnings.clone();
    let mut file = SequenceFile::from_sequence(&seq);
    file.manifest = Some(manifest.to_value());
    write_text(&args.out, &file.to_json()?)?;
    manifest.write_sidecar(&args.out)?;
    Ok(true)
}

fn verify(args: &VerifyArgs) -> Result<bool> {
    let seq = read_sequence(&args.seq_file)?;
    let mut manifest = RunManifest::new("verify", params_value(args), Some(args.seed));
    manifest.inputs.push(args.seq_file.clone());
    manifest.warnings = seq.warnings.clone();
    let (passed, body) = match args.mode {
        Mode::Sidon => verify_sidon_mode(&seq, args)?,
        Mode::Coverage => verify_coverage_mode(&seq, args, &mut manifest)?,
        Mode::Decompose => verify_decompose_mode(&seq, args)?,
    };
    let mut body = body;
    body["mode"] = serde_json::to_value(args.mode)?;
    body["passed"] = Value::from(passed);
    emit(&args.out, body, &mut manifest)?;
    Ok(passed)
}

fn verify_sidon_mode(seq: &SidonSequence, args: &VerifyArgs) -> Result<(bool, Value)> {
    let witnesses = verify_sidon(&seq.values())?;
    let attributions = witnesses
        .iter()
        .take(args.max_witnesses)
        .map(|w| attribute_collision(seq, w))
        .collect::<sidon3_core::Result<Vec<_>>>()?;
    let n = seq.entries.len();
    Ok((
        witnesses.is_empty(),
        json!({
            "entries": n,
            "pair_sums": n * (n + 1) / 2,
            "witness_count": witnesses.len(),
            "witnesses": witnesses.iter().take(args.max_witnesses).collect::<Vec<_>>(),
            "attributions": attributions,
            "audit": audit_preconditions(&seq.params),
        }),
    ))
}

fn verify_coverage_mode(seq: &SidonSequence, args: &VerifyArgs, manifest: &mut RunManifest) -> Result<(bool, Value)> {
    let start = match &args.start {
        Some(s) => parse_big(s, "--start")?,
        None => three_fold_range(seq).map(|(lo, _)| lo).context("the sequence is empty")?,
    };
    let report = monte_carlo_coverage(seq, &start, args.window, args.trials, args.seed)?;
    if let Some(path) = &args.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["m", "count", "frequency"])?;
        for row in &report.rows {
            w.write_record([row.m.to_string(), row.count.to_string(), row.frequency.to_string()])?;
        }
        write_text(path, &String::from_utf8(w.into_inner()?)?)?;
        manifest.outputs.push(path.clone());
    }
    Ok((report.verify(), serde_json::to_value(&report)?))
}

fn verify_decompose_mode(seq: &SidonSequence, args: &VerifyArgs) -> Result<(bool, Value)> {
    let base = seq.params.base()?;
    let table = build_y_table(&seq.params.aux)?;
    let (_, hi) = three_fold_range(seq).context("the sequence is empty")?;
    let lo = BigUint::from(3u32);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut failures = Vec::new();
    let mut max_k = 0;
    for _ in 0..args.samples {
        let m = rng.gen_biguint_range(&lo, &(&hi + 1u32));
        match decompose(&m, &base, &table) {
            Ok(d) => {
                max_k = max_k.max(d.k);
                if let Err(reason) = d.verify(&base, &seq.params.aux) {
                    failures.push(json!({ "m": m.to_string(), "reason": reason }));
                }
            }
            Err(e) => failures.push(json!({ "m": m.to_string(), "reason": e.to_string() })),
        }
    }
    Ok((
        failures.is_empty(),
        json!({
            "samples": args.samples,
            "range": [lo.to_string(), hi.to_string()],
            "max_digit_pairs": max_k,
            "failures": failures,
        }),
    ))
}

fn equidist(args: &EquidistArgs) -> Result<bool> {
    let q = PrimeModulus::new(args.q)?;
    let g = Poly::parse(q, &args.g)?;
    let report = deviation_report(&triple_histogram(q, args.d, &g)?)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["a", "count", "expected", "deviation", "normalized_ratio"])?;
    for row in &report.rows {
        w.write_record([
            row.a.clone(),
            row.count.to_string(),
            row.expected.to_string(),
            row.deviation.to_string(),
            row.normalized_ratio.to_string(),
        ])?;
    }
    let mut manifest = RunManifest::new("equidist", params_value(args), None);
    manifest.outputs.push(args.out.clone());
    write_text(&args.out, String::from_utf8(w.into_inner()?)?.trim_end())?;
    let passed = report.conservation_holds && report.max_ratio < args.alarm;
    let summary_path = args.summary.clone().or_else(|| (args.out != "-").then(|| format!("{}.summary.json", args.out)));
    let mut summary = serde_json::to_value(&report)?;
    summary.as_object_mut().expect("object").remove("rows");
    summary["alarm"] = Value::from(args.alarm);
    summary["passed"] = Value::from(passed);
    match summary_path {
        Some(path) => emit(&path, summary, &mut manifest)?,
        None => eprintln!("{}", serde_json::to_string(&summary)?),
    }
    manifest.write_sidecar(&args.out)?;
    Ok(passed)
}

fn decompose_cmd(args: &DecomposeArgs) -> Result<bool> {
    let aux = read_aux(&args.aux_file)?;
    let base = MixedRadix::new(args.q, aux.p())?;
    let m = parse_big(&args.m, "--m")?;
    let d = decompose(&m, &base, &build_y_table(&aux)?)?;
    let check = d.verify(&base, &aux);
    let mut manifest = RunManifest::new("decompose", params_value(args), None);
    manifest.inputs.push(args.aux_file.clone());
    let mut body = serde_json::to_value(&d)?;
    body["passed"] = Value::from(check.is_ok());
    if let Err(reason) = &check {
        body["failure"] = Value::from(reason.clone());
    }
    emit(&args.out, body, &mut manifest)?;
    Ok(check.is_ok())
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    match &cli.command {
        Command::FindAux(a) => find_aux(a),
        Command::Build(a) => build(a),
        Command::Verify(a) => verify(a),
        Command::Equidist(a) => equidist(a),
        Command::Decompose(a) => decompose_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<Usage>() { 2 } else { 3 })
        }
    }
}
