use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use weft_cli::{render, BraidFile, Format, RenderSpec};
use weft_core::anyon::{
    braid_relation_residual, validate_model, Charge, Chirality, FusionBasis, ModelConstants, Representation,
};
use weft_core::compiler::{compile, verify_compilation, CompileRequest};
use weft_core::injection::{
    brute_force_injection, refine_injection, InjectionLibrary, Metric, RefineOptions, SearchConfig,
    BASIN_THRESHOLD,
};
use weft_core::random::random_word;
use weft_core::scaling::{length_bound_report, ScalingSample};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "weft", version, about = "Compile Fibonacci-anyon braids into weaves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a braid file into a weave with the warp starting at position 1.
    Compile(CompileArgs),
    /// Search for injection weaves and add them to a library.
    Inject(InjectArgs),
    /// Measure the projective distance between two braid files.
    Verify(VerifyArgs),
    /// Draw a braid as SVG or ASCII.
    Render(RenderArgs),
    /// Check the model data and the braid relations.
    ModelCheck(ModelCheckArgs),
    /// Compile seeded random braids over a grid and fit the length scaling.
    Bench(BenchArgs),
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    library: PathBuf,
    /// Weave file; stdout when absent (the ledger then goes to stderr).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Append injections returning the warp to position 1.
    #[arg(long)]
    home: bool,
    /// Verify on the basis `N:CHARGE` (or `CHARGE` for the braid's own N).
    #[arg(long)]
    verify_n_charge: Option<String>,
}

#[derive(Args)]
struct InjectArgs {
    #[arg(long, default_value_t = 28)]
    max_length: usize,
    #[arg(long, default_value_t = 5e-2)]
    target: f64,
    #[arg(long, default_value = "two-sector-full")]
    metric: Metric,
    /// Library file, extended if it exists.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, default_value = "plus")]
    chirality: Chirality,
    /// Longest word in the refinement net of a new library.
    #[arg(long)]
    net_max_length: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    braid: PathBuf,
    #[arg(long)]
    weave: PathBuf,
    /// Strand count of the basis; defaults to the files' strand count.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "tau")]
    charge: Charge,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value = "plus")]
    chirality: Chirality,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "svg")]
    format: Format,
    /// Warp start position; defaults to the file's `warp:` header.
    #[arg(long)]
    warp: Option<usize>,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 40)]
    spacing: u32,
}

#[derive(Args)]
struct ModelCheckArgs {
    #[arg(long, default_value = "plus")]
    chirality: Chirality,
    /// Largest strand count for the braid-relation checks.
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    /// Perturbs `R_τ` so every downstream check should fail.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "4")]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "5")]
    p: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    eps_list: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Injection library; a length-26 search is run when absent.
    #[arg(long)]
    library: Option<PathBuf>,
    #[arg(long, default_value = "plus")]
    chirality: Chirality,
    /// Skip the unitary comparison of each compiled weave.
    #[arg(long)]
    skip_verify: bool,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Compile(a) => cmd_compile(a),
        Command::Inject(a) => cmd_inject(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Render(a) => cmd_render(a),
        Command::ModelCheck(a) => cmd_model_check(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn read_braid(path: &Path) -> Result<BraidFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    BraidFile::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn parse_basis(spec: &str, strands: usize) -> Result<FusionBasis> {
    let (n, charge) = match spec.split_once(':') {
        Some((n, c)) => (n.trim().parse::<usize>().context("basis strand count")?, c),
        None => (strands, spec),
    };
    if n != strands {
        bail!("basis has {n} anyons but the braid has {strands} strands");
    }
    let charge: Charge = charge.parse().map_err(anyhow::Error::msg)?;
    Ok(FusionBasis::enumerate(n, charge)?)
}

#[derive(Serialize)]
struct CompileReport<'a> {
    budget: &'a weft_core::compiler::BudgetLedger,
    length_stats: &'a weft_core::compiler::LengthStats,
    segments: usize,
    injection: Option<InjectionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<weft_core::compiler::VerificationReport>,
}

#[derive(Serialize)]
struct InjectionSummary {
    length: usize,
    distance_full: f64,
    source: weft_core::injection::Provenance,
}

fn cmd_compile(a: CompileArgs) -> Result<u8> {
    if !(a.epsilon > 0.0) {
        bail!("--epsilon must be positive, got {}", a.epsilon);
    }
    let input = read_braid(&a.input)?;
    let library = InjectionLibrary::load(&a.library)?;
    let basis = a
        .verify_n_charge
        .as_deref()
        .map(|s| parse_basis(s, input.word.strands()))
        .transpose()?;
    let out = compile(&CompileRequest {
        braid: input.word.clone(),
        epsilon: a.epsilon,
        library: &library,
        return_home: a.home,
    })?;
    let weave = BraidFile {
        word: out.word.clone(),
        warp: Some(out.warp_start),
    };
    write_or_print(a.output.as_deref(), &weave.to_string())?;
    let verification = match &basis {
        Some(b) => Some(verify_compilation(
            &library.model(),
            &input.word,
            &out.word,
            b,
            a.epsilon,
            Some(out.budget.guaranteed_bound),
        )?),
        None => None,
    };
    let report = CompileReport {
        budget: &out.budget,
        length_stats: &out.length_stats,
        segments: out.plan.segments.len(),
        injection: out.injection.as_ref().map(|i| InjectionSummary {
            length: i.len(),
            distance_full: i.distance_full,
            source: i.source,
        }),
        verification: verification.clone(),
    };
    let text = to_json(&report);
    if a.output.is_some() {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    let failed = verification.is_some_and(|v| !v.passed || v.within_bound == Some(false));
    Ok(if failed { EXIT_VERIFY } else { 0 })
}

fn cmd_inject(a: InjectArgs) -> Result<u8> {
    let mut library = if a.out.exists() {
        let lib = InjectionLibrary::load(&a.out)?;
        if lib.chirality != a.chirality {
            bail!("{} holds chirality {:?}, asked for {:?}", a.out.display(), lib.chirality, a.chirality);
        }
        lib
    } else {
        InjectionLibrary::new(a.chirality)
    };
    if let Some(cap) = a.net_max_length {
        library.net_max_length = cap;
    }
    let cfg = SearchConfig {
        max_length: a.max_length,
        target_distance: a.target,
        metric: a.metric,
        chirality: a.chirality,
        workers: a.workers,
        ..SearchConfig::default()
    };
    let started = Instant::now();
    let outcome = brute_force_injection(&cfg)?;
    let mut converged = outcome.converged;
    let mut best = outcome.best;
    if let Some(found) = best.clone() {
        library.insert(found.clone());
        let refinable = a.metric == Metric::TwoSectorFull && found.distance_full <= BASIN_THRESHOLD;
        if !converged && refinable {
            let r = refine_injection(&library.model(), &found, a.target, library.net(), RefineOptions::default())?;
            converged = r.converged;
            library.insert(r.injection.clone());
            best = Some(r.injection);
        }
    }
    library.save(&a.out)?;
    match &best {
        Some(b) => {
            println!("metric: {}", a.metric);
            println!("best_distance: {:e}", b.distance());
            println!("distance_2d: {:e}", b.distance_2d);
            println!("distance_full: {:e}", b.distance_full);
            println!("length: {}", b.len());
            println!("word: {}", b.word);
            println!("source: {:?}", b.source);
        }
        None => println!("no injection of length <= {}", a.max_length),
    }
    println!("converged: {converged}");
    eprintln!("wall_time_s: {:.3}", started.elapsed().as_secs_f64());
    Ok(if converged { 0 } else { EXIT_NOT_CONVERGED })
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    let braid = read_braid(&a.braid)?;
    let weave = read_braid(&a.weave)?;
    let strands = braid.word.strands();
    if weave.word.strands() != strands {
        bail!("braid has {strands} strands, weave has {}", weave.word.strands());
    }
    let n = a.n.unwrap_or(strands);
    if n != strands {
        bail!("--n {n} does not match the {strands}-strand files");
    }
    let basis = FusionBasis::enumerate(n, a.charge)?;
    let model = ModelConstants::fibonacci(a.chirality);
    let report = verify_compilation(&model, &braid.word, &weave.word, &basis, a.epsilon, None)?;
    if a.json {
        print!("{}", to_json(&report));
    } else {
        println!("distance: {:e}", report.distance);
        println!("epsilon: {:e}", report.epsilon);
        println!("result: {}", if report.passed { "pass" } else { "fail" });
    }
    Ok(if report.passed { 0 } else { EXIT_VERIFY })
}

fn cmd_render(a: RenderArgs) -> Result<u8> {
    let file = read_braid(&a.input)?;
    let spec = RenderSpec {
        format: a.format,
        warp: a.warp.or(file.warp),
        spacing: a.spacing,
    };
    let text = render(&file.word, &spec)?;
    write_or_print(a.output.as_deref(), &text)?;
    Ok(0)
}

fn cmd_model_check(a: ModelCheckArgs) -> Result<u8> {
    let mut model = ModelConstants::<f64>::fibonacci(a.chirality);
    if a.inject_fault {
        model.r_tau *= Complex64::from_polar(1.0, 1e-3);
    }
    let report = validate_model(&model);
    let mut ok = true;
    for c in &report.checks {
        let pass = c.passed();
        ok &= pass;
        println!("{:<28} {:.3e}  (tol {:.0e})  {}", c.name, c.residual, c.tolerance, verdict(pass));
    }
    let tol = 1e-10;
    for n in 3..=a.max_n.max(3) {
        for charge in Charge::ALL {
            let basis = FusionBasis::enumerate(n, charge)?;
            let dim = basis.dim();
            let rep = Representation::new(&model, basis);
            let residual = braid_relation_residual(&rep);
            let pass = residual < tol;
            ok &= pass;
            let name = format!("braid_relations n={n} {charge} (dim {dim})");
            println!("{name:<28} {residual:.3e}  (tol {tol:.0e})  {}", verdict(pass));
        }
    }
    println!("model_check: {}", verdict(ok));
    Ok(if ok { 0 } else { EXIT_VERIFY })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    p: usize,
    epsilon: f64,
    trial: usize,
    length: Option<usize>,
    injections: Option<usize>,
    distance: Option<f64>,
    guaranteed_bound: Option<f64>,
    fit_bound: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct BenchReport {
    seed: u64,
    rows: Vec<BenchRow>,
    fit: Option<weft_core::scaling::ScalingFit>,
    fit_error: Option<String>,
    all_within_fit: bool,
}

/// Braid for one grid cell; independent of epsilon so a sweep reuses it.
fn bench_rng(seed: u64, n: usize, p: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 48) ^ ((p as u64) << 24) ^ trial as u64);
    rng
}

fn search_library(chirality: Chirality) -> Result<InjectionLibrary> {
    let cfg = SearchConfig {
        max_length: 26,
        chirality,
        ..SearchConfig::default()
    };
    let mut lib = InjectionLibrary::new(chirality);
    if let Some(best) = brute_force_injection(&cfg)?.best {
        lib.insert(best);
    }
    Ok(lib)
}

fn cmd_bench(a: BenchArgs) -> Result<u8> {
    if a.n.iter().any(|&n| n < 3) || a.p.is_empty() || a.eps_list.iter().any(|&e| !(e > 0.0)) {
        bail!("bench needs n >= 3 and positive epsilons");
    }
    let library = match &a.library {
        Some(p) => InjectionLibrary::load(p)?,
        None => search_library(a.chirality)?,
    };
    let model = library.model();
    let started = Instant::now();
    let mut rows = Vec::new();
    for &n in &a.n {
        let basis = FusionBasis::enumerate(n, Charge::Tau)?;
        for &p in &a.p {
            for &epsilon in &a.eps_list {
                for trial in 0..a.trials {
                    let braid = random_word(n, p, &mut bench_rng(a.seed, n, p, trial));
                    let mut row = BenchRow {
                        n,
                        p,
                        epsilon,
                        trial,
                        length: None,
                        injections: None,
                        distance: None,
                        guaranteed_bound: None,
                        fit_bound: None,
                        error: None,
                    };
                    let result = compile(&CompileRequest {
                        braid: braid.clone(),
                        epsilon,
                        library: &library,
                        return_home: false,
                    });
                    match result {
                        Ok(out) => {
                            row.length = Some(out.word.len());
                            row.injections = Some(out.budget.injection_count);
                            row.guaranteed_bound = Some(out.budget.guaranteed_bound);
                            if !a.skip_verify {
                                let v = verify_compilation(&model, &braid, &out.word, &basis, epsilon, None)?;
                                row.distance = Some(v.distance);
                            }
                        }
                        Err(e) => row.error = Some(e.to_string()),
                    }
                    rows.push(row);
                }
            }
        }
    }
    let samples: Vec<ScalingSample> = rows
        .iter()
        .filter_map(|r| {
            r.length.filter(|&l| l > 0).map(|length| ScalingSample {
                n: r.n,
                p: r.p,
                epsilon: r.epsilon,
                length,
            })
        })
        .collect();
    let (fit, fit_error) = match length_bound_report(&samples) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    if let Some(f) = &fit {
        for r in rows.iter_mut().filter(|r| r.length.is_some()) {
            r.fit_bound = Some(f.bound(r.n, r.p, r.epsilon));
        }
    }
    let all_within_fit = fit.as_ref().is_some_and(|f| f.all_within());
    let distances_ok = rows
        .iter()
        .all(|r| r.error.is_none() && r.distance.map_or(true, |d| d <= r.epsilon));
    let report = BenchReport {
        seed: a.seed,
        rows,
        fit,
        fit_error,
        all_within_fit,
    };
    if a.json {
        print!("{}", to_json(&report));
    } else {
        print!("{}", bench_table(&report));
    }
    eprintln!("wall_time_s: {:.3}", started.elapsed().as_secs_f64());
    Ok(if distances_ok { 0 } else { EXIT_VERIFY })
}

fn bench_table(report: &BenchReport) -> String {
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3e}"));
    let mut out = format!(
        "{:>3} {:>4} {:>10} {:>5} {:>9} {:>10} {:>10} {:>10} {:>10}\n",
        "n", "p", "epsilon", "trial", "length", "injections", "distance", "guaranteed", "fit_bound"
    );
    for r in &report.rows {
        out += &format!(
            "{:>3} {:>4} {:>10.3e} {:>5} {:>9} {:>10} {:>10} {:>10} {:>10}",
            r.n,
            r.p,
            r.epsilon,
            r.trial,
            r.length.map_or("-".into(), |l| l.to_string()),
            r.injections.map_or("-".into(), |k| k.to_string()),
            opt(r.distance),
            opt(r.guaranteed_bound),
            opt(r.fit_bound),
        );
        if let Some(e) = &r.error {
            out += &format!("  error: {e}");
        }
        out.push('\n');
    }
    match (&report.fit, &report.fit_error) {
        (Some(f), _) => {
            out += &format!(
                "fit: alpha={:.4} c_least_squares={:.4e} c_envelope={:.4e} rms_residual={:.4}\n",
                f.alpha, f.c_least_squares, f.c_envelope, f.rms_residual
            );
            out += &format!("all_within_fit: {}\n", report.all_within_fit);
        }
        (None, Some(e)) => out += &format!("fit: unavailable ({e})\n"),
        (None, None) => {}
    }
    out
}
