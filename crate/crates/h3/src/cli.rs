//! `h3` command line. Exit status: 0 success, 1 a property was violated,
//! 2 usage, configuration or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use h3_core::generators::{GenKind, GenSpec};
use h3_core::patterns::count_embeddings;
use h3_core::properties::{
    check_bdd, check_disc, check_pair, check_qprime, check_tuple, estimate_jumbledness, SearchOptions, DEFAULT_BDD_BUDGET,
};
use h3_core::{Mode, PropertyParams, VertexSet};

use crate::classify::classify;
use crate::error::{HarnessError, Result};
use crate::experiment::{run_experiment, to_csv, to_json, ExperimentConfig, Format};
use crate::format::{read_h3, read_pattern, sidecar_json, sidecar_path, write_h3};
use crate::implication::{implication_suite, ImplicationConfig};

#[derive(Parser, Debug)]
#[command(name = "h3", version, about = "Pseudorandomness audits and embedding counts for 3-uniform hypergraphs")]
pub struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an instance and write it as .h3 (plus a JSON sidecar).
    Gen(GenArgs),
    /// Run one property checker or the jumbledness estimate.
    Check(CheckArgs),
    /// Count labelled embeddings of a pattern.
    Count(CountArgs),
    /// Classify a pattern.
    Classify(ClassifyArgs),
    /// Run a parameter sweep from a JSON config.
    Experiment(ExperimentArgs),
    /// Run the Q′ → DISC → PAIR → TUPLE suite from a JSON config.
    Implication(ImplicationArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Random,
    Complete,
    Subsample,
    PlantedDense,
    PlantedStar,
}

impl From<KindArg> for GenKind {
    fn from(k: KindArg) -> GenKind {
        match k {
            KindArg::Random => GenKind::Random,
            KindArg::Complete => GenKind::Complete,
            KindArg::Subsample => GenKind::Subsample,
            KindArg::PlantedDense => GenKind::PlantedDense,
            KindArg::PlantedStar => GenKind::PlantedStar,
        }
    }
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value = "random")]
    pub kind: KindArg,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long)]
    pub p_in: Option<f64>,
    /// Keep probability for `subsample`.
    #[arg(long)]
    pub keep: Option<f64>,
    /// Host to subsample instead of a fresh G(n, p).
    #[arg(long)]
    pub host: Option<PathBuf>,
    /// Overridden by the H3_SEED environment variable.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output .h3 path; the sidecar goes next to it. Stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Qprime,
    Disc,
    Pair,
    Tuple,
    Bdd,
    Jumbled,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Exact,
    Search,
    Spectral,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Search => Mode::Search,
            ModeArg::Spectral => Mode::Spectral,
        }
    }
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub property: CheckKind,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Target density; defaults to the instance's density.
    #[arg(long)]
    pub q: Option<f64>,
    /// Reference density (defaults to q).
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long = "C")]
    pub c: Option<f64>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, default_value_t = 8)]
    pub restarts: u32,
    /// Overridden by the H3_SEED environment variable.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// BDD exact-enumeration budget.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Spectral relative tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub host: PathBuf,
    #[arg(long)]
    pub pattern: PathBuf,
    /// Density in the baseline n^k q^m; defaults to the host's density.
    #[arg(long)]
    pub q: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub pattern: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct ImplicationArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| HarnessError::io(p, e)),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| HarnessError::io("<stdout>", e))
        }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn seed_override(seed: u64) -> Result<u64> {
    match std::env::var("H3_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| HarnessError::ConfigInvalid(format!("H3_SEED = {v:?} is not an unsigned 64-bit integer"))),
        Err(_) => Ok(seed),
    }
}

fn gen(a: &GenArgs) -> Result<i32> {
    let seed = seed_override(a.seed)?;
    let host = a.host.as_deref().map(read_h3).transpose()?;
    let n = match (a.n, &host) {
        (Some(n), _) => n,
        (None, Some(h)) => h.n(),
        (None, None) => return Err(HarnessError::ConfigInvalid("--n is required".into())),
    };
    let spec = GenSpec {
        kind: a.kind.into(),
        n,
        p: a.p,
        s: a.s,
        p_in: a.p_in,
        keep: a.keep,
        seed,
    };
    let g = spec.generate(host.as_ref()).map_err(|e| HarnessError::core("gen", e))?;
    match &a.out {
        Some(path) => {
            emit(Some(path), &write_h3(&g))?;
            emit(Some(&sidecar_path(path)), &sidecar_json(&spec, &g))?;
        }
        None => emit(None, &write_h3(&g))?,
    }
    Ok(0)
}

fn check(a: &CheckArgs) -> Result<i32> {
    let seed = seed_override(a.seed)?;
    let g = read_h3(&a.input)?;
    let q = a.q.unwrap_or_else(|| g.density());
    let ctx = |e| HarnessError::core(format!("check {:?}", a.property).to_lowercase(), e);
    if a.property == CheckKind::Jumbled {
        if let Some(m) = a.mode {
            if !matches!(m, ModeArg::Spectral) {
                return Err(HarnessError::ConfigInvalid("jumbledness runs in spectral mode only".into()));
            }
        }
        let est = estimate_jumbledness(&g, a.p.unwrap_or(q), a.tol, a.restarts, seed).map_err(ctx)?;
        emit(a.out.as_deref(), &pretty(&est))?;
        return Ok(0);
    }
    let mut prm = PropertyParams::new(q);
    if let Some(p) = a.p {
        prm = prm.with_p(p);
    }
    for (set, v) in [
        (PropertyParams::with_eta as fn(PropertyParams, f64) -> PropertyParams, a.eta),
        (PropertyParams::with_delta, a.delta),
        (PropertyParams::with_eps, a.eps),
        (PropertyParams::with_c, a.c),
        (PropertyParams::with_alpha, a.alpha),
    ] {
        if let Some(v) = v {
            prm = set(prm, v);
        }
    }
    if let Some(k) = a.k {
        prm = prm.with_k(k);
    }
    let opts = SearchOptions {
        restarts: a.restarts,
        seed,
        ..Default::default()
    };
    let all = VertexSet::full(g.n() as usize);
    let mode = a.mode.map(Mode::from);
    let report = match a.property {
        CheckKind::Qprime => check_qprime(&g, &prm, mode.unwrap_or(Mode::Search), &opts),
        CheckKind::Disc => check_disc(&g, &all, &all, &prm, mode.unwrap_or(Mode::Search), &opts),
        CheckKind::Bdd => check_bdd(&g, &prm, mode.unwrap_or(Mode::Search), a.budget.unwrap_or(DEFAULT_BDD_BUDGET), &opts),
        CheckKind::Pair | CheckKind::Tuple if !matches!(mode, None | Some(Mode::Exact)) => {
            return Err(HarnessError::ConfigInvalid("PAIR and TUPLE run in exact mode only".into()))
        }
        CheckKind::Pair => check_pair(&g, &all, &all, &prm),
        CheckKind::Tuple => check_tuple(&g, prm.delta, q),
        CheckKind::Jumbled => unreachable!(),
    }
    .map_err(ctx)?;
    emit(a.out.as_deref(), &pretty(&report))?;
    Ok(i32::from(report.violated()))
}

fn count(a: &CountArgs) -> Result<i32> {
    let g = read_h3(&a.host)?;
    let h = read_pattern(&a.pattern)?;
    let q = a.q.unwrap_or_else(|| g.density());
    let c = count_embeddings(&g, &h)
        .map_err(|e| HarnessError::core("count", e))?
        .with_q(g.n(), &h, q);
    emit(None, &format!("count={} expected={} relative_error={}\n", c.count, c.expected, c.relative_error))?;
    Ok(0)
}

fn experiment(a: &ExperimentArgs) -> Result<i32> {
    let cfg = ExperimentConfig::load(&a.config)?;
    let rows = run_experiment(&cfg)?;
    let format = a.format.or(cfg.format).unwrap_or(Format::Csv);
    let text = match format {
        Format::Csv => to_csv(&rows)?,
        Format::Json => to_json(&rows),
    };
    emit(a.out.as_deref().or(cfg.out.as_deref()), &text)?;
    Ok(0)
}

fn implication(a: &ImplicationArgs) -> Result<i32> {
    let cfg = ImplicationConfig::load(&a.config)?;
    let report = implication_suite(&cfg)?;
    emit(a.out.as_deref(), &pretty(&report))?;
    Ok(0)
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Check(a) => check(a),
        Command::Count(a) => count(a),
        Command::Classify(a) => {
            let h = read_pattern(&a.pattern)?;
            emit(a.out.as_deref(), &pretty(&classify(&h)))?;
            Ok(0)
        }
        Command::Experiment(a) => experiment(a),
        Command::Implication(a) => implication(a),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return 2;
        }
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return 2;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
