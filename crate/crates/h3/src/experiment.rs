//! Parameter sweeps: generate instances, run property checks and embedding
//! counts, emit one flat row per (grid point, seed, pattern or property).

use std::path::{Path, PathBuf};
use std::time::Instant;

use h3_core::generators::{gen_complete, gen_random, subsample, GenKind, GenSpec};
use h3_core::properties::{
    check_bdd, check_disc, check_pair, check_qprime, check_tuple, estimate_jumbledness, SearchOptions, DEFAULT_BDD_BUDGET,
};
use h3_core::quantity::Quantity;
use h3_core::patterns::count_embeddings;
use h3_core::{Hypergraph3, Mode, PatternH, PropertyKind, PropertyParams, VertexSet};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::format::read_pattern;

/// Where a pattern comes from: a `.h3` file or inline edges.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternSource {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[u32; 3]>>,
}

impl PatternSource {
    pub fn load(&self) -> Result<PatternH> {
        match (&self.path, self.k, &self.edges) {
            (Some(p), None, None) => read_pattern(p),
            (None, Some(k), Some(e)) => {
                PatternH::new(k, e.iter().copied()).map_err(|e| HarnessError::core(format!("pattern '{}'", self.id), e))
            }
            _ => Err(HarnessError::ConfigInvalid(format!(
                "pattern '{}' needs either \"path\" or both \"k\" and \"edges\"",
                self.id
            ))),
        }
    }
}

/// One property check per instance. Unset parameters take the checker defaults.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropertyJob {
    pub property: PropertyKind,
    #[serde(default = "search_mode")]
    pub mode: Mode,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default, rename = "C")]
    pub c: Option<f64>,
    #[serde(default)]
    pub k: Option<u32>,
    #[serde(default)]
    pub budget: Option<u64>,
}

fn search_mode() -> Mode {
    Mode::Search
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A sweep over `n x p x q x seeds`.
///
/// * `random`: `G = G(n, q)`, jumbledness measured on `G` against `q`.
/// * `subsample`: host `Γ = G(n, p)`, `G` keeps each host edge with
///   probability `q / p`; jumbledness measured on `Γ` against `p`.
/// * `complete`: host `K_n`, `G` subsampled with probability `q`.
/// * `planted_dense`, `planted_star`: `G` generated with background `q`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: Vec<u32>,
    #[serde(default)]
    pub p: Vec<f64>,
    /// Empty means `q = p`.
    #[serde(default)]
    pub q: Vec<f64>,
    pub seeds: Vec<u64>,
    #[serde(default = "random_kind")]
    pub generator: GenKind,
    #[serde(default)]
    pub s: Option<u32>,
    #[serde(default)]
    pub p_in: Option<f64>,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default)]
    pub patterns: Vec<PatternSource>,
    #[serde(default)]
    pub properties: Vec<PropertyJob>,
    #[serde(default)]
    pub jumbledness: bool,
    #[serde(default = "eight")]
    pub restarts: u32,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Band for `|relative_error|`, reported per counting row.
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Off by default so repeated runs stay byte-identical.
    #[serde(default)]
    pub record_wall_time: bool,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

fn random_kind() -> GenKind {
    GenKind::Random
}
fn one() -> f64 {
    1.0
}
fn eight() -> u32 {
    8
}
fn default_tol() -> f64 {
    1e-6
}

impl ExperimentConfig {
    /// Reads a JSON config; relative pattern and output paths are resolved
    /// against the config's directory.
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| HarnessError::ConfigInvalid(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in &mut cfg.patterns {
            if let Some(f) = &mut p.path {
                if f.is_relative() {
                    *f = base.join(&*f);
                }
            }
        }
        if let Some(o) = &mut cfg.out {
            if o.is_relative() {
                *o = base.join(&*o);
            }
        }
        Ok(cfg)
    }
}

/// One output record. Columns are fixed and ordered as declared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub run_id: String,
    pub generator: String,
    pub pattern: String,
    pub property: String,
    pub status: String,
    pub count: Option<String>,
    pub expected: Option<f64>,
    pub relative_error: Option<f64>,
    pub within_epsilon: Option<bool>,
    pub beta_lower: Option<f64>,
    pub beta_upper: Option<f64>,
    pub gamma_ratio: Option<f64>,
    pub wall_time_ms: Option<f64>,
    pub error: Option<String>,
}

/// A validated grid point.
#[derive(Clone, Copy, Debug)]
struct Point {
    n: u32,
    p: f64,
    q: f64,
}

struct Instance {
    host: Hypergraph3,
    host_p: f64,
    graph: Hypergraph3,
    label: String,
}

fn invalid(msg: impl Into<String>) -> HarnessError {
    HarnessError::ConfigInvalid(msg.into())
}

/// Counting comparisons against the baseline only accept linear, connector-free
/// patterns with `k >= 4`.
pub fn check_gate(id: &str, h: &PatternH) -> Result<()> {
    if !h.stats().is_linear || !h.stats().is_connector_free() {
        return Err(invalid(format!("pattern '{id}' fails the linear 3-uniform connector-free gate")));
    }
    if h.k() < 4 {
        return Err(invalid(format!("pattern '{id}' has k = {}; counting comparisons need k >= 4", h.k())));
    }
    Ok(())
}

fn grid(cfg: &ExperimentConfig) -> Result<Vec<Point>> {
    if cfg.n.is_empty() || cfg.seeds.is_empty() {
        return Err(invalid("grids over n and seeds must be non-empty"));
    }
    let ps = match (cfg.generator, cfg.p.is_empty()) {
        (GenKind::Complete, true) => vec![1.0],
        (_, true) => return Err(invalid("grid over p must be non-empty")),
        _ => cfg.p.clone(),
    };
    if !(cfg.alpha > 0.0 && cfg.alpha <= 1.0) {
        return Err(invalid(format!("alpha = {} outside (0, 1]", cfg.alpha)));
    }
    let mut out = Vec::new();
    for &n in &cfg.n {
        for &p in &ps {
            let qs = if cfg.q.is_empty() { vec![p] } else { cfg.q.clone() };
            for q in qs {
                let in_range = |x: f64| x > 0.0 && x <= 1.0;
                if !in_range(p) || !in_range(q) {
                    return Err(invalid(format!("p = {p}, q = {q} must lie in (0, 1]")));
                }
                let (qq, pp, aa) = (Quantity::param(q), Quantity::param(p), Quantity::param(cfg.alpha));
                if !qq.le(pp) || !(aa * pp).le(qq) {
                    return Err(invalid(format!("q = {q} outside [alpha p, p] for p = {p}, alpha = {}", cfg.alpha)));
                }
                out.push(Point { n, p, q });
            }
        }
    }
    Ok(out)
}

fn build(cfg: &ExperimentConfig, pt: Point, seed: u64) -> h3_core::Result<Instance> {
    let Point { n, p, q } = pt;
    let spec = |kind, p| GenSpec {
        kind,
        n,
        p,
        s: cfg.s,
        p_in: cfg.p_in,
        keep: None,
        seed,
    };
    let label = |kind: &str, extra: String| format!("{kind}(n={n},{extra},seed={seed})");
    Ok(match cfg.generator {
        GenKind::Random => {
            let g = gen_random(n, q, seed)?;
            Instance {
                host: g.clone(),
                host_p: q,
                graph: g,
                label: label("random", format!("q={q}")),
            }
        }
        GenKind::Subsample => {
            let host = gen_random(n, p, seed)?;
            let graph = subsample(&host, q / p, seed)?;
            Instance {
                host,
                host_p: p,
                graph,
                label: label("subsample", format!("p={p},q={q}")),
            }
        }
        GenKind::Complete => {
            let host = gen_complete(n);
            let graph = if q < 1.0 { subsample(&host, q, seed)? } else { host.clone() };
            Instance {
                host,
                host_p: 1.0,
                graph,
                label: label("complete", format!("q={q}")),
            }
        }
        kind @ (GenKind::PlantedDense | GenKind::PlantedStar) => {
            let g = spec(kind, q).generate(None)?;
            let extra = match kind {
                GenKind::PlantedDense => format!("q={q},s={},p_in={}", cfg.s.unwrap_or(0), cfg.p_in.unwrap_or(0.0)),
                _ => format!("q={q}"),
            };
            Instance {
                host: g.clone(),
                host_p: q,
                graph: g,
                label: label(if kind == GenKind::PlantedDense { "planted_dense" } else { "planted_star" }, extra),
            }
        }
    })
}

fn params_for(job: &PropertyJob, pt: Point, alpha: f64) -> PropertyParams {
    let mut prm = PropertyParams::new(pt.q).with_p(pt.p).with_alpha(alpha);
    if let Some(v) = job.eta {
        prm = prm.with_eta(v);
    }
    if let Some(v) = job.delta {
        prm = prm.with_delta(v);
    }
    if let Some(v) = job.eps {
        prm = prm.with_eps(v);
    }
    if let Some(v) = job.c {
        prm = prm.with_c(v);
    }
    if let Some(v) = job.k {
        prm = prm.with_k(v);
    }
    prm
}

fn run_property(g: &Hypergraph3, job: &PropertyJob, prm: &PropertyParams, opts: &SearchOptions) -> h3_core::Result<h3_core::PropertyReport> {
    let all = VertexSet::full(g.n() as usize);
    match job.property {
        PropertyKind::Qprime => check_qprime(g, prm, job.mode, opts),
        PropertyKind::Disc => check_disc(g, &all, &all, prm, job.mode, opts),
        PropertyKind::Pair => check_pair(g, &all, &all, prm),
        PropertyKind::Tuple => check_tuple(g, prm.delta, prm.q),
        PropertyKind::Bdd => check_bdd(g, prm, job.mode, job.budget.unwrap_or(DEFAULT_BDD_BUDGET), opts),
    }
}

fn empty_row(run_id: String, generator: &str) -> ResultRow {
    ResultRow {
        run_id,
        generator: generator.to_string(),
        pattern: String::new(),
        property: String::new(),
        status: String::new(),
        count: None,
        expected: None,
        relative_error: None,
        within_epsilon: None,
        beta_lower: None,
        beta_upper: None,
        gamma_ratio: None,
        wall_time_ms: None,
        error: None,
    }
}

/// Runs the sweep. Rows come back sorted by run id; the output does not
/// depend on the worker count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let points = grid(cfg)?;
    let mut patterns = Vec::with_capacity(cfg.patterns.len());
    for src in &cfg.patterns {
        let h = src.load()?;
        check_gate(&src.id, &h)?;
        patterns.push((src.id.clone(), h));
    }
    if cfg.tol <= 0.0 {
        return Err(invalid(format!("tol = {} must be positive", cfg.tol)));
    }

    let jobs: Vec<(usize, Point, usize, u64)> = points
        .iter()
        .enumerate()
        .flat_map(|(i, &pt)| cfg.seeds.iter().enumerate().map(move |(j, &s)| (i, pt, j, s)))
        .collect();
    let mut rows: Vec<ResultRow> = jobs
        .par_iter()
        .flat_map_iter(|&(i, pt, j, seed)| instance_rows(cfg, &patterns, i, pt, j, seed))
        .collect();
    rows.sort_by(|a, b| a.run_id.cmp(&b.run_id));
    Ok(rows)
}

fn instance_rows(cfg: &ExperimentConfig, patterns: &[(String, PatternH)], i: usize, pt: Point, j: usize, seed: u64) -> Vec<ResultRow> {
    let prefix = format!("{i:04}-{j:04}");
    let inst = match build(cfg, pt, seed) {
        Ok(x) => x,
        Err(e) => {
            let mut row = empty_row(format!("{prefix}-generate"), "");
            row.status = "ERROR".into();
            row.error = Some(e.to_string());
            return vec![row];
        }
    };
    let wall = |t: Instant| cfg.record_wall_time.then(|| t.elapsed().as_secs_f64() * 1e3);

    let (mut lower, mut upper, mut gamma, mut jerr) = (None, None, None, None);
    if cfg.jumbledness {
        match estimate_jumbledness(&inst.host, inst.host_p, cfg.tol, cfg.restarts, seed) {
            Ok(est) => {
                lower = Some(est.beta_lower);
                upper = Some(est.beta_upper);
                gamma = Some(est.gamma_ratio);
            }
            Err(e) => jerr = Some(format!("jumbledness: {e}")),
        }
    }
    let with_beta = |mut row: ResultRow| {
        row.beta_lower = lower;
        row.beta_upper = upper;
        row.gamma_ratio = gamma;
        if row.error.is_none() {
            row.error = jerr.clone();
        }
        row
    };

    let mut rows = Vec::new();
    for (id, h) in patterns {
        let t = Instant::now();
        let mut row = empty_row(format!("{prefix}-count:{id}"), &inst.label);
        row.pattern = id.clone();
        match count_embeddings(&inst.graph, h).map(|c| c.with_q(inst.graph.n(), h, pt.q)) {
            Ok(c) => {
                row.status = "COUNTED".into();
                row.count = Some(c.count.to_string());
                row.expected = Some(c.expected);
                row.relative_error = Some(c.relative_error);
                row.within_epsilon = cfg.epsilon.map(|e| c.relative_error.abs() < e);
            }
            Err(e) => {
                row.status = "ERROR".into();
                row.error = Some(e.to_string());
            }
        }
        row.wall_time_ms = wall(t);
        rows.push(with_beta(row));
    }
    let opts = SearchOptions {
        restarts: cfg.restarts,
        seed,
        ..Default::default()
    };
    for (idx, job) in cfg.properties.iter().enumerate() {
        let t = Instant::now();
        let mut row = empty_row(format!("{prefix}-check{idx:02}:{}", job.property.name()), &inst.label);
        row.property = job.property.name().to_string();
        let prm = params_for(job, pt, cfg.alpha);
        match run_property(&inst.graph, job, &prm, &opts) {
            Ok(r) => row.status = r.status.name().to_string(),
            Err(e) => {
                row.status = "ERROR".into();
                row.error = Some(e.to_string());
            }
        }
        row.wall_time_ms = wall(t);
        rows.push(with_beta(row));
    }
    if patterns.is_empty() && cfg.properties.is_empty() {
        let mut row = empty_row(format!("{prefix}-instance"), &inst.label);
        row.status = "GENERATED".into();
        rows.push(with_beta(row));
    }
    rows
}

pub fn to_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| invalid(format!("csv: {e}")))?;
    }
    if rows.is_empty() {
        return Ok(String::new());
    }
    let bytes = w.into_inner().map_err(|e| invalid(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json(rows: &[ResultRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ExperimentConfig {
        serde_json::from_str(r#"{"n":[20],"p":[0.5],"seeds":[1,2]}"#).unwrap()
    }

    #[test]
    fn gate_rejects_nonlinear_and_small() {
        let mut cfg = base();
        cfg.patterns = vec![PatternSource {
            id: "k4".into(),
            path: None,
            k: Some(4),
            edges: Some(vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]),
        }];
        let e = run_experiment(&cfg).unwrap_err().to_string();
        assert!(e.contains("linear 3-uniform connector-free"), "{e}");
        cfg.patterns[0] = PatternSource {
            id: "edge".into(),
            path: None,
            k: Some(3),
            edges: Some(vec![[0, 1, 2]]),
        };
        assert!(run_experiment(&cfg).unwrap_err().to_string().contains("k >= 4"));
    }

    #[test]
    fn q_range_enforced() {
        let mut cfg = base();
        cfg.q = vec![0.6];
        assert!(matches!(run_experiment(&cfg), Err(HarnessError::ConfigInvalid(_))));
        cfg.q = vec![0.2];
        cfg.alpha = 0.5;
        assert!(matches!(run_experiment(&cfg), Err(HarnessError::ConfigInvalid(_))));
        cfg.seeds.clear();
        assert!(matches!(run_experiment(&cfg), Err(HarnessError::ConfigInvalid(_))));
    }

    #[test]
    fn complete_host_relative_error_is_exact() {
        let cfg: ExperimentConfig = serde_json::from_str(
            r#"{"n":[12],"q":[1.0],"seeds":[0],"generator":"complete",
                "patterns":[{"id":"lp","k":5,"edges":[[0,1,2],[2,3,4]]}]}"#,
        )
        .unwrap();
        let rows = run_experiment(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].count.as_deref(), Some("95040"));
        let want = (95040.0 - 12f64.powi(5)) / 12f64.powi(5);
        assert!((rows[0].relative_error.unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn rows_complete_and_sorted() {
        let mut cfg = base();
        cfg.q = vec![0.3, 0.5];
        cfg.alpha = 0.5;
        cfg.patterns = vec![PatternSource {
            id: "lp".into(),
            path: None,
            k: Some(5),
            edges: Some(vec![[0, 1, 2], [2, 3, 4]]),
        }];
        cfg.properties = serde_json::from_str(r#"[{"property":"TUPLE","delta":0.5},{"property":"QPRIME","mode":"EXACT"}]"#).unwrap();
        cfg.jumbledness = true;
        let rows = run_experiment(&cfg).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 3);
        assert!(rows.windows(2).all(|w| w[0].run_id < w[1].run_id));
        // exact Q' is out of reach at n = 20; the error is recorded on its row
        assert!(rows.iter().filter(|r| r.property == "QPRIME").all(|r| r.status == "ERROR"));
        assert!(rows.iter().all(|r| r.beta_upper.is_some()));
        let csv = to_csv(&rows).unwrap();
        assert!(csv.starts_with("run_id,generator,pattern,property,status,count,expected,relative_error,"));
    }
}
