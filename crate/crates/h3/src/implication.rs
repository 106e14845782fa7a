//! The chain Q′ → DISC → PAIR → TUPLE checked on generated instances.
//!
//! Each instance runs Q′ and DISC in search mode and PAIR, TUPLE exactly, all
//! with `X = Y = V`. An edge of the chain is reported for an instance only
//! when every earlier property passed; an event is a reported edge whose
//! consequent failed.

use std::path::Path;

use h3_core::generators::{GenKind, GenSpec};
use h3_core::properties::{check_disc, check_pair, check_qprime, check_tuple, SearchOptions};
use h3_core::{Mode, PropertyKind, PropertyParams, PropertyReport, Status, VertexSet};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Parameters for each link of the chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ladder {
    pub eta: f64,
    pub delta_qprime: f64,
    pub eps: f64,
    pub delta_pair: f64,
    pub delta_tuple: f64,
}

impl Default for Ladder {
    fn default() -> Self {
        Ladder {
            eta: 0.5,
            delta_qprime: 0.35,
            eps: 0.15,
            delta_pair: 0.5,
            delta_tuple: 0.5,
        }
    }
}

/// Instances are `generator(n, q, seed)` with `p = q`; planted kinds use `q`
/// as the background density and `s`, `p_in` for the planted part.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImplicationConfig {
    pub n: u32,
    #[serde(default)]
    pub q: Vec<f64>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default = "random_kind")]
    pub generator: GenKind,
    #[serde(default)]
    pub s: Option<u32>,
    #[serde(default)]
    pub p_in: Option<f64>,
    #[serde(default)]
    pub ladder: Ladder,
    #[serde(default = "eight")]
    pub restarts: u32,
}

fn random_kind() -> GenKind {
    GenKind::Random
}
fn eight() -> u32 {
    8
}

impl ImplicationConfig {
    pub fn load(path: &Path) -> Result<ImplicationConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::ConfigInvalid(format!("{}: {e}", path.display())))
    }
}

/// Outcome of one property on one instance. `needed` is the smallest value
/// of the property's tolerance parameter that the observed numbers would pass.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub property: PropertyKind,
    pub status: Status,
    pub needed: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceOutcome {
    pub id: String,
    pub q: f64,
    pub seed: u64,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeTally {
    pub from: PropertyKind,
    pub to: PropertyKind,
    pub antecedent_passed: usize,
    pub consequent_failed: usize,
    /// Instance ids of the events.
    pub events: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginSummary {
    pub property: PropertyKind,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImplicationReport {
    pub ladder: Ladder,
    pub instances: Vec<InstanceOutcome>,
    pub edges: Vec<EdgeTally>,
    pub margins: Vec<MarginSummary>,
}

impl ImplicationReport {
    pub fn events(&self) -> usize {
        self.edges.iter().map(|e| e.consequent_failed).sum()
    }
}

const CHAIN: [PropertyKind; 4] = [PropertyKind::Qprime, PropertyKind::Disc, PropertyKind::Pair, PropertyKind::Tuple];

fn margin(r: &PropertyReport, name: &str) -> f64 {
    r.margins.get(name).unwrap_or(f64::NAN)
}

fn needed(r: &PropertyReport, ladder: &Ladder) -> f64 {
    match r.property {
        PropertyKind::Qprime => ladder.delta_qprime - margin(r, "slack"),
        PropertyKind::Disc => ladder.eps * margin(r, "max_deviation") / margin(r, "bound"),
        PropertyKind::Pair => {
            let d = ladder.delta_pair;
            (d * margin(r, "sum1") / margin(r, "sum1_bound")).max(d * margin(r, "sum2") / margin(r, "sum2_bound"))
        }
        _ => margin(r, "degree_exceptional_fraction").max(margin(r, "codegree_exceptional_fraction")),
    }
}

fn run_instance(cfg: &ImplicationConfig, q: f64, seed: u64) -> Result<InstanceOutcome> {
    let id = format!("q={q},seed={seed}");
    let ctx = |e| HarnessError::core(format!("instance {id}"), e);
    let g = GenSpec {
        kind: cfg.generator,
        n: cfg.n,
        p: q,
        s: cfg.s,
        p_in: cfg.p_in,
        keep: None,
        seed,
    }
    .generate(None)
    .map_err(ctx)?;
    let l = &cfg.ladder;
    let all = VertexSet::full(cfg.n as usize);
    let opts = SearchOptions {
        restarts: cfg.restarts,
        seed,
        ..Default::default()
    };
    let base = PropertyParams::new(q);
    let reports = [
        check_qprime(&g, &base.with_eta(l.eta).with_delta(l.delta_qprime), Mode::Search, &opts),
        check_disc(&g, &all, &all, &base.with_eps(l.eps), Mode::Search, &opts),
        check_pair(&g, &all, &all, &base.with_delta(l.delta_pair)),
        check_tuple(&g, l.delta_tuple, q),
    ];
    let mut checks = Vec::with_capacity(4);
    for r in reports {
        let r = r.map_err(ctx)?;
        checks.push(Check {
            property: r.property,
            status: r.status,
            needed: needed(&r, l),
        });
    }
    Ok(InstanceOutcome { id, q, seed, checks })
}

pub fn implication_suite(cfg: &ImplicationConfig) -> Result<ImplicationReport> {
    let jobs: Vec<(f64, u64)> = cfg.q.iter().flat_map(|&q| cfg.seeds.iter().map(move |&s| (q, s))).collect();
    let instances = jobs
        .par_iter()
        .map(|&(q, s)| run_instance(cfg, q, s))
        .collect::<Result<Vec<_>>>()?;

    let mut edges: Vec<EdgeTally> = CHAIN
        .windows(2)
        .map(|w| EdgeTally {
            from: w[0],
            to: w[1],
            antecedent_passed: 0,
            consequent_failed: 0,
            events: Vec::new(),
        })
        .collect();
    for inst in &instances {
        for (i, edge) in edges.iter_mut().enumerate() {
            if inst.checks[..=i].iter().any(|c| c.status == Status::Violated) {
                break;
            }
            edge.antecedent_passed += 1;
            if inst.checks[i + 1].status == Status::Violated {
                edge.consequent_failed += 1;
                edge.events.push(inst.id.clone());
            }
        }
    }
    let margins = if instances.is_empty() {
        Vec::new()
    } else {
        CHAIN
            .iter()
            .enumerate()
            .map(|(i, &property)| {
                let v: Vec<f64> = instances.iter().map(|x| x.checks[i].needed).collect();
                MarginSummary {
                    property,
                    min: v.iter().copied().fold(f64::INFINITY, f64::min),
                    mean: v.iter().sum::<f64>() / v.len() as f64,
                    max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                }
            })
            .collect()
    };
    Ok(ImplicationReport {
        ladder: cfg.ladder,
        instances,
        edges,
        margins,
    })
}
