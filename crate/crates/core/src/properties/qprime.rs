//! Q′(η, δ, q): `(1-δ) q|X||Y| <= e(X, Y) <= (1+δ) q|X||Y|` for every
//! `|X| >= η C(n,2)` and `|Y| >= η n`.
//!
//! For fixed `Y` and a fixed size of `X`, the extreme values of `e(X, Y)` come
//! from the pairs with the smallest or largest `|N(S) ∩ Y|`, so both the exact
//! enumeration (over `Y` only) and the alternating search use sorted degree
//! lists.

use alloc::vec::Vec;

use rand::seq::index;

use super::{ceil_quantity, restart_rng, Margins, Mode, PropertyKind, PropertyParams, PropertyReport, SearchOptions, Status, Witness, Work};
use crate::bitset::{self, Ones};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;
use crate::par;
use crate::quantity::Quantity;

/// Largest `n` accepted in exact mode.
pub const QPRIME_EXACT_MAX_N: u32 = 6;

const SALT: u64 = 1;

struct Bounds {
    q: Quantity,
    lo: Quantity,
    hi: Quantity,
}

impl Bounds {
    fn new(params: &PropertyParams) -> Bounds {
        let q = Quantity::param(params.q);
        let d = Quantity::param(params.delta);
        Bounds {
            q,
            lo: (Quantity::int(1) - d) * q,
            hi: (Quantity::int(1) + d) * q,
        }
    }

    /// `Some(bound)` when `e` leaves `[lo, hi] · x y`.
    fn violation(&self, e: u64, x: usize, y: usize) -> Option<Quantity> {
        let xy = Quantity::count((x * y) as u64);
        let e = Quantity::count(e);
        let (lo, hi) = (self.lo * xy, self.hi * xy);
        if e.lt(lo) {
            Some(lo)
        } else if e.gt(hi) {
            Some(hi)
        } else {
            None
        }
    }

    fn ratio(&self, e: u64, x: usize, y: usize) -> f64 {
        e as f64 / (self.q.value() * x as f64 * y as f64)
    }
}

#[derive(Default)]
struct Extremes {
    min: f64,
    max: f64,
    seen: bool,
}

impl Extremes {
    fn add(&mut self, r: f64) {
        if !self.seen {
            (self.min, self.max, self.seen) = (r, r, true);
        } else {
            self.min = self.min.min(r);
            self.max = self.max.max(r);
        }
    }

    fn into_margins(self, delta: f64) -> Margins {
        let mut m = Margins::default();
        if self.seen {
            m.push("min_density_ratio", self.min);
            m.push("max_density_ratio", self.max);
            m.push("slack", delta - (1.0 - self.min).max(self.max - 1.0));
        }
        m
    }
}

/// Pair indices ordered by `(|N(S) ∩ Y|, S)`.
fn sorted_pairs(g: &Hypergraph3, y: &[u64]) -> (Vec<u32>, Vec<usize>) {
    let deg: Vec<u32> = (0..g.num_pairs()).map(|s| bitset::and_popcount(g.nbhd_words(s), y)).collect();
    let mut order: Vec<usize> = (0..g.num_pairs()).collect();
    order.sort_unstable_by_key(|&s| (deg[s], s));
    (deg, order)
}

/// Q′ check. `Mode::Exact` enumerates every `Y` and is limited to
/// `n <= QPRIME_EXACT_MAX_N`; `Mode::Search` runs alternating optimisation at
/// the threshold sizes and at 2x, 4x and the full sizes.
pub fn check_qprime(g: &Hypergraph3, params: &PropertyParams, mode: Mode, opts: &SearchOptions) -> Result<PropertyReport> {
    params.validate()?;
    let n = g.n() as usize;
    let pairs = g.num_pairs();
    let eta = Quantity::param(params.eta);
    let tx = (ceil_quantity(eta * Quantity::count(pairs as u64)) as usize).max(1);
    let ty = (ceil_quantity(eta * Quantity::count(n as u64)) as usize).max(1);
    let bounds = Bounds::new(params);
    let report = |status, witness, ext: Extremes, work| PropertyReport {
        property: PropertyKind::Qprime,
        mode,
        params: *params,
        status,
        witness,
        margins: ext.into_margins(params.delta),
        work,
    };
    if tx > pairs || ty > n {
        // nothing qualifies
        let status = if mode == Mode::Exact { Status::VerifiedExact } else { Status::NoViolationFound };
        return Ok(report(status, None, Extremes::default(), Work::default()));
    }
    match mode {
        Mode::Exact => {
            if g.n() > QPRIME_EXACT_MAX_N {
                return Err(Error::ModeTooLarge("Q' exact mode needs n <= 6"));
            }
            let (status, witness, ext, work) = exact(g, &bounds, tx, ty);
            Ok(report(status, witness, ext, work))
        }
        Mode::Search => {
            let (status, witness, ext, work) = search(g, &bounds, tx, ty, opts);
            Ok(report(status, witness, ext, work))
        }
        Mode::Spectral => Err(Error::UnsupportedMode("Q' has exact and search modes")),
    }
}

fn exact(g: &Hypergraph3, bounds: &Bounds, tx: usize, ty: usize) -> (Status, Option<Witness>, Extremes, Work) {
    let n = g.n() as usize;
    let pairs = g.num_pairs();
    let mut ext = Extremes::default();
    let mut examined = 0u64;
    for mask in 0u64..1 << n {
        let ny = mask.count_ones() as usize;
        if ny < ty {
            continue;
        }
        let y = [mask];
        let (deg, order) = sorted_pairs(g, &y);
        let mut prefix = alloc::vec![0u64; pairs + 1];
        for (i, &s) in order.iter().enumerate() {
            prefix[i + 1] = prefix[i] + deg[s] as u64;
        }
        for x in tx..=pairs {
            examined += 1;
            let low = prefix[x];
            let high = prefix[pairs] - prefix[pairs - x];
            ext.add(bounds.ratio(low, x, ny));
            ext.add(bounds.ratio(high, x, ny));
            for (e, chosen) in [(low, &order[..x]), (high, &order[pairs - x..])] {
                if let Some(bound) = bounds.violation(e, x, ny) {
                    let w = Witness::new(chosen.iter().copied(), Ones::new(&y), Quantity::count(e), bound);
                    let mut work = Work::default();
                    work.push("subsets_examined", examined);
                    return (Status::Violated, Some(w), ext, work);
                }
            }
        }
    }
    let mut work = Work::default();
    work.push("subsets_examined", examined);
    (Status::VerifiedExact, None, ext, work)
}

struct Run {
    e: u64,
    x: Vec<usize>,
    y: Vec<usize>,
    rounds: u32,
}

/// Alternating optimisation at fixed sizes; `high` maximises `e`, otherwise
/// it is minimised.
fn alternate(g: &Hypergraph3, sx: usize, sy: usize, high: bool, mut y: Vec<usize>, max_rounds: u32) -> Run {
    let n = g.n() as usize;
    let pick = |order: &[usize], k: usize| -> Vec<usize> {
        if high {
            order[order.len() - k..].to_vec()
        } else {
            order[..k].to_vec()
        }
    };
    let better = |a: u64, b: u64| if high { a > b } else { a < b };
    let mut best: Option<Run> = None;
    for round in 1..=max_rounds {
        let mut yw = alloc::vec![0u64; g.words()];
        for &v in &y {
            bitset::set_bit(&mut yw, v);
        }
        let (deg, order) = sorted_pairs(g, &yw);
        let x = pick(&order, sx);
        let e: u64 = x.iter().map(|&s| deg[s] as u64).sum();
        if best.as_ref().is_some_and(|b| !better(e, b.e)) {
            break;
        }
        // column counts c(v) = #{S ∈ X : v ∈ N(S)}
        let mut col = alloc::vec![0u32; n];
        for &s in &x {
            for v in Ones::new(g.nbhd_words(s)) {
                col[v] += 1;
            }
        }
        let mut vs: Vec<usize> = (0..n).collect();
        vs.sort_unstable_by_key(|&v| (col[v], v));
        let next = pick(&vs, sy);
        best = Some(Run { e, x, y, rounds: round });
        y = next;
    }
    best.expect("at least one round")
}

fn search(g: &Hypergraph3, bounds: &Bounds, tx: usize, ty: usize, opts: &SearchOptions) -> (Status, Option<Witness>, Extremes, Work) {
    let n = g.n() as usize;
    let pairs = g.num_pairs();
    let sizes = |t: usize, cap: usize| {
        let mut s: Vec<usize> = [t, 2 * t, 4 * t, cap].iter().map(|&v| v.min(cap)).collect();
        s.dedup();
        s
    };
    let mut jobs = Vec::new();
    for &sx in &sizes(tx, pairs) {
        for &sy in &sizes(ty, n) {
            for high in [false, true] {
                for r in 0..opts.restarts.max(1) {
                    jobs.push((sx, sy, high, r));
                }
            }
        }
    }
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_unstable_by_key(|&v| (g.degree(v as u32), v));
    let runs = par::map_collect(jobs.len(), |j| {
        let (sx, sy, high, r) = jobs[j];
        let y0 = if r == 0 {
            if high {
                by_degree[n - sy..].to_vec()
            } else {
                by_degree[..sy].to_vec()
            }
        } else {
            let mut rng = restart_rng(opts.seed, SALT, j as u64);
            index::sample(&mut rng, n, sy).into_vec()
        };
        alternate(g, sx, sy, high, y0, opts.max_rounds.max(1))
    });

    let mut ext = Extremes::default();
    let mut worst: Option<(f64, usize)> = None;
    let mut rounds = 0u64;
    for (j, run) in runs.iter().enumerate() {
        let (sx, sy, _, _) = jobs[j];
        rounds += run.rounds as u64;
        let r = bounds.ratio(run.e, sx, sy);
        ext.add(r);
        if bounds.violation(run.e, sx, sy).is_some() {
            let score = (r - 1.0).abs();
            if worst.is_none_or(|(s, _)| score > s) {
                worst = Some((score, j));
            }
        }
    }
    let mut work = Work::default();
    work.push("restarts", jobs.len() as u64);
    work.push("rounds", rounds);
    match worst {
        Some((_, j)) => {
            let (sx, sy, _, _) = jobs[j];
            let run = &runs[j];
            let bound = bounds.violation(run.e, sx, sy).expect("violation");
            let w = Witness::new(run.x.iter().copied(), run.y.iter().copied(), Quantity::count(run.e), bound);
            (Status::Violated, Some(w), ext, work)
        }
        None => (Status::NoViolationFound, None, ext, work),
    }
}
