//! BDD(k, C, q): every `r <= k` distinct pairs have at most `C n q^r` common
//! neighbours.
//!
//! `r = 1, 2` are scanned exhaustively. Deeper levels run an exact
//! branch-and-bound over increasing pair indices when `C(C(n,2), r)` fits the
//! budget, and a greedy extension with restarts otherwise.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use super::{restart_rng, Margins, Mode, PropertyKind, PropertyParams, PropertyReport, SearchOptions, Status, Witness, Work};
use crate::bitset::{self, Ones};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;
use crate::par;
use crate::quantity::Quantity;

/// Default cap on `C(C(n,2), r)` for exact levels `r >= 3`.
pub const DEFAULT_BDD_BUDGET: u64 = 100_000_000;

const SALT: u64 = 3;

/// Outcome of one depth `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct BddLevel {
    pub r: u32,
    pub exact: bool,
    /// Largest common neighbourhood found (`0` when no `r` distinct pairs exist).
    pub max: u32,
    /// The pairs attaining `max`, ascending.
    pub pairs: Vec<usize>,
    pub bound: Quantity,
    pub examined: u64,
}

impl BddLevel {
    pub fn violated(&self) -> bool {
        !self.pairs.is_empty() && Quantity::count(self.max as u64).gt(self.bound)
    }
}

fn choose(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// `(max, tuple)` with the lowest tuple among ties.
fn better(a: Option<(u32, Vec<usize>)>, b: Option<(u32, Vec<usize>)>) -> Option<(u32, Vec<usize>)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }),
    }
}

fn level_one(g: &Hypergraph3) -> (u32, Vec<usize>) {
    let mut best = (0, Vec::new());
    for s in 0..g.num_pairs() {
        let d = bitset::popcount(g.nbhd_words(s));
        if best.1.is_empty() || d > best.0 {
            best = (d, alloc::vec![s]);
        }
    }
    best
}

fn level_two(g: &Hypergraph3) -> (u32, Vec<usize>) {
    let pairs = g.num_pairs();
    let rows = par::map_collect(pairs, |a| {
        let ra = g.nbhd_words(a);
        let mut best: Option<(u32, usize)> = None;
        for b in a + 1..pairs {
            let c = bitset::and_popcount(ra, g.nbhd_words(b));
            if best.is_none_or(|(m, _)| c > m) {
                best = Some((c, b));
            }
        }
        best.map(|(c, b)| (c, alloc::vec![a, b]))
    });
    rows.into_iter().fold(None, better).unwrap_or((0, Vec::new()))
}

struct Dfs<'a> {
    g: &'a Hypergraph3,
    r: usize,
    best: u32,
    tuple: Vec<usize>,
    found: Option<Vec<usize>>,
    nodes: u64,
}

impl Dfs<'_> {
    fn go(&mut self, next: usize, running: &[u64]) {
        self.nodes += 1;
        if self.tuple.len() == self.r {
            let c = bitset::popcount(running);
            if c > self.best {
                self.best = c;
                self.found = Some(self.tuple.clone());
            }
            return;
        }
        let pairs = self.g.num_pairs();
        let missing = self.r - self.tuple.len();
        let mut child = alloc::vec![0u64; running.len()];
        for s in next..=pairs - missing {
            for ((c, a), b) in child.iter_mut().zip(running).zip(self.g.nbhd_words(s)) {
                *c = a & b;
            }
            if bitset::popcount(&child) <= self.best {
                continue;
            }
            self.tuple.push(s);
            self.go(s + 1, &child);
            self.tuple.pop();
        }
    }
}

/// Exact maximum for depth `r`, seeded with a known value `floor`.
fn level_exact(g: &Hypergraph3, r: usize, floor: (u32, Vec<usize>)) -> ((u32, Vec<usize>), u64) {
    let pairs = g.num_pairs();
    let roots = par::map_collect(pairs + 1 - r, |s| {
        let mut dfs = Dfs {
            g,
            r,
            best: floor.0,
            tuple: alloc::vec![s],
            found: None,
            nodes: 0,
        };
        let running = g.nbhd_words(s).to_vec();
        if bitset::popcount(&running) > floor.0 {
            dfs.go(s + 1, &running);
        }
        (dfs.found.map(|t| (dfs.best, t)), dfs.nodes)
    });
    let nodes = roots.iter().map(|r| r.1).sum();
    let best = roots.into_iter().map(|r| r.0).fold(None, better);
    (best.unwrap_or(floor), nodes)
}

/// Greedy growth from `start`: add the pair keeping the largest intersection.
fn greedy_from(g: &Hypergraph3, r: usize, start: usize) -> (u32, Vec<usize>) {
    let mut tuple = alloc::vec![start];
    let mut running = g.nbhd_words(start).to_vec();
    while tuple.len() < r {
        let mut pick: Option<(u32, usize)> = None;
        for s in 0..g.num_pairs() {
            if tuple.contains(&s) {
                continue;
            }
            let c = bitset::and_popcount(&running, g.nbhd_words(s));
            if pick.is_none_or(|(m, _)| c > m) {
                pick = Some((c, s));
            }
        }
        let (_, s) = pick.expect("enough pairs");
        bitset::and_assign(&mut running, g.nbhd_words(s));
        tuple.push(s);
    }
    tuple.sort_unstable();
    (bitset::popcount(&running), tuple)
}

fn level_greedy(g: &Hypergraph3, r: usize, opts: &SearchOptions) -> ((u32, Vec<usize>), u64) {
    let pairs = g.num_pairs();
    let restarts = opts.restarts.max(1) as usize;
    let mut by_degree: Vec<usize> = (0..pairs).collect();
    by_degree.sort_unstable_by_key(|&s| (core::cmp::Reverse(bitset::popcount(g.nbhd_words(s))), s));
    let top = restarts.div_ceil(2).min(pairs);
    let runs = par::map_collect(restarts, |i| {
        let start = if i < top {
            by_degree[i]
        } else {
            restart_rng(opts.seed, SALT, (r * 1000 + i) as u64).gen_range(0..pairs)
        };
        greedy_from(g, r, start)
    });
    let best = runs.into_iter().map(Some).fold(None, better).expect("one restart");
    (best, restarts as u64)
}

/// Per-depth results for `r = 1..=params.k`.
pub fn bdd_levels(g: &Hypergraph3, params: &PropertyParams, mode: Mode, budget: u64, opts: &SearchOptions) -> Result<Vec<BddLevel>> {
    params.validate()?;
    if mode == Mode::Spectral {
        return Err(Error::UnsupportedMode("BDD has exact and search modes"));
    }
    let pairs = g.num_pairs();
    let (c, q) = (Quantity::param(params.c), Quantity::param(params.q));
    let n = Quantity::count(g.n() as u64);
    let mut qr = Quantity::int(1);
    let mut out = Vec::new();
    for r in 1..=params.k as usize {
        qr = qr * q;
        let bound = c * n * qr;
        let tuples = choose(pairs as u64, r as u64);
        let ((max, tuple), exact, examined) = if tuples == 0 {
            ((0, Vec::new()), true, 0)
        } else if r == 1 {
            (level_one(g), true, tuples)
        } else if r == 2 {
            (level_two(g), true, tuples)
        } else if tuples <= budget {
            let floor = greedy_from(g, r, level_one(g).1[0]);
            let (best, nodes) = level_exact(g, r, floor);
            (best, true, nodes)
        } else if mode == Mode::Exact {
            return Err(Error::ModeTooLarge("BDD exact mode: C(C(n,2), r) exceeds the budget"));
        } else {
            let (best, restarts) = level_greedy(g, r, opts);
            (best, false, restarts)
        };
        out.push(BddLevel {
            r: r as u32,
            exact,
            max,
            pairs: tuple,
            bound,
            examined,
        });
    }
    Ok(out)
}

/// BDD(k, C, q) using `params.k`, `params.c`, `params.q`.
pub fn check_bdd(g: &Hypergraph3, params: &PropertyParams, mode: Mode, budget: u64, opts: &SearchOptions) -> Result<PropertyReport> {
    let levels = bdd_levels(g, params, mode, budget, opts)?;
    let all_exact = levels.iter().all(|l| l.exact);
    let witness = levels.iter().rev().find(|l| l.violated()).map(|l| {
        let mut common = bitset::full_words(g.n() as usize);
        for &s in &l.pairs {
            bitset::and_assign(&mut common, g.nbhd_words(s));
        }
        Witness::new(l.pairs.iter().copied(), Ones::new(&common), Quantity::count(l.max as u64), l.bound)
    });
    let mut margins = Margins::default();
    let mut work = Work::default();
    for l in &levels {
        margins.push(format!("r{}_max", l.r), l.max as f64);
        margins.push(format!("r{}_bound", l.r), l.bound.value());
        margins.push(format!("r{}_slack", l.r), (l.bound - Quantity::count(l.max as u64)).value());
        work.push(format!("r{}_exact", l.r), l.exact as u64);
        work.push(format!("r{}_examined", l.r), l.examined);
    }
    let status = match (&witness, all_exact) {
        (Some(_), _) => Status::Violated,
        (None, true) => Status::VerifiedExact,
        (None, false) => Status::NoViolationFound,
    };
    Ok(PropertyReport {
        property: PropertyKind::Bdd,
        mode: if all_exact { Mode::Exact } else { Mode::Search },
        params: *params,
        status,
        witness,
        margins,
        work,
    })
}
