//! PAIR (L1 control of degrees and codegrees inside `(X, Y)`) and TUPLE
//! (pointwise control for all but a fraction of pairs). Both are exact.

use alloc::vec::Vec;

use super::degrees::{codegree_histograms, pairs_within, CodegreeHistograms};
use super::{binom2, Margins, Mode, PropertyKind, PropertyParams, PropertyReport, Status, Witness, Work};
use crate::bitset::{self, VertexSet};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;
use crate::quantity::Quantity;

/// `Σ_v hist[v] · |v - target|`.
fn abs_dev_sum(hist: &[u64], target: Quantity) -> Quantity {
    hist.iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(Quantity::ZERO, |acc, (v, &c)| {
            acc + (Quantity::count(v as u64) - target).abs() * Quantity::count(c)
        })
}

/// Both PAIR sums with their bounds.
#[derive(Clone, Debug)]
pub struct PairSums {
    /// `Σ_{S ∈ C(X,2)} | |N(S;Y)| - q|Y| |`.
    pub sum1: Quantity,
    /// `Σ_{S1, S2 ∈ C(X,2)} | |N(S1,S2;Y)| - q²|Y| |` over ordered pairs, diagonal included.
    pub sum2: Quantity,
    /// The same double sum over unordered distinct pairs only.
    pub sum2_off_diagonal: Quantity,
    /// The diagonal terms `S1 = S2`.
    pub sum2_diagonal: Quantity,
    pub bound1: Quantity,
    pub bound2: Quantity,
    pub histograms: CodegreeHistograms,
}

pub fn pair_sums(g: &Hypergraph3, x: &VertexSet, y: &VertexSet, q: f64, p: f64, delta: f64) -> Result<PairSums> {
    let histograms = codegree_histograms(g, x, y)?;
    let (q, p, delta) = (Quantity::param(q), Quantity::param(p), Quantity::param(delta));
    let ny = Quantity::count(y.len() as u64);
    let cx = Quantity::count(binom2(x.len() as u64));
    let sum1 = abs_dev_sum(&histograms.diagonal, q * ny);
    let sum2_off_diagonal = abs_dev_sum(&histograms.off_diagonal, q * q * ny);
    let sum2_diagonal = abs_dev_sum(&histograms.diagonal, q * q * ny);
    Ok(PairSums {
        sum1,
        sum2: Quantity::int(2) * sum2_off_diagonal + sum2_diagonal,
        sum2_off_diagonal,
        sum2_diagonal,
        bound1: delta * p * cx * ny,
        bound2: delta * p * p * cx * cx * ny,
        histograms,
    })
}

/// PAIR(q, p, δ) for `(X, Y)`, using `params.q`, `params.p`, `params.delta`.
pub fn check_pair(g: &Hypergraph3, x: &VertexSet, y: &VertexSet, params: &PropertyParams) -> Result<PropertyReport> {
    params.validate()?;
    let sums = pair_sums(g, x, y, params.q, params.p, params.delta)?;
    let ok1 = sums.sum1.le(sums.bound1);
    let ok2 = sums.sum2.le(sums.bound2);
    let witness = match (ok1, ok2) {
        (true, true) => None,
        (false, _) => Some((sums.sum1, sums.bound1)),
        (true, false) => Some((sums.sum2, sums.bound2)),
    }
    .map(|(value, bound)| Witness::new(pairs_within(x), y.iter(), value, bound));

    let cx = binom2(x.len() as u64);
    let mut margins = Margins::default();
    margins.push("sum1", sums.sum1.value());
    margins.push("sum1_bound", sums.bound1.value());
    margins.push("sum1_slack", (sums.bound1 - sums.sum1).value());
    margins.push("sum2", sums.sum2.value());
    margins.push("sum2_bound", sums.bound2.value());
    margins.push("sum2_slack", (sums.bound2 - sums.sum2).value());
    let mut work = Work::default();
    work.push("pairs", cx);
    work.push("pair_pairs", cx * cx.saturating_sub(1) / 2);
    Ok(PropertyReport {
        property: PropertyKind::Pair,
        mode: Mode::Exact,
        params: *params,
        status: if witness.is_some() { Status::Violated } else { Status::VerifiedExact },
        witness,
        margins,
        work,
    })
}

/// Exceptional counts of TUPLE(δ, q).
#[derive(Clone, Debug)]
pub struct TupleExceptions {
    /// Pairs `S` with `| |N(S)| - nq | >= δnq`.
    pub degree: u64,
    /// Unordered distinct `{S1, S2}` with `| |N(S1) ∩ N(S2)| - nq² | >= δnq²`.
    pub codegree: u64,
    pub degree_budget: Quantity,
    pub codegree_budget: Quantity,
    pub pairs: u64,
    pub pair_pairs: u64,
}

fn exceptional(v: usize, target: Quantity, tol: Quantity) -> bool {
    !(Quantity::count(v as u64) - target).abs().lt(tol)
}

pub fn tuple_exceptions(g: &Hypergraph3, delta: f64, q: f64) -> Result<TupleExceptions> {
    if q.is_nan() || q <= 0.0 {
        return Err(Error::NonpositiveQ(q));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::BadParam { name: "delta", value: delta });
    }
    let all = VertexSet::full(g.n() as usize);
    let h = codegree_histograms(g, &all, &all)?;
    let (q, delta) = (Quantity::param(q), Quantity::param(delta));
    let n = Quantity::count(g.n() as u64);
    let count = |hist: &[u64], target: Quantity| -> u64 {
        let tol = delta * target;
        hist.iter()
            .enumerate()
            .filter(|&(v, _)| exceptional(v, target, tol))
            .map(|(_, &c)| c)
            .sum()
    };
    let pairs = g.num_pairs() as u64;
    let pair_pairs = binom2(pairs);
    Ok(TupleExceptions {
        degree: count(&h.diagonal, n * q),
        codegree: count(&h.off_diagonal, n * q * q),
        degree_budget: delta * Quantity::count(pairs),
        codegree_budget: delta * Quantity::count(pair_pairs),
        pairs,
        pair_pairs,
    })
}

/// TUPLE(δ, q) over the whole hypergraph.
pub fn check_tuple(g: &Hypergraph3, delta: f64, q: f64) -> Result<PropertyReport> {
    let t = tuple_exceptions(g, delta, q)?;
    let ok1 = Quantity::count(t.degree).le(t.degree_budget);
    let ok2 = Quantity::count(t.codegree).le(t.codegree_budget);
    let (qq, dq) = (Quantity::param(q), Quantity::param(delta));
    let n = Quantity::count(g.n() as u64);
    let witness = if !ok1 {
        let (target, tol) = (n * qq, dq * n * qq);
        let bad = (0..g.num_pairs()).filter(|&s| exceptional(bitset::popcount(g.nbhd_words(s)) as usize, target, tol));
        Some(Witness::new(bad, [], Quantity::count(t.degree), t.degree_budget))
    } else if !ok2 {
        first_bad_codegree(g, n * qq * qq, dq * n * qq * qq)
            .map(|(a, b, common)| Witness::new([a, b], common, Quantity::count(t.codegree), t.codegree_budget))
    } else {
        None
    };

    let frac = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let mut margins = Margins::default();
    margins.push("degree_exceptional_fraction", frac(t.degree, t.pairs));
    margins.push("codegree_exceptional_fraction", frac(t.codegree, t.pair_pairs));
    margins.push("degree_slack", (t.degree_budget - Quantity::count(t.degree)).value());
    margins.push("codegree_slack", (t.codegree_budget - Quantity::count(t.codegree)).value());
    let mut work = Work::default();
    work.push("pairs", t.pairs);
    work.push("pair_pairs", t.pair_pairs);
    work.push("degree_exceptions", t.degree);
    work.push("codegree_exceptions", t.codegree);
    Ok(PropertyReport {
        property: PropertyKind::Tuple,
        mode: Mode::Exact,
        params: PropertyParams::new(q).with_delta(delta),
        status: if witness.is_some() { Status::Violated } else { Status::VerifiedExact },
        witness,
        margins,
        work,
    })
}

/// Lowest `(S1, S2)` whose codegree is exceptional, with the common neighbours.
fn first_bad_codegree(g: &Hypergraph3, target: Quantity, tol: Quantity) -> Option<(usize, usize, Vec<usize>)> {
    let pairs = g.num_pairs();
    for a in 0..pairs {
        for b in a + 1..pairs {
            let (ra, rb) = (g.nbhd_words(a), g.nbhd_words(b));
            if exceptional(bitset::and_popcount(ra, rb) as usize, target, tol) {
                let common: Vec<u64> = ra.iter().zip(rb).map(|(x, y)| x & y).collect();
                return Some((a, b, bitset::Ones::new(&common).collect()));
            }
        }
    }
    None
}
