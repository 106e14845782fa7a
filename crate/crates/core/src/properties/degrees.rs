//! Degree and codegree tallies restricted to pair and vertex subsets.
//!
//! Sums of `|value - target|` over all pairs only depend on how many pairs
//! take each value, so the scans produce histograms indexed by the value
//! (`0..=n`) and the sums are formed exactly from them afterwards.

use alloc::vec::Vec;

use crate::bitset::{self, VertexSet};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph3, PairIndex};
use crate::par;

const ROW_BLOCK: usize = 32;

/// Pair indices of `C(X, 2)`, ascending.
pub(crate) fn pairs_within(x: &VertexSet) -> Vec<usize> {
    let vs: Vec<u32> = x.iter().map(|v| v as u32).collect();
    let mut out = Vec::with_capacity(vs.len() * vs.len().saturating_sub(1) / 2);
    for (j, &b) in vs.iter().enumerate() {
        for &a in &vs[..j] {
            out.push(PairIndex::new(a, b).0);
        }
    }
    out.sort_unstable();
    out
}

pub(crate) fn check_universe(g: &Hypergraph3, s: &VertexSet) -> Result<()> {
    if s.universe() != g.n() as usize {
        return Err(Error::UniverseMismatch {
            expected: g.n() as usize,
            got: s.universe(),
        });
    }
    Ok(())
}

/// `N(S) ∩ Y` for each listed pair, packed row after row.
pub(crate) fn masked_rows(g: &Hypergraph3, pairs: &[usize], y: &[u64]) -> Vec<u64> {
    let w = g.words();
    let mut out = Vec::with_capacity(pairs.len() * w);
    for &s in pairs {
        out.extend(g.nbhd_words(s).iter().zip(y).map(|(a, b)| a & b));
    }
    out
}

/// For every vertex `v`, the pairs `S` with `v ∈ N(S)`, ascending.
pub(crate) fn links(g: &Hypergraph3) -> Vec<Vec<u32>> {
    let mut out = alloc::vec![Vec::new(); g.n() as usize];
    for &[a, b, c] in g.edges() {
        out[a as usize].push(PairIndex::new(b, c).0 as u32);
        out[b as usize].push(PairIndex::new(a, c).0 as u32);
        out[c as usize].push(PairIndex::new(a, b).0 as u32);
    }
    for l in &mut out {
        l.sort_unstable();
    }
    out
}

/// Histogram of `|N(S) ∩ Y|` over `S ∈ C(X, 2)`.
pub fn degree_histogram(g: &Hypergraph3, x: &VertexSet, y: &VertexSet) -> Result<Vec<u64>> {
    check_universe(g, x)?;
    check_universe(g, y)?;
    let mut hist = alloc::vec![0u64; g.n() as usize + 1];
    for s in pairs_within(x) {
        hist[bitset::and_popcount(g.nbhd_words(s), y.words()) as usize] += 1;
    }
    Ok(hist)
}

/// Codegree tallies over `C(X, 2)` restricted to `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodegreeHistograms {
    /// `|N(S1) ∩ N(S2) ∩ Y|` over unordered pairs of distinct `S1, S2`.
    pub off_diagonal: Vec<u64>,
    /// `|N(S) ∩ Y|` over `S`, the `S1 = S2` terms.
    pub diagonal: Vec<u64>,
}

pub fn codegree_histograms(g: &Hypergraph3, x: &VertexSet, y: &VertexSet) -> Result<CodegreeHistograms> {
    check_universe(g, x)?;
    check_universe(g, y)?;
    let pairs = pairs_within(x);
    let diagonal = degree_histogram(g, x, y)?;
    let w = g.words();
    let rows = masked_rows(g, &pairs, y.words());
    let len = pairs.len();
    let bins = g.n() as usize + 1;
    let blocks = par::map_collect(len.div_ceil(ROW_BLOCK), |b| {
        let mut hist = alloc::vec![0u64; bins];
        for i in b * ROW_BLOCK..((b + 1) * ROW_BLOCK).min(len) {
            let ri = &rows[i * w..(i + 1) * w];
            for j in i + 1..len {
                hist[bitset::and_popcount(ri, &rows[j * w..(j + 1) * w]) as usize] += 1;
            }
        }
        hist
    });
    let mut off_diagonal = alloc::vec![0u64; bins];
    for h in blocks {
        for (o, v) in off_diagonal.iter_mut().zip(h) {
            *o += v;
        }
    }
    Ok(CodegreeHistograms {
        off_diagonal,
        diagonal,
    })
}
