//! Immutable 3-uniform hypergraphs with pair-indexed neighbourhoods.
//!
//! For every unordered pair `S = {u, v}` the hypergraph stores the bitset
//! `N(S) = { w : S ∪ {w} is an edge }`. Incidence counts `e(X, Y)` count
//! `(S, w)` combinations with multiplicity, which is exactly the edge count of
//! the pair/vertex bipartite view returned by [`Hypergraph3::to_bipartite`].

use alloc::vec::Vec;

use crate::bitset::{self, and_popcount, test_bit, Ones, PairSet, VertexSet};
use crate::error::{Error, Result};

/// Canonical index of an unordered pair `{u, v}`, `u < v`.
///
/// Pairs are enumerated in colexicographic order, `index = v(v-1)/2 + u`, so the
/// index of a pair does not depend on the number of vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairIndex(pub usize);

impl PairIndex {
    #[inline]
    pub fn new(a: u32, b: u32) -> PairIndex {
        debug_assert_ne!(a, b);
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        let v = v as usize;
        PairIndex(v * (v - 1) / 2 + u as usize)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    /// The pair `(u, v)` with `u < v`.
    pub fn vertices(self) -> (u32, u32) {
        let i = self.0 as u64;
        // v is the largest integer with v(v-1)/2 <= i
        let mut v = ((1.0 + libm::sqrt(1.0 + 8.0 * i as f64)) / 2.0) as u64;
        while v * (v - 1) / 2 > i {
            v -= 1;
        }
        while (v + 1) * v / 2 <= i {
            v += 1;
        }
        ((i - v * (v - 1) / 2) as u32, v as u32)
    }
}

#[inline]
pub fn pair_count(n: u32) -> usize {
    let n = n as usize;
    n * n.saturating_sub(1) / 2
}

#[inline]
pub fn triple_count(n: u32) -> u64 {
    let n = n as u64;
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Immutable 3-uniform hypergraph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypergraph3 {
    n: u32,
    edges: Vec<[u32; 3]>,
    words: usize,
    nbhd: Vec<u64>,
    degree: Vec<u32>,
}

impl Hypergraph3 {
    /// Builds the canonical hypergraph: triples are sorted and deduplicated.
    pub fn new<I>(n: u32, edges: I) -> Result<Hypergraph3>
    where
        I: IntoIterator<Item = [u32; 3]>,
    {
        let mut canon = Vec::new();
        for e in edges {
            for &x in &e {
                if x >= n {
                    return Err(Error::OutOfRange { vertex: x, n });
                }
            }
            let mut s = e;
            s.sort_unstable();
            if s[0] == s[1] || s[1] == s[2] {
                return Err(Error::DegenerateEdge { edge: e });
            }
            canon.push(s);
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Self::from_sorted_unchecked(n, canon))
    }

    /// `edges` must be sorted, deduplicated, strictly increasing triples `< n`.
    pub(crate) fn from_sorted_unchecked(n: u32, edges: Vec<[u32; 3]>) -> Hypergraph3 {
        let words = bitset::words_for(n as usize);
        let mut nbhd = alloc::vec![0u64; pair_count(n) * words];
        let mut degree = alloc::vec![0u32; n as usize];
        for &[a, b, c] in &edges {
            for (s, w) in [((a, b), c), ((a, c), b), ((b, c), a)] {
                let p = PairIndex::new(s.0, s.1).0;
                bitset::set_bit(&mut nbhd[p * words..(p + 1) * words], w as usize);
            }
            degree[a as usize] += 1;
            degree[b as usize] += 1;
            degree[c as usize] += 1;
        }
        Hypergraph3 {
            n,
            edges,
            words,
            nbhd,
            degree,
        }
    }

    pub fn empty(n: u32) -> Hypergraph3 {
        Self::from_sorted_unchecked(n, Vec::new())
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of edges.
    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order, each sorted ascending.
    #[inline]
    pub fn edges(&self) -> &[[u32; 3]] {
        &self.edges
    }

    #[inline]
    pub fn num_pairs(&self) -> usize {
        pair_count(self.n)
    }

    #[inline]
    pub(crate) fn words(&self) -> usize {
        self.words
    }

    /// `m / C(n, 3)`, zero when `n < 3`.
    pub fn density(&self) -> f64 {
        let t = triple_count(self.n);
        if t == 0 {
            0.0
        } else {
            self.m() as f64 / t as f64
        }
    }

    /// Number of edges containing `v`.
    #[inline]
    pub fn degree(&self, v: u32) -> u32 {
        self.degree[v as usize]
    }

    pub fn max_vertex_degree(&self) -> u32 {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    /// Raw words of `N(S)`.
    #[inline]
    pub(crate) fn nbhd_words(&self, s: usize) -> &[u64] {
        &self.nbhd[s * self.words..(s + 1) * self.words]
    }

    #[inline]
    pub(crate) fn nbhd_of(&self, a: u32, b: u32) -> &[u64] {
        self.nbhd_words(PairIndex::new(a, b).0)
    }

    /// `|N(S)|`.
    #[inline]
    pub fn pair_degree(&self, s: PairIndex) -> u32 {
        bitset::popcount(self.nbhd_words(s.0))
    }

    #[inline]
    pub fn has_edge(&self, a: u32, b: u32, c: u32) -> bool {
        if a == b || a == c || b == c || a >= self.n || b >= self.n || c >= self.n {
            return false;
        }
        test_bit(self.nbhd_of(a, b), c as usize)
    }

    fn check_pair(&self, s: PairIndex) -> Result<()> {
        if s.0 >= self.num_pairs() {
            return Err(Error::BadPairIndex {
                index: s.0,
                pairs: self.num_pairs(),
            });
        }
        Ok(())
    }

    fn check_vertices(&self, y: &VertexSet) -> Result<()> {
        if y.universe() != self.n as usize {
            return Err(Error::UniverseMismatch {
                expected: self.n as usize,
                got: y.universe(),
            });
        }
        Ok(())
    }

    fn check_pairs(&self, x: &PairSet) -> Result<()> {
        if x.universe() != self.num_pairs() {
            return Err(Error::UniverseMismatch {
                expected: self.num_pairs(),
                got: x.universe(),
            });
        }
        Ok(())
    }

    /// Vertices `w` with `S ∪ {w}` an edge, ascending.
    pub fn nbhd_iter(&self, s: PairIndex) -> Ones<'_> {
        Ones::new(self.nbhd_words(s.0))
    }

    /// `N(S) ∩ Y`.
    pub fn neighborhood(&self, s: PairIndex, y: &VertexSet) -> Result<VertexSet> {
        self.check_pair(s)?;
        self.check_vertices(y)?;
        let words = self
            .nbhd_words(s.0)
            .iter()
            .zip(y.words())
            .map(|(a, b)| a & b)
            .collect();
        Ok(VertexSet::from_words(self.n as usize, words))
    }

    /// `N(S1) ∩ N(S2) ∩ Y`.
    pub fn co_neighborhood(&self, s1: PairIndex, s2: PairIndex, y: &VertexSet) -> Result<VertexSet> {
        self.check_pair(s1)?;
        self.check_pair(s2)?;
        self.check_vertices(y)?;
        let words = self
            .nbhd_words(s1.0)
            .iter()
            .zip(self.nbhd_words(s2.0))
            .zip(y.words())
            .map(|((a, b), c)| a & b & c)
            .collect();
        Ok(VertexSet::from_words(self.n as usize, words))
    }

    /// `e(X, Y) = Σ_{S ∈ X} |N(S) ∩ Y|`.
    pub fn incidence_count(&self, x: &PairSet, y: &VertexSet) -> Result<u64> {
        self.check_pairs(x)?;
        self.check_vertices(y)?;
        Ok(x
            .iter()
            .map(|s| and_popcount(self.nbhd_words(s), y.words()) as u64)
            .sum())
    }

    /// `e(A, B) / (q |A| |B|)`.
    pub fn q_density(&self, a: &PairSet, b: &VertexSet, q: f64) -> Result<f64> {
        if q.is_nan() || q <= 0.0 {
            return Err(Error::NonpositiveQ(q));
        }
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySide);
        }
        let e = self.incidence_count(a, b)?;
        Ok(e as f64 / (q * a.len() as f64 * b.len() as f64))
    }

    pub fn to_bipartite(&self) -> BipartiteIncidence {
        let rows = self.num_pairs();
        let mut offsets = Vec::with_capacity(rows + 1);
        let mut cols = Vec::with_capacity(3 * self.m());
        offsets.push(0);
        for s in 0..rows {
            cols.extend(Ones::new(self.nbhd_words(s)).map(|w| w as u32));
            offsets.push(cols.len());
        }
        BipartiteIncidence {
            rows,
            columns: self.n as usize,
            offsets,
            cols,
        }
    }
}

/// The bipartite graph between all pairs (rows) and vertices (columns) with
/// `{S, v}` an edge iff `S ∪ {v}` is a hyperedge. Stored row-compressed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteIncidence {
    rows: usize,
    columns: usize,
    offsets: Vec<usize>,
    cols: Vec<u32>,
}

impl BipartiteIncidence {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn edge_count(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, s: PairIndex) -> &[u32] {
        &self.cols[self.offsets[s.0]..self.offsets[s.0 + 1]]
    }

    /// Number of bipartite edges between the row set `X` and column set `Y`.
    pub fn edges_between(&self, x: &PairSet, y: &VertexSet) -> u64 {
        x.iter()
            .map(|s| {
                self.row(PairIndex(s))
                    .iter()
                    .filter(|&&v| y.contains(v as usize))
                    .count() as u64
            })
            .sum()
    }
}
