//! Small pattern hypergraphs: classification and labelled embedding counts.

mod backtrack;
mod classify;
mod hom;
mod oracle;

use alloc::boxed::Box;
use alloc::vec::Vec;

use once_cell::race::OnceBox;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;

pub use backtrack::count_backtrack;
pub use classify::{automorphism_count, big_dh, connector_edges, degeneracy_dh, is_linear};
pub use hom::{count_mobius, count_mobius_with_limit, hom_count, DEFAULT_PARTITION_LIMIT};
pub use oracle::count_embeddings_oracle;

/// Largest supported pattern.
pub const MAX_PATTERN_VERTICES: usize = 16;
/// Largest pattern for which automorphisms are enumerated.
pub const MAX_AUT_VERTICES: usize = 10;

/// Cached classification of a pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PatternStats {
    pub is_linear: bool,
    /// `None` when the pattern is not linear (connectors are undefined there).
    pub connector_edges: Option<Vec<[u32; 3]>>,
    pub d_h: u32,
    pub big_d_h: u32,
    pub max_degree: u32,
    /// `None` above [`MAX_AUT_VERTICES`] vertices.
    pub aut_count: Option<u64>,
}

impl PatternStats {
    pub fn is_connector_free(&self) -> bool {
        matches!(&self.connector_edges, Some(c) if c.is_empty())
    }
}

/// A fixed pattern hypergraph on `k <= 16` vertices.
pub struct PatternH {
    k: usize,
    edges: Vec<[u32; 3]>,
    /// `third[a * 16 + b]`: bitmask of `c` with `{a, b, c}` an edge.
    third: Box<[u16; 256]>,
    stats: OnceBox<PatternStats>,
}

impl Clone for PatternH {
    fn clone(&self) -> Self {
        PatternH {
            k: self.k,
            edges: self.edges.clone(),
            third: self.third.clone(),
            stats: OnceBox::new(),
        }
    }
}

impl PartialEq for PatternH {
    fn eq(&self, o: &Self) -> bool {
        self.k == o.k && self.edges == o.edges
    }
}

impl Eq for PatternH {}

impl core::fmt::Debug for PatternH {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("PatternH")
            .field("k", &self.k)
            .field("edges", &self.edges)
            .finish()
    }
}

impl PatternH {
    pub fn new<I>(k: usize, edges: I) -> Result<PatternH>
    where
        I: IntoIterator<Item = [u32; 3]>,
    {
        if k > MAX_PATTERN_VERTICES {
            return Err(Error::PatternTooLarge("patterns have at most 16 vertices"));
        }
        let g = Hypergraph3::new(k as u32, edges)?;
        Ok(Self::from_canonical(k, g.edges().to_vec()))
    }

    pub fn from_hypergraph(g: &Hypergraph3) -> Result<PatternH> {
        Self::new(g.n() as usize, g.edges().iter().copied())
    }

    fn from_canonical(k: usize, edges: Vec<[u32; 3]>) -> PatternH {
        let mut third = Box::new([0u16; 256]);
        for &[a, b, c] in &edges {
            let (a, b, c) = (a as usize, b as usize, c as usize);
            for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
                third[x * 16 + y] |= 1 << z;
                third[y * 16 + x] |= 1 << z;
            }
        }
        PatternH {
            k,
            edges,
            third,
            stats: OnceBox::new(),
        }
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[[u32; 3]] {
        &self.edges
    }

    #[inline]
    pub fn has_edge(&self, a: u32, b: u32, c: u32) -> bool {
        a != b && self.third[a as usize * 16 + b as usize] >> c & 1 == 1
    }

    /// Number of edges containing `v`.
    pub fn degree(&self, v: u32) -> u32 {
        self.edges.iter().filter(|e| e.contains(&v)).count() as u32
    }

    pub fn to_hypergraph(&self) -> Hypergraph3 {
        Hypergraph3::from_sorted_unchecked(self.k as u32, self.edges.clone())
    }

    /// Classification, computed on first use.
    pub fn stats(&self) -> &PatternStats {
        self.stats.get_or_init(|| {
            let d_h = degeneracy_dh(self);
            let max_degree = (0..self.k as u32).map(|v| self.degree(v)).max().unwrap_or(0);
            Box::new(PatternStats {
                is_linear: is_linear(self),
                connector_edges: connector_edges(self).ok(),
                d_h,
                big_d_h: (3 * d_h).min(max_degree),
                max_degree,
                aut_count: automorphism_count(self).ok(),
            })
        })
    }

    /// The pattern with isolated vertices removed and the rest relabelled in
    /// increasing order, plus the number of removed vertices.
    pub(crate) fn strip_isolated(&self) -> (PatternH, usize) {
        let mut map = [u32::MAX; MAX_PATTERN_VERTICES];
        let mut next = 0u32;
        for v in 0..self.k {
            if self.edges.iter().any(|e| e.contains(&(v as u32))) {
                map[v] = next;
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|e| [map[e[0] as usize], map[e[1] as usize], map[e[2] as usize]])
            .collect();
        (
            Self::from_canonical(next as usize, edges),
            self.k - next as usize,
        )
    }
}

/// `n (n-1) ... (n-k+1)`, `None` on overflow.
pub fn falling_factorial(n: u64, k: usize) -> Option<u128> {
    if k as u64 > n {
        return Some(0);
    }
    (0..k as u64).try_fold(1u128, |acc, i| acc.checked_mul((n - i) as u128))
}

/// Exact number of labelled embeddings with the baseline `n^k q^{|E(H)|}`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EmbeddingCount {
    pub count: u128,
    pub expected: f64,
    pub relative_error: f64,
}

impl EmbeddingCount {
    pub fn new(count: u128, n: u32, pattern: &PatternH, q: f64) -> EmbeddingCount {
        let expected = libm::pow(n as f64, pattern.k() as f64) * libm::pow(q, pattern.m() as f64);
        EmbeddingCount {
            count,
            expected,
            relative_error: (count as f64 - expected) / expected,
        }
    }

    /// Recomputes the baseline for another density.
    pub fn with_q(&self, n: u32, pattern: &PatternH, q: f64) -> EmbeddingCount {
        Self::new(self.count, n, pattern, q)
    }
}

fn check_sizes(g: &Hypergraph3, h: &PatternH) -> Result<()> {
    if h.k() > g.n() as usize {
        return Err(Error::PatternTooLarge("pattern has more vertices than the host"));
    }
    if falling_factorial(g.n() as u64, h.k()).is_none() {
        return Err(Error::CountOverflow);
    }
    Ok(())
}

/// Exact count of injective, edge-preserving maps `V(H) -> V(G)`, i.e.
/// non-induced labelled copies. The baseline uses the host density.
///
/// Patterns whose vertex-identification lattice is small go through
/// [`count_mobius`]; the rest through [`count_backtrack`].
pub fn count_embeddings(g: &Hypergraph3, h: &PatternH) -> Result<EmbeddingCount> {
    check_sizes(g, h)?;
    let count = match count_mobius_with_limit(g, h, DEFAULT_PARTITION_LIMIT)? {
        Some(c) => c,
        None => count_backtrack(g, h)?,
    };
    Ok(EmbeddingCount::new(count, g.n(), h, g.density()))
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::generators::{gen_complete, gen_random};

    #[test]
    fn complete_host_counts() {
        let g = gen_complete(5);
        assert_eq!(count_embeddings(&g, &loose_path()).unwrap().count, 120);
    }

    #[test]
    fn loose_path_into_itself() {
        let g = loose_path().to_hypergraph();
        assert_eq!(count_embeddings(&g, &loose_path()).unwrap().count, 8);
    }

    #[test]
    fn agrees_with_oracle_small_random() {
        let g = gen_random(12, 0.5, 9).unwrap();
        let h = loose_path();
        assert_eq!(
            count_embeddings(&g, &h).unwrap().count,
            count_embeddings_oracle(&g, &h).unwrap().count
        );
    }

    #[test]
    fn isolated_vertices_multiply() {
        let g = gen_random(10, 0.4, 2).unwrap();
        let h = PatternH::new(5, [[0, 2, 4]]).unwrap();
        let single = count_embeddings(&g, &single_edge()).unwrap().count;
        assert_eq!(count_embeddings(&g, &h).unwrap().count, single * 7 * 6);
        let edgeless = PatternH::new(3, []).unwrap();
        assert_eq!(count_embeddings(&g, &edgeless).unwrap().count, 10 * 9 * 8);
    }

    #[test]
    fn pattern_larger_than_host() {
        let g = gen_complete(4);
        assert!(matches!(
            count_embeddings(&g, &loose_path()),
            Err(Error::PatternTooLarge(_))
        ));
        assert!(PatternH::new(17, []).is_err());
    }

    #[test]
    fn expected_and_relative_error() {
        let g = gen_complete(6);
        let c = count_embeddings(&g, &loose_path()).unwrap();
        assert_eq!(c.count, 720);
        assert_eq!(c.expected, 7776.0);
        assert_eq!(c.relative_error, (720.0 - 7776.0) / 7776.0);
    }

    #[test]
    fn strip_relabels() {
        let h = PatternH::new(6, [[1, 3, 5]]).unwrap();
        let (s, iso) = h.strip_isolated();
        assert_eq!((s.k(), iso), (3, 3));
        assert_eq!(s.edges(), &[[0, 1, 2]]);
    }
}
