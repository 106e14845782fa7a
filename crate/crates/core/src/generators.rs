//! Seeded instance generation.
//!
//! Every triple `{a < b < c}` owns one 64-bit draw of a ChaCha8 stream keyed by
//! the seed, located at the triple's lexicographic rank. The same `(n, p, seed)`
//! therefore yields the same hypergraph no matter how the triples are visited
//! or split across workers.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{triple_count, Hypergraph3};
use crate::par;

const STREAM_GENERATE: u64 = 0;
const STREAM_SUBSAMPLE: u64 = 1;

fn binom2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

fn binom3(x: u64) -> u64 {
    if x < 3 {
        0
    } else {
        x * (x - 1) * (x - 2) / 6
    }
}

/// Lexicographic rank of the sorted triple `a < b < c` among all triples of `0..n`.
pub fn triple_rank(n: u32, [a, b, c]: [u32; 3]) -> u64 {
    let (n, a, b, c) = (n as u64, a as u64, b as u64, c as u64);
    (binom3(n) - binom3(n - a)) + (binom2(n - a - 1) - binom2(n - b)) + (c - b - 1)
}

fn check_prob(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::BadParam { name, value })
    }
}

fn stream_at(seed: u64, stream: u64, rank: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    // one u64 (two 32-bit words) per triple
    rng.set_word_pos(2 * rank as u128);
    rng
}

/// Includes each triple independently with probability `prob(triple)`.
fn sample_triples<F>(n: u32, seed: u64, prob: F) -> Hypergraph3
where
    F: Fn([u32; 3]) -> f64 + Sync + Send,
{
    if n < 3 {
        return Hypergraph3::empty(n);
    }
    let chunks = par::map_collect(n as usize - 2, |a| {
        let a = a as u32;
        let mut rng = stream_at(seed, STREAM_GENERATE, triple_rank(n, [a, a + 1, a + 2]));
        let mut out = Vec::new();
        for b in a + 1..n {
            for c in b + 1..n {
                let t = [a, b, c];
                let u: f64 = rng.gen();
                if u < prob(t) {
                    out.push(t);
                }
            }
        }
        out
    });
    Hypergraph3::from_sorted_unchecked(n, chunks.concat())
}

/// Binomial random hypergraph: every triple with probability `p`.
pub fn gen_random(n: u32, p: f64, seed: u64) -> Result<Hypergraph3> {
    check_prob("p", p)?;
    Ok(sample_triples(n, seed, |_| p))
}

/// All `C(n, 3)` triples.
pub fn gen_complete(n: u32) -> Hypergraph3 {
    let mut edges = Vec::with_capacity(triple_count(n) as usize);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                edges.push([a, b, c]);
            }
        }
    }
    Hypergraph3::from_sorted_unchecked(n, edges)
}

/// Spanning subhypergraph keeping each host edge with probability `keep`.
pub fn subsample(host: &Hypergraph3, keep: f64, seed: u64) -> Result<Hypergraph3> {
    check_prob("keep", keep)?;
    let n = host.n();
    let kept = host
        .edges()
        .iter()
        .copied()
        .filter(|&t| {
            let u: f64 = stream_at(seed, STREAM_SUBSAMPLE, triple_rank(n, t)).gen();
            u < keep
        })
        .collect();
    Ok(Hypergraph3::from_sorted_unchecked(n, kept))
}

/// Triples inside `{0..s-1}` with probability `p_in`, all others with `p`.
pub fn gen_planted_dense(n: u32, p: f64, s: u32, p_in: f64, seed: u64) -> Result<Hypergraph3> {
    check_prob("p", p)?;
    check_prob("p_in", p_in)?;
    if s > n {
        return Err(Error::BadParam {
            name: "s",
            value: s as f64,
        });
    }
    Ok(sample_triples(n, seed, |[_, _, c]| if c < s { p_in } else { p }))
}

/// Every triple through vertex 0 plus background triples with probability `p`.
pub fn gen_planted_star(n: u32, p: f64, seed: u64) -> Result<Hypergraph3> {
    check_prob("p", p)?;
    Ok(sample_triples(n, seed, |[a, _, _]| if a == 0 { 1.0 } else { p }))
}

/// Generator family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum GenKind {
    Random,
    Complete,
    Subsample,
    PlantedDense,
    PlantedStar,
}

/// Declarative generator input; the seed fully determines the output.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: u32,
    /// Edge probability (background probability for the planted kinds).
    #[cfg_attr(feature = "serde", serde(default))]
    pub p: f64,
    /// Planted-set size.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub s: Option<u32>,
    /// Planted-set edge probability.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub p_in: Option<f64>,
    /// Keep probability for subsampling, i.e. `q / p`.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub keep: Option<f64>,
    pub seed: u64,
}

impl GenSpec {
    /// Runs the generator. `Subsample` draws its host as `gen_random(n, p, seed)`
    /// unless one is supplied.
    pub fn generate(&self, host: Option<&Hypergraph3>) -> Result<Hypergraph3> {
        match self.kind {
            GenKind::Random => gen_random(self.n, self.p, self.seed),
            GenKind::Complete => Ok(gen_complete(self.n)),
            GenKind::Subsample => {
                let keep = self.keep.ok_or(Error::BadParam {
                    name: "keep",
                    value: f64::NAN,
                })?;
                match host {
                    Some(h) => subsample(h, keep, self.seed),
                    None => subsample(&gen_random(self.n, self.p, self.seed)?, keep, self.seed),
                }
            }
            GenKind::PlantedDense => gen_planted_dense(
                self.n,
                self.p,
                self.s.ok_or(Error::BadParam {
                    name: "s",
                    value: f64::NAN,
                })?,
                self.p_in.ok_or(Error::BadParam {
                    name: "p_in",
                    value: f64::NAN,
                })?,
                self.seed,
            ),
            GenKind::PlantedStar => gen_planted_star(self.n, self.p, self.seed),
        }
    }
}
