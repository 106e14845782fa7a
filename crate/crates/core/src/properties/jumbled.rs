//! Two-sided estimates of the smallest `β` with
//! `|e(X, Y) - p|X||Y|| <= β sqrt(|X||Y|)` for all `X ⊆ C(V, 2)`, `Y ⊆ V`.
//!
//! The upper bound is the top singular value of the centred pair-vertex
//! incidence matrix `B - pJ` (Cauchy-Schwarz makes it sound). The lower bound
//! is the best witness found by alternating threshold sweeps.

use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{restart_rng, JumbledEstimate, Witness};
use crate::bitset::{self, Ones};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;
use crate::par;
use crate::quantity::Quantity;

/// Power iteration gives up after this many steps.
pub const SPECTRAL_MAX_ITERATIONS: usize = 200_000;

const START_SEED: u64 = 0x6a75_6d62;
const SALT: u64 = 4;
const MAX_ROUNDS: usize = 64;

/// `(B - pJ)^T (B - pJ)` as a dense row-major `n x n` matrix.
fn gram(g: &Hypergraph3, p: f64) -> Vec<f64> {
    let n = g.n() as usize;
    let mut co = alloc::vec![0u32; n * n];
    let mut members = Vec::with_capacity(n);
    for s in 0..g.num_pairs() {
        members.clear();
        members.extend(Ones::new(g.nbhd_words(s)));
        for &u in &members {
            for &v in &members {
                co[u * n + v] += 1;
            }
        }
    }
    let deg: Vec<f64> = (0..n).map(|v| co[v * n + v] as f64).collect();
    let pairs = g.num_pairs() as f64;
    let mut m = alloc::vec![0.0; n * n];
    for u in 0..n {
        for v in 0..n {
            m[u * n + v] = co[u * n + v] as f64 - p * (deg[u] + deg[v]) + p * p * pairs;
        }
    }
    m
}

fn mat_vec(m: &[f64], x: &[f64], out: &mut [f64]) {
    let n = x.len();
    for (i, o) in out.iter_mut().enumerate() {
        *o = m[i * n..(i + 1) * n].iter().zip(x).map(|(a, b)| a * b).sum();
    }
}

fn norm(x: &[f64]) -> f64 {
    libm::sqrt(x.iter().map(|v| v * v).sum())
}

/// Top singular value of `B - pJ`, certified to relative tolerance `tol`.
///
/// Runs power iteration on the Gram matrix from a fixed pseudorandom start
/// and stops once `||Mx - ρx|| <= tol·ρ`; the returned value is
/// `sqrt(ρ + ||Mx - ρx||)`, rounding towards the safe side.
pub fn certify_beta_spectral(g: &Hypergraph3, p: f64, tol: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadParam { name: "p", value: p });
    }
    if !(tol > 0.0) {
        return Err(Error::BadParam { name: "tol", value: tol });
    }
    let n = g.n() as usize;
    if n == 0 {
        return Ok(0.0);
    }
    let m = gram(g, p);
    if m.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let scale = norm(&x);
    x.iter_mut().for_each(|v| *v /= scale);
    let mut mx = alloc::vec![0.0; n];
    let mut rho = 0.0;
    for _ in 0..SPECTRAL_MAX_ITERATIONS {
        mat_vec(&m, &x, &mut mx);
        rho = x.iter().zip(&mx).map(|(a, b)| a * b).sum::<f64>();
        let resid = libm::sqrt(x.iter().zip(&mx).map(|(a, b)| (b - rho * a) * (b - rho * a)).sum::<f64>());
        if rho > 0.0 && resid <= tol * rho {
            return Ok(libm::sqrt(rho + resid));
        }
        let len = norm(&mx);
        if len == 0.0 {
            return Ok(0.0);
        }
        for (a, b) in x.iter_mut().zip(&mx) {
            *a = b / len;
        }
    }
    Err(Error::NoConvergence {
        iterations: SPECTRAL_MAX_ITERATIONS,
        estimate: libm::sqrt(rho.max(0.0)),
    })
}

/// Best searched witness.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaLower {
    pub beta_lower: f64,
    /// `value` is `beta_lower`; `bound` is left at zero until a certificate
    /// is attached by [`estimate_jumbledness`].
    pub witness: Witness,
}

/// Keep the prefix of `order` maximizing `sign·Σ(c - t)/sqrt(k)`.
fn best_prefix(order: &[usize], count: impl Fn(usize) -> u32, t: f64, sign: f64) -> (usize, f64) {
    let (mut acc, mut best, mut len) = (0.0, f64::NEG_INFINITY, 0);
    for (k, &i) in order.iter().enumerate() {
        acc += sign * (count(i) as f64 - t);
        let v = acc / libm::sqrt((k + 1) as f64);
        if v > best {
            best = v;
            len = k + 1;
        }
    }
    (len, best)
}

/// Sort so that the largest `sign·c` come first, ties by index.
fn ranked(counts: &[u32], sign: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..counts.len()).collect();
    if sign > 0.0 {
        order.sort_by_key(|&i| (core::cmp::Reverse(counts[i]), i));
    } else {
        order.sort_by_key(|&i| (counts[i], i));
    }
    order
}

struct Found {
    beta: f64,
    x: Vec<usize>,
    y: Vec<u64>,
}

fn climb(g: &Hypergraph3, p: f64, sign: f64, mut y: Vec<u64>) -> Found {
    let n = g.n() as usize;
    let pairs = g.num_pairs();
    let mut best = Found {
        beta: f64::NEG_INFINITY,
        x: Vec::new(),
        y: y.clone(),
    };
    let mut vcount = alloc::vec![0u32; n];
    for _ in 0..MAX_ROUNDS {
        let ysize = bitset::popcount(&y) as f64;
        if ysize == 0.0 {
            break;
        }
        let scount: Vec<u32> = (0..pairs).map(|s| bitset::and_popcount(g.nbhd_words(s), &y)).collect();
        let order = ranked(&scount, sign);
        let (k, _) = best_prefix(&order, |s| scount[s], p * ysize, sign);
        let mut x = order[..k].to_vec();
        x.sort_unstable();

        vcount.iter_mut().for_each(|c| *c = 0);
        for &s in &x {
            for v in Ones::new(g.nbhd_words(s)) {
                vcount[v] += 1;
            }
        }
        let order = ranked(&vcount, sign);
        let (k, v) = best_prefix(&order, |u| vcount[u], p * x.len() as f64, sign);
        let beta = v / libm::sqrt(x.len() as f64);
        let mut next = alloc::vec![0u64; y.len()];
        for &u in &order[..k] {
            bitset::set_bit(&mut next, u);
        }
        if beta <= best.beta + 1e-12 {
            break;
        }
        best = Found {
            beta,
            x,
            y: next.clone(),
        };
        y = next;
    }
    best
}

/// Alternating maximization of `|e(X,Y) - p|X||Y|| / sqrt(|X||Y|)`.
///
/// Each restart is climbed twice, once per sign of the deviation. Restart 0
/// starts from `Y = V`, restart 1 from the lowest-numbered vertex of maximum
/// degree, the others from random vertex sets with log-uniform sizes.
pub fn search_beta_lower(g: &Hypergraph3, p: f64, restarts: u32, seed: u64) -> BetaLower {
    let n = g.n() as usize;
    if g.num_pairs() == 0 {
        return BetaLower {
            beta_lower: 0.0,
            witness: Witness::new([], [], Quantity::ZERO, Quantity::ZERO),
        };
    }
    let restarts = restarts.max(1) as usize;
    let top = (0..n as u32).rev().max_by_key(|&v| g.degree(v)).unwrap_or(0) as usize;
    let runs = par::map_collect(2 * restarts, |job| {
        let (r, sign) = (job / 2, if job % 2 == 0 { 1.0 } else { -1.0 });
        let mut start = alloc::vec![0u64; bitset::words_for(n)];
        match r {
            0 => start = bitset::full_words(n),
            1 => bitset::set_bit(&mut start, top),
            _ => {
                let mut rng = restart_rng(seed, SALT, r as u64);
                let size = (libm::pow(n as f64, rng.gen::<f64>()) as usize).clamp(1, n);
                for v in index::sample(&mut rng, n, size) {
                    bitset::set_bit(&mut start, v);
                }
            }
        }
        climb(g, p, sign, start)
    });
    let mut best: Option<(f64, Found)> = None;
    for f in runs {
        let e: u64 = f.x.iter().map(|&s| bitset::and_popcount(g.nbhd_words(s), &f.y) as u64).sum();
        let size = (f.x.len() as u64 * bitset::popcount(&f.y) as u64) as f64;
        let beta = if size == 0.0 {
            0.0
        } else {
            libm::fabs(e as f64 - p * size) / libm::sqrt(size)
        };
        if best.as_ref().is_none_or(|(b, _)| beta > *b) {
            best = Some((beta, f));
        }
    }
    let (beta, f) = best.expect("at least one run");
    BetaLower {
        beta_lower: beta,
        witness: Witness::new(f.x, Ones::new(&f.y), Quantity::float(beta), Quantity::ZERO),
    }
}

/// Search plus certificate. `p` must lie in `(0, 1]`.
pub fn estimate_jumbledness(g: &Hypergraph3, p: f64, tol: f64, restarts: u32, seed: u64) -> Result<JumbledEstimate> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::BadParam { name: "p", value: p });
    }
    let beta_upper = certify_beta_spectral(g, p, tol)?;
    let lower = search_beta_lower(g, p, restarts, seed);
    let mut witness = lower.witness;
    witness.bound = beta_upper;
    let n = g.n() as f64;
    Ok(JumbledEstimate {
        p,
        beta_lower: lower.beta_lower,
        witness,
        beta_upper,
        gamma_ratio: beta_upper / (p * p * n * libm::sqrt(n)),
    })
}
