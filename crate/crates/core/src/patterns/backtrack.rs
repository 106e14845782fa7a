//! Backtracking embedding counter over a static vertex order.
//!
//! Each pattern vertex is placed in an order that closes as many pattern edges
//! as early as possible. The candidates for a vertex are the intersection of
//! the host neighbourhoods `N(φ(a), φ(b))` over the edges it closes, minus the
//! images already used; the last vertex is counted by popcount.

use alloc::vec::Vec;

use super::{falling_factorial, PatternH};
use crate::bitset::{self, Ones};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;
use crate::par;

struct Plan {
    /// `closing[i]`: pairs of earlier positions that form an edge with position `i`.
    closing: Vec<Vec<(usize, usize)>>,
}

fn static_order(h: &PatternH) -> Vec<u32> {
    let k = h.k();
    let mut placed = Vec::with_capacity(k);
    let mut is_placed = [false; 16];
    while placed.len() < k {
        let score = |u: u32| {
            let closes = h
                .edges()
                .iter()
                .filter(|e| e.contains(&u) && e.iter().all(|&x| x == u || is_placed[x as usize]))
                .count();
            let touches = h
                .edges()
                .iter()
                .filter(|e| e.contains(&u) && e.iter().any(|&x| is_placed[x as usize]))
                .count();
            (closes, touches, h.degree(u), core::cmp::Reverse(u))
        };
        let next = (0..k as u32)
            .filter(|&u| !is_placed[u as usize])
            .max_by_key(|&u| score(u))
            .unwrap();
        is_placed[next as usize] = true;
        placed.push(next);
    }
    placed
}

fn plan(h: &PatternH) -> Plan {
    let order = static_order(h);
    let mut pos = [0usize; 16];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i;
    }
    let closing = (0..order.len())
        .map(|i| {
            h.edges()
                .iter()
                .filter_map(|e| {
                    let ps = [pos[e[0] as usize], pos[e[1] as usize], pos[e[2] as usize]];
                    let last = *ps.iter().max().unwrap();
                    if last != i {
                        return None;
                    }
                    let mut others = ps.iter().copied().filter(|&p| p != i);
                    Some((others.next().unwrap(), others.next().unwrap()))
                })
                .collect()
        })
        .collect();
    Plan { closing }
}

struct Search<'a> {
    g: &'a Hypergraph3,
    plan: &'a Plan,
    full: Vec<u64>,
}

impl Search<'_> {
    fn candidates(&self, depth: usize, image: &[u32], used: &[u64], out: &mut [u64]) {
        out.copy_from_slice(&self.full);
        for &(a, b) in &self.plan.closing[depth] {
            bitset::and_assign(out, self.g.nbhd_of(image[a], image[b]));
        }
        for (o, u) in out.iter_mut().zip(used) {
            *o &= !u;
        }
    }

    fn count(&self, depth: usize, image: &mut [u32], used: &mut [u64], scratch: &mut [Vec<u64>]) -> u128 {
        let (cur, rest) = scratch.split_first_mut().unwrap();
        self.candidates(depth, image, used, cur);
        if depth + 1 == self.plan.closing.len() {
            return bitset::popcount(cur) as u128;
        }
        let mut total = 0u128;
        for w in Ones::new(cur) {
            image[depth] = w as u32;
            bitset::set_bit(used, w);
            total = total.wrapping_add(self.count(depth + 1, image, used, rest));
            bitset::clear_bit(used, w);
        }
        total
    }
}

/// Exact labelled embedding count by bitset backtracking.
pub fn count_backtrack(g: &Hypergraph3, h: &PatternH) -> Result<u128> {
    let n = g.n();
    if h.k() > n as usize {
        return Err(Error::PatternTooLarge("pattern has more vertices than the host"));
    }
    let (core, isolated) = h.strip_isolated();
    let tail = falling_factorial((n as usize - core.k()) as u64, isolated).ok_or(Error::CountOverflow)?;
    falling_factorial(n as u64, h.k()).ok_or(Error::CountOverflow)?;
    if core.k() == 0 {
        return Ok(tail);
    }
    let plan = plan(&core);
    let search = Search {
        g,
        plan: &plan,
        full: bitset::full_words(n as usize),
    };
    let words = g.words();
    let k = core.k();
    let root = if k == 1 {
        n as u128
    } else {
        par::wrapping_sum(n as usize, |v| {
            let mut image = alloc::vec![0u32; k];
            let mut used = alloc::vec![0u64; words];
            let mut scratch = alloc::vec![alloc::vec![0u64; words]; k];
            image[0] = v as u32;
            bitset::set_bit(&mut used, v);
            search.count(1, &mut image, &mut used, &mut scratch[1..])
        })
    };
    Ok(root.wrapping_mul(tail))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::count_embeddings_oracle;
    use super::*;
    use crate::generators::{gen_complete, gen_random};

    #[test]
    fn order_closes_edges_early() {
        let order = static_order(&loose_path3());
        let p = plan(&loose_path3());
        assert_eq!(order.len(), 7);
        assert_eq!(p.closing.iter().map(Vec::len).sum::<usize>(), 3);
        assert_eq!(p.closing[2].len(), 1);
    }

    #[test]
    fn matches_oracle() {
        for seed in 0..6 {
            let g = gen_random(10, 0.45, seed).unwrap();
            for h in [loose_path(), k4(), single_edge(), connector_star().strip_isolated().0] {
                if h.k() > 6 {
                    continue;
                }
                assert_eq!(
                    count_backtrack(&g, &h).unwrap(),
                    count_embeddings_oracle(&g, &h).unwrap().count
                );
            }
        }
    }

    #[test]
    fn complete_host() {
        assert_eq!(count_backtrack(&gen_complete(8), &loose_path3()).unwrap(), 8 * 7 * 6 * 5 * 4 * 3 * 2);
        assert_eq!(count_backtrack(&gen_complete(4), &k4()).unwrap(), 24);
    }
}
