//! DISC(q, p, ε) for `(X, Y)`: `|e(X', Y') - q|X'||Y'|| <= ε p C(|X|,2) |Y|`
//! for all `X' ⊆ C(X, 2)` and `Y' ⊆ Y`.
//!
//! Given `Y'`, the worst `X'` is explicit: all pairs with `|N(S) ∩ Y'|` above
//! `q|Y'|` for the upper side, all pairs below it for the lower side. Both
//! sides only depend on the histogram of those degrees, which is updated in
//! `O(link)` per vertex flip.

use alloc::vec::Vec;

use rand::Rng;

use super::degrees::{check_universe, links, pairs_within};
use super::{binom2, restart_rng, Margins, Mode, PropertyKind, PropertyParams, PropertyReport, SearchOptions, Status, Witness, Work};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;
use crate::par;
use crate::quantity::Quantity;

/// Largest `|Y|` accepted in exact mode.
pub const DISC_EXACT_MAX_Y: usize = 20;

const SALT: u64 = 2;

/// Degrees of the pairs of `C(X, 2)` into the current `Y'`.
struct State<'a> {
    /// For each vertex of `Y` (local index), the local pairs it neighbours.
    link: &'a [Vec<u32>],
    deg: Vec<u32>,
    hist: Vec<u64>,
    inside: Vec<bool>,
    size: usize,
    q: f64,
}

impl<'a> State<'a> {
    fn new(link: &'a [Vec<u32>], pairs: usize, q: f64) -> State<'a> {
        let mut hist = alloc::vec![0u64; link.len() + 1];
        hist[0] = pairs as u64;
        State {
            link,
            deg: alloc::vec![0; pairs],
            hist,
            inside: alloc::vec![false; link.len()],
            size: 0,
            q,
        }
    }

    fn flip(&mut self, v: usize) {
        let add = !self.inside[v];
        self.inside[v] = add;
        if add {
            self.size += 1;
            for &i in &self.link[v] {
                let d = &mut self.deg[i as usize];
                self.hist[*d as usize] -= 1;
                *d += 1;
                self.hist[*d as usize] += 1;
            }
        } else {
            self.size -= 1;
            for &i in &self.link[v] {
                let d = &mut self.deg[i as usize];
                self.hist[*d as usize] -= 1;
                *d -= 1;
                self.hist[*d as usize] += 1;
            }
        }
    }

    /// `(upper, lower)` deviations of the extremal `X'`, in floats.
    fn sides(&self) -> (f64, f64) {
        let t = self.q * self.size as f64;
        let (mut up, mut down) = (0.0, 0.0);
        for (d, &c) in self.hist.iter().enumerate().take(self.size + 1) {
            if c == 0 {
                continue;
            }
            let r = d as f64 - t;
            if r > 0.0 {
                up += r * c as f64;
            } else {
                down -= r * c as f64;
            }
        }
        (up, down)
    }

    fn objective(&self) -> f64 {
        let (u, d) = self.sides();
        u.max(d)
    }

    /// Exact extremal deviation and the pairs realising it.
    fn exact_worst(&self, q: Quantity) -> (Quantity, Vec<usize>) {
        let t = q * Quantity::count(self.size as u64);
        let (mut up, mut down) = (Quantity::ZERO, Quantity::ZERO);
        for (d, &c) in self.hist.iter().enumerate().take(self.size + 1) {
            if c == 0 {
                continue;
            }
            let r = Quantity::count(d as u64) - t;
            if r.gt(Quantity::ZERO) {
                up = up + r * Quantity::count(c);
            } else if r.lt(Quantity::ZERO) {
                down = down - r * Quantity::count(c);
            }
        }
        let upper = !up.lt(down);
        let chosen = (0..self.deg.len())
            .filter(|&i| {
                let r = Quantity::count(self.deg[i] as u64) - t;
                if upper {
                    r.gt(Quantity::ZERO)
                } else {
                    r.lt(Quantity::ZERO)
                }
            })
            .collect();
        (if upper { up } else { down }, chosen)
    }
}

struct Found {
    value: Quantity,
    x: Vec<usize>,
    y: Vec<usize>,
}

/// DISC check for `(X, Y)`, using `params.q`, `params.p`, `params.eps`.
pub fn check_disc(
    g: &Hypergraph3,
    x: &VertexSet,
    y: &VertexSet,
    params: &PropertyParams,
    mode: Mode,
    opts: &SearchOptions,
) -> Result<PropertyReport> {
    params.validate()?;
    check_universe(g, x)?;
    check_universe(g, y)?;
    let ys: Vec<usize> = y.iter().collect();
    if mode == Mode::Exact && ys.len() > DISC_EXACT_MAX_Y {
        return Err(Error::ModeTooLarge("DISC exact mode needs |Y| <= 20"));
    }
    if mode == Mode::Spectral {
        return Err(Error::UnsupportedMode("DISC has exact and search modes"));
    }
    let pairs = pairs_within(x);
    let all_links = links(g);
    let link: Vec<Vec<u32>> = ys
        .iter()
        .map(|&v| {
            all_links[v]
                .iter()
                .filter_map(|&s| pairs.binary_search(&(s as usize)).ok().map(|i| i as u32))
                .collect()
        })
        .collect();
    let q = Quantity::param(params.q);
    let bound = Quantity::param(params.eps)
        * Quantity::param(params.p)
        * Quantity::count(binom2(x.len() as u64))
        * Quantity::count(ys.len() as u64);
    let bound_f = bound.value();
    let near = |obj: f64| obj >= bound_f - 1e-7 * (1.0 + bound_f);
    let judge = |st: &State<'_>| -> Option<Found> {
        let (value, chosen) = st.exact_worst(q);
        value.gt(bound).then(|| Found {
            value,
            x: chosen.iter().map(|&i| pairs[i]).collect(),
            y: (0..ys.len()).filter(|&i| st.inside[i]).map(|i| ys[i]).collect(),
        })
    };

    let mut work = Work::default();
    let (best, found) = if mode == Mode::Exact {
        let mut st = State::new(&link, pairs.len(), params.q);
        let mut best = st.objective();
        let mut found = None;
        let total = 1u64 << ys.len();
        for i in 1..total {
            st.flip(i.trailing_zeros() as usize);
            let obj = st.objective();
            best = best.max(obj);
            if found.is_none() && near(obj) {
                found = judge(&st);
            }
        }
        work.push("subsets_examined", total);
        (best, found)
    } else {
        let restarts = opts.restarts.max(1) as usize;
        let runs = par::map_collect(restarts, |r| {
            let mut st = State::new(&link, pairs.len(), params.q);
            match r {
                0 => (0..ys.len()).for_each(|v| st.flip(v)),
                1 => {}
                _ => {
                    let mut rng = restart_rng(opts.seed, SALT, r as u64);
                    for v in 0..ys.len() {
                        if rng.gen::<bool>() {
                            st.flip(v);
                        }
                    }
                }
            }
            let mut cur = st.objective();
            let mut evals = 1u64;
            for _ in 0..opts.max_rounds.max(1) {
                let mut improved = false;
                for v in 0..ys.len() {
                    st.flip(v);
                    let obj = st.objective();
                    evals += 1;
                    if obj > cur + 1e-9 {
                        cur = obj;
                        improved = true;
                    } else {
                        st.flip(v);
                    }
                }
                if !improved {
                    break;
                }
            }
            let found = if near(cur) { judge(&st) } else { None };
            (cur, found, evals)
        });
        work.push("restarts", restarts as u64);
        work.push("subsets_examined", runs.iter().map(|r| r.2).sum());
        let best = runs.iter().map(|r| r.0).fold(0.0, f64::max);
        let found = runs
            .into_iter()
            .filter_map(|r| r.1)
            .fold(None::<Found>, |acc, f| match acc {
                Some(a) if !f.value.gt(a.value) => Some(a),
                _ => Some(f),
            });
        (best, found)
    };

    let mut margins = Margins::default();
    margins.push("max_deviation", best);
    margins.push("bound", bound_f);
    margins.push("slack", bound_f - best);
    let (status, witness) = match found {
        Some(f) => (Status::Violated, Some(Witness::new(f.x, f.y, f.value, bound))),
        None if mode == Mode::Exact => (Status::VerifiedExact, None),
        None => (Status::NoViolationFound, None),
    };
    Ok(PropertyReport {
        property: PropertyKind::Disc,
        mode,
        params: *params,
        status,
        witness,
        margins,
        work,
    })
}
