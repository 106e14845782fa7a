//! Embedding counts through homomorphism counts.
//!
//! Injective maps are recovered from all maps by Möbius inversion over the
//! lattice of vertex identifications:
//!
//! `inj(H, G) = Σ_π μ(π) · hom(H/π, G)`, `μ(π) = Π_B (-1)^{|B|-1} (|B|-1)!`.
//!
//! Identifications that put two vertices of one edge into the same block have
//! `hom = 0` (host edges have three distinct vertices) and are skipped during
//! enumeration. Each `hom(H/π, G)` is computed by variable elimination: a
//! pattern vertex is summed out once all the factors touching it mention at
//! most two other free vertices, producing a table over those vertices. When
//! no such vertex exists one vertex is fixed to each host vertex in turn.
//!
//! All arithmetic is modulo 2^128; the final count is exact whenever it fits,
//! which callers check through the falling factorial bound.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{falling_factorial, PatternH};
use crate::bitset::{self, Ones};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;
use crate::par;

/// Identification lattices larger than this are left to backtracking.
pub const DEFAULT_PARTITION_LIMIT: usize = 20_000;

const FREE: u32 = u32::MAX;

struct Quotient {
    vars: usize,
    edges: Vec<[u8; 3]>,
    mu: i128,
}

/// Identifications of `h` that never merge two vertices of a common edge.
fn quotients(h: &PatternH, limit: usize) -> Option<Vec<Quotient>> {
    let k = h.k();
    let mut conflict = [0u16; 16];
    for e in h.edges() {
        for &a in e {
            for &b in e {
                if a != b {
                    conflict[a as usize] |= 1 << b;
                }
            }
        }
    }

    struct Walk<'a> {
        h: &'a PatternH,
        conflict: [u16; 16],
        blocks: Vec<u16>,
        block_of: [u8; 16],
        out: Vec<Quotient>,
        limit: usize,
    }

    impl Walk<'_> {
        fn emit(&mut self) {
            let mut mu: i128 = 1;
            for b in &self.blocks {
                let s = b.count_ones() as i128;
                for i in 1..s {
                    mu *= -i;
                }
            }
            let mut edges: Vec<[u8; 3]> = self
                .h
                .edges()
                .iter()
                .map(|e| {
                    let mut t = e.map(|v| self.block_of[v as usize]);
                    t.sort_unstable();
                    t
                })
                .collect();
            edges.sort_unstable();
            edges.dedup();
            self.out.push(Quotient {
                vars: self.blocks.len(),
                edges,
                mu,
            });
        }

        fn go(&mut self, v: usize) -> bool {
            if v == self.h.k() {
                self.emit();
                return self.out.len() <= self.limit;
            }
            for b in 0..self.blocks.len() {
                if self.blocks[b] & self.conflict[v] == 0 {
                    self.blocks[b] |= 1 << v;
                    self.block_of[v] = b as u8;
                    let ok = self.go(v + 1);
                    self.blocks[b] &= !(1 << v);
                    if !ok {
                        return false;
                    }
                }
            }
            self.blocks.push(1 << v);
            self.block_of[v] = (self.blocks.len() - 1) as u8;
            let ok = self.go(v + 1);
            self.blocks.pop();
            ok
        }
    }

    let mut walk = Walk {
        h,
        conflict,
        blocks: Vec::with_capacity(k),
        block_of: [0; 16],
        out: Vec::new(),
        limit,
    };
    if walk.go(0) {
        Some(walk.out)
    } else {
        None
    }
}

/// Ring for the modular sums; `u64` is used when the final count is known to
/// fit in 64 bits.
trait Acc: Copy + Send + Sync + 'static {
    const ZERO: Self;
    const ONE: Self;
    fn from_u32(x: u32) -> Self;
    fn from_i128(x: i128) -> Self;
    fn add(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn to_u128(self) -> u128;
}

macro_rules! acc {
    ($t:ty) => {
        impl Acc for $t {
            const ZERO: Self = 0;
            const ONE: Self = 1;
            #[inline]
            fn from_u32(x: u32) -> Self {
                x as $t
            }
            #[inline]
            fn from_i128(x: i128) -> Self {
                x as $t
            }
            #[inline]
            fn add(self, o: Self) -> Self {
                self.wrapping_add(o)
            }
            #[inline]
            fn mul(self, o: Self) -> Self {
                self.wrapping_mul(o)
            }
            #[inline]
            fn to_u128(self) -> u128 {
                self as u128
            }
        }
    };
}

acc!(u64);
acc!(u128);

#[derive(Clone)]
struct Table<A> {
    scope: Vec<u8>,
    data: Vec<A>,
}

#[derive(Clone)]
struct State<A> {
    fixed: [u32; 16],
    free: u16,
    edges: Vec<[u8; 3]>,
    tables: Vec<Table<A>>,
    mult: A,
}

/// A table read during elimination: entry `off + w * stride`, where `off`
/// is `mul` times the value of scope slot `slot`.
struct Factor<'a, A> {
    data: &'a [A],
    stride: usize,
    slot: usize,
    mul: usize,
}

struct Solver<'g> {
    g: &'g Hypergraph3,
    n: usize,
    full: Vec<u64>,
}

impl Solver<'_> {
    fn new(g: &Hypergraph3) -> Solver<'_> {
        Solver {
            g,
            n: g.n() as usize,
            full: bitset::full_words(g.n() as usize),
        }
    }

    /// Checks and drops edges whose vertices are all fixed.
    fn settle<A>(&self, st: &mut State<A>) -> bool {
        let mut ok = true;
        st.edges.retain(|e| {
            let vals = e.map(|x| st.fixed[x as usize]);
            if vals.iter().all(|&x| x != FREE) {
                ok &= self.g.has_edge(vals[0], vals[1], vals[2]);
                false
            } else {
                true
            }
        });
        ok
    }

    fn solve<A: Acc>(&self, mut st: State<A>) -> A {
        if !self.settle(&mut st) {
            return A::ZERO;
        }
        loop {
            if st.free == 0 {
                return st.mult;
            }
            let mut best: Option<(u32, core::cmp::Reverse<usize>, usize, u16)> = None;
            let mut busiest: Option<(usize, core::cmp::Reverse<usize>)> = None;
            for v in Ones::new(&[st.free as u64]) {
                let mut scope = 0u16;
                let mut incident = 0;
                for e in st.edges.iter().filter(|e| e.contains(&(v as u8))) {
                    incident += 1;
                    for &x in e {
                        if x as usize != v && st.free >> x & 1 == 1 {
                            scope |= 1 << x;
                        }
                    }
                }
                for t in st.tables.iter().filter(|t| t.scope.contains(&(v as u8))) {
                    incident += 1;
                    for &x in &t.scope {
                        if x as usize != v {
                            scope |= 1 << x;
                        }
                    }
                }
                let key = (scope.count_ones(), core::cmp::Reverse(incident), v, scope);
                if best.is_none_or(|b| (key.0, key.1, key.2) < (b.0, b.1, b.2)) {
                    best = Some(key);
                }
                let bk = (incident, core::cmp::Reverse(v));
                if busiest.is_none_or(|b| bk > b) {
                    busiest = Some(bk);
                }
            }
            let (size, _, v, scope) = best.unwrap();
            if size <= 2 {
                self.eliminate(&mut st, v, scope);
            } else {
                let v = busiest.unwrap().1 .0;
                return self.condition(st, v);
            }
        }
    }

    /// Sums out `v`, whose factors mention only the free vertices in
    /// `scope_mask` (at most two) besides fixed ones.
    fn eliminate<A: Acc>(&self, st: &mut State<A>, v: usize, scope_mask: u16) {
        let n = self.n;
        let v8 = v as u8;
        let scope: Vec<u8> = Ones::new(&[scope_mask as u64]).map(|x| x as u8).collect();
        let slot = |x: u8| usize::from(scope.first() != Some(&x));
        let (ev, rest): (Vec<[u8; 3]>, Vec<[u8; 3]>) =
            st.edges.iter().partition(|e| e.contains(&v8));
        st.edges = rest;
        let (tv, keep): (Vec<Table<A>>, Vec<Table<A>>) =
            core::mem::take(&mut st.tables).into_iter().partition(|t| t.scope.contains(&v8));
        st.tables = keep;
        st.free &= !(1 << v);

        // edges of v split by which scope slots they depend on
        let mut base = self.full.clone();
        let mut dep: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
        let mut joint = false;
        let mut dead = false;
        for e in &ev {
            let mut others = e.iter().copied().filter(|&x| x != v8);
            let (x, y) = (others.next().unwrap(), others.next().unwrap());
            match (st.fixed[x as usize], st.fixed[y as usize]) {
                (FREE, FREE) => joint = true,
                (FREE, f) => dep[slot(x)].push(f),
                (f, FREE) => dep[slot(y)].push(f),
                (a, b) if a == b => dead = true,
                (a, b) => bitset::and_assign(&mut base, self.g.nbhd_of(a, b)),
            }
        }
        let factors: Vec<Factor<'_, A>> = tv
            .iter()
            .map(|t| match t.scope.as_slice() {
                [_] => Factor { data: &t.data, stride: 1, slot: 0, mul: 0 },
                [a, o] if *a == v8 => Factor { data: &t.data, stride: 1, slot: slot(*o), mul: n },
                [o, _] => Factor { data: &t.data, stride: n, slot: slot(*o), mul: 1 },
                _ => unreachable!(),
            })
            .collect();

        let (n0, n1) = match scope.len() {
            0 => (1, 1),
            1 => (n, 1),
            _ => (n, n),
        };
        let mut data = alloc::vec![A::ZERO; n0 * n1];
        if !dead {
            let mut row = base.clone();
            let mut mask = base.clone();
            let mut offs = alloc::vec![0usize; factors.len()];
            'rows: for b in 0..n1 {
                row.copy_from_slice(&base);
                for &f in &dep[1] {
                    if f as usize == b {
                        continue 'rows;
                    }
                    bitset::and_assign(&mut row, self.g.nbhd_of(f, b as u32));
                }
                'cells: for a in 0..n0 {
                    if joint && a == b {
                        continue;
                    }
                    mask.copy_from_slice(&row);
                    for &f in &dep[0] {
                        if f as usize == a {
                            continue 'cells;
                        }
                        bitset::and_assign(&mut mask, self.g.nbhd_of(f, a as u32));
                    }
                    if joint {
                        bitset::and_assign(&mut mask, self.g.nbhd_of(a as u32, b as u32));
                    }
                    let cell = &mut data[a + n * b];
                    match factors.as_slice() {
                        [] => *cell = A::from_u32(bitset::popcount(&mask)),
                        [f] => {
                            let off = f.mul * if f.slot == 0 { a } else { b };
                            let mut sum = A::ZERO;
                            for w in Ones::new(&mask) {
                                sum = sum.add(f.data[off + w * f.stride]);
                            }
                            *cell = sum;
                        }
                        _ => {
                            for (o, f) in offs.iter_mut().zip(&factors) {
                                *o = f.mul * if f.slot == 0 { a } else { b };
                            }
                            let mut sum = A::ZERO;
                            for w in Ones::new(&mask) {
                                let mut prod = A::ONE;
                                for (f, &o) in factors.iter().zip(&offs) {
                                    prod = prod.mul(f.data[o + w * f.stride]);
                                }
                                sum = sum.add(prod);
                            }
                            *cell = sum;
                        }
                    }
                }
            }
        }
        if scope.is_empty() {
            st.mult = st.mult.mul(data[0]);
        } else {
            st.tables.push(Table { scope, data });
        }
    }

    fn condition<A: Acc>(&self, st: State<A>, v: usize) -> A {
        let n = self.n;
        let v8 = v as u8;
        let mut total = A::ZERO;
        for x in 0..n {
            let mut s = State {
                fixed: st.fixed,
                free: st.free & !(1 << v),
                edges: st.edges.clone(),
                tables: Vec::with_capacity(st.tables.len()),
                mult: st.mult,
            };
            s.fixed[v] = x as u32;
            for t in &st.tables {
                match t.scope.as_slice() {
                    [a] if *a == v8 => s.mult = s.mult.mul(t.data[x]),
                    [a, o] if *a == v8 => s.tables.push(Table {
                        scope: alloc::vec![*o],
                        data: (0..n).map(|y| t.data[x + n * y]).collect(),
                    }),
                    [o, b] if *b == v8 => s.tables.push(Table {
                        scope: alloc::vec![*o],
                        data: t.data[n * x..n * (x + 1)].to_vec(),
                    }),
                    _ => s.tables.push(t.clone()),
                }
            }
            total = total.add(self.solve(s));
        }
        total
    }

    fn hom<A: Acc>(&self, vars: usize, edges: &[[u8; 3]]) -> A {
        self.solve(State {
            fixed: [FREE; 16],
            free: ((1u32 << vars) - 1) as u16,
            edges: edges.to_vec(),
            tables: Vec::new(),
            mult: A::ONE,
        })
    }
}

/// Largest number of relabellings tried when canonicalising a quotient.
const CANON_BUDGET: usize = 720;

/// A relabelling-invariant form of a small hypergraph, or `None` when the
/// vertex refinement leaves too many relabellings to try.
fn canonical(vars: usize, edges: &[[u8; 3]]) -> Option<Vec<[u8; 3]>> {
    let mut deg = [0u32; 16];
    for e in edges {
        for &x in e {
            deg[x as usize] += 1;
        }
    }
    let mut inv = [(0u32, 0u32); 16];
    for e in edges {
        for &x in e {
            let co: u32 = e.iter().filter(|&&y| y != x).map(|&y| deg[y as usize]).sum();
            inv[x as usize] = (deg[x as usize], inv[x as usize].1 + co);
        }
    }
    let mut order: Vec<u8> = (0..vars as u8).collect();
    order.sort_by_key(|&x| (core::cmp::Reverse(inv[x as usize]), x));
    // class boundaries in `order`
    let mut classes: Vec<(usize, usize)> = Vec::new();
    let mut budget = 1usize;
    let mut start = 0;
    for i in 1..=vars {
        if i == vars || inv[order[i] as usize] != inv[order[start] as usize] {
            for f in 2..=i - start {
                budget = budget.saturating_mul(f);
            }
            classes.push((start, i));
            start = i;
        }
    }
    if budget > CANON_BUDGET {
        return None;
    }

    fn relabel(order: &[u8], edges: &[[u8; 3]]) -> Vec<[u8; 3]> {
        let mut label = [0u8; 16];
        for (i, &x) in order.iter().enumerate() {
            label[x as usize] = i as u8;
        }
        let mut out: Vec<[u8; 3]> = edges
            .iter()
            .map(|e| {
                let mut t = e.map(|x| label[x as usize]);
                t.sort_unstable();
                t
            })
            .collect();
        out.sort_unstable();
        out
    }

    // all orders that permute vertices within their classes
    fn walk(
        order: &mut [u8],
        classes: &[(usize, usize)],
        pos: usize,
        edges: &[[u8; 3]],
        best: &mut Option<Vec<[u8; 3]>>,
    ) {
        let Some(&(_, hi)) = classes.first() else {
            let cand = relabel(order, edges);
            if best.as_ref().is_none_or(|b| cand < *b) {
                *best = Some(cand);
            }
            return;
        };
        if pos == hi {
            return walk(order, &classes[1..], classes.get(1).map_or(0, |c| c.0), edges, best);
        }
        for i in pos..hi {
            order.swap(pos, i);
            walk(order, classes, pos + 1, edges, best);
            order.swap(pos, i);
        }
    }

    let mut best = None;
    let first = classes.first().map_or(0, |c| c.0);
    walk(&mut order, &classes, first, edges, &mut best);
    best
}

/// Number of edge-preserving maps `V(H) -> V(G)` (not necessarily injective),
/// modulo 2^128.
pub fn hom_count(g: &Hypergraph3, h: &PatternH) -> u128 {
    let edges: Vec<[u8; 3]> = h.edges().iter().map(|e| e.map(|x| x as u8)).collect();
    Solver::new(g).hom::<u128>(h.k(), &edges)
}

/// `Σ μ · hom` over quotients, with isomorphic quotients merged first.
fn mobius_sum<A: Acc>(g: &Hypergraph3, parts: Vec<Quotient>) -> A {
    let mut merged: BTreeMap<(usize, Vec<[u8; 3]>), i128> = BTreeMap::new();
    for q in parts {
        let edges = canonical(q.vars, &q.edges).unwrap_or(q.edges);
        *merged.entry((q.vars, edges)).or_insert(0) += q.mu;
    }
    let classes: Vec<_> = merged.into_iter().filter(|(_, mu)| *mu != 0).collect();
    let solver = Solver::new(g);
    par::map_collect(classes.len(), |i| {
        let ((vars, edges), mu) = &classes[i];
        A::from_i128(*mu).mul(solver.hom::<A>(*vars, edges))
    })
    .into_iter()
    .fold(A::ZERO, A::add)
}

/// Exact embedding count by Möbius inversion, or `None` when the pattern has
/// more than `limit` admissible vertex identifications.
pub fn count_mobius_with_limit(g: &Hypergraph3, h: &PatternH, limit: usize) -> Result<Option<u128>> {
    let n = g.n();
    if h.k() > n as usize {
        return Err(Error::PatternTooLarge("pattern has more vertices than the host"));
    }
    let bound = falling_factorial(n as u64, h.k()).ok_or(Error::CountOverflow)?;
    let (core, isolated) = h.strip_isolated();
    let tail = falling_factorial((n as usize - core.k()) as u64, isolated).ok_or(Error::CountOverflow)?;
    if core.k() == 0 {
        return Ok(Some(tail));
    }
    let Some(parts) = quotients(&core, limit) else {
        return Ok(None);
    };
    let total = if bound <= u64::MAX as u128 {
        mobius_sum::<u64>(g, parts).to_u128()
    } else {
        mobius_sum::<u128>(g, parts)
    };
    Ok(Some(total.wrapping_mul(tail)))
}

/// Exact embedding count by Möbius inversion, without a lattice size limit.
pub fn count_mobius(g: &Hypergraph3, h: &PatternH) -> Result<u128> {
    Ok(count_mobius_with_limit(g, h, usize::MAX)?.expect("unbounded limit"))
}
