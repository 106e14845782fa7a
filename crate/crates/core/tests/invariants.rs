use h3_core::generators::{gen_complete, gen_random, subsample};
use h3_core::hypergraph::pair_count;
use h3_core::patterns::{automorphism_count, count_embeddings, count_embeddings_oracle, degeneracy_dh, falling_factorial};
use h3_core::properties::{certify_beta_spectral, search_beta_lower};
use h3_core::{Hypergraph3, PairIndex, PairSet, PatternH, VertexSet};
use proptest::prelude::*;

fn host() -> impl Strategy<Value = Hypergraph3> {
    (3u32..=24, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, p, seed)| gen_random(n, p, seed).unwrap())
}

fn subsets(g: &Hypergraph3, xm: &[bool], ym: &[bool]) -> (PairSet, VertexSet) {
    let np = g.num_pairs();
    let n = g.n() as usize;
    let x = PairSet::from_indices(np, (0..np).filter(|&i| xm[i % xm.len()] ^ (i % 7 == 3))).unwrap();
    let y = VertexSet::from_indices(n, (0..n).filter(|&i| ym[i % ym.len()])).unwrap();
    (x, y)
}

/// `e(X, Y)` straight from the edge list: every edge offers three (pair, vertex) slots.
fn edge_list_count(g: &Hypergraph3, x: &PairSet, y: &VertexSet) -> u64 {
    g.edges()
        .iter()
        .map(|&[a, b, c]| {
            [((a, b), c), ((a, c), b), ((b, c), a)]
                .iter()
                .filter(|((u, v), w)| x.contains(PairIndex::new(*u, *v).0) && y.contains(*w as usize))
                .count() as u64
        })
        .sum()
}

fn pattern() -> impl Strategy<Value = PatternH> {
    (3usize..=5).prop_flat_map(|k| {
        let triples: Vec<[u32; 3]> = (0..k as u32)
            .flat_map(|a| (a + 1..k as u32).flat_map(move |b| (b + 1..k as u32).map(move |c| [a, b, c])))
            .collect();
        proptest::sample::subsequence(triples.clone(), 0..=triples.len().min(4)).prop_map(move |e| PatternH::new(k, e).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decomposition_and_bipartite_view(g in host(), xm in prop::collection::vec(any::<bool>(), 1..64), ym in prop::collection::vec(any::<bool>(), 1..24)) {
        let (x, y) = subsets(&g, &xm, &ym);
        let e = g.incidence_count(&x, &y).unwrap();
        prop_assert_eq!(e, edge_list_count(&g, &x, &y));
        prop_assert_eq!(e, g.to_bipartite().edges_between(&x, &y));
    }

    #[test]
    fn incidence_is_monotone(g in host(), xm in prop::collection::vec(any::<bool>(), 1..64), ym in prop::collection::vec(any::<bool>(), 1..24), cut in 0usize..400) {
        let (x, y) = subsets(&g, &xm, &ym);
        let x1 = PairSet::from_indices(g.num_pairs(), x.iter().filter(|&s| s < cut)).unwrap();
        let y1 = VertexSet::from_indices(g.n() as usize, y.iter().filter(|&v| v % 3 != cut % 3)).unwrap();
        prop_assert!(g.incidence_count(&x1, &y).unwrap() <= g.incidence_count(&x, &y).unwrap());
        prop_assert!(g.incidence_count(&x, &y1).unwrap() <= g.incidence_count(&x, &y).unwrap());
    }

    #[test]
    fn handshake(g in host()) {
        let all = PairSet::full(pair_count(g.n()));
        let v = VertexSet::full(g.n() as usize);
        prop_assert_eq!(g.incidence_count(&all, &v).unwrap(), 3 * g.m() as u64);
    }

    #[test]
    fn sandwich_and_soundness(n in 4u32..=18, p in 0.05f64..0.95, seed in any::<u64>(), xm in prop::collection::vec(any::<bool>(), 1..64), ym in prop::collection::vec(any::<bool>(), 1..24)) {
        let g = gen_random(n, p, seed).unwrap();
        let beta = certify_beta_spectral(&g, p, 1e-6).unwrap();
        let lower = search_beta_lower(&g, p, 4, seed);
        prop_assert!(lower.beta_lower <= beta + 1e-6);
        let (x, y) = subsets(&g, &xm, &ym);
        let e = g.incidence_count(&x, &y).unwrap() as f64;
        let xy = (x.len() * y.len()) as f64;
        prop_assert!((e - p * xy).abs() <= beta * xy.sqrt() + 1e-6 * f64::from(n).powi(3));
    }

    #[test]
    fn counts_match_oracle_and_divide(n in 5u32..=9, p in 0.2f64..1.0, seed in any::<u64>(), h in pattern()) {
        let g = gen_random(n, p, seed).unwrap();
        let c = count_embeddings(&g, &h).unwrap().count;
        prop_assert_eq!(c, count_embeddings_oracle(&g, &h).unwrap().count);
        prop_assert_eq!(c % automorphism_count(&h).unwrap() as u128, 0);
        prop_assert!(c <= falling_factorial(u64::from(n), h.k()).unwrap());
    }

    #[test]
    fn counts_are_monotone(n in 6u32..=10, p in 0.2f64..0.8, seed in any::<u64>(), h in pattern(), extra in any::<[u32; 3]>()) {
        let g = gen_random(n, p, seed).unwrap();
        let c = count_embeddings(&g, &h).unwrap().count;
        let t = extra.map(|v| v % n);
        if t[0] != t[1] && t[1] != t[2] && t[0] != t[2] {
            let bigger = Hypergraph3::new(n, g.edges().iter().copied().chain([t])).unwrap();
            prop_assert!(count_embeddings(&bigger, &h).unwrap().count >= c);
        }
        let k = h.k() as u32;
        let e = extra.map(|v| v % k);
        if e[0] != e[1] && e[1] != e[2] && e[0] != e[2] {
            let denser = PatternH::new(h.k(), h.edges().iter().copied().chain([e])).unwrap();
            prop_assert!(count_embeddings(&g, &denser).unwrap().count <= c);
        }
    }

    #[test]
    fn complete_host_is_falling_factorial(n in 5u32..=30, h in pattern()) {
        let c = count_embeddings(&gen_complete(n), &h).unwrap().count;
        prop_assert_eq!(c, falling_factorial(u64::from(n), h.k()).unwrap());
    }

    #[test]
    fn subsample_is_spanning(n in 3u32..=20, p in 0.0f64..=1.0, keep in 0.0f64..=1.0, seed in any::<u64>()) {
        let host = gen_random(n, p, seed).unwrap();
        let g = subsample(&host, keep, seed).unwrap();
        prop_assert_eq!(g.n(), n);
        for e in g.edges() {
            prop_assert!(host.edges().binary_search(e).is_ok());
        }
        prop_assert_eq!(&g, &subsample(&host, keep, seed).unwrap());
    }
}

/// Induced minimum degree maximized over every vertex subset.
fn brute_dh(h: &PatternH) -> u32 {
    let k = h.k();
    let mut best = 0;
    for mask in 1u32..(1 << k) {
        let inside = |v: u32| mask >> v & 1 == 1;
        let min = (0..k as u32)
            .filter(|&v| inside(v))
            .map(|v| h.edges().iter().filter(|e| e.contains(&v) && e.iter().all(|&w| inside(w))).count() as u32)
            .min()
            .unwrap();
        best = best.max(min);
    }
    best
}

#[test]
fn peeling_matches_brute_force_on_all_small_patterns() {
    for k in 3..=6usize {
        let triples: Vec<[u32; 3]> = (0..k as u32)
            .flat_map(|a| (a + 1..k as u32).flat_map(move |b| (b + 1..k as u32).map(move |c| [a, b, c])))
            .collect();
        // every edge set for k <= 5, a deterministic sample of 4096 for k = 6
        let total = 1u64 << triples.len();
        let step = (total / 4096).max(1);
        let mut mask = 0u64;
        while mask < total {
            let h = PatternH::new(k, triples.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &t)| t)).unwrap();
            assert_eq!(degeneracy_dh(&h), brute_dh(&h), "{:?}", h.edges());
            mask += step + (mask % 3);
        }
    }
}
