use super::{PatternH, MAX_AUT_VERTICES};
use crate::error::{Error, Result};
use alloc::vec::Vec;

/// Every two edges share at most one vertex.
pub fn is_linear(h: &PatternH) -> bool {
    let e = h.edges();
    e.iter().enumerate().all(|(i, a)| {
        e[i + 1..]
            .iter()
            .all(|b| a.iter().filter(|x| b.contains(x)).count() <= 1)
    })
}

/// Edges `e` with an outside vertex `v` lying on three edges that each meet
/// `e` in exactly one vertex. Only defined for linear patterns.
pub fn connector_edges(h: &PatternH) -> Result<Vec<[u32; 3]>> {
    if !is_linear(h) {
        return Err(Error::NotLinear);
    }
    let uniformity = 3;
    Ok(h.edges()
        .iter()
        .copied()
        .filter(|e| {
            (0..h.k() as u32).filter(|v| !e.contains(v)).any(|v| {
                let spokes = h
                    .edges()
                    .iter()
                    .filter(|f| f.contains(&v) && f.iter().filter(|x| e.contains(x)).count() == 1)
                    .count();
                spokes >= uniformity
            })
        })
        .collect())
}

/// `max` over subhypergraphs of the minimum degree, by min-degree peeling.
pub fn degeneracy_dh(h: &PatternH) -> u32 {
    let k = h.k();
    let mut alive = (1u32 << k) - 1;
    let mut edges: Vec<[u32; 3]> = h.edges().to_vec();
    let mut best = 0;
    while alive != 0 {
        let mut deg = [0u32; 16];
        for e in &edges {
            for &v in e {
                deg[v as usize] += 1;
            }
        }
        let (v, d) = (0..k)
            .filter(|&v| alive >> v & 1 == 1)
            .map(|v| (v, deg[v]))
            .min_by_key(|&(v, d)| (d, v))
            .unwrap();
        best = best.max(d);
        alive &= !(1 << v);
        edges.retain(|e| !e.contains(&(v as u32)));
    }
    best
}

/// `min(3 d_H, Δ(H))`.
pub fn big_dh(h: &PatternH) -> u32 {
    let max_degree = (0..h.k() as u32).map(|v| h.degree(v)).max().unwrap_or(0);
    (3 * degeneracy_dh(h)).min(max_degree)
}

/// Number of vertex permutations mapping the edge set onto itself.
pub fn automorphism_count(h: &PatternH) -> Result<u64> {
    if h.k() > MAX_AUT_VERTICES {
        return Err(Error::PatternTooLarge("automorphisms need k <= 10"));
    }
    let k = h.k();
    let degree: Vec<u32> = (0..k as u32).map(|v| h.degree(v)).collect();
    // edges whose largest vertex is v, checked once v is mapped
    let closing: Vec<Vec<[u32; 2]>> = (0..k as u32)
        .map(|v| {
            h.edges()
                .iter()
                .filter(|e| e[2] == v)
                .map(|e| [e[0], e[1]])
                .collect()
        })
        .collect();

    fn extend(
        h: &PatternH,
        v: usize,
        image: &mut [u32; 16],
        used: u32,
        degree: &[u32],
        closing: &[Vec<[u32; 2]>],
    ) -> u64 {
        if v == h.k() {
            return 1;
        }
        let mut total = 0;
        for w in 0..h.k() as u32 {
            if used >> w & 1 == 1 || degree[w as usize] != degree[v] {
                continue;
            }
            image[v] = w;
            let ok = closing[v]
                .iter()
                .all(|&[a, b]| h.has_edge(image[a as usize], image[b as usize], w));
            if ok {
                total += extend(h, v + 1, image, used | 1 << w, degree, closing);
            }
        }
        total
    }

    let mut image = [0u32; 16];
    Ok(extend(h, 0, &mut image, 0, &degree, &closing))
}
