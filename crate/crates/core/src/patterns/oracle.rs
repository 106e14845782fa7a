use super::{EmbeddingCount, PatternH};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;

/// Reference count: enumerates every injection and tests every pattern edge
/// against the host's sorted edge list.
pub fn count_embeddings_oracle(g: &Hypergraph3, h: &PatternH) -> Result<EmbeddingCount> {
    if g.n() > 12 || h.k() > 6 {
        return Err(Error::OracleTooLarge { n: g.n(), k: h.k() });
    }
    if h.k() > g.n() as usize {
        return Ok(EmbeddingCount::new(0, g.n(), h, g.density()));
    }
    fn is_edge(g: &Hypergraph3, mut t: [u32; 3]) -> bool {
        t.sort_unstable();
        g.edges().binary_search(&t).is_ok()
    }
    fn go(g: &Hypergraph3, h: &PatternH, map: &mut [u32; 6], depth: usize) -> u128 {
        if depth == h.k() {
            let ok = h
                .edges()
                .iter()
                .all(|e| is_edge(g, [map[e[0] as usize], map[e[1] as usize], map[e[2] as usize]]));
            return ok as u128;
        }
        let mut total = 0;
        for v in 0..g.n() {
            if map[..depth].contains(&v) {
                continue;
            }
            map[depth] = v;
            total += go(g, h, map, depth + 1);
        }
        total
    }
    let count = go(g, h, &mut [0; 6], 0);
    Ok(EmbeddingCount::new(count, g.n(), h, g.density()))
}
