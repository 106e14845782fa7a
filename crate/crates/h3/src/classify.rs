use h3_core::PatternH;
use serde::{Deserialize, Serialize};

/// Classification summary of a pattern, as printed by `h3 classify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub k: usize,
    pub m: usize,
    pub linear: bool,
    /// `null` for non-linear patterns.
    pub connectors: Option<Vec<[u32; 3]>>,
    #[serde(rename = "d_H")]
    pub d_h: u32,
    #[serde(rename = "D_H")]
    pub big_d_h: u32,
    pub max_degree: u32,
    /// `null` above ten vertices.
    pub aut: Option<u64>,
}

pub fn classify(h: &PatternH) -> Classification {
    let s = h.stats();
    Classification {
        k: h.k(),
        m: h.m(),
        linear: s.is_linear,
        connectors: s.connector_edges.clone(),
        d_h: s.d_h,
        big_d_h: s.big_d_h,
        max_degree: s.max_degree,
        aut: s.aut_count,
    }
}
