//! The `.h3` text format and generator sidecars.
//!
//! ```text
//! # optional comments
//! n m
//! a b c        (m lines, 0 <= a < b < c < n)
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use h3_core::generators::GenSpec;
use h3_core::{Hypergraph3, PatternH};
use serde::Serialize;

use crate::error::{HarnessError, Result};

fn bad(origin: &str, line: usize, msg: impl Into<String>) -> HarnessError {
    HarnessError::Format {
        origin: origin.to_string(),
        line,
        msg: msg.into(),
    }
}

fn numbers<const N: usize>(origin: &str, line: usize, text: &str) -> Result<[u64; N]> {
    let mut out = [0u64; N];
    let mut fields = text.split_ascii_whitespace();
    for slot in &mut out {
        let f = fields.next().ok_or_else(|| bad(origin, line, format!("expected {N} numbers")))?;
        *slot = f.parse().map_err(|_| bad(origin, line, format!("not a number: {f:?}")))?;
    }
    if fields.next().is_some() {
        return Err(bad(origin, line, format!("expected {N} numbers")));
    }
    Ok(out)
}

/// Parses `.h3` text. `origin` names the source in error messages.
pub fn parse_h3(text: &str, origin: &str) -> Result<Hypergraph3> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| bad(origin, 1, "missing header \"n m\""))?;
    let [n, m] = numbers::<2>(origin, hl, header)?;
    let n = u32::try_from(n).map_err(|_| bad(origin, hl, "n too large"))?;
    let mut edges = Vec::with_capacity(m as usize);
    for (i, l) in lines {
        let [a, b, c] = numbers::<3>(origin, i, l)?;
        if !(a < b && b < c) {
            return Err(bad(origin, i, "edge must be listed as a < b < c"));
        }
        if c >= n as u64 {
            return Err(bad(origin, i, format!("vertex {c} out of range for n = {n}")));
        }
        edges.push([a as u32, b as u32, c as u32]);
    }
    if edges.len() as u64 != m {
        return Err(bad(origin, hl, format!("header declares {m} edges, found {}", edges.len())));
    }
    let g = Hypergraph3::new(n, edges).map_err(|e| HarnessError::core(origin, e))?;
    if g.m() as u64 != m {
        return Err(bad(origin, hl, "duplicate edges"));
    }
    Ok(g)
}

/// Canonical text: header then edges in lexicographic order.
pub fn write_h3(g: &Hypergraph3) -> String {
    let mut s = String::with_capacity(12 * g.m() + 16);
    writeln!(s, "{} {}", g.n(), g.m()).unwrap();
    for [a, b, c] in g.edges() {
        writeln!(s, "{a} {b} {c}").unwrap();
    }
    s
}

pub fn read_h3(path: &Path) -> Result<Hypergraph3> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_h3(&text, &path.display().to_string())
}

pub fn write_h3_file(path: &Path, g: &Hypergraph3) -> Result<()> {
    fs::write(path, write_h3(g)).map_err(|e| HarnessError::io(path, e))
}

/// A pattern stored as a `.h3` file; `k` is the file's `n`.
pub fn read_pattern(path: &Path) -> Result<PatternH> {
    let g = read_h3(path)?;
    PatternH::from_hypergraph(&g).map_err(|e| HarnessError::core(path.display().to_string(), e))
}

/// Provenance written next to generated instances.
#[derive(Serialize)]
pub struct Sidecar<'a> {
    #[serde(flatten)]
    pub spec: &'a GenSpec,
    pub m: usize,
}

/// Sidecar path for `out`: `g.h3` becomes `g.json`.
pub fn sidecar_path(out: &Path) -> std::path::PathBuf {
    out.with_extension("json")
}

pub fn sidecar_json(spec: &GenSpec, g: &Hypergraph3) -> String {
    let mut s = serde_json::to_string_pretty(&Sidecar { spec, m: g.m() }).expect("sidecar serializes");
    s.push('\n');
    s
}
