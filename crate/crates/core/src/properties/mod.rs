//! Checkers for density, discrepancy, degree and codegree properties, and
//! two-sided jumbledness estimates.
//!
//! Every checker returns a [`PropertyReport`]. The status vocabulary is strict:
//! [`Status::VerifiedExact`] is only ever produced by an exhaustive (or
//! provably exact) computation, searches report [`Status::NoViolationFound`]
//! at best, and [`Status::Violated`] always carries a witness that can be
//! recounted from the hypergraph alone.
//!
//! Inequalities are decided with [`Quantity`], so bounds built from short
//! decimal parameters are compared exactly against integer counts.

mod bdd;
mod degrees;
mod disc;
mod jumbled;
mod pair;
mod qprime;

use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::PairIndex;
use crate::quantity::Quantity;

pub use bdd::{bdd_levels, check_bdd, BddLevel, DEFAULT_BDD_BUDGET};
pub use degrees::{codegree_histograms, degree_histogram, CodegreeHistograms};
pub use disc::{check_disc, DISC_EXACT_MAX_Y};
pub use jumbled::{
    certify_beta_spectral, estimate_jumbledness, search_beta_lower, BetaLower, SPECTRAL_MAX_ITERATIONS,
};
pub use pair::{check_pair, check_tuple, pair_sums, tuple_exceptions, PairSums, TupleExceptions};
pub use qprime::{check_qprime, QPRIME_EXACT_MAX_N};

/// Which property a report is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum PropertyKind {
    Qprime,
    Disc,
    Pair,
    Tuple,
    Bdd,
}

impl PropertyKind {
    pub fn name(self) -> &'static str {
        match self {
            PropertyKind::Qprime => "QPRIME",
            PropertyKind::Disc => "DISC",
            PropertyKind::Pair => "PAIR",
            PropertyKind::Tuple => "TUPLE",
            PropertyKind::Bdd => "BDD",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum Mode {
    Exact,
    Search,
    Spectral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum Status {
    VerifiedExact,
    NoViolationFound,
    Violated,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::VerifiedExact => "VERIFIED_EXACT",
            Status::NoViolationFound => "NO_VIOLATION_FOUND",
            Status::Violated => "VIOLATED",
        }
    }
}

/// Parameters shared by the checkers. Each checker reads the ones it needs.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PropertyParams {
    pub eta: f64,
    pub delta: f64,
    pub q: f64,
    pub p: f64,
    pub eps: f64,
    #[cfg_attr(feature = "serde", serde(rename = "C"))]
    pub c: f64,
    pub k: u32,
    pub alpha: f64,
}

impl PropertyParams {
    /// `q = p`, `alpha = 1`, and working defaults for the rest.
    pub fn new(q: f64) -> PropertyParams {
        PropertyParams {
            eta: 0.5,
            delta: 0.1,
            q,
            p: q,
            eps: 0.1,
            c: 2.0,
            k: 2,
            alpha: 1.0,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        if p > 0.0 {
            self.alpha = self.alpha.min(self.q / p);
        }
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_k(mut self, k: u32) -> Self {
        self.k = k;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        fn bad(name: &'static str, value: f64) -> Result<()> {
            Err(Error::BadParam { name, value })
        }
        if self.q.is_nan() || self.q <= 0.0 {
            return Err(Error::NonpositiveQ(self.q));
        }
        let open01 = |x: f64| x > 0.0 && x < 1.0;
        let half01 = |x: f64| x > 0.0 && x <= 1.0;
        if !half01(self.q) {
            return bad("q", self.q);
        }
        if !half01(self.p) {
            return bad("p", self.p);
        }
        if !open01(self.eta) {
            return bad("eta", self.eta);
        }
        if self.delta.is_nan() || self.delta <= 0.0 {
            return bad("delta", self.delta);
        }
        if self.eps.is_nan() || self.eps <= 0.0 {
            return bad("eps", self.eps);
        }
        if self.c.is_nan() || self.c <= 1.0 {
            return bad("C", self.c);
        }
        if self.k == 0 {
            return bad("k", 0.0);
        }
        if !half01(self.alpha) {
            return bad("alpha", self.alpha);
        }
        let (q, p, a) = (Quantity::param(self.q), Quantity::param(self.p), Quantity::param(self.alpha));
        if !q.le(p) {
            return bad("q", self.q);
        }
        if !(a * p).le(q) {
            return bad("alpha", self.alpha);
        }
        Ok(())
    }
}

/// Restart budget and master seed for the search modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchOptions {
    pub restarts: u32,
    pub seed: u64,
    /// Cap on alternating or local-search rounds per restart.
    pub max_rounds: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            restarts: 8,
            seed: 0,
            max_rounds: 64,
        }
    }
}

/// Random stream for restart `restart` of the checker identified by `salt`.
pub(crate) fn restart_rng(seed: u64, salt: u64, restart: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(salt << 32 | restart);
    rng
}

/// The offending sets of a check together with the measured value and the
/// bound it broke (or, for searches that found nothing, the best attempt).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Witness {
    #[cfg_attr(feature = "serde", serde(rename = "X"))]
    pub x: Vec<[u32; 2]>,
    #[cfg_attr(feature = "serde", serde(rename = "Y"))]
    pub y: Vec<u32>,
    pub value: f64,
    pub bound: f64,
}

impl Witness {
    pub(crate) fn new(pairs: impl IntoIterator<Item = usize>, y: impl IntoIterator<Item = usize>, value: Quantity, bound: Quantity) -> Witness {
        let mut x: Vec<[u32; 2]> = pairs
            .into_iter()
            .map(|s| {
                let (a, b) = PairIndex(s).vertices();
                [a, b]
            })
            .collect();
        x.sort_unstable();
        let mut y: Vec<u32> = y.into_iter().map(|v| v as u32).collect();
        y.sort_unstable();
        Witness {
            x,
            y,
            value: value.value(),
            bound: bound.value(),
        }
    }

    /// Pair indices of `X`.
    pub fn pair_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.x.iter().map(|&[a, b]| PairIndex::new(a, b).0)
    }
}

/// Named numbers in insertion order; serialized as a JSON object.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Named<T>(pub Vec<(String, T)>);

impl<T: Copy> Named<T> {
    pub fn push(&mut self, name: impl Into<String>, value: T) {
        self.0.push((name.into(), value));
    }

    pub fn get(&self, name: &str) -> Option<T> {
        self.0.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }
}

#[cfg(feature = "serde")]
impl<T: serde::Serialize> serde::Serialize for Named<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Worst slacks observed, `bound - value` style: negative means violated.
pub type Margins = Named<f64>;
/// Effort counters.
pub type Work = Named<u64>;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PropertyReport {
    pub property: PropertyKind,
    pub mode: Mode,
    pub params: PropertyParams,
    pub status: Status,
    pub witness: Option<Witness>,
    pub margins: Margins,
    pub work: Work,
}

impl PropertyReport {
    pub fn violated(&self) -> bool {
        self.status == Status::Violated
    }
}

/// Two-sided jumbledness estimate: a searched lower bound with its witness
/// and a certified spectral upper bound.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct JumbledEstimate {
    pub p: f64,
    pub beta_lower: f64,
    pub witness: Witness,
    pub beta_upper: f64,
    /// `beta_upper / (p^2 n^{3/2})`.
    pub gamma_ratio: f64,
}

/// Smallest integer `>= x`.
pub(crate) fn ceil_quantity(x: Quantity) -> u64 {
    match x.exact() {
        Some(r) => {
            let (n, d) = (r.num(), r.den());
            (n.div_euclid(d) + i128::from(n.rem_euclid(d) != 0)).max(0) as u64
        }
        None => libm::ceil(x.value() - crate::quantity::FLOAT_SLACK).max(0.0) as u64,
    }
}

pub(crate) fn binom2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}
