//! Finitely supported sequences with an unbounded linear functional.
//!
//! The space is c00 (sequences with finite support) under the ℓ² norm, and
//! `phi(x) = Σ n·x_n` is linear but unbounded on the unit sphere since
//! `phi(e_n) = n`. Three derived functions exhibit how badly convexity
//! behaves without continuity: `g1 = max{0, phi}`, `g2` the indicator-like
//! function that is `0` where `phi <= 0` and `+inf` elsewhere, and
//! `g3 = phi` where `phi <= 0`, `+inf` elsewhere. `g3` is sublinear with an
//! empty subdifferential at the origin; the two witness sequences realize
//! its semicontinuity failures with exact rational gaps.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::oracle::{Dim, FnOracle, Point, SequenceWitness};
use crate::rat::{rat, Rat};
use crate::xreal::XReal;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// A finitely supported sequence: index (from 1) to nonzero rational value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseSeq {
    entries: BTreeMap<u32, Rat>,
}

impl SparseSeq {
    pub fn new() -> SparseSeq {
        SparseSeq::default()
    }

    /// The basis vector `e_n` (`n >= 1`).
    pub fn unit(n: u32) -> SparseSeq {
        assert!(n >= 1, "indices start at 1");
        let mut entries = BTreeMap::new();
        entries.insert(n, Rat::ONE);
        SparseSeq { entries }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, Rat)>) -> SparseSeq {
        let mut s = SparseSeq::new();
        for (n, v) in pairs {
            s.set(n, v);
        }
        s
    }

    pub fn get(&self, n: u32) -> Rat {
        self.entries.get(&n).cloned().unwrap_or(Rat::ZERO)
    }

    /// Insert or remove (zero values are never stored).
    pub fn set(&mut self, n: u32, v: Rat) {
        assert!(n >= 1, "indices start at 1");
        if v.is_zero() {
            self.entries.remove(&n);
        } else {
            self.entries.insert(n, v);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = (u32, &Rat)> + '_ {
        self.entries.iter().map(|(n, v)| (*n, v))
    }

    pub fn max_support(&self) -> Option<u32> {
        self.entries.keys().next_back().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for SparseSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, v) in &self.entries {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({v})e_{n}")?;
        }
        Ok(())
    }
}

impl Point for SparseSeq {
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, v) in &other.entries {
            let sum = &out.get(*n) + v;
            out.set(*n, sum);
        }
        out
    }
    fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, v) in &other.entries {
            let diff = &out.get(*n) - v;
            out.set(*n, diff);
        }
        out
    }
    fn scale(&self, t: &Rat) -> Self {
        if t.is_zero() {
            return SparseSeq::new();
        }
        SparseSeq {
            entries: self
                .entries
                .iter()
                .map(|(n, v)| (*n, v * t))
                .collect(),
        }
    }
    fn dot(&self, other: &Self) -> Rat {
        self.entries
            .iter()
            .filter_map(|(n, v)| other.entries.get(n).map(|w| v * w))
            .sum()
    }
    fn render(&self) -> String {
        format!("{self}")
    }
}

/// `phi(x) = Σ n·x_n`: exactly linear, unbounded on the unit sphere.
pub fn phi(x: &SparseSeq) -> Rat {
    x.support()
        .map(|(n, v)| &Rat::from_int(n as i64) * v)
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathologyFn {
    G1,
    G2,
    G3,
}

/// Closed-form evaluation of the three pathology functions.
pub fn eval_pathology(f: PathologyFn, x: &SparseSeq) -> XReal {
    let p = phi(x);
    match f {
        PathologyFn::G1 => XReal::Finite(if p.is_positive() { p } else { Rat::ZERO }),
        PathologyFn::G2 => {
            if p.is_positive() {
                XReal::PosInf
            } else {
                XReal::Finite(Rat::ZERO)
            }
        }
        PathologyFn::G3 => {
            if p.is_positive() {
                XReal::PosInf
            } else {
                XReal::Finite(p)
            }
        }
    }
}

/// Witness against upper semicontinuity of `g3` on its domain at `x` with
/// `phi(x) < 0`: the terms `x - (phi(x)/n) e_n` satisfy `phi = 0`, stay in
/// the domain, converge to `x` in norm, and keep `g3 = 0 > phi(x)`.
pub fn usc_witness(x: &SparseSeq) -> Result<SequenceWitness<'static, SparseSeq>, Error> {
    let p = phi(x);
    if !p.is_negative() {
        return Err(Error::RequiresNegativePhi);
    }
    let base = x.clone();
    Ok(Box::new(move |n: u32| {
        let n = n.max(1);
        let coeff = &p / &Rat::from_int(n as i64);
        let mut term = base.clone();
        term.set(n, &term.get(n) - &coeff);
        term
    }))
}

/// Witness against lower semicontinuity of `g3` on its domain at `x` with
/// `phi(x) <= 0`: the terms `x - (1/n) e_n` satisfy `phi = phi(x) - 1`,
/// converge to `x`, and keep `g3 = phi(x) - 1 < g3(x)`.
pub fn lsc_witness(x: &SparseSeq) -> Result<SequenceWitness<'static, SparseSeq>, Error> {
    let p = phi(x);
    if p.is_positive() {
        return Err(Error::RequiresNonpositivePhi);
    }
    let base = x.clone();
    Ok(Box::new(move |n: u32| {
        let n = n.max(1);
        let mut term = base.clone();
        term.set(n, &term.get(n) - &rat(1, n as i64));
        term
    }))
}

/// Random finitely supported point in the domain `[phi <= 0]`: random small
/// support, then one extra coordinate adjusted so that `phi = -1`.
fn sample_domain_point(rng: &mut StdRng) -> SparseSeq {
    let mut x = SparseSeq::new();
    let k = rng.gen_range(0..4u32);
    for _ in 0..k {
        let n = rng.gen_range(1..=12u32);
        x.set(n, rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)));
    }
    let m = x.max_support().unwrap_or(0) + rng.gen_range(1..=3u32);
    let residue = &phi(&x) + &Rat::ONE;
    x.set(m, &x.get(m) - &(&residue / &Rat::from_int(m as i64)));
    debug_assert_eq!(phi(&x), rat(-1, 1));
    x
}

/// Oracle over a pathology function. Exact; the domain sampler stays in
/// `[phi <= 0]`, where all three functions are finite.
pub struct PathologyOracle {
    pub kind: PathologyFn,
}

impl FnOracle for PathologyOracle {
    type P = SparseSeq;

    fn dim(&self) -> Dim {
        Dim::Sequence
    }
    fn eval(&self, x: &SparseSeq) -> Result<XReal, Error> {
        Ok(eval_pathology(self.kind, x))
    }
    fn sample_domain(&self, count: usize, seed: u64) -> Vec<SparseSeq> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..count).map(|_| sample_domain_point(&mut rng)).collect()
    }
    fn exact(&self) -> bool {
        true
    }
}

/// Designed points refuting `xstar ∈ ∂g3(0)` for a finitely supported
/// `xstar`: at `x = -e_k - t e_m` with `m` beyond the support of `xstar` and
/// `t` large enough, the pairing `<x, xstar> = -xstar_k` exceeds
/// `g3(x) = -k - t m`. No bounded finitely-supported pairing can minorize
/// the unbounded functional `phi`.
pub fn refutation_points(xstar: &SparseSeq) -> Vec<SparseSeq> {
    let m = xstar.max_support().unwrap_or(0) + 1;
    let mut points = Vec::new();
    for k in 1..=3u32 {
        let t = {
            let c = xstar.get(k);
            &(if c.is_positive() { c } else { Rat::ZERO }) + &Rat::ONE
        };
        let mut x = SparseSeq::new();
        x.set(k, rat(-1, 1));
        x.set(m, -&t);
        points.push(x);
    }
    points
}

/// `g3` oracle whose sampler leads with the designed refutation points for a
/// fixed candidate subgradient, then falls back to generic domain samples.
pub struct G3RefutationOracle {
    pub xstar: SparseSeq,
}

impl FnOracle for G3RefutationOracle {
    type P = SparseSeq;

    fn dim(&self) -> Dim {
        Dim::Sequence
    }
    fn eval(&self, x: &SparseSeq) -> Result<XReal, Error> {
        Ok(eval_pathology(PathologyFn::G3, x))
    }
    fn sample_domain(&self, count: usize, seed: u64) -> Vec<SparseSeq> {
        let mut pts = refutation_points(&self.xstar);
        if count > pts.len() {
            let mut rng = StdRng::seed_from_u64(seed);
            while pts.len() < count {
                pts.push(sample_domain_point(&mut rng));
            }
        }
        pts.truncate(count.max(1));
        pts
    }
    fn exact(&self) -> bool {
        true
    }
}
