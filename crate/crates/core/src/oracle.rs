//! Function oracles and property checkers for sublinear analysis.
//!
//! An oracle wraps an extended-real-valued function together with a sampler
//! of finite-valued domain points. The checkers probe positive homogeneity,
//! subadditivity, lower-semicontinuity along a sequence, membership of a
//! candidate in the subdifferential at the origin, and the transfer of a
//! local Lipschitz bound to a scaled ball. Exact oracles are checked with
//! zero tolerance; floating-backed oracles get a `1e-9` slack.

use crate::error::Error;
use crate::rat::{rat, Rat};
use crate::xreal::XReal;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Default horizon for liminf estimation along a sequence.
pub const DEFAULT_HORIZON: u32 = 64;

/// A witness sequence: index `n >= 1` to a domain point.
pub type SequenceWitness<'a, P> = Box<dyn Fn(u32) -> P + 'a>;

/// Slack applied when an oracle is not exact.
pub fn float_slack() -> Rat {
    rat(1, 1_000_000_000)
}

/// Ambient space of an oracle's domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dim {
    Finite(usize),
    Sequence,
}

/// A point in an oracle's domain: exact rational linear structure plus an
/// inner product. `norm` is exact whenever the squared norm is a perfect
/// rational square, and otherwise embeds the floating square root exactly as
/// a rational, so downstream arithmetic stays exact and the embedding error
/// is far below the float slack.
pub trait Point: Clone {
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn scale(&self, t: &Rat) -> Self;
    fn dot(&self, other: &Self) -> Rat;
    fn render(&self) -> String;

    fn norm(&self) -> Rat {
        embedded_sqrt(&self.dot(self))
    }
}

/// Exact square root when available, otherwise the exact rational value of
/// the correctly rounded floating square root.
pub fn embedded_sqrt(sq: &Rat) -> Rat {
    sq.sqrt_exact()
        .or_else(|| Rat::from_f64(sq.approx().sqrt()))
        .unwrap_or(Rat::ZERO)
}

impl Point for Rat {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn scale(&self, t: &Rat) -> Self {
        self * t
    }
    fn dot(&self, other: &Self) -> Rat {
        self * other
    }
    fn render(&self) -> String {
        format!("{self}")
    }
    fn norm(&self) -> Rat {
        self.abs()
    }
}

impl Point for Vec<Rat> {
    fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        self.iter().zip(other).map(|(a, b)| a + b).collect()
    }
    fn minus(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        self.iter().zip(other).map(|(a, b)| a - b).collect()
    }
    fn scale(&self, t: &Rat) -> Self {
        self.iter().map(|a| a * t).collect()
    }
    fn dot(&self, other: &Self) -> Rat {
        assert_eq!(self.len(), other.len());
        self.iter().zip(other).map(|(a, b)| a * b).sum()
    }
    fn render(&self) -> String {
        let parts: Vec<String> = self.iter().map(|v| format!("{v}")).collect();
        format!("({})", parts.join(", "))
    }
}

/// An extended-real-valued function with a domain sampler.
///
/// `eval` must be deterministic. `sample_domain` must return points where the
/// function is finite. `sample_near` returns points within the given radius
/// of a center (up to the norm embedding error); the default routes domain
/// samples through a radial contraction, and scalar oracles override it with
/// a direct interval sampler.
pub trait FnOracle {
    type P: Point;

    fn dim(&self) -> Dim;
    fn eval(&self, x: &Self::P) -> Result<XReal, Error>;
    fn sample_domain(&self, count: usize, seed: u64) -> Vec<Self::P>;

    fn sample_near(&self, center: &Self::P, radius: &Rat, count: usize, seed: u64) -> Vec<Self::P> {
        self.sample_domain(count, seed)
            .into_iter()
            .map(|p| {
                let shrink = radius / &(&Rat::ONE + &p.norm());
                center.plus(&p.scale(&shrink))
            })
            .collect()
    }

    /// Exact oracles are compared with zero tolerance.
    fn exact(&self) -> bool {
        false
    }
}

fn le_with_tol(lhs: &XReal, rhs: &XReal, tol: &Rat) -> bool {
    match (lhs, rhs) {
        (XReal::NegInf, _) | (_, XReal::PosInf) => true,
        (XReal::PosInf, _) | (_, XReal::NegInf) => false,
        (XReal::Finite(l), XReal::Finite(r)) => *l <= r + tol,
    }
}

fn close_with_tol(a: &XReal, b: &XReal, tol: &Rat) -> bool {
    le_with_tol(a, b, tol) && le_with_tol(b, a, tol)
}

#[derive(Clone, Debug)]
pub struct HomogeneityWitness {
    pub x: String,
    pub t: Rat,
    pub f_x: XReal,
    pub f_tx: XReal,
}

#[derive(Clone, Debug)]
pub struct HomogeneityReport {
    pub pass: bool,
    pub witnesses: Vec<HomogeneityWitness>,
}

/// Check `f(t x) = t f(x)` over sampled points and the given positive scales.
pub fn check_positive_homogeneity<O: FnOracle>(
    f: &O,
    samples: usize,
    scales: &[Rat],
    tol: &Rat,
    seed: u64,
) -> Result<HomogeneityReport, Error> {
    if samples == 0 {
        return Err(Error::Precondition("samples-must-be-positive"));
    }
    if scales.iter().any(|t| !t.is_positive()) {
        return Err(Error::Precondition("scales-must-be-positive"));
    }
    let mut witnesses = Vec::new();
    for x in f.sample_domain(samples, seed) {
        let fx = f.eval(&x).map_err(|e| e.at_point(x.render()))?;
        for t in scales {
            let tx = x.scale(t);
            let ftx = f.eval(&tx).map_err(|e| e.at_point(tx.render()))?;
            let expect = fx.clone().scale_pos(t);
            if !close_with_tol(&ftx, &expect, tol) && witnesses.len() < 8 {
                witnesses.push(HomogeneityWitness {
                    x: x.render(),
                    t: t.clone(),
                    f_x: fx.clone(),
                    f_tx: ftx,
                });
            }
        }
    }
    Ok(HomogeneityReport {
        pass: witnesses.is_empty(),
        witnesses,
    })
}

#[derive(Clone, Debug)]
pub struct SubadditivityWitness {
    pub x: String,
    pub y: String,
    pub f_x: XReal,
    pub f_y: XReal,
    pub f_sum: XReal,
}

#[derive(Clone, Debug)]
pub struct SubadditivityReport {
    pub pass: bool,
    pub witnesses: Vec<SubadditivityWitness>,
}

/// Check `f(x + y) <= f(x) + f(y)` over sampled pairs.
pub fn check_subadditivity<O: FnOracle>(
    f: &O,
    pairs: usize,
    tol: &Rat,
    seed: u64,
) -> Result<SubadditivityReport, Error> {
    if pairs == 0 {
        return Err(Error::Precondition("pairs-must-be-positive"));
    }
    let pts = f.sample_domain(2 * pairs, seed);
    let mut witnesses = Vec::new();
    for pair in pts.chunks_exact(2) {
        let (x, y) = (&pair[0], &pair[1]);
        let fx = f.eval(x).map_err(|e| e.at_point(x.render()))?;
        let fy = f.eval(y).map_err(|e| e.at_point(y.render()))?;
        let sum = x.plus(y);
        let fsum = f.eval(&sum).map_err(|e| e.at_point(sum.render()))?;
        let bound = fx.checked_add(&fy)?;
        if !le_with_tol(&fsum, &bound, tol) && witnesses.len() < 8 {
            witnesses.push(SubadditivityWitness {
                x: x.render(),
                y: y.render(),
                f_x: fx,
                f_y: fy,
                f_sum: fsum,
            });
        }
    }
    Ok(SubadditivityReport {
        pass: witnesses.is_empty(),
        witnesses,
    })
}

#[derive(Clone, Debug)]
pub struct LiminfReport {
    pub liminf_estimate: XReal,
    pub f_at_base: XReal,
    pub lsc_violated: bool,
}

/// Estimate `liminf f(x_n)` along a sequence by the minimum over the tail
/// window `n in [ceil(horizon/2), horizon]`, and compare against `f(base)`.
/// Lower semicontinuity is flagged as violated when the estimate falls below
/// `f(base)` (strictly, with the float slack when the oracle is not exact).
pub fn liminf_along<O: FnOracle>(
    f: &O,
    base: &O::P,
    seq: impl Fn(u32) -> O::P,
    horizon: u32,
) -> Result<LiminfReport, Error> {
    if horizon == 0 {
        return Err(Error::Precondition("horizon-must-be-positive"));
    }
    let f_at_base = f.eval(base).map_err(|e| e.at_point(base.render()))?;
    let lo = horizon.div_ceil(2);
    let mut estimate = XReal::PosInf;
    for n in lo..=horizon {
        let v = f
            .eval(&seq(n))
            .map_err(|e| e.at_point(format!("seq({n})")))?;
        if v < estimate {
            estimate = v;
        }
    }
    let margin = if f.exact() { Rat::ZERO } else { float_slack() };
    let lsc_violated = match (&estimate, &f_at_base) {
        (XReal::Finite(e), XReal::Finite(b)) => *e < b - &margin,
        _ => estimate < f_at_base,
    };
    Ok(LiminfReport {
        liminf_estimate: estimate,
        f_at_base,
        lsc_violated,
    })
}

#[derive(Clone, Debug)]
pub struct SubdiffWitness {
    pub x: String,
    pub g_x: XReal,
    pub inner: Rat,
}

#[derive(Clone, Debug)]
pub struct SubdiffReport {
    pub accepted: bool,
    pub counterexample: Option<SubdiffWitness>,
}

/// Test `<x, xstar> <= g(x)` over sampled points: a necessary-and-sampled
/// criterion for `xstar` to lie in the subdifferential of `g` at the origin.
pub fn subdiff_zero_membership<O: FnOracle>(
    g: &O,
    xstar: &O::P,
    samples: usize,
    seed: u64,
) -> Result<SubdiffReport, Error> {
    if samples == 0 {
        return Err(Error::Precondition("samples-must-be-positive"));
    }
    let tol = if g.exact() { Rat::ZERO } else { float_slack() };
    for x in g.sample_domain(samples, seed) {
        let gx = g.eval(&x).map_err(|e| e.at_point(x.render()))?;
        let inner = x.dot(xstar);
        if !le_with_tol(&XReal::Finite(inner.clone()), &gx, &tol) {
            return Ok(SubdiffReport {
                accepted: false,
                counterexample: Some(SubdiffWitness {
                    x: x.render(),
                    g_x: gx,
                    inner,
                }),
            });
        }
    }
    Ok(SubdiffReport {
        accepted: true,
        counterexample: None,
    })
}

#[derive(Clone, Debug)]
pub struct TransferWitness {
    pub u: String,
    pub v: String,
    pub g_u: XReal,
    pub g_v: XReal,
    pub bound: Rat,
}

#[derive(Clone, Debug)]
pub struct TransferReport {
    pub pass: bool,
    pub witnesses: Vec<TransferWitness>,
}

/// Verify a Lipschitz bound `|g(u) - g(v)| <= L ||u - v||` on sampled pairs
/// in the ball `B(x, delta)`, then test whether the same constant transfers
/// to `B(gamma x, gamma delta)`. A failure of the hypothesis ball is an
/// error (`hypothesis-failed` with the witness pair); a failure of the
/// transfer ball is a negative result with witnesses.
pub fn check_lipschitz_transfer<O: FnOracle>(
    g: &O,
    x: &O::P,
    delta: &Rat,
    l: &Rat,
    gamma: &Rat,
    pairs: usize,
    seed: u64,
) -> Result<TransferReport, Error> {
    if !delta.is_positive() || !gamma.is_positive() || l.is_negative() {
        return Err(Error::Precondition("transfer-parameters-must-be-positive"));
    }
    let tol = if g.exact() { Rat::ZERO } else { float_slack() };
    let lip_gap = |u: &O::P, v: &O::P| -> Result<Option<(XReal, XReal, Rat)>, Error> {
        let gu = g.eval(u).map_err(|e| e.at_point(u.render()))?;
        let gv = g.eval(v).map_err(|e| e.at_point(v.render()))?;
        let bound = &(l * &u.minus(v).norm()) + &tol;
        let ok = match (&gu, &gv) {
            (XReal::Finite(a), XReal::Finite(b)) => (a - b).abs() <= bound,
            (a, b) => a == b,
        };
        Ok(if ok { None } else { Some((gu, gv, bound)) })
    };

    let base_pts = g.sample_near(x, delta, 2 * pairs, seed);
    for pair in base_pts.chunks_exact(2) {
        if let Some((gu, gv, bound)) = lip_gap(&pair[0], &pair[1])? {
            return Err(Error::HypothesisFailed(format!(
                "|g(u) - g(v)| exceeds {bound} with g(u) = {gu}, g(v) = {gv} at u = {}, v = {}",
                pair[0].render(),
                pair[1].render()
            )));
        }
    }

    let center = x.scale(gamma);
    let radius = gamma * delta;
    let far_pts = g.sample_near(&center, &radius, 2 * pairs, seed.wrapping_add(1));
    let mut witnesses = Vec::new();
    for pair in far_pts.chunks_exact(2) {
        if let Some((gu, gv, bound)) = lip_gap(&pair[0], &pair[1])? {
            if witnesses.len() < 8 {
                witnesses.push(TransferWitness {
                    u: pair[0].render(),
                    v: pair[1].render(),
                    g_u: gu,
                    g_v: gv,
                    bound,
                });
            }
        }
    }
    Ok(TransferReport {
        pass: witnesses.is_empty(),
        witnesses,
    })
}

/// Uniform dyadic rational in `[lo, hi]` with 12 fractional bits.
pub fn dyadic_in(rng: &mut StdRng, lo: &Rat, hi: &Rat) -> Rat {
    let k: i64 = rng.gen_range(0..=4096);
    lo + &(&(hi - lo) * &rat(k, 4096))
}

/// Dyadic sample of a box `[-span, span]^dim`.
pub fn dyadic_box(rng: &mut StdRng, dim: usize, span: &Rat) -> Vec<Rat> {
    let lo = -span;
    (0..dim).map(|_| dyadic_in(rng, &lo, span)).collect()
}

/// Euclidean norm on a finite-dimensional space (floating-backed).
pub struct NormOracle {
    pub dim: usize,
}

impl FnOracle for NormOracle {
    type P = Vec<Rat>;

    fn dim(&self) -> Dim {
        Dim::Finite(self.dim)
    }
    fn eval(&self, x: &Vec<Rat>) -> Result<XReal, Error> {
        Ok(XReal::Finite(x.norm()))
    }
    fn sample_domain(&self, count: usize, seed: u64) -> Vec<Vec<Rat>> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..count)
            .map(|_| dyadic_box(&mut rng, self.dim, &rat(2, 1)))
            .collect()
    }
}

/// Squared Euclidean norm: exact, convex, but not positively homogeneous.
pub struct SqNormOracle {
    pub dim: usize,
}

impl FnOracle for SqNormOracle {
    type P = Vec<Rat>;

    fn dim(&self) -> Dim {
        Dim::Finite(self.dim)
    }
    fn eval(&self, x: &Vec<Rat>) -> Result<XReal, Error> {
        Ok(XReal::Finite(x.dot(x)))
    }
    fn sample_domain(&self, count: usize, seed: u64) -> Vec<Vec<Rat>> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..count)
            .map(|_| dyadic_box(&mut rng, self.dim, &rat(2, 1)))
            .collect()
    }
    fn exact(&self) -> bool {
        true
    }
}

/// `x -> max(0, slope * x)` on the line: sublinear, exact.
pub struct ScalarMaxLinear {
    pub slope: Rat,
}

impl FnOracle for ScalarMaxLinear {
    type P = Rat;

    fn dim(&self) -> Dim {
        Dim::Finite(1)
    }
    fn eval(&self, x: &Rat) -> Result<XReal, Error> {
        let v = &self.slope * x;
        Ok(XReal::Finite(if v.is_positive() { v } else { Rat::ZERO }))
    }
    fn sample_domain(&self, count: usize, seed: u64) -> Vec<Rat> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..count)
            .map(|_| dyadic_in(&mut rng, &rat(-2, 1), &rat(2, 1)))
            .collect()
    }
    fn sample_near(&self, center: &Rat, radius: &Rat, count: usize, seed: u64) -> Vec<Rat> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..count)
            .map(|_| dyadic_in(&mut rng, &(center - radius), &(center + radius)))
            .collect()
    }
    fn exact(&self) -> bool {
        true
    }
}

/// `x -> x^2` on the line: exact, locally but not globally Lipschitz.
pub struct ScalarSquare;

impl FnOracle for ScalarSquare {
    type P = Rat;

    fn dim(&self) -> Dim {
        Dim::Finite(1)
    }
    fn eval(&self, x: &Rat) -> Result<XReal, Error> {
        Ok(XReal::Finite(x * x))
    }
    fn sample_domain(&self, count: usize, seed: u64) -> Vec<Rat> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..count)
            .map(|_| dyadic_in(&mut rng, &rat(-2, 1), &rat(2, 1)))
            .collect()
    }
    fn sample_near(&self, center: &Rat, radius: &Rat, count: usize, seed: u64) -> Vec<Rat> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..count)
            .map(|_| dyadic_in(&mut rng, &(center - radius), &(center + radius)))
            .collect()
    }
    fn exact(&self) -> bool {
        true
    }
}

/// `x -> -|x|` on the half line: the sampler stays in `[0, 2]`, where
/// subadditivity holds with equality, so the overall check passes even
/// though the function is not subadditive across sign changes.
pub struct ScalarNegAbs;

impl FnOracle for ScalarNegAbs {
    type P = Rat;

    fn dim(&self) -> Dim {
        Dim::Finite(1)
    }
    fn eval(&self, x: &Rat) -> Result<XReal, Error> {
        Ok(XReal::Finite(-x.abs()))
    }
    fn sample_domain(&self, count: usize, seed: u64) -> Vec<Rat> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..count)
            .map(|_| dyadic_in(&mut rng, &Rat::ZERO, &rat(2, 1)))
            .collect()
    }
    fn exact(&self) -> bool {
        true
    }
}
