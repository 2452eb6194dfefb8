//! Command-line front end for the duality-gap laboratory: each named
//! scenario drives one counterexample module end to end, collecting numeric
//! results next to the named pass/fail checks that certify them, and renders
//! the whole report deterministically as JSON or CSV.
//!
//! The report contract is strict so the output can be diffed: rationals
//! print as exact `p/q` strings, reals carry 12 significant digits, JSON
//! keys are sorted, CSV rows follow a fixed order, and equal configurations
//! produce byte-identical text. The process exit status is the summary: `0`
//! when every check passed, `1` when at least one failed, `2` for a usage
//! error (which names the offending parameter).

use gaplab_core::hilbert::{
    self, lsc_failure_witness, recover_primal, truncated_dual_optimum, truncated_lp, HilbertModel,
    OddVector,
};
use gaplab_core::kretschmer::{
    analytic_values, discontinuity_scenario, discretize_dual, solve_discretized,
    unboundedness_witness, GridFn, KretschmerProblem, Mode, RhsSpec,
};
use gaplab_core::lp::{solve, Check};
use gaplab_core::oracle::{
    check_positive_homogeneity, check_subadditivity, liminf_along, subdiff_zero_membership, Dim,
    FnOracle, NormOracle, Point, SqNormOracle,
};
use gaplab_core::seq::{
    eval_pathology, lsc_witness, phi, usc_witness, G3RefutationOracle, PathologyFn,
    PathologyOracle, SparseSeq,
};
use gaplab_core::soc::{
    biconjugate_value, boundary_approach_witness, brute_value, BruteBox, SocPoint, SocValueOracle,
};
use gaplab_core::{rat, Error, Rat, XReal};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Map, Value};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    SublinearChecks,
    Pathology,
    Soc,
    Hilbert,
    Kretschmer,
    KretschmerGap,
    Unbounded,
    Discontinuity,
}

impl Scenario {
    pub fn parse(name: &str) -> Result<Scenario, UsageError> {
        match name {
            "sublinear-checks" => Ok(Scenario::SublinearChecks),
            "pathology" => Ok(Scenario::Pathology),
            "soc" => Ok(Scenario::Soc),
            "hilbert" => Ok(Scenario::Hilbert),
            "kretschmer" => Ok(Scenario::Kretschmer),
            "kretschmer-gap" => Ok(Scenario::KretschmerGap),
            "unbounded" => Ok(Scenario::Unbounded),
            "discontinuity" => Ok(Scenario::Discontinuity),
            other => Err(UsageError(format!(
                "scenario: unknown name '{other}' (expected one of sublinear-checks, pathology, \
                 soc, hilbert, kretschmer, kretschmer-gap, unbounded, discontinuity)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scenario::SublinearChecks => "sublinear-checks",
            Scenario::Pathology => "pathology",
            Scenario::Soc => "soc",
            Scenario::Hilbert => "hilbert",
            Scenario::Kretschmer => "kretschmer",
            Scenario::KretschmerGap => "kretschmer-gap",
            Scenario::Unbounded => "unbounded",
            Scenario::Discontinuity => "discontinuity",
        }
    }

    /// Scenario-specific parameters this scenario consumes; `tol`, `seed`,
    /// and `format` are always accepted.
    fn allowed(self) -> &'static [&'static str] {
        match self {
            Scenario::SublinearChecks | Scenario::Pathology => &[],
            Scenario::Soc => &["cells"],
            Scenario::Hilbert => &["trunc", "witness-m"],
            Scenario::Kretschmer => &["alpha", "delta", "cells", "mode", "b-file"],
            Scenario::KretschmerGap => &["alpha", "delta", "gamma", "cells"],
            Scenario::Unbounded => &["alpha", "eta0", "eta1", "levels", "eps", "cells"],
            Scenario::Discontinuity => &["alpha", "delta", "gamma", "cells"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn parse(name: &str) -> Result<Format, UsageError> {
        match name {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(UsageError(format!(
                "format: unknown value '{other}' (expected json or csv)"
            ))),
        }
    }
}

pub fn parse_mode(name: &str) -> Result<Mode, UsageError> {
    match name {
        "exact" => Ok(Mode::Exact),
        "sampled" => Ok(Mode::Sampled),
        other => Err(UsageError(format!(
            "mode: unknown value '{other}' (expected exact or sampled)"
        ))),
    }
}

/// A rejected configuration; the message names the offending field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

/// Parsed command line: scenario plus every optional parameter as given.
/// Scenario runners resolve defaults, reject parameters they do not consume,
/// and record the resolved values in the report.
#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub alpha: Option<Rat>,
    pub delta: Option<Rat>,
    pub gamma: Option<Vec<Rat>>,
    pub cells: Option<usize>,
    pub mode: Option<Mode>,
    pub levels: Option<u32>,
    pub eps: Option<Rat>,
    pub eta0: Option<Rat>,
    pub eta1: Option<Rat>,
    pub trunc: Option<u32>,
    pub witness_m: Option<u32>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub format: Format,
    pub b_file: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario) -> ScenarioConfig {
        ScenarioConfig {
            scenario,
            alpha: None,
            delta: None,
            gamma: None,
            cells: None,
            mode: None,
            levels: None,
            eps: None,
            eta0: None,
            eta1: None,
            trunc: None,
            witness_m: None,
            tol: None,
            seed: None,
            format: Format::Json,
            b_file: None,
        }
    }
}

/// Assembled scenario output: resolved parameters, numeric results, and
/// named checks, all in a fixed deterministic order.
#[derive(Clone, Debug)]
pub struct Report {
    pub scenario: &'static str,
    pub params: Vec<(String, String)>,
    pub results: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(scenario: Scenario) -> Report {
        Report {
            scenario: scenario.name(),
            params: Vec::new(),
            results: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn param(&mut self, name: &str, value: impl Into<String>) {
        self.params.push((name.to_string(), value.into()));
    }

    fn result(&mut self, name: &str, value: impl Into<String>) {
        self.results.push((name.to_string(), value.into()));
    }

    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, pass, detail));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Exact rational as `p/q`.
pub fn rat_str(r: &Rat) -> String {
    format!("{r}")
}

/// Real with 12 significant digits.
pub fn real_str(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn xreal_str(v: &XReal) -> String {
    match v {
        XReal::Finite(r) => rat_str(r),
        XReal::PosInf => "+inf".to_string(),
        XReal::NegInf => "-inf".to_string(),
    }
}

fn finite(v: &XReal) -> Option<&Rat> {
    match v {
        XReal::Finite(r) => Some(r),
        _ => None,
    }
}

pub fn run(cfg: &ScenarioConfig) -> Result<Report, UsageError> {
    reject_unknown(cfg)?;
    match cfg.scenario {
        Scenario::SublinearChecks => sublinear_checks(cfg),
        Scenario::Pathology => pathology(cfg),
        Scenario::Soc => soc(cfg),
        Scenario::Hilbert => hilbert_scenario(cfg),
        Scenario::Kretschmer => kretschmer(cfg),
        Scenario::KretschmerGap => kretschmer_gap(cfg),
        Scenario::Unbounded => unbounded(cfg),
        Scenario::Discontinuity => discontinuity(cfg),
    }
}

fn reject_unknown(cfg: &ScenarioConfig) -> Result<(), UsageError> {
    let given: [(&str, bool); 12] = [
        ("alpha", cfg.alpha.is_some()),
        ("delta", cfg.delta.is_some()),
        ("gamma", cfg.gamma.is_some()),
        ("cells", cfg.cells.is_some()),
        ("mode", cfg.mode.is_some()),
        ("levels", cfg.levels.is_some()),
        ("eps", cfg.eps.is_some()),
        ("eta0", cfg.eta0.is_some()),
        ("eta1", cfg.eta1.is_some()),
        ("trunc", cfg.trunc.is_some()),
        ("witness-m", cfg.witness_m.is_some()),
        ("b-file", cfg.b_file.is_some()),
    ];
    let allowed = cfg.scenario.allowed();
    for (name, set) in given {
        if set && !allowed.contains(&name) {
            return Err(UsageError(format!(
                "{name}: parameter does not apply to scenario '{}'",
                cfg.scenario.name()
            )));
        }
    }
    Ok(())
}

fn tol_param(cfg: &ScenarioConfig, default: f64) -> Result<f64, UsageError> {
    let tol = cfg.tol.unwrap_or(default);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(UsageError(format!(
            "tol: must be a finite nonnegative real, got {tol}"
        )));
    }
    Ok(tol)
}

/// Euclidean norm whose sampler leads with one designed point.
struct NormWithDesignedPoint {
    inner: NormOracle,
    designed: Vec<Rat>,
}

impl FnOracle for NormWithDesignedPoint {
    type P = Vec<Rat>;

    fn dim(&self) -> Dim {
        self.inner.dim()
    }
    fn eval(&self, x: &Vec<Rat>) -> Result<XReal, Error> {
        self.inner.eval(x)
    }
    fn sample_domain(&self, count: usize, seed: u64) -> Vec<Vec<Rat>> {
        let mut pts = vec![self.designed.clone()];
        pts.extend(self.inner.sample_domain(count.saturating_sub(1), seed));
        pts
    }
}

fn sublinear_checks(cfg: &ScenarioConfig) -> Result<Report, UsageError> {
    let tol = tol_param(cfg, 1e-9)?;
    let seed = cfg.seed.unwrap_or(7);
    let mut report = Report::new(cfg.scenario);
    report.param("samples", "50");
    report.param("seed", seed.to_string());
    report.param("tol", real_str(tol));
    let tol_rat = Rat::from_f64(tol).expect("finite tolerance");
    let fail = |e: Error| UsageError(format!("seed: checker refused to run ({e})"));

    // The plane norm is positively homogeneous within float slack.
    let norm2 = NormOracle { dim: 2 };
    let hom = check_positive_homogeneity(&norm2, 50, &[rat(1, 2), rat(2, 1)], &tol_rat, seed)
        .map_err(fail)?;
    report.check(
        "norm-homogeneity-passes",
        hom.pass,
        format!("50 samples, scales 1/2 and 2/1, {} witnesses", hom.witnesses.len()),
    );

    // Triangle inequality in three dimensions.
    let norm3 = NormOracle { dim: 3 };
    let sub = check_subadditivity(&norm3, 50, &tol_rat, seed).map_err(fail)?;
    report.check(
        "norm-subadditivity-passes",
        sub.pass,
        format!("50 pairs, {} witnesses", sub.witnesses.len()),
    );

    // Negative control: the squared norm scales quadratically and must be
    // caught even at this tolerance.
    let sq = SqNormOracle { dim: 2 };
    let sq_hom =
        check_positive_homogeneity(&sq, 50, &[rat(2, 1)], &tol_rat, seed).map_err(fail)?;
    report.check(
        "squared-norm-homogeneity-rejected",
        !sq_hom.pass,
        "f(2x) = 4 f(x) violates the scale test".to_string(),
    );

    // A vanishing sequence never certifies a lower-semicontinuity failure
    // of the norm; the tail-window infimum at horizon 10 is 1/10.
    let base = vec![Rat::ZERO, Rat::ZERO];
    let lim = liminf_along(&norm2, &base, |n| vec![rat(1, n.max(1) as i64), Rat::ZERO], 10)
        .map_err(fail)?;
    report.result("liminf-estimate", xreal_str(&lim.liminf_estimate));
    report.result("value-at-base", xreal_str(&lim.f_at_base));
    report.check(
        "vanishing-sequence-not-flagged",
        !lim.lsc_violated,
        format!(
            "window infimum {} vs {} at the base",
            xreal_str(&lim.liminf_estimate),
            xreal_str(&lim.f_at_base)
        ),
    );

    // Subdifferential of the norm at the origin: interior point accepted,
    // a vector of norm > 1 rejected with a designed counterexample.
    let xstar = vec![rat(3, 5), rat(4, 5)];
    let accept = subdiff_zero_membership(&norm2, &xstar, 100, seed).map_err(fail)?;
    report.check(
        "subdifferential-accepts-interior-point",
        accept.accepted,
        "(3/5, 4/5) minorizes the norm on 100 samples".to_string(),
    );
    let designed = NormWithDesignedPoint {
        inner: NormOracle { dim: 2 },
        designed: vec![Rat::ONE, Rat::ONE],
    };
    let reject =
        subdiff_zero_membership(&designed, &vec![Rat::ONE, Rat::ONE], 100, seed).map_err(fail)?;
    let detail = match &reject.counterexample {
        Some(w) => format!("counterexample {} with pairing {}", w.x, rat_str(&w.inner)),
        None => "no counterexample produced".to_string(),
    };
    report.check(
        "subdifferential-rejects-long-vector",
        !reject.accepted && reject.counterexample.is_some(),
        detail,
    );

    Ok(report)
}

fn pathology(cfg: &ScenarioConfig) -> Result<Report, UsageError> {
    let seed = cfg.seed.unwrap_or(7);
    let mut report = Report::new(cfg.scenario);
    report.param("horizon", "32");
    report.param("seed", seed.to_string());
    let fail = |e: Error| UsageError(format!("seed: checker refused to run ({e})"));

    // Base point with phi(x) = -1: all three functions are finite there.
    let mut x = SparseSeq::new();
    x.set(1, rat(-1, 1));
    debug_assert_eq!(phi(&x), rat(-1, 1));
    report.result("g1-at-base", xreal_str(&eval_pathology(PathologyFn::G1, &x)));
    report.result("g2-at-base", xreal_str(&eval_pathology(PathologyFn::G2, &x)));
    report.result("g3-at-base", xreal_str(&eval_pathology(PathologyFn::G3, &x)));

    let g3 = PathologyOracle {
        kind: PathologyFn::G3,
    };

    // Upper-semicontinuity failure: the witness pushes phi to 0, so g3 jumps
    // up by exactly |phi(x)| while the points converge to x.
    let usc = usc_witness(&x).map_err(fail)?;
    let up = liminf_along(&g3, &x, |n| usc(n), 32).map_err(fail)?;
    report.result("usc-liminf", xreal_str(&up.liminf_estimate));
    report.result("usc-value", xreal_str(&up.f_at_base));
    let gap_up = up.liminf_estimate.checked_sub(&up.f_at_base).ok();
    report.check(
        "usc-gap-equals-abs-phi",
        gap_up == Some(XReal::Finite(Rat::ONE)),
        format!(
            "{} along the witness vs {} at the base",
            xreal_str(&up.liminf_estimate),
            xreal_str(&up.f_at_base)
        ),
    );
    report.check(
        "no-lower-violation-along-usc-witness",
        !up.lsc_violated,
        "the gap runs upward only".to_string(),
    );

    // Lower-semicontinuity failure: the witness drops phi by 1, so g3 sinks
    // to phi(x) - 1 while approaching x.
    let lsc = lsc_witness(&x).map_err(fail)?;
    let down = liminf_along(&g3, &x, |n| lsc(n), 32).map_err(fail)?;
    report.result("lsc-liminf", xreal_str(&down.liminf_estimate));
    report.result("lsc-value", xreal_str(&down.f_at_base));
    let gap_down = down.f_at_base.checked_sub(&down.liminf_estimate).ok();
    report.check(
        "lsc-violated-with-unit-gap",
        down.lsc_violated && gap_down == Some(XReal::Finite(Rat::ONE)),
        format!(
            "{} along the witness vs {} at the base",
            xreal_str(&down.liminf_estimate),
            xreal_str(&down.f_at_base)
        ),
    );

    // No finitely supported functional minorizes g3 at the origin — not
    // even zero: the designed refutation points defeat every candidate.
    let refute = G3RefutationOracle {
        xstar: SparseSeq::new(),
    };
    let membership =
        subdiff_zero_membership(&refute, &SparseSeq::new(), 20, seed).map_err(fail)?;
    let detail = match &membership.counterexample {
        Some(w) => format!("counterexample {} with g3 = {}", w.x, xreal_str(&w.g_x)),
        None => "no counterexample produced".to_string(),
    };
    report.check(
        "subdifferential-empty-at-origin",
        !membership.accepted,
        detail,
    );

    Ok(report)
}

fn soc(cfg: &ScenarioConfig) -> Result<Report, UsageError> {
    let cells = cfg.cells.unwrap_or(401);
    if cells < 2 {
        return Err(UsageError(format!(
            "cells: brute-force grid needs at least 2 nodes per axis, got {cells}"
        )));
    }
    let tol = tol_param(cfg, 0.05)?;
    let mut report = Report::new(cfg.scenario);
    report.param("cells", cells.to_string());
    report.param("tol", real_str(tol));
    report.param("y", "(5/1, 3/1, 0/1)");

    let y = SocPoint::new(rat(5, 1), rat(3, 1), Rat::ZERO);
    let closed = gaplab_core::soc::value(&y);
    let bicon = biconjugate_value(&y);
    report.result("value", xreal_str(&closed));
    report.result("biconjugate-value", xreal_str(&bicon));
    report.check(
        "closed-form-value",
        closed == XReal::Finite(rat(3, 1)),
        format!("value at (5, 3, 0) is {}", xreal_str(&closed)),
    );
    report.check(
        "biconjugate-vanishes",
        bicon == XReal::Finite(Rat::ZERO),
        format!("biconjugate at (5, 3, 0) is {}", xreal_str(&bicon)),
    );

    // Brute-force minimization over a fixed box that contains the optimum.
    let bx = BruteBox {
        x1lo: rat(-10, 1),
        x1hi: rat(10, 1),
        x2hi: rat(10, 1),
    };
    let brute = brute_value(&y, &bx, cells);
    report.result("brute-value", xreal_str(&brute));
    let brute_ok = match (&brute, &closed) {
        (XReal::Finite(b), XReal::Finite(c)) => (b - c).approx().abs() <= tol,
        (a, b) => a == b,
    };
    report.check(
        "brute-agrees-with-closed-form",
        brute_ok,
        format!(
            "grid {cells} on [-10, 10] x [0, 10]: {} vs {}",
            xreal_str(&brute),
            xreal_str(&closed)
        ),
    );

    // The boundary approach from y3 < 0 sinks the value to 0 while the
    // base point keeps value 3: lower semicontinuity fails on the face.
    let witness = boundary_approach_witness(&y);
    let lim = liminf_along(&SocValueOracle, &y.to_vec(), |n| witness(n), 20)
        .map_err(|e| UsageError(format!("cells: liminf probe failed ({e})")))?;
    report.result("liminf-estimate", xreal_str(&lim.liminf_estimate));
    report.check(
        "lsc-violated-along-boundary",
        lim.lsc_violated
            && lim.liminf_estimate == XReal::Finite(Rat::ZERO)
            && lim.f_at_base == XReal::Finite(rat(3, 1)),
        format!(
            "{} along the approach vs {} at the base",
            xreal_str(&lim.liminf_estimate),
            xreal_str(&lim.f_at_base)
        ),
    );

    Ok(report)
}

fn hilbert_scenario(cfg: &ScenarioConfig) -> Result<Report, UsageError> {
    let trunc = cfg.trunc.unwrap_or(16);
    if trunc == 0 {
        return Err(UsageError("trunc: must be at least 1".to_string()));
    }
    let witness_m = cfg.witness_m.unwrap_or(4);
    if witness_m > trunc {
        return Err(UsageError(format!(
            "witness-m: depth {witness_m} exceeds the truncation {trunc}"
        )));
    }
    let seed = cfg.seed.unwrap_or(7);
    let mut report = Report::new(cfg.scenario);
    report.param("seed", seed.to_string());
    report.param("trunc", trunc.to_string());
    report.param("witness-m", witness_m.to_string());

    let model = HilbertModel::new(trunc);

    // The generators are exactly orthonormal in the frozen arithmetic.
    let mut gram_ok = true;
    for n in 1..=trunc {
        for k in 1..=trunc {
            let expect = if n == k { Rat::ONE } else { Rat::ZERO };
            gram_ok &= model.gram(n, k) == expect;
        }
    }
    report.check(
        "gram-identity-exact",
        gram_ok,
        format!("all {trunc}x{trunc} generator pairings"),
    );

    // Random right-hand sides: the closed form, the LP optimum, and the
    // recovered unique feasible point must agree exactly.
    let mut rng = StdRng::seed_from_u64(seed);
    let mut lp_ok = true;
    let mut recover_ok = true;
    let mut dual_ok = true;
    let mut lp_detail = String::from("5 random right-hand sides solved exactly");
    for _ in 0..5 {
        let count = rng.gen_range(0..=3);
        let mut pairs = Vec::new();
        for _ in 0..count {
            pairs.push((rng.gen_range(1..=trunc), rat(rng.gen_range(0..=24), 8)));
        }
        let y = OddVector::from_pairs(pairs);
        let closed = hilbert::value(&model, &y);
        let lp = truncated_lp(&model, &y)
            .and_then(|lp| solve(&lp))
            .map_err(|e| UsageError(format!("trunc: truncated solve failed ({e})")))?;
        if lp.value != closed {
            lp_ok = false;
            lp_detail = format!(
                "mismatch at y = {}: lp {} vs closed {}",
                y.gammas,
                xreal_str(&lp.value),
                xreal_str(&closed)
            );
        }
        let lambda = recover_primal(&model, &y)
            .map_err(|e| UsageError(format!("trunc: recovery failed ({e})")))?;
        let mut dense = vec![Rat::ZERO; trunc as usize];
        for (n, v) in &lambda {
            dense[*n as usize - 1] = v.clone();
        }
        recover_ok &= lp.primal.as_deref() == Some(dense.as_slice());
        let dual = truncated_dual_optimum(&model, &y)
            .map_err(|e| UsageError(format!("trunc: dual pairing failed ({e})")))?;
        dual_ok &= dual.strong_duality && dual.dual_value == closed;
    }
    report.check("lp-matches-closed-form", lp_ok, lp_detail);
    report.check(
        "primal-recovery-round-trips",
        recover_ok,
        "LP optimum equals the recovered unique feasible point".to_string(),
    );
    report.check(
        "dual-optimum-attains-value",
        dual_ok,
        "truncated dual pairing reproduces the value exactly".to_string(),
    );

    // The dual-norm floor grows past every bound: at the truncation it
    // already exceeds sqrt(N - 1/3).
    let floor_sq = hilbert::dual_norm_lower_bound_sq(&model);
    let floor = hilbert::dual_norm_lower_bound(&model);
    report.result("dual-norm-lower-bound", real_str(floor.approx()));
    report.result("dual-norm-lower-bound-sq", rat_str(&floor_sq));
    let target = &Rat::from_int(trunc as i64) - &rat(1, 3);
    report.check(
        "norm-floor-exceeds-target",
        floor_sq > target,
        format!("{} > {} (squares compared exactly)", rat_str(&floor_sq), rat_str(&target)),
    );

    // Lower-semicontinuity failure at the origin: each witness row sinks
    // the value below its analytic ceiling while the distance shrinks.
    let rows = lsc_failure_witness(&model, &OddVector::zero(), witness_m)
        .map_err(|e| UsageError(format!("witness-m: witness construction failed ({e})")))?;
    let last = rows.last().expect("at least the base row");
    report.result("witness-value-at-depth", xreal_str(&last.value));
    report.result("witness-bound-at-depth", rat_str(&last.value_bound));
    report.result("witness-distance-at-depth", rat_str(&last.distance));
    let rows_ok = rows
        .iter()
        .all(|r| r.value <= XReal::Finite(r.value_bound.clone()));
    report.check(
        "witness-rows-stay-below-bound",
        rows_ok && rows.len() == witness_m as usize + 1,
        format!("{} rows, each value at or below its ceiling", rows.len()),
    );

    Ok(report)
}

/// Map a core validation error to a usage error naming the CLI field.
fn named_usage(e: Error) -> UsageError {
    let msg = match &e {
        Error::OutOfRange(field) => {
            let flag = match *field {
                "level" => "levels",
                other => other,
            };
            format!("{flag}: value out of range")
        }
        Error::Precondition(what) => {
            let flag = what.split("-not-grid-aligned").next().unwrap_or("cells");
            if what.ends_with("-not-grid-aligned") {
                format!("{flag}: endpoint is not aligned with the grid")
            } else {
                format!("cells: {what}")
            }
        }
        Error::GridTooCoarse => {
            "cells: grid too coarse for the requested halving levels".to_string()
        }
        other => format!("cells: {other}"),
    };
    UsageError(msg)
}

fn kretschmer(cfg: &ScenarioConfig) -> Result<Report, UsageError> {
    let alpha = cfg.alpha.clone().unwrap_or_else(|| rat(2, 1));
    if alpha.is_negative() {
        return Err(UsageError("alpha: must be nonnegative".to_string()));
    }
    let mode = cfg.mode.unwrap_or(Mode::Exact);
    let mut report = Report::new(cfg.scenario);

    // Right-hand side: an explicit CSV file, or the left indicator chi_[0, delta].
    let (b, analytic) = match &cfg.b_file {
        Some(path) => {
            if cfg.delta.is_some() {
                return Err(UsageError(
                    "delta: does not combine with an explicit b-file".to_string(),
                ));
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("b-file: cannot read {}: {e}", path.display())))?;
            let b = GridFn::from_csv(&text)
                .map_err(|e| UsageError(format!("b-file: malformed grid function ({e})")))?;
            if let Some(cells) = cfg.cells {
                if cells != b.cells() {
                    return Err(UsageError(format!(
                        "cells: {cells} disagrees with the {} cells in the b-file",
                        b.cells()
                    )));
                }
            }
            (b, None)
        }
        None => {
            let cells = cfg.cells.unwrap_or(64);
            if cells == 0 {
                return Err(UsageError("cells: must be at least 1".to_string()));
            }
            let delta = cfg.delta.clone().unwrap_or_else(|| rat(1, 2));
            let analytic = analytic_values(
                &alpha,
                &RhsSpec::LeftOnly {
                    delta: delta.clone(),
                },
            )
            .map_err(named_usage)?;
            let b = GridFn::indicator(cells, &Rat::ZERO, &delta).map_err(|_| {
                UsageError("delta: endpoint is not aligned with the grid".to_string())
            })?;
            report.param("delta", rat_str(&delta));
            (b, Some(analytic))
        }
    };
    let cells = b.cells();
    report.param("alpha", rat_str(&alpha));
    if let Some(path) = &cfg.b_file {
        report.param("b-file", path.display().to_string());
    }
    report.param("cells", cells.to_string());
    report.param(
        "mode",
        match mode {
            Mode::Exact => "exact",
            Mode::Sampled => "sampled",
        },
    );
    let solve_err = |e: Error| UsageError(format!("cells: discretized solve failed ({e})"));

    let exact_sol = solve_discretized(&KretschmerProblem::new(
        alpha.clone(),
        b.clone(),
        Mode::Exact,
    ))
    .map_err(solve_err)?;
    let dual_sol = solve(&discretize_dual(&KretschmerProblem::new(
        alpha.clone(),
        b.clone(),
        Mode::Exact,
    ))
    .map_err(solve_err)?)
    .map_err(solve_err)?;

    report.result("discrete-val-p", xreal_str(&exact_sol.value));
    if mode == Mode::Sampled {
        let sampled_sol =
            solve_discretized(&KretschmerProblem::new(alpha.clone(), b.clone(), Mode::Sampled))
                .map_err(solve_err)?;
        report.result("discrete-val-p-sampled", xreal_str(&sampled_sol.value));
        report.check(
            "sampled-never-exceeds-exact",
            sampled_sol.value <= exact_sol.value,
            format!(
                "{} (sampled) vs {} (exact)",
                xreal_str(&sampled_sol.value),
                xreal_str(&exact_sol.value)
            ),
        );
    }
    report.result("discrete-val-d", xreal_str(&dual_sol.value));
    let gap = exact_sol.value.checked_sub(&dual_sol.value).ok();
    report.result(
        "gap",
        gap.as_ref().map_or_else(|| "indeterminate".to_string(), xreal_str),
    );
    report.check(
        "weak-duality-bracket",
        dual_sol.value <= exact_sol.value,
        format!(
            "dual {} at or below exact primal {}",
            xreal_str(&dual_sol.value),
            xreal_str(&exact_sol.value)
        ),
    );

    if let Some(analytic) = analytic {
        report.result("analytic-val-p", rat_str(&analytic.val_p));
        report.result("analytic-val-d", rat_str(&analytic.val_d));
        report.check(
            "dual-matches-analytic",
            dual_sol.value == XReal::Finite(analytic.val_d.clone()),
            format!(
                "{} vs {} exactly",
                xreal_str(&dual_sol.value),
                rat_str(&analytic.val_d)
            ),
        );
        let half_cell = rat(1, 2 * cells as i64);
        let ceiling = &analytic.val_p + &half_cell;
        let within = finite(&exact_sol.value)
            .map(|v| *v >= analytic.val_p && *v <= ceiling)
            .unwrap_or(false);
        report.check(
            "primal-within-half-cell",
            within,
            format!(
                "{} inside [{}, {}]",
                xreal_str(&exact_sol.value),
                rat_str(&analytic.val_p),
                rat_str(&ceiling)
            ),
        );
    }

    Ok(report)
}

fn kretschmer_gap(cfg: &ScenarioConfig) -> Result<Report, UsageError> {
    let alpha = cfg.alpha.clone().unwrap_or_else(|| rat(2, 1));
    let delta = cfg.delta.clone().unwrap_or(Rat::ZERO);
    let gammas = cfg.gamma.clone().unwrap_or_else(|| vec![Rat::ZERO]);
    if gammas.len() != 1 {
        return Err(UsageError(format!(
            "gamma: expected a single value, got {}",
            gammas.len()
        )));
    }
    let gamma = gammas.into_iter().next().expect("one value");
    let cells = cfg.cells.unwrap_or(8);
    if cells == 0 {
        return Err(UsageError("cells: must be at least 1".to_string()));
    }

    let analytic = analytic_values(
        &alpha,
        &RhsSpec::TwoSided {
            delta: delta.clone(),
            gamma: gamma.clone(),
        },
    )
    .map_err(named_usage)?;
    let b = GridFn::indicator(cells, &Rat::ZERO, &delta)
        .map_err(|_| UsageError("delta: endpoint is not aligned with the grid".to_string()))?
        .plus(
            &GridFn::indicator(cells, &gamma, &Rat::ONE).map_err(|_| {
                UsageError("gamma: endpoint is not aligned with the grid".to_string())
            })?,
        );

    let mut report = Report::new(cfg.scenario);
    report.param("alpha", rat_str(&alpha));
    report.param("cells", cells.to_string());
    report.param("delta", rat_str(&delta));
    report.param("gamma", rat_str(&gamma));
    let solve_err = |e: Error| UsageError(format!("cells: discretized solve failed ({e})"));

    let primal = solve_discretized(&KretschmerProblem::new(
        alpha.clone(),
        b.clone(),
        Mode::Exact,
    ))
    .map_err(solve_err)?;
    let dual = solve(
        &discretize_dual(&KretschmerProblem::new(alpha.clone(), b, Mode::Exact))
            .map_err(solve_err)?,
    )
    .map_err(solve_err)?;

    report.result("analytic-val-d", rat_str(&analytic.val_d));
    report.result("analytic-val-p", rat_str(&analytic.val_p));
    let analytic_gap = &analytic.val_p - &analytic.val_d;
    report.result("analytic-gap", rat_str(&analytic_gap));
    report.result("discrete-val-d", xreal_str(&dual.value));
    report.result("discrete-val-p", xreal_str(&primal.value));
    let gap = primal.value.checked_sub(&dual.value).ok();
    report.result(
        "gap",
        gap.as_ref().map_or_else(|| "indeterminate".to_string(), xreal_str),
    );

    report.check(
        "primal-matches-analytic",
        primal.value == XReal::Finite(analytic.val_p.clone()),
        format!(
            "{} vs {} exactly",
            xreal_str(&primal.value),
            rat_str(&analytic.val_p)
        ),
    );
    report.check(
        "dual-matches-analytic",
        dual.value == XReal::Finite(analytic.val_d.clone()),
        format!(
            "{} vs {} exactly",
            xreal_str(&dual.value),
            rat_str(&analytic.val_d)
        ),
    );
    report.check(
        "gap-matches-analytic",
        gap == Some(XReal::Finite(analytic_gap.clone())),
        format!(
            "discrete bracket width {} vs analytic {}",
            gap.as_ref().map_or_else(|| "indeterminate".to_string(), xreal_str),
            rat_str(&analytic_gap)
        ),
    );
    report.check(
        "weak-duality-bracket",
        dual.value <= primal.value,
        format!(
            "dual {} at or below primal {}",
            xreal_str(&dual.value),
            xreal_str(&primal.value)
        ),
    );

    Ok(report)
}

fn unbounded(cfg: &ScenarioConfig) -> Result<Report, UsageError> {
    let alpha = cfg.alpha.clone().unwrap_or_else(|| rat(2, 1));
    let eta0 = cfg.eta0.clone().unwrap_or_else(|| rat(1, 4));
    let eta1 = cfg.eta1.clone().unwrap_or_else(|| rat(1, 2));
    let levels = cfg.levels.unwrap_or(4);
    let eps = cfg.eps.clone().unwrap_or(Rat::ONE);
    let cells = match cfg.cells {
        Some(c) => c,
        None => levels
            .checked_add(2)
            .and_then(|s| 1usize.checked_shl(s))
            .ok_or_else(|| UsageError("levels: too deep for a default grid".to_string()))?,
    };

    let witness = unboundedness_witness(&alpha, &eta0, &eta1, levels, &eps, cells)
        .map_err(named_usage)?;

    let mut report = Report::new(cfg.scenario);
    report.param("alpha", rat_str(&alpha));
    report.param("cells", cells.to_string());
    report.param("eps", rat_str(&eps));
    report.param("eta0", rat_str(&eta0));
    report.param("eta1", rat_str(&eta1));
    report.param("levels", levels.to_string());

    let norm_sq = witness.y_n.norm_sq();
    report.result("analytic-bound", rat_str(&witness.analytic_bound));
    report.result("discrete-value", xreal_str(&witness.discrete_value));
    report.result("witness-norm-sq", rat_str(&norm_sq));
    // The stack's norm stays under eps^2 (sqrt(2)+1) beta while its
    // essential supremum (hence the floor) grows with the level count.
    let beta = (&eta1 - &eta0).approx();
    let cap = eps.approx().powi(2) * (2f64.sqrt() + 1.0) * beta;
    report.result("norm-cap", real_str(cap));
    report.check(
        "value-at-or-above-floor",
        witness.discrete_value >= XReal::Finite(witness.analytic_bound.clone()),
        format!(
            "{} vs floor {}",
            xreal_str(&witness.discrete_value),
            rat_str(&witness.analytic_bound)
        ),
    );
    report.check(
        "norm-under-cap",
        norm_sq.approx() <= cap + 1e-9,
        format!("{} at or below {}", rat_str(&norm_sq), real_str(cap)),
    );

    Ok(report)
}

fn discontinuity(cfg: &ScenarioConfig) -> Result<Report, UsageError> {
    let alpha = cfg.alpha.clone().unwrap_or_else(|| rat(2, 1));
    let delta = cfg.delta.clone().unwrap_or_else(|| rat(1, 4));
    let gammas = cfg
        .gamma
        .clone()
        .unwrap_or_else(|| vec![rat(3, 4), rat(15, 16), rat(63, 64)]);
    let cells = cfg.cells.unwrap_or(256);
    if cells == 0 {
        return Err(UsageError("cells: must be at least 1".to_string()));
    }

    let rows = discontinuity_scenario(&alpha, &delta, &gammas, cells).map_err(named_usage)?;

    let mut report = Report::new(cfg.scenario);
    report.param("alpha", rat_str(&alpha));
    report.param("cells", cells.to_string());
    report.param("delta", rat_str(&delta));
    report.param(
        "gamma",
        gammas.iter().map(rat_str).collect::<Vec<_>>().join(";"),
    );

    let base = rows.last().expect("base row present");
    let base_value = finite(&base.discrete_val_p)
        .cloned()
        .ok_or_else(|| UsageError("cells: base solve did not finish finite".to_string()))?;
    let half_cell = rat(1, 2 * cells as i64);

    let mut sticks = true;
    let mut jumps = true;
    for (i, row) in rows.iter().take(rows.len() - 1).enumerate() {
        let k = i + 1;
        report.result(&format!("perturbation-norm-{k}"), rat_str(&row.perturbation_norm));
        report.result(&format!("val-p-gamma-{k}"), xreal_str(&row.discrete_val_p));
        let jump = row
            .discrete_val_p
            .checked_sub(&XReal::Finite(base_value.clone()))
            .ok();
        report.result(
            &format!("jump-{k}"),
            jump.as_ref().map_or_else(|| "indeterminate".to_string(), xreal_str),
        );
        sticks &= row.discrete_val_p == XReal::Finite(row.analytic_val_p.clone());
        let jump_floor = &(&alpha - &delta) - &half_cell;
        jumps &= jump >= Some(XReal::Finite(jump_floor));
    }
    report.result("base-analytic-val-p", rat_str(&base.analytic_val_p));
    report.result("base-val-p", rat_str(&base_value));

    report.check(
        "perturbed-value-sticks-at-alpha",
        sticks,
        format!(
            "{} perturbed right-hand sides, each exactly {}",
            rows.len() - 1,
            rat_str(&alpha)
        ),
    );
    let ceiling = &delta + &half_cell;
    report.check(
        "base-within-half-cell",
        base_value >= delta && base_value <= ceiling,
        format!(
            "{} inside [{}, {}]",
            rat_str(&base_value),
            rat_str(&delta),
            rat_str(&ceiling)
        ),
    );
    report.check(
        "jump-exceeds-alpha-minus-delta-rate",
        jumps,
        "every jump at least alpha - delta - 1/(2n)".to_string(),
    );

    Ok(report)
}

fn csv_field(s: &str) -> String {
    s.replace(',', ";").replace('\n', " ")
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let params: Map<String, Value> = report
                .params
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect();
            let results: Map<String, Value> = report
                .results
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect();
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({"detail": c.detail, "name": c.name, "pass": c.pass}))
                .collect();
            let doc = json!({
                "checks": checks,
                "params": params,
                "results": results,
                "scenario": report.scenario,
            });
            let mut text = serde_json::to_string_pretty(&doc).expect("serializable report");
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut out = String::new();
            out.push_str(&format!("scenario,{}\n", report.scenario));
            for (k, v) in &report.params {
                out.push_str(&format!("param:{k},{}\n", csv_field(v)));
            }
            for (k, v) in &report.results {
                out.push_str(&format!("{k},{}\n", csv_field(v)));
            }
            for c in &report.checks {
                out.push_str(&format!(
                    "check,{},{},{}\n",
                    c.name,
                    if c.pass { "pass" } else { "fail" },
                    csv_field(&c.detail)
                ));
            }
            out
        }
    }
}

/// Parse a rational CLI argument; accepts `p/q`, integers, and decimals.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    Rat::from_str(s).map_err(|_| format!("expected a rational like 3/4, 2, or 0.25, got '{s}'"))
}
