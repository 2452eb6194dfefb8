//! A truncated Hilbert-space linear program whose every feasible point is
//! unique, whose value function has a closed form, and whose duals blow up
//! in norm as the truncation grows.
//!
//! The data live on coordinates `e_1 … e_{2N}`: generators
//! `z_n = η_n e_{2n-1} - μ_n e_{2n}` with `η_n = 2^{-n}` and
//! `η_n² + μ_n² = 1`, the projection onto the odd-coordinate subspace as
//! the constraint map, and the objective `Σ η_n e_{2n}`. A right-hand side
//! `y = Σ γ_n e_{2n-1}` admits exactly one conic combination
//! (`λ_n = γ_n / η_n`), so the program's value is `-Σ μ_n γ_n` when all
//! `γ_n >= 0` and `+∞` otherwise. Each truncation has a dual optimum
//! (`λ_k = -μ_k`) but its norm exceeds `sqrt(N - 1/3)`, which diverges —
//! the truncations certify that no dual point survives the limit.
//!
//! `μ_n` is irrational; every μ-dependent quantity here uses one frozen
//! dyadic value `mu_hat(n)` (the exact binary expansion of the double
//! nearest `sqrt(1 - η_n²)`), so the closed form, the LP optimum, and the
//! dual pairing agree *exactly* in rational arithmetic, while floating
//! comparisons against analytic values carry 1e-12 tolerances.

use crate::lp::{Bound, Direction, FiniteLP, Sense, SparseMat};
use crate::oracle::{embedded_sqrt, Dim, FnOracle};
use crate::rat::{rat, Rat};
use crate::seq::SparseSeq;
use crate::xreal::XReal;
use crate::Error;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Clone, Debug)]
pub struct HilbertModel {
    pub trunc: u32,
}

/// A right-hand side supported on odd coordinates: entry `n` of `gammas`
/// is the coefficient of `e_{2n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddVector {
    pub gammas: SparseSeq,
}

impl OddVector {
    pub fn zero() -> OddVector {
        OddVector {
            gammas: SparseSeq::new(),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, Rat)>) -> OddVector {
        OddVector {
            gammas: SparseSeq::from_pairs(pairs),
        }
    }

    pub fn gamma(&self, n: u32) -> Rat {
        self.gammas.get(n)
    }
}

fn pow2_neg(n: u32) -> Rat {
    let mut v = Rat::ONE;
    for _ in 0..n {
        v = &v * &rat(1, 2);
    }
    v
}

impl HilbertModel {
    pub fn new(trunc: u32) -> HilbertModel {
        assert!(trunc >= 1, "at least one generator");
        HilbertModel { trunc }
    }

    /// `η_n = 2^{-n}`, exact.
    pub fn eta(&self, n: u32) -> Rat {
        assert!(n >= 1 && n <= self.trunc, "generator index out of range");
        pow2_neg(n)
    }

    /// `μ_n² = 1 - η_n²`, exact.
    pub fn musq(&self, n: u32) -> Rat {
        let e = self.eta(n);
        &Rat::ONE - &(&e * &e)
    }

    /// The frozen dyadic stand-in for the irrational `μ_n`.
    pub fn mu_hat(&self, n: u32) -> Rat {
        Rat::from_f64(self.musq(n).approx().sqrt()).expect("mu is finite")
    }

    /// `<z_n, z_k>` evaluated in the exact quadratic form: `0` off the
    /// diagonal (disjoint coordinates) and `η_n² + μ_n²` on it.
    pub fn gram(&self, n: u32, k: u32) -> Rat {
        if n != k {
            return Rat::ZERO;
        }
        let e = self.eta(n);
        &(&e * &e) + &self.musq(n)
    }

    fn check_support(&self, y: &OddVector) {
        if let Some(m) = y.gammas.max_support() {
            assert!(m <= self.trunc, "support escapes the truncation");
        }
    }
}

/// Closed-form value `-Σ mu_hat(n) γ_n` on `{γ >= 0}`, `+∞` elsewhere.
pub fn value(m: &HilbertModel, y: &OddVector) -> XReal {
    m.check_support(y);
    let mut acc = Rat::ZERO;
    for (n, g) in y.gammas.support() {
        if g.is_negative() {
            return XReal::PosInf;
        }
        acc = &acc - &(&m.mu_hat(n) * g);
    }
    XReal::Finite(acc)
}

/// The unique conic coefficients `λ_n = γ_n / η_n` reaching `y`, as sparse
/// pairs over the support of `y`.
pub fn recover_primal(m: &HilbertModel, y: &OddVector) -> Result<Vec<(u32, Rat)>, Error> {
    m.check_support(y);
    let mut out = Vec::new();
    for (n, g) in y.gammas.support() {
        if g.is_negative() {
            return Err(Error::NotInDomain);
        }
        out.push((n, g / &m.eta(n)));
    }
    Ok(out)
}

/// The odd-coordinate projection of `Σ λ_n z_n`: exact inverse of
/// `recover_primal`.
pub fn project_cone_combination(m: &HilbertModel, lambda: &[(u32, Rat)]) -> OddVector {
    OddVector::from_pairs(
        lambda
            .iter()
            .map(|(n, l)| (*n, l * &m.eta(*n)))
            .collect::<Vec<_>>(),
    )
}

/// Exact `Σ_{k<=N} μ_k² = N - (1 - 4^{-N})/3`: the squared norm floor for
/// every dual-feasible point of the truncation.
pub fn dual_norm_lower_bound_sq(m: &HilbertModel) -> Rat {
    let mut acc = Rat::ZERO;
    for k in 1..=m.trunc {
        acc = &acc + &m.musq(k);
    }
    acc
}

/// `sqrt(Σ μ_k²)` as a dyadic embedding; exceeds `sqrt(N - 1/3)` and
/// diverges with the truncation, so no dual point survives the limit.
pub fn dual_norm_lower_bound(m: &HilbertModel) -> Rat {
    embedded_sqrt(&dual_norm_lower_bound_sq(m))
}

#[derive(Clone, Debug)]
pub struct DualOptimum {
    /// Odd-coordinate coefficients `λ_k = -mu_hat(k)` on the support of `y`.
    pub lambda: Vec<(u32, Rat)>,
    pub dual_value: XReal,
    pub strong_duality: bool,
}

/// The truncation's dual optimum: pairing it with `y` reproduces the value
/// exactly, so the flag is always true (and asserted).
pub fn truncated_dual_optimum(m: &HilbertModel, y: &OddVector) -> Result<DualOptimum, Error> {
    m.check_support(y);
    let mut lambda = Vec::new();
    let mut pairing = Rat::ZERO;
    for (n, g) in y.gammas.support() {
        if g.is_negative() {
            return Err(Error::NotInDomain);
        }
        let l = -&m.mu_hat(n);
        pairing = &pairing + &(&l * g);
        lambda.push((n, l));
    }
    let dual_value = XReal::Finite(pairing);
    let strong_duality = dual_value == value(m, y);
    assert!(strong_duality, "the pairing must reproduce the closed form");
    Ok(DualOptimum {
        lambda,
        dual_value,
        strong_duality,
    })
}

#[derive(Clone, Debug)]
pub struct LscWitnessRow {
    pub b_m: OddVector,
    /// Exact value of the perturbed right-hand side.
    pub value: XReal,
    /// Analytic ceiling `value(b) - mu_hat(1) sqrt(H_m)`.
    pub value_bound: Rat,
    /// Exact norm of the perturbation `b_m - b`.
    pub distance: Rat,
}

/// Partial harmonic sum `H_m`, exact.
pub fn harmonic(mm: u32) -> Rat {
    let mut acc = Rat::ZERO;
    for n in 1..=mm {
        acc = &acc + &rat(1, n as i64);
    }
    acc
}

/// Perturbations that sink the value while approaching `b`: row `m` uses
/// `b_m = b + t_m Σ_{n<=m} (1/n) e_{2n-1}` with `t_m = H_m^{-1/2}` (frozen
/// dyadic), so the value drops below `value(b) - μ_1 sqrt(H_m) → -∞` while
/// `‖b_m - b‖ = t_m sqrt(Σ_{n<=m} n^{-2}) → 0`.
pub fn lsc_failure_witness(
    m: &HilbertModel,
    b: &OddVector,
    mmax: u32,
) -> Result<Vec<LscWitnessRow>, Error> {
    m.check_support(b);
    assert!(mmax <= m.trunc, "witness depth exceeds the truncation");
    let base = match value(m, b) {
        XReal::Finite(v) => v,
        _ => return Err(Error::NotInDomain),
    };
    let mut rows = Vec::new();
    for mm in 0..=mmax {
        let h = harmonic(mm);
        let t_hat = if mm == 0 {
            Rat::ZERO
        } else {
            Rat::from_f64(1.0 / h.approx().sqrt()).expect("finite step")
        };
        let mut b_m = b.clone();
        let mut pert_sq = Rat::ZERO;
        for n in 1..=mm {
            let step = &t_hat / &Rat::from_int(n as i64);
            pert_sq = &pert_sq + &(&step * &step);
            let cur = b_m.gammas.get(n);
            b_m.gammas.set(n, &cur + &step);
        }
        let row_value = value(m, &b_m);
        let value_bound = &base - &(&m.mu_hat(1) * &embedded_sqrt(&h));
        debug_assert!(row_value <= XReal::Finite(value_bound.clone()));
        rows.push(LscWitnessRow {
            b_m,
            value: row_value,
            value_bound,
            distance: embedded_sqrt(&pert_sq),
        });
    }
    Ok(rows)
}

/// The truncated program as finite LP data: minimize `Σ (-η_n mu_hat(n)) λ_n`
/// subject to `η_n λ_n = γ_n` for every `n <= N` and `λ >= 0`. Each equality
/// row pins one coordinate, so the feasible set is the singleton recovered
/// by `recover_primal`.
pub fn truncated_lp(m: &HilbertModel, y: &OddVector) -> Result<FiniteLP, Error> {
    m.check_support(y);
    let n = m.trunc as usize;
    let mut cols = Vec::with_capacity(n);
    let mut objective = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for k in 1..=m.trunc {
        let e = m.eta(k);
        objective.push(-&(&e * &m.mu_hat(k)));
        cols.push(vec![((k - 1), e)]);
        rhs.push(y.gamma(k));
    }
    FiniteLP::new(
        Direction::Min,
        objective,
        SparseMat::from_columns(n, cols),
        rhs,
        vec![Sense::Eq; n],
        vec![Bound::NonNeg; n],
    )
}

/// Value-function oracle over the odd-coordinate coefficients. Exact: the
/// frozen `mu_hat` makes the closed form rational.
pub struct HilbertValueOracle {
    pub model: HilbertModel,
}

impl FnOracle for HilbertValueOracle {
    type P = SparseSeq;

    fn dim(&self) -> Dim {
        Dim::Sequence
    }
    fn eval(&self, x: &SparseSeq) -> Result<XReal, Error> {
        Ok(value(&self.model, &OddVector { gammas: x.clone() }))
    }
    fn sample_domain(&self, count: usize, seed: u64) -> Vec<SparseSeq> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let entries = rng.gen_range(0..=3usize);
                SparseSeq::from_pairs((0..entries).map(|_| {
                    (
                        rng.gen_range(1..=self.model.trunc),
                        rat(rng.gen_range(0..=24), 8),
                    )
                }))
            })
            .collect()
    }
    fn exact(&self) -> bool {
        true
    }
}
