//! A three-dimensional conic program whose value function is sublinear but
//! not lower semicontinuous.
//!
//! Data: minimize `x2` over `x ∈ ℝ×ℝ₊` subject to `(x1, x2, 0) - y ∈ Q`,
//! where `Q = {q : q1, q3 >= 0, q2^2 <= 2 q1 q3}` is a rotated second-order
//! cone (self-dual). The value function has the closed form `v(y) = y2` on
//! `{y3 = 0, y2 >= 0}`, `0` on `{y3 < 0}`, and `+inf` elsewhere; its
//! biconjugate flattens the `y3 = 0` face to `0`, so the two differ exactly
//! on that face — an attainment/semicontinuity failure in three dimensions.
//! A grid brute-force evaluator provides an independent check of the closed
//! form, and membership tests are exact (no tolerance on the cone).

use crate::oracle::{Dim, FnOracle, Point, SequenceWitness};
use crate::rat::{rat, Rat};
use crate::xreal::XReal;
use crate::Error;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SocPoint {
    pub y1: Rat,
    pub y2: Rat,
    pub y3: Rat,
}

impl SocPoint {
    pub fn new(y1: Rat, y2: Rat, y3: Rat) -> SocPoint {
        SocPoint { y1, y2, y3 }
    }

    pub fn from_slice(v: &[Rat]) -> SocPoint {
        assert_eq!(v.len(), 3, "three coordinates expected");
        SocPoint::new(v[0].clone(), v[1].clone(), v[2].clone())
    }

    pub fn to_vec(&self) -> Vec<Rat> {
        vec![self.y1.clone(), self.y2.clone(), self.y3.clone()]
    }
}

/// Exact membership in the rotated cone `Q`.
pub fn q_member(y: &SocPoint) -> bool {
    !y.y1.is_negative() && !y.y3.is_negative() && &y.y2 * &y.y2 <= &(&rat(2, 1) * &y.y1) * &y.y3
}

/// Closed-form value function.
pub fn value(y: &SocPoint) -> XReal {
    if y.y3.is_negative() {
        return XReal::Finite(Rat::ZERO);
    }
    if y.y3.is_positive() {
        return XReal::PosInf;
    }
    if y.y2.is_negative() {
        XReal::PosInf
    } else {
        XReal::Finite(y.y2.clone())
    }
}

/// Closed-form biconjugate: the dual-feasible set is `{(0,0,s) : s >= 0}`,
/// so the supremum of `<y, ystar>` is `0` when `y3 <= 0` and `+inf` when
/// `y3 > 0`.
pub fn biconjugate_value(y: &SocPoint) -> XReal {
    if y.y3.is_positive() {
        XReal::PosInf
    } else {
        XReal::Finite(Rat::ZERO)
    }
}

/// Dual feasibility `ystar ∈ Q⁺` and `c* - A* ystar ∈ P⁺`, with
/// `A*(y) = (y1, y2)`, `c* = (0, 1)`, `P⁺ = {0}×ℝ₊`, and `Q⁺ = Q` by
/// self-duality. The two conditions collapse to `y1 = 0, y2 = 0, y3 >= 0`.
pub fn dual_feasible(ystar: &SocPoint) -> bool {
    let adjoint_gap_1 = -&ystar.y1;
    let adjoint_gap_2 = &Rat::ONE - &ystar.y2;
    q_member(ystar) && adjoint_gap_1.is_zero() && !adjoint_gap_2.is_negative()
}

/// Search box for the brute-force evaluator.
#[derive(Clone, Debug)]
pub struct BruteBox {
    pub x1lo: Rat,
    pub x1hi: Rat,
    pub x2hi: Rat,
}

/// Generous default box containing the closed-form minimizers: `x1` ranges
/// over `±2(1 + |y1| + ||y||)` and `x2` over `[0, 2(1 + |y2|)]`.
pub fn default_box(y: &SocPoint) -> BruteBox {
    let norm = y.to_vec().norm();
    let r = &rat(2, 1) * &(&(&Rat::ONE + &y.y1.abs()) + &norm);
    BruteBox {
        x1lo: -&r,
        x1hi: r,
        x2hi: &rat(2, 1) * &(&Rat::ONE + &y.y2.abs()),
    }
}

/// Brute-force value: minimize `x2` over the exact rational grid
/// `[x1lo, x1hi] × [0, x2hi]` (each axis with `grid` points) subject to
/// `(x1, x2, 0) - y ∈ Q`, membership tested exactly. `+inf` when no grid
/// point is feasible. Scanning `x2` upward makes the first feasible level
/// the minimum.
pub fn brute_value(y: &SocPoint, bx: &BruteBox, grid: usize) -> XReal {
    assert!(grid >= 2, "grid needs at least two points per axis");
    let steps = Rat::from_int((grid - 1) as i64);
    let x1_span = &bx.x1hi - &bx.x1lo;
    for i2 in 0..grid {
        let x2 = &(&bx.x2hi * &Rat::from_int(i2 as i64)) / &steps;
        let shifted_2 = &x2 - &y.y2;
        for i1 in 0..grid {
            let x1 = &bx.x1lo + &(&(&x1_span * &Rat::from_int(i1 as i64)) / &steps);
            let q = SocPoint::new(&x1 - &y.y1, shifted_2.clone(), -&y.y3);
            if q_member(&q) {
                return XReal::Finite(x2);
            }
        }
    }
    XReal::PosInf
}

/// The boundary-approach sequence `ζ_n = (y1, y2, -1/n)` toward a point on
/// the `y3 = 0` face: the value is `0` along it, exposing the liminf drop.
pub fn boundary_approach_witness(y: &SocPoint) -> SequenceWitness<'static, Vec<Rat>> {
    let (y1, y2) = (y.y1.clone(), y.y2.clone());
    Box::new(move |n: u32| vec![y1.clone(), y2.clone(), rat(-1, n.max(1) as i64)])
}

/// Sample a member of `Q` by construction: `(s^2, r·s·t, t^2)` with a
/// rational `r` satisfying `r^2 <= 2`.
pub fn sample_q_member(rng: &mut StdRng) -> SocPoint {
    let s = rat(rng.gen_range(-12..=12), rng.gen_range(1..=4));
    let t = rat(rng.gen_range(-12..=12), rng.gen_range(1..=4));
    let r = match rng.gen_range(0..6u8) {
        0 => Rat::ZERO,
        1 => Rat::ONE,
        2 => rat(-1, 1),
        3 => rat(7, 5),
        4 => rat(-7, 5),
        _ => rat(41, 29),
    };
    SocPoint::new(&s * &s, &(&r * &s) * &t, &t * &t)
}

/// For `u ∉ Q`, construct `q ∈ Q` with `<q, u> < 0` (exact separation).
/// Returns `None` when `u ∈ Q`. With `u1, u3 > 0` the separator is
/// `q = (u3, -sigma d, u1)` for a rational `d` in the nonempty interval
/// `(2 u1 u3 / |u2|, sqrt(2 u1 u3)]` — the upper end keeps `q` inside the
/// cone, the lower end makes `<q, u> = 2 u1 u3 - d |u2|` negative — found
/// by bisecting between those bounds with exact comparisons against
/// `d^2 <= 2 u1 u3`.
pub fn separating_vector(u: &SocPoint) -> Option<SocPoint> {
    if q_member(u) {
        return None;
    }
    if u.y1.is_negative() {
        return Some(SocPoint::new(Rat::ONE, Rat::ZERO, Rat::ZERO));
    }
    if u.y3.is_negative() {
        return Some(SocPoint::new(Rat::ZERO, Rat::ZERO, Rat::ONE));
    }
    // Now u1, u3 >= 0 and u2^2 > 2 u1 u3 (so u2 != 0).
    let sigma = if u.y2.is_negative() {
        rat(-1, 1)
    } else {
        Rat::ONE
    };
    let abs_u2 = u.y2.abs();
    if u.y1.is_zero() {
        // <q, u> = -t |u2| + u3 with q = (t^2, -sigma t, 1).
        let t = &(&u.y3 + &Rat::ONE) / &abs_u2;
        return Some(SocPoint::new(&t * &t, -&(&sigma * &t), Rat::ONE));
    }
    if u.y3.is_zero() {
        // Mirrored: <q, u> = u1 - t |u2| with q = (1, -sigma t, t^2).
        let t = &(&u.y1 + &Rat::ONE) / &abs_u2;
        return Some(SocPoint::new(Rat::ONE, -&(&sigma * &t), &t * &t));
    }
    let p = &(&rat(2, 1) * &u.y1) * &u.y3;
    let floor = &p / &abs_u2;
    let mut lo = floor.clone();
    let mut hi = abs_u2;
    for _ in 0..20_000 {
        if lo > floor {
            let q2 = -&(&sigma * &lo);
            return Some(SocPoint::new(u.y3.clone(), q2, u.y1.clone()));
        }
        let mid = &(&lo + &hi) / &rat(2, 1);
        if &mid * &mid <= p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    unreachable!("the interval between 2 u1 u3 / |u2| and sqrt(2 u1 u3) has rational points");
}

/// Value-function oracle over three-coordinate rational points. The sampler
/// covers both pieces of the domain: the `y3 = 0, y2 >= 0` face and the
/// open half-space `y3 < 0`.
pub struct SocValueOracle;

impl FnOracle for SocValueOracle {
    type P = Vec<Rat>;

    fn dim(&self) -> Dim {
        Dim::Finite(3)
    }
    fn eval(&self, x: &Vec<Rat>) -> Result<XReal, Error> {
        Ok(value(&SocPoint::from_slice(x)))
    }
    fn sample_domain(&self, count: usize, seed: u64) -> Vec<Vec<Rat>> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let y1 = rat(rng.gen_range(-32..=32), 8);
                if rng.gen_range(0..2u8) == 0 {
                    vec![y1, rat(rng.gen_range(0..=32), 8), Rat::ZERO]
                } else {
                    vec![
                        y1,
                        rat(rng.gen_range(-32..=32), 8),
                        rat(rng.gen_range(-32..=-1), 8),
                    ]
                }
            })
            .collect()
    }
    fn exact(&self) -> bool {
        true
    }
}
