//! Shared test support: an independent brute-force LP optimizer (vertex
//! enumeration with exact Gaussian elimination) and a generator of random
//! feasible bounded programs. The brute-force path shares no code with the
//! simplex engine, so agreement between the two is a genuine cross-check.

#![allow(dead_code)]

use gaplab_core::lp::{Bound, Direction, FiniteLP, Sense, SparseMat};
use gaplab_core::{rat, Rat};
use rand::rngs::StdRng;
use rand::Rng;

/// Solve a square linear system `M z = rhs` exactly. `None` when singular.
pub fn solve_square(mut m: Vec<Vec<Rat>>, mut rhs: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = rhs.len();
    assert!(m.len() == n && m.iter().all(|r| r.len() == n));
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].recip();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let t = &m[col][c] * &factor;
                m[r][c] -= &t;
            }
            let t = &rhs[col] * &factor;
            rhs[r] -= &t;
        }
    }
    for i in 0..n {
        if m[i][i].is_zero() {
            return None;
        }
        rhs[i] = &rhs[i] / &m[i][i];
    }
    Some(rhs)
}

struct Constraint {
    coeffs: Vec<Rat>,
    sense: Sense,
    rhs: Rat,
}

fn satisfied(c: &Constraint, x: &[Rat]) -> bool {
    let lhs: Rat = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
    match c.sense {
        Sense::Ge => lhs >= c.rhs,
        Sense::Le => lhs <= c.rhs,
        Sense::Eq => lhs == c.rhs,
    }
}

/// Independent optimum by enumerating all basic points: every subset of `n`
/// constraints taken with equality. Valid for programs whose optimum is
/// attained at a vertex (any bounded feasible program with nonnegativity or
/// pinning rows). Returns `(value, minimizer)`; `None` when no feasible
/// vertex exists.
pub fn brute_force_optimum(lp: &FiniteLP) -> Option<(Rat, Vec<Rat>)> {
    let n = lp.n_vars();
    let mut cons: Vec<Constraint> = Vec::new();
    for i in 0..lp.n_rows() {
        let coeffs: Vec<Rat> = (0..n).map(|j| lp.matrix.get(i, j)).collect();
        cons.push(Constraint {
            coeffs,
            sense: lp.senses[i],
            rhs: lp.rhs[i].clone(),
        });
    }
    for j in 0..n {
        if lp.bounds[j] == Bound::NonNeg {
            let mut coeffs = vec![Rat::ZERO; n];
            coeffs[j] = Rat::ONE;
            cons.push(Constraint {
                coeffs,
                sense: Sense::Ge,
                rhs: Rat::ZERO,
            });
        }
    }
    let mut best: Option<(Rat, Vec<Rat>)> = None;
    let mut pick = vec![0usize; n];
    enumerate_subsets(cons.len(), n, &mut pick, 0, 0, &mut |subset| {
        let m: Vec<Vec<Rat>> = subset.iter().map(|&k| cons[k].coeffs.clone()).collect();
        let rhs: Vec<Rat> = subset.iter().map(|&k| cons[k].rhs.clone()).collect();
        let Some(x) = solve_square(m, rhs) else {
            return;
        };
        if !cons.iter().all(|c| satisfied(c, &x)) {
            return;
        }
        let value = lp.objective_value(&x);
        let better = match (&best, lp.direction) {
            (None, _) => true,
            (Some((bv, _)), Direction::Min) => value < *bv,
            (Some((bv, _)), Direction::Max) => value > *bv,
        };
        if better {
            best = Some((value, x));
        }
    });
    best
}

fn enumerate_subsets(
    total: usize,
    want: usize,
    pick: &mut Vec<usize>,
    depth: usize,
    start: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if depth == want {
        f(pick);
        return;
    }
    for k in start..total {
        if total - k < want - depth {
            break;
        }
        pick[depth] = k;
        enumerate_subsets(total, want, pick, depth + 1, k + 1, f);
    }
}

fn small_rat(rng: &mut StdRng) -> Rat {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

fn small_nonneg(rng: &mut StdRng) -> Rat {
    rat(rng.gen_range(0..=4), rng.gen_range(1..=3))
}

/// Random feasible bounded program: nonnegative variables inside a box row,
/// rows built around a known interior point, an optional free variable pinned
/// by a pair of range rows, mixed senses and directions.
pub fn random_feasible_bounded(rng: &mut StdRng) -> FiniteLP {
    let n = rng.gen_range(2..=5usize);
    let m = rng.gen_range(2..=6usize);
    let free_var = rng.gen_range(0..3u8) == 0;
    let mut bounds = vec![Bound::NonNeg; n];
    let mut xhat: Vec<Rat> = (0..n).map(|_| small_nonneg(rng)).collect();
    if free_var {
        bounds[0] = Bound::Free;
        xhat[0] = small_rat(rng);
    }

    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut senses: Vec<Sense> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for _ in 0..m {
        let coeffs: Vec<Rat> = (0..n)
            .map(|_| {
                if rng.gen_range(0..10) < 7 {
                    small_rat(rng)
                } else {
                    Rat::ZERO
                }
            })
            .collect();
        let at_xhat: Rat = coeffs.iter().zip(&xhat).map(|(a, v)| a * v).sum();
        let sense = match rng.gen_range(0..4u8) {
            0 => Sense::Eq,
            1 | 2 => Sense::Ge,
            _ => Sense::Le,
        };
        let slack = small_nonneg(rng);
        let r = match sense {
            Sense::Eq => at_xhat,
            Sense::Ge => &at_xhat - &slack,
            Sense::Le => &at_xhat + &slack,
        };
        rows.push(coeffs);
        senses.push(sense);
        rhs.push(r);
    }
    // Box row keeps the nonnegative part bounded.
    let mut box_row = vec![Rat::ZERO; n];
    let mut box_rhs = small_nonneg(rng) + Rat::ONE;
    for j in 0..n {
        if bounds[j] == Bound::NonNeg {
            box_row[j] = Rat::ONE;
            box_rhs += &xhat[j];
        }
    }
    rows.push(box_row);
    senses.push(Sense::Le);
    rhs.push(box_rhs);
    // Pin a free variable into a bounded range.
    if free_var {
        let pad = small_nonneg(rng) + Rat::ONE;
        let mut lo = vec![Rat::ZERO; n];
        lo[0] = Rat::ONE;
        rows.push(lo.clone());
        senses.push(Sense::Ge);
        rhs.push(&xhat[0] - &pad);
        rows.push(lo);
        senses.push(Sense::Le);
        rhs.push(&xhat[0] + &pad);
    }

    let objective: Vec<Rat> = (0..n).map(|_| small_rat(rng)).collect();
    let direction = if rng.gen_range(0..2u8) == 0 {
        Direction::Min
    } else {
        Direction::Max
    };
    FiniteLP::new(
        direction,
        objective,
        SparseMat::from_dense_rows(rows),
        rhs,
        senses,
        bounds,
    )
    .expect("generator produces consistent dimensions")
}
