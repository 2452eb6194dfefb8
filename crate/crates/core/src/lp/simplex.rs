//! Exact revised simplex over the rationals.
//!
//! The engine works on a sign-mapped *view* of the user's program rather than
//! a materialized standard form: every internal row is an original row times
//! a sign (equalities contribute two rows), every internal column is an
//! original column times a sign (free variables split into two columns), so
//! the original sparse matrix is iterated in place and never copied. The
//! basis inverse is kept as a product-form eta chain. Pivot rules: Bland for
//! the primal, most-negative-basic with a Bland-style fallback for the dual,
//! so every path terminates. Infeasibility and unboundedness produce
//! certificates, and every returned solution is re-verified exactly against
//! the original program before it leaves this module.

use crate::error::Error;
use crate::rat::Rat;
use crate::xreal::XReal;

use super::{
    check_farkas, check_optimal, check_ray, Bound, Direction, FiniteLP, LPSolution, Sense, Status,
};

/// Solve an exact finite LP. `Optimal` solutions carry exact primal and dual
/// vectors (objective values equal exactly), `Infeasible` a verified Farkas
/// certificate, `Unbounded` a verified improving ray.
pub fn solve(lp: &FiniteLP) -> Result<LPSolution, Error> {
    lp.validate()?;
    let view = View::build(lp);
    let mut engine = Simplex::new(&view);
    let outcome = engine.run();
    let sol = match outcome {
        Outcome::Optimal => {
            let sol = engine.extract_optimal();
            verified(check_optimal(lp, &sol))?;
            sol
        }
        Outcome::Infeasible(w) => {
            let y = view.farkas_to_original(&w);
            verified(check_farkas(lp, &y))?;
            LPSolution {
                status: Status::Infeasible,
                value: match lp.direction {
                    Direction::Min => XReal::PosInf,
                    Direction::Max => XReal::NegInf,
                },
                primal: None,
                dual: None,
                basis: None,
                certificate: Some(y),
            }
        }
        Outcome::Unbounded(ray_int) => {
            let r = view.cols_to_original(&ray_int);
            verified(check_ray(lp, &r))?;
            LPSolution {
                status: Status::Unbounded,
                value: match lp.direction {
                    Direction::Min => XReal::NegInf,
                    Direction::Max => XReal::PosInf,
                },
                primal: None,
                dual: None,
                basis: None,
                certificate: Some(r),
            }
        }
    };
    Ok(sol)
}

/// Certificates must re-verify exactly; a failure here is an engine bug, so
/// it is loud under debug assertions and an error otherwise.
fn verified(check: Result<(), String>) -> Result<(), Error> {
    if let Err(msg) = check {
        debug_assert!(false, "certificate verification failed: {msg}");
        return Err(Error::Precondition("certificate-verification-failed"));
    }
    Ok(())
}

/// Sign-mapped internal view: `A x <= b`, `x >= 0`, minimize `c x`.
struct View<'a> {
    lp: &'a FiniteLP,
    /// internal row -> (original row, sign applied to that row)
    irows: Vec<(u32, i8)>,
    /// original row -> (first internal row, count in {1,2})
    rows_of: Vec<(u32, u8)>,
    /// internal column -> (original column, sign)
    icols: Vec<(u32, i8)>,
    rhs: Vec<Rat>,
    obj: Vec<Rat>,
}

impl<'a> View<'a> {
    fn build(lp: &'a FiniteLP) -> View<'a> {
        let mut irows = Vec::new();
        let mut rows_of = Vec::with_capacity(lp.n_rows());
        for (i, s) in lp.senses.iter().enumerate() {
            let first = irows.len() as u32;
            match s {
                Sense::Le => irows.push((i as u32, 1i8)),
                Sense::Ge => irows.push((i as u32, -1)),
                Sense::Eq => {
                    irows.push((i as u32, 1));
                    irows.push((i as u32, -1));
                }
            }
            rows_of.push((first, if *s == Sense::Eq { 2 } else { 1 }));
        }
        let mut icols = Vec::new();
        for (j, b) in lp.bounds.iter().enumerate() {
            icols.push((j as u32, 1i8));
            if *b == Bound::Free {
                icols.push((j as u32, -1));
            }
        }
        let rhs: Vec<Rat> = irows
            .iter()
            .map(|&(i, s)| signed(&lp.rhs[i as usize], s))
            .collect();
        let flip_obj = lp.direction == Direction::Max;
        let obj: Vec<Rat> = icols
            .iter()
            .map(|&(j, s)| {
                let c = signed(&lp.objective[j as usize], s);
                if flip_obj {
                    -c
                } else {
                    c
                }
            })
            .collect();
        View {
            lp,
            irows,
            rows_of,
            icols,
            rhs,
            obj,
        }
    }

    fn n_rows(&self) -> usize {
        self.irows.len()
    }

    fn n_cols(&self) -> usize {
        self.icols.len()
    }

    /// Iterate internal column `j` as (internal row, signed value).
    fn col_for_each(&self, j: usize, mut f: impl FnMut(usize, Rat)) {
        let (oj, cs) = self.icols[j];
        for (oi, v) in self.lp.matrix.col(oj as usize) {
            let (first, count) = self.rows_of[oi];
            for k in 0..count {
                let irow = (first + k as u32) as usize;
                let rs = self.irows[irow].1;
                f(irow, signed(v, rs * cs));
            }
        }
    }

    /// Map internal column values back to original variables.
    fn cols_to_original(&self, xi: &[Rat]) -> Vec<Rat> {
        let mut x = vec![Rat::ZERO; self.lp.n_vars()];
        for (j, &(oj, s)) in self.icols.iter().enumerate() {
            if !xi[j].is_zero() {
                x[oj as usize] += &signed(&xi[j], s);
            }
        }
        x
    }

    /// Map internal row multipliers `y` (for the optimal dual) back to the
    /// original rows under the documented sign conventions.
    fn dual_to_original(&self, y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::ZERO; self.lp.n_rows()];
        for (k, &(oi, s)) in self.irows.iter().enumerate() {
            if !y[k].is_zero() {
                out[oi as usize] += &signed(&y[k], s);
            }
        }
        if self.lp.direction == Direction::Max {
            for v in &mut out {
                *v = -&*v;
            }
        }
        out
    }

    /// Map internal Farkas weights `w >= 0` (certifying `w^T A x <= w^T b`
    /// impossible) back to the original rows.
    fn farkas_to_original(&self, w: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::ZERO; self.lp.n_rows()];
        for (k, &(oi, s)) in self.irows.iter().enumerate() {
            if !w[k].is_zero() {
                out[oi as usize] -= &signed(&w[k], s);
            }
        }
        out
    }
}

fn signed(v: &Rat, s: i8) -> Rat {
    if s >= 0 {
        v.clone()
    } else {
        -v
    }
}

/// One elementary basis-change factor: pivot row `r`, pivot entry `diag`,
/// off-pivot entries of the entering column.
struct Eta {
    r: usize,
    diag: Rat,
    others: Vec<(u32, Rat)>,
}

enum Outcome {
    Optimal,
    /// Internal-row Farkas weights (nonnegative).
    Infeasible(Vec<Rat>),
    /// Improving internal ray.
    Unbounded(Vec<Rat>),
}

enum PrimalEnd {
    Optimal,
    Unbounded { entering: usize, d: Vec<Rat> },
}

enum DualEnd {
    Optimal,
    /// btran(e_r) for the unresolvable infeasible row.
    Infeasible(Vec<Rat>),
}

/// Column ids: `0..n` structural, `n..n+m` slacks, `n+m..n+2m` artificials
/// (artificial `n+m+i` is `-e_i`, used only by phase 1).
struct Simplex<'a> {
    v: &'a View<'a>,
    m: usize,
    n: usize,
    basic: Vec<usize>,
    slot_of: Vec<Option<u32>>,
    xb: Vec<Rat>,
    etas: Vec<Eta>,
    has_artificials: bool,
}

impl<'a> Simplex<'a> {
    fn new(v: &'a View<'a>) -> Simplex<'a> {
        let m = v.n_rows();
        let n = v.n_cols();
        let basic: Vec<usize> = (n..n + m).collect();
        let mut slot_of = vec![None; n + 2 * m];
        for (slot, id) in basic.iter().enumerate() {
            slot_of[*id] = Some(slot as u32);
        }
        Simplex {
            v,
            m,
            n,
            basic,
            slot_of,
            xb: v.rhs.clone(),
            etas: Vec::new(),
            has_artificials: false,
        }
    }

    fn is_artificial(&self, id: usize) -> bool {
        id >= self.n + self.m
    }

    /// Dense internal column of `id` (before basis inverse).
    fn raw_col(&self, id: usize, out: &mut [Rat]) {
        for v in out.iter_mut() {
            *v = Rat::ZERO;
        }
        if id < self.n {
            self.v.col_for_each(id, |i, val| out[i] = val);
        } else if id < self.n + self.m {
            out[id - self.n] = Rat::ONE;
        } else {
            out[id - self.n - self.m] = Rat::from_int(-1);
        }
    }

    /// `v := B^{-1} v` through the eta chain.
    fn ftran(&self, v: &mut [Rat]) {
        for eta in &self.etas {
            if v[eta.r].is_zero() {
                continue;
            }
            let t = &v[eta.r] / &eta.diag;
            for (i, d) in &eta.others {
                v[*i as usize] -= &(d * &t);
            }
            v[eta.r] = t;
        }
    }

    /// `v := (B^T)^{-1} v` = apply eta transposes in reverse.
    fn btran(&self, v: &mut [Rat]) {
        for eta in self.etas.iter().rev() {
            let mut acc = v[eta.r].clone();
            for (i, d) in &eta.others {
                if !v[*i as usize].is_zero() {
                    acc -= &(d * &v[*i as usize]);
                }
            }
            v[eta.r] = &acc / &eta.diag;
        }
    }

    fn cost_of(&self, id: usize, phase1: bool) -> Rat {
        if phase1 {
            if self.is_artificial(id) {
                Rat::ONE
            } else {
                Rat::ZERO
            }
        } else if id < self.n {
            self.v.obj[id].clone()
        } else {
            Rat::ZERO
        }
    }

    /// Simplex multipliers `y = (B^T)^{-1} c_B` for the given phase.
    fn multipliers(&self, phase1: bool) -> Vec<Rat> {
        let mut y: Vec<Rat> = self
            .basic
            .iter()
            .map(|&id| self.cost_of(id, phase1))
            .collect();
        self.btran(&mut y);
        y
    }

    /// Reduced cost of a nonbasic column against multipliers `y`.
    fn reduced_cost(&self, id: usize, y: &[Rat], phase1: bool) -> Rat {
        let mut dot = Rat::ZERO;
        if id < self.n {
            self.v.col_for_each(id, |i, val| {
                if !y[i].is_zero() {
                    dot += &(&val * &y[i]);
                }
            });
        } else if id < self.n + self.m {
            dot = y[id - self.n].clone();
        } else {
            dot = -&y[id - self.n - self.m];
        }
        &self.cost_of(id, phase1) - &dot
    }

    fn pivot(&mut self, slot: usize, entering: usize, d: Vec<Rat>, theta: &Rat) {
        if !theta.is_zero() {
            for (i, di) in d.iter().enumerate() {
                if i != slot && !di.is_zero() {
                    self.xb[i] -= &(di * theta);
                }
            }
        }
        self.xb[slot] = theta.clone();
        let leaving = self.basic[slot];
        self.slot_of[leaving] = None;
        self.basic[slot] = entering;
        self.slot_of[entering] = Some(slot as u32);
        let mut others = Vec::new();
        for (i, di) in d.iter().enumerate() {
            if i != slot && !di.is_zero() {
                others.push((i as u32, di.clone()));
            }
        }
        let diag = d[slot].clone();
        debug_assert!(!diag.is_zero());
        self.etas.push(Eta {
            r: slot,
            diag,
            others,
        });
    }

    /// Primal simplex with Bland's rule. Requires `xb >= 0` on entry.
    /// Artificial columns never enter; a zero-valued basic artificial hit by
    /// a pivot column is evicted immediately at step length zero, which keeps
    /// the iteration finite even under degeneracy.
    fn primal(&mut self, phase1: bool) -> PrimalEnd {
        loop {
            let y = self.multipliers(phase1);
            let mut entering = None;
            for id in 0..self.n + self.m {
                if self.slot_of[id].is_some() {
                    continue;
                }
                if self.reduced_cost(id, &y, phase1).is_negative() {
                    entering = Some(id);
                    break;
                }
            }
            let Some(q) = entering else {
                return PrimalEnd::Optimal;
            };
            let mut d = vec![Rat::ZERO; self.m];
            self.raw_col(q, &mut d);
            self.ftran(&mut d);
            // Guard: never let a zero-valued artificial move.
            let mut guard_slot = None;
            if self.has_artificials {
                for (slot, di) in d.iter().enumerate() {
                    if !di.is_zero()
                        && self.is_artificial(self.basic[slot])
                        && self.xb[slot].is_zero()
                    {
                        guard_slot = Some(slot);
                        break;
                    }
                }
            }
            let (slot, theta) = if let Some(slot) = guard_slot {
                (slot, Rat::ZERO)
            } else {
                let mut best: Option<(usize, Rat)> = None;
                for (slot, di) in d.iter().enumerate() {
                    if !di.is_positive() {
                        continue;
                    }
                    let ratio = &self.xb[slot] / di;
                    let better = match &best {
                        None => true,
                        Some((bslot, bratio)) => {
                            ratio < *bratio
                                || (ratio == *bratio && self.basic[slot] < self.basic[*bslot])
                        }
                    };
                    if better {
                        best = Some((slot, ratio));
                    }
                }
                match best {
                    Some(b) => b,
                    None => return PrimalEnd::Unbounded { entering: q, d },
                }
            };
            self.pivot(slot, q, d, &theta);
        }
    }

    /// Dual simplex. Requires dual feasibility (all phase-2 reduced costs
    /// nonnegative) on entry; maintains it. Leaving rule: most negative basic
    /// value (largest slot on ties), switching to smallest-basic-id after
    /// `50 (m + n)` iterations so termination is guaranteed.
    fn dual(&mut self) -> DualEnd {
        let cap = 50 * (self.m + self.n);
        let mut iters = 0usize;
        loop {
            iters += 1;
            let slot_r = if iters <= cap {
                let mut best: Option<(usize, &Rat)> = None;
                for (slot, v) in self.xb.iter().enumerate() {
                    if v.is_negative() {
                        let better = match &best {
                            None => true,
                            Some((_, bv)) => v <= *bv,
                        };
                        if better {
                            best = Some((slot, v));
                        }
                    }
                }
                best.map(|(s, _)| s)
            } else {
                let mut best: Option<usize> = None;
                for (slot, v) in self.xb.iter().enumerate() {
                    if v.is_negative() && best.is_none_or(|b| self.basic[slot] < self.basic[b]) {
                        best = Some(slot);
                    }
                }
                best
            };
            let Some(r) = slot_r else {
                return DualEnd::Optimal;
            };
            // rho = btran(e_r); alpha_j = rho . A_j for nonbasic j.
            let mut rho = vec![Rat::ZERO; self.m];
            rho[r] = Rat::ONE;
            self.btran(&mut rho);
            let y = self.multipliers(false);
            let mut best: Option<(usize, Rat)> = None; // (id, ratio)
            for id in 0..self.n + self.m {
                if self.slot_of[id].is_some() {
                    continue;
                }
                let mut alpha = Rat::ZERO;
                let mut ydot = Rat::ZERO;
                if id < self.n {
                    self.v.col_for_each(id, |i, val| {
                        if !rho[i].is_zero() {
                            alpha += &(&val * &rho[i]);
                        }
                        if !y[i].is_zero() {
                            ydot += &(&val * &y[i]);
                        }
                    });
                } else {
                    alpha = rho[id - self.n].clone();
                    ydot = y[id - self.n].clone();
                }
                if !alpha.is_negative() {
                    continue;
                }
                let rc = &self.cost_of(id, false) - &ydot;
                debug_assert!(!rc.is_negative(), "dual feasibility lost");
                let ratio = &rc / &(-&alpha);
                let better = match &best {
                    None => true,
                    Some((bid, bratio)) => ratio < *bratio || (ratio == *bratio && id < *bid),
                };
                if better {
                    best = Some((id, ratio));
                }
            }
            let Some((q, _)) = best else {
                return DualEnd::Infeasible(rho);
            };
            let mut d = vec![Rat::ZERO; self.m];
            self.raw_col(q, &mut d);
            self.ftran(&mut d);
            let theta = &self.xb[r] / &d[r];
            self.pivot(r, q, d, &theta);
        }
    }

    fn run(&mut self) -> Outcome {
        let primal_feasible = self.xb.iter().all(|v| !v.is_negative());
        if primal_feasible {
            return match self.primal(false) {
                PrimalEnd::Optimal => Outcome::Optimal,
                PrimalEnd::Unbounded { entering, d } => {
                    Outcome::Unbounded(self.internal_ray(entering, &d))
                }
            };
        }
        let dual_feasible = self.v.obj.iter().all(|c| !c.is_negative());
        if dual_feasible {
            return match self.dual() {
                DualEnd::Optimal => Outcome::Optimal,
                DualEnd::Infeasible(rho) => Outcome::Infeasible(rho),
            };
        }
        self.phase1()
    }

    /// Phase 1: swap artificials `-e_i` into rows with negative basic value,
    /// minimize the sum of artificials, then continue with the true
    /// objective. Artificials left basic at zero sit in rows the rest of the
    /// basis makes redundant; the primal guard keeps them pinned at zero.
    fn phase1(&mut self) -> Outcome {
        self.has_artificials = true;
        for slot in 0..self.m {
            if self.xb[slot].is_negative() {
                let art = self.n + self.m + slot;
                let slack = self.basic[slot];
                debug_assert_eq!(slack, self.n + slot);
                self.slot_of[slack] = None;
                self.basic[slot] = art;
                self.slot_of[art] = Some(slot as u32);
                self.xb[slot] = -&self.xb[slot];
                self.etas.push(Eta {
                    r: slot,
                    diag: Rat::from_int(-1),
                    others: Vec::new(),
                });
            }
        }
        match self.primal(true) {
            PrimalEnd::Unbounded { .. } => unreachable!("phase-1 objective is bounded below"),
            PrimalEnd::Optimal => {}
        }
        let phase1_value: Rat = self
            .basic
            .iter()
            .zip(&self.xb)
            .filter(|(id, _)| self.is_artificial(**id))
            .map(|(_, v)| v.clone())
            .sum();
        if phase1_value.is_positive() {
            // y = multipliers of the phase-1 objective; w = -y certifies
            // infeasibility of the internal system.
            let y = self.multipliers(true);
            let w: Vec<Rat> = y.iter().map(|v| -v).collect();
            return Outcome::Infeasible(w);
        }
        match self.primal(false) {
            PrimalEnd::Optimal => Outcome::Optimal,
            PrimalEnd::Unbounded { entering, d } => {
                Outcome::Unbounded(self.internal_ray(entering, &d))
            }
        }
    }

    /// Internal improving ray from a failed ratio test: entering column at 1,
    /// basic structurals at `-d`.
    fn internal_ray(&self, entering: usize, d: &[Rat]) -> Vec<Rat> {
        let mut ray = vec![Rat::ZERO; self.n];
        if entering < self.n {
            ray[entering] = Rat::ONE;
        }
        for (slot, di) in d.iter().enumerate() {
            let id = self.basic[slot];
            if id < self.n && !di.is_zero() {
                ray[id] = -di;
            }
        }
        ray
    }

    fn extract_optimal(&self) -> LPSolution {
        let mut xi = vec![Rat::ZERO; self.n];
        for (slot, id) in self.basic.iter().enumerate() {
            if *id < self.n {
                xi[*id] = self.xb[slot].clone();
            }
        }
        let x = self.v.cols_to_original(&xi);
        let y_int = self.multipliers(false);
        let y = self.v.dual_to_original(&y_int);
        let value = self.v.lp.objective_value(&x);
        let mut basis = Vec::new();
        for id in &self.basic {
            let orig = if *id < self.n {
                self.v.icols[*id].0 as usize
            } else if *id < self.n + self.m {
                self.v.lp.n_vars() + self.v.irows[*id - self.n].0 as usize
            } else {
                continue;
            };
            if !basis.contains(&orig) {
                basis.push(orig);
            }
        }
        LPSolution {
            status: Status::Optimal,
            value: XReal::Finite(value),
            primal: Some(x),
            dual: Some(y),
            basis: Some(basis),
            certificate: None,
        }
    }
}
