//! A discretized model of the classical infinite-dimensional program with a
//! duality gap: minimize `∫ t·x(t) dt + α r` over `x >= 0, r >= 0` subject
//! to `∫_t^1 x(s) ds + r >= b(t)` on `[0, 1]`, paired with the dual
//! `maximize ∫ b z` over `z >= 0` with `∫_0^t z <= t` and `∫_0^1 z <= α`.
//!
//! Right-hand sides live on a uniform grid as piecewise-constant functions.
//! Two discretizations bracket the continuum pair from opposite sides:
//! *exact* mode enforces the primal constraint at each cell's infimum (the
//! right endpoint — valid because the left side is nonincreasing when
//! `x >= 0`), so its feasible points remain feasible in the continuum and
//! its value sits at or above `val(P)`; the dual discretization's feasible
//! points embed into the continuum dual, so its value sits at or below
//! `val(D)`. A persistent gap between the two as the grid refines is then
//! genuine, not a discretization artifact. *Sampled* mode (left endpoints)
//! relaxes the primal and is kept as a contrast.
//!
//! The module also carries the analytic value formulas for indicator
//! right-hand sides, the halving partitions and `2^{k/4}`-height stacks
//! whose norms stay bounded while their essential suprema diverge, the
//! unboundedness witnesses they induce, and the discontinuity scenario
//! where a vanishing perturbation of the right-hand side lifts the value
//! by a fixed jump.
//!
//! Irrational heights (`2^{k/4}`) and norms enter as exact dyadic embeddings
//! of their nearest doubles, so all LP data stay rational; comparisons
//! against analytic formulas carry the usual 1e-12 floating tolerance.

use crate::lp::{
    check_optimal, solve, Bound, Direction, FiniteLP, LPSolution, Sense, SparseMat, Status,
};
use crate::oracle::{embedded_sqrt, Dim, FnOracle, Point};
use crate::rat::{rat, Rat};
use crate::xreal::XReal;
use crate::Error;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::fmt;
use std::str::FromStr;

/// A piecewise-constant function on `[0, 1]`: `values[i]` holds on cell
/// `[i/n, (i+1)/n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridFn {
    cells: usize,
    values: Vec<Rat>,
}

impl GridFn {
    pub fn from_values(values: Vec<Rat>) -> GridFn {
        assert!(!values.is_empty(), "at least one cell");
        GridFn {
            cells: values.len(),
            values,
        }
    }

    pub fn constant(cells: usize, v: Rat) -> GridFn {
        GridFn::from_values(vec![v; cells])
    }

    pub fn zero(cells: usize) -> GridFn {
        GridFn::constant(cells, Rat::ZERO)
    }

    /// Indicator of `[lo, hi)` for grid-aligned endpoints.
    pub fn indicator(cells: usize, lo: &Rat, hi: &Rat) -> Result<GridFn, Error> {
        let l = cell_node(lo, cells).ok_or(Error::Precondition("endpoint-not-grid-aligned"))?;
        let h = cell_node(hi, cells).ok_or(Error::Precondition("endpoint-not-grid-aligned"))?;
        let mut values = vec![Rat::ZERO; cells];
        for v in values.iter_mut().take(h).skip(l) {
            *v = Rat::ONE;
        }
        Ok(GridFn::from_values(values))
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// Value on cell `i` (0-based).
    pub fn get(&self, i: usize) -> &Rat {
        &self.values[i]
    }

    pub fn set(&mut self, i: usize, v: Rat) {
        self.values[i] = v;
    }

    /// `‖·‖² = Σ values_i² / n`, exact.
    pub fn norm_sq(&self) -> Rat {
        self.dot(self)
    }

    /// Serialize as `cells=n` followed by one rational per line.
    pub fn to_csv(&self) -> String {
        let mut out = format!("cells={}\n", self.cells);
        for v in &self.values {
            out.push_str(&format!("{v}\n"));
        }
        out
    }

    pub fn from_csv(s: &str) -> Result<GridFn, Error> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or(Error::Precondition("csv-header"))?;
        let n: usize = header
            .trim()
            .strip_prefix("cells=")
            .and_then(|t| t.parse().ok())
            .ok_or(Error::Precondition("csv-header"))?;
        let values: Vec<Rat> = lines
            .map(|l| Rat::from_str(l).map_err(|_| Error::Precondition("csv-value")))
            .collect::<Result<_, _>>()?;
        if n == 0 || values.len() != n {
            return Err(Error::Precondition("csv-length"));
        }
        Ok(GridFn::from_values(values))
    }
}

impl fmt::Display for GridFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cells={} [", self.cells)?;
        for (i, v) in self.values.iter().take(6).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        if self.cells > 6 {
            write!(f, ", …")?;
        }
        write!(f, "]")
    }
}

impl Point for GridFn {
    fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.cells, other.cells, "grids differ");
        GridFn::from_values(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
    fn minus(&self, other: &Self) -> Self {
        assert_eq!(self.cells, other.cells, "grids differ");
        GridFn::from_values(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
    fn scale(&self, t: &Rat) -> Self {
        GridFn::from_values(self.values.iter().map(|a| a * t).collect())
    }
    /// L² pairing of step functions: `Σ v_i w_i / n`.
    fn dot(&self, other: &Self) -> Rat {
        assert_eq!(self.cells, other.cells, "grids differ");
        let s: Rat = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum();
        &s / &Rat::from_int(self.cells as i64)
    }
    fn render(&self) -> String {
        format!("{self}")
    }
}

/// `v` as a node index of the `n`-cell grid (`v·n` must be an integer in
/// `0..=n`).
fn cell_node(v: &Rat, n: usize) -> Option<usize> {
    let t = (v * &Rat::from_int(n as i64)).to_integer()?;
    (0 <= t && t <= n as i64).then_some(t as usize)
}

/// A continuous piecewise-linear function with breakpoints at the grid
/// nodes `0, 1/n, …, 1`: `nodes[i]` is the value at `i/n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceLin {
    pub cells: usize,
    pub nodes: Vec<Rat>,
}

/// `A(x, r) = ∫_t^1 x(s) ds + r`, integrated exactly.
pub fn apply_a(x: &GridFn, r: &Rat) -> PieceLin {
    let n = x.cells();
    let mut nodes = vec![Rat::ZERO; n + 1];
    let inv = rat(1, n as i64);
    let mut acc = r.clone();
    nodes[n] = acc.clone();
    for i in (0..n).rev() {
        acc = &acc + &(x.get(i) * &inv);
        nodes[i] = acc.clone();
    }
    PieceLin { cells: n, nodes }
}

/// `A*(y) = (t ↦ ∫_0^t y, ∫_0^1 y)`, integrated exactly.
pub fn apply_a_star(y: &GridFn) -> (PieceLin, Rat) {
    let n = y.cells();
    let mut nodes = vec![Rat::ZERO; n + 1];
    let inv = rat(1, n as i64);
    let mut acc = Rat::ZERO;
    for i in 0..n {
        acc = &acc + &(y.get(i) * &inv);
        nodes[i + 1] = acc.clone();
    }
    (PieceLin { cells: n, nodes }, acc)
}

/// `∫ y·p` for a step function `y` and a piecewise-linear `p` on the same
/// grid: the trapezoid value is exact because `p` is linear on each cell.
pub fn pairing(y: &GridFn, p: &PieceLin) -> Rat {
    assert_eq!(y.cells(), p.cells, "grids differ");
    let n = y.cells();
    let mut acc = Rat::ZERO;
    for i in 0..n {
        let avg = &(&p.nodes[i] + &p.nodes[i + 1]) / &rat(2, 1);
        acc = &acc + &(y.get(i) * &avg);
    }
    &acc / &Rat::from_int(n as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sampled,
}

#[derive(Clone, Debug)]
pub struct KretschmerProblem {
    pub alpha: Rat,
    pub b: GridFn,
    pub mode: Mode,
}

impl KretschmerProblem {
    pub fn new(alpha: Rat, b: GridFn, mode: Mode) -> KretschmerProblem {
        assert!(!alpha.is_negative(), "alpha must be nonnegative");
        KretschmerProblem { alpha, b, mode }
    }
}

/// Cells (1-based) where the right-hand side is positive: the only cells
/// whose constraints can bind, since the constraint's left side is
/// nonnegative.
pub fn support_cells(b: &GridFn) -> Vec<usize> {
    (1..=b.cells()).filter(|i| b.get(i - 1).is_positive()).collect()
}

/// The primal discretization: variables `x_1…x_n >= 0` and `r >= 0`,
/// objective `Σ x_i (2i-1)/(2n²) + α r`, and one `>=` row per positive cell
/// of `b` (rows with `b_i <= 0` are vacuous and omitted). Exact mode bounds
/// the nonincreasing `A(x, r)` by its cell infimum (`Σ_{j>i} x_j/n + r`);
/// sampled mode uses the left endpoint (`Σ_{j>=i} x_j/n + r`).
pub fn discretize_primal(p: &KretschmerProblem) -> Result<FiniteLP, Error> {
    let n = p.b.cells();
    let support = support_cells(&p.b);
    let m = support.len();
    let inv = rat(1, n as i64);
    let two_nsq = Rat::from_int(2 * (n as i64) * (n as i64));

    let mut objective = Vec::with_capacity(n + 1);
    for j in 1..=n {
        objective.push(&Rat::from_int(2 * j as i64 - 1) / &two_nsq);
    }
    objective.push(p.alpha.clone());

    let mut cols: Vec<Vec<(u32, Rat)>> = Vec::with_capacity(n + 1);
    let mut idx = 0usize; // number of support cells accounted for so far
    for j in 1..=n {
        // Rows whose cell index i satisfies i < j (exact) or i <= j (sampled).
        while idx < m && support[idx] < j {
            idx += 1;
        }
        let count = match p.mode {
            Mode::Exact => idx,
            Mode::Sampled => {
                if idx < m && support[idx] == j {
                    idx + 1
                } else {
                    idx
                }
            }
        };
        cols.push((0..count).map(|k| (k as u32, inv.clone())).collect());
    }
    cols.push((0..m).map(|k| (k as u32, Rat::ONE)).collect());

    let rhs: Vec<Rat> = support.iter().map(|&i| p.b.get(i - 1).clone()).collect();
    FiniteLP::new(
        Direction::Min,
        objective,
        SparseMat::from_columns(m, cols),
        rhs,
        vec![Sense::Ge; m],
        vec![Bound::NonNeg; n + 1],
    )
}

/// The dual discretization: variables `z_1…z_n >= 0`, prefix constraints
/// `Σ_{j<=i} z_j/n <= i/n` (piecewise-linear comparison is exact at
/// breakpoints), the mass constraint `Σ z_j/n <= α`, and objective
/// `max Σ b_i z_i/n`.
pub fn discretize_dual(p: &KretschmerProblem) -> Result<FiniteLP, Error> {
    let n = p.b.cells();
    let inv = rat(1, n as i64);
    let objective: Vec<Rat> = (0..n).map(|i| p.b.get(i) * &inv).collect();
    let mut cols: Vec<Vec<(u32, Rat)>> = Vec::with_capacity(n);
    for j in 1..=n {
        let mut col: Vec<(u32, Rat)> = ((j - 1)..n).map(|i| (i as u32, inv.clone())).collect();
        col.push((n as u32, inv.clone()));
        cols.push(col);
    }
    let mut rhs: Vec<Rat> = (1..=n).map(|i| rat(i as i64, n as i64)).collect();
    rhs.push(p.alpha.clone());
    FiniteLP::new(
        Direction::Max,
        objective,
        SparseMat::from_columns(n + 1, cols),
        rhs,
        vec![Sense::Le; n + 1],
        vec![Bound::NonNeg; n],
    )
}

/// When the right-hand side peaks on its last positive cell `u`, the
/// exact-mode optimum has a one-line certificate. With `κ = (2u+1)/(2n)`
/// the cost of covering everything from cell `u+1`: mass `n·b_u` there is
/// optimal when it is affordable (`u < n`, `κ <= α`, value `κ b_u`);
/// otherwise `r = b_u` covers every row at value `α b_u` — forced outright
/// when the last grid cell itself is positive. Either way the dual puts
/// weight `min{κ, α}` (resp. `α`) on the peak row, and the claimed pair is
/// re-verified exactly before being returned. `None` means the shape rules
/// the shortcut out and the caller should pivot.
fn certificate_solution(p: &KretschmerProblem, lp: &FiniteLP) -> Option<LPSolution> {
    let n = p.b.cells();
    let support = support_cells(&p.b);
    let mut primal = vec![Rat::ZERO; n + 1];
    let mut dual = vec![Rat::ZERO; support.len()];
    let mut value = Rat::ZERO;
    if let Some(&u) = support.last() {
        let b_u = p.b.get(u - 1);
        if support.iter().any(|&i| p.b.get(i - 1) > b_u) {
            return None; // the peak is not at the end
        }
        let kappa = rat(2 * u as i64 + 1, 2 * n as i64);
        if u < n && kappa <= p.alpha {
            primal[u] = b_u * &Rat::from_int(n as i64);
            value = b_u * &kappa;
            *dual.last_mut()? = kappa;
        } else {
            primal[n] = b_u.clone();
            value = &p.alpha * b_u;
            *dual.last_mut()? = p.alpha.clone();
        }
    }
    let sol = LPSolution {
        status: Status::Optimal,
        value: XReal::Finite(value),
        primal: Some(primal),
        dual: Some(dual),
        basis: None,
        certificate: None,
    };
    check_optimal(lp, &sol).ok().map(|()| sol)
}

/// Build and solve the primal discretization. Exact-mode instances whose
/// right-hand side peaks at its last positive cell are closed by an exact
/// optimality certificate instead of pivoting; everything else goes through
/// the simplex solver.
pub fn solve_discretized(p: &KretschmerProblem) -> Result<LPSolution, Error> {
    let lp = discretize_primal(p)?;
    if p.mode == Mode::Exact {
        if let Some(sol) = certificate_solution(p, &lp) {
            return Ok(sol);
        }
    }
    solve(&lp)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyticValues {
    pub val_p: Rat,
    pub val_d: Rat,
    pub primal_attained: bool,
    pub dual_attained: bool,
}

/// Right-hand sides with closed-form continuum values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RhsSpec {
    /// `b = χ_{[0,δ] ∪ [γ,1]}`: the trailing block forces `r >= 1`, so
    /// `val(P) = α` while `val(D) = min{1, α}` — a gap of `α - 1` when
    /// `α > 1`.
    TwoSided { delta: Rat, gamma: Rat },
    /// `b = χ_[0,δ]`: no gap, `val(P) = val(D) = min{δ, α}`, with the primal
    /// attained exactly when `α <= δ`.
    LeftOnly { delta: Rat },
}

pub fn analytic_values(alpha: &Rat, spec: &RhsSpec) -> Result<AnalyticValues, Error> {
    if !alpha.is_positive() {
        return Err(Error::OutOfRange("alpha"));
    }
    match spec {
        RhsSpec::TwoSided { delta, gamma } => {
            if delta.is_negative() {
                return Err(Error::OutOfRange("delta"));
            }
            if gamma < delta || gamma >= &Rat::ONE {
                return Err(Error::OutOfRange("gamma"));
            }
            Ok(AnalyticValues {
                val_p: alpha.clone(),
                val_d: if alpha < &Rat::ONE {
                    alpha.clone()
                } else {
                    Rat::ONE
                },
                primal_attained: true,
                dual_attained: true,
            })
        }
        RhsSpec::LeftOnly { delta } => {
            if !delta.is_positive() || delta >= &Rat::ONE {
                return Err(Error::OutOfRange("delta"));
            }
            let v = if alpha < delta { alpha } else { delta };
            Ok(AnalyticValues {
                val_p: v.clone(),
                val_d: v.clone(),
                primal_attained: alpha <= delta,
                dual_attained: true,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttainedValue {
    pub value: Rat,
    pub attained: bool,
}

/// With `α = 0` the value function is the indicator of its domain, and
/// every grid function (bounded by construction) lies inside: the value is
/// `0` and it is attained.
pub fn value_alpha_zero(_b: &GridFn) -> AttainedValue {
    AttainedValue {
        value: Rat::ZERO,
        attained: true,
    }
}

/// A halving partition of a cell set: `levels[k]` holds `|A|·2^{-(k+1)}`
/// cells, pairwise disjoint; the final `|A|·2^{-N}` cells stay unused so
/// every level keeps its exact dyadic measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurePartition {
    pub base_cells: Vec<u32>,
    pub levels: Vec<Vec<u32>>,
    pub unused: Vec<u32>,
}

pub fn split_measure(a: &[u32], levels: u32) -> Result<MeasurePartition, Error> {
    let div = 1usize
        .checked_shl(levels)
        .ok_or(Error::GridTooCoarse)?;
    if a.is_empty() || a.len() % div != 0 {
        return Err(Error::GridTooCoarse);
    }
    let mut out = Vec::with_capacity(levels as usize);
    let mut start = 0usize;
    let mut size = a.len();
    for _ in 0..levels {
        size /= 2;
        out.push(a[start..start + size].to_vec());
        start += size;
    }
    Ok(MeasurePartition {
        base_cells: a.to_vec(),
        levels: out,
        unused: a[start..].to_vec(),
    })
}

/// The dyadic embedding of `2^{k/4}` (exact whenever `k ≡ 0 mod 4`).
pub fn quarter_pow_height(k: u32) -> Rat {
    Rat::from_f64((k as f64 * 0.25).exp2()).expect("finite height")
}

#[derive(Clone, Debug)]
pub struct YtildeBuild {
    pub ytilde: GridFn,
    /// Cumulative squared norms `‖ỹ_k‖²` for `k = 1..N`, exact in the
    /// embedded heights; the last entry tracks `(√2+1)(1-2^{-N/2})β`.
    pub norms_sq: Vec<Rat>,
    /// `2^{N/4}`, the essential supremum — diverging while the norm stays
    /// bounded.
    pub ess_sup: Rat,
}

/// Stack the heights `2^{k/4}` on the partition levels: bounded in L²,
/// unbounded in essential supremum.
pub fn build_ytilde(part: &MeasurePartition, grid: usize) -> YtildeBuild {
    let mut values = vec![Rat::ZERO; grid];
    let mut norms_sq = Vec::with_capacity(part.levels.len());
    let mut acc = Rat::ZERO;
    let mut ess_sup = Rat::ZERO;
    for (k0, level) in part.levels.iter().enumerate() {
        let h = quarter_pow_height(k0 as u32 + 1);
        for &cell in level {
            assert!(cell >= 1 && cell as usize <= grid, "cell escapes the grid");
            values[cell as usize - 1] = h.clone();
        }
        let measure = rat(level.len() as i64, grid as i64);
        acc = &acc + &(&(&h * &h) * &measure);
        norms_sq.push(acc.clone());
        ess_sup = h;
    }
    YtildeBuild {
        ytilde: GridFn::from_values(values),
        norms_sq,
        ess_sup,
    }
}

#[derive(Clone, Debug)]
pub struct UnboundednessWitness {
    pub y_n: GridFn,
    /// `η₀(-1 + 2^{n/4} ε)`: the analytic floor under the value at `y_n`.
    pub analytic_bound: Rat,
    /// Exact-mode LP value at `b = y_n` — sits above the continuum value,
    /// hence above the floor.
    pub discrete_value: XReal,
}

/// The value function is unbounded above near `0`: stacking scaled heights
/// on `]η₀, η₁[` produces right-hand sides of bounded norm whose values
/// exceed `η₀(-1 + 2^{n/4}ε) → ∞`.
pub fn unboundedness_witness(
    alpha: &Rat,
    eta0: &Rat,
    eta1: &Rat,
    level: u32,
    eps: &Rat,
    grid: usize,
) -> Result<UnboundednessWitness, Error> {
    if !eta0.is_positive() {
        return Err(Error::OutOfRange("eta0"));
    }
    if eta1 <= eta0 {
        return Err(Error::OutOfRange("eta1-vs-eta0"));
    }
    if eta1 >= &Rat::ONE {
        return Err(Error::OutOfRange("eta1"));
    }
    if eta1 >= alpha {
        return Err(Error::OutOfRange("eta1-vs-alpha"));
    }
    if !eps.is_positive() {
        return Err(Error::OutOfRange("eps"));
    }
    if level == 0 {
        return Err(Error::OutOfRange("level"));
    }
    let i0 = cell_node(eta0, grid).ok_or(Error::Precondition("eta0-not-grid-aligned"))?;
    let i1 = cell_node(eta1, grid).ok_or(Error::Precondition("eta1-not-grid-aligned"))?;
    let a: Vec<u32> = ((i0 + 1)..=i1).map(|i| i as u32).collect();
    let part = split_measure(&a, level)?;
    let built = build_ytilde(&part, grid);
    let y_n = built.ytilde.scale(eps);
    let analytic_bound = eta0 * &(&(eps * &built.ess_sup) - &Rat::ONE);
    let problem = KretschmerProblem::new(alpha.clone(), y_n.clone(), Mode::Exact);
    let discrete_value = solve_discretized(&problem)?.value;
    if let XReal::Finite(v) = &discrete_value {
        debug_assert!(v >= &analytic_bound, "discrete value dips under the floor");
    }
    Ok(UnboundednessWitness {
        y_n,
        analytic_bound,
        discrete_value,
    })
}

#[derive(Clone, Debug)]
pub struct DiscontinuityRow {
    /// `None` marks the unperturbed base case `b = χ_[0,δ]`.
    pub gamma: Option<Rat>,
    /// `‖χ_[γ,1]‖ = sqrt(1-γ)`; `0` for the base row.
    pub perturbation_norm: Rat,
    pub discrete_val_p: XReal,
    pub analytic_val_p: Rat,
}

/// Restricting the value function to its domain does not make it
/// continuous: appending the vanishing tail `χ_[γ,1]` to `χ_[0,δ]` lifts
/// the value from `δ` to `α` however close `γ` is to `1`.
pub fn discontinuity_scenario(
    alpha: &Rat,
    delta: &Rat,
    gammas: &[Rat],
    grid: usize,
) -> Result<Vec<DiscontinuityRow>, Error> {
    if alpha <= &Rat::ONE {
        return Err(Error::OutOfRange("alpha"));
    }
    if !delta.is_positive() || delta >= &Rat::ONE {
        return Err(Error::OutOfRange("delta"));
    }
    cell_node(delta, grid).ok_or(Error::Precondition("delta-not-grid-aligned"))?;
    let base = GridFn::indicator(grid, &Rat::ZERO, delta)?;
    let mut rows = Vec::with_capacity(gammas.len() + 1);
    for gamma in gammas {
        if gamma <= delta || gamma >= &Rat::ONE {
            return Err(Error::OutOfRange("gamma"));
        }
        cell_node(gamma, grid).ok_or(Error::Precondition("gamma-not-grid-aligned"))?;
        let b = base.plus(&GridFn::indicator(grid, gamma, &Rat::ONE)?);
        let problem = KretschmerProblem::new(alpha.clone(), b, Mode::Exact);
        rows.push(DiscontinuityRow {
            gamma: Some(gamma.clone()),
            perturbation_norm: embedded_sqrt(&(&Rat::ONE - gamma)),
            discrete_val_p: solve_discretized(&problem)?.value,
            analytic_val_p: alpha.clone(),
        });
    }
    let base_problem = KretschmerProblem::new(alpha.clone(), base, Mode::Exact);
    rows.push(DiscontinuityRow {
        gamma: None,
        perturbation_norm: Rat::ZERO,
        discrete_val_p: solve_discretized(&base_problem)?.value,
        analytic_val_p: delta.clone(),
    });
    Ok(rows)
}

/// The exact-mode discrete value as a function of the right-hand side, for
/// a fixed `α` and grid: a sublinear, rational-valued oracle.
pub struct KretschmerValueOracle {
    pub alpha: Rat,
    pub cells: usize,
}

impl FnOracle for KretschmerValueOracle {
    type P = GridFn;

    fn dim(&self) -> Dim {
        Dim::Finite(self.cells)
    }
    fn eval(&self, x: &GridFn) -> Result<XReal, Error> {
        let p = KretschmerProblem::new(self.alpha.clone(), x.clone(), Mode::Exact);
        Ok(solve_discretized(&p)?.value)
    }
    fn sample_domain(&self, count: usize, seed: u64) -> Vec<GridFn> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                GridFn::from_values(
                    (0..self.cells)
                        .map(|_| rat(rng.gen_range(-8..=16), 8))
                        .collect(),
                )
            })
            .collect()
    }
    fn exact(&self) -> bool {
        true
    }
}
