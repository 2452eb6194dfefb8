//! Exact finite linear programs: problem/solution types, dual construction,
//! certificate verification, and subgradient tests for LP value functions.
//!
//! Everything here is exact rational arithmetic. A solution is never returned
//! without its certificates re-verifying from scratch: feasibility residuals
//! must be exactly zero-or-correctly-signed and the primal/dual objective
//! equality must hold exactly.
//!
//! Dual sign conventions (documented once, used everywhere):
//! for a `Min` problem the reported dual vector `y` satisfies `y_i >= 0` on
//! `>=` rows, `y_i <= 0` on `<=` rows, free on `=` rows, with
//! `(G^T y)_j <= c_j` on nonnegative variables (equality on free ones) and
//! `y^T h` equal to the optimal value. For a `Max` problem all three sign
//! relations flip (`y_i <= 0` on `>=` rows, `G^T y >= c`), and `y^T h` again
//! equals the optimal value.

mod simplex;

use crate::error::Error;
use crate::rat::Rat;
use crate::xreal::XReal;

pub use simplex::solve;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    NonNeg,
    Free,
}

/// Column-major sparse rational matrix. Entries within a column are sorted by
/// row and unique; this is the storage the simplex engine iterates, so large
/// discretized instances build it directly (struct-of-arrays keeps the
/// footprint at ~28 bytes per entry).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<Rat>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> SparseMat {
        SparseMat {
            rows,
            cols,
            col_ptr: vec![0; cols + 1],
            row_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    /// Build from dense row data (test/construction convenience).
    pub fn from_dense_rows(rows: Vec<Vec<Rat>>) -> SparseMat {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n), "ragged rows");
        let mut mat = SparseMat::zero(m, n);
        for j in 0..n {
            for (i, row) in rows.iter().enumerate() {
                if !row[j].is_zero() {
                    mat.row_idx.push(i as u32);
                    mat.vals.push(row[j].clone());
                }
            }
            mat.col_ptr[j + 1] = mat.row_idx.len();
        }
        mat
    }

    /// Build column-by-column; each column's entries must be sorted by row.
    pub fn from_columns(rows: usize, cols: Vec<Vec<(u32, Rat)>>) -> SparseMat {
        let mut mat = SparseMat::zero(rows, cols.len());
        for (j, col) in cols.into_iter().enumerate() {
            debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0), "unsorted column");
            for (i, v) in col {
                assert!((i as usize) < rows, "row index out of range");
                if !v.is_zero() {
                    mat.row_idx.push(i);
                    mat.vals.push(v);
                }
            }
            mat.col_ptr[j + 1] = mat.row_idx.len();
        }
        mat
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    pub fn col(&self, j: usize) -> impl Iterator<Item = (usize, &Rat)> + '_ {
        let span = self.col_ptr[j]..self.col_ptr[j + 1];
        self.row_idx[span.clone()]
            .iter()
            .zip(&self.vals[span])
            .map(|(i, v)| (*i as usize, v))
    }

    /// Entry at `(i, j)`, zero when absent (binary search within the column).
    pub fn get(&self, i: usize, j: usize) -> Rat {
        let span = &self.row_idx[self.col_ptr[j]..self.col_ptr[j + 1]];
        match span.binary_search(&(i as u32)) {
            Ok(k) => self.vals[self.col_ptr[j] + k].clone(),
            Err(_) => Rat::ZERO,
        }
    }

    /// `G x`.
    pub fn times(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.cols, "dimension mismatch in G*x");
        let mut out = vec![Rat::ZERO; self.rows];
        for j in 0..self.cols {
            if x[j].is_zero() {
                continue;
            }
            for (i, v) in self.col(j) {
                out[i] += &(v * &x[j]);
            }
        }
        out
    }

    /// `G^T y`.
    pub fn transpose_times(&self, y: &[Rat]) -> Vec<Rat> {
        assert_eq!(y.len(), self.rows, "dimension mismatch in G^T*y");
        let mut out = vec![Rat::ZERO; self.cols];
        for j in 0..self.cols {
            let mut acc = Rat::ZERO;
            for (i, v) in self.col(j) {
                if !y[i].is_zero() {
                    acc += &(v * &y[i]);
                }
            }
            out[j] = acc;
        }
        out
    }

    pub fn transpose(&self) -> SparseMat {
        let mut cols: Vec<Vec<(u32, Rat)>> = vec![Vec::new(); self.rows];
        for j in 0..self.cols {
            for (i, v) in self.col(j) {
                cols[i].push((j as u32, v.clone()));
            }
        }
        SparseMat::from_columns(self.cols, cols)
    }
}

/// A finite LP with exact rational data.
#[derive(Clone, Debug)]
pub struct FiniteLP {
    pub direction: Direction,
    pub objective: Vec<Rat>,
    pub matrix: SparseMat,
    pub rhs: Vec<Rat>,
    pub senses: Vec<Sense>,
    pub bounds: Vec<Bound>,
}

impl FiniteLP {
    pub fn new(
        direction: Direction,
        objective: Vec<Rat>,
        matrix: SparseMat,
        rhs: Vec<Rat>,
        senses: Vec<Sense>,
        bounds: Vec<Bound>,
    ) -> Result<FiniteLP, Error> {
        let lp = FiniteLP {
            direction,
            objective,
            matrix,
            rhs,
            senses,
            bounds,
        };
        lp.validate()?;
        Ok(lp)
    }

    pub fn n_vars(&self) -> usize {
        self.matrix.cols()
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.objective.len() != self.matrix.cols() {
            return Err(Error::DimensionMismatch("objective"));
        }
        if self.rhs.len() != self.matrix.rows() {
            return Err(Error::DimensionMismatch("rhs"));
        }
        if self.senses.len() != self.matrix.rows() {
            return Err(Error::DimensionMismatch("row-sense"));
        }
        if self.bounds.len() != self.matrix.cols() {
            return Err(Error::DimensionMismatch("variable-lower-bounds"));
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[Rat]) -> Rat {
        self.objective
            .iter()
            .zip(x)
            .map(|(c, v)| c * v)
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. `certificate` carries a Farkas vector (length = rows) when
/// infeasible, or an unbounded primal ray (length = vars) when unbounded;
/// both re-verify exactly before the solution is returned.
#[derive(Clone, Debug)]
pub struct LPSolution {
    pub status: Status,
    pub value: XReal,
    pub primal: Option<Vec<Rat>>,
    pub dual: Option<Vec<Rat>>,
    pub basis: Option<Vec<usize>>,
    pub certificate: Option<Vec<Rat>>,
}

/// One named pass/fail item inside a report.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Primal/dual solve pair with analytic reference values and named checks.
#[derive(Clone, Debug)]
pub struct DualityReport {
    pub scenario: String,
    pub primal: LPSolution,
    pub dual: LPSolution,
    pub analytic_val_p: Option<XReal>,
    pub analytic_val_d: Option<XReal>,
    pub gap: Option<XReal>,
    pub checks: Vec<Check>,
}

impl DualityReport {
    /// `gap = primal.value - dual.value` under extended arithmetic; `None`
    /// when the difference is indeterminate.
    pub fn new(scenario: impl Into<String>, primal: LPSolution, dual: LPSolution) -> DualityReport {
        let gap = primal.value.checked_sub(&dual.value).ok();
        DualityReport {
            scenario: scenario.into(),
            primal,
            dual,
            analytic_val_p: None,
            analytic_val_d: None,
            gap,
            checks: Vec::new(),
        }
    }
}

/// The standard LP dual under the declared senses and bounds. Applying it
/// twice returns a program equivalent to the original (exactly equal for
/// `Min`/`>=`/nonnegative data; up to the documented sign normalization
/// otherwise).
pub fn dual_of(lp: &FiniteLP) -> FiniteLP {
    let m = lp.n_rows();
    let n = lp.n_vars();
    // Multiplier orientation making every dual variable nonnegative-or-free.
    let sign = |i: usize| -> Rat {
        let flip_on = match lp.direction {
            Direction::Min => Sense::Le,
            Direction::Max => Sense::Ge,
        };
        if lp.senses[i] == flip_on {
            Rat::from_int(-1)
        } else {
            Rat::ONE
        }
    };
    let dual_objective: Vec<Rat> = (0..m).map(|i| &sign(i) * &lp.rhs[i]).collect();
    let dual_bounds: Vec<Bound> = lp
        .senses
        .iter()
        .map(|s| match s {
            Sense::Eq => Bound::Free,
            _ => Bound::NonNeg,
        })
        .collect();
    let dual_senses: Vec<Sense> = lp
        .bounds
        .iter()
        .map(|b| match (lp.direction, b) {
            (_, Bound::Free) => Sense::Eq,
            (Direction::Min, Bound::NonNeg) => Sense::Le,
            (Direction::Max, Bound::NonNeg) => Sense::Ge,
        })
        .collect();
    // Dual matrix = (S G)^T where S applies the multiplier orientation.
    let mut cols: Vec<Vec<(u32, Rat)>> = vec![Vec::new(); m];
    for j in 0..n {
        for (i, v) in lp.matrix.col(j) {
            cols[i].push((j as u32, &sign(i) * v));
        }
    }
    FiniteLP {
        direction: match lp.direction {
            Direction::Min => Direction::Max,
            Direction::Max => Direction::Min,
        },
        objective: dual_objective,
        matrix: SparseMat::from_columns(n, cols),
        rhs: lp.objective.clone(),
        senses: dual_senses,
        bounds: dual_bounds,
    }
}

fn sense_ok(sense: Sense, lhs: &Rat, rhs: &Rat) -> bool {
    match sense {
        Sense::Ge => lhs >= rhs,
        Sense::Le => lhs <= rhs,
        Sense::Eq => lhs == rhs,
    }
}

/// Exact primal feasibility: residuals checked with no tolerance.
pub fn check_primal_feasible(lp: &FiniteLP, x: &[Rat]) -> Result<(), String> {
    if x.len() != lp.n_vars() {
        return Err("primal vector length".into());
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        if *b == Bound::NonNeg && x[j].is_negative() {
            return Err(format!("x[{j}] = {} violates x >= 0", x[j]));
        }
    }
    let gx = lp.matrix.times(x);
    for i in 0..lp.n_rows() {
        if !sense_ok(lp.senses[i], &gx[i], &lp.rhs[i]) {
            return Err(format!(
                "row {i}: {} {:?} {} fails",
                gx[i], lp.senses[i], lp.rhs[i]
            ));
        }
    }
    Ok(())
}

/// Exact dual feasibility under the documented sign conventions.
pub fn check_dual_feasible(lp: &FiniteLP, y: &[Rat]) -> Result<(), String> {
    if y.len() != lp.n_rows() {
        return Err("dual vector length".into());
    }
    for (i, s) in lp.senses.iter().enumerate() {
        let ok = match (lp.direction, s) {
            (_, Sense::Eq) => true,
            (Direction::Min, Sense::Ge) | (Direction::Max, Sense::Le) => !y[i].is_negative(),
            (Direction::Min, Sense::Le) | (Direction::Max, Sense::Ge) => !y[i].is_positive(),
        };
        if !ok {
            return Err(format!("dual sign on row {i}: {}", y[i]));
        }
    }
    let gty = lp.matrix.transpose_times(y);
    for j in 0..lp.n_vars() {
        let ok = match (lp.direction, lp.bounds[j]) {
            (_, Bound::Free) => gty[j] == lp.objective[j],
            (Direction::Min, Bound::NonNeg) => gty[j] <= lp.objective[j],
            (Direction::Max, Bound::NonNeg) => gty[j] >= lp.objective[j],
        };
        if !ok {
            return Err(format!(
                "dual constraint on column {j}: (G^T y)_j = {} vs c_j = {}",
                gty[j], lp.objective[j]
            ));
        }
    }
    Ok(())
}

/// Full optimality certificate: primal feasible, dual feasible, and exact
/// objective equality `c^T x = y^T h`.
pub fn check_optimal(lp: &FiniteLP, sol: &LPSolution) -> Result<(), String> {
    let x = sol.primal.as_ref().ok_or("missing primal")?;
    let y = sol.dual.as_ref().ok_or("missing dual")?;
    check_primal_feasible(lp, x)?;
    check_dual_feasible(lp, y)?;
    let cx = lp.objective_value(x);
    let yh: Rat = y.iter().zip(&lp.rhs).map(|(a, b)| a * b).sum();
    if cx != yh {
        return Err(format!("objective mismatch: c^T x = {cx}, y^T h = {yh}"));
    }
    if sol.value != XReal::Finite(cx) {
        return Err("reported value differs from c^T x".into());
    }
    Ok(())
}

/// Farkas infeasibility certificate `y`: sign-compatible with the senses,
/// `(G^T y)_j <= 0` on nonnegative variables (= 0 on free), and `y^T h > 0`.
/// Aggregating the rows with these weights yields `0 >= y^T h > 0` for any
/// feasible point, which is impossible.
pub fn check_farkas(lp: &FiniteLP, y: &[Rat]) -> Result<(), String> {
    if y.len() != lp.n_rows() {
        return Err("certificate length".into());
    }
    for (i, s) in lp.senses.iter().enumerate() {
        let ok = match s {
            Sense::Ge => !y[i].is_negative(),
            Sense::Le => !y[i].is_positive(),
            Sense::Eq => true,
        };
        if !ok {
            return Err(format!("certificate sign on row {i}"));
        }
    }
    let gty = lp.matrix.transpose_times(y);
    for j in 0..lp.n_vars() {
        let ok = match lp.bounds[j] {
            Bound::NonNeg => !gty[j].is_positive(),
            Bound::Free => gty[j].is_zero(),
        };
        if !ok {
            return Err(format!("certificate column {j}: (G^T y)_j = {}", gty[j]));
        }
    }
    let yh: Rat = y.iter().zip(&lp.rhs).map(|(a, b)| a * b).sum();
    if !yh.is_positive() {
        return Err(format!("y^T h = {yh} not positive"));
    }
    Ok(())
}

/// Unbounded-direction certificate: a recession ray that strictly improves
/// the objective.
pub fn check_ray(lp: &FiniteLP, r: &[Rat]) -> Result<(), String> {
    if r.len() != lp.n_vars() {
        return Err("ray length".into());
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        if *b == Bound::NonNeg && r[j].is_negative() {
            return Err(format!("ray component {j} negative"));
        }
    }
    let gr = lp.matrix.times(r);
    for i in 0..lp.n_rows() {
        let ok = match lp.senses[i] {
            Sense::Ge => !gr[i].is_negative(),
            Sense::Le => !gr[i].is_positive(),
            Sense::Eq => gr[i].is_zero(),
        };
        if !ok {
            return Err(format!("ray leaves feasible cone at row {i}"));
        }
    }
    let cr = lp.objective_value(r);
    let improving = match lp.direction {
        Direction::Min => cr.is_negative(),
        Direction::Max => cr.is_positive(),
    };
    if !improving {
        return Err(format!("ray objective rate {cr} does not improve"));
    }
    Ok(())
}

/// Witness of a failed subgradient inequality at one perturbation point.
#[derive(Clone, Debug)]
pub struct SubgradientWitness {
    pub point: Vec<Rat>,
    pub lhs: XReal,
    pub rhs: XReal,
}

#[derive(Clone, Debug)]
pub struct SubgradientReport {
    pub pass: bool,
    pub witnesses: Vec<SubgradientWitness>,
}

/// Tests `value_at(b') >= value_at(b) + <b' - b, ystar> - tol` over the given
/// perturbations; `+inf` on the left always passes, `-inf` never does.
pub fn subgradient_check(
    value_at: impl Fn(&[Rat]) -> XReal,
    b: &[Rat],
    ystar: &[Rat],
    perturbations: &[Vec<Rat>],
    tol: &Rat,
) -> Result<SubgradientReport, Error> {
    if ystar.len() != b.len() {
        return Err(Error::DimensionMismatch("ystar"));
    }
    let base = match value_at(b) {
        XReal::Finite(v) => v,
        _ => return Err(Error::Precondition("value-at-base-not-finite")),
    };
    let mut witnesses = Vec::new();
    for bp in perturbations {
        if bp.len() != b.len() {
            return Err(Error::DimensionMismatch("perturbation"));
        }
        let lhs = value_at(bp);
        if lhs == XReal::PosInf {
            continue;
        }
        let inner: Rat = bp
            .iter()
            .zip(b)
            .zip(ystar)
            .map(|((bpk, bk), yk)| &(bpk - bk) * yk)
            .sum();
        let rhs = &(&base + &inner) - tol;
        let holds = match &lhs {
            XReal::Finite(v) => *v >= rhs,
            XReal::NegInf => false,
            XReal::PosInf => unreachable!(),
        };
        if !holds && witnesses.len() < 8 {
            witnesses.push(SubgradientWitness {
                point: bp.clone(),
                lhs: lhs.clone(),
                rhs: XReal::Finite(rhs),
            });
        }
    }
    Ok(SubgradientReport {
        pass: witnesses.is_empty(),
        witnesses,
    })
}
