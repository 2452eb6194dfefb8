//! Shared fixtures for the benchmark targets: representative instances of
//! each solver-heavy path, built once so the timed bodies measure solving
//! rather than setup.

use gaplab_core::kretschmer::{GridFn, KretschmerProblem, Mode};
use gaplab_core::lp::FiniteLP;
use gaplab_core::rat;
use gaplab_core::Rat;

/// The unit-gap grid instance at a mid-size resolution: indicator endpoints
/// at both ends of the interval with budget above one.
pub fn gap_problem(cells: usize) -> KretschmerProblem {
    let b = GridFn::constant(cells, Rat::ONE);
    KretschmerProblem::new(rat(2, 1), b, Mode::Exact)
}

/// The shrinking-bracket instance: left half-indicator right-hand side.
pub fn half_indicator_problem(cells: usize) -> KretschmerProblem {
    let b = GridFn::indicator(cells, &Rat::ZERO, &rat(1, 2)).expect("aligned endpoint");
    KretschmerProblem::new(rat(2, 1), b, Mode::Exact)
}

/// The truncated sequence-space program for a three-term right-hand side.
pub fn sequence_lp(trunc: u32) -> FiniteLP {
    use gaplab_core::hilbert::{truncated_lp, HilbertModel, OddVector};
    let model = HilbertModel::new(trunc);
    let y = OddVector::from_pairs([
        (1u32, rat(3, 8)),
        (trunc / 2, rat(5, 4)),
        (trunc, rat(7, 8)),
    ]);
    truncated_lp(&model, &y).expect("support in range")
}
