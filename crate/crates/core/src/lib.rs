//! Numerical toolkit for Weyl sums and the size of their large values.
//!
//! * [`weyl`]: Weyl sums `S_d(x; N)` by direct and recurrence evaluation.
//! * [`completion`]: the completed sum `W_d(x; N)` dominating all partial sums.
//! * [`meanvalue`]: Monte Carlo moments and exact Vinogradov solution counts.
//! * [`covering`]: grid covers of the superlevel sets of `W_d`.
//! * [`dimension`]: closed-form Hausdorff dimension upper bounds.
//!
//! Every stochastic routine is seeded and bitwise reproducible for any number
//! of rayon worker threads.

pub mod completion;
pub mod covering;
pub mod dimension;
pub mod error;
pub mod meanvalue;
pub mod parallel;
pub mod phase;
pub mod sweep;
pub mod weyl;

pub use completion::{completed_sum, domination_check, inner_spectrum, Completer, CompletionMode, CompletionReport};
pub use covering::{
    box_side_lengths, count_superlevel_boxes, dyadic_schedule, stability_check, theoretical_box_bound, BoxGrid,
    BoxSpec, Criterion, StabilityReport,
};
pub use dimension::{asymptotic_constants, critical_t, dim_bound_simplified, dim_upper_bound, DimBoundReport};
pub use error::{Error, Result};
pub use meanvalue::{completed_moment, mc_moment, moment_exponent_fit, s_of, vinogradov_count, MomentEstimate};
pub use phase::Turn;
pub use sweep::{grid_sweep, Functional, GridSweep};
pub use weyl::{
    eval_phase, phase_sequence, weyl_sum_direct, weyl_sum_fast, weyl_sum_weighted, PhasePoint, SumParams,
    WeightSequence,
};
