//! First-order transport equations ⟨b,∇u⟩ + cu = f solved along the
//! characteristics of the drift, their viscous regularizations, the
//! oscillation diagnostic near limit cycles, and the Picard machinery for
//! the state-dependent (nonlinear) problem.

mod characteristics;
mod nonlinear;

pub use characteristics::{
    characteristics_field, oscillation_indicator, solve_linear, viscous_solve, OscillationReport,
    TransportSolution, DEFAULT_TAIL_TOL,
};

pub use nonlinear::{
    branch_seed, check_conditions, count_branches, hyperbolicity_constants, solve_nonlinear,
    BranchTable, FrozenField, HyperbolicityConstants, NonlinearSolution,
};
