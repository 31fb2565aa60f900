//! Discretization of L_ε = εΔ + b·∇ + c (positive-Laplacian convention),
//! principal-eigenpair computation by shifted inverse iteration, ε-sweeps
//! with warm starts, the drift-eliminating potential substitution for
//! gradient fields, and pressure-style predictions of the ε → 0 eigenvalue
//! limit from the recurrent skeleton.

mod assemble;
mod eigen;
mod pressure;
mod transform;

pub use assemble::{assemble, bernoulli, OperatorAssembly, Scheme};
pub use eigen::{epsilon_sweep, principal_eigenpair, principal_eigenpair_warm, EigenResult, SweepEntry};
pub use pressure::{pressure_prediction, Convention, PressureCandidate, PressureReport};
pub use transform::{gradient_transform, substituted_assembly, GradientTransform};
