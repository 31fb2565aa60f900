//! Sparse and banded linear algebra for periodic stencil operators.

mod band;
mod csr;
mod periodic;

pub use band::{BandLu, BandMatrix};
pub use csr::Csr;
pub use periodic::{factor_csr, PeriodicSolver};
