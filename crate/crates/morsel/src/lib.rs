//! Numerical laboratory for advection-diffusion operators with a small
//! diffusion parameter on periodic domains (the circle and the flat torus).
//!
//! The crate studies the operator `L u = ε Δu + b·∇u + c u` (with the
//! sign convention that makes `Δ` positive semidefinite) and the transport
//! problems that emerge from it as `ε → 0`:
//!
//! * principal eigenvalues and eigenvectors of the discretized operator,
//!   with Péclet-robust exponential-fitted stencils ([`spectral`]);
//! * the dynamics of the drift field — fixed points, periodic orbits,
//!   basins of attraction ([`dynsys`]) — and Lyapunov-type certificates
//!   for gradient-plus-rotation decompositions ([`lyapunov`]);
//! * how eigenvector mass concentrates on attracting or repelling
//!   structures as the diffusion vanishes ([`concentration`]);
//! * the limiting first-order equation `b·∇u + c u = f`, solved by
//!   integrating along characteristics, and its quasilinear variant
//!   solved by Picard iteration with solution-branch counting
//!   ([`transport`]).
//!
//! Supporting layers: periodic grids and discrete calculus ([`mesh`]), a
//! coefficient expression language with exact symbolic derivatives
//! ([`expr`]), banded/low-rank direct solvers ([`linalg`]), a registry of
//! named benchmark problems ([`fixtures`]), and a batch-run configuration
//! format with CSV/JSON reporting ([`config`], [`report`], [`cli`]).

pub mod cli;
pub mod concentration;
pub mod config;
pub mod dynsys;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod linalg;
pub mod lyapunov;
pub mod mesh;
pub mod report;
pub mod spectral;
pub mod transport;

pub use error::{Error, Result};
