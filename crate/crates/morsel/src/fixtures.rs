//! Compiled-in registry of benchmark problems. Every fixture bundles a
//! grid, a drift field, coefficient expressions, and a default ε sweep, and
//! is tagged by the phenomenon it exercises so runs can be discovered by
//! behavior (`by_tag`) or by name (`fixture`).

use crate::dynsys::{builtin_field, expression_field, FieldSpec};
use crate::error::{Error, Result};
use crate::expr::SmoothExpr;
use crate::mesh::{build_grid, PeriodicGrid};
use std::f64::consts::TAU;

/// Phenomenon labels used to group fixtures.
pub const TAGS: &[&str] = &[
    "eigen-limit",
    "gradient-weight",
    "cycle-measure",
    "lyapunov",
    "transport",
    "nonlinear",
    "pressure",
];

/// A named, fully specified benchmark problem.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    /// One-line description of what the problem demonstrates.
    pub summary: &'static str,
    pub tags: &'static [&'static str],
    pub dim: usize,
    /// Default grid resolution per axis.
    pub n: usize,
    /// Drift family name understood by the field registry, or "expression".
    pub family: &'static str,
    /// Component expressions when `family == "expression"`.
    pub bx: Option<&'static str>,
    pub by: Option<&'static str>,
    /// Zero-order coefficient of the operator / transport problem.
    pub c: &'static str,
    /// Right-hand side for transport problems.
    pub f: Option<&'static str>,
    /// Gradient-weight exponent φ (measures of the form e^{−φ/ε}u²).
    pub phi: Option<&'static str>,
    /// Lyapunov candidate L for the drift decomposition −∇L + Ω.
    pub lyapunov: Option<&'static str>,
    /// Default ε sweep, strictly decreasing.
    pub epsilons: &'static [f64],
    /// State interval for the quasilinear problem, when it applies.
    pub lambda_range: Option<(f64, f64)>,
    /// Root bracket for branch counting, when it applies.
    pub bracket: Option<(f64, f64)>,
}

impl Fixture {
    pub fn grid(&self) -> Result<PeriodicGrid> {
        build_grid(self.dim, self.n, TAU)
    }

    pub fn field(&self) -> Result<FieldSpec> {
        if self.family == "expression" {
            let bx = self
                .bx
                .ok_or_else(|| Error::Precondition(format!("{}: missing bx", self.name)))?;
            expression_field(bx, self.by)
        } else {
            builtin_field(self.family, None)
        }
    }

    pub fn c_expr(&self) -> Result<SmoothExpr> {
        SmoothExpr::parse(self.c)
    }

    pub fn f_expr(&self) -> Result<Option<SmoothExpr>> {
        self.f.map(SmoothExpr::parse).transpose()
    }

    pub fn phi_expr(&self) -> Result<Option<SmoothExpr>> {
        self.phi.map(SmoothExpr::parse).transpose()
    }

    pub fn lyapunov_expr(&self) -> Result<Option<SmoothExpr>> {
        self.lyapunov.map(SmoothExpr::parse).transpose()
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.contains(&tag)
    }
}

/// The full registry, in stable order.
pub fn all_fixtures() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "uniform_medium",
            summary: "drift-free circle with constant index: the eigenvalue \
                      equals the coefficient at every diffusion strength",
            tags: &["eigen-limit"],
            dim: 1,
            n: 64,
            family: "zero_1d",
            bx: None,
            by: None,
            c: "5",
            f: Some("5"),
            phi: None,
            lyapunov: None,
            epsilons: &[1.0, 0.1, 0.01],
            lambda_range: None,
            bracket: None,
        },
        Fixture {
            name: "cosine_well",
            summary: "drift-free circle with a single potential well: the \
                      eigenvalue descends to the minimum of the index and \
                      the ground state localizes there",
            tags: &["eigen-limit"],
            dim: 1,
            n: 256,
            family: "zero_1d",
            bx: None,
            by: None,
            c: "2 + cos(x)",
            f: None,
            phi: None,
            lyapunov: None,
            epsilons: &[0.2, 0.1, 0.05, 0.02, 0.01],
            lambda_range: None,
            bracket: None,
        },
        Fixture {
            name: "drift_well",
            summary: "circle with downhill drift against the cosine index: \
                      exercises the exponential-fitted stencil at large \
                      cell Péclet numbers",
            tags: &["eigen-limit"],
            dim: 1,
            n: 256,
            family: "circle_sine",
            bx: None,
            by: None,
            c: "2 + cos(x)",
            f: None,
            phi: None,
            lyapunov: None,
            epsilons: &[0.2, 0.1, 0.05, 0.02, 0.01],
            lambda_range: None,
            bracket: None,
        },
        Fixture {
            name: "circle_sine",
            summary: "transport on the circle with two stagnation points: \
                      the solution takes the value f/c at each of them",
            tags: &["transport"],
            dim: 1,
            n: 256,
            family: "circle_sine",
            bx: None,
            by: None,
            c: "2",
            f: Some("3 + cos(x)"),
            phi: None,
            lyapunov: None,
            epsilons: &[0.1, 0.05, 0.02],
            lambda_range: None,
            bracket: None,
        },
        Fixture {
            name: "torus_morse",
            summary: "gradient flow of a double-well height on the torus: \
                      weighted eigenvector mass piles onto the four \
                      stagnation points",
            tags: &["eigen-limit", "gradient-weight", "lyapunov", "pressure"],
            dim: 2,
            n: 64,
            family: "torus_morse",
            bx: None,
            by: None,
            c: "1",
            f: None,
            phi: Some("-cos(x) - cos(y)"),
            lyapunov: Some("-cos(x) - cos(y)"),
            epsilons: &[0.1, 0.05, 0.02],
            lambda_range: None,
            bracket: None,
        },
        Fixture {
            name: "torus_cycles",
            summary: "gradient-plus-rotation flow with an attracting and a \
                      repelling cycle: weighted mass settles into a tube \
                      around the attracting cycle",
            tags: &["eigen-limit", "cycle-measure", "lyapunov", "pressure"],
            dim: 2,
            n: 128,
            family: "torus_cycles",
            bx: None,
            by: None,
            c: "1",
            f: None,
            phi: None,
            lyapunov: Some("4 * (1 - cos(y))"),
            epsilons: &[0.1, 0.05, 0.02],
            lambda_range: None,
            bracket: None,
        },
        Fixture {
            name: "torus_cycles_transport",
            summary: "transport across the cycle pair: solutions decay to a \
                      limit inside the basin but keep oscillating on the \
                      repelling cycle",
            tags: &["transport", "cycle-measure"],
            dim: 2,
            n: 128,
            family: "torus_cycles",
            bx: None,
            by: None,
            c: "2",
            f: Some("2 + cos(x) * (1 - cos(y)) / 2"),
            phi: None,
            lyapunov: Some("4 * (1 - cos(y))"),
            epsilons: &[0.1, 0.05, 0.02],
            lambda_range: None,
            bracket: None,
        },
        Fixture {
            name: "nonlinear_mild",
            summary: "state-dependent transport with weak coupling: all \
                      three solvability conditions hold and the iteration \
                      contracts geometrically",
            tags: &["nonlinear"],
            dim: 1,
            n: 128,
            family: "expression",
            bx: Some("-0.1 * (1 + 0.2*sin(lambda)) * sin(x)"),
            by: None,
            c: "2 + 0.1*sin(lambda)",
            f: Some("1 + 0.3*cos(x)"),
            phi: None,
            lyapunov: None,
            epsilons: &[0.1, 0.05, 0.02],
            lambda_range: Some((-3.0, 3.0)),
            bracket: Some((0.0, 1.5)),
        },
        Fixture {
            name: "nonlinear_cubic",
            summary: "cubic branch structure: three admissible values per \
                      stagnation point and distinct converged solutions \
                      from distinct seeds",
            tags: &["nonlinear"],
            dim: 1,
            n: 128,
            family: "expression",
            bx: Some("-0.2 * sin(x)"),
            by: None,
            c: "1 + (lambda - 2)^2",
            f: Some("1.9 + 0.03*(1 - cos(x))"),
            phi: None,
            lyapunov: None,
            epsilons: &[0.1, 0.05, 0.02],
            lambda_range: Some((0.4, 2.1)),
            bracket: Some((0.4, 2.1)),
        },
    ]
}

/// Look a fixture up by exact name.
pub fn fixture(name: &str) -> Result<Fixture> {
    all_fixtures()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| {
            let known: Vec<&str> = all_fixtures().iter().map(|f| f.name).collect();
            Error::Precondition(format!(
                "unknown fixture '{name}'; known fixtures: {}",
                known.join(", ")
            ))
        })
}

/// All fixtures carrying the given phenomenon tag.
pub fn by_tag(tag: &str) -> Vec<Fixture> {
    all_fixtures().into_iter().filter(|f| f.has_tag(tag)).collect()
}

/// The one-dimensional eigenvalue fixtures, used for dense-oracle
/// cross-checks of the sparse eigensolver.
pub fn eigen_fixtures_1d() -> Vec<Fixture> {
    all_fixtures()
        .into_iter()
        .filter(|f| f.dim == 1 && f.has_tag("eigen-limit"))
        .collect()
}
