//! Analytic vector fields and the structure of their flows: fixed points,
//! periodic orbits, hyperbolicity data, basins of attraction, and the
//! symmetrized-Jacobian bound `b0`.
//!
//! Fields are registry entries evaluable at any continuous coordinate, not
//! grid samples — characteristics integration and orbit refinement need
//! off-grid values. All built-in families are 2π-periodic per axis;
//! user-supplied expression fields are trusted to be periodic as well.

mod basins;
mod flow;
mod recurrent;

pub use basins::{label_attractors, separatrix_mask, Mask};
pub use flow::{flow, flow_point, rk4_step, Direction, Trajectory};
pub use recurrent::{detect_recurrent_set, find_fixed_points, find_periodic_orbits};

use crate::error::{Error, Result};
use crate::expr::{Expr, SmoothExpr, Var};
use crate::mesh::{PeriodicGrid, Point};
use std::f64::consts::TAU;

/// Threshold on |Re eigenvalue| below which a recurrent element counts as
/// non-hyperbolic.
pub const HYPERBOLICITY_TOL: f64 = 1e-8;

/// A vector field evaluable anywhere on the periodic domain.
pub trait VectorField {
    fn dim(&self) -> usize;

    /// Period per axis; component 1 is ignored in one dimension.
    fn periods(&self) -> [f64; 2] {
        [TAU, TAU]
    }

    fn eval(&self, p: Point) -> Point;

    /// Jacobian matrix (row i = gradient of component i). The default is a
    /// central difference with step 1e-5; families with closed-form
    /// derivatives override it.
    fn jacobian(&self, p: Point) -> [[f64; 2]; 2] {
        let h = 1e-5;
        let mut j = [[0.0; 2]; 2];
        for col in 0..self.dim() {
            let mut pp = p;
            let mut pm = p;
            pp[col] += h;
            pm[col] -= h;
            let fp = self.eval(pp);
            let fm = self.eval(pm);
            for row in 0..self.dim() {
                j[row][col] = (fp[row] - fm[row]) / (2.0 * h);
            }
        }
        j
    }

    fn divergence(&self, p: Point) -> f64 {
        let j = self.jacobian(p);
        j[0][0] + j[1][1]
    }
}

/// Classification of a fixed point by the signs of the Jacobian eigenvalue
/// real parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Sink,
    Source,
    Saddle,
}

impl PointKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointKind::Sink => "sink",
            PointKind::Source => "source",
            PointKind::Saddle => "saddle",
        }
    }
}

/// A zero of the field with its linearization data.
#[derive(Debug, Clone)]
pub struct FixedPoint {
    pub position: Point,
    pub jacobian: [[f64; 2]; 2],
    /// Real parts of the Jacobian eigenvalues, ascending; length = dim.
    pub eigen_real_parts: Vec<f64>,
    pub kind: PointKind,
    pub hyperbolic: bool,
}

impl FixedPoint {
    /// Sum of eigenvalue real parts strictly below the hyperbolicity
    /// threshold (the contraction rates).
    pub fn stable_trace(&self) -> f64 {
        self.eigen_real_parts
            .iter()
            .filter(|&&r| r < -HYPERBOLICITY_TOL)
            .sum()
    }

    /// Sum of eigenvalue real parts strictly above the threshold (the
    /// expansion rates).
    pub fn unstable_trace(&self) -> f64 {
        self.eigen_real_parts
            .iter()
            .filter(|&&r| r > HYPERBOLICITY_TOL)
            .sum()
    }

    pub fn attracting(&self) -> bool {
        self.kind == PointKind::Sink && self.hyperbolic
    }
}

/// A closed trajectory with period, arclength table, and the nontrivial
/// Floquet exponent.
#[derive(Debug, Clone)]
pub struct PeriodicOrbit {
    /// Ordered samples along one period (first sample repeated at the end is
    /// NOT stored; the closure gap is recorded separately).
    pub samples: Vec<Point>,
    pub period: f64,
    /// Cumulative arclength at each sample, starting at 0.
    pub arclength: Vec<f64>,
    /// Log of the nontrivial Floquet multiplier divided by the period;
    /// negative means attracting. Computed as the period average of the
    /// divergence along the orbit (the flow direction carries the trivial
    /// unit multiplier, so volume growth is entirely transversal).
    pub floquet_log: f64,
    /// |x(T) − x(0)| from the closure check.
    pub closure_gap: f64,
    pub hyperbolic: bool,
}

impl PeriodicOrbit {
    pub fn total_length(&self) -> f64 {
        *self.arclength.last().unwrap()
    }

    pub fn attracting(&self) -> bool {
        self.hyperbolic && self.floquet_log < 0.0
    }

    /// Minimal periodic distance from a point to the sampled orbit.
    pub fn distance_to(&self, grid: &PeriodicGrid, p: Point) -> f64 {
        self.samples
            .iter()
            .map(|&s| grid.distance(p, s))
            .fold(f64::INFINITY, f64::min)
    }

    /// Point on the orbit at a given arclength (linear interpolation between
    /// samples), together with the unit tangent there.
    pub fn at_arclength(&self, l: f64) -> (Point, [f64; 2]) {
        let total = self.total_length();
        let l = l.rem_euclid(total);
        // arclength is strictly increasing; find the bracketing samples.
        let mut k = match self
            .arclength
            .binary_search_by(|a| a.partial_cmp(&l).unwrap())
        {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        if k + 1 >= self.samples.len() {
            k = self.samples.len() - 2;
        }
        let (l0, l1) = (self.arclength[k], self.arclength[k + 1]);
        let t = if l1 > l0 { (l - l0) / (l1 - l0) } else { 0.0 };
        let a = self.samples[k];
        let b = self.samples[k + 1];
        // Samples are stored unwrapped along the integration, so plain
        // linear interpolation is safe; callers wrap the result.
        let p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
        let mut tan = [b[0] - a[0], b[1] - a[1]];
        let norm = (tan[0] * tan[0] + tan[1] * tan[1]).sqrt();
        if norm > 0.0 {
            tan[0] /= norm;
            tan[1] /= norm;
        }
        (p, tan)
    }
}

/// The detected recurrent structure of a field.
#[derive(Debug, Clone, Default)]
pub struct RecurrentSet {
    pub fixed_points: Vec<FixedPoint>,
    pub orbits: Vec<PeriodicOrbit>,
    /// True only if every element is hyperbolic.
    pub morse_smale: bool,
}

impl RecurrentSet {
    pub fn len(&self) -> usize {
        self.fixed_points.len() + self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Slowest contraction rate among attracting elements (used to size
    /// basin-integration horizons); None when nothing attracts.
    pub fn slowest_contraction(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for fp in &self.fixed_points {
            if fp.attracting() {
                let rate = fp
                    .eigen_real_parts
                    .iter()
                    .map(|r| r.abs())
                    .fold(f64::INFINITY, f64::min);
                best = Some(best.map_or(rate, |b: f64| b.min(rate)));
            }
        }
        for orb in &self.orbits {
            if orb.attracting() {
                let rate = orb.floquet_log.abs();
                best = Some(best.map_or(rate, |b: f64| b.min(rate)));
            }
        }
        best
    }
}

/// Built-in field families plus closed-form user fields.
#[derive(Debug, Clone)]
pub enum FieldFamily {
    /// b ≡ 0 (pure potential problems).
    Zero { dim: usize },
    /// b = −sin x on the circle: sink at 0, source at π.
    CircleSine,
    /// b = (sin x, sin y) = −∇(cos x + cos y): source, two saddles, sink.
    TorusMorse,
    /// Ω = (1, −sin y): attracting cycle y = 0, repelling cycle y = π.
    TorusCycles,
    /// b = (1, −κ sin y): the cycles of `TorusCycles` with rates scaled by κ.
    ShiftedTorusCycles { kappa: f64 },
    /// b = ∇φ for a closed-form potential φ.
    Gradient { phi: SmoothExpr, dim: usize },
    /// b = −∇L + Ω: a dissipative part from the scalar L plus a rotation Ω.
    Composed { omega: Box<FieldSpec>, l: SmoothExpr },
    /// Components given directly as expressions of (x, y, lambda).
    Expression { bx: SmoothExpr, by: Option<SmoothExpr> },
}

/// A named, parametrized vector-field family. `lambda` is the scalar
/// parameter of u-dependent fields; families that ignore it are evaluated
/// with any value.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    family: FieldFamily,
    /// Second partials of φ or L, prepared once for analytic Jacobians.
    hessian: Option<[Expr; 4]>,
}

impl FieldSpec {
    pub fn new(family: FieldFamily) -> Self {
        let hessian = match &family {
            FieldFamily::Gradient { phi, .. } => Some(Self::second_partials(phi)),
            FieldFamily::Composed { l, .. } => Some(Self::second_partials(l)),
            _ => None,
        };
        FieldSpec { family, hessian }
    }

    fn second_partials(s: &SmoothExpr) -> [Expr; 4] {
        let fx = s.expr().diff(Var::X);
        let fy = s.expr().diff(Var::Y);
        [
            fx.diff(Var::X),
            fx.diff(Var::Y),
            fy.diff(Var::X),
            fy.diff(Var::Y),
        ]
    }

    pub fn family(&self) -> &FieldFamily {
        &self.family
    }

    pub fn dim(&self) -> usize {
        match &self.family {
            FieldFamily::Zero { dim } => *dim,
            FieldFamily::CircleSine => 1,
            FieldFamily::TorusMorse
            | FieldFamily::TorusCycles
            | FieldFamily::ShiftedTorusCycles { .. } => 2,
            FieldFamily::Gradient { dim, .. } => *dim,
            FieldFamily::Composed { .. } => 2,
            FieldFamily::Expression { by, .. } => 1 + usize::from(by.is_some()),
        }
    }

    pub fn takes_lambda(&self) -> bool {
        match &self.family {
            FieldFamily::Expression { bx, by } => {
                bx.depends_on_lambda() || by.as_ref().is_some_and(|e| e.depends_on_lambda())
            }
            FieldFamily::Composed { omega, .. } => omega.takes_lambda(),
            _ => false,
        }
    }

    pub fn eval(&self, lambda: f64, p: Point) -> Point {
        let [x, y] = p;
        match &self.family {
            FieldFamily::Zero { .. } => [0.0, 0.0],
            FieldFamily::CircleSine => [-x.sin(), 0.0],
            FieldFamily::TorusMorse => [x.sin(), y.sin()],
            FieldFamily::TorusCycles => [1.0, -y.sin()],
            FieldFamily::ShiftedTorusCycles { kappa } => [1.0, -kappa * y.sin()],
            FieldFamily::Gradient { phi, dim } => {
                let g = phi.grad(x, y, lambda);
                [g[0], if *dim == 2 { g[1] } else { 0.0 }]
            }
            FieldFamily::Composed { omega, l } => {
                let g = l.grad(x, y, lambda);
                let w = omega.eval(lambda, p);
                [w[0] - g[0], w[1] - g[1]]
            }
            FieldFamily::Expression { bx, by } => [
                bx.eval(x, y, lambda),
                by.as_ref().map_or(0.0, |e| e.eval(x, y, lambda)),
            ],
        }
    }

    pub fn jacobian(&self, lambda: f64, p: Point) -> [[f64; 2]; 2] {
        let [x, y] = p;
        match &self.family {
            FieldFamily::Zero { .. } => [[0.0; 2]; 2],
            FieldFamily::CircleSine => [[-x.cos(), 0.0], [0.0, 0.0]],
            FieldFamily::TorusMorse => [[x.cos(), 0.0], [0.0, y.cos()]],
            FieldFamily::TorusCycles => [[0.0, 0.0], [0.0, -y.cos()]],
            FieldFamily::ShiftedTorusCycles { kappa } => [[0.0, 0.0], [0.0, -kappa * y.cos()]],
            FieldFamily::Gradient { dim, .. } => {
                let h = self.hessian.as_ref().unwrap();
                let hxx = h[0].eval(x, y, lambda);
                if *dim == 1 {
                    [[hxx, 0.0], [0.0, 0.0]]
                } else {
                    [
                        [hxx, h[1].eval(x, y, lambda)],
                        [h[2].eval(x, y, lambda), h[3].eval(x, y, lambda)],
                    ]
                }
            }
            FieldFamily::Composed { omega, .. } => {
                let h = self.hessian.as_ref().unwrap();
                let jw = omega.jacobian(lambda, p);
                [
                    [
                        jw[0][0] - h[0].eval(x, y, lambda),
                        jw[0][1] - h[1].eval(x, y, lambda),
                    ],
                    [
                        jw[1][0] - h[2].eval(x, y, lambda),
                        jw[1][1] - h[3].eval(x, y, lambda),
                    ],
                ]
            }
            FieldFamily::Expression { bx, by } => {
                let gx = bx.grad(x, y, lambda);
                let gy = by.as_ref().map_or([0.0, 0.0], |e| e.grad(x, y, lambda));
                [[gx[0], gx[1]], [gy[0], gy[1]]]
            }
        }
    }

    /// ∂b/∂λ at a point (exact for expression fields, zero for the
    /// λ-independent built-ins).
    pub fn lambda_partial(&self, lambda: f64, p: Point) -> Point {
        let [x, y] = p;
        match &self.family {
            FieldFamily::Expression { bx, by } => [
                bx.dlambda(x, y, lambda),
                by.as_ref().map_or(0.0, |e| e.dlambda(x, y, lambda)),
            ],
            FieldFamily::Composed { omega, .. } => omega.lambda_partial(lambda, p),
            _ => [0.0, 0.0],
        }
    }

    /// Bind the parameter, producing a plain `VectorField`.
    pub fn at(&self, lambda: f64) -> BoundField<'_> {
        BoundField { spec: self, lambda }
    }
}

/// A `FieldSpec` with its parameter bound to a concrete value.
#[derive(Debug, Clone, Copy)]
pub struct BoundField<'a> {
    spec: &'a FieldSpec,
    lambda: f64,
}

impl VectorField for BoundField<'_> {
    fn dim(&self) -> usize {
        self.spec.dim()
    }

    fn eval(&self, p: Point) -> Point {
        self.spec.eval(self.lambda, p)
    }

    fn jacobian(&self, p: Point) -> [[f64; 2]; 2] {
        self.spec.jacobian(self.lambda, p)
    }
}

/// Largest eigenvalue of the symmetrized Jacobian ½(Db + Dbᵀ) at one point.
fn symmetrized_top_eigenvalue(j: [[f64; 2]; 2], dim: usize) -> f64 {
    if dim == 1 {
        return j[0][0];
    }
    let s11 = j[0][0];
    let s22 = j[1][1];
    let s12 = 0.5 * (j[0][1] + j[1][0]);
    let mean = 0.5 * (s11 + s22);
    let half = 0.5 * (s11 - s22);
    mean + (half * half + s12 * s12).sqrt()
}

/// Number of parameter samples used for sup/inf sweeps over a λ-range.
pub const LAMBDA_SWEEP_SAMPLES: usize = 65;

/// Supremum over the grid (and a λ-sample when a range is given) of the
/// largest eigenvalue of the symmetrized Jacobian — the one-sided Lipschitz
/// bound of the field.
pub fn compute_b0(spec: &FieldSpec, grid: &PeriodicGrid, lambda_range: Option<(f64, f64)>) -> f64 {
    let lambdas: Vec<f64> = match lambda_range {
        Some((lo, hi)) => (0..LAMBDA_SWEEP_SAMPLES)
            .map(|k| lo + (hi - lo) * k as f64 / (LAMBDA_SWEEP_SAMPLES - 1) as f64)
            .collect(),
        None => vec![0.0],
    };
    let mut sup = f64::NEG_INFINITY;
    for &lam in &lambdas {
        for idx in grid.indices() {
            let j = spec.jacobian(lam, grid.node(idx));
            sup = sup.max(symmetrized_top_eigenvalue(j, spec.dim()));
        }
    }
    sup
}

/// Parse helper for user fields: build an expression-backed spec.
pub fn expression_field(bx: &str, by: Option<&str>) -> Result<FieldSpec> {
    let bx = SmoothExpr::parse(bx)?;
    let by = match by {
        Some(src) => Some(SmoothExpr::parse(src)?),
        None => None,
    };
    Ok(FieldSpec::new(FieldFamily::Expression { bx, by }))
}

/// Look up a built-in family by its registry name.
pub fn builtin_field(name: &str, kappa: Option<f64>) -> Result<FieldSpec> {
    let family = match name {
        "zero" => FieldFamily::Zero { dim: 2 },
        "zero_1d" => FieldFamily::Zero { dim: 1 },
        "circle_sine" => FieldFamily::CircleSine,
        "torus_morse" => FieldFamily::TorusMorse,
        "torus_cycles" => FieldFamily::TorusCycles,
        "shifted_torus_cycles" => FieldFamily::ShiftedTorusCycles {
            kappa: kappa.ok_or_else(|| {
                Error::Precondition("shifted_torus_cycles needs a kappa parameter".into())
            })?,
        },
        other => {
            return Err(Error::Precondition(format!(
                "unknown field family '{other}'"
            )))
        }
    };
    Ok(FieldSpec::new(family))
}
