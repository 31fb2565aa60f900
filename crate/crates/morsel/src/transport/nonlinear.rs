//! The state-dependent transport problem ⟨b(u,x),∇u⟩ + c(u,x)u = f(x):
//! sup/inf constants that control solvability, the three solvability
//! conditions, Picard iteration with the coefficients frozen at the current
//! iterate, and root counting for the branch structure at fixed points.

use crate::dynsys::{FieldSpec, VectorField};
use crate::error::{Error, Result};
use crate::expr::SmoothExpr;
use crate::mesh::{interp_cubic, PeriodicGrid, Point, ScalarSamples};
use crate::transport::characteristics::{characteristics_field, solve_linear, TransportSolution};

/// Sample count for sweeps over the state interval.
const LAMBDA_SAMPLES: usize = 65;
/// Picard iteration cap.
const MAX_PICARD: usize = 50;

/// Sup/inf quantities of the data (b, c, f) over the grid and a declared
/// state interval, which the solvability conditions are phrased in.
#[derive(Debug, Clone, Copy)]
pub struct HyperbolicityConstants {
    /// Largest eigenvalue of the symmetrized drift Jacobian.
    pub b0: f64,
    /// sup |∂_λ b| — sensitivity of the drift to the state.
    pub gamma: f64,
    /// inf c − b0, the contraction margin.
    pub a0: f64,
    /// sup|∇f| + sup(f/c) · sup|∂c/∂x|.
    pub big_a: f64,
    /// sup|∂_λ c| · sup(f/c).
    pub beta: f64,
    /// inf over state and space of c + λ ∂_λ c − b0.
    pub big_lambda: f64,
    /// sup |∇f| alone (enters the second solvability condition).
    pub sup_grad_f: f64,
}

/// Compute the constants by sweeping the grid and `LAMBDA_SAMPLES` evenly
/// spaced state values across `lambda_range`.
pub fn hyperbolicity_constants(
    spec: &FieldSpec,
    c: &SmoothExpr,
    f: &SmoothExpr,
    grid: &PeriodicGrid,
    lambda_range: (f64, f64),
) -> HyperbolicityConstants {
    let (lo, hi) = lambda_range;
    assert!(
        lo.is_finite() && hi.is_finite() && hi >= lo,
        "state interval must be a finite interval"
    );
    let b0 = crate::dynsys::compute_b0(spec, grid, Some(lambda_range));

    let mut gamma = 0.0f64;
    let mut c_inf = f64::INFINITY;
    let mut sup_c_lambda = 0.0f64;
    let mut sup_f_over_c = f64::NEG_INFINITY;
    let mut sup_grad_c = 0.0f64;
    let mut inf_lambda_term = f64::INFINITY;
    let mut sup_grad_f = 0.0f64;

    for idx in grid.indices() {
        let p = grid.node(idx);
        let fg = f.grad(p[0], p[1], 0.0);
        sup_grad_f = sup_grad_f.max((fg[0] * fg[0] + fg[1] * fg[1]).sqrt());
        let fv = f.eval(p[0], p[1], 0.0);
        for k in 0..LAMBDA_SAMPLES {
            let lam = if LAMBDA_SAMPLES == 1 {
                lo
            } else {
                lo + (hi - lo) * k as f64 / (LAMBDA_SAMPLES - 1) as f64
            };
            let bl = spec.lambda_partial(lam, p);
            gamma = gamma.max((bl[0] * bl[0] + bl[1] * bl[1]).sqrt());
            let cv = c.eval(p[0], p[1], lam);
            let cl = c.dlambda(p[0], p[1], lam);
            let cg = c.grad(p[0], p[1], lam);
            c_inf = c_inf.min(cv);
            sup_c_lambda = sup_c_lambda.max(cl.abs());
            sup_f_over_c = sup_f_over_c.max(fv / cv);
            sup_grad_c = sup_grad_c.max((cg[0] * cg[0] + cg[1] * cg[1]).sqrt());
            inf_lambda_term = inf_lambda_term.min(cv + lam * cl);
        }
    }

    HyperbolicityConstants {
        b0,
        gamma,
        a0: c_inf - b0,
        big_a: sup_grad_f + sup_f_over_c * sup_grad_c,
        beta: sup_c_lambda * sup_f_over_c,
        big_lambda: inf_lambda_term - b0,
        sup_grad_f,
    }
}

/// The three solvability conditions, evaluated literally:
/// 1. a₀ > β;
/// 2. a₀² + β² ≥ 2a₀β + 4γ·sup|∇f|;
/// 3. Λ² − 4Aγ ≥ 0.
pub fn check_conditions(k: &HyperbolicityConstants) -> (bool, bool, bool) {
    (
        k.a0 > k.beta,
        k.a0 * k.a0 + k.beta * k.beta >= 2.0 * k.a0 * k.beta + 4.0 * k.gamma * k.sup_grad_f,
        k.big_lambda * k.big_lambda - 4.0 * k.big_a * k.gamma >= 0.0,
    )
}

/// A λ-family of drifts with the state slot filled by a grid function:
/// evaluates b(λ(x), x) with the state read off-grid by cubic interpolation.
pub struct FrozenField<'a> {
    pub spec: &'a FieldSpec,
    pub state: &'a ScalarSamples,
}

impl VectorField for FrozenField<'_> {
    fn dim(&self) -> usize {
        self.spec.dim()
    }

    fn periods(&self) -> [f64; 2] {
        let g = self.state.grid();
        if g.dim() == 2 {
            [g.period(0), g.period(1)]
        } else {
            [g.period(0), g.period(0)]
        }
    }

    fn eval(&self, p: Point) -> Point {
        let w = self.state.grid().wrap_point(p);
        self.spec.eval(interp_cubic(self.state, w), w)
    }
}

/// Result of the Picard iteration, with convergence diagnostics.
#[derive(Debug, Clone)]
pub struct NonlinearSolution {
    pub solution: TransportSolution,
    /// ‖u_{k+1} − u_k‖∞ per iteration.
    pub history: Vec<f64>,
    pub iterations: usize,
    /// Last ratio of successive increments (< 1 means geometric
    /// convergence was observed).
    pub contraction: Option<f64>,
    /// The three solvability conditions over the declared state interval.
    pub conditions: (bool, bool, bool),
    /// True when the solve proceeded despite a failed condition.
    pub flagged: bool,
    pub constants: HyperbolicityConstants,
}

/// Solve the nonlinear problem by successive approximation: each step
/// freezes the coefficients at the current iterate and solves the linear
/// transport problem along the frozen characteristics.
#[allow(clippy::too_many_arguments)]
pub fn solve_nonlinear(
    spec: &FieldSpec,
    c: &SmoothExpr,
    f: &SmoothExpr,
    grid: &PeriodicGrid,
    lambda_range: (f64, f64),
    u0: &ScalarSamples,
    tol: f64,
    dt: Option<f64>,
    tail_tol: Option<f64>,
) -> Result<NonlinearSolution> {
    let constants = hyperbolicity_constants(spec, c, f, grid, lambda_range);
    let conditions = check_conditions(&constants);
    let flagged = !(conditions.0 && conditions.1 && conditions.2);
    if flagged {
        eprintln!(
            "warning: solvability conditions {:?} not all satisfied; \
             attempting the iteration anyway",
            conditions
        );
    }
    let c_inf = constants.a0 + constants.b0;
    if !(c_inf > 0.0) {
        return Err(Error::Precondition(format!(
            "the zero-order coefficient must stay positive over the state \
             interval (inf c = {c_inf:.3e})"
        )));
    }
    let sup_f = grid
        .indices()
        .map(|i| {
            let p = grid.node(i);
            f.eval(p[0], p[1], 0.0).abs()
        })
        .fold(0.0, f64::max);
    let divergence_bound = 10.0 * sup_f / c_inf;

    let mut u = u0.clone();
    let mut history = Vec::new();
    for k in 0..MAX_PICARD {
        let next = {
            let frozen = FrozenField {
                spec,
                state: &u,
            };
            let c_fn = |p: Point| c.eval(p[0], p[1], interp_cubic(&u, p));
            let f_fn = |p: Point| f.eval(p[0], p[1], 0.0);
            characteristics_field(&frozen, &c_fn, &f_fn, grid, dt, tail_tol)?
        };
        let delta = next.zip_with(&u, |a, b| a - b).sup_norm();
        history.push(delta);
        if next.sup_norm() > divergence_bound {
            return Err(Error::NonConvergence {
                what: format!(
                    "successive approximation diverged (‖u‖∞ = {:.3e} beyond {:.3e})",
                    next.sup_norm(),
                    divergence_bound
                ),
                iterations: k + 1,
            });
        }
        u = next;
        if delta <= tol {
            let contraction = if history.len() >= 2 {
                let prev = history[history.len() - 2];
                (prev > 0.0).then(|| delta / prev)
            } else {
                None
            };
            let solution = {
                let frozen = FrozenField {
                    spec,
                    state: &u,
                };
                let c_fn = |p: Point| c.eval(p[0], p[1], interp_cubic(&u, p));
                let f_fn = |p: Point| f.eval(p[0], p[1], 0.0);
                solve_linear(&frozen, &c_fn, &f_fn, grid, dt, tail_tol)?
            };
            return Ok(NonlinearSolution {
                solution,
                iterations: k + 1,
                contraction,
                conditions,
                flagged,
                constants,
                history,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "successive approximation for the state-dependent transport problem".into(),
        iterations: MAX_PICARD,
    })
}

/// Roots of c(u, P)·u = f(P) at each supplied point: the algebraic branch
/// structure that seeds distinct solutions.
#[derive(Debug, Clone)]
pub struct BranchTable {
    pub points: Vec<Point>,
    /// Simple roots per point, ascending.
    pub roots: Vec<Vec<f64>>,
    /// Roots rejected because the derivative vanished there.
    pub degenerate: Vec<Vec<f64>>,
    /// counts[i] = roots[i].len().
    pub counts: Vec<usize>,
    /// Π counts — the number of branch combinations.
    pub total: usize,
}

/// Scan resolution for the sign-change search.
const BRANCH_SCAN: usize = 1024;
/// A root with |∂g/∂u| below this is flagged degenerate.
const SIMPLE_ROOT_TOL: f64 = 1e-8;

pub fn count_branches(
    c: &SmoothExpr,
    f: &SmoothExpr,
    points: &[Point],
    bracket: (f64, f64),
) -> Result<BranchTable> {
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::Precondition(format!(
            "root bracket must be a finite nondegenerate interval, got [{lo}, {hi}]"
        )));
    }
    if points.is_empty() {
        return Err(Error::Precondition(
            "no points supplied for branch counting".into(),
        ));
    }
    let mut roots = Vec::with_capacity(points.len());
    let mut degenerate = Vec::with_capacity(points.len());
    for &p in points {
        let g = |u: f64| c.eval(p[0], p[1], u) * u - f.eval(p[0], p[1], 0.0);
        let dg = |u: f64| c.eval(p[0], p[1], u) + u * c.dlambda(p[0], p[1], u);
        let mut simple = Vec::new();
        let mut flat = Vec::new();
        let step = (hi - lo) / BRANCH_SCAN as f64;
        let mut prev_u = lo;
        let mut prev_g = g(lo);
        for k in 1..=BRANCH_SCAN {
            let uk = lo + k as f64 * step;
            let gk = g(uk);
            let root = if prev_g == 0.0 {
                Some(prev_u)
            } else if prev_g * gk < 0.0 {
                // Bisection down to floating-point resolution.
                let (mut a, mut b) = (prev_u, uk);
                let mut ga = prev_g;
                for _ in 0..100 {
                    let m = 0.5 * (a + b);
                    if m <= a || m >= b {
                        break;
                    }
                    let gm = g(m);
                    if gm == 0.0 {
                        a = m;
                        break;
                    }
                    if ga * gm < 0.0 {
                        b = m;
                    } else {
                        a = m;
                        ga = gm;
                    }
                }
                Some(0.5 * (a + b))
            } else {
                None
            };
            if let Some(r) = root {
                if dg(r).abs() < SIMPLE_ROOT_TOL {
                    flat.push(r);
                } else {
                    simple.push(r);
                }
            }
            prev_u = uk;
            prev_g = gk;
        }
        if prev_g == 0.0 {
            if dg(hi).abs() < SIMPLE_ROOT_TOL {
                flat.push(hi);
            } else {
                simple.push(hi);
            }
        }
        roots.push(simple);
        degenerate.push(flat);
    }
    let counts: Vec<usize> = roots.iter().map(|r| r.len()).collect();
    let total = counts.iter().product();
    Ok(BranchTable {
        points: points.to_vec(),
        roots,
        degenerate,
        counts,
        total,
    })
}

/// Blend per-point branch values into a smooth initial iterate: normalized
/// Gaussian bumps centered at the points, with width a third of the
/// smallest pairwise separation.
pub fn branch_seed(
    grid: &PeriodicGrid,
    points: &[Point],
    values: &[f64],
) -> Result<ScalarSamples> {
    if points.is_empty() || points.len() != values.len() {
        return Err(Error::Precondition(
            "branch seed needs one value per point".into(),
        ));
    }
    let mut min_sep = f64::INFINITY;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            min_sep = min_sep.min(grid.distance(points[i], points[j]));
        }
    }
    let scale = if min_sep.is_finite() {
        min_sep / 3.0
    } else {
        (0..grid.dim()).map(|a| grid.period(a)).fold(0.0, f64::max) / 6.0
    };
    Ok(ScalarSamples::from_fn(*grid, |p| {
        let mut num = 0.0;
        let mut den = 0.0;
        for (pt, v) in points.iter().zip(values) {
            let d = grid.distance(p, *pt);
            let w = (-d * d / (2.0 * scale * scale)).exp();
            num += v * w;
            den += w;
        }
        num / den.max(1e-300)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::{builtin_field, expression_field};
    use crate::mesh::build_grid;
    use std::f64::consts::{PI, TAU};

    fn mild_fixture() -> (FieldSpec, SmoothExpr, SmoothExpr) {
        let spec =
            expression_field("-0.1 * (1 + 0.2*sin(lambda)) * sin(x)", None).unwrap();
        let c = SmoothExpr::parse("2 + 0.1*sin(lambda)").unwrap();
        let f = SmoothExpr::parse("1 + 0.3*cos(x)").unwrap();
        (spec, c, f)
    }

    fn cubic_fixture() -> (FieldSpec, SmoothExpr, SmoothExpr) {
        let spec = expression_field("-0.2 * sin(x)", None).unwrap();
        let c = SmoothExpr::parse("1 + (lambda - 2)^2").unwrap();
        let f = SmoothExpr::parse("1.9 + 0.03*(1 - cos(x))").unwrap();
        (spec, c, f)
    }

    #[test]
    fn constants_match_hand_values_for_the_mild_fixture() {
        let (spec, c, f) = mild_fixture();
        let grid = build_grid(1, 64, TAU).unwrap();
        let k = hyperbolicity_constants(&spec, &c, &f, &grid, (-3.0, 3.0));
        assert!((k.b0 - 0.12).abs() < 2e-4, "b0 = {}", k.b0);
        assert!((k.gamma - 0.02).abs() < 1e-6, "gamma = {}", k.gamma);
        assert!((k.a0 - 1.78).abs() < 2e-4, "a0 = {}", k.a0);
        assert!((k.big_a - 0.3).abs() < 1e-6, "A = {}", k.big_a);
        assert!((k.beta - 0.1 * 1.3 / 1.9).abs() < 2e-4, "beta = {}", k.beta);
        assert!((k.big_lambda - 1.597).abs() < 2e-3, "Lambda = {}", k.big_lambda);
        assert_eq!(check_conditions(&k), (true, true, true));
    }

    #[test]
    fn constants_match_hand_values_for_the_cubic_fixture() {
        let (spec, c, f) = cubic_fixture();
        let grid = build_grid(1, 64, TAU).unwrap();
        let k = hyperbolicity_constants(&spec, &c, &f, &grid, (0.4, 2.1));
        assert!((k.gamma - 0.0).abs() < 1e-12, "gamma = {}", k.gamma);
        assert!((k.b0 - 0.2).abs() < 1e-10, "b0 = {}", k.b0);
        assert!((k.a0 - 0.8).abs() < 1e-4, "a0 = {}", k.a0);
        // sup|∂_λ c| = 3.2 at λ = 0.4, sup f/c = 1.96.
        assert!((k.beta - 6.272).abs() < 1e-3, "beta = {}", k.beta);
        // inf(c + λ·∂_λc) = −1/3 at λ = 4/3.
        assert!((k.big_lambda - (-1.0 / 3.0 - 0.2)).abs() < 2e-3, "Lambda = {}", k.big_lambda);
        // Strict inequality fails in condition 1; 2 and 3 hold (γ = 0).
        assert_eq!(check_conditions(&k), (false, true, true));
    }

    #[test]
    fn state_independent_data_gives_trivial_constants() {
        let spec = builtin_field("circle_sine", None).unwrap();
        let c = SmoothExpr::parse("2").unwrap();
        let f = SmoothExpr::parse("1 + 0.5*sin(x)").unwrap();
        let grid = build_grid(1, 64, TAU).unwrap();
        let k = hyperbolicity_constants(&spec, &c, &f, &grid, (-1.0, 1.0));
        assert_eq!(k.gamma, 0.0);
        assert_eq!(k.beta, 0.0);
        assert!((k.a0 - 1.0).abs() < 1e-10); // inf c − b0 = 2 − 1
        assert!((k.big_lambda - 1.0).abs() < 1e-10);
        assert_eq!(check_conditions(&k), (true, true, true));
    }

    #[test]
    fn boundary_case_fails_condition_one_strictly() {
        let k = HyperbolicityConstants {
            b0: 0.0,
            gamma: 0.0,
            a0: 0.5,
            big_a: 0.1,
            beta: 0.5,
            big_lambda: 1.0,
            sup_grad_f: 0.1,
        };
        let (c1, c2, c3) = check_conditions(&k);
        assert!(!c1, "a0 = beta must fail the strict inequality");
        assert!(c2 && c3);
    }

    #[test]
    fn large_state_sensitivity_fails_condition_three() {
        let k = HyperbolicityConstants {
            b0: 0.0,
            gamma: 2.0,
            a0: 1.0,
            big_a: 1.0,
            beta: 0.1,
            big_lambda: 0.5,
            sup_grad_f: 0.0,
        };
        let (_, _, c3) = check_conditions(&k);
        assert!(!c3, "Λ² = 0.25 < 4Aγ = 8");
    }

    #[test]
    fn cubic_branch_structure_has_three_simple_roots() {
        let (_, c, f) = cubic_fixture();
        // At x = 0: g(u) = u(1 + (u−2)²) − 1.9 = u³ − 4u² + 5u − 1.9.
        let table = count_branches(&c, &f, &[[0.0, 0.0]], (0.4, 2.1)).unwrap();
        assert_eq!(table.counts, vec![3]);
        assert_eq!(table.total, 3);
        assert!(table.degenerate[0].is_empty());
        for &r in &table.roots[0] {
            let g = c.eval(0.0, 0.0, r) * r - 1.9;
            assert!(g.abs() <= 1e-10, "root {r} leaves g = {g:.2e}");
            let dg = c.eval(0.0, 0.0, r) + r * c.dlambda(0.0, 0.0, r);
            assert!(dg.abs() >= 1e-8);
        }
        // Two fixed points with three roots each combine to 3² branches.
        let both = count_branches(&c, &f, &[[0.0, 0.0], [PI, 0.0]], (0.4, 2.1)).unwrap();
        assert_eq!(both.counts, vec![3, 3]);
        assert_eq!(both.total, 9);

        // A target above the local maximum leaves a single root.
        let f_high = SmoothExpr::parse("3").unwrap();
        let one = count_branches(&c, &f_high, &[[0.0, 0.0]], (0.4, 3.0)).unwrap();
        assert_eq!(one.counts, vec![1]);
        assert!(one.roots[0][0] > 2.1);
    }

    #[test]
    fn branch_seed_blends_toward_the_requested_values() {
        let grid = build_grid(1, 128, TAU).unwrap();
        let seed = branch_seed(&grid, &[[0.0, 0.0], [PI, 0.0]], &[1.0, 2.0]).unwrap();
        // The far bump still contributes e^{−9/2} ≈ 1%, so the blend sits
        // near (not exactly at) each requested value.
        assert!((seed.get(0) - 1.0).abs() < 0.02, "seed(0) = {}", seed.get(0));
        assert!((seed.get(64) - 2.0).abs() < 0.02, "seed(pi) = {}", seed.get(64));
        assert!(seed.min() >= 1.0 - 1e-12 && seed.max() <= 2.0 + 1e-12);
    }

    #[test]
    fn state_independent_problem_converges_in_one_update() {
        let spec = builtin_field("circle_sine", None).unwrap();
        let c = SmoothExpr::parse("2").unwrap();
        let f = SmoothExpr::parse("3 + cos(x)").unwrap();
        let grid = build_grid(1, 128, TAU).unwrap();
        let u0 = ScalarSamples::constant(grid, 0.0);
        let sol = solve_nonlinear(
            &spec, &c, &f, &grid, (-1.0, 1.0), &u0, 1e-12, None, Some(1e-8),
        )
        .unwrap();
        // The second update reproduces the first bitwise.
        assert!(sol.iterations <= 2);
        assert_eq!(*sol.history.last().unwrap(), 0.0);
        assert!(!sol.flagged);
    }

    #[test]
    fn mild_fixture_converges_geometrically() {
        let (spec, c, f) = mild_fixture();
        let grid = build_grid(1, 128, TAU).unwrap();
        let u0 = ScalarSamples::constant(grid, 0.5);
        let sol = solve_nonlinear(
            &spec, &c, &f, &grid, (-3.0, 3.0), &u0, 1e-8, None, None,
        )
        .unwrap();
        assert!(!sol.flagged);
        assert!(sol.iterations <= 10, "iterations = {}", sol.iterations);
        let ratio = sol.contraction.expect("at least two increments");
        assert!(ratio < 0.1, "contraction ratio {ratio}");
        // At the stagnation point x = 0 the solution solves
        // u·(2 + 0.1 sin u) = 1.3.
        let u_at_0 = sol.solution.u.get(0);
        let res = u_at_0 * (2.0 + 0.1 * u_at_0.sin()) - 1.3;
        assert!(res.abs() < 1e-4, "fixed-point equation residual {res}");
        // Solution stays within the a-priori bound.
        assert!(sol.solution.u.sup_norm() <= 1.3 / 1.78 + 1e-6);
    }

    #[test]
    fn cubic_fixture_reaches_two_distinct_branches() {
        let (spec, c, f) = cubic_fixture();
        let grid = build_grid(1, 128, TAU).unwrap();
        let table = count_branches(&c, &f, &[[0.0, 0.0], [PI, 0.0]], (0.4, 2.1)).unwrap();
        assert_eq!(table.total, 9);
        // Seed from the lowest root pair and from the highest root pair.
        let low: Vec<f64> = table.roots.iter().map(|r| r[0]).collect();
        let high: Vec<f64> = table.roots.iter().map(|r| r[2]).collect();
        let points = table.points.clone();
        let seed_low = branch_seed(&grid, &points, &low).unwrap();
        let seed_high = branch_seed(&grid, &points, &high).unwrap();
        let sol_low = solve_nonlinear(
            &spec, &c, &f, &grid, (0.4, 2.1), &seed_low, 1e-5, None, None,
        )
        .unwrap();
        let sol_high = solve_nonlinear(
            &spec, &c, &f, &grid, (0.4, 2.1), &seed_high, 1e-5, None, None,
        )
        .unwrap();
        // Conditions fail (a0 < β) but the iteration still settles.
        assert!(sol_low.flagged && sol_high.flagged);
        let gap = sol_low
            .solution
            .u
            .zip_with(&sol_high.solution.u, |a, b| a - b)
            .sup_norm();
        assert!(gap >= 0.5, "branches separated by {gap}");
        // Each converged solution satisfies its own fixed-point equation.
        for (sol, roots) in [(&sol_low, &low), (&sol_high, &high)] {
            let u0v = sol.solution.u.get(0);
            assert!((u0v - roots[0]).abs() < 1e-2, "u(0) = {u0v} vs {}", roots[0]);
        }
    }

    #[test]
    fn oscillating_map_exhausts_the_iteration_budget() {
        // c(u) = 1 + 10u² makes the pointwise update map u ↦ f/c(u) expand
        // near its fixed point, so the iteration cycles without settling.
        let spec = expression_field("-0.2 * sin(x)", None).unwrap();
        let c = SmoothExpr::parse("1 + 10*lambda^2").unwrap();
        let f = SmoothExpr::parse("2").unwrap();
        let grid = build_grid(1, 32, TAU).unwrap();
        let u0 = ScalarSamples::constant(grid, 0.5);
        let err = solve_nonlinear(
            &spec, &c, &f, &grid, (0.0, 2.0), &u0, 1e-9, Some(0.02), Some(1e-6),
        );
        match err {
            Err(Error::NonConvergence { iterations, .. }) => assert_eq!(iterations, 50),
            other => panic!("expected an iteration-budget failure, got {other:?}"),
        }
    }
}
