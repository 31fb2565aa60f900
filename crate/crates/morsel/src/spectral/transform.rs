//! Drift elimination for gradient fields b = ∇φ: substituting
//! u = e^{φ/2ε} v turns εΔu + ∇φ·∇u + cu = λu into the potential-only
//! problem ε²Δv + a_ε v = (ελ)v with a_ε = cε + |∇φ|²/4 + εΔφ/2
//! (Δ = −∇², matching the operator assembly).

use super::assemble::{assemble, OperatorAssembly, Scheme};
use crate::dynsys::{find_fixed_points, FieldFamily, FieldSpec};
use crate::error::Result;
use crate::expr::{SmoothExpr, Var};
use crate::mesh::{PeriodicGrid, Point, ScalarSamples};

/// Tolerance for the admissibility requirement c + Δφ/2 ≥ 0 at critical
/// points; exact-zero cases (common for trigonometric fixtures) must pass.
const ADMISSIBILITY_TOL: f64 = 1e-12;

/// The transformed potential plus the admissibility diagnostics.
#[derive(Debug, Clone)]
pub struct GradientTransform {
    pub epsilon: f64,
    /// a_ε sampled on the grid.
    pub a_eps: ScalarSamples,
    /// Critical points of φ with the value of c + Δφ/2 there.
    pub critical_values: Vec<(Point, f64)>,
    /// Critical points where c + Δφ/2 < 0 beyond tolerance; a nonempty
    /// list is a warning, not an error.
    pub violations: Vec<(Point, f64)>,
    pub admissible: bool,
}

/// Build a_ε = cε + |∇φ|²/4 + εΔφ/2 and check the hypothesis
/// c + Δφ/2 ≥ 0 at every critical point of φ.
pub fn gradient_transform(
    phi: &SmoothExpr,
    epsilon: f64,
    c: &SmoothExpr,
    grid: &PeriodicGrid,
) -> Result<GradientTransform> {
    // Δφ = −(φ_xx + φ_yy), built symbolically.
    let phi_xx = phi.expr().diff(Var::X).diff(Var::X);
    let phi_yy = phi.expr().diff(Var::Y).diff(Var::Y);
    let lap = move |p: Point| -> f64 {
        -(phi_xx.eval(p[0], p[1], 0.0)
            + if grid.dim() == 2 {
                phi_yy.eval(p[0], p[1], 0.0)
            } else {
                0.0
            })
    };

    let a_eps = ScalarSamples::from_fn(*grid, |p| {
        let g = phi.grad(p[0], p[1], 0.0);
        let grad_sq = g[0] * g[0] + if grid.dim() == 2 { g[1] * g[1] } else { 0.0 };
        c.eval(p[0], p[1], 0.0) * epsilon + 0.25 * grad_sq + 0.5 * epsilon * lap(p)
    });

    // Critical points of φ are the zeros of the gradient field.
    let grad_field = FieldSpec::new(FieldFamily::Gradient {
        phi: phi.clone(),
        dim: grid.dim(),
    });
    let zeros = find_fixed_points(&grad_field.at(0.0), grid);
    let mut critical_values = Vec::with_capacity(zeros.len());
    let mut violations = Vec::new();
    for z in &zeros {
        let v = c.eval(z.position[0], z.position[1], 0.0) + 0.5 * lap(z.position);
        critical_values.push((z.position, v));
        if v < -ADMISSIBILITY_TOL {
            violations.push((z.position, v));
        }
    }
    let admissible = violations.is_empty();
    Ok(GradientTransform {
        epsilon,
        a_eps,
        critical_values,
        violations,
        admissible,
    })
}

/// The substituted eigenproblem ε²Δv + a_ε v = (ελ)v as an assembly, for
/// cross-checking against the drifted solve: its principal eigenvalue
/// approximates ε·λ_ε.
pub fn substituted_assembly(
    grid: &PeriodicGrid,
    epsilon: f64,
    a_eps: &ScalarSamples,
) -> Result<OperatorAssembly> {
    assemble(grid, epsilon * epsilon, None, a_eps, Scheme::ExponentialFitted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_grid;
    use crate::spectral::principal_eigenpair;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn cosine_potential_matches_the_closed_form() {
        let grid = build_grid(1, 64, TAU).unwrap();
        let phi = SmoothExpr::parse("cos(x)").unwrap();
        let c = SmoothExpr::parse("1").unwrap();
        let t = gradient_transform(&phi, 0.1, &c, &grid).unwrap();
        // a_ε = ε·1 + sin²x/4 + (ε/2)·cos x  (Δcos x = cos x here).
        for idx in grid.indices() {
            let x = grid.node(idx)[0];
            let expect = 0.1 + 0.25 * x.sin().powi(2) + 0.05 * x.cos();
            assert!(
                (t.a_eps.get(idx) - expect).abs() < 1e-12,
                "a_ε mismatch at x = {x}"
            );
        }
        assert!(t.admissible, "c + Δφ/2 is 1.5 at x=0 and 0.5 at x=π");
        assert_eq!(t.critical_values.len(), 2);
    }

    #[test]
    fn constant_phi_leaves_only_c_epsilon() {
        let grid = build_grid(2, 16, TAU).unwrap();
        let phi = SmoothExpr::parse("2.5").unwrap();
        let c = SmoothExpr::parse("1 + 0.5*cos(x)").unwrap();
        let t = gradient_transform(&phi, 0.2, &c, &grid).unwrap();
        for idx in grid.indices() {
            let p = grid.node(idx);
            let expect = 0.2 * (1.0 + 0.5 * p[0].cos());
            assert!((t.a_eps.get(idx) - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn small_c_triggers_the_admissibility_warning() {
        let grid = build_grid(1, 64, TAU).unwrap();
        let phi = SmoothExpr::parse("cos(x)").unwrap();
        let c = SmoothExpr::parse("0.3").unwrap();
        let t = gradient_transform(&phi, 0.1, &c, &grid).unwrap();
        // At x = π: Δφ = cos π = −1 there, so c + Δφ/2 = 0.3 − 0.5 < 0.
        assert!(!t.admissible);
        assert_eq!(t.violations.len(), 1);
        let (p, v) = t.violations[0];
        assert!((p[0] - PI).abs() < 1e-8);
        assert!((v + 0.2).abs() < 1e-10);
    }

    #[test]
    fn minimum_of_a_eps_shrinks_linearly_at_a_critical_point() {
        let grid = build_grid(1, 128, TAU).unwrap();
        let phi = SmoothExpr::parse("cos(x)").unwrap();
        let c = SmoothExpr::parse("1").unwrap();
        let mut mins = Vec::new();
        for eps in [0.1, 0.05, 0.025] {
            let t = gradient_transform(&phi, eps, &c, &grid).unwrap();
            // The grid contains x = π exactly, where a_ε = ε(c − 1/2) = ε/2.
            assert!((t.a_eps.min() - eps / 2.0).abs() < 1e-13);
            mins.push(t.a_eps.min());
        }
        assert!(mins[0] > mins[1] && mins[1] > mins[2]);
    }

    #[test]
    fn substituted_problem_reproduces_epsilon_lambda() {
        let grid = build_grid(1, 256, TAU).unwrap();
        let eps = 0.1;
        let phi = SmoothExpr::parse("cos(x)").unwrap();
        let c_expr = SmoothExpr::parse("1").unwrap();

        // Direct drifted solve with b = ∇φ = −sin x.
        let b = crate::dynsys::expression_field("-sin(x)", None).unwrap();
        let c = ScalarSamples::constant(grid, 1.0);
        let direct = principal_eigenpair(
            &assemble(&grid, eps, Some(&b.at(0.0)), &c, Scheme::ExponentialFitted).unwrap(),
        )
        .unwrap();

        // Substituted potential-only solve.
        let t = gradient_transform(&phi, eps, &c_expr, &grid).unwrap();
        let sub = principal_eigenpair(&substituted_assembly(&grid, eps, &t.a_eps).unwrap()).unwrap();

        // The equivalence is exact in the continuum; the two discretizations
        // differ at O(h²), so compare with a forgiving tolerance.
        let lhs = sub.lambda;
        let rhs = eps * direct.lambda;
        assert!(
            (lhs - rhs).abs() < 5e-3 * rhs.abs().max(1e-3),
            "substituted {lhs} vs ε·λ = {rhs}"
        );
    }
}
