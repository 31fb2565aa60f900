//! Principal eigenpair by shifted inverse power iteration.
//!
//! The shift sits strictly below the Gershgorin floor of the assembly, so
//! the shifted matrix is an invertible M-matrix whenever the fitted scheme
//! was used; its inverse is entrywise nonnegative, which keeps every
//! iterate positive and drives the iteration to the smallest eigenvalue —
//! the discrete analogue of the positive principal eigenfunction.

use super::assemble::{assemble, OperatorAssembly};
use crate::error::{Error, Result};
use crate::linalg::{factor_csr, Csr};
use crate::mesh::ScalarSamples;

const MAX_ITERATIONS: usize = 500;
const LAMBDA_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-9;
/// Eigenvector entries below −1e−12 (relative to the sup) mean the
/// discrete monotonicity that guarantees positivity is broken.
const NEGATIVITY_TOL: f64 = 1e-12;

/// A converged principal eigenpair.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub epsilon: f64,
    pub lambda: f64,
    /// Positive eigenvector normalized to ∫u² dV = 1.
    pub u: ScalarSamples,
    /// ‖A u − λ u‖₂ / ‖u‖₂.
    pub residual: f64,
    pub iterations: usize,
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Compute the principal (smallest) eigenpair, optionally continuing from a
/// previous eigenvector (warm start for ε-sweeps).
pub fn principal_eigenpair_warm(
    a: &OperatorAssembly,
    warm: Option<&[f64]>,
) -> Result<EigenResult> {
    let n = a.len();
    let sigma = a.gershgorin_floor - 1.0;

    // Shifted copy A − σI, factored once and reused across iterations.
    let mut triplets: Vec<(usize, usize, f64)> = a.matrix.iter().collect();
    for i in 0..n {
        triplets.push((i, i, -sigma));
    }
    let shifted = Csr::from_triplets(n, n, &triplets);
    let solver = factor_csr(&shifted, a.solver_bandwidth())?;

    let mut v: Vec<f64> = match warm {
        Some(w) if w.len() == n => w.to_vec(),
        _ => vec![1.0; n],
    };
    let nv = l2(&v);
    if nv == 0.0 {
        return Err(Error::Precondition("zero start vector".into()));
    }
    v.iter_mut().for_each(|x| *x /= nv);

    let mut lambda_prev = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        let mut w = v.clone();
        solver.solve_in_place(&mut w);
        let nw = l2(&w);
        if !nw.is_finite() || nw == 0.0 {
            return Err(Error::Precondition(
                "inverse iteration produced a degenerate vector".into(),
            ));
        }
        w.iter_mut().for_each(|x| *x /= nw);

        let aw = a.matrix.matvec(&w);
        let lambda = dot(&w, &aw);
        let residual = {
            let mut r = 0.0;
            for i in 0..n {
                let d = aw[i] - lambda * w[i];
                r += d * d;
            }
            r.sqrt()
        };
        v = w;
        if (lambda - lambda_prev).abs() <= LAMBDA_TOL && residual <= RESIDUAL_TOL {
            return finish(a, v, lambda, residual, it);
        }
        lambda_prev = lambda;
    }
    Err(Error::NonConvergence {
        what: format!("principal eigenpair at ε = {}", a.epsilon),
        iterations: MAX_ITERATIONS,
    })
}

/// Principal eigenpair from the default flat start.
pub fn principal_eigenpair(a: &OperatorAssembly) -> Result<EigenResult> {
    principal_eigenpair_warm(a, None)
}

fn finish(
    a: &OperatorAssembly,
    mut v: Vec<f64>,
    lambda: f64,
    residual: f64,
    iterations: usize,
) -> Result<EigenResult> {
    // Sign-fix: the principal vector has one sign; make it positive.
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let sup = v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    if let Some(bad) = v.iter().find(|&&x| x < -NEGATIVITY_TOL * sup) {
        return Err(Error::Precondition(format!(
            "principal eigenvector has a negative entry ({bad:.3e}); \
             the discretization lost monotonicity"
        )));
    }
    // Normalize ∫u² dV = 1: the discrete integral is ‖v‖² · cell volume.
    let scale = (v.iter().map(|x| x * x).sum::<f64>() * a.grid.cell_volume()).sqrt();
    v.iter_mut().for_each(|x| *x /= scale);
    Ok(EigenResult {
        epsilon: a.epsilon,
        lambda,
        u: ScalarSamples::new(a.grid, v),
        residual,
        iterations,
    })
}

/// One entry of an ε-sweep; failures keep their ε attached.
#[derive(Debug)]
pub struct SweepEntry {
    pub epsilon: f64,
    pub outcome: Result<EigenResult>,
}

/// Solve the same (b, c, scheme) problem across a strictly decreasing list
/// of ε values, warm-starting each solve from the previous eigenvector.
/// Per-ε failures are recorded, not fatal.
pub fn epsilon_sweep(
    grid: &crate::mesh::PeriodicGrid,
    b: Option<&dyn crate::dynsys::VectorField>,
    c: &ScalarSamples,
    scheme: super::Scheme,
    epsilons: &[f64],
) -> Result<Vec<SweepEntry>> {
    if epsilons.is_empty() {
        return Err(Error::Precondition("empty ε list".into()));
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Precondition(
            "ε list must be strictly decreasing".into(),
        ));
    }
    if epsilons.iter().any(|&e| e <= 0.0) {
        return Err(Error::Precondition("ε values must be positive".into()));
    }
    let mut warm: Option<Vec<f64>> = None;
    let mut entries = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let outcome = assemble(grid, eps, b, c, scheme)
            .and_then(|a| principal_eigenpair_warm(&a, warm.as_deref()));
        if let Ok(res) = &outcome {
            warm = Some(res.u.values().to_vec());
        }
        entries.push(SweepEntry {
            epsilon: eps,
            outcome,
        });
    }
    Ok(entries)
}
