//! Skeleton-based prediction of the ε → 0 eigenvalue limit: one candidate
//! value per recurrent element — the zero-order coefficient minus the
//! expansion rate of the element's unstable directions — reported with both
//! the max and min conventions, optionally compared against a measured
//! sweep limit. This is a diagnostic, not a gate: which convention applies
//! is resolved empirically per problem.

use crate::dynsys::RecurrentSet;
use crate::error::{Error, Result};
use crate::mesh::{PeriodicGrid, Point};

/// Which extremum of the candidate set matched a sweep limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    Max,
    Min,
}

impl Convention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::Max => "max",
            Convention::Min => "min",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PressureCandidate {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct PressureReport {
    pub candidates: Vec<PressureCandidate>,
    pub max_value: f64,
    pub min_value: f64,
    /// Present when a sweep limit was supplied: the convention whose
    /// extremum lies closer to it, and the absolute gap.
    pub matched: Option<(Convention, f64)>,
}

/// Candidate eigenvalue limits from the recurrent skeleton. Fixed points
/// contribute c(P) minus the trace of the Jacobian over the unstable
/// subspace; orbits contribute the period average of c minus the positive
/// part of the transversal Floquet exponent. Refuses non-hyperbolic input.
pub fn pressure_prediction(
    rec: &RecurrentSet,
    grid: &PeriodicGrid,
    c: impl Fn(Point) -> f64,
    sweep_limit: Option<f64>,
) -> Result<PressureReport> {
    if !rec.morse_smale {
        return Err(Error::Precondition(
            "pressure candidates need a hyperbolic (Morse–Smale) skeleton".into(),
        ));
    }
    if rec.is_empty() {
        return Err(Error::Precondition(
            "no recurrent elements to build candidates from".into(),
        ));
    }
    let mut candidates = Vec::with_capacity(rec.len());
    for fp in &rec.fixed_points {
        let value = c(fp.position) - fp.unstable_trace();
        candidates.push(PressureCandidate {
            label: format!(
                "{} at ({:.4}, {:.4})",
                fp.kind.as_str(),
                fp.position[0],
                fp.position[1]
            ),
            value,
        });
    }
    for orb in &rec.orbits {
        // Period average of c by the trapezoid rule over the uniform-in-time
        // samples (first and last sample coincide up to the closure gap).
        let vals: Vec<f64> = orb
            .samples
            .iter()
            .map(|&p| c(grid.wrap_point(p)))
            .collect();
        let m = vals.len() - 1;
        let mut avg = 0.5 * (vals[0] + vals[m]);
        avg += vals[1..m].iter().sum::<f64>();
        avg /= m as f64;
        let value = avg - orb.floquet_log.max(0.0);
        candidates.push(PressureCandidate {
            label: format!(
                "orbit (period {:.4}, transversal exponent {:+.4})",
                orb.period, orb.floquet_log
            ),
            value,
        });
    }
    let max_value = candidates.iter().map(|c| c.value).fold(f64::NEG_INFINITY, f64::max);
    let min_value = candidates.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
    let matched = sweep_limit.map(|limit| {
        let d_max = (max_value - limit).abs();
        let d_min = (min_value - limit).abs();
        if d_max <= d_min {
            (Convention::Max, d_max)
        } else {
            (Convention::Min, d_min)
        }
    });
    Ok(PressureReport {
        candidates,
        max_value,
        min_value,
        matched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::{builtin_field, detect_recurrent_set};
    use crate::mesh::build_grid;
    use std::f64::consts::TAU;

    #[test]
    fn circle_sine_candidates_follow_the_unstable_trace() {
        let spec = builtin_field("circle_sine", None).unwrap();
        let grid = build_grid(1, 64, TAU).unwrap();
        let rec = detect_recurrent_set(&spec.at(0.0), &grid);
        let report = pressure_prediction(&rec, &grid, |_| 2.0, Some(2.0)).unwrap();
        assert_eq!(report.candidates.len(), 2);
        // Sink keeps c; source loses its expansion rate b′(π) = 1.
        let mut values: Vec<f64> = report.candidates.iter().map(|c| c.value).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((values[0] - 1.0).abs() < 1e-9);
        assert!((values[1] - 2.0).abs() < 1e-9);
        let (conv, gap) = report.matched.unwrap();
        assert_eq!(conv, Convention::Max);
        assert!(gap < 1e-9);
    }

    #[test]
    fn torus_cycle_candidates_use_period_averages() {
        let spec = builtin_field("torus_cycles", None).unwrap();
        let grid = build_grid(2, 32, TAU).unwrap();
        let rec = detect_recurrent_set(&spec.at(0.0), &grid);
        let report = pressure_prediction(&rec, &grid, |_| 1.0, None).unwrap();
        assert_eq!(report.candidates.len(), 2);
        let mut values: Vec<f64> = report.candidates.iter().map(|c| c.value).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Attracting cycle: 1 − 0; repelling cycle: 1 − 1.
        assert!(values[0].abs() < 1e-5);
        assert!((values[1] - 1.0).abs() < 1e-5);
        assert!(report.matched.is_none());
    }

    #[test]
    fn varying_c_is_averaged_along_the_orbit() {
        let spec = builtin_field("torus_cycles", None).unwrap();
        let grid = build_grid(2, 32, TAU).unwrap();
        let rec = detect_recurrent_set(&spec.at(0.0), &grid);
        // c = 2 + cos x averages to 2 over either cycle (full x-winding).
        let report = pressure_prediction(&rec, &grid, |p| 2.0 + p[0].cos(), None).unwrap();
        let mut values: Vec<f64> = report.candidates.iter().map(|c| c.value).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((values[0] - 1.0).abs() < 1e-4, "repelling: 2 − 1");
        assert!((values[1] - 2.0).abs() < 1e-4, "attracting: 2 − 0");
    }

    #[test]
    fn non_hyperbolic_sets_are_refused() {
        let spec = builtin_field("circle_sine", None).unwrap();
        let grid = build_grid(1, 64, TAU).unwrap();
        let mut rec = detect_recurrent_set(&spec.at(0.0), &grid);
        rec.morse_smale = false;
        assert!(pressure_prediction(&rec, &grid, |_| 1.0, None).is_err());
        let empty = RecurrentSet {
            morse_smale: true,
            ..Default::default()
        };
        assert!(pressure_prediction(&empty, &grid, |_| 1.0, None).is_err());
    }
}
