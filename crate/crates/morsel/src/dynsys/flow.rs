//! Classical RK4 integration of field trajectories, forward or backward in
//! time, on the periodic domain.
//!
//! Positions are advanced in unwrapped coordinates (so winding and arclength
//! are meaningful) while the field itself is evaluated on wrapped points;
//! built-in families are periodic closed forms, so wrapping before
//! evaluation only matters for numerical hygiene on long integrations.

use super::VectorField;
use crate::mesh::Point;

/// Orientation of time along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(&self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

/// One classical Runge–Kutta step of size `dt` (signed by `dir`), returning
/// the new unwrapped position.
pub fn rk4_step<F: VectorField + ?Sized>(field: &F, p: Point, dt: f64, dir: Direction) -> Point {
    let s = dir.sign() * dt;
    let k1 = field.eval(p);
    let k2 = field.eval([p[0] + 0.5 * s * k1[0], p[1] + 0.5 * s * k1[1]]);
    let k3 = field.eval([p[0] + 0.5 * s * k2[0], p[1] + 0.5 * s * k2[1]]);
    let k4 = field.eval([p[0] + s * k3[0], p[1] + s * k3[1]]);
    [
        p[0] + s / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        p[1] + s / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

/// A sampled trajectory: times are nonnegative elapsed times regardless of
/// direction, positions are unwrapped.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub positions: Vec<Point>,
    pub direction: Direction,
}

impl Trajectory {
    pub fn endpoint(&self) -> Point {
        *self.positions.last().unwrap()
    }
}

/// Integrate from `start` for total elapsed time `t_final` with step `dt`,
/// recording every accepted step. The last step is shortened so the final
/// time is hit exactly.
pub fn flow<F: VectorField + ?Sized>(
    field: &F,
    start: Point,
    t_final: f64,
    dt: f64,
    dir: Direction,
) -> Trajectory {
    assert!(t_final >= 0.0 && dt > 0.0, "need t_final >= 0 and dt > 0");
    let mut times = vec![0.0];
    let mut positions = vec![start];
    let mut t = 0.0;
    let mut p = start;
    while t < t_final {
        let step = dt.min(t_final - t);
        p = rk4_step(field, p, step, dir);
        t += step;
        times.push(t);
        positions.push(p);
    }
    Trajectory {
        times,
        positions,
        direction: dir,
    }
}

/// Endpoint-only variant of [`flow`] that skips storing the path.
pub fn flow_point<F: VectorField + ?Sized>(
    field: &F,
    start: Point,
    t_final: f64,
    dt: f64,
    dir: Direction,
) -> Point {
    assert!(t_final >= 0.0 && dt > 0.0, "need t_final >= 0 and dt > 0");
    let mut t = 0.0;
    let mut p = start;
    while t < t_final {
        let step = dt.min(t_final - t);
        p = rk4_step(field, p, step, dir);
        t += step;
    }
    p
}
