//! Detection of the recurrent skeleton of a field: Newton-refined fixed
//! points seeded from grid minima of |b|, and winding periodic orbits found
//! by a Poincaré return map on coordinate sections.

use super::flow::{rk4_step, Direction};
use super::{FixedPoint, PeriodicOrbit, PointKind, RecurrentSet, VectorField, HYPERBOLICITY_TOL};
use crate::mesh::{PeriodicGrid, Point};

/// |b| at an accepted fixed point must not exceed this.
const FIXED_POINT_TOL: f64 = 1e-10;
/// Newton target (tighter than the acceptance bound to leave slack).
const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 50;
/// Seeds whose section-transversal speed is below this cannot produce a
/// clean crossing and are skipped.
const TANGENT_SPEED_TOL: f64 = 1e-9;
/// Orbit closure requirement: |x(T) − x(0)| after one full return.
const CLOSURE_TOL: f64 = 1e-8;
/// Bisection width on the return-map root, in the seed coordinate.
const ROOT_TOL: f64 = 1e-10;
/// Samples stored along one period of a refined orbit.
const ORBIT_SAMPLES: usize = 2048;

fn norm(v: Point) -> f64 {
    (v[0] * v[0] + v[1] * v[1]).sqrt()
}

/// Real parts of the eigenvalues of a 2×2 (or embedded 1×1) matrix,
/// ascending.
fn eigen_real_parts(j: [[f64; 2]; 2], dim: usize) -> Vec<f64> {
    if dim == 1 {
        return vec![j[0][0]];
    }
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = 0.25 * tr * tr - det;
    let mut parts = if disc >= 0.0 {
        let s = disc.sqrt();
        vec![0.5 * tr - s, 0.5 * tr + s]
    } else {
        vec![0.5 * tr, 0.5 * tr]
    };
    parts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    parts
}

fn classify(parts: &[f64]) -> (PointKind, bool) {
    let neg = parts.iter().filter(|&&r| r < -HYPERBOLICITY_TOL).count();
    let pos = parts.iter().filter(|&&r| r > HYPERBOLICITY_TOL).count();
    let hyperbolic = neg + pos == parts.len();
    // Ties from near-zero eigenvalues resolve toward sink, then source.
    let kind = if parts.iter().all(|&r| r <= HYPERBOLICITY_TOL) {
        PointKind::Sink
    } else if parts.iter().all(|&r| r >= -HYPERBOLICITY_TOL) {
        PointKind::Source
    } else {
        PointKind::Saddle
    };
    (kind, hyperbolic)
}

/// Newton iteration toward a zero of the field from one seed. Returns the
/// wrapped position on success.
fn newton_zero<F: VectorField + ?Sized>(
    field: &F,
    grid: &PeriodicGrid,
    seed: Point,
) -> Option<Point> {
    let dim = field.dim();
    let mut p = seed;
    for _ in 0..NEWTON_MAX_ITER {
        let b = field.eval(p);
        if norm(b) <= NEWTON_TOL {
            break;
        }
        let j = field.jacobian(p);
        let delta = if dim == 1 {
            if j[0][0].abs() < 1e-14 {
                return None;
            }
            [-b[0] / j[0][0], 0.0]
        } else {
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det.abs() < 1e-14 {
                return None;
            }
            [
                (-b[0] * j[1][1] + b[1] * j[0][1]) / det,
                (-b[1] * j[0][0] + b[0] * j[1][0]) / det,
            ]
        };
        // A full-period jump means the iteration has left the basin of any
        // nearby root; give up on this seed.
        if norm(delta) > grid.period(0).max(grid.period(1)) {
            return None;
        }
        p = [p[0] + delta[0], p[1] + delta[1]];
    }
    let p = grid.wrap_point(p);
    (norm(field.eval(p)) <= FIXED_POINT_TOL).then_some(p)
}

/// Find all zeros of the field: every grid node that is a local minimum of
/// |b| against its axis neighbors seeds a Newton iteration; converged roots
/// are deduplicated at one grid spacing and classified by their Jacobians.
pub fn find_fixed_points<F: VectorField + ?Sized>(
    field: &F,
    grid: &PeriodicGrid,
) -> Vec<FixedPoint> {
    let dim = field.dim();
    let mag: Vec<f64> = grid.indices().map(|i| norm(field.eval(grid.node(i)))).collect();

    // An identically vanishing field has no isolated zeros to report.
    if mag.iter().all(|&m| m < 1e-14) {
        return Vec::new();
    }

    let merge_radius = grid.max_spacing();
    let mut roots: Vec<Point> = Vec::new();
    for idx in grid.indices() {
        let (i, j) = grid.lattice(idx);
        let (i, j) = (i as isize, j as isize);
        let mut neighbors = vec![grid.index(i - 1, j), grid.index(i + 1, j)];
        if dim == 2 {
            neighbors.push(grid.index(i, j - 1));
            neighbors.push(grid.index(i, j + 1));
        }
        if neighbors.iter().any(|&nb| mag[nb] < mag[idx]) {
            continue;
        }
        if let Some(p) = newton_zero(field, grid, grid.node(idx)) {
            if roots.iter().all(|&r| grid.distance(r, p) > merge_radius) {
                roots.push(p);
            }
        }
    }
    roots.sort_by(|a, b| (a[0], a[1]).partial_cmp(&(b[0], b[1])).unwrap());

    roots
        .into_iter()
        .map(|p| {
            let jac = field.jacobian(p);
            let parts = eigen_real_parts(jac, dim);
            let (kind, hyperbolic) = classify(&parts);
            FixedPoint {
                position: p,
                jacobian: jac,
                eigen_real_parts: parts,
                kind,
                hyperbolic,
            }
        })
        .collect()
}

/// Outcome of one attempted first return to the section.
struct Crossing {
    /// Unwrapped position at the crossing.
    position: Point,
    /// Elapsed time (the candidate period).
    time: f64,
}

/// Integrate from a point on the section `{x_axis = 0}` until the unwrapped
/// axis coordinate has advanced by one full period in the direction of the
/// initial transversal speed. `None` when the trajectory stalls at a zero of
/// the field, times out, or starts tangent to the section.
fn first_return<F: VectorField + ?Sized>(
    field: &F,
    grid: &PeriodicGrid,
    axis: usize,
    seed_other: f64,
    dt: f64,
) -> Option<Crossing> {
    let other = 1 - axis;
    let mut start = [0.0, 0.0];
    start[other] = seed_other;

    let speed0 = field.eval(start)[axis];
    if speed0.abs() < TANGENT_SPEED_TOL {
        return None;
    }
    let sign = speed0.signum();
    let target = sign * grid.period(axis);
    let t_cap = 50.0 * grid.period(axis);

    let mut p = start;
    let mut t = 0.0;
    while t < t_cap {
        let q = rk4_step(field, p, dt, Direction::Forward);
        if sign * (q[axis] - target) >= 0.0 {
            // Bracketed: shrink the final step until the crossing time is
            // resolved to machine precision.
            let (mut lo, mut hi) = (0.0f64, dt);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let r = rk4_step(field, p, mid, Direction::Forward);
                if sign * (r[axis] - target) >= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let h = 0.5 * (lo + hi);
            return Some(Crossing {
                position: rk4_step(field, p, h, Direction::Forward),
                time: t + h,
            });
        }
        p = q;
        t += dt;
        if norm(field.eval(p)) < FIXED_POINT_TOL {
            return None; // stalled at a fixed point
        }
    }
    None
}

/// Signed return displacement of the non-section coordinate, wrapped to the
/// minimal image. `None` when the seed produces no return.
fn return_displacement<F: VectorField + ?Sized>(
    field: &F,
    grid: &PeriodicGrid,
    axis: usize,
    seed_other: f64,
    dt: f64,
) -> Option<f64> {
    let other = 1 - axis;
    let crossing = first_return(field, grid, axis, seed_other, dt)?;
    let p = grid.period(other);
    let mut d = (crossing.position[other] - seed_other).rem_euclid(p);
    if d >= p / 2.0 {
        d -= p;
    }
    Some(d)
}

/// Build the refined orbit through the section point found by the root
/// scan: re-integrate with a fine step, store samples and cumulative
/// arclength, and average the divergence along the loop for the transversal
/// Floquet exponent.
fn refine_orbit<F: VectorField + ?Sized>(
    field: &F,
    grid: &PeriodicGrid,
    axis: usize,
    seed_other: f64,
    dt: f64,
) -> Option<PeriodicOrbit> {
    let crossing = first_return(field, grid, axis, seed_other, dt)?;
    let period = crossing.time;

    let other = 1 - axis;
    let mut start = [0.0, 0.0];
    start[other] = seed_other;
    let closure_gap = grid.distance(start, grid.wrap_point(crossing.position));
    if closure_gap > CLOSURE_TOL {
        return None;
    }

    let fine = period / ORBIT_SAMPLES as f64;
    let mut samples = Vec::with_capacity(ORBIT_SAMPLES + 1);
    let mut arclength = Vec::with_capacity(ORBIT_SAMPLES + 1);
    let mut divergences = Vec::with_capacity(ORBIT_SAMPLES + 1);
    let mut p = start;
    samples.push(p);
    arclength.push(0.0);
    divergences.push(field.divergence(p));
    for _ in 0..ORBIT_SAMPLES {
        let q = rk4_step(field, p, fine, Direction::Forward);
        let seg = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
        arclength.push(arclength.last().unwrap() + seg);
        samples.push(q);
        divergences.push(field.divergence(q));
        p = q;
    }

    // Trapezoid average of div b over the loop. The tangential direction
    // contributes no net growth over a period, so this average is the
    // transversal exponent (Liouville's formula).
    let mut integral = 0.0;
    for k in 0..ORBIT_SAMPLES {
        integral += 0.5 * (divergences[k] + divergences[k + 1]) * fine;
    }
    let floquet_log = integral / period;

    Some(PeriodicOrbit {
        samples,
        period,
        arclength,
        floquet_log,
        closure_gap,
        hyperbolic: floquet_log.abs() >= HYPERBOLICITY_TOL,
    })
}

fn orbits_duplicate(grid: &PeriodicGrid, a: &PeriodicOrbit, b: &PeriodicOrbit) -> bool {
    if (a.period - b.period).abs() > 1e-6 * a.period.max(b.period) {
        return false;
    }
    let probe = grid.wrap_point(a.samples[a.samples.len() / 3]);
    b.distance_to(grid, probe) <= grid.max_spacing()
}

/// Scan one coordinate section for winding periodic orbits.
///
/// Seeds are `n_scan` equispaced values of the non-section coordinate. Each
/// defined seed yields the signed return displacement g; roots of g located
/// directly (|g| below the closure tolerance) or by sign-change bisection
/// become candidate orbits, which must then close to within 1e-8.
pub fn find_periodic_orbits<F: VectorField + ?Sized>(
    field: &F,
    grid: &PeriodicGrid,
    axis: usize,
    n_scan: usize,
) -> Vec<PeriodicOrbit> {
    assert!(field.dim() == 2, "orbit scan needs a two-dimensional field");
    assert!(axis < 2 && n_scan >= 4);
    let other = 1 - axis;
    let span = grid.period(other);
    let dt = 2e-3;

    let seeds: Vec<f64> = (0..n_scan).map(|k| k as f64 * span / n_scan as f64).collect();
    let values: Vec<Option<f64>> = seeds
        .iter()
        .map(|&s| return_displacement(field, grid, axis, s, dt))
        .collect();

    let mut root_seeds: Vec<f64> = Vec::new();
    let mut direct_root = vec![false; n_scan];
    for k in 0..n_scan {
        if let Some(g) = values[k] {
            if g.abs() < CLOSURE_TOL {
                root_seeds.push(seeds[k]);
                direct_root[k] = true;
            }
        }
    }
    for k in 0..n_scan {
        let k1 = (k + 1) % n_scan;
        if direct_root[k] || direct_root[k1] {
            continue; // already captured at an endpoint
        }
        let (Some(ga), Some(gb)) = (values[k], values[k1]) else {
            continue;
        };
        if ga.signum() * gb.signum() >= 0.0 {
            continue;
        }
        // Bisection on the seed coordinate.
        let (mut lo, mut hi, mut glo) = (seeds[k], seeds[k] + span / n_scan as f64, ga);
        let mut failed = false;
        while hi - lo > ROOT_TOL {
            let mid = 0.5 * (lo + hi);
            match return_displacement(field, grid, axis, mid, dt) {
                Some(gm) => {
                    if gm == 0.0 || gm.signum() == glo.signum() {
                        lo = mid;
                        glo = gm;
                    } else {
                        hi = mid;
                    }
                }
                None => {
                    failed = true;
                    break;
                }
            }
        }
        if !failed {
            root_seeds.push(0.5 * (lo + hi));
        }
    }

    let mut orbits: Vec<PeriodicOrbit> = Vec::new();
    for s in root_seeds {
        if let Some(orb) = refine_orbit(field, grid, axis, s, dt) {
            if orbits.iter().all(|o| !orbits_duplicate(grid, o, &orb)) {
                orbits.push(orb);
            }
        }
    }
    orbits
}

/// Default number of section seeds per axis used by [`detect_recurrent_set`].
pub const DEFAULT_ORBIT_SCAN: usize = 64;

/// Assemble the full recurrent skeleton: fixed points plus the winding
/// orbits found on both coordinate sections, deduplicated, with the
/// Morse–Smale flag set only when every element is hyperbolic.
pub fn detect_recurrent_set<F: VectorField + ?Sized>(
    field: &F,
    grid: &PeriodicGrid,
) -> RecurrentSet {
    let fixed_points = find_fixed_points(field, grid);
    let mut orbits: Vec<PeriodicOrbit> = Vec::new();
    if field.dim() == 2 {
        for axis in 0..2 {
            for orb in find_periodic_orbits(field, grid, axis, DEFAULT_ORBIT_SCAN) {
                if orbits.iter().all(|o| !orbits_duplicate(grid, o, &orb)) {
                    orbits.push(orb);
                }
            }
        }
    }
    let morse_smale =
        fixed_points.iter().all(|f| f.hyperbolic) && orbits.iter().all(|o| o.hyperbolic);
    RecurrentSet {
        fixed_points,
        orbits,
        morse_smale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::builtin_field;
    use crate::mesh::build_grid;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn circle_sine_has_a_sink_at_zero_and_a_source_at_pi() {
        let spec = builtin_field("circle_sine", None).unwrap();
        let grid = build_grid(1, 64, TAU).unwrap();
        let fps = find_fixed_points(&spec.at(0.0), &grid);
        assert_eq!(fps.len(), 2);
        assert!(fps[0].position[0].abs() < 1e-10);
        assert_eq!(fps[0].kind, PointKind::Sink);
        assert!((fps[0].eigen_real_parts[0] + 1.0).abs() < 1e-10);
        assert!((fps[1].position[0] - PI).abs() < 1e-10);
        assert_eq!(fps[1].kind, PointKind::Source);
        assert!((fps[1].eigen_real_parts[0] - 1.0).abs() < 1e-10);
        assert!(fps.iter().all(|f| f.hyperbolic));
    }

    #[test]
    fn torus_morse_has_source_saddles_and_sink() {
        let spec = builtin_field("torus_morse", None).unwrap();
        let grid = build_grid(2, 32, TAU).unwrap();
        let rec = detect_recurrent_set(&spec.at(0.0), &grid);
        assert_eq!(rec.fixed_points.len(), 4);
        assert!(rec.orbits.is_empty());
        assert!(rec.morse_smale);

        let kind_at = |x: f64, y: f64| {
            rec.fixed_points
                .iter()
                .find(|f| grid.distance(f.position, [x, y]) < 1e-8)
                .map(|f| f.kind)
                .expect("fixed point missing")
        };
        assert_eq!(kind_at(0.0, 0.0), PointKind::Source);
        assert_eq!(kind_at(PI, 0.0), PointKind::Saddle);
        assert_eq!(kind_at(0.0, PI), PointKind::Saddle);
        assert_eq!(kind_at(PI, PI), PointKind::Sink);

        let saddle = rec
            .fixed_points
            .iter()
            .find(|f| grid.distance(f.position, [PI, 0.0]) < 1e-8)
            .unwrap();
        assert!((saddle.stable_trace() + 1.0).abs() < 1e-9);
        assert!((saddle.unstable_trace() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn torus_cycles_has_two_orbits_and_no_fixed_points() {
        let spec = builtin_field("torus_cycles", None).unwrap();
        let grid = build_grid(2, 32, TAU).unwrap();
        let rec = detect_recurrent_set(&spec.at(0.0), &grid);
        assert!(rec.fixed_points.is_empty());
        assert_eq!(rec.orbits.len(), 2);
        assert!(rec.morse_smale);

        let mut orbits = rec.orbits.clone();
        orbits.sort_by(|a, b| a.floquet_log.partial_cmp(&b.floquet_log).unwrap());
        let attracting = &orbits[0];
        let repelling = &orbits[1];

        assert!((attracting.floquet_log + 1.0).abs() < 1e-6);
        assert!((repelling.floquet_log - 1.0).abs() < 1e-6);
        assert!((attracting.period - TAU).abs() < 1e-8);
        assert!((repelling.period - TAU).abs() < 1e-8);
        assert!(attracting.attracting());
        assert!(!repelling.attracting());
        // The attracting cycle is the line y = 0; arclength of one loop is 2π.
        for s in &attracting.samples {
            let w = grid.wrap_point(*s);
            assert!(w[1].min(TAU - w[1]) < 1e-8);
        }
        assert!((attracting.total_length() - TAU).abs() < 1e-6);
        assert!(attracting.closure_gap < 1e-8);
    }

    #[test]
    fn shifted_cycles_scale_the_floquet_exponents() {
        let spec = builtin_field("shifted_torus_cycles", Some(5.0)).unwrap();
        let grid = build_grid(2, 32, TAU).unwrap();
        let rec = detect_recurrent_set(&spec.at(0.0), &grid);
        assert_eq!(rec.orbits.len(), 2);
        let mut logs: Vec<f64> = rec.orbits.iter().map(|o| o.floquet_log).collect();
        logs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((logs[0] + 5.0).abs() < 1e-5, "got {logs:?}");
        assert!((logs[1] - 5.0).abs() < 1e-5, "got {logs:?}");
    }

    #[test]
    fn orbit_arclength_lookup_walks_the_loop() {
        let spec = builtin_field("torus_cycles", None).unwrap();
        let grid = build_grid(2, 32, TAU).unwrap();
        let orbits = find_periodic_orbits(&spec.at(0.0), &grid, 0, 64);
        let attracting = orbits
            .iter()
            .find(|o| o.floquet_log < 0.0)
            .expect("attracting cycle not found");
        // On y = 0 the motion is unit-speed in x, so arclength equals x.
        let (p, tangent) = attracting.at_arclength(1.5);
        assert!((p[0] - 1.5).abs() < 1e-4);
        assert!(p[1].abs() < 1e-8);
        assert!((tangent[0] - 1.0).abs() < 1e-8);
        // Wrap-around lookup.
        let (q, _) = attracting.at_arclength(attracting.total_length() + 0.25);
        assert!((q[0] - 0.25).abs() < 1e-4);
    }

    #[test]
    fn identically_zero_field_reports_no_isolated_structure() {
        let spec = builtin_field("zero", None).unwrap();
        let grid = build_grid(2, 16, TAU).unwrap();
        let rec = detect_recurrent_set(&spec.at(0.0), &grid);
        assert!(rec.is_empty());
        assert!(rec.morse_smale);
    }

    #[test]
    fn fixed_points_survive_under_grid_refinement() {
        let spec = builtin_field("torus_morse", None).unwrap();
        for n in [16, 32, 64] {
            let grid = build_grid(2, n, TAU).unwrap();
            let fps = find_fixed_points(&spec.at(0.0), &grid);
            assert_eq!(fps.len(), 4, "n = {n}");
        }
    }
}
