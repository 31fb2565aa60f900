//! Normalized weighted measures built from principal eigenvectors, and the
//! extraction of their small-ε limits: point masses at fixed points
//! (integrals over small balls) and line densities f²(l) along periodic
//! orbits (integrals over transversal sections), with mass bookkeeping
//! across an ε-sweep.

use crate::dynsys::{PeriodicOrbit, RecurrentSet};
use crate::error::{Error, Result};
use crate::expr::SmoothExpr;
use crate::mesh::{integrate, interp_linear, PeriodicGrid, Point, ScalarSamples};
use crate::spectral::EigenResult;

/// Which weight multiplies u² before normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// u² dV alone.
    Plain,
    /// e^{−φ/ε} u² dV — the gradient-drift weight.
    GradientWeight,
    /// e^{−L/ε} u² dV — the dissipation-plus-rotation weight.
    LyapunovWeight,
}

impl WeightKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WeightKind::Plain => "none",
            WeightKind::GradientWeight => "exp(-phi/eps)",
            WeightKind::LyapunovWeight => "exp(-L/eps)",
        }
    }
}

/// A probability density on the grid (normalized to unit integral).
#[derive(Debug, Clone)]
pub struct Measure {
    pub epsilon: f64,
    pub density: ScalarSamples,
    pub weight_kind: WeightKind,
}

/// Build the normalized measure (weight · u²)/∫(weight · u²) dV. The weight
/// exponent is shifted by its grid minimum before exponentiation so the
/// largest factor is exactly 1; underflow can then only happen where the
/// measure carries no mass anyway.
pub fn weighted_measure(
    u: &EigenResult,
    kind: WeightKind,
    weight_fn: Option<&SmoothExpr>,
) -> Result<Measure> {
    let grid = *u.u.grid();
    let raw = match kind {
        WeightKind::Plain => u.u.map(|v| v * v),
        WeightKind::GradientWeight | WeightKind::LyapunovWeight => {
            let w = weight_fn.ok_or_else(|| {
                Error::Precondition("weighted measure needs the weight function".into())
            })?;
            let samples = ScalarSamples::from_fn(grid, |p| w.eval(p[0], p[1], 0.0));
            let w_min = samples.min();
            let mut values = Vec::with_capacity(grid.len());
            for idx in grid.indices() {
                let uu = u.u.get(idx);
                values.push(((w_min - samples.get(idx)) / u.epsilon).exp() * uu * uu);
            }
            ScalarSamples::new(grid, values)
        }
    };
    let total = integrate(&raw);
    if total < 1e-300 {
        return Err(Error::Precondition(format!(
            "weighted mass underflowed ({total:.3e}): ε = {} is too small for this grid",
            u.epsilon
        )));
    }
    Ok(Measure {
        epsilon: u.epsilon,
        density: raw.map(|v| v / total),
        weight_kind: kind,
    })
}

/// Quadrature of the density over the periodic ball B(center, δ).
/// δ must span at least two grid cells so the rectangle rule sees the ball.
pub fn ball_mass(m: &Measure, center: Point, delta: f64) -> Result<f64> {
    let grid = m.density.grid();
    if delta < 2.0 * grid.max_spacing() {
        return Err(Error::Precondition(format!(
            "ball radius {delta} is below two grid spacings ({:.4})",
            2.0 * grid.max_spacing()
        )));
    }
    let mut mass = 0.0;
    for idx in grid.indices() {
        if grid.distance(grid.node(idx), center) <= delta {
            mass += m.density.get(idx);
        }
    }
    Ok(mass * grid.cell_volume())
}

/// Refuse ball radii that make distinct balls overlap.
pub fn check_ball_separation(grid: &PeriodicGrid, centers: &[Point], delta: f64) -> Result<()> {
    for i in 0..centers.len() {
        for j in (i + 1)..centers.len() {
            let d = grid.distance(centers[i], centers[j]);
            if d <= 2.0 * delta {
                return Err(Error::Precondition(format!(
                    "balls of radius {delta} around ({:.3}, {:.3}) and ({:.3}, {:.3}) overlap \
                     (separation {d:.3})",
                    centers[i][0], centers[i][1], centers[j][0], centers[j][1]
                )));
            }
        }
    }
    Ok(())
}

/// Refuse tube half-widths that make distinct orbit tubes touch.
pub fn check_tube_separation(
    grid: &PeriodicGrid,
    orbits: &[PeriodicOrbit],
    half_width: f64,
) -> Result<()> {
    for i in 0..orbits.len() {
        for j in (i + 1)..orbits.len() {
            let mut min_d = f64::INFINITY;
            for (k, &s) in orbits[i].samples.iter().enumerate() {
                // Sampling every few points is plenty for a separation test.
                if k % 8 != 0 {
                    continue;
                }
                min_d = min_d.min(orbits[j].distance_to(grid, grid.wrap_point(s)));
            }
            if min_d <= 2.0 * half_width {
                return Err(Error::Precondition(format!(
                    "orbit tubes of half-width {half_width} overlap (orbit separation {min_d:.3})"
                )));
            }
        }
    }
    Ok(())
}

/// Line density of the measure along one orbit: f²(l) at stations equally
/// spaced in arclength.
#[derive(Debug, Clone)]
pub struct CycleDensity {
    /// Arclength of each station.
    pub stations: Vec<f64>,
    /// f² at each station: the 1-D integral of the density over the
    /// transversal segment of half-length `half_width`.
    pub values: Vec<f64>,
    pub half_width: f64,
    /// ∮ f² dl by the periodic rectangle rule over the stations.
    pub integral: f64,
}

/// True when segments (a0, a1) and (b0, b1) intersect, minimal-image
/// geometry. Everything is mapped into the chart centered at a0.
fn segments_intersect(grid: &PeriodicGrid, a0: Point, a1: Point, b0: Point, b1: Point) -> bool {
    let pa = [0.0, 0.0];
    let da = grid.periodic_delta(a1, a0);
    let pb = grid.periodic_delta(b0, a0);
    let db_rel = grid.periodic_delta(b1, b0);
    let pb1 = [pb[0] + db_rel[0], pb[1] + db_rel[1]];

    let cross = |o: Point, p: Point, q: Point| -> f64 {
        (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])
    };
    let d1 = cross(pb, pb1, pa);
    let d2 = cross(pb, pb1, da);
    let d3 = cross(pa, da, pb);
    let d4 = cross(pa, da, pb1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on_segment = |o: Point, p: Point, q: Point| -> bool {
        cross(o, p, q).abs() < 1e-14
            && q[0] >= o[0].min(p[0]) - 1e-14
            && q[0] <= o[0].max(p[0]) + 1e-14
            && q[1] >= o[1].min(p[1]) - 1e-14
            && q[1] <= o[1].max(p[1]) + 1e-14
    };
    on_segment(pa, da, pb) || on_segment(pa, da, pb1) || on_segment(pb, pb1, pa) || on_segment(pb, pb1, da)
}

/// Integrate the measure over transversal segments of the orbit at
/// `n_stations` stations equally spaced in arclength. Each segment runs
/// normal to the orbit with half-length `half_width`; the density is read
/// off-grid by bilinear interpolation and integrated segment-exactly: the
/// interpolant is quadratic in arclength between grid-line crossings, so
/// two-point Gauss on each stretch integrates it without sampling error.
/// This keeps profiles taken at different half-widths consistent down to
/// the interpolant's genuine tail mass.
pub fn cycle_density(
    m: &Measure,
    orbit: &PeriodicOrbit,
    n_stations: usize,
    half_width: f64,
) -> Result<CycleDensity> {
    if !orbit.hyperbolic {
        return Err(Error::Precondition(
            "cycle density needs a hyperbolic orbit".into(),
        ));
    }
    if n_stations == 0 || half_width <= 0.0 {
        return Err(Error::Precondition(
            "need at least one station and a positive half-width".into(),
        ));
    }
    let grid = m.density.grid();
    let total = orbit.total_length();

    // Station geometry: base point and inward/outward normal endpoints.
    let mut stations = Vec::with_capacity(n_stations);
    let mut segments: Vec<(Point, Point)> = Vec::with_capacity(n_stations);
    for k in 0..n_stations {
        let l = k as f64 * total / n_stations as f64;
        let (p, tangent) = orbit.at_arclength(l);
        let normal = [-tangent[1], tangent[0]];
        let lo = [p[0] - half_width * normal[0], p[1] - half_width * normal[1]];
        let hi = [p[0] + half_width * normal[0], p[1] + half_width * normal[1]];
        stations.push(l);
        segments.push((grid.wrap_point(lo), grid.wrap_point(hi)));
    }
    for i in 0..n_stations {
        for j in (i + 1)..n_stations {
            let (a0, a1) = segments[i];
            let (b0, b1) = segments[j];
            if segments_intersect(grid, a0, a1, b0, b1) {
                return Err(Error::Precondition(format!(
                    "transversal segments at stations {i} and {j} intersect; \
                     reduce the half-width"
                )));
            }
        }
    }

    let mut values = Vec::with_capacity(n_stations);
    for (a0, a1) in &segments {
        // Work in the chart of the first endpoint: p(t) = a0 + t·d, t ∈ [0,1].
        // Cell boundaries are crossed where a coordinate hits a grid line, so
        // cutting there leaves pieces on which the interpolant is quadratic.
        let d = grid.periodic_delta(*a1, *a0);
        let mut cuts = vec![0.0, 1.0];
        for axis in 0..grid.dim() {
            if d[axis].abs() < 1e-14 {
                continue;
            }
            let h = grid.spacing(axis);
            let (lo, hi) = if d[axis] > 0.0 {
                (a0[axis], a0[axis] + d[axis])
            } else {
                (a0[axis] + d[axis], a0[axis])
            };
            let first = (lo / h).ceil() as i64;
            let last = (hi / h).floor() as i64;
            for line in first..=last {
                let t = (line as f64 * h - a0[axis]) / d[axis];
                if t > 1e-12 && t < 1.0 - 1e-12 {
                    cuts.push(t);
                }
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite cut parameters"));
        const HALF_INV_SQRT3: f64 = 0.288_675_134_594_812_9;
        let mut acc = 0.0;
        for pair in cuts.windows(2) {
            let (ta, tb) = (pair[0], pair[1]);
            if tb - ta < 1e-14 {
                continue;
            }
            let mid = 0.5 * (ta + tb);
            let off = (tb - ta) * HALF_INV_SQRT3;
            for t in [mid - off, mid + off] {
                let p = grid.wrap_point([a0[0] + t * d[0], a0[1] + t * d[1]]);
                acc += 0.5 * (tb - ta) * interp_linear(&m.density, p);
            }
        }
        let seg_len = (d[0] * d[0] + d[1] * d[1]).sqrt();
        values.push(acc * seg_len);
    }
    let integral = values.iter().sum::<f64>() * total / n_stations as f64;
    Ok(CycleDensity {
        stations,
        values,
        half_width,
        integral,
    })
}

/// Per-ε decomposition of the measures into point masses, cycle densities,
/// and the leftover.
#[derive(Debug, Clone)]
pub struct ConcentrationReport {
    /// Strictly decreasing ε values, one per analyzed measure.
    pub epsilons: Vec<f64>,
    /// Ball centers (the fixed points), in recurrent-set order.
    pub centers: Vec<Point>,
    pub delta: f64,
    pub half_width: f64,
    /// ball_masses[k][i] = mass of measure k in the ball around center i.
    pub ball_masses: Vec<Vec<f64>>,
    /// cycle_densities[k][j] = f² profile of measure k along orbit j.
    pub cycle_densities: Vec<Vec<CycleDensity>>,
    /// cycle_integrals[k][j] = ∮ f² dl for measure k, orbit j.
    pub cycle_integrals: Vec<Vec<f64>>,
    /// residual_mass[k] = 1 − Σ balls − Σ cycle integrals.
    pub residual_mass: Vec<f64>,
}

/// Decompose each measure of a sweep against the recurrent skeleton.
/// Geometry is validated up front: balls must not overlap each other or the
/// orbit tubes, and tubes must not overlap each other.
pub fn concentration_report(
    rec: &RecurrentSet,
    measures: &[Measure],
    delta: f64,
    n_stations: usize,
    half_width: f64,
) -> Result<ConcentrationReport> {
    if measures.is_empty() {
        return Err(Error::Precondition("no measures to analyze".into()));
    }
    if measures.windows(2).any(|w| w[1].epsilon >= w[0].epsilon) {
        return Err(Error::Precondition(
            "measures must come in strictly decreasing ε order".into(),
        ));
    }
    let grid = measures[0].density.grid();
    let centers: Vec<Point> = rec.fixed_points.iter().map(|f| f.position).collect();
    if !centers.is_empty() {
        check_ball_separation(grid, &centers, delta)?;
    }
    if !rec.orbits.is_empty() {
        check_tube_separation(grid, &rec.orbits, half_width)?;
    }
    for &c in &centers {
        for orb in &rec.orbits {
            let d = orb.distance_to(grid, c);
            if d <= delta + half_width {
                return Err(Error::Precondition(format!(
                    "ball at ({:.3}, {:.3}) overlaps an orbit tube (distance {d:.3})",
                    c[0], c[1]
                )));
            }
        }
    }

    let mut ball_masses = Vec::with_capacity(measures.len());
    let mut cycle_densities = Vec::with_capacity(measures.len());
    let mut cycle_integrals = Vec::with_capacity(measures.len());
    let mut residual_mass = Vec::with_capacity(measures.len());
    for m in measures {
        let mut balls = Vec::with_capacity(centers.len());
        for &c in &centers {
            balls.push(ball_mass(m, c, delta)?);
        }
        let mut densities = Vec::with_capacity(rec.orbits.len());
        let mut integrals = Vec::with_capacity(rec.orbits.len());
        for orb in &rec.orbits {
            let cd = cycle_density(m, orb, n_stations, half_width)?;
            integrals.push(cd.integral);
            densities.push(cd);
        }
        let captured: f64 = balls.iter().sum::<f64>() + integrals.iter().sum::<f64>();
        residual_mass.push(1.0 - captured);
        ball_masses.push(balls);
        cycle_densities.push(densities);
        cycle_integrals.push(integrals);
    }
    Ok(ConcentrationReport {
        epsilons: measures.iter().map(|m| m.epsilon).collect(),
        centers,
        delta,
        half_width,
        ball_masses,
        cycle_densities,
        cycle_integrals,
        residual_mass,
    })
}

/// Bookkeeping verdict over a sweep report, with per-element extrapolated
/// limits (linear-in-ε Richardson step on the last two entries).
#[derive(Debug, Clone)]
pub struct SimplexVerdict {
    /// Balls + cycles + residual account for all mass at every ε.
    pub mass_bookkeeping: bool,
    /// residual_mass never increases as ε decreases.
    pub residual_decreasing: bool,
    /// Extrapolated ball masses, one per fixed point.
    pub ball_limits: Vec<f64>,
    /// Extrapolated ∮f²dl, one per orbit.
    pub cycle_limits: Vec<f64>,
    /// Σ ball_limits + Σ cycle_limits (1 means the limit measure fills the
    /// simplex exactly).
    pub simplex_total: f64,
    pub pass: bool,
}

fn richardson(eps: &[f64], values: impl Fn(usize) -> f64) -> f64 {
    let k = eps.len();
    if k == 1 {
        return values(0);
    }
    let (e0, e1) = (eps[k - 2], eps[k - 1]);
    let (v0, v1) = (values(k - 2), values(k - 1));
    (e0 * v1 - e1 * v0) / (e0 - e1)
}

/// Verify the sweep bookkeeping and extrapolate the limit decomposition.
pub fn simplex_check(report: &ConcentrationReport) -> SimplexVerdict {
    let k = report.epsilons.len();
    let mut mass_bookkeeping = true;
    for i in 0..k {
        let total: f64 = report.ball_masses[i].iter().sum::<f64>()
            + report.cycle_integrals[i].iter().sum::<f64>()
            + report.residual_mass[i];
        if (total - 1.0).abs() > 1e-8 {
            mass_bookkeeping = false;
        }
    }
    let residual_decreasing = report
        .residual_mass
        .windows(2)
        .all(|w| w[1] <= w[0] + 1e-12);

    let ball_limits: Vec<f64> = (0..report.centers.len())
        .map(|i| richardson(&report.epsilons, |e| report.ball_masses[e][i]))
        .collect();
    let n_orbits = report
        .cycle_integrals
        .first()
        .map_or(0, |v| v.len());
    let cycle_limits: Vec<f64> = (0..n_orbits)
        .map(|j| richardson(&report.epsilons, |e| report.cycle_integrals[e][j]))
        .collect();
    let simplex_total = ball_limits.iter().sum::<f64>() + cycle_limits.iter().sum::<f64>();
    SimplexVerdict {
        mass_bookkeeping,
        residual_decreasing,
        ball_limits: ball_limits.clone(),
        cycle_limits,
        simplex_total,
        pass: mass_bookkeeping && residual_decreasing,
    }
}
