//! Basin-of-attraction labeling by forward integration, and the separatrix
//! mask marking grid nodes whose trajectories do not cleanly reach an
//! attractor (or whose neighbors disagree about which one).

use super::flow::{rk4_step, Direction};
use super::{RecurrentSet, VectorField};
use crate::mesh::{PeriodicGrid, Point};

/// Tolerance for the t = 0 "node sits exactly on an element" match.
const ON_ELEMENT_TOL: f64 = 1e-6;
/// Arrival tolerance for mid-flight and final matching.
const ARRIVAL_TOL: f64 = 1e-3;
/// Integration horizon: this many e-folding times of the slowest attractor.
const HORIZON_EFOLDS: f64 = 20.0;
const MAX_HORIZON: f64 = 1000.0;
const BASIN_DT: f64 = 1e-2;
/// Steps between mid-flight arrival checks.
const CHECK_STRIDE: usize = 10;

/// Wrapped geometry of one recurrent element with a decimated prefilter for
/// cheap distance tests.
struct ElementGeometry {
    points: Vec<Point>,
    coarse: Vec<Point>,
    /// Half the largest gap between consecutive prefilter points: a true
    /// distance d to the element tests against the prefilter as ≤ d + pad.
    pad: f64,
    attracting: bool,
}

impl ElementGeometry {
    fn point(grid: &PeriodicGrid, p: Point, attracting: bool) -> Self {
        let w = grid.wrap_point(p);
        ElementGeometry {
            points: vec![w],
            coarse: vec![w],
            pad: 0.0,
            attracting,
        }
    }

    fn curve(grid: &PeriodicGrid, samples: &[Point], attracting: bool) -> Self {
        let points: Vec<Point> = samples.iter().map(|&s| grid.wrap_point(s)).collect();
        let stride = (points.len() / 64).max(1);
        let coarse: Vec<Point> = points.iter().step_by(stride).copied().collect();
        let mut pad = 0.0f64;
        for k in 0..coarse.len() {
            let next = coarse[(k + 1) % coarse.len()];
            pad = pad.max(0.5 * grid.distance(coarse[k], next));
        }
        ElementGeometry {
            points,
            coarse,
            pad,
            attracting,
        }
    }

    fn distance(&self, grid: &PeriodicGrid, p: Point) -> f64 {
        self.points
            .iter()
            .map(|&q| grid.distance(p, q))
            .fold(f64::INFINITY, f64::min)
    }

    /// Two-stage test: the decimated prefilter rejects cheaply, the full
    /// sample set confirms.
    fn within(&self, grid: &PeriodicGrid, p: Point, tol: f64) -> bool {
        let coarse_hit = self
            .coarse
            .iter()
            .any(|&q| grid.distance(p, q) <= tol + self.pad);
        coarse_hit && self.distance(grid, p) <= tol
    }
}

fn element_geometries(grid: &PeriodicGrid, rec: &RecurrentSet) -> Vec<ElementGeometry> {
    let mut geoms = Vec::with_capacity(rec.len());
    for fp in &rec.fixed_points {
        geoms.push(ElementGeometry::point(grid, fp.position, fp.attracting()));
    }
    for orb in &rec.orbits {
        geoms.push(ElementGeometry::curve(grid, &orb.samples, orb.attracting()));
    }
    geoms
}

/// Label every grid node with the recurrent element its forward trajectory
/// reaches, indexed into the concatenation (fixed points, then orbits) of
/// the recurrent set. Nodes already on an element at t = 0 take that
/// element's label (attracting or not); others are integrated until they
/// arrive at an attracting element, with one final match against all
/// elements to catch stable manifolds of saddles and repellers. `None`
/// means the trajectory reached nothing recognizable — or that the set has
/// no attracting element at all.
pub fn label_attractors<F: VectorField + ?Sized>(
    field: &F,
    grid: &PeriodicGrid,
    rec: &RecurrentSet,
) -> Vec<Option<usize>> {
    let geoms = element_geometries(grid, rec);
    let has_attractor = geoms.iter().any(|g| g.attracting);
    if !has_attractor {
        return vec![None; grid.len()];
    }
    let horizon = rec
        .slowest_contraction()
        .map_or(MAX_HORIZON, |rate| (HORIZON_EFOLDS / rate).min(MAX_HORIZON));
    let steps = (horizon / BASIN_DT).ceil() as usize;

    let mut labels = vec![None; grid.len()];
    'node: for idx in grid.indices() {
        let start = grid.node(idx);
        for (e, g) in geoms.iter().enumerate() {
            if g.within(grid, start, ON_ELEMENT_TOL) {
                labels[idx] = Some(e);
                continue 'node;
            }
        }
        let mut p = start;
        for k in 1..=steps {
            p = rk4_step(field, p, BASIN_DT, Direction::Forward);
            if k % CHECK_STRIDE == 0 {
                let w = grid.wrap_point(p);
                for (e, g) in geoms.iter().enumerate() {
                    if g.attracting && g.within(grid, w, ARRIVAL_TOL) {
                        labels[idx] = Some(e);
                        continue 'node;
                    }
                }
            }
        }
        let w = grid.wrap_point(p);
        for (e, g) in geoms.iter().enumerate() {
            if g.within(grid, w, ARRIVAL_TOL) {
                labels[idx] = Some(e);
                continue 'node;
            }
        }
    }
    labels
}

/// Boolean flags over the grid nodes.
#[derive(Debug, Clone)]
pub struct Mask {
    grid: PeriodicGrid,
    flags: Vec<bool>,
}

impl Mask {
    pub fn new(grid: PeriodicGrid, flags: Vec<bool>) -> Self {
        assert_eq!(flags.len(), grid.len());
        Mask { grid, flags }
    }

    pub fn empty(grid: PeriodicGrid) -> Self {
        let flags = vec![false; grid.len()];
        Mask { grid, flags }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn is_masked(&self, idx: usize) -> bool {
        self.flags[idx]
    }

    pub fn count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    pub fn fraction(&self) -> f64 {
        self.count() as f64 / self.flags.len() as f64
    }

    /// Grow the masked region by a periodic Euclidean radius.
    pub fn dilate(&self, radius: f64) -> Mask {
        if radius <= 0.0 {
            return self.clone();
        }
        let g = &self.grid;
        // Offsets within the radius, precomputed once.
        let reach_i = (radius / g.spacing(0)).floor() as isize;
        let reach_j = if g.dim() == 2 {
            (radius / g.spacing(1)).floor() as isize
        } else {
            0
        };
        let mut stencil = Vec::new();
        for dj in -reach_j..=reach_j {
            for di in -reach_i..=reach_i {
                let dx = di as f64 * g.spacing(0);
                let dy = dj as f64 * if g.dim() == 2 { g.spacing(1) } else { 0.0 };
                if dx * dx + dy * dy <= radius * radius {
                    stencil.push((di, dj));
                }
            }
        }
        let mut flags = vec![false; self.flags.len()];
        for idx in g.indices() {
            if !self.flags[idx] {
                continue;
            }
            let (i, j) = g.lattice(idx);
            for &(di, dj) in &stencil {
                flags[g.index(i as isize + di, j as isize + dj)] = true;
            }
        }
        Mask {
            grid: self.grid,
            flags,
        }
    }
}

/// Mark the nodes near basin boundaries: unlabeled nodes, nodes labeled by a
/// non-attracting element (they lie on stable manifolds of saddles or
/// repellers), and nodes whose axis neighbors carry a different label — then
/// dilate the result by `tube_radius`.
pub fn separatrix_mask<F: VectorField + ?Sized>(
    field: &F,
    grid: &PeriodicGrid,
    rec: &RecurrentSet,
    tube_radius: f64,
) -> Mask {
    let labels = label_attractors(field, grid, rec);
    let attracting: Vec<bool> = {
        let mut v: Vec<bool> = rec.fixed_points.iter().map(|f| f.attracting()).collect();
        v.extend(rec.orbits.iter().map(|o| o.attracting()));
        v
    };
    let mut core = vec![false; grid.len()];
    for idx in grid.indices() {
        match labels[idx] {
            None => core[idx] = true,
            Some(e) if !attracting[e] => core[idx] = true,
            Some(e) => {
                let (i, j) = grid.lattice(idx);
                let (i, j) = (i as isize, j as isize);
                let mut neighbors = vec![grid.index(i - 1, j), grid.index(i + 1, j)];
                if grid.dim() == 2 {
                    neighbors.push(grid.index(i, j - 1));
                    neighbors.push(grid.index(i, j + 1));
                }
                if neighbors.iter().any(|&nb| labels[nb] != Some(e)) {
                    core[idx] = true;
                }
            }
        }
    }
    Mask::new(*grid, core).dilate(tube_radius)
}
