//! Uniform periodic grids on the circle and the flat torus.
//!
//! Everything downstream (operator assembly, quadrature, finite-difference
//! calculus, off-grid interpolation) works on these grids. Nodes are laid out
//! x-fastest: `idx = j * nx + i`, node coordinates `(i*hx, j*hy)`, and all
//! point arithmetic wraps coordinates into `[0, period)`.
//!
//! Quadrature is the rectangle rule, which is spectrally accurate for smooth
//! periodic integrands; derivatives use fourth-order central differences.

use crate::error::{Error, Result};

/// Minimum resolution per axis; below this the fourth-order stencils and the
/// face-based assemblies are not worth trusting.
pub const MIN_NODES_PER_AXIS: usize = 16;

/// A point on the (possibly one-dimensional) torus. One-dimensional grids use
/// component 0 and keep component 1 at zero.
pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGrid {
    dim: usize,
    n: [usize; 2],
    period: [f64; 2],
    h: [f64; 2],
}

/// Build a grid with the same node count and period on every axis.
pub fn build_grid(dim: usize, n: usize, period: f64) -> Result<PeriodicGrid> {
    PeriodicGrid::with_axes(dim, [n, n], [period, period])
}

impl PeriodicGrid {
    /// Per-axis constructor. Axis 1 parameters are ignored when `dim == 1`.
    pub fn with_axes(dim: usize, n: [usize; 2], period: [f64; 2]) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dim must be 1 or 2, got {dim}")));
        }
        let mut nn = [n[0], 1];
        let mut pp = [period[0], 1.0];
        if dim == 2 {
            nn[1] = n[1];
            pp[1] = period[1];
        }
        for axis in 0..dim {
            if nn[axis] < MIN_NODES_PER_AXIS {
                return Err(Error::InvalidGrid(format!(
                    "axis {axis}: n = {} is below the minimum of {MIN_NODES_PER_AXIS}",
                    nn[axis]
                )));
            }
            if !(pp[axis].is_finite() && pp[axis] > 0.0) {
                return Err(Error::InvalidGrid(format!(
                    "axis {axis}: period must be positive and finite, got {}",
                    pp[axis]
                )));
            }
        }
        let h = [pp[0] / nn[0] as f64, pp[1] / nn[1] as f64];
        Ok(PeriodicGrid { dim, n: nn, period: pp, h })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.n[0] * self.n[1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n(&self, axis: usize) -> usize {
        self.n[axis]
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.h[axis]
    }

    /// Largest spacing over the active axes.
    pub fn max_spacing(&self) -> f64 {
        (0..self.dim).map(|a| self.h[a]).fold(0.0, f64::max)
    }

    pub fn period(&self, axis: usize) -> f64 {
        self.period[axis]
    }

    /// Volume of the whole domain (length of the circle, area of the torus).
    pub fn volume(&self) -> f64 {
        self.period[0] * self.period[1]
    }

    /// Quadrature weight of one node.
    pub fn cell_volume(&self) -> f64 {
        self.h[0] * self.h[1]
    }

    /// Flat index of the node at lattice coordinates (wrapping as needed).
    pub fn index(&self, i: isize, j: isize) -> usize {
        let nx = self.n[0] as isize;
        let ny = self.n[1] as isize;
        let iw = i.rem_euclid(nx) as usize;
        let jw = j.rem_euclid(ny) as usize;
        jw * self.n[0] + iw
    }

    /// Lattice coordinates of a flat index.
    pub fn lattice(&self, idx: usize) -> (usize, usize) {
        (idx % self.n[0], idx / self.n[0])
    }

    /// Coordinates of the node with the given flat index.
    pub fn node(&self, idx: usize) -> Point {
        let (i, j) = self.lattice(idx);
        [i as f64 * self.h[0], j as f64 * self.h[1]]
    }

    /// Wrap a point into the fundamental domain `[0, period)` per axis.
    pub fn wrap_point(&self, p: Point) -> Point {
        let mut q = [p[0], p[1]];
        for axis in 0..self.dim {
            q[axis] = q[axis].rem_euclid(self.period[axis]);
            if q[axis] == self.period[axis] {
                q[axis] = 0.0;
            }
        }
        if self.dim == 1 {
            q[1] = 0.0;
        }
        q
    }

    /// Minimal-image difference `a - b` per axis, each component in
    /// `[-period/2, period/2)`.
    pub fn periodic_delta(&self, a: Point, b: Point) -> Point {
        let mut d = [0.0, 0.0];
        for axis in 0..self.dim {
            let p = self.period[axis];
            let mut x = (a[axis] - b[axis]).rem_euclid(p);
            if x >= p / 2.0 {
                x -= p;
            }
            d[axis] = x;
        }
        d
    }

    /// Periodic (minimal-image) Euclidean distance.
    pub fn distance(&self, a: Point, b: Point) -> f64 {
        let d = self.periodic_delta(a, b);
        (d[0] * d[0] + d[1] * d[1]).sqrt()
    }

    /// Iterator over all node indices.
    pub fn indices(&self) -> impl Iterator<Item = usize> {
        0..self.len()
    }
}

/// Scalar field sampled at every grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSamples {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl ScalarSamples {
    /// Wrap raw nodal values. Panics on a length mismatch or non-finite
    /// entries — both are programming errors, not runtime conditions.
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "sample count must match grid size");
        assert!(values.iter().all(|v| v.is_finite()), "scalar samples must be finite");
        ScalarSamples { grid, values }
    }

    pub fn constant(grid: PeriodicGrid, v: f64) -> Self {
        Self::new(grid, vec![v; grid.len()])
    }

    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(Point) -> f64) -> Self {
        let values = grid.indices().map(|idx| f(grid.node(idx))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarSamples {
        ScalarSamples::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &ScalarSamples, f: impl Fn(f64, f64) -> f64) -> ScalarSamples {
        assert_eq!(self.grid, other.grid, "fields must share a grid");
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        ScalarSamples::new(self.grid, values)
    }
}

/// Vector field sampled at every grid node (one component per active axis).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSamples {
    grid: PeriodicGrid,
    components: Vec<Vec<f64>>,
}

impl VectorSamples {
    pub fn new(grid: PeriodicGrid, components: Vec<Vec<f64>>) -> Self {
        assert_eq!(components.len(), grid.dim(), "one component per axis");
        for c in &components {
            assert_eq!(c.len(), grid.len(), "component length must match grid size");
            assert!(c.iter().all(|v| v.is_finite()), "vector samples must be finite");
        }
        VectorSamples { grid, components }
    }

    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(Point) -> Point) -> Self {
        let mut components = vec![vec![0.0; grid.len()]; grid.dim()];
        for idx in grid.indices() {
            let v = f(grid.node(idx));
            for (axis, comp) in components.iter_mut().enumerate() {
                comp[idx] = v[axis];
            }
        }
        Self::new(grid, components)
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn component(&self, axis: usize) -> &[f64] {
        &self.components[axis]
    }

    /// Pointwise Euclidean norm.
    pub fn magnitude(&self) -> ScalarSamples {
        let values = (0..self.grid.len())
            .map(|idx| {
                self.components
                    .iter()
                    .map(|c| c[idx] * c[idx])
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        ScalarSamples::new(self.grid, values)
    }

    /// Pointwise dot product with another vector field on the same grid.
    pub fn dot(&self, other: &VectorSamples) -> ScalarSamples {
        assert_eq!(self.grid, other.grid, "fields must share a grid");
        let values = (0..self.grid.len())
            .map(|idx| {
                self.components
                    .iter()
                    .zip(&other.components)
                    .map(|(a, b)| a[idx] * b[idx])
                    .sum()
            })
            .collect();
        ScalarSamples::new(self.grid, values)
    }
}

/// Rectangle-rule quadrature; spectrally accurate for smooth periodic fields.
pub fn integrate(s: &ScalarSamples) -> f64 {
    let w = s.grid().cell_volume();
    s.values().iter().sum::<f64>() * w
}

/// L² inner product `∫ a b dV`.
pub fn inner(a: &ScalarSamples, b: &ScalarSamples) -> f64 {
    assert_eq!(a.grid(), b.grid(), "fields must share a grid");
    let w = a.grid().cell_volume();
    a.values()
        .iter()
        .zip(b.values())
        .map(|(&x, &y)| x * y)
        .sum::<f64>()
        * w
}

/// Fourth-order central difference along one axis.
fn derivative_axis(s: &ScalarSamples, axis: usize) -> Vec<f64> {
    let grid = *s.grid();
    let v = s.values();
    let h = grid.spacing(axis);
    let mut out = vec![0.0; grid.len()];
    for idx in grid.indices() {
        let (i, j) = grid.lattice(idx);
        let (i, j) = (i as isize, j as isize);
        let at = |k: isize| -> f64 {
            let id = if axis == 0 {
                grid.index(i + k, j)
            } else {
                grid.index(i, j + k)
            };
            v[id]
        };
        out[idx] = (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h);
    }
    out
}

/// Gradient by fourth-order central differences on the periodic lattice.
pub fn gradient_fd(s: &ScalarSamples) -> VectorSamples {
    let grid = *s.grid();
    let components = (0..grid.dim()).map(|axis| derivative_axis(s, axis)).collect();
    VectorSamples::new(grid, components)
}

/// Divergence by fourth-order central differences.
pub fn divergence_fd(v: &VectorSamples) -> ScalarSamples {
    let grid = *v.grid();
    let mut total = vec![0.0; grid.len()];
    for axis in 0..grid.dim() {
        let comp = ScalarSamples::new(grid, v.component(axis).to_vec());
        let d = derivative_axis(&comp, axis);
        for (t, dv) in total.iter_mut().zip(d) {
            *t += dv;
        }
    }
    ScalarSamples::new(grid, total)
}

/// Per-axis base index and fractional offset of a point, for interpolation.
fn locate(grid: &PeriodicGrid, p: Point, axis: usize) -> (isize, f64) {
    let h = grid.spacing(axis);
    let x = p[axis].rem_euclid(grid.period(axis));
    let base = (x / h).floor();
    let t = x / h - base;
    (base as isize, t)
}

/// Bilinear (linear in 1-D) periodic interpolation. Preserves positivity and
/// the range of the samples; used wherever interpolated densities must stay
/// nonnegative.
pub fn interp_linear(s: &ScalarSamples, p: Point) -> f64 {
    let grid = *s.grid();
    let v = s.values();
    let (i0, tx) = locate(&grid, p, 0);
    match grid.dim() {
        1 => {
            let a = v[grid.index(i0, 0)];
            let b = v[grid.index(i0 + 1, 0)];
            a * (1.0 - tx) + b * tx
        }
        _ => {
            let (j0, ty) = locate(&grid, p, 1);
            let v00 = v[grid.index(i0, j0)];
            let v10 = v[grid.index(i0 + 1, j0)];
            let v01 = v[grid.index(i0, j0 + 1)];
            let v11 = v[grid.index(i0 + 1, j0 + 1)];
            v00 * (1.0 - tx) * (1.0 - ty)
                + v10 * tx * (1.0 - ty)
                + v01 * (1.0 - tx) * ty
                + v11 * tx * ty
        }
    }
}

/// Catmull-Rom weights at offset `t` in `[0, 1)` for nodes at -1, 0, 1, 2.
fn catmull_rom(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        0.5 * (-t3 + 2.0 * t2 - t),
        0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
        0.5 * (-3.0 * t3 + 4.0 * t2 + t),
        0.5 * (t3 - t2),
    ]
}

/// Periodic cubic (Catmull-Rom) interpolation; C¹-smooth, third-order
/// accurate. Used where smoothness off-grid matters more than positivity.
pub fn interp_cubic(s: &ScalarSamples, p: Point) -> f64 {
    let grid = *s.grid();
    let v = s.values();
    let (i0, tx) = locate(&grid, p, 0);
    let wx = catmull_rom(tx);
    match grid.dim() {
        1 => (0..4)
            .map(|k| wx[k] * v[grid.index(i0 + k as isize - 1, 0)])
            .sum(),
        _ => {
            let (j0, ty) = locate(&grid, p, 1);
            let wy = catmull_rom(ty);
            let mut acc = 0.0;
            for (kj, &wj) in wy.iter().enumerate() {
                let mut row = 0.0;
                for (ki, &wi) in wx.iter().enumerate() {
                    row += wi * v[grid.index(i0 + ki as isize - 1, j0 + kj as isize - 1)];
                }
                acc += wj * row;
            }
            acc
        }
    }
}
