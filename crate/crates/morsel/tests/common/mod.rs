//! Shared helpers for the integration suites: a dense full-spectrum
//! eigensolver used as an independent oracle for the sparse path.

use morsel::spectral::OperatorAssembly;
use nalgebra::{DMatrix, DVector};

/// Principal eigenpair of the assembled operator computed the expensive
/// way: densify, take the full complex spectrum, pick the eigenvalue with
/// the smallest real part, then recover its eigenvector by dense inverse
/// iteration. The vector is normalized positive with ∫u² dV = 1, matching
/// the sparse solver's convention.
pub fn dense_principal(a: &OperatorAssembly, cell_volume: f64) -> (f64, Vec<f64>) {
    let n = a.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (i, j, v) in a.matrix.iter() {
        m[(i, j)] += v;
    }

    let spectrum = m.complex_eigenvalues();
    let mut lambda = f64::INFINITY;
    for e in spectrum.iter() {
        if e.re < lambda {
            lambda = e.re;
        }
    }
    // The smallest eigenvalue of this operator class is real and simple;
    // a complex pair below the real principal value would be a solver bug.
    for e in spectrum.iter() {
        if (e.re - lambda).abs() < 1e-9 {
            assert!(
                e.im.abs() < 1e-9,
                "principal eigenvalue came out complex: {e}"
            );
        }
    }

    let shift = lambda - 1e-6 * lambda.abs().max(1.0);
    let shifted = &m - DMatrix::identity(n, n) * shift;
    let lu = shifted.lu();
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    for _ in 0..60 {
        let w = lu.solve(&v).expect("shifted matrix must stay invertible");
        v = &w / w.norm();
    }
    if v.sum() < 0.0 {
        v = -v;
    }
    let weighted = (v.norm_squared() * cell_volume).sqrt();
    (lambda, v.iter().map(|x| x / weighted).collect())
}
