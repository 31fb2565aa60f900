//! Banded LU factorization with partial pivoting.
//!
//! Storage follows the usual band convention: entry (i, j) lives at packed
//! row `kl + ku + i - j`, and the top `kl` packed rows are workspace for the
//! fill-in that row pivoting can create (the factored upper bandwidth grows
//! to `kl + ku`).

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    /// Packed storage, `(2*kl + ku + 1)` rows by `n` columns, row-major.
    ab: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let rows = 2 * kl + ku + 1;
        BandMatrix { n, kl, ku, ab: vec![0.0; rows * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        let di = self.kl + self.ku + i - j; // callers guarantee i + kl + ku >= j
        di * self.n + j
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        let (i, j) = (i as isize, j as isize);
        j - i <= self.ku as isize && i - j <= self.kl as isize
    }

    /// Add to an entry; panics outside the declared band (an assembly bug).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            self.in_band(i, j),
            "entry ({i}, {j}) outside band kl={} ku={}",
            self.kl,
            self.ku
        );
        let s = self.slot(i, j);
        self.ab[s] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.ab[self.slot(i, j)]
        } else {
            0.0
        }
    }

    /// LU factorization with row partial pivoting (the band analogue of
    /// Gaussian elimination). Consumes the matrix; multipliers overwrite the
    /// subdiagonal slots and U overwrites the rest.
    pub fn factor(mut self) -> Result<BandLu> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let kv = kl + ku; // packed row of the diagonal
        let mut ipiv = vec![0usize; n];

        for j in 0..n {
            // Pivot among A[j..=j+km][j].
            let km = kl.min(n - 1 - j);
            let mut p = 0usize;
            let mut best = 0.0f64;
            for q in 0..=km {
                let v = self.ab[(kv + q) * n + j].abs();
                if v > best {
                    best = v;
                    p = q;
                }
            }
            ipiv[j] = j + p;
            let pivot = self.ab[(kv + p) * n + j];
            if pivot == 0.0 {
                return Err(Error::Precondition(format!(
                    "band matrix is singular at column {j}"
                )));
            }
            // Swap rows j and j+p across the affected columns.
            let jmax = (j + kv).min(n - 1);
            if p != 0 {
                for jj in j..=jmax {
                    let a = (kv + j - jj) * n + jj;
                    let b = (kv + j + p - jj) * n + jj;
                    self.ab.swap(a, b);
                }
            }
            // Multipliers below the diagonal.
            let pivot = self.ab[kv * n + j];
            for q in 1..=km {
                self.ab[(kv + q) * n + j] /= pivot;
            }
            // Rank-one update of the trailing band.
            for jj in (j + 1)..=jmax {
                let ujj = self.ab[(kv + j - jj) * n + jj];
                if ujj != 0.0 {
                    for q in 1..=km {
                        let m = self.ab[(kv + q) * n + j];
                        self.ab[(kv + j - jj + q) * n + jj] -= m * ujj;
                    }
                }
            }
        }
        Ok(BandLu { n, kl, ku, ab: self.ab, ipiv })
    }
}

#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    ab: Vec<f64>,
    ipiv: Vec<usize>,
}

impl BandLu {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let kv = self.kl + self.ku;
        // Apply P and L.
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                b.swap(j, p);
            }
            let km = self.kl.min(n - 1 - j);
            let bj = b[j];
            if bj != 0.0 {
                for q in 1..=km {
                    b[j + q] -= self.ab[(kv + q) * n + j] * bj;
                }
            }
        }
        // Back-substitute U (bandwidth kl + ku after pivoting).
        for j in (0..n).rev() {
            b[j] /= self.ab[kv * n + j];
            let xj = b[j];
            if xj != 0.0 {
                let reach = kv.min(j);
                for q in 1..=reach {
                    b[j - q] -= self.ab[(kv - q) * n + j] * xj;
                }
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
