//! Dense linear algebra over a prime field F_p.
//!
//! Root spaces, solution spaces and subfield embeddings all reduce to
//! kernels of F_p-linear maps; this module is the shared engine.

use super::poly::inv_mod;

/// Row-major matrix of residues mod `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatP {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl MatP {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        Self {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(p: u64, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v % p;
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduces in place to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            self.swap_rows(row, piv);
            let inv = inv_mod(self.get(row, col), p);
            for j in 0..self.cols {
                let idx = row * self.cols + j;
                self.data[idx] = self.data[idx] * inv % p;
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = self.data[row * self.cols + j];
                    let idx = r * self.cols + j;
                    self.data[idx] = (self.data[idx] + p - factor * v % p) % p;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel {x : M x = 0}.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - m.get(r, f)) % p;
                }
                v
            })
            .collect()
    }

    /// One solution of M x = b, if any.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i * aug.cols + j] = self.get(i, j);
            }
            aug.data[i * aug.cols + self.cols] = b[i] % self.p;
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some(x)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0u64, |acc, j| (acc + self.get(i, j) * v[j]) % self.p))
            .collect()
    }
}
