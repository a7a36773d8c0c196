use super::{FemError, Result};

/// Symmetric matrix in envelope (skyline) storage: row `i` holds columns
/// `jmin[i] ..= i` contiguously. Suited to FEM matrices whose interior nodes
/// are numbered row-major, and factors in place without extra fill.
#[derive(Clone, Debug)]
pub struct SkylineMatrix {
    n: usize,
    jmin: Vec<usize>,
    offsets: Vec<usize>,
    data: Vec<f64>,
}

impl SkylineMatrix {
    /// Empty matrix with the envelope implied by `jmin` (first nonzero column
    /// per row; `jmin[i] <= i`).
    pub fn with_profile(jmin: Vec<usize>) -> Self {
        let n = jmin.len();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for (i, &j) in jmin.iter().enumerate() {
            debug_assert!(j <= i);
            offsets.push(offsets[i] + (i - j + 1));
        }
        let data = vec![0.0; offsets[n]];
        SkylineMatrix {
            n,
            jmin,
            offsets,
            data,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j >= self.jmin[i] && j <= i);
        self.offsets[i] + (j - self.jmin[i])
    }

    /// Add `v` at (i, j); only the lower triangle is stored.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let at = self.idx(r, c);
        self.data[at] += v;
    }

    /// y = A x, exploiting symmetry.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        y.fill(0.0);
        for i in 0..self.n {
            let row_start = self.jmin[i];
            let base = self.offsets[i];
            let mut acc = 0.0;
            for j in row_start..i {
                let a = self.data[base + (j - row_start)];
                acc += a * x[j];
                y[j] += a * x[i];
            }
            acc += self.data[base + (i - row_start)] * x[i];
            y[i] += acc;
        }
    }

    /// In-place Cholesky A = L L^T within the envelope. Fails when a pivot
    /// is not strictly positive.
    pub fn cholesky(mut self) -> Result<SkylineCholesky> {
        for i in 0..self.n {
            let ji = self.jmin[i];
            for j in ji..i {
                let jj = self.jmin[j];
                let lo = ji.max(jj);
                let mut s = self.data[self.idx(i, j)];
                for k in lo..j {
                    s -= self.data[self.idx(i, k)] * self.data[self.idx(j, k)];
                }
                let d = self.data[self.idx(j, j)];
                let at = self.idx(i, j);
                self.data[at] = s / d;
            }
            let mut s = self.data[self.idx(i, i)];
            for k in ji..i {
                let l = self.data[self.idx(i, k)];
                s -= l * l;
            }
            if !(s > 0.0) || !s.is_finite() {
                return Err(FemError::SingularSystem(format!(
                    "non-positive pivot {s:.3e} at row {i}"
                )));
            }
            let at = self.idx(i, i);
            self.data[at] = s.sqrt();
        }
        Ok(SkylineCholesky { l: self })
    }
}

/// Cholesky factor in envelope storage.
pub struct SkylineCholesky {
    l: SkylineMatrix,
}

impl SkylineCholesky {
    /// Solve A x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.l.n;
        let mut x = b.to_vec();
        // forward: L y = b
        for i in 0..n {
            let ji = self.l.jmin[i];
            let base = self.l.offsets[i];
            let mut s = x[i];
            for k in ji..i {
                s -= self.l.data[base + (k - ji)] * x[k];
            }
            x[i] = s / self.l.data[base + (i - ji)];
        }
        // backward: L^T x = y (column sweep)
        for i in (0..n).rev() {
            let ji = self.l.jmin[i];
            let base = self.l.offsets[i];
            x[i] /= self.l.data[base + (i - ji)];
            let xi = x[i];
            for k in ji..i {
                x[k] -= self.l.data[base + (k - ji)] * xi;
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_from(profile: Vec<usize>, entries: &[(usize, usize, f64)]) -> SkylineMatrix {
        let mut m = SkylineMatrix::with_profile(profile);
        for &(i, j, v) in entries {
            m.add(i, j, v);
        }
        m
    }

    #[test]
    fn solves_small_spd_system() {
        // tridiagonal [2,-1] Laplacian, n = 5
        let n = 5;
        let jmin: Vec<usize> = (0..n).map(|i: usize| i.saturating_sub(1)).collect();
        let mut entries = vec![];
        for i in 0..n {
            entries.push((i, i, 2.0));
            if i > 0 {
                entries.push((i, i - 1, -1.0));
            }
        }
        let a = dense_from(jmin, &entries);
        let b = vec![1.0; n];
        let mut ax = vec![0.0; n];
        let chol = a.clone().cholesky().unwrap();
        let x = chol.solve(&b);
        a.mul_vec(&x, &mut ax);
        for i in 0..n {
            assert!((ax[i] - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_indefinite_matrix() {
        let jmin = vec![0, 0];
        let m = dense_from(jmin, &[(0, 0, 1.0), (1, 0, 2.0), (1, 1, 1.0)]);
        assert!(m.cholesky().is_err());
    }

    #[test]
    fn mul_vec_matches_symmetric_definition() {
        let jmin = vec![0, 0, 1];
        let m = dense_from(
            jmin,
            &[
                (0, 0, 4.0),
                (1, 0, 1.0),
                (1, 1, 3.0),
                (2, 1, 0.5),
                (2, 2, 5.0),
            ],
        );
        let x = vec![1.0, 2.0, 3.0];
        let mut y = vec![0.0; 3];
        m.mul_vec(&x, &mut y);
        assert_eq!(y, vec![4.0 + 2.0, 1.0 + 6.0 + 1.5, 1.0 + 15.0]);
    }
}
