//! Symmetric tridiagonal eigenproblems: Sturm-sequence bisection for
//! selected eigenvalues, inverse iteration for their eigenvectors.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    /// `off[i]` couples rows i and i+1.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "tridiagonal shape: {} diagonal, {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        Ok(SymTridiagonal { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        (0..n).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            let r = left + right;
            (lo.min(self.diag[i] - r), hi.max(self.diag[i] + r))
        })
    }

    /// Number of eigenvalues strictly below `lambda` (negative LDLᵀ pivots).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let guard = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - lambda;
        for i in 0..self.len() {
            if i > 0 {
                q = self.diag[i] - lambda - self.off[i - 1] * self.off[i - 1] / q;
            }
            if q == 0.0 {
                q = -guard;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The k-th smallest eigenvalue, 0-based.
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k >= self.len() {
            return Err(Error::InvalidParameter(format!(
                "eigenvalue index {k} out of range for order {}",
                self.len()
            )));
        }
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * lo.abs().max(hi.abs()) + f64::MIN_POSITIVE;
        lo -= pad;
        hi += pad;
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The `count` smallest eigenvalues in ascending order.
    pub fn lowest_eigenvalues(&self, count: usize) -> Result<Vec<f64>> {
        (0..count).map(|k| self.eigenvalue(k)).collect()
    }

    /// Unit eigenvector for an eigenvalue approximation `lambda`.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let (lo, hi) = self.gershgorin();
        let tiny = f64::EPSILON * lo.abs().max(hi.abs());
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64 / 13.0)
            .collect();
        normalize(&mut v);
        for _ in 0..4 {
            v = self.shifted_solve(lambda, &v, tiny);
            normalize(&mut v);
        }
        v
    }

    /// Solves (T − σI) y = rhs by forward elimination, nudging vanishing pivots.
    fn shifted_solve(&self, sigma: f64, rhs: &[f64], tiny: f64) -> Vec<f64> {
        let n = self.len();
        let mut pivot = vec![0.0; n];
        let mut y = rhs.to_vec();
        pivot[0] = self.diag[0] - sigma;
        for i in 1..n {
            if pivot[i - 1].abs() < tiny {
                pivot[i - 1] = tiny.copysign(pivot[i - 1]);
            }
            let m = self.off[i - 1] / pivot[i - 1];
            pivot[i] = self.diag[i] - sigma - m * self.off[i - 1];
            y[i] -= m * y[i - 1];
        }
        if pivot[n - 1].abs() < tiny {
            pivot[n - 1] = tiny.copysign(pivot[n - 1]);
        }
        y[n - 1] /= pivot[n - 1];
        for i in (0..n - 1).rev() {
            y[i] = (y[i] - self.off[i] * y[i + 1]) / pivot[i];
        }
        y
    }

    /// T·v
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.off[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 && norm.is_finite() {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}
