//! Dense real polynomials and isolation of their real roots.
//!
//! Roots are isolated without a companion matrix: the real roots of `p'`
//! split the line into intervals on which `p` is monotone, so each interval
//! holds at most one root, which is then bracketed and bisected down to
//! adjacent floats.

use std::ops::{Add, Mul};

/// Polynomial with coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    /// c·xᵏ
    pub fn monomial(c: f64, k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = c;
        Polynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Σ|c_k||x|ᵏ, the scale against which a computed value near a root is judged.
    pub fn magnitude_at(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::constant(0.0);
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn scale(&self, factor: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Scaled to unit leading coefficient.
    pub fn monic(&self) -> Polynomial {
        self.scale(1.0 / self.leading())
    }

    /// Cauchy bound: every root satisfies |x| ≤ 1 + max|c_k / c_lead|.
    pub fn root_bound(&self) -> f64 {
        let lead = self.leading().abs();
        let max_ratio = self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.abs() / lead)
            .fold(0.0, f64::max);
        1.0 + max_ratio
    }

    /// All distinct real roots in ascending order.
    ///
    /// Roots of even multiplicity are reported when `p` vanishes at a
    /// critical point to within rounding of its terms.
    pub fn real_roots(&self) -> Vec<f64> {
        if self.is_zero() {
            return Vec::new();
        }
        match self.degree() {
            0 => Vec::new(),
            1 => vec![-self.coeffs[0] / self.coeffs[1]],
            _ => {
                let bound = self.root_bound();
                let critical: Vec<f64> = self
                    .derivative()
                    .real_roots()
                    .into_iter()
                    .filter(|c| c.abs() < bound)
                    .collect();
                let mut knots = Vec::with_capacity(critical.len() + 2);
                knots.push(-bound);
                knots.extend(critical);
                knots.push(bound);

                let mut roots = Vec::new();
                for (i, &knot) in knots.iter().enumerate() {
                    let interior = i > 0 && i + 1 < knots.len();
                    if interior && self.vanishes_at(knot) {
                        roots.push(knot);
                    }
                    if let Some(&next) = knots.get(i + 1) {
                        if let Some(root) = self.bisect(knot, next) {
                            roots.push(root);
                        }
                    }
                }
                roots.sort_by(f64::total_cmp);
                // a root of even multiplicity may also surface as a spurious sign change
                // within √ε of the critical point
                roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-7 * a.abs().max(1.0));
                roots
            }
        }
    }

    fn vanishes_at(&self, x: f64) -> bool {
        self.eval(x).abs() <= 64.0 * f64::EPSILON * self.magnitude_at(x)
    }

    /// Root on the open interval (lo, hi) if p changes sign strictly inside.
    fn bisect(&self, lo: f64, hi: f64) -> Option<f64> {
        let (mut lo, mut hi) = (lo, hi);
        let mut f_lo = self.eval(lo);
        let f_hi = self.eval(hi);
        if f_lo == 0.0 || f_hi == 0.0 || f_lo.signum() == f_hi.signum() {
            return None;
        }
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let f_mid = self.eval(mid);
            if f_mid == 0.0 {
                return Some(mid);
            }
            if f_mid.signum() == f_lo.signum() {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        Some(if self.eval(lo).abs() <= self.eval(hi).abs() {
            lo
        } else {
            hi
        })
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + rhs.coeffs.get(k).unwrap_or(&0.0))
            .collect();
        Polynomial::new(coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut coeffs = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_roots(roots: &[f64]) -> Polynomial {
        roots.iter().fold(Polynomial::constant(1.0), |acc, &r| {
            &acc * &Polynomial::new(vec![-r, 1.0])
        })
    }

    #[test]
    fn linear_and_quadratic() {
        assert_eq!(Polynomial::new(vec![-2.0, 4.0]).real_roots(), vec![0.5]);
        let roots = Polynomial::new(vec![-2.0, 0.0, 1.0]).real_roots();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + 2f64.sqrt()).abs() < 1e-15);
        assert!((roots[1] - 2f64.sqrt()).abs() < 1e-15);
        assert!(Polynomial::new(vec![1.0, 0.0, 1.0]).real_roots().is_empty());
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Polynomial::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert!(Polynomial::new(vec![]).is_zero());
    }

    #[test]
    fn clustered_and_double_roots() {
        let p = from_roots(&[-3.0, 1.0, 1.0 + 1e-6, 7.5]);
        let roots = p.real_roots();
        assert_eq!(roots.len(), 4, "{roots:?}");
        // separation 1e-6 leaves ~ε·‖p‖/|p′| ≈ 1e-9 of conditioning error
        assert!((roots[1] - 1.0).abs() < 1e-8, "{roots:?}");
        assert!((roots[2] - (1.0 + 1e-6)).abs() < 1e-8, "{roots:?}");

        let p = from_roots(&[2.0, 2.0, -1.0]);
        let roots = p.real_roots();
        assert_eq!(roots.len(), 2, "{roots:?}");
        assert!((roots[1] - 2.0).abs() < 1e-7);
    }

    #[test]
    fn zero_root_is_found() {
        let p = from_roots(&[0.0, 3.0, -3.0]);
        let roots = p.real_roots();
        assert_eq!(roots.len(), 3);
        assert!(roots[1].abs() < 1e-15);
    }

    #[test]
    fn derivative_and_bound() {
        let p = Polynomial::new(vec![1.0, -3.0, 0.0, 2.0]);
        assert_eq!(p.derivative().coeffs(), &[-3.0, 0.0, 6.0]);
        for r in p.real_roots() {
            assert!(r.abs() <= p.root_bound());
            assert!(p.eval(r).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn recovers_separated_roots(mut roots in proptest::collection::vec(-20.0f64..20.0, 1..8), lead in 0.1f64..10.0) {
            roots.sort_by(f64::total_cmp);
            for w in roots.windows(2) {
                prop_assume!(w[1] - w[0] > 1e-2);
            }
            let p = from_roots(&roots).scale(lead);
            let found = p.real_roots();
            prop_assert_eq!(found.len(), roots.len());
            for (a, b) in found.iter().zip(&roots) {
                prop_assert!((a - b).abs() < 1e-6 * b.abs().max(1.0), "{} vs {}", a, b);
            }
        }
    }
}
