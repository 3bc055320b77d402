//! Complex-coefficient polynomial helpers used internally by partial
//! fractions, Laplace transforms and the realization code.

use num_complex::Complex64;

use super::Polynomial;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct CPoly {
    pub(crate) coeffs: Vec<Complex64>,
}

impl CPoly {
    pub(crate) fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        CPoly { coeffs }
    }

    pub(crate) fn one() -> Self {
        CPoly { coeffs: vec![ONE] }
    }

    pub(crate) fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// `(s − root)^power`
    pub(crate) fn linear_power(root: Complex64, power: usize) -> Self {
        (0..power).fold(Self::one(), |acc, _| acc.mul(&CPoly::new(vec![-root, ONE])))
    }

    pub(crate) fn mul(&self, rhs: &CPoly) -> CPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return CPoly::new(Vec::new());
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::new(out)
    }

    pub(crate) fn add(&self, rhs: &CPoly) -> CPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    pub(crate) fn scale(&self, k: Complex64) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Coefficients of `p(center + t)` as a polynomial in `t` (Taylor
    /// coefficients at `center`), via repeated synthetic division.
    pub(crate) fn taylor_at(&self, center: Complex64) -> Vec<Complex64> {
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            // divide work[k..] by (s − center); the remainder lands in work[k]
            for j in (k..n - 1).rev() {
                let carry = work[j + 1] * center;
                work[j] += carry;
            }
            out.push(work[k]);
        }
        out
    }

    /// Real parts, discarding the imaginary residue.
    pub(crate) fn real_part(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c.re).collect::<Vec<_>>())
    }

    pub(crate) fn max_imag(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.im.abs()))
    }
}
