use std::fmt;

use super::Polynomial;
use crate::error::{Error, Result};

/// `num(s) / den(s)` with a monic denominator.
///
/// Common factors are never cancelled implicitly: a realization keeps its
/// full order even when the transfer function has a pole-zero cancellation.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Normalizes `den` to be monic, folding its scale into `num`.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        let lc = den.leading();
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(RationalFunction {
            num: num.scale(1.0 / lc),
            den: den.scale(1.0 / lc),
        })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::constant(1.0),
        }
    }

    pub fn zero() -> Self {
        Self::from_polynomial(Polynomial::zero())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// Numerator degree below denominator degree (the zero function counts).
    pub fn is_strictly_proper(&self) -> bool {
        match self.num.degree() {
            None => true,
            Some(d) => d < self.den.degree().unwrap_or(0),
        }
    }

    pub fn eval_complex(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        self.num.eval_complex(z) / self.den.eval_complex(z)
    }

    /// Sum of two rational functions. Identical denominators are kept as is;
    /// otherwise the product of denominators is used.
    pub fn add(&self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
        }
        RationalFunction {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }

    pub fn mul(&self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }

    pub fn scale(&self, k: f64) -> RationalFunction {
        RationalFunction {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// `num₁·den₂ − num₂·den₁`, the zero test used for equality of rational
    /// functions that may carry uncancelled common factors.
    pub fn cross_difference(&self, rhs: &RationalFunction) -> Polynomial {
        &(&self.num * &rhs.den) - &(&rhs.num * &self.den)
    }

    /// Largest coefficient of [`Self::cross_difference`] relative to the
    /// largest coefficient of either cross product (floored at one).
    pub fn relative_mismatch(&self, rhs: &RationalFunction) -> f64 {
        let lhs = &self.num * &rhs.den;
        let rhs_p = &rhs.num * &self.den;
        let scale = lhs.max_abs().max(rhs_p.max_abs()).max(1.0);
        lhs.max_diff(&rhs_p) / scale
    }

    /// Equality as rational functions within a relative coefficient tolerance.
    pub fn approx_eq(&self, rhs: &RationalFunction, tol: f64) -> bool {
        self.relative_mismatch(rhs) <= tol
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}
