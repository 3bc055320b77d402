//! Linear constant-coefficient ODEs
//!
//! ```text
//! y⁽ⁿ⁾ + a₁ y⁽ⁿ⁻¹⁾ + … + aₙ y = b₀ u⁽ⁿ⁾ + b₁ u⁽ⁿ⁻¹⁾ + … + bₙ u
//! ```
//!
//! with the implicit leading coefficient `a₀ = 1`.

use crate::error::{check_len, Error, Result};
use crate::poly::{Polynomial, RationalFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearODE {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl LinearODE {
    /// `a = [a₁ … aₙ]`, `b = [b₀ … bₙ]`.
    pub fn new(a: impl Into<Vec<f64>>, b: impl Into<Vec<f64>>) -> Result<Self> {
        let a = a.into();
        let b = b.into();
        if a.is_empty() {
            return Err(Error::Domain("ODE order must be at least 1".into()));
        }
        check_len("ODE b coefficients (n + 1)", a.len() + 1, b.len())?;
        if b.iter().all(|&x| x == 0.0) {
            return Err(Error::Domain(
                "at least one input coefficient b_j must be nonzero".into(),
            ));
        }
        Ok(LinearODE { a, b })
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// `[a₁ … aₙ]`
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// `[b₀ … bₙ]`
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `a_i` with `a₀ = 1`.
    pub fn a_coeff(&self, i: usize) -> f64 {
        if i == 0 {
            1.0
        } else {
            self.a[i - 1]
        }
    }

    /// `(r, m)`: `r` is the index of the first nonzero `b_j`, `m = n − r`.
    pub fn relative_degree(&self) -> (usize, usize) {
        let r = self
            .b
            .iter()
            .position(|&x| x != 0.0)
            .expect("constructor guarantees a nonzero b_j");
        (r, self.order() - r)
    }

    /// `A(s) = sⁿ + Σ a_i s^{n−i}`
    pub fn characteristic(&self) -> Polynomial {
        let n = self.order();
        Polynomial::new((0..=n).map(|k| self.a_coeff(n - k)).collect::<Vec<_>>())
    }

    /// `B(s) = Σ b_j s^{n−j}`
    pub fn input_polynomial(&self) -> Polynomial {
        let n = self.order();
        Polynomial::new((0..=n).map(|k| self.b[n - k]).collect::<Vec<_>>())
    }

    /// `B(s)/A(s)` without cancellation of common factors.
    pub fn transfer_function(&self) -> RationalFunction {
        RationalFunction::new(self.input_polynomial(), self.characteristic())
            .expect("characteristic polynomial is monic")
    }

    /// Polynomial vectors `(v_y, v_u)` pairing with condition stacks so that
    /// the initial-condition numerator is `v_yᵀ𝒴 − v_uᵀ𝒰`.
    ///
    /// Entry `k` (0-based) multiplies the `(n−1−k)`-th derivative and equals
    /// `Σ_{i=0}^{k} a_i s^{k−i}` (resp. `b_j`); entry 0 is the constant `1`
    /// (resp. `b₀`).
    pub fn ic_vectors(&self) -> (Vec<Polynomial>, Vec<Polynomial>) {
        let n = self.order();
        let partial = |coef: &dyn Fn(usize) -> f64, k: usize| {
            Polynomial::new((0..=k).map(|p| coef(k - p)).collect::<Vec<_>>())
        };
        let v_y = (0..n).map(|k| partial(&|i| self.a_coeff(i), k)).collect();
        let v_u = (0..n).map(|k| partial(&|j| self.b[j], k)).collect();
        (v_y, v_u)
    }
}
