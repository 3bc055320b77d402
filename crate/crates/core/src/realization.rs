//! State-space realizations, Markov parameters and the ODE/SSR equivalence
//! check.
//!
//! For a state-space representation `ẋ = Ax + Bu`, `y = Cx + Du`, stacking
//! the output derivatives gives
//!
//! ```text
//! 𝒴(t) = O x(t) + M 𝒰(t)
//! ```
//!
//! with the observability matrix `O` (rows `CAⁿ⁻¹ … CA, C`) and the
//! upper-triangular Toeplitz Markov matrix `M` built from `h₀ = D`,
//! `h_i = CA^{i−1}B`.

use std::fmt;

use nalgebra::{DMatrix, DVector, RowDVector};

use crate::error::{check_len, Error, Result};
use crate::fmt::fmt_vec;
use crate::ode::LinearODE;
use crate::poly::{Polynomial, RationalFunction};
use crate::Tolerances;

/// `ẋ = Ax + Bu`, `y = Cx + Du` with scalar input and output.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: RowDVector<f64>,
    pub d: f64,
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>, c: RowDVector<f64>, d: f64) -> Result<Self> {
        let n = a.nrows();
        if n == 0 {
            return Err(Error::Domain("state dimension must be at least 1".into()));
        }
        check_len("A columns", n, a.ncols())?;
        check_len("B rows", n, b.len())?;
        check_len("C columns", n, c.len())?;
        Ok(StateSpace { a, b, c, d })
    }

    /// Builds from row-major nested vectors.
    pub fn from_rows(a: &[Vec<f64>], b: &[f64], c: &[f64], d: f64) -> Result<Self> {
        let n = a.len();
        for row in a {
            check_len("A row length", n, row.len())?;
        }
        let a = DMatrix::from_fn(n, n, |i, j| a[i][j]);
        StateSpace::new(
            a,
            DVector::from_column_slice(b),
            RowDVector::from_row_slice(c),
            d,
        )
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// `[D, CB, CAB, …]`, `count` entries.
    pub fn markov_parameters(&self, count: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return out;
        }
        out.push(self.d);
        let mut ab = self.b.clone();
        for _ in 1..count {
            out.push((&self.c * &ab)[0]);
            ab = &self.a * ab;
        }
        out
    }
}

fn fmt_matrix(m: &DMatrix<f64>) -> String {
    let rows: Vec<String> = m
        .row_iter()
        .map(|r| fmt_vec(&r.iter().copied().collect::<Vec<_>>()))
        .collect();
    format!("[{}]", rows.join(", "))
}

impl fmt::Display for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "A = {}", fmt_matrix(&self.a))?;
        writeln!(f, "B = {}", fmt_vec(self.b.as_slice()))?;
        writeln!(f, "C = {}", fmt_vec(&self.c.iter().copied().collect::<Vec<_>>()))?;
        write!(f, "D = {}", crate::fmt::fmt_num(self.d))
    }
}

/// Rows `CA^{n−1}, …, CA, C`, top to bottom.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservabilityMatrix(pub DMatrix<f64>);

impl ObservabilityMatrix {
    /// `σ_min / σ_max`; zero for the zero matrix.
    pub fn singular_value_ratio(&self) -> f64 {
        let sv = self.0.clone().svd(false, false).singular_values;
        let max = sv.max();
        if max == 0.0 {
            0.0
        } else {
            sv.min() / max
        }
    }

    /// Invertible at the relative singular-value threshold `tol`.
    pub fn is_invertible(&self, tol: f64) -> bool {
        self.singular_value_ratio() > tol
    }
}

impl fmt::Display for ObservabilityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_matrix(&self.0))
    }
}

/// Upper-triangular Toeplitz matrix with first row `h₀ … h_{n−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMatrix(pub DMatrix<f64>);

impl MarkovMatrix {
    pub fn from_parameters(h: &[f64]) -> Self {
        let n = h.len();
        MarkovMatrix(DMatrix::from_fn(n, n, |i, j| if j >= i { h[j - i] } else { 0.0 }))
    }
}

impl fmt::Display for MarkovMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_matrix(&self.0))
    }
}

/// Markov parameters by the recursion `h₀ = b₀`,
/// `h_j = b_j − Σ_{i=1}^{min(j,n)} a_i h_{j−i}` (with `b_j = 0` for `j > n`).
pub fn markov_parameters(ode: &LinearODE, count: usize) -> Vec<f64> {
    let n = ode.order();
    let mut h: Vec<f64> = Vec::with_capacity(count);
    for j in 0..count {
        let bj = ode.b().get(j).copied().unwrap_or(0.0);
        let feedback: f64 = (1..=j.min(n)).map(|i| ode.a_coeff(i) * h[j - i]).sum();
        h.push(bj - feedback);
    }
    h
}

/// Markov matrix of an ODE, from the first `n` Markov parameters.
pub fn markov_matrix(ode: &LinearODE) -> MarkovMatrix {
    MarkovMatrix::from_parameters(&markov_parameters(ode, ode.order()))
}

/// Observable canonical realization: `-aₙ … -a₁` down the last column of
/// `A`, ones on the subdiagonal, `C = [0 … 0 1]`, `D = h₀`, and `B` solved
/// from `CA^{i−1}B = h_i`, `i = 1…n`.
pub fn observable_canonical(ode: &LinearODE) -> StateSpace {
    let n = ode.order();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, n - 1)] = -ode.a_coeff(n - i);
        if i > 0 {
            a[(i, i - 1)] = 1.0;
        }
    }
    let mut c = RowDVector::zeros(n);
    c[n - 1] = 1.0;
    let h = markov_parameters(ode, n + 1);

    // rows C, CA, …, CA^{n−1}
    let mut rows = DMatrix::zeros(n, n);
    let mut ca = c.clone();
    for i in 0..n {
        rows.set_row(i, &ca);
        ca = &ca * &a;
    }
    let rhs = DVector::from_column_slice(&h[1..]);
    let b = rows
        .lu()
        .solve(&rhs)
        .expect("observable canonical pair always has a nonsingular observability matrix");
    StateSpace { a, b, c, d: h[0] }
}

pub fn observability_matrix(ss: &StateSpace) -> ObservabilityMatrix {
    let n = ss.order();
    let mut o = DMatrix::zeros(n, n);
    let mut ca = ss.c.clone();
    for i in (0..n).rev() {
        o.set_row(i, &ca);
        ca = &ca * &ss.a;
    }
    ObservabilityMatrix(o)
}

/// `C(sI − A)⁻¹B + D` by the Faddeev–LeVerrier recursion:
/// `adj(sI − A) = Σ_k s^{n−1−k} N_k`, `N₀ = I`,
/// `c_k = −tr(A N_{k−1})/k`, `N_k = A N_{k−1} + c_k I`.
pub fn ss_transfer_function(ss: &StateSpace) -> RationalFunction {
    let n = ss.order();
    let id = DMatrix::<f64>::identity(n, n);
    // char[k] is the coefficient of s^{n−k}
    let mut char_desc = vec![1.0];
    let mut num_desc = Vec::with_capacity(n);
    let mut nk = id.clone();
    for k in 1..=n {
        num_desc.push((&ss.c * &nk * &ss.b)[0]);
        let an = &ss.a * &nk;
        let ck = -an.trace() / k as f64;
        char_desc.push(ck);
        nk = an + &id * ck;
    }
    let den = Polynomial::from_descending(&char_desc);
    // numerator C·adj·B has degree n−1; prepend the s^n slot
    let mut strictly = vec![0.0];
    strictly.extend(num_desc);
    let num = &Polynomial::from_descending(&strictly) + &den.scale(ss.d);
    RationalFunction::new(num, den).expect("characteristic polynomial is monic")
}

/// The three conditions for an ODE and a state-space representation to be
/// equivalent.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub same_order: bool,
    pub same_transfer_function: bool,
    pub observable: bool,
    /// Relative coefficient mismatch of the cross-multiplied transfer
    /// functions.
    pub transfer_mismatch: f64,
    /// `σ_min/σ_max` of the observability matrix.
    pub observability_ratio: f64,
}

impl EquivalenceReport {
    pub fn equivalent(&self) -> bool {
        self.same_order && self.same_transfer_function && self.observable
    }

    /// 1-based indices of the failing conditions.
    pub fn failed(&self) -> Vec<usize> {
        [self.same_order, self.same_transfer_function, self.observable]
            .iter()
            .enumerate()
            .filter(|(_, ok)| !**ok)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

pub fn check_equivalence(ode: &LinearODE, ss: &StateSpace, tol: &Tolerances) -> EquivalenceReport {
    let transfer_mismatch = ss_transfer_function(ss).relative_mismatch(&ode.transfer_function());
    let observability_ratio = observability_matrix(ss).singular_value_ratio();
    EquivalenceReport {
        same_order: ode.order() == ss.order(),
        same_transfer_function: transfer_mismatch <= tol.transfer_function,
        observable: observability_ratio > tol.observability,
        transfer_mismatch,
        observability_ratio,
    }
}
