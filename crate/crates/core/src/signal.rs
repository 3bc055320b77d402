//! Exponential-polynomial signals `Σ amp·t^k·e^{λt}`.
//!
//! The class is closed under differentiation and has rational Laplace
//! transforms, which is what the closed-form pipeline needs. Amplitudes and
//! rates are complex; every signal keeps its modes closed under conjugation
//! so that it is real-valued on the real line.

use std::fmt;
use std::ops::{Add, Index, Sub};

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{check_len, Error, Result};
use crate::fmt::{fmt_num, fmt_vec, is_negative_display};
use crate::poly::{CPoly, PartialFractionExpansion, RationalFunction};

/// Rates closer than this (absolute) are merged into one mode.
pub const RATE_MERGE_TOL: f64 = 1e-9;

/// Amplitudes at or below this magnitude are dropped on canonicalization.
pub const AMP_DROP_TOL: f64 = 1e-12;

const CONJ_TOL: f64 = 1e-9;

/// One term `amp · t^power · e^{rate·t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub amp: Complex64,
    pub power: u32,
    pub rate: Complex64,
}

impl Mode {
    pub fn new(amp: Complex64, power: u32, rate: Complex64) -> Self {
        Mode { amp, power, rate }
    }

    pub fn real(amp: f64, power: u32, rate: f64) -> Self {
        Mode::new(Complex64::new(amp, 0.0), power, Complex64::new(rate, 0.0))
    }

    fn eval(&self, t: f64) -> Complex64 {
        let tk = if self.power == 0 { 1.0 } else { t.powi(self.power as i32) };
        self.amp * tk * (self.rate * t).exp()
    }
}

/// A real-valued exponential-polynomial signal.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Signal {
    modes: Vec<Mode>,
}

impl Signal {
    pub fn zero() -> Self {
        Signal { modes: Vec::new() }
    }

    /// The constant `c` for all `t`.
    pub fn constant(c: f64) -> Self {
        Self::from_modes_unchecked(vec![Mode::real(c, 0, 0.0)])
    }

    /// Unit step value for `t > 0`.
    pub fn step() -> Self {
        Self::constant(1.0)
    }

    /// `t`
    pub fn ramp() -> Self {
        Self::from_modes_unchecked(vec![Mode::real(1.0, 1, 0.0)])
    }

    /// `e^{a t}`
    pub fn exp(a: f64) -> Self {
        Self::from_modes_unchecked(vec![Mode::real(1.0, 0, a)])
    }

    /// `cos(w t)`
    pub fn cos(w: f64) -> Self {
        Self::from_modes_unchecked(vec![
            Mode::new(Complex64::new(0.5, 0.0), 0, Complex64::new(0.0, w)),
            Mode::new(Complex64::new(0.5, 0.0), 0, Complex64::new(0.0, -w)),
        ])
    }

    /// `sin(w t)`
    pub fn sin(w: f64) -> Self {
        Self::from_modes_unchecked(vec![
            Mode::new(Complex64::new(0.0, -0.5), 0, Complex64::new(0.0, w)),
            Mode::new(Complex64::new(0.0, 0.5), 0, Complex64::new(0.0, -w)),
        ])
    }

    /// Builds a signal from explicit modes, merging duplicates and checking
    /// conjugate closure.
    pub fn from_modes(modes: Vec<Mode>) -> Result<Self> {
        let sig = Self::from_modes_unchecked(modes);
        if !sig.is_conjugate_closed() {
            return Err(Error::NotConjugateClosed);
        }
        Ok(sig)
    }

    fn from_modes_unchecked(modes: Vec<Mode>) -> Self {
        let mut s = Signal { modes };
        s.canonicalize();
        s
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    /// Merges modes sharing `(power, rate)`, drops negligible amplitudes and
    /// sorts into display order.
    fn canonicalize(&mut self) {
        let mut merged: Vec<Mode> = Vec::with_capacity(self.modes.len());
        for m in self.modes.drain(..) {
            match merged
                .iter_mut()
                .find(|x| x.power == m.power && (x.rate - m.rate).norm() <= RATE_MERGE_TOL)
            {
                Some(x) => x.amp += m.amp,
                None => merged.push(m),
            }
        }
        merged.retain(|m| m.amp.norm() > AMP_DROP_TOL);
        for m in &mut merged {
            if m.rate.im == 0.0 {
                m.amp.im = 0.0;
            }
        }
        merged.sort_by(|a, b| {
            b.rate
                .re
                .abs()
                .total_cmp(&a.rate.re.abs())
                .then(b.rate.re.total_cmp(&a.rate.re))
                .then(a.rate.im.abs().total_cmp(&b.rate.im.abs()))
                .then(b.rate.im.total_cmp(&a.rate.im))
                .then(b.power.cmp(&a.power))
        });
        self.modes = merged;
    }

    fn is_conjugate_closed(&self) -> bool {
        self.modes.iter().all(|m| {
            let tol = CONJ_TOL * m.amp.norm().max(1.0);
            if m.rate.im == 0.0 {
                return m.amp.im.abs() <= tol;
            }
            self.modes.iter().any(|o| {
                o.power == m.power
                    && (o.rate - m.rate.conj()).norm() <= RATE_MERGE_TOL
                    && (o.amp - m.amp.conj()).norm() <= tol
            })
        })
    }

    pub fn scale(&self, k: f64) -> Signal {
        Self::from_modes_unchecked(
            self.modes
                .iter()
                .map(|m| Mode { amp: m.amp * k, ..*m })
                .collect(),
        )
    }

    pub fn add(&self, rhs: &Signal) -> Signal {
        Self::from_modes_unchecked(self.modes.iter().chain(&rhs.modes).copied().collect())
    }

    /// Value at `t` (real part; the imaginary residue cancels by conjugate
    /// closure).
    pub fn eval(&self, t: f64) -> f64 {
        self.eval_complex(t).re
    }

    pub(crate) fn eval_complex(&self, t: f64) -> Complex64 {
        self.modes.iter().map(|m| m.eval(t)).sum()
    }

    /// Term-wise derivative: `d/dt t^k e^{λt} = k t^{k−1} e^{λt} + λ t^k e^{λt}`.
    pub fn derivative(&self) -> Signal {
        let mut out = Vec::with_capacity(2 * self.modes.len());
        for m in &self.modes {
            if m.power > 0 {
                out.push(Mode {
                    amp: m.amp * m.power as f64,
                    power: m.power - 1,
                    rate: m.rate,
                });
            }
            out.push(Mode {
                amp: m.amp * m.rate,
                ..*m
            });
        }
        Self::from_modes_unchecked(out)
    }

    /// `[x^{(n−1)}(t), …, x'(t), x(t)]`, highest derivative first.
    pub fn derivative_stack_at(&self, n: usize, t: f64) -> ConditionStack {
        let mut values = vec![0.0; n];
        let mut d = self.clone();
        for k in 0..n {
            values[n - 1 - k] = d.eval(t);
            if k + 1 < n {
                d = d.derivative();
            }
        }
        ConditionStack::new(values)
    }

    /// The derivative stack at `t = 0` of this analytic expression.
    pub fn condition_stack(&self, n: usize) -> ConditionStack {
        self.derivative_stack_at(n, 0.0)
    }

    /// One-sided Laplace transform `Σ amp·k!/(s − λ)^{k+1}` over the common
    /// denominator `Π (s − λ)^{k_max+1}`.
    pub fn laplace_transform(&self) -> RationalFunction {
        if self.modes.is_empty() {
            return RationalFunction::zero();
        }
        let mut groups: Vec<(Complex64, u32)> = Vec::new();
        for m in &self.modes {
            match groups
                .iter_mut()
                .find(|(r, _)| (*r - m.rate).norm() <= RATE_MERGE_TOL)
            {
                Some((_, k)) => *k = (*k).max(m.power),
                None => groups.push((m.rate, m.power)),
            }
        }
        let den = groups.iter().fold(CPoly::one(), |acc, &(r, k)| {
            acc.mul(&CPoly::linear_power(r, k as usize + 1))
        });
        let mut num = CPoly::new(Vec::new());
        for m in &self.modes {
            let rest = groups.iter().fold(CPoly::one(), |acc, &(r, k)| {
                let power = if (r - m.rate).norm() <= RATE_MERGE_TOL {
                    k - m.power
                } else {
                    k + 1
                };
                acc.mul(&CPoly::linear_power(r, power as usize))
            });
            num = num.add(&rest.scale(m.amp * factorial(m.power)));
        }
        debug_assert!(num.max_imag() <= 1e-8 * (1.0 + num.real_part().max_abs()));
        RationalFunction::new(num.real_part(), den.real_part())
            .expect("product of linear factors is nonzero")
    }

    /// Inverse transform of a strictly proper expansion: each term
    /// `c/(s − p)^k` becomes the mode `(c/(k−1)!, k−1, p)`.
    pub fn from_partial_fractions(pfe: &PartialFractionExpansion) -> Result<Signal> {
        if !pfe.polynomial_part.is_zero() {
            return Err(Error::NotStrictlyProper);
        }
        let modes = pfe
            .terms
            .iter()
            .map(|t| Mode {
                amp: t.coefficient / factorial(t.power as u32 - 1),
                power: t.power as u32 - 1,
                rate: t.pole,
            })
            .collect();
        Ok(Self::from_modes_unchecked(modes))
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Expression rendering: conjugate pairs are folded into `cos`/`sin`
/// terms, modes in canonical order (descending `|Re λ|`, then power).
impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(f64, String)> = Vec::new();
        for m in &self.modes {
            if m.rate.im < 0.0 {
                continue;
            }
            let mut factors = Vec::new();
            match m.power {
                0 => {}
                1 => factors.push("t".to_string()),
                k => factors.push(format!("t^{k}")),
            }
            if m.rate.re != 0.0 {
                factors.push(format!("exp({})", scaled_t(m.rate.re)));
            }
            if m.rate.im == 0.0 {
                terms.push((m.amp.re, factors.join(" * ")));
            } else {
                let w = scaled_t(m.rate.im);
                let mut cos_f = factors.clone();
                cos_f.push(format!("cos({w})"));
                let mut sin_f = factors;
                sin_f.push(format!("sin({w})"));
                terms.push((2.0 * m.amp.re, cos_f.join(" * ")));
                terms.push((-2.0 * m.amp.im, sin_f.join(" * ")));
            }
        }
        let mut first = true;
        for (c, body) in terms {
            if fmt_num(c) == "0" {
                continue;
            }
            let neg = is_negative_display(c);
            let mag = fmt_num(c.abs());
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            if body.is_empty() {
                write!(f, "{sep}{mag}")?;
            } else if mag == "1" {
                write!(f, "{sep}{body}")?;
            } else {
                write!(f, "{sep}{mag} * {body}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn scaled_t(a: f64) -> String {
    match fmt_num(a).as_str() {
        "1" => "t".to_string(),
        "-1" => "-t".to_string(),
        s => format!("{s}*t"),
    }
}

/// An input whose analytic expression switches at `t = 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PiecewiseInput {
    /// Expression valid for `t < 0`.
    pub past: Signal,
    /// Expression valid for `t > 0`.
    pub future: Signal,
}

impl PiecewiseInput {
    pub fn new(past: Signal, future: Signal) -> Self {
        PiecewiseInput { past, future }
    }

    /// Heaviside step: zero before, one after.
    pub fn step() -> Self {
        PiecewiseInput::new(Signal::zero(), Signal::step())
    }

    /// `𝒰(0⁺) − 𝒰(0⁻)` for an order-`n` equation.
    pub fn jump(&self, n: usize) -> ConditionStack {
        &self.future.condition_stack(n) - &self.past.condition_stack(n)
    }
}

/// Derivative values at an instant, highest derivative first: entry 0 is the
/// `(n−1)`-th derivative and entry `n−1` the value itself.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionStack(Vec<f64>);

impl ConditionStack {
    pub fn new(values: impl Into<Vec<f64>>) -> Self {
        ConditionStack(values.into())
    }

    pub fn zeros(n: usize) -> Self {
        ConditionStack(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Value of the `j`-th derivative.
    pub fn derivative(&self, j: usize) -> f64 {
        self.0[self.0.len() - 1 - j]
    }

    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.0)
    }

    pub fn from_vector(v: &DVector<f64>) -> Self {
        ConditionStack(v.iter().copied().collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_diff(&self, other: &ConditionStack) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub(crate) fn expect_len(&self, what: &'static str, n: usize) -> Result<()> {
        check_len(what, n, self.len())
    }
}

impl Index<usize> for ConditionStack {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &ConditionStack {
    type Output = ConditionStack;
    fn add(self, rhs: &ConditionStack) -> ConditionStack {
        ConditionStack(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ConditionStack {
    type Output = ConditionStack;
    fn sub(self, rhs: &ConditionStack) -> ConditionStack {
        ConditionStack(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for ConditionStack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_vec(&self.0))
    }
}
