//! Conditions across the switching instant `t = 0`.
//!
//! The state of a realization is continuous for any finite input, so writing
//! `𝒴 = O x + M 𝒰` on both sides of `t = 0` gives
//!
//! ```text
//! 𝒴(0⁺) = 𝒴(0⁻) + M [𝒰(0⁺) − 𝒰(0⁻)]
//! ```
//!
//! which maps *previous* conditions (values just before the switch) to
//! *first* conditions (values just after it).

use std::fmt;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::fmt::fmt_num;
use crate::ode::LinearODE;
use crate::realization::{markov_matrix, observability_matrix, MarkovMatrix, StateSpace};
use crate::signal::ConditionStack;
use crate::Tolerances;

/// Previous and first condition stacks of one problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionPair {
    pub y_prev: ConditionStack,
    pub u_prev: ConditionStack,
    pub u_first: ConditionStack,
    pub y_first: Option<ConditionStack>,
}

impl ConditionPair {
    pub fn new(y_prev: ConditionStack, u_prev: ConditionStack, u_first: ConditionStack) -> Self {
        ConditionPair {
            y_prev,
            u_prev,
            u_first,
            y_first: None,
        }
    }

    /// Fills in `y_first` from the mapping.
    pub fn resolve(mut self, ode: &LinearODE) -> Result<Self> {
        self.y_first = Some(map_previous_to_first(
            ode,
            &self.y_prev,
            &self.u_prev,
            &self.u_first,
        )?);
        Ok(self)
    }
}

/// `𝒴(0⁺) = 𝒴(0⁻) + M·[𝒰(0⁺) − 𝒰(0⁻)]`.
pub fn map_previous_to_first(
    ode: &LinearODE,
    y_prev: &ConditionStack,
    u_prev: &ConditionStack,
    u_first: &ConditionStack,
) -> Result<ConditionStack> {
    let n = ode.order();
    y_prev.expect_len("previous output stack", n)?;
    u_prev.expect_len("previous input stack", n)?;
    u_first.expect_len("first input stack", n)?;
    let m = markov_matrix(ode);
    let jump = &m.0 * (u_first - u_prev).to_vector();
    Ok(ConditionStack::from_vector(&(y_prev.to_vector() + jump)))
}

/// Solves `O x = 𝒴 − M 𝒰` for the state that produces the given output
/// and input derivative stacks.
pub fn recover_state(
    ss: &StateSpace,
    y_stack: &ConditionStack,
    u_stack: &ConditionStack,
    tol: &Tolerances,
) -> Result<DVector<f64>> {
    let n = ss.order();
    y_stack.expect_len("output stack", n)?;
    u_stack.expect_len("input stack", n)?;
    let o = observability_matrix(ss);
    let ratio = o.singular_value_ratio();
    if ratio <= tol.observability {
        return Err(Error::NotObservable { ratio });
    }
    let m = MarkovMatrix::from_parameters(&ss.markov_parameters(n));
    let rhs = y_stack.to_vector() - &m.0 * u_stack.to_vector();
    o.0.lu()
        .solve(&rhs)
        .ok_or(Error::NotObservable { ratio })
}

/// Per-derivative continuity of the output across `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    /// `Δ𝒴 = M Δ𝒰`, highest derivative first.
    pub output_jump: ConditionStack,
    /// `(derivative order, |jump|, continuous)`, highest order first.
    pub rows: Vec<(usize, f64, bool)>,
    /// True iff `u, u̇, …, u^{(m−1)}` are all continuous, in which case the
    /// whole output stack is continuous.
    pub output_continuous: bool,
    pub m: usize,
}

/// Classifies the output jump caused by the input jump
/// `u_jump = 𝒰(0⁺) − 𝒰(0⁻)`.
pub fn classify_continuity(
    ode: &LinearODE,
    u_jump: &ConditionStack,
    tol: &Tolerances,
) -> Result<ContinuityReport> {
    let n = ode.order();
    u_jump.expect_len("input jump", n)?;
    let (_, m) = ode.relative_degree();
    let dy = ConditionStack::from_vector(&(&markov_matrix(ode).0 * u_jump.to_vector()));
    let rows = (0..n)
        .map(|k| {
            let order = n - 1 - k;
            let mag = dy[k].abs();
            (order, mag, mag <= tol.continuity)
        })
        .collect();
    // u, …, u^{(m−1)} are the last m entries of the stack
    let output_continuous = (0..m).all(|j| u_jump.derivative(j).abs() <= tol.continuity);
    Ok(ContinuityReport {
        output_jump: dy,
        rows,
        output_continuous,
        m,
    })
}

impl fmt::Display for ContinuityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order  jump  verdict")?;
        for &(order, mag, ok) in &self.rows {
            let verdict = if ok { "continuous" } else { "discontinuous" };
            writeln!(f, "{order}  {}  {verdict}", fmt_num(mag))?;
        }
        write!(
            f,
            "output stack continuous: {} (m = {})",
            if self.output_continuous { "yes" } else { "no" },
            self.m
        )
    }
}
