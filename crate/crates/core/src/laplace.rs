//! Closed-form Laplace-domain solution and its inversion.
//!
//! Transforming the ODE term by term gives
//!
//! ```text
//!          B(s) U(s) + v_yᵀ𝒴 − v_uᵀ𝒰
//! Y(s) = ─────────────────────────────
//!                    A(s)
//! ```
//!
//! where the stacks `𝒴, 𝒰` may be taken either both at `0⁻` or both at
//! `0⁺`: the two choices give the same `Y(s)`. Mixing them does not.

use crate::error::{check_len, Error, Result};
use crate::ode::LinearODE;
use crate::poly::{partial_fractions, Polynomial, RationalFunction};
use crate::signal::{ConditionStack, PiecewiseInput, Signal};

/// Which output stack the problem supplies.
#[derive(Debug, Clone, PartialEq)]
pub enum Conditions {
    /// `𝒴(0⁻)`; the previous input stack comes from `input.past`.
    Previous(ConditionStack),
    /// `𝒴(0⁺)`; `input.past` is not used.
    First(ConditionStack),
}

impl Conditions {
    pub fn stack(&self) -> &ConditionStack {
        match self {
            Conditions::Previous(s) | Conditions::First(s) => s,
        }
    }
}

/// An initial value problem with an input that may switch at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct IVProblem {
    pub ode: LinearODE,
    pub input: PiecewiseInput,
    pub conditions: Conditions,
    /// Reporting and simulation horizon.
    pub horizon: Option<f64>,
}

impl IVProblem {
    pub fn new(ode: LinearODE, input: PiecewiseInput, conditions: Conditions) -> Result<Self> {
        check_len("condition stack", ode.order(), conditions.stack().len())?;
        Ok(IVProblem {
            ode,
            input,
            conditions,
            horizon: None,
        })
    }

    pub fn with_horizon(mut self, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
        }
        self.horizon = Some(horizon);
        Ok(self)
    }

    /// The `(𝒴, 𝒰)` pair fed to [`assemble`]: both previous or both first.
    pub fn stacks(&self) -> (ConditionStack, ConditionStack) {
        let n = self.ode.order();
        match &self.conditions {
            Conditions::Previous(y) => (y.clone(), self.input.past.condition_stack(n)),
            Conditions::First(y) => (y.clone(), self.input.future.condition_stack(n)),
        }
    }

    /// `𝒴(0⁺)`, mapped from the previous conditions when necessary.
    pub fn first_conditions(&self) -> Result<ConditionStack> {
        let n = self.ode.order();
        match &self.conditions {
            Conditions::First(y) => Ok(y.clone()),
            Conditions::Previous(y) => crate::ic::map_previous_to_first(
                &self.ode,
                y,
                &self.input.past.condition_stack(n),
                &self.input.future.condition_stack(n),
            ),
        }
    }
}

/// `Y(s)` split into its zero-state and zero-input parts.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceSolution {
    /// `[B·U + X]/A` over the denominator `A·den(U)`.
    pub ys: RationalFunction,
    /// `X = v_yᵀ𝒴 − v_uᵀ𝒰`.
    pub ic_numerator: Polynomial,
    /// `B·U/A`
    pub zero_state_part: RationalFunction,
    /// `X/A`
    pub zero_input_part: RationalFunction,
}

/// Builds `Y(s) = [B(s)·U(s) + v_yᵀ·y_stack − v_uᵀ·u_stack] / A(s)`.
pub fn assemble(
    ode: &LinearODE,
    us: &RationalFunction,
    y_stack: &ConditionStack,
    u_stack: &ConditionStack,
) -> Result<LaplaceSolution> {
    let n = ode.order();
    y_stack.expect_len("output stack", n)?;
    u_stack.expect_len("input stack", n)?;
    let (v_y, v_u) = ode.ic_vectors();
    let ic_numerator = (0..n).fold(Polynomial::zero(), |acc, k| {
        let term = &v_y[k].scale(y_stack[k]) - &v_u[k].scale(u_stack[k]);
        &acc + &term
    });
    let a = ode.characteristic();
    let b = ode.input_polynomial();

    let ys = RationalFunction::new(
        &(&b * us.num()) + &(&ic_numerator * us.den()),
        &a * us.den(),
    )?;
    let zero_state_part = RationalFunction::new(&b * us.num(), &a * us.den())?;
    let zero_input_part = RationalFunction::new(ic_numerator.clone(), a)?;
    Ok(LaplaceSolution {
        ys,
        ic_numerator,
        zero_state_part,
        zero_input_part,
    })
}

/// Inverse transform by partial fractions.
pub fn invert(ys: &RationalFunction) -> Result<Signal> {
    if !ys.is_strictly_proper() {
        return Err(Error::NotStrictlyProper);
    }
    Signal::from_partial_fractions(&partial_fractions(ys)?)
}

/// Assembles `Y(s)` for the problem, with the stacks exactly as given.
pub fn laplace_solution(problem: &IVProblem) -> Result<LaplaceSolution> {
    let us = problem.input.future.laplace_transform();
    let (y, u) = problem.stacks();
    assemble(&problem.ode, &us, &y, &u)
}

/// Closed-form `y(t)` for `t > 0`.
pub fn solve_ivp(problem: &IVProblem) -> Result<Signal> {
    invert(&laplace_solution(problem)?.ys)
}
