//! Initial value problems for linear constant-coefficient ODEs whose input
//! may switch at `t = 0`.
//!
//! The crate solves
//!
//! ```text
//! y⁽ⁿ⁾ + a₁ y⁽ⁿ⁻¹⁾ + … + aₙ y = b₀ u⁽ⁿ⁾ + … + bₙ u
//! ```
//!
//! in closed form through the Laplace transform, and independently through
//! an equivalent state-space representation. When the input jumps at
//! `t = 0` the output derivatives may jump too; the conditions just before
//! the switch (*previous* conditions, `𝒴(0⁻)`) and just after it (*first*
//! conditions, `𝒴(0⁺)`) are related by
//!
//! ```text
//! 𝒴(0⁺) = 𝒴(0⁻) + M [𝒰(0⁺) − 𝒰(0⁻)]
//! ```
//!
//! with `M` the Toeplitz matrix of Markov parameters.
//!
//! ```
//! use lti_ivp::{ConditionStack, Conditions, IVProblem, LinearODE, PiecewiseInput, Signal};
//!
//! // ÿ + 6ẏ + 5y = ü + 3u̇ + 2u, input switches from cos(t) to t
//! let ode = LinearODE::new([6.0, 5.0], [1.0, 3.0, 2.0])?;
//! let input = PiecewiseInput::new(Signal::cos(1.0), Signal::ramp());
//! let problem = IVProblem::new(ode, input, Conditions::Previous(ConditionStack::new([1.0, 0.0])))?;
//!
//! assert_eq!(problem.first_conditions()?.as_slice(), &[5.0, -1.0]);
//! let y = lti_ivp::solve_ivp(&problem)?;
//! assert!((y.eval(0.0) + 1.0).abs() < 1e-12);
//! # Ok::<(), lti_ivp::Error>(())
//! ```
//!
//! The guide in `book/` walks through each piece.

pub mod cli;
mod error;
mod fmt;
pub mod ic;
pub mod laplace;
pub mod ode;
pub mod poly;
pub mod realization;
pub mod signal;
pub mod simulate;

pub use error::{Error, Result};
pub use ic::{classify_continuity, map_previous_to_first, recover_state, ConditionPair, ContinuityReport};
pub use laplace::{assemble, invert, solve_ivp, Conditions, IVProblem, LaplaceSolution};
pub use ode::LinearODE;
pub use poly::{partial_fractions, poly_roots, PartialFractionExpansion, Polynomial, RationalFunction};
pub use realization::{
    check_equivalence, markov_matrix, markov_parameters, observability_matrix, observable_canonical,
    ss_transfer_function, EquivalenceReport, MarkovMatrix, ObservabilityMatrix, StateSpace,
};
pub use signal::{ConditionStack, Mode, PiecewiseInput, Signal};
pub use simulate::{simulate, simulate_ivp, uniform_grid, Trajectory};

/// Thresholds for the floating-point yes/no decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative coefficient mismatch allowed between cross-multiplied
    /// transfer functions.
    pub transfer_function: f64,
    /// A matrix counts as singular when `σ_min ≤ observability · σ_max`.
    pub observability: f64,
    /// Absolute size below which a jump counts as zero.
    pub continuity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            transfer_function: 1e-9,
            observability: 1e-9,
            continuity: 1e-9,
        }
    }
}

impl Tolerances {
    /// Parses an override string: either one number applied to every
    /// threshold, or comma-separated `key=value` pairs with keys `tf`,
    /// `observability`, `continuity`.
    pub fn parse_overrides(spec: &str) -> Result<Self> {
        let mut tol = Tolerances::default();
        let spec = spec.trim();
        if let Ok(v) = spec.parse::<f64>() {
            return Ok(Tolerances {
                transfer_function: v,
                observability: v,
                continuity: v,
            });
        }
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("tolerance override '{part}' is not key=value")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("tolerance '{key}' is not a number")))?;
            match key.trim() {
                "tf" => tol.transfer_function = value,
                "observability" => tol.observability = value,
                "continuity" => tol.continuity = value,
                other => return Err(Error::Domain(format!("unknown tolerance key '{other}'"))),
            }
        }
        Ok(tol)
    }
}

#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    pub mod polynomials {}
    #[doc = include_str!("../../../book/src/signals.md")]
    pub mod signals {}
    #[doc = include_str!("../../../book/src/equations.md")]
    pub mod equations {}
    #[doc = include_str!("../../../book/src/realization.md")]
    pub mod realization {}
    #[doc = include_str!("../../../book/src/conditions.md")]
    pub mod conditions {}
    #[doc = include_str!("../../../book/src/solving.md")]
    pub mod solving {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    pub mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
