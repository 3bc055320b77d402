//! Time-domain trajectories of a state-space representation,
//! `x(t) = e^{At}x(0) + ∫₀ᵗ e^{A(t−τ)}Bu(τ)dτ`.
//!
//! The input's exponential-polynomial modes are generated by an auxiliary
//! linear system (one Jordan chain per distinct rate) appended to the state,
//! so the forced response is a homogeneous problem advanced exactly by
//! matrix exponentials.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{check_len, Error, Result};
use crate::fmt::fmt_full;
use crate::ic::recover_state;
use crate::laplace::IVProblem;
use crate::realization::{observable_canonical, StateSpace};
use crate::signal::{Signal, RATE_MERGE_TOL};
use crate::Tolerances;

/// Sampled states and outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DVector<f64>>,
    pub outputs: Vec<f64>,
}

impl Trajectory {
    /// CSV with header `t,y,x1..xn`, 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map_or(0, |x| x.len());
        let mut out = String::from("t,y");
        for i in 1..=n {
            let _ = write!(out, ",x{i}");
        }
        out.push('\n');
        for ((t, y), x) in self.times.iter().zip(&self.outputs).zip(&self.states) {
            out.push_str(&fmt_full(*t));
            out.push(',');
            out.push_str(&fmt_full(*y));
            for v in x.iter() {
                out.push(',');
                out.push_str(&fmt_full(*v));
            }
            out.push('\n');
        }
        out
    }
}

/// `points` uniform samples over `(0, horizon]`.
pub fn uniform_grid(horizon: f64, points: usize) -> Vec<f64> {
    (1..=points)
        .map(|i| horizon * i as f64 / points as f64)
        .collect()
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if let Some(&t0) = grid.first() {
        if t0.is_nan() || t0 < 0.0 {
            return Err(Error::Domain(format!("grid must start at t >= 0, got {t0}")));
        }
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::Domain("grid contains non-finite times".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// State matrix and initial state of the input generator, plus the row
/// mapping generator state to `u(t)`.
struct Generator {
    f: DMatrix<Complex64>,
    w0: DVector<Complex64>,
    out: DVector<Complex64>,
}

fn generator(input: &Signal) -> Generator {
    let mut chains: Vec<(Complex64, u32)> = Vec::new();
    for m in input.modes() {
        match chains
            .iter_mut()
            .find(|(r, _)| (*r - m.rate).norm() <= RATE_MERGE_TOL)
        {
            Some((_, k)) => *k = (*k).max(m.power),
            None => chains.push((m.rate, m.power)),
        }
    }
    let q: usize = chains.iter().map(|(_, k)| *k as usize + 1).sum();
    let mut f = DMatrix::zeros(q, q);
    let mut w0 = DVector::zeros(q);
    let mut out = DVector::zeros(q);
    let mut offset = 0;
    for &(rate, k) in &chains {
        // w_j = t^j e^{λt}/j!, ẇ_j = λ w_j + w_{j−1}
        for j in 0..=k as usize {
            f[(offset + j, offset + j)] = rate;
            if j > 0 {
                f[(offset + j, offset + j - 1)] = Complex64::new(1.0, 0.0);
            }
        }
        w0[offset] = Complex64::new(1.0, 0.0);
        for m in input.modes() {
            if (m.rate - rate).norm() <= RATE_MERGE_TOL {
                let fact: f64 = (1..=m.power).map(f64::from).product();
                out[offset + m.power as usize] += m.amp * fact;
            }
        }
        offset += k as usize + 1;
    }
    Generator { f, w0, out }
}

/// Exact trajectory of `ss` from `x0` under `input`, sampled on `grid`.
pub fn simulate(
    ss: &StateSpace,
    x0: &DVector<f64>,
    input: &Signal,
    grid: &[f64],
) -> Result<Trajectory> {
    let n = ss.order();
    check_len("initial state", n, x0.len())?;
    validate_grid(grid)?;
    let gen = generator(input);
    let q = gen.w0.len();

    let mut big = DMatrix::<Complex64>::zeros(n + q, n + q);
    for i in 0..n {
        for j in 0..n {
            big[(i, j)] = Complex64::new(ss.a[(i, j)], 0.0);
        }
        for j in 0..q {
            big[(i, n + j)] = gen.out[j] * ss.b[i];
        }
    }
    big.view_mut((n, n), (q, q)).copy_from(&gen.f);

    let mut z = DVector::<Complex64>::zeros(n + q);
    for i in 0..n {
        z[i] = Complex64::new(x0[i], 0.0);
    }
    z.rows_mut(n, q).copy_from(&gen.w0);

    let mut cache: HashMap<u64, DMatrix<Complex64>> = HashMap::new();
    let mut t_prev = 0.0;
    let mut traj = Trajectory {
        times: Vec::with_capacity(grid.len()),
        states: Vec::with_capacity(grid.len()),
        outputs: Vec::with_capacity(grid.len()),
    };
    for &t in grid {
        let h = t - t_prev;
        if h > 0.0 {
            let phi = cache
                .entry(h.to_bits())
                .or_insert_with(|| (&big * Complex64::new(h, 0.0)).exp());
            z = &*phi * z;
        }
        t_prev = t;
        let x = DVector::from_iterator(n, z.rows(0, n).iter().map(|c| c.re));
        let y = (&ss.c * &x)[0] + ss.d * input.eval(t);
        traj.times.push(t);
        traj.states.push(x);
        traj.outputs.push(y);
    }
    Ok(traj)
}

/// Simulates the observable canonical realization from the state that
/// matches the first conditions.
pub fn simulate_ivp(problem: &IVProblem, grid: &[f64], tol: &Tolerances) -> Result<Trajectory> {
    let n = problem.ode.order();
    let ss = observable_canonical(&problem.ode);
    let y_first = problem.first_conditions()?;
    let u_first = problem.input.future.condition_stack(n);
    let x0 = recover_state(&ss, &y_first, &u_first, tol)?;
    simulate(&ss, &x0, &problem.input.future, grid)
}
