//! Seeded generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use lti_ivp::{LinearODE, Polynomial, RationalFunction, Signal};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

pub fn vec_in(rng: &mut ChaCha8Rng, len: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..len).map(|_| uniform(rng, lo, hi)).collect()
}

/// Coefficient draw in [−5, 5], order `1..=n_max`, `b₀..b_{r−1} = 0` for a
/// random relative degree `r`.
pub fn random_ode(rng: &mut ChaCha8Rng, n_max: usize) -> LinearODE {
    let n = rng.random_range(1..=n_max);
    let r = rng.random_range(0..=n);
    random_ode_with(rng, n, r)
}

pub fn random_ode_with(rng: &mut ChaCha8Rng, n: usize, r: usize) -> LinearODE {
    let a = vec_in(rng, n, -5.0, 5.0);
    let mut b = vec_in(rng, n + 1, -5.0, 5.0);
    for bj in b.iter_mut().take(r) {
        *bj = 0.0;
    }
    // keep b_r clearly nonzero so r is the relative degree
    if b[r].abs() < 0.5 {
        b[r] = if b[r] < 0.0 { -1.0 } else { 1.0 };
    }
    LinearODE::new(a, b).unwrap()
}

/// Roots with `|Re| ≤ 3`, pairwise at least `gap` apart and at least `gap`
/// away from every entry of `avoid`. Complex roots come in conjugate pairs.
pub fn random_roots(rng: &mut ChaCha8Rng, n: usize, gap: f64, avoid: &[Complex64]) -> Vec<Complex64> {
    loop {
        let mut roots: Vec<Complex64> = Vec::new();
        while roots.len() < n {
            if n - roots.len() >= 2 && rng.random_bool(0.4) {
                let z = Complex64::new(uniform(rng, -3.0, 3.0), uniform(rng, 0.3, 3.0));
                roots.push(z);
                roots.push(z.conj());
            } else {
                roots.push(Complex64::new(uniform(rng, -3.0, 3.0), 0.0));
            }
        }
        let all: Vec<Complex64> = roots.iter().chain(avoid).copied().collect();
        let separated = roots.iter().enumerate().all(|(i, z)| {
            all.iter()
                .enumerate()
                .all(|(j, w)| i == j || (z - w).norm() >= gap)
        });
        if separated {
            return roots;
        }
    }
}

/// Real monic polynomial `Π (s − z)` by direct complex convolution.
pub fn poly_from_roots(roots: &[Complex64]) -> Polynomial {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for z in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= ck * z;
        }
        c = next;
    }
    Polynomial::new(c.iter().map(|z| z.re).collect::<Vec<_>>())
}

/// Random ODE of order `1..=n_max` whose characteristic roots are well
/// separated from each other and from `avoid`.
pub fn random_ode_from_roots(rng: &mut ChaCha8Rng, n_max: usize, avoid: &[Complex64]) -> LinearODE {
    let n = rng.random_range(1..=n_max);
    let roots = random_roots(rng, n, 0.3, avoid);
    let p = poly_from_roots(&roots);
    // a_i is the coefficient of s^{n−i}
    let a: Vec<f64> = (1..=n).map(|i| p.coeff(n - i)).collect();
    let r = rng.random_range(0..=n);
    let mut b = vec_in(rng, n + 1, -2.0, 2.0);
    for bj in b.iter_mut().take(r) {
        *bj = 0.0;
    }
    if b[r].abs() < 0.3 {
        b[r] = 1.0;
    }
    LinearODE::new(a, b).unwrap()
}

/// A random exponential-polynomial input built from the common test
/// signals, plus the poles of its transform.
pub fn random_input(rng: &mut ChaCha8Rng) -> (Signal, Vec<Complex64>) {
    let mut s = Signal::zero();
    let mut poles = Vec::new();
    for _ in 0..rng.random_range(1..=3) {
        let c = uniform(rng, -2.0, 2.0);
        let (sig, p) = match rng.random_range(0..6) {
            0 => (Signal::step(), vec![Complex64::new(0.0, 0.0)]),
            1 => (Signal::ramp(), vec![Complex64::new(0.0, 0.0)]),
            2 => {
                let a = uniform(rng, -2.0, 1.0);
                (Signal::exp(a), vec![Complex64::new(a, 0.0)])
            }
            3 => {
                let w = uniform(rng, 0.5, 3.0);
                (Signal::cos(w), vec![Complex64::new(0.0, w), Complex64::new(0.0, -w)])
            }
            4 => {
                let w = uniform(rng, 0.5, 3.0);
                (Signal::sin(w), vec![Complex64::new(0.0, w), Complex64::new(0.0, -w)])
            }
            _ => (Signal::zero(), vec![]),
        };
        s = s.add(&sig.scale(c));
        poles.extend(p);
    }
    (s, poles)
}

/// `Σ_k c_k s^k` evaluated in complex arithmetic.
pub fn eval_c(p: &Polynomial, z: Complex64) -> Complex64 {
    p.coeffs()
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Naive product of coefficient vectors.
pub fn convolve(p: &[f64], q: &[f64]) -> Vec<f64> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn monic(p: &Polynomial) -> Vec<f64> {
    let lead = p.leading();
    p.coeffs().iter().map(|c| c / lead).collect()
}

/// Largest coefficient of `n₁d₂ − n₂d₁` (denominators made monic), over the
/// largest coefficient of either product, floored at 1.
pub fn rational_mismatch(x: &RationalFunction, y: &RationalFunction) -> f64 {
    let dx = monic(x.den());
    let dy = monic(y.den());
    let nx: Vec<f64> = x.num().coeffs().iter().map(|c| c / x.den().leading()).collect();
    let ny: Vec<f64> = y.num().coeffs().iter().map(|c| c / y.den().leading()).collect();
    let l = convolve(&nx, &dy);
    let r = convolve(&ny, &dx);
    let len = l.len().max(r.len());
    let get = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
    let scale = (0..len)
        .map(|k| get(&l, k).abs().max(get(&r, k).abs()))
        .fold(1.0f64, f64::max);
    (0..len).map(|k| (get(&l, k) - get(&r, k)).abs()).fold(0.0, f64::max) / scale
}

pub fn poly_close(p: &Polynomial, q: &Polynomial, tol: f64) -> bool {
    let len = p.coeffs().len().max(q.coeffs().len());
    (0..len).all(|k| (p.coeff(k) - q.coeff(k)).abs() <= tol)
}

/// Left-hand and right-hand sides of the ODE for output `y` and input `u`
/// at `t`, plus the sum of term magnitudes for relative comparison.
pub fn ode_sides(ode: &LinearODE, y: &Signal, u: &Signal, t: f64) -> (f64, f64, f64) {
    let n = ode.order();
    let mut yd = y.clone();
    let mut ud = u.clone();
    let mut ys = Vec::with_capacity(n + 1);
    let mut us = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        ys.push(yd.eval(t));
        us.push(ud.eval(t));
        yd = yd.derivative();
        ud = ud.derivative();
    }
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    let mut mag = 0.0;
    for i in 0..=n {
        let ly = ode.a_coeff(i) * ys[n - i];
        let ru = ode.b()[i] * us[n - i];
        lhs += ly;
        rhs += ru;
        mag += ly.abs() + ru.abs();
    }
    (lhs, rhs, mag)
}

/// `h₀ = D`, `h_j = C A^{j−1} B` by explicit matrix powers.
pub fn markov_by_powers(a: &DMatrix<f64>, b: &DVector<f64>, c: &nalgebra::RowDVector<f64>, d: f64, count: usize) -> Vec<f64> {
    let mut out = vec![d];
    let mut v = b.clone();
    for _ in 1..count {
        out.push((c * &v)[0]);
        v = a * v;
    }
    out
}

/// `C (zI − A)⁻¹ B + D` via a dense complex solve.
pub fn ss_eval(a: &DMatrix<f64>, b: &DVector<f64>, c: &nalgebra::RowDVector<f64>, d: f64, z: Complex64) -> Complex64 {
    let n = a.nrows();
    let m = DMatrix::from_fn(n, n, |i, j| {
        let diag = if i == j { z } else { Complex64::new(0.0, 0.0) };
        diag - a[(i, j)]
    });
    let rhs = DVector::from_fn(n, |i, _| Complex64::new(b[i], 0.0));
    let x = m.lu().solve(&rhs).expect("z is not an eigenvalue");
    (0..n).map(|i| x[i] * c[i]).sum::<Complex64>() + d
}

pub fn probe_points() -> Vec<Complex64> {
    vec![
        Complex64::new(0.37, 1.9),
        Complex64::new(-2.3, 0.71),
        Complex64::new(4.1, -3.3),
        Complex64::new(0.05, 7.0),
    ]
}
