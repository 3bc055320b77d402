//! Polynomial roots from companion-matrix eigenvalues, with clustering of
//! nearby eigenvalues into repeated roots.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Polynomial;
use crate::error::{Error, Result};

/// Relative distance under which two eigenvalues are read as a double root.
/// Clusters of `k` members are accepted up to `CLUSTER_TOL^(2/k)`, matching
/// the `eps^(1/k)` spread that floating-point eigenvalues of a `k`-fold root
/// show.
pub const CLUSTER_TOL: f64 = 1e-7;

/// Relative residual of `p^(j)` at a cluster centroid, `j < k`, below which a
/// `k`-member cluster is confirmed as a `k`-fold root.
const MULTIPLICITY_RESIDUAL: f64 = 1e-6;

/// Imaginary parts this small (relative) are snapped to the real axis.
const REAL_SNAP: f64 = 1e-9;

/// A root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Roots of `p` as a multiset with multiplicities summing to its degree.
///
/// Roots come back conjugate-paired (a complex root and its conjugate share a
/// multiplicity and are exact mirror images), sorted by descending real part
/// and then descending imaginary part.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Root>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let coeffs = p.coeffs();
    let zeros = coeffs.iter().take_while(|&&c| c == 0.0).count();
    let reduced = &coeffs[zeros..];

    let mut roots = Vec::new();
    if zeros > 0 {
        roots.push(Root {
            value: Complex64::new(0.0, 0.0),
            multiplicity: zeros,
        });
    }

    let eigen = match reduced.len() {
        0 | 1 => Vec::new(),
        2 => vec![Complex64::new(-reduced[0] / reduced[1], 0.0)],
        _ => companion_eigenvalues(reduced)?,
    };
    let reduced_poly = Polynomial::new(reduced.to_vec());
    roots.extend(cluster(&reduced_poly, eigen));
    let mut roots = pair_conjugates(roots);
    roots.sort_by(|a, b| {
        b.value
            .re
            .total_cmp(&a.value.re)
            .then(b.value.im.total_cmp(&a.value.im))
    });
    Ok(roots)
}

fn companion_eigenvalues(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let mut m = DMatrix::<f64>::zeros(d, d);
    for j in 0..d {
        m[(0, j)] = -coeffs[d - 1 - j] / lead;
    }
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    balance(&mut m);
    let eig = m.complex_eigenvalues();
    if eig.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::RootFinding(
            "companion eigenvalue iteration produced non-finite values".into(),
        ));
    }
    Ok(eig.iter().copied().collect())
}

/// Parlett–Reinsch diagonal similarity balancing (radix 2).
fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let total = c + r;
            let mut f = 1.0;
            let mut g = r / 2.0;
            while c < g {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while c > g {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + r) / f < 0.95 * total {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

fn cluster_radius(members: usize) -> f64 {
    CLUSTER_TOL.powf(2.0 / members as f64)
}

fn centroid(points: &[Complex64]) -> Complex64 {
    points.iter().sum::<Complex64>() / points.len() as f64
}

fn cluster(p: &Polynomial, mut remaining: Vec<Complex64>) -> Vec<Root> {
    // Deterministic seeding order.
    remaining.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out = Vec::new();
    while let Some(seed) = remaining.pop() {
        // nearest neighbours of the seed, closest first
        let mut order: Vec<(usize, f64)> = remaining
            .iter()
            .enumerate()
            .map(|(i, z)| (i, (z - seed).norm()))
            .collect();
        order.sort_by(|a, b| a.1.total_cmp(&b.1));

        // try the largest cluster first
        let mut accepted: Option<(usize, Complex64)> = None;
        for k in (2..=order.len() + 1).rev() {
            let mut members = vec![seed];
            members.extend(order[..k - 1].iter().map(|&(i, _)| remaining[i]));
            let c = centroid(&members);
            let spread = members.iter().fold(0.0f64, |m, z| m.max((z - c).norm()));
            if spread <= cluster_radius(k) * c.norm().max(1.0) && is_multiple_root(p, c, k) {
                accepted = Some((k, c));
                break;
            }
        }
        match accepted {
            Some((k, c)) => {
                let mut taken: Vec<usize> = order[..k - 1].iter().map(|&(i, _)| i).collect();
                taken.sort_unstable_by(|a, b| b.cmp(a));
                for i in taken {
                    remaining.remove(i);
                }
                out.push(Root {
                    value: c,
                    multiplicity: k,
                });
            }
            None => out.push(Root {
                value: seed,
                multiplicity: 1,
            }),
        }
    }
    out
}

fn is_multiple_root(p: &Polynomial, c: Complex64, k: usize) -> bool {
    let mut d = p.clone();
    for _ in 0..k {
        let value = d.eval_complex(c).norm();
        let bound = d
            .coeffs()
            .iter()
            .rev()
            .fold(0.0, |acc, &a| acc * c.norm() + a.abs());
        if value > MULTIPLICITY_RESIDUAL * bound.max(f64::MIN_POSITIVE) {
            return false;
        }
        d = d.derivative();
    }
    true
}

/// Snaps near-real roots to the axis and makes complex roots exact
/// conjugate mirrors of each other.
fn pair_conjugates(roots: Vec<Root>) -> Vec<Root> {
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut out = Vec::new();
    for mut r in roots {
        let scale = r.value.norm().max(1.0);
        if r.value.im.abs() <= REAL_SNAP * scale {
            r.value.im = 0.0;
            out.push(r);
        } else if r.value.im > 0.0 {
            upper.push(r);
        } else {
            lower.push(r);
        }
    }
    for u in upper {
        let partner = lower
            .iter()
            .enumerate()
            .filter(|(_, l)| l.multiplicity == u.multiplicity)
            .map(|(i, l)| (i, (l.value - u.value.conj()).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((i, _)) => {
                let l = lower.swap_remove(i);
                let avg = (u.value + l.value.conj()) / 2.0;
                out.push(Root {
                    value: avg,
                    multiplicity: u.multiplicity,
                });
                out.push(Root {
                    value: avg.conj(),
                    multiplicity: u.multiplicity,
                });
            }
            None => out.push(u),
        }
    }
    out.extend(lower);
    out
}
