use num_complex::Complex64;

use super::cpoly::CPoly;
use super::roots::{poly_roots, Root};
use super::{Polynomial, RationalFunction};
use crate::error::Result;

/// One term `coefficient / (s − pole)^power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleTerm {
    pub pole: Complex64,
    pub power: usize,
    pub coefficient: Complex64,
}

/// `polynomial_part + Σ coefficient/(s − pole)^power`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractionExpansion {
    pub polynomial_part: Polynomial,
    pub terms: Vec<PoleTerm>,
}

impl PartialFractionExpansion {
    /// Rebuilds the rational function over the monic common denominator
    /// `Π (s − p)^k_max`.
    pub fn recombine(&self) -> RationalFunction {
        let mut poles: Vec<(Complex64, usize)> = Vec::new();
        for t in &self.terms {
            match poles.iter_mut().find(|(p, _)| *p == t.pole) {
                Some((_, k)) => *k = (*k).max(t.power),
                None => poles.push((t.pole, t.power)),
            }
        }
        let den = poles
            .iter()
            .fold(CPoly::one(), |acc, &(p, k)| acc.mul(&CPoly::linear_power(p, k)));
        let mut num = self.polynomial_part.to_complex().mul(&den);
        for t in &self.terms {
            let rest = poles.iter().fold(CPoly::one(), |acc, &(p, k)| {
                let k = if p == t.pole { k - t.power } else { k };
                acc.mul(&CPoly::linear_power(p, k))
            });
            num = num.add(&rest.scale(t.coefficient));
        }
        RationalFunction::new(num.real_part(), den.real_part())
            .expect("monic product of linear factors is nonzero")
    }
}

/// Partial fraction expansion of `rf`.
///
/// Coefficients for a pole `p` of multiplicity `m` are the first `m` Taylor
/// coefficients of `N(s)/q(s)` at `p`, where `q = D/(s − p)^m` is rebuilt
/// from the other roots. Terms are listed pole by pole in root order, powers
/// ascending, and exact-zero coefficients are kept so that every pole
/// appears with its full multiplicity.
pub fn partial_fractions(rf: &RationalFunction) -> Result<PartialFractionExpansion> {
    let (polynomial_part, rem) = rf.num().div_rem(rf.den())?;
    let roots = poly_roots(rf.den())?;
    let mut terms = Vec::new();
    if rem.is_zero() {
        return Ok(PartialFractionExpansion {
            polynomial_part,
            terms,
        });
    }
    let num = rem.to_complex();
    let lead = Complex64::new(rf.den().leading(), 0.0);

    for (idx, root) in roots.iter().enumerate() {
        // upper-half-plane poles are computed, their mirrors conjugated
        if root.value.im < 0.0 {
            if let Some(mirror) = terms_for_mirror(&terms, root) {
                terms.extend(mirror);
                continue;
            }
        }
        let q = roots
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != idx)
            .fold(CPoly::new(vec![lead]), |acc, (_, r)| {
                acc.mul(&CPoly::linear_power(r.value, r.multiplicity))
            });
        let m = root.multiplicity;
        let n_series = num.taylor_at(root.value);
        let q_series = q.taylor_at(root.value);
        let ratio = series_divide(&n_series, &q_series, m);
        // ratio[l] multiplies (s − p)^(l − m)
        for (l, mut c) in ratio.into_iter().enumerate() {
            // a real pole of a real function has a real coefficient
            if root.value.im == 0.0 {
                c.im = 0.0;
            }
            terms.push(PoleTerm {
                pole: root.value,
                power: m - l,
                coefficient: c,
            });
        }
    }
    terms.sort_by(|a, b| {
        b.pole
            .re
            .total_cmp(&a.pole.re)
            .then(b.pole.im.total_cmp(&a.pole.im))
            .then(a.power.cmp(&b.power))
    });
    Ok(PartialFractionExpansion {
        polynomial_part,
        terms,
    })
}

fn terms_for_mirror(terms: &[PoleTerm], root: &Root) -> Option<Vec<PoleTerm>> {
    let target = root.value.conj();
    let found: Vec<PoleTerm> = terms
        .iter()
        .filter(|t| t.pole == target)
        .map(|t| PoleTerm {
            pole: root.value,
            power: t.power,
            coefficient: t.coefficient.conj(),
        })
        .collect();
    (found.len() == root.multiplicity).then_some(found)
}

/// First `count` coefficients of the power series `a(t)/b(t)`.
fn series_divide(a: &[Complex64], b: &[Complex64], count: usize) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let get = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or(zero);
    let mut out: Vec<Complex64> = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = get(a, k);
        for (j, &o) in out.iter().enumerate() {
            acc -= o * get(b, k - j);
        }
        out.push(acc / b[0]);
    }
    out
}
