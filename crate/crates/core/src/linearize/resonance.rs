//! Resonance relations `a_i = a_1^m_1 ... a_d^m_d` with `m_j >= 0` and `|m| >= 2`.
//!
//! The trivial relation `m = e_i` has `|m| = 1` and is never tested.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::symbol::EigenSymbol;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Zero-based index of the eigenvalue on the left-hand side.
    pub target: usize,
    pub multi_index: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceReport {
    pub resonant: bool,
    pub witnesses: Vec<Witness>,
    /// Largest `|m|` examined.
    pub max_order: u32,
    /// Number of `(i, m)` pairs examined.
    pub checked: usize,
    /// Set by the numeric checker when some `|a_i| >= 1`.
    pub outside_poincare_domain: bool,
}

/// Calls `visit` with every multi-index of length `d` and total `order`, in descending lex order.
pub fn for_each_multi_index(d: usize, order: u32, mut visit: impl FnMut(&[u32])) {
    fn rec(pos: usize, remaining: u32, m: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
        if pos + 1 == m.len() {
            m[pos] = remaining;
            visit(m);
            return;
        }
        for e in (0..=remaining).rev() {
            m[pos] = e;
            rec(pos + 1, remaining - e, m, visit);
        }
        m[pos] = 0;
    }
    if d == 0 {
        return;
    }
    let mut m = vec![0; d];
    rec(0, order, &mut m, &mut visit);
}

fn scan(d: usize, max_order: u32, mut is_witness: impl FnMut(usize, &[u32]) -> bool) -> (Vec<Witness>, usize) {
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for order in 2..=max_order {
        for_each_multi_index(d, order, |m| {
            for i in 0..d {
                checked += 1;
                if is_witness(i, m) {
                    witnesses.push(Witness { target: i, multi_index: m.to_vec() });
                }
            }
        });
    }
    (witnesses, checked)
}

/// Exact check over formal parameters: a witness needs equal signs and equal exponent vectors.
pub fn check_resonance_symbolic(eigs: &[EigenSymbol], max_order: u32) -> ResonanceReport {
    let d = eigs.len();
    let (witnesses, checked) = scan(d, max_order, |i, m| {
        let dim = eigs[i].dim();
        let product = m
            .iter()
            .zip(eigs)
            .fold(EigenSymbol::one(dim), |acc, (&e, s)| acc.mul(&s.pow(e)));
        product == eigs[i]
    });
    ResonanceReport {
        resonant: !witnesses.is_empty(),
        witnesses,
        max_order,
        checked,
        outside_poincare_domain: false,
    }
}

/// `prod_j alphas[j]^m[j]`.
pub fn monomial_value(alphas: &[Complex64], m: &[u32]) -> Complex64 {
    m.iter()
        .zip(alphas)
        .fold(Complex64::new(1.0, 0.0), |acc, (&e, a)| acc * a.powu(e))
}

/// Flags `(i, m)` with `|a_i - a^m| < tol`.
pub fn check_resonance_numeric(alphas: &[Complex64], max_order: u32, tol: f64) -> ResonanceReport {
    let (witnesses, checked) =
        scan(alphas.len(), max_order, |i, m| (alphas[i] - monomial_value(alphas, m)).norm() < tol);
    ResonanceReport {
        resonant: !witnesses.is_empty(),
        witnesses,
        max_order,
        checked,
        outside_poincare_domain: alphas.iter().any(|a| a.norm() >= 1.0),
    }
}
