//! Sparse multivariate polynomials in canonical form.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::coeff::Coefficient;
use crate::monomial::Monomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },
    #[error("expected {expected} arguments, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("variable index {index} out of range for dimension {dim}")]
    Index { index: usize, dim: usize },
}

/// A polynomial in `dim` variables stored as a map from monomials to nonzero coefficients.
///
/// Terms live in a `BTreeMap` keyed by graded-lex order, so structural
/// equality coincides with mathematical equality.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<C> {
    dim: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Polynomial<C> {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, C::one())
    }

    pub fn constant(dim: usize, c: C) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(Monomial::one(dim), c);
        p
    }

    /// The coordinate function `x_var` (zero-based index).
    pub fn var(dim: usize, var: usize) -> Self {
        assert!(var < dim, "variable {var} out of range for dimension {dim}");
        let mut p = Self::zero(dim);
        p.terms.insert(Monomial::var(dim, var), C::one());
        p
    }

    /// `c * x_var`.
    pub fn scaled_var(dim: usize, var: usize, c: C) -> Self {
        Self::var(dim, var).scale(&c)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut p = Self::zero(dim);
        for (exps, c) in terms {
            assert_eq!(exps.len(), dim, "exponent vector length must equal dimension");
            p.add_term(Monomial::new(exps), c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coefficient(&Monomial::one(self.dim))
    }

    /// Maximum total degree over stored terms; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        // BTreeMap is ordered by total degree first, so the last key is maximal.
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    /// Lowest total degree among stored terms, `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_owned(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<(), PolyError> {
        if self.dim != other.dim {
            return Err(PolyError::Dimension { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_dim(other)?;
        Ok(self.mul_truncated(other, None))
    }

    /// Product keeping only terms of total degree `<= max_degree` when given.
    pub fn mul_truncated(&self, other: &Self, max_degree: Option<u32>) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if let Some(limit) = max_degree {
                    // `other` is ascending in degree: nothing later fits either.
                    if da + mb.degree() > limit {
                        break;
                    }
                }
                out.add_term(ma.mul(mb), ca.mul_ref(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let mut out = Self::zero(self.dim);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.mul_ref(c));
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        self.pow_truncated(exp, None)
    }

    pub fn pow_truncated(&self, mut exp: u32, max_degree: Option<u32>) -> Self {
        let mut base = self.truncate_opt(max_degree);
        let mut acc = Self::one(self.dim).truncate_opt(max_degree);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_truncated(&base, max_degree);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_truncated(&base, max_degree);
            }
        }
        acc
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() <= max_degree)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Self { dim: self.dim, terms }
    }

    fn truncate_opt(&self, max_degree: Option<u32>) -> Self {
        match max_degree {
            Some(n) => self.truncate(n),
            None => self.clone(),
        }
    }

    /// The homogeneous component of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == k)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Self { dim: self.dim, terms }
    }

    /// Substitutes `x_i -> subs[i]`, expanding into the common dimension of `subs`.
    pub fn compose(&self, subs: &[Polynomial<C>]) -> Result<Self, PolyError> {
        self.compose_truncated(subs, None)
    }

    /// Composition that discards terms above `max_degree` at every intermediate product.
    pub fn compose_truncated(
        &self,
        subs: &[Polynomial<C>],
        max_degree: Option<u32>,
    ) -> Result<Self, PolyError> {
        if subs.len() != self.dim {
            return Err(PolyError::Arity { expected: self.dim, found: subs.len() });
        }
        let Some(target_dim) = subs.first().map(Polynomial::dim) else {
            // Zero-dimensional polynomials are constants.
            return Ok(self.clone());
        };
        if let Some(bad) = subs.iter().find(|s| s.dim != target_dim) {
            return Err(PolyError::Dimension { left: target_dim, right: bad.dim });
        }
        let mut powers = PowerCache::new(subs, max_degree);
        let mut out = Polynomial::zero(target_dim);
        for (m, c) in &self.terms {
            let mut product: Option<Polynomial<C>> = None;
            for (var, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = powers.get(var, e);
                product = Some(match product {
                    None => factor.clone(),
                    Some(acc) => acc.mul_truncated(factor, max_degree),
                });
            }
            let term = match product {
                None => Polynomial::constant(target_dim, c.clone()),
                Some(p) => p.scale(c),
            };
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Formal partial derivative with respect to `x_var` (zero-based index).
    pub fn differentiate(&self, var: usize) -> Result<Self, PolyError> {
        if var >= self.dim {
            return Err(PolyError::Index { index: var, dim: self.dim });
        }
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.exponents()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] -= 1;
            out.add_term(Monomial::new(exps), c.clone() * C::from_i64(i64::from(e)));
        }
        Ok(out)
    }

    /// Evaluates at `point`; exact fields give exact results.
    pub fn evaluate(&self, point: &[C]) -> Result<C, PolyError> {
        if point.len() != self.dim {
            return Err(PolyError::Arity { expected: self.dim, found: point.len() });
        }
        let mut powers: Vec<Vec<C>> = point.iter().map(|v| vec![C::one(), v.clone()]).collect();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (var, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[var];
                while table.len() <= e as usize {
                    let next = table[table.len() - 1].clone() * point[var].clone();
                    table.push(next);
                }
                term = term * table[e as usize].clone();
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn to_complex(&self) -> Polynomial<Complex64> {
        self.map_coefficients(Coefficient::to_complex)
    }

    /// Largest coefficient modulus, 0 for the zero polynomial.
    pub fn max_coefficient_modulus(&self) -> f64 {
        self.terms.values().map(Coefficient::modulus).fold(0.0, f64::max)
    }

    /// Canonical text with variables `x1..xd`, highest graded-lex term first.
    pub fn render(&self) -> String {
        let names: Vec<String> = (1..=self.dim).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.render_with(&refs)
    }

    /// Canonical text with caller-supplied variable names.
    pub fn render_with(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.dim, "one name per variable");
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (negative, magnitude) = c.sign_split();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let coeff = magnitude.render();
            let coeff = if C::needs_parens() { format!("({coeff})") } else { coeff };
            if m.is_one() {
                out.push_str(&coeff);
            } else if magnitude.is_one() {
                out.push_str(&m.render(names));
            } else {
                out.push_str(&coeff);
                out.push('*');
                out.push_str(&m.render(names));
            }
        }
        out
    }
}

/// Memoized powers `subs[var]^k`, built by repeated squaring from cached lower powers.
struct PowerCache<'a, C> {
    base: &'a [Polynomial<C>],
    max_degree: Option<u32>,
    powers: Vec<BTreeMap<u32, Polynomial<C>>>,
}

impl<'a, C: Coefficient> PowerCache<'a, C> {
    fn new(base: &'a [Polynomial<C>], max_degree: Option<u32>) -> Self {
        Self { base, max_degree, powers: vec![BTreeMap::new(); base.len()] }
    }

    fn get(&mut self, var: usize, k: u32) -> &Polynomial<C> {
        self.ensure(var, k);
        &self.powers[var][&k]
    }

    fn ensure(&mut self, var: usize, k: u32) {
        if self.powers[var].contains_key(&k) {
            return;
        }
        let value = if k == 1 {
            match self.max_degree {
                Some(n) => self.base[var].truncate(n),
                None => self.base[var].clone(),
            }
        } else {
            let half = k / 2;
            self.ensure(var, half);
            let h = &self.powers[var][&half];
            let mut sq = h.mul_truncated(h, self.max_degree);
            if k % 2 == 1 {
                self.ensure(var, 1);
                sq = sq.mul_truncated(&self.powers[var][&1], self.max_degree);
            }
            sq
        };
        self.powers[var].insert(k, value);
    }
}

impl<C: Coefficient> Add for &Polynomial<C> {
    type Output = Polynomial<C>;

    /// Panics on dimension mismatch; use [`Polynomial::checked_add`] to handle it.
    fn add(self, rhs: Self) -> Polynomial<C> {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<C: Coefficient> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn sub(self, rhs: Self) -> Polynomial<C> {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<C: Coefficient> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn mul(self, rhs: Self) -> Polynomial<C> {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<C: Coefficient> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn neg(self) -> Polynomial<C> {
        self.scale(&-C::one())
    }
}
