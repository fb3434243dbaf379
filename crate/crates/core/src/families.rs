//! Constructors for the example families: the contraction `gamma_d`, Hénon maps
//! and elementary plane maps.

use alloc::format;
use alloc::vec::Vec;

use crate::coeff::{rat, Coefficient};
use crate::map::{MapError, PolyMap};
use crate::poly::Polynomial;

/// Whether constructors reject parameters outside `0 < lambda < 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RangeCheck {
    #[default]
    Strict,
    /// Accept any parameters; callers may report [`out_of_range`] themselves.
    Lenient,
}

/// Indices of parameters outside the open interval `(0, 1/2)`.
pub fn out_of_range<C: Coefficient>(lambdas: &[C]) -> Vec<usize> {
    let (lo, hi) = (rat(0, 1), rat(1, 2));
    lambdas
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.in_open_interval(&lo, &hi))
        .map(|(i, _)| i)
        .collect()
}

fn check_range<C: Coefficient>(lambdas: &[C], check: RangeCheck) -> Result<(), MapError> {
    if check == RangeCheck::Lenient {
        return Ok(());
    }
    let bad = out_of_range(lambdas);
    if let Some(&i) = bad.first() {
        return Err(MapError::Parameter(format!(
            "lambda_{} = {} is outside (0, 1/2)",
            i + 1,
            lambdas[i].render()
        )));
    }
    Ok(())
}

/// `(x, y, z) -> (l1 (y + x z), l2 x, l3 z)`.
pub fn make_gamma3<C: Coefficient>(lambdas: &[C; 3], check: RangeCheck) -> Result<PolyMap<C>, MapError> {
    make_gamma_d(lambdas, check)
}

/// `(x_1, ..., x_d) -> (l1 (x_2 + x_1 x_3), l2 x_1, l3 x_3, ..., l_d x_d)` for `d >= 3`.
pub fn make_gamma_d<C: Coefficient>(lambdas: &[C], check: RangeCheck) -> Result<PolyMap<C>, MapError> {
    let d = lambdas.len();
    if d < 3 {
        return Err(MapError::Parameter(format!("gamma_d needs d >= 3, got {d}")));
    }
    check_range(lambdas, check)?;
    let x = |i| Polynomial::<C>::var(d, i);
    let mut components = Vec::with_capacity(d);
    components.push((&x(1) + &(&x(0) * &x(2))).scale(&lambdas[0]));
    components.push(x(0).scale(&lambdas[1]));
    for (i, l) in lambdas.iter().enumerate().skip(2) {
        components.push(x(i).scale(l));
    }
    Ok(PolyMap::new(components)?.with_name(format!("gamma{d}")))
}

fn univariate_in<C: Coefficient>(p: &Polynomial<C>, var: usize) -> Result<Polynomial<C>, MapError> {
    if p.dim() != 1 {
        return Err(MapError::Parameter(format!(
            "expected a univariate polynomial, got dimension {}",
            p.dim()
        )));
    }
    Ok(p.compose(&[Polynomial::var(2, var)])?)
}

/// Hénon map `h(x, y) = (a y + P(x), x)` with `a != 0` and `deg P >= 2`.
pub fn make_henon<C: Coefficient>(a: C, p: &Polynomial<C>) -> Result<PolyMap<C>, MapError> {
    if a.is_zero() {
        return Err(MapError::Parameter("Hénon map needs a != 0".into()));
    }
    if p.degree() < 2 {
        return Err(MapError::Parameter(format!("Hénon map needs deg P >= 2, got {}", p.degree())));
    }
    let px = univariate_in(p, 0)?;
    let first = &Polynomial::scaled_var(2, 1, a) + &px;
    Ok(PolyMap::new([first, Polynomial::var(2, 0)].into())?.with_name("henon"))
}

/// Elementary map `e(x, y) = (a x + P(y), b y + c)` with `a, b != 0`.
pub fn make_elementary<C: Coefficient>(a: C, b: C, c: C, p: &Polynomial<C>) -> Result<PolyMap<C>, MapError> {
    if a.is_zero() || b.is_zero() {
        return Err(MapError::Parameter("elementary map needs a, b != 0".into()));
    }
    let py = univariate_in(p, 1)?;
    let first = &Polynomial::scaled_var(2, 0, a) + &py;
    let second = &Polynomial::scaled_var(2, 1, b) + &Polynomial::constant(2, c);
    Ok(PolyMap::new([first, second].into())?.with_name("elementary"))
}
