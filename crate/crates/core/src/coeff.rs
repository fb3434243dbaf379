//! Coefficient fields for [`Polynomial`](crate::Polynomial).
//!
//! Two fields are supported: exact rationals backed by `BigRational` and
//! double precision complex numbers. A polynomial is generic over its field,
//! so mixing fields inside one polynomial is a type error.

use alloc::format;
use alloc::string::String;
use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Field operations needed by the polynomial engine.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + 'static
{
    /// `true` when arithmetic in this field is exact.
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    fn to_complex(&self) -> Complex64;

    /// Absolute value (modulus) as a float.
    fn modulus(&self) -> f64;

    /// Splits off a leading minus sign for rendering: `(negative, |self|)`.
    /// Fields without an order return `(false, self)`.
    fn sign_split(&self) -> (bool, Self);

    /// Canonical text of a single coefficient.
    fn render(&self) -> String;

    /// `lo < self < hi` for real values; non-real values are never inside.
    fn in_open_interval(&self, lo: &Rational, hi: &Rational) -> bool;

    /// `true` when the rendered coefficient needs parentheses inside a product.
    fn needs_parens() -> bool {
        false
    }

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    /// `self * other` without consuming either operand.
    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    /// `*self = *self + other`.
    fn add_assign_owned(&mut self, other: Self) {
        let v = core::mem::replace(self, Self::zero());
        *self = v + other;
    }

    fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Coefficient for Rational {
    const EXACT: bool = true;

    fn mul_ref(&self, other: &Self) -> Self {
        // Integer fast path: skips the cross-cancellation gcds.
        if self.denom().is_one() && other.denom().is_one() {
            return Rational::new_raw(self.numer() * other.numer(), BigInt::one());
        }
        self * other
    }

    fn add_assign_owned(&mut self, other: Self) {
        if self.denom().is_one() && other.denom().is_one() {
            let (n, _) = other.into_raw();
            *self = Rational::new_raw(self.numer() + n, BigInt::one());
            return;
        }
        *self += other;
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn modulus(&self) -> f64 {
        rational_to_f64(&self.abs())
    }

    fn sign_split(&self) -> (bool, Self) {
        if self.is_negative() {
            (true, -self.clone())
        } else {
            (false, self.clone())
        }
    }

    fn in_open_interval(&self, lo: &Rational, hi: &Rational) -> bool {
        lo < self && self < hi
    }

    fn render(&self) -> String {
        if self.denom().is_one() {
            format!("{}", self.numer())
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl Coefficient for Complex64 {
    const EXACT: bool = false;

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_assign_owned(&mut self, other: Self) {
        *self += other;
    }

    fn from_rational(r: &Rational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn sign_split(&self) -> (bool, Self) {
        (false, *self)
    }

    fn in_open_interval(&self, lo: &Rational, hi: &Rational) -> bool {
        self.im == 0.0 && rational_to_f64(lo) < self.re && self.re < rational_to_f64(hi)
    }

    fn render(&self) -> String {
        render_complex(*self)
    }

    fn needs_parens() -> bool {
        true
    }
}

/// Renders `a+bi` with shortest round-trip decimals.
pub fn render_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", clean_zero(z.re), sign, clean_zero(z.im.abs()))
}

fn clean_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// Nearest double to an exact rational. Handles huge numerators and
/// denominators that individually overflow `f64`.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    // Fall back to scaling by powers of two.
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    let (n2, d2) = if shift > 0 {
        (n.clone(), d.clone() << (shift as usize))
    } else {
        (n.clone() << ((-shift) as usize), d.clone())
    };
    // n2/d2 is within [1/2, 2); 64 extra bits keep full double precision.
    let scaled = (n2 << 64usize) / d2;
    let m = scaled.to_f64().unwrap_or(0.0);
    (m * libm::exp2(-64.0)) * libm::exp2(shift as f64)
}

/// Parses `n` or `n/d` into a rational. Returns `None` on malformed input or zero denominator.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Shorthand for a small rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced_with_positive_denominator() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(r.render(), "-3/2");
        assert_eq!(rat(4, 2).render(), "2");
    }

    #[test]
    fn parse_rational_accepts_integer_and_fraction() {
        assert_eq!(parse_rational("1/3"), Some(rat(1, 3)));
        assert_eq!(parse_rational("-7"), Some(rat(-7, 1)));
        assert_eq!(parse_rational("2/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn huge_rationals_convert_to_f64() {
        let big = num_traits::pow(BigInt::from(5), 2000);
        let r = Rational::new(BigInt::from(3), big.clone());
        assert_eq!(rational_to_f64(&r), 0.0);
        let r = Rational::new(big.clone() * BigInt::from(3), big * BigInt::from(4));
        assert_eq!(rational_to_f64(&r), 0.75);
        let tiny = Rational::new(BigInt::from(1), num_traits::pow(BigInt::from(2), 1030));
        assert!(rational_to_f64(&tiny) > 0.0);
    }

    #[test]
    fn complex_render_is_stable() {
        assert_eq!(render_complex(Complex64::new(0.5, -2.0)), "0.5-2i");
        assert_eq!(render_complex(Complex64::new(-0.0, 0.0)), "0+0i");
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(rat(2, 3).pow(5), rat(32, 243));
        assert_eq!(rat(2, 3).pow(0), rat(1, 1));
    }
}
