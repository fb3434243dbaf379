use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::LinearizeError;

/// `sign * prod_j l_j^(e_j)` over formal, algebraically independent parameters `l_j`,
/// with half-integer exponents `e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EigenSymbol {
    negative: bool,
    /// Exponents times two.
    doubled: Vec<i32>,
}

impl EigenSymbol {
    /// `sign` is `+1` or `-1`; `doubled[j]` is `2 e_j`.
    pub fn new(sign: i8, doubled: Vec<i32>) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        Self { negative: sign < 0, doubled }
    }

    /// `l_j` as a symbol in `d` parameters.
    pub fn parameter(d: usize, j: usize) -> Self {
        let mut doubled = vec![0; d];
        doubled[j] = 2;
        Self { negative: false, doubled }
    }

    pub fn one(d: usize) -> Self {
        Self { negative: false, doubled: vec![0; d] }
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn doubled_exponents(&self) -> &[i32] {
        &self.doubled
    }

    pub fn dim(&self) -> usize {
        self.doubled.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self {
            negative: self.negative != other.negative,
            doubled: self.doubled.iter().zip(&other.doubled).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        Self {
            negative: self.negative && k % 2 == 1,
            doubled: self.doubled.iter().map(|e| e * k as i32).collect(),
        }
    }

    /// Numeric value at positive real parameters.
    pub fn evaluate(&self, lambdas: &[f64]) -> f64 {
        let magnitude: f64 = self
            .doubled
            .iter()
            .zip(lambdas)
            .map(|(&e, &l)| libm::pow(l, f64::from(e) / 2.0))
            .product();
        if self.negative {
            -magnitude
        } else {
            magnitude
        }
    }

    /// `-l1^(1/2)*l2^(1/2)` style text; the unit symbol renders as `1`.
    pub fn render(&self) -> String {
        let mut factors = Vec::new();
        for (j, &e) in self.doubled.iter().enumerate() {
            match e {
                0 => {}
                2 => factors.push(format!("l{}", j + 1)),
                e if e % 2 == 0 => factors.push(format!("l{}^{}", j + 1, e / 2)),
                e => factors.push(format!("l{}^({}/2)", j + 1, e)),
            }
        }
        let body = if factors.is_empty() { String::from("1") } else { factors.join("*") };
        if self.negative {
            format!("-{body}")
        } else {
            body
        }
    }
}

/// Eigenvalues of the linear part of `gamma_d` at the origin:
/// `+sqrt(l1 l2), -sqrt(l1 l2), l3, ..., l_d`.
pub fn eigen_symbols_gamma_d(d: usize) -> Result<Vec<EigenSymbol>, LinearizeError> {
    if d < 3 {
        return Err(LinearizeError::Parameter(format!("gamma_d needs d >= 3, got {d}")));
    }
    let mut root = vec![0; d];
    root[0] = 1;
    root[1] = 1;
    let mut out = vec![EigenSymbol::new(1, root.clone()), EigenSymbol::new(-1, root)];
    out.extend((2..d).map(|j| EigenSymbol::parameter(d, j)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    #[test]
    fn gamma_symbols() {
        let s = eigen_symbols_gamma_d(3).unwrap();
        let rendered: Vec<String> = s.iter().map(EigenSymbol::render).collect();
        assert_eq!(rendered, ["l1^(1/2)*l2^(1/2)", "-l1^(1/2)*l2^(1/2)", "l3"]);
        assert_eq!(s[0].mul(&s[1]), EigenSymbol::new(-1, vec![2, 2, 0]));
        assert_eq!(s[0].mul(&s[1]).render(), "-l1*l2");
        let s5 = eigen_symbols_gamma_d(5).unwrap();
        assert_eq!(s5.len(), 5);
        for (j, sym) in s5.iter().enumerate().skip(2) {
            assert_eq!(sym, &EigenSymbol::parameter(5, j));
        }
        assert!(eigen_symbols_gamma_d(2).is_err());
    }

    #[test]
    fn numeric_values() {
        let s = eigen_symbols_gamma_d(3).unwrap();
        let l = [1.0 / 3.0, 0.25, 0.2];
        assert!((s[0].evaluate(&l) - (1.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert!((s[1].evaluate(&l) + (1.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert_eq!(s[2].evaluate(&l), 0.2);
    }

    #[test]
    fn product_and_power_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draw = |rng: &mut ChaCha8Rng| {
            let sign = if rng.next_u32().is_multiple_of(2) { 1 } else { -1 };
            EigenSymbol::new(sign, (0..4).map(|_| (rng.next_u32() % 9) as i32 - 4).collect())
        };
        for _ in 0..500 {
            let (a, b) = (draw(&mut rng), draw(&mut rng));
            let p = a.mul(&b);
            assert_eq!(p.sign(), a.sign() * b.sign());
            for j in 0..4 {
                assert_eq!(p.doubled_exponents()[j], a.doubled_exponents()[j] + b.doubled_exponents()[j]);
            }
            let k = rng.next_u32() % 6;
            let mut direct = EigenSymbol::one(4);
            for _ in 0..k {
                direct = direct.mul(&a);
            }
            assert_eq!(a.pow(k), direct);
        }
    }
}
