use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;

/// Exponent vector `(m_1, ..., m_d)` of a monomial `x_1^m_1 ... x_d^m_d`.
///
/// Ordered graded-lexicographically: first by total degree, then
/// lexicographically with `x_1 > x_2 > ... > x_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    // Cached total degree; compared first on every ordered-map probe.
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self { degree: exps.iter().sum(), exps }
    }

    pub fn one(dim: usize) -> Self {
        Self { degree: 0, exps: vec![0; dim] }
    }

    /// The monomial `x_var` (zero-based index).
    pub fn var(dim: usize, var: usize) -> Self {
        let mut exps = vec![0; dim];
        exps[var] = 1;
        Self { degree: 1, exps }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.dim(), other.dim());
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// Renders `x1^2*x3`; the empty product renders as `1`.
    pub fn render(&self, names: &[&str]) -> String {
        let mut out = String::new();
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(names[i]);
            if e > 1 {
                let _ = write!(out, "^{e}");
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let x2 = Monomial::new(vec![2, 0]);
        let xy = Monomial::new(vec![1, 1]);
        let y2 = Monomial::new(vec![0, 2]);
        let x = Monomial::new(vec![1, 0]);
        assert!(x2 > xy && xy > y2 && y2 > x);
        assert!(x > Monomial::one(2));
    }

    #[test]
    fn render_skips_zero_exponents() {
        let m = Monomial::new(vec![2, 0, 1]);
        assert_eq!(m.render(&["x", "y", "z"]), "x^2*z");
        assert_eq!(Monomial::one(3).render(&["x", "y", "z"]), "1");
        assert_eq!(m.degree(), 3);
    }
}
