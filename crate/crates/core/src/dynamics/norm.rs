use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::coeff::{Coefficient, Rational};

/// Norms on affine space over a normed field.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum Norm {
    /// `max_i |x_i|`
    #[default]
    Sup,
    /// `sqrt(sum_i |x_i|^2)`
    Euclidean,
    /// `max_i w_i |x_i|` with positive weights.
    WeightedSup(Vec<f64>),
}

impl Norm {
    pub fn eval<C: Coefficient>(&self, x: &[C]) -> f64 {
        match self {
            Norm::Sup => x.iter().map(Coefficient::modulus).fold(0.0, f64::max),
            Norm::Euclidean => {
                // Scale by the largest entry so huge or tiny coordinates do not overflow.
                let scale = x.iter().map(Coefficient::modulus).fold(0.0, f64::max);
                if scale == 0.0 || !scale.is_finite() {
                    return scale;
                }
                let sum: f64 = x.iter().map(|v| v.modulus() / scale).map(|r| r * r).sum();
                scale * libm::sqrt(sum)
            }
            Norm::WeightedSup(w) => {
                assert_eq!(w.len(), x.len(), "one weight per coordinate");
                x.iter().zip(w).map(|(v, w)| w * v.modulus()).fold(0.0, f64::max)
            }
        }
    }
}

/// Exact `max_i |x_i|` over the rationals.
pub fn sup_norm_exact(x: &[Rational]) -> Rational {
    x.iter().map(Signed::abs).fold(Rational::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use alloc::vec;
    use num_complex::Complex64;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn unit(rng: &mut ChaCha8Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    #[test]
    fn norm_axioms_on_random_triples() {
        let norms = [Norm::Sup, Norm::Euclidean, Norm::WeightedSup(vec![1.0, 0.5, 3.0])];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for norm in &norms {
            assert_eq!(norm.eval(&[Complex64::new(0.0, 0.0); 3]), 0.0);
            for _ in 0..1000 {
                let mut draw = || -> Vec<Complex64> {
                    (0..3).map(|_| Complex64::new(10.0 * unit(&mut rng), 10.0 * unit(&mut rng))).collect()
                };
                let (x, y) = (draw(), draw());
                let c = Complex64::new(3.0 * unit(&mut rng), unit(&mut rng));
                let cx: Vec<Complex64> = x.iter().map(|v| c * v).collect();
                let nx = norm.eval(&x);
                assert!((norm.eval(&cx) - c.norm() * nx).abs() <= 1e-12 * (1.0 + nx * c.norm()));
                let sum: Vec<Complex64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                assert!(norm.eval(&sum) <= nx + norm.eval(&y) + 1e-12);
            }
        }
    }

    #[test]
    fn exact_sup_norm() {
        assert_eq!(sup_norm_exact(&[rat(-3, 4), rat(1, 2), rat(0, 1)]), rat(3, 4));
        assert_eq!(Norm::Sup.eval(&[rat(-3, 4), rat(1, 2)]), 0.75);
        assert_eq!(Norm::Euclidean.eval(&[rat(3, 1), rat(-4, 1)]), 5.0);
    }
}
