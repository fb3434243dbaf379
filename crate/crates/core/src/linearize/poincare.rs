//! Truncated Poincaré–Dulac linearization.
//!
//! In eigencoordinates `w = S^-1 x` the map reads `g(w) = L w + h.o.t.` with
//! `L = diag(a_1, ..., a_d)`. We look for `V = id + v_2 + ... + v_N` with
//! `V o g = L o V` up to order `N`. The coefficient of `w^m` in `v_i` solves
//!
//! ```text
//! (a_i - a^m) c = [V_<k o g - L o V_<k]_(i, m),      |m| = k,
//! ```
//!
//! which is solvable exactly when the spectrum is non-resonant. The published
//! conjugator in original coordinates is `U = S o V o S^-1`, so that
//! `U o f = (S L S^-1) o U`.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::jet::TruncatedMap;
use super::resonance::{check_resonance_numeric, for_each_multi_index, monomial_value};
use super::LinearizeError;
use crate::coeff::Coefficient;
use crate::dynamics::{sample_points, Norm};
use crate::linalg::eigen_decompose;
use crate::map::PolyMap;
use crate::monomial::Monomial;
use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearizeConfig {
    /// Truncation order `N`.
    pub order: u32,
    /// Residual tolerance.
    pub tol: f64,
    /// Numeric resonance guard.
    pub resonance_tol: f64,
}

impl Default for LinearizeConfig {
    fn default() -> Self {
        Self { order: 8, tol: 1e-9, resonance_tol: 1e-10 }
    }
}

#[derive(Clone, Debug)]
pub struct LinearizationResult {
    /// `U = S o V o S^-1` in original coordinates.
    pub u: TruncatedMap,
    /// `N`-jet of `U^-1` in original coordinates.
    pub u_inverse: TruncatedMap,
    /// `V` in eigencoordinates.
    pub u_eigen: TruncatedMap,
    /// The map in eigencoordinates, `S^-1 o f o S`.
    pub f_eigen: TruncatedMap,
    /// Diagonal of `L`.
    pub eigenvalues: Vec<Complex64>,
    /// `S`, eigenvectors as columns.
    pub eigenbasis: DMatrix<Complex64>,
    pub eigenbasis_inverse: DMatrix<Complex64>,
    /// Largest coefficient of `V o g - L o V` up to order `N`.
    pub residual: f64,
    /// Largest coefficient of `V^-1 o V - id` up to order `N`.
    pub inverse_residual: f64,
    /// `min |a^m - a_i|` over all `(i, m)` with `2 <= |m| <= N`.
    pub min_denominator: f64,
    /// Order `|m|` at which `min_denominator` is attained.
    pub min_denominator_order: u32,
    /// Smallest denominator at each order `2..=N`.
    pub denominators_by_order: Vec<(u32, f64)>,
}

impl LinearizationResult {
    pub fn order(&self) -> u32 {
        self.u.order()
    }

    /// `S L^n S^-1 y`.
    pub fn linear_power_apply(&self, n: u32, y: &[Complex64]) -> Vec<Complex64> {
        let d = y.len();
        let w = &self.eigenbasis_inverse * nalgebra::DVector::from_column_slice(y);
        let scaled = nalgebra::DVector::from_fn(d, |i, _| w[i] * self.eigenvalues[i].powu(n));
        (&self.eigenbasis * scaled).iter().copied().collect()
    }
}

fn to_polys<C: Coefficient>(f: &PolyMap<C>) -> Vec<Polynomial<Complex64>> {
    f.components().iter().map(Polynomial::to_complex).collect()
}

/// `S^-1 o f o S` as an `order`-jet.
pub fn to_eigencoordinates<C: Coefficient>(
    f: &PolyMap<C>,
    s: &DMatrix<Complex64>,
    s_inv: &DMatrix<Complex64>,
    order: u32,
) -> TruncatedMap {
    let f_jet = TruncatedMap::new(to_polys(f), order);
    f_jet.compose(&TruncatedMap::linear(s, order)).left_linear(s_inv)
}

/// `V o g - L o V` truncated at `order`.
fn conjugacy_defect(v: &TruncatedMap, g: &TruncatedMap, alphas: &[Complex64], order: u32) -> TruncatedMap {
    let lhs = v.compose_to(g, order);
    let rhs: Vec<Polynomial<Complex64>> =
        v.components().iter().zip(alphas).map(|(p, a)| p.truncate(order).scale(a)).collect();
    lhs.sub(&TruncatedMap::new(rhs, order))
}

/// Order-by-order inverse of a jet whose linear part is the identity.
fn invert_jet(v: &TruncatedMap) -> TruncatedMap {
    let d = v.dim();
    let n = v.order();
    let mut inv = TruncatedMap::identity(d, n);
    for k in 2..=n {
        let defect = v.compose_to(&inv, k);
        for (i, part) in defect.homogeneous_part(k).into_iter().enumerate() {
            let slot = &mut inv.components_mut()[i];
            *slot = &*slot - &part;
        }
    }
    TruncatedMap::new(inv.components().to_vec(), n)
}

/// Computes the `N`-jet of the linearizing conjugator of `f` at its fixed origin.
pub fn poincare_dulac<C: Coefficient>(
    f: &PolyMap<C>,
    config: &LinearizeConfig,
) -> Result<LinearizationResult, LinearizeError> {
    let n = config.order;
    if n < 1 {
        return Err(LinearizeError::Parameter("truncation order must be at least 1".into()));
    }
    let linear: Vec<Vec<Complex64>> = f
        .linear_part()?
        .iter()
        .map(|row| row.iter().map(Coefficient::to_complex).collect())
        .collect();
    let eig = eigen_decompose(&linear)?;
    let alphas = eig.values.clone();
    if let Some(a) = alphas.iter().find(|a| a.norm() >= 1.0) {
        return Err(LinearizeError::OutsidePoincareDomain { modulus: a.norm() });
    }
    let resonance = check_resonance_numeric(&alphas, n.max(2), config.resonance_tol);
    if resonance.resonant {
        return Err(LinearizeError::Resonance(resonance));
    }

    let d = f.dim();
    let g = to_eigencoordinates(f, &eig.vectors, &eig.inverse, n);
    let mut v = TruncatedMap::identity(d, n);
    let mut denominators_by_order = Vec::new();
    let (mut min_denominator, mut min_denominator_order) = (f64::INFINITY, 0);

    for k in 2..=n {
        let mut order_min = f64::INFINITY;
        for_each_multi_index(d, k, |m| {
            let am = monomial_value(&alphas, m);
            for a in &alphas {
                order_min = order_min.min((am - a).norm());
            }
        });
        denominators_by_order.push((k, order_min));
        if order_min < min_denominator {
            min_denominator = order_min;
            min_denominator_order = k;
        }

        let defect = conjugacy_defect(&v, &g, &alphas, k);
        for (i, part) in defect.homogeneous_part(k).into_iter().enumerate() {
            let mut correction = Polynomial::zero(d);
            for (m, known) in part.terms() {
                let am = monomial_value(&alphas, m.exponents());
                let coeff = *known / (alphas[i] - am);
                correction = &correction + &Polynomial::from_terms(d, [(m.exponents().to_vec(), coeff)]);
            }
            let slot = &mut v.components_mut()[i];
            *slot = &*slot + &correction;
        }
    }

    let residual = conjugacy_defect(&v, &g, &alphas, n).max_coefficient_modulus();
    let v_inv = invert_jet(&v);
    let inverse_residual = v_inv.compose(&v).sub(&TruncatedMap::identity(d, n)).max_coefficient_modulus();
    if residual.is_nan() || residual >= config.tol {
        return Err(LinearizeError::Convergence { residual });
    }

    let s_jet = TruncatedMap::linear(&eig.inverse, n);
    let u = v.compose(&s_jet).left_linear(&eig.vectors);
    let u_inverse = v_inv.compose(&s_jet).left_linear(&eig.vectors);
    Ok(LinearizationResult {
        u,
        u_inverse,
        u_eigen: v,
        f_eigen: g,
        eigenvalues: alphas,
        eigenbasis: eig.vectors,
        eigenbasis_inverse: eig.inverse,
        residual,
        inverse_residual,
        min_denominator,
        min_denominator_order,
        denominators_by_order,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub samples: usize,
    pub radius: f64,
    pub n_max: u32,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { samples: 20, radius: 0.1, n_max: 20, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    /// `max_x max_(n <= n_max) |U(f^n(x)) - S L^n S^-1 U(x)|_sup`.
    pub max_deviation: f64,
    /// Per-sample maximum over `n`, indexed by sample number.
    pub per_sample: Vec<f64>,
    /// Residual recomputed from `f` and the published eigenbasis.
    pub residual: f64,
    /// Degree-one part of `U` equals the identity within `1e-12`.
    pub linear_part_is_identity: bool,
}

/// Dynamic check of the conjugacy on seeded orbits near the origin.
pub fn verify_linearization<C: Coefficient>(
    f: &PolyMap<C>,
    result: &LinearizationResult,
    config: &VerifyConfig,
) -> VerifyReport {
    let d = f.dim();
    let fc = f.to_complex();
    let n = result.order();
    let g = to_eigencoordinates(f, &result.eigenbasis, &result.eigenbasis_inverse, n);
    let residual = conjugacy_defect(&result.u_eigen, &g, &result.eigenvalues, n).max_coefficient_modulus();

    let linear_part_is_identity = [&result.u, &result.u_eigen].iter().all(|jet| {
        jet.components().iter().enumerate().all(|(i, p)| {
            (0..d).all(|j| {
                let want = if i == j { 1.0 } else { 0.0 };
                (p.coefficient(&Monomial::var(d, j)) - Complex64::new(want, 0.0)).norm() < 1e-12
            })
        })
    });

    let per_sample: Vec<f64> = sample_points(config.seed, config.samples, config.radius, d)
        .iter()
        .map(|x0| {
            let ux0 = result.u.apply(x0);
            let mut x = x0.clone();
            let mut worst: f64 = 0.0;
            for step in 0..=config.n_max {
                if step > 0 {
                    x = fc.apply(&x).expect("dimension matches");
                }
                let lhs = result.u.apply(&x);
                let rhs = result.linear_power_apply(step, &ux0);
                let diff: Vec<Complex64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
                worst = worst.max(Norm::Sup.eval(&diff));
            }
            worst
        })
        .collect();
    VerifyReport {
        max_deviation: per_sample.iter().copied().fold(0.0, f64::max),
        per_sample,
        residual,
        linear_part_is_identity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, Rational};
    use crate::families::{make_gamma3, RangeCheck};
    use alloc::vec;

    fn gamma() -> PolyMap<Rational> {
        make_gamma3(&[rat(1, 3), rat(1, 4), rat(1, 5)], RangeCheck::Strict).unwrap()
    }

    #[test]
    fn one_dimensional_second_order_coefficient() {
        // f(x) = x/2 + x^2: the order-2 equation gives u_2 = 1 / (1/2 - 1/4) = 4.
        let f = PolyMap::new(vec![Polynomial::from_terms(1, [(vec![1], rat(1, 2)), (vec![2], rat(1, 1))])]).unwrap();
        let r = poincare_dulac(&f, &LinearizeConfig::default()).unwrap();
        let u2 = r.u.components()[0].coefficient(&Monomial::new(vec![2]));
        assert!((u2 - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        // Brute-force check: U(f(x)) - U(x)/2 has no x^2 term.
        let u_jet = TruncatedMap::new(vec![r.u.components()[0].truncate(2)], 2);
        let f_jet = TruncatedMap::new(vec![f.components()[0].to_complex()], 2);
        let lhs = u_jet.compose(&f_jet).components()[0].clone();
        let rhs = u_jet.components()[0].scale(&Complex64::new(0.5, 0.0));
        assert!((&lhs - &rhs).coefficient(&Monomial::new(vec![2])).norm() < 1e-12);
    }

    #[test]
    fn linear_map_gives_identity() {
        let f = PolyMap::linear(&[vec![rat(1, 2), rat(1, 5)], vec![rat(0, 1), rat(1, 3)]]).unwrap();
        let r = poincare_dulac(&f, &LinearizeConfig::default()).unwrap();
        assert!(r.residual < 1e-14);
        for (i, p) in r.u.components().iter().enumerate() {
            let id = Polynomial::<Complex64>::var(2, i);
            assert!((p - &id).max_coefficient_modulus() < 1e-14);
        }
        let v = verify_linearization(&f, &r, &VerifyConfig { radius: 5.0, ..Default::default() });
        assert!(v.max_deviation < 1e-12, "{}", v.max_deviation);
    }

    #[test]
    fn gamma_linearizes_to_order_eight() {
        let g = gamma();
        let r = poincare_dulac(&g, &LinearizeConfig::default()).unwrap();
        assert!(r.residual < 1e-9);
        assert!(r.inverse_residual < 1e-8);
        assert_eq!(r.u.order(), 8);
        let v = verify_linearization(&g, &r, &VerifyConfig::default());
        assert!(v.linear_part_is_identity);
        assert!(v.max_deviation < 1e-6, "{}", v.max_deviation);
        assert!(v.residual < 1e-9);
        // Origin stays exactly fixed.
        let zero = vec![Complex64::new(0.0, 0.0); 3];
        assert_eq!(r.u.apply(&zero), zero);
    }

    #[test]
    fn denominators_are_smallest_at_low_order() {
        let r = poincare_dulac(&gamma(), &LinearizeConfig::default()).unwrap();
        assert!(r.min_denominator > 0.0);
        assert!(r.min_denominator_order <= 3, "{:?}", r.denominators_by_order);
    }

    #[test]
    fn resonant_and_expanding_spectra_are_rejected() {
        let res = PolyMap::new(vec![
            Polynomial::from_terms(2, [(vec![1, 0], rat(1, 2)), (vec![0, 2], rat(1, 1))]),
            Polynomial::from_terms(2, [(vec![0, 1], rat(1, 4)), (vec![2, 0], rat(1, 1))]),
        ])
        .unwrap();
        match poincare_dulac(&res, &LinearizeConfig::default()) {
            Err(LinearizeError::Resonance(report)) => assert!(report.resonant),
            other => panic!("expected resonance error, got {other:?}"),
        }
        let expanding = PolyMap::linear(&[vec![rat(2, 1)]]).unwrap();
        assert!(matches!(
            poincare_dulac(&expanding, &LinearizeConfig::default()),
            Err(LinearizeError::OutsidePoincareDomain { .. })
        ));
        let jordan = PolyMap::linear(&[vec![rat(1, 2), rat(1, 1)], vec![rat(0, 1), rat(1, 2)]]).unwrap();
        assert!(matches!(poincare_dulac(&jordan, &LinearizeConfig::default()), Err(LinearizeError::Eigen(_))));
        let shifted = PolyMap::affine(&[vec![rat(1, 2)]], &[rat(1, 1)]).unwrap();
        assert!(matches!(poincare_dulac(&shifted, &LinearizeConfig::default()), Err(LinearizeError::Map(_))));
    }

    #[test]
    fn result_is_deterministic() {
        let a = poincare_dulac(&gamma(), &LinearizeConfig::default()).unwrap();
        let b = poincare_dulac(&gamma(), &LinearizeConfig::default()).unwrap();
        assert_eq!(a.u, b.u);
        assert_eq!(a.residual.to_bits(), b.residual.to_bits());
    }
}
