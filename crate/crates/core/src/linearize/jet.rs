use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::poly::Polynomial;

/// A map `C^d -> C^d` kept only up to total degree `order`.
///
/// Composition discards terms above `order` at every intermediate product, which
/// is exact for the `order`-jet as long as the inner map fixes the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedMap {
    order: u32,
    components: Vec<Polynomial<Complex64>>,
}

impl TruncatedMap {
    pub fn new(components: Vec<Polynomial<Complex64>>, order: u32) -> Self {
        let components = components.iter().map(|p| p.truncate(order)).collect();
        Self { order, components }
    }

    pub fn identity(dim: usize, order: u32) -> Self {
        Self { order, components: (0..dim).map(|i| Polynomial::var(dim, i)).collect() }
    }

    /// `x -> A x`.
    pub fn linear(a: &DMatrix<Complex64>, order: u32) -> Self {
        let dim = a.nrows();
        let components = (0..dim)
            .map(|i| {
                let mut p = Polynomial::zero(dim);
                for j in 0..dim {
                    p = &p + &Polynomial::scaled_var(dim, j, a[(i, j)]);
                }
                p
            })
            .collect();
        Self { order, components }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial<Complex64>] {
        &self.components
    }

    pub(crate) fn components_mut(&mut self) -> &mut [Polynomial<Complex64>] {
        &mut self.components
    }

    /// `self o inner`, truncated at `min(self.order, inner.order)`.
    pub fn compose(&self, inner: &TruncatedMap) -> TruncatedMap {
        self.compose_to(inner, self.order.min(inner.order))
    }

    /// `self o inner` keeping terms up to `order`.
    pub fn compose_to(&self, inner: &TruncatedMap, order: u32) -> TruncatedMap {
        let components = self
            .components
            .iter()
            .map(|p| p.compose_truncated(&inner.components, Some(order)).expect("matching dimensions"))
            .collect();
        TruncatedMap { order, components }
    }

    /// `A o self` for a constant matrix `A`.
    pub fn left_linear(&self, a: &DMatrix<Complex64>) -> TruncatedMap {
        let dim = self.dim();
        let components = (0..dim)
            .map(|i| {
                let mut p = Polynomial::zero(dim);
                for k in 0..dim {
                    if a[(i, k)] != Complex64::new(0.0, 0.0) {
                        p = &p + &self.components[k].scale(&a[(i, k)]);
                    }
                }
                p
            })
            .collect();
        TruncatedMap { order: self.order, components }
    }

    pub fn sub(&self, other: &TruncatedMap) -> TruncatedMap {
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a - b).collect();
        TruncatedMap { order: self.order.min(other.order), components }
    }

    pub fn homogeneous_part(&self, k: u32) -> Vec<Polynomial<Complex64>> {
        self.components.iter().map(|p| p.homogeneous_part(k)).collect()
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.components.iter().map(|p| p.evaluate(x).expect("point dimension matches")).collect()
    }

    pub fn max_coefficient_modulus(&self) -> f64 {
        self.components.iter().map(Polynomial::max_coefficient_modulus).fold(0.0, f64::max)
    }

    pub fn num_terms(&self) -> usize {
        self.components.iter().map(Polynomial::num_terms).sum()
    }
}
