//! Polynomial self-maps of affine `d`-space.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use thiserror::Error;

use crate::coeff::Coefficient;
use crate::poly::{PolyError, Polynomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("map has {components} components but dimension {dim}")]
    Shape { components: usize, dim: usize },
    #[error("map does not fix the origin (component {component} has nonzero constant term)")]
    NotOriginFixed { component: usize },
    #[error("supplied inverse is not an inverse: F o F_inv differs from the identity in component {component}")]
    NotInverse { component: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("iterate {n} exceeds the term budget ({terms} > {limit})")]
    Resource { n: u32, terms: usize, limit: usize },
}

/// `x -> (P_1(x), ..., P_d(x))` with every `P_i` in the same `d` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMap<C> {
    name: Option<String>,
    components: Vec<Polynomial<C>>,
}

impl<C: Coefficient> PolyMap<C> {
    pub fn new(components: Vec<Polynomial<C>>) -> Result<Self, MapError> {
        let dim = components.len();
        if let Some(p) = components.iter().find(|p| p.dim() != dim) {
            return Err(MapError::Shape { components: dim, dim: p.dim() });
        }
        Ok(Self { name: None, components })
    }

    pub fn identity(dim: usize) -> Self {
        Self { name: Some(String::from("id")), components: (0..dim).map(|i| Polynomial::var(dim, i)).collect() }
    }

    /// The linear map `x -> A x` for a row-major `d x d` matrix.
    pub fn linear(matrix: &[Vec<C>]) -> Result<Self, MapError> {
        let dim = matrix.len();
        let mut components = Vec::with_capacity(dim);
        for row in matrix {
            if row.len() != dim {
                return Err(MapError::Shape { components: dim, dim: row.len() });
            }
            let mut p = Polynomial::zero(dim);
            for (j, a) in row.iter().enumerate() {
                p = &p + &Polynomial::scaled_var(dim, j, a.clone());
            }
            components.push(p);
        }
        Ok(Self { name: None, components })
    }

    /// The affine map `x -> A x + b`.
    pub fn affine(matrix: &[Vec<C>], shift: &[C]) -> Result<Self, MapError> {
        let lin = Self::linear(matrix)?;
        if shift.len() != lin.dim() {
            return Err(MapError::Shape { components: lin.dim(), dim: shift.len() });
        }
        let dim = lin.dim();
        let components = lin
            .components
            .iter()
            .zip(shift)
            .map(|(p, b)| p + &Polynomial::constant(dim, b.clone()))
            .collect();
        Ok(Self { name: None, components })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial<C>] {
        &self.components
    }

    /// Largest degree among the components.
    pub fn degree(&self) -> u32 {
        self.components.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn component_degrees(&self) -> Vec<u32> {
        self.components.iter().map(Polynomial::degree).collect()
    }

    pub fn num_terms(&self) -> usize {
        self.components.iter().map(Polynomial::num_terms).sum()
    }

    /// `self o inner`: substitutes `inner` into every component.
    pub fn compose(&self, inner: &PolyMap<C>) -> Result<Self, MapError> {
        if self.dim() != inner.dim() {
            return Err(PolyError::Dimension { left: self.dim(), right: inner.dim() }.into());
        }
        let components = self
            .components
            .iter()
            .map(|p| p.compose(&inner.components))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { name: None, components })
    }

    pub fn apply(&self, point: &[C]) -> Result<Vec<C>, MapError> {
        self.components.iter().map(|p| p.evaluate(point).map_err(MapError::from)).collect()
    }

    pub fn fixes_origin(&self) -> bool {
        self.components.iter().all(|p| p.constant_term().is_zero())
    }

    /// Entry `(i, j)` is `dP_i/dx_j`.
    pub fn jacobian(&self) -> JacobianMatrix<C> {
        let entries = self
            .components
            .iter()
            .map(|p| (0..self.dim()).map(|j| p.differentiate(j).expect("index < dim")).collect())
            .collect();
        JacobianMatrix { entries }
    }

    /// Coefficient matrix of the degree-one terms; requires `f(0) = 0`.
    pub fn linear_part(&self) -> Result<Vec<Vec<C>>, MapError> {
        if let Some(component) = self.components.iter().position(|p| !p.constant_term().is_zero()) {
            return Err(MapError::NotOriginFixed { component });
        }
        let dim = self.dim();
        Ok(self
            .components
            .iter()
            .map(|p| {
                (0..dim)
                    .map(|j| p.coefficient(&crate::monomial::Monomial::var(dim, j)))
                    .collect()
            })
            .collect())
    }

    /// `outer o self o outer_inv`, after checking `outer o outer_inv = id`.
    pub fn conjugate(&self, outer: &PolyMap<C>, outer_inv: &PolyMap<C>) -> Result<Self, MapError> {
        let check = outer.compose(outer_inv)?;
        let id = Self::identity(outer.dim());
        if let Some(component) =
            check.components.iter().zip(&id.components).position(|(a, b)| a != b)
        {
            return Err(MapError::NotInverse { component });
        }
        outer.compose(self)?.compose(outer_inv)
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D + Copy) -> PolyMap<D> {
        PolyMap {
            name: self.name.clone(),
            components: self.components.iter().map(|p| p.map_coefficients(f)).collect(),
        }
    }

    pub fn to_complex(&self) -> PolyMap<Complex64> {
        self.map_coefficients(Coefficient::to_complex)
    }
}

/// Symbolic Jacobian matrix of a [`PolyMap`].
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianMatrix<C> {
    entries: Vec<Vec<Polynomial<C>>>,
}

impl<C: Coefficient> JacobianMatrix<C> {
    pub fn entries(&self) -> &[Vec<Polynomial<C>>] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &Polynomial<C> {
        &self.entries[row][col]
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Exact determinant by Laplace expansion along the first row, memoized on column subsets.
    pub fn determinant(&self) -> Polynomial<C> {
        let n = self.dim();
        if n == 0 {
            return Polynomial::one(0);
        }
        let vars = self.entries[0][0].dim();
        let mut memo = alloc::collections::BTreeMap::new();
        self.minor(0, (1u64 << n) - 1, vars, &mut memo)
    }

    // Determinant of rows `row..n` restricted to the column set `cols`.
    fn minor(
        &self,
        row: usize,
        cols: u64,
        vars: usize,
        memo: &mut alloc::collections::BTreeMap<u64, Polynomial<C>>,
    ) -> Polynomial<C> {
        if cols == 0 {
            return Polynomial::one(vars);
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = Polynomial::zero(vars);
        let mut sign_positive = true;
        for col in 0..self.dim() {
            if cols & (1 << col) == 0 {
                continue;
            }
            let entry = &self.entries[row][col];
            if !entry.is_zero() {
                let sub = self.minor(row + 1, cols & !(1 << col), vars, memo);
                let term = entry * &sub;
                acc = if sign_positive { &acc + &term } else { &acc - &term };
            }
            sign_positive = !sign_positive;
        }
        memo.insert(cols, acc.clone());
        acc
    }

    /// Evaluates every entry at `point`.
    pub fn evaluate(&self, point: &[C]) -> Result<Vec<Vec<C>>, PolyError> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|p| p.evaluate(point)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, Rational};
    use crate::families::{make_gamma3, make_gamma_d, make_henon, RangeCheck};
    use alloc::vec;

    type P = Polynomial<Rational>;

    fn lambdas() -> [Rational; 3] {
        [rat(1, 3), rat(1, 4), rat(1, 5)]
    }

    #[test]
    fn compose_with_identity() {
        let g = make_gamma3(&lambdas(), RangeCheck::Strict).unwrap();
        assert_eq!(g.compose(&PolyMap::identity(3)).unwrap().components(), g.components());
        assert_eq!(PolyMap::identity(3).compose(&g).unwrap().components(), g.components());
    }

    #[test]
    fn affine_composition_stays_affine() {
        let a = PolyMap::affine(&[vec![rat(1, 2), rat(1, 1)], vec![rat(0, 1), rat(3, 1)]], &[rat(1, 1), rat(-2, 1)]).unwrap();
        let b = PolyMap::affine(&[vec![rat(2, 1), rat(0, 1)], vec![rat(1, 7), rat(1, 1)]], &[rat(0, 1), rat(5, 1)]).unwrap();
        assert!(a.compose(&b).unwrap().degree() <= 1);
    }

    #[test]
    fn gamma_squared_has_degree_three() {
        let g = make_gamma3(&lambdas(), RangeCheck::Strict).unwrap();
        assert_eq!(g.compose(&g).unwrap().degree(), 3);
    }

    #[test]
    fn jacobian_of_gamma() {
        let [l1, l2, l3] = lambdas();
        let g = make_gamma3(&lambdas(), RangeCheck::Strict).unwrap();
        let j = g.jacobian();
        let c = |v: &Rational| P::constant(3, v.clone());
        let expected = [
            [P::scaled_var(3, 2, l1.clone()), c(&l1), P::scaled_var(3, 0, l1.clone())],
            [c(&l2), P::zero(3), P::zero(3)],
            [P::zero(3), P::zero(3), c(&l3)],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (k, want) in row.iter().enumerate() {
                assert_eq!(j.entry(i, k), want, "entry ({i},{k})");
            }
        }
        let det = j.determinant();
        assert_eq!(det, P::constant(3, rat(-1, 60)));
        assert_eq!(det.degree(), 0);
    }

    #[test]
    fn jacobian_of_identity_and_gamma4() {
        let j = PolyMap::<Rational>::identity(4).jacobian();
        for i in 0..4 {
            for k in 0..4 {
                let want = if i == k { P::one(4) } else { P::zero(4) };
                assert_eq!(j.entry(i, k), &want);
            }
        }
        assert_eq!(j.determinant(), P::one(4));
        let g4 = make_gamma_d(&[rat(1, 3), rat(1, 4), rat(1, 5), rat(1, 7)], RangeCheck::Strict).unwrap();
        assert_eq!(g4.jacobian().entry(3, 3), &P::constant(4, rat(1, 7)));
    }

    #[test]
    fn henon_jacobian_determinant_is_minus_a() {
        // h(x, y) = (a y + x^2 - 3x, x)
        let a = rat(5, 2);
        let poly = P::from_terms(1, [(vec![2], rat(1, 1)), (vec![1], rat(-3, 1))]);
        let h = make_henon(a.clone(), &poly).unwrap();
        assert_eq!(h.jacobian().determinant(), P::constant(2, -a));
    }

    #[test]
    fn linear_part_examples() {
        let [l1, l2, l3] = lambdas();
        let g = make_gamma3(&lambdas(), RangeCheck::Strict).unwrap();
        let z = rat(0, 1);
        assert_eq!(
            g.linear_part().unwrap(),
            vec![vec![z.clone(), l1, z.clone()], vec![l2, z.clone(), z.clone()], vec![z.clone(), z, l3]]
        );
        let m = vec![vec![rat(2, 1), rat(-1, 3)], vec![rat(0, 1), rat(1, 9)]];
        assert_eq!(PolyMap::linear(&m).unwrap().linear_part().unwrap(), m);
        let shifted = PolyMap::affine(&m, &[rat(0, 1), rat(1, 1)]).unwrap();
        assert_eq!(shifted.linear_part(), Err(MapError::NotOriginFixed { component: 1 }));
    }

    #[test]
    fn linear_part_equals_jacobian_at_origin() {
        let g = make_gamma_d(&[rat(1, 3), rat(1, 4), rat(1, 5), rat(1, 7)], RangeCheck::Strict).unwrap();
        let zero = vec![rat(0, 1); 4];
        assert_eq!(g.jacobian().evaluate(&zero).unwrap(), g.linear_part().unwrap());
    }

    #[test]
    fn conjugation() {
        let g = make_gamma3(&lambdas(), RangeCheck::Strict).unwrap();
        let id = PolyMap::identity(3);
        assert_eq!(g.conjugate(&id, &id).unwrap().components(), g.components());
        assert_eq!(id.conjugate(&g.clone(), &g), Err(MapError::NotInverse { component: 0 }));
        // F(x, y) = (x + y^2, y), F^-1(x, y) = (x - y^2, y)
        let y2 = P::from_terms(2, [(vec![0, 2], rat(1, 1))]);
        let f = PolyMap::new(vec![&P::var(2, 0) + &y2, P::var(2, 1)]).unwrap();
        let f_inv = PolyMap::new(vec![&P::var(2, 0) - &y2, P::var(2, 1)]).unwrap();
        let ident = PolyMap::<Rational>::identity(2);
        assert_eq!(ident.conjugate(&f, &f_inv).unwrap().components(), ident.components());
    }
}
