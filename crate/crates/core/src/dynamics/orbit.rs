use alloc::vec::Vec;

use thiserror::Error;

use super::norm::Norm;
use crate::coeff::Coefficient;
use crate::map::{MapError, PolyMap};
use crate::poly::PolyError;

/// Orbits whose norm exceeds this value are reported as divergent.
pub const DIVERGENCE_CUTOFF: f64 = 1e30;

/// `x_0, f(x_0), f^2(x_0), ...` with the norm of every point.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbit<C> {
    pub points: Vec<Vec<C>>,
    pub norms: Vec<f64>,
}

impl<C: Coefficient> Orbit<C> {
    pub fn start(&self) -> &[C] {
        &self.points[0]
    }

    /// Number of map applications performed.
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    /// Re-evaluates `f` along the orbit and reports the first step that disagrees.
    pub fn first_inconsistency(&self, f: &PolyMap<C>) -> Option<usize> {
        (0..self.steps()).find(|&k| f.apply(&self.points[k]).ok().as_deref() != Some(&self.points[k + 1][..]))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError<C: core::fmt::Debug> {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("orbit diverged at step {step} (norm {norm:e})")]
    Divergence { step: usize, norm: f64, partial: Orbit<C> },
}

/// Iterates `f` by repeated evaluation for `n_max` steps.
pub fn orbit<C: Coefficient>(
    f: &PolyMap<C>,
    x0: &[C],
    n_max: usize,
    norm: &Norm,
) -> Result<Orbit<C>, OrbitError<C>> {
    if x0.len() != f.dim() {
        return Err(MapError::from(PolyError::Arity { expected: f.dim(), found: x0.len() }).into());
    }
    let mut points = Vec::with_capacity(n_max + 1);
    let mut norms = Vec::with_capacity(n_max + 1);
    points.push(x0.to_vec());
    norms.push(norm.eval(x0));
    for step in 1..=n_max {
        let next = f.apply(&points[step - 1])?;
        let value = norm.eval(&next);
        points.push(next);
        norms.push(value);
        if value.is_nan() || value > DIVERGENCE_CUTOFF {
            return Err(OrbitError::Divergence { step, norm: value, partial: Orbit { points, norms } });
        }
    }
    Ok(Orbit { points, norms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, Rational};
    use crate::families::{make_gamma3, RangeCheck};
    use crate::iterate::IterateCache;
    use alloc::vec;
    use num_complex::Complex64;

    fn gamma() -> PolyMap<Rational> {
        make_gamma3(&[rat(1, 3), rat(1, 4), rat(1, 5)], RangeCheck::Strict).unwrap()
    }

    #[test]
    fn z_coordinate_is_geometric() {
        let z0 = rat(7, 3);
        let orb = orbit(&gamma(), &[rat(0, 1), rat(0, 1), z0.clone()], 30, &Norm::Sup).unwrap();
        for (n, p) in orb.points.iter().enumerate() {
            assert_eq!(p[2], z0.clone() * Coefficient::pow(&rat(1, 5), n as u32));
        }
        assert_eq!(orb.first_inconsistency(&gamma()), None);
    }

    #[test]
    fn origin_is_fixed() {
        let orb = orbit(&gamma(), &[rat(0, 1), rat(0, 1), rat(0, 1)], 10, &Norm::Sup).unwrap();
        assert!(orb.points.iter().all(|p| p.iter().all(num_traits::Zero::is_zero)));
    }

    #[test]
    fn exact_orbit_from_ones_decays_below_1e9() {
        let orb = orbit(&gamma(), &[rat(1, 1), rat(1, 1), rat(1, 1)], 200, &Norm::Sup).unwrap();
        let first = orb.norms.iter().position(|&v| v < 1e-9).expect("reaches 1e-9");
        assert!(first <= 200);
        assert!(orb.norms[200] < 1e-9);
    }

    #[test]
    fn symbolic_iterates_agree_with_orbits() {
        let g = gamma();
        let x0 = [rat(3, 2), rat(-1, 7), rat(5, 1)];
        let orb = orbit(&g, &x0, 6, &Norm::Sup).unwrap();
        let mut cache = IterateCache::new(g);
        for n in 1..=6 {
            assert_eq!(cache.get(n).unwrap().apply(&x0).unwrap(), orb.points[n as usize]);
        }
    }

    #[test]
    fn divergence_is_detected_with_partial_orbit() {
        let m = PolyMap::linear(&[vec![Complex64::new(1e7, 0.0)]]).unwrap();
        let err = orbit(&m, &[Complex64::new(1.0, 0.0)], 20, &Norm::Sup).unwrap_err();
        match err {
            OrbitError::Divergence { step, partial, .. } => {
                assert_eq!(step, 5);
                assert_eq!(partial.points.len(), 6);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
