//! Evidence that a map is a contraction: origin fixed, spectral radius of the
//! linear part below one, and sampled orbits shrinking to the origin. None of
//! this proves the property; the verdicts carry that caveat.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::norm::Norm;
use super::orbit::{orbit, DIVERGENCE_CUTOFF};
use super::DynamicsError;
use crate::coeff::{rational_to_f64, Coefficient, Rational};
use crate::families::{make_gamma3, out_of_range, RangeCheck};
use crate::linalg;
use crate::map::PolyMap;

#[derive(Clone, Debug, PartialEq)]
pub struct ContractionConfig {
    pub samples: usize,
    pub radius: f64,
    pub n_max: usize,
    pub eps: f64,
    pub norm: Norm,
    pub seed: u64,
}

impl Default for ContractionConfig {
    fn default() -> Self {
        Self { samples: 100, radius: 10.0, n_max: 200, eps: 1e-9, norm: Norm::Sup, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SampleOutcome {
    /// Norm dropped below `eps` after this many steps.
    Converged { steps: usize },
    NotConverged { final_norm: f64 },
    Diverged { step: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    EvidenceForContraction,
    NotContraction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContractionVerdict {
    pub origin_fixed: bool,
    /// `None` when the origin is not fixed or the eigen solver failed.
    pub spectral_radius_at_0: Option<f64>,
    pub all_sampled_orbits_converged: bool,
    pub samples: usize,
    pub converged: usize,
    pub diverged: usize,
    pub max_iterations_used: usize,
    pub outcomes: Vec<SampleOutcome>,
    pub caveats: Vec<String>,
}

impl ContractionVerdict {
    pub fn verdict(&self) -> Verdict {
        let spectral_ok = self.spectral_radius_at_0.is_some_and(|r| r < 1.0);
        if self.origin_fixed && spectral_ok && self.all_sampled_orbits_converged {
            Verdict::EvidenceForContraction
        } else {
            Verdict::NotContraction
        }
    }

    /// Combines per-sample outcomes, indexed by sample number, into a verdict.
    pub fn assemble(origin_fixed: bool, spectral_radius_at_0: Option<f64>, outcomes: Vec<SampleOutcome>) -> Self {
        let converged = outcomes.iter().filter(|o| matches!(o, SampleOutcome::Converged { .. })).count();
        let diverged = outcomes.iter().filter(|o| matches!(o, SampleOutcome::Diverged { .. })).count();
        let max_iterations_used = outcomes
            .iter()
            .map(|o| match *o {
                SampleOutcome::Converged { steps } => steps,
                SampleOutcome::Diverged { step } => step,
                SampleOutcome::NotConverged { .. } => 0,
            })
            .max()
            .unwrap_or(0);
        let mut caveats = vec![
            String::from("evidence only: finitely many sampled orbits, not a proof"),
            String::from("uniqueness of the fixed point at 0 is not tested"),
        ];
        if spectral_radius_at_0.is_none() && origin_fixed {
            caveats.push(String::from("spectral radius unavailable"));
        }
        Self {
            origin_fixed,
            spectral_radius_at_0,
            all_sampled_orbits_converged: origin_fixed && converged == outcomes.len(),
            samples: outcomes.len(),
            converged,
            diverged,
            max_iterations_used,
            outcomes,
            caveats,
        }
    }
}

fn unit_interval(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seeded points in the sup-ball of `radius`: each coordinate uniform in the complex disc.
pub fn sample_points(seed: u64, count: usize, radius: f64, dim: usize) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| loop {
                    let re = 2.0 * unit_interval(&mut rng) - 1.0;
                    let im = 2.0 * unit_interval(&mut rng) - 1.0;
                    if re * re + im * im <= 1.0 {
                        break Complex64::new(radius * re, radius * im);
                    }
                })
                .collect()
        })
        .collect()
}

/// Runs one sampled orbit until its norm drops below `eps`.
pub fn sample_outcome(f: &PolyMap<Complex64>, x0: &[Complex64], config: &ContractionConfig) -> SampleOutcome {
    let mut x = x0.to_vec();
    let mut value = config.norm.eval(&x);
    for step in 0..=config.n_max {
        if value < config.eps {
            return SampleOutcome::Converged { steps: step };
        }
        if step == config.n_max {
            break;
        }
        x = f.apply(&x).expect("sample dimension matches map");
        value = config.norm.eval(&x);
        if value.is_nan() || value > DIVERGENCE_CUTOFF {
            return SampleOutcome::Diverged { step: step + 1 };
        }
    }
    SampleOutcome::NotConverged { final_norm: value }
}

/// Spectral radius of the linear part at the fixed origin.
pub fn spectral_radius_at_origin<C: Coefficient>(f: &PolyMap<C>) -> Option<f64> {
    let lp = f.linear_part().ok()?;
    let lp: Vec<Vec<Complex64>> = lp.iter().map(|row| row.iter().map(Coefficient::to_complex).collect()).collect();
    linalg::spectral_radius(&lp).ok()
}

/// Sequential contraction evidence; deterministic for a fixed seed.
pub fn contraction_evidence<C: Coefficient>(f: &PolyMap<C>, config: &ContractionConfig) -> ContractionVerdict {
    if !f.fixes_origin() {
        return ContractionVerdict::assemble(false, None, Vec::new());
    }
    let fc = f.to_complex();
    let outcomes = sample_points(config.seed, config.samples, config.radius, f.dim())
        .iter()
        .map(|x| sample_outcome(&fc, x, config))
        .collect();
    ContractionVerdict::assemble(true, spectral_radius_at_origin(f), outcomes)
}

/// Result of checking the two contraction inequalities along an exact orbit of `gamma3`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceReport {
    /// Least `n >= 1` with `l3^(n-1) |z0| < l2`.
    pub threshold: u32,
    pub checked_from: u32,
    pub checked_to: u32,
    /// `|x_n| < l1 l2 (|x_(n-2)| + |x_(n-1)|)` for every checked `n`.
    pub sum_bound_holds: bool,
    /// `|x_n| < l1 max(|x_(n-1)|, |x_(n-2)|)` for every checked `n`.
    pub max_bound_holds: bool,
    /// Steps where both sides vanish (orbit exactly at zero), accepted as equality.
    pub degenerate_steps: Vec<u32>,
    pub failures: Vec<u32>,
    /// Smallest relative slack `(rhs - |x_n|) / rhs` over checked steps.
    pub min_margin_sum: f64,
    pub min_margin_max: f64,
}

impl RecurrenceReport {
    pub fn holds(&self) -> bool {
        self.sum_bound_holds && self.max_bound_holds
    }
}

fn bound_holds(lhs: &Rational, rhs: &Rational) -> (bool, bool) {
    if lhs.is_zero() && rhs.is_zero() {
        (true, true)
    } else {
        (lhs < rhs, false)
    }
}

fn margin(lhs: &Rational, rhs: &Rational) -> f64 {
    if rhs.is_zero() {
        return 0.0;
    }
    rational_to_f64(&((rhs - lhs) / rhs))
}

/// Verifies the contraction inequalities for `gamma3` exactly, for `threshold < n <= n_max`.
pub fn contraction_recurrence_check(
    lambdas: &[Rational; 3],
    x0: &[Rational; 3],
    n_max: u32,
) -> Result<RecurrenceReport, DynamicsError> {
    let bad = out_of_range(lambdas);
    if !bad.is_empty() {
        return Err(DynamicsError::Parameter(format!(
            "lambda_{} outside (0, 1/2) required by the contraction estimate",
            bad[0] + 1
        )));
    }
    let [l1, l2, l3] = lambdas;
    let z0 = x0[2].abs();
    let mut threshold = 1u32;
    let mut scale = z0.clone();
    while scale >= *l2 {
        scale *= l3;
        threshold += 1;
    }
    let gamma = make_gamma3(lambdas, RangeCheck::Strict)?;
    let orb = orbit(&gamma, x0, n_max as usize, &Norm::Sup).map_err(|e| match e {
        super::orbit::OrbitError::Map(m) => DynamicsError::Map(m),
        super::orbit::OrbitError::Divergence { step, .. } => {
            DynamicsError::Parameter(format!("exact orbit left the float range at step {step}"))
        }
    })?;
    let xs: Vec<Rational> = orb.points.iter().map(|p| p[0].abs()).collect();
    let checked_from = (threshold + 1).max(2);
    let mut report = RecurrenceReport {
        threshold,
        checked_from,
        checked_to: n_max,
        sum_bound_holds: true,
        max_bound_holds: true,
        degenerate_steps: Vec::new(),
        failures: Vec::new(),
        min_margin_sum: f64::INFINITY,
        min_margin_max: f64::INFINITY,
    };
    let l12 = l1 * l2;
    for n in checked_from..=n_max {
        let i = n as usize;
        let (a, b, c) = (&xs[i - 2], &xs[i - 1], &xs[i]);
        let rhs_sum = &l12 * (a + b);
        let rhs_max = l1 * if a > b { a } else { b };
        let (ok_sum, degenerate) = bound_holds(c, &rhs_sum);
        let (ok_max, _) = bound_holds(c, &rhs_max);
        if degenerate {
            report.degenerate_steps.push(n);
        } else {
            report.min_margin_sum = report.min_margin_sum.min(margin(c, &rhs_sum));
            report.min_margin_max = report.min_margin_max.min(margin(c, &rhs_max));
        }
        report.sum_bound_holds &= ok_sum;
        report.max_bound_holds &= ok_max;
        if !(ok_sum && ok_max) {
            report.failures.push(n);
        }
    }
    Ok(report)
}

/// Steps of an exact `gamma3` orbit violating `z_n = l3^n z_0` or `y_n = l2 x_(n-1)`.
pub fn check_coordinate_laws(lambdas: &[Rational; 3], points: &[Vec<Rational>]) -> Vec<usize> {
    let z0 = &points[0][2];
    let mut power = Rational::from_integer(1.into());
    let mut failures = Vec::new();
    for n in 1..points.len() {
        power *= &lambdas[2];
        let z_ok = points[n][2] == z0 * &power;
        let y_ok = points[n][1] == &lambdas[1] * &points[n - 1][0];
        if !(z_ok && y_ok) {
            failures.push(n);
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::families::make_henon;
    use crate::poly::Polynomial;

    fn lambdas() -> [Rational; 3] {
        [rat(1, 3), rat(1, 4), rat(1, 5)]
    }

    #[test]
    fn gamma_shows_contraction_evidence() {
        let g = make_gamma3(&lambdas(), RangeCheck::Strict).unwrap();
        let v = contraction_evidence(&g, &ContractionConfig::default());
        assert_eq!(v.verdict(), Verdict::EvidenceForContraction);
        assert_eq!(v.converged, 100);
        assert!(v.max_iterations_used <= 200);
        let r = v.spectral_radius_at_0.unwrap();
        assert!((r - (1.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert!(!v.caveats.is_empty());
    }

    #[test]
    fn expanding_linear_map_is_not_a_contraction() {
        let m = PolyMap::linear(&[vec![rat(2, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 2)]]).unwrap();
        let v = contraction_evidence(&m, &ContractionConfig { n_max: 200, ..Default::default() });
        assert_eq!(v.verdict(), Verdict::NotContraction);
        assert_eq!(v.spectral_radius_at_0, Some(2.0));
        assert!(v.diverged > 0);
    }

    #[test]
    fn henon_is_not_a_contraction() {
        let h = make_henon(rat(1, 1), &Polynomial::from_terms(1, [(vec![2], rat(1, 1))])).unwrap();
        let orb = orbit(&h.to_complex(), &[Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0)], 50, &Norm::Sup);
        assert!(matches!(orb, Err(super::super::orbit::OrbitError::Divergence { .. })));
        let v = contraction_evidence(&h, &ContractionConfig::default());
        assert_eq!(v.verdict(), Verdict::NotContraction);
    }

    #[test]
    fn shifted_map_fails_immediately() {
        let m = PolyMap::affine(&[vec![rat(1, 2)]], &[rat(1, 1)]).unwrap();
        let v = contraction_evidence(&m, &ContractionConfig::default());
        assert!(!v.origin_fixed);
        assert_eq!(v.samples, 0);
        assert_eq!(v.verdict(), Verdict::NotContraction);
    }

    #[test]
    fn evidence_is_deterministic_per_seed() {
        let g = make_gamma3(&lambdas(), RangeCheck::Strict).unwrap();
        let cfg = ContractionConfig { samples: 20, seed: 42, ..Default::default() };
        assert_eq!(contraction_evidence(&g, &cfg), contraction_evidence(&g, &cfg));
        assert_eq!(sample_points(3, 5, 1.0, 2), sample_points(3, 5, 1.0, 2));
        assert_ne!(sample_points(3, 5, 1.0, 2), sample_points(4, 5, 1.0, 2));
        for p in sample_points(9, 50, 10.0, 3) {
            assert!(Norm::Sup.eval(&p) <= 10.0);
        }
    }

    #[test]
    fn recurrence_threshold_and_bounds() {
        let one = [rat(1, 1), rat(1, 1), rat(1, 1)];
        let r = contraction_recurrence_check(&lambdas(), &one, 60).unwrap();
        assert_eq!(r.threshold, 2);
        assert!(r.holds(), "{r:?}");
        assert!(r.min_margin_sum > 0.0);

        let flat = [rat(1, 1), rat(-2, 1), rat(0, 1)];
        let r = contraction_recurrence_check(&lambdas(), &flat, 40).unwrap();
        assert_eq!(r.threshold, 1);
        assert!(r.holds());

        let r = contraction_recurrence_check(&[rat(2, 5), rat(2, 5), rat(2, 5)], &one, 50).unwrap();
        assert!(r.holds());

        assert!(contraction_recurrence_check(&[rat(1, 3), rat(1, 2), rat(1, 5)], &one, 10).is_err());
    }

    #[test]
    fn coordinate_laws_hold_exactly() {
        let g = make_gamma3(&lambdas(), RangeCheck::Strict).unwrap();
        let orb = orbit(&g, &[rat(1, 1), rat(1, 1), rat(1, 1)], 50, &Norm::Sup).unwrap();
        assert!(check_coordinate_laws(&lambdas(), &orb.points).is_empty());
        let mut bad = orb.points.clone();
        bad[3][1] = rat(0, 1);
        assert_eq!(check_coordinate_laws(&lambdas(), &bad), vec![3]);
    }
}
