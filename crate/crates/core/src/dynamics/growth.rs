//! Degree-growth classification of iterate sequences.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::DynamicsError;
use crate::coeff::Coefficient;
use crate::iterate::{degree_sequence, DegreeSequence, IterateCache};
use crate::map::PolyMap;

/// Shortest degree sequence [`classify_growth`] accepts.
pub const MIN_GROWTH_ENTRIES: usize = 6;
/// Minimum `N` for [`strict_algebraicity_report`].
pub const MIN_ALGEBRAICITY_ENTRIES: u32 = 8;
/// Relative stabilization tolerance on `ln(deg f^n) / n`.
pub const LOG_RATE_TOL: f64 = 1e-3;
const MAX_POLY_ORDER: u32 = 4;

#[derive(Clone, Debug, PartialEq)]
pub enum GrowthVerdict {
    Bounded { value: u32 },
    Linear { slope: i64 },
    Polynomial { degree: u32 },
    Exponential { rate: f64 },
    Inconclusive,
}

impl GrowthVerdict {
    pub fn is_bounded(&self) -> bool {
        matches!(self, GrowthVerdict::Bounded { .. })
    }

    pub fn label(&self) -> String {
        match self {
            GrowthVerdict::Bounded { value } => format!("bounded (deg = {value})"),
            GrowthVerdict::Linear { slope } => format!("linear (slope {slope})"),
            GrowthVerdict::Polynomial { degree } => format!("polynomial (order {degree})"),
            GrowthVerdict::Exponential { rate } => format!("exponential (rate {rate})"),
            GrowthVerdict::Inconclusive => String::from("inconclusive"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthEvidence {
    /// Number of trailing entries examined by the bounded/differencing tests.
    pub window: usize,
    /// `ln(deg f^n) / n` over the trailing quarter.
    pub log_rates: Vec<f64>,
    /// `max |r_n - r_N| / r_N` over the trailing quarter.
    pub log_rate_relative_change: f64,
    /// `(deg f^N)^(1/N)`.
    pub empirical_dynamical_degree: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthClass {
    pub verdict: GrowthVerdict,
    pub evidence: GrowthEvidence,
}

fn differences(v: &[i64]) -> Vec<i64> {
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Bounded, then polynomial by exact differencing, then exponential by log-rate stabilization.
pub fn classify_growth(seq: &DegreeSequence) -> Result<GrowthClass, DynamicsError> {
    let degrees = seq.degrees();
    let n = degrees.len();
    if n < MIN_GROWTH_ENTRIES {
        return Err(DynamicsError::InsufficientData { len: n, min: MIN_GROWTH_ENTRIES });
    }
    let window = n.div_ceil(2);
    let tail: Vec<i64> = degrees[n - window..].iter().map(|&d| i64::from(d)).collect();

    let quarter = n.div_ceil(4).max(2);
    let log_rates: Vec<f64> = (n - quarter..n)
        .map(|i| libm::log(f64::from(degrees[i].max(1))) / (i + 1) as f64)
        .collect();
    let last_rate = log_rates[log_rates.len() - 1];
    let log_rate_relative_change = if last_rate > 0.0 {
        log_rates.iter().map(|r| (r - last_rate).abs() / last_rate).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let evidence = GrowthEvidence {
        window,
        empirical_dynamical_degree: libm::exp(last_rate),
        log_rates,
        log_rate_relative_change,
    };

    let verdict = if tail.iter().all(|&d| d == tail[0]) {
        GrowthVerdict::Bounded { value: tail[0] as u32 }
    } else if let Some(v) = polynomial_verdict(&tail) {
        v
    } else if last_rate > 0.0 && log_rate_relative_change < LOG_RATE_TOL {
        GrowthVerdict::Exponential { rate: libm::exp(last_rate) }
    } else {
        GrowthVerdict::Inconclusive
    };
    Ok(GrowthClass { verdict, evidence })
}

// Order k when the (k+1)-th differences of the window vanish; at least one such difference must exist.
fn polynomial_verdict(tail: &[i64]) -> Option<GrowthVerdict> {
    let mut diffs = differences(tail);
    for k in 1..=MAX_POLY_ORDER {
        let next = differences(&diffs);
        if next.is_empty() {
            return None;
        }
        if next.iter().all(|&d| d == 0) {
            return Some(if k == 1 {
                GrowthVerdict::Linear { slope: diffs[0] }
            } else {
                GrowthVerdict::Polynomial { degree: k }
            });
        }
        diffs = next;
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneVerdict {
    AffineLike,
    ElementaryLike,
    Loxodromic,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneClass {
    pub verdict: PlaneVerdict,
    pub growth: GrowthClass,
    pub sequence: DegreeSequence,
}

/// Degree-growth signature of a plane map; says nothing about the conjugating map.
pub fn classify_plane<C: Coefficient>(f: &PolyMap<C>, n_max: u32) -> Result<PlaneClass, DynamicsError> {
    if f.dim() != 2 {
        return Err(DynamicsError::Dimension { expected: 2, found: f.dim() });
    }
    let sequence = degree_sequence(&mut IterateCache::new(f.clone()), n_max)?;
    let growth = classify_growth(&sequence)?;
    let verdict = match growth.verdict {
        GrowthVerdict::Exponential { .. } => PlaneVerdict::Loxodromic,
        GrowthVerdict::Bounded { .. } if sequence.degrees().iter().all(|&d| d <= 1) => PlaneVerdict::AffineLike,
        GrowthVerdict::Bounded { .. } => PlaneVerdict::ElementaryLike,
        _ => PlaneVerdict::Inconclusive,
    };
    Ok(PlaneClass { verdict, growth, sequence })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraicityStatus {
    /// Degrees bounded through `N`.
    ConsistentWithStrictlyAlgebraic,
    /// Degrees growing through `N`.
    NotStrictlyAlgebraicIfTrendContinues,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicityReport {
    pub status: AlgebraicityStatus,
    pub statement: String,
    pub growth: GrowthClass,
    pub sequence: DegreeSequence,
}

/// Bounded-degree test over `f^1 .. f^N`; behaviour beyond `N` is never decided.
pub fn strict_algebraicity_report<C: Coefficient>(
    f: &PolyMap<C>,
    n_max: u32,
) -> Result<AlgebraicityReport, DynamicsError> {
    if n_max < MIN_ALGEBRAICITY_ENTRIES {
        return Err(DynamicsError::InsufficientData {
            len: n_max as usize,
            min: MIN_ALGEBRAICITY_ENTRIES as usize,
        });
    }
    let sequence = degree_sequence(&mut IterateCache::new(f.clone()), n_max)?;
    let growth = classify_growth(&sequence)?;
    let (status, statement) = match growth.verdict {
        GrowthVerdict::Bounded { value } => (
            AlgebraicityStatus::ConsistentWithStrictlyAlgebraic,
            format!(
                "consistent with strictly algebraic: deg f^n bounded by {value} through N = {n_max}; \
                 boundedness beyond N is not decided"
            ),
        ),
        GrowthVerdict::Inconclusive => (
            AlgebraicityStatus::Undetermined,
            format!("degree growth through N = {n_max} is inconclusive; boundedness beyond N is not decided"),
        ),
        ref growing => (
            AlgebraicityStatus::NotStrictlyAlgebraicIfTrendContinues,
            format!(
                "not strictly algebraic if the trend continues: {} through N = {n_max}; \
                 unboundedness beyond N is extrapolated, not proved",
                growing.label()
            ),
        ),
    };
    Ok(AlgebraicityReport { status, statement, growth, sequence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, Rational};
    use crate::families::{make_elementary, make_gamma3, make_henon, RangeCheck};
    use crate::poly::Polynomial;
    use alloc::vec;

    fn seq(d: &[u32]) -> DegreeSequence {
        DegreeSequence::from_degrees("s", d)
    }

    #[test]
    fn linear_sequence() {
        let d: Vec<u32> = (2..=11).collect();
        assert_eq!(classify_growth(&seq(&d)).unwrap().verdict, GrowthVerdict::Linear { slope: 1 });
        for n in 8..40u32 {
            let d: Vec<u32> = (2..=n + 1).collect();
            assert_eq!(classify_growth(&seq(&d)).unwrap().verdict, GrowthVerdict::Linear { slope: 1 });
        }
    }

    #[test]
    fn bounded_sequence() {
        assert_eq!(classify_growth(&seq(&[1; 8])).unwrap().verdict, GrowthVerdict::Bounded { value: 1 });
        assert_eq!(
            classify_growth(&seq(&[1, 2, 3, 3, 3, 3, 3, 3])).unwrap().verdict,
            GrowthVerdict::Bounded { value: 3 }
        );
    }

    #[test]
    fn exponential_sequence() {
        for n in 6..=30u32 {
            let d: Vec<u32> = (1..=n).map(|k| 1u32 << k).collect();
            let class = classify_growth(&seq(&d)).unwrap();
            match class.verdict {
                GrowthVerdict::Exponential { rate } => assert!((rate - 2.0).abs() < 1e-6),
                other => panic!("{other:?} for n = {n}"),
            }
            assert!((class.evidence.empirical_dynamical_degree - 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn polynomial_sequences() {
        let sq: Vec<u32> = (1..=12u32).map(|n| n * n).collect();
        assert_eq!(classify_growth(&seq(&sq)).unwrap().verdict, GrowthVerdict::Polynomial { degree: 2 });
        let cube: Vec<u32> = (1..=14u32).map(|n| n * n * n + 1).collect();
        assert_eq!(classify_growth(&seq(&cube)).unwrap().verdict, GrowthVerdict::Polynomial { degree: 3 });
    }

    #[test]
    fn irregular_sequence_is_inconclusive() {
        let d = [2, 5, 3, 9, 4, 11, 2, 17];
        assert_eq!(classify_growth(&seq(&d)).unwrap().verdict, GrowthVerdict::Inconclusive);
    }

    #[test]
    fn too_short() {
        assert_eq!(
            classify_growth(&seq(&[1, 2, 3])),
            Err(DynamicsError::InsufficientData { len: 3, min: MIN_GROWTH_ENTRIES })
        );
    }

    #[test]
    fn plane_classes() {
        let x2 = Polynomial::from_terms(1, [(vec![2], rat(1, 1))]);
        let h = make_henon(rat(1, 1), &x2).unwrap();
        assert_eq!(classify_plane(&h, 6).unwrap().verdict, PlaneVerdict::Loxodromic);

        let a = PolyMap::affine(&[vec![rat(1, 2), rat(1, 1)], vec![rat(0, 1), rat(1, 3)]], &[rat(1, 1), rat(2, 1)]).unwrap();
        assert_eq!(classify_plane(&a, 6).unwrap().verdict, PlaneVerdict::AffineLike);

        let y3 = Polynomial::from_terms(1, [(vec![3], rat(1, 1))]);
        let e = make_elementary(rat(1, 2), rat(1, 3), rat(1, 1), &y3).unwrap();
        let class = classify_plane(&e, 6).unwrap();
        assert_eq!(class.verdict, PlaneVerdict::ElementaryLike);
        assert_eq!(class.sequence.degrees(), vec![3; 6]);

        let g = make_gamma3(&[rat(1, 3), rat(1, 4), rat(1, 5)], RangeCheck::Strict).unwrap();
        assert_eq!(classify_plane(&g, 6).unwrap_err(), DynamicsError::Dimension { expected: 2, found: 3 });
    }

    #[test]
    fn algebraicity_reports() {
        let g = make_gamma3(&[rat(1, 3), rat(1, 4), rat(1, 5)], RangeCheck::Strict).unwrap();
        let r = strict_algebraicity_report(&g, 20).unwrap();
        assert_eq!(r.status, AlgebraicityStatus::NotStrictlyAlgebraicIfTrendContinues);
        assert_eq!(r.sequence.degrees(), (2..=21).collect::<Vec<_>>());
        assert!(r.statement.contains("not proved"));

        let id = PolyMap::<Rational>::identity(3);
        let r = strict_algebraicity_report(&id, 8).unwrap();
        assert_eq!(r.status, AlgebraicityStatus::ConsistentWithStrictlyAlgebraic);
        assert!(r.statement.contains("not decided"));

        // F o L o F^-1 with L linear and F(x, y) = (x + y^2, y).
        let l = PolyMap::linear(&[vec![rat(1, 2), rat(0, 1)], vec![rat(0, 1), rat(1, 3)]]).unwrap();
        let y2 = Polynomial::from_terms(2, [(vec![0, 2], rat(1, 1))]);
        let f = PolyMap::new(vec![&Polynomial::var(2, 0) + &y2, Polynomial::var(2, 1)]).unwrap();
        let f_inv = PolyMap::new(vec![&Polynomial::var(2, 0) - &y2, Polynomial::var(2, 1)]).unwrap();
        let conj = l.conjugate(&f, &f_inv).unwrap();
        let r = strict_algebraicity_report(&conj, 10).unwrap();
        assert_eq!(r.status, AlgebraicityStatus::ConsistentWithStrictlyAlgebraic);
        assert_eq!(r.sequence.degrees(), vec![2; 10]);

        assert!(strict_algebraicity_report(&id, 7).is_err());
    }
}
