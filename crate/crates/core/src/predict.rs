//! Closed-form cohomology under the CDO-condition, and comparison with the
//! groups computed from the chamber complex.

use serde::Serialize;
use thiserror::Error;

use crate::chambers::Analysis;
use crate::geometry::combinatorial_invariants;
use crate::localsys::{cdo_check, LocalSysError, RankOneZ};
use crate::scalar::Scalar;
use crate::snf::AbelianGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredictError {
    #[error("the CDO-condition fails ({0}); no prediction")]
    NotCdo(String),
    #[error("strata give beta {strata:?} but alternating Betti sums give {betti:?}")]
    BetaMismatch { strata: [usize; 3], betti: [usize; 3] },
    #[error(transparent)]
    LocalSystem(#[from] LocalSysError),
}

/// Counts of bounded-along-the-flag chambers per level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BetaVector {
    pub b0: usize,
    pub b1: usize,
    pub b2: usize,
}

impl BetaVector {
    pub fn as_array(&self) -> [usize; 3] {
        [self.b0, self.b1, self.b2]
    }

    /// `|Σ_{i≤k} (−1)^i b_i|` from Betti numbers `b`.
    pub fn from_betti(b: [usize; 3]) -> Self {
        let b = b.map(|x| x as i64);
        BetaVector {
            b0: b[0].unsigned_abs() as usize,
            b1: (b[0] - b[1]).unsigned_abs() as usize,
            b2: (b[0] - b[1] + b[2]).unsigned_abs() as usize,
        }
    }

    /// From the strata, cross-checked against the Betti numbers.
    pub fn from_analysis<F: Scalar>(a: &Analysis<F>) -> Result<Self, PredictError> {
        let s = a.strata.beta();
        let strata = BetaVector {
            b0: s[0],
            b1: s[1],
            b2: s[2],
        };
        let betti = BetaVector::from_betti(combinatorial_invariants(&a.poset, a.n()).betti);
        if strata != betti {
            return Err(PredictError::BetaMismatch {
                strata: strata.as_array(),
                betti: betti.as_array(),
            });
        }
        Ok(strata)
    }
}

/// `(0, ℤ₂^{β₀}, ℤ^{β₂} ⊕ ℤ₂^{β₁})`.
pub fn predicted_groups(beta: BetaVector) -> [AbelianGroup; 3] {
    [
        AbelianGroup::trivial(),
        AbelianGroup::from_parts(0, &vec![2; beta.b0]),
        AbelianGroup::from_parts(beta.b2, &vec![2; beta.b1]),
    ]
}

/// Predicted `H⁰, H¹, H²` for `q`; refuses when the CDO-condition fails.
pub fn predict_cohomology<F: Scalar>(a: &Analysis<F>, q: &RankOneZ) -> Result<[AbelianGroup; 3], PredictError> {
    let cdo = cdo_check(a, q)?;
    if !cdo.holds {
        return Err(PredictError::NotCdo(cdo.witnesses.join(", ")));
    }
    Ok(predicted_groups(BetaVector::from_analysis(a)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub predicted: AbelianGroup,
    pub computed: AbelianGroup,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub degrees: Vec<DegreeComparison>,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl CompareReport {
    /// Degrees where the two sides differ.
    pub fn mismatches(&self) -> Vec<usize> {
        (0..self.degrees.len()).filter(|&k| !self.degrees[k].equal).collect()
    }
}

pub fn compare_report(predicted: &[AbelianGroup], computed: &[AbelianGroup]) -> CompareReport {
    assert_eq!(predicted.len(), computed.len(), "compare needs equally many degrees");
    let degrees: Vec<DegreeComparison> = predicted
        .iter()
        .zip(computed)
        .map(|(p, c)| DegreeComparison {
            predicted: p.clone(),
            computed: c.clone(),
            equal: p == c,
        })
        .collect();
    let matches = degrees.iter().all(|d| d.equal);
    CompareReport { degrees, matches }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_arrangement;
    use crate::qnum::QNum;

    fn analysis(text: &str) -> Analysis<QNum> {
        Analysis::new(parse_arrangement(text).unwrap()).unwrap()
    }

    #[test]
    fn three_concurrent_lines() {
        let a = analysis("field Q\n2 -3 0\n1 0 0\n2 3 0");
        assert_eq!(BetaVector::from_analysis(&a).unwrap().as_array(), [1, 2, 0]);
        let h = predict_cohomology(&a, &RankOneZ::parse("-++", 3).unwrap()).unwrap();
        assert_eq!(
            h.map(|g| g.to_string()),
            ["0".to_string(), "Z/2".into(), "(Z/2)^2".into()]
        );
        let err = predict_cohomology(&a, &RankOneZ::parse("--+", 3).unwrap()).unwrap_err();
        assert_eq!(err, PredictError::NotCdo("H_infinity".into()));
    }

    #[test]
    fn one_line() {
        let a = analysis("field Q\n1 1 1");
        let h = predict_cohomology(&a, &RankOneZ::parse("-", 1).unwrap()).unwrap();
        assert_eq!(
            h,
            [
                AbelianGroup::trivial(),
                AbelianGroup::from_parts(0, &[2]),
                AbelianGroup::trivial()
            ]
        );
    }

    #[test]
    fn generic_three_lines() {
        let a = analysis("field Q\n1 0 0\n0 1 0\n1 1 1");
        assert_eq!(BetaVector::from_analysis(&a).unwrap().as_array(), [1, 2, 1]);
        let h = predict_cohomology(&a, &RankOneZ::parse("-++", 3).unwrap()).unwrap();
        assert_eq!(h[2], AbelianGroup::from_parts(1, &[2, 2]));
    }

    #[test]
    fn corruption_is_flagged() {
        let p = predicted_groups(BetaVector { b0: 1, b1: 2, b2: 0 });
        let mut c = p.clone();
        c[2] = AbelianGroup::from_parts(0, &[2]);
        let r = compare_report(&p, &c);
        assert!(!r.matches);
        assert_eq!(r.mismatches(), vec![2]);
        assert!(compare_report(&p, &p).matches);
    }
}
