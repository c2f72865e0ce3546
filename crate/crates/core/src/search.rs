//! Scans characteristic classes for torsion in the double cover and in the
//! rank-one local system.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::chambers::Analysis;
use crate::complex::{ComplexError, ComplexTemplate};
use crate::localsys::CharClass;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::snf::{subquotient_fast, AbelianGroup, SnfError};

/// Largest `n` scanned exhaustively.
pub const MAX_FULL_SCAN: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("full scan needs at most {limit} lines, got {n}")]
    TooManyLines { n: usize, limit: usize },
    #[error("cannot sample {k} of {available} nonzero classes")]
    SampleTooLarge { k: u64, available: u64 },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Snf(#[from] SnfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    All,
    Sample { k: u64, seed: u64 },
}

/// Groups attached to one characteristic class `ω`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaGroups {
    pub omega: String,
    /// `H₁` of the double cover with integer coefficients.
    pub cover_h1: AbelianGroup,
    /// `H₁` with coefficients in the sign local system of `ω`.
    pub local_h1: AbelianGroup,
    /// `H²` with coefficients in the sign local system of `ω`.
    pub local_h2: AbelianGroup,
}

impl OmegaGroups {
    pub fn is_finding(&self) -> bool {
        self.cover_h1.has_torsion() || self.local_h1.torsion.iter().any(|t| *t > 2.into())
    }

    /// Torsion of `H₁(ℒ_ω)` reappears in `H²(ℒ_ω)`.
    pub fn uct_holds(&self) -> bool {
        self.local_h1.torsion == self.local_h2.torsion
    }
}

fn h1(d0: &Matrix<i64>, d1: &Matrix<i64>) -> Result<AbelianGroup, SnfError> {
    subquotient_fast(&d1.transpose(), &d0.transpose())
}

/// Groups for one `ω`, reusing a prepared template.
pub fn omega_groups(t: &ComplexTemplate, omega: &CharClass) -> Result<OmegaGroups, SearchError> {
    let cover = t.double_cover(omega)?;
    let local = t.rank_one(&omega.sign_character())?;
    let n2 = local.d1.rows();
    Ok(OmegaGroups {
        omega: omega.to_string(),
        cover_h1: h1(&cover.d0, &cover.d1)?,
        local_h1: h1(&local.d0, &local.d1)?,
        local_h2: subquotient_fast(&local.d1, &Matrix::zeros(0, n2))?,
    })
}

fn masks(n: usize, mode: SearchMode) -> Result<Vec<u64>, SearchError> {
    match mode {
        SearchMode::All => {
            if n > MAX_FULL_SCAN {
                return Err(SearchError::TooManyLines {
                    n,
                    limit: MAX_FULL_SCAN,
                });
            }
            Ok((1..1u64 << n).collect())
        }
        SearchMode::Sample { k, seed } => {
            if n > 63 {
                return Err(SearchError::TooManyLines { n, limit: 63 });
            }
            let available = (1u64 << n) - 1;
            if k > available {
                return Err(SearchError::SampleTooLarge { k, available });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut chosen = BTreeSet::new();
            while (chosen.len() as u64) < k {
                chosen.insert(rng.gen_range(1..=available));
            }
            Ok(chosen.into_iter().collect())
        }
    }
}

/// Every `ω` whose double cover has torsion in `H₁` or whose local system
/// has a torsion factor above 2 in `H₁`, sorted by bit string.
pub fn search_torsion<F: Scalar>(a: &Analysis<F>, mode: SearchMode) -> Result<Vec<OmegaGroups>, SearchError> {
    let t = ComplexTemplate::new(a)?;
    let n = a.n();
    let found: Vec<Option<OmegaGroups>> = masks(n, mode)?
        .into_par_iter()
        .map(|m| {
            let omega = CharClass::from_mask(n, m).expect("mask is nonzero");
            let g = omega_groups(&t, &omega)?;
            Ok(g.is_finding().then_some(g))
        })
        .collect::<Result<_, SearchError>>()?;
    let mut out: Vec<OmegaGroups> = found.into_iter().flatten().collect();
    out.sort_by(|x, y| x.omega.cmp(&y.omega));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_arrangement;

    #[test]
    fn three_concurrent_lines_has_no_findings() {
        let a = Analysis::new(parse_arrangement("field Q\n2 -3 0\n1 0 0\n2 3 0").unwrap()).unwrap();
        assert!(search_torsion(&a, SearchMode::All).unwrap().is_empty());
    }

    #[test]
    fn sampling_is_deterministic_and_bounded() {
        let a = masks(10, SearchMode::Sample { k: 50, seed: 7 }).unwrap();
        assert_eq!(a, masks(10, SearchMode::Sample { k: 50, seed: 7 }).unwrap());
        assert_eq!(a.len(), 50);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(
            masks(3, SearchMode::Sample { k: 8, seed: 0 }),
            Err(SearchError::SampleTooLarge { .. })
        ));
        assert!(matches!(
            masks(21, SearchMode::All),
            Err(SearchError::TooManyLines { .. })
        ));
    }
}
