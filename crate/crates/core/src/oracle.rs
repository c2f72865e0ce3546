//! Independent checks: twisted homology of a presentation 2-complex by Fox
//! calculus, and universal-coefficient / field-rank / Euler identities
//! between computed groups.

use serde::Serialize;
use thiserror::Error;

use crate::complex::CochainComplex;
use crate::localsys::RankOneZ;
use crate::matrix::Matrix;
use crate::snf::{rank_mod_p, subquotient, AbelianGroup, SnfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("presentation has no generators line")]
    MissingHeader,
    #[error("relator {relator}: letter {letter} out of range for {generators} generators")]
    LetterRange {
        relator: usize,
        letter: i64,
        generators: usize,
    },
    #[error("relator {0} is empty")]
    EmptyRelator(usize),
    #[error("expected images for {expected} generators, got {got}")]
    Length { expected: usize, got: usize },
    #[error("image of generator {0} is not a square involution of the common rank")]
    NotInvolution(usize),
    #[error("relator {0} does not map to the identity")]
    RelatorNotTrivial(usize),
    #[error("boundary maps do not compose to zero")]
    NotAComplex,
    #[error(transparent)]
    Snf(#[from] SnfError),
}

/// Letters are `±(i + 1)` for generator `i`; negative means inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Vec<i64>>,
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Vec<i64>>) -> Result<Self, OracleError> {
        for (j, r) in relators.iter().enumerate() {
            if r.is_empty() {
                return Err(OracleError::EmptyRelator(j));
            }
            if let Some(&letter) = r.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > generators) {
                return Err(OracleError::LetterRange {
                    relator: j,
                    letter,
                    generators,
                });
            }
        }
        Ok(Presentation { generators, relators })
    }

    pub fn parse(text: &str) -> Result<Self, OracleError> {
        let mut generators = None;
        let mut relators = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| OracleError::Parse { line: i + 1, msg };
            match generators {
                None => {
                    let count = line
                        .strip_prefix("generators")
                        .ok_or_else(|| bad("expected `generators <g>`".into()))?
                        .trim();
                    generators = Some(count.parse::<usize>().map_err(|e| bad(format!("{count:?}: {e}")))?);
                }
                Some(_) => {
                    let word = line
                        .split_whitespace()
                        .map(|t| t.parse::<i64>().map_err(|e| bad(format!("{t:?}: {e}"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    relators.push(word);
                }
            }
        }
        Presentation::new(generators.ok_or(OracleError::MissingHeader)?, relators)
    }
}

fn letter_image(images: &[Matrix<i64>], letter: i64) -> &Matrix<i64> {
    // generators are involutions, so inverses have the same image
    &images[letter.unsigned_abs() as usize - 1]
}

/// Evaluates a word with products taken right to left, so that the
/// boundary matrices below compose to zero with column vectors.
fn eval_reversed(images: &[Matrix<i64>], word: &[i64], r: usize) -> Matrix<i64> {
    word.iter()
        .fold(Matrix::identity(r), |acc, &l| letter_image(images, l) * &acc)
}

/// `ρ(∂w/∂x_i)` for every generator.
fn fox_derivatives(images: &[Matrix<i64>], word: &[i64], r: usize) -> Vec<Matrix<i64>> {
    let mut out = vec![Matrix::zeros(r, r); images.len()];
    for (k, &l) in word.iter().enumerate() {
        let i = l.unsigned_abs() as usize - 1;
        let term = if l > 0 {
            eval_reversed(images, &word[..k], r)
        } else {
            eval_reversed(images, &word[..=k], r).map(|x| -x)
        };
        out[i] = &out[i] + &term;
    }
    out
}

/// `∂₁` (`r × g·r`) and `∂₂` (`g·r × m·r`) of the presentation complex.
pub fn fox_boundaries(p: &Presentation, images: &[Matrix<i64>]) -> Result<(Matrix<i64>, Matrix<i64>), OracleError> {
    if images.len() != p.generators {
        return Err(OracleError::Length {
            expected: p.generators,
            got: images.len(),
        });
    }
    let r = images.first().map_or(1, Matrix::rows);
    for (i, m) in images.iter().enumerate() {
        if m.rows() != r || m.cols() != r || (m * m) != Matrix::identity(r) {
            return Err(OracleError::NotInvolution(i));
        }
    }
    let g = p.generators;
    let id = Matrix::<i64>::identity(r);
    let mut d1 = Matrix::zeros(r, g * r);
    for (i, m) in images.iter().enumerate() {
        d1.set_block(0, i * r, &(m - &id));
    }
    let mut d2 = Matrix::zeros(g * r, p.relators.len() * r);
    for (j, word) in p.relators.iter().enumerate() {
        if eval_reversed(images, word, r) != id {
            return Err(OracleError::RelatorNotTrivial(j));
        }
        for (i, block) in fox_derivatives(images, word, r).iter().enumerate() {
            d2.set_block(i * r, j * r, block);
        }
    }
    if !(&d1 * &d2).is_zero() {
        return Err(OracleError::NotAComplex);
    }
    Ok((d1, d2))
}

/// `(H₀, H₁)` with local coefficients given by generator images.
pub fn fox_twisted_homology(p: &Presentation, images: &[Matrix<i64>]) -> Result<[AbelianGroup; 2], OracleError> {
    let (d1, d2) = fox_boundaries(p, images)?;
    let r = d1.rows();
    Ok([subquotient(&d1, &Matrix::zeros(0, r))?, subquotient(&d2, &d1)?])
}

/// `1 × 1` images of a sign character.
pub fn rank_one_images(q: &RankOneZ) -> Vec<Matrix<i64>> {
    (0..q.len()).map(|i| Matrix::from_rows(vec![vec![q.q(i)]])).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub checks: Vec<Check>,
}

impl ConsistencyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn p_divisible(g: Option<&AbelianGroup>, p: u64) -> usize {
    g.map_or(0, |g| g.p_torsion_count(p))
}

/// UCT, `𝔽_p`-rank and Euler identities for a complex and its computed groups.
/// `chi` is the Euler characteristic of the complement.
pub fn consistency_checks(
    cx: &CochainComplex,
    cohomology: &[AbelianGroup; 3],
    homology: &[AbelianGroup; 3],
    chi: i64,
    primes: &[u64],
) -> ConsistencyReport {
    let mut checks = Vec::new();
    let trivial = AbelianGroup::trivial();
    for k in 0..=3 {
        let up = cohomology.get(k).unwrap_or(&trivial);
        let down = homology.get(k).unwrap_or(&trivial);
        let below = if k == 0 { &trivial } else { &homology[k - 1] };
        let passed = up.free_rank == down.free_rank && up.torsion == below.torsion;
        checks.push(Check {
            name: format!("uct degree {k}"),
            passed,
            detail: format!("H^{k} = {up}, H_{k} = {down}, H_{} = {below}", k as i64 - 1),
        });
    }
    let dims = cx.dims();
    for &p in primes {
        let ranks = [rank_mod_p(&cx.d0, p), rank_mod_p(&cx.d1, p)];
        let mut euler = 0i64;
        for k in 0..3 {
            let out = if k < 2 { ranks[k] } else { 0 };
            let inc = if k > 0 { ranks[k - 1] } else { 0 };
            let dim = dims[k] - out - inc;
            let expected =
                cohomology[k].free_rank + p_divisible(Some(&cohomology[k]), p) + p_divisible(cohomology.get(k + 1), p);
            checks.push(Check {
                name: format!("F_{p} rank degree {k}"),
                passed: dim == expected,
                detail: format!("dim {dim}, from groups {expected}"),
            });
            euler += if k % 2 == 0 { dim as i64 } else { -(dim as i64) };
        }
        let want = cx.r as i64 * chi;
        checks.push(Check {
            name: format!("euler F_{p}"),
            passed: euler == want,
            detail: format!("alternating sum {euler}, r*chi {want}"),
        });
    }
    ConsistencyReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localsys::swap_matrix;

    const THREE: &str = "generators 3\n1 2 3 -1 -3 -2\n1 2 3 -2 -1 -3\n";

    #[test]
    fn parse_presentation() {
        let p = Presentation::parse(THREE).unwrap();
        assert_eq!(p.generators, 3);
        assert_eq!(p.relators[1], vec![1, 2, 3, -2, -1, -3]);
        assert!(matches!(
            Presentation::parse("generators 2\n1 3"),
            Err(OracleError::LetterRange { .. })
        ));
        assert!(matches!(
            Presentation::parse("gens 2"),
            Err(OracleError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Presentation::parse("generators 2\n1 x"),
            Err(OracleError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn untwisted_three_lines() {
        let p = Presentation::parse(THREE).unwrap();
        let h = fox_twisted_homology(&p, &rank_one_images(&RankOneZ::trivial(3))).unwrap();
        assert_eq!(h, [AbelianGroup::from_parts(1, &[]), AbelianGroup::from_parts(3, &[])]);
    }

    #[test]
    fn sign_twisted_coinvariants() {
        let p = Presentation::parse(THREE).unwrap();
        let h = fox_twisted_homology(&p, &rank_one_images(&RankOneZ::parse("-++", 3).unwrap())).unwrap();
        assert_eq!(h[0], AbelianGroup::from_parts(0, &[2]));
    }

    #[test]
    fn relator_violation() {
        // the free abelian relation x1 x2 = x2 x1 fails for non-commuting involutions
        let p = Presentation::parse("generators 2\n1 2 -1 -2").unwrap();
        let other = Matrix::from_rows(vec![vec![1, 0], vec![0, -1]]);
        let err = fox_twisted_homology(&p, &[swap_matrix(), other]).unwrap_err();
        assert_eq!(err, OracleError::RelatorNotTrivial(0));
    }

    #[test]
    fn circle_double_cover() {
        // Z acting by the swap on Z^2: H0 = Z, H1 = Z
        let p = Presentation::new(1, vec![]).unwrap();
        let h = fox_twisted_homology(&p, &[swap_matrix()]).unwrap();
        assert_eq!(h, [AbelianGroup::from_parts(1, &[]), AbelianGroup::from_parts(1, &[])]);
    }
}
