//! The twisted cochain complex on chamber bases.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::chambers::{order_bch, Analysis, Walls};
use crate::lineset::LineSet;
use crate::localsys::{cdo_check, crossing_sets, delta_from_twists, CharClass, LocalSysError, MatrixRep, RankOneZ};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::snf::{determinant, smith_normal_form, subquotient, SnfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("chamber {0} has no flag walls")]
    MissingWalls(usize),
    #[error("degree undefined between levels {0} and {1}")]
    Levels(usize, usize),
    #[error("d1 * d0 is not zero")]
    NotAComplex,
    #[error("odd entry {0} cannot be halved")]
    OddEntry(i64),
    #[error("coefficients have length {got}, arrangement has {expected} lines")]
    Length { expected: usize, got: usize },
    #[error("the CDO-condition fails for this character")]
    NotCdo,
    #[error("square restriction at level {0} is not upper triangular")]
    NotTriangular(usize),
    #[error("square restriction at level {k}: diagonal entry {index} is {value}")]
    Diagonal { k: usize, index: usize, value: i64 },
    #[error("structure check failed: {0}")]
    Structure(String),
    #[error(transparent)]
    LocalSystem(#[from] LocalSysError),
    #[error(transparent)]
    Snf(#[from] SnfError),
}

/// `deg(C, C')` for `C` at level `k` and `C'` at level `k + 1`, `k ∈ {0, 1}`.
pub fn degree<F: Scalar>(a: &Analysis<F>, c: usize, c2: usize) -> Result<i64, ComplexError> {
    let (k, k2) = (a.strata.level[c], a.strata.level[c2]);
    if k2 != k + 1 || k > 1 {
        return Err(ComplexError::Levels(k, k2));
    }
    if k == 0 {
        return Ok(1);
    }
    let sep = a.chambers.sep(c, c2);
    degree_from_walls(a.strata.walls[c].ok_or(ComplexError::MissingWalls(c))?, &sep)
}

fn degree_from_walls(walls: Walls, sep: &LineSet) -> Result<i64, ComplexError> {
    Ok(match walls {
        Walls::Bounded(h, h2) => match (sep.contains(h), sep.contains(h2)) {
            (true, true) => 1,
            (false, false) => -1,
            _ => 0,
        },
        Walls::Unbounded(h) => {
            if sep.contains(h) {
                0
            } else {
                -1
            }
        }
    })
}

#[derive(Debug, Clone)]
struct Entry {
    row: usize,
    col: usize,
    deg: i64,
    sep: LineSet,
    plus: LineSet,
    minus: LineSet,
}

/// Degrees and separating sets for every pair of adjacent-level chambers,
/// so complexes for many coefficient systems can be assembled cheaply.
#[derive(Debug, Clone)]
pub struct ComplexTemplate {
    n: usize,
    levels: [Vec<usize>; 3],
    position: Vec<usize>,
    entries: [Vec<Entry>; 2],
}

impl ComplexTemplate {
    pub fn new<F: Scalar>(a: &Analysis<F>) -> Result<Self, ComplexError> {
        let levels = a.strata.ch.clone();
        let mut position = vec![0; a.chambers.len()];
        for level in &levels {
            for (p, &c) in level.iter().enumerate() {
                position[c] = p;
            }
        }
        let mut entries: [Vec<Entry>; 2] = Default::default();
        for k in 0..2 {
            for (col, &c) in levels[k].iter().enumerate() {
                for (row, &c2) in levels[k + 1].iter().enumerate() {
                    let deg = degree(a, c, c2)?;
                    if deg == 0 {
                        continue;
                    }
                    let (plus, minus) = crossing_sets(a.chambers.get(c), a.chambers.get(c2));
                    entries[k].push(Entry {
                        row,
                        col,
                        deg,
                        sep: a.chambers.sep(c, c2),
                        plus,
                        minus,
                    });
                }
            }
        }
        Ok(ComplexTemplate {
            n: a.n(),
            levels,
            position,
            entries,
        })
    }

    fn shape(&self, r: usize) -> (Matrix<i64>, Matrix<i64>) {
        let [l0, l1, l2] = &self.levels;
        (
            Matrix::zeros(r * l1.len(), r * l0.len()),
            Matrix::zeros(r * l2.len(), r * l1.len()),
        )
    }

    fn finish(&self, r: usize, d0: Matrix<i64>, d1: Matrix<i64>) -> CochainComplex {
        CochainComplex {
            r,
            levels: self.levels.clone(),
            position: self.position.clone(),
            d0,
            d1,
            halved: false,
        }
    }

    fn check_len(&self, got: usize) -> Result<(), ComplexError> {
        if got != self.n {
            return Err(ComplexError::Length { expected: self.n, got });
        }
        Ok(())
    }

    /// Complex with rank-one coefficients, `Δ` by the mod-4 twist count.
    pub fn rank_one(&self, q: &RankOneZ) -> Result<CochainComplex, ComplexError> {
        self.check_len(q.len())?;
        let (mut d0, mut d1) = self.shape(1);
        for (k, d) in [&mut d0, &mut d1].into_iter().enumerate() {
            for e in &self.entries[k] {
                d[(e.row, e.col)] = e.deg * delta_from_twists(e.sep.intersection_len(q.negative()));
            }
        }
        Ok(self.finish(1, d0, d1))
    }

    /// Complex with a matrix representation, `Δ = Π_{ε=+} T_i − Π_{ε=−} T_i`.
    pub fn with_rep(&self, rep: &MatrixRep) -> Result<CochainComplex, ComplexError> {
        self.check_len(rep.len())?;
        let r = rep.rank();
        let (mut d0, mut d1) = self.shape(r);
        for (k, d) in [&mut d0, &mut d1].into_iter().enumerate() {
            for e in &self.entries[k] {
                let delta = &rep.product(&e.plus) - &rep.product(&e.minus);
                d.set_block(e.row * r, e.col * r, &delta.map(|x| x * e.deg));
            }
        }
        Ok(self.finish(r, d0, d1))
    }

    /// Same as [`with_rep`](Self::with_rep) for the double cover of `ω`,
    /// using that products of swaps only depend on a parity.
    pub fn double_cover(&self, omega: &CharClass) -> Result<CochainComplex, ComplexError> {
        self.check_len(omega.len())?;
        let (mut d0, mut d1) = self.shape(2);
        for (k, d) in [&mut d0, &mut d1].into_iter().enumerate() {
            for e in &self.entries[k] {
                let p = e.plus.intersection_len(omega.bits()) % 2;
                let m = e.minus.intersection_len(omega.bits()) % 2;
                // swap^p - swap^m is 0 or ±(swap - I)
                let s = match (p, m) {
                    (1, 0) => e.deg,
                    (0, 1) => -e.deg,
                    _ => continue,
                };
                let (i, j) = (2 * e.row, 2 * e.col);
                d[(i, j)] = -s;
                d[(i, j + 1)] = s;
                d[(i + 1, j)] = s;
                d[(i + 1, j + 1)] = -s;
            }
        }
        Ok(self.finish(2, d0, d1))
    }
}

/// Coefficient source for [`build_complex`].
#[derive(Debug, Clone, Copy)]
pub enum Coefficients<'a> {
    RankOne(&'a RankOneZ),
    Rep(&'a MatrixRep),
}

/// `ℤ^{r|ch⁰|} →d0 ℤ^{r|ch¹|} →d1 ℤ^{r|ch²|}`, chambers in id order within
/// each level and `r × r` blocks laid out contiguously per chamber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainComplex {
    pub r: usize,
    pub levels: [Vec<usize>; 3],
    position: Vec<usize>,
    pub d0: Matrix<i64>,
    pub d1: Matrix<i64>,
    /// True once every entry has been divided by 2.
    pub halved: bool,
}

impl CochainComplex {
    pub fn differential(&self, k: usize) -> &Matrix<i64> {
        match k {
            0 => &self.d0,
            1 => &self.d1,
            _ => panic!("no differential out of level {k}"),
        }
    }

    /// The `r × r` block of `d` from chamber `c` (level `k`) to `c2` (level `k + 1`).
    pub fn block(&self, k: usize, c: usize, c2: usize) -> Matrix<i64> {
        let r = self.r;
        self.differential(k)
            .block(self.position[c2] * r, self.position[c] * r, r, r)
    }

    pub fn is_complex(&self) -> bool {
        (&self.d1 * &self.d0).is_zero()
    }

    pub fn dims(&self) -> [usize; 3] {
        [
            self.r * self.levels[0].len(),
            self.r * self.levels[1].len(),
            self.r * self.levels[2].len(),
        ]
    }
}

/// Assembles `d_ℒ` and checks `d1 · d0 = 0`.
pub fn build_complex<F: Scalar>(a: &Analysis<F>, coeffs: Coefficients<'_>) -> Result<CochainComplex, ComplexError> {
    let t = ComplexTemplate::new(a)?;
    let cx = match coeffs {
        Coefficients::RankOne(q) => t.rank_one(q)?,
        Coefficients::Rep(rep) => t.with_rep(rep)?,
    };
    if !cx.is_complex() {
        return Err(ComplexError::NotAComplex);
    }
    Ok(cx)
}

/// Exact entrywise division by 2 (`d'`).
pub fn halve(cx: &CochainComplex) -> Result<CochainComplex, ComplexError> {
    let half = |m: &Matrix<i64>| -> Result<Matrix<i64>, ComplexError> {
        if let Some(i) = (0..m.rows()).find(|&i| m.row(i).iter().any(|x| x % 2 != 0)) {
            let odd = *m.row(i).iter().find(|x| *x % 2 != 0).expect("found");
            return Err(ComplexError::OddEntry(odd));
        }
        Ok(m.map(|x| x / 2))
    };
    Ok(CochainComplex {
        d0: half(&cx.d0)?,
        d1: half(&cx.d1)?,
        halved: true,
        ..cx.clone()
    })
}

/// `d` restricted to `bch^k → uch^{k+1}`; entry `(i, j)` is the coefficient
/// of `[C_j^∨]` in `d[C_i]` with `bch^k` ordered by [`order_bch`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareRestriction {
    pub k: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub matrix: Matrix<i64>,
}

impl SquareRestriction {
    pub fn is_upper_triangular(&self) -> bool {
        let m = &self.matrix;
        (0..m.rows()).all(|i| (0..i.min(m.cols())).all(|j| m[(i, j)] == 0))
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.matrix.rows()).map(|i| self.matrix[(i, i)]).collect()
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.matrix.to_bigint())
    }

    /// Upper triangularity, and diagonal entries `±2` (or `±1` once halved).
    pub fn check_cdo(&self, halved: bool) -> Result<(), ComplexError> {
        if !self.is_upper_triangular() {
            return Err(ComplexError::NotTriangular(self.k));
        }
        let expected = if halved { 1 } else { 2 };
        for (index, value) in self.diagonal().into_iter().enumerate() {
            if value.abs() != expected {
                return Err(ComplexError::Diagonal {
                    k: self.k,
                    index,
                    value,
                });
            }
        }
        Ok(())
    }
}

/// Rank-one only; `k ∈ {0, 1}`.
pub fn restrict_square<F: Scalar>(
    cx: &CochainComplex,
    a: &Analysis<F>,
    k: usize,
) -> Result<SquareRestriction, ComplexError> {
    if cx.r != 1 || k > 1 {
        return Err(ComplexError::Levels(k, k + 1));
    }
    let rows = order_bch(&a.strata, &a.chambers, k);
    let cols: Vec<usize> = rows
        .iter()
        .map(|&c| a.strata.opposite[c].expect("bch^k chambers are unbounded"))
        .collect();
    let b = rows.len();
    let mut matrix = Matrix::zeros(b, b);
    for (i, &c) in rows.iter().enumerate() {
        for (j, &cv) in cols.iter().enumerate() {
            matrix[(i, j)] = cx.block(k, c, cv)[(0, 0)];
        }
    }
    Ok(SquareRestriction { k, rows, cols, matrix })
}

/// Results of [`validate_structure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    /// `det` of `bch^k ∪ d'(bch^{k-1})` for `k = 1, 2`.
    pub basis_det: [BigInt; 2],
    pub kernel_equals_image: bool,
    /// Ranks of `d'^0`, `d'^1`.
    pub ranks: [usize; 2],
    pub beta: [usize; 3],
}

/// Basis, kernel/image and rank checks for a halved rank-one complex under CDO.
pub fn validate_structure<F: Scalar>(
    halved: &CochainComplex,
    a: &Analysis<F>,
    q: &RankOneZ,
) -> Result<StructureReport, ComplexError> {
    if !halved.halved || halved.r != 1 {
        return Err(ComplexError::Structure("expects a halved rank-one complex".into()));
    }
    if !cdo_check(a, q)?.holds {
        return Err(ComplexError::NotCdo);
    }
    let fail = |m: String| Err(ComplexError::Structure(m));
    let strata = &a.strata;
    let mut dets = Vec::new();
    for k in 1..=2 {
        let size = strata.ch[k].len();
        let d = halved.differential(k - 1);
        let mut basis = Matrix::zeros(size, size);
        let mut col = 0;
        for &c in &strata.bch[k] {
            basis[(halved.position[c], col)] = 1;
            col += 1;
        }
        for &c in &strata.bch[k - 1] {
            let src = halved.position[c];
            for i in 0..size {
                basis[(i, col)] = d[(i, src)];
            }
            col += 1;
        }
        if col != size {
            return fail(format!("level {k}: {col} candidate basis vectors for rank {size}"));
        }
        let det = determinant(&basis.to_bigint());
        if det.abs() != BigInt::one() {
            return fail(format!("level {k}: basis determinant {det}"));
        }
        dets.push(det);
    }
    let h1 = subquotient(&halved.d0, &halved.d1)?;
    if !h1.is_trivial() {
        return fail(format!("Ker d'^1 / Im d'^0 = {h1}"));
    }
    let ranks = [smith_normal_form(&halved.d0).rank, smith_normal_form(&halved.d1).rank];
    let beta = strata.beta();
    let b = [1i64, a.n() as i64, strata.ch[2].len() as i64];
    let alternating = [
        1,
        (b[0] - b[1]).unsigned_abs() as usize,
        (b[0] - b[1] + b[2]).unsigned_abs() as usize,
    ];
    if beta != alternating {
        return fail(format!("beta {beta:?} differs from alternating sums {alternating:?}"));
    }
    if ranks != [beta[0], beta[1]] {
        return fail(format!("ranks {ranks:?} differ from beta {beta:?}"));
    }
    let [d1, d2]: [BigInt; 2] = dets.try_into().expect("two levels");
    Ok(StructureReport {
        basis_det: [d1, d2],
        kernel_equals_image: true,
        ranks,
        beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_arrangement;
    use crate::localsys::double_cover_rep;
    use crate::qnum::QNum;

    fn analysis(text: &str) -> Analysis<QNum> {
        Analysis::new(parse_arrangement(text).unwrap()).unwrap()
    }

    const THREE: &str = "field Q\n2 -3 0\n1 0 0\n2 3 0";

    #[test]
    fn untwisted_is_zero() {
        let a = analysis(THREE);
        let cx = build_complex(&a, Coefficients::RankOne(&RankOneZ::trivial(3))).unwrap();
        assert!(cx.d0.is_zero() && cx.d1.is_zero());
        assert!(halve(&cx).unwrap().d0.is_zero());
    }

    #[test]
    fn first_differential_three_lines() {
        let a = analysis(THREE);
        let q = RankOneZ::parse("-++", 3).unwrap();
        let cx = build_complex(&a, Coefficients::RankOne(&q)).unwrap();
        assert_eq!(cx.d0.to_rows(), vec![vec![-2], vec![-2], vec![-2]]);
        let h = halve(&cx).unwrap();
        assert_eq!(h.d0.to_rows(), vec![vec![-1], vec![-1], vec![-1]]);
    }

    #[test]
    fn double_cover_shortcut_matches_general_rep() {
        let a = analysis("field Q\n1 0 0\n0 1 0\n1 1 1\n1 -1 3");
        let t = ComplexTemplate::new(&a).unwrap();
        for mask in 1..16u64 {
            let omega = CharClass::from_mask(4, mask).unwrap();
            let fast = t.double_cover(&omega).unwrap();
            let slow = t.with_rep(&double_cover_rep(&omega)).unwrap();
            assert_eq!(fast, slow);
            assert!(fast.is_complex());
        }
    }

    #[test]
    fn square_restriction_three_lines() {
        let a = analysis(THREE);
        let q = RankOneZ::parse("-++", 3).unwrap();
        let cx = build_complex(&a, Coefficients::RankOne(&q)).unwrap();
        let s0 = restrict_square(&cx, &a, 0).unwrap();
        assert_eq!(s0.matrix.rows(), 1);
        s0.check_cdo(false).unwrap();
        let s1 = restrict_square(&cx, &a, 1).unwrap();
        assert_eq!(s1.matrix.rows(), 2);
        s1.check_cdo(false).unwrap();
        let h = halve(&cx).unwrap();
        let s1h = restrict_square(&h, &a, 1).unwrap();
        s1h.check_cdo(true).unwrap();
        assert_eq!(s1h.determinant().abs(), BigInt::one());
        let report = validate_structure(&h, &a, &q).unwrap();
        assert_eq!(report.beta, [1, 2, 0]);
    }

    #[test]
    fn non_cdo_diagonal_has_zero() {
        let a = analysis(THREE);
        let q = RankOneZ::parse("--+", 3).unwrap();
        let cx = build_complex(&a, Coefficients::RankOne(&q)).unwrap();
        let s0 = restrict_square(&cx, &a, 0).unwrap();
        assert!(s0.diagonal().contains(&0));
        let h = halve(&cx).unwrap();
        assert_eq!(validate_structure(&h, &a, &q), Err(ComplexError::NotCdo));
    }

    #[test]
    fn degree_examples() {
        let a = analysis(THREE);
        let c0 = a.strata.ch[0][0];
        for &c in &a.strata.ch[1] {
            assert_eq!(degree(&a, c0, c).unwrap(), 1);
        }
        // opposite pairs at levels 1 -> 2 have degree (-1)^(1 - dim X) = 1
        for &c in &a.strata.bch[1] {
            let cv = a.strata.opposite[c].unwrap();
            assert_eq!(degree(&a, c, cv).unwrap(), 1);
        }
        assert_eq!(degree(&a, c0, c0), Err(ComplexError::Levels(0, 0)));
    }
}
