//! Sign characters, double-cover representations, the CDO-condition and
//! the twisted coefficients `Δ(C, C')`.

use thiserror::Error;

use crate::chambers::{Analysis, Chamber, Infinity, Side};
use crate::lineset::LineSet;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalSysError {
    #[error("expected {expected} symbols, got {got}")]
    Length { expected: usize, got: usize },
    #[error("invalid symbol `{0}`")]
    Symbol(char),
    #[error("characteristic class must be nonzero")]
    ZeroClass,
    #[error("matrix for line {0} is not an involution")]
    NotInvolution(usize),
    #[error("matrices for lines {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("matrix for line {0} is not {1}x{1}")]
    Dimension(usize, usize),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// A rank-one local system with monodromy `q_i ∈ {±1}` around line `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankOneZ {
    negative: LineSet,
    n: usize,
}

impl RankOneZ {
    pub fn trivial(n: usize) -> Self {
        RankOneZ {
            negative: LineSet::empty(n),
            n,
        }
    }

    pub fn from_signs(q: &[i8]) -> Self {
        let n = q.len();
        RankOneZ {
            negative: LineSet::from_indices(n, (0..n).filter(|&i| q[i] < 0)),
            n,
        }
    }

    /// Lines with `q_i = -1` given by the bits of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        RankOneZ {
            negative: LineSet::from_indices(n, (0..n).filter(|&i| mask >> i & 1 == 1)),
            n,
        }
    }

    /// Parses a string over `{+, -}`, one symbol per line.
    pub fn parse(s: &str, n: usize) -> Result<Self, LocalSysError> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != n {
            return Err(LocalSysError::Length {
                expected: n,
                got: chars.len(),
            });
        }
        let mut q = Vec::with_capacity(n);
        for c in chars {
            q.push(match c {
                '+' => 1,
                '-' => -1,
                other => return Err(LocalSysError::Symbol(other)),
            });
        }
        Ok(RankOneZ::from_signs(&q))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn q(&self, i: usize) -> i64 {
        if self.negative.contains(i) {
            -1
        } else {
            1
        }
    }

    pub fn negative(&self) -> &LineSet {
        &self.negative
    }

    /// `Π_{i ∈ set} q_i`.
    pub fn product(&self, set: &LineSet) -> i64 {
        if self.negative.intersection_len(set).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Monodromy around the line at infinity, `Π q_i^{-1}`.
    pub fn q_infinity(&self) -> i64 {
        if self.negative.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.negative.is_empty()
    }
}

impl std::fmt::Display for RankOneZ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.n {
            write!(f, "{}", if self.negative.contains(i) { '-' } else { '+' })?;
        }
        Ok(())
    }
}

/// A nonzero class `ω ∈ H¹(M; ℤ₂)`, one bit per line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharClass {
    bits: LineSet,
    n: usize,
}

impl CharClass {
    pub fn from_mask(n: usize, mask: u64) -> Result<Self, LocalSysError> {
        let bits = LineSet::from_indices(n, (0..n).filter(|&i| mask >> i & 1 == 1));
        CharClass::from_set(bits, n)
    }

    pub fn from_set(bits: LineSet, n: usize) -> Result<Self, LocalSysError> {
        if bits.is_empty() {
            return Err(LocalSysError::ZeroClass);
        }
        Ok(CharClass { bits, n })
    }

    /// Parses a string over `{0, 1}`, one symbol per line.
    pub fn parse(s: &str, n: usize) -> Result<Self, LocalSysError> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != n {
            return Err(LocalSysError::Length {
                expected: n,
                got: chars.len(),
            });
        }
        let mut bits = LineSet::empty(n);
        for (i, c) in chars.into_iter().enumerate() {
            match c {
                '0' => {}
                '1' => bits.insert(i),
                other => return Err(LocalSysError::Symbol(other)),
            }
        }
        CharClass::from_set(bits, n)
    }

    pub fn bits(&self) -> &LineSet {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// The rank-one system `ℒ_ω` with `q_i = (-1)^{ω_i}`.
    pub fn sign_character(&self) -> RankOneZ {
        RankOneZ {
            negative: self.bits.clone(),
            n: self.n,
        }
    }
}

impl std::fmt::Display for CharClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.n {
            write!(f, "{}", if self.bits.contains(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// A representation sending the meridian of line `i` to `t[i]`: commuting
/// integer involutions of a common size `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRep {
    r: usize,
    t: Vec<Matrix<i64>>,
}

impl MatrixRep {
    pub fn new(r: usize, t: Vec<Matrix<i64>>) -> Result<Self, LocalSysError> {
        let id = Matrix::identity(r);
        for (i, m) in t.iter().enumerate() {
            if m.rows() != r || m.cols() != r {
                return Err(LocalSysError::Dimension(i, r));
            }
            if (m * m) != id {
                return Err(LocalSysError::NotInvolution(i));
            }
        }
        for i in 0..t.len() {
            for j in 0..i {
                if &t[i] * &t[j] != &t[j] * &t[i] {
                    return Err(LocalSysError::NotCommuting(j, i));
                }
            }
        }
        Ok(MatrixRep { r, t })
    }

    /// The 1×1 representation of a sign character.
    pub fn from_rank_one(q: &RankOneZ) -> Self {
        let t = (0..q.len()).map(|i| Matrix::from_rows(vec![vec![q.q(i)]])).collect();
        MatrixRep { r: 1, t }
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn matrix(&self, i: usize) -> &Matrix<i64> {
        &self.t[i]
    }

    /// `Π_{i ∈ set} T_i` (order irrelevant by commutativity).
    pub fn product(&self, set: &LineSet) -> Matrix<i64> {
        set.iter().fold(Matrix::identity(self.r), |acc, i| &acc * &self.t[i])
    }

    /// True when every matrix equals its transpose; with `T_i² = I` this
    /// makes the local system self-dual.
    pub fn is_self_transpose(&self) -> bool {
        self.t.iter().all(|m| m.transpose() == *m)
    }
}

pub fn swap_matrix() -> Matrix<i64> {
    Matrix::from_rows(vec![vec![0, 1], vec![1, 0]])
}

/// The regular `ℤ[ℤ₂]` representation of the double cover defined by `ω`.
pub fn double_cover_rep(omega: &CharClass) -> MatrixRep {
    let t = (0..omega.len())
        .map(|i| {
            if omega.bits().contains(i) {
                swap_matrix()
            } else {
                Matrix::identity(2)
            }
        })
        .collect();
    MatrixRep { r: 2, t }
}

/// Value of `Δ` for a rank-one sign system, given the number of
/// separating lines with `q_i = -1`.
pub fn delta_from_twists(t: usize) -> i64 {
    match t % 4 {
        1 => -2,
        3 => 2,
        _ => 0,
    }
}

pub fn delta_rank1<F>(c: &Chamber<F>, c2: &Chamber<F>, q: &RankOneZ) -> i64 {
    let t = (0..q.len())
        .filter(|&i| c.sign[i] != c2.sign[i] && q.q(i) == -1)
        .count();
    delta_from_twists(t)
}

/// Lines crossed from the negative to the positive side, and back, when
/// moving from `c` to `c2`.
pub fn crossing_sets<F>(c: &Chamber<F>, c2: &Chamber<F>) -> (LineSet, LineSet) {
    let n = c.sign.len();
    let plus = (0..n).filter(|&i| c.sign[i] == Side::Neg && c2.sign[i] == Side::Pos);
    let minus = (0..n).filter(|&i| c.sign[i] == Side::Pos && c2.sign[i] == Side::Neg);
    (LineSet::from_indices(n, plus), LineSet::from_indices(n, minus))
}

/// `Π_{ε=+} T_i - Π_{ε=-} T_i` over the lines separating `c` and `c2`.
pub fn delta_matrix<F>(c: &Chamber<F>, c2: &Chamber<F>, rep: &MatrixRep) -> Result<Matrix<i64>, LocalSysError> {
    if rep.len() != c.sign.len() {
        return Err(LocalSysError::Length {
            expected: c.sign.len(),
            got: rep.len(),
        });
    }
    let (plus, minus) = crossing_sets(c, c2);
    let a = rep.product(&plus);
    let b = rep.product(&minus);
    Ok(&a - &b)
}

/// Outcome of the CDO-condition check.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CdoReport {
    pub holds: bool,
    /// Dense edges at infinity with trivial monodromy.
    pub witnesses: Vec<String>,
}

pub const H_INFINITY: &str = "H_infinity";

/// Name of the point at infinity of a parallel class (1-based line labels).
pub fn direction_point_name(class: &[usize]) -> String {
    let labels: Vec<String> = class.iter().map(|i| format!("H{}", i + 1)).collect();
    format!("P_infinity({})", labels.join(","))
}

/// Checks `q_X ≠ 1` on every dense edge at infinity, once from the
/// intersection data and once from opposite-chamber pairs; the two must agree.
pub fn cdo_check<F: Scalar>(a: &Analysis<F>, q: &RankOneZ) -> Result<CdoReport, LocalSysError> {
    if q.len() != a.n() {
        return Err(LocalSysError::Length {
            expected: a.n(),
            got: q.len(),
        });
    }
    let q_inf = q.q_infinity();
    // poset route: H_infinity and the direction points of classes with >= 2 lines
    let mut poset_fail: Vec<String> = Vec::new();
    if q_inf == 1 {
        poset_fail.push(H_INFINITY.to_string());
    }
    for class in &a.poset.classes {
        if class.len() < 2 {
            continue;
        }
        let prod: i64 = class.iter().map(|&i| q.q(i)).product();
        if q_inf * prod == 1 {
            poset_fail.push(direction_point_name(class));
        }
    }
    // chamber route: Π_{Sep(C, C^∨)} q_i over unbounded chambers
    let mut chamber_fail: Vec<String> = Vec::new();
    for c in a.chambers.iter().filter(|c| !c.bounded) {
        let opp = a.strata.opposite[c.id].expect("unbounded chamber has an opposite");
        if q.product(&a.chambers.sep(c.id, opp)) == 1 {
            let name = match c.infinity {
                Infinity::FullLine => H_INFINITY.to_string(),
                Infinity::DirectionPoint(d) => direction_point_name(&a.poset.classes[d]),
                Infinity::Bounded => unreachable!(),
            };
            if !chamber_fail.contains(&name) {
                chamber_fail.push(name);
            }
        }
    }
    let mut p = poset_fail.clone();
    let mut c = chamber_fail;
    p.sort();
    c.sort();
    if p != c {
        return Err(LocalSysError::Internal(format!(
            "CDO routes disagree: intersection data {p:?}, chambers {c:?}"
        )));
    }
    Ok(CdoReport {
        holds: poset_fail.is_empty(),
        witnesses: poset_fail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_arrangement;
    use crate::qnum::QNum;

    fn analysis(text: &str) -> Analysis<QNum> {
        Analysis::new(parse_arrangement(text).unwrap()).unwrap()
    }

    const THREE: &str = "field Q\n2 -3 0\n1 0 0\n2 3 0";

    #[test]
    fn parse_characters() {
        let q = RankOneZ::parse("-++", 3).unwrap();
        assert_eq!((q.q(0), q.q(1), q.q(2)), (-1, 1, 1));
        assert_eq!(q.to_string(), "-++");
        assert_eq!(
            RankOneZ::parse("-+", 3),
            Err(LocalSysError::Length { expected: 3, got: 2 })
        );
        assert_eq!(RankOneZ::parse("-x+", 3), Err(LocalSysError::Symbol('x')));
        assert_eq!(CharClass::parse("000", 3), Err(LocalSysError::ZeroClass));
        assert_eq!(CharClass::parse("101", 3).unwrap().to_string(), "101");
    }

    #[test]
    fn cdo_three_lines() {
        let a = analysis(THREE);
        let r = cdo_check(&a, &RankOneZ::parse("-++", 3).unwrap()).unwrap();
        assert!(r.holds);
        let r = cdo_check(&a, &RankOneZ::parse("--+", 3).unwrap()).unwrap();
        assert_eq!(
            r,
            CdoReport {
                holds: false,
                witnesses: vec![H_INFINITY.into()]
            }
        );
    }

    #[test]
    fn cdo_parallel_pair() {
        let a = analysis("field Q\n1 0 0\n1 0 1");
        let r = cdo_check(&a, &RankOneZ::parse("--", 2).unwrap()).unwrap();
        assert!(!r.holds);
        assert!(r.witnesses.contains(&"P_infinity(H1,H2)".to_string()));
        assert!(r.witnesses.contains(&H_INFINITY.to_string()));
    }

    #[test]
    fn delta_table() {
        assert_eq!(delta_from_twists(0), 0);
        assert_eq!(delta_from_twists(1), -2);
        assert_eq!(delta_from_twists(2), 0);
        assert_eq!(delta_from_twists(3), 2);
        assert_eq!(delta_from_twists(5), -2);
    }

    #[test]
    fn delta_matrix_single_crossing() {
        let a = analysis("field Q\n1 0 0\n0 1 0");
        let neg = a.chambers.find(&[Side::Neg, Side::Pos]).unwrap();
        let pos = a.chambers.find(&[Side::Pos, Side::Pos]).unwrap();
        let rep = double_cover_rep(&CharClass::parse("10", 2).unwrap());
        let d = delta_matrix(a.chambers.get(neg), a.chambers.get(pos), &rep).unwrap();
        assert_eq!(d, Matrix::from_rows(vec![vec![-1, 1], vec![1, -1]]));
        let zero = delta_matrix(a.chambers.get(neg), a.chambers.get(neg), &rep).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn double_cover_rep_shape() {
        let rep = double_cover_rep(&CharClass::parse("10", 2).unwrap());
        assert_eq!(rep.matrix(0), &swap_matrix());
        assert_eq!(rep.matrix(1), &Matrix::identity(2));
        assert!(MatrixRep::new(2, vec![swap_matrix(), Matrix::identity(2)]).is_ok());
        let bad = Matrix::from_rows(vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(MatrixRep::new(2, vec![bad]), Err(LocalSysError::NotInvolution(0)));
        let refl = Matrix::from_rows(vec![vec![1, 0], vec![0, -1]]);
        assert_eq!(
            MatrixRep::new(2, vec![swap_matrix(), refl]),
            Err(LocalSysError::NotCommuting(0, 1))
        );
    }

    #[test]
    fn rank_one_delta_vanishing_matches() {
        // exhaustive over sign patterns of up to 4 separating lines
        for k in 0..=4usize {
            for qmask in 0..1u64 << k {
                for dir in 0..1u64 << k {
                    let q = RankOneZ::from_mask(k, qmask);
                    let mk = |s: &dyn Fn(usize) -> Side| Chamber {
                        id: 0,
                        sign: (0..k).map(s).collect(),
                        witness: crate::geometry::Point2::new(0.0f64, 0.0),
                        bounded: false,
                        infinity: Infinity::FullLine,
                    };
                    let c = mk(&|i| if dir >> i & 1 == 1 { Side::Neg } else { Side::Pos });
                    let c2 = mk(&|i| if dir >> i & 1 == 1 { Side::Pos } else { Side::Neg });
                    let d = delta_matrix(&c, &c2, &MatrixRep::from_rank_one(&q)).unwrap()[(0, 0)];
                    let all = LineSet::from_indices(k, 0..k);
                    assert_eq!(d == 0, q.product(&all) == 1);
                    assert_eq!(delta_rank1(&c, &c2, &q) == 0, q.product(&all) == 1);
                    assert_eq!(delta_rank1(&c, &c2, &q), delta_rank1(&c2, &c, &q));
                }
            }
        }
    }
}
