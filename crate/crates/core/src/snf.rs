//! Smith normal form over ℤ and the (co)homology of short integer complexes.
//!
//! Every routine first runs on `i64` with checked arithmetic and transparently
//! reruns on `BigInt` if an intermediate value overflows.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SnfError {
    #[error("incoming map does not land in the kernel of the outgoing map")]
    NotAComplex,
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

/// Integer types the elimination can run on.
pub trait SnfInt: Clone + PartialEq + Zero + One + fmt::Debug {
    fn add_c(&self, o: &Self) -> Option<Self>;
    fn sub_c(&self, o: &Self) -> Option<Self>;
    fn mul_c(&self, o: &Self) -> Option<Self>;
    /// Truncating quotient.
    fn quot(&self, o: &Self) -> Option<Self>;
    fn neg_c(&self) -> Option<Self>;
    fn is_neg(&self) -> bool;
    /// Compares absolute values.
    fn abs_lt(&self, o: &Self) -> bool;
    fn divides(&self, o: &Self) -> bool;
    fn to_big(&self) -> BigInt;
}

impl SnfInt for i64 {
    fn add_c(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub_c(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn quot(&self, o: &Self) -> Option<Self> {
        self.checked_div(*o)
    }
    fn neg_c(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.unsigned_abs() < o.unsigned_abs()
    }
    fn divides(&self, o: &Self) -> bool {
        *self != 0 && o.checked_rem(*self).is_none_or(|r| r == 0)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl SnfInt for BigInt {
    fn add_c(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub_c(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn quot(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn neg_c(&self) -> Option<Self> {
        Some(-self)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.magnitude() < o.magnitude()
    }
    fn divides(&self, o: &Self) -> bool {
        !self.is_zero() && o.is_multiple_of(self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Debug)]
struct Overflow;

type Checked<T> = Result<T, Overflow>;

fn ck<T>(v: Option<T>) -> Checked<T> {
    v.ok_or(Overflow)
}

/// `row[dst] += f * row[src]`.
fn row_axpy<T: SnfInt>(m: &mut Matrix<T>, dst: usize, src: usize, f: &T) -> Checked<()> {
    for j in 0..m.cols() {
        let s = &m[(src, j)];
        if s.is_zero() {
            continue;
        }
        let v = ck(m[(dst, j)].add_c(&ck(f.mul_c(s))?))?;
        m[(dst, j)] = v;
    }
    Ok(())
}

/// `col[dst] += f * col[src]`.
fn col_axpy<T: SnfInt>(m: &mut Matrix<T>, dst: usize, src: usize, f: &T) -> Checked<()> {
    for i in 0..m.rows() {
        let s = &m[(i, src)];
        if s.is_zero() {
            continue;
        }
        let v = ck(m[(i, dst)].add_c(&ck(f.mul_c(s))?))?;
        m[(i, dst)] = v;
    }
    Ok(())
}

struct Reduction<T> {
    diag: Vec<T>,
    u: Option<Matrix<T>>,
    v: Option<Matrix<T>>,
    v_inv: Option<Matrix<T>>,
}

/// Reduces `a` in place to Smith form. With `transforms`, also tracks
/// unimodular `U`, `V` (and `V⁻¹`) such that `U · A · V = S`.
fn reduce<T: SnfInt>(mut a: Matrix<T>, transforms: bool) -> Checked<Reduction<T>> {
    let (m, n) = (a.rows(), a.cols());
    let mut u = transforms.then(|| Matrix::<T>::identity(m));
    let mut v = transforms.then(|| Matrix::<T>::identity(n));
    let mut v_inv = transforms.then(|| Matrix::<T>::identity(n));
    let mut diag = Vec::new();

    macro_rules! row_op {
        ($dst:expr, $src:expr, $f:expr) => {{
            row_axpy(&mut a, $dst, $src, $f)?;
            if let Some(u) = u.as_mut() {
                row_axpy(u, $dst, $src, $f)?;
            }
        }};
    }
    macro_rules! col_op {
        ($dst:expr, $src:expr, $f:expr) => {{
            col_axpy(&mut a, $dst, $src, $f)?;
            if let Some(v) = v.as_mut() {
                col_axpy(v, $dst, $src, $f)?;
            }
            if let Some(w) = v_inv.as_mut() {
                let g = ck($f.neg_c())?;
                row_axpy(w, $src, $dst, &g)?;
            }
        }};
    }

    'outer: for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &a[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs_lt(&a[(bi, bj)])) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            a.swap_rows(t, pi);
            if let Some(u) = u.as_mut() {
                u.swap_rows(t, pi);
            }
            a.swap_cols(t, pj);
            if let Some(v) = v.as_mut() {
                v.swap_cols(t, pj);
            }
            if let Some(w) = v_inv.as_mut() {
                w.swap_rows(t, pj);
            }
            let p = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = ck(ck(a[(i, t)].quot(&p))?.neg_c())?;
                if !q.is_zero() {
                    row_op!(i, t, &q);
                }
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = ck(ck(a[(t, j)].quot(&p))?.neg_c())?;
                if !q.is_zero() {
                    col_op!(j, t, &q);
                }
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !p.divides(&a[(i, j)])));
            match bad {
                Some(i) => row_op!(t, i, &T::one()),
                None => break,
            }
        }
        if a[(t, t)].is_neg() {
            let minus = ck(T::one().neg_c())?;
            for j in 0..n {
                let x = ck(a[(t, j)].mul_c(&minus))?;
                a[(t, j)] = x;
            }
            if let Some(u) = u.as_mut() {
                for j in 0..m {
                    let x = ck(u[(t, j)].mul_c(&minus))?;
                    u[(t, j)] = x;
                }
            }
        }
        diag.push(a[(t, t)].clone());
    }
    Ok(Reduction { diag, u, v, v_inv })
}

/// Nonzero invariant factors `d1 | d2 | …` and the rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

/// Smith form with transforms: `u · m · v = s`, `v_inv = v⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub s: Matrix<BigInt>,
    pub u: Matrix<BigInt>,
    pub v: Matrix<BigInt>,
    pub v_inv: Matrix<BigInt>,
    pub rank: usize,
}

fn snf_generic<T: SnfInt>(m: &Matrix<T>) -> Checked<Snf> {
    let r = reduce(m.clone(), false)?;
    Ok(Snf {
        rank: r.diag.len(),
        invariant_factors: r.diag.iter().map(SnfInt::to_big).collect(),
    })
}

pub fn smith_normal_form(m: &Matrix<i64>) -> Snf {
    snf_generic(m).unwrap_or_else(|_| snf_generic(&m.to_bigint()).expect("BigInt never overflows"))
}

pub fn smith_normal_form_big(m: &Matrix<BigInt>) -> Snf {
    snf_generic(m).expect("BigInt never overflows")
}

/// Full decomposition; the identity `u · m · v = s` is checked before returning.
pub fn smith_decomposition(m: &Matrix<BigInt>) -> SnfDecomposition {
    let r = reduce(m.clone(), true).expect("BigInt never overflows");
    let mut s = Matrix::zeros(m.rows(), m.cols());
    for (i, d) in r.diag.iter().enumerate() {
        s[(i, i)] = d.clone();
    }
    let (u, v, v_inv) = (r.u.unwrap(), r.v.unwrap(), r.v_inv.unwrap());
    assert_eq!(&(&u * m) * &v, s, "Smith transforms do not reproduce the normal form");
    assert_eq!(
        &v * &v_inv,
        Matrix::identity(m.cols()),
        "column transform inverse is wrong"
    );
    SnfDecomposition {
        s,
        u,
        v,
        v_inv,
        rank: r.diag.len(),
    }
}

/// A finitely generated abelian group `ℤ^free ⊕ ⊕ ℤ/t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// Invariant factors greater than 1, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        debug_assert!(torsion.iter().all(|t| t > &BigInt::one()));
        debug_assert!(torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        AbelianGroup { free_rank, torsion }
    }

    /// From machine integers; factors equal to 1 are dropped.
    pub fn from_parts(free_rank: usize, torsion: &[u64]) -> Self {
        AbelianGroup::new(
            free_rank,
            torsion.iter().filter(|&&t| t > 1).map(|&t| BigInt::from(t)).collect(),
        )
    }

    pub fn trivial() -> Self {
        AbelianGroup::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn has_torsion(&self) -> bool {
        !self.torsion.is_empty()
    }

    /// Number of invariant factors divisible by `p`.
    pub fn p_torsion_count(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.torsion.iter().filter(|t| t.is_multiple_of(&p)).count()
    }

    pub fn torsion_u64(&self) -> Vec<Option<u64>> {
        self.torsion.iter().map(ToPrimitive::to_u64).collect()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == t).count();
            parts.push(if run == 1 {
                format!("Z/{t}")
            } else {
                format!("(Z/{t})^{run}")
            });
            i += run;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Torsion<'a>(&'a [BigInt]);
        impl Serialize for Torsion<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for t in self.0 {
                    match t.to_u64() {
                        Some(v) => seq.serialize_element(&v)?,
                        None => seq.serialize_element(&t.to_string())?,
                    }
                }
                seq.end()
            }
        }
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("free", &self.free_rank)?;
        map.serialize_entry("torsion", &Torsion(&self.torsion))?;
        map.end()
    }
}

fn checked_product<T: SnfInt>(a: &Matrix<T>, b: &Matrix<T>) -> Checked<Matrix<T>> {
    let mut out = Matrix::<T>::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            let x = &a[(i, k)];
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols() {
                let y = &b[(k, j)];
                if !y.is_zero() {
                    out[(i, j)] = ck(out[(i, j)].add_c(&ck(x.mul_c(y))?))?;
                }
            }
        }
    }
    Ok(out)
}

fn group_from_factors<T: SnfInt>(free: usize, diag: &[T]) -> AbelianGroup {
    let one = T::one();
    AbelianGroup::new(free, diag.iter().filter(|d| **d != one).map(SnfInt::to_big).collect())
}

/// `ker(outgoing) / im(incoming)` at a position of dimension `n`.
///
/// The kernel is spanned by the last columns of the column transform of
/// `outgoing`; the image is rewritten in those coordinates and reduced.
fn subquotient_generic<T: SnfInt>(
    incoming: &Matrix<T>,
    outgoing: &Matrix<T>,
) -> Checked<Result<AbelianGroup, SnfError>> {
    let n = incoming.rows();
    let red = reduce(outgoing.clone(), true)?;
    let r = red.diag.len();
    let v_inv = red.v_inv.expect("requested");
    let coords = checked_product(&v_inv, incoming)?;
    for i in 0..r {
        if coords.row(i).iter().any(|x| !x.is_zero()) {
            return Ok(Err(SnfError::NotAComplex));
        }
    }
    let x = coords.rows_from(r);
    let sx = reduce(x, false)?;
    Ok(Ok(group_from_factors(n - r - sx.diag.len(), &sx.diag)))
}

fn check_shapes<T>(incoming: &Matrix<T>, outgoing: &Matrix<T>) -> Result<(), SnfError> {
    if incoming.rows() != outgoing.cols() {
        return Err(SnfError::Shape(format!(
            "incoming map has {} rows, outgoing map has {} columns",
            incoming.rows(),
            outgoing.cols()
        )));
    }
    Ok(())
}

/// `ker(outgoing) / im(incoming)`; `incoming` is `n × p`, `outgoing` is `q × n`.
pub fn subquotient(incoming: &Matrix<i64>, outgoing: &Matrix<i64>) -> Result<AbelianGroup, SnfError> {
    check_shapes(incoming, outgoing)?;
    match subquotient_generic(incoming, outgoing) {
        Ok(r) => r,
        Err(Overflow) => {
            subquotient_generic(&incoming.to_bigint(), &outgoing.to_bigint()).expect("BigInt never overflows")
        }
    }
}

/// Same group as [`subquotient`], computed from ranks and the invariant
/// factors of `incoming` alone. Valid because the kernel of `outgoing` is a
/// direct summand, so the torsion of the subquotient is that of `coker(incoming)`.
pub fn subquotient_fast(incoming: &Matrix<i64>, outgoing: &Matrix<i64>) -> Result<AbelianGroup, SnfError> {
    check_shapes(incoming, outgoing)?;
    let sin = smith_normal_form(incoming);
    let rank_out = smith_normal_form(outgoing).rank;
    let n = incoming.rows();
    let one = BigInt::one();
    Ok(AbelianGroup::new(
        n - rank_out - sin.rank,
        sin.invariant_factors.into_iter().filter(|d| *d != one).collect(),
    ))
}

/// `(H⁰, H¹, H²)` of `ℤ^{n0} →d0 ℤ^{n1} →d1 ℤ^{n2}`.
pub fn cohomology_groups(d0: &Matrix<i64>, d1: &Matrix<i64>) -> Result<[AbelianGroup; 3], SnfError> {
    let n0 = d0.cols();
    let n2 = d1.rows();
    Ok([
        subquotient(&Matrix::zeros(n0, 0), d0)?,
        subquotient(d0, d1)?,
        subquotient(d1, &Matrix::zeros(0, n2))?,
    ])
}

/// `(H₀, H₁, H₂)` of the transposed complex `ℤ^{n2} →d1ᵀ ℤ^{n1} →d0ᵀ ℤ^{n0}`.
pub fn homology_groups(d0: &Matrix<i64>, d1: &Matrix<i64>) -> Result<[AbelianGroup; 3], SnfError> {
    let (t0, t1) = (d0.transpose(), d1.transpose());
    let n0 = d0.cols();
    let n2 = d1.rows();
    Ok([
        subquotient(&t0, &Matrix::zeros(0, n0))?,
        subquotient(&t1, &t0)?,
        subquotient(&Matrix::zeros(n2, 0), &t1)?,
    ])
}

/// Rank over `𝔽_p` by Gaussian elimination.
pub fn rank_mod_p(m: &Matrix<i64>, p: u64) -> usize {
    let p = p as i64;
    let mut a = m.map(|v| v.rem_euclid(p));
    let (rows, cols) = (a.rows(), a.cols());
    let inv = |x: i64| {
        // Fermat, p prime
        let mut r = 1i64;
        let mut b = x;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| a[(i, c)] != 0) else {
            continue;
        };
        a.swap_rows(rank, piv);
        let f = inv(a[(rank, c)]);
        for j in 0..cols {
            a[(rank, j)] = a[(rank, j)] * f % p;
        }
        for i in 0..rows {
            if i != rank && a[(i, c)] != 0 {
                let g = a[(i, c)];
                for j in 0..cols {
                    a[(i, j)] = (a[(i, j)] - g * a[(rank, j)]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &Matrix<BigInt>) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}
