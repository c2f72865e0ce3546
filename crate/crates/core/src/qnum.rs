//! Exact elements of ℚ or a real quadratic field ℚ(√D).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::{coprime_scale, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("malformed scalar `{0}`")]
    Malformed(String),
    #[error("quadratic coefficient `{0}` used without a declared discriminant")]
    MissingDiscriminant(String),
    #[error("discriminant {0} is not a square-free integer greater than 1")]
    BadDiscriminant(u64),
}

/// `a + b·√d`. When `b == 0` the radical is dropped and `d == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QNum {
    a: BigRational,
    b: BigRational,
    d: u64,
}

pub fn is_square_free(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl QNum {
    pub fn rational(a: BigRational) -> Self {
        QNum {
            a,
            b: BigRational::zero(),
            d: 0,
        }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        QNum::rational(BigRational::new(n.into(), d.into()))
    }

    pub fn new(a: BigRational, b: BigRational, d: u64) -> Result<Self, ScalarError> {
        if b.is_zero() {
            return Ok(QNum::rational(a));
        }
        if !is_square_free(d) {
            return Err(ScalarError::BadDiscriminant(d));
        }
        Ok(QNum { a, b, d })
    }

    /// `√d` itself.
    pub fn sqrt(d: u64) -> Result<Self, ScalarError> {
        QNum::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    /// The discriminant carried by this value, if it is irrational.
    pub fn discriminant(&self) -> Option<u64> {
        (self.d != 0).then_some(self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn join(d1: u64, d2: u64) -> u64 {
        match (d1, d2) {
            (0, d) | (d, 0) => d,
            (x, y) if x == y => x,
            (x, y) => panic!("mixing ℚ(√{x}) and ℚ(√{y})"),
        }
    }

    fn make(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() {
            QNum::rational(a)
        } else {
            QNum { a, b, d }
        }
    }

    /// Galois conjugate `a - b√d`.
    pub fn conjugate(&self) -> Self {
        QNum::make(self.a.clone(), -self.b.clone(), self.d)
    }

    /// Field norm `a² - d·b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(self.d.into()) * &self.b * &self.b
    }

    pub fn inverse(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "division by zero in QNum");
        QNum::make(&self.a / &n, -(&self.b / &n), self.d)
    }

    /// Parse `p`, `p/q`, or `(p/q,r/s)` (the latter meaning `p/q + r/s·√d`).
    pub fn parse(s: &str, d: Option<u64>) -> Result<Self, ScalarError> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            let (x, y) = inner
                .split_once(',')
                .ok_or_else(|| ScalarError::Malformed(s.to_string()))?;
            let a = parse_rational(x).ok_or_else(|| ScalarError::Malformed(s.to_string()))?;
            let b = parse_rational(y).ok_or_else(|| ScalarError::Malformed(s.to_string()))?;
            if b.is_zero() {
                return Ok(QNum::rational(a));
            }
            match d {
                Some(d) => QNum::new(a, b, d),
                None => Err(ScalarError::MissingDiscriminant(s.to_string())),
            }
        } else {
            parse_rational(s)
                .map(QNum::rational)
                .ok_or_else(|| ScalarError::Malformed(s.to_string()))
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            fmt_rational(&self.a, f)
        } else {
            write!(f, "(")?;
            fmt_rational(&self.a, f)?;
            write!(f, ",")?;
            fmt_rational(&self.b, f)?;
            write!(f, ")")
        }
    }
}

impl fmt::Debug for QNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{self}")
        } else {
            write!(f, "{self}@√{}", self.d)
        }
    }
}

impl Add for QNum {
    type Output = QNum;
    fn add(self, rhs: QNum) -> QNum {
        let d = QNum::join(self.d, rhs.d);
        QNum::make(self.a + rhs.a, self.b + rhs.b, d)
    }
}

impl Sub for QNum {
    type Output = QNum;
    fn sub(self, rhs: QNum) -> QNum {
        let d = QNum::join(self.d, rhs.d);
        QNum::make(self.a - rhs.a, self.b - rhs.b, d)
    }
}

impl Mul for QNum {
    type Output = QNum;
    fn mul(self, rhs: QNum) -> QNum {
        let d = QNum::join(self.d, rhs.d);
        if self.b.is_zero() {
            return QNum::make(&self.a * rhs.a, &self.a * rhs.b, d);
        }
        if rhs.b.is_zero() {
            return QNum::make(self.a * &rhs.a, self.b * &rhs.a, d);
        }
        let dd = BigRational::from_integer(d.into());
        let a = &self.a * &rhs.a + dd * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QNum::make(a, b, d)
    }
}

impl Div for QNum {
    type Output = QNum;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: QNum) -> QNum {
        if rhs.b.is_zero() {
            assert!(!rhs.a.is_zero(), "division by zero in QNum");
            let d = self.d;
            return QNum::make(self.a / &rhs.a, self.b / &rhs.a, d);
        }
        self * rhs.inverse()
    }
}

impl Neg for QNum {
    type Output = QNum;
    fn neg(self) -> QNum {
        QNum::make(-self.a, -self.b, self.d)
    }
}

impl Zero for QNum {
    fn zero() -> Self {
        QNum::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QNum {
    fn one() -> Self {
        QNum::rational(BigRational::one())
    }
}

impl Scalar for QNum {
    fn sign(&self) -> Ordering {
        let sa = self.a.sign();
        let sb = self.b.sign();
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: the larger of a² and d·b² wins
        let a2 = &self.a * &self.a;
        let db2 = BigRational::from_integer(self.d.into()) * &self.b * &self.b;
        match a2.cmp(&db2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => unreachable!("√{} is irrational", self.d),
        }
    }

    fn from_int(v: i64) -> Self {
        QNum::rational(BigRational::from_integer(v.into()))
    }

    fn to_f64(&self) -> f64 {
        let a = ToPrimitive::to_f64(&self.a).unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        a + ToPrimitive::to_f64(&self.b).unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    fn integral_rescale(values: &[Self]) -> Option<Self> {
        if values.iter().all(QNum::is_rational) {
            coprime_scale(values.iter().map(|v| &v.a)).map(QNum::rational)
        } else {
            None
        }
    }
}

impl PartialOrd for QNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.compare(other))
    }
}
