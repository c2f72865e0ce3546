//! Affine line arrangements over an exact field, their intersection data,
//! and deconing of central plane arrangements.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::qnum::{is_square_free, QNum, ScalarError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("line {line}: {source}")]
    Scalar { line: usize, source: ScalarError },
    #[error("line {0}: expected {1} scalars")]
    Arity(usize, usize),
    #[error("missing or malformed field header (expected `field Q` or `field Q(sqrt D)`)")]
    Header,
    #[error("discriminant {0} is not a square-free integer greater than 1")]
    Discriminant(u64),
    #[error("equation {0} has a zero normal vector")]
    ZeroNormal(usize),
    #[error("equations {0} and {1} define the same line")]
    DuplicateLine(usize, usize),
    #[error("planes {0} and {1} coincide")]
    DuplicatePlane(usize, usize),
    #[error("arrangement is empty")]
    Empty,
    #[error("deconing needs at least 2 planes")]
    TooFewPlanes,
    #[error("plane index {0} out of range")]
    InfinityIndex(usize),
    #[error("expected an affine arrangement file, found a central one")]
    NotAffine,
    #[error("expected a central3 file")]
    NotCentral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point2<F> {
    pub x: F,
    pub y: F,
}

impl<F: Scalar> Point2<F> {
    pub fn new(x: F, y: F) -> Self {
        Point2 { x, y }
    }
}

pub(crate) fn cross<F: Scalar>(u: (&F, &F), v: (&F, &F)) -> F {
    u.0.clone() * v.1.clone() - u.1.clone() * v.0.clone()
}

/// `a·x + b·y = c`, stored canonically: the first nonzero of `(a, b)` is
/// positive, and rational equations use coprime integer coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LineEq<F> {
    pub a: F,
    pub b: F,
    pub c: F,
}

fn normalize_coeffs<F: Scalar>(coeffs: &mut [F], lead_count: usize) -> bool {
    let Some(lead) = coeffs[..lead_count].iter().find(|v| !v.is_zero()).cloned() else {
        return false;
    };
    for v in coeffs.iter_mut() {
        *v = v.clone() / lead.clone();
    }
    if let Some(scale) = F::integral_rescale(coeffs) {
        for v in coeffs.iter_mut() {
            *v = v.clone() * scale.clone();
        }
    }
    true
}

impl<F: Scalar> LineEq<F> {
    /// Builds a normalized line; `None` when `(a, b) = (0, 0)`.
    pub fn new(a: F, b: F, c: F) -> Option<Self> {
        let mut v = [a, b, c];
        if !normalize_coeffs(&mut v, 2) {
            return None;
        }
        let [a, b, c] = v;
        Some(LineEq { a, b, c })
    }

    /// `a·x + b·y - c`; its sign gives the side of the line.
    pub fn eval(&self, p: &Point2<F>) -> F {
        self.a.clone() * p.x.clone() + self.b.clone() * p.y.clone() - self.c.clone()
    }

    pub fn is_parallel(&self, other: &LineEq<F>) -> bool {
        cross((&self.a, &self.b), (&other.a, &other.b)).is_zero()
    }

    pub fn intersect(&self, other: &LineEq<F>) -> Option<Point2<F>> {
        let det = cross((&self.a, &self.b), (&other.a, &other.b));
        if det.is_zero() {
            return None;
        }
        let x = cross((&self.c, &self.b), (&other.c, &other.b)) / det.clone();
        let y = cross((&self.a, &self.c), (&other.a, &other.c)) / det;
        Some(Point2 { x, y })
    }

    pub fn contains(&self, p: &Point2<F>) -> bool {
        self.eval(p).is_zero()
    }
}

/// An ordered list of distinct affine lines. `discriminant` records the
/// quadratic field the coefficients live in (absent for ℚ).
#[derive(Debug, Clone, PartialEq)]
pub struct Arrangement<F> {
    lines: Vec<LineEq<F>>,
    discriminant: Option<u64>,
}

impl<F: Scalar> Arrangement<F> {
    pub fn new(lines: Vec<LineEq<F>>, discriminant: Option<u64>) -> Result<Self, GeometryError> {
        if lines.is_empty() {
            return Err(GeometryError::Empty);
        }
        for i in 0..lines.len() {
            for j in 0..i {
                if lines[i] == lines[j] {
                    return Err(GeometryError::DuplicateLine(j + 1, i + 1));
                }
            }
        }
        Ok(Arrangement { lines, discriminant })
    }

    /// Normalizes raw `(a, b, c)` triples, rejecting zero normals and duplicates.
    pub fn from_coefficients(coeffs: Vec<(F, F, F)>, discriminant: Option<u64>) -> Result<Self, GeometryError> {
        let lines = coeffs
            .into_iter()
            .enumerate()
            .map(|(i, (a, b, c))| LineEq::new(a, b, c).ok_or(GeometryError::ZeroNormal(i + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        Arrangement::new(lines, discriminant)
    }

    pub fn lines(&self) -> &[LineEq<F>] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn discriminant(&self) -> Option<u64> {
        self.discriminant
    }

    /// The subarrangement on the given (0-based) line indices, in that order.
    pub fn subarrangement(&self, indices: &[usize]) -> Result<Self, GeometryError> {
        let lines = indices.iter().map(|&i| self.lines[i].clone()).collect();
        Arrangement::new(lines, self.discriminant)
    }
}

/// A multiple point of the arrangement with the (0-based) lines through it.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoint<F> {
    pub at: Point2<F>,
    pub lines: Vec<usize>,
}

impl<F> MultiPoint<F> {
    pub fn multiplicity(&self) -> usize {
        self.lines.len()
    }
}

/// Intersection data of a line arrangement: the 0-dimensional flats and
/// the partition of lines into parallel classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Poset2<F> {
    pub points: Vec<MultiPoint<F>>,
    pub classes: Vec<Vec<usize>>,
}

impl<F: Scalar> Poset2<F> {
    /// Index of the parallel class containing `line`.
    pub fn class_of(&self, line: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.contains(&line))
            .expect("every line belongs to a parallel class")
    }
}

pub fn intersection_poset<F: Scalar>(arr: &Arrangement<F>) -> Poset2<F> {
    let lines = arr.lines();
    let mut points: Vec<MultiPoint<F>> = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        match classes.iter_mut().find(|c| lines[c[0]].is_parallel(line)) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
        for (j, other) in lines.iter().enumerate().take(i) {
            let Some(p) = other.intersect(line) else { continue };
            match points.iter_mut().find(|mp| mp.at == p) {
                Some(mp) => {
                    if !mp.lines.contains(&j) {
                        mp.lines.push(j);
                    }
                    if !mp.lines.contains(&i) {
                        mp.lines.push(i);
                    }
                }
                None => points.push(MultiPoint {
                    at: p,
                    lines: vec![j, i],
                }),
            }
        }
    }
    for mp in &mut points {
        mp.lines.sort_unstable();
    }
    points.sort_by(|p, q| p.at.x.compare(&q.at.x).then_with(|| p.at.y.compare(&q.at.y)));
    Poset2 { points, classes }
}

/// Betti numbers of the complexified complement and chamber counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct CombinatorialInvariants {
    pub betti: [usize; 3],
    pub chambers_total: usize,
    pub chambers_bounded: usize,
}

impl CombinatorialInvariants {
    /// Euler characteristic `b0 - b1 + b2`.
    pub fn euler_characteristic(&self) -> i64 {
        self.betti[0] as i64 - self.betti[1] as i64 + self.betti[2] as i64
    }
}

pub fn combinatorial_invariants<F: Scalar>(poset: &Poset2<F>, n: usize) -> CombinatorialInvariants {
    let b2: usize = poset.points.iter().map(|p| p.multiplicity() - 1).sum();
    let betti = [1, n, b2];
    let chi = 1 - n as i64 + b2 as i64;
    CombinatorialInvariants {
        betti,
        chambers_total: 1 + n + b2,
        chambers_bounded: chi.unsigned_abs() as usize,
    }
}

/// A central plane `{n·x = 0}` in 3-space, normalized like [`LineEq`].
#[derive(Debug, Clone, PartialEq)]
pub struct Plane3<F> {
    pub normal: [F; 3],
}

impl<F: Scalar> Plane3<F> {
    pub fn new(nx: F, ny: F, nz: F) -> Option<Self> {
        let mut v = [nx, ny, nz];
        if !normalize_coeffs(&mut v, 3) {
            return None;
        }
        Some(Plane3 { normal: v })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralArrangement<F> {
    pub planes: Vec<Plane3<F>>,
    pub discriminant: Option<u64>,
}

impl<F: Scalar> CentralArrangement<F> {
    pub fn new(planes: Vec<Plane3<F>>, discriminant: Option<u64>) -> Result<Self, GeometryError> {
        for i in 0..planes.len() {
            for j in 0..i {
                if planes[i] == planes[j] {
                    return Err(GeometryError::DuplicatePlane(j + 1, i + 1));
                }
            }
        }
        Ok(CentralArrangement { planes, discriminant })
    }
}

/// Sends plane `infinity` (0-based) to the line at infinity and returns the
/// remaining planes as affine lines, in their original order.
///
/// The chart pivots on the largest-index nonzero entry `k` of the chosen
/// normal `m`: the new coordinates are the two coordinates other than `k`
/// together with `w = m·p`, and the affine chart is `w = 1`.
pub fn decone<F: Scalar>(central: &CentralArrangement<F>, infinity: usize) -> Result<Arrangement<F>, GeometryError> {
    let planes = &central.planes;
    if planes.len() < 2 {
        return Err(GeometryError::TooFewPlanes);
    }
    let hinf = planes.get(infinity).ok_or(GeometryError::InfinityIndex(infinity))?;
    let m = &hinf.normal;
    let k = (0..3).rev().find(|&k| !m[k].is_zero()).expect("normal is nonzero");
    let free: Vec<usize> = (0..3).filter(|&j| j != k).collect();
    let mut coeffs = Vec::with_capacity(planes.len() - 1);
    for (i, plane) in planes.iter().enumerate() {
        if i == infinity {
            continue;
        }
        let n = &plane.normal;
        let ratio = n[k].clone() / m[k].clone();
        let a = n[free[0]].clone() - ratio.clone() * m[free[0]].clone();
        let b = n[free[1]].clone() - ratio.clone() * m[free[1]].clone();
        coeffs.push((a, b, -ratio));
    }
    Arrangement::from_coefficients(coeffs, central.discriminant)
}

/// Cones an affine arrangement: line `a x + b y = c` becomes the plane
/// `a x + b y - c z = 0`, and `z = 0` is appended as the last plane.
pub fn cone<F: Scalar>(arr: &Arrangement<F>) -> CentralArrangement<F> {
    let mut planes: Vec<Plane3<F>> = arr
        .lines()
        .iter()
        .map(|l| Plane3::new(l.a.clone(), l.b.clone(), -l.c.clone()).expect("nonzero normal"))
        .collect();
    planes.push(Plane3::new(F::zero(), F::zero(), F::one()).expect("nonzero normal"));
    CentralArrangement {
        planes,
        discriminant: arr.discriminant(),
    }
}

/// Contents of an arrangement file.
#[derive(Debug, Clone, PartialEq)]
pub enum ArrangementFile {
    Affine(Arrangement<QNum>),
    Central(CentralArrangement<QNum>),
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header(line: &str) -> Result<Option<u64>, GeometryError> {
    let rest = line.strip_prefix("field").ok_or(GeometryError::Header)?.trim();
    if rest == "Q" {
        return Ok(None);
    }
    let inner = rest
        .strip_prefix("Q(sqrt")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or(GeometryError::Header)?;
    let d: u64 = inner.trim().parse().map_err(|_| GeometryError::Header)?;
    if !is_square_free(d) {
        return Err(GeometryError::Discriminant(d));
    }
    Ok(Some(d))
}

fn parse_row(lineno: usize, row: &str, d: Option<u64>, arity: usize) -> Result<Vec<QNum>, GeometryError> {
    let tokens: Vec<&str> = row.split_whitespace().collect();
    if tokens.len() != arity {
        return Err(GeometryError::Arity(lineno, arity));
    }
    tokens
        .iter()
        .map(|t| QNum::parse(t, d).map_err(|source| GeometryError::Scalar { line: lineno, source }))
        .collect()
}

/// Parses either an affine (`a b c` rows) or a `central3` (`nx ny nz` rows) file.
pub fn parse_arrangement_file(text: &str) -> Result<ArrangementFile, GeometryError> {
    let mut rows = content_lines(text).peekable();
    let (_, header) = rows.next().ok_or(GeometryError::Header)?;
    let d = parse_header(header)?;
    let central = matches!(rows.peek(), Some((_, l)) if *l == "central3");
    if central {
        rows.next();
        let mut planes = Vec::new();
        for (idx, (lineno, row)) in rows.enumerate() {
            let v = parse_row(lineno, row, d, 3)?;
            let [x, y, z]: [QNum; 3] = v.try_into().expect("arity checked");
            planes.push(Plane3::new(x, y, z).ok_or(GeometryError::ZeroNormal(idx + 1))?);
        }
        return Ok(ArrangementFile::Central(CentralArrangement::new(planes, d)?));
    }
    let mut coeffs = Vec::new();
    for (lineno, row) in rows {
        let v = parse_row(lineno, row, d, 3)?;
        let [a, b, c]: [QNum; 3] = v.try_into().expect("arity checked");
        coeffs.push((a, b, c));
    }
    Ok(ArrangementFile::Affine(Arrangement::from_coefficients(coeffs, d)?))
}

pub fn parse_arrangement(text: &str) -> Result<Arrangement<QNum>, GeometryError> {
    match parse_arrangement_file(text)? {
        ArrangementFile::Affine(a) => Ok(a),
        ArrangementFile::Central(_) => Err(GeometryError::NotAffine),
    }
}

pub fn parse_central(text: &str) -> Result<CentralArrangement<QNum>, GeometryError> {
    match parse_arrangement_file(text)? {
        ArrangementFile::Central(c) => Ok(c),
        ArrangementFile::Affine(_) => Err(GeometryError::NotCentral),
    }
}

fn write_header(f: &mut fmt::Formatter<'_>, d: Option<u64>) -> fmt::Result {
    match d {
        Some(d) => writeln!(f, "field Q(sqrt {d})"),
        None => writeln!(f, "field Q"),
    }
}

impl fmt::Display for Arrangement<QNum> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_header(f, self.discriminant)?;
        for l in &self.lines {
            writeln!(f, "{} {} {}", l.a, l.b, l.c)?;
        }
        Ok(())
    }
}

impl fmt::Display for CentralArrangement<QNum> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_header(f, self.discriminant)?;
        writeln!(f, "central3")?;
        for p in &self.planes {
            writeln!(f, "{} {} {}", p.normal[0], p.normal[1], p.normal[2])?;
        }
        Ok(())
    }
}

/// Multiplicity histogram `m -> #points of multiplicity m`, sorted by `m`.
pub fn multiplicity_histogram<F: Scalar>(poset: &Poset2<F>) -> Vec<(usize, usize)> {
    let mut hist: Vec<(usize, usize)> = Vec::new();
    for p in &poset.points {
        match hist.iter_mut().find(|(m, _)| *m == p.multiplicity()) {
            Some(entry) => entry.1 += 1,
            None => hist.push((p.multiplicity(), 1)),
        }
    }
    hist.sort_by_key(|a| a.0);
    hist
}

/// Sorted parallel-class sizes.
pub fn class_sizes<F: Scalar>(poset: &Poset2<F>) -> Vec<usize> {
    let mut sizes: Vec<usize> = poset.classes.iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a).then(Ordering::Equal));
    sizes
}
