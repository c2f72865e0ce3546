//! Chambers of a real line arrangement, their behaviour at infinity, the
//! generic flag near infinity and the resulting level stratification.

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::geometry::{cross, intersection_poset, Arrangement, Point2, Poset2};
use crate::lineset::LineSet;
use crate::lp::find_feasible;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChamberError {
    #[error("chamber {0} is bounded and has no opposite")]
    BoundedOpposite(usize),
    #[error("sign vector {0} is not a chamber")]
    NotRealized(String),
    #[error("flag is parallel to line {0}")]
    FlagParallel(usize),
    #[error("flag passes through a multiple point")]
    FlagThroughPoint,
    #[error("flag separates the multiple points")]
    FlagSeparatesPoints,
    #[error("flag point separates the crossings")]
    FlagPointSeparates,
    #[error("stratification invariant violated: {0}")]
    Strata(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Neg,
    Pos,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Neg => Side::Pos,
            Side::Pos => Side::Neg,
        }
    }

    fn of<F: Scalar>(v: &F) -> Option<Side> {
        match v.sign() {
            Ordering::Less => Some(Side::Neg),
            Ordering::Greater => Some(Side::Pos),
            Ordering::Equal => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Side::Neg => '-',
            Side::Pos => '+',
        }
    }
}

pub fn sign_string(signs: &[Side]) -> String {
    signs.iter().map(|s| s.symbol()).collect()
}

/// Where the closure of a chamber meets the line at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Infinity {
    Bounded,
    /// A single point at infinity: the direction of the given parallel class.
    DirectionPoint(usize),
    FullLine,
}

impl Infinity {
    /// Dimension of the projective subspace spanned at infinity.
    pub fn dim(self) -> Option<usize> {
        match self {
            Infinity::Bounded => None,
            Infinity::DirectionPoint(_) => Some(0),
            Infinity::FullLine => Some(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chamber<F> {
    pub id: usize,
    pub sign: Vec<Side>,
    pub witness: Point2<F>,
    pub bounded: bool,
    pub infinity: Infinity,
}

/// All chambers of an arrangement, ordered lexicographically by sign vector.
#[derive(Debug, Clone)]
pub struct Chambers<F> {
    list: Vec<Chamber<F>>,
    index: HashMap<Vec<Side>, usize>,
}

/// A point strictly inside the region cut out by the first `signs.len()` lines.
fn strict_region_point<F: Scalar>(arr: &Arrangement<F>, signs: &[Side]) -> Option<Point2<F>> {
    // variables x+, x-, y+, y-, w; rows: -s(a x + b y - c w) <= -1, -w <= -1
    let mut a = Vec::with_capacity(signs.len() + 1);
    let mut b = Vec::with_capacity(signs.len() + 1);
    for (line, side) in arr.lines().iter().zip(signs) {
        let s = match side {
            Side::Pos => F::one(),
            Side::Neg => -F::one(),
        };
        let sa = s.clone() * line.a.clone();
        let sb = s.clone() * line.b.clone();
        let sc = s * line.c.clone();
        a.push(vec![-sa.clone(), sa, -sb.clone(), sb, sc]);
        b.push(-F::one());
    }
    a.push(vec![F::zero(), F::zero(), F::zero(), F::zero(), -F::one()]);
    b.push(-F::one());
    let z = find_feasible(&a, &b)?;
    let w = z[4].clone();
    let x = (z[0].clone() - z[1].clone()) / w.clone();
    let y = (z[2].clone() - z[3].clone()) / w;
    Some(Point2::new(x, y))
}

fn classify_infinity<F: Scalar>(arr: &Arrangement<F>, poset: &Poset2<F>, signs: &[Side]) -> Infinity {
    let normals: Vec<(F, F)> = arr
        .lines()
        .iter()
        .zip(signs)
        .map(|(l, s)| match s {
            Side::Pos => (l.a.clone(), l.b.clone()),
            Side::Neg => (-l.a.clone(), -l.b.clone()),
        })
        .collect();
    let dot = |n: &(F, F), d: &(F, F)| n.0.clone() * d.0.clone() + n.1.clone() * d.1.clone();
    let in_cone = |d: &(F, F)| normals.iter().all(|n| !dot(n, d).is_negative());
    let interior = |d: &(F, F)| normals.iter().all(|n| dot(n, d).is_positive());

    if normals.iter().any(&interior) {
        return Infinity::FullLine;
    }
    let mut rays: Vec<((F, F), usize)> = Vec::new();
    for (i, n) in normals.iter().enumerate() {
        for d in [(-n.1.clone(), n.0.clone()), (n.1.clone(), -n.0.clone())] {
            if in_cone(&d) {
                rays.push((d, i));
            }
        }
    }
    for (i, (r1, _)) in rays.iter().enumerate() {
        for (r2, _) in &rays[i + 1..] {
            let sum = (r1.0.clone() + r2.0.clone(), r1.1.clone() + r2.1.clone());
            if interior(&sum) {
                return Infinity::FullLine;
            }
        }
    }
    match rays.first() {
        Some((_, line)) => Infinity::DirectionPoint(poset.class_of(*line)),
        None => Infinity::Bounded,
    }
}

/// One chamber per realizable sign vector, with exact interior witnesses.
///
/// Lines are added one at a time; a partial sign vector is extended only
/// when the corresponding open region is nonempty.
pub fn enumerate_chambers<F: Scalar>(arr: &Arrangement<F>, poset: &Poset2<F>) -> Chambers<F> {
    let n = arr.len();
    let mut found: Vec<(Vec<Side>, Point2<F>)> = Vec::new();
    let mut stack: Vec<(Vec<Side>, Point2<F>)> = vec![(Vec::new(), Point2::new(F::zero(), F::zero()))];
    while let Some((signs, witness)) = stack.pop() {
        let k = signs.len();
        if k == n {
            found.push((signs, witness));
            continue;
        }
        let current = Side::of(&arr.lines()[k].eval(&witness));
        // push Pos first so that Neg is explored first
        for side in [Side::Pos, Side::Neg] {
            let mut next = signs.clone();
            next.push(side);
            let point = if current == Some(side) {
                Some(witness.clone())
            } else {
                strict_region_point(arr, &next)
            };
            if let Some(p) = point {
                stack.push((next, p));
            }
        }
    }
    debug_assert!(found.windows(2).all(|w| w[0].0 < w[1].0));
    let list: Vec<Chamber<F>> = found
        .into_iter()
        .enumerate()
        .map(|(id, (sign, witness))| {
            let infinity = classify_infinity(arr, poset, &sign);
            Chamber {
                id,
                bounded: infinity == Infinity::Bounded,
                sign,
                witness,
                infinity,
            }
        })
        .collect();
    let index = list.iter().map(|c| (c.sign.clone(), c.id)).collect();
    Chambers { list, index }
}

impl<F: Scalar> Chambers<F> {
    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn get(&self, id: usize) -> &Chamber<F> {
        &self.list[id]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Chamber<F>> {
        self.list.iter()
    }

    pub fn find(&self, sign: &[Side]) -> Option<usize> {
        self.index.get(sign).copied()
    }

    pub fn bounded_count(&self) -> usize {
        self.list.iter().filter(|c| c.bounded).count()
    }

    /// The chamber opposite to `id` across the line at infinity.
    pub fn opposite(&self, id: usize, poset: &Poset2<F>) -> Result<usize, ChamberError> {
        let c = &self.list[id];
        let keep: Vec<usize> = match c.infinity {
            Infinity::Bounded => return Err(ChamberError::BoundedOpposite(id)),
            Infinity::FullLine => Vec::new(),
            Infinity::DirectionPoint(d) => poset.classes[d].clone(),
        };
        let flipped: Vec<Side> = c
            .sign
            .iter()
            .enumerate()
            .map(|(i, s)| if keep.contains(&i) { *s } else { s.flip() })
            .collect();
        self.find(&flipped)
            .ok_or_else(|| ChamberError::NotRealized(sign_string(&flipped)))
    }

    /// Lines separating two chambers.
    pub fn sep(&self, a: usize, b: usize) -> LineSet {
        sep(&self.list[a], &self.list[b])
    }
}

pub fn sep<F>(a: &Chamber<F>, b: &Chamber<F>) -> LineSet {
    let n = a.sign.len();
    LineSet::from_indices(n, (0..n).filter(|&i| a.sign[i] != b.sign[i]))
}

/// Which side of the multiple points the flag line is placed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlagSide {
    #[default]
    Above,
    Below,
}

/// Which end of the flag line carries the flag point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlagEnd {
    #[default]
    Start,
    End,
}

/// Deterministic choices in [`build_flag_with`]. `skip` discards that many
/// admissible directions before picking one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FlagOptions {
    pub skip: usize,
    pub side: FlagSide,
    pub end: FlagEnd,
}

/// A point-in-line flag `F0 ⊂ F1`; `F1` is `base + s·direction` and `F0`
/// sits at parameter `f0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag<F> {
    pub direction: Point2<F>,
    pub base: Point2<F>,
    pub f0: F,
    /// `(parameter, line)` sorted by parameter.
    pub crossings: Vec<(F, usize)>,
}

impl<F: Scalar> Flag<F> {
    pub fn point_at(&self, s: &F) -> Point2<F> {
        Point2::new(
            self.base.x.clone() + s.clone() * self.direction.x.clone(),
            self.base.y.clone() + s.clone() * self.direction.y.clone(),
        )
    }

    /// Builds a flag from a line and flag-point parameter, computing crossings.
    pub fn from_line(arr: &Arrangement<F>, direction: Point2<F>, base: Point2<F>, f0: F) -> Result<Self, ChamberError> {
        let mut crossings = Vec::with_capacity(arr.len());
        for (i, l) in arr.lines().iter().enumerate() {
            let speed = l.a.clone() * direction.x.clone() + l.b.clone() * direction.y.clone();
            if speed.is_zero() {
                return Err(ChamberError::FlagParallel(i));
            }
            let at = l.a.clone() * base.x.clone() + l.b.clone() * base.y.clone();
            crossings.push(((l.c.clone() - at) / speed, i));
        }
        crossings.sort_by(|x, y| x.0.compare(&y.0));
        Ok(Flag {
            direction,
            base,
            f0,
            crossings,
        })
    }

    fn functional(&self, p: &Point2<F>) -> F {
        cross((&self.direction.x, &self.direction.y), (&p.x, &p.y))
    }

    /// Checks the genericity conditions for a flag near infinity.
    pub fn validate(&self, arr: &Arrangement<F>, poset: &Poset2<F>) -> Result<(), ChamberError> {
        for (i, l) in arr.lines().iter().enumerate() {
            let speed = l.a.clone() * self.direction.x.clone() + l.b.clone() * self.direction.y.clone();
            if speed.is_zero() {
                return Err(ChamberError::FlagParallel(i));
            }
        }
        let level = self.functional(&self.base);
        let mut side = None;
        for p in &poset.points {
            let s = self.functional(&p.at).compare(&level);
            if s == Ordering::Equal {
                return Err(ChamberError::FlagThroughPoint);
            }
            if side.is_some_and(|prev| prev != s) {
                return Err(ChamberError::FlagSeparatesPoints);
            }
            side = Some(s);
        }
        for w in self.crossings.windows(2) {
            if !w[0].0.compare(&w[1].0).is_lt() {
                return Err(ChamberError::FlagThroughPoint);
            }
        }
        let before = self.crossings.iter().all(|(s, _)| self.f0.compare(s).is_lt());
        let after = self.crossings.iter().all(|(s, _)| self.f0.compare(s).is_gt());
        if !(before || after) {
            return Err(ChamberError::FlagPointSeparates);
        }
        Ok(())
    }

    /// True when the flag point precedes every crossing.
    pub fn f0_at_start(&self) -> bool {
        self.crossings.iter().all(|(s, _)| self.f0.compare(s).is_lt())
    }
}

pub fn build_flag<F: Scalar>(arr: &Arrangement<F>, poset: &Poset2<F>) -> Flag<F> {
    build_flag_with(arr, poset, FlagOptions::default())
}

/// Direction `(1, t)` for the first admissible `t = 1, 2, …` (after `skip`
/// admissible ones), line placed one unit beyond the extreme multiple point,
/// flag point one unit beyond the extreme crossing.
pub fn build_flag_with<F: Scalar>(arr: &Arrangement<F>, poset: &Poset2<F>, opts: FlagOptions) -> Flag<F> {
    let admissible = |t: &F| {
        let parallel_line = arr
            .lines()
            .iter()
            .any(|l| (l.a.clone() + l.b.clone() * t.clone()).is_zero());
        let parallel_segment = poset.points.iter().enumerate().any(|(i, p)| {
            poset.points[i + 1..].iter().any(|q| {
                let dx = q.at.x.clone() - p.at.x.clone();
                let dy = q.at.y.clone() - p.at.y.clone();
                (dy - t.clone() * dx).is_zero()
            })
        });
        !parallel_line && !parallel_segment
    };
    let mut skipped = 0;
    let mut t = 1i64;
    let slope = loop {
        let cand = F::from_int(t);
        if admissible(&cand) {
            if skipped == opts.skip {
                break cand;
            }
            skipped += 1;
        }
        t += 1;
    };
    let direction = Point2::new(F::one(), slope.clone());
    let values: Vec<F> = poset
        .points
        .iter()
        .map(|p| p.at.y.clone() - slope.clone() * p.at.x.clone())
        .collect();
    let level = match opts.side {
        FlagSide::Above => values
            .iter()
            .cloned()
            .reduce(|a, b| if a.compare(&b).is_ge() { a } else { b })
            .map_or(F::zero(), |m| m + F::one()),
        FlagSide::Below => values
            .iter()
            .cloned()
            .reduce(|a, b| if a.compare(&b).is_le() { a } else { b })
            .map_or(F::zero(), |m| m - F::one()),
    };
    let base = Point2::new(F::zero(), level);
    let mut flag = Flag::from_line(arr, direction, base, F::zero()).expect("direction avoids all line slopes");
    flag.f0 = match opts.end {
        FlagEnd::Start => flag.crossings.first().expect("n >= 1").0.clone() - F::one(),
        FlagEnd::End => flag.crossings.last().expect("n >= 1").0.clone() + F::one(),
    };
    flag
}

/// Lines bounding the interval `C ∩ F1` of a level-1 chamber.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Walls {
    Bounded(usize, usize),
    Unbounded(usize),
}

/// Level stratification `ch^0, ch^1, ch^2` with bounded/unbounded splits and
/// the opposite-chamber pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct Strata {
    pub ch: [Vec<usize>; 3],
    pub bch: [Vec<usize>; 3],
    pub uch: [Vec<usize>; 3],
    pub level: Vec<usize>,
    pub walls: Vec<Option<Walls>>,
    pub opposite: Vec<Option<usize>>,
    /// False when all lines are parallel; the opposite map then need not
    /// pair `bch^k` with `uch^(k+1)`.
    pub essential: bool,
}

fn sign_at<F: Scalar>(arr: &Arrangement<F>, p: &Point2<F>) -> Vec<Side> {
    arr.lines()
        .iter()
        .map(|l| Side::of(&l.eval(p)).expect("sample point lies on no line"))
        .collect()
}

pub fn stratify<F: Scalar>(
    arr: &Arrangement<F>,
    poset: &Poset2<F>,
    chambers: &Chambers<F>,
    flag: &Flag<F>,
) -> Result<Strata, ChamberError> {
    flag.validate(arr, poset)?;
    let n = arr.len();
    let total = chambers.len();
    let lookup = |p: Point2<F>| {
        let s = sign_at(arr, &p);
        chambers
            .find(&s)
            .ok_or_else(|| ChamberError::NotRealized(sign_string(&s)))
    };
    let cr = &flag.crossings;
    let two = F::from_int(2);
    // intervals along F1 in parameter order: (-inf, s_0), (s_0, s_1), ..., (s_{n-1}, inf)
    let mut owners = Vec::with_capacity(n + 1);
    owners.push(lookup(flag.point_at(&(cr[0].0.clone() - F::one())))?);
    for w in cr.windows(2) {
        let mid = (w[0].0.clone() + w[1].0.clone()) / two.clone();
        owners.push(lookup(flag.point_at(&mid))?);
    }
    owners.push(lookup(flag.point_at(&(cr[n - 1].0.clone() + F::one())))?);

    let mut level = vec![2usize; total];
    let mut walls = vec![None; total];
    let (c0, far_end) = if flag.f0_at_start() {
        (owners[0], n)
    } else {
        (owners[n], 0)
    };
    level[c0] = 0;
    for (j, &owner) in owners.iter().enumerate() {
        if owner == c0 && (j == 0 || j == n) {
            continue;
        }
        if level[owner] != 2 {
            return Err(ChamberError::Strata(format!(
                "chamber {owner} meets the flag line twice"
            )));
        }
        level[owner] = 1;
        walls[owner] = Some(if j == 0 {
            Walls::Unbounded(cr[0].1)
        } else if j == n {
            Walls::Unbounded(cr[n - 1].1)
        } else {
            Walls::Bounded(cr[j - 1].1, cr[j].1)
        });
    }

    let mut ch: [Vec<usize>; 3] = Default::default();
    for id in 0..total {
        ch[level[id]].push(id);
    }
    let far = owners[far_end];
    let bch = [
        vec![c0],
        ch[1].iter().copied().filter(|&c| c != far).collect(),
        ch[2].iter().copied().filter(|&c| chambers.get(c).bounded).collect(),
    ];
    let uch = [
        Vec::new(),
        vec![far],
        ch[2].iter().copied().filter(|&c| !chambers.get(c).bounded).collect(),
    ];
    let mut opposite = vec![None; total];
    for c in chambers.iter().filter(|c| !c.bounded) {
        opposite[c.id] = Some(chambers.opposite(c.id, poset)?);
    }
    let essential = poset.classes.len() > 1;
    let strata = Strata {
        ch,
        bch,
        uch,
        level,
        walls,
        opposite,
        essential,
    };
    strata.check(chambers)?;
    Ok(strata)
}

impl Strata {
    fn check<F: Scalar>(&self, chambers: &Chambers<F>) -> Result<(), ChamberError> {
        let fail = |m: &str| Err(ChamberError::Strata(m.to_string()));
        if self.ch[0].len() != 1 {
            return fail("level 0 must be a single chamber");
        }
        if self.bch[2].len() != chambers.bounded_count() {
            return fail("bounded chambers outside level 2");
        }
        for (id, o) in self.opposite.iter().enumerate() {
            if let Some(o) = *o {
                if self.opposite[o] != Some(id) {
                    return fail("opposite map is not an involution");
                }
            }
        }
        for k in 0..2 {
            if !self.essential {
                break;
            }
            let mut image: Vec<usize> = self.bch[k]
                .iter()
                .map(|&c| self.opposite[c].expect("unbounded along the flag"))
                .collect();
            image.sort_unstable();
            if image != self.uch[k + 1] {
                return fail("opposite map does not send bch^k onto uch^(k+1)");
            }
        }
        Ok(())
    }

    /// `|bch^k|` for `k = 0, 1, 2`.
    pub fn beta(&self) -> [usize; 3] {
        [self.bch[0].len(), self.bch[1].len(), self.bch[2].len()]
    }
}

/// `bch^k` ordered by decreasing dimension at infinity, then by id.
pub fn order_bch<F: Scalar>(strata: &Strata, chambers: &Chambers<F>, k: usize) -> Vec<usize> {
    let mut v = strata.bch[k].clone();
    let dim = |c: usize| chambers.get(c).infinity.dim();
    v.sort_by(|&a, &b| dim(b).cmp(&dim(a)).then(a.cmp(&b)));
    v
}

/// Everything derived from an arrangement and one flag.
#[derive(Debug, Clone)]
pub struct Analysis<F> {
    pub arrangement: Arrangement<F>,
    pub poset: Poset2<F>,
    pub chambers: Chambers<F>,
    pub flag: Flag<F>,
    pub strata: Strata,
}

impl<F: Scalar> Analysis<F> {
    pub fn new(arrangement: Arrangement<F>) -> Result<Self, ChamberError> {
        Analysis::with_flag(arrangement, FlagOptions::default())
    }

    pub fn with_flag(arrangement: Arrangement<F>, opts: FlagOptions) -> Result<Self, ChamberError> {
        let poset = intersection_poset(&arrangement);
        let chambers = enumerate_chambers(&arrangement, &poset);
        let flag = build_flag_with(&arrangement, &poset, opts);
        let strata = stratify(&arrangement, &poset, &chambers, &flag)?;
        Ok(Analysis {
            arrangement,
            poset,
            chambers,
            flag,
            strata,
        })
    }

    pub fn n(&self) -> usize {
        self.arrangement.len()
    }
}
