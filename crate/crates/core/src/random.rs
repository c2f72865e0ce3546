//! Seeded random rational line arrangements.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{Arrangement, LineEq};
use crate::qnum::QNum;
use crate::scalar::Scalar;

/// Consecutive rejected draws before giving up.
const MAX_REJECTIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RandomError {
    #[error("need at least one line")]
    NoLines,
    #[error("coefficient bound {0} is too small for {1} distinct lines")]
    BoundTooSmall(i64, usize),
    #[error("options need {needed} lines but only {n} were requested")]
    TooManyForced { needed: usize, n: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RandomOptions {
    /// Number of parallel pairs planted.
    pub force_parallel_classes: usize,
    /// Number of triple points planted, three fresh lines each.
    pub force_triple_points: usize,
}

/// `a, b ∈ [−bound, bound]`; free lines also have `c ∈ [−bound, bound]`.
/// Planted triple points have coordinates in the same range, so lines through
/// them may have larger `c`. Arrangements with two or more lines always have
/// two directions.
pub fn gen_random(n: usize, bound: i64, seed: u64, opts: RandomOptions) -> Result<Arrangement<QNum>, RandomError> {
    if n == 0 {
        return Err(RandomError::NoLines);
    }
    let needed = 2 * opts.force_parallel_classes + 3 * opts.force_triple_points;
    if needed > n {
        return Err(RandomError::TooManyForced { needed, n });
    }
    if bound < 1 {
        return Err(RandomError::BoundTooSmall(bound, n));
    }
    let mut g = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed),
        bound,
        n,
        lines: Vec::with_capacity(n),
    };
    for _ in 0..opts.force_parallel_classes {
        g.parallel_pair()?;
    }
    for _ in 0..opts.force_triple_points {
        g.triple_point()?;
    }
    while g.lines.len() < n {
        let last = g.lines.len() + 1 == n && n >= 2;
        g.push_with(|g| {
            let (a, b) = g.direction();
            let c = g.rng.gen_range(-bound..=bound);
            let l = line(a, b, c);
            // the final line must break an all-parallel configuration
            (!last || g.lines.iter().any(|m| !m.is_parallel(&l))).then_some(l)
        })?;
    }
    g.lines.shuffle(&mut g.rng);
    Ok(Arrangement::new(g.lines, None).expect("lines are distinct and nonempty"))
}

fn line(a: i64, b: i64, c: i64) -> LineEq<QNum> {
    LineEq::new(QNum::from_int(a), QNum::from_int(b), QNum::from_int(c)).expect("nonzero normal")
}

struct Generator {
    rng: ChaCha8Rng,
    bound: i64,
    n: usize,
    lines: Vec<LineEq<QNum>>,
}

impl Generator {
    fn direction(&mut self) -> (i64, i64) {
        loop {
            let a = self.rng.gen_range(-self.bound..=self.bound);
            let b = self.rng.gen_range(-self.bound..=self.bound);
            if a != 0 || b != 0 {
                return (a, b);
            }
        }
    }

    fn fresh(&self, l: &LineEq<QNum>) -> bool {
        !self.lines.contains(l)
    }

    /// Retries `draw` until it yields a new line.
    fn push_with(&mut self, mut draw: impl FnMut(&mut Self) -> Option<LineEq<QNum>>) -> Result<(), RandomError> {
        for _ in 0..MAX_REJECTIONS {
            if let Some(l) = draw(self) {
                if self.fresh(&l) {
                    self.lines.push(l);
                    return Ok(());
                }
            }
        }
        Err(RandomError::BoundTooSmall(self.bound, self.n))
    }

    /// Draws lines as a group, all new and distinct, or retries the group.
    fn push_group(&mut self, mut draw: impl FnMut(&mut Self) -> Vec<LineEq<QNum>>) -> Result<(), RandomError> {
        for _ in 0..MAX_REJECTIONS {
            let group = draw(self);
            let distinct = group.iter().enumerate().all(|(i, l)| !group[..i].contains(l));
            if distinct && group.iter().all(|l| self.fresh(l)) {
                self.lines.extend(group);
                return Ok(());
            }
        }
        Err(RandomError::BoundTooSmall(self.bound, self.n))
    }

    fn parallel_pair(&mut self) -> Result<(), RandomError> {
        self.push_group(|g| {
            let (a, b) = g.direction();
            let c1 = g.rng.gen_range(-g.bound..=g.bound);
            let c2 = g.rng.gen_range(-g.bound..=g.bound);
            vec![line(a, b, c1), line(a, b, c2)]
        })
    }

    fn triple_point(&mut self) -> Result<(), RandomError> {
        self.push_group(|g| {
            let x = g.rng.gen_range(-g.bound..=g.bound);
            let y = g.rng.gen_range(-g.bound..=g.bound);
            (0..3)
                .map(|_| {
                    let (a, b) = g.direction();
                    line(a, b, a * x + b * y)
                })
                .collect()
        })
    }
}
