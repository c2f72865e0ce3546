#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeSet;

use chamberhom::chambers::{FlagEnd, FlagOptions, FlagSide};
use chamberhom::geometry::{LineEq, Point2};
use chamberhom::random::{gen_random, RandomOptions};
use chamberhom::scalar::Scalar;
use chamberhom::{QArrangement, QNum};

/// Seeded arrangements with 1 to 8 lines, some with planted parallel pairs
/// and triple points.
pub fn random_corpus(count: u64) -> Vec<QArrangement> {
    (0..count)
        .map(|seed| {
            let n = 1 + (seed % 8) as usize;
            let opts = RandomOptions {
                force_parallel_classes: usize::from(n >= 2 && seed % 3 == 0) + usize::from(n >= 6 && seed % 5 == 0),
                force_triple_points: usize::from(n >= 5 && seed % 2 == 0),
            };
            gen_random(n, 6, seed, opts).expect("generator succeeds")
        })
        .collect()
}

pub fn three_flags() -> [FlagOptions; 3] {
    [
        FlagOptions::default(),
        FlagOptions {
            skip: 1,
            side: FlagSide::Below,
            end: FlagEnd::Start,
        },
        FlagOptions {
            skip: 2,
            side: FlagSide::Above,
            end: FlagEnd::End,
        },
    ]
}

fn sign_char(v: &QNum) -> char {
    match v.sign() {
        Ordering::Less => '-',
        Ordering::Greater => '+',
        Ordering::Equal => panic!("sample point on a line"),
    }
}

fn signs_at(lines: &[LineEq<QNum>], p: &Point2<QNum>) -> String {
    lines.iter().map(|l| sign_char(&l.eval(p))).collect()
}

fn add(p: &Point2<QNum>, u: &(QNum, QNum), eps: &QNum) -> Point2<QNum> {
    Point2::new(
        p.x.clone() + eps.clone() * u.0.clone(),
        p.y.clone() + eps.clone() * u.1.clone(),
    )
}

/// Sign vectors of all chambers, found by probing around every vertex
/// (or across a pencil of parallel lines). Independent of the LP search.
pub fn chamber_signs_by_vertices(arr: &QArrangement) -> BTreeSet<String> {
    let lines = arr.lines();
    let mut vertices: Vec<Point2<QNum>> = Vec::new();
    for i in 0..lines.len() {
        for j in 0..i {
            if let Some(p) = lines[i].intersect(&lines[j]) {
                if !vertices.contains(&p) {
                    vertices.push(p);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    if vertices.is_empty() {
        // a pencil of parallel lines: walk along the common normal
        let (a, b) = (lines[0].a.clone(), lines[0].b.clone());
        let mut ts: Vec<QNum> = lines
            .iter()
            .map(|l| l.c.clone() / (l.a.clone() * a.clone() + l.b.clone() * b.clone()))
            .collect();
        ts.sort_by(|x, y| x.compare(y));
        let one = QNum::from_int(1);
        let mut probes = vec![ts[0].clone() - one.clone(), ts[ts.len() - 1].clone() + one];
        for w in ts.windows(2) {
            probes.push((w[0].clone() + w[1].clone()) / QNum::from_int(2));
        }
        for t in probes {
            out.insert(signs_at(lines, &Point2::new(a.clone() * t.clone(), b.clone() * t)));
        }
        return out;
    }
    for p in &vertices {
        let mut dirs: Vec<(QNum, QNum)> = Vec::new();
        for l in lines.iter().filter(|l| l.contains(p)) {
            dirs.push((l.b.clone(), -l.a.clone()));
            dirs.push((-l.b.clone(), l.a.clone()));
        }
        let angle = |d: &(QNum, QNum)| d.1.to_f64().atan2(d.0.to_f64());
        dirs.sort_by(|x, y| angle(x).total_cmp(&angle(y)));
        for k in 0..dirs.len() {
            let (d1, d2) = (&dirs[k], &dirs[(k + 1) % dirs.len()]);
            let u = (d1.0.clone() + d2.0.clone(), d1.1.clone() + d2.1.clone());
            let mut eps = QNum::from_int(1);
            let far: Vec<&LineEq<QNum>> = lines.iter().filter(|l| !l.contains(p)).collect();
            // shrink until no other line is crossed
            while far.iter().any(|l| l.eval(&add(p, &u, &eps)).sign() != l.eval(p).sign()) {
                eps = eps / QNum::from_int(2);
            }
            out.insert(signs_at(lines, &add(p, &u, &eps)));
        }
    }
    out
}

use chamberhom::complex::{halve, restrict_square, validate_structure, ComplexTemplate};
use chamberhom::geometry::combinatorial_invariants;
use chamberhom::localsys::{cdo_check, CharClass, RankOneZ};
use chamberhom::oracle::consistency_checks;
use chamberhom::predict::{predict_cohomology, BetaVector};
use chamberhom::snf::{cohomology_groups, homology_groups, AbelianGroup};
use chamberhom::QAnalysis;

pub const PRIMES: [u64; 3] = [2, 3, 5];

#[derive(Debug, Default, Clone, Copy)]
pub struct Tally {
    pub arrangements: usize,
    pub characters: usize,
    pub cdo_pairs: usize,
    pub covers: usize,
    pub consistency_runs: usize,
}

impl std::ops::AddAssign for Tally {
    fn add_assign(&mut self, o: Tally) {
        self.arrangements += o.arrangements;
        self.characters += o.characters;
        self.cdo_pairs += o.cdo_pairs;
        self.covers += o.covers;
        self.consistency_runs += o.consistency_runs;
    }
}

/// Every CDO character: computed cohomology equals the closed form.
pub fn prediction_check(arr: &QArrangement) -> Result<Tally, String> {
    let a = QAnalysis::new(arr.clone()).map_err(|e| e.to_string())?;
    let t = ComplexTemplate::new(&a).map_err(|e| e.to_string())?;
    let n = a.n();
    let mut tally = Tally {
        arrangements: 1,
        ..Tally::default()
    };
    for m in 0..1u64 << n {
        let q = RankOneZ::from_mask(n, m);
        tally.characters += 1;
        if !cdo_check(&a, &q).map_err(|e| e.to_string())?.holds {
            continue;
        }
        tally.cdo_pairs += 1;
        let cx = t.rank_one(&q).map_err(|e| e.to_string())?;
        let computed = cohomology_groups(&cx.d0, &cx.d1).map_err(|e| e.to_string())?;
        let predicted = predict_cohomology(&a, &q).map_err(|e| e.to_string())?;
        if computed != predicted {
            return Err(format!("{q}: computed {computed:?}, predicted {predicted:?}\n{arr}"));
        }
    }
    Ok(tally)
}

/// UCT, field ranks and Euler characteristic for one complex.
pub fn consistency(
    cx: &chamberhom::complex::CochainComplex,
    chi: i64,
) -> Result<([AbelianGroup; 3], [AbelianGroup; 3]), String> {
    let coh = cohomology_groups(&cx.d0, &cx.d1).map_err(|e| e.to_string())?;
    let hom = homology_groups(&cx.d0, &cx.d1).map_err(|e| e.to_string())?;
    let report = consistency_checks(cx, &coh, &hom, chi, &PRIMES);
    if let Some(c) = report.failures().next() {
        return Err(format!("{}: {}", c.name, c.detail));
    }
    Ok((coh, hom))
}

/// Complex, strata and structure identities for every character and every
/// double cover, under three flags, plus flag independence of the groups.
pub fn structural_check(arr: &QArrangement, covers: bool) -> Result<Tally, String> {
    let err = |e: &dyn std::fmt::Display| format!("{e}\n{arr}");
    let n = arr.len();
    let mut tally = Tally {
        arrangements: 1,
        ..Tally::default()
    };
    let mut reference: Option<Vec<[AbelianGroup; 3]>> = None;
    for opts in three_flags() {
        let a = QAnalysis::with_flag(arr.clone(), opts).map_err(|e| err(&e))?;
        let inv = combinatorial_invariants(&a.poset, n);
        let st = &a.strata;
        let sizes = [st.ch[0].len(), st.ch[1].len(), st.ch[2].len()];
        if sizes != inv.betti {
            return Err(err(&format!("|ch^k| = {sizes:?}, betti {:?}", inv.betti)));
        }
        for c in a.chambers.iter().filter(|c| !c.bounded) {
            let o = st.opposite[c.id].ok_or_else(|| err(&"unbounded chamber without opposite"))?;
            if st.opposite[o] != Some(c.id) || a.chambers.get(o).bounded {
                return Err(err(&format!("opposite is not an involution at {}", c.id)));
            }
        }
        let essential = a.poset.classes.len() > 1;
        if essential {
            for k in 0..2 {
                let mut image: Vec<usize> = st.bch[k].iter().map(|&c| st.opposite[c].unwrap()).collect();
                image.sort_unstable();
                let mut target = st.uch[k + 1].clone();
                target.sort_unstable();
                if image != target {
                    return Err(err(&format!("iota(bch^{k}) != uch^{}", k + 1)));
                }
            }
        }
        if essential || n == 1 {
            let beta = BetaVector::from_betti(inv.betti).as_array();
            if st.beta() != beta {
                return Err(err(&format!("beta {:?} vs alternating sums {beta:?}", st.beta())));
            }
        }
        let t = ComplexTemplate::new(&a).map_err(|e| err(&e))?;
        let mut groups = Vec::new();
        for m in 0..1u64 << n {
            let q = RankOneZ::from_mask(n, m);
            let cx = t.rank_one(&q).map_err(|e| err(&e))?;
            if !cx.is_complex() {
                return Err(err(&format!("d1 d0 != 0 for {q}")));
            }
            let (coh, _) = consistency(&cx, inv.euler_characteristic()).map_err(|e| err(&format!("{q}: {e}")))?;
            tally.consistency_runs += 1;
            groups.push(coh);
            tally.characters += 1;
            if !cdo_check(&a, &q).map_err(|e| err(&e))?.holds {
                continue;
            }
            tally.cdo_pairs += 1;
            for k in 0..2 {
                let sq = restrict_square(&cx, &a, k).map_err(|e| err(&e))?;
                sq.check_cdo(false).map_err(|e| err(&format!("{q}: {e}")))?;
            }
            let half = halve(&cx).map_err(|e| err(&e))?;
            for k in 0..2 {
                let sq = restrict_square(&half, &a, k).map_err(|e| err(&e))?;
                sq.check_cdo(true).map_err(|e| err(&format!("{q}: {e}")))?;
                if sq.determinant().magnitude() != &1u32.into() {
                    return Err(err(&format!("{q}: det of halved square {k} is {}", sq.determinant())));
                }
            }
            validate_structure(&half, &a, &q).map_err(|e| err(&format!("{q}: {e}")))?;
        }
        if covers {
            for m in 1..1u64 << n {
                let w = CharClass::from_mask(n, m).unwrap();
                let cx = t.double_cover(&w).map_err(|e| err(&e))?;
                if !cx.is_complex() {
                    return Err(err(&format!("d1 d0 != 0 for cover {w}")));
                }
                consistency(&cx, inv.euler_characteristic()).map_err(|e| err(&format!("cover {w}: {e}")))?;
                tally.covers += 1;
                tally.consistency_runs += 1;
            }
        }
        match &reference {
            None => reference = Some(groups),
            Some(r) if *r != groups => return Err(err(&"groups depend on the flag")),
            Some(_) => {}
        }
    }
    Ok(tally)
}
