use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use chamberhom::chambers::{sign_string, Infinity};
use chamberhom::complex::{CochainComplex, ComplexTemplate};
use chamberhom::geometry::{
    combinatorial_invariants, decone as decone_central, parse_arrangement_file, ArrangementFile,
};
use chamberhom::localsys::{cdo_check, direction_point_name, CharClass, LocalSysError, RankOneZ, H_INFINITY};
use chamberhom::oracle::{consistency_checks, fox_twisted_homology, rank_one_images, OracleError, Presentation};
use chamberhom::predict::{compare_report, predict_cohomology, PredictError};
use chamberhom::random::{gen_random as generate, RandomOptions};
use chamberhom::search::{search_torsion as search, SearchError, SearchMode};
use chamberhom::snf::{cohomology_groups, homology_groups};
use chamberhom::{AbelianGroup, Error, QAnalysis, QArrangement};
use serde_json::json;

const COHOMOLOGY: &str = "H^k(M; L) for k = 0, 1, 2, cochain complex on chambers";
const HOMOLOGY: &str = "H_k(M; L) for k = 0, 1, 2, transposed complex";

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Check(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Check(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Check(m) => f.write_str(m),
        }
    }
}

impl<E: Into<Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        let e: Error = e.into();
        let input = match &e {
            Error::Geometry(_) | Error::Random(_) => true,
            Error::LocalSys(l) => matches!(
                l,
                LocalSysError::Length { .. } | LocalSysError::Symbol(_) | LocalSysError::ZeroClass
            ),
            Error::Oracle(o) => matches!(
                o,
                OracleError::Parse { .. }
                    | OracleError::MissingHeader
                    | OracleError::LetterRange { .. }
                    | OracleError::EmptyRelator(_)
                    | OracleError::Length { .. }
            ),
            Error::Search(s) => matches!(s, SearchError::TooManyLines { .. } | SearchError::SampleTooLarge { .. }),
            _ => false,
        };
        if input {
            CliError::Input(e.to_string())
        } else {
            CliError::Check(e.to_string())
        }
    }
}

/// Text for stdout, plus the reason for exit status 1 if a check failed.
pub struct Outcome {
    pub stdout: String,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, failure: None }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_arrangement(path: &Path) -> Result<QArrangement, CliError> {
    match parse_arrangement_file(&read(path)?)? {
        ArrangementFile::Affine(a) => Ok(a),
        ArrangementFile::Central(_) => Err(CliError::Input(format!(
            "{}: central arrangement; decone it first",
            path.display()
        ))),
    }
}

fn load(path: &Path) -> Result<QAnalysis, CliError> {
    Ok(QAnalysis::new(load_arrangement(path)?)?)
}

fn character(a: &QAnalysis, s: Option<&str>) -> Result<RankOneZ, CliError> {
    match s {
        Some(s) => Ok(RankOneZ::parse(s, a.n())?),
        None => Ok(RankOneZ::trivial(a.n())),
    }
}

fn to_json<T: serde::Serialize + ?Sized>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report serializes")
}

fn json_line(v: &serde_json::Value) -> String {
    format!("{v}\n")
}

fn labels(lines: &[usize]) -> Vec<String> {
    lines.iter().map(|i| format!("H{}", i + 1)).collect()
}

fn infinity_name(a: &QAnalysis, inf: Infinity) -> String {
    match inf {
        Infinity::Bounded => "bounded".into(),
        Infinity::FullLine => H_INFINITY.into(),
        Infinity::DirectionPoint(c) => direction_point_name(&a.poset.classes[c]),
    }
}

fn chi(a: &QAnalysis) -> i64 {
    combinatorial_invariants(&a.poset, a.n()).euler_characteristic()
}

pub fn poset(path: &Path, json: bool) -> Result<Outcome, CliError> {
    let a = load(path)?;
    let inv = combinatorial_invariants(&a.poset, a.n());
    if json {
        let points: Vec<_> = a
            .poset
            .points
            .iter()
            .map(|p| json!({"at": [p.at.x.to_string(), p.at.y.to_string()], "lines": labels(&p.lines)}))
            .collect();
        let classes: Vec<_> = a.poset.classes.iter().map(|c| labels(c)).collect();
        return Ok(Outcome::ok(json_line(&json!({
            "lines": a.n(),
            "points": points,
            "classes": classes,
            "invariants": to_json(&inv),
        }))));
    }
    let mut s = format!("# intersection poset, {} lines\n", a.n());
    for p in &a.poset.points {
        writeln!(s, "point ({}, {}): {}", p.at.x, p.at.y, labels(&p.lines).join(" ")).unwrap();
    }
    for c in a.poset.classes.iter().filter(|c| c.len() > 1) {
        writeln!(s, "parallel: {}", labels(c).join(" ")).unwrap();
    }
    writeln!(s, "betti: {} {} {}", inv.betti[0], inv.betti[1], inv.betti[2]).unwrap();
    writeln!(s, "chambers: {} ({} bounded)", inv.chambers_total, inv.chambers_bounded).unwrap();
    Ok(Outcome::ok(s))
}

pub fn chambers(path: &Path, json: bool) -> Result<Outcome, CliError> {
    let a = load(path)?;
    let st = &a.strata;
    let rows: Vec<_> = a
        .chambers
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "sign": sign_string(&c.sign),
                "level": st.level[c.id],
                "bounded_along_flag": st.bch[st.level[c.id]].contains(&c.id),
                "infinity": infinity_name(&a, c.infinity),
                "opposite": st.opposite[c.id],
            })
        })
        .collect();
    let counts = |v: &[Vec<usize>; 3]| [v[0].len(), v[1].len(), v[2].len()];
    if json {
        return Ok(Outcome::ok(json_line(&json!({
            "chambers": rows,
            "ch": counts(&st.ch),
            "bch": counts(&st.bch),
            "uch": counts(&st.uch),
        }))));
    }
    let mut s = String::from("# id sign level flag-bounded infinity opposite\n");
    for r in &rows {
        writeln!(
            s,
            "{} {} {} {} {} {}",
            r["id"],
            r["sign"].as_str().unwrap(),
            r["level"],
            r["bounded_along_flag"],
            r["infinity"].as_str().unwrap(),
            r["opposite"]
        )
        .unwrap();
    }
    writeln!(
        s,
        "|ch^k| = {:?}, |bch^k| = {:?}, |uch^k| = {:?}",
        counts(&st.ch),
        counts(&st.bch),
        counts(&st.uch)
    )
    .unwrap();
    Ok(Outcome::ok(s))
}

pub fn cdo(path: &Path, ch: Option<&str>, json: bool) -> Result<Outcome, CliError> {
    let a = load(path)?;
    let q = character(&a, ch)?;
    let r = cdo_check(&a, &q)?;
    if json {
        return Ok(Outcome::ok(json_line(&to_json(&r))));
    }
    Ok(Outcome::ok(if r.holds {
        format!("CDO holds for {q}\n")
    } else {
        format!("CDO fails for {q} at {}\n", r.witnesses.join(", "))
    }))
}

fn check_groups(
    cx: &CochainComplex,
    coh: &[AbelianGroup; 3],
    hom: &[AbelianGroup; 3],
    chi: i64,
    primes: &[u64],
) -> Option<String> {
    let report = consistency_checks(cx, coh, hom, chi, primes);
    let failed: Vec<String> = report
        .failures()
        .map(|c| format!("{} ({})", c.name, c.detail))
        .collect();
    (!failed.is_empty()).then(|| failed.join("; "))
}

fn group_table(title: String, symbol: &str, groups: &[AbelianGroup]) -> String {
    let mut s = format!("# {title}\n");
    for (k, g) in groups.iter().enumerate() {
        writeln!(s, "{symbol}{k} = {g}").unwrap();
    }
    s
}

pub fn groups(path: &Path, ch: Option<&str>, homology: bool, primes: &[u64], json: bool) -> Result<Outcome, CliError> {
    let a = load(path)?;
    let q = character(&a, ch)?;
    let cx = ComplexTemplate::new(&a)?.rank_one(&q)?;
    let coh = cohomology_groups(&cx.d0, &cx.d1)?;
    let hom = homology_groups(&cx.d0, &cx.d1)?;
    let failure = check_groups(&cx, &coh, &hom, chi(&a), primes);
    let (shown, convention, symbol) = if homology {
        (&hom, HOMOLOGY, "H_")
    } else {
        (&coh, COHOMOLOGY, "H^")
    };
    let stdout = if json {
        json_line(&json!({"H": to_json(shown), "convention": convention}))
    } else {
        group_table(format!("{convention}; character {q}"), symbol, shown)
    };
    Ok(Outcome { stdout, failure })
}

pub fn predict(path: &Path, ch: Option<&str>, json: bool) -> Result<Outcome, CliError> {
    let a = load(path)?;
    let q = character(&a, ch)?;
    let predicted = match predict_cohomology(&a, &q) {
        Ok(p) => p,
        Err(PredictError::NotCdo(w)) => {
            return Ok(Outcome {
                stdout: String::new(),
                failure: Some(format!("no prediction: the CDO-condition fails at {w}")),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let cx = ComplexTemplate::new(&a)?.rank_one(&q)?;
    let computed = cohomology_groups(&cx.d0, &cx.d1)?;
    let report = compare_report(&predicted, &computed);
    let failure = (!report.matches).then(|| format!("prediction differs in degrees {:?}", report.mismatches()));
    let stdout = if json {
        let mut v = to_json(&report);
        v["convention"] = json!(COHOMOLOGY);
        json_line(&v)
    } else {
        let mut s = format!("# {COHOMOLOGY}; character {q}\n");
        for (k, d) in report.degrees.iter().enumerate() {
            writeln!(
                s,
                "H^{k} = {}  (predicted {}, equal: {})",
                d.computed, d.predicted, d.equal
            )
            .unwrap();
        }
        writeln!(s, "match: {}", report.matches).unwrap();
        s
    };
    Ok(Outcome { stdout, failure })
}

pub fn double_cover(path: &Path, omega: &str, primes: &[u64], json: bool) -> Result<Outcome, CliError> {
    let a = load(path)?;
    let w = CharClass::parse(omega, a.n())?;
    let cx = ComplexTemplate::new(&a)?.double_cover(&w)?;
    if !cx.is_complex() {
        return Err(CliError::Check("complex: d1 * d0 is not zero".into()));
    }
    let coh = cohomology_groups(&cx.d0, &cx.d1)?;
    let hom = homology_groups(&cx.d0, &cx.d1)?;
    let failure = check_groups(&cx, &coh, &hom, chi(&a), primes);
    let convention = "H^k and H_k of the double cover with Z coefficients, k = 0, 1, 2";
    let stdout = if json {
        json_line(&json!({
            "omega": w.to_string(),
            "cohomology": to_json(&coh),
            "homology": to_json(&hom),
            "convention": convention,
        }))
    } else {
        let mut s = format!("# {convention}; omega {w}\n");
        for k in 0..3 {
            writeln!(s, "H^{k} = {}    H_{k} = {}", coh[k], hom[k]).unwrap();
        }
        s
    };
    Ok(Outcome { stdout, failure })
}

pub fn oracle(pres: &Path, arr: Option<&Path>, ch: Option<&str>, json: bool) -> Result<Outcome, CliError> {
    let p = Presentation::parse(&read(pres)?)?;
    let analysis = arr.map(load).transpose()?;
    let template = analysis.as_ref().map(ComplexTemplate::new).transpose()?;
    if let Some(a) = &analysis {
        if a.n() != p.generators {
            return Err(CliError::Input(format!(
                "presentation has {} generators, arrangement has {} lines",
                p.generators,
                a.n()
            )));
        }
    }
    let g = p.generators;
    let chars = match ch {
        Some(s) => vec![RankOneZ::parse(s, g)?],
        None => (0..1u64 << g).map(|m| RankOneZ::from_mask(g, m)).collect(),
    };
    let mut rows = Vec::new();
    let mut disagreements = Vec::new();
    for q in &chars {
        let fox = fox_twisted_homology(&p, &rank_one_images(q))?;
        let chamber = match &template {
            Some(t) => {
                let cx = t.rank_one(q)?;
                let h = homology_groups(&cx.d0, &cx.d1)?;
                Some([h[0].clone(), h[1].clone()])
            }
            None => None,
        };
        let equal = chamber.as_ref().map(|c| *c == fox);
        if equal == Some(false) {
            disagreements.push(q.to_string());
        }
        rows.push((q.to_string(), fox, chamber, equal));
    }
    let failure = (!disagreements.is_empty())
        .then(|| format!("Fox and chamber homology differ for {}", disagreements.join(", ")));
    let convention = "H_k for k = 0, 1 of the presentation complex";
    let stdout = if json {
        let results: Vec<_> = rows
            .iter()
            .map(|(q, fox, chamber, equal)| json!({"char": q, "fox": to_json(fox), "chambers": chamber.as_ref().map(to_json), "equal": equal}))
            .collect();
        json_line(&json!({"convention": convention, "results": results, "agree": disagreements.is_empty()}))
    } else {
        let mut s = format!("# {convention}\n");
        for (q, fox, chamber, _) in &rows {
            write!(s, "{q}: H_0 = {}, H_1 = {}", fox[0], fox[1]).unwrap();
            if let Some(c) = chamber {
                write!(s, "  | chambers: H_0 = {}, H_1 = {}", c[0], c[1]).unwrap();
            }
            s.push('\n');
        }
        s
    };
    Ok(Outcome { stdout, failure })
}

pub fn gen_random(lines: usize, bound: i64, seed: u64, parallel: usize, triples: usize) -> Result<Outcome, CliError> {
    let opts = RandomOptions {
        force_parallel_classes: parallel,
        force_triple_points: triples,
    };
    let a = generate(lines, bound, seed, opts)?;
    Ok(Outcome::ok(a.to_string()))
}

pub fn search_torsion(path: &Path, sample: Option<u64>, seed: u64, json: bool) -> Result<Outcome, CliError> {
    let a = load(path)?;
    let mode = match sample {
        Some(k) => SearchMode::Sample { k, seed },
        None => SearchMode::All,
    };
    let findings = search(&a, mode)?;
    let bad: Vec<&str> = findings
        .iter()
        .filter(|f| !f.uct_holds())
        .map(|f| f.omega.as_str())
        .collect();
    let failure = (!bad.is_empty()).then(|| format!("H_1 torsion missing from H^2 for {}", bad.join(", ")));
    let mut s = String::new();
    if !json {
        s.push_str("# omega: H_1(double cover; Z) | H_1(M; L_omega) | H^2(M; L_omega)\n");
    }
    for f in &findings {
        if json {
            let mut v = to_json(f);
            v["uct"] = json!(f.uct_holds());
            s.push_str(&json_line(&v));
        } else {
            writeln!(s, "{}: {} | {} | {}", f.omega, f.cover_h1, f.local_h1, f.local_h2).unwrap();
        }
    }
    Ok(Outcome { stdout: s, failure })
}

pub fn decone(path: &Path, infinity: usize) -> Result<Outcome, CliError> {
    let central = match parse_arrangement_file(&read(path)?)? {
        ArrangementFile::Central(c) => c,
        ArrangementFile::Affine(_) => return Err(CliError::Input(format!("{}: not a central3 file", path.display()))),
    };
    if infinity == 0 {
        return Err(CliError::Input("--infinity is 1-based".into()));
    }
    let a = decone_central(&central, infinity - 1)?;
    Ok(Outcome::ok(a.to_string()))
}
