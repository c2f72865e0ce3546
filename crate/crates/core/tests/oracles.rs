mod common;

use std::collections::BTreeSet;

use chamberhom::chambers::sign_string;
use chamberhom::complex::ComplexTemplate;
use chamberhom::corpus;
use chamberhom::geometry::{class_sizes, combinatorial_invariants, intersection_poset, Plane3};
use chamberhom::localsys::RankOneZ;
use chamberhom::oracle::{fox_twisted_homology, rank_one_images, Presentation};
use chamberhom::scalar::Scalar;
use chamberhom::snf::homology_groups;
use chamberhom::{QAnalysis, QNum};
use num_rational::BigRational;

use common::{chamber_signs_by_vertices, random_corpus};

#[test]
fn chambers_match_vertex_probing() {
    let mut arrangements = random_corpus(120);
    arrangements.extend([corpus::three_central(), corpus::four_lines(), corpus::double_star()]);
    for arr in arrangements {
        let a = QAnalysis::new(arr.clone()).unwrap();
        let found: BTreeSet<String> = a.chambers.iter().map(|c| sign_string(&c.sign)).collect();
        assert_eq!(found.len(), a.chambers.len());
        assert_eq!(found, chamber_signs_by_vertices(&arr), "arrangement\n{arr}");
        let inv = combinatorial_invariants(&a.poset, a.n());
        assert_eq!(found.len(), inv.chambers_total);
    }
}

fn phi() -> QNum {
    let half = BigRational::new(1.into(), 2.into());
    QNum::new(half.clone(), half, 5).unwrap()
}

/// Normals of the planes perpendicular to the 5-fold and 3-fold rotation
/// axes of the icosahedron, from its vertex coordinates.
fn icosahedral_planes() -> Vec<Plane3<QNum>> {
    let (z, one, p) = (QNum::from_int(0), QNum::from_int(1), phi());
    let mut vertices: Vec<[QNum; 3]> = Vec::new();
    for s1 in [1, -1] {
        for s2 in [1, -1] {
            let a = one.clone() * QNum::from_int(s1);
            let b = p.clone() * QNum::from_int(s2);
            vertices.push([z.clone(), a.clone(), b.clone()]);
            vertices.push([a.clone(), b.clone(), z.clone()]);
            vertices.push([b, z.clone(), a]);
        }
    }
    let dist2 = |u: &[QNum; 3], v: &[QNum; 3]| {
        (0..3).fold(QNum::from_int(0), |acc, i| {
            let d = u[i].clone() - v[i].clone();
            acc + d.clone() * d
        })
    };
    let four = QNum::from_int(4);
    let mut planes: Vec<Plane3<QNum>> = Vec::new();
    let mut push = |n: [QNum; 3]| {
        let plane = Plane3::new(n[0].clone(), n[1].clone(), n[2].clone()).unwrap();
        if !planes.contains(&plane) {
            planes.push(plane);
        }
    };
    for v in &vertices {
        push(v.clone());
    }
    for i in 0..12 {
        for j in 0..i {
            for k in 0..j {
                let (a, b, c) = (&vertices[i], &vertices[j], &vertices[k]);
                if dist2(a, b) == four && dist2(b, c) == four && dist2(a, c) == four {
                    push([0, 1, 2].map(|t| a[t].clone() + b[t].clone() + c[t].clone()));
                }
            }
        }
    }
    planes
}

#[test]
fn icosidodecahedral_file_matches_icosahedron() {
    let derived = icosahedral_planes();
    assert_eq!(derived.len(), 16);
    let bundled = corpus::icosidodecahedral().planes;
    assert_eq!(bundled.len(), 16);
    for p in &bundled {
        assert!(derived.contains(p), "{p:?} is not a symmetry plane");
    }
}

#[test]
fn deconed_files_match_derivation() {
    let a = corpus::icosidodeca_decone();
    assert_eq!(a, corpus::derive_icosidodeca_decone());
    assert_eq!(class_sizes(&intersection_poset(&a)), vec![3; 5]);
    let ds = corpus::double_star();
    assert_eq!(ds, corpus::derive_double_star());
    assert_eq!(class_sizes(&intersection_poset(&ds)), vec![2; 5]);
}

#[test]
fn fox_matches_chambers_on_three_lines() {
    let p = Presentation::parse(corpus::THREE_LINES_PRESENTATION).unwrap();
    let a = QAnalysis::new(corpus::three_central()).unwrap();
    let t = ComplexTemplate::new(&a).unwrap();
    for m in 0..8 {
        let q = RankOneZ::from_mask(3, m);
        let fox = fox_twisted_homology(&p, &rank_one_images(&q)).unwrap();
        let cx = t.rank_one(&q).unwrap();
        let h = homology_groups(&cx.d0, &cx.d1).unwrap();
        assert_eq!(fox[0], h[0], "H_0 for {q}");
        assert_eq!(fox[1], h[1], "H_1 for {q}");
    }
}
