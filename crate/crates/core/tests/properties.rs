mod common;

use chamberhom::complex::ComplexTemplate;
use chamberhom::geometry::{intersection_poset, parse_arrangement};
use chamberhom::localsys::{CharClass, RankOneZ};
use chamberhom::random::{gen_random, RandomOptions};
use chamberhom::snf::{smith_normal_form, subquotient, subquotient_fast};
use chamberhom::QAnalysis;
use proptest::prelude::*;

use common::{prediction_check, structural_check};

fn arrangement() -> impl Strategy<Value = chamberhom::QArrangement> {
    (1usize..=7, 2i64..=7, any::<u64>(), 0usize..=2, 0usize..=1).prop_filter_map(
        "options need more lines",
        |(n, bound, seed, parallel, triples)| {
            let opts = RandomOptions {
                force_parallel_classes: parallel,
                force_triple_points: triples,
            };
            gen_random(n, bound, seed, opts).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn structure_holds(arr in arrangement()) {
        structural_check(&arr, true).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn closed_form_holds(arr in arrangement()) {
        prediction_check(&arr).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn printed_file_reparses(arr in arrangement()) {
        let again = parse_arrangement(&arr.to_string()).unwrap();
        prop_assert_eq!(again, arr);
    }

    #[test]
    fn generator_respects_options(n in 5usize..=9, seed in any::<u64>()) {
        let opts = RandomOptions { force_parallel_classes: 1, force_triple_points: 1 };
        let arr = gen_random(n, 6, seed, opts).unwrap();
        prop_assert_eq!(arr.len(), n);
        let p = intersection_poset(&arr);
        prop_assert!(p.classes.iter().any(|c| c.len() >= 2));
        prop_assert!(p.points.iter().any(|m| m.lines.len() >= 3));
        prop_assert!(p.classes.len() >= 2);
    }

    #[test]
    fn fast_groups_agree_with_kernel_basis(arr in arrangement(), mask in any::<u64>()) {
        let a = QAnalysis::new(arr).unwrap();
        let n = a.n();
        let t = ComplexTemplate::new(&a).unwrap();
        let q = RankOneZ::from_mask(n, mask & ((1 << n) - 1));
        let cx = t.rank_one(&q).unwrap();
        prop_assert_eq!(subquotient(&cx.d0, &cx.d1).unwrap(), subquotient_fast(&cx.d0, &cx.d1).unwrap());
        let w = mask & ((1 << n) - 1);
        if w != 0 {
            let cover = t.double_cover(&CharClass::from_mask(n, w).unwrap()).unwrap();
            let (t0, t1) = (cover.d0.transpose(), cover.d1.transpose());
            prop_assert_eq!(subquotient(&t1, &t0).unwrap(), subquotient_fast(&t1, &t0).unwrap());
            prop_assert_eq!(smith_normal_form(&cover.d1), smith_normal_form(&t1));
        }
    }
}
