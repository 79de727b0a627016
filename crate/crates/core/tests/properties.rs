mod common;

use common::{coords, profile};
use proptest::prelude::*;
use superchar::bggcheck::{euler_check, narrow_euler_characteristic};
use superchar::borels::{transport_highest_weight, BorelElt};
use superchar::charring::{char_narrow, char_simple_td, char_verma, even_verma_subset_sum, FormalChar};
use superchar::diagrams::{is_g1_generic, GenericityMode};
use superchar::rootdata::{atypicality, classify, gamma, odd_positive_roots, even_positive_roots, RankProfile, Weight};
use superchar::vermacalc::narrow_image_dims;

fn weight(pr: RankProfile, c: Vec<i64>) -> Weight {
    Weight::new(pr, c).unwrap()
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let l = coords(2, 2, &[7, 2], &[2, 7]);
    let run = || {
        (
            narrow_euler_characteristic(&l, 5).unwrap(),
            char_simple_td(&l, 5).unwrap(),
            serde_json::to_string(&char_verma(&BorelElt::anti_distinguished(l.profile()), &l, 5).unwrap().to_json())
                .unwrap(),
        )
    };
    assert_eq!(in_pool(1, run), in_pool(4, run));
}

#[test]
fn euler_identity_on_generic_samples() {
    // atypicality 0, 1 and 2 where the profile allows it
    let cases = [
        coords(1, 1, &[5], &[1]),
        coords(1, 1, &[3], &[3]),
        coords(2, 1, &[6, 0], &[9]),
        coords(2, 1, &[6, 0], &[0]),
        coords(1, 2, &[9], &[0, 6]),
        coords(1, 2, &[6], &[0, 6]),
        coords(2, 2, &[9, 3], &[0, 6]),
        coords(2, 2, &[9, 3], &[3, 7]),
        coords(2, 2, &[7, 2], &[2, 7]),
    ];
    for l in cases {
        let r = euler_check(&l, 6).unwrap();
        assert!(r.equal, "{l}: {:?}", r.first_discrepancy);
    }
}

#[test]
fn antidominant_narrow_character_is_an_even_verma_sum() {
    for l in [coords(2, 1, &[0, 6], &[9]), coords(1, 2, &[9], &[6, 0]), coords(2, 2, &[3, 9], &[6, 0])] {
        assert!(classify(&l).antidominant);
        assert!(is_g1_generic(&l, GenericityMode::Brute).unwrap());
        let g = gamma(&l);
        let rest: Vec<_> = odd_positive_roots(l.profile()).into_iter().filter(|r| !g.contains(r)).collect();
        let lhs = char_narrow(&l, 6).unwrap().series;
        assert_eq!(lhs, even_verma_subset_sum(&l, &rest, 6).unwrap());
    }
    // gl(1|1): the narrow module at an antidominant generic weight is simple
    let l = coords(1, 1, &[2], &[5]);
    let ch = char_narrow(&l, 3).unwrap().series;
    for (w, d) in narrow_image_dims(&l, 3).unwrap() {
        assert_eq!(ch.coeff(&w).unwrap(), d.into());
    }
}

#[test]
fn narrow_image_sits_inside_the_verma_character() {
    for l in [
        coords(2, 1, &[3, 0], &[3]),
        coords(2, 1, &[4, 1], &[-3]),
        coords(1, 2, &[3], &[0, 3]),
        coords(2, 2, &[7, 2], &[2, 7]),
    ] {
        let verma = char_verma(&BorelElt::distinguished(l.profile()), &l, 2).unwrap();
        let typical = gamma(&l).is_empty();
        for (w, d) in narrow_image_dims(&l, 2).unwrap() {
            let v = verma.coeff(&w).unwrap();
            assert!(num_bigint::BigInt::from(d) <= v, "{l} at {w}");
            if typical {
                assert_eq!(num_bigint::BigInt::from(d), v, "{l} at {w}");
            }
        }
    }
}

fn small_weight(m: usize, n: usize) -> impl Strategy<Value = Weight> {
    proptest::collection::vec(-4i64..=4, m + n).prop_map(move |c| weight(profile(m, n), c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn division_undoes_multiplication(l in small_weight(2, 2), depth in 0u32..6) {
        let f = char_verma(&BorelElt::distinguished(l.profile()), &l, depth).unwrap();
        for r in odd_positive_roots(l.profile()) {
            let b = r.to_weight();
            prop_assert_eq!(&f.mul_one_plus(&b).unwrap().div_one_plus(&b).unwrap(), &f);
            prop_assert_eq!(&f.div_one_plus(&b).unwrap().mul_one_plus(&b).unwrap(), &f);
        }
        for r in even_positive_roots(l.profile()) {
            let g = r.to_weight();
            prop_assert_eq!(&f.mul_one_minus(&g).unwrap().div_one_minus(&g).unwrap(), &f);
        }
    }

    #[test]
    fn atypicality_survives_odd_reflections(l in small_weight(3, 2), steps in proptest::collection::vec(0usize..6, 0..8)) {
        let mut b = BorelElt::distinguished(l.profile());
        let mut hw = l.clone();
        let aty = atypicality(&l, &b).unwrap().aty;
        for s in steps {
            let odd: Vec<_> = b.simple_roots().into_iter().filter(|r| r.is_odd()).collect();
            let alpha = odd[s % odd.len()];
            (b, hw) = transport_highest_weight(&b, &hw, &alpha).unwrap();
            prop_assert_eq!(atypicality(&hw, &b).unwrap().aty, aty);
        }
    }

    #[test]
    fn narrow_forms_agree_and_lead_with_one(l in small_weight(2, 2), depth in 0u32..6) {
        let ch = char_narrow(&l, depth).unwrap().series;
        prop_assert_eq!(ch.coeff(&l).unwrap(), 1.into());
        prop_assert!(ch.all_nonnegative());
        prop_assert!(ch.len() <= char_verma(&BorelElt::distinguished(l.profile()), &l, depth).unwrap().len());
    }

    #[test]
    fn json_round_trip(l in small_weight(2, 1), depth in 0u32..5) {
        let ch = char_verma(&BorelElt::anti_distinguished(l.profile()), &l, depth).unwrap();
        let text = serde_json::to_string(&ch.to_json()).unwrap();
        let back = FormalChar::from_json(l.profile(), &serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, ch);
    }
}
