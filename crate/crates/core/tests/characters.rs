mod common;

use common::{as_map, coords, profile, simple_char_by_rank};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superchar::charring::{char_even_simple, char_simple_td, simple_td_expressions};
use superchar::diagrams::{is_g1_generic, is_totally_disconnected, GenericityMode};
use superchar::rootdata::{atypicality, classify, Weight};
use superchar::borels::BorelElt;

fn sample_td(m: usize, n: usize, count: usize, seed: u64) -> Vec<Weight> {
    sample_td_with(m, n, count, seed, |_| true)
}

fn sample_td_with(m: usize, n: usize, count: usize, seed: u64, keep: impl Fn(&Weight) -> bool) -> Vec<Weight> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let eps: Vec<i64> = (0..m).map(|_| rng.gen_range(-4..=4)).collect();
        let del: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
        let l = coords(m, n, &eps, &del);
        let c = classify(&l);
        if c.regular && c.dominant && is_totally_disconnected(&l).unwrap() && keep(&l) {
            out.push(l);
        }
    }
    out
}

#[test]
fn oracle_reproduces_known_modules() {
    // trivial module and the natural representation of gl(2|1)
    let pr = profile(2, 1);
    let triv = simple_char_by_rank(&Weight::zero(pr), 6);
    assert_eq!(triv.values().sum::<usize>(), 1);
    let nat = simple_char_by_rank(&Weight::epsilon(pr, 1), 6);
    assert_eq!(nat.values().sum::<usize>(), 3);
}

#[test]
fn simple_characters_match_rank_oracle() {
    for (m, n, depth, seed) in [(1, 1, 8, 1), (2, 1, 7, 2), (1, 2, 7, 3), (2, 2, 4, 4)] {
        let mut samples = sample_td(m, n, 6, seed);
        // totally disconnected but not g-1-generic
        samples.extend(match (m, n) {
            (2, 1) => vec![coords(2, 1, &[1, 0], &[1])],
            (1, 2) => vec![coords(1, 2, &[1], &[0, 1])],
            (2, 2) => vec![coords(2, 2, &[1, 0], &[0, 3]), coords(2, 2, &[2, 0], &[0, 2])],
            _ => vec![],
        });
        for l in samples {
            let ch = char_simple_td(&l, depth).unwrap();
            assert!(ch.all_nonnegative());
            assert_eq!(as_map(&ch), simple_char_by_rank(&l, depth), "gl({m}|{n}) {l}");
        }
    }
}

#[test]
fn atypical_generic_examples_match_oracle() {
    for l in [
        coords(2, 1, &[3, 0], &[3]),
        coords(1, 2, &[3], &[0, 3]),
        coords(2, 2, &[7, 2], &[2, 7]),
    ] {
        assert!(is_g1_generic(&l, GenericityMode::Brute).unwrap());
        assert_eq!(as_map(&char_simple_td(&l, 5).unwrap()), simple_char_by_rank(&l, 5));
    }
}

#[test]
fn expressions_agree_beyond_generic_weights() {
    let aty = |l: &Weight| atypicality(l, &BorelElt::distinguished(l.profile())).unwrap().aty;
    for l in sample_td_with(2, 2, 6, 11, |l| aty(l) == 2) {
        let [a, b, c] = simple_td_expressions(&l, 6).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(as_map(&a.truncate(4)), simple_char_by_rank(&l, 4), "{l}");
    }
}

#[test]
fn even_simple_character_has_weyl_dimension() {
    // dimension of the gl(2)+gl(2) module with highest weight (2,0 | 1,-1)
    let pr = profile(2, 2);
    let mu = Weight::new(pr, vec![2, 0, 1, -1]).unwrap();
    let ch = char_even_simple(&mu, 20).unwrap();
    let total: usize = as_map(&ch).values().sum();
    assert_eq!(total, 3 * 3);
}
