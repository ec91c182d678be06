mod common;

use common::*;
use leavitt::dynamics::{
    act, cc_closed_form, cc_count, germ, germ_rank, prefix_replacement, shift_element, Coordinate, Point, Stream,
};
use leavitt::thompson::{Leaf, TreePair};
use leavitt::Error;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn action_is_a_group_action(seed: u64) {
        let mut rng = rng(seed);
        let (m, s, k) = random_pair_params(&mut rng);
        let g = random_tree_pair(m, s, k, &mut rng);
        let h = random_tree_pair(m, s, rng.gen_range(0..=3), &mut rng);
        let nu = random_point(m, s, &mut rng);
        let moved = act(&g, &nu).unwrap();
        prop_assert_eq!(act(&g.inverse(), &moved).unwrap(), nu.clone());
        // α(gh) = α(g)α(h) acts on points from the left.
        prop_assert_eq!(act(&g.compose(&h).unwrap(), &nu).unwrap(), act(&g, &act(&h, &nu).unwrap()).unwrap());
        prop_assert_eq!(act(&TreePair::identity(m, s), &nu).unwrap(), nu.clone());
        prop_assert_eq!(germ_rank(&moved), germ_rank(&nu));
    }

    #[test]
    fn germs_add_and_invert(seed: u64) {
        let mut rng = rng(seed);
        let m = rng.gen_range(1..=2);
        let s = sh(rng.gen_range(2..=3), rng.gen_range(1..=3));
        let nu = random_point(m, s, &mut rng);
        let rank = germ_rank(&nu);
        let mut g = random_local_identity(m, s, &nu, &mut rng);
        let mut want = vec![0i64; rank];
        for _ in 0..rng.gen_range(0..=4) {
            if rank == 0 {
                break;
            }
            let k = rng.gen_range(0..rank);
            let shift = shift_element(m, s, &nu, k).unwrap();
            if rng.gen_bool(0.5) {
                g = g.compose(&shift).unwrap();
                want[k] += 1;
            } else {
                g = g.compose(&shift.inverse()).unwrap();
                want[k] -= 1;
            }
        }
        prop_assert_eq!(germ(&g, &nu).unwrap(), want.clone());
        let neg: Vec<i64> = want.iter().map(|x| -x).collect();
        prop_assert_eq!(germ(&g.inverse(), &nu).unwrap(), neg);
    }

    #[test]
    fn conjugation_moves_the_germ(seed: u64) {
        let mut rng = rng(seed);
        let (m, s, k) = random_pair_params(&mut rng);
        let nu = random_point(m, s, &mut rng);
        if germ_rank(&nu) == 0 {
            return Ok(());
        }
        let shift = shift_element(m, s, &nu, 0).unwrap();
        let h = random_tree_pair(m, s, k, &mut rng);
        let conj = h.compose(&shift).unwrap().compose(&h.inverse()).unwrap();
        let image = act(&h, &nu).unwrap();
        prop_assert_eq!(act(&conj, &image).unwrap(), image.clone());
        prop_assert_eq!(germ(&conj, &image).unwrap(), germ(&shift, &nu).unwrap());
    }

    #[test]
    fn points_print_and_parse(seed: u64) {
        let mut rng = rng(seed);
        let (m, s, _) = random_pair_params(&mut rng);
        let nu = random_point(m, s, &mut rng);
        prop_assert_eq!(Point::parse(&nu.to_string()).unwrap(), nu);
    }

    #[test]
    fn prepending_and_dropping_cancel(seed: u64) {
        let mut rng = rng(seed);
        let c = random_coordinate(3, rng.gen_bool(0.5), &mut rng);
        let w = random_word(3, 4, &mut rng);
        let p = c.prepend(&w);
        prop_assert!(p.has_prefix(&w));
        prop_assert_eq!(p.drop_prefix(w.len()), c.clone());
        for n in 0..20 {
            prop_assert_eq!(p.digit(n + w.len()), c.digit(n));
        }
    }
}

#[test]
fn shift_at_the_fixed_point_of_y1() {
    let s = sh(2, 1);
    let nu = Point::parse("pt(1; |1)").unwrap();
    let shift = shift_element(1, s, &nu, 0).unwrap();
    assert_eq!(germ(&shift, &nu).unwrap(), vec![1]);
    assert_eq!(germ(&shift.inverse(), &nu).unwrap(), vec![-1]);
    let mut g = TreePair::identity(1, s);
    for k in 1..=5 {
        g = g.compose(&shift).unwrap();
        assert_eq!(germ(&g, &nu).unwrap(), vec![k]);
    }
}

#[test]
fn elements_that_move_the_point_have_no_germ() {
    let s = sh(2, 1);
    let nu = Point::parse("pt(1; |1)").unwrap();
    let a = Leaf { row: 1, words: vec![vec![1]] };
    let b = Leaf { row: 1, words: vec![vec![2]] };
    let swap = prefix_replacement(1, s, &a, &b).unwrap();
    assert_eq!(act(&swap, &nu).unwrap(), Point::parse("pt(1; 2|1)").unwrap());
    assert_eq!(germ(&swap, &nu).unwrap_err(), Error::NotFixed);
}

#[test]
fn aperiodic_colors_do_not_count() {
    let nu = Point::parse("pt(1; ~tm@0, 1|2, 2~fib@3)").unwrap();
    assert_eq!(germ_rank(&nu), 1);
    let s = sh(2, 3);
    assert!(matches!(shift_element(1, s, &nu, 1), Err(Error::OutOfRange(_))));
    assert_eq!(germ(&shift_element(1, s, &nu, 0).unwrap(), &nu).unwrap(), vec![1]);
}

#[test]
fn streams() {
    let tm: Vec<u8> = (0..8).map(|n| Stream::ThueMorse.digit(n)).collect();
    assert_eq!(tm, [1, 2, 2, 1, 2, 1, 1, 2]);
    let fib: Vec<u8> = (0..8).map(|n| Stream::Fibonacci.digit(n)).collect();
    assert_eq!(fib, [1, 2, 1, 1, 2, 1, 2, 1]);
    assert!(matches!(Coordinate::rational(vec![], vec![1, 1]), Err(Error::MalformedPoint(_))));
    assert!(Coordinate::rational(vec![], vec![1, 2]).is_ok());
    assert!(!Coordinate::aperiodic(vec![], Stream::ThueMorse, 0).is_rational());
}

#[test]
fn counting_examples() {
    assert_eq!(cc_count(3, 1, 2, 1).unwrap(), 3);
    assert_eq!(cc_count(2, 1, 3, 1).unwrap(), 3);
    assert_eq!(cc_count(2, 1, 3, 2).unwrap(), 5);
    assert!(matches!(cc_closed_form(2, 1, 5, 1), Err(Error::HypothesisViolated(_))));
    assert!(matches!(cc_count(4, 1, 3, 1), Err(Error::InvalidParameter(_))));
}

#[test]
fn counts_depend_on_m_only_through_the_gcd() {
    for r in 2..=6u64 {
        for m1 in 1..=6u64 {
            for m2 in 1..=6u64 {
                let same = num_integer::gcd(m1, r - 1) == num_integer::gcd(m2, r - 1);
                let counts = |m| [2u64, 3, 5].map(|p| (1..=2).map(|a| cc_count(p, a, r, m).unwrap()).collect::<Vec<_>>());
                if same {
                    assert_eq!(counts(m1), counts(m2), "r={r} m={m1},{m2}");
                }
            }
        }
    }
}
