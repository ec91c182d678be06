mod common;

use common::*;
use leavitt::algebra::normalize;
use leavitt::text::{parse_element, parse_matrix};
use leavitt::{Factor, LetterKind, RawTerm, RingElement};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

fn raw_product(shape: leavitt::Shape, seed: u64) -> Vec<RawTerm> {
    let mut rng = rng(seed);
    (0..rng.gen_range(1..=3)).map(|_| random_raw_term(shape, 12, &mut rng)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn any_rewrite_order_gives_the_same_normal_form(r in 2usize..=4, t in 1usize..=3, seed: u64, order: u64) {
        let s = sh(r, t);
        let raw = raw_product(s, seed);
        let lib = normalize(s, 1, 1, &raw).unwrap();
        let mut order_rng = rng(order);
        prop_assert_eq!(as_oracle(&lib), oracle_normalize(s, &raw, &mut order_rng));
    }

    #[test]
    fn normalizing_never_grows_x_words(r in 2usize..=4, t in 1usize..=3, seed: u64) {
        let s = sh(r, t);
        let raw = raw_product(s, seed);
        let out = normalize(s, 1, 1, &raw).unwrap();
        if out.is_zero() {
            return Ok(());
        }
        let profile = out.degree_profile().unwrap();
        for c in 1..=t {
            let most = raw
                .iter()
                .map(|term| {
                    term.factors
                        .iter()
                        .filter(|f| matches!(f, Factor::Letter(l) if l.color == c && l.kind == LetterKind::X))
                        .count()
                })
                .max()
                .unwrap_or(0);
            prop_assert!(profile[c - 1].1 <= most);
        }
    }

    #[test]
    fn involution_is_an_anti_automorphism(r in 2usize..=3, t in 1usize..=2, m in 1usize..=2, seed: u64) {
        let s = sh(r, t);
        let mut rng = rng(seed);
        let a = random_matrix(s, m, 5, &mut rng);
        let b = random_matrix(s, m, 5, &mut rng);
        prop_assert_eq!((&a * &b).involute(), &b.involute() * &a.involute());
        prop_assert_eq!((&a + &b).involute(), &a.involute() + &b.involute());
        prop_assert_eq!(a.involute().involute(), a);
    }

    #[test]
    fn ring_axioms(r in 2usize..=3, t in 1usize..=2, m in 1usize..=2, seed: u64) {
        let s = sh(r, t);
        let mut rng = rng(seed);
        let a = random_matrix(s, m, 4, &mut rng);
        let b = random_matrix(s, m, 4, &mut rng);
        let c = random_matrix(s, m, 4, &mut rng);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &RingElement::identity(s, m), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn text_round_trip(r in 2usize..=4, t in 1usize..=3, m in 1usize..=3, seed: u64) {
        let s = sh(r, t);
        let a = random_matrix(s, m, 6, &mut rng(seed));
        let back = if m == 1 { parse_element(s, 1, 1, &a.to_string()) } else { parse_matrix(s, &a.to_string()) };
        prop_assert_eq!(back.unwrap(), a);
    }
}

#[test]
fn worked_normal_forms() {
    let s = sh(2, 1);
    let p = |e: &str| parse_element(s, 1, 1, e).unwrap().to_string();
    assert_eq!(p("x1 y1"), "1");
    assert_eq!(p("x1 y2"), "0");
    assert_eq!(p("y2 x2"), "1 - y1 x1");
    assert_eq!(p("y2 y2 x2 x2"), "1 - y1 x1 - y2 y1 x1 x2");
    assert_eq!(p("y1 x1 + y2 x2"), "1");
    let s3 = sh(3, 1);
    let a = parse_element(s3, 1, 1, "y1 x2").unwrap();
    let b = parse_element(s3, 1, 1, "y2 x3").unwrap();
    assert_eq!((&a * &b).to_string(), "y1 x3");
}

#[test]
fn involution_examples() {
    let s = sh(3, 1);
    assert_eq!(parse_element(s, 1, 1, "y1 y2 x3").unwrap().involute().to_string(), "y3 x2 x1");
    assert_eq!(RingElement::identity(s, 3).involute(), RingElement::identity(s, 3));
    let e = parse_element(s, 2, 2, "e[1,2] y1").unwrap().involute();
    assert_eq!(e, parse_element(s, 2, 2, "e[2,1] x1").unwrap());
}

#[test]
fn degree_profiles() {
    let s = sh(3, 1);
    assert_eq!(parse_element(s, 1, 1, "y1 y1 x2").unwrap().degree_profile().unwrap(), vec![(2, 1)]);
    assert_eq!(RingElement::scalar(s, 1).degree_profile().unwrap(), vec![(0, 0)]);
    assert_eq!(parse_element(sh(2, 1), 1, 1, "1 - y1 x1").unwrap().degree_profile().unwrap(), vec![(1, 1)]);
    assert!(RingElement::zero(s, 1, 1).degree_profile().is_err());
}

#[test]
fn colors_commute_but_do_not_interact() {
    let s = sh(2, 2);
    let p = |e: &str| parse_element(s, 1, 1, e).unwrap();
    assert_eq!(&p("y[1,1]") * &p("x[2,1]"), &p("x[2,1]") * &p("y[1,1]"));
    assert_eq!((&p("x[1,1]") * &p("y[2,1]")).to_string(), "x[1,1] y[2,1]");
    assert_eq!(&p("x[2,2]") * &p("y[2,2]"), RingElement::scalar(s, 1));
}

#[test]
fn coefficients_do_not_overflow() {
    let s = sh(2, 1);
    let mut a = parse_element(s, 1, 1, "1 + y1 x1").unwrap();
    for _ in 0..7 {
        a = &a * &a;
    }
    // (1 + e)^128 = 1 + (2^128 - 1) e for the idempotent e = y1 x1.
    let big = BigInt::from(2).pow(128) - 1;
    assert_eq!(a.to_string(), format!("1 + {big}*y1 x1"));
}
