mod common;

use std::collections::HashMap;
use std::sync::Arc;

use common::*;
use oddjacobi::{make_chart, random_function, Chart, Parity, Poly, WeightOf};
use proptest::prelude::*;

fn mixed_chart() -> Arc<Chart> {
    make_chart([("x", Even, 0), ("xi", Odd, 1), ("y", Even, -1), ("eta", Odd, 0), ("zeta", Odd, 2)]).unwrap()
}

fn charts() -> Vec<Arc<Chart>> {
    vec![
        mixed_chart(),
        make_chart([("t", Even, 0), ("xi", Odd, 0)]).unwrap().cotangent().unwrap(),
        anticotangent_rn(2),
    ]
}

fn parity(seed: u64) -> Parity {
    if seed.is_multiple_of(2) {
        Even
    } else {
        Odd
    }
}

fn sample(c: &Arc<Chart>, seed: u64) -> Poly {
    random_function(c, 3, parity(seed >> 7), seed)
}

#[test]
fn canonical_form_on_seeded_triples() {
    for c in charts() {
        for seed in 0..200u64 {
            let f = sample(&c, 3 * seed);
            let g = sample(&c, 3 * seed + 1);
            let h = sample(&c, 3 * seed + 2);
            assert_eq!(&f + &g, &g + &f);
            assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        }
    }
}

#[test]
fn chart_examples() {
    let line = make_chart([("t", Even, 0), ("xi", Odd, 0)]).unwrap();
    assert_eq!(line.len(), 2);
    assert!(make_chart(Vec::<(String, Parity, i64)>::new()).unwrap().is_empty());
    let c = make_chart([("x", Even, 0), ("xs", Odd, 1)]).unwrap();
    assert_eq!(c.generator(1).weight, 1);
    assert!(matches!(
        make_chart([("x", Even, 0), ("x", Odd, 0)]),
        Err(oddjacobi::Error::DuplicateName(_))
    ));
}

/// Sign of bringing a word of distinct generators into declaration order, by counting
/// odd-odd inversions in a bubble sort.
fn bubble_sign(c: &Chart, word: &[usize]) -> i64 {
    let mut w = word.to_vec();
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] > w[j + 1] {
                if c.parity(w[j]).is_odd() && c.parity(w[j + 1]).is_odd() {
                    sign = -sign;
                }
                w.swap(j, j + 1);
            }
        }
    }
    sign
}

#[test]
fn product_word_matches_bubble_sort() {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let c = mixed_chart();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let mut word: Vec<usize> = (0..c.len()).collect();
        word.shuffle(&mut rng);
        word.truncate(1 + (word.len() % 5));
        let product = word.iter().fold(Poly::one(&c), |acc, &i| &acc * &Poly::generator(&c, i));
        let mut sorted = word.clone();
        sorted.sort_unstable();
        let ordered = sorted.iter().fold(Poly::one(&c), |acc, &i| &acc * &Poly::generator(&c, i));
        assert_eq!(product, ordered.scale_int(bubble_sign(&c, &word)));
    }
}

#[test]
fn eta_pi_reordering() {
    let base = make_chart([("eta1", Odd, 1), ("eta2", Odd, 1)]).unwrap();
    let ph = base.cotangent().unwrap();
    let left = &v(&ph, "eta1") * &v(&ph, "P[eta1]");
    let right = &v(&ph, "P[eta2]") * &v(&ph, "eta2");
    // canonical order eta1 eta2 P[eta1] P[eta2]: one odd transposition for each factor pair
    let word = [0, 2, 3, 1];
    let expected = (&(&v(&ph, "eta1") * &v(&ph, "eta2")) * &(&v(&ph, "P[eta1]") * &v(&ph, "P[eta2]")))
        .scale_int(bubble_sign(&ph, &word));
    assert_eq!(&left * &right, expected);
}

#[test]
fn weight_and_parity_examples() {
    let base = make_chart([("x", Even, 0), ("eta", Odd, 1)]).unwrap();
    let ph = base.cotangent().unwrap();
    let f = &v(&ph, "P[eta]") * &(&v(&ph, "x") + &Poly::integer(&ph, 2));
    assert_eq!(f.weight_of(), WeightOf::Homogeneous(-1));
    assert_eq!(Poly::one(&ph).weight_of(), WeightOf::Homogeneous(0));
    assert_eq!((&v(&ph, "x") + &v(&ph, "eta")).weight_of(), WeightOf::Inhomogeneous);
    assert_eq!(f.parity_of().homogeneous(), Some(Odd));
    assert_eq!((&v(&ph, "x") + &v(&ph, "eta")).parity_of().homogeneous(), None);
}

#[test]
fn substitution_examples() {
    let c = make_chart([("t", Even, 0), ("xi", Odd, 0)]).unwrap();
    let f = &(&v(&c, "t") * &v(&c, "xi")) + &(&v(&c, "t") * &v(&c, "t"));
    assert_eq!(f.substitute(&HashMap::new()).unwrap(), f);
    let b = HashMap::from([(1, Poly::zero(&c))]);
    assert_eq!(f.substitute(&b).unwrap(), &v(&c, "t") * &v(&c, "t"));
    let bad = HashMap::from([(1, v(&c, "t"))]);
    assert!(matches!(f.substitute(&bad), Err(oddjacobi::Error::ParityMismatch { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graded_commutativity(s1 in any::<u64>(), s2 in any::<u64>(), k in 0usize..3) {
        let c = &charts()[k];
        let (f, g) = (sample(c, s1), sample(c, s2));
        let sign = parity_of(&f).koszul(parity_of(&g));
        prop_assert_eq!(&f * &g, (&g * &f).scale_int(sign));
    }

    #[test]
    fn odd_generators_square_to_zero(k in 0usize..3) {
        let c = &charts()[k];
        for i in 0..c.len() {
            if c.parity(i).is_odd() {
                let z = Poly::generator(c, i);
                prop_assert!((&z * &z).is_zero());
            }
        }
    }

    #[test]
    fn left_leibniz(s1 in any::<u64>(), s2 in any::<u64>(), k in 0usize..3, zi in 0usize..4) {
        let c = &charts()[k];
        let z = zi % c.len();
        let (f, g) = (sample(c, s1), sample(c, s2));
        let lhs = (&f * &g).left_derivative(z);
        let sign = c.parity(z).koszul(parity_of(&f));
        let rhs = &(&f.left_derivative(z) * &g) + &(&f * &g.left_derivative(z)).scale_int(sign);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivatives_graded_commute(s in any::<u64>(), k in 0usize..3, a in 0usize..4, b in 0usize..4) {
        let c = &charts()[k];
        let (z, w) = (a % c.len(), b % c.len());
        let f = sample(c, s);
        let sign = c.parity(z).koszul(c.parity(w));
        prop_assert_eq!(
            f.left_derivative(w).left_derivative(z),
            f.left_derivative(z).left_derivative(w).scale_int(sign)
        );
    }

    #[test]
    fn exp_tag_group_law(l in -5i64..5, m in -5i64..5) {
        let c = make_chart([("t", Even, 0), ("xi", Odd, 0)]).unwrap();
        let e = |r| Poly::exp_tag(&c, "t", r).unwrap();
        prop_assert_eq!(&e(l) * &e(m), e(l + m));
        prop_assert_eq!(e(0), Poly::one(&c));
        // d/dt exp(l t) = l exp(l t)
        prop_assert_eq!(e(l).derivative("t").unwrap(), e(l).scale_int(l));
    }

    #[test]
    fn substitution_is_a_morphism(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let c = mixed_chart();
        let (f, g) = (sample(&c, s1), sample(&c, s2));
        let binding = HashMap::from([
            (0, random_function(&c, 2, Even, s3)),
            (3, random_function(&c, 2, Odd, s3 ^ 1)),
        ]);
        let sub = |p: &Poly| p.substitute(&binding).unwrap();
        prop_assert_eq!(sub(&(&f * &g)), &sub(&f) * &sub(&g));
        prop_assert_eq!(sub(&(&f + &g)), &sub(&f) + &sub(&g));
    }
}
