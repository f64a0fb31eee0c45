mod common;

use common::{int_gamble, rng, simplex_point};
use desir_core::bernstein::{
    bern_multiply, bernstein_eval, bernstein_natex_member, coeff_range, degree_raise, family_member,
    from_count_gamble, has_nonpositive_expansion, has_positive_expansion, updated_frequency_member, BernsteinCone,
    BernsteinPoly, ExpansionVerdict, FrequencyVector, NatexVerdict, SignWitness,
};
use desir_core::exchangeable::{exchangeable_extension, likelihood_weights};
use desir_core::rational::Rational;
use desir_core::symmetry::{count_representation, cylindrical_extend};
use desir_core::{CountSpace, CountVector, Gamble, SequenceSpace};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

fn categories(k: usize) -> Vec<String> {
    ["a", "b", "c"][..k].iter().map(|s| s.to_string()).collect()
}

fn random_poly(r: &mut rand_chacha::ChaCha8Rng, k: usize, degree: usize) -> BernsteinPoly {
    BernsteinPoly::new(int_gamble(CountSpace::new(categories(k), degree).unwrap(), r, -4, 4)).unwrap()
}

fn frequency() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (2usize..=3).prop_flat_map(|k| (Just(k), prop::collection::vec(0i64..=7, k)))
        .prop_filter("nonzero weights", |(_, w)| w.iter().any(|&x| x > 0))
}

fn to_theta(w: &[i64]) -> FrequencyVector {
    let total: i64 = w.iter().sum();
    FrequencyVector::new(w.iter().map(|&x| Rational::new(x.into(), total.into())).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn basis_is_a_partition_of_unity((k, w) in frequency(), n in 0usize..=5) {
        let theta = to_theta(&w);
        let total: Rational = CountSpace::new(categories(k), n)
            .unwrap()
            .vectors()
            .map(|m| bernstein_eval(&m, &theta).unwrap())
            .sum();
        prop_assert!(total.is_one());
    }

    #[test]
    fn raising_preserves_values(seed in any::<u64>(), k in 2usize..=3, degree in 0usize..=3, extra in 1usize..=3) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, k, degree);
        let raised = degree_raise(&p, degree + extra).unwrap();
        for _ in 0..5 {
            let theta = FrequencyVector::new(simplex_point(&mut r, k)).unwrap();
            prop_assert_eq!(p.evaluate(&theta).unwrap(), raised.evaluate(&theta).unwrap());
        }
    }
}

#[test]
fn coefficient_ranges_nest_and_enclose_values() {
    let mut r = rng(51);
    for _ in 0..20 {
        let k = r.gen_range(2..=3);
        let degree = r.gen_range(1..=3);
        let p = random_poly(&mut r, k, degree);
        let mut previous = coeff_range(&p, degree).unwrap();
        for n in degree + 1..=degree + 4 {
            let current = coeff_range(&p, n).unwrap();
            assert!(previous.0 <= current.0 && current.1 <= previous.1);
            for m in CountSpace::new(categories(k), n).unwrap().vectors() {
                let v = p.evaluate(&FrequencyVector::from_counts(&m).unwrap()).unwrap();
                assert!(current.0 <= v && v <= current.1);
            }
            previous = current;
        }
    }
}

#[test]
fn products_with_basis_polynomials_use_likelihoods() {
    for (observed, remaining) in [(vec![1, 0], 2), (vec![2, 1], 2), (vec![1, 1, 0], 2), (vec![0, 0], 3)] {
        let observed = CountVector::new(observed);
        let k = observed.categories();
        let weights = likelihood_weights(&observed, remaining);
        for (m, l) in &weights.weights {
            let product = bern_multiply(&observed, &BernsteinPoly::basis(&categories(k), m).unwrap()).unwrap();
            let space = product.coefficients().domain().clone();
            let target = observed.add(m);
            for (i, key) in space.keys().iter().enumerate() {
                let expected = if *key == target.to_string() { l.clone() } else { Rational::zero() };
                assert_eq!(product.coefficients().value(i), &expected);
            }
        }
    }
}

#[test]
fn expansion_certificates_are_sound() {
    let mut r = rng(52);
    for _ in 0..60 {
        let k = r.gen_range(2..=3);
        let degree = r.gen_range(0..=3);
        let p = random_poly(&mut r, k, degree);
        match has_nonpositive_expansion(&p, 12).unwrap() {
            ExpansionVerdict::Yes { degree: n, coefficients } => {
                assert!(coefficients.is_nonpositive());
                assert_eq!(&coefficients, degree_raise(&p, n).unwrap().coefficients());
            }
            ExpansionVerdict::Never(SignWitness::Evaluation { theta, value }) => {
                assert!(value.is_positive());
                assert_eq!(p.evaluate(&theta).unwrap(), value);
            }
            ExpansionVerdict::Never(SignWitness::MinCoefficient { degree: n, min }) => {
                assert!(min.is_positive());
                assert_eq!(coeff_range(&p, n).unwrap().0, min);
            }
            other => assert!(matches!(other, ExpansionVerdict::Undecided { cap: 12 })),
        }
        match has_positive_expansion(&p, 12).unwrap() {
            ExpansionVerdict::Yes { coefficients, .. } => {
                assert!(coefficients.is_nonnegative() && !coefficients.is_zero());
            }
            ExpansionVerdict::Never(SignWitness::Evaluation { theta, value }) => {
                assert!(value.is_negative());
                assert_eq!(p.evaluate(&theta).unwrap(), value);
            }
            ExpansionVerdict::Never(SignWitness::ZeroPolynomial) => assert!(p.is_zero()),
            other => assert!(matches!(other, ExpansionVerdict::Undecided { cap: 12 })),
        }
    }
}

#[test]
fn frequency_updating_matches_count_updating_at_the_sample_size() {
    let mut r = rng(53);
    let mut compared = 0;
    while compared < 15 {
        let n = r.gen_range(2..=3);
        let space = SequenceSpace::new(["b", "w"], n).unwrap();
        let assessment: Vec<_> = (0..r.gen_range(1..=2)).map(|_| int_gamble(space.clone(), &mut r, -3, 3)).collect();
        let Ok(model) = exchangeable_extension(&space, assessment.clone()) else { continue };
        let generators = assessment
            .iter()
            .map(|f| from_count_gamble(&count_representation(f).unwrap()).unwrap())
            .collect();
        // with the cap at N both routes solve the same LP
        let cone = BernsteinCone::new(vec!["b".into(), "w".into()], generators, n).unwrap();
        if !cone.generators().is_empty() && matches!(bernstein_natex_member(&cone, &cone.generators()[0]).unwrap(), NatexVerdict::Incoherent(_)) {
            continue;
        }
        compared += 1;
        for _ in 0..8 {
            let observed_total = r.gen_range(0..n);
            let b = r.gen_range(0..=observed_total);
            let observed = CountVector::new(vec![b, observed_total - b]);
            let remaining = CountSpace::new(["b", "w"], n - observed_total).unwrap();
            let g = int_gamble(remaining, &mut r, -3, 3);
            let by_counts = model.updated_member(&observed, &g).unwrap();
            let by_frequencies = updated_frequency_member(&cone, &observed, &from_count_gamble(&g).unwrap()).unwrap();
            assert_eq!(by_counts, by_frequencies.is_yes(), "g = {:?}", g.values());
        }
    }
}

#[test]
fn family_membership_is_time_consistent() {
    let mut r = rng(54);
    let bw = |n| SequenceSpace::new(["b", "w"], n).unwrap();
    let basis = BernsteinPoly::basis(&["b".into(), "w".into()], &CountVector::new(vec![1, 1])).unwrap();
    let tilted = BernsteinPoly::from_values(["b", "w"], 1, vec![Rational::from_integer((-1).into()), Rational::from_integer(2.into())]).unwrap();
    let cone = BernsteinCone::new(vec!["b".into(), "w".into()], vec![basis, tilted], 10).unwrap();
    for _ in 0..30 {
        let f = int_gamble(bw(1), &mut r, -3, 3);
        let short = family_member(&cone, &f).unwrap();
        for n2 in 2..=3 {
            let long = family_member(&cone, &cylindrical_extend(&f, n2).unwrap()).unwrap();
            assert_eq!(short.is_yes(), long.is_yes());
        }
    }
    let zero = Gamble::zero(bw(2));
    assert!(!family_member(&cone, &zero).unwrap().is_yes());
}
