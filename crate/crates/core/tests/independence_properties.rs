mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use ultragram_core::{
    check_normalized, is_valuation_independent, is_valuation_independent_over, normalize,
    GroupElement, IndependenceVerdict, NormalizationCheck, Scalar, Series, Valuation,
};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 200,
        ..ProptestConfig::default()
    }
}

fn value(s: &Series) -> GroupElement {
    s.valuation(&prec(40))
        .value()
        .cloned()
        .expect("nonzero up to the ceiling")
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn independent_verdict_is_sound(seed in any::<u64>(), len in 1usize..4) {
        let (a, k) = half_line(5);
        let mut r = rng(seed);
        let fam = random_family(&mut r, a, len);
        let p = prec(40);
        let Ok(IndependenceVerdict::Independent { .. }) = is_valuation_independent(&k, &fam, &p) else {
            return Ok(());
        };
        for _ in 0..5 {
            let cs: Vec<Scalar> = (0..len).map(|_| random_scalar(&mut r, &k, 3)).collect();
            let combo = Series::sum(a, fam.iter().zip(&cs).map(|(b, c)| b.mul_scalar(c)).collect());
            let min = fam
                .iter()
                .zip(&cs)
                .map(|(b, c)| &value(b) + &c.valuation().unwrap())
                .min()
                .unwrap();
            prop_assert_eq!(combo.valuation(&p), Valuation::Value(min));
        }
    }

    #[test]
    fn dependent_witness_rechecks(seed in any::<u64>(), len in 2usize..4) {
        let (a, k) = half_line(5);
        let mut r = rng(seed);
        let fam = random_family(&mut r, a, len);
        let p = prec(40);
        if let Ok(IndependenceVerdict::Dependent(w)) = is_valuation_independent(&k, &fam, &p) {
            prop_assert!(w.recheck(&fam, &p));
        }
    }

    #[test]
    fn verdict_is_scaling_invariant(seed in any::<u64>(), len in 1usize..4) {
        let (a, k) = half_line(5);
        let mut r = rng(seed);
        let fam = random_family(&mut r, a, len);
        let scaled: Vec<Series> = fam
            .iter()
            .map(|b| b.mul_scalar(&random_scalar(&mut r, &k, 2)))
            .collect();
        let p = prec(40);
        let (Ok(x), Ok(y)) = (is_valuation_independent(&k, &fam, &p), is_valuation_independent(&k, &scaled, &p)) else {
            return Ok(());
        };
        prop_assert_eq!(x.is_independent(), y.is_independent());
    }

    #[test]
    fn sampled_values_lie_in_vk_plus_vb(seed in any::<u64>(), len in 1usize..4) {
        let (a, k) = half_line(5);
        let mut r = rng(seed);
        let fam = random_family(&mut r, a, len);
        let p = prec(40);
        let Ok(IndependenceVerdict::Independent { .. }) = is_valuation_independent(&k, &fam, &p) else {
            return Ok(());
        };
        let vals: Vec<GroupElement> = fam.iter().map(value).collect();
        let cs: Vec<Scalar> = (0..len).map(|_| random_scalar(&mut r, &k, 3)).collect();
        let combo = Series::sum(a, fam.iter().zip(&cs).map(|(b, c)| b.mul_scalar(c)).collect());
        let v = combo.valuation(&p).value().cloned().unwrap();
        let mut hit = false;
        for vb in &vals {
            hit |= k.in_value_group(&(&v - vb)).unwrap();
        }
        prop_assert!(hit);
    }

    #[test]
    fn transitivity_over_subspace(seed in any::<u64>(), n in 1usize..3, m in 1usize..3) {
        let (a, k) = half_line(5);
        let mut r = rng(seed);
        let b = random_family(&mut r, a, n);
        let b2 = random_family(&mut r, a, m);
        let p = prec(40);
        let Ok(vb) = is_valuation_independent(&k, &b, &p) else { return Ok(()) };
        if !vb.is_independent() {
            return Ok(());
        }
        let all: Vec<Series> = b.iter().chain(&b2).cloned().collect();
        let (Ok(whole), Ok(over)) = (is_valuation_independent(&k, &all, &p), is_valuation_independent_over(&k, &b2, &b, &p))
        else {
            return Ok(());
        };
        prop_assert_eq!(whole.is_independent(), over.is_independent());
    }

    #[test]
    fn normalize_output_is_normal_and_proportional(seed in any::<u64>(), len in 1usize..4) {
        let (a, k) = half_line(5);
        let mut r = rng(seed);
        let fam = random_family(&mut r, a, len);
        let p = prec(40);
        let Ok(n) = normalize(&k, &fam, &p) else { return Ok(()) };
        prop_assert_eq!(check_normalized(&k, &n.elements, &p).unwrap(), NormalizationCheck::Pass);
        for ((b, c), e) in fam.iter().zip(&n.scalings).zip(&n.elements) {
            prop_assert!(k.contains_scalar(c).unwrap());
            prop_assert!(b.mul_scalar(c).equal_up_to(e, &GroupElement::rational(40, 1)));
        }
    }

    #[test]
    fn small_perturbations_stay_normalized(seed in any::<u64>(), len in 1usize..4) {
        let (a, k) = half_line(5);
        let mut r = rng(seed);
        let fam = random_family(&mut r, a, len);
        let p = prec(40);
        let Ok(n) = normalize(&k, &fam, &p) else { return Ok(()) };
        let perturbed: Vec<Series> = n
            .elements
            .iter()
            .map(|u| {
                let lift = random_poly(&mut r, a, 1, 3);
                u + &lift.shift(&value(u))
            })
            .collect();
        prop_assert_eq!(check_normalized(&k, &perturbed, &p).unwrap(), NormalizationCheck::Pass);
        prop_assert!(is_valuation_independent(&k, &perturbed, &p).unwrap().is_independent());
    }

    #[test]
    fn linear_relations_are_never_independent(seed in any::<u64>(), len in 1usize..3) {
        let (a, k) = half_line(5);
        let mut r = rng(seed);
        let mut fam = random_family(&mut r, a, len);
        let cs: Vec<Scalar> = (0..len).map(|_| k.sample_scalar(&mut r, 0, 2)).collect();
        let combo = Series::sum(a, fam.iter().zip(&cs).map(|(b, c)| b.mul_scalar(c)).collect());
        let p = prec(40);
        if combo.valuation(&p).value().is_none() {
            return Ok(());
        }
        fam.push(combo);
        if let Ok(v) = is_valuation_independent(&k, &fam, &p) {
            prop_assert!(!v.is_independent());
        }
    }
}

#[test]
fn standard_family_stays_independent_over_the_completion() {
    let (a, k) = half_line(3);
    let m =
        ultragram_core::SubfieldPresentation::completion(a, a.field, GroupElement::rational(1, 1))
            .unwrap();
    let p = prec(40);
    let fam = [Series::one(a), Series::monomial(a, a.field.one(), half(1))];
    assert!(is_valuation_independent(&k, &fam, &p)
        .unwrap()
        .is_independent());
    let mut r = rng(7);
    for _ in 0..100 {
        let cs: Vec<Series> = (0..2)
            .map(|_| {
                // Elements of the completion outside K: c·t^m·(1 + t^2 + t^8 + …).
                let m = r.random_range(-1..3);
                let c = a.field.from_int(r.random_range(1..3));
                Series::artin_schreier(a, 3, GroupElement::rational(1, 1))
                    .scale(&c, &GroupElement::rational(m - 1, 1))
            })
            .collect();
        let combo = Series::sum(a, fam.iter().zip(&cs).map(|(b, c)| b * c).collect());
        let min = fam
            .iter()
            .zip(&cs)
            .map(|(b, c)| &value(b) + &value(c))
            .min()
            .unwrap();
        assert_eq!(combo.valuation(&p), Valuation::Value(min));
    }
    assert!(is_valuation_independent(&m, &fam, &p)
        .unwrap()
        .is_independent());
}
