use super::*;
use crate::field::ResidueField;
use crate::group::{GroupElement, OrderedGroup};
use crate::series::{Ambient, Precision, Scalar, Series, Term};

fn z(n: i64) -> GroupElement {
    GroupElement::integer(n)
}

fn q(n: i64, d: i64) -> GroupElement {
    GroupElement::rational(n, d)
}

fn fp_z(p: u64) -> Ambient {
    Ambient::new(OrderedGroup::IntegerLine, ResidueField::PrimeField(p))
}

fn fp_q(p: u64) -> Ambient {
    Ambient::new(OrderedGroup::RationalLine, ResidueField::PrimeField(p))
}

fn poly(a: Ambient, terms: &[(GroupElement, i64)]) -> Series {
    Series::from_terms(
        a,
        terms
            .iter()
            .map(|(e, c)| Term::new(e.clone(), a.field.from_int(*c)))
            .collect(),
    )
    .unwrap()
}

fn mono(a: Ambient, e: GroupElement) -> Series {
    Series::monomial(a, a.field.one(), e)
}

fn fp_t(a: Ambient, unit: GroupElement) -> SubfieldPresentation {
    SubfieldPresentation::rational_functions(a, a.field, unit).unwrap()
}

fn values(steps: &[EvidenceStep]) -> Vec<GroupElement> {
    steps.iter().map(|s| s.value.clone()).collect()
}

#[test]
fn half_power_is_independent_of_one() {
    let a = fp_q(5);
    let k = fp_t(a, q(1, 1));
    let fam = [Series::one(a), mono(a, q(1, 2))];
    let p = Precision::new(q(20, 1), 6);
    assert!(is_valuation_independent(&k, &fam, &p)
        .unwrap()
        .is_independent());
    assert_eq!(
        check_normalized(&k, &fam, &p).unwrap(),
        NormalizationCheck::Pass
    );
}

#[test]
fn same_line_is_dependent_with_rechecked_witness() {
    let a = fp_z(5);
    let k = fp_t(a, z(1));
    let fam = [Series::one(a), poly(a, &[(z(0), 1), (z(1), 1)])];
    let p = Precision::new(z(20), 6);
    let IndependenceVerdict::Dependent(w) = is_valuation_independent(&k, &fam, &p).unwrap() else {
        panic!("1 and 1+t are K-linearly dependent");
    };
    assert!(w.recheck(&fam, &p));
}

#[test]
fn zero_member_is_rejected() {
    let a = fp_z(5);
    let k = fp_t(a, z(1));
    let fam = [Series::one(a), Series::zero(a)];
    let err = is_valuation_independent(&k, &fam, &Precision::new(z(10), 4)).unwrap_err();
    assert!(matches!(err, SpaceError::ZeroElementInFamily(2)));
}

#[test]
fn empty_family_is_independent() {
    let a = fp_z(5);
    let k = fp_t(a, z(1));
    assert!(is_valuation_independent(&k, &[], &Precision::new(z(10), 4))
        .unwrap()
        .is_independent());
}

#[test]
fn normalization_reports_first_failing_condition() {
    let a = fp_z(5);
    let k = fp_t(a, z(1));
    let p = Precision::new(z(20), 6);
    let fam = [mono(a, z(1)), poly(a, &[(z(1), 1), (z(2), 1)])];
    let NormalizationCheck::Fail { condition, .. } = check_normalized(&k, &fam, &p).unwrap() else {
        panic!("not normalized");
    };
    assert_eq!(condition, NormalCondition::N2);
    let single = [poly(a, &[(z(0), 3)])];
    let NormalizationCheck::Fail { condition, members } =
        check_normalized(&k, &single, &p).unwrap()
    else {
        panic!("residue 3 is in Kv");
    };
    assert_eq!((condition, members), (NormalCondition::N4, vec![1]));
}

#[test]
fn normalize_output_passes_check() {
    let a = fp_q(5);
    let k = fp_t(a, q(1, 1));
    let p = Precision::new(q(20, 1), 6);
    let fam = [
        poly(a, &[(q(2, 1), 3)]),
        poly(a, &[(q(5, 2), 2), (q(3, 1), 1)]),
    ];
    let n = normalize(&k, &fam, &p).unwrap();
    assert_eq!(
        check_normalized(&k, &n.elements, &p).unwrap(),
        NormalizationCheck::Pass
    );
    assert_eq!(n.elements[0].valuation(&p).value(), Some(&q(0, 1)));
    assert_eq!(n.elements[1].valuation(&p).value(), Some(&q(5, 2)));
}

#[test]
fn transcendental_residue_is_independent() {
    let a = Ambient::new(
        OrderedGroup::IntegerLine,
        ResidueField::RationalFunctions(3),
    );
    let k = SubfieldPresentation::rational_functions(a, ResidueField::PrimeField(3), z(1)).unwrap();
    let y = Series::constant(a, a.field.variable().unwrap());
    let p = Precision::new(z(10), 4);
    assert!(
        is_valuation_independent(&k, &[Series::one(a), y.clone()], &p)
            .unwrap()
            .is_independent()
    );
    let ImmediacyEvidence::NotImmediateWitness { value, .. } =
        immediacy_evidence(&k, &y, &p).unwrap()
    else {
        panic!("res(y) is not in Kv");
    };
    assert_eq!(value, z(0));
}

#[test]
fn nearest_point_over_trivially_valued_rationals() {
    let a = Ambient::new(OrderedGroup::IntegerLine, ResidueField::Rationals);
    let k = SubfieldPresentation::trivial(a, ResidueField::Rationals).unwrap();
    let w = [
        poly(a, &[(z(1), 1), (z(2), -1)]),
        poly(a, &[(z(2), 1), (z(3), -1)]),
    ];
    let b = mono(a, z(1));
    let r = nearest_point(&k, &b, &w, &Precision::new(z(20), 6)).unwrap();
    assert!(matches!(&r.achieved, Achieved::Value(g) if *g == z(3)));
    assert!(r
        .best
        .equal_up_to(&poly(a, &[(z(1), 1), (z(3), -1)]), &z(40)));
    assert_eq!(r.trace, vec![z(1), z(2), z(3)]);
}

#[test]
fn streamed_telescoping_family_is_unbounded() {
    let a = Ambient::new(OrderedGroup::IntegerLine, ResidueField::Rationals);
    let k = SubfieldPresentation::trivial(a, ResidueField::Rationals).unwrap();
    let b = mono(a, z(1));
    let stage = |n: usize| {
        (1..=n as i64)
            .map(|i| poly(a, &[(z(i), 1), (z(i + 1), -1)]))
            .collect()
    };
    let r = nearest_point_stream(&k, &b, stage, &Precision::new(z(40), 5)).unwrap();
    let Achieved::Unbounded(e) = r.achieved else {
        panic!("values keep increasing")
    };
    assert_eq!(values(&e), vec![z(2), z(3), z(4), z(5), z(6)]);
}

#[test]
fn artin_schreier_distance_to_k_is_unbounded() {
    let a = fp_z(3);
    let k = fp_t(a, z(1));
    let x = Series::artin_schreier(a, 3, z(1));
    let r = nearest_point(&k, &x, &[Series::one(a)], &Precision::new(z(300), 5)).unwrap();
    let Achieved::Unbounded(e) = &r.achieved else {
        panic!("got {}", r.achieved)
    };
    assert_eq!(values(e), vec![z(1), z(3), z(9), z(27), z(81)]);
    let ImmediacyEvidence::ImmediateEvidence(e) =
        immediacy_evidence(&k, &x, &Precision::new(z(300), 5)).unwrap()
    else {
        panic!("immediate");
    };
    assert_eq!(e.len(), 5);
}

#[test]
fn geometric_series_is_recognized_as_rational() {
    let a = fp_z(5);
    let k = fp_t(a, z(1));
    let g = Series::geometric(a, z(2)).shift(&z(1));
    let r = nearest_point(&k, &g, &[Series::one(a)], &Precision::new(z(200), 5)).unwrap();
    assert!(matches!(
        r.achieved,
        Achieved::ExactMember { certified: false }
    ));
    let expected = Scalar::ratio(
        a,
        vec![Term::new(z(1), a.field.one())],
        vec![
            Term::new(z(0), a.field.one()),
            Term::new(z(2), a.field.from_int(-1)),
        ],
    )
    .unwrap();
    assert_eq!(r.coefficients[0], expected);
}

#[test]
fn completion_accepts_members_to_precision() {
    let a = fp_z(3);
    let k = SubfieldPresentation::completion(a, a.field, z(1)).unwrap();
    let x = Series::artin_schreier(a, 3, z(1));
    let r = nearest_point(&k, &x, &[Series::one(a)], &Precision::new(z(100), 5)).unwrap();
    assert!(matches!(
        r.achieved,
        Achieved::ExactMember { certified: false }
    ));
}

#[test]
fn exact_member_is_certified() {
    let a = fp_z(5);
    let k = fp_t(a, z(1));
    let b = poly(a, &[(z(0), 2), (z(3), 1)]);
    let r = nearest_point(&k, &b, &[Series::one(a)], &Precision::new(z(20), 5)).unwrap();
    assert!(matches!(
        r.achieved,
        Achieved::ExactMember { certified: true }
    ));
}

#[test]
fn nearest_point_requires_normalized_basis() {
    let a = fp_z(5);
    let k = fp_t(a, z(1));
    let err = nearest_point(
        &k,
        &Series::one(a),
        &[mono(a, z(1))],
        &Precision::new(z(20), 5),
    )
    .unwrap_err();
    assert!(matches!(
        err,
        SpaceError::NotNormalized(NormalCondition::N3, _)
    ));
}

#[test]
fn orthogonalize_examples() {
    let a = fp_q(5);
    let k = fp_t(a, q(1, 1));
    let p = Precision::new(q(20, 1), 6);
    let o = orthogonalize(&k, &[Series::one(a), mono(a, q(1, 2))], &p).unwrap();
    assert_eq!(o.basis().unwrap().len(), 2);
    let o = orthogonalize(
        &k,
        &[Series::one(a), poly(a, &[(q(0, 1), 1), (q(1, 1), 1)])],
        &p,
    )
    .unwrap();
    let Orthogonalized::Basis { basis, skipped, .. } = o else {
        panic!("finite span")
    };
    assert_eq!((basis.len(), skipped), (1, vec![1]));
}

#[test]
fn orthogonalize_coordinates_reproduce_basis() {
    let a = fp_z(7);
    let k = SubfieldPresentation::trivial(a, a.field).unwrap();
    let gens = [
        poly(a, &[(z(0), 1), (z(1), 2)]),
        poly(a, &[(z(0), 3), (z(2), 1)]),
        poly(a, &[(z(1), 1), (z(2), 5)]),
    ];
    let p = Precision::new(z(20), 6);
    let Orthogonalized::Basis {
        basis, coordinates, ..
    } = orthogonalize(&k, &gens, &p).unwrap()
    else {
        panic!("finite span")
    };
    assert_eq!(basis.len(), 3);
    for (bi, row) in basis.iter().zip(&coordinates) {
        let combo = Series::sum(
            a,
            gens.iter().zip(row).map(|(g, c)| g.mul_scalar(c)).collect(),
        );
        assert!(combo.equal_up_to(bi, &z(20)));
    }
}

#[test]
fn not_countably_approximable_space_obstructs() {
    let a = Ambient::new(
        OrderedGroup::LexProduct { rank: 2 },
        ResidueField::PrimeField(3),
    );
    let k = fp_t(a, GroupElement::lex(&[0, 1]));
    let x = &Series::artin_schreier(a, 3, GroupElement::lex(&[0, 1]))
        + &mono(a, GroupElement::lex(&[1, 0]));
    let p = Precision::new(GroupElement::lex(&[0, 100]), 5);
    let Orthogonalized::Obstruction { index, result, .. } =
        orthogonalize(&k, &[Series::one(a), x], &p).unwrap()
    else {
        panic!("no valuation basis")
    };
    assert_eq!(index, 2);
    let Achieved::Unbounded(e) = result.achieved else {
        panic!("unbounded evidence")
    };
    let expected: Vec<GroupElement> = [1, 3, 9, 27, 81]
        .iter()
        .map(|&i| GroupElement::lex(&[0, i]))
        .collect();
    assert_eq!(values(&e), expected);
}

#[test]
fn exchange_removes_minimal_summand() {
    let a = fp_z(5);
    let k = SubfieldPresentation::trivial(a, a.field).unwrap();
    let p = Precision::new(z(20), 6);
    let b = [Series::one(a), mono(a, z(1))];
    let x = poly(a, &[(z(0), 1), (z(1), 1)]);
    let ex = basis_exchange(&k, &b, &[], &x, &p).unwrap();
    assert_eq!(ex.removed, 0);
    assert!(ex.a.is_exact_zero(&p));
    assert!(ex.certificate.is_independent());
    let ex = basis_exchange(&k, &b, &[], &mono(a, z(1)), &p).unwrap();
    assert_eq!(ex.removed, 1);
    assert!(matches!(
        basis_exchange(&k, &b, &[], &mono(a, z(2)), &p),
        Err(SpaceError::NotInSpan)
    ));
}

#[test]
fn exchange_tie_removes_lowest_index() {
    let a = Ambient::new(
        OrderedGroup::IntegerLine,
        ResidueField::RationalFunctions(3),
    );
    let k = SubfieldPresentation::rational_functions(a, ResidueField::PrimeField(3), z(1)).unwrap();
    let y = Series::constant(a, a.field.variable().unwrap());
    let b = [Series::one(a), y.clone()];
    let x = &Series::one(a) + &y;
    let ex = basis_exchange(&k, &b, &[], &x, &Precision::new(z(10), 4)).unwrap();
    assert_eq!(ex.removed, 0);
}

#[test]
fn relative_basis_splits_off_generator() {
    let a = fp_q(5);
    let k = SubfieldPresentation::trivial(a, a.field).unwrap();
    let p = Precision::new(q(20, 1), 6);
    let b = [Series::one(a), mono(a, q(1, 2)), mono(a, q(1, 1))];
    let g = poly(a, &[(q(0, 1), 1), (q(1, 1), 1)]);
    let r = relative_basis(&k, &b, &[], &[g], &p).unwrap();
    assert_eq!(r.a.len(), 1);
    assert_eq!(r.kept, vec![1, 2]);
    assert!(r.a_certificate.is_independent() && r.b_prime_certificate.is_independent());
    let full = relative_basis(&k, &b, &[], &b, &p).unwrap();
    assert!(full.b_prime.is_empty());
    let none = relative_basis(&k, &b, &[], &[], &p).unwrap();
    assert_eq!(none.kept, vec![0, 1, 2]);
}

#[test]
fn berlekamp_massey_finds_fibonacci() {
    let f = ResidueField::PrimeField(101);
    let mut s = vec![f.one(), f.one()];
    for i in 2..20 {
        let n = s[i - 1].try_add(&s[i - 2]).unwrap();
        s.push(n);
    }
    let (lambda, l) = berlekamp_massey(&s, &f.zero(), &f.one());
    assert_eq!(l, 2);
    assert_eq!(lambda, vec![f.one(), f.from_int(-1), f.from_int(-1)]);
}
