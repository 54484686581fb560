#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ultragram_core::{
    Ambient, GroupElement, OrderedGroup, Precision, ResidueField, Scalar, Series,
    SubfieldPresentation, Term,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn half(k: i64) -> GroupElement {
    GroupElement::rational(k, 2)
}

/// `F_p((t^Q))` with `K = F_p(t)`.
pub fn half_line(p: u64) -> (Ambient, SubfieldPresentation) {
    let a = Ambient::new(OrderedGroup::RationalLine, ResidueField::PrimeField(p));
    let k =
        SubfieldPresentation::rational_functions(a, a.field, GroupElement::rational(1, 1)).unwrap();
    (a, k)
}

pub fn prec(ceiling: i64) -> Precision {
    Precision::new(GroupElement::rational(ceiling, 1), 6)
}

/// A nonzero polynomial in `t^{1/2}` with support in `[low, low + width)/2`.
pub fn random_poly<R: Rng>(rng: &mut R, a: Ambient, low: i64, width: i64) -> Series {
    let p = a.field.characteristic() as i64;
    loop {
        let mut terms = Vec::new();
        for k in 0..width {
            if rng.random_range(0..3) > 0 {
                terms.push(Term::new(
                    half(low + k),
                    a.field.from_int(rng.random_range(0..p)),
                ));
            }
        }
        let s = Series::from_terms(a, terms).unwrap();
        if !s.is_exact_zero(&prec(40)) {
            return s;
        }
    }
}

/// A random polynomial, sometimes multiplied by a geometric series in
/// `t^{1/2}` so that the element has infinite support.
pub fn random_element<R: Rng>(rng: &mut R, a: Ambient) -> Series {
    let low = rng.random_range(0..4);
    let base = random_poly(rng, a, low, 4);
    if rng.random_range(0..3) == 0 {
        &base * &Series::geometric(a, half(rng.random_range(1..3)))
    } else {
        base
    }
}

pub fn random_family<R: Rng>(rng: &mut R, a: Ambient, len: usize) -> Vec<Series> {
    (0..len).map(|_| random_element(rng, a)).collect()
}

/// A nonzero element of `K` with support starting in `[-2, 3)`.
pub fn random_scalar<R: Rng>(rng: &mut R, k: &SubfieldPresentation, width: usize) -> Scalar {
    let low = rng.random_range(-2..3);
    k.sample_scalar(rng, low, width)
}
