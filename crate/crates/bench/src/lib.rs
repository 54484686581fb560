//! Fixtures shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ultragram_core::{
    Ambient, GroupElement, OrderedGroup, Precision, ResidueField, Series, SubfieldPresentation,
    Term,
};

/// `F_p((t^Q))` with `K = F_p(t)`.
pub fn half_line(p: u64) -> (Ambient, SubfieldPresentation) {
    let a = Ambient::new(OrderedGroup::RationalLine, ResidueField::PrimeField(p));
    let k = SubfieldPresentation::rational_functions(a, a.field, GroupElement::rational(1, 1))
        .expect("presentation");
    (a, k)
}

pub fn precision(ceiling: i64, max_terms: usize) -> Precision {
    Precision::new(GroupElement::rational(ceiling, 1), max_terms)
}

/// Seeded families of polynomials in `t^{1/2}`, some multiplied by a
/// geometric series.
pub fn families(a: Ambient, count: usize, len: usize, seed: u64) -> Vec<Vec<Series>> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let p = a.field.characteristic() as i64;
    (0..count)
        .map(|_| {
            (0..len)
                .map(|_| {
                    let low = r.random_range(0..4);
                    let mut terms = vec![Term::new(GroupElement::rational(low, 2), a.field.one())];
                    for k in 1..4 {
                        terms.push(Term::new(
                            GroupElement::rational(low + k, 2),
                            a.field.from_int(r.random_range(0..p)),
                        ));
                    }
                    let s = Series::from_terms(a, terms).expect("terms");
                    if r.random_range(0..3) == 0 {
                        &s * &Series::geometric(a, GroupElement::rational(1, 2))
                    } else {
                        s
                    }
                })
                .collect()
        })
        .collect()
}
