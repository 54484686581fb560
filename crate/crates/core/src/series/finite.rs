//! Arithmetic on finite, exponent-sorted term lists.

use std::collections::BTreeMap;

use crate::field::FieldElement;
use crate::group::GroupElement;

use super::Term;

pub(crate) fn below<'a>(terms: &'a [Term], bound: &GroupElement) -> &'a [Term] {
    let cut = terms.partition_point(|t| t.exponent < *bound);
    &terms[..cut]
}

/// Sorts and merges like exponents, dropping zero coefficients.
pub(crate) fn canonical(mut terms: Vec<Term>) -> Vec<Term> {
    terms.sort_by(|a, b| a.exponent.cmp(&b.exponent));
    let mut out: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.exponent == t.exponent => {
                last.coefficient = last
                    .coefficient
                    .try_add(&t.coefficient)
                    .expect("terms share one coefficient field");
            }
            _ => out.push(t),
        }
        if out.last().is_some_and(|l| l.coefficient.is_zero()) {
            out.pop();
        }
    }
    out
}

pub(crate) fn add(a: &[Term], b: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].exponent.cmp(&b[j].exponent) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = a[i]
                    .coefficient
                    .try_add(&b[j].coefficient)
                    .expect("terms share one coefficient field");
                if !c.is_zero() {
                    out.push(Term {
                        exponent: a[i].exponent.clone(),
                        coefficient: c,
                    });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub(crate) fn neg(a: &[Term]) -> Vec<Term> {
    a.iter()
        .map(|t| Term {
            exponent: t.exponent.clone(),
            coefficient: t.coefficient.neg(),
        })
        .collect()
}

pub(crate) fn scale(a: &[Term], c: &FieldElement, shift: &GroupElement) -> Vec<Term> {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter()
        .map(|t| Term {
            exponent: &t.exponent + shift,
            coefficient: t
                .coefficient
                .try_mul(c)
                .expect("terms share one coefficient field"),
        })
        .collect()
}

/// Product of two sorted lists, keeping only exponents below `bound`.
pub(crate) fn mul(a: &[Term], b: &[Term], bound: Option<&GroupElement>) -> Vec<Term> {
    let mut acc: BTreeMap<GroupElement, FieldElement> = BTreeMap::new();
    for x in a {
        for y in b {
            let e = &x.exponent + &y.exponent;
            if bound.is_some_and(|g| e >= *g) {
                break;
            }
            let c = x
                .coefficient
                .try_mul(&y.coefficient)
                .expect("terms share one coefficient field");
            match acc.get_mut(&e) {
                Some(slot) => *slot = slot.try_add(&c).expect("terms share one coefficient field"),
                None => {
                    acc.insert(e, c);
                }
            }
        }
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(exponent, coefficient)| Term {
            exponent,
            coefficient,
        })
        .collect()
}
