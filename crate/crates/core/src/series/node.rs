//! Expression nodes and their memoized truncated expansion.

use std::fmt;
use std::sync::{Arc, Mutex};

use crate::field::FieldElement;
use crate::group::GroupElement;

use super::finite;
use super::{Ambient, Expansion, Known, Series, Term};

/// Upper bound on the number of terms a single node produces per expansion.
pub const EXPANSION_BUDGET: usize = 1 << 14;
/// Upper bound on the number of geometric powers summed by an inverse.
const MAX_INVERSE_POWERS: usize = 1024;

pub(crate) type TermFn = dyn Fn(usize) -> Option<Term> + Send + Sync;

pub(crate) enum Kind {
    Finite(Vec<Term>),
    /// Term `i` of a strictly increasing sequence; `None` ends the series.
    Generator {
        label: String,
        next: Arc<TermFn>,
    },
    Sum(Vec<Series>),
    Neg(Series),
    Scale {
        coeff: FieldElement,
        shift: GroupElement,
        inner: Series,
    },
    Mul(Series, Series),
    /// `1/x` with `x = c t^γ (1 + u)`; stores the leading term and `u`.
    Inv {
        lead: Term,
        u: Series,
    },
}

struct Cached {
    request: GroupElement,
    expansion: Expansion,
}

pub(crate) struct Node {
    pub ambient: Ambient,
    pub kind: Kind,
    /// Lower bound for the valuation; `None` means exactly zero.
    pub floor: Option<GroupElement>,
    cache: Mutex<Option<Cached>>,
}

impl fmt::Debug for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Finite(t) => write!(f, "Finite({} terms)", t.len()),
            Kind::Generator { label, .. } => write!(f, "Generator({label})"),
            Kind::Sum(v) => write!(f, "Sum({})", v.len()),
            Kind::Neg(_) => write!(f, "Neg"),
            Kind::Scale { .. } => write!(f, "Scale"),
            Kind::Mul(..) => write!(f, "Mul"),
            Kind::Inv { .. } => write!(f, "Inv"),
        }
    }
}

fn min_opt(a: Option<GroupElement>, b: Option<GroupElement>) -> Option<GroupElement> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Node {
    pub fn new(ambient: Ambient, kind: Kind) -> Node {
        let floor = match &kind {
            Kind::Finite(t) => t.first().map(|t| t.exponent.clone()),
            Kind::Generator { next, .. } => next(0).map(|t| t.exponent),
            Kind::Sum(v) => v
                .iter()
                .fold(None, |acc, s| min_opt(acc, s.0.floor.clone())),
            Kind::Neg(x) => x.0.floor.clone(),
            Kind::Scale {
                coeff,
                shift,
                inner,
            } => {
                if coeff.is_zero() {
                    None
                } else {
                    inner.0.floor.as_ref().map(|f| f + shift)
                }
            }
            Kind::Mul(x, y) => match (&x.0.floor, &y.0.floor) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
            Kind::Inv { lead, .. } => Some(lead.exponent.negate()),
        };
        Node {
            ambient,
            kind,
            floor,
            cache: Mutex::new(None),
        }
    }

    pub fn expand(&self, ceiling: &GroupElement) -> Expansion {
        if self.floor.is_none() {
            return Expansion {
                terms: Vec::new(),
                known: Known::All,
            };
        }
        {
            let cache = self.cache.lock().expect("expansion cache poisoned");
            if let Some(c) = cache.as_ref() {
                if c.expansion.known == Known::All || c.request >= *ceiling {
                    return c.expansion.restrict(ceiling);
                }
            }
        }
        let fresh = self.compute(ceiling);
        let mut cache = self.cache.lock().expect("expansion cache poisoned");
        let replace = match cache.as_ref() {
            Some(c) => c.request < *ceiling,
            None => true,
        };
        if replace {
            *cache = Some(Cached {
                request: ceiling.clone(),
                expansion: fresh.clone(),
            });
        }
        fresh
    }

    fn compute(&self, ceiling: &GroupElement) -> Expansion {
        match &self.kind {
            Kind::Finite(t) => Expansion {
                terms: t.clone(),
                known: Known::All,
            }
            .restrict(ceiling),
            Kind::Generator { label, next } => expand_generator(label, next.as_ref(), ceiling),
            Kind::Sum(children) => {
                let mut terms: Vec<Term> = Vec::new();
                let mut known = Known::All;
                for ch in children {
                    let e = ch.0.expand(ceiling);
                    known = known.min(e.known);
                    terms = finite::add(&terms, &e.terms);
                }
                Expansion { terms, known }.clip()
            }
            Kind::Neg(x) => {
                let e = x.0.expand(ceiling);
                Expansion {
                    terms: finite::neg(&e.terms),
                    known: e.known,
                }
            }
            Kind::Scale {
                coeff,
                shift,
                inner,
            } => {
                let e = inner.0.expand(&(ceiling - shift));
                Expansion {
                    terms: finite::scale(&e.terms, coeff, shift),
                    known: e.known.shift(shift),
                }
            }
            Kind::Mul(x, y) => expand_product(x, y, ceiling),
            Kind::Inv { lead, u } => expand_inverse(&self.ambient, lead, u, ceiling),
        }
    }
}

fn expand_generator(label: &str, next: &TermFn, ceiling: &GroupElement) -> Expansion {
    let mut terms: Vec<Term> = Vec::new();
    let mut i = 0usize;
    loop {
        let Some(t) = next(i) else {
            return Expansion {
                terms,
                known: Known::All,
            };
        };
        if let Some(prev) = terms.last() {
            assert!(
                t.exponent > prev.exponent,
                "series generator {label:?} is not strictly increasing at index {i}"
            );
        }
        if t.exponent >= *ceiling {
            return Expansion {
                terms,
                known: Known::Below(ceiling.clone()),
            };
        }
        if i >= EXPANSION_BUDGET {
            return Expansion {
                terms,
                known: Known::Below(t.exponent),
            };
        }
        if !t.coefficient.is_zero() {
            terms.push(t);
        }
        i += 1;
    }
}

/// First exponent of the expansion, or the bound below which it vanishes.
fn lower(e: &Expansion) -> Option<GroupElement> {
    match (e.terms.first(), &e.known) {
        (Some(t), _) => Some(t.exponent.clone()),
        (None, Known::Below(k)) => Some(k.clone()),
        (None, Known::All) => None,
    }
}

fn expand_product(x: &Series, y: &Series, ceiling: &GroupElement) -> Expansion {
    let (Some(fx), Some(fy)) = (x.0.floor.clone(), y.0.floor.clone()) else {
        return Expansion {
            terms: Vec::new(),
            known: Known::All,
        };
    };
    let ex = x.0.expand(&(ceiling - &fy));
    let ey = y.0.expand(&(ceiling - &fx));
    let (Some(lx), Some(ly)) = (lower(&ex), lower(&ey)) else {
        return Expansion {
            terms: Vec::new(),
            known: Known::All,
        };
    };
    if ex.known == Known::All && ey.known == Known::All {
        let full = finite::mul(&ex.terms, &ey.terms, None);
        return Expansion {
            terms: full,
            known: Known::All,
        }
        .restrict(ceiling);
    }
    let mut known = Known::Below(ceiling.clone());
    if let Known::Below(kx) = &ex.known {
        known = known.min(Known::Below(kx + &ly));
    }
    if let Known::Below(ky) = &ey.known {
        known = known.min(Known::Below(ky + &lx));
    }
    let Known::Below(bound) = &known else {
        unreachable!("bounded above by the ceiling")
    };
    let terms = finite::mul(&ex.terms, &ey.terms, Some(bound));
    Expansion { terms, known }
}

fn expand_inverse(ambient: &Ambient, lead: &Term, u: &Series, ceiling: &GroupElement) -> Expansion {
    let field = ambient.field;
    let c_inv = lead
        .coefficient
        .inv()
        .expect("leading coefficient is nonzero");
    let shift = lead.exponent.negate();
    let depth = ceiling + &lead.exponent;
    let eu = u.0.expand(&depth);
    let one = vec![Term {
        exponent: ambient.group.zero(),
        coefficient: field.one(),
    }];
    let Some(mu) = eu.terms.first().map(|t| t.exponent.clone()) else {
        let known = match eu.known {
            Known::All => Known::All,
            k => k.min(Known::Below(depth)),
        };
        return Expansion {
            terms: finite::scale(&one, &c_inv, &shift),
            known: known.shift(&shift),
        }
        .restrict(ceiling);
    };
    assert!(
        mu.is_positive(),
        "inverse correction must have positive valuation"
    );
    let mut bound = match eu.known.min(Known::Below(depth)) {
        Known::Below(b) => b,
        Known::All => unreachable!("bounded above by the depth"),
    };
    let minus_u = finite::neg(&eu.terms);
    let mut acc = one.clone();
    let mut power = one;
    let mut k = 0usize;
    loop {
        power = finite::mul(&power, &minus_u, Some(&bound));
        k += 1;
        if power.is_empty() {
            break;
        }
        acc = finite::add(&acc, &power);
        if k >= MAX_INVERSE_POWERS || acc.len() > EXPANSION_BUDGET {
            let next = mu.times(&((k + 1) as u64).into());
            if next < bound {
                bound = next;
            }
            break;
        }
    }
    let acc = finite::below(&acc, &bound).to_vec();
    Expansion {
        terms: finite::scale(&acc, &c_inv, &shift),
        known: Known::Below(&bound + &shift),
    }
    .restrict(ceiling)
}
