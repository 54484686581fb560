//! Generalized power series `k((t^Γ))` with exact coefficients.
//!
//! A [`Series`] is an immutable expression graph. Values are observed through
//! truncated expansions: [`Series::expand`] lists every term below a ceiling
//! together with the bound up to which the listing is known to be complete.
//! Expansions are memoized per node, so a series behaves as a value and can
//! be shared between threads.

mod finite;
mod node;
mod scalar;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{FieldElement, FieldError, ResidueField};
use crate::group::{GroupElement, GroupError, OrderedGroup};

pub use node::EXPANSION_BUDGET;
pub use scalar::Scalar;

use node::{Kind, Node};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series live in different fields ({0} vs {1})")]
    MismatchedAmbient(Ambient, Ambient),
    #[error("leading term not witnessed below {0}")]
    LeadingTermUnknown(GroupElement),
    #[error("valuations differ: {0} vs {1}")]
    ValuationMismatch(String, String),
    #[error("residue undefined for negative valuation {0}")]
    NegativeValuation(GroupElement),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The field `k((t^Γ))`: an exponent group and a coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ambient {
    pub group: OrderedGroup,
    pub field: ResidueField,
}

impl Ambient {
    pub fn new(group: OrderedGroup, field: ResidueField) -> Self {
        Ambient { group, field }
    }

    /// Smallest positive step used by the named builders: `1` on a line,
    /// the last unit vector on a lexicographic product.
    pub fn unit(&self) -> GroupElement {
        let mut coords = vec![BigRational::zero(); self.group.rank()];
        *coords.last_mut().expect("rank is positive") = BigRational::one();
        GroupElement::new(self.group, coords).expect("unit has integer coordinates")
    }

    pub fn exponent(&self, k: i64) -> GroupElement {
        self.unit().times(&BigInt::from(k))
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}((t^{}))", self.field, self.group)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: GroupElement,
    pub coefficient: FieldElement,
}

impl Term {
    pub fn new(exponent: GroupElement, coefficient: FieldElement) -> Self {
        Term {
            exponent,
            coefficient,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coefficient.to_string();
        let c = if c.contains(['+', '/']) || c[1..].contains('-') {
            format!("({c})")
        } else {
            c
        };
        if self.exponent.is_zero() {
            return write!(f, "{c}");
        }
        let e = self.exponent.to_string();
        let t = if e == "1" {
            "t".to_string()
        } else if e.contains(['/', '-', '(']) {
            if e.starts_with('(') {
                format!("t^{e}")
            } else {
                format!("t^({e})")
            }
        } else {
            format!("t^{e}")
        };
        if self.coefficient.is_one() {
            write!(f, "{t}")
        } else if c == "-1" {
            write!(f, "-{t}")
        } else {
            write!(f, "{c}*{t}")
        }
    }
}

/// Completeness bound of an expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Known {
    /// Every term with exponent below the bound is listed.
    Below(GroupElement),
    /// The listing is the whole series.
    All,
}

impl Known {
    fn min(self, other: Known) -> Known {
        match (self, other) {
            (Known::Below(a), Known::Below(b)) => Known::Below(a.min(b)),
            (Known::All, k) | (k, Known::All) => k,
        }
    }

    fn shift(self, by: &GroupElement) -> Known {
        match self {
            Known::Below(b) => Known::Below(&b + by),
            Known::All => Known::All,
        }
    }

    pub fn bound(&self) -> Option<&GroupElement> {
        match self {
            Known::Below(b) => Some(b),
            Known::All => None,
        }
    }
}

/// A truncated view of a series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub terms: Vec<Term>,
    pub known: Known,
}

impl Expansion {
    fn restrict(&self, ceiling: &GroupElement) -> Expansion {
        let terms = finite::below(&self.terms, ceiling).to_vec();
        let known = match &self.known {
            Known::All if terms.len() == self.terms.len() => Known::All,
            Known::All => Known::Below(ceiling.clone()),
            Known::Below(k) => Known::Below(k.clone().min(ceiling.clone())),
        };
        Expansion { terms, known }
    }

    fn clip(mut self) -> Expansion {
        if let Known::Below(k) = &self.known {
            let n = finite::below(&self.terms, k).len();
            self.terms.truncate(n);
        }
        self
    }

    /// Exactly zero: nothing listed and nothing omitted.
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.known == Known::All
    }
}

/// Evidence budget for comparisons of infinite objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precision {
    /// Exponents at or above the ceiling are never inspected.
    pub ceiling: GroupElement,
    /// Length of evidence chains and iteration caps.
    pub max_terms: usize,
}

impl Precision {
    pub fn new(ceiling: GroupElement, max_terms: usize) -> Self {
        assert!(max_terms >= 1, "max_terms must be positive");
        Precision { ceiling, max_terms }
    }
}

/// Outcome of reading off a valuation below a ceiling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    Value(GroupElement),
    /// No term below the bound; `∞` as far as witnessed.
    ZeroUpTo(GroupElement),
}

impl Valuation {
    pub fn value(&self) -> Option<&GroupElement> {
        match self {
            Valuation::Value(g) => Some(g),
            Valuation::ZeroUpTo(_) => None,
        }
    }

    /// Whether the valuation is certainly greater than `g`.
    pub fn exceeds(&self, g: &GroupElement) -> bool {
        match self {
            Valuation::Value(v) => v > g,
            Valuation::ZeroUpTo(b) => b > g,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Value(g) => write!(f, "{g}"),
            Valuation::ZeroUpTo(g) => write!(f, "zero below {g}"),
        }
    }
}

/// An element of `k((t^Γ))`.
#[derive(Clone)]
pub struct Series(Arc<Node>);

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series({:?} in {})", self.0.kind, self.0.ambient)
    }
}

fn check_term(ambient: &Ambient, t: &Term) -> Result<(), SeriesError> {
    if t.exponent.group() != ambient.group {
        return Err(GroupError::MismatchedGroups(t.exponent.group(), ambient.group).into());
    }
    if t.coefficient.field() != ambient.field {
        return Err(FieldError::MismatchedFields(t.coefficient.field(), ambient.field).into());
    }
    Ok(())
}

impl Series {
    fn node(ambient: Ambient, kind: Kind) -> Series {
        Series(Arc::new(Node::new(ambient, kind)))
    }

    pub fn ambient(&self) -> &Ambient {
        &self.0.ambient
    }

    pub fn zero(ambient: Ambient) -> Series {
        Series::node(ambient, Kind::Finite(Vec::new()))
    }

    pub fn one(ambient: Ambient) -> Series {
        Series::constant(ambient, ambient.field.one())
    }

    pub fn constant(ambient: Ambient, c: FieldElement) -> Series {
        Series::monomial(ambient, c, ambient.group.zero())
    }

    /// `c·t^e`.
    pub fn monomial(ambient: Ambient, c: FieldElement, e: GroupElement) -> Series {
        Series::from_terms(ambient, vec![Term::new(e, c)]).expect("monomial in its own ambient")
    }

    /// A finitely supported series; terms may be unsorted and repeated.
    pub fn from_terms(ambient: Ambient, terms: Vec<Term>) -> Result<Series, SeriesError> {
        for t in &terms {
            check_term(&ambient, t)?;
        }
        Ok(Series::node(
            ambient,
            Kind::Finite(finite::canonical(terms)),
        ))
    }

    /// A series whose `i`-th term is `next(i)`. Exponents must strictly
    /// increase; `None` terminates the series.
    pub fn from_generator<F>(ambient: Ambient, label: impl Into<String>, next: F) -> Series
    where
        F: Fn(usize) -> Option<Term> + Send + Sync + 'static,
    {
        Series::node(
            ambient,
            Kind::Generator {
                label: label.into(),
                next: Arc::new(next),
            },
        )
    }

    /// `Σ_{i≥0} t^{e(i)}` for a strictly increasing exponent map.
    pub fn from_exponents<F>(ambient: Ambient, label: impl Into<String>, e: F) -> Series
    where
        F: Fn(usize) -> Option<GroupElement> + Send + Sync + 'static,
    {
        let one = ambient.field.one();
        Series::from_generator(ambient, label, move |i| {
            e(i).map(|x| Term::new(x, one.clone()))
        })
    }

    /// `Σ_{i≥0} t^{i·step}`.
    pub fn geometric(ambient: Ambient, step: GroupElement) -> Series {
        Series::from_exponents(ambient, "geometric", move |i| {
            Some(step.times(&BigInt::from(i)))
        })
    }

    /// `Σ_{i≥0} t^{p^i·step}`; over `F_p` it satisfies `x^p − x = −t^step`.
    pub fn artin_schreier(ambient: Ambient, p: u64, step: GroupElement) -> Series {
        Series::from_exponents(ambient, format!("artin_schreier({p})"), move |i| {
            let k = BigInt::from(p).pow(i as u32);
            Some(step.times(&k))
        })
    }

    pub fn from_scalar(s: &Scalar) -> Series {
        s.to_series()
    }

    fn same_ambient(&self, other: &Series) -> Result<(), SeriesError> {
        if self.ambient() == other.ambient() {
            Ok(())
        } else {
            Err(SeriesError::MismatchedAmbient(
                *self.ambient(),
                *other.ambient(),
            ))
        }
    }

    pub fn try_add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.same_ambient(other)?;
        Ok(Series::sum(
            *self.ambient(),
            vec![self.clone(), other.clone()],
        ))
    }

    pub fn try_sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.same_ambient(other)?;
        Ok(Series::sum(
            *self.ambient(),
            vec![self.clone(), other.neg()],
        ))
    }

    pub fn try_mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.same_ambient(other)?;
        Ok(Series::node(
            *self.ambient(),
            Kind::Mul(self.clone(), other.clone()),
        ))
    }

    /// Sum of many series of the given ambient.
    ///
    /// # Panics
    /// If some summand lives in a different ambient.
    pub fn sum(ambient: Ambient, parts: Vec<Series>) -> Series {
        for p in &parts {
            assert_eq!(*p.ambient(), ambient, "summands must share one ambient");
        }
        match parts.len() {
            0 => Series::zero(ambient),
            1 => parts.into_iter().next().expect("one part"),
            _ => Series::node(ambient, Kind::Sum(parts)),
        }
    }

    pub fn neg(&self) -> Series {
        Series::node(*self.ambient(), Kind::Neg(self.clone()))
    }

    /// `c·t^shift·self`.
    pub fn scale(&self, c: &FieldElement, shift: &GroupElement) -> Series {
        assert_eq!(
            c.field(),
            self.ambient().field,
            "coefficient from the wrong field"
        );
        assert_eq!(
            shift.group(),
            self.ambient().group,
            "shift from the wrong group"
        );
        Series::node(
            *self.ambient(),
            Kind::Scale {
                coeff: c.clone(),
                shift: shift.clone(),
                inner: self.clone(),
            },
        )
    }

    pub fn shift(&self, by: &GroupElement) -> Series {
        self.scale(&self.ambient().field.one(), by)
    }

    pub fn mul_scalar(&self, s: &Scalar) -> Series {
        assert_eq!(
            *s.ambient(),
            *self.ambient(),
            "scalar from a different ambient"
        );
        if let Some(t) = s.as_monomial() {
            return self.scale(&t.coefficient, &t.exponent);
        }
        if s.is_zero() {
            return Series::zero(*self.ambient());
        }
        self * &s.to_series()
    }

    pub fn pow(&self, n: u32) -> Series {
        let mut acc = Series::one(*self.ambient());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse; the leading term must be witnessed below the
    /// ceiling.
    pub fn invert(&self, prec: &Precision) -> Result<Series, SeriesError> {
        let lead = self
            .leading_term(prec)
            .ok_or_else(|| SeriesError::LeadingTermUnknown(prec.ceiling.clone()))?;
        Ok(self.invert_with_lead(lead))
    }

    pub(crate) fn invert_with_lead(&self, lead: Term) -> Series {
        let ambient = *self.ambient();
        let c_inv = lead
            .coefficient
            .inv()
            .expect("leading coefficient is nonzero");
        let u = Series::sum(
            ambient,
            vec![
                self.scale(&c_inv, &lead.exponent.negate()),
                Series::one(ambient).neg(),
            ],
        );
        Series::node(ambient, Kind::Inv { lead, u })
    }

    /// All terms below `ceiling`, with the completeness bound.
    pub fn expand(&self, ceiling: &GroupElement) -> Expansion {
        assert_eq!(
            ceiling.group(),
            self.ambient().group,
            "ceiling from the wrong group"
        );
        self.0.expand(ceiling)
    }

    /// Lower bound for the valuation, `None` for a structurally zero series.
    pub fn floor(&self) -> Option<&GroupElement> {
        self.0.floor.as_ref()
    }

    pub fn valuation(&self, prec: &Precision) -> Valuation {
        let e = self.expand(&prec.ceiling);
        match e.terms.first() {
            Some(t) => Valuation::Value(t.exponent.clone()),
            None => Valuation::ZeroUpTo(
                e.known
                    .bound()
                    .cloned()
                    .unwrap_or_else(|| prec.ceiling.clone()),
            ),
        }
    }

    pub fn leading_term(&self, prec: &Precision) -> Option<Term> {
        self.expand(&prec.ceiling).terms.into_iter().next()
    }

    /// Whether the series is provably zero (not merely below the ceiling).
    pub fn is_exact_zero(&self, prec: &Precision) -> bool {
        self.expand(&prec.ceiling).is_exact_zero()
    }

    /// Finite series of the terms with exponent below `gamma`.
    pub fn truncate(&self, gamma: &GroupElement) -> Series {
        Series::node(*self.ambient(), Kind::Finite(self.expand(gamma).terms))
    }

    pub fn terms_below(&self, gamma: &GroupElement) -> Vec<Term> {
        self.expand(gamma).terms
    }

    /// Whether the truncations at `gamma` coincide termwise.
    pub fn equal_up_to(&self, other: &Series, gamma: &GroupElement) -> bool {
        self.ambient() == other.ambient() && self.expand(gamma).terms == other.expand(gamma).terms
    }

    /// `res(a/b)` for `v(a) = v(b)`: the ratio of leading coefficients.
    pub fn residue_ratio(
        a: &Series,
        b: &Series,
        prec: &Precision,
    ) -> Result<FieldElement, SeriesError> {
        a.same_ambient(b)?;
        let la = a
            .leading_term(prec)
            .ok_or_else(|| SeriesError::LeadingTermUnknown(prec.ceiling.clone()))?;
        let lb = b
            .leading_term(prec)
            .ok_or_else(|| SeriesError::LeadingTermUnknown(prec.ceiling.clone()))?;
        if la.exponent != lb.exponent {
            return Err(SeriesError::ValuationMismatch(
                la.exponent.to_string(),
                lb.exponent.to_string(),
            ));
        }
        Ok(la.coefficient.try_div(&lb.coefficient)?)
    }

    /// `res(a)` for `v(a) ≥ 0`.
    pub fn residue(&self, prec: &Precision) -> Result<FieldElement, SeriesError> {
        match self.leading_term(prec) {
            Some(t) if t.exponent.is_zero() => Ok(t.coefficient),
            Some(t) if t.exponent.is_positive() => Ok(self.ambient().field.zero()),
            Some(t) => Err(SeriesError::NegativeValuation(t.exponent)),
            None => Ok(self.ambient().field.zero()),
        }
    }

    /// Human-readable prefix: the terms below `ceiling`, then `+ O(t^γ)`.
    pub fn display_below(&self, ceiling: &GroupElement, max_shown: usize) -> String {
        let e = self.expand(ceiling);
        let mut parts: Vec<String> = e
            .terms
            .iter()
            .take(max_shown)
            .map(Term::to_string)
            .collect();
        let truncated = e.terms.len() > max_shown;
        if parts.is_empty() && e.known == Known::All {
            return "0".to_string();
        }
        if truncated {
            parts.push("...".to_string());
        }
        if let Known::Below(b) = &e.known {
            parts.push(format!("O(t^{b})"));
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                if let Some(rest) = p.strip_prefix('-') {
                    out.push_str(" - ");
                    out.push_str(rest);
                    continue;
                }
                out.push_str(" + ");
            }
            out.push_str(p);
        }
        out
    }
}

impl std::ops::Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.try_add(rhs).expect("series from different ambients")
    }
}

impl std::ops::Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.try_sub(rhs).expect("series from different ambients")
    }
}

impl std::ops::Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.try_mul(rhs).expect("series from different ambients")
    }
}

impl std::ops::Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::neg(self)
    }
}
