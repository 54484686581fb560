//! Exact residue fields: prime fields `F_p`, the rationals, and rational
//! function fields `F_p(s)`, together with the small-scale linear algebra the
//! independence tests need.

mod linalg;
mod poly;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use linalg::{coordinates_over, linear_rank, solve_in_span, RankResult};
pub use poly::FpPoly;

use poly::{inv_mod, mul_mod};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("elements from different fields ({0} vs {1})")]
    MismatchedFields(ResidueField, ResidueField),
    #[error("{0} is not a subfield of {1}")]
    NotASubfield(ResidueField, ResidueField),
    #[error("cannot parse {text:?} as an element of {field}: {reason}")]
    Parse {
        field: ResidueField,
        text: String,
        reason: String,
    },
}

/// A residue field descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResidueField {
    PrimeField(u64),
    Rationals,
    /// `F_p(s)` in one transcendental variable `s`.
    RationalFunctions(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Moduli stay below 2^31 so that sums of two products never overflow.
const MAX_MODULUS: u64 = 1 << 31;

impl ResidueField {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) && p < MAX_MODULUS {
            Ok(ResidueField::PrimeField(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn rational_functions(p: u64) -> Result<Self, FieldError> {
        Self::prime(p).map(|_| ResidueField::RationalFunctions(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            ResidueField::PrimeField(p) | ResidueField::RationalFunctions(p) => *p,
            ResidueField::Rationals => 0,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        match *self {
            ResidueField::PrimeField(p) => FieldElement::Fp {
                p,
                value: reduce_i64(n, p),
            },
            ResidueField::Rationals => FieldElement::Rational(BigRational::from_integer(n.into())),
            ResidueField::RationalFunctions(p) => FieldElement::Fraction {
                num: FpPoly::constant(p, reduce_i64(n, p)),
                den: FpPoly::constant(p, 1),
            },
        }
    }

    /// The transcendental generator `s` of `F_p(s)`.
    pub fn variable(&self) -> Option<FieldElement> {
        match *self {
            ResidueField::RationalFunctions(p) => Some(FieldElement::Fraction {
                num: FpPoly::var(p),
                den: FpPoly::constant(p, 1),
            }),
            _ => None,
        }
    }

    /// Whether `self` embeds canonically into `larger`.
    pub fn is_subfield_of(&self, larger: &ResidueField) -> bool {
        match (self, larger) {
            (a, b) if a == b => true,
            (ResidueField::PrimeField(p), ResidueField::RationalFunctions(q)) => p == q,
            _ => false,
        }
    }

    /// Whether an element of a larger field lies in this one.
    pub fn contains(&self, x: &FieldElement) -> bool {
        match (self, x) {
            (a, x) if *a == x.field() => true,
            (ResidueField::PrimeField(p), FieldElement::Fraction { num, den }) => {
                num.modulus() == *p && num.degree().unwrap_or(0) == 0 && den.degree() == Some(0)
            }
            _ => false,
        }
    }

    /// Reads an element: `"2"` in `F_p`, `"-3/4"` in `Q`, `"(s+1)/(s^2+2)"`
    /// in `F_p(s)`.
    pub fn parse(&self, text: &str) -> Result<FieldElement, FieldError> {
        let err = |reason: &str| FieldError::Parse {
            field: *self,
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let t = text.trim();
        match *self {
            ResidueField::PrimeField(p) => {
                if let Some((a, b)) = t.split_once('/') {
                    let a = parse_int_mod(a, p).ok_or_else(|| err("bad integer"))?;
                    let b = parse_int_mod(b, p).ok_or_else(|| err("bad integer"))?;
                    if b == 0 {
                        return Err(err("zero denominator"));
                    }
                    Ok(FieldElement::Fp {
                        p,
                        value: mul_mod(a, inv_mod(b, p), p),
                    })
                } else {
                    let v = parse_int_mod(t, p).ok_or_else(|| err("bad integer"))?;
                    Ok(FieldElement::Fp { p, value: v })
                }
            }
            ResidueField::Rationals => t
                .parse::<BigRational>()
                .map(FieldElement::Rational)
                .map_err(|_| err("bad rational")),
            ResidueField::RationalFunctions(p) => {
                let (num, den) = split_fraction(t).ok_or_else(|| err("unbalanced parentheses"))?;
                let num = parse_poly(num, p).map_err(|r| err(&r))?;
                let den = match den {
                    Some(d) => parse_poly(d, p).map_err(|r| err(&r))?,
                    None => FpPoly::constant(p, 1),
                };
                if den.is_zero() {
                    return Err(err("zero denominator"));
                }
                Ok(FieldElement::fraction(num, den))
            }
        }
    }
}

impl fmt::Display for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueField::PrimeField(p) => write!(f, "F_{p}"),
            ResidueField::Rationals => write!(f, "Q"),
            ResidueField::RationalFunctions(p) => write!(f, "F_{p}(s)"),
        }
    }
}

fn reduce_i64(n: i64, p: u64) -> u64 {
    n.rem_euclid(p as i64) as u64
}

fn parse_int_mod(s: &str, p: u64) -> Option<u64> {
    let n: BigInt = s.trim().parse().ok()?;
    let r = ((n % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
    r.to_u64()
}

fn split_fraction(t: &str) -> Option<(&str, Option<&str>)> {
    let mut depth = 0i32;
    for (i, ch) in t.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => {
                return Some((strip_parens(&t[..i])?, Some(strip_parens(&t[i + 1..])?)))
            }
            _ => {}
        }
        if depth < 0 {
            return None;
        }
    }
    (depth == 0).then_some((strip_parens(t)?, None))
}

fn strip_parens(s: &str) -> Option<&str> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('(') {
        inner.strip_suffix(')').map(str::trim)
    } else if s.contains('(') || s.contains(')') {
        None
    } else {
        Some(s)
    }
}

/// Parses sums of terms `c`, `c*s`, `cs^k`, `s^k` with optional signs.
fn parse_poly(s: &str, p: u64) -> Result<FpPoly, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut acc = FpPoly::zero(p);
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        if term.is_empty() {
            return Err("dangling sign".into());
        }
        let (coeff, power) = match term.find('s') {
            None => (term, 0usize),
            Some(i) => {
                let c = term[..i].trim_end_matches('*');
                let tail = &term[i + 1..];
                let k = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^')
                        .and_then(|k| k.parse().ok())
                        .ok_or_else(|| format!("bad exponent in {term:?}"))?
                };
                (if c.is_empty() { "1" } else { c }, k)
            }
        };
        let c = parse_int_mod(coeff, p).ok_or_else(|| format!("bad coefficient {coeff:?}"))?;
        let c = if sign < 0 { (p - c) % p } else { c };
        let mut v = vec![0u64; power + 1];
        v[power] = c;
        acc = acc.add(&FpPoly::new(p, v));
    }
    Ok(acc)
}

/// An element of a [`ResidueField`] in canonical form, so that equality is
/// syntactic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Fp {
        p: u64,
        value: u64,
    },
    Rational(BigRational),
    /// Reduced fraction with monic denominator.
    Fraction {
        num: FpPoly,
        den: FpPoly,
    },
}

impl FieldElement {
    fn fraction(num: FpPoly, den: FpPoly) -> FieldElement {
        let p = num.modulus();
        if num.is_zero() {
            return FieldElement::Fraction {
                num,
                den: FpPoly::constant(p, 1),
            };
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.div_rem(&g);
        let (mut d, _) = den.div_rem(&g);
        let lead = d.leading();
        if lead != 1 {
            let il = inv_mod(lead, p);
            n = n.scale(il);
            d = d.scale(il);
        }
        FieldElement::Fraction { num: n, den: d }
    }

    pub fn field(&self) -> ResidueField {
        match self {
            FieldElement::Fp { p, .. } => ResidueField::PrimeField(*p),
            FieldElement::Rational(_) => ResidueField::Rationals,
            FieldElement::Fraction { num, .. } => ResidueField::RationalFunctions(num.modulus()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Fp { value, .. } => *value == 0,
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Fraction { num, .. } => num.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field().one()
    }

    fn mismatch(&self, other: &FieldElement) -> FieldError {
        FieldError::MismatchedFields(self.field(), other.field())
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        use FieldElement::*;
        match (self, other) {
            (Fp { p, value: a }, Fp { p: q, value: b }) if p == q => Ok(Fp {
                p: *p,
                value: (a + b) % p,
            }),
            (Rational(a), Rational(b)) => Ok(Rational(a + b)),
            (Fraction { num: a, den: b }, Fraction { num: c, den: d })
                if a.modulus() == c.modulus() =>
            {
                Ok(FieldElement::fraction(a.mul(d).add(&c.mul(b)), b.mul(d)))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        use FieldElement::*;
        match (self, other) {
            (Fp { p, value: a }, Fp { p: q, value: b }) if p == q => Ok(Fp {
                p: *p,
                value: mul_mod(*a, *b, *p),
            }),
            (Rational(a), Rational(b)) => Ok(Rational(a * b)),
            (Fraction { num: a, den: b }, Fraction { num: c, den: d })
                if a.modulus() == c.modulus() =>
            {
                Ok(FieldElement::fraction(a.mul(c), b.mul(d)))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn neg(&self) -> FieldElement {
        match self {
            FieldElement::Fp { p, value } => FieldElement::Fp {
                p: *p,
                value: (p - value) % p,
            },
            FieldElement::Rational(q) => FieldElement::Rational(-q),
            FieldElement::Fraction { num, den } => FieldElement::Fraction {
                num: num.neg(),
                den: den.clone(),
            },
        }
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Fp { p, value } => FieldElement::Fp {
                p: *p,
                value: inv_mod(*value, *p),
            },
            FieldElement::Rational(q) => FieldElement::Rational(q.recip()),
            FieldElement::Fraction { num, den } => FieldElement::fraction(den.clone(), num.clone()),
        })
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.try_add(&other.neg())
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.try_mul(&other.inv()?)
    }

    /// Image under the canonical embedding into `larger`.
    pub fn embed(&self, larger: &ResidueField) -> Result<FieldElement, FieldError> {
        match (self, larger) {
            (x, f) if x.field() == *f => Ok(x.clone()),
            (FieldElement::Fp { p, value }, ResidueField::RationalFunctions(q)) if p == q => {
                Ok(FieldElement::Fraction {
                    num: FpPoly::constant(*p, *value),
                    den: FpPoly::constant(*p, 1),
                })
            }
            _ => Err(FieldError::NotASubfield(self.field(), *larger)),
        }
    }

    /// Inverse of [`FieldElement::embed`]: the preimage in `smaller`.
    pub fn restrict(&self, smaller: &ResidueField) -> Result<FieldElement, FieldError> {
        if !smaller.contains(self) {
            return Err(FieldError::NotASubfield(self.field(), *smaller));
        }
        match (self, smaller) {
            (x, f) if x.field() == *f => Ok(x.clone()),
            (FieldElement::Fraction { num, .. }, ResidueField::PrimeField(p)) => {
                Ok(FieldElement::Fp {
                    p: *p,
                    value: num.coeffs().first().copied().unwrap_or(0),
                })
            }
            _ => Err(FieldError::NotASubfield(self.field(), *smaller)),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Fp { value, .. } => write!(f, "{value}"),
            FieldElement::Rational(q) => write!(f, "{q}"),
            FieldElement::Fraction { num, den } => {
                if den.degree() == Some(0) {
                    write!(f, "{num}")
                } else {
                    write!(f, "({num})/({den})")
                }
            }
        }
    }
}

/// Integers in `[-bound, bound]` as rationals.
pub(crate) fn small_rationals(bound: i64) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::Rational(BigRational::zero())];
    for k in 1..=bound {
        out.push(FieldElement::Rational(BigRational::from_integer(k.into())));
        out.push(FieldElement::Rational(-BigRational::from_integer(k.into())));
    }
    out.retain(|x| !matches!(x, FieldElement::Rational(q) if q.abs() > BigRational::from_integer(bound.into())));
    out
}

/// All elements of `F_p`, or a small symmetric range of integers in `Q`, or
/// the constants and `s` in `F_p(s)`: the coefficient alphabet used by
/// enumerations and random sampling.
pub fn sample_alphabet(field: &ResidueField) -> Vec<FieldElement> {
    match *field {
        ResidueField::PrimeField(p) => (0..p.min(64))
            .map(|v| FieldElement::Fp { p, value: v })
            .collect(),
        ResidueField::Rationals => small_rationals(2),
        ResidueField::RationalFunctions(p) => {
            let mut v: Vec<FieldElement> =
                (0..p.min(16)).map(|c| field.from_int(c as i64)).collect();
            v.push(field.variable().expect("F_p(s) has a variable"));
            v
        }
    }
}

/// Multiset of residues `res(a'/a)`; order follows the generating family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueProfile {
    pub entries: Vec<FieldElement>,
}

impl ResidueProfile {
    /// The underlying set, in first-occurrence order.
    pub fn distinct(&self) -> Vec<FieldElement> {
        let mut out: Vec<FieldElement> = Vec::new();
        for e in &self.entries {
            if !out.contains(e) {
                out.push(e.clone());
            }
        }
        out
    }
}
