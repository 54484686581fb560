//! Quotients of finitely supported series, used for coefficients drawn from
//! the base field `K`. Unlike a general [`Series`], a scalar has an exact
//! valuation and can be compared exactly.

use std::fmt;

use crate::field::FieldElement;
use crate::group::GroupElement;

use super::finite;
use super::{Ambient, Series, SeriesError, Term};

#[derive(Debug, Clone)]
pub struct Scalar {
    ambient: Ambient,
    num: Vec<Term>,
    /// Nonempty; monic (leading coefficient 1) and not a single monomial
    /// unless it is exactly `1`.
    den: Vec<Term>,
}

impl Scalar {
    fn one_terms(ambient: &Ambient) -> Vec<Term> {
        vec![Term::new(ambient.group.zero(), ambient.field.one())]
    }

    fn normalized(ambient: Ambient, num: Vec<Term>, den: Vec<Term>) -> Scalar {
        assert!(!den.is_empty(), "scalar with zero denominator");
        if num.is_empty() {
            return Scalar {
                num,
                den: Scalar::one_terms(&ambient),
                ambient,
            };
        }
        let lead = &den[0];
        let c = lead.coefficient.inv().expect("nonzero leading coefficient");
        if den.len() == 1 {
            let shift = lead.exponent.negate();
            return Scalar {
                num: finite::scale(&num, &c, &shift),
                den: Scalar::one_terms(&ambient),
                ambient,
            };
        }
        let zero = ambient.group.zero();
        Scalar {
            num: finite::scale(&num, &c, &zero),
            den: finite::scale(&den, &c, &zero),
            ambient,
        }
    }

    pub fn zero(ambient: Ambient) -> Scalar {
        Scalar {
            num: Vec::new(),
            den: Scalar::one_terms(&ambient),
            ambient,
        }
    }

    pub fn one(ambient: Ambient) -> Scalar {
        Scalar::constant(ambient, ambient.field.one())
    }

    pub fn constant(ambient: Ambient, c: FieldElement) -> Scalar {
        Scalar::monomial(ambient, c, ambient.group.zero())
    }

    pub fn monomial(ambient: Ambient, c: FieldElement, e: GroupElement) -> Scalar {
        let num = finite::canonical(vec![Term::new(e, c)]);
        Scalar {
            num,
            den: Scalar::one_terms(&ambient),
            ambient,
        }
    }

    /// `num/den` from finite term lists.
    pub fn ratio(ambient: Ambient, num: Vec<Term>, den: Vec<Term>) -> Result<Scalar, SeriesError> {
        let num = finite::canonical(num);
        let den = finite::canonical(den);
        for t in num.iter().chain(&den) {
            super::check_term(&ambient, t)?;
        }
        if den.is_empty() {
            return Err(crate::field::FieldError::DivisionByZero.into());
        }
        Ok(Scalar::normalized(ambient, num, den))
    }

    pub fn polynomial(ambient: Ambient, terms: Vec<Term>) -> Result<Scalar, SeriesError> {
        Scalar::ratio(ambient, terms, Scalar::one_terms(&ambient))
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn numerator(&self) -> &[Term] {
        &self.num
    }

    pub fn denominator(&self) -> &[Term] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.len() == 1
    }

    pub fn as_monomial(&self) -> Option<&Term> {
        (self.den.len() == 1 && self.num.len() == 1).then(|| &self.num[0])
    }

    /// Exact valuation; `None` for zero.
    pub fn valuation(&self) -> Option<GroupElement> {
        self.num
            .first()
            .map(|n| &n.exponent - &self.den[0].exponent)
    }

    /// Leading coefficient of the quotient; `None` for zero.
    pub fn leading_coefficient(&self) -> Option<FieldElement> {
        self.num.first().map(|n| n.coefficient.clone())
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        assert_eq!(
            self.ambient, other.ambient,
            "scalars from different ambients"
        );
        if self.den == other.den {
            return Scalar::normalized(
                self.ambient,
                finite::add(&self.num, &other.num),
                self.den.clone(),
            );
        }
        let num = finite::add(
            &finite::mul(&self.num, &other.den, None),
            &finite::mul(&other.num, &self.den, None),
        );
        Scalar::normalized(self.ambient, num, finite::mul(&self.den, &other.den, None))
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            ambient: self.ambient,
            num: finite::neg(&self.num),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        assert_eq!(
            self.ambient, other.ambient,
            "scalars from different ambients"
        );
        Scalar::normalized(
            self.ambient,
            finite::mul(&self.num, &other.num, None),
            finite::mul(&self.den, &other.den, None),
        )
    }

    pub fn inv(&self) -> Result<Scalar, SeriesError> {
        if self.is_zero() {
            return Err(crate::field::FieldError::DivisionByZero.into());
        }
        Ok(Scalar::normalized(
            self.ambient,
            self.den.clone(),
            self.num.clone(),
        ))
    }

    /// Exact equality of the represented quotients.
    pub fn same_value(&self, other: &Scalar) -> bool {
        self.ambient == other.ambient
            && finite::mul(&self.num, &other.den, None) == finite::mul(&other.num, &self.den, None)
    }

    pub fn to_series(&self) -> Series {
        let num = Series::node(self.ambient, super::Kind::Finite(self.num.clone()));
        if self.den.len() == 1 && self.den[0].exponent.is_zero() && self.den[0].coefficient.is_one()
        {
            return num;
        }
        let den = Series::node(self.ambient, super::Kind::Finite(self.den.clone()));
        let inv = den.invert_with_lead(self.den[0].clone());
        &num * &inv
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.same_value(other)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[Term]) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, t) in terms.iter().enumerate() {
        let s = t.to_string();
        if i == 0 {
            write!(f, "{s}")?;
        } else if let Some(rest) = s.strip_prefix('-') {
            write!(f, " - {rest}")?;
        } else {
            write!(f, " + {s}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write_terms(f, &self.num)
        } else {
            write!(f, "(")?;
            write_terms(f, &self.num)?;
            write!(f, ")/(")?;
            write_terms(f, &self.den)?;
            write!(f, ")")
        }
    }
}
