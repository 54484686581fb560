//! Computable presentations of a base field `K` inside `L = k((t^Γ))`.

use std::fmt;

use num_bigint::BigInt;
use rand::Rng;

use crate::field::{sample_alphabet, FieldElement, ResidueField};
use crate::group::{GroupElement, Subgroup};
use crate::series::{Ambient, Scalar, Series, Term};

use super::SpaceError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresentationKind {
    /// `K = Kv` with the trivial valuation: constants only.
    Trivial,
    /// `K = Kv(t^g)` with the `t`-adic valuation.
    RationalFunctions,
    /// The completion `Kv((t^g))` of the former.
    Completion,
}

/// `K ⊆ L` described by its value group, residue field and sections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubfieldPresentation {
    ambient: Ambient,
    kind: PresentationKind,
    residue_subfield: ResidueField,
    value_subgroup: Subgroup,
    generator: Option<GroupElement>,
}

impl SubfieldPresentation {
    fn check_residue(ambient: &Ambient, residue: ResidueField) -> Result<(), SpaceError> {
        if residue.is_subfield_of(&ambient.field) {
            Ok(())
        } else {
            Err(crate::field::FieldError::NotASubfield(residue, ambient.field).into())
        }
    }

    pub fn trivial(ambient: Ambient, residue: ResidueField) -> Result<Self, SpaceError> {
        Self::check_residue(&ambient, residue)?;
        Ok(SubfieldPresentation {
            ambient,
            kind: PresentationKind::Trivial,
            residue_subfield: residue,
            value_subgroup: Subgroup::trivial(ambient.group),
            generator: None,
        })
    }

    fn valued(
        ambient: Ambient,
        kind: PresentationKind,
        residue: ResidueField,
        generator: GroupElement,
    ) -> Result<Self, SpaceError> {
        Self::check_residue(&ambient, residue)?;
        if generator.group() != ambient.group || !generator.is_positive() {
            return Err(SpaceError::InvalidPresentation(format!(
                "value group generator {generator} must be a positive element of {}",
                ambient.group
            )));
        }
        Ok(SubfieldPresentation {
            ambient,
            kind,
            residue_subfield: residue,
            value_subgroup: Subgroup::new(ambient.group, vec![generator.clone()])?,
            generator: Some(generator),
        })
    }

    /// `Kv(t^g)` with `v(t^g) = g`.
    pub fn rational_functions(
        ambient: Ambient,
        residue: ResidueField,
        generator: GroupElement,
    ) -> Result<Self, SpaceError> {
        Self::valued(
            ambient,
            PresentationKind::RationalFunctions,
            residue,
            generator,
        )
    }

    /// The completion `Kv((t^g))`.
    pub fn completion(
        ambient: Ambient,
        residue: ResidueField,
        generator: GroupElement,
    ) -> Result<Self, SpaceError> {
        Self::valued(ambient, PresentationKind::Completion, residue, generator)
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn kind(&self) -> PresentationKind {
        self.kind
    }

    pub fn value_subgroup(&self) -> &Subgroup {
        &self.value_subgroup
    }

    pub fn residue_subfield(&self) -> ResidueField {
        self.residue_subfield
    }

    pub fn generator(&self) -> Option<&GroupElement> {
        self.generator.as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.kind == PresentationKind::Completion
    }

    pub fn in_value_group(&self, g: &GroupElement) -> Result<bool, SpaceError> {
        Ok(self.value_subgroup.contains(g)?)
    }

    /// `t^δ` for `δ ∈ vK`.
    pub fn monomial_section(&self, delta: &GroupElement) -> Result<Scalar, SpaceError> {
        if !self.in_value_group(delta)? {
            return Err(SpaceError::NotInValueGroup(delta.clone()));
        }
        Ok(Scalar::monomial(
            self.ambient,
            self.ambient.field.one(),
            delta.clone(),
        ))
    }

    /// The constant `r` for `r ∈ Kv`; accepts elements of either `Kv` or `Lv`.
    pub fn residue_section(&self, r: &FieldElement) -> Result<Scalar, SpaceError> {
        if !self.residue_subfield.contains(r) {
            return Err(SpaceError::NotInResidueSubfield(r.to_string()));
        }
        Ok(Scalar::constant(
            self.ambient,
            r.embed(&self.ambient.field)?,
        ))
    }

    /// Whether a scalar is an element of `K`.
    pub fn contains_scalar(&self, s: &Scalar) -> Result<bool, SpaceError> {
        for t in s.numerator().iter().chain(s.denominator()) {
            if !self.residue_subfield.contains(&t.coefficient)
                || !self.in_value_group(&t.exponent)?
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Index `k` with `δ = k·g`.
    pub(crate) fn generator_index(&self, delta: &GroupElement) -> Option<BigInt> {
        self.value_subgroup
            .coordinates(delta)
            .ok()
            .flatten()
            .and_then(|c| c.into_iter().next())
    }

    fn kv_alphabet(&self) -> Vec<FieldElement> {
        sample_alphabet(&self.residue_subfield)
            .into_iter()
            .map(|x| x.embed(&self.ambient.field).expect("subfield embeds"))
            .collect()
    }

    /// Elements of `K` of the form `Σ_{k<degree} c_k t^{k g}` (constants for a
    /// trivial presentation), ordered by support bound and then
    /// lexicographically, at most `limit` of them, zero excluded.
    pub fn enumerate_closure(&self, degree: usize, limit: usize) -> Vec<Scalar> {
        let alphabet = self.kv_alphabet();
        let degree = if self.generator.is_none() {
            degree.min(1)
        } else {
            degree
        };
        let mut out = Vec::new();
        for d in 1..=degree {
            // Polynomials of exact support bound d: top coefficient nonzero.
            let base = alphabet.len();
            let total = base.checked_pow(d as u32 - 1).unwrap_or(usize::MAX);
            for top in alphabet.iter().filter(|c| !c.is_zero()) {
                for idx in 0..total {
                    if out.len() >= limit {
                        return out;
                    }
                    let mut terms = vec![Term::new(self.power(d - 1), top.clone())];
                    let mut rest = idx;
                    for k in 0..d - 1 {
                        terms.push(Term::new(self.power(k), alphabet[rest % base].clone()));
                        rest /= base;
                    }
                    out.push(Scalar::polynomial(self.ambient, terms).expect("terms in ambient"));
                }
            }
        }
        out
    }

    fn power(&self, k: usize) -> GroupElement {
        match &self.generator {
            Some(g) => g.times(&BigInt::from(k)),
            None => self.ambient.group.zero(),
        }
    }

    /// A random nonzero element of `K` with support in `[low, low+width)·g`;
    /// occasionally a quotient by `1 - c·t^g`.
    pub fn sample_scalar<R: Rng + ?Sized>(&self, rng: &mut R, low: i64, width: usize) -> Scalar {
        let alphabet = self.kv_alphabet();
        let nonzero: Vec<&FieldElement> = alphabet.iter().filter(|c| !c.is_zero()).collect();
        let Some(g) = &self.generator else {
            let c = nonzero[rng.random_range(0..nonzero.len())].clone();
            return Scalar::constant(self.ambient, c);
        };
        let width = width.max(1);
        let mut terms = Vec::new();
        for k in 0..width {
            let c = &alphabet[rng.random_range(0..alphabet.len())];
            terms.push(Term::new(g.times(&BigInt::from(low + k as i64)), c.clone()));
        }
        let lead = nonzero[rng.random_range(0..nonzero.len())].clone();
        terms[0] = Term::new(g.times(&BigInt::from(low)), lead);
        let num = Scalar::polynomial(self.ambient, terms).expect("terms in ambient");
        if rng.random_range(0..4) == 0 {
            let c = nonzero[rng.random_range(0..nonzero.len())].clone();
            let den = Scalar::polynomial(
                self.ambient,
                vec![
                    Term::new(self.ambient.group.zero(), self.ambient.field.one()),
                    Term::new(g.clone(), c.neg()),
                ],
            )
            .expect("terms in ambient");
            num.mul(&den.inv().expect("nonzero denominator"))
        } else {
            num
        }
    }

    /// The series `1`.
    pub fn one(&self) -> Series {
        Series::one(self.ambient)
    }
}

impl fmt::Display for SubfieldPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = match &self.generator {
            Some(g) if g.to_string() == "1" => "t".to_string(),
            Some(g) => format!("t^{g}"),
            None => String::new(),
        };
        match self.kind {
            PresentationKind::Trivial => write!(f, "{} (trivially valued)", self.residue_subfield),
            PresentationKind::RationalFunctions => write!(f, "{}({var})", self.residue_subfield),
            PresentationKind::Completion => write!(f, "{}(({var}))", self.residue_subfield),
        }
    }
}
