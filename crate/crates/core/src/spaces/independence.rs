//! Deciding valuation independence, residue profiles and normalization.

use std::fmt;

use crate::field::{coordinates_over, linear_rank, FieldElement, ResidueProfile};
use crate::group::GroupElement;
use crate::series::{Precision, Scalar, Series, Term, Valuation};

use super::{SpaceError, SubfieldPresentation};

/// Value and leading coefficient of a family member.
#[derive(Debug, Clone)]
pub(crate) struct Leading {
    pub value: GroupElement,
    pub coefficient: FieldElement,
}

/// Reads leading terms; `Err(Some(bound))` reports a member that vanishes
/// below the ceiling without being provably zero.
pub(crate) fn leading_terms(
    family: &[Series],
    prec: &Precision,
) -> Result<Result<Vec<Leading>, GroupElement>, SpaceError> {
    let mut out = Vec::with_capacity(family.len());
    for (i, b) in family.iter().enumerate() {
        let e = b.expand(&prec.ceiling);
        match e.terms.first() {
            Some(Term {
                exponent,
                coefficient,
            }) => out.push(Leading {
                value: exponent.clone(),
                coefficient: coefficient.clone(),
            }),
            None if e.is_exact_zero() => return Err(SpaceError::ZeroElementInFamily(i + 1)),
            None => {
                return Ok(Err(e
                    .known
                    .bound()
                    .cloned()
                    .unwrap_or_else(|| prec.ceiling.clone())))
            }
        }
    }
    Ok(Ok(out))
}

/// Members grouped by the coset of their value modulo `vK`, in order of
/// first occurrence; the first member of each class is its representative.
#[derive(Debug, Clone)]
pub(crate) struct ValueClass {
    pub members: Vec<usize>,
    pub in_value_group: bool,
}

impl ValueClass {
    pub fn rep(&self) -> usize {
        self.members[0]
    }
}

pub(crate) fn classify(
    pres: &SubfieldPresentation,
    leads: &[Leading],
) -> Result<Vec<ValueClass>, SpaceError> {
    let vk = pres.value_subgroup();
    let mut classes: Vec<ValueClass> = Vec::new();
    'outer: for (i, l) in leads.iter().enumerate() {
        for c in classes.iter_mut() {
            if vk.coset_equal(&leads[c.rep()].value, &l.value)? {
                c.members.push(i);
                continue 'outer;
            }
        }
        classes.push(ValueClass {
            members: vec![i],
            in_value_group: vk.contains(&l.value)?,
        });
    }
    Ok(classes)
}

/// Coordinates over `Kv` of the residues `lc(b_i)/lc(rep)` of a class.
fn class_residue_rows(
    pres: &SubfieldPresentation,
    leads: &[Leading],
    class: &ValueClass,
) -> Result<Vec<Vec<FieldElement>>, SpaceError> {
    let rep = &leads[class.rep()].coefficient;
    let residues: Vec<FieldElement> = class
        .members
        .iter()
        .map(|&i| leads[i].coefficient.try_div(rep))
        .collect::<Result<_, _>>()?;
    Ok(coordinates_over(&pres.residue_subfield(), &residues)?)
}

/// A `K`-linear combination whose value exceeds the minimum of its summands.
#[derive(Debug, Clone)]
pub struct DependenceWitness {
    /// One coefficient per family member; zero where unused.
    pub coefficients: Vec<Scalar>,
    /// `min_i v(c_i b_i)` over the nonzero coefficients.
    pub summand_min: GroupElement,
    /// `v(Σ c_i b_i)` as witnessed.
    pub combination: Valuation,
}

impl DependenceWitness {
    /// Re-evaluates the combination and confirms the strict inequality.
    pub fn recheck(&self, family: &[Series], prec: &Precision) -> bool {
        if family.len() != self.coefficients.len() || family.is_empty() {
            return false;
        }
        let ambient = *family[0].ambient();
        let mut min: Option<GroupElement> = None;
        let mut parts = Vec::new();
        for (c, b) in self.coefficients.iter().zip(family) {
            let Some(vc) = c.valuation() else { continue };
            let Valuation::Value(vb) = b.valuation(prec) else {
                return false;
            };
            let v = &vc + &vb;
            min = Some(match min {
                Some(m) => m.min(v),
                None => v,
            });
            parts.push(b.mul_scalar(c));
        }
        let Some(min) = min else { return false };
        min == self.summand_min && Series::sum(ambient, parts).valuation(prec).exceeds(&min)
    }
}

#[derive(Debug, Clone)]
pub enum IndependenceVerdict {
    /// Carries the scalings `c_i ∈ K` that normalize the family.
    Independent {
        scalings: Vec<Scalar>,
    },
    Dependent(DependenceWitness),
    /// Some member vanishes below the given bound.
    Inconclusive {
        bound: GroupElement,
    },
}

impl IndependenceVerdict {
    pub fn is_independent(&self) -> bool {
        matches!(self, IndependenceVerdict::Independent { .. })
    }
}

impl fmt::Display for IndependenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndependenceVerdict::Independent { .. } => write!(f, "independent"),
            IndependenceVerdict::Dependent(w) => write!(
                f,
                "dependent: value {} exceeds summand minimum {}",
                w.combination, w.summand_min
            ),
            IndependenceVerdict::Inconclusive { bound } => {
                write!(f, "inconclusive: a member vanishes below {bound}")
            }
        }
    }
}

/// Decides whether `family` is `K`-valuation independent.
pub fn is_valuation_independent(
    pres: &SubfieldPresentation,
    family: &[Series],
    prec: &Precision,
) -> Result<IndependenceVerdict, SpaceError> {
    check_ambient(pres, family)?;
    let leads = match leading_terms(family, prec)? {
        Ok(l) => l,
        Err(bound) => return Ok(IndependenceVerdict::Inconclusive { bound }),
    };
    let classes = classify(pres, &leads)?;
    let ambient = *pres.ambient();
    for class in &classes {
        let rows = class_residue_rows(pres, &leads, class)?;
        let rank = linear_rank(&pres.residue_subfield(), &rows)?;
        let Some(kernel) = rank.kernel.first() else {
            continue;
        };
        let rep_value = &leads[class.rep()].value;
        let mut coefficients = vec![Scalar::zero(ambient); family.len()];
        for (k, &i) in kernel.iter().zip(&class.members) {
            if k.is_zero() {
                continue;
            }
            let shift = rep_value - &leads[i].value;
            coefficients[i] = Scalar::monomial(ambient, k.embed(&ambient.field)?, shift);
        }
        let parts = family
            .iter()
            .zip(&coefficients)
            .map(|(b, c)| b.mul_scalar(c))
            .collect();
        let combination = Series::sum(ambient, parts).valuation(prec);
        return Ok(IndependenceVerdict::Dependent(DependenceWitness {
            coefficients,
            summand_min: rep_value.clone(),
            combination,
        }));
    }
    Ok(IndependenceVerdict::Independent {
        scalings: normal_scalings(pres, &leads, &classes)?,
    })
}

/// Independence of `family` over the span of a certified family `w_basis`,
/// decided on the concatenation `family ++ w_basis`.
pub fn is_valuation_independent_over(
    pres: &SubfieldPresentation,
    family: &[Series],
    w_basis: &[Series],
    prec: &Precision,
) -> Result<IndependenceVerdict, SpaceError> {
    if !w_basis.is_empty() && !is_valuation_independent(pres, w_basis, prec)?.is_independent() {
        return Err(SpaceError::UncertifiedSubspace);
    }
    let mut all = family.to_vec();
    all.extend_from_slice(w_basis);
    is_valuation_independent(pres, &all, prec)
}

pub(crate) fn check_ambient(
    pres: &SubfieldPresentation,
    family: &[Series],
) -> Result<(), SpaceError> {
    for b in family {
        if b.ambient() != pres.ambient() {
            return Err(crate::series::SeriesError::MismatchedAmbient(
                *b.ambient(),
                *pres.ambient(),
            )
            .into());
        }
    }
    Ok(())
}

/// The scalings of the constructive normalization recipe: class
/// representatives outside `vK` keep scale 1, other members are moved onto
/// their representative's value, values in `vK` are moved to 0 and residues
/// lying in `Kv` are divided out.
fn normal_scalings(
    pres: &SubfieldPresentation,
    leads: &[Leading],
    classes: &[ValueClass],
) -> Result<Vec<Scalar>, SpaceError> {
    let ambient = *pres.ambient();
    let mut out = vec![Scalar::one(ambient); leads.len()];
    for class in classes {
        let target = if class.in_value_group {
            ambient.group.zero()
        } else {
            leads[class.rep()].value.clone()
        };
        for &i in &class.members {
            let mut c = pres.monomial_section(&(&target - &leads[i].value))?;
            if class.in_value_group && pres.residue_subfield().contains(&leads[i].coefficient) {
                c = c.mul(&pres.residue_section(&leads[i].coefficient)?.inv()?);
            }
            out[i] = c;
        }
    }
    Ok(out)
}

/// A family rescaled to satisfy N1–N4.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub elements: Vec<Series>,
    pub scalings: Vec<Scalar>,
}

pub fn normalize(
    pres: &SubfieldPresentation,
    family: &[Series],
    prec: &Precision,
) -> Result<Normalized, SpaceError> {
    match is_valuation_independent(pres, family, prec)? {
        IndependenceVerdict::Independent { scalings } => Ok(Normalized {
            elements: family
                .iter()
                .zip(&scalings)
                .map(|(b, c)| b.mul_scalar(c))
                .collect(),
            scalings,
        }),
        IndependenceVerdict::Dependent(w) => Err(SpaceError::NotIndependent(Box::new(w))),
        IndependenceVerdict::Inconclusive { bound } => Err(SpaceError::Inconclusive(bound)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalCondition {
    N1,
    N2,
    N3,
    N4,
}

impl fmt::Display for NormalCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizationCheck {
    Pass,
    /// 1-based member indices that violate the condition.
    Fail {
        condition: NormalCondition,
        members: Vec<usize>,
    },
    Inconclusive {
        bound: GroupElement,
    },
}

/// Evaluates N1–N4 directly, in that order.
pub fn check_normalized(
    pres: &SubfieldPresentation,
    family: &[Series],
    prec: &Precision,
) -> Result<NormalizationCheck, SpaceError> {
    check_ambient(pres, family)?;
    let leads = match leading_terms(family, prec)? {
        Ok(l) => l,
        Err(bound) => return Ok(NormalizationCheck::Inconclusive { bound }),
    };
    let fail = |condition, members: Vec<usize>| {
        Ok(NormalizationCheck::Fail {
            condition,
            members: members.into_iter().map(|i| i + 1).collect(),
        })
    };
    let classes = classify(pres, &leads)?;
    for class in &classes {
        let v = &leads[class.rep()].value;
        if let Some(&j) = class.members.iter().find(|&&j| leads[j].value != *v) {
            return fail(NormalCondition::N1, vec![class.rep(), j]);
        }
    }
    for class in &classes {
        let rows = class_residue_rows(pres, &leads, class)?;
        if linear_rank(&pres.residue_subfield(), &rows)?.rank < rows.len() {
            return fail(NormalCondition::N2, class.members.clone());
        }
    }
    for (i, l) in leads.iter().enumerate() {
        if pres.in_value_group(&l.value)? && !l.value.is_zero() {
            return fail(NormalCondition::N3, vec![i]);
        }
    }
    for (i, l) in leads.iter().enumerate() {
        if l.value.is_zero()
            && pres.residue_subfield().contains(&l.coefficient)
            && !l.coefficient.is_one()
        {
            return fail(NormalCondition::N4, vec![i]);
        }
    }
    Ok(NormalizationCheck::Pass)
}

/// `res(u/a)` for every `u ∈ U` with `v(u) = v(a)`, in family order.
pub fn residue_profile(
    family: &[Series],
    a: &Series,
    prec: &Precision,
) -> Result<ResidueProfile, SpaceError> {
    let la = a
        .leading_term(prec)
        .ok_or_else(|| crate::series::SeriesError::LeadingTermUnknown(prec.ceiling.clone()))?;
    let mut entries = Vec::new();
    for u in family {
        if let Some(lu) = u.leading_term(prec) {
            if lu.exponent == la.exponent {
                entries.push(lu.coefficient.try_div(&la.coefficient)?);
            }
        }
    }
    Ok(ResidueProfile { entries })
}
