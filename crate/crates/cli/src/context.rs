//! Turning scenario descriptors into library values.

use std::collections::BTreeMap;

use ultragram_core::{
    Ambient, GroupElement, OrderedGroup, Precision, ResidueField, Scalar, Series,
    SubfieldPresentation, Term, DEFAULT_DEGREE_CAP,
};

use crate::scenario::{BaseKind, BaseSpec, Builder, Exponent, IndexedFamily, Scenario, TermSpec};
use crate::CliError;

pub fn parse_group(text: &str) -> Result<OrderedGroup, CliError> {
    let t = text.trim();
    match t {
        "Z" => Ok(OrderedGroup::IntegerLine),
        "Q" => Ok(OrderedGroup::RationalLine),
        _ => {
            let rank = t
                .strip_prefix("Z^")
                .and_then(|r| r.strip_suffix("_lex"))
                .and_then(|r| r.parse::<usize>().ok())
                .filter(|&r| r >= 1)
                .ok_or_else(|| {
                    CliError::Unsupported(format!("group {t:?}; expected Z, Q or Z^n_lex"))
                })?;
            Ok(OrderedGroup::LexProduct { rank })
        }
    }
}

pub fn parse_field(text: &str) -> Result<ResidueField, CliError> {
    let t = text.trim();
    if t == "Q" {
        return Ok(ResidueField::Rationals);
    }
    let bad = || CliError::Unsupported(format!("field {t:?}; expected F_p, Q or F_p(s)"));
    let rest = t.strip_prefix("F_").ok_or_else(bad)?;
    if let Some(p) = rest.strip_suffix("(s)") {
        let p = p.parse::<u64>().map_err(|_| bad())?;
        Ok(ResidueField::rational_functions(p)?)
    } else {
        let p = rest.parse::<u64>().map_err(|_| bad())?;
        Ok(ResidueField::prime(p)?)
    }
}

pub fn parse_exponent(group: OrderedGroup, e: &Exponent) -> Result<GroupElement, CliError> {
    let coords: Vec<&str> = match e {
        Exponent::Scalar(s) => vec![s.as_str()],
        Exponent::Coords(v) => v.iter().map(String::as_str).collect(),
    };
    if coords.len() != group.rank() {
        return Err(CliError::Unsupported(format!(
            "exponent {coords:?} has {} coordinates, {group} needs {}",
            coords.len(),
            group.rank()
        )));
    }
    Ok(GroupElement::parse(group, &coords)?)
}

/// `k·i + b` for one-coordinate groups.
fn parse_affine(text: &str) -> Result<(String, String), CliError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || {
        CliError::Unsupported(format!(
            "indexed exponent {text:?}; expected forms like i, 2i+1, i/2-1"
        ))
    };
    let mut slope = String::from("0");
    let mut offset = String::from("0");
    let mut rest = s.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => ("", &rest[1..]),
            b'-' => ("-", &rest[1..]),
            _ if first => ("", rest),
            _ => return Err(bad()),
        };
        first = false;
        let end = body[1..]
            .find(['+', '-'])
            .map(|k| k + 1)
            .unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        if term.is_empty() {
            return Err(bad());
        }
        if let Some(pos) = term.find('i') {
            let (before, after) = (&term[..pos], &term[pos + 1..]);
            let before = before.trim_end_matches('*');
            let num = if before.is_empty() { "1" } else { before };
            let coef = match after.strip_prefix('/') {
                Some(den) => format!("{sign}{num}/{den}"),
                None if after.is_empty() => format!("{sign}{num}"),
                None => return Err(bad()),
            };
            slope = coef;
        } else {
            offset = format!("{sign}{term}");
        }
    }
    Ok((slope, offset))
}

fn parse_terms(ambient: Ambient, terms: &[TermSpec]) -> Result<Vec<Term>, CliError> {
    terms
        .iter()
        .map(|(e, c)| {
            Ok(Term::new(
                parse_exponent(ambient.group, e)?,
                ambient.field.parse(c)?,
            ))
        })
        .collect()
}

pub fn presentation(ambient: Ambient, spec: &BaseSpec) -> Result<SubfieldPresentation, CliError> {
    let residue = parse_field(&spec.residue)?;
    let generator = spec
        .generator
        .as_ref()
        .map(|g| parse_exponent(ambient.group, g))
        .transpose()?;
    let p = match (spec.kind, generator) {
        (BaseKind::Trivial, None) => SubfieldPresentation::trivial(ambient, residue)?,
        (BaseKind::Trivial, Some(_)) => {
            return Err(CliError::Unsupported(
                "a trivially valued base field takes no generator".into(),
            ))
        }
        (_, None) => {
            return Err(CliError::Unsupported(
                "a valued base field needs a value group generator".into(),
            ))
        }
        (BaseKind::RationalFunctions, Some(g)) => {
            SubfieldPresentation::rational_functions(ambient, residue, g)?
        }
        (BaseKind::Completion, Some(g)) => SubfieldPresentation::completion(ambient, residue, g)?,
    };
    Ok(p)
}

/// A scenario with its elements built.
pub struct Context {
    pub ambient: Ambient,
    pub base: SubfieldPresentation,
    pub prec: Precision,
    pub degree_cap: usize,
    pub elements: BTreeMap<String, Series>,
}

impl Context {
    pub fn new(s: &Scenario) -> Result<Context, CliError> {
        let ambient = Ambient::new(
            parse_group(&s.ambient.group)?,
            parse_field(&s.ambient.field)?,
        );
        let base = presentation(ambient, &s.base_field)?;
        let prec = Precision::new(
            parse_exponent(ambient.group, &s.precision.ceiling)?,
            s.precision.max_terms,
        );
        let mut ctx = Context {
            ambient,
            base,
            prec,
            degree_cap: s.precision.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP),
            elements: BTreeMap::new(),
        };
        for name in s.elements.keys() {
            let mut stack = Vec::new();
            ctx.element(s, name, &mut stack)?;
        }
        Ok(ctx)
    }

    fn element(
        &mut self,
        s: &Scenario,
        name: &str,
        stack: &mut Vec<String>,
    ) -> Result<Series, CliError> {
        if let Some(x) = self.elements.get(name) {
            return Ok(x.clone());
        }
        if stack.iter().any(|n| n == name) {
            return Err(CliError::Unsupported(format!(
                "element {name} is defined in terms of itself"
            )));
        }
        let b = s
            .elements
            .get(name)
            .ok_or_else(|| CliError::UnknownName(name.to_string()))?;
        stack.push(name.to_string());
        let x = self.build(s, b, stack)?;
        stack.pop();
        self.elements.insert(name.to_string(), x.clone());
        Ok(x)
    }

    fn build(
        &mut self,
        s: &Scenario,
        b: &Builder,
        stack: &mut Vec<String>,
    ) -> Result<Series, CliError> {
        let a = self.ambient;
        Ok(match b {
            Builder::Ref(name) => self.element(s, name, stack)?,
            Builder::Terms(t) => Series::from_terms(a, parse_terms(a, t)?)?,
            Builder::Constant(c) => Series::constant(a, a.field.parse(c)?),
            Builder::Monomial {
                exponent,
                coefficient,
            } => Series::monomial(
                a,
                a.field.parse(coefficient)?,
                parse_exponent(a.group, exponent)?,
            ),
            Builder::Geometric { step } => Series::geometric(a, self.positive(step)?),
            Builder::ArtinSchreier { step } => {
                let p = a.field.characteristic();
                if p == 0 {
                    return Err(CliError::Unsupported(
                        "artin_schreier needs positive characteristic".into(),
                    ));
                }
                Series::artin_schreier(a, p, self.positive(step)?)
            }
            Builder::Sum(parts) => {
                let parts = parts
                    .iter()
                    .map(|x| self.build(s, x, stack))
                    .collect::<Result<Vec<_>, _>>()?;
                Series::sum(a, parts)
            }
            Builder::Product(parts) => {
                let mut acc = Series::one(a);
                for x in parts {
                    acc = &acc * &self.build(s, x, stack)?;
                }
                acc
            }
            Builder::Neg(x) => self.build(s, x, stack)?.neg(),
            Builder::Power { of, exponent } => self.build(s, of, stack)?.pow(*exponent),
            Builder::Inverse(x) => self.build(s, x, stack)?.invert(&self.prec)?,
            Builder::Ratio { num, den } => {
                Scalar::ratio(a, parse_terms(a, num)?, parse_terms(a, den)?)?.to_series()
            }
        })
    }

    fn positive(&self, step: &Exponent) -> Result<GroupElement, CliError> {
        let g = parse_exponent(self.ambient.group, step)?;
        if !g.is_positive() {
            return Err(CliError::Unsupported(format!(
                "series step {g} must be positive"
            )));
        }
        Ok(g)
    }

    pub fn get(&self, name: &str) -> Result<Series, CliError> {
        self.elements
            .get(name)
            .cloned()
            .ok_or_else(|| CliError::UnknownName(name.to_string()))
    }

    pub fn family(&self, names: &[String]) -> Result<Vec<Series>, CliError> {
        names.iter().map(|n| self.get(n)).collect()
    }

    pub fn base_for(&self, spec: Option<&BaseSpec>) -> Result<SubfieldPresentation, CliError> {
        match spec {
            Some(spec) => presentation(self.ambient, spec),
            None => Ok(self.base.clone()),
        }
    }
}

/// Member `i` of an indexed family.
pub fn indexed_member(ambient: Ambient, fam: &IndexedFamily, i: i64) -> Result<Series, CliError> {
    if ambient.group.rank() != 1 {
        return Err(CliError::Unsupported(
            "indexed families need a rank-one group".into(),
        ));
    }
    let mut terms = Vec::new();
    for (e, c) in &fam.terms {
        let (slope, offset) = parse_affine(e)?;
        let slope = GroupElement::parse(ambient.group, &[&slope])?;
        let offset = GroupElement::parse(ambient.group, &[&offset])?;
        terms.push(Term::new(
            &slope.times(&i.into()) + &offset,
            ambient.field.parse(c)?,
        ));
    }
    Ok(Series::from_terms(ambient, terms)?)
}

/// The first `n` members of an indexed family.
pub fn indexed_stage(
    ambient: Ambient,
    fam: &IndexedFamily,
    n: usize,
) -> Result<Vec<Series>, CliError> {
    (0..n as i64)
        .map(|k| indexed_member(ambient, fam, fam.from + k))
        .collect()
}
