//! JSON encodings of group elements, scalars and series for reports.

use serde_json::{json, Value};

use ultragram_core::{Ambient, GroupElement, Precision, Scalar, Series, Term, Valuation};

use crate::CliError;

/// Exponent coordinates as exact-rational strings.
pub fn group(g: &GroupElement) -> Value {
    Value::from(g.coordinate_strings())
}

pub fn groups(gs: &[GroupElement]) -> Value {
    Value::from(gs.iter().map(group).collect::<Vec<_>>())
}

fn terms(ts: &[Term]) -> Value {
    Value::from(
        ts.iter()
            .map(|t| json!([group(&t.exponent), t.coefficient.to_string()]))
            .collect::<Vec<_>>(),
    )
}

pub fn scalar(s: &Scalar) -> Value {
    json!({ "num": terms(s.numerator()), "den": terms(s.denominator()), "text": s.to_string() })
}

pub fn scalars(ss: &[Scalar]) -> Value {
    Value::from(ss.iter().map(scalar).collect::<Vec<_>>())
}

pub fn valuation(v: &Valuation) -> Value {
    match v {
        Valuation::Value(g) => json!({ "value": group(g) }),
        Valuation::ZeroUpTo(g) => json!({ "zero_up_to": group(g) }),
    }
}

/// Value and a printed prefix below the ceiling.
pub fn series(s: &Series, prec: &Precision) -> Value {
    json!({
        "valuation": valuation(&s.valuation(prec)),
        "prefix": s.display_below(&prec.ceiling, prec.max_terms.max(8)),
    })
}

pub fn series_list(ss: &[Series], prec: &Precision) -> Value {
    Value::from(ss.iter().map(|s| series(s, prec)).collect::<Vec<_>>())
}

fn malformed(what: &str) -> CliError {
    CliError::Report(format!("malformed {what}"))
}

pub fn parse_group(ambient: Ambient, v: &Value) -> Result<GroupElement, CliError> {
    let coords: Vec<&str> = v
        .as_array()
        .ok_or_else(|| malformed("group element"))?
        .iter()
        .filter_map(Value::as_str)
        .collect();
    Ok(GroupElement::parse(ambient.group, &coords)?)
}

pub fn parse_groups(ambient: Ambient, v: &Value) -> Result<Vec<GroupElement>, CliError> {
    v.as_array()
        .ok_or_else(|| malformed("value list"))?
        .iter()
        .map(|g| parse_group(ambient, g))
        .collect()
}

fn parse_terms(ambient: Ambient, v: &Value) -> Result<Vec<Term>, CliError> {
    let arr = v.as_array().ok_or_else(|| malformed("term list"))?;
    arr.iter()
        .map(|t| {
            let pair = t
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| malformed("term"))?;
            let c = pair[1].as_str().ok_or_else(|| malformed("coefficient"))?;
            Ok(Term::new(
                parse_group(ambient, &pair[0])?,
                ambient.field.parse(c)?,
            ))
        })
        .collect()
}

pub fn parse_scalar(ambient: Ambient, v: &Value) -> Result<Scalar, CliError> {
    let num = parse_terms(ambient, &v["num"])?;
    let den = parse_terms(ambient, &v["den"])?;
    if num.is_empty() {
        return Ok(Scalar::zero(ambient));
    }
    Ok(Scalar::ratio(ambient, num, den)?)
}

pub fn parse_scalars(ambient: Ambient, v: &Value) -> Result<Vec<Scalar>, CliError> {
    v.as_array()
        .ok_or_else(|| malformed("coefficient list"))?
        .iter()
        .map(|s| parse_scalar(ambient, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ultragram_core::{OrderedGroup, ResidueField};

    #[test]
    fn scalar_round_trip() {
        for field in [
            ResidueField::PrimeField(5),
            ResidueField::Rationals,
            ResidueField::RationalFunctions(3),
        ] {
            let a = Ambient::new(OrderedGroup::RationalLine, field);
            let c = field.variable().unwrap_or_else(|| field.from_int(2));
            let s = Scalar::ratio(
                a,
                vec![Term::new(GroupElement::rational(1, 2), c)],
                vec![
                    Term::new(GroupElement::rational(0, 1), field.one()),
                    Term::new(GroupElement::rational(1, 1), field.from_int(-1)),
                ],
            )
            .unwrap();
            assert_eq!(parse_scalar(a, &scalar(&s)).unwrap(), s);
            assert!(parse_scalar(a, &scalar(&Scalar::zero(a)))
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn lex_exponents_serialize_as_coordinates() {
        let a = Ambient::new(
            OrderedGroup::LexProduct { rank: 2 },
            ResidueField::PrimeField(3),
        );
        let g = GroupElement::lex(&[0, 3]);
        assert_eq!(group(&g), json!(["0", "3"]));
        assert_eq!(parse_group(a, &group(&g)).unwrap(), g);
    }
}
