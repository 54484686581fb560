//! Independent re-checking of the witnesses in a structured report.
//!
//! Each task outcome is re-read from JSON; witnesses are rebuilt from the
//! reported coefficients and checked against the scenario's elements, never
//! against the runner's in-memory state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use ultragram_core::{
    analyze_space, check_normalized, is_valuation_independent, is_valuation_independent_over,
    monomial, nearest_point, relative_basis, span_closure_basis, standard_basis, Achieved,
    DependenceWitness, ExtensionReport, GroupElement, NormalizationCheck, Precision, Scalar,
    Series, SpanClosure, SubfieldPresentation, Valuation,
};

use crate::codec;
use crate::context::{indexed_stage, Context};
use crate::scenario::{Operation, Scenario, Task};
use crate::{CliError, SCHEMA};

/// Combinations sampled per independent family.
const SAMPLES: usize = 16;

#[derive(Debug, Clone)]
pub struct Check {
    /// 1-based task index.
    pub task: usize,
    pub claim: String,
    pub ok: bool,
    pub detail: String,
}

pub fn verify(
    s: &Scenario,
    ctx: &Context,
    report: &Value,
    seed: u64,
) -> Result<Vec<Check>, CliError> {
    if report["schema"] != SCHEMA {
        return Err(CliError::Report(format!("expected schema {SCHEMA}")));
    }
    let tasks = report["tasks"]
        .as_array()
        .ok_or_else(|| CliError::Report("missing tasks".into()))?;
    if tasks.len() != s.tasks.len() {
        return Err(CliError::Report(format!(
            "{} tasks reported, scenario has {}",
            tasks.len(),
            s.tasks.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (i, (task, entry)) in s.tasks.iter().zip(tasks).enumerate() {
        let outcome = &entry["outcome"];
        let claim = claim_of(outcome);
        let (ok, detail) = if outcome.get("error").is_some() {
            (true, "error outcome, no witness".to_string())
        } else {
            match check_task(ctx, task, outcome, &mut rng) {
                Ok(r) => r,
                Err(e) => (false, format!("could not recheck: {e}")),
            }
        };
        out.push(Check {
            task: i + 1,
            claim,
            ok,
            detail,
        });
    }
    Ok(out)
}

fn claim_of(outcome: &Value) -> String {
    for key in ["verdict", "achieved", "outcome", "kind"] {
        if let Some(v) = outcome[key].as_str() {
            return v.to_string();
        }
    }
    if outcome.get("error").is_some() {
        return "error".into();
    }
    "result".into()
}

fn combination(ambient: ultragram_core::Ambient, family: &[Series], cs: &[Scalar]) -> Series {
    Series::sum(
        ambient,
        family
            .iter()
            .zip(cs)
            .map(|(f, c)| f.mul_scalar(c))
            .collect(),
    )
}

fn all_in_base(pres: &SubfieldPresentation, cs: &[Scalar]) -> Result<bool, CliError> {
    for c in cs {
        if !pres.contains_scalar(c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Residual values `v(b − Σ c w)` along unbounded evidence must match the
/// reported values and increase strictly.
fn check_evidence(
    ctx: &Context,
    pres: &SubfieldPresentation,
    b: &Series,
    evidence: &Value,
    family_for: &dyn Fn(usize) -> Result<Vec<Series>, CliError>,
) -> Result<(bool, String), CliError> {
    let steps = evidence
        .as_array()
        .ok_or_else(|| CliError::Report("missing evidence".into()))?;
    if steps.is_empty() {
        return Ok((false, "empty evidence".into()));
    }
    let mut last: Option<GroupElement> = None;
    for (k, step) in steps.iter().enumerate() {
        let value = codec::parse_group(ctx.ambient, &step["value"])?;
        let cs = codec::parse_scalars(ctx.ambient, &step["coefficients"])?;
        if !all_in_base(pres, &cs)? {
            return Ok((false, format!("step {} has a coefficient outside K", k + 1)));
        }
        let fam = family_for(cs.len())?;
        let r = b - &combination(ctx.ambient, &fam, &cs);
        if r.valuation(&ctx.prec) != Valuation::Value(value.clone()) {
            return Ok((
                false,
                format!(
                    "step {}: residual value {} != {value}",
                    k + 1,
                    r.valuation(&ctx.prec)
                ),
            ));
        }
        if last.as_ref().is_some_and(|l| *l >= value) {
            return Ok((false, format!("step {}: values not increasing", k + 1)));
        }
        last = Some(value);
    }
    Ok((true, format!("{} evidence values rechecked", steps.len())))
}

/// `v(b − Σ c w)` equals the reported value and the residual is valuation
/// independent over `W`, so no better approximation exists.
fn check_maximum(
    ctx: &Context,
    pres: &SubfieldPresentation,
    b: &Series,
    w: &[Series],
    cs: &[Scalar],
    value: &GroupElement,
) -> Result<(bool, String), CliError> {
    if !all_in_base(pres, cs)? {
        return Ok((false, "coefficient outside K".into()));
    }
    let r = b - &combination(ctx.ambient, w, cs);
    let v = r.valuation(&ctx.prec);
    if v != Valuation::Value(value.clone()) {
        return Ok((false, format!("residual value {v} != {value}")));
    }
    let verdict = is_valuation_independent_over(pres, std::slice::from_ref(&r), w, &ctx.prec)?;
    Ok((
        verdict.is_independent(),
        format!("residual value {value}, orthogonality {verdict}"),
    ))
}

fn check_nearest(
    ctx: &Context,
    pres: &SubfieldPresentation,
    b: &Series,
    w: &[Series],
    out: &Value,
    family_for: &dyn Fn(usize) -> Result<Vec<Series>, CliError>,
) -> Result<(bool, String), CliError> {
    match out["achieved"].as_str() {
        Some("value") => {
            let value = codec::parse_group(ctx.ambient, &out["value"])?;
            let cs = codec::parse_scalars(ctx.ambient, &out["coefficients"])?;
            check_maximum(ctx, pres, b, w, &cs, &value)
        }
        Some("exact_member") => {
            let cs = codec::parse_scalars(ctx.ambient, &out["coefficients"])?;
            if !all_in_base(pres, &cs)? {
                return Ok((false, "coefficient outside K".into()));
            }
            let r = b - &combination(ctx.ambient, w, &cs);
            let v = r.valuation(&ctx.prec);
            Ok((matches!(v, Valuation::ZeroUpTo(_)), format!("residual {v}")))
        }
        Some("unbounded") => check_evidence(ctx, pres, b, &out["evidence"], family_for),
        Some("precision_exhausted") => Ok((true, "no witness".into())),
        other => Err(CliError::Report(format!(
            "unknown nearest point outcome {other:?}"
        ))),
    }
}

fn check_task(
    ctx: &Context,
    task: &Task,
    out: &Value,
    rng: &mut ChaCha8Rng,
) -> Result<(bool, String), CliError> {
    let pres = ctx.base_for(task.base_field.as_ref())?;
    let prec: &Precision = &ctx.prec;
    let a = ctx.ambient;
    match &task.op {
        Operation::Independence { family, over } => {
            let all = ctx.family(&family.iter().chain(over).cloned().collect::<Vec<_>>())?;
            match out["verdict"].as_str() {
                Some("dependent") => {
                    let w = DependenceWitness {
                        coefficients: codec::parse_scalars(a, &out["coefficients"])?,
                        summand_min: codec::parse_group(a, &out["summand_min"])?,
                        combination: Valuation::ZeroUpTo(prec.ceiling.clone()),
                    };
                    if !all_in_base(&pres, &w.coefficients)? {
                        return Ok((false, "coefficient outside K".into()));
                    }
                    Ok((
                        w.recheck(&all, prec),
                        "combination value exceeds summand minimum".into(),
                    ))
                }
                Some("independent") => {
                    let scalings = codec::parse_scalars(a, &out["scalings"])?;
                    check_independent(&pres, &all, &scalings, prec, rng)
                }
                Some("inconclusive") => {
                    let vanishing = all
                        .iter()
                        .any(|b| matches!(b.valuation(prec), Valuation::ZeroUpTo(_)));
                    Ok((vanishing, "a member vanishes up to the ceiling".into()))
                }
                other => Err(CliError::Report(format!("unknown verdict {other:?}"))),
            }
        }
        Operation::Normalize { family } => {
            let fam = ctx.family(family)?;
            let scalings = codec::parse_scalars(a, &out["scalings"])?;
            check_independent(&pres, &fam, &scalings, prec, rng)
        }
        Operation::NearestPoint {
            target,
            family,
            stream,
        } => {
            let b = ctx.get(target)?;
            if let Some(fam) = stream {
                let fam = fam.clone();
                let family_for = move |n: usize| indexed_stage(a, &fam, n);
                return match out["achieved"].as_str() {
                    Some("unbounded") => {
                        check_evidence(ctx, &pres, &b, &out["evidence"], &family_for)
                    }
                    _ => Ok((true, "no stream evidence".into())),
                };
            }
            let w = ctx.family(family)?;
            let family_for = |_n: usize| Ok(w.clone());
            check_nearest(ctx, &pres, &b, &w, out, &family_for)
        }
        Operation::Orthogonalize { generators } => {
            let gens = ctx.family(generators)?;
            match out["outcome"].as_str() {
                Some("basis") => {
                    let rows = out["coordinates"]
                        .as_array()
                        .ok_or_else(|| CliError::Report("coordinates".into()))?;
                    let mut basis = Vec::new();
                    for row in rows {
                        let cs = codec::parse_scalars(a, row)?;
                        if !all_in_base(&pres, &cs)? {
                            return Ok((false, "coordinate outside K".into()));
                        }
                        basis.push(combination(a, &gens, &cs));
                    }
                    if !matches!(
                        check_normalized(&pres, &basis, prec)?,
                        NormalizationCheck::Pass
                    ) {
                        return Ok((false, "rebuilt basis is not normalized".into()));
                    }
                    for (j, g) in gens.iter().enumerate() {
                        let r = nearest_point(&pres, g, &basis, prec)?;
                        if !matches!(r.achieved, Achieved::ExactMember { .. }) {
                            return Ok((
                                false,
                                format!("generator {} is not in the rebuilt span", j + 1),
                            ));
                        }
                    }
                    Ok((
                        true,
                        format!(
                            "rebuilt basis of {} is normalized and spans every generator",
                            basis.len()
                        ),
                    ))
                }
                Some("obstruction") => {
                    let index = out["index"]
                        .as_u64()
                        .ok_or_else(|| CliError::Report("index".into()))?
                        as usize;
                    let earlier = gens[..index - 1].to_vec();
                    let family_for = |_n: usize| Ok(earlier.clone());
                    check_nearest(
                        ctx,
                        &pres,
                        &gens[index - 1],
                        &earlier,
                        &out["result"],
                        &family_for,
                    )
                }
                other => Err(CliError::Report(format!(
                    "unknown orthogonalization outcome {other:?}"
                ))),
            }
        }
        Operation::AnalyzeExtension { generators, space } => match out["verdict"].as_str() {
            Some("obstructed") => {
                let gens = ctx.family(generators)?;
                let exps: Vec<u32> = serde_json::from_value(out["monomial"].clone())
                    .map_err(|e| CliError::Report(e.to_string()))?;
                let pushed: Vec<Vec<u32>> = serde_json::from_value(out["pushed"].clone())
                    .map_err(|e| CliError::Report(e.to_string()))?;
                let target = monomial(&pres, &gens, &exps);
                let fam: Vec<Series> = pushed.iter().map(|m| monomial(&pres, &gens, m)).collect();
                let family_for = |_n: usize| Ok(fam.clone());
                check_nearest(ctx, &pres, &target, &fam, &out["result"], &family_for)
            }
            Some("vs_defectless") => {
                let report = if space.is_empty() {
                    let gens = ctx.family(generators)?;
                    match span_closure_basis(&pres, &gens, prec, ctx.degree_cap)? {
                        SpanClosure::Basis { basis, .. } => {
                            ExtensionReport::from_basis(&pres, basis, prec)?
                        }
                        _ => return Ok((false, "closure no longer terminates".into())),
                    }
                } else {
                    analyze_space(&pres, &ctx.family(space)?, prec)?
                };
                let (Some(n), Some(e), Some(f)) = (report.n, report.e.clone(), report.f) else {
                    return Ok((false, "invariants unavailable on rerun".into()));
                };
                let ultragram_core::Index::Finite(e) = e else {
                    return Ok((false, "infinite ramification index".into()));
                };
                if out["n"] != n || out["e"] != e.to_string() || out["f"] != f {
                    return Ok((false, "invariants differ on rerun".into()));
                }
                if &e * f != n.into() {
                    return Ok((false, format!("n = {n} but e·f = {}", &e * f)));
                }
                let sb = standard_basis(&pres, &report.basis, prec)?;
                let cert = is_valuation_independent(&pres, &sb.products, prec)?;
                Ok((
                    cert.is_independent() && sb.products.len() == n,
                    format!(
                        "n = e·f = {n}, standard basis of {} {}",
                        sb.products.len(),
                        cert
                    ),
                ))
            }
            _ => Ok((true, "no witness".into())),
        },
        Operation::Immediacy { probe } => {
            let x = ctx.get(probe)?;
            let one = [pres.one()];
            match out["kind"].as_str() {
                Some("not_immediate") => {
                    let c = codec::parse_scalar(a, &out["a"])?;
                    let value = codec::parse_group(a, &out["value"])?;
                    check_maximum(ctx, &pres, &x, &one, &[c], &value)
                }
                Some("immediate_evidence") => {
                    let steps: Vec<Value> = out["evidence"]
                        .as_array()
                        .into_iter()
                        .flatten()
                        .map(|s| serde_json::json!({ "value": s["value"], "coefficients": [s["a"]] }))
                        .collect();
                    let family_for = |_n: usize| Ok(one.to_vec());
                    check_evidence(ctx, &pres, &x, &Value::from(steps), &family_for)
                }
                _ => Ok((true, "no witness".into())),
            }
        }
        Operation::Approximate { u, coefficients } => {
            let uf = ctx.family(u)?;
            let c = coefficients
                .iter()
                .map(|row| ctx.family(row))
                .collect::<Result<Vec<_>, _>>()?;
            let approx = out["coefficients"]
                .as_array()
                .ok_or_else(|| CliError::Report("coefficients".into()))?;
            let targets = codec::parse_groups(a, &out["target_values"])?;
            let mut rebuilt = Vec::new();
            for (i, (row, arow)) in c.iter().zip(approx).enumerate() {
                let arow = codec::parse_scalars(a, arow)?;
                if !all_in_base(&pres, &arow)? {
                    return Ok((false, format!("row {} has a coefficient outside K", i + 1)));
                }
                let b = Series::sum(
                    a,
                    row.iter()
                        .zip(&uf)
                        .map(|(cij, uj)| cij.try_mul(uj))
                        .collect::<Result<_, _>>()?,
                );
                if b.valuation(prec) != Valuation::Value(targets[i].clone()) {
                    return Ok((false, format!("v(b_{}) is not {}", i + 1, targets[i])));
                }
                for (j, ((cij, aij), uj)) in row.iter().zip(&arow).zip(&uf).enumerate() {
                    let err = (cij - &Series::from_scalar(aij)).try_mul(uj)?;
                    if !err.valuation(prec).exceeds(&targets[i]) {
                        return Ok((
                            false,
                            format!("entry ({}, {}) is not close enough", i + 1, j + 1),
                        ));
                    }
                }
                let star = combination(a, &uf, &arow);
                if star.valuation(prec) != Valuation::Value(targets[i].clone()) {
                    return Ok((
                        false,
                        format!("v(b*_{}) differs from v(b_{})", i + 1, i + 1),
                    ));
                }
                rebuilt.push(star);
            }
            let cert = is_valuation_independent(&pres, &rebuilt, prec)?;
            Ok((
                cert.is_independent(),
                format!("entry bounds hold, rebuilt family {cert}"),
            ))
        }
        Operation::Exchange {
            basis,
            over,
            element,
        } => {
            let b = ctx.family(basis)?;
            let w = ctx.family(over)?;
            let x = ctx.get(element)?;
            let bc = codec::parse_scalars(a, &out["b_coefficients"])?;
            let ac = codec::parse_scalars(a, &out["a_coefficients"])?;
            if !all_in_base(&pres, &bc)? || !all_in_base(&pres, &ac)? {
                return Ok((false, "coefficient outside K".into()));
            }
            let xa = combination(a, &w, &ac);
            let r = &(&x - &combination(a, &b, &bc)) - &xa;
            if !matches!(r.valuation(prec), Valuation::ZeroUpTo(_)) {
                return Ok((false, "coefficients do not reproduce x".into()));
            }
            let removed = out["removed"]
                .as_u64()
                .ok_or_else(|| CliError::Report("removed".into()))?
                as usize
                - 1;
            let values: Vec<Option<GroupElement>> = bc
                .iter()
                .zip(&b)
                .map(|(c, bi)| Some(&c.valuation()? + bi.valuation(prec).value()?))
                .collect();
            let Some(vr) = values[removed].clone() else {
                return Ok((false, "removed member has zero coefficient".into()));
            };
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    if *v < vr || (*v == vr && i < removed) {
                        return Ok((false, format!("member {} has a smaller summand", i + 1)));
                    }
                }
            }
            let remaining: Vec<Series> = b
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != removed)
                .map(|(_, s)| s.clone())
                .collect();
            let mut over_x = w.clone();
            over_x.push(&x - &xa);
            let cert = is_valuation_independent_over(&pres, &remaining, &over_x, prec)?;
            Ok((
                cert.is_independent(),
                format!("x reproduced, minimal summand removed, remainder {cert}"),
            ))
        }
        Operation::RelativeBasis {
            basis,
            over,
            generators,
        } => {
            let r = relative_basis(
                &pres,
                &ctx.family(basis)?,
                &ctx.family(over)?,
                &ctx.family(generators)?,
                prec,
            )?;
            let kept: Vec<&String> = r.kept.iter().map(|&i| &basis[i]).collect();
            let same = out["kept"] == serde_json::json!(kept);
            let ok =
                same && r.a_certificate.is_independent() && r.b_prime_certificate.is_independent();
            Ok((
                ok,
                format!(
                    "rerun keeps {kept:?}, certificates {} / {}",
                    r.a_certificate, r.b_prime_certificate
                ),
            ))
        }
    }
}

/// Scaled members satisfy the normal-form conditions, and sampled
/// combinations attain the minimum of their summand values.
fn check_independent(
    pres: &SubfieldPresentation,
    family: &[Series],
    scalings: &[Scalar],
    prec: &Precision,
    rng: &mut ChaCha8Rng,
) -> Result<(bool, String), CliError> {
    use rand::Rng;
    if scalings.len() != family.len() || !all_in_base(pres, scalings)? {
        return Ok((false, "scalings malformed or outside K".into()));
    }
    let scaled: Vec<Series> = family
        .iter()
        .zip(scalings)
        .map(|(b, c)| b.mul_scalar(c))
        .collect();
    let check = check_normalized(pres, &scaled, prec)?;
    if !matches!(check, NormalizationCheck::Pass) {
        return Ok((
            false,
            format!("scaled family fails the normal form: {check:?}"),
        ));
    }
    let ambient = *pres.ambient();
    for k in 0..SAMPLES {
        let mut parts = Vec::new();
        let mut min: Option<GroupElement> = None;
        for b in family {
            if rng.random_range(0..3) == 0 {
                continue;
            }
            let low = rng.random_range(-2..3);
            let c = pres.sample_scalar(rng, low, 3);
            let Some(vb) = b.valuation(prec).value().cloned() else {
                continue;
            };
            let v = &c.valuation().expect("sampled scalars are nonzero") + &vb;
            min = Some(min.map_or(v.clone(), |m| m.min(v)));
            parts.push(b.mul_scalar(&c));
        }
        let Some(min) = min else { continue };
        let v = Series::sum(ambient, parts).valuation(prec);
        if v != Valuation::Value(min.clone()) {
            return Ok((
                false,
                format!("sample {}: combination value {v} != minimum {min}", k + 1),
            ));
        }
    }
    Ok((
        true,
        format!("normal form holds, {SAMPLES} sampled combinations attain their minimum"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::run;
    use crate::scenario::parse_scenario;

    fn scenario() -> Scenario {
        parse_scenario(
            r#"{"name": "v", "ambient": {"group": "Q", "field": "F_5"},
                "base_field": {"kind": "rational_functions", "residue": "F_5", "generator": "1"},
                "precision": {"ceiling": "20", "max_terms": 6},
                "elements": {"one": {"constant": "1"}, "h": {"monomial": {"exponent": "1/2", "coefficient": "3"}}},
                "tasks": [{"op": "independence", "family": ["one", "h"]},
                          {"op": "nearest_point", "target": "h", "family": ["one"]}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn honest_report_is_confirmed() {
        let s = scenario();
        let (report, ctx) = run(&s).unwrap();
        let checks = verify(&s, &ctx, &report.structured(), 1).unwrap();
        assert!(checks.iter().all(|c| c.ok));
        assert_eq!(checks[0].claim, "independent");
    }

    #[test]
    fn wrong_scalings_and_values_are_rejected() {
        let s = scenario();
        let (report, ctx) = run(&s).unwrap();
        let mut doc = report.structured();
        // Scaling by 2 breaks N4 for the constant member.
        doc["tasks"][0]["outcome"]["scalings"][0]["num"][0][1] = "2".into();
        doc["tasks"][1]["outcome"]["value"] = serde_json::json!(["1"]);
        let checks = verify(&s, &ctx, &doc, 1).unwrap();
        assert!(!checks[0].ok && !checks[1].ok);
    }

    #[test]
    fn schema_and_task_count_are_checked() {
        let s = scenario();
        let (report, ctx) = run(&s).unwrap();
        let mut doc = report.structured();
        doc["tasks"].as_array_mut().unwrap().pop();
        assert!(matches!(
            verify(&s, &ctx, &doc, 1),
            Err(CliError::Report(_))
        ));
        doc["schema"] = "other".into();
        assert!(matches!(
            verify(&s, &ctx, &doc, 1),
            Err(CliError::Report(_))
        ));
    }
}
