//! Executes scenario tasks in order and records their outcomes.

use std::time::{Duration, Instant};

use serde_json::{json, Value};

use ultragram_core::{
    analyze_space, basis_exchange, complete_and_approximate, immediacy_evidence,
    is_valuation_independent, is_valuation_independent_over, nearest_point_normalizing,
    nearest_point_stream, normalize, orthogonalize, relative_basis, span_closure_basis,
    standard_basis, Achieved, ExtensionReport, ExtensionVerdict, GroupElement, ImmediacyEvidence,
    IndependenceVerdict, Index, NearestPointResult, Orthogonalized, Precision, Scalar, Series,
    SpanClosure, SubfieldPresentation,
};

use crate::codec;
use crate::context::{indexed_stage, Context};
use crate::scenario::{Operation, Scenario, Task};
use crate::CliError;

#[derive(Debug, Clone)]
pub struct TaskReport {
    /// 1-based position in the scenario.
    pub index: usize,
    pub op: &'static str,
    pub label: Option<String>,
    pub outcome: Value,
    pub summary: String,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub scenario: String,
    pub header: Value,
    pub tasks: Vec<TaskReport>,
    pub elapsed: Duration,
}

pub fn run(s: &Scenario) -> Result<(Report, Context), CliError> {
    let start = Instant::now();
    let ctx = Context::new(s)?;
    let header = json!({
        "ambient": { "group": s.ambient.group, "field": s.ambient.field },
        "base_field": ctx.base.to_string(),
        "precision": {
            "ceiling": codec::group(&ctx.prec.ceiling),
            "max_terms": ctx.prec.max_terms,
            "degree_cap": ctx.degree_cap,
        },
    });
    let mut tasks = Vec::new();
    for (i, task) in s.tasks.iter().enumerate() {
        let (outcome, summary) = match run_task(&ctx, task) {
            Ok(x) => x,
            Err(e) => (json!({ "error": e.to_string() }), format!("error: {e}")),
        };
        tasks.push(TaskReport {
            index: i + 1,
            op: task.op.name(),
            label: task.label.clone(),
            outcome,
            summary,
        });
    }
    Ok((
        Report {
            scenario: s.name.clone(),
            header,
            tasks,
            elapsed: start.elapsed(),
        },
        ctx,
    ))
}

fn list(v: &[GroupElement]) -> String {
    let parts: Vec<String> = v.iter().map(|g| g.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn verdict_json(
    v: &IndependenceVerdict,
    members: &[String],
    fam: &[Series],
    prec: &Precision,
) -> Value {
    match v {
        IndependenceVerdict::Independent { scalings } => json!({
            "verdict": "independent",
            "members": members,
            "scalings": codec::scalars(scalings),
            "values": fam.iter().map(|b| codec::valuation(&b.valuation(prec))).collect::<Vec<_>>(),
        }),
        IndependenceVerdict::Dependent(w) => json!({
            "verdict": "dependent",
            "members": members,
            "coefficients": codec::scalars(&w.coefficients),
            "summand_min": codec::group(&w.summand_min),
            "combination": codec::valuation(&w.combination),
        }),
        IndependenceVerdict::Inconclusive { bound } => json!({
            "verdict": "inconclusive",
            "members": members,
            "bound": codec::group(bound),
        }),
    }
}

fn achieved_json(a: &Achieved, out: &mut serde_json::Map<String, Value>) {
    match a {
        Achieved::Value(g) => {
            out.insert("achieved".into(), "value".into());
            out.insert("value".into(), codec::group(g));
        }
        Achieved::ExactMember { certified } => {
            out.insert("achieved".into(), "exact_member".into());
            out.insert("certified".into(), (*certified).into());
        }
        Achieved::Unbounded(steps) => {
            out.insert("achieved".into(), "unbounded".into());
            let ev: Vec<Value> = steps
                .iter()
                .map(|s| json!({ "value": codec::group(&s.value), "coefficients": codec::scalars(&s.coefficients) }))
                .collect();
            out.insert("evidence".into(), ev.into());
        }
        Achieved::PrecisionExhausted(b) => {
            out.insert("achieved".into(), "precision_exhausted".into());
            out.insert("bound".into(), codec::group(b));
        }
    }
}

/// Re-expresses coefficients over a basis as coefficients over the
/// generators, given the basis coordinates.
fn over_generators(
    cs: &[Scalar],
    coordinates: &[Vec<Scalar>],
    n: usize,
    ctx: &Context,
) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(ctx.ambient); n];
    for (c, row) in cs.iter().zip(coordinates) {
        for (slot, x) in out.iter_mut().zip(row) {
            *slot = slot.add(&c.mul(x));
        }
    }
    out
}

fn nearest_json(
    r: &NearestPointResult,
    prec: &Precision,
    map: &dyn Fn(&[Scalar]) -> Vec<Scalar>,
) -> serde_json::Map<String, Value> {
    let mut out = serde_json::Map::new();
    let achieved = match &r.achieved {
        Achieved::Unbounded(steps) => Achieved::Unbounded(
            steps
                .iter()
                .map(|s| ultragram_core::EvidenceStep {
                    value: s.value.clone(),
                    coefficients: map(&s.coefficients),
                })
                .collect(),
        ),
        a => a.clone(),
    };
    achieved_json(&achieved, &mut out);
    out.insert("coefficients".into(), codec::scalars(&map(&r.coefficients)));
    out.insert("best".into(), codec::series(&r.best, prec));
    out.insert("trace".into(), codec::groups(&r.trace));
    out
}

fn evidence_values(a: &Achieved) -> Vec<GroupElement> {
    match a {
        Achieved::Unbounded(steps) => steps.iter().map(|s| s.value.clone()).collect(),
        _ => Vec::new(),
    }
}

fn index_json(e: &Index) -> Value {
    match e {
        Index::Finite(k) => k.to_string().into(),
        Index::Infinite => "infinite".into(),
    }
}

fn extension_json(
    pres: &SubfieldPresentation,
    r: &ExtensionReport,
    prec: &Precision,
) -> (serde_json::Map<String, Value>, String) {
    let mut out = serde_json::Map::new();
    out.insert("n".into(), r.n.into());
    out.insert(
        "e".into(),
        r.e.as_ref().map(index_json).unwrap_or(Value::Null),
    );
    out.insert("f".into(), r.f.into());
    out.insert(
        "defect_index".into(),
        r.defect_index.as_ref().map(|d| d.to_string()).into(),
    );
    out.insert("basis".into(), codec::series_list(&r.basis, prec));
    let verdict = match &r.verdict {
        ExtensionVerdict::VsDefectless => "vs_defectless",
        ExtensionVerdict::Obstructed(_) => "obstructed",
        ExtensionVerdict::Inconclusive(_) => "inconclusive",
    };
    out.insert("verdict".into(), verdict.into());
    let mut summary = format!(
        "{}: n={}, e={}, f={}",
        r.verdict,
        r.n.map_or("?".into(), |n| n.to_string()),
        r.e.as_ref().map_or("?".into(), |e| match e {
            Index::Finite(k) => k.to_string(),
            Index::Infinite => "inf".into(),
        }),
        r.f.map_or("?".into(), |f| f.to_string())
    );
    if matches!(r.verdict, ExtensionVerdict::VsDefectless) {
        let sb = match standard_basis(pres, &r.basis, prec) {
            Ok(sb) => {
                let certified = sb.certificate.is_independent();
                summary.push_str(&format!(
                    ", standard basis of size {} {}",
                    sb.products.len(),
                    if certified {
                        "certified"
                    } else {
                        "NOT certified"
                    }
                ));
                json!({
                    "x": codec::series_list(&sb.x, prec),
                    "y": codec::series_list(&sb.y, prec),
                    "products": codec::series_list(&sb.products, prec),
                    "certified": certified,
                })
            }
            Err(e) => json!({ "error": e.to_string() }),
        };
        out.insert("standard_basis".into(), sb);
    }
    (out, summary)
}

fn run_task(ctx: &Context, task: &Task) -> Result<(Value, String), CliError> {
    let base = ctx.base_for(task.base_field.as_ref())?;
    let prec = &ctx.prec;
    match &task.op {
        Operation::Independence { family, over } => {
            let fam = ctx.family(family)?;
            let w = ctx.family(over)?;
            let v = if w.is_empty() {
                is_valuation_independent(&base, &fam, prec)?
            } else {
                is_valuation_independent_over(&base, &fam, &w, prec)?
            };
            let members: Vec<String> = family.iter().chain(over).cloned().collect();
            let all: Vec<Series> = fam.iter().chain(&w).cloned().collect();
            Ok((verdict_json(&v, &members, &all, prec), v.to_string()))
        }
        Operation::Normalize { family } => {
            let fam = ctx.family(family)?;
            let n = normalize(&base, &fam, prec)?;
            let values: Vec<GroupElement> = n
                .elements
                .iter()
                .filter_map(|e| e.valuation(prec).value().cloned())
                .collect();
            let out = json!({
                "members": family,
                "scalings": codec::scalars(&n.scalings),
                "elements": codec::series_list(&n.elements, prec),
            });
            Ok((out, format!("normalized, values {}", list(&values))))
        }
        Operation::NearestPoint {
            target,
            family,
            stream,
        } => {
            let b = ctx.get(target)?;
            if let Some(fam) = stream {
                let full = indexed_stage(ctx.ambient, fam, prec.max_terms)?;
                let r = nearest_point_stream(&base, &b, |n| full[..n].to_vec(), prec)?;
                let mut out = serde_json::Map::new();
                achieved_json(&r.achieved, &mut out);
                out.insert("stages".into(), r.stages.len().into());
                let summary = format!("streamed: {}", r.achieved);
                return Ok((out.into(), summary));
            }
            let w = ctx.family(family)?;
            let r = nearest_point_normalizing(&base, &b, &w, prec)?;
            let mut out = nearest_json(&r, prec, &|c| c.to_vec());
            out.insert("members".into(), family.clone().into());
            let summary = match &r.achieved {
                Achieved::Value(_) => {
                    format!(
                        "{}, best {}",
                        r.achieved,
                        r.best.display_below(&prec.ceiling, prec.max_terms.max(8))
                    )
                }
                a => a.to_string(),
            };
            Ok((out.into(), summary))
        }
        Operation::Orthogonalize { generators } => {
            let gens = ctx.family(generators)?;
            match orthogonalize(&base, &gens, prec)? {
                Orthogonalized::Basis {
                    basis,
                    coordinates,
                    skipped,
                } => {
                    let out = json!({
                        "outcome": "basis",
                        "dimension": basis.len(),
                        "basis": codec::series_list(&basis, prec),
                        "coordinates": coordinates.iter().map(|r| codec::scalars(r)).collect::<Vec<_>>(),
                        "skipped": skipped.iter().map(|j| j + 1).collect::<Vec<_>>(),
                    });
                    Ok((out, format!("basis of dimension {}", basis.len())))
                }
                Orthogonalized::Obstruction {
                    index,
                    result,
                    partial,
                    coordinates,
                } => {
                    let map = |cs: &[Scalar]| over_generators(cs, &coordinates, index - 1, ctx);
                    let out = json!({
                        "outcome": "obstruction",
                        "index": index,
                        "partial_dimension": partial.len(),
                        "result": Value::from(nearest_json(&result, prec, &map)),
                    });
                    Ok((
                        out,
                        format!("obstruction at generator {index}: {}", result.achieved),
                    ))
                }
            }
        }
        Operation::AnalyzeExtension { generators, space } => {
            if !space.is_empty() {
                let fam = ctx.family(space)?;
                let r = analyze_space(&base, &fam, prec)?;
                let (mut out, summary) = extension_json(&base, &r, prec);
                out.insert("mode".into(), "space".into());
                return Ok((out.into(), summary));
            }
            let gens = ctx.family(generators)?;
            match span_closure_basis(&base, &gens, prec, ctx.degree_cap)? {
                SpanClosure::Basis { basis, monomials } => {
                    let r = ExtensionReport::from_basis(&base, basis, prec)?;
                    let (mut out, summary) = extension_json(&base, &r, prec);
                    out.insert("mode".into(), "closure".into());
                    out.insert("monomials".into(), json!(monomials));
                    Ok((out.into(), summary))
                }
                SpanClosure::Obstruction {
                    monomial,
                    result,
                    partial,
                    pushed,
                    coordinates,
                } => {
                    let map = |cs: &[Scalar]| over_generators(cs, &coordinates, pushed.len(), ctx);
                    let evidence = evidence_values(&result.achieved);
                    let out = json!({
                        "mode": "closure",
                        "verdict": "obstructed",
                        "evidence": codec::groups(&evidence),
                        "monomial": monomial,
                        "pushed": pushed,
                        "partial_dimension": partial.len(),
                        "result": Value::from(nearest_json(&result, prec, &map)),
                    });
                    Ok((
                        out,
                        format!("obstructed at monomial {monomial:?}: {}", result.achieved),
                    ))
                }
                SpanClosure::Inconclusive { partial } => {
                    let out = json!({
                        "mode": "closure",
                        "verdict": "inconclusive",
                        "partial_dimension": partial.len(),
                    });
                    Ok((
                        out,
                        format!(
                            "inconclusive: span still growing at degree {} (dimension {})",
                            ctx.degree_cap,
                            partial.len()
                        ),
                    ))
                }
            }
        }
        Operation::Immediacy { probe } => {
            let x = ctx.get(probe)?;
            match immediacy_evidence(&base, &x, prec)? {
                ImmediacyEvidence::NotImmediateWitness { a, value } => Ok((
                    json!({ "kind": "not_immediate", "a": codec::scalar(&a), "value": codec::group(&value) }),
                    format!("not immediate: max v({probe} - a) = {value} at a = {a}"),
                )),
                ImmediacyEvidence::ImmediateEvidence(steps) => {
                    let values: Vec<GroupElement> = steps.iter().map(|s| s.value.clone()).collect();
                    let ev: Vec<Value> = steps
                        .iter()
                        .map(|s| json!({ "value": codec::group(&s.value), "a": codec::scalar(&s.coefficients[0]) }))
                        .collect();
                    Ok((
                        json!({ "kind": "immediate_evidence", "evidence": ev }),
                        format!("immediate evidence {}", list(&values)),
                    ))
                }
                ImmediacyEvidence::Inconclusive { bound } => Ok((
                    json!({ "kind": "inconclusive", "bound": codec::group(&bound) }),
                    format!("inconclusive below {bound}"),
                )),
            }
        }
        Operation::Approximate { u, coefficients } => {
            let uf = ctx.family(u)?;
            let c = coefficients
                .iter()
                .map(|row| ctx.family(row))
                .collect::<Result<Vec<_>, _>>()?;
            let r = complete_and_approximate(&base, &uf, &c, prec)?;
            let values: Vec<GroupElement> = r
                .elements
                .iter()
                .filter_map(|e| e.valuation(prec).value().cloned())
                .collect();
            let certified = r.certificate.is_independent();
            let out = json!({
                "elements": codec::series_list(&r.elements, prec),
                "coefficients": r.coefficients.iter().map(|row| codec::scalars(row)).collect::<Vec<_>>(),
                "bounds": r.bounds.iter().map(|row| codec::groups(row)).collect::<Vec<_>>(),
                "target_values": codec::groups(&r.target_values),
                "values": codec::groups(&values),
                "certified": certified,
            });
            let shown: Vec<String> = r
                .elements
                .iter()
                .map(|e| e.display_below(&prec.ceiling, prec.max_terms.max(8)))
                .collect();
            Ok((
                out,
                format!(
                    "approximated [{}], values {}, {}",
                    shown.join("; "),
                    list(&values),
                    if certified {
                        "certified"
                    } else {
                        "NOT certified"
                    }
                ),
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
            let r = basis_exchange(&base, &b, &w, &x, prec)?;
            let certified = r.certificate.is_independent();
            let out = json!({
                "removed": r.removed + 1,
                "removed_name": basis[r.removed],
                "b_coefficients": codec::scalars(&r.b_coefficients),
                "a_coefficients": codec::scalars(&r.a_coefficients),
                "a": codec::series(&r.a, prec),
                "certified": certified,
            });
            Ok((
                out,
                format!(
                    "removes {}, a = {}, remaining {}",
                    basis[r.removed],
                    r.a.display_below(&prec.ceiling, prec.max_terms),
                    if certified {
                        "certified"
                    } else {
                        "NOT certified"
                    }
                ),
            ))
        }
        Operation::RelativeBasis {
            basis,
            over,
            generators,
        } => {
            let b = ctx.family(basis)?;
            let w = ctx.family(over)?;
            let g = ctx.family(generators)?;
            let r = relative_basis(&base, &b, &w, &g, prec)?;
            let kept: Vec<&String> = r.kept.iter().map(|&i| &basis[i]).collect();
            let out = json!({
                "a": codec::series_list(&r.a, prec),
                "kept": kept,
                "a_certified": r.a_certificate.is_independent(),
                "b_prime_certified": r.b_prime_certificate.is_independent(),
            });
            let shown: Vec<String> =
                r.a.iter()
                    .map(|e| e.display_below(&prec.ceiling, prec.max_terms))
                    .collect();
            Ok((out, format!("A = [{}], B' = {:?}", shown.join("; "), kept)))
        }
    }
}
