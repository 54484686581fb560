//! Maximizing `v(b − w)` over `w` in the span of a normalized family.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::field::{coordinates_over, solve_in_span, FieldElement};
use crate::group::GroupElement;
use crate::series::{Ambient, Known, Precision, Scalar, Series, Term};

use super::independence::{
    check_normalized, classify, leading_terms, normalize, NormalizationCheck,
};
use super::{PresentationKind, SpaceError, SubfieldPresentation};

/// Reduction steps before the chain is treated as non-terminating.
pub const MAX_REDUCTION_STEPS: usize = 4096;
/// Extra sequence length demanded beyond `2L` before a linear recurrence of
/// order `L` is trusted.
pub const RECOGNITION_MARGIN: usize = 6;

/// A point `a = Σ coefficients_j w_j` of the span together with `v(b − a)`.
#[derive(Debug, Clone)]
pub struct EvidenceStep {
    pub value: GroupElement,
    pub coefficients: Vec<Scalar>,
}

#[derive(Debug, Clone)]
pub enum Achieved {
    /// `max v(b − W)`.
    Value(GroupElement),
    /// `b` lies in the span; `certified` is false when membership is only
    /// established below the ceiling.
    ExactMember { certified: bool },
    /// A strictly increasing chain of achieved values of length `max_terms`.
    Unbounded(Vec<EvidenceStep>),
    /// The reduction ran out of precision at this bound before `max_terms`
    /// values were seen.
    PrecisionExhausted(GroupElement),
}

impl fmt::Display for Achieved {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Achieved::Value(g) => write!(f, "max value {g}"),
            Achieved::ExactMember { certified: true } => write!(f, "exact member"),
            Achieved::ExactMember { certified: false } => write!(f, "member up to precision"),
            Achieved::Unbounded(e) => {
                let vals: Vec<String> = e.iter().map(|s| s.value.to_string()).collect();
                write!(f, "unbounded, evidence [{}]", vals.join(", "))
            }
            Achieved::PrecisionExhausted(g) => write!(f, "precision exhausted at {g}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NearestPointResult {
    /// The best point found, `Σ coefficients_j w_j`.
    pub best: Series,
    pub coefficients: Vec<Scalar>,
    pub achieved: Achieved,
    /// `v(r_k)` for the successive residuals `r_k = b − a_k`.
    pub trace: Vec<GroupElement>,
}

/// Greedy ultrametric reduction of `b` against a normalized family.
pub fn nearest_point(
    pres: &SubfieldPresentation,
    b: &Series,
    w_basis: &[Series],
    prec: &Precision,
) -> Result<NearestPointResult, SpaceError> {
    super::independence::check_ambient(pres, std::slice::from_ref(b))?;
    match check_normalized(pres, w_basis, prec)? {
        NormalizationCheck::Pass => {}
        NormalizationCheck::Fail { condition, members } => {
            return Err(SpaceError::NotNormalized(condition, members))
        }
        NormalizationCheck::Inconclusive { .. } => return Err(SpaceError::UncertifiedSubspace),
    }
    Reduction::new(pres, b, w_basis, prec)?.run()
}

/// Like [`nearest_point`] for a family that is merely independent; the
/// coefficients refer to the original family.
pub fn nearest_point_normalizing(
    pres: &SubfieldPresentation,
    b: &Series,
    family: &[Series],
    prec: &Precision,
) -> Result<NearestPointResult, SpaceError> {
    let normal = normalize(pres, family, prec).map_err(|e| match e {
        SpaceError::NotIndependent(_) | SpaceError::Inconclusive(_) => {
            SpaceError::UncertifiedSubspace
        }
        e => e,
    })?;
    let mut r = nearest_point(pres, b, &normal.elements, prec)?;
    let back = |cs: &mut Vec<Scalar>| {
        for (c, s) in cs.iter_mut().zip(&normal.scalings) {
            *c = c.mul(s);
        }
    };
    back(&mut r.coefficients);
    if let Achieved::Unbounded(steps) = &mut r.achieved {
        for s in steps.iter_mut() {
            back(&mut s.coefficients);
        }
    }
    Ok(r)
}

struct ClassInfo {
    members: Vec<usize>,
    value: GroupElement,
    /// Coordinates over `Kv` of the member residues relative to the
    /// representative, and the representative's leading coefficient.
    rep_coefficient: FieldElement,
    residues: Vec<FieldElement>,
}

struct Reduction<'a> {
    pres: &'a SubfieldPresentation,
    ambient: Ambient,
    b: &'a Series,
    w: &'a [Series],
    prec: &'a Precision,
    classes: Vec<ClassInfo>,
    /// Expansions of the basis members deep enough for every shift used.
    w_terms: Vec<Vec<Term>>,
    w_known: Vec<Known>,
    /// Accumulated coefficients, as finite term lists in `K`.
    coeffs: Vec<Vec<Term>>,
}

impl<'a> Reduction<'a> {
    fn new(
        pres: &'a SubfieldPresentation,
        b: &'a Series,
        w: &'a [Series],
        prec: &'a Precision,
    ) -> Result<Self, SpaceError> {
        let ambient = *pres.ambient();
        let leads = match leading_terms(w, prec)? {
            Ok(l) => l,
            Err(_) => return Err(SpaceError::UncertifiedSubspace),
        };
        let classes = classify(pres, &leads)?
            .into_iter()
            .map(|c| {
                let rep = &leads[c.rep()];
                let residues = c
                    .members
                    .iter()
                    .map(|&i| leads[i].coefficient.try_div(&rep.coefficient))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(ClassInfo {
                    members: c.members.clone(),
                    value: rep.value.clone(),
                    rep_coefficient: rep.coefficient.clone(),
                    residues,
                })
            })
            .collect::<Result<Vec<_>, SpaceError>>()?;
        // Shifts are at least v(b) − v(w_j); expand each w_j that deep.
        let vb = b.valuation(prec).value().cloned();
        let mut w_terms = Vec::new();
        let mut w_known = Vec::new();
        for (j, wj) in w.iter().enumerate() {
            let depth = match &vb {
                Some(vb) => &(&prec.ceiling - vb) + &leads[j].value,
                None => leads[j].value.clone(),
            };
            let e = wj.expand(&depth);
            w_terms.push(e.terms);
            w_known.push(e.known);
        }
        Ok(Reduction {
            pres,
            ambient,
            b,
            w,
            prec,
            classes,
            w_terms,
            w_known,
            coeffs: vec![Vec::new(); w.len()],
        })
    }

    fn scalars(&self) -> Vec<Scalar> {
        self.coeffs
            .iter()
            .map(|c| Scalar::polynomial(self.ambient, c.clone()).expect("coefficients in ambient"))
            .collect()
    }

    fn combination(&self, coeffs: &[Scalar]) -> Series {
        Series::sum(
            self.ambient,
            self.w
                .iter()
                .zip(coeffs)
                .map(|(w, c)| w.mul_scalar(c))
                .collect(),
        )
    }

    /// Solves `τ = Σ k_j ρ_j` with `k_j ∈ Kv` inside one class.
    fn solve_class(
        &self,
        class: &ClassInfo,
        tau: &FieldElement,
    ) -> Result<Option<Vec<FieldElement>>, SpaceError> {
        let mut all = class.residues.clone();
        all.push(tau.clone());
        let coords = coordinates_over(&self.pres.residue_subfield(), &all)?;
        let (target, basis) = coords.split_last().expect("tau was pushed");
        let Some(sol) = solve_in_span(&self.pres.residue_subfield(), target, basis)? else {
            return Ok(None);
        };
        Ok(Some(
            sol.into_iter()
                .map(|k| k.embed(&self.ambient.field))
                .collect::<Result<_, _>>()?,
        ))
    }

    fn run(mut self) -> Result<NearestPointResult, SpaceError> {
        let start = self.b.expand(&self.prec.ceiling);
        let mut r = start.terms;
        let mut known = start.known;
        let mut trace: Vec<GroupElement> = Vec::new();
        let mut snapshots: Vec<EvidenceStep> = Vec::new();
        let vk = self.pres.value_subgroup().clone();
        for _ in 0..MAX_REDUCTION_STEPS {
            let Some(lead) = r.first().cloned() else {
                return self.finish_zero(known, trace, snapshots);
            };
            let gamma = lead.exponent.clone();
            trace.push(gamma.clone());
            if snapshots.len() < self.prec.max_terms {
                snapshots.push(EvidenceStep {
                    value: gamma.clone(),
                    coefficients: self.scalars(),
                });
            }
            let mut matched = None;
            for (ci, class) in self.classes.iter().enumerate() {
                if vk.coset_equal(&gamma, &class.value)? {
                    matched = Some(ci);
                    break;
                }
            }
            let Some(ci) = matched else {
                return Ok(self.finish_value(gamma, trace));
            };
            let class = &self.classes[ci];
            let tau = lead.coefficient.try_div(&class.rep_coefficient)?;
            let Some(ks) = self.solve_class(class, &tau)? else {
                return Ok(self.finish_value(gamma, trace));
            };
            let shift = &gamma - &class.value;
            let members = class.members.clone();
            for (k, j) in ks.into_iter().zip(members) {
                if k.is_zero() {
                    continue;
                }
                let sub: Vec<Term> = self.w_terms[j]
                    .iter()
                    .map(|t| {
                        Term::new(
                            &t.exponent + &shift,
                            t.coefficient.try_mul(&k).expect("same field").neg(),
                        )
                    })
                    .filter(|t| t.exponent < self.prec.ceiling)
                    .collect();
                if let Known::Below(kw) = &self.w_known[j] {
                    let kw = kw + &shift;
                    known = match known {
                        Known::Below(k0) => Known::Below(k0.min(kw)),
                        Known::All => Known::Below(kw),
                    };
                }
                r = add_terms(&r, &sub);
                self.coeffs[j] = add_terms(&self.coeffs[j], &[Term::new(shift.clone(), k)]);
            }
            if let Known::Below(k0) = &known {
                let n = r.partition_point(|t| t.exponent < *k0);
                r.truncate(n);
            }
        }
        // Step cap: treated like a chain that reaches the ceiling.
        let bound = trace
            .last()
            .cloned()
            .unwrap_or_else(|| self.prec.ceiling.clone());
        self.finish_open(Known::Below(bound), trace, snapshots)
    }

    fn finish_value(&self, gamma: GroupElement, trace: Vec<GroupElement>) -> NearestPointResult {
        let coefficients = self.scalars();
        NearestPointResult {
            best: self.combination(&coefficients),
            coefficients,
            achieved: Achieved::Value(gamma),
            trace,
        }
    }

    fn finish_zero(
        &self,
        known: Known,
        trace: Vec<GroupElement>,
        snapshots: Vec<EvidenceStep>,
    ) -> Result<NearestPointResult, SpaceError> {
        if known == Known::All {
            let coefficients = self.scalars();
            return Ok(NearestPointResult {
                best: self.combination(&coefficients),
                coefficients,
                achieved: Achieved::ExactMember { certified: true },
                trace,
            });
        }
        self.finish_open(known, trace, snapshots)
    }

    /// The residual vanishes below `known` but is not provably zero.
    fn finish_open(
        &self,
        known: Known,
        trace: Vec<GroupElement>,
        snapshots: Vec<EvidenceStep>,
    ) -> Result<NearestPointResult, SpaceError> {
        let bound = known
            .bound()
            .cloned()
            .unwrap_or_else(|| self.prec.ceiling.clone());
        match self.pres.kind() {
            PresentationKind::Completion => {
                let coefficients = self.scalars();
                return Ok(NearestPointResult {
                    best: self.combination(&coefficients),
                    coefficients,
                    achieved: Achieved::ExactMember { certified: false },
                    trace,
                });
            }
            PresentationKind::RationalFunctions => {
                if let Some(found) = self.recognize(&bound)? {
                    return Ok(found.with_trace(trace));
                }
            }
            PresentationKind::Trivial => {}
        }
        let coefficients = self.scalars();
        let achieved = if snapshots.len() >= self.prec.max_terms
            && self.pres.kind() != PresentationKind::Trivial
        {
            Achieved::Unbounded(snapshots)
        } else {
            Achieved::PrecisionExhausted(bound)
        };
        Ok(NearestPointResult {
            best: self.combination(&coefficients),
            coefficients,
            achieved,
            trace,
        })
    }

    /// Looks for rational coefficients `C_j ∈ K` whose expansions agree with
    /// the accumulated truncations and that reproduce `b` exactly below the
    /// ceiling.
    fn recognize(&self, bound: &GroupElement) -> Result<Option<NearestPointResult>, SpaceError> {
        let g = self.pres.generator().expect("valued presentation").clone();
        let mut found = Vec::with_capacity(self.w.len());
        let leads = match leading_terms(self.w, self.prec)? {
            Ok(l) => l,
            Err(_) => return Ok(None),
        };
        for (j, terms) in self.coeffs.iter().enumerate() {
            let Some(first) = terms.first() else {
                found.push(Scalar::zero(self.ambient));
                continue;
            };
            let k0 = self
                .pres
                .generator_index(&first.exponent)
                .expect("shifts lie in vK");
            // Positions k with k·g + v(w_j) < bound are determined.
            let mut seq: Vec<FieldElement> = Vec::new();
            let mut k = k0.clone();
            loop {
                let e = &g.times(&k) + &leads[j].value;
                if e >= *bound || seq.len() > 4 * MAX_REDUCTION_STEPS {
                    break;
                }
                let exp = g.times(&k);
                let c = terms
                    .binary_search_by(|t| t.exponent.cmp(&exp))
                    .map(|i| terms[i].coefficient.clone())
                    .unwrap_or_else(|_| self.ambient.field.zero());
                seq.push(c);
                k += 1;
            }
            let Some(s) = rational_from_sequence(self.ambient, &g, &k0, &seq) else {
                return Ok(None);
            };
            found.push(s);
        }
        let best = self.combination(&found);
        let residual = self.b - &best;
        let e = residual.expand(&self.prec.ceiling);
        if !e.terms.is_empty() {
            return Ok(None);
        }
        Ok(Some(NearestPointResult {
            best,
            coefficients: found,
            achieved: Achieved::ExactMember {
                certified: e.is_exact_zero(),
            },
            trace: Vec::new(),
        }))
    }
}

impl NearestPointResult {
    fn with_trace(mut self, trace: Vec<GroupElement>) -> Self {
        self.trace = trace;
        self
    }
}

fn add_terms(a: &[Term], b: &[Term]) -> Vec<Term> {
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    all.sort_by(|x, y| x.exponent.cmp(&y.exponent));
    let mut out: Vec<Term> = Vec::with_capacity(all.len());
    for t in all {
        match out.last_mut() {
            Some(l) if l.exponent == t.exponent => {
                l.coefficient = l.coefficient.try_add(&t.coefficient).expect("same field");
            }
            _ => out.push(t),
        }
        if out.last().is_some_and(|l| l.coefficient.is_zero()) {
            out.pop();
        }
    }
    out
}

/// Shortest linear recurrence of a sequence (Berlekamp–Massey); returns the
/// connection polynomial `Λ` with `Λ_0 = 1` and its order `L`.
pub fn berlekamp_massey(
    seq: &[FieldElement],
    zero: &FieldElement,
    one: &FieldElement,
) -> (Vec<FieldElement>, usize) {
    let mut c = vec![one.clone()];
    let mut b = vec![one.clone()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bb = one.clone();
    for n in 0..seq.len() {
        let mut d = seq[n].clone();
        for i in 1..=l {
            if i < c.len() {
                d = d
                    .try_add(&c[i].try_mul(&seq[n - i]).expect("same field"))
                    .expect("same field");
            }
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = d.try_div(&bb).expect("nonzero discrepancy base");
        let t = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, zero.clone());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] = c[i + m]
                .try_sub(&coef.try_mul(bi).expect("same field"))
                .expect("same field");
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = t;
            bb = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.truncate(l + 1);
    c.resize(l + 1, zero.clone());
    (c, l)
}

/// `t^{k0·g} P(t^g)/Λ(t^g)` when the sequence satisfies a short recurrence.
fn rational_from_sequence(
    ambient: Ambient,
    g: &GroupElement,
    k0: &BigInt,
    seq: &[FieldElement],
) -> Option<Scalar> {
    let zero = ambient.field.zero();
    let one = ambient.field.one();
    let (lambda, l) = berlekamp_massey(seq, &zero, &one);
    if seq.len() < 2 * l + RECOGNITION_MARGIN {
        return None;
    }
    // P = (S·Λ) mod z^L.
    let mut p = vec![zero.clone(); l];
    for (n, slot) in p.iter_mut().enumerate() {
        for i in 0..=n.min(l) {
            *slot = slot.try_add(&lambda[i].try_mul(&seq[n - i]).ok()?).ok()?;
        }
    }
    let base = g.times(k0);
    let power = |i: usize| g.times(&BigInt::from(i));
    let num: Vec<Term> = if l == 0 {
        // Identically zero sequence.
        Vec::new()
    } else {
        p.into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| Term::new(&power(i) + &base, c))
            .collect()
    };
    let den: Vec<Term> = lambda
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| Term::new(power(i), c))
        .collect();
    let _ = k0.to_i64()?;
    Scalar::ratio(ambient, num, den).ok()
}

/// Stage-wise nearest points against the growing families `stage(1)`,
/// `stage(2)`, …, `stage(max_terms)`.
#[derive(Debug, Clone)]
pub struct StreamResult {
    pub stages: Vec<NearestPointResult>,
    pub achieved: Achieved,
}

pub fn nearest_point_stream<F>(
    pres: &SubfieldPresentation,
    b: &Series,
    stage: F,
    prec: &Precision,
) -> Result<StreamResult, SpaceError>
where
    F: Fn(usize) -> Vec<Series>,
{
    let mut stages = Vec::new();
    let mut evidence = Vec::new();
    for n in 1..=prec.max_terms {
        let family = stage(n);
        let r = nearest_point_normalizing(pres, b, &family, prec)?;
        match &r.achieved {
            Achieved::Value(g) => {
                if evidence
                    .last()
                    .is_some_and(|e: &EvidenceStep| e.value >= *g)
                {
                    let achieved = r.achieved.clone();
                    stages.push(r);
                    return Ok(StreamResult { stages, achieved });
                }
                evidence.push(EvidenceStep {
                    value: g.clone(),
                    coefficients: r.coefficients.clone(),
                });
                stages.push(r);
            }
            _ => {
                let achieved = r.achieved.clone();
                stages.push(r);
                return Ok(StreamResult { stages, achieved });
            }
        }
    }
    Ok(StreamResult {
        stages,
        achieved: Achieved::Unbounded(evidence),
    })
}

#[derive(Debug, Clone)]
pub enum ImmediacyEvidence {
    /// `v(probe − a)` is maximal at `value` for `a ∈ K`.
    NotImmediateWitness {
        a: Scalar,
        value: GroupElement,
    },
    /// Strictly increasing values `v(probe − a_k)`, `a_k ∈ K`.
    ImmediateEvidence(Vec<EvidenceStep>),
    Inconclusive {
        bound: GroupElement,
    },
}

/// Probes whether `v(probe − K)` has a maximum.
pub fn immediacy_evidence(
    pres: &SubfieldPresentation,
    probe: &Series,
    prec: &Precision,
) -> Result<ImmediacyEvidence, SpaceError> {
    let r = nearest_point(pres, probe, &[pres.one()], prec)?;
    match r.achieved {
        Achieved::Value(value) => Ok(ImmediacyEvidence::NotImmediateWitness {
            a: r.coefficients.into_iter().next().expect("one coefficient"),
            value,
        }),
        Achieved::Unbounded(e) => Ok(ImmediacyEvidence::ImmediateEvidence(e)),
        Achieved::ExactMember { .. } => Err(SpaceError::ProbeInK),
        Achieved::PrecisionExhausted(bound) => Ok(ImmediacyEvidence::Inconclusive { bound }),
    }
}
