//! Finite-extension diagnostics: dimension, ramification index, residue
//! degree, standard bases and approximation of completion bases.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::field::{coordinates_over, linear_rank};
use crate::group::{GroupElement, Index};
use crate::series::{Precision, Scalar, Series, Valuation};
use crate::spaces::{
    check_normalized, is_valuation_independent, nearest_point, Achieved, Adjoined,
    IndependenceVerdict, NearestPointResult, NormalizationCheck, Orthogonalizer, SpaceError,
    SubfieldPresentation,
};

/// Default bound on the total degree of generator monomials.
pub const DEFAULT_DEGREE_CAP: usize = 16;

#[derive(Debug, Clone)]
pub enum SpanClosure {
    /// Normalized basis of the ring generated over `K`; `monomials[i]` are
    /// the exponent vectors adjoined, in order.
    Basis {
        basis: Vec<Series>,
        monomials: Vec<Vec<u32>>,
    },
    /// `coordinates` expresses `partial` over the monomials in `pushed`.
    Obstruction {
        monomial: Vec<u32>,
        result: NearestPointResult,
        partial: Vec<Series>,
        pushed: Vec<Vec<u32>>,
        coordinates: Vec<Vec<Scalar>>,
    },
    /// Monomials of every degree up to the cap kept enlarging the span.
    Inconclusive { partial: Vec<Series> },
}

/// Exponent vectors of total degree `d` in `n` variables, lexicographically
/// descending.
fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials_of_degree(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `Π g_i^{e_i}`.
pub fn monomial(pres: &SubfieldPresentation, generators: &[Series], exps: &[u32]) -> Series {
    let mut m = pres.one();
    for (g, &e) in generators.iter().zip(exps) {
        if e > 0 {
            m = &m * &g.pow(e);
        }
    }
    m
}

/// Orthogonalizes `1`, then the generator monomials degree by degree, until a
/// whole degree lies in the span.
pub fn span_closure_basis(
    pres: &SubfieldPresentation,
    generators: &[Series],
    prec: &Precision,
    degree_cap: usize,
) -> Result<SpanClosure, SpaceError> {
    let mut o = Orthogonalizer::new(pres, prec);
    let mut monomials = Vec::new();
    let mut pushed = Vec::new();
    for d in 0..=degree_cap as u32 {
        let mut grew = false;
        for exps in monomials_of_degree(generators.len(), d) {
            let outcome = o.push(&monomial(pres, generators, &exps))?;
            match outcome {
                Adjoined::New(_) => {
                    grew = true;
                    monomials.push(exps.clone());
                }
                Adjoined::InSpan { .. } => {}
                Adjoined::Obstructed(result) => {
                    let n = pushed.len();
                    return Ok(SpanClosure::Obstruction {
                        monomial: exps,
                        result,
                        partial: o.basis().to_vec(),
                        pushed,
                        coordinates: o
                            .coordinates()
                            .iter()
                            .map(|row| row[..n].to_vec())
                            .collect(),
                    });
                }
            }
            pushed.push(exps);
        }
        if !grew && d > 0 {
            return Ok(SpanClosure::Basis {
                basis: o.basis().to_vec(),
                monomials,
            });
        }
    }
    Ok(SpanClosure::Inconclusive {
        partial: o.basis().to_vec(),
    })
}

#[derive(Debug, Clone)]
pub struct RamificationResidue {
    /// `(vK + v(B) : vK)`.
    pub e: Index,
    pub f: usize,
    /// One member per value coset.
    pub x: Vec<Series>,
    /// Members whose value lies in `vK`; their residues are `Kv`-independent.
    pub y: Vec<Series>,
}

fn require_normalized(
    pres: &SubfieldPresentation,
    b: &[Series],
    prec: &Precision,
) -> Result<(), SpaceError> {
    match check_normalized(pres, b, prec)? {
        NormalizationCheck::Pass => Ok(()),
        NormalizationCheck::Fail { condition, members } => {
            Err(SpaceError::NotNormalized(condition, members))
        }
        NormalizationCheck::Inconclusive { bound } => Err(SpaceError::Inconclusive(bound)),
    }
}

fn values(b: &[Series], prec: &Precision) -> Result<Vec<GroupElement>, SpaceError> {
    b.iter()
        .map(|s| match s.valuation(prec) {
            Valuation::Value(v) => Ok(v),
            Valuation::ZeroUpTo(bound) => Err(SpaceError::Inconclusive(bound)),
        })
        .collect()
}

pub fn ramification_and_residue(
    pres: &SubfieldPresentation,
    b: &[Series],
    prec: &Precision,
) -> Result<RamificationResidue, SpaceError> {
    require_normalized(pres, b, prec)?;
    let vals = values(b, prec)?;
    let vk = pres.value_subgroup();
    let mut x: Vec<Series> = Vec::new();
    let mut reps: Vec<GroupElement> = Vec::new();
    let mut y = Vec::new();
    for (s, v) in b.iter().zip(&vals) {
        if vk.contains(v)? {
            y.push(s.clone());
        }
        let mut seen = false;
        for r in &reps {
            if vk.coset_equal(r, v)? {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push(v.clone());
            x.push(s.clone());
        }
    }
    // Residues of the vK-class are Kv-independent by N2; recheck directly.
    let residues = y
        .iter()
        .map(|s| s.residue(prec))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = coordinates_over(&pres.residue_subfield(), &residues)?;
    let f = linear_rank(&pres.residue_subfield(), &rows)?.rank;
    let e = vk.index_in(&vk.join(&reps)?)?;
    Ok(RamificationResidue { e, f, x, y })
}

#[derive(Debug, Clone)]
pub struct StandardBasis {
    pub x: Vec<Series>,
    pub y: Vec<Series>,
    /// `x·y` for `x ∈ X`, `y ∈ Y`, row-major in `X`.
    pub products: Vec<Series>,
    pub certificate: IndependenceVerdict,
}

/// Extracts `X` and `Y` from a normalized basis and certifies `{x·y}`; every
/// product must stay in the span.
pub fn standard_basis(
    pres: &SubfieldPresentation,
    b: &[Series],
    prec: &Precision,
) -> Result<StandardBasis, SpaceError> {
    let rr = ramification_and_residue(pres, b, prec)?;
    let mut products = Vec::new();
    for xi in &rr.x {
        for yj in &rr.y {
            let p = xi * yj;
            let r = nearest_point(pres, &p, b, prec)?;
            if !matches!(r.achieved, Achieved::ExactMember { .. }) {
                return Err(SpaceError::NotFieldClosed(format!(
                    "product {} leaves the span",
                    p.display_below(&prec.ceiling, prec.max_terms)
                )));
            }
            products.push(p);
        }
    }
    if products.len() != b.len() {
        return Err(SpaceError::NotFieldClosed(format!(
            "{} products for a basis of size {}",
            products.len(),
            b.len()
        )));
    }
    let certificate = is_valuation_independent(pres, &products, prec)?;
    Ok(StandardBasis {
        x: rr.x,
        y: rr.y,
        products,
        certificate,
    })
}

#[derive(Debug, Clone)]
pub enum ExtensionVerdict {
    VsDefectless,
    /// `n > e·f`, or a nearest point without a witnessed maximum.
    Obstructed(Vec<GroupElement>),
    Inconclusive(String),
}

impl fmt::Display for ExtensionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionVerdict::VsDefectless => write!(f, "vs-defectless"),
            ExtensionVerdict::Obstructed(e) if e.is_empty() => write!(f, "obstructed"),
            ExtensionVerdict::Obstructed(e) => {
                let v: Vec<String> = e.iter().map(|g| g.to_string()).collect();
                write!(f, "obstructed, evidence [{}]", v.join(", "))
            }
            ExtensionVerdict::Inconclusive(why) => write!(f, "inconclusive: {why}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExtensionReport {
    pub n: Option<usize>,
    pub e: Option<Index>,
    pub f: Option<usize>,
    /// `n/(e·f)` when all three are known and `e` is finite.
    pub defect_index: Option<BigRational>,
    pub verdict: ExtensionVerdict,
    pub basis: Vec<Series>,
}

impl ExtensionReport {
    /// Reads `n`, `e` and `f` off a normalized basis.
    pub fn from_basis(
        pres: &SubfieldPresentation,
        basis: Vec<Series>,
        prec: &Precision,
    ) -> Result<Self, SpaceError> {
        let rr = ramification_and_residue(pres, &basis, prec)?;
        let n = basis.len();
        let (defect_index, verdict) = match &rr.e {
            Index::Finite(e) => {
                let ef = e * BigInt::from(rr.f);
                let d = BigRational::new(BigInt::from(n), ef.clone());
                let verdict = if d.is_one() {
                    ExtensionVerdict::VsDefectless
                } else {
                    ExtensionVerdict::Obstructed(Vec::new())
                };
                (Some(d), verdict)
            }
            Index::Infinite => (None, ExtensionVerdict::Obstructed(Vec::new())),
        };
        Ok(ExtensionReport {
            n: Some(n),
            e: Some(rr.e),
            f: Some(rr.f),
            defect_index,
            verdict,
            basis,
        })
    }
}

/// Evidence values carried by a failed nearest point.
fn evidence_values(r: &NearestPointResult) -> Vec<GroupElement> {
    match &r.achieved {
        Achieved::Unbounded(steps) => steps.iter().map(|s| s.value.clone()).collect(),
        _ => r.trace.clone(),
    }
}

/// Analyzes `K(generators)` through its span closure.
pub fn analyze_extension(
    pres: &SubfieldPresentation,
    generators: &[Series],
    prec: &Precision,
    degree_cap: usize,
) -> Result<ExtensionReport, SpaceError> {
    match span_closure_basis(pres, generators, prec, degree_cap)? {
        SpanClosure::Basis { basis, .. } => ExtensionReport::from_basis(pres, basis, prec),
        SpanClosure::Obstruction {
            result, partial, ..
        } => Ok(ExtensionReport {
            n: None,
            e: None,
            f: None,
            defect_index: None,
            verdict: ExtensionVerdict::Obstructed(evidence_values(&result)),
            basis: partial,
        }),
        SpanClosure::Inconclusive { partial } => Ok(ExtensionReport {
            n: None,
            e: None,
            f: None,
            defect_index: None,
            verdict: ExtensionVerdict::Inconclusive(format!(
                "span still growing at degree {degree_cap} (dimension {} so far)",
                partial.len()
            )),
            basis: partial,
        }),
    }
}

/// Analyzes the span of an explicit family, without closing it under
/// multiplication.
pub fn analyze_space(
    pres: &SubfieldPresentation,
    family: &[Series],
    prec: &Precision,
) -> Result<ExtensionReport, SpaceError> {
    let mut o = Orthogonalizer::new(pres, prec);
    for g in family {
        if let Adjoined::Obstructed(result) = o.push(g)? {
            return Ok(ExtensionReport {
                n: None,
                e: None,
                f: None,
                defect_index: None,
                verdict: ExtensionVerdict::Obstructed(evidence_values(&result)),
                basis: o.basis().to_vec(),
            });
        }
    }
    ExtensionReport::from_basis(pres, o.basis().to_vec(), prec)
}

#[derive(Debug, Clone)]
pub struct Approximation {
    /// `b*_i = Σ_j c^α_ij u_j`.
    pub elements: Vec<Series>,
    /// The truncations `c^α_ij ∈ K`.
    pub coefficients: Vec<Vec<Scalar>>,
    /// Truncation bounds: `c^α_ij` keeps the terms of `c_ij` below them.
    pub bounds: Vec<Vec<GroupElement>>,
    /// `v(b'_i)` for the completion-side family.
    pub target_values: Vec<GroupElement>,
    pub certificate: IndependenceVerdict,
}

/// Smallest `k·g` strictly above `x`.
fn next_multiple_above(g: &GroupElement, x: &GroupElement) -> Option<GroupElement> {
    let gi = g.coords();
    let xi = x.coords();
    // Only rank-one value groups reach here, where g has one nonzero entry.
    let lead = g.leading_index()?;
    let q = (&xi[lead] / &gi[lead]).floor().to_integer();
    let mut k = q;
    loop {
        let c = g.times(&k);
        if c > *x {
            return Some(c);
        }
        k += 1;
        k.to_i64()?;
    }
}

/// Replaces completion coefficients `c_ij` by truncations in `K` so that
/// `v((c^α_ij − c_ij) u_j) > v(b'_i)` for all `i, j`.
pub fn complete_and_approximate(
    pres: &SubfieldPresentation,
    u: &[Series],
    c: &[Vec<Series>],
    prec: &Precision,
) -> Result<Approximation, SpaceError> {
    let ambient = *pres.ambient();
    let g = match pres.generator() {
        Some(g) if pres.value_subgroup().is_cofinal_in_ambient() => g.clone(),
        _ => return Err(SpaceError::NotCofinal),
    };
    let completion = SubfieldPresentation::completion(ambient, pres.residue_subfield(), g.clone())?;
    let b_prime: Vec<Series> = c
        .iter()
        .map(|row| {
            Series::sum(
                ambient,
                row.iter().zip(u).map(|(cij, uj)| cij * uj).collect(),
            )
        })
        .collect();
    if !is_valuation_independent(&completion, &b_prime, prec)?.is_independent() {
        return Err(SpaceError::UncertifiedSubspace);
    }
    let target_values = values(&b_prime, prec)?;
    let u_values = values(u, prec)?;
    let mut elements = Vec::new();
    let mut coefficients = Vec::new();
    let mut bounds = Vec::new();
    for (row, vb) in c.iter().zip(&target_values) {
        let mut crow = Vec::new();
        let mut brow = Vec::new();
        let mut parts = Vec::new();
        for ((cij, uj), vu) in row.iter().zip(u).zip(&u_values) {
            let bound = next_multiple_above(&g, &(vb - vu))
                .ok_or(SpaceError::PrecisionExhausted(vb.clone()))?;
            let trunc = Scalar::polynomial(ambient, cij.terms_below(&bound))?;
            if !pres.contains_scalar(&trunc)? {
                return Err(SpaceError::InvalidPresentation(format!(
                    "coefficient truncation {trunc} is not in the base field"
                )));
            }
            // The perturbation inequality on the discarded tail.
            let tail = cij - &trunc.to_series();
            let ok = match tail.valuation(prec) {
                Valuation::Value(v) => &v + vu > *vb,
                Valuation::ZeroUpTo(z) => &z + vu > *vb,
            };
            if !ok {
                return Err(SpaceError::PrecisionExhausted(prec.ceiling.clone()));
            }
            parts.push(uj.mul_scalar(&trunc));
            crow.push(trunc);
            brow.push(bound);
        }
        elements.push(Series::sum(ambient, parts));
        coefficients.push(crow);
        bounds.push(brow);
    }
    let certificate = is_valuation_independent(pres, &elements, prec)?;
    Ok(Approximation {
        elements,
        coefficients,
        bounds,
        target_values,
        certificate,
    })
}
