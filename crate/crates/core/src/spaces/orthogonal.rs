//! Ultrametric orthogonalization, basis exchange and relative bases.

use crate::group::GroupElement;
use crate::series::{Precision, Scalar, Series};

use super::independence::{
    is_valuation_independent, is_valuation_independent_over, normalize, IndependenceVerdict,
};
use super::nearest::{nearest_point, nearest_point_normalizing, Achieved, NearestPointResult};
use super::{SpaceError, SubfieldPresentation};

#[derive(Debug, Clone)]
pub enum Orthogonalized {
    /// A normalized valuation basis of the span. `coordinates[i][j]` is the
    /// coefficient of generator `j` in `basis[i]`; `skipped` lists the
    /// 0-based generators that already lay in the span.
    Basis {
        basis: Vec<Series>,
        coordinates: Vec<Vec<Scalar>>,
        skipped: Vec<usize>,
    },
    /// The nearest point against the span of the earlier generators has no
    /// witnessed maximum; `index` is 1-based. `coordinates` expresses
    /// `partial` over the generators before `index`.
    Obstruction {
        index: usize,
        result: NearestPointResult,
        partial: Vec<Series>,
        coordinates: Vec<Vec<Scalar>>,
    },
}

impl Orthogonalized {
    pub fn basis(&self) -> Option<&[Series]> {
        match self {
            Orthogonalized::Basis { basis, .. } => Some(basis),
            Orthogonalized::Obstruction { .. } => None,
        }
    }
}

/// Outcome of adjoining one generator to an [`Orthogonalizer`].
#[derive(Debug, Clone)]
pub enum Adjoined {
    /// The residual was added; its value.
    New(GroupElement),
    /// The generator already lies in the span.
    InSpan { certified: bool },
    /// No maximum of `v(g − span)` was witnessed.
    Obstructed(NearestPointResult),
}

/// Incremental ultrametric Gram–Schmidt over a fixed presentation.
#[derive(Debug, Clone)]
pub struct Orthogonalizer<'a> {
    pres: &'a SubfieldPresentation,
    prec: &'a Precision,
    basis: Vec<Series>,
    /// `coordinates[i][j]`: coefficient of pushed generator `j` in `basis[i]`.
    coordinates: Vec<Vec<Scalar>>,
    pushed: usize,
}

impl<'a> Orthogonalizer<'a> {
    pub fn new(pres: &'a SubfieldPresentation, prec: &'a Precision) -> Self {
        Orthogonalizer {
            pres,
            prec,
            basis: Vec::new(),
            coordinates: Vec::new(),
            pushed: 0,
        }
    }

    pub fn basis(&self) -> &[Series] {
        &self.basis
    }

    pub fn coordinates(&self) -> &[Vec<Scalar>] {
        &self.coordinates
    }

    pub fn push(&mut self, g: &Series) -> Result<Adjoined, SpaceError> {
        let ambient = *self.pres.ambient();
        let r = nearest_point(self.pres, g, &self.basis, self.prec)?;
        let j = self.pushed;
        self.pushed += 1;
        for row in self.coordinates.iter_mut() {
            row.push(Scalar::zero(ambient));
        }
        match r.achieved {
            Achieved::Value(v) => {
                let residual = g - &r.best;
                let mut coords = vec![Scalar::zero(ambient); self.pushed];
                coords[j] = Scalar::one(ambient);
                for (c, row) in r.coefficients.iter().zip(&self.coordinates) {
                    for (slot, x) in coords.iter_mut().zip(row) {
                        *slot = slot.sub(&c.mul(x));
                    }
                }
                self.basis.push(residual);
                self.coordinates.push(coords);
                let normal = normalize(self.pres, &self.basis, self.prec)?;
                for (row, s) in self.coordinates.iter_mut().zip(&normal.scalings) {
                    for x in row.iter_mut() {
                        *x = x.mul(s);
                    }
                }
                self.basis = normal.elements;
                Ok(Adjoined::New(v))
            }
            Achieved::ExactMember { certified } => Ok(Adjoined::InSpan { certified }),
            Achieved::Unbounded(_) | Achieved::PrecisionExhausted(_) => Ok(Adjoined::Obstructed(r)),
        }
    }
}

pub fn orthogonalize(
    pres: &SubfieldPresentation,
    generators: &[Series],
    prec: &Precision,
) -> Result<Orthogonalized, SpaceError> {
    let mut o = Orthogonalizer::new(pres, prec);
    let mut skipped = Vec::new();
    for (j, g) in generators.iter().enumerate() {
        match o.push(g)? {
            Adjoined::New(_) => {}
            Adjoined::InSpan { .. } => skipped.push(j),
            Adjoined::Obstructed(result) => {
                return Ok(Orthogonalized::Obstruction {
                    index: j + 1,
                    result,
                    partial: o.basis,
                    coordinates: o.coordinates.iter().map(|row| row[..j].to_vec()).collect(),
                });
            }
        }
    }
    Ok(Orthogonalized::Basis {
        basis: o.basis,
        coordinates: o.coordinates,
        skipped,
    })
}

#[derive(Debug, Clone)]
pub struct ExchangeResult {
    /// 0-based index of the removed member of `B`.
    pub removed: usize,
    /// The `W`-part `a` of `x`, and its coefficients over `W`.
    pub a: Series,
    pub a_coefficients: Vec<Scalar>,
    /// Coefficients of `x` over `B`.
    pub b_coefficients: Vec<Scalar>,
    /// `B` without the removed member.
    pub remaining: Vec<Series>,
    /// `x − a`, which spans the same space as `x` modulo `W`.
    pub reduced: Series,
    /// Verdict for `remaining` over `W ⊕ Span(x)`.
    pub certificate: IndependenceVerdict,
}

/// Replaces one member of a valuation basis `B` of `V` over `W` by `x`.
pub fn basis_exchange(
    pres: &SubfieldPresentation,
    b: &[Series],
    w: &[Series],
    x: &Series,
    prec: &Precision,
) -> Result<ExchangeResult, SpaceError> {
    let ambient = *pres.ambient();
    let family: Vec<Series> = b.iter().chain(w).cloned().collect();
    let r = nearest_point_normalizing(pres, x, &family, prec)?;
    if !matches!(r.achieved, Achieved::ExactMember { .. }) {
        return Err(SpaceError::NotInSpan);
    }
    let (b_coefficients, a_coefficients) = r.coefficients.split_at(b.len());
    let mut removed: Option<(usize, GroupElement)> = None;
    for (i, (d, bi)) in b_coefficients.iter().zip(b).enumerate() {
        let Some(vd) = d.valuation() else { continue };
        let vb = bi
            .valuation(prec)
            .value()
            .cloned()
            .ok_or(SpaceError::Inconclusive(prec.ceiling.clone()))?;
        let v = &vd + &vb;
        if removed.as_ref().is_none_or(|(_, m)| v < *m) {
            removed = Some((i, v));
        }
    }
    let Some((removed, _)) = removed else {
        return Err(SpaceError::InSubspace);
    };
    let a = Series::sum(
        ambient,
        w.iter()
            .zip(a_coefficients)
            .map(|(wj, c)| wj.mul_scalar(c))
            .collect(),
    );
    let reduced = x - &a;
    let remaining: Vec<Series> = b
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != removed)
        .map(|(_, s)| s.clone())
        .collect();
    let mut over: Vec<Series> = w.to_vec();
    over.push(reduced.clone());
    let certificate = is_valuation_independent_over(pres, &remaining, &over, prec)?;
    Ok(ExchangeResult {
        removed,
        a,
        a_coefficients: a_coefficients.to_vec(),
        b_coefficients: b_coefficients.to_vec(),
        remaining,
        reduced,
        certificate,
    })
}

#[derive(Debug, Clone)]
pub struct RelativeBasis {
    /// Basis of `W'` over `W`.
    pub a: Vec<Series>,
    /// 0-based indices into `B` of the members kept.
    pub kept: Vec<usize>,
    pub b_prime: Vec<Series>,
    /// Verdicts for `W ∪ A` and for `B' ∪ W ∪ A`.
    pub a_certificate: IndependenceVerdict,
    pub b_prime_certificate: IndependenceVerdict,
}

/// Splits a valuation basis `B` of `V` over `W` against an intermediate
/// space `W ⊆ W' ⊆ V` given by generators.
pub fn relative_basis(
    pres: &SubfieldPresentation,
    b: &[Series],
    w: &[Series],
    w_prime_generators: &[Series],
    prec: &Precision,
) -> Result<RelativeBasis, SpaceError> {
    let mut kept: Vec<usize> = (0..b.len()).collect();
    let mut a: Vec<Series> = Vec::new();
    for g in w_prime_generators {
        let current: Vec<Series> = kept.iter().map(|&i| b[i].clone()).collect();
        let ws: Vec<Series> = w.iter().chain(&a).cloned().collect();
        match basis_exchange(pres, &current, &ws, g, prec) {
            Ok(ex) => {
                kept.remove(ex.removed);
                a.push(ex.reduced);
            }
            Err(SpaceError::InSubspace) => {}
            Err(e) => return Err(e),
        }
    }
    let b_prime: Vec<Series> = kept.iter().map(|&i| b[i].clone()).collect();
    let w_a: Vec<Series> = w.iter().chain(&a).cloned().collect();
    let a_certificate = is_valuation_independent(pres, &w_a, prec)?;
    let all: Vec<Series> = b_prime.iter().chain(&w_a).cloned().collect();
    let b_prime_certificate = is_valuation_independent(pres, &all, prec)?;
    Ok(RelativeBasis {
        a,
        kept,
        b_prime,
        a_certificate,
        b_prime_certificate,
    })
}
