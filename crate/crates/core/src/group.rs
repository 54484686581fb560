//! Exact ordered abelian groups used as value groups.
//!
//! Three kinds are supported: the integer line `Z`, the rational line `Q`,
//! and `Z^n` with the lexicographic order (coordinate 0 most significant).
//! Finitely generated subgroups are handled through integer lattices: all
//! coordinates are scaled by a common denominator and reduced to an echelon
//! (Hermite-style) basis, which decides membership, coset equality, index and
//! cofinality exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group elements belong to different groups ({0} vs {1})")]
    MismatchedGroups(OrderedGroup, OrderedGroup),
    #[error("not a subgroup: generator {0} is not a member of the larger group")]
    NotASubgroup(GroupElement),
    #[error("invalid group element: {0}")]
    InvalidElement(String),
}

/// The kind of ordered group housing valuations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderedGroup {
    IntegerLine,
    RationalLine,
    /// `Z^rank` ordered lexicographically.
    LexProduct {
        rank: usize,
    },
}

impl OrderedGroup {
    pub fn rank(&self) -> usize {
        match self {
            OrderedGroup::IntegerLine | OrderedGroup::RationalLine => 1,
            OrderedGroup::LexProduct { rank } => *rank,
        }
    }

    /// Whether every coordinate must be an integer.
    pub fn is_integral(&self) -> bool {
        !matches!(self, OrderedGroup::RationalLine)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            group: *self,
            coords: vec![BigRational::zero(); self.rank()],
        }
    }

    /// The subgroup generated by the whole group, when it is finitely
    /// generated (`Q` is not).
    pub fn full_subgroup(&self) -> Option<Subgroup> {
        match self {
            OrderedGroup::RationalLine => None,
            _ => {
                let gens = (0..self.rank())
                    .map(|i| {
                        let mut c = vec![BigRational::zero(); self.rank()];
                        c[i] = BigRational::one();
                        GroupElement {
                            group: *self,
                            coords: c,
                        }
                    })
                    .collect();
                Some(Subgroup::new(*self, gens).expect("unit vectors are valid"))
            }
        }
    }
}

impl fmt::Display for OrderedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderedGroup::IntegerLine => write!(f, "Z"),
            OrderedGroup::RationalLine => write!(f, "Q"),
            OrderedGroup::LexProduct { rank } => write!(f, "Z^{rank}_lex"),
        }
    }
}

/// An element of an [`OrderedGroup`], stored as exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: OrderedGroup,
    coords: Vec<BigRational>,
}

impl GroupElement {
    pub fn new(group: OrderedGroup, coords: Vec<BigRational>) -> Result<Self, GroupError> {
        if coords.len() != group.rank() {
            return Err(GroupError::InvalidElement(format!(
                "{group} needs {} coordinate(s), got {}",
                group.rank(),
                coords.len()
            )));
        }
        if group.is_integral() && coords.iter().any(|c| !c.is_integer()) {
            return Err(GroupError::InvalidElement(format!(
                "{group} has integer coordinates only"
            )));
        }
        Ok(GroupElement { group, coords })
    }

    pub fn integer(n: i64) -> Self {
        GroupElement {
            group: OrderedGroup::IntegerLine,
            coords: vec![BigRational::from_integer(n.into())],
        }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        GroupElement {
            group: OrderedGroup::RationalLine,
            coords: vec![BigRational::new(num.into(), den.into())],
        }
    }

    pub fn lex(coords: &[i64]) -> Self {
        GroupElement {
            group: OrderedGroup::LexProduct { rank: coords.len() },
            coords: coords
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        }
    }

    /// Parses `"1/2"` style coordinates.
    pub fn parse(group: OrderedGroup, coords: &[&str]) -> Result<Self, GroupError> {
        let parsed = coords
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<BigRational>()
                    .map_err(|_| GroupError::InvalidElement(format!("bad rational {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(group, parsed)
    }

    pub fn group(&self) -> OrderedGroup {
        self.group
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// Coordinates as exact-rational strings, as used in reports.
    pub fn coordinate_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_positive(&self) -> bool {
        match self.coords.iter().find(|c| !c.is_zero()) {
            Some(c) => c.is_positive(),
            None => false,
        }
    }

    fn check_same(&self, other: &GroupElement) -> Result<(), GroupError> {
        if self.group != other.group {
            Err(GroupError::MismatchedGroups(self.group, other.group))
        } else {
            Ok(())
        }
    }

    pub fn compare(&self, other: &GroupElement) -> Result<Ordering, GroupError> {
        self.check_same(other)?;
        Ok(self.coords.cmp(&other.coords))
    }

    pub fn checked_add(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_same(other)?;
        Ok(GroupElement {
            group: self.group,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.checked_add(&other.negate())
    }

    pub fn negate(&self) -> GroupElement {
        GroupElement {
            group: self.group,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// `k·self` for an integer `k`.
    pub fn times(&self, k: &BigInt) -> GroupElement {
        let k = BigRational::from_integer(k.clone());
        GroupElement {
            group: self.group,
            coords: self.coords.iter().map(|c| c * &k).collect(),
        }
    }

    /// Index of the most significant nonzero coordinate.
    pub fn leading_index(&self) -> Option<usize> {
        self.coords.iter().position(|c| !c.is_zero())
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.group
            .cmp(&other.group)
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl Add for &GroupElement {
    type Output = GroupElement;
    fn add(self, rhs: &GroupElement) -> GroupElement {
        self.checked_add(rhs)
            .expect("group elements from one ambient group")
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;
    fn sub(self, rhs: &GroupElement) -> GroupElement {
        self.checked_sub(rhs)
            .expect("group elements from one ambient group")
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        self.negate()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            write!(f, "{}", self.coords[0])
        } else {
            write!(f, "(")?;
            for (i, c) in self.coords.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        }
    }
}

/// Result of [`Subgroup::index_in`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Index {
    Finite(BigInt),
    Infinite,
}

/// A finitely generated subgroup of an ordered group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    ambient: OrderedGroup,
    generators: Vec<GroupElement>,
}

impl Subgroup {
    pub fn new(ambient: OrderedGroup, generators: Vec<GroupElement>) -> Result<Self, GroupError> {
        let mut gens: Vec<GroupElement> = Vec::with_capacity(generators.len());
        for g in generators {
            if g.group != ambient {
                return Err(GroupError::MismatchedGroups(ambient, g.group));
            }
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        Ok(Subgroup {
            ambient,
            generators: gens,
        })
    }

    pub fn trivial(ambient: OrderedGroup) -> Self {
        Subgroup {
            ambient,
            generators: Vec::new(),
        }
    }

    pub fn ambient(&self) -> OrderedGroup {
        self.ambient
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// The subgroup generated by `self` together with `extra`.
    pub fn join(&self, extra: &[GroupElement]) -> Result<Subgroup, GroupError> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        Subgroup::new(self.ambient, gens)
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(GroupElement::is_zero)
    }

    pub fn rank(&self) -> usize {
        Lattice::build(&self.generators, &common_denominator(&[self]))
            .rows
            .len()
    }

    pub fn contains(&self, g: &GroupElement) -> Result<bool, GroupError> {
        Ok(self.coordinates(g)?.is_some())
    }

    /// Integer coefficients `z` with `g = Σ z_i · generators[i]`, if `g` is a
    /// member.
    pub fn coordinates(&self, g: &GroupElement) -> Result<Option<Vec<BigInt>>, GroupError> {
        if g.group != self.ambient {
            return Err(GroupError::MismatchedGroups(self.ambient, g.group));
        }
        let den = lcm_all(
            self.generators
                .iter()
                .chain(std::iter::once(g))
                .flat_map(|e| e.coords.iter().map(|c| c.denom().clone())),
        );
        let lattice = Lattice::build(&self.generators, &den);
        Ok(lattice.solve(&scale_to_integers(g, &den)))
    }

    /// Whether `g - h` lies in this subgroup.
    pub fn coset_equal(&self, g: &GroupElement, h: &GroupElement) -> Result<bool, GroupError> {
        let d = g.checked_sub(h)?;
        self.contains(&d)
    }

    fn check_inside(&self, larger: &Subgroup) -> Result<(), GroupError> {
        if self.ambient != larger.ambient {
            return Err(GroupError::MismatchedGroups(self.ambient, larger.ambient));
        }
        for g in &self.generators {
            if !larger.contains(g)? {
                return Err(GroupError::NotASubgroup(g.clone()));
            }
        }
        Ok(())
    }

    /// The index `(larger : self)`.
    pub fn index_in(&self, larger: &Subgroup) -> Result<Index, GroupError> {
        self.check_inside(larger)?;
        let den = common_denominator(&[self, larger]);
        let big = Lattice::build(&larger.generators, &den);
        let small = Lattice::build(&self.generators, &den);
        if big.rows.len() != small.rows.len() {
            return Ok(Index::Infinite);
        }
        // Express the small lattice in the echelon basis of the big one; the
        // index is the absolute determinant of the resulting square matrix.
        let coords: Vec<Vec<BigInt>> = small
            .rows
            .iter()
            .map(|r| big.solve_echelon(r).expect("sublattice member"))
            .collect();
        let reduced = echelon(coords, big.rows.len());
        let mut det = BigInt::one();
        for (row, &pivot) in reduced.rows.iter().zip(&reduced.pivots) {
            det *= row[pivot].abs();
        }
        Ok(Index::Finite(det))
    }

    /// Whether every element of `larger` is bounded above by some element of
    /// `self`. For lexicographic groups this compares the most significant
    /// coordinate reached by each subgroup.
    pub fn is_cofinal_in(&self, larger: &Subgroup) -> Result<bool, GroupError> {
        self.check_inside(larger)?;
        Ok(self.leading_index() == larger.leading_index())
    }

    /// Cofinality in the whole ambient group.
    pub fn is_cofinal_in_ambient(&self) -> bool {
        self.leading_index() == Some(0)
    }

    fn leading_index(&self) -> Option<usize> {
        self.generators
            .iter()
            .filter_map(GroupElement::leading_index)
            .min()
    }
}

fn lcm_all(dens: impl Iterator<Item = BigInt>) -> BigInt {
    dens.fold(BigInt::one(), |acc, d| acc.lcm(&d))
}

fn common_denominator(groups: &[&Subgroup]) -> BigInt {
    lcm_all(
        groups
            .iter()
            .flat_map(|s| s.generators.iter())
            .flat_map(|e| e.coords.iter().map(|c| c.denom().clone())),
    )
}

fn scale_to_integers(g: &GroupElement, den: &BigInt) -> Option<Vec<BigInt>> {
    g.coords
        .iter()
        .map(|c| {
            let scaled = c * BigRational::from_integer(den.clone());
            scaled.is_integer().then(|| scaled.to_integer())
        })
        .collect()
}

/// Integer row echelon form with a record of the transform from the original
/// rows.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    /// `rows[k] = Σ transform[k][i] · original[i]`
    transform: Vec<Vec<BigInt>>,
}

fn echelon(rows: Vec<Vec<BigInt>>, width: usize) -> Echelon {
    let n = rows.len();
    let mut m: Vec<(Vec<BigInt>, Vec<BigInt>)> = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            (r, e)
        })
        .collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..width {
        loop {
            // Smallest nonzero entry in this column at or below `top`.
            let best = (top..m.len())
                .filter(|&i| !m[i].0[col].is_zero())
                .min_by(|&a, &b| m[a].0[col].abs().cmp(&m[b].0[col].abs()));
            let Some(best) = best else { break };
            m.swap(top, best);
            let mut done = true;
            for i in top + 1..m.len() {
                if m[i].0[col].is_zero() {
                    continue;
                }
                let q = m[i].0[col].div_floor(&m[top].0[col]);
                let (pr, pe) = m[top].clone();
                for (x, y) in m[i].0.iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
                for (x, y) in m[i].1.iter_mut().zip(&pe) {
                    *x -= &q * y;
                }
                if !m[i].0[col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if top < m.len() && !m[top].0[col].is_zero() {
            if m[top].0[col].is_negative() {
                let (row, tr) = &mut m[top];
                for x in row.iter_mut().chain(tr.iter_mut()) {
                    *x = -x.clone();
                }
            }
            pivots.push(col);
            top += 1;
        }
    }
    m.truncate(top);
    let (rows, transform) = m.into_iter().unzip();
    Echelon {
        rows,
        pivots,
        transform,
    }
}

struct Lattice {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    transform: Vec<Vec<BigInt>>,
    n_gens: usize,
}

impl Lattice {
    fn build(gens: &[GroupElement], den: &BigInt) -> Lattice {
        let width = gens.first().map_or(0, |g| g.coords.len());
        let rows = gens
            .iter()
            .map(|g| scale_to_integers(g, den).expect("denominator clears generators"))
            .collect();
        let e = echelon(rows, width);
        Lattice {
            rows: e.rows,
            pivots: e.pivots,
            transform: e.transform,
            n_gens: gens.len(),
        }
    }

    /// Coefficients over the echelon rows, if `target` is in the lattice.
    fn solve_echelon(&self, target: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rem = target.to_vec();
        let mut coeffs = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let (q, r) = rem[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            for (x, y) in rem.iter_mut().zip(row) {
                *x -= &q * y;
            }
            coeffs.push(q);
        }
        rem.iter().all(Zero::is_zero).then_some(coeffs)
    }

    /// Coefficients over the original generators.
    fn solve(&self, target: &Option<Vec<BigInt>>) -> Option<Vec<BigInt>> {
        let target = target.as_ref()?;
        let ech = self.solve_echelon(target)?;
        let mut out = vec![BigInt::zero(); self.n_gens];
        for (c, t) in ech.iter().zip(&self.transform) {
            for (o, x) in out.iter_mut().zip(t) {
                *o += c * x;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GroupElement {
        GroupElement::rational(n, d)
    }

    #[test]
    fn lex_order_first_coordinate_dominates() {
        let a = GroupElement::lex(&[1, -5]);
        let b = GroupElement::lex(&[0, 100]);
        assert_eq!(a.compare(&b).unwrap(), Ordering::Greater);
        assert_eq!(a.compare(&a).unwrap(), Ordering::Equal);
        assert_eq!(q(1, 2).compare(&q(1, 3)).unwrap(), Ordering::Greater);
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&q(1, 2) + &q(1, 2), q(1, 1));
        let g = q(3, 7);
        assert!((&g + &g.negate()).is_zero());
        assert_eq!(
            &GroupElement::lex(&[1, 0]) + &GroupElement::lex(&[0, 3]),
            GroupElement::lex(&[1, 3])
        );
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let err = q(1, 2).compare(&GroupElement::integer(1)).unwrap_err();
        assert!(matches!(err, GroupError::MismatchedGroups(..)));
        assert!(GroupElement::lex(&[1])
            .checked_add(&GroupElement::lex(&[1, 2]))
            .is_err());
    }

    #[test]
    fn integer_line_rejects_fractions() {
        let r = GroupElement::parse(OrderedGroup::IntegerLine, &["1/2"]);
        assert!(r.is_err());
    }

    #[test]
    fn coset_equality_modulo_integers() {
        let h = Subgroup::new(OrderedGroup::RationalLine, vec![q(1, 1)]).unwrap();
        assert!(h.coset_equal(&q(1, 2), &q(3, 2)).unwrap());
        assert!(!h.coset_equal(&q(1, 2), &q(1, 3)).unwrap());
        assert!(!h.coset_equal(&q(1, 2), &q(0, 1)).unwrap());
        assert!(h.coset_equal(&q(5, 3), &q(5, 3)).unwrap());
    }

    #[test]
    fn index_examples() {
        let z = OrderedGroup::IntegerLine;
        let h = Subgroup::new(z, vec![GroupElement::integer(2)]).unwrap();
        let g = Subgroup::new(z, vec![GroupElement::integer(1)]).unwrap();
        assert_eq!(h.index_in(&g).unwrap(), Index::Finite(2.into()));
        assert_eq!(g.index_in(&g).unwrap(), Index::Finite(1.into()));

        let lex = OrderedGroup::LexProduct { rank: 2 };
        let h = Subgroup::new(lex, vec![GroupElement::lex(&[0, 1])]).unwrap();
        let g = lex.full_subgroup().unwrap();
        assert_eq!(h.index_in(&g).unwrap(), Index::Infinite);
        assert!(matches!(g.index_in(&h), Err(GroupError::NotASubgroup(_))));
    }

    #[test]
    fn index_with_mixed_generators() {
        // <4, 6> = <2> inside <1/3>: index 6.
        let z = OrderedGroup::RationalLine;
        let h = Subgroup::new(z, vec![q(4, 1), q(6, 1)]).unwrap();
        let g = Subgroup::new(z, vec![q(1, 3)]).unwrap();
        assert_eq!(h.index_in(&g).unwrap(), Index::Finite(6.into()));
        // <(2,0),(1,3)> inside Z^2: determinant 6.
        let lex = OrderedGroup::LexProduct { rank: 2 };
        let h = Subgroup::new(
            lex,
            vec![GroupElement::lex(&[2, 0]), GroupElement::lex(&[1, 3])],
        )
        .unwrap();
        assert_eq!(
            h.index_in(&lex.full_subgroup().unwrap()).unwrap(),
            Index::Finite(6.into())
        );
    }

    #[test]
    fn cofinality() {
        let qq = OrderedGroup::RationalLine;
        let z = Subgroup::new(qq, vec![q(1, 1)]).unwrap();
        let half = Subgroup::new(qq, vec![q(1, 2)]).unwrap();
        assert!(z.is_cofinal_in(&half).unwrap());
        assert!(half.is_cofinal_in(&half).unwrap());

        let lex = OrderedGroup::LexProduct { rank: 2 };
        let h = Subgroup::new(lex, vec![GroupElement::lex(&[0, 1])]).unwrap();
        assert!(!h.is_cofinal_in(&lex.full_subgroup().unwrap()).unwrap());
        assert!(!h.is_cofinal_in_ambient());
    }

    #[test]
    fn coordinates_over_generators() {
        let lex = OrderedGroup::LexProduct { rank: 2 };
        let h = Subgroup::new(
            lex,
            vec![GroupElement::lex(&[0, 2]), GroupElement::lex(&[1, 1])],
        )
        .unwrap();
        let c = h.coordinates(&GroupElement::lex(&[2, 4])).unwrap().unwrap();
        let rebuilt = h.generators()[0]
            .times(&c[0])
            .checked_add(&h.generators()[1].times(&c[1]))
            .unwrap();
        assert_eq!(rebuilt, GroupElement::lex(&[2, 4]));
        assert!(h
            .coordinates(&GroupElement::lex(&[0, 1]))
            .unwrap()
            .is_none());
        let trivial = Subgroup::trivial(lex);
        assert!(trivial.contains(&lex.zero()).unwrap());
        assert!(!trivial.contains(&GroupElement::lex(&[0, 1])).unwrap());
    }
}
