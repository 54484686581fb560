//! Gaussian elimination over a [`ResidueField`].

use super::{FieldElement, FieldError, FpPoly, ResidueField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    /// Basis of the left kernel: each vector `k` satisfies `Σ k_i row_i = 0`.
    pub kernel: Vec<Vec<FieldElement>>,
}

fn padded(
    field: &ResidueField,
    rows: &[Vec<FieldElement>],
) -> Result<Vec<Vec<FieldElement>>, FieldError> {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    rows.iter()
        .map(|r| {
            let mut out = Vec::with_capacity(width);
            for x in r {
                if x.field() != *field {
                    return Err(FieldError::MismatchedFields(x.field(), *field));
                }
                out.push(x.clone());
            }
            out.resize(width, field.zero());
            Ok(out)
        })
        .collect()
}

/// Rank of a family of row vectors together with all linear relations among
/// them. Rows of different lengths are padded with zeros.
pub fn linear_rank(
    field: &ResidueField,
    rows: &[Vec<FieldElement>],
) -> Result<RankResult, FieldError> {
    let n = rows.len();
    let mut m = padded(field, rows)?;
    let width = m.first().map_or(0, Vec::len);
    // Augment with the identity to track row operations.
    for (i, row) in m.iter_mut().enumerate() {
        for j in 0..n {
            row.push(if i == j { field.one() } else { field.zero() });
        }
    }
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].inv()?;
        for x in m[rank].iter_mut() {
            *x = x.try_mul(&inv)?;
        }
        for r in 0..n {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..m[r].len() {
                let delta = factor.try_mul(&m[rank][c])?;
                m[r][c] = m[r][c].try_sub(&delta)?;
            }
        }
        rank += 1;
    }
    let kernel = m[rank..].iter().map(|row| row[width..].to_vec()).collect();
    Ok(RankResult { rank, kernel })
}

/// Coefficients `c` with `Σ c_i basis_i = target`, or `None` when the target
/// is outside the span. Free variables are set to zero.
pub fn solve_in_span(
    field: &ResidueField,
    target: &[FieldElement],
    basis: &[Vec<FieldElement>],
) -> Result<Option<Vec<FieldElement>>, FieldError> {
    let mut all: Vec<Vec<FieldElement>> = basis.to_vec();
    all.push(target.to_vec());
    let all = padded(field, &all)?;
    let (target, basis) = all.split_last().expect("target was pushed");
    let n = basis.len();
    let width = target.len();
    // Equations are the coordinates: row k is [basis_0[k] .. basis_{n-1}[k] | target[k]].
    let mut m: Vec<Vec<FieldElement>> = (0..width)
        .map(|k| {
            let mut row: Vec<FieldElement> = basis.iter().map(|b| b[k].clone()).collect();
            row.push(target[k].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..width).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].inv()?;
        for x in m[rank].iter_mut() {
            *x = x.try_mul(&inv)?;
        }
        for r in 0..width {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..=n {
                let delta = factor.try_mul(&m[rank][c])?;
                m[r][c] = m[r][c].try_sub(&delta)?;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if m[rank..].iter().any(|row| !row[n].is_zero()) {
        return Ok(None);
    }
    let mut sol = vec![field.zero(); n];
    for (r, &col) in pivots.iter().enumerate() {
        sol[col] = m[r][n].clone();
    }
    Ok(Some(sol))
}

/// Coordinate vectors over `base` for a family of elements of a larger field,
/// chosen jointly so that `base`-linear relations among the elements are
/// exactly the relations among their coordinate vectors.
///
/// For `F_p ⊂ F_p(s)` the family is multiplied by a common denominator and
/// each numerator is written in the monomial basis `1, s, s^2, ...`.
pub fn coordinates_over(
    base: &ResidueField,
    elems: &[FieldElement],
) -> Result<Vec<Vec<FieldElement>>, FieldError> {
    let Some(first) = elems.first() else {
        return Ok(Vec::new());
    };
    let larger = first.field();
    if let Some(x) = elems.iter().find(|x| x.field() != larger) {
        return Err(FieldError::MismatchedFields(x.field(), larger));
    }
    if *base == larger {
        return Ok(elems.iter().map(|x| vec![x.clone()]).collect());
    }
    match (base, larger) {
        (ResidueField::PrimeField(p), ResidueField::RationalFunctions(q)) if *p == q => {
            let p = *p;
            let mut common = FpPoly::constant(p, 1);
            for x in elems {
                if let FieldElement::Fraction { den, .. } = x {
                    let g = common.gcd(den);
                    let (part, _) = den.div_rem(&g);
                    common = common.mul(&part);
                }
            }
            let numerators: Vec<FpPoly> = elems
                .iter()
                .map(|x| match x {
                    FieldElement::Fraction { num, den } => num.mul(&common.div_rem(den).0),
                    _ => unreachable!("checked field above"),
                })
                .collect();
            let width = numerators
                .iter()
                .map(|n| n.coeffs().len())
                .max()
                .unwrap_or(0);
            Ok(numerators
                .iter()
                .map(|n| {
                    (0..width)
                        .map(|i| FieldElement::Fp {
                            p,
                            value: n.coeffs().get(i).copied().unwrap_or(0),
                        })
                        .collect()
                })
                .collect())
        }
        _ => Err(FieldError::NotASubfield(*base, larger)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, v: &[i64]) -> Vec<FieldElement> {
        let f = ResidueField::PrimeField(p);
        v.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let f = ResidueField::PrimeField(5);
        let rows = vec![fp(5, &[1, 2]), fp(5, &[2, 4]), fp(5, &[0, 1])];
        let r = linear_rank(&f, &rows).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.kernel.len(), 1);
        let k = &r.kernel[0];
        for col in 0..2 {
            let mut s = f.zero();
            for (i, row) in rows.iter().enumerate() {
                s = s.try_add(&k[i].try_mul(&row[col]).unwrap()).unwrap();
            }
            assert!(s.is_zero());
        }
    }

    #[test]
    fn solve() {
        let f = ResidueField::PrimeField(7);
        let basis = vec![fp(7, &[1, 0, 1]), fp(7, &[0, 1, 1])];
        let sol = solve_in_span(&f, &fp(7, &[3, 4, 0]), &basis)
            .unwrap()
            .unwrap();
        assert_eq!(sol, fp(7, &[3, 4]));
        assert!(solve_in_span(&f, &fp(7, &[1, 0, 0]), &basis)
            .unwrap()
            .is_none());
    }

    #[test]
    fn coordinates_detect_transcendental_independence() {
        let base = ResidueField::PrimeField(3);
        let big = ResidueField::RationalFunctions(3);
        let elems = vec![
            big.parse("1/(s+1)").unwrap(),
            big.parse("s/(s+1)").unwrap(),
            big.parse("1").unwrap(),
        ];
        let coords = coordinates_over(&base, &elems).unwrap();
        // 1/(s+1) + s/(s+1) = 1
        let r = linear_rank(&base, &coords).unwrap();
        assert_eq!(r.rank, 2);
        let two = vec![big.one(), big.variable().unwrap()];
        let r = linear_rank(&base, &coordinates_over(&base, &two).unwrap()).unwrap();
        assert_eq!(r.rank, 2);
    }
}
