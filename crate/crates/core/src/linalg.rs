//! Exact linear algebra over the rational function field.
//!
//! The workhorse is fraction-free (Bareiss) Gaussian elimination over the
//! polynomial ring: rows are cleared of denominators first, every
//! elimination step divides exactly by the previous pivot, and pivot columns
//! are scanned left to right so the pivot set is the greedy (first-come)
//! independent column subset.
//!
//! A small mod-p echelon helper for residue vectors lives here too; it backs
//! the Laurent-monomial fast paths elsewhere in the crate.

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::ratfunc::RatFunc;

/// Result of the forward elimination: echelon rows over the polynomial ring
/// and the pivot column indices.
struct Echelon {
    rows: Vec<Vec<MultiPoly>>,
    pivot_cols: Vec<usize>,
    cols: usize,
}

fn validate(matrix: &[Vec<RatFunc>]) -> Result<usize> {
    let cols = matrix.first().map(|r| r.len()).unwrap_or(0);
    for row in matrix {
        if row.len() != cols {
            return Err(Error::usage("ragged matrix"));
        }
    }
    if let Some(first) = matrix.first().and_then(|r| r.first()) {
        let desc = first.descriptor();
        for row in matrix {
            for e in row {
                desc.compatible(e.descriptor())?;
            }
        }
    }
    Ok(cols)
}

/// Clears denominators row by row (multiplying through by the LCM), then
/// runs fraction-free elimination.
fn eliminate(matrix: &[Vec<RatFunc>]) -> Result<Echelon> {
    let cols = validate(matrix)?;
    let mut rows: Vec<Vec<MultiPoly>> = Vec::with_capacity(matrix.len());
    for row in matrix {
        if row.is_empty() {
            rows.push(Vec::new());
            continue;
        }
        let desc = row[0].descriptor();
        let mut lcm = MultiPoly::one(desc);
        for e in row {
            let den = e.denominator();
            let g = lcm.gcd(den)?;
            lcm = lcm.mul(&den.exact_div(&g).expect("gcd divides"))?;
        }
        let cleared = row
            .iter()
            .map(|e| {
                let extra = lcm.exact_div(e.denominator()).expect("lcm of denominators");
                e.numerator().mul(&extra)
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(cleared);
    }

    let nrows = rows.len();
    let mut pivot_cols = Vec::new();
    let mut prev: Option<MultiPoly> = None;
    let mut pr = 0usize;
    for col in 0..cols {
        // find a pivot at or below row `pr`
        let Some(pivot_row) = (pr..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pr, pivot_row);
        let pivot = rows[pr][col].clone();
        for i in pr + 1..nrows {
            if rows[i].iter().skip(col).all(|e| e.is_zero()) {
                continue;
            }
            for j in col + 1..cols {
                // Bareiss step: (pivot*a_ij - a_icol*a_prj) / previous pivot
                let mut val = pivot
                    .mul(&rows[i][j])?
                    .sub(&rows[i][col].mul(&rows[pr][j])?)?;
                if let Some(prev) = &prev {
                    val = val
                        .exact_div(prev)
                        .expect("fraction-free elimination divides exactly");
                }
                rows[i][j] = val;
            }
            rows[i][col] = MultiPoly::zero(pivot.descriptor());
        }
        prev = Some(pivot);
        pivot_cols.push(col);
        pr += 1;
        if pr == nrows {
            break;
        }
    }
    Ok(Echelon {
        rows,
        pivot_cols,
        cols,
    })
}

/// Back-substitutes one kernel vector per free column.
fn kernel_from_echelon(ech: &Echelon, desc_hint: &RatFunc) -> Result<Vec<Vec<RatFunc>>> {
    let desc = desc_hint.descriptor();
    let rank = ech.pivot_cols.len();
    let free_cols: Vec<usize> = (0..ech.cols)
        .filter(|c| !ech.pivot_cols.contains(c))
        .collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &f in &free_cols {
        let mut v = vec![RatFunc::zero(desc); ech.cols];
        v[f] = RatFunc::one(desc);
        for i in (0..rank).rev() {
            let c = ech.pivot_cols[i];
            let mut acc = RatFunc::zero(desc);
            for j in c + 1..ech.cols {
                if ech.rows[i][j].is_zero() || v[j].is_zero() {
                    continue;
                }
                acc = acc.add(&RatFunc::from_poly(ech.rows[i][j].clone()).mul(&v[j])?)?;
            }
            if acc.is_zero() {
                continue;
            }
            v[c] = acc
                .neg()
                .div(&RatFunc::from_poly(ech.rows[i][c].clone()))?;
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Exact rank and kernel basis of a matrix over `F`.
///
/// The kernel vectors satisfy `M * v = 0` exactly; there is one per
/// non-pivot column (its entry there is 1), so
/// `columns = rank + kernel dimension` by construction.
pub fn matrix_rank_kernel(matrix: &[Vec<RatFunc>]) -> Result<(usize, Vec<Vec<RatFunc>>)> {
    let (rank, _, kernel) = rank_kernel_pivots(matrix)?;
    Ok((rank, kernel))
}

/// Like [`matrix_rank_kernel`] but also reports the pivot columns, i.e. the
/// greedy first-come independent column subset.
pub(crate) fn rank_kernel_pivots(
    matrix: &[Vec<RatFunc>],
) -> Result<(usize, Vec<usize>, Vec<Vec<RatFunc>>)> {
    let cols = validate(matrix)?;
    if cols == 0 || matrix.is_empty() {
        // an empty matrix has width 0 too, so there are no free columns
        return Ok((0, Vec::new(), Vec::new()));
    }
    let ech = eliminate(matrix)?;
    let hint = matrix[0][0].clone();
    let kernel = kernel_from_echelon(&ech, &hint)?;
    debug_assert!(kernel.iter().all(|v| {
        matrix.iter().all(|row| {
            let mut acc = RatFunc::zero(hint.descriptor());
            for (e, x) in row.iter().zip(v) {
                acc = acc.add(&e.mul(x).unwrap()).unwrap();
            }
            acc.is_zero()
        })
    }));
    Ok((ech.pivot_cols.len(), ech.pivot_cols, kernel))
}

/// Rank only; skips the kernel back-substitution.
pub fn matrix_rank(matrix: &[Vec<RatFunc>]) -> Result<usize> {
    let cols = validate(matrix)?;
    if cols == 0 || matrix.is_empty() {
        return Ok(0);
    }
    Ok(eliminate(matrix)?.pivot_cols.len())
}

/// A solution of `M * v = b` if one exists, `None` otherwise (free
/// variables set to zero). The solution is verified by substitution.
pub fn solve_linear(matrix: &[Vec<RatFunc>], b: &[RatFunc]) -> Result<Option<Vec<RatFunc>>> {
    let cols = validate(matrix)?;
    if matrix.len() != b.len() {
        return Err(Error::usage("right-hand side length mismatch"));
    }
    if matrix.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let desc = b
        .first()
        .map(|e| e.descriptor().clone())
        .or_else(|| matrix.first().and_then(|r| r.first()).map(|e| e.descriptor().clone()));
    let desc = match desc {
        Some(d) => d,
        None => return Ok(Some(Vec::new())),
    };
    // eliminate on the augmented matrix; a pivot in the last column means
    // the system is inconsistent
    let augmented: Vec<Vec<RatFunc>> = matrix
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.to_vec();
            r.push(rhs.clone());
            r
        })
        .collect();
    let ech = eliminate(&augmented)?;
    if ech.pivot_cols.contains(&cols) {
        return Ok(None);
    }
    // back-substitute with free variables at zero
    let mut v = vec![RatFunc::zero(&desc); cols];
    for i in (0..ech.pivot_cols.len()).rev() {
        let c = ech.pivot_cols[i];
        let mut acc = RatFunc::from_poly(ech.rows[i][cols].clone());
        for j in c + 1..cols {
            if ech.rows[i][j].is_zero() || v[j].is_zero() {
                continue;
            }
            acc = acc.sub(&RatFunc::from_poly(ech.rows[i][j].clone()).mul(&v[j])?)?;
        }
        v[c] = acc.div(&RatFunc::from_poly(ech.rows[i][c].clone()))?;
    }
    // verify by substitution
    for (row, rhs) in matrix.iter().zip(b) {
        let mut acc = RatFunc::zero(&desc);
        for (e, x) in row.iter().zip(&v) {
            if e.is_zero() || x.is_zero() {
                continue;
            }
            acc = acc.add(&e.mul(x)?)?;
        }
        if acc != *rhs {
            return Err(Error::verification(
                "linear solve failed substitution check",
            ));
        }
    }
    Ok(Some(v))
}

/// Incremental Gaussian echelon over `F_p` for residue vectors; the backbone
/// of the Laurent-monomial fast paths.
#[derive(Clone, Debug)]
pub struct FpEchelon {
    p: u64,
    width: usize,
    /// rows normalized to pivot value 1, kept sorted by pivot column
    rows: Vec<(usize, Vec<u64>)>,
}

impl FpEchelon {
    pub fn new(p: u64, width: usize) -> Self {
        FpEchelon {
            p,
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the echelon; the result has zeros in every pivot
    /// column, so it is a canonical representative of `v` modulo the span.
    pub fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        debug_assert_eq!(v.len(), self.width);
        for (pivot, row) in &self.rows {
            let c = v[*pivot] % self.p;
            if c == 0 {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                *x = (*x + (self.p - c) * r) % self.p;
            }
        }
        v
    }

    /// Inserts `v` when independent of the current span; returns whether the
    /// rank grew.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let mut v = self.reduce(v);
        let Some(pivot) = v.iter().position(|&x| x % self.p != 0) else {
            return false;
        };
        let inv = mod_inverse(v[pivot] % self.p, self.p);
        for x in v.iter_mut() {
            *x = *x % self.p * inv % self.p;
        }
        self.rows.push((pivot, v));
        self.rows.sort_by_key(|(p, _)| *p);
        true
    }

    pub fn contains(&self, v: Vec<u64>) -> bool {
        self.reduce(v).iter().all(|&x| x % self.p == 0)
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat; p prime, a nonzero
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use std::sync::Arc;

    fn f2x() -> Arc<FieldDescriptor> {
        FieldDescriptor::new(2, &["x"]).unwrap()
    }

    fn rf(desc: &Arc<FieldDescriptor>, k: u64) -> RatFunc {
        RatFunc::constant(desc, k)
    }

    fn xv(desc: &Arc<FieldDescriptor>) -> RatFunc {
        RatFunc::variable(desc, 0).unwrap()
    }

    #[test]
    fn identity_has_full_rank() {
        let d = f2x();
        let m = vec![
            vec![rf(&d, 1), rf(&d, 0)],
            vec![rf(&d, 0), rf(&d, 1)],
        ];
        let (rank, kernel) = matrix_rank_kernel(&m).unwrap();
        assert_eq!(rank, 2);
        assert!(kernel.is_empty());
    }

    #[test]
    fn rank_one_kernel() {
        // [[x, x^2], [1, x]] has rank 1; kernel spanned by (x, -1) ~ (x, 1) over F_2
        let d = f2x();
        let x = xv(&d);
        let m = vec![
            vec![x.clone(), x.pow(2).unwrap()],
            vec![rf(&d, 1), x.clone()],
        ];
        let (rank, kernel) = matrix_rank_kernel(&m).unwrap();
        assert_eq!(rank, 1);
        assert_eq!(kernel.len(), 1);
        // kernel vector has v[free] = 1; free column is 1, pivot col 0
        assert_eq!(kernel[0][1], RatFunc::one(&d));
        assert_eq!(kernel[0][0], x);
    }

    #[test]
    fn solve_consistent_scaled() {
        // M = [[x],[x^2]], b = [1, x] -> v = [1/x]
        let d = f2x();
        let x = xv(&d);
        let m = vec![vec![x.clone()], vec![x.pow(2).unwrap()]];
        let b = vec![rf(&d, 1), x.clone()];
        let v = solve_linear(&m, &b).unwrap().unwrap();
        assert_eq!(v, vec![x.inv().unwrap()]);
    }

    #[test]
    fn solve_inconsistent() {
        // M = [[x],[1]], b = [1, 1] -> no solution
        let d = f2x();
        let m = vec![vec![xv(&d)], vec![rf(&d, 1)]];
        let b = vec![rf(&d, 1), rf(&d, 1)];
        assert!(solve_linear(&m, &b).unwrap().is_none());
    }

    #[test]
    fn solve_trivial() {
        let d = f2x();
        let m = vec![vec![rf(&d, 1)]];
        let b = vec![xv(&d)];
        assert_eq!(solve_linear(&m, &b).unwrap().unwrap(), vec![xv(&d)]);
    }

    #[test]
    fn ragged_matrix_rejected() {
        let d = f2x();
        let m = vec![vec![rf(&d, 1), rf(&d, 0)], vec![rf(&d, 1)]];
        assert!(matches!(matrix_rank_kernel(&m), Err(Error::Usage(_))));
    }

    #[test]
    fn planted_rank_with_denominators() {
        // build a 4x6 matrix over F_3(x, y) with planted rank 3:
        // three independent rows, one dependent combination
        let d = FieldDescriptor::new(3, &["x", "y"]).unwrap();
        let x = RatFunc::variable(&d, 0).unwrap();
        let y = RatFunc::variable(&d, 1).unwrap();
        let one = RatFunc::one(&d);
        let r1: Vec<RatFunc> = vec![
            one.clone(),
            x.clone(),
            y.clone(),
            x.mul(&y).unwrap(),
            x.pow(2).unwrap(),
            one.div(&y).unwrap(),
        ];
        let r2: Vec<RatFunc> = vec![
            y.clone(),
            one.clone(),
            x.clone(),
            one.div(&x).unwrap(),
            y.pow(2).unwrap(),
            x.add(&y).unwrap(),
        ];
        let r3: Vec<RatFunc> = vec![
            x.pow(2).unwrap(),
            y.clone(),
            one.clone(),
            x.clone(),
            one.div(&x.add(&y).unwrap()).unwrap(),
            y.clone(),
        ];
        // r4 = x*r1 + y*r2 + r3
        let mut r4 = Vec::new();
        for i in 0..6 {
            let v = x
                .mul(&r1[i])
                .unwrap()
                .add(&y.mul(&r2[i]).unwrap())
                .unwrap()
                .add(&r3[i])
                .unwrap();
            r4.push(v);
        }
        let m = vec![r1, r2, r3, r4];
        let (rank, kernel) = matrix_rank_kernel(&m).unwrap();
        assert_eq!(rank, 3);
        assert_eq!(kernel.len(), 3);
    }

    #[test]
    fn fp_echelon_basics() {
        let mut e = FpEchelon::new(3, 3);
        assert!(e.insert(vec![1, 2, 0]));
        assert!(e.insert(vec![0, 1, 1]));
        // dependent: (1,2,0) + 2*(0,1,1) = (1, 4, 2) = (1,1,2)
        assert!(!e.insert(vec![1, 1, 2]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(vec![2, 4, 0]));
        assert!(!e.contains(vec![0, 0, 1]));
        // canonical representatives agree exactly for vectors in the same coset
        let a = e.reduce(vec![1, 0, 0]);
        let b = e.reduce(vec![2, 0, 1]); // (1,0,0) + (1,2,0) + (0,1,1)
        assert_eq!(a, b);
        let c = e.reduce(vec![0, 0, 1]); // different coset
        assert_ne!(a, c);
    }
}
