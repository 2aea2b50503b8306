//! Dense exact linear algebra over the rationals: row reduction, kernels and
//! affine solution sets. Matrices are row-major `Vec<Vec<Rational>>`.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Row = Vec<Rational>;

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Row {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Reduces `rows` to reduced row-echelon form in place, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref(rows: &mut Vec<Row>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = rows[rank][col].recip();
        if !inv.is_one() {
            for x in rows[rank].iter_mut().skip(col) {
                *x *= &inv;
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

pub fn rank(rows: &[Row]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : A x = 0}` for an `r x ncols` matrix `A`.
pub fn nullspace(rows: &[Row], ncols: usize) -> Vec<Row> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    kernel_from_rref(&m, &pivots, ncols)
}

fn kernel_from_rref(m: &[Row], pivots: &[usize], ncols: usize) -> Vec<Row> {
    let mut basis = Vec::new();
    let mut next_pivot = 0;
    for free in 0..ncols {
        if next_pivot < pivots.len() && pivots[next_pivot] == free {
            next_pivot += 1;
            continue;
        }
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row, &p) in m.iter().zip(pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solution set of the affine system given by augmented rows `[a | b]`
/// (meaning `a . x = b`) in `ncols` unknowns: a particular solution plus a
/// kernel basis, or `None` when inconsistent.
pub fn solve_affine(augmented: &[Row], ncols: usize) -> Option<(Row, Vec<Row>)> {
    let mut m = augmented.to_vec();
    let pivots = rref(&mut m);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut particular = vec![Rational::zero(); ncols];
    for (row, &p) in m.iter().zip(&pivots) {
        particular[p] = row[ncols].clone();
    }
    let coeffs: Vec<Row> = m.iter().map(|r| r[..ncols].to_vec()).collect();
    Some((particular, kernel_from_rref(&coeffs, &pivots, ncols)))
}
