//! Integer lattices and small exact linear algebra.
//!
//! Vectors are rows; a lattice is given by the row space over `ℤ` of a list of
//! integer vectors. Everything here is sized for desk-scale problems (rank at
//! most a handful), so dense representations are used throughout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

pub type IVec = Vec<i64>;

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides `v` by the gcd of its entries. The zero vector is returned as is.
pub fn primitive(v: &[i64]) -> IVec {
    let g = gcd_all(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Returns the nonzero rows of an echelon basis: pivots strictly increase to
/// the right, are positive, and entries above each pivot lie in `[0, pivot)`.
pub fn hermite_normal_form(rows: &[IVec]) -> Vec<IVec> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut top = 0;
    for col in 0..ncols {
        if top >= m.len() {
            break;
        }
        loop {
            let pivot = (top..m.len())
                .filter(|&r| m[r][col] != 0)
                .min_by_key(|&r| m[r][col].abs());
            let Some(pivot) = pivot else { break };
            m.swap(top, pivot);
            let mut done = true;
            for r in top + 1..m.len() {
                if m[r][col] != 0 {
                    let k = m[r][col].div_euclid(m[top][col]);
                    for c in col..ncols {
                        m[r][c] -= k * m[top][c];
                    }
                    if m[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if top < m.len() && m[top][col] != 0 {
            if m[top][col] < 0 {
                for c in col..ncols {
                    m[top][c] = -m[top][c];
                }
            }
            for r in 0..top {
                let k = m[r][col].div_euclid(m[top][col]);
                if k != 0 {
                    for c in col..ncols {
                        m[r][c] -= k * m[top][c];
                    }
                }
            }
            top += 1;
        }
    }
    m.truncate(top);
    m.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| i64::try_from(x).expect("HNF entry overflow"))
                .collect()
        })
        .collect()
}

fn pivot_col(row: &[i64]) -> usize {
    row.iter().position(|&x| x != 0).expect("HNF rows are nonzero")
}

/// Canonical representative of `v` modulo the lattice with echelon basis
/// `hnf` (as returned by [`hermite_normal_form`]).
pub fn reduce_mod(v: &[i64], hnf: &[IVec]) -> IVec {
    let mut v = v.to_vec();
    for row in hnf {
        let c = pivot_col(row);
        let k = v[c].div_euclid(row[c]);
        if k != 0 {
            for (x, r) in v.iter_mut().zip(row) {
                *x -= k * r;
            }
        }
    }
    v
}

/// Absolute determinant of the square matrix spanned by an HNF basis, i.e.
/// the index of a full-rank lattice in `ℤ^n`.
pub fn hnf_index(hnf: &[IVec]) -> Option<u64> {
    let n = hnf.first()?.len();
    if hnf.len() != n {
        return None;
    }
    hnf.iter()
        .enumerate()
        .try_fold(1u64, |acc, (i, r)| acc.checked_mul(r[i].unsigned_abs()))
}

// ---------------------------------------------------------------------------
// Exact rational matrices.

pub type QMat = Vec<Vec<Rational>>;

pub fn to_qmat(rows: &[IVec]) -> QMat {
    rows.iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut QMat) -> Vec<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let k = m[i][c].clone();
                for j in c..ncols {
                    let t = &k * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &QMat) -> usize {
    let mut m = rows.clone();
    rref(&mut m).len()
}

pub fn det(m: &QMat) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c].clone();
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let k = &a[i][c] * &inv;
                for j in c..n {
                    let t = &k * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    d
}

/// Solves `x · A = b` for a row vector `x`, where `A` has full row rank
/// `rows.len()`. Returns `None` when `b` is not in the row space.
pub fn solve_row_combination(rows: &QMat, b: &[Rational]) -> Option<Vec<Rational>> {
    let k = rows.len();
    let n = b.len();
    // Columns of the system are the equations: A^T x = b^T.
    let mut aug: QMat = (0..n)
        .map(|j| {
            let mut row: Vec<Rational> = (0..k).map(|i| rows[i][j].clone()).collect();
            row.push(b[j].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][k].clone();
    }
    Some(x)
}

/// A primitive integer vector spanning the one-dimensional kernel
/// `{x : rows · x = 0}`, or `None` when the kernel has another dimension.
pub fn kernel_line(rows: &[IVec], n: usize) -> Option<IVec> {
    let mut m = to_qmat(rows);
    let pivots = rref(&mut m);
    if pivots.len() + 1 != n {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut x = vec![Rational::zero(); n];
    x[free] = Rational::one();
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = -m[r][free].clone();
    }
    let den = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Option<IVec> = x
        .iter()
        .map(|v| (v * Rational::from_integer(den.clone())).to_integer().to_i64())
        .collect();
    Some(primitive(&ints?))
}

pub fn is_nonneg(r: &Rational) -> bool {
    !r.is_negative()
}
