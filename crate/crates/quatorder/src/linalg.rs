//! Exact linear algebra over ℤ and ℚ for the small matrices this crate uses.
//!
//! Everything here is written for row-major `Vec<Vec<_>>` matrices of tiny
//! fixed sizes (rows ≤ 16, columns ≤ 12): Hermite normal form over ℤ with
//! unimodular row operations, cofactor determinants, Gauss–Jordan inversion
//! and kernels over ℚ, and integer row-kernels via the augmented-HNF trick.
//! No pivoting heuristics are needed at these sizes; all arithmetic is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Row-major integer matrix.
pub type MatZ = Vec<Vec<BigInt>>;
/// Row-major rational matrix.
pub type MatQ = Vec<Vec<Rational>>;

/// Row-style Hermite normal form.
///
/// Returns the nonzero rows of the HNF of `m`: row echelon over ℤ with
/// positive pivots and the entries above each pivot reduced into
/// `[0, pivot)`. The row span is preserved; the result is the unique
/// canonical basis of the row lattice.
pub fn hnf(mut m: MatZ) -> MatZ {
    if m.is_empty() {
        return m;
    }
    let cols = m[0].len();
    let rows = m.len();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        // Clear the column below row r by gcd elimination.
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !m[i][c].is_zero()
                    && best.map_or(true, |b| m[i][c].abs() < m[b][c].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(r, b);
            let mut done = true;
            for i in (r + 1)..rows {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                for j in 0..cols {
                    let sub = &q * &m[r][j];
                    m[i][j] -= sub;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for j in 0..cols {
                m[r][j] = -m[r][j].clone();
            }
        }
        // Reduce the entries above the pivot into [0, pivot).
        for i in 0..r {
            if m[i][c].is_zero() {
                continue;
            }
            let q = m[i][c].div_floor(&m[r][c]);
            for j in 0..cols {
                let sub = &q * &m[r][j];
                m[i][j] -= sub;
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Basis of the left kernel `{x : x·m = 0}` of an integer matrix, as rows.
///
/// Computed from the HNF of `[m | I]`: unimodular row operations carry the
/// identity block along, and the rows whose `m`-block vanished record the
/// integer combinations that kill `m`. The result is a basis of the full
/// kernel sublattice (saturated, since HNF transforms are unimodular).
pub fn left_kernel(m: &MatZ) -> MatZ {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let aug: MatZ = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..rows {
                r.push(if i == j { BigInt::one() } else { BigInt::zero() });
            }
            r
        })
        .collect();
    // HNF processes the m-columns first, so kernel rows sink to the bottom
    // with a zeroed m-block.
    hnf(aug)
        .into_iter()
        .filter(|row| row[..cols].iter().all(Zero::is_zero))
        .map(|row| row[cols..].to_vec())
        .collect()
}

/// Determinant by cofactor expansion (intended for n ≤ 4).
pub fn det_z(m: &MatZ) -> BigInt {
    let n = m.len();
    match n {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = BigInt::zero();
            for (j, entry) in m[0].iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let minor: MatZ = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = entry * det_z(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

/// Determinant of a rational matrix by cofactor expansion (n ≤ 4).
pub fn det_q(m: &MatQ) -> Rational {
    let n = m.len();
    match n {
        0 => Rational::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Rational::zero();
            for (j, entry) in m[0].iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let minor: MatQ = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = entry * det_q(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

/// Inverse of a square rational matrix by Gauss–Jordan, `None` if singular.
pub fn invert_q(m: &MatQ) -> Option<MatQ> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv: MatQ = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let s = &f * &a[col][j];
                a[r][j] -= s;
                let s = &f * &inv[col][j];
                inv[r][j] -= s;
            }
        }
    }
    Some(inv)
}

/// Basis of the null space `{x : m·x = 0}` (column vectors, returned as
/// plain vectors) of a rational matrix with any shape.
pub fn null_space_q(m: &MatQ) -> Vec<Vec<Rational>> {
    if m.is_empty() {
        return Vec::new();
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a = m.clone();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][c].clone();
        for j in 0..cols {
            a[r][j] /= &pv;
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..cols {
                let s = &f * &a[r][j];
                a[i][j] -= s;
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for &(pr, pc) in &pivots {
            v[pc] = -a[pr][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Matrix product over ℚ.
pub fn mat_mul_q(a: &MatQ, b: &MatQ) -> MatQ {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = Rational::zero();
                    for l in 0..k {
                        s += &a[i][l] * &b[l][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Matrix product over ℤ.
pub fn mat_mul_z(a: &MatZ, b: &MatZ) -> MatZ {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for l in 0..k {
                        s += &a[i][l] * &b[l][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Transpose.
pub fn transpose_q(m: &MatQ) -> MatQ {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Integer matrix promoted to rationals.
pub fn to_q(m: &MatZ) -> MatQ {
    m.iter()
        .map(|row| row.iter().map(|v| Rational::from(v.clone())).collect())
        .collect()
}

/// Identity matrix over ℤ.
pub fn identity_z(n: usize) -> MatZ {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}
