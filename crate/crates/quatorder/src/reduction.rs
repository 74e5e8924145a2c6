//! Exact lattice reduction and enumeration: rational Cholesky, Fincke–Pohst
//! short vectors, Gram-space LLL, and Gram-matched isometry search.
//!
//! All three engines work on Gram matrices with exact rational arithmetic —
//! there is no floating point in this crate, because the downstream
//! consumers (unit groups, ideal isomorphism, mass certificates, integral
//! form equivalence) are exact identities.
//!
//! * `short_coords` enumerates every integer vector x with x·G·xᵀ equal to
//!   a target value, by the Fincke–Pohst traversal of the Cholesky
//!   decomposition Q(x) = Σᵢ qᵢ·(xᵢ + Σ_{j>i} μᵢⱼ xⱼ)². Level bounds are
//!   maintained as exact inequalities (no square roots): each level scans
//!   outward from the real center while the partial sum fits.
//! * `lll_reduce` is the classical δ = 3/4 LLL on a Gram matrix, returning
//!   the reduced Gram and the unimodular transformation.
//! * `find_isometry_with` searches for a basis mapping between two lattices
//!   with prescribed Gram matrices by backtracking over short-vector
//!   candidates bucketed by norm; an accept callback lets callers reject
//!   isometries that fail side conditions (and keep searching).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{QuatAlgebra, QuatElement};
use crate::lattice::{GramMatrix, Lattice4};
use crate::linalg::{det_q, mat_mul_q, to_q, transpose_q, MatQ, MatZ};
use crate::rational::Rational;

/// Rational Cholesky data: Q(x) = Σ qᵢ·(xᵢ + Σ_{j>i} μᵢⱼ·xⱼ)².
struct Cholesky {
    q: Vec<Rational>,
    mu: MatQ,
}

/// Decomposes a symmetric matrix; `None` if it is not positive definite.
fn cholesky(g: &GramMatrix) -> Option<Cholesky> {
    let n = g.len();
    let mut a = g.clone();
    let mut q = Vec::with_capacity(n);
    let mut mu: MatQ = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        let qi = a[i][i].clone();
        if !qi.is_positive() {
            return None;
        }
        for j in (i + 1)..n {
            mu[i][j] = &a[i][j] / &qi;
        }
        for k in (i + 1)..n {
            for l in (i + 1)..n {
                let s = &a[i][k] * &a[i][l] / &qi;
                a[k][l] -= s;
            }
        }
        q.push(qi);
    }
    Some(Cholesky { q, mu })
}

/// All integer vectors x with x·G·xᵀ = target, sorted lexicographically by
/// coordinates from the last index to the first.
///
/// Vectors come in ± pairs; both members are returned. `target = 0` yields
/// the zero vector, negative targets nothing.
pub fn short_coords(g: &GramMatrix, target: &Rational) -> Vec<Vec<BigInt>> {
    let n = g.len();
    if target.is_zero() {
        return vec![vec![BigInt::zero(); n]];
    }
    if target.is_negative() {
        return Vec::new();
    }
    let ch = cholesky(g).expect("short-vector enumeration needs a positive definite Gram");
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    descend(&ch, n, target, &mut x, &Rational::zero(), target, &mut out);
    out.sort_by(|a, b| {
        for i in (0..n).rev() {
            match a[i].cmp(&b[i]) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    out
}

/// Recursive Fincke–Pohst level scan. `level` counts down; `partial` is the
/// value already accumulated at the levels above, `rem` the remaining
/// budget (target − partial).
fn descend(
    ch: &Cholesky,
    level: usize,
    target: &Rational,
    x: &mut Vec<BigInt>,
    partial: &Rational,
    rem: &Rational,
    out: &mut Vec<Vec<BigInt>>,
) {
    let i = level - 1;
    let center: Rational = ((i + 1)..x.len())
        .map(|j| &ch.mu[i][j] * Rational::from(x[j].clone()))
        .sum();
    let term = |xi: &BigInt| {
        let d = Rational::from(xi.clone()) + &center;
        &ch.q[i] * &d * &d
    };
    let scan = |xi0: BigInt, step: i64, ch_out: &mut Vec<Vec<BigInt>>, x: &mut Vec<BigInt>| {
        let mut xi = xi0;
        loop {
            let t = term(&xi);
            if &t > rem {
                break;
            }
            x[i] = xi.clone();
            let new_partial = partial + &t;
            if i == 0 {
                if new_partial == *target {
                    ch_out.push(x.clone());
                }
            } else {
                let new_rem = rem - &t;
                descend(ch, i, target, x, &new_partial, &new_rem, ch_out);
            }
            xi += step;
        }
    };
    let start = (-center.clone()).ceil().to_integer();
    scan(start.clone(), 1, out, x);
    scan(start - 1, -1, out, x);
    x[i] = BigInt::zero();
}

/// Lattice vectors of exact reduced norm t, in the deterministic coordinate
/// order of `short_coords` mapped through the lattice basis.
///
/// The Gram of the trace pairing represents 2·nrd, so the form target is 2t.
pub fn short_vectors(l: &Lattice4, algebra: &QuatAlgebra, t: &Rational) -> Vec<QuatElement> {
    assert!(
        algebra.is_definite(),
        "short vectors require a definite algebra"
    );
    let g = l.gram(algebra);
    let target = t + t;
    let basis = l.basis_elements();
    short_coords(&g, &target)
        .into_iter()
        .map(|coords| {
            let mut acc = QuatElement::zero();
            for (c, b) in coords.iter().zip(basis.iter()) {
                acc = acc.add(&b.scale(&Rational::from(c.clone())));
            }
            acc
        })
        .collect()
}

/// Nearest integer to a rational (ties round up, deterministically).
fn round_nearest(r: &Rational) -> BigInt {
    (r + Rational::new(BigInt::one(), BigInt::from(2)))
        .floor()
        .to_integer()
}

/// Gram–Schmidt data for LLL: orthogonal norms B*ᵢ and coefficients
/// μᵢⱼ (j < i), derived from the Gram matrix alone.
fn gso(g: &GramMatrix) -> (Vec<Rational>, MatQ) {
    let n = g.len();
    let mut bstar = vec![Rational::zero(); n];
    let mut mu: MatQ = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j].clone();
            for k in 0..j {
                s -= &mu[i][k] * &mu[j][k] * &bstar[k];
            }
            mu[i][j] = s / &bstar[j];
        }
        let mut s = g[i][i].clone();
        for k in 0..i {
            s -= &mu[i][k] * &mu[i][k] * &bstar[k];
        }
        bstar[i] = s;
    }
    (bstar, mu)
}

/// LLL reduction (δ = 3/4) of a positive definite Gram matrix.
///
/// Returns the reduced Gram G′ and a unimodular U with U·G·Uᵀ = G′.
pub fn lll_reduce(g: &GramMatrix) -> (GramMatrix, MatZ) {
    let n = g.len();
    let mut g = g.clone();
    let mut u = crate::linalg::identity_z(n);
    let delta = Rational::new(BigInt::from(3), BigInt::from(4));
    if n < 2 {
        return (g, u);
    }
    // Basis operation: row_k ← row_k − r·row_j, applied to the Gram on both
    // sides and to the transformation rows.
    let reduce_row = |g: &mut GramMatrix, u: &mut MatZ, k: usize, j: usize, r: &BigInt| {
        if r.is_zero() {
            return;
        }
        let rq = Rational::from(r.clone());
        for c in 0..g.len() {
            let s = &rq * &g[j][c];
            g[k][c] -= s;
        }
        for row in g.iter_mut() {
            let s = &rq * &row[j];
            row[k] -= s;
        }
        for c in 0..u[0].len() {
            let s = r * &u[j][c];
            u[k][c] -= s;
        }
    };
    let mut k = 1usize;
    loop {
        // Size-reduce row k against all previous rows (μ changes after each
        // subtraction, so the coefficients are recomputed per step).
        for j in (0..k).rev() {
            let (_, mu_now) = gso(&g);
            let r = round_nearest(&mu_now[k][j]);
            reduce_row(&mut g, &mut u, k, j, &r);
        }
        let (bstar, mu) = gso(&g);
        let lhs = bstar[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bstar[k - 1];
        if lhs >= rhs {
            k += 1;
            if k == n {
                break;
            }
        } else {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            u.swap(k, k - 1);
            k = k.max(2) - 1;
        }
    }
    (g, u)
}

/// Searches for U with U·G₂·Uᵀ = G₁ (rows of U are the coordinates, in the
/// second lattice, of the images of the first lattice's basis).
///
/// `accept` may reject a candidate isometry and keep the search going; the
/// first accepted transformation is returned. The search is exhaustive: it
/// returns `None` only if no isometry satisfies the callback.
pub fn find_isometry_with<F>(g1: &GramMatrix, g2: &GramMatrix, mut accept: F) -> Option<MatZ>
where
    F: FnMut(&MatZ) -> bool,
{
    let n = g1.len();
    assert_eq!(n, g2.len(), "Gram dimensions differ");
    if det_q(g1) != det_q(g2) {
        return None;
    }
    // Candidate images of the i-th basis vector: all vectors of the right
    // norm in the target lattice, bucketed per distinct diagonal value.
    let mut buckets: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut found: Option<&Vec<Vec<BigInt>>> = None;
        for j in 0..i {
            if g1[j][j] == g1[i][i] {
                found = Some(&buckets[j]);
                break;
            }
        }
        let list = match found {
            Some(l) => l.clone(),
            None => short_coords(g2, &g1[i][i]),
        };
        buckets.push(list);
    }
    let pair = |u: &Vec<BigInt>, v: &Vec<BigInt>| -> Rational {
        let mut s = Rational::zero();
        for a in 0..n {
            for b in 0..n {
                if u[a].is_zero() || v[b].is_zero() {
                    continue;
                }
                s += Rational::from(&u[a] * &v[b]) * &g2[a][b];
            }
        }
        s
    };
    fn backtrack<F>(
        n: usize,
        g1: &GramMatrix,
        buckets: &[Vec<Vec<BigInt>>],
        pair: &dyn Fn(&Vec<BigInt>, &Vec<BigInt>) -> Rational,
        chosen: &mut Vec<Vec<BigInt>>,
        accept: &mut F,
    ) -> Option<MatZ>
    where
        F: FnMut(&MatZ) -> bool,
    {
        let i = chosen.len();
        if i == n {
            let u: MatZ = chosen.clone();
            if accept(&u) {
                return Some(u);
            }
            return None;
        }
        for cand in &buckets[i] {
            if chosen
                .iter()
                .enumerate()
                .all(|(j, prev)| pair(cand, prev) == g1[i][j])
            {
                chosen.push(cand.clone());
                if let Some(u) = backtrack(n, g1, buckets, pair, chosen, accept) {
                    return Some(u);
                }
                chosen.pop();
            }
        }
        None
    }
    let mut chosen = Vec::with_capacity(n);
    backtrack(n, g1, &buckets, &pair, &mut chosen, &mut accept)
}

/// First isometry between two Gram matrices, if any.
pub fn find_isometry(g1: &GramMatrix, g2: &GramMatrix) -> Option<MatZ> {
    find_isometry_with(g1, g2, |_| true)
}

/// Integral equivalence test for positive definite Gram matrices.
pub fn isometric(g1: &GramMatrix, g2: &GramMatrix) -> bool {
    find_isometry(g1, g2).is_some()
}

/// Checks U·G₂·Uᵀ = G₁ exactly (test and assertion helper).
pub fn is_isometry(u: &MatZ, g1: &GramMatrix, g2: &GramMatrix) -> bool {
    let uq = to_q(u);
    let lhs = mat_mul_q(&mat_mul_q(&uq, g2), &transpose_q(&uq));
    lhs == *g1
}
