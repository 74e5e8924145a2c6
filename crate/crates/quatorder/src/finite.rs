//! Finite-dimensional algebras over prime fields F_p.
//!
//! An order reduced mod p is a unital F_p-algebra of dimension 4 given by
//! structure constants; everything local that the invariant computations
//! need happens here: Jacobson radicals, unit counts, idempotent counts,
//! quotients by ideals, and the enumeration of subspaces, subalgebras and
//! right submodules.
//!
//! The radical is computed by two independent routes:
//!
//! * a brute-force scan — x lies in the radical iff the right ideal x·A is
//!   nilpotent (nil one-sided ideals lie in the radical, and the radical of
//!   a 4-dimensional algebra has nilpotency index ≤ 4) — used whenever the
//!   p^dim element count is small enough to enumerate;
//! * the staged trace-form method of Friedl and Rónyai, which repairs the
//!   failure of the plain trace form in small characteristic: stage i
//!   intersects with the kernel of x ↦ Tr((L̃ₓ·L̃_y)^{pⁱ})/pⁱ mod p, where
//!   L̃ denotes the entrywise lift of the left-regular matrix to [0, p).
//!   After ⌊log_p dim⌋ + 1 stages the chain stabilises at the radical.
//!
//! Both routes are exact; the test suite runs them side by side.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Vector over F_p with entries reduced to [0, p).
pub type FpVec = Vec<u64>;
/// Row-major matrix over F_p.
pub type FpMat = Vec<Vec<u64>>;

/// Reduces an integer to its canonical residue in [0, m).
pub fn fp_reduce(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits in u64")
}

/// A unital associative algebra over F_p given by structure constants:
/// `table[i][j]` holds the coordinates of bᵢ·bⱼ in the basis b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpAlgebra {
    p: u64,
    dim: usize,
    table: Vec<Vec<FpVec>>,
    one: FpVec,
}

impl FpAlgebra {
    /// Builds an algebra from reduced structure constants and the
    /// coordinates of the unit element; checks that the unit acts as the
    /// identity on the basis.
    pub fn new(p: u64, table: Vec<Vec<FpVec>>, one: FpVec) -> Self {
        let dim = table.len();
        assert!(dim > 0, "zero-dimensional algebra");
        assert!(table.iter().all(|r| r.len() == dim));
        assert!(table.iter().flatten().all(|v| v.len() == dim));
        assert!(
            table.iter().flatten().flatten().all(|&c| c < p),
            "structure constants must be reduced mod p"
        );
        let alg = FpAlgebra { p, dim, table, one };
        for j in 0..dim {
            let e = unit_vec(dim, j);
            assert_eq!(alg.mul(&alg.one, &e), e, "unit fails on the left");
            assert_eq!(alg.mul(&e, &alg.one), e, "unit fails on the right");
        }
        alg
    }

    /// Reduces integer structure constants and unit coordinates mod p.
    pub fn from_structure_constants(p: u64, sc: &[Vec<Vec<BigInt>>], one: &[BigInt]) -> Self {
        let table = sc
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().map(|c| fp_reduce(c, p)).collect())
                    .collect()
            })
            .collect();
        let one = one.iter().map(|c| fp_reduce(c, p)).collect();
        Self::new(p, table, one)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn one(&self) -> &FpVec {
        &self.one
    }

    /// Product of two coordinate vectors.
    pub fn mul(&self, x: &FpVec, y: &FpVec) -> FpVec {
        let mut out = vec![0u64; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = (xi * yj) % self.p;
                for (o, &t) in out.iter_mut().zip(&self.table[i][j]) {
                    *o = (*o + c * t) % self.p;
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by x acting on row vectors: row j is
    /// x·bⱼ, so y·L = x·y for any row vector y. Its rows span the right
    /// ideal x·A.
    pub fn left_mul_matrix(&self, x: &FpVec) -> FpMat {
        (0..self.dim)
            .map(|j| self.mul(x, &unit_vec(self.dim, j)))
            .collect()
    }

    pub fn is_commutative(&self) -> bool {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if self.table[i][j] != self.table[j][i] {
                    return false;
                }
            }
        }
        true
    }

    /// Number of elements, p^dim; panics if it overflows enumeration range.
    pub fn element_count(&self) -> u64 {
        let n = (self.p as u128).pow(self.dim as u32);
        u64::try_from(n).expect("element count fits in u64")
    }

    fn element(&self, mut idx: u64) -> FpVec {
        let mut v = vec![0u64; self.dim];
        for slot in v.iter_mut() {
            *slot = idx % self.p;
            idx /= self.p;
        }
        v
    }
}

fn unit_vec(dim: usize, j: usize) -> FpVec {
    let mut v = vec![0u64; dim];
    v[j] = 1;
    v
}

/// Modular inverse for prime modulus.
fn inv_mod(a: u64, p: u64) -> u64 {
    crate::rational::mod_inverse(a % p, p).expect("nonzero residue mod a prime is invertible")
}

/// Reduced row echelon form over F_p; zero rows are dropped, so the result
/// is a canonical basis of the row span.
pub fn rref_mod_p(rows: &FpMat, p: u64) -> FpMat {
    let mut m: FpMat = rows.iter().map(|r| r.iter().map(|&v| v % p).collect()).collect();
    if m.is_empty() {
        return m;
    }
    let ncols = m[0].len();
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        let Some(r) = (pivot_row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(pivot_row, r);
        let inv = inv_mod(m[pivot_row][col], p);
        for v in m[pivot_row].iter_mut() {
            *v = (*v * inv) % p;
        }
        for r in 0..m.len() {
            if r != pivot_row && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..ncols {
                    let sub = (f * m[pivot_row][c]) % p;
                    m[r][c] = (m[r][c] + p * p - sub) % p;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == m.len() {
            break;
        }
    }
    m.truncate(pivot_row);
    m
}

/// Rank of the row span over F_p.
pub fn rank_mod_p(rows: &FpMat, p: u64) -> usize {
    rref_mod_p(rows, p).len()
}

/// Basis of {x : M·xᵀ = 0} where the rows of M are linear constraints on
/// `ncols` variables. With no constraints the kernel is the full space.
pub fn right_kernel_mod_p(m: &FpMat, ncols: usize, p: u64) -> FpMat {
    let r = rref_mod_p(m, p);
    let mut pivots = Vec::new();
    for row in &r {
        let col = row.iter().position(|&v| v != 0).expect("no zero rows in rref");
        pivots.push(col);
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (row, &pc) in r.iter().zip(&pivots) {
            // pivot entry is 1: x_pc = -Σ_{free cols} coeff·x_free.
            v[pc] = (p - row[free] % p) % p;
        }
        basis.push(v);
    }
    basis
}

/// Membership test against an rref basis.
pub fn in_span(rref: &FpMat, v: &FpVec, p: u64) -> bool {
    let mut v: FpVec = v.iter().map(|&x| x % p).collect();
    for row in rref {
        let col = row.iter().position(|&x| x != 0).expect("rref rows are nonzero");
        if v[col] != 0 {
            let f = v[col];
            for (slot, &r) in v.iter_mut().zip(row) {
                let sub = (f * r) % p;
                *slot = (*slot + p * p - sub) % p;
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

/// Canonical basis of the span of arbitrary vectors.
pub fn span_mod_p(vectors: &FpMat, p: u64) -> FpMat {
    rref_mod_p(vectors, p)
}

/// Largest k with p^k ≤ dim: the number of extra Friedl–Rónyai stages
/// needed beyond the plain trace form.
fn fr_stages(p: u64, dim: usize) -> u32 {
    let mut k = 0u32;
    let mut pw = p as u128;
    while pw <= dim as u128 {
        k += 1;
        pw *= p as u128;
    }
    k
}

/// Jacobson radical by exhaustive scan: x is radical iff the right ideal
/// x·A is nilpotent, tested exactly via ((x·A)²)² = 0. The scan
/// short-circuits on x⁴ ≠ 0, which already rules x out.
pub fn radical_brute(alg: &FpAlgebra) -> FpMat {
    let p = alg.p;
    let mut members = Vec::new();
    for idx in 0..alg.element_count() {
        let x = alg.element(idx);
        let x2 = alg.mul(&x, &x);
        let x4 = alg.mul(&x2, &x2);
        if x4.iter().any(|&c| c != 0) {
            continue;
        }
        // Full right-ideal nilpotency: S = x·A, then S⁴ = (S²)² = 0.
        let s = rref_mod_p(&alg.left_mul_matrix(&x), p);
        let s2 = span_products(alg, &s, &s);
        let s4 = span_products(alg, &s2, &s2);
        if s4.is_empty() {
            members.push(x);
        }
    }
    rref_mod_p(&members, p)
}

/// Canonical basis of the span of all pairwise products of two spans.
fn span_products(alg: &FpAlgebra, a: &FpMat, b: &FpMat) -> FpMat {
    let mut prods = Vec::new();
    for x in a {
        for y in b {
            prods.push(alg.mul(x, y));
        }
    }
    rref_mod_p(&prods, alg.p)
}

/// Jacobson radical by the staged trace-form method.
pub fn radical_ronyai(alg: &FpAlgebra) -> FpMat {
    let p = alg.p;
    let dim = alg.dim;
    let k = fr_stages(p, dim);
    // I₋₁ = A; stage i cuts down to I_i inside I_{i-1}.
    let mut basis: FpMat = (0..dim).map(|j| unit_vec(dim, j)).collect();
    for i in 0..=k {
        if basis.is_empty() {
            break;
        }
        let pi = (p as u64).pow(i);
        let modulus = pi * p;
        // Lifted left-multiplication matrices for the current basis.
        let lifts: Vec<FpMat> = basis.iter().map(|x| alg.left_mul_matrix(x)).collect();
        // Constraint rows: one per basis vector y of I_{i-1}; the entry at
        // position t is Tr((L̃_{b_t}·L̃_y)^{pⁱ})/pⁱ mod p. Divisibility by
        // pⁱ is part of the theorem for x, y in I_{i-1}.
        let mut constraints: FpMat = Vec::with_capacity(basis.len());
        for ly in &lifts {
            let mut row = Vec::with_capacity(basis.len());
            for lx in &lifts {
                let prod = mat_mul_mod(lx, ly, modulus);
                let pw = mat_pow_mod(&prod, pi, modulus);
                let t = trace_mod(&pw, modulus);
                debug_assert_eq!(t % pi, 0, "stage trace must be divisible by p^i");
                row.push((t / pi) % p);
            }
            constraints.push(row);
        }
        let kern = right_kernel_mod_p(&constraints, basis.len(), p);
        let next: FpMat = kern
            .iter()
            .map(|c| {
                let mut v = vec![0u64; dim];
                for (coeff, b) in c.iter().zip(&basis) {
                    for (slot, &bv) in v.iter_mut().zip(b) {
                        *slot = (*slot + coeff * bv) % p;
                    }
                }
                v
            })
            .collect();
        basis = rref_mod_p(&next, p);
    }
    basis
}

/// Jacobson radical; dispatches on the element count, preferring the
/// exhaustive route while it is affordable.
pub fn radical(alg: &FpAlgebra) -> FpMat {
    let count = (alg.p as u128).pow(alg.dim as u32);
    if count <= 2_000_000 {
        radical_brute(alg)
    } else {
        radical_ronyai(alg)
    }
}

fn mat_mul_mod(a: &FpMat, b: &FpMat, m: u64) -> FpMat {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] =
                    (out[i][j] + crate::rational::mulmod(a[i][k], b[k][j], m)) % m;
            }
        }
    }
    out
}

fn mat_pow_mod(a: &FpMat, mut e: u64, m: u64) -> FpMat {
    let n = a.len();
    let mut result: FpMat = (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul_mod(&result, &base, m);
        }
        base = mat_mul_mod(&base, &base, m);
        e >>= 1;
    }
    result
}

fn trace_mod(a: &FpMat, m: u64) -> u64 {
    a.iter().enumerate().map(|(i, r)| r[i]).fold(0, |s, v| (s + v) % m)
}

/// Determinant over F_p by Gaussian elimination; 0 for singular input.
pub fn det_mod_p(m: &FpMat, p: u64) -> u64 {
    let n = m.len();
    let mut a: FpMat = m.iter().map(|r| r.iter().map(|&v| v % p).collect()).collect();
    let mut det = 1u64;
    for col in 0..n {
        let Some(r) = (col..n).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if r != col {
            a.swap(r, col);
            det = (p - det) % p;
        }
        det = (det * a[col][col]) % p;
        let inv = inv_mod(a[col][col], p);
        for r in (col + 1)..n {
            if a[r][col] != 0 {
                let f = (a[r][col] * inv) % p;
                for c in col..n {
                    let sub = (f * a[col][c]) % p;
                    a[r][c] = (a[r][c] + p * p - sub) % p;
                }
            }
        }
    }
    det
}

/// Number of invertible elements, by exhausting the algebra.
pub fn unit_count(alg: &FpAlgebra) -> u64 {
    let mut n = 0;
    for idx in 0..alg.element_count() {
        let x = alg.element(idx);
        if det_mod_p(&alg.left_mul_matrix(&x), alg.p) != 0 {
            n += 1;
        }
    }
    n
}

/// Number of solutions of e² = e, by exhausting the algebra.
pub fn count_idempotents(alg: &FpAlgebra) -> u64 {
    let mut n = 0;
    for idx in 0..alg.element_count() {
        let x = alg.element(idx);
        if alg.mul(&x, &x) == x {
            n += 1;
        }
    }
    n
}

/// Quotient algebra A/I for a two-sided ideal I given by an rref basis.
///
/// The quotient basis is the image of the standard vectors at the non-pivot
/// columns of I, taken in ascending column order, which makes the
/// construction canonical.
pub fn quotient_algebra(alg: &FpAlgebra, ideal: &FpMat) -> FpAlgebra {
    let p = alg.p;
    let dim = alg.dim;
    let ideal = rref_mod_p(ideal, p);
    let pivots: Vec<usize> = ideal
        .iter()
        .map(|r| r.iter().position(|&v| v != 0).expect("rref rows are nonzero"))
        .collect();
    let complement: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    let qdim = complement.len();
    assert!(qdim > 0, "quotient by the whole algebra");
    let project = |v: &FpVec| -> FpVec {
        let mut v = v.clone();
        for (row, &pc) in ideal.iter().zip(&pivots) {
            if v[pc] != 0 {
                let f = v[pc];
                for (slot, &r) in v.iter_mut().zip(row) {
                    let sub = (f * r) % p;
                    *slot = (*slot + p * p - sub) % p;
                }
            }
        }
        complement.iter().map(|&c| v[c]).collect()
    };
    let mut table = vec![vec![vec![0u64; qdim]; qdim]; qdim];
    for (i, &ci) in complement.iter().enumerate() {
        for (j, &cj) in complement.iter().enumerate() {
            let prod = alg.mul(&unit_vec(dim, ci), &unit_vec(dim, cj));
            table[i][j] = project(&prod);
        }
    }
    let one = project(&alg.one);
    FpAlgebra::new(p, table, one)
}

/// All r-dimensional subspaces of F_p^n, each as its unique rref basis.
pub fn subspaces_mod_p(n: usize, r: usize, p: u64) -> Vec<FpMat> {
    let mut out = Vec::new();
    let mut pivot_sets = Vec::new();
    choose(n, r, 0, &mut Vec::new(), &mut pivot_sets);
    for pivots in pivot_sets {
        // Free entries sit at (i, j) with j > pivots[i] and j not a pivot.
        let mut free_slots = Vec::new();
        for (i, &pi) in pivots.iter().enumerate() {
            for j in (pi + 1)..n {
                if !pivots.contains(&j) {
                    free_slots.push((i, j));
                }
            }
        }
        let total = (p as u128).pow(free_slots.len() as u32);
        let total = u64::try_from(total).expect("subspace family fits enumeration range");
        for mut idx in 0..total {
            let mut rows = vec![vec![0u64; n]; r];
            for (i, &pi) in pivots.iter().enumerate() {
                rows[i][pi] = 1;
            }
            for &(i, j) in &free_slots {
                rows[i][j] = idx % p;
                idx /= p;
            }
            out.push(rows);
        }
    }
    out
}

fn choose(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == r {
        out.push(cur.clone());
        return;
    }
    for c in start..n {
        cur.push(c);
        choose(n, r, c + 1, cur, out);
        cur.pop();
    }
}

/// Does the rref span contain the unit and close under multiplication?
pub fn is_subalgebra(alg: &FpAlgebra, rref: &FpMat) -> bool {
    if !in_span(rref, &alg.one, alg.p) {
        return false;
    }
    for x in rref {
        for y in rref {
            if !in_span(rref, &alg.mul(x, y), alg.p) {
                return false;
            }
        }
    }
    true
}

/// Is the rref span stable under right multiplication by the algebra?
pub fn is_right_submodule(alg: &FpAlgebra, rref: &FpMat) -> bool {
    for x in rref {
        for j in 0..alg.dim {
            if !in_span(rref, &alg.mul(x, &unit_vec(alg.dim, j)), alg.p) {
                return false;
            }
        }
    }
    true
}

/// All proper unital subalgebras (any dimension 1 ≤ d < dim), as rref
/// bases. Subspaces containing the unit correspond to subspaces of the
/// quotient by the unit line, which keeps the enumeration canonical and
/// duplicate-free.
pub fn unital_proper_subalgebras(alg: &FpAlgebra) -> Vec<FpMat> {
    let p = alg.p;
    let dim = alg.dim;
    let one_rref = rref_mod_p(&vec![alg.one.clone()], p);
    assert_eq!(one_rref.len(), 1, "unit element must be nonzero");
    let pivot = one_rref[0]
        .iter()
        .position(|&v| v != 0)
        .expect("unit has a pivot");
    let complement: Vec<usize> = (0..dim).filter(|&c| c != pivot).collect();
    let mut out = Vec::new();
    for extra in 0..dim - 1 {
        for sub in subspaces_mod_p(dim - 1, extra, p) {
            let mut rows = vec![alg.one.clone()];
            for srow in &sub {
                let mut v = vec![0u64; dim];
                for (&val, &col) in srow.iter().zip(&complement) {
                    v[col] = val;
                }
                rows.push(v);
            }
            let rref = rref_mod_p(&rows, p);
            debug_assert_eq!(rref.len(), extra + 1);
            if is_subalgebra(alg, &rref) {
                out.push(rref);
            }
        }
    }
    out
}
