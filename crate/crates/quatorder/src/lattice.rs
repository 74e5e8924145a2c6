//! Rank-4 lattices in a quaternion algebra, in canonical normal form.
//!
//! A lattice L ⊂ B is stored as an integer 4×4 matrix in row-style Hermite
//! normal form together with a minimal positive denominator d, so that the
//! rows divided by d are a basis of L over (1, i, j, k). The canonical form
//! is unique per lattice: structural equality is lattice equality, and the
//! derived `Ord`/`Hash` make lattices directly usable as deduplication keys.
//!
//! On top of the representation this module provides the lattice arithmetic
//! the rest of the crate is built from: sums, intersections (via integer
//! row kernels), products spanned by pairwise element products, trace-form
//! duals, Gram matrices of the reduced-norm pairing, and generalized
//! indices as determinant ratios.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{QuatAlgebra, QuatElement};
use crate::linalg::{det_q, hnf, invert_q, left_kernel, to_q, MatQ, MatZ};
use crate::rational::Rational;
use crate::{Error, Result};

/// Symmetric matrix of trd(bᵢ·conj(bⱼ)) values — the polar Gram of 2·nrd.
pub type GramMatrix = Vec<Vec<Rational>>;

/// A full-rank lattice in B, canonically presented.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice4 {
    /// 4×4 Hermite normal form; row r holds the coordinates of d·bᵣ.
    num: MatZ,
    /// Minimal positive denominator d.
    den: BigInt,
}

impl Lattice4 {
    /// Canonicalizes a spanning list of elements into a lattice.
    ///
    /// Accepts any number of generators (≥ 4 after dependency removal);
    /// fails with `RankDeficient` if they span a proper subspace.
    pub fn from_rows(rows: &[QuatElement]) -> Result<Self> {
        let coords: Vec<[Rational; 4]> = rows.iter().map(QuatElement::coords).collect();
        Self::from_rational_rows(&coords)
    }

    /// Canonicalizes rows of rational coordinates over (1, i, j, k).
    pub fn from_rational_rows(rows: &[[Rational; 4]]) -> Result<Self> {
        let mut den = BigInt::one();
        for row in rows {
            for v in row {
                den = den.lcm(v.denom());
            }
        }
        let int_rows: MatZ = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.numer() * (&den / v.denom()))
                    .collect()
            })
            .collect();
        Self::from_integer_rows(int_rows, den)
    }

    /// Canonicalizes integer rows with a common denominator.
    fn from_integer_rows(rows: MatZ, den: BigInt) -> Result<Self> {
        debug_assert!(den.is_positive());
        let num = hnf(rows);
        if num.len() != 4 {
            return Err(Error::RankDeficient);
        }
        // Minimality of the denominator: strip the common content shared
        // with d.
        let mut g = den.clone();
        for row in &num {
            for v in row {
                g = g.gcd(v);
            }
        }
        if g.is_one() {
            return Ok(Lattice4 { num, den });
        }
        let num = num
            .into_iter()
            .map(|row| row.into_iter().map(|v| v / &g).collect())
            .collect();
        Ok(Lattice4 {
            num,
            den: den / &g,
        })
    }

    /// The standard lattice ℤ + ℤi + ℤj + ℤk.
    pub fn standard() -> Self {
        Lattice4 {
            num: crate::linalg::identity_z(4),
            den: BigInt::one(),
        }
    }

    /// Canonical integer matrix (numerators of d·basis).
    pub fn integer_matrix(&self) -> &MatZ {
        &self.num
    }

    /// The common denominator d.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Basis as algebra elements (rows of num divided by d).
    pub fn basis_elements(&self) -> [QuatElement; 4] {
        std::array::from_fn(|i| {
            QuatElement::from_coords(std::array::from_fn(|j| {
                Rational::new(self.num[i][j].clone(), self.den.clone())
            }))
        })
    }

    /// Basis as a 4×4 rational coordinate matrix.
    pub fn basis_matrix(&self) -> MatQ {
        self.num
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| Rational::new(v.clone(), self.den.clone()))
                    .collect()
            })
            .collect()
    }

    /// |det| of the basis matrix: the covolume relative to ℤ⁴.
    pub fn det_abs(&self) -> Rational {
        // The HNF is upper triangular with positive pivots.
        let mut d = BigInt::one();
        for i in 0..4 {
            d *= &self.num[i][i];
        }
        let den4 = {
            let d2 = &self.den * &self.den;
            &d2 * &d2
        };
        Rational::new(d, den4)
    }

    /// Coordinates of `v` in this basis, if `v` lies in the ℚ-span (always,
    /// for rank 4) — integral coordinates mean lattice membership.
    pub fn solve_coordinates(&self, v: &QuatElement) -> [Rational; 4] {
        // Forward substitution against the upper triangular HNF:
        // w = x·num with w = d·coords(v).
        let mut w: [Rational; 4] =
            std::array::from_fn(|i| v.coords()[i].clone() * Rational::from(self.den.clone()));
        let mut x: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
        for i in 0..4 {
            let xi = w[i].clone() / Rational::from(self.num[i][i].clone());
            for j in i..4 {
                let s = &xi * Rational::from(self.num[i][j].clone());
                w[j] -= s;
            }
            x[i] = xi;
        }
        x
    }

    /// Membership test.
    pub fn contains(&self, v: &QuatElement) -> bool {
        self.solve_coordinates(v)
            .iter()
            .all(|c| c.denom().is_one())
    }

    /// Whole-lattice containment: other ⊆ self.
    pub fn contains_lattice(&self, other: &Lattice4) -> bool {
        other
            .basis_elements()
            .iter()
            .all(|b| self.contains(b))
    }

    /// Smallest lattice containing both operands.
    pub fn sum(&self, other: &Lattice4) -> Lattice4 {
        let den = self.den.lcm(&other.den);
        let mut rows: MatZ = Vec::with_capacity(8);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        for row in &self.num {
            rows.push(row.iter().map(|v| v * &fa).collect());
        }
        for row in &other.num {
            rows.push(row.iter().map(|v| v * &fb).collect());
        }
        Self::from_integer_rows(rows, den).expect("sum of rank-4 lattices has rank 4")
    }

    /// Largest lattice contained in both operands.
    ///
    /// Scale both to a common denominator and intersect the integer row
    /// spans: the kernel of the stacked 8×4 matrix [A; B] records exactly
    /// the pairs (u, v) with u·A = −v·B, whose images u·A span A ∩ B.
    pub fn intersect(&self, other: &Lattice4) -> Lattice4 {
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let a: MatZ = self
            .num
            .iter()
            .map(|row| row.iter().map(|v| v * &fa).collect())
            .collect();
        let mut stacked = a.clone();
        for row in &other.num {
            stacked.push(row.iter().map(|v| v * &fb).collect());
        }
        let kernel = left_kernel(&stacked);
        debug_assert_eq!(kernel.len(), 4, "full-rank lattices intersect in rank 4");
        let rows: MatZ = kernel
            .iter()
            .map(|uv| {
                (0..4)
                    .map(|j| {
                        let mut s = BigInt::zero();
                        for (i, a_row) in a.iter().enumerate() {
                            s += &uv[i] * &a_row[j];
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        Self::from_integer_rows(rows, den).expect("intersection of rank-4 lattices has rank 4")
    }

    /// Lattice generated by all pairwise products of basis elements.
    pub fn mul(&self, other: &Lattice4, algebra: &QuatAlgebra) -> Lattice4 {
        let lhs = self.basis_elements();
        let rhs = other.basis_elements();
        let mut products = Vec::with_capacity(16);
        for x in &lhs {
            for y in &rhs {
                products.push(algebra.mul(x, y));
            }
        }
        Self::from_rows(&products).expect("products of rank-4 lattices span rank 4")
    }

    /// Image under quaternion conjugation.
    pub fn conjugated(&self) -> Lattice4 {
        let rows: Vec<[Rational; 4]> = self
            .basis_elements()
            .iter()
            .map(|b| b.conj().coords())
            .collect();
        Self::from_rational_rows(&rows).expect("conjugation preserves rank")
    }

    /// Scalar multiple r·L (by |r| — a lattice does not see the sign).
    pub fn scale(&self, r: &Rational) -> Lattice4 {
        assert!(!r.is_zero(), "scaling a lattice by zero");
        let rows: Vec<[Rational; 4]> = self
            .basis_elements()
            .iter()
            .map(|b| b.scale(r).coords())
            .collect();
        Self::from_rational_rows(&rows).expect("scaling preserves rank")
    }

    /// Gram matrix of the reduced trace pairing trd(bᵢ·conj(bⱼ)).
    pub fn gram(&self, algebra: &QuatAlgebra) -> GramMatrix {
        let basis = self.basis_elements();
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| algebra.mul(&basis[i], &basis[j].conj()).trd())
                    .collect()
            })
            .collect()
    }

    /// Trace-pairing dual {x ∈ B : trd(x·conj(y)) ∈ ℤ for all y ∈ L}.
    pub fn dual(&self, algebra: &QuatAlgebra) -> Lattice4 {
        let gram = self.gram(algebra);
        let ginv = invert_q(&gram).expect("definite Gram is invertible");
        let basis = self.basis_matrix();
        let dual_rows = crate::linalg::mat_mul_q(&ginv, &basis);
        let rows: Vec<[Rational; 4]> = dual_rows
            .into_iter()
            .map(|r| {
                let mut it = r.into_iter();
                std::array::from_fn(|_| it.next().unwrap())
            })
            .collect();
        Self::from_rational_rows(&rows).expect("dual of a rank-4 lattice has rank 4")
    }
}

/// Canonical form of a generator list (the module-level entry point).
pub fn canonicalize(rows: &[QuatElement]) -> Result<Lattice4> {
    Lattice4::from_rows(rows)
}

/// Smallest lattice containing both.
pub fn lattice_sum(l: &Lattice4, m: &Lattice4) -> Lattice4 {
    l.sum(m)
}

/// Largest lattice contained in both.
pub fn lattice_intersect(l: &Lattice4, m: &Lattice4) -> Lattice4 {
    l.intersect(m)
}

/// Product lattice spanned by pairwise basis products.
pub fn lattice_mul(l: &Lattice4, m: &Lattice4, algebra: &QuatAlgebra) -> Lattice4 {
    l.mul(m, algebra)
}

/// Trace-form dual lattice.
pub fn dual_lattice(l: &Lattice4, algebra: &QuatAlgebra) -> Lattice4 {
    l.dual(algebra)
}

/// Generalized index [M : L] = |det basis(L)| / |det basis(M)| as a positive
/// rational; equals the group index |M/L| when L ⊆ M.
pub fn index(l: &Lattice4, m: &Lattice4) -> Rational {
    l.det_abs() / m.det_abs()
}

/// Determinant of a Gram matrix.
pub fn gram_det(g: &GramMatrix) -> Rational {
    det_q(g)
}

/// Gram matrix of an explicit element list (not necessarily a basis).
pub fn gram_of_elements(elems: &[QuatElement], algebra: &QuatAlgebra) -> GramMatrix {
    (0..elems.len())
        .map(|i| {
            (0..elems.len())
                .map(|j| algebra.mul(&elems[i], &elems[j].conj()).trd())
                .collect()
        })
        .collect()
}

/// Promotes an integer matrix into a Gram matrix.
pub fn gram_from_z(m: &MatZ) -> GramMatrix {
    to_q(m)
}

/// The fractional ideal of ℚ generated by the reduced norms of all lattice
/// elements, returned as its positive generator.
///
/// nrd(Σcᵢbᵢ) expands into the basis norms nrd(bᵢ) and the polarization
/// values trd(bᵢ·conj(bⱼ)), and conversely each polarization value is a
/// difference of element norms, so the gcd over those finitely many numbers
/// generates the whole norm ideal.
pub fn nrd_content(l: &Lattice4, algebra: &QuatAlgebra) -> Rational {
    let basis = l.basis_elements();
    let mut g = Rational::zero();
    for (i, bi) in basis.iter().enumerate() {
        g = crate::rational::rational_gcd(&g, &algebra.nrd(bi));
        for bj in basis.iter().skip(i + 1) {
            let cross = algebra.mul(bi, &bj.conj()).trd();
            g = crate::rational::rational_gcd(&g, &cross);
        }
    }
    g
}
