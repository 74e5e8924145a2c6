//! Orders in definite quaternion algebras and their local invariants.
//!
//! An [`Order`] is a full-rank lattice that contains 1 and is closed under
//! multiplication; construction validates both and precomputes the reduced
//! discriminant N (the square root of the norm-Gram determinant). On top of
//! the raw type this module implements the invariant battery:
//!
//! * Eichler symbols at each prime, read off the semisimple quotient of
//!   O/pO by its Jacobson radical: M₂ (symbol *), split étale (+1),
//!   quadratic field (−1), or the base field itself (0);
//! * radical idealizer steps O ↦ O_L(J) ∩ O_R(J) for the radical preimage
//!   J, whose iteration ascends to the hereditary closure;
//! * Gorenstein and Bass predicates via the trace dual, norm contents and
//!   idealizer chains;
//! * Eichler orders detected literally as intersections of two maximal
//!   overorders, with the overorder set enumerated by a complete
//!   one-prime-at-a-time closure X ⊆ Y ⊆ (1/p)X;
//! * classification labels with a fixed precedence; and
//! * conjugacy testing through the ternary trace-zero lattice: an isometry
//!   of reduced Gram matrices is lifted to an algebra conjugation and
//!   verified on the full order before being accepted.

use std::collections::{BTreeSet, VecDeque};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{QuatAlgebra, QuatElement};
use crate::finite::{self, FpAlgebra, FpMat};
use crate::lattice::{gram_of_elements, nrd_content, GramMatrix, Lattice4};
use crate::linalg::{det_q, left_kernel, null_space_q, MatZ};
use crate::rational::{exact_sqrt_rational, factor, Rational};
use crate::reduction::{find_isometry_with, lll_reduce, short_vectors};
use crate::{Error, Result};

/// Local type of an order at a prime, read from O/pO mod its radical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EichlerSymbol {
    /// Matrix quotient M₂(F_p): maximal and split at p.
    Star,
    /// Split étale quotient F_p × F_p.
    One,
    /// Quadratic field quotient F_p².
    MinusOne,
    /// Quotient reduced to F_p itself.
    Zero,
}

impl EichlerSymbol {
    /// Local mass factor attached to the symbol.
    pub fn lambda(self, p: u64) -> Rational {
        let one = Rational::one();
        let p = Rational::from(BigInt::from(p));
        match self {
            EichlerSymbol::Star => one,
            EichlerSymbol::One => &one + &one / &p,
            EichlerSymbol::MinusOne => &one - &one / &p,
            EichlerSymbol::Zero => &one - &one / (&p * &p),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EichlerSymbol::Star => "*",
            EichlerSymbol::One => "1",
            EichlerSymbol::MinusOne => "-1",
            EichlerSymbol::Zero => "0",
        }
    }

    /// Inverse of [`as_str`](Self::as_str).
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "*" => Ok(EichlerSymbol::Star),
            "1" => Ok(EichlerSymbol::One),
            "-1" => Ok(EichlerSymbol::MinusOne),
            "0" => Ok(EichlerSymbol::Zero),
            other => Err(Error::Parse(format!("unknown Eichler symbol {other:?}"))),
        }
    }
}

impl fmt::Display for EichlerSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Free-function spelling of the local mass factor.
pub fn lambda(symbol: EichlerSymbol, p: u64) -> Rational {
    symbol.lambda(p)
}

/// Classification label; variants are ordered by precedence, and an order
/// receives the first label whose predicate holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrderLabel {
    Maximal,
    Hereditary,
    Eichler,
    ResiduallyInert,
    ResiduallyQuadratic,
    Bass,
    Gorenstein,
    NonGorenstein,
}

impl OrderLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            OrderLabel::Maximal => "maximal",
            OrderLabel::Hereditary => "hereditary",
            OrderLabel::Eichler => "eichler",
            OrderLabel::ResiduallyInert => "residually-inert",
            OrderLabel::ResiduallyQuadratic => "residually-quadratic",
            OrderLabel::Bass => "bass",
            OrderLabel::Gorenstein => "gorenstein",
            OrderLabel::NonGorenstein => "non-gorenstein",
        }
    }

    /// Precedence rank, 0 strongest.
    pub fn rank(self) -> u8 {
        self as u8
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "maximal" => OrderLabel::Maximal,
            "hereditary" => OrderLabel::Hereditary,
            "eichler" => OrderLabel::Eichler,
            "residually-inert" => OrderLabel::ResiduallyInert,
            "residually-quadratic" => OrderLabel::ResiduallyQuadratic,
            "bass" => OrderLabel::Bass,
            "gorenstein" => OrderLabel::Gorenstein,
            "non-gorenstein" => OrderLabel::NonGorenstein,
            other => return Err(Error::Parse(format!("unknown label `{other}`"))),
        })
    }
}

impl fmt::Display for OrderLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An order in a definite quaternion algebra over ℚ.
#[derive(Debug, Clone)]
pub struct Order {
    algebra: QuatAlgebra,
    lattice: Lattice4,
    reduced_disc: BigInt,
    unit_index: OnceLock<u64>,
    structure: OnceLock<(Vec<Vec<Vec<BigInt>>>, Vec<BigInt>)>,
    symbols: OnceLock<Result<BTreeMap<u64, EichlerSymbol>>>,
    label: OnceLock<Result<OrderLabel>>,
}

impl PartialEq for Order {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.lattice == other.lattice
    }
}

impl Eq for Order {}

impl PartialOrd for Order {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Order {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.algebra.a(), self.algebra.b(), &self.lattice).cmp(&(
            other.algebra.a(),
            other.algebra.b(),
            &other.lattice,
        ))
    }
}

impl std::hash::Hash for Order {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.algebra.a().hash(state);
        self.algebra.b().hash(state);
        self.lattice.hash(state);
    }
}

impl Order {
    /// Validates and wraps a lattice as an order.
    pub fn from_lattice(algebra: QuatAlgebra, lattice: Lattice4) -> Result<Self> {
        if !lattice.contains(&QuatElement::one()) {
            return Err(Error::MissingOne);
        }
        let basis = lattice.basis_elements();
        for x in &basis {
            for y in &basis {
                let xy = algebra.mul(x, y);
                if !lattice.contains(&xy) {
                    return Err(Error::NotAnOrder {
                        x: x.clone(),
                        y: y.clone(),
                        xy,
                    });
                }
            }
        }
        let det = crate::lattice::gram_det(&lattice.gram(&algebra));
        let n = exact_sqrt_rational(&det)
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
            .ok_or(Error::NonSquareDiscriminant(det))?;
        Ok(Order {
            algebra,
            lattice,
            reduced_disc: n,
            unit_index: OnceLock::new(),
            structure: OnceLock::new(),
            symbols: OnceLock::new(),
            label: OnceLock::new(),
        })
    }

    /// Builds an order from a spanning set of elements.
    pub fn from_basis(algebra: QuatAlgebra, elements: &[QuatElement]) -> Result<Self> {
        let lattice = Lattice4::from_rows(elements)?;
        Self::from_lattice(algebra, lattice)
    }

    pub fn algebra(&self) -> &QuatAlgebra {
        &self.algebra
    }

    pub fn lattice(&self) -> &Lattice4 {
        &self.lattice
    }

    pub fn basis(&self) -> [QuatElement; 4] {
        self.lattice.basis_elements()
    }

    pub fn contains(&self, v: &QuatElement) -> bool {
        self.lattice.contains(v)
    }

    /// Reduced discriminant N: the positive generator of the square root
    /// of the discriminant ideal.
    pub fn reduced_discriminant(&self) -> &BigInt {
        &self.reduced_disc
    }

    /// Valuation of N at a prime.
    pub fn disc_valuation(&self, p: u64) -> u32 {
        let mut n = self.reduced_disc.clone();
        let p = BigInt::from(p);
        let mut v = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            v += 1;
        }
        v
    }

    /// Is the order maximal at p, i.e. does p divide N no more than it
    /// divides the algebra discriminant?
    pub fn is_p_maximal(&self, p: u64) -> Result<bool> {
        let d = self.algebra.disc()?;
        let vd = if (&d % BigInt::from(p)).is_zero() { 1 } else { 0 };
        Ok(self.disc_valuation(p) == vd)
    }

    /// Index of the unit group modulo central units: half the number of
    /// norm-1 lattice elements.
    pub fn unit_index(&self) -> u64 {
        *self.unit_index.get_or_init(|| {
            let units = short_vectors(&self.lattice, &self.algebra, &Rational::one());
            debug_assert_eq!(units.len() % 2, 0);
            (units.len() / 2) as u64
        })
    }

    /// Structure constants of the basis (products expressed in the basis)
    /// and the coordinates of 1; all integral by closure.
    fn structure(&self) -> &(Vec<Vec<Vec<BigInt>>>, Vec<BigInt>) {
        self.structure.get_or_init(|| {
            let basis = self.lattice.basis_elements();
            let as_int = |r: &Rational| -> BigInt {
                debug_assert!(r.is_integer(), "order coordinates must be integral");
                r.to_integer()
            };
            let sc = basis
                .iter()
                .map(|x| {
                    basis
                        .iter()
                        .map(|y| {
                            self.lattice
                                .solve_coordinates(&self.algebra.mul(x, y))
                                .iter()
                                .map(as_int)
                                .collect()
                        })
                        .collect()
                })
                .collect();
            let one = self
                .lattice
                .solve_coordinates(&QuatElement::one())
                .iter()
                .map(as_int)
                .collect();
            (sc, one)
        })
    }

    /// The algebra O/pO with its structure constants reduced mod p.
    pub fn structure_mod_p(&self, p: u64) -> FpAlgebra {
        let (sc, one) = self.structure();
        FpAlgebra::from_structure_constants(p, sc, one)
    }

    /// Jacobson radical of O/pO as an rref basis in order coordinates.
    pub fn radical_mod_p(&self, p: u64) -> FpMat {
        finite::radical(&self.structure_mod_p(p))
    }

    /// Eichler symbol at a prime.
    pub fn eichler_symbol(&self, p: u64) -> Result<EichlerSymbol> {
        if self.disc_valuation(p) == 0 {
            return Ok(EichlerSymbol::Star);
        }
        let a = self.structure_mod_p(p);
        let rad = finite::radical(&a);
        let q = finite::quotient_algebra(&a, &rad);
        match q.dim() {
            1 => Ok(EichlerSymbol::Zero),
            2 => match finite::count_idempotents(&q) {
                2 => Ok(EichlerSymbol::MinusOne),
                4 => Ok(EichlerSymbol::One),
                _ => Err(Error::UnexpectedSemisimpleQuotient { p, dim: 2 }),
            },
            4 if !q.is_commutative() => Ok(EichlerSymbol::Star),
            d => Err(Error::UnexpectedSemisimpleQuotient { p, dim: d }),
        }
    }

    /// Eichler symbols at every prime dividing N.
    pub fn symbols(&self) -> Result<BTreeMap<u64, EichlerSymbol>> {
        self.symbols
            .get_or_init(|| {
                let mut map = BTreeMap::new();
                for (p, _) in factor(&self.reduced_disc)? {
                    map.insert(p, self.eichler_symbol(p)?);
                }
                Ok(map)
            })
            .clone()
    }

    /// Preimage in O of the radical of O/pO: a two-sided ideal containing
    /// pO.
    pub fn radical_preimage(&self, p: u64) -> Result<Lattice4> {
        let rad = self.radical_mod_p(p);
        let basis = self.lattice.basis_elements();
        let mut rows = Vec::with_capacity(rad.len() + 4);
        for coords in &rad {
            rows.push(combine(&basis, coords));
        }
        let pr = Rational::from(BigInt::from(p));
        for b in &basis {
            rows.push(b.scale(&pr));
        }
        Lattice4::from_rows(&rows)
    }

    /// One radical idealizer step at p: O ↦ O_L(J) ∩ O_R(J) for the
    /// radical preimage J. Fixed points are exactly the orders that are
    /// hereditary at p; at p-maximal primes the step is constant.
    pub fn radical_idealizer(&self, p: u64) -> Result<Order> {
        let j = self.radical_preimage(p)?;
        let ol = left_order_lattice(&j, &self.algebra);
        let or = right_order_lattice(&j, &self.algebra);
        Order::from_lattice(self.algebra.clone(), ol.intersect(&or))
    }

    pub fn is_maximal(&self) -> Result<bool> {
        Ok(self.reduced_disc == self.algebra.disc()?)
    }

    pub fn is_hereditary(&self) -> Result<bool> {
        Ok(factor(&self.reduced_disc)?.iter().all(|&(_, e)| e == 1))
    }

    /// Gorenstein test via the trace dual O♯: the norm content q of O♯
    /// must satisfy O♯·conj(O♯) = q·O = conj(O♯)·O♯ with O recovered as
    /// both the left and the right order of O♯.
    pub fn is_gorenstein(&self) -> Result<bool> {
        let dual = self.lattice.dual(&self.algebra);
        let q = nrd_content(&dual, &self.algebra);
        let dual_conj = dual.conjugated();
        let scaled = self.lattice.scale(&q);
        Ok(left_order_lattice(&dual, &self.algebra) == self.lattice
            && right_order_lattice(&dual, &self.algebra) == self.lattice
            && dual.mul(&dual_conj, &self.algebra) == scaled
            && dual_conj.mul(&dual, &self.algebra) == scaled)
    }

    /// Bass test: every member of every radical idealizer chain must be
    /// Gorenstein.
    pub fn is_bass(&self) -> Result<bool> {
        if !self.is_gorenstein()? {
            return Ok(false);
        }
        for (p, _) in factor(&self.reduced_disc)? {
            let mut cur = self.clone();
            loop {
                let next = cur.radical_idealizer(p)?;
                if next == cur {
                    break;
                }
                if !next.is_gorenstein()? {
                    return Ok(false);
                }
                cur = next;
            }
        }
        Ok(true)
    }

    /// Necessary symbol conditions for being an intersection of two
    /// maximal orders: split primes need symbol +1, ramified primes need
    /// symbol −1 at valuation exactly 1.
    fn eichler_plausible(&self) -> Result<bool> {
        let d = self.algebra.disc()?;
        for (p, s) in self.symbols()? {
            let ramified = (&d % BigInt::from(p)).is_zero();
            let ok = match s {
                EichlerSymbol::One => true,
                EichlerSymbol::MinusOne => ramified && self.disc_valuation(p) == 1,
                _ => false,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Is this order the intersection of two (not necessarily distinct)
    /// maximal orders? Decided literally against the overorder lattice.
    pub fn is_eichler(&self) -> Result<bool> {
        let maxs = maximal_overorders(self)?;
        for (i, m1) in maxs.iter().enumerate() {
            for m2 in &maxs[i..] {
                if m1.lattice.intersect(&m2.lattice) == self.lattice {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// The strongest applicable label under the fixed precedence
    /// Maximal → Hereditary → Eichler → residually inert → residually
    /// quadratic → Bass → Gorenstein → non-Gorenstein.
    pub fn strongest_label(&self) -> Result<OrderLabel> {
        self.label
            .get_or_init(|| {
                if self.is_maximal()? {
                    return Ok(OrderLabel::Maximal);
                }
                if self.is_hereditary()? {
                    return Ok(OrderLabel::Hereditary);
                }
                // The symbol screen is only a necessary condition; the
                // expensive intersection test stays the decider.
                if self.eichler_plausible()? && self.is_eichler()? {
                    return Ok(OrderLabel::Eichler);
                }
                let symbols = self.symbols()?;
                if symbols.values().all(|&s| s == EichlerSymbol::MinusOne) {
                    return Ok(OrderLabel::ResiduallyInert);
                }
                if symbols
                    .values()
                    .all(|&s| matches!(s, EichlerSymbol::One | EichlerSymbol::MinusOne))
                {
                    return Ok(OrderLabel::ResiduallyQuadratic);
                }
                if self.is_bass()? {
                    return Ok(OrderLabel::Bass);
                }
                if self.is_gorenstein()? {
                    return Ok(OrderLabel::Gorenstein);
                }
                Ok(OrderLabel::NonGorenstein)
            })
            .clone()
    }

    /// Basis of the trace-zero sublattice O⁰ = {x ∈ O : trd x = 0} with
    /// its (positive definite, integral) ternary Gram matrix.
    pub fn trace_zero_basis(&self) -> (Vec<QuatElement>, GramMatrix) {
        let basis = self.lattice.basis_elements();
        let traces: MatZ = basis
            .iter()
            .map(|b| {
                let t = b.trd();
                debug_assert!(t.is_integer());
                vec![t.to_integer()]
            })
            .collect();
        let kernel = left_kernel(&traces);
        debug_assert_eq!(kernel.len(), 3, "trace-zero sublattice has rank 3");
        let elems: Vec<QuatElement> = kernel
            .iter()
            .map(|row| {
                let mut acc = QuatElement::zero();
                for (c, b) in row.iter().zip(basis.iter()) {
                    acc = acc.add(&b.scale(&Rational::from(c.clone())));
                }
                acc
            })
            .collect();
        let gram = gram_of_elements(&elems, &self.algebra);
        (elems, gram)
    }
}

/// Free-function alias for [`Order::from_basis`].
pub fn order_from_basis(algebra: QuatAlgebra, elements: &[QuatElement]) -> Result<Order> {
    Order::from_basis(algebra, elements)
}

fn combine(basis: &[QuatElement; 4], coords: &[u64]) -> QuatElement {
    let mut acc = QuatElement::zero();
    for (c, b) in coords.iter().zip(basis.iter()) {
        if *c != 0 {
            acc = acc.add(&b.scale(&Rational::from(BigInt::from(*c))));
        }
    }
    acc
}

/// Left order of a lattice: {x : x·L ⊆ L} = ⋂ⱼ L·bⱼ⁻¹.
pub fn left_order_lattice(l: &Lattice4, algebra: &QuatAlgebra) -> Lattice4 {
    transporter(l, algebra, true)
}

/// Right order of a lattice: {x : L·x ⊆ L} = ⋂ⱼ bⱼ⁻¹·L.
pub fn right_order_lattice(l: &Lattice4, algebra: &QuatAlgebra) -> Lattice4 {
    transporter(l, algebra, false)
}

fn transporter(l: &Lattice4, algebra: &QuatAlgebra, left: bool) -> Lattice4 {
    let basis = l.basis_elements();
    let mut acc: Option<Lattice4> = None;
    for b in &basis {
        let binv = algebra
            .inverse(b)
            .expect("basis elements of a full lattice are invertible");
        let rows: Vec<QuatElement> = l
            .basis_elements()
            .iter()
            .map(|x| {
                if left {
                    algebra.mul(x, &binv)
                } else {
                    algebra.mul(&binv, x)
                }
            })
            .collect();
        let shifted = Lattice4::from_rows(&rows).expect("shifted lattice keeps full rank");
        acc = Some(match acc {
            None => shifted,
            Some(prev) => prev.intersect(&shifted),
        });
    }
    acc.expect("lattice has four basis vectors")
}

/// Conjugated order α·O·α⁻¹.
pub fn conjugate_order(o: &Order, alpha: &QuatElement) -> Result<Order> {
    let inv = o.algebra().inverse(alpha)?;
    let rows: Vec<QuatElement> = o
        .basis()
        .iter()
        .map(|b| o.algebra().mul(&o.algebra().mul(alpha, b), &inv))
        .collect();
    Order::from_lattice(o.algebra().clone(), Lattice4::from_rows(&rows)?)
}

/// Every order containing the given one (including itself).
///
/// The closure explores, for each prime p dividing N/D, all lattices
/// between X and (1/p)X; iterating this is complete because any overorder
/// chain can be refined through p·O_{i+1} ⊆ O_i steps, while single
/// index-p steps alone can miss intermediate-free inclusions of index p².
pub fn all_overorders(o: &Order) -> Result<Vec<Order>> {
    let d = o.algebra().disc()?;
    let mut seen: BTreeSet<Lattice4> = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(o.lattice().clone());
    queue.push_back(o.clone());
    while let Some(x) = queue.pop_front() {
        let ratio = x.reduced_discriminant() / &d;
        debug_assert!((x.reduced_discriminant() % &d).is_zero());
        for (p, _) in factor(&ratio)? {
            for y in overorders_one_step(&x, p) {
                if seen.insert(y.lattice().clone()) {
                    queue.push_back(y.clone());
                    out.push(y);
                }
            }
        }
        out.push(x);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// All orders Y with X ⊆ Y ⊆ (1/p)X, via subspaces of the quotient
/// (1/p)X / X ≅ F_p⁴.
fn overorders_one_step(x: &Order, p: u64) -> Vec<Order> {
    let sup = x
        .lattice()
        .scale(&Rational::new(BigInt::one(), BigInt::from(p)));
    let sup_basis = sup.basis_elements();
    let x_basis = x.basis();
    let mut out = Vec::new();
    for dim in 1..=4usize {
        for w in finite::subspaces_mod_p(4, dim, p) {
            let mut rows: Vec<QuatElement> = x_basis.to_vec();
            for coords in &w {
                rows.push(combine(&sup_basis, coords));
            }
            let Ok(lat) = Lattice4::from_rows(&rows) else {
                continue;
            };
            if lat == *x.lattice() {
                continue;
            }
            if let Ok(ord) = Order::from_lattice(x.algebra().clone(), lat) {
                out.push(ord);
            }
        }
    }
    out
}

/// The maximal orders containing the given order.
pub fn maximal_overorders(o: &Order) -> Result<Vec<Order>> {
    let mut out = Vec::new();
    for cand in all_overorders(o)? {
        if cand.is_maximal()? {
            out.push(cand);
        }
    }
    Ok(out)
}

/// Conjugacy test with witness: `Some(α)` with α·O₁·α⁻¹ = O₂ if the orders
/// are isomorphic, `None` otherwise. Cheap invariants are compared before
/// the geometric search.
pub fn order_isomorphic(o1: &Order, o2: &Order) -> Result<Option<QuatElement>> {
    if o1.algebra() != o2.algebra() {
        return Err(Error::DifferentAlgebras);
    }
    if o1 == o2 {
        return Ok(Some(QuatElement::one()));
    }
    if o1.reduced_discriminant() != o2.reduced_discriminant()
        || o1.unit_index() != o2.unit_index()
        || o1.symbols()? != o2.symbols()?
    {
        return Ok(None);
    }
    order_isomorphic_geometric(o1, o2)
}

/// The geometric route alone, with no invariant shortcuts: enumerate
/// isometries of the reduced trace-zero Gram matrices, lift each to a
/// conjugation candidate, and accept only after verifying the conjugated
/// order equals the target. Isomorphic quaternion orders always share
/// their trace-zero isometry class, but the converse fails, so the final
/// verification is load-bearing.
pub fn order_isomorphic_geometric(o1: &Order, o2: &Order) -> Result<Option<QuatElement>> {
    if o1.algebra() != o2.algebra() {
        return Err(Error::DifferentAlgebras);
    }
    let (v1, g1) = o1.trace_zero_basis();
    let (v2, g2) = o2.trace_zero_basis();
    let (r1, u1) = lll_reduce(&g1);
    let (r2, u2) = lll_reduce(&g2);
    let e1 = transform_elements(&v1, &u1);
    let e2 = transform_elements(&v2, &u2);
    let mut witness: Option<QuatElement> = None;
    find_isometry_with(&r1, &r2, |w| {
        let images: Vec<QuatElement> = w
            .iter()
            .map(|row| {
                let mut acc = QuatElement::zero();
                for (c, b) in row.iter().zip(&e2) {
                    acc = acc.add(&b.scale(&Rational::from(c.clone())));
                }
                acc
            })
            .collect();
        match conjugation_witness(o1, o2, &e1, images) {
            Some(alpha) => {
                witness = Some(alpha);
                true
            }
            None => false,
        }
    });
    Ok(witness)
}

fn transform_elements(v: &[QuatElement], u: &MatZ) -> Vec<QuatElement> {
    u.iter()
        .map(|row| {
            let mut acc = QuatElement::zero();
            for (c, b) in row.iter().zip(v) {
                acc = acc.add(&b.scale(&Rational::from(c.clone())));
            }
            acc
        })
        .collect()
}

/// Attempts to realize the trace-zero isometry eᵢ ↦ imageᵢ as an inner
/// automorphism and verifies it on the whole order.
fn conjugation_witness(
    o1: &Order,
    o2: &Order,
    from: &[QuatElement],
    mut to: Vec<QuatElement>,
) -> Option<QuatElement> {
    let algebra = o1.algebra();
    // Orientation: extend by 1 ↦ 1 and compare determinants; conjugations
    // are rotations of the trace-zero space, and the reversal x ↦ -x turns
    // an improper isometry into one (odd dimension).
    let det_of = |els: &[QuatElement]| {
        let mut m = vec![QuatElement::one().coords().to_vec()];
        for e in els {
            m.push(e.coords().to_vec());
        }
        det_q(&m)
    };
    if det_of(from).is_positive() != det_of(&to).is_positive() {
        for t in to.iter_mut() {
            *t = t.neg();
        }
    }
    // Solve α·fᵢ = tᵢ·α: twelve linear equations in the four coordinates
    // of α; a genuine rotation admits a solution line.
    let unit = |k: usize| {
        let mut c: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
        c[k] = Rational::one();
        QuatElement::from_coords(c)
    };
    let mut rows = Vec::with_capacity(12);
    for (f, t) in from.iter().zip(&to) {
        let cols: Vec<[Rational; 4]> = (0..4)
            .map(|k| {
                algebra
                    .mul(&unit(k), f)
                    .sub(&algebra.mul(t, &unit(k)))
                    .coords()
            })
            .collect();
        for c in 0..4 {
            rows.push((0..4).map(|k| cols[k][c].clone()).collect::<Vec<_>>());
        }
    }
    let ns = null_space_q(&rows);
    if ns.len() != 1 {
        return None;
    }
    let alpha = primitive_element(&ns[0]);
    if alpha.is_zero() {
        return None;
    }
    let inv = algebra.inverse(&alpha).ok()?;
    let conj_rows: Vec<QuatElement> = o1
        .basis()
        .iter()
        .map(|b| algebra.mul(&algebra.mul(&alpha, b), &inv))
        .collect();
    let conj_lattice = Lattice4::from_rows(&conj_rows).ok()?;
    (conj_lattice == *o2.lattice()).then_some(alpha)
}

/// Clears denominators and content to make the coordinate vector a
/// primitive integer vector with positive leading coordinate.
fn primitive_element(coords: &[Rational]) -> QuatElement {
    let mut den = BigInt::one();
    for c in coords {
        den = den.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = coords
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let mut content = BigInt::zero();
    for v in &ints {
        content = content.gcd(v);
    }
    if !content.is_zero() {
        for v in ints.iter_mut() {
            *v = &*v / &content;
        }
    }
    if let Some(first) = ints.iter().find(|v| !v.is_zero()) {
        if first.is_negative() {
            for v in ints.iter_mut() {
                *v = -&*v;
            }
        }
    }
    QuatElement::from_coords(std::array::from_fn(|i| Rational::from(ints[i].clone())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(n: i64) -> Rational {
        Rational::from(BigInt::from(n))
    }

    fn half() -> Rational {
        Rational::new(BigInt::one(), BigInt::from(2))
    }

    fn alg_11() -> QuatAlgebra {
        QuatAlgebra::from_ints(-1, -1).unwrap()
    }

    fn omega() -> QuatElement {
        QuatElement::new(half(), half(), half(), half())
    }

    fn hurwitz_order() -> Order {
        Order::from_basis(
            alg_11(),
            &[
                QuatElement::one(),
                QuatElement::from_ints(0, 1, 0, 0),
                QuatElement::from_ints(0, 0, 1, 0),
                omega(),
            ],
        )
        .unwrap()
    }

    fn lipschitz_order() -> Order {
        Order::from_basis(
            alg_11(),
            &[
                QuatElement::one(),
                QuatElement::from_ints(0, 1, 0, 0),
                QuatElement::from_ints(0, 0, 1, 0),
                QuatElement::from_ints(0, 0, 0, 1),
            ],
        )
        .unwrap()
    }

    /// ℤ + 2ℤi + 2ℤj + 2ℤij, the deep non-Gorenstein suborder at 2.
    fn deep2_order() -> Order {
        Order::from_basis(
            alg_11(),
            &[
                QuatElement::one(),
                QuatElement::from_ints(0, 2, 0, 0),
                QuatElement::from_ints(0, 0, 2, 0),
                QuatElement::from_ints(0, 0, 0, 2),
            ],
        )
        .unwrap()
    }

    /// ℤ[ω] + 2·Hurwitz: index 4 in the Hurwitz order, residually inert.
    fn inert8_order() -> Order {
        Order::from_basis(
            alg_11(),
            &[
                QuatElement::one(),
                omega(),
                QuatElement::from_ints(0, 2, 0, 0),
                QuatElement::from_ints(0, 0, 2, 0),
            ],
        )
        .unwrap()
    }

    fn parks_order() -> Order {
        Order::from_basis(
            QuatAlgebra::from_ints(-3, -1).unwrap(),
            &[
                QuatElement::one(),
                QuatElement::new(half(), Rational::new(BigInt::from(3), BigInt::from(2)), qi(0), qi(0)),
                QuatElement::from_ints(0, 0, 3, 0),
                QuatElement::new(qi(0), qi(0), Rational::new(BigInt::from(3), BigInt::from(2)), half()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn classical_discriminants_and_units() {
        let h = hurwitz_order();
        assert_eq!(h.reduced_discriminant(), &BigInt::from(2));
        assert_eq!(h.unit_index(), 12);
        let l = lipschitz_order();
        assert_eq!(l.reduced_discriminant(), &BigInt::from(4));
        assert_eq!(l.unit_index(), 4);
        let d = deep2_order();
        assert_eq!(d.reduced_discriminant(), &BigInt::from(32));
        assert_eq!(d.unit_index(), 1);
        let w = inert8_order();
        assert_eq!(w.reduced_discriminant(), &BigInt::from(8));
        assert_eq!(w.unit_index(), 3);
        let p = parks_order();
        assert_eq!(p.reduced_discriminant(), &BigInt::from(27));
        assert_eq!(p.unit_index(), 1);
    }

    #[test]
    fn construction_failures() {
        // No 1 in the span.
        let err = Order::from_basis(
            alg_11(),
            &[
                QuatElement::from_ints(2, 0, 0, 0),
                QuatElement::from_ints(0, 1, 0, 0),
                QuatElement::from_ints(0, 0, 1, 0),
                QuatElement::from_ints(0, 0, 0, 1),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::MissingOne));
        // Not multiplicatively closed: (i/2)² = −1/4.
        let err = Order::from_basis(
            alg_11(),
            &[
                QuatElement::one(),
                QuatElement::new(qi(0), half(), qi(0), qi(0)),
                QuatElement::from_ints(0, 0, 1, 0),
                QuatElement::from_ints(0, 0, 0, 1),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotAnOrder { .. }));
        // Dependent generators.
        let err = Order::from_basis(
            alg_11(),
            &[
                QuatElement::one(),
                QuatElement::from_ints(0, 1, 0, 0),
                QuatElement::from_ints(1, 1, 0, 0),
                QuatElement::from_ints(2, 0, 0, 0),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::RankDeficient));
    }

    #[test]
    fn eichler_symbols_of_reference_orders() {
        assert_eq!(hurwitz_order().eichler_symbol(2).unwrap(), EichlerSymbol::MinusOne);
        assert_eq!(hurwitz_order().eichler_symbol(3).unwrap(), EichlerSymbol::Star);
        assert_eq!(lipschitz_order().eichler_symbol(2).unwrap(), EichlerSymbol::Zero);
        assert_eq!(inert8_order().eichler_symbol(2).unwrap(), EichlerSymbol::MinusOne);
        assert_eq!(parks_order().eichler_symbol(3).unwrap(), EichlerSymbol::Zero);
        assert_eq!(deep2_order().eichler_symbol(2).unwrap(), EichlerSymbol::Zero);
        let syms = lipschitz_order().symbols().unwrap();
        assert_eq!(syms.len(), 1);
        assert_eq!(syms[&2], EichlerSymbol::Zero);
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda(EichlerSymbol::Star, 7), Rational::one());
        assert_eq!(lambda(EichlerSymbol::One, 2), Rational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(lambda(EichlerSymbol::MinusOne, 2), half());
        assert_eq!(
            lambda(EichlerSymbol::Zero, 3),
            Rational::new(BigInt::from(8), BigInt::from(9))
        );
    }

    #[test]
    fn lipschitz_radical_and_idealizer() {
        let l = lipschitz_order();
        let rad = l.radical_mod_p(2);
        assert_eq!(rad.len(), 3);
        // 1+i, 1+j, 1+k generate the radical of the Lipschitz order mod 2.
        for gen in [[1u64, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1]] {
            let coords = l
                .lattice()
                .solve_coordinates(&combine(&l.basis(), &gen))
                .iter()
                .map(|c| crate::finite::fp_reduce(&c.to_integer(), 2))
                .collect::<Vec<_>>();
            assert!(finite::in_span(&rad, &coords, 2));
        }
        assert_eq!(l.radical_idealizer(2).unwrap(), hurwitz_order());
        // Hurwitz is a fixed point.
        assert_eq!(hurwitz_order().radical_idealizer(2).unwrap(), hurwitz_order());
    }

    #[test]
    fn idealizer_chain_ascends_to_maximal() {
        let mut cur = deep2_order();
        let mut steps = 0;
        loop {
            let next = cur.radical_idealizer(2).unwrap();
            if next == cur {
                break;
            }
            assert!(next.lattice().contains_lattice(cur.lattice()));
            cur = next;
            steps += 1;
            assert!(steps < 10, "chain fails to stabilize");
        }
        assert!(cur.is_maximal().unwrap());
        assert_eq!(cur, hurwitz_order());
    }

    #[test]
    fn gorenstein_and_bass_predicates() {
        assert!(hurwitz_order().is_gorenstein().unwrap());
        assert!(hurwitz_order().is_bass().unwrap());
        assert!(lipschitz_order().is_gorenstein().unwrap());
        assert!(lipschitz_order().is_bass().unwrap());
        assert!(parks_order().is_gorenstein().unwrap());
        assert!(parks_order().is_bass().unwrap());
        assert!(inert8_order().is_bass().unwrap());
        // The deep suborder ℤ + 2ℤi + 2ℤj + 2ℤij is not Gorenstein.
        assert!(!deep2_order().is_gorenstein().unwrap());
        assert!(!deep2_order().is_bass().unwrap());
    }

    #[test]
    fn overorder_closure_and_gaps() {
        let l = lipschitz_order();
        let all = all_overorders(&l).unwrap();
        assert_eq!(all.len(), 2);
        assert!(all.contains(&l));
        assert!(all.contains(&hurwitz_order()));
        // ℤ[ω] + 2H sits at index 4 under the Hurwitz order with nothing
        // in between: single index-p steps would never find the closure.
        let w = inert8_order();
        let all = all_overorders(&w).unwrap();
        assert_eq!(all.len(), 2);
        assert!(all.contains(&hurwitz_order()));
        for o in &all {
            assert!(o.lattice().contains_lattice(w.lattice()));
        }
    }

    #[test]
    fn eichler_detection() {
        let h = hurwitz_order();
        assert!(h.is_eichler().unwrap());
        // Intersection with a conjugate by a norm-3 element: a hereditary
        // order of reduced discriminant 6.
        let alpha = QuatElement::from_ints(1, 1, 1, 0);
        let conj = conjugate_order(&h, &alpha).unwrap();
        let e6 = Order::from_lattice(alg_11(), h.lattice().intersect(conj.lattice())).unwrap();
        assert_eq!(e6.reduced_discriminant(), &BigInt::from(6));
        assert!(e6.is_hereditary().unwrap());
        assert!(e6.is_eichler().unwrap());
        let syms = e6.symbols().unwrap();
        assert_eq!(syms[&2], EichlerSymbol::MinusOne);
        assert_eq!(syms[&3], EichlerSymbol::One);
        assert_eq!(e6.strongest_label().unwrap(), OrderLabel::Hereditary);
        // Residually inert and deep orders are not Eichler.
        assert!(!inert8_order().is_eichler().unwrap());
        assert!(!lipschitz_order().is_eichler().unwrap());
        assert!(!deep2_order().is_eichler().unwrap());
    }

    #[test]
    fn labels_of_reference_orders() {
        assert_eq!(hurwitz_order().strongest_label().unwrap(), OrderLabel::Maximal);
        assert_eq!(lipschitz_order().strongest_label().unwrap(), OrderLabel::Bass);
        assert_eq!(inert8_order().strongest_label().unwrap(), OrderLabel::ResiduallyInert);
        assert_eq!(parks_order().strongest_label().unwrap(), OrderLabel::Bass);
        assert_eq!(deep2_order().strongest_label().unwrap(), OrderLabel::NonGorenstein);
        assert_eq!(OrderLabel::Maximal.rank(), 0);
        assert!(OrderLabel::Maximal.rank() < OrderLabel::NonGorenstein.rank());
        assert_eq!(OrderLabel::parse("residually-inert").unwrap(), OrderLabel::ResiduallyInert);
        assert!(OrderLabel::parse("weird").is_err());
    }

    #[test]
    fn isomorphism_finds_conjugations() {
        let h = hurwitz_order();
        let alpha = QuatElement::from_ints(1, 1, 0, 0);
        let conj = conjugate_order(&h, &alpha).unwrap();
        let witness = order_isomorphic(&h, &conj).unwrap().expect("conjugates are isomorphic");
        assert_eq!(conjugate_order(&h, &witness).unwrap(), conj);
        // A deeper order and its conjugate.
        let d = deep2_order();
        let beta = QuatElement::from_ints(1, 1, 1, 0);
        let dconj = conjugate_order(&d, &beta).unwrap();
        let witness = order_isomorphic(&d, &dconj).unwrap().expect("conjugates are isomorphic");
        assert_eq!(conjugate_order(&d, &witness).unwrap(), dconj);
    }

    #[test]
    fn isomorphism_rejects_distinct_classes() {
        // Lipschitz and Hurwitz share their trace-zero lattice ℤi+ℤj+ℤk,
        // so every trace-zero isometry must be refuted by the final
        // conjugation check — the geometric route alone has to say no.
        let l = lipschitz_order();
        let h = hurwitz_order();
        let (v_l, _) = l.trace_zero_basis();
        let (v_h, _) = h.trace_zero_basis();
        let lat_l = Lattice4::from_rows(
            &v_l.iter().cloned().chain([QuatElement::one()]).collect::<Vec<_>>(),
        )
        .unwrap();
        let lat_h = Lattice4::from_rows(
            &v_h.iter().cloned().chain([QuatElement::one()]).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(lat_l, lat_h, "shared trace-zero lattice premise");
        assert!(order_isomorphic_geometric(&l, &h).unwrap().is_none());
        assert!(order_isomorphic(&l, &h).unwrap().is_none());
        // Different algebras are a usage error, not a negative answer.
        let p = parks_order();
        assert!(matches!(order_isomorphic(&l, &p), Err(Error::DifferentAlgebras)));
    }

    #[test]
    fn maximality_and_heredity() {
        assert!(hurwitz_order().is_maximal().unwrap());
        assert!(hurwitz_order().is_hereditary().unwrap());
        assert!(!lipschitz_order().is_maximal().unwrap());
        assert!(!lipschitz_order().is_hereditary().unwrap());
        assert!(hurwitz_order().is_p_maximal(2).unwrap());
        assert!(hurwitz_order().is_p_maximal(5).unwrap());
        assert!(!lipschitz_order().is_p_maximal(2).unwrap());
        assert_eq!(deep2_order().disc_valuation(2), 5);
    }

    #[test]
    fn trace_zero_gram_shapes() {
        let (els, gram) = parks_order().trace_zero_basis();
        assert_eq!(els.len(), 3);
        for e in &els {
            assert!(e.trd().is_zero());
            assert!(parks_order().contains(e));
        }
        // Positive definite: all leading minors positive.
        for k in 1..=3 {
            let minor: GramMatrix = (0..k)
                .map(|i| (0..k).map(|j| gram[i][j].clone()).collect())
                .collect();
            assert!(det_q(&minor).is_positive());
        }
    }
}
