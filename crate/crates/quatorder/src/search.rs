//! The classification search: every definite Hermite order over ℤ.
//!
//! The driver runs in four stages.  First, a mass bound restricts the
//! reduced discriminants of definite quaternion ℚ-algebras that can
//! contain a Hermite order to a short explicit list.  Second, for each
//! surviving algebra one maximal order is constructed and its conjugacy
//! types are enumerated through the class set.  Third, each Hermite type
//! is the root of a descent tree: children are suborders obtained as
//! preimages of unital subalgebras of `O/pO`, and two exact prunes keep
//! the tree finite — a divisibility bound on the local unit index that
//! any Hermite suborder must satisfy, and the fact that every overorder
//! of a Hermite order is Hermite (so a non-Hermite node has no Hermite
//! descendants).  Fourth, the surviving orders are deduplicated by
//! conjugacy and emitted as sorted records.
//!
//! Both prunes are necessary conditions, not heuristics; re-running the
//! search with the Hermite prune disabled reproduces the identical
//! record set, which the test suite checks for the two largest trees.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::{QuatAlgebra, QuatElement};
use crate::finite::unital_proper_subalgebras;
use crate::ideal::{class_set, lift, type_representatives};
use crate::lattice::Lattice4;
use crate::order::{
    all_overorders, lambda, order_isomorphic, EichlerSymbol, Order, OrderLabel,
};
use crate::rational::{factor, primes_up_to, Rational};
use crate::stable::{eichler_mass, is_hermite, stable_class_group};
use crate::{Error, Result};

/// Exact integer threshold for the discriminant gate.
///
/// A definite algebra of reduced discriminant D can contain a Hermite
/// order only if Π_{p|D}(p−1) ≤ 2π².  The comparison is applied as the
/// integer test Π(p−1) ≤ 19, which is equivalent because 19 < 2π² < 20;
/// both inequalities are certified by rational bracketing of π in the
/// test suite, so no floating point enters this gate.
pub const EULER_PRODUCT_LIMIT: u64 = 19;

/// Pairs search attempted by [`algebra_for_discriminant`] before giving up.
const ALGEBRA_SEARCH_LIMIT: i64 = 120;

/// Safety cap on radical-idealizer ascents in [`maximal_order`].
const ASCENT_LIMIT: usize = 64;

/// Reduced discriminants of definite quaternion ℚ-algebras that can
/// contain a Hermite order: squarefree with an odd number of prime
/// factors (so the algebra exists and is definite) and
/// Π_{p|D}(p−1) ≤ [`EULER_PRODUCT_LIMIT`].
///
/// Every prime factor p contributes p−1 ≥ 1 to the product, so all
/// factors are at most 20 and subsets of the primes below 20 with odd
/// cardinality exhaust the candidates.
pub fn discriminant_candidates() -> Vec<u64> {
    let primes = primes_up_to(EULER_PRODUCT_LIMIT + 1);
    let mut out = Vec::new();
    for mask in 1u32..1 << primes.len() {
        if mask.count_ones() % 2 == 0 {
            continue;
        }
        let mut product = 1u64;
        let mut d = 1u64;
        for (i, &p) in primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                product *= p - 1;
                d *= p;
            }
        }
        if product <= EULER_PRODUCT_LIMIT {
            out.push(d);
        }
    }
    out.sort_unstable();
    out
}

/// The base-field gate, recorded as a documented constant.
///
/// For a totally real field F of degree n, Hermite orders can exist only
/// when the root discriminant satisfies d_F^{1/n} ≤ 2^{2/3}·π^{4/3}, a
/// bound slightly above 7.  This crate works over F = ℚ alone, where
/// d_F = 1 and the gate holds trivially, so the field loop of the full
/// classification degenerates to a single iteration and needs no search.
/// The test suite certifies 2^{2/3}·π^{4/3} > 7 by exact rational
/// bracketing (equivalently 4π⁴ > 343).
pub fn field_gate() {}

/// A definite algebra (−a,−b | ℚ) with the requested reduced
/// discriminant, found by scanning integer pairs in increasing |a|+|b|.
/// The first match is returned, so the choice is deterministic.
///
/// Fails with `NoConvergence` only if no pair below the search limit
/// matches — in particular whenever `d` is not squarefree with an odd
/// number of prime factors, since no definite ℚ-algebra has such a
/// discriminant.
pub fn algebra_for_discriminant(d: u64) -> Result<QuatAlgebra> {
    let target = BigInt::from(d);
    for sum in 2..=ALGEBRA_SEARCH_LIMIT {
        for a in 1..sum {
            let b = sum - a;
            let algebra = QuatAlgebra::from_ints(-a, -b)?;
            if algebra.disc()? == target {
                return Ok(algebra);
            }
        }
    }
    Err(Error::NoConvergence(format!(
        "no definite algebra of reduced discriminant {d} with |a|+|b| ≤ {ALGEBRA_SEARCH_LIMIT}"
    )))
}

/// One maximal order of a definite algebra.
///
/// Starts from the standard order ℤ⟨i,j⟩ — with i and j scaled by the
/// denominators of a and b so their squares are integers — and ascends
/// radical idealizers at every prime whose square divides the reduced
/// discriminant.  A locally non-hereditary order is a proper sublattice
/// of its radical idealizer, so each ascent strictly reduces N and the
/// chain reaches a hereditary order.  Idealizer chains fix hereditary
/// orders, so any leftover squarefree level is stripped by picking a
/// minimal-discriminant member of the overorder closure.
pub fn maximal_order(algebra: &QuatAlgebra) -> Result<Order> {
    let d = algebra.disc()?;
    let si = Rational::from(algebra.a().denom().clone());
    let sj = Rational::from(algebra.b().denom().clone());
    let i = QuatElement::from_ints(0, 1, 0, 0).scale(&si);
    let j = QuatElement::from_ints(0, 0, 1, 0).scale(&sj);
    let k = algebra.mul(&i, &j);
    let mut cur = Order::from_basis(algebra.clone(), &[QuatElement::one(), i, j, k])?;
    for _ in 0..ASCENT_LIMIT {
        if *cur.reduced_discriminant() == d {
            return Ok(cur);
        }
        let mut advanced = false;
        for (p, e) in factor(cur.reduced_discriminant())? {
            if e >= 2 {
                let next = cur.radical_idealizer(p)?;
                if next.lattice() != cur.lattice() {
                    cur = next;
                    advanced = true;
                    break;
                }
            }
        }
        if !advanced {
            break;
        }
    }
    all_overorders(&cur)?
        .into_iter()
        .filter(|o| *o.reduced_discriminant() == d)
        .min_by(|x, y| x.lattice().cmp(y.lattice()))
        .ok_or_else(|| {
            Error::NoConvergence("overorder closure contains no maximal order".into())
        })
}

/// Pairwise non-conjugate maximal orders covering every type of the
/// algebra: the distinct left orders of a class set of one maximal order.
pub fn maximal_order_types(algebra: &QuatAlgebra) -> Result<Vec<Order>> {
    type_representatives(&Arc::new(maximal_order(algebra)?))
}

/// Largest exponent m such that a suborder of index p^m below the
/// p-maximal order `o` can still be Hermite, by the local unit-index
/// divisibility test.
///
/// For a Hermite suborder O ⊆ o the local index [o_p^× : O_p^×] divides
/// 2^l·[o^× : ℤ^×], where 2^l = [ℤ_p^× : ℤ_p^×²] is 4 at p = 2 and 2 at
/// odd p.  The local index of a suborder of index p^m with local type s
/// is p^m·λ_s(p), times p/(p−1) when p ramifies in the algebra, so m is
/// admissible when some type makes that value an integer dividing the
/// budget.  Larger m only multiplies the value by p, so admissibility is
/// monotone and the scan stops at the first failure.  A result of 0
/// means descent at p cannot produce any Hermite order.
///
/// The test is necessary, never sufficient: an admissible exponent may
/// still yield no Hermite suborder, and the descent simply finds none.
pub fn hermite_index_bound(o: &Order, p: u64) -> Result<u32> {
    let p_maximal = o.is_p_maximal(p)?;
    debug_assert!(p_maximal, "the index bound applies below a p-maximal order");
    let two_l = if p == 2 { 4u64 } else { 2 };
    let budget = Rational::from(BigInt::from(two_l * o.unit_index()));
    let p_rat = Rational::from(BigInt::from(p));
    let one = Rational::from(BigInt::from(1));
    let correction = if (o.algebra().disc()? % BigInt::from(p)).is_zero() {
        &p_rat / &(&p_rat - &one)
    } else {
        one
    };
    let symbols = [
        EichlerSymbol::Star,
        EichlerSymbol::One,
        EichlerSymbol::MinusOne,
        EichlerSymbol::Zero,
    ];
    let mut m = 0u32;
    let mut power = p_rat.clone();
    'scan: while m < 64 {
        for s in symbols {
            let value = &(&power * &lambda(s, p)) * &correction;
            if value.is_integer() && (&budget / &value).is_integer() {
                m += 1;
                power = &power * &p_rat;
                continue 'scan;
            }
        }
        break;
    }
    Ok(m)
}

/// Suborders O ⊂ o with p·o ⊆ O whose radical idealizer at p is o
/// itself, up to conjugacy.
///
/// Candidates are the preimages of the proper unital subalgebras of the
/// four-dimensional F_p-algebra o/po; the subalgebra property makes each
/// preimage multiplicatively closed, hence an order of index p^(4−dim).
/// The idealizer filter matches how the descent tree is glued: any order
/// that is not hereditary at p satisfies p·O♮ ⊆ O for its radical
/// idealizer O♮ at p, so it appears in `p_suborders` of O♮ and nowhere
/// shallower, which makes the recursion complete and duplicate-light.
pub fn p_suborders(o: &Order, p: u64) -> Result<Vec<Order>> {
    let children = suborder_children(o, p, 3, false)?;
    Ok(children.into_iter().map(|(order, _)| order).collect())
}

/// Child enumeration for one descent step, with the step cap and the
/// hereditary complement of the idealizer filter.
///
/// Hereditary orders are their own radical idealizers, so the filter in
/// [`p_suborders`] can never reach them; the only ones it misses are the
/// index-p suborders of a p-maximal order at a prime split in the
/// algebra, which are exactly the preimages of the three-dimensional
/// (Borel) subalgebras of M₂(F_p).  When `hereditary_step` is set those
/// preimages are kept alongside the idealizer matches.  Children are
/// deduplicated by conjugacy, first representative winning, and returned
/// with their index exponent.
fn suborder_children(
    o: &Order,
    p: u64,
    max_step: u32,
    hereditary_step: bool,
) -> Result<Vec<(Order, u32)>> {
    let quotient = o.structure_mod_p(p);
    let basis = o.basis();
    let p_rat = Rational::from(BigInt::from(p));
    let mut kept: Vec<(Order, u32)> = Vec::new();
    for sub in unital_proper_subalgebras(&quotient) {
        let step = (4 - sub.len()) as u32;
        if step > max_step {
            continue;
        }
        let mut rows: Vec<QuatElement> = sub.iter().map(|coords| lift(&basis, coords)).collect();
        for b in &basis {
            rows.push(b.scale(&p_rat));
        }
        let child = Order::from_lattice(o.algebra().clone(), Lattice4::from_rows(&rows)?)?;
        let keep = child.radical_idealizer(p)?.lattice() == o.lattice()
            || (hereditary_step && sub.len() == 3);
        if !keep {
            continue;
        }
        let mut fresh = true;
        for (existing, _) in &kept {
            if order_isomorphic(existing, &child)?.is_some() {
                fresh = false;
                break;
            }
        }
        if fresh {
            kept.push((child, step));
        }
    }
    Ok(kept)
}

/// Why a node of the descent tree was not expanded further.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneReason {
    /// No prime had admissible descent budget left.
    IndexBound,
    /// The order is not Hermite, so no suborder can be.
    NotHermite,
}

/// Remaining descent allowance at one prime: `bound` is the exponent
/// granted by [`hermite_index_bound`] at the p-maximal subtree root, and
/// `depth` the exponent already consumed below that root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct PrimeBudget {
    bound: u32,
    depth: u32,
}

/// One explored conjugacy class in the descent tree of a discriminant.
#[derive(Debug, Clone)]
pub struct SearchNode {
    /// Representative order of the class.
    pub order: Order,
    /// Index into the node list of the first parent that reached it;
    /// `None` for the maximal-order roots.
    pub parent: Option<usize>,
    /// Primes of the descent steps along the first path from a root.
    pub prime_trail: Vec<u64>,
    /// Whether the order is Hermite.
    pub hermite: bool,
    /// Why expansion stopped here, if it did.
    pub pruned_reason: Option<PruneReason>,
    state: BTreeMap<u64, PrimeBudget>,
}

/// A parent→child inclusion explored by the search.  `child` is the
/// literal sublattice of the parent representative, kept alongside the
/// class index because conjugacy-class representatives themselves need
/// not be nested; exact local-index checks want the genuine inclusion.
#[derive(Debug, Clone)]
pub struct SearchEdge {
    /// Node index of the parent.
    pub parent: usize,
    /// Node index of the child's conjugacy class.
    pub child_class: usize,
    /// The child exactly as enumerated, a suborder of the parent node's
    /// representative.
    pub child: Order,
    /// Prime of the descent step.
    pub p: u64,
}

/// Everything one discriminant's search touched: all conjugacy classes
/// with their Hermite verdicts, and all inclusion edges.
#[derive(Debug, Clone)]
pub struct SearchAudit {
    pub nodes: Vec<SearchNode>,
    pub edges: Vec<SearchEdge>,
}

/// A finished row of the ℤ-classification.
#[derive(Debug, Clone)]
pub struct ClassificationRecord {
    /// Reduced discriminant of the algebra.
    pub d: u64,
    /// Reduced discriminant of the order.
    pub n: BigInt,
    /// Strongest label the order satisfies.
    pub label: OrderLabel,
    /// Whether locally free cancellation holds: |Cls| = |StCl|.
    pub cancellation: bool,
    /// Local symbols at the primes dividing N.
    pub symbols: BTreeMap<u64, EichlerSymbol>,
    /// Size of the right class set.
    pub cls: usize,
    /// Size of the stable class group.
    pub stcl: u64,
    /// Type number: conjugacy classes of left orders in the genus.
    pub t: usize,
    /// Unit index [O^× : ℤ^×].
    pub unit_index: u64,
    /// Eichler mass of the genus.
    pub mass: Rational,
    /// Representative order.
    pub order: Order,
}

impl ClassificationRecord {
    /// Canonical output order: discriminants ascending, then N, then label
    /// precedence, then the symbol vector, with the class data breaking the
    /// remaining ties (two genera can share everything up to here).
    fn sort_key(&self) -> (u64, BigInt, u8, Vec<(u64, EichlerSymbol)>, usize, u64, usize) {
        (
            self.d,
            self.n.clone(),
            self.label.rank(),
            self.symbols.iter().map(|(&p, &s)| (p, s)).collect(),
            self.cls,
            self.stcl,
            self.t,
        )
    }
}

fn record_for(d: u64, order: &Order) -> Result<ClassificationRecord> {
    let shared = Arc::new(order.clone());
    let reps = class_set(&shared)?;
    let mut types: Vec<Order> = Vec::new();
    for rep in &reps {
        let cand = rep.left_order().clone();
        let mut fresh = true;
        for existing in &types {
            if order_isomorphic(existing, &cand)?.is_some() {
                fresh = false;
                break;
            }
        }
        if fresh {
            types.push(cand);
        }
    }
    let stcl = stable_class_group(order)?.size();
    Ok(ClassificationRecord {
        d,
        n: order.reduced_discriminant().clone(),
        label: order.strongest_label()?,
        cancellation: reps.len() as u64 == stcl,
        symbols: order.symbols()?,
        cls: reps.len(),
        stcl,
        t: types.len(),
        unit_index: order.unit_index(),
        mass: eichler_mass(order)?,
        order: order.clone(),
    })
}

fn find_isomorphic(nodes: &[SearchNode], cand: &Order) -> Result<Option<usize>> {
    for (i, node) in nodes.iter().enumerate() {
        if order_isomorphic(&node.order, cand)?.is_some() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Runs the descent for a single reduced discriminant and returns the
/// sorted Hermite records together with the full audit of the tree.
///
/// With `prune` set, non-Hermite nodes are recorded but not expanded —
/// sound because every overorder of a Hermite order is Hermite.  Without
/// it the tree is cut by the index bound alone; both settings produce
/// the same records, just at different cost.
pub fn classify_discriminant(d: u64, prune: bool) -> Result<(Vec<ClassificationRecord>, SearchAudit)> {
    let algebra = algebra_for_discriminant(d)?;
    let disc = algebra.disc()?;
    let mut nodes: Vec<SearchNode> = Vec::new();
    let mut edges: Vec<SearchEdge> = Vec::new();
    for root in maximal_order_types(&algebra)? {
        let hermite = is_hermite(&root)?;
        nodes.push(SearchNode {
            order: root,
            parent: None,
            prime_trail: Vec::new(),
            hermite,
            pruned_reason: None,
            state: BTreeMap::new(),
        });
    }
    let mut cursor = 0;
    while cursor < nodes.len() {
        let idx = cursor;
        cursor += 1;
        if prune && !nodes[idx].hermite {
            nodes[idx].pruned_reason = Some(PruneReason::NotHermite);
            continue;
        }
        let parent = nodes[idx].order.clone();
        let state = nodes[idx].state.clone();
        let trail = nodes[idx].prime_trail.clone();
        let mut agenda: Vec<(u64, PrimeBudget)> = state
            .iter()
            .filter(|(_, budget)| budget.depth < budget.bound)
            .map(|(&p, &budget)| (p, budget))
            .collect();
        // Fresh primes: descent at p starts from a p-maximal node, whose
        // unit index caps the admissible primes — every symbol's local
        // index at m = 1 exceeds the budget once p − 1 > 2^l·[O^×:ℤ^×].
        for p in primes_up_to(4 * parent.unit_index() + 2) {
            if state.contains_key(&p) || !parent.is_p_maximal(p)? {
                continue;
            }
            let bound = hermite_index_bound(&parent, p)?;
            if bound >= 1 {
                agenda.push((p, PrimeBudget { bound, depth: 0 }));
            }
        }
        agenda.sort_by_key(|&(p, _)| p);
        if agenda.is_empty() {
            nodes[idx].pruned_reason = Some(PruneReason::IndexBound);
            continue;
        }
        for (p, budget) in agenda {
            let hereditary_step =
                budget.depth == 0 && !(&disc % BigInt::from(p)).is_zero();
            for (child, step) in
                suborder_children(&parent, p, budget.bound - budget.depth, hereditary_step)?
            {
                match find_isomorphic(&nodes, &child)? {
                    Some(class) => edges.push(SearchEdge {
                        parent: idx,
                        child_class: class,
                        child,
                        p,
                    }),
                    None => {
                        let hermite = is_hermite(&child)?;
                        let mut child_state = state.clone();
                        child_state.insert(
                            p,
                            PrimeBudget {
                                bound: budget.bound,
                                depth: budget.depth + step,
                            },
                        );
                        let mut child_trail = trail.clone();
                        child_trail.push(p);
                        let class = nodes.len();
                        nodes.push(SearchNode {
                            order: child.clone(),
                            parent: Some(idx),
                            prime_trail: child_trail,
                            hermite,
                            pruned_reason: None,
                            state: child_state,
                        });
                        edges.push(SearchEdge {
                            parent: idx,
                            child_class: class,
                            child,
                            p,
                        });
                    }
                }
            }
        }
    }
    let mut records = Vec::new();
    for node in &nodes {
        if node.hermite {
            records.push(record_for(d, &node.order)?);
        }
    }
    records.sort_by_key(ClassificationRecord::sort_key);
    Ok((records, SearchAudit { nodes, edges }))
}

/// The full ℤ-classification: every definite Hermite order over ℤ, as
/// sorted records.  Discriminants are processed in parallel; each tree
/// is expanded deterministically, so the output is identical for any
/// worker count.
pub fn classify_all_z() -> Result<Vec<ClassificationRecord>> {
    Ok(classify_all_z_with_audit()?.0)
}

/// [`classify_all_z`] plus the per-discriminant search audits, in
/// discriminant order.
pub fn classify_all_z_with_audit() -> Result<(Vec<ClassificationRecord>, Vec<SearchAudit>)> {
    let outcomes: Vec<Result<(Vec<ClassificationRecord>, SearchAudit)>> = discriminant_candidates()
        .into_par_iter()
        .map(|d| classify_discriminant(d, true))
        .collect();
    let mut records = Vec::new();
    let mut audits = Vec::new();
    for outcome in outcomes {
        let (recs, audit) = outcome?;
        records.extend(recs);
        audits.push(audit);
    }
    Ok((records, audits))
}
