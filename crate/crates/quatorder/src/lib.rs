//! Exact-arithmetic invariants of definite quaternion orders over ℤ.
//!
//! This crate computes, with no floating point anywhere, the classical
//! invariants of orders in a definite quaternion algebra B = (a,b | ℚ):
//!
//! * right ideal class sets with the Eichler mass certificate,
//! * stable class groups Cl_G(O) via local norm groups,
//! * Eichler symbols, radical idealizers, Gorenstein/Bass/hereditary labels,
//! * the Hermite and locally-free-cancellation predicates,
//!
//! and runs a pruned tree search over suborders of maximal orders that
//! reproduces the full classification of definite Hermite ℤ-orders
//! (40 orders across discriminants 2, 3, 5, 7 and 13).
//!
//! The computational backbone is a small exact lattice kernel: Hermite normal
//! forms over ℤ for canonical lattice representatives, rational Cholesky with
//! a Fincke–Pohst traversal for short-vector enumeration, LLL reduction of
//! Gram matrices, and a Gram-matched backtracking search for lattice
//! isometries (used both for ring-isomorphism testing of orders and for
//! integral equivalence of quaternary forms).
//!
//! Everything is ordinary `Result`-based Rust; all values are immutable after
//! construction and safe to share across threads. The `quatorder` binary in
//! this crate exposes the classification and the per-order reports on the
//! command line.

pub mod algebra;
pub mod finite;
pub mod golden;
pub mod ideal;
pub mod lattice;
pub mod linalg;
pub mod order;
pub mod rational;
pub mod reduction;
pub mod report;
pub mod search;
pub mod stable;

pub use algebra::{hilbert_symbol, ramified_primes, Place, QuatAlgebra, QuatElement};
pub use ideal::{
    class_set, extend_ideal, ideal_inverse, ideal_isomorphic, ideal_mul, prime_neighbors,
    type_number, RightIdeal,
};
pub use lattice::{GramMatrix, Lattice4};
pub use order::{order_isomorphic, EichlerSymbol, Order, OrderLabel};
pub use rational::Rational;
pub use report::{
    order_to_json, parse_json_lines, parse_order_json, render_table, run_verify, OrderFile,
    RecordDoc, TableFormat, VerifyOutcome, VerifySuite,
};
pub use search::{
    classify_all_z, classify_discriminant, discriminant_candidates, hermite_index_bound,
    maximal_order, maximal_order_types, p_suborders, ClassificationRecord, SearchAudit,
};
pub use stable::{
    eichler_mass, fiber_decomposition, has_cancellation, is_hermite, stable_class_group,
    stably_free_mass, tamagawa_volume, vigneras_check, StableClassGroup,
};

use num_bigint::BigInt;

/// Errors for every fallible operation in the crate.
///
/// Variants split into three families, mirrored by the CLI exit codes:
/// input/parse problems (exit 2), semantic rejections of well-formed input
/// (exit 3), and violated operation preconditions (exit 4). The remaining
/// variants flag internal invariant violations: they indicate a bug, never a
/// bad input, and map to exit 1.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A quaternion algebra presentation with a = 0 or b = 0, or an
    /// indefinite algebra passed where a definite one is required.
    #[error("invalid quaternion algebra: {0}")]
    InvalidAlgebra(String),
    /// Generators that span a proper subspace of B where a full lattice is
    /// required.
    #[error("generators span a subspace of rank < 4")]
    RankDeficient,
    /// An order basis whose span does not contain 1.
    #[error("lattice does not contain 1, so it cannot be an order")]
    MissingOne,
    /// A lattice that is not multiplicatively closed, with a witness product.
    #[error("lattice is not closed under multiplication: ({x})·({y}) = {xy} lies outside")]
    NotAnOrder {
        x: QuatElement,
        y: QuatElement,
        xy: QuatElement,
    },
    /// The trace-pairing determinant of a putative order is not a perfect
    /// square; the input cannot be an order.
    #[error("trace pairing determinant {0} is not a perfect square")]
    NonSquareDiscriminant(Rational),
    /// A lattice paired with an order it is not a right module over, with a
    /// witness product that escapes the lattice.
    #[error("lattice is not a right ideal: ({x})·({y}) = {xy} lies outside")]
    NotARightIdeal {
        x: QuatElement,
        y: QuatElement,
        xy: QuatElement,
    },
    /// The semisimple quotient (O/pO)/rad has a shape that cannot occur for
    /// a quaternion order (internal invariant violation).
    #[error("semisimple quotient at p={p} has impossible shape (dimension {dim})")]
    UnexpectedSemisimpleQuotient { p: u64, dim: usize },
    /// Two orders or ideals from different ambient algebras were combined.
    #[error("operands live in different quaternion algebras")]
    DifferentAlgebras,
    /// An ideal product I·J where the right order of I differs from the left
    /// order of J.
    #[error("incompatible ideal product: right order of the left factor differs from left order of the right factor")]
    IncompatibleProduct,
    /// Inverse of an ideal that is not locally principal.
    #[error("ideal is not locally principal, so it has no inverse")]
    NotInvertible,
    /// A neighbor request at a prime dividing the reduced discriminant.
    #[error("prime {p} divides the reduced discriminant {n}")]
    PrimeDividesDiscriminant { p: u64, n: BigInt },
    /// Class-set accumulation exceeded the Eichler mass (internal invariant
    /// violation).
    #[error("class-set mass {accumulated} overshot the Eichler mass {target}")]
    MassOvershoot {
        accumulated: Rational,
        target: Rational,
    },
    /// Ideal extension to a lattice that does not contain the base order.
    #[error("target order is not a superorder of the ideal's right order")]
    NotASuperorder,
    /// Stable-class evaluation of a norm that is not coprime to the level.
    #[error("reduced norm {q} is not coprime to the level {n}")]
    NormNotCoprime { q: Rational, n: BigInt },
    /// A local unit index request for orders that differ at more than the
    /// named prime.
    #[error("orders differ at a place other than {p} (index {index})")]
    OrdersDifferElsewhere { p: u64, index: Rational },
    /// An ascent or closure loop failed to terminate within its proven bound
    /// (internal invariant violation).
    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),
    /// Malformed input text: order files, rationals, CLI values.
    #[error("parse error: {0}")]
    Parse(String),
    /// A filesystem read or write failed while servicing a command.
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the CLI contract: 0 ok, 2 parse, 3 semantic,
    /// 4 precondition, 1 internal invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::InvalidAlgebra(_)
            | Error::RankDeficient
            | Error::MissingOne
            | Error::NotAnOrder { .. }
            | Error::NonSquareDiscriminant(_)
            | Error::NotARightIdeal { .. }
            | Error::DifferentAlgebras => 3,
            Error::PrimeDividesDiscriminant { .. }
            | Error::IncompatibleProduct
            | Error::NotInvertible
            | Error::NotASuperorder
            | Error::NormNotCoprime { .. }
            | Error::OrdersDifferElsewhere { .. } => 4,
            Error::UnexpectedSemisimpleQuotient { .. }
            | Error::MassOvershoot { .. }
            | Error::NoConvergence(_)
            | Error::Io(_) => 1,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
