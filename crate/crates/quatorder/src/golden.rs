//! Frozen expected output of the ℤ-classification.
//!
//! The forty rows below are the complete list of definite Hermite
//! quaternion orders over ℤ, hand-audited column by column, and serve as
//! the regression fixture the computed classification must reproduce.
//! Each row carries the published invariants only — reduced
//! discriminants, label, cancellation flag, local symbols, class data —
//! not a basis, because representatives are only canonical up to
//! conjugacy.  Comparisons are therefore multiset comparisons of rows;
//! the sorted record order is this crate's own convention and is not
//! part of the fixture.
//!
//! Symbol maps list every prime dividing N.  At a ramified prime where
//! the order is maximal the symbol is −1 (the residue ring is the
//! quadratic field), which fills the positions a human-readable table
//! would leave blank.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::order::{EichlerSymbol, OrderLabel};
use crate::search::ClassificationRecord;

/// One row of the expected classification, in published-column form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GoldenRow {
    pub d: u64,
    pub n: u64,
    pub label: OrderLabel,
    pub cancellation: bool,
    pub symbols: Vec<(u64, EichlerSymbol)>,
    pub cls: usize,
    pub stcl: u64,
    pub t: usize,
}

/// Raw fixture: (D, N, label, cancellation, symbols, |Cls|, |StCl|, t).
const ROWS: [(u64, u64, &str, bool, &str, usize, u64, usize); 40] = [
    (2, 2, "maximal", true, "2:-1", 1, 1, 1),
    (2, 4, "bass", true, "2:0", 1, 1, 1),
    (2, 6, "hereditary", true, "2:-1,3:1", 1, 1, 1),
    (2, 8, "bass", true, "2:0", 1, 1, 1),
    (2, 8, "residually-inert", true, "2:-1", 1, 1, 1),
    (2, 10, "hereditary", true, "2:-1,5:1", 1, 1, 1),
    (2, 12, "bass", true, "2:0,3:1", 1, 1, 1),
    (2, 16, "non-gorenstein", true, "2:0", 1, 1, 1),
    (2, 16, "bass", true, "2:0", 1, 1, 1),
    (2, 16, "bass", true, "2:0", 2, 2, 1),
    (2, 18, "residually-inert", true, "2:-1,3:-1", 1, 1, 1),
    (2, 18, "eichler", true, "2:-1,3:1", 1, 1, 1),
    (2, 18, "bass", true, "2:-1,3:0", 2, 2, 1),
    (2, 22, "hereditary", true, "2:-1,11:1", 1, 1, 1),
    (2, 32, "bass", true, "2:0", 2, 2, 1),
    (2, 32, "non-gorenstein", true, "2:0", 2, 2, 1),
    (2, 36, "bass", true, "2:0,3:0", 2, 2, 1),
    (2, 50, "bass", true, "2:-1,5:0", 2, 2, 1),
    (2, 54, "non-gorenstein", true, "2:-1,3:0", 2, 2, 1),
    (2, 54, "bass", true, "2:-1,3:0", 2, 2, 1),
    (2, 64, "gorenstein", true, "2:0", 4, 4, 1),
    (3, 3, "maximal", true, "3:-1", 1, 1, 1),
    (3, 6, "hereditary", true, "2:1,3:-1", 1, 1, 1),
    (3, 9, "bass", true, "3:0", 2, 2, 1),
    (3, 12, "residually-inert", true, "2:-1,3:-1", 1, 1, 1),
    (3, 12, "bass", true, "2:0,3:-1", 1, 1, 1),
    (3, 12, "eichler", true, "2:1,3:-1", 1, 1, 1),
    (3, 18, "bass", true, "2:1,3:0", 2, 2, 1),
    (3, 24, "non-gorenstein", true, "2:0,3:-1", 1, 1, 1),
    (3, 27, "bass", true, "3:0", 2, 2, 1),
    (3, 27, "bass", false, "3:0", 4, 2, 2),
    (3, 36, "bass", true, "2:0,3:0", 2, 2, 1),
    (3, 48, "gorenstein", true, "2:0,3:-1", 2, 2, 1),
    (5, 5, "maximal", true, "5:-1", 1, 1, 1),
    (5, 10, "hereditary", true, "2:1,5:-1", 1, 1, 1),
    (5, 20, "bass", true, "2:0,5:-1", 1, 1, 1),
    (5, 25, "bass", true, "5:0", 2, 2, 1),
    (7, 7, "maximal", true, "7:-1", 1, 1, 1),
    (7, 28, "residually-inert", true, "2:-1,7:-1", 1, 1, 1),
    (13, 13, "maximal", true, "13:-1", 1, 1, 1),
];

fn parse_symbol(s: &str) -> EichlerSymbol {
    match s {
        "*" => EichlerSymbol::Star,
        "1" => EichlerSymbol::One,
        "-1" => EichlerSymbol::MinusOne,
        "0" => EichlerSymbol::Zero,
        other => unreachable!("bad symbol literal `{other}` in fixture"),
    }
}

fn parse_symbols(s: &str) -> Vec<(u64, EichlerSymbol)> {
    s.split(',')
        .map(|entry| {
            let (p, sym) = entry.split_once(':').expect("fixture entry is p:s");
            (p.parse().expect("fixture prime"), parse_symbol(sym))
        })
        .collect()
}

/// The forty expected rows, in fixture order.
pub fn golden_rows() -> Vec<GoldenRow> {
    ROWS.iter()
        .map(|&(d, n, label, cancellation, symbols, cls, stcl, t)| GoldenRow {
            d,
            n,
            label: OrderLabel::parse(label).expect("fixture label"),
            cancellation,
            symbols: parse_symbols(symbols),
            cls,
            stcl,
            t,
        })
        .collect()
}

/// Projects a computed record onto the published columns.
pub fn row_of_record(record: &ClassificationRecord) -> GoldenRow {
    GoldenRow {
        d: record.d,
        n: u64::try_from(&record.n).expect("table discriminants fit in u64"),
        label: record.label,
        cancellation: record.cancellation,
        symbols: record.symbols.iter().map(|(&p, &s)| (p, s)).collect(),
        cls: record.cls,
        stcl: record.stcl,
        t: record.t,
    }
}

/// Multiset difference between the fixture and a computed record list.
/// Empty means exact agreement; otherwise each entry describes one row
/// surplus, signed by side.
pub fn diff_against_golden(records: &[ClassificationRecord]) -> Vec<String> {
    let mut counts: BTreeMap<GoldenRow, i64> = BTreeMap::new();
    for row in golden_rows() {
        *counts.entry(row).or_insert(0) += 1;
    }
    for record in records {
        *counts.entry(row_of_record(record)).or_insert(0) -= 1;
    }
    counts
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(row, c)| {
            let side = if c > 0 { "missing from computed" } else { "unexpected" };
            format!("{side} (×{}): {row:?}", c.abs())
        })
        .collect()
}

impl GoldenRow {
    /// The row's reduced order discriminant as a big integer, for joins
    /// against computed records.
    pub fn n_big(&self) -> BigInt {
        BigInt::from(self.n)
    }
}
