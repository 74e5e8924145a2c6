//! Order files, classification tables, and the reports behind the CLI.
//!
//! Everything the binary prints or parses lives here so it can be tested
//! without spawning a process.  Three families of formats:
//!
//! * **Order files** — JSON documents `{"algebra": {"a", "b"}, "basis"}`
//!   describing a definite algebra by its two parameters and an order by
//!   a 4×4 basis matrix over ℚ, rows in the coordinates of `1, i, j, k`.
//!   Every rational is a string `"n"` or `"n/d"` in lowest terms, so the
//!   files are exact and survive round trips byte-for-byte semantically.
//! * **Classification tables** — the record list rendered as CSV, JSON
//!   lines, or aligned text.  All three carry the same columns
//!   `(D, N, label, c, symbols, cls, stcl, t)`; the JSON form additionally
//!   embeds the unit index, the mass, and a representative order file, so
//!   it parses back to full records without loss.
//! * **Command reports** — the bodies of `info`, `classset`, `stclgrp`,
//!   `suborders`, and `verify`, returned as strings.  Dump-style reports
//!   emit one JSON object per line; `info` emits `key: value` lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{QuatAlgebra, QuatElement};
use crate::golden::diff_against_golden;
use crate::ideal::{class_set, prime_neighbors, RightIdeal};
use crate::lattice::{index as lattice_index, Lattice4};
use crate::order::{EichlerSymbol, Order, OrderLabel};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::search::{classify_all_z, classify_all_z_with_audit, p_suborders, ClassificationRecord};
use crate::stable::{eichler_mass, fiber_decomposition, is_hermite, stable_class_group, vigneras_check};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Order files

/// Algebra parameters as they appear on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraParams {
    pub a: String,
    pub b: String,
}

/// On-disk description of an order: the ambient algebra and a basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderFile {
    pub algebra: AlgebraParams,
    pub basis: Vec<Vec<String>>,
}

/// Parses an order file and validates it into an [`Order`].
///
/// Failures are structured: malformed JSON or rationals are parse errors,
/// an indefinite algebra is rejected as invalid, and a basis that is not
/// an order surfaces the library's own witness-carrying errors.
pub fn parse_order_json(text: &str) -> Result<Order> {
    let file: OrderFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("order file: {e}")))?;
    order_from_file(&file)
}

/// Validates a parsed [`OrderFile`] into an [`Order`].
pub fn order_from_file(file: &OrderFile) -> Result<Order> {
    let a = parse_rational(&file.algebra.a)?;
    let b = parse_rational(&file.algebra.b)?;
    let algebra = QuatAlgebra::new(a, b)?;
    if !algebra.is_definite() {
        return Err(Error::InvalidAlgebra(
            "order files must describe a definite algebra (a < 0 and b < 0)".into(),
        ));
    }
    if file.basis.len() != 4 || file.basis.iter().any(|row| row.len() != 4) {
        return Err(Error::Parse(
            "basis must be a 4×4 matrix of rationals".into(),
        ));
    }
    let mut rows = Vec::with_capacity(4);
    for row in &file.basis {
        let mut coords = [
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
        ];
        for (slot, entry) in coords.iter_mut().zip(row) {
            *slot = parse_rational(entry)?;
        }
        rows.push(QuatElement::from_coords(coords));
    }
    Order::from_basis(algebra, &rows)
}

/// Serializes an order back into its on-disk form, rationals in lowest terms.
pub fn order_to_file(o: &Order) -> OrderFile {
    OrderFile {
        algebra: AlgebraParams {
            a: format_rational(o.algebra().a()),
            b: format_rational(o.algebra().b()),
        },
        basis: basis_strings(o.lattice()),
    }
}

/// Pretty-printed JSON text of [`order_to_file`].
pub fn order_to_json(o: &Order) -> String {
    serde_json::to_string_pretty(&order_to_file(o)).expect("plain strings serialize")
}

fn basis_strings(l: &Lattice4) -> Vec<Vec<String>> {
    l.basis_elements()
        .iter()
        .map(|e| e.coords().iter().map(format_rational).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Classification records on disk

/// One classification record in its JSON form.
///
/// Carries the full table row plus the unit index, the mass, and a
/// representative order file, so a parsed document reconstructs the whole
/// [`ClassificationRecord`].  `n` and `mass` are decimal strings to keep
/// the form exact for arbitrary magnitudes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordDoc {
    pub d: u64,
    pub n: String,
    pub label: String,
    #[serde(rename = "c")]
    pub cancellation: bool,
    /// Pairs `(p, symbol)` sorted by prime.
    pub symbols: Vec<(u64, String)>,
    pub cls: usize,
    pub stcl: u64,
    pub t: usize,
    pub unit_index: u64,
    pub mass: String,
    pub order: OrderFile,
}

/// Converts a record to its on-disk document.
pub fn record_to_doc(record: &ClassificationRecord) -> RecordDoc {
    RecordDoc {
        d: record.d,
        n: record.n.to_string(),
        label: record.label.as_str().to_owned(),
        cancellation: record.cancellation,
        symbols: record
            .symbols
            .iter()
            .map(|(&p, &s)| (p, s.as_str().to_owned()))
            .collect(),
        cls: record.cls,
        stcl: record.stcl,
        t: record.t,
        unit_index: record.unit_index,
        mass: format_rational(&record.mass),
        order: order_to_file(&record.order),
    }
}

/// Rebuilds a full record from its on-disk document.
pub fn record_from_doc(doc: &RecordDoc) -> Result<ClassificationRecord> {
    let n: BigInt = doc
        .n
        .parse()
        .map_err(|_| Error::Parse(format!("record N {:?} is not an integer", doc.n)))?;
    let mut symbols = BTreeMap::new();
    for (p, s) in &doc.symbols {
        symbols.insert(*p, EichlerSymbol::parse(s)?);
    }
    Ok(ClassificationRecord {
        d: doc.d,
        n,
        label: OrderLabel::parse(&doc.label)?,
        cancellation: doc.cancellation,
        symbols,
        cls: doc.cls,
        stcl: doc.stcl,
        t: doc.t,
        unit_index: doc.unit_index,
        mass: parse_rational(&doc.mass)?,
        order: order_from_file(&doc.order)?,
    })
}

/// Renders records as JSON lines, one compact document per record.
pub fn render_json_lines(records: &[ClassificationRecord]) -> String {
    let mut out = String::new();
    for record in records {
        let doc = record_to_doc(record);
        out.push_str(&serde_json::to_string(&doc).expect("plain data serializes"));
        out.push('\n');
    }
    out
}

/// Parses JSON-lines text back into records, skipping blank lines.
pub fn parse_json_lines(text: &str) -> Result<Vec<ClassificationRecord>> {
    let mut records = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let doc: RecordDoc =
            serde_json::from_str(line).map_err(|e| Error::Parse(format!("record line: {e}")))?;
        records.push(record_from_doc(&doc)?);
    }
    Ok(records)
}

// ---------------------------------------------------------------------------
// Table rendering

/// Output formats for the classification table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    JsonLines,
    Text,
}

impl TableFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::JsonLines),
            "text" => Ok(TableFormat::Text),
            other => Err(Error::Parse(format!(
                "unknown format {other:?} (expected csv, json, or text)"
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TableFormat::Csv => "csv",
            TableFormat::JsonLines => "json",
            TableFormat::Text => "text",
        }
    }
}

/// Header line of the CSV form.
pub const CSV_HEADER: &str = "D,N,label,c,symbols,cls,stcl,t";

/// Column names of the aligned-text form, in order.
pub const TEXT_COLUMNS: [&str; 8] = ["D", "N", "label", "c", "symbols", "cls", "stcl", "t"];

fn symbols_cell(record: &ClassificationRecord, sep: &str) -> String {
    record
        .symbols
        .iter()
        .map(|(p, s)| format!("{p}:{s}"))
        .collect::<Vec<_>>()
        .join(sep)
}

/// Renders records as CSV with the fixed eight-column header.
pub fn render_csv(records: &[ClassificationRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.d,
            r.n,
            r.label,
            r.cancellation,
            symbols_cell(r, ";"),
            r.cls,
            r.stcl,
            r.t
        );
    }
    out
}

/// Renders records as an aligned-text table.
///
/// The cancellation column prints `c` when cancellation holds and stays
/// blank otherwise, matching the usual published style.
pub fn render_text(records: &[ClassificationRecord]) -> String {
    let mut cells: Vec<[String; 8]> = Vec::with_capacity(records.len() + 1);
    cells.push(TEXT_COLUMNS.map(str::to_owned));
    for r in records {
        cells.push([
            r.d.to_string(),
            r.n.to_string(),
            r.label.to_string(),
            if r.cancellation { "c".into() } else { String::new() },
            symbols_cell(r, " "),
            r.cls.to_string(),
            r.stcl.to_string(),
            r.t.to_string(),
        ]);
    }
    let mut widths = [0usize; 8];
    for row in &cells {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in &cells {
        let mut line = String::new();
        for (cell, width) in row.iter().zip(widths) {
            if !line.is_empty() {
                line.push_str("  ");
            }
            line.push_str(cell);
            line.extend(std::iter::repeat(' ').take(width - cell.chars().count()));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Renders records in the requested format.
pub fn render_table(records: &[ClassificationRecord], format: TableFormat) -> String {
    match format {
        TableFormat::Csv => render_csv(records),
        TableFormat::JsonLines => render_json_lines(records),
        TableFormat::Text => render_text(records),
    }
}

// ---------------------------------------------------------------------------
// Command reports

/// The `info` report: one `key: value` line per invariant.
pub fn info_report(o: &Order) -> Result<String> {
    let algebra = o.algebra();
    let arc = Arc::new(o.clone());
    let reps = class_set(&arc)?;
    let group = stable_class_group(o)?;
    let cls = reps.len();
    let stcl = group.size();
    let types = crate::ideal::type_number(&arc)?;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "algebra: ({}, {})",
        format_rational(algebra.a()),
        format_rational(algebra.b())
    );
    let _ = writeln!(s, "D: {}", algebra.disc()?);
    let _ = writeln!(s, "N: {}", o.reduced_discriminant());
    let symbols = o.symbols()?;
    let cell = symbols
        .iter()
        .map(|(p, sym)| format!("{p}:{sym}"))
        .collect::<Vec<_>>()
        .join(" ");
    let _ = writeln!(s, "symbols: {cell}");
    let _ = writeln!(s, "unit index: {}", o.unit_index());
    let _ = writeln!(s, "label: {}", o.strongest_label()?);
    let yes_no = |flag: bool| if flag { "yes" } else { "no" };
    let _ = writeln!(s, "maximal: {}", yes_no(o.is_maximal()?));
    let _ = writeln!(s, "hereditary: {}", yes_no(o.is_hereditary()?));
    let _ = writeln!(s, "eichler: {}", yes_no(o.is_eichler()?));
    let _ = writeln!(s, "gorenstein: {}", yes_no(o.is_gorenstein()?));
    let _ = writeln!(s, "bass: {}", yes_no(o.is_bass()?));
    let _ = writeln!(s, "mass: {}", format_rational(&eichler_mass(o)?));
    let _ = writeln!(s, "cls: {cls}");
    let _ = writeln!(s, "stcl: {stcl}");
    let _ = writeln!(s, "t: {types}");
    let _ = writeln!(s, "hermite: {}", yes_no(is_hermite(o)?));
    let _ = writeln!(s, "cancellation: {}", yes_no(cls as u64 == stcl));
    Ok(s)
}

/// One right ideal in a dump: reduced norm, left-order unit index, basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealDoc {
    pub nrd: String,
    pub left_unit_index: u64,
    pub basis: Vec<Vec<String>>,
}

fn ideal_doc(i: &RightIdeal) -> IdealDoc {
    IdealDoc {
        nrd: format_rational(i.nrd_ideal()),
        left_unit_index: i.left_order().unit_index(),
        basis: basis_strings(i.lattice()),
    }
}

/// The `classset` report: one JSON line per right-ideal class, or per
/// `p`-neighbor of the unit ideal when a prime is given.
pub fn classset_report(o: &Arc<Order>, neighbors: Option<u64>) -> Result<String> {
    let ideals = match neighbors {
        Some(p) => prime_neighbors(o, p)?,
        None => class_set(o)?,
    };
    let mut out = String::new();
    for ideal in &ideals {
        out.push_str(&serde_json::to_string(&ideal_doc(ideal)).expect("plain data serializes"));
        out.push('\n');
    }
    Ok(out)
}

/// One local factor of the stable class group in a dump.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorDoc {
    pub p: u64,
    pub level: u32,
    pub modulus: u64,
    pub coset_count: usize,
    pub norms: Vec<u64>,
}

/// The `stclgrp` report as a JSON document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StableGroupDoc {
    pub size: u64,
    pub level: String,
    pub factors: Vec<FactorDoc>,
    pub elements: Vec<Vec<usize>>,
}

/// The `stclgrp` report: size, level, local factors, and the element list
/// as coset-index vectors.
pub fn stclgrp_report(o: &Order) -> Result<String> {
    let group = stable_class_group(o)?;
    let doc = StableGroupDoc {
        size: group.size(),
        level: group.level().to_string(),
        factors: group
            .factors()
            .iter()
            .map(|f| FactorDoc {
                p: f.p,
                level: f.level,
                modulus: f.modulus,
                coset_count: f.coset_count,
                norms: f.norms.clone(),
            })
            .collect(),
        elements: group.elements(),
    };
    let mut out = serde_json::to_string(&doc).expect("plain data serializes");
    out.push('\n');
    Ok(out)
}

/// One suborder in a dump: index in the parent, invariants, full file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuborderDoc {
    pub index: String,
    pub n: String,
    pub label: String,
    pub order: OrderFile,
}

/// The `suborders` report: one JSON line per conjugacy class of proper
/// `p`-suborder with radical idealizer the parent, filtered to index at
/// most `max_index`.
pub fn suborders_report(o: &Order, p: u64, max_index: u64) -> Result<String> {
    let bound = BigInt::from(max_index);
    let mut out = String::new();
    for sub in p_suborders(o, p)? {
        let idx = lattice_index(sub.lattice(), o.lattice());
        debug_assert!(idx.is_integer());
        if idx.to_integer() > bound {
            continue;
        }
        let doc = SuborderDoc {
            index: idx.to_integer().to_string(),
            n: sub.reduced_discriminant().to_string(),
            label: sub.strongest_label()?.as_str().to_owned(),
            order: order_to_file(&sub),
        };
        out.push_str(&serde_json::to_string(&doc).expect("plain data serializes"));
        out.push('\n');
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Verification suites

/// Cross-check suites the `verify` command can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifySuite {
    /// Class-set masses against the Eichler mass formula, per genus.
    Masses,
    /// The norm-theoretic Hermite criterion against the mass definition.
    Vigneras,
    /// Fiber masses of the class-set surjection onto the stable group.
    Fibers,
    /// The computed classification against the frozen table.
    Table,
}

impl VerifySuite {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "masses" => Ok(VerifySuite::Masses),
            "vigneras" => Ok(VerifySuite::Vigneras),
            "fibers" => Ok(VerifySuite::Fibers),
            "table" => Ok(VerifySuite::Table),
            other => Err(Error::Parse(format!(
                "unknown suite {other:?} (expected masses, vigneras, fibers, or table)"
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VerifySuite::Masses => "masses",
            VerifySuite::Vigneras => "vigneras",
            VerifySuite::Fibers => "fibers",
            VerifySuite::Table => "table",
        }
    }
}

/// Result of a verification suite: a pass flag and a printable report.
///
/// On failure the report carries the first counterexample found.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub passed: bool,
    pub report: String,
}

fn fail(report: String) -> VerifyOutcome {
    VerifyOutcome {
        passed: false,
        report,
    }
}

/// Runs one verification suite over the full classification.
pub fn run_verify(suite: VerifySuite) -> Result<VerifyOutcome> {
    match suite {
        VerifySuite::Masses => verify_masses(),
        VerifySuite::Vigneras => verify_vigneras(),
        VerifySuite::Fibers => verify_fibers(),
        VerifySuite::Table => verify_table(),
    }
}

fn verify_masses() -> Result<VerifyOutcome> {
    let records = classify_all_z()?;
    for rec in &records {
        let arc = Arc::new(rec.order.clone());
        let reps = class_set(&arc)?;
        let mut sum = Rational::zero();
        for ideal in &reps {
            sum += Rational::new(BigInt::one(), BigInt::from(ideal.left_order().unit_index()));
        }
        let mass = eichler_mass(&rec.order)?;
        if sum != mass || mass != rec.mass {
            return Ok(fail(format!(
                "masses: FAIL at D={} N={}: Σ 1/u = {} but mass = {}",
                rec.d,
                rec.n,
                format_rational(&sum),
                format_rational(&mass)
            )));
        }
    }
    Ok(VerifyOutcome {
        passed: true,
        report: format!(
            "masses: pass ({} genera; every class-set mass equals the Eichler mass)",
            records.len()
        ),
    })
}

fn verify_vigneras() -> Result<VerifyOutcome> {
    let (_, audits) = classify_all_z_with_audit()?;
    let mut checked = 0usize;
    for audit in &audits {
        for node in &audit.nodes {
            let direct = is_hermite(&node.order)?;
            let by_norms = vigneras_check(&node.order)?;
            if direct != by_norms {
                return Ok(fail(format!(
                    "vigneras: FAIL at D={} N={}: mass criterion says {} but norm criterion says {}",
                    node.order.algebra().disc()?,
                    node.order.reduced_discriminant(),
                    direct,
                    by_norms
                )));
            }
            checked += 1;
        }
    }
    Ok(VerifyOutcome {
        passed: true,
        report: format!("vigneras: pass ({checked} orders; both Hermite criteria agree)"),
    })
}

fn verify_fibers() -> Result<VerifyOutcome> {
    let records = classify_all_z()?;
    let mut checked = 0usize;
    for rec in &records {
        let arc = Arc::new(rec.order.clone());
        let fd = fiber_decomposition(&arc)?;
        let expected = &rec.mass / Rational::from(BigInt::from(rec.stcl));
        let members: usize = fd.fibers.iter().map(|f| f.members.len()).sum();
        if fd.fibers.len() as u64 != rec.stcl || members != rec.cls {
            return Ok(fail(format!(
                "fibers: FAIL at D={} N={}: {} fibers covering {} classes, expected {} and {}",
                rec.d,
                rec.n,
                fd.fibers.len(),
                members,
                rec.stcl,
                rec.cls
            )));
        }
        for fiber in &fd.fibers {
            if fiber.mass != expected {
                return Ok(fail(format!(
                    "fibers: FAIL at D={} N={}: fiber mass {} differs from mass/|StCl| = {}",
                    rec.d,
                    rec.n,
                    format_rational(&fiber.mass),
                    format_rational(&expected)
                )));
            }
        }
        checked += 1;
    }
    Ok(VerifyOutcome {
        passed: true,
        report: format!("fibers: pass ({checked} genera; every fiber has mass mass/|StCl|)"),
    })
}

fn verify_table() -> Result<VerifyOutcome> {
    let records = classify_all_z()?;
    let diff = diff_against_golden(&records);
    if diff.is_empty() {
        Ok(VerifyOutcome {
            passed: true,
            report: format!(
                "table: pass ({} records match the frozen classification)",
                records.len()
            ),
        })
    } else {
        let mut report = String::from("table: FAIL\n");
        for line in diff {
            let _ = writeln!(report, "  {line}");
        }
        Ok(fail(report.trim_end().to_owned()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::order_isomorphic;
    use crate::search::classify_discriminant;

    const PARKS_FILE: &str = r#"{
        "algebra": {"a": "-3", "b": "-1"},
        "basis": [
            ["1", "0", "0", "0"],
            ["1/2", "3/2", "0", "0"],
            ["0", "0", "3", "0"],
            ["0", "0", "3/2", "1/2"]
        ]
    }"#;

    const HURWITZ_FILE: &str = r#"{
        "algebra": {"a": "-1", "b": "-1"},
        "basis": [
            ["1", "0", "0", "0"],
            ["0", "1", "0", "0"],
            ["0", "0", "1", "0"],
            ["1/2", "1/2", "1/2", "1/2"]
        ]
    }"#;

    #[test]
    fn order_files_round_trip() {
        let parks = parse_order_json(PARKS_FILE).unwrap();
        assert_eq!(parks.reduced_discriminant(), &BigInt::from(27));
        let text = order_to_json(&parks);
        let again = parse_order_json(&text).unwrap();
        assert_eq!(again.lattice(), parks.lattice());
        assert_eq!(again.algebra().a(), parks.algebra().a());
    }

    #[test]
    fn malformed_order_files_are_structured_errors() {
        let garbled = parse_order_json("{\"algebra\":").unwrap_err();
        assert_eq!(garbled.exit_code(), 2);

        let short = PARKS_FILE.replacen("[\"1\", \"0\", \"0\", \"0\"],", "", 1);
        assert_eq!(parse_order_json(&short).unwrap_err().exit_code(), 2);

        let indefinite = PARKS_FILE.replacen("-3", "3", 1);
        assert!(matches!(
            parse_order_json(&indefinite).unwrap_err(),
            Error::InvalidAlgebra(_)
        ));

        // Drop 1 from the span: 2ℤ + ℤi + ℤj + ℤk is not an order.
        let no_one = PARKS_FILE
            .replacen("\"algebra\": {\"a\": \"-3\", \"b\": \"-1\"}", "\"algebra\": {\"a\": \"-1\", \"b\": \"-1\"}", 1)
            .replacen("[\"1\", \"0\", \"0\", \"0\"]", "[\"2\", \"0\", \"0\", \"0\"]", 1)
            .replacen("[\"1/2\", \"3/2\", \"0\", \"0\"]", "[\"0\", \"1\", \"0\", \"0\"]", 1)
            .replacen("[\"0\", \"0\", \"3\", \"0\"]", "[\"0\", \"0\", \"1\", \"0\"]", 1)
            .replacen("[\"0\", \"0\", \"3/2\", \"1/2\"]", "[\"0\", \"0\", \"0\", \"1\"]", 1);
        let err = parse_order_json(&no_one).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(matches!(err, Error::MissingOne));
    }

    #[test]
    fn record_docs_round_trip() {
        let mut records = classify_discriminant(13, true).unwrap().0;
        records.extend(classify_discriminant(7, true).unwrap().0);
        let text = render_json_lines(&records);
        let parsed = parse_json_lines(&text).unwrap();
        assert_eq!(parsed.len(), records.len());
        for (p, r) in parsed.iter().zip(&records) {
            assert_eq!(p.d, r.d);
            assert_eq!(p.n, r.n);
            assert_eq!(p.label, r.label);
            assert_eq!(p.cancellation, r.cancellation);
            assert_eq!(p.symbols, r.symbols);
            assert_eq!((p.cls, p.stcl, p.t), (r.cls, r.stcl, r.t));
            assert_eq!(p.unit_index, r.unit_index);
            assert_eq!(p.mass, r.mass);
            assert_eq!(p.order.lattice(), r.order.lattice());
            assert_eq!(p.order.algebra().a(), r.order.algebra().a());
            assert_eq!(p.order.algebra().b(), r.order.algebra().b());
        }
    }

    #[test]
    fn csv_and_text_share_the_documented_columns() {
        let records = classify_discriminant(13, true).unwrap().0;
        let csv = render_csv(&records);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next(), Some("13,13,maximal,true,13:-1,1,1,1"));
        assert_eq!(lines.next(), None);

        let text = render_text(&records);
        let header: Vec<&str> = text.lines().next().unwrap().split_whitespace().collect();
        assert_eq!(header, TEXT_COLUMNS);
        assert!(text.lines().nth(1).unwrap().starts_with("13"));
    }

    #[test]
    fn info_report_on_the_parks_order() {
        let parks = parse_order_json(PARKS_FILE).unwrap();
        let report = info_report(&parks).unwrap();
        for expected in [
            "algebra: (-3, -1)",
            "D: 3",
            "N: 27",
            "symbols: 3:0",
            "unit index: 1",
            "label: bass",
            "mass: 2",
            "cls: 4",
            "stcl: 2",
            "t: 2",
            "hermite: yes",
            "cancellation: no",
        ] {
            assert!(
                report.lines().any(|l| l == expected),
                "missing line {expected:?} in:\n{report}"
            );
        }
    }

    #[test]
    fn classset_report_lists_coprime_representatives() {
        let parks = Arc::new(parse_order_json(PARKS_FILE).unwrap());
        let report = classset_report(&parks, None).unwrap();
        let docs: Vec<IdealDoc> = report
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(docs.len(), 4);
        for doc in &docs {
            let nrd = parse_rational(&doc.nrd).unwrap();
            assert!(nrd.is_integer());
            assert!(
                !(nrd.to_integer() % BigInt::from(3)).is_zero(),
                "nrd {} not coprime to 3",
                doc.nrd
            );
        }
    }

    #[test]
    fn suborders_report_finds_the_lipschitz_order() {
        let hurwitz = parse_order_json(HURWITZ_FILE).unwrap();
        let report = suborders_report(&hurwitz, 2, 2).unwrap();
        let docs: Vec<SuborderDoc> = report
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert!(!docs.is_empty());
        let lipschitz = Order::from_basis(
            hurwitz.algebra().clone(),
            &[
                QuatElement::one(),
                QuatElement::from_ints(0, 1, 0, 0),
                QuatElement::from_ints(0, 0, 1, 0),
                QuatElement::from_ints(0, 0, 0, 1),
            ],
        )
        .unwrap();
        let mut hits = 0;
        for doc in &docs {
            assert_eq!(doc.index, "2");
            let sub = order_from_file(&doc.order).unwrap();
            if order_isomorphic(&sub, &lipschitz).unwrap().is_some() {
                hits += 1;
            }
        }
        assert_eq!(hits, 1);
    }

    #[test]
    fn stclgrp_report_on_a_trivial_group() {
        let hurwitz = parse_order_json(HURWITZ_FILE).unwrap();
        let report = stclgrp_report(&hurwitz).unwrap();
        let doc: StableGroupDoc = serde_json::from_str(report.trim()).unwrap();
        assert_eq!(doc.size, 1);
        assert_eq!(doc.elements, vec![vec![0]]);
        assert_eq!(doc.factors.len(), 1);
        assert_eq!(doc.factors[0].p, 2);
        assert_eq!(doc.factors[0].coset_count, 1);
    }

    #[test]
    fn table_format_names_round_trip() {
        for format in [TableFormat::Csv, TableFormat::JsonLines, TableFormat::Text] {
            assert_eq!(TableFormat::parse(format.as_str()).unwrap(), format);
        }
        assert!(TableFormat::parse("yaml").is_err());
        for suite in [
            VerifySuite::Masses,
            VerifySuite::Vigneras,
            VerifySuite::Fibers,
            VerifySuite::Table,
        ] {
            assert_eq!(VerifySuite::parse(suite.as_str()).unwrap(), suite);
        }
    }
}
