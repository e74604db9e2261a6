//! Text formats for complexes, functions and arrow sets, plus the structured
//! report documents emitted by the command line tool.
//!
//! Complex files are line oriented:
//!
//! ```text
//! # a loop
//! cell v 0
//! cell e 1
//! face e v 0 i
//! ```
//!
//! or, for simplicial complexes, one `simplex v1 v2 ...` line per simplex.
//! Function files hold `value <cell> <num>[/<den>]` lines.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::analysis::{
    euler_summary, kernel_inequality_check, morse_bott_inequalities, InequalityReport, KernelCheck,
};
use crate::complex::{CellIdx, CellSet, Complex, ComplexError, ValidationReport, Violation};
use crate::conley::{conley_theorem_check, ConleyReport};
use crate::flow::{
    closed_orbits, cross_collection_orbits, is_combinatorial, vector_field, ArrowSet, FlowError,
    OrbitSearch,
};
use crate::homology::{Coefficients, HomologySummary, Polynomial};
use crate::morse::{
    check_discrete_morse, check_morse_bott, collections, critical_cells, decompose, format_rational,
    owners, perturb, CellClass, Decomposition, DiscreteFunction, Epsilon, MorseBottVerdict,
    MorseError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("complex failed validation ({} violation(s))", .0.violations.len())]
    Invalid(ValidationReport),
    #[error("missing cell {0}")]
    MissingCell(String),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("invalid report document: {0}")]
    Json(String),
}

fn syntax(line: usize, message: impl Into<String>) -> IoError {
    IoError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, as `(line number, tokens)`.
fn directives(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

/// Parses a complex file; `validate` additionally requires
/// [`Complex::validate`] to pass.
pub fn parse_complex(text: &str, validate: bool) -> Result<Complex, IoError> {
    let mut simplices: Vec<Vec<String>> = Vec::new();
    let mut cells: Vec<(String, usize)> = Vec::new();
    let mut faces: Vec<(String, String, i64, bool)> = Vec::new();
    let mut dims: HashMap<String, usize> = HashMap::new();
    let mut seen_faces: HashSet<(String, String)> = HashSet::new();
    let mut explicit_line = None;

    for (line, tokens) in directives(text) {
        match tokens[0] {
            "simplex" => {
                if let Some(l) = explicit_line {
                    return Err(syntax(line, format!("`simplex` cannot follow `cell`/`face` (line {l})")));
                }
                if tokens.len() < 2 {
                    return Err(syntax(line, "`simplex` needs at least one vertex"));
                }
                simplices.push(tokens[1..].iter().map(|s| s.to_string()).collect());
            }
            "cell" | "face" if !simplices.is_empty() => {
                return Err(syntax(line, format!("`{}` cannot be mixed with `simplex`", tokens[0])));
            }
            "cell" => {
                explicit_line.get_or_insert(line);
                let [_, id, dim] = tokens[..] else {
                    return Err(syntax(line, "expected `cell <id> <dim>`"));
                };
                let dim: usize = dim
                    .parse()
                    .map_err(|_| syntax(line, format!("invalid dimension `{dim}`")))?;
                if dims.insert(id.to_string(), dim).is_some() {
                    return Err(syntax(line, format!("duplicate cell `{id}`")));
                }
                cells.push((id.to_string(), dim));
            }
            "face" => {
                explicit_line.get_or_insert(line);
                let [_, parent, child, inc, kind] = tokens[..] else {
                    return Err(syntax(line, "expected `face <parent> <child> <incidence> <r|i>`"));
                };
                for id in [parent, child] {
                    if !dims.contains_key(id) {
                        return Err(syntax(line, format!("unknown cell `{id}` (declare it with `cell` first)")));
                    }
                }
                if dims[parent] != dims[child] + 1 {
                    return Err(syntax(
                        line,
                        format!("dim mismatch: `{parent}` has dim {}, `{child}` has dim {}", dims[parent], dims[child]),
                    ));
                }
                let incidence: i64 = inc
                    .parse()
                    .map_err(|_| syntax(line, format!("invalid incidence `{inc}`")))?;
                let regular = match kind {
                    "r" => true,
                    "i" => false,
                    other => return Err(syntax(line, format!("expected `r` or `i`, found `{other}`"))),
                };
                if !seen_faces.insert((parent.to_string(), child.to_string())) {
                    return Err(syntax(line, format!("duplicate face `{parent}` > `{child}`")));
                }
                faces.push((parent.to_string(), child.to_string(), incidence, regular));
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }

    if simplices.is_empty() && cells.is_empty() {
        return Err(ComplexError::EmptyInput.into());
    }
    let complex = if simplices.is_empty() {
        Complex::build_from_incidence(cells, faces)?
    } else {
        Complex::build_simplicial(&simplices)?
    };
    if validate {
        let report = complex.validate();
        if !report.ok {
            return Err(IoError::Invalid(report));
        }
    }
    Ok(complex)
}

/// Simplicial complexes are written as their maximal simplices, anything
/// else as explicit `cell` and `face` lines.
pub fn serialize_complex(complex: &Complex) -> String {
    let mut out = String::new();
    if complex.is_simplicial() {
        for c in complex.indices() {
            if complex.cofacets(c).next().is_none() {
                let _ = writeln!(out, "simplex {}", complex.id(c).split('-').collect::<Vec<_>>().join(" "));
            }
        }
        return out;
    }
    for cell in complex.cells() {
        let _ = writeln!(out, "cell {} {}", cell.id, cell.dim);
    }
    for r in complex.faces() {
        let _ = writeln!(
            out,
            "face {} {} {} {}",
            complex.id(r.parent),
            complex.id(r.child),
            r.incidence,
            if r.regular { 'r' } else { 'i' }
        );
    }
    out
}

fn parse_rational(token: &str, line: usize) -> Result<BigRational, IoError> {
    let (num, den) = token.split_once('/').unwrap_or((token, "1"));
    let num: BigInt = num
        .parse()
        .map_err(|_| syntax(line, format!("invalid numerator `{num}`")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| syntax(line, format!("invalid denominator `{den}`")))?;
    if den.is_zero() {
        return Err(syntax(line, "zero denominator"));
    }
    if den.is_negative() {
        return Err(syntax(line, "denominator must be positive"));
    }
    Ok(BigRational::new(num, den))
}

/// A single `num[/den]` token, as accepted in function files.
pub fn parse_value(token: &str) -> Result<BigRational, String> {
    parse_rational(token, 0).map_err(|e| match e {
        IoError::Syntax { message, .. } => message,
        other => other.to_string(),
    })
}

pub fn parse_function(text: &str, complex: &Complex) -> Result<DiscreteFunction, IoError> {
    let mut values: Vec<Option<BigRational>> = vec![None; complex.len()];
    for (line, tokens) in directives(text) {
        let ["value", id, q] = tokens[..] else {
            return Err(syntax(line, "expected `value <cell> <num>[/<den>]`"));
        };
        let c = complex
            .lookup(id)
            .ok_or_else(|| syntax(line, format!("unknown cell `{id}`")))?;
        let q = parse_rational(q, line)?;
        if values[c.index()].replace(q).is_some() {
            return Err(syntax(line, format!("duplicate value for `{id}`")));
        }
    }
    let values = complex
        .indices()
        .map(|c| values[c.index()].take().ok_or_else(|| IoError::MissingCell(complex.id(c).to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    DiscreteFunction::from_values(complex, values).map_err(|e| match e {
        MorseError::MissingCell(id) => IoError::MissingCell(id),
        other => IoError::Json(other.to_string()),
    })
}

pub fn serialize_function(complex: &Complex, f: &DiscreteFunction) -> String {
    let mut out = String::new();
    for c in complex.indices() {
        let _ = writeln!(out, "value {} {}", complex.id(c), format_rational(f.value(c)));
    }
    out
}

/// Arrow files hold `arrow <source> <target>` lines.
pub fn parse_arrows(text: &str, complex: &Complex) -> Result<ArrowSet, IoError> {
    let mut pairs = Vec::new();
    for (line, tokens) in directives(text) {
        let ["arrow", s, t] = tokens[..] else {
            return Err(syntax(line, "expected `arrow <source> <target>`"));
        };
        let resolve = |id: &str| {
            complex
                .lookup(id)
                .ok_or_else(|| syntax(line, format!("unknown cell `{id}`")))
        };
        pairs.push((resolve(s)?, resolve(t)?));
    }
    Ok(ArrowSet::from_pairs(complex, pairs)?)
}

// ---------------------------------------------------------------------------
// report documents

fn ids(complex: &Complex, cells: &CellSet) -> Vec<String> {
    complex.ids_of(cells)
}

fn ids_vec(complex: &Complex, cells: &[CellIdx]) -> Vec<String> {
    cells.iter().map(|&c| complex.id(c).to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationDoc {
    pub ok: bool,
    pub cells: usize,
    pub faces: usize,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionViolationDoc {
    pub cell: String,
    pub rule: String,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseCheckDoc {
    pub ok: bool,
    pub discrete_morse: bool,
    pub violations: Vec<FunctionViolationDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedCellDoc {
    pub cell: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionDoc {
    pub id: usize,
    pub value: String,
    pub cells: Vec<String>,
    pub upward: Vec<PairedCellDoc>,
    pub downward: Vec<PairedCellDoc>,
    pub reduced: Vec<String>,
    pub noncritical_pair: bool,
    pub invariant_set: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionsDoc {
    pub collections: Vec<CollectionDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyDoc {
    pub ring: Coefficients,
    pub cell_counts: Vec<usize>,
    pub ranks: Vec<usize>,
    pub betti: Vec<usize>,
    /// Torsion coefficients per degree, as decimal strings.
    pub torsion: Vec<Vec<String>>,
    pub poincare: Polynomial,
    pub euler: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub collection: usize,
    pub value: String,
    pub cells: Vec<String>,
    pub counts: Vec<usize>,
    pub poincare: Polynomial,
    pub euler: i64,
    pub defect: Option<Polynomial>,
    pub defect_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelDoc {
    pub degree: usize,
    pub collection_sum: usize,
    pub morse: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalitiesDoc {
    pub ring: Coefficients,
    pub terms: Vec<TermDoc>,
    pub excluded: Vec<usize>,
    pub sum: Polynomial,
    pub complex_poincare: Polynomial,
    #[serde(rename = "R")]
    pub r: Polynomial,
    pub division_remainder: i64,
    pub divisible: bool,
    pub nonneg: bool,
    pub complex_euler: i64,
    pub sum_euler: i64,
    pub euler_identity: bool,
    pub kernels: Vec<KernelDoc>,
    pub kernel_remainder: Polynomial,
    pub kernels_ok: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantSetDoc {
    pub collection: usize,
    pub invariant: Vec<String>,
    pub neighborhood: Vec<String>,
    pub exit: Vec<String>,
    pub exit_cells: Vec<String>,
    pub index: Polynomial,
    pub reduced_poincare: Polynomial,
    pub euler_reduced: i64,
    pub euler_neighborhood: i64,
    pub euler_exit: i64,
    pub euler_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConleyDoc {
    pub ring: Coefficients,
    pub sets: Vec<InvariantSetDoc>,
    pub sum: Polynomial,
    pub complex_poincare: Polynomial,
    #[serde(rename = "R")]
    pub r: Polynomial,
    pub division_remainder: i64,
    pub divisible: bool,
    pub nonneg: bool,
    pub agrees_with_reduced: bool,
    pub euler_ok: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldViolationDoc {
    pub rule: String,
    pub cell: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowDoc {
    pub arrows: Vec<[String; 2]>,
    pub combinatorial: bool,
    pub violations: Vec<FieldViolationDoc>,
    /// Each orbit as `σ0, τ0, σ1, τ1, …, σ0`.
    pub orbits: Vec<Vec<String>>,
    pub truncated: bool,
    pub cross_collection: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbDoc {
    pub epsilon: String,
    pub values: BTreeMap<String, String>,
    pub discrete_morse: bool,
    pub critical: Vec<String>,
    pub reduced_union: Vec<String>,
    pub critical_match: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullReportDoc {
    pub ok: bool,
    pub morse_check: MorseCheckDoc,
    pub collections: Option<CollectionsDoc>,
    pub inequalities: Vec<InequalitiesDoc>,
    pub conley: Vec<ConleyDoc>,
    /// `ΣC_t = ΣP_t` and equal `R(t)` in both theorems, per ring.
    pub theorems_agree: bool,
    pub flow: FlowDoc,
    pub errors: Vec<String>,
}

/// Every structured output of the tool; the `kind` field names the variant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReportDocument {
    Validation(ValidationDoc),
    MorseCheck(MorseCheckDoc),
    Collections(CollectionsDoc),
    Homology(HomologyDoc),
    Inequalities(InequalitiesDoc),
    Conley(ConleyDoc),
    Flow(FlowDoc),
    Perturb(PerturbDoc),
    Report(FullReportDoc),
}

impl ReportDocument {
    /// Whether every checked identity in the document holds.
    pub fn ok(&self) -> bool {
        match self {
            ReportDocument::Validation(d) => d.ok,
            ReportDocument::MorseCheck(d) => d.ok,
            ReportDocument::Collections(_) | ReportDocument::Homology(_) | ReportDocument::Flow(_) => true,
            ReportDocument::Inequalities(d) => d.ok,
            ReportDocument::Conley(d) => d.ok,
            ReportDocument::Perturb(d) => d.ok,
            ReportDocument::Report(d) => d.ok,
        }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<ReportDocument, IoError> {
        serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
    }

    /// Indented `key: value` rendering; polynomials appear as `2 + t  [2,1]`.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("documents always serialize");
        let mut out = String::new();
        render(&mut out, &value, 0, None);
        out
    }
}

const POLYNOMIAL_KEYS: &[&str] = &[
    "poincare",
    "complex_poincare",
    "sum",
    "R",
    "defect",
    "index",
    "reduced_poincare",
    "kernel_remainder",
];

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn render(out: &mut String, v: &Value, indent: usize, key: Option<&str>) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                match child {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render(out, child, indent + 1, Some(k));
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) && !POLYNOMIAL_KEYS.contains(&k.as_str()) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render(out, child, indent + 1, Some(k));
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", inline(child, Some(k)));
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                match item {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}- [{i}]");
                        render(out, item, indent + 1, key);
                    }
                    other => {
                        let _ = writeln!(out, "{pad}- {}", inline(other, key));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other));
        }
    }
}

fn inline(v: &Value, key: Option<&str>) -> String {
    match v {
        Value::Array(items) if key.is_some_and(|k| POLYNOMIAL_KEYS.contains(&k)) => {
            let coeffs: Vec<i64> = items.iter().filter_map(Value::as_i64).collect();
            format!("{}  {}", Polynomial::new(coeffs), v)
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(|i| inline(i, None)).collect();
            format!("[{}]", parts.join(", "))
        }
        other => scalar(other),
    }
}

pub fn validation_doc(complex: &Complex, report: &ValidationReport) -> ValidationDoc {
    ValidationDoc {
        ok: report.ok,
        cells: complex.len(),
        faces: complex.faces().len(),
        violations: report.violations.clone(),
    }
}

pub fn morse_check_doc(complex: &Complex, verdict: &MorseBottVerdict, discrete_morse: bool) -> MorseCheckDoc {
    MorseCheckDoc {
        ok: verdict.ok,
        discrete_morse,
        violations: verdict
            .violations
            .iter()
            .map(|v| FunctionViolationDoc {
                cell: complex.id(v.cell).to_string(),
                rule: v.rule.to_string(),
                witnesses: ids_vec(complex, &v.witnesses),
            })
            .collect(),
    }
}

pub fn collections_doc(complex: &Complex, dec: &Decomposition) -> CollectionsDoc {
    let essential: HashSet<usize> = dec.essential(complex).map(|r| r.parent).collect();
    let collections = dec
        .collections
        .iter()
        .zip(&dec.reduced)
        .map(|(c, r)| {
            let (mut upward, mut downward) = (Vec::new(), Vec::new());
            for (&cell, class) in &r.classification {
                match *class {
                    CellClass::Upward { witness } => upward.push(PairedCellDoc {
                        cell: complex.id(cell).to_string(),
                        witness: complex.id(witness).to_string(),
                    }),
                    CellClass::Downward { witness } => downward.push(PairedCellDoc {
                        cell: complex.id(cell).to_string(),
                        witness: complex.id(witness).to_string(),
                    }),
                    CellClass::Interior => {}
                }
            }
            upward.sort_by(|a, b| a.cell.cmp(&b.cell));
            downward.sort_by(|a, b| a.cell.cmp(&b.cell));
            CollectionDoc {
                id: c.id,
                value: format_rational(&c.value),
                cells: ids(complex, &c.cells),
                upward,
                downward,
                reduced: ids(complex, &r.cells),
                noncritical_pair: crate::morse::is_noncritical_pair(complex, r),
                invariant_set: essential.contains(&c.id),
            }
        })
        .collect();
    CollectionsDoc { collections }
}

pub fn homology_doc(h: &HomologySummary) -> HomologyDoc {
    HomologyDoc {
        ring: h.ring,
        cell_counts: h.cell_counts.clone(),
        ranks: h.ranks.clone(),
        betti: h.betti.clone(),
        torsion: h
            .torsion
            .iter()
            .map(|t| t.iter().map(ToString::to_string).collect())
            .collect(),
        poincare: crate::homology::poincare_polynomial(h),
        euler: h.euler(),
    }
}

pub fn inequalities_doc(complex: &Complex, report: &InequalityReport, kernels: &KernelCheck) -> InequalitiesDoc {
    let (complex_euler, sum_euler, euler_identity) = euler_summary(report);
    InequalitiesDoc {
        ring: report.ring,
        terms: report
            .terms
            .iter()
            .map(|t| TermDoc {
                collection: t.collection,
                value: format_rational(&t.value),
                cells: ids(complex, &t.cells),
                counts: t.counts.clone(),
                poincare: t.poincare.clone(),
                euler: t.euler,
                defect: t.defect.as_ref().ok().cloned(),
                defect_error: t.defect.as_ref().err().map(ToString::to_string),
            })
            .collect(),
        excluded: report.excluded.clone(),
        sum: report.sum.clone(),
        complex_poincare: report.complex_poincare.clone(),
        r: report.quotient.clone(),
        division_remainder: report.division_remainder,
        divisible: report.divisible,
        nonneg: report.nonneg,
        complex_euler,
        sum_euler,
        euler_identity,
        kernels: kernels
            .degrees
            .iter()
            .map(|d| KernelDoc {
                degree: d.degree,
                collection_sum: d.collection_sum,
                morse: d.morse,
                holds: d.holds,
            })
            .collect(),
        kernel_remainder: kernels.remainder.clone(),
        kernels_ok: kernels.ok,
        ok: report.holds() && report.defects_ok() && kernels.ok && kernels.remainder == report.quotient,
    }
}

pub fn conley_doc(complex: &Complex, report: &ConleyReport) -> ConleyDoc {
    ConleyDoc {
        ring: report.ring,
        sets: report
            .sets
            .iter()
            .map(|s| InvariantSetDoc {
                collection: s.pair.collection,
                invariant: ids(complex, &s.pair.invariant),
                neighborhood: ids(complex, &s.pair.neighborhood),
                exit: ids(complex, &s.pair.exit),
                exit_cells: ids(complex, &s.pair.exit_cells),
                index: s.index.clone(),
                reduced_poincare: s.reduced_poincare.clone(),
                euler_reduced: s.euler.reduced,
                euler_neighborhood: s.euler.neighborhood,
                euler_exit: s.euler.exit,
                euler_ok: s.euler.ok,
            })
            .collect(),
        sum: report.sum.clone(),
        complex_poincare: report.complex_poincare.clone(),
        r: report.quotient.clone(),
        division_remainder: report.division_remainder,
        divisible: report.divisible,
        nonneg: report.nonneg,
        agrees_with_reduced: report.agrees_with_reduced,
        euler_ok: report.euler_ok(),
        ok: report.holds(),
    }
}

/// `owner` maps cells to collection ids when a function is available.
pub fn flow_doc(complex: &Complex, field: &ArrowSet, search: &OrbitSearch, owner: Option<&[usize]>) -> FlowDoc {
    let verdict = is_combinatorial(field, complex);
    let orbit_ids = |o: &crate::flow::Orbit| ids_vec(complex, &o.cells());
    let cross = owner.map_or_else(Vec::new, |own| cross_collection_orbits(&search.orbits, own));
    FlowDoc {
        arrows: field
            .arrows()
            .iter()
            .map(|&(s, t)| [complex.id(s).to_string(), complex.id(t).to_string()])
            .collect(),
        combinatorial: verdict.ok,
        violations: verdict
            .violations
            .iter()
            .map(|v| FieldViolationDoc {
                rule: v.rule.to_string(),
                cell: complex.id(v.cell).to_string(),
            })
            .collect(),
        orbits: search.orbits.iter().map(orbit_ids).collect(),
        truncated: search.truncated,
        cross_collection: cross.iter().map(orbit_ids).collect(),
    }
}

pub fn perturb_doc(
    complex: &Complex,
    f: &DiscreteFunction,
    epsilon: &Epsilon,
) -> Result<PerturbDoc, MorseError> {
    let eps = match epsilon {
        Epsilon::Auto => crate::morse::auto_epsilon(f),
        Epsilon::Value(e) => e.clone(),
    };
    let g = perturb(complex, f, &Epsilon::Value(eps.clone()))?;
    let discrete_morse = check_discrete_morse(complex, &g).ok;
    let critical = critical_cells(complex, &g);
    let reduced_union = decompose(complex, f).ok().map(|d| d.reduced_union());
    let critical_match = reduced_union.as_ref() == Some(&critical);
    Ok(PerturbDoc {
        epsilon: format_rational(&eps),
        values: complex
            .indices()
            .map(|c| (complex.id(c).to_string(), format_rational(g.value(c))))
            .collect(),
        discrete_morse,
        critical: ids(complex, &critical),
        reduced_union: reduced_union.map_or_else(Vec::new, |u| ids(complex, &u)),
        critical_match,
        ok: discrete_morse && critical_match,
    })
}

/// Runs every check on `(complex, f)` over both coefficient rings.
pub fn full_report(complex: &Complex, f: &DiscreteFunction, max_orbits: usize) -> FullReportDoc {
    let verdict = check_morse_bott(complex, f);
    let morse_check = morse_check_doc(complex, &verdict, check_discrete_morse(complex, f).ok);
    let field = vector_field(complex, f);
    let owner = owners(complex, &collections(complex, f));
    let search = closed_orbits(&field, complex, max_orbits);
    let flow = flow_doc(complex, &field, &search, Some(&owner));
    let mut errors = Vec::new();
    let mut inequalities = Vec::new();
    let mut conley = Vec::new();
    let mut collections_out = None;
    let mut theorems_agree = verdict.ok;
    if verdict.ok {
        if let Ok(dec) = decompose(complex, f) {
            collections_out = Some(collections_doc(complex, &dec));
        }
        for ring in [Coefficients::Integers, Coefficients::Mod2] {
            let ineq = morse_bott_inequalities(complex, f, ring)
                .and_then(|r| Ok((kernel_inequality_check(complex, f, ring)?, r)));
            let con = conley_theorem_check(complex, f, ring);
            match (&ineq, &con) {
                (Ok((k, r)), Ok(c)) => {
                    theorems_agree &= r.sum == c.sum && r.quotient == c.quotient;
                    inequalities.push(inequalities_doc(complex, r, k));
                    conley.push(conley_doc(complex, c));
                }
                _ => theorems_agree = false,
            }
            if let Err(e) = &ineq {
                errors.push(format!("inequalities ({ring}): {}", e));
            }
            if let Err(e) = &con {
                errors.push(format!("conley ({ring}): {}", e));
            }
        }
    }
    let ok = verdict.ok
        && errors.is_empty()
        && theorems_agree
        && inequalities.iter().all(|d| d.ok)
        && conley.iter().all(|d| d.ok);
    FullReportDoc {
        ok,
        morse_check,
        collections: collections_out,
        inequalities,
        conley,
        theorems_agree,
        flow,
        errors,
    }
}
