//! Discrete functions on cells, collections, and the Morse-Bott predicate.
//!
//! All comparisons use the facet relation only (`σ < τ` means
//! `dim σ = dim τ − 1`).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{CellIdx, CellSet, Complex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error("missing value for cell `{0}`")]
    MissingCell(String),
    #[error("duplicate value for cell `{0}`")]
    DuplicateValue(String),
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("cell `{cell}` is not in collection {collection}")]
    CellOutsideCollection { cell: String, collection: usize },
    #[error("cell `{0}` is both upward and downward noncritical")]
    BothNoncritical(String),
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("function is not discrete Morse-Bott ({} violation(s))", .0.violations.len())]
    NotMorseBott(MorseBottVerdict),
}

/// Exact rational value on every cell of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteFunction {
    values: Vec<BigRational>,
}

impl DiscreteFunction {
    /// Values listed in the complex's cell order.
    pub fn from_values(complex: &Complex, values: Vec<BigRational>) -> Result<Self, MorseError> {
        if values.len() != complex.len() {
            let missing = complex
                .cells()
                .get(values.len())
                .map_or_else(String::new, |c| c.id.clone());
            return Err(MorseError::MissingCell(missing));
        }
        Ok(DiscreteFunction { values })
    }

    /// Builds `f` from `(cell id, value)` assignments; every cell exactly once.
    pub fn from_assignments<S: AsRef<str>>(
        complex: &Complex,
        assignments: impl IntoIterator<Item = (S, BigRational)>,
    ) -> Result<Self, MorseError> {
        let mut slots: Vec<Option<BigRational>> = vec![None; complex.len()];
        for (id, v) in assignments {
            let id = id.as_ref();
            let c = complex
                .lookup(id)
                .ok_or_else(|| MorseError::UnknownCell(id.to_string()))?;
            if slots[c.index()].replace(v).is_some() {
                return Err(MorseError::DuplicateValue(id.to_string()));
            }
        }
        let values = slots
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| MorseError::MissingCell(complex.cells()[i].id.clone())))
            .collect::<Result<_, _>>()?;
        Ok(DiscreteFunction { values })
    }

    /// Integer-valued convenience constructor.
    pub fn from_integers<S: AsRef<str>>(
        complex: &Complex,
        assignments: impl IntoIterator<Item = (S, i64)>,
    ) -> Result<Self, MorseError> {
        Self::from_assignments(
            complex,
            assignments
                .into_iter()
                .map(|(s, v)| (s, BigRational::from_integer(BigInt::from(v)))),
        )
    }

    /// `f(σ) = dim σ`
    pub fn dimension(complex: &Complex) -> Self {
        Self::from_fn(complex, |c| BigRational::from_integer(BigInt::from(complex.dim(c))))
    }

    pub fn constant(complex: &Complex, value: BigRational) -> Self {
        DiscreteFunction {
            values: vec![value; complex.len()],
        }
    }

    pub fn from_fn(complex: &Complex, mut f: impl FnMut(CellIdx) -> BigRational) -> Self {
        DiscreteFunction {
            values: complex.indices().map(&mut f).collect(),
        }
    }

    pub fn value(&self, c: CellIdx) -> &BigRational {
        &self.values[c.index()]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }
}

/// `num/den`, or just `num` for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Maximal same-value cell set whose closures form a connected union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collection {
    pub id: usize,
    pub cells: CellSet,
    pub value: BigRational,
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut x = x;
        while self.0[x] != root {
            let next = self.0[x];
            self.0[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Partitions the cells into collections.
///
/// Two cells of equal value are joined when their closures share a cell,
/// transitively. Collections are numbered by their smallest member.
pub fn collections(complex: &Complex, f: &DiscreteFunction) -> Vec<Collection> {
    let n = complex.len();
    let mut ds = DisjointSets((0..n).collect());
    // for every cell ρ, the cells whose closure contains ρ, grouped by value
    let mut stars: Vec<Vec<CellIdx>> = vec![Vec::new(); n];
    for c in complex.indices() {
        for rho in complex.closure_of_cell(c) {
            stars[rho.index()].push(c);
        }
    }
    for star in &stars {
        let mut by_value: HashMap<&BigRational, usize> = HashMap::new();
        for &c in star {
            match by_value.get(f.value(c)) {
                Some(&first) => ds.union(first, c.index()),
                None => {
                    by_value.insert(f.value(c), c.index());
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, CellSet> = BTreeMap::new();
    for c in complex.indices() {
        groups.entry(ds.find(c.index())).or_default().insert(c);
    }
    groups
        .into_values()
        .enumerate()
        .map(|(id, cells)| {
            let value = f.value(*cells.first().expect("nonempty group")).clone();
            Collection { id, cells, value }
        })
        .collect()
}

/// Collection id of every cell.
pub fn owners(complex: &Complex, collections: &[Collection]) -> Vec<usize> {
    let mut owner = vec![usize::MAX; complex.len()];
    for col in collections {
        for c in &col.cells {
            owner[c.index()] = col.id;
        }
    }
    owner
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "irregular-face-value")]
    IrregularFaceValue,
    #[serde(rename = "U_exceeds_1")]
    UExceeds1,
    #[serde(rename = "D_exceeds_1")]
    DExceeds1,
    #[serde(rename = "U_and_D_both_1")]
    UAndDBoth1,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::IrregularFaceValue => "irregular-face-value",
            Rule::UExceeds1 => "U_exceeds_1",
            Rule::DExceeds1 => "D_exceeds_1",
            Rule::UAndDBoth1 => "U_and_D_both_1",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionViolation {
    pub cell: CellIdx,
    pub rule: Rule,
    pub witnesses: Vec<CellIdx>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseBottVerdict {
    pub ok: bool,
    pub violations: Vec<FunctionViolation>,
}

impl MorseBottVerdict {
    fn from_violations(violations: Vec<FunctionViolation>) -> Self {
        MorseBottVerdict {
            ok: violations.is_empty(),
            violations,
        }
    }
}

/// Irregular facets must strictly increase `f`. Reported once per record, at the child.
fn irregular_violations(complex: &Complex, f: &DiscreteFunction, sigma: CellIdx) -> Vec<FunctionViolation> {
    complex
        .cofacets(sigma)
        .filter(|r| !r.regular && f.value(sigma) >= f.value(r.parent))
        .map(|r| FunctionViolation {
            cell: sigma,
            rule: Rule::IrregularFaceValue,
            witnesses: vec![r.parent],
        })
        .collect()
}

/// Exceptional counts outside the own collection:
/// `U = #{τ ∉ C : σ regular facet of τ, f(τ) < f(σ)}` and
/// `D = #{ν ∉ C : ν regular facet of σ, f(ν) > f(σ)}`.
pub fn exceptional_cells(
    complex: &Complex,
    f: &DiscreteFunction,
    owner: &[usize],
    sigma: CellIdx,
) -> (Vec<CellIdx>, Vec<CellIdx>) {
    let own = owner[sigma.index()];
    let fs = f.value(sigma);
    let up = complex
        .cofacets(sigma)
        .filter(|r| r.regular && owner[r.parent.index()] != own && f.value(r.parent) < fs)
        .map(|r| r.parent)
        .collect();
    let down = complex
        .facets(sigma)
        .filter(|r| r.regular && owner[r.child.index()] != own && f.value(r.child) > fs)
        .map(|r| r.child)
        .collect();
    (up, down)
}

pub fn check_morse_bott(complex: &Complex, f: &DiscreteFunction) -> MorseBottVerdict {
    let cols = collections(complex, f);
    let owner = owners(complex, &cols);
    let mut violations = Vec::new();
    for sigma in complex.indices() {
        violations.extend(irregular_violations(complex, f, sigma));
        let (up, down) = exceptional_cells(complex, f, &owner, sigma);
        if up.len() > 1 {
            violations.push(FunctionViolation {
                cell: sigma,
                rule: Rule::UExceeds1,
                witnesses: up.clone(),
            });
        }
        if down.len() > 1 {
            violations.push(FunctionViolation {
                cell: sigma,
                rule: Rule::DExceeds1,
                witnesses: down.clone(),
            });
        }
        if up.len() == 1 && down.len() == 1 {
            violations.push(FunctionViolation {
                cell: sigma,
                rule: Rule::UAndDBoth1,
                witnesses: vec![up[0], down[0]],
            });
        }
    }
    MorseBottVerdict::from_violations(violations)
}

/// Forman's condition with non-strict comparisons on regular facets.
pub fn check_discrete_morse(complex: &Complex, f: &DiscreteFunction) -> MorseBottVerdict {
    let mut violations = Vec::new();
    for sigma in complex.indices() {
        violations.extend(irregular_violations(complex, f, sigma));
        let fs = f.value(sigma);
        let up: Vec<CellIdx> = complex
            .cofacets(sigma)
            .filter(|r| r.regular && f.value(r.parent) <= fs)
            .map(|r| r.parent)
            .collect();
        let down: Vec<CellIdx> = complex
            .facets(sigma)
            .filter(|r| r.regular && f.value(r.child) >= fs)
            .map(|r| r.child)
            .collect();
        if up.len() > 1 {
            violations.push(FunctionViolation {
                cell: sigma,
                rule: Rule::UExceeds1,
                witnesses: up,
            });
        }
        if down.len() > 1 {
            violations.push(FunctionViolation {
                cell: sigma,
                rule: Rule::DExceeds1,
                witnesses: down,
            });
        }
    }
    MorseBottVerdict::from_violations(violations)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellClass {
    Interior,
    /// Paired with a coface `w > σ` outside the collection with `f(w) < f(σ)`.
    Upward { witness: CellIdx },
    /// Paired with a face `w < σ` outside the collection with `f(w) > f(σ)`.
    Downward { witness: CellIdx },
}

impl CellClass {
    pub fn is_noncritical(self) -> bool {
        !matches!(self, CellClass::Interior)
    }
}

/// All upward and downward witnesses of `σ` relative to `collection`.
pub fn noncritical_witnesses(
    complex: &Complex,
    f: &DiscreteFunction,
    collection: &Collection,
    sigma: CellIdx,
) -> (Vec<CellIdx>, Vec<CellIdx>) {
    let fs = f.value(sigma);
    let up = complex
        .cofacets(sigma)
        .filter(|r| !collection.cells.contains(&r.parent) && fs > f.value(r.parent))
        .map(|r| r.parent)
        .collect();
    let down = complex
        .facets(sigma)
        .filter(|r| !collection.cells.contains(&r.child) && fs < f.value(r.child))
        .map(|r| r.child)
        .collect();
    (up, down)
}

pub fn classify_cell(
    complex: &Complex,
    f: &DiscreteFunction,
    collection: &Collection,
    sigma: CellIdx,
) -> Result<CellClass, MorseError> {
    if !collection.cells.contains(&sigma) {
        return Err(MorseError::CellOutsideCollection {
            cell: complex.id(sigma).to_string(),
            collection: collection.id,
        });
    }
    let (up, down) = noncritical_witnesses(complex, f, collection, sigma);
    match (up.first(), down.first()) {
        (Some(_), Some(_)) => Err(MorseError::BothNoncritical(complex.id(sigma).to_string())),
        (Some(&w), None) => Ok(CellClass::Upward { witness: w }),
        (None, Some(&w)) => Ok(CellClass::Downward { witness: w }),
        (None, None) => Ok(CellClass::Interior),
    }
}

pub fn classify(
    complex: &Complex,
    f: &DiscreteFunction,
    collection: &Collection,
) -> Result<BTreeMap<CellIdx, CellClass>, MorseError> {
    collection
        .cells
        .iter()
        .map(|&c| Ok((c, classify_cell(complex, f, collection, c)?)))
        .collect()
}

/// A collection with its upward and downward noncritical cells removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedCollection {
    pub parent: usize,
    pub value: BigRational,
    pub cells: CellSet,
    pub classification: BTreeMap<CellIdx, CellClass>,
}

impl ReducedCollection {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cell count per dimension, up to the top dimension of `complex`.
    pub fn counts(&self, complex: &Complex) -> Vec<usize> {
        let mut n = vec![0; complex.top_dim().map_or(0, |d| d + 1)];
        for &c in &self.cells {
            n[complex.dim(c)] += 1;
        }
        n
    }
}

pub fn reduce_collection(
    complex: &Complex,
    f: &DiscreteFunction,
    collection: &Collection,
) -> Result<ReducedCollection, MorseError> {
    let classification = classify(complex, f, collection)?;
    let cells = classification
        .iter()
        .filter(|(_, class)| !class.is_noncritical())
        .map(|(&c, _)| c)
        .collect();
    Ok(ReducedCollection {
        parent: collection.id,
        value: collection.value.clone(),
        cells,
        classification,
    })
}

/// Exactly two cells, one a facet of the other.
pub fn is_noncritical_pair(complex: &Complex, reduced: &ReducedCollection) -> bool {
    let cells: Vec<CellIdx> = reduced.cells.iter().copied().collect();
    match cells.as_slice() {
        &[a, b] => complex.is_facet(a, b) || complex.is_facet(b, a),
        _ => false,
    }
}

pub fn critical_cells(complex: &Complex, f: &DiscreteFunction) -> CellSet {
    complex
        .indices()
        .filter(|&s| {
            let fs = f.value(s);
            complex.cofacets(s).all(|r| f.value(r.parent) > fs)
                && complex.facets(s).all(|r| f.value(r.child) < fs)
        })
        .collect()
}

/// Collections and reduced collections of a Morse-Bott function.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub collections: Vec<Collection>,
    /// One entry per collection, in the same order; possibly empty.
    pub reduced: Vec<ReducedCollection>,
}

impl Decomposition {
    /// Nonempty reduced collections that are not noncritical pairs.
    pub fn essential<'a>(&'a self, complex: &'a Complex) -> impl Iterator<Item = &'a ReducedCollection> + 'a {
        self.reduced
            .iter()
            .filter(move |r| !r.is_empty() && !is_noncritical_pair(complex, r))
    }

    /// `∪ C^red` over all reduced collections.
    pub fn reduced_union(&self) -> CellSet {
        self.reduced.iter().flat_map(|r| r.cells.iter().copied()).collect()
    }
}

/// Checks the Morse-Bott condition, then reduces every collection.
pub fn decompose(complex: &Complex, f: &DiscreteFunction) -> Result<Decomposition, MorseError> {
    let verdict = check_morse_bott(complex, f);
    if !verdict.ok {
        return Err(MorseError::NotMorseBott(verdict));
    }
    let collections = collections(complex, f);
    let reduced = collections
        .iter()
        .map(|c| reduce_collection(complex, f, c))
        .collect::<Result<_, _>>()?;
    Ok(Decomposition {
        collections,
        reduced,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Epsilon {
    Auto,
    Value(BigRational),
}

/// Half the smallest gap between distinct values; `1` for constant functions.
pub fn auto_epsilon(f: &DiscreteFunction) -> BigRational {
    let mut values: Vec<&BigRational> = f.values().iter().collect();
    values.sort();
    values.dedup();
    values
        .windows(2)
        .map(|w| w[1] - w[0])
        .min()
        .map_or_else(BigRational::one, |d| d / BigRational::from_integer(BigInt::from(2)))
}

/// `f_ε(σ) = f(σ) − ε / (dim σ + 1)`
pub fn perturb(
    complex: &Complex,
    f: &DiscreteFunction,
    epsilon: &Epsilon,
) -> Result<DiscreteFunction, MorseError> {
    let eps = match epsilon {
        Epsilon::Auto => auto_epsilon(f),
        Epsilon::Value(e) if e.is_positive() => e.clone(),
        Epsilon::Value(_) => return Err(MorseError::NonPositiveEpsilon),
    };
    debug_assert!(!eps.is_zero());
    Ok(DiscreteFunction::from_fn(complex, |c| {
        let shift = &eps / BigRational::from_integer(BigInt::from(complex.dim(c) + 1));
        f.value(c) - shift
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn simplicial(simplices: &[&[&str]]) -> Complex {
        let v: Vec<Vec<&str>> = simplices.iter().map(|t| t.to_vec()).collect();
        Complex::build_simplicial(&v).unwrap()
    }

    fn ids(k: &Complex, s: &CellSet) -> Vec<String> {
        k.ids_of(s)
    }

    fn segment() -> (Complex, DiscreteFunction) {
        let k = simplicial(&[&["v", "w"]]);
        let f = DiscreteFunction::from_integers(&k, [("v", 1), ("v-w", 1), ("w", 0)]).unwrap();
        (k, f)
    }

    fn hollow() -> Complex {
        simplicial(&[&["a", "b"], &["b", "c"], &["a", "c"]])
    }

    #[test]
    fn collections_of_dimension_function() {
        let k = simplicial(&[&["a", "b", "c"]]);
        let f = DiscreteFunction::dimension(&k);
        let cols = collections(&k, &f);
        let mut sets: Vec<Vec<String>> = cols.iter().map(|c| ids(&k, &c.cells)).collect();
        sets.sort();
        assert_eq!(
            sets,
            vec![
                vec!["a".to_string()],
                vec!["a-b".into(), "a-c".into(), "b-c".into()],
                vec!["a-b-c".into()],
                vec!["b".into()],
                vec!["c".into()],
            ]
        );
    }

    #[test]
    fn constant_and_injective_collections() {
        let k = hollow();
        let f = DiscreteFunction::constant(&k, BigRational::zero());
        assert_eq!(collections(&k, &f).len(), 1);
        let g = DiscreteFunction::from_fn(&k, |c| BigRational::from_integer(BigInt::from(c.index())));
        assert!(collections(&k, &g).iter().all(|c| c.cells.len() == 1));
    }

    #[test]
    fn morse_bott_examples() {
        let k = simplicial(&[&["a", "b", "c"]]);
        assert!(check_morse_bott(&k, &DiscreteFunction::dimension(&k)).ok);
        let (s, f) = segment();
        assert!(check_morse_bott(&s, &f).ok);
        assert!(check_discrete_morse(&s, &f).ok);
    }

    #[test]
    fn vertex_with_two_lower_cofaces_violates() {
        // n has cofaces n-a and n-b outside its collection, both lower
        let k = simplicial(&[&["n", "a"], &["n", "b"], &["n", "c"]]);
        let f = DiscreteFunction::from_integers(
            &k,
            [("n", 3), ("c-n", 3), ("c", 0), ("a-n", 1), ("b-n", 2), ("a", 0), ("b", 0)],
        )
        .unwrap();
        let v = check_morse_bott(&k, &f);
        assert!(!v.ok);
        let n = k.resolve("n").unwrap();
        assert_eq!(v.violations.len(), 1);
        assert_eq!(v.violations[0].cell, n);
        assert_eq!(v.violations[0].rule, Rule::UExceeds1);
        assert_eq!(ids(&k, &v.violations[0].witnesses.iter().copied().collect()), vec!["a-n", "b-n"]);
    }

    #[test]
    fn discrete_morse_examples() {
        let h = hollow();
        let c = DiscreteFunction::constant(&h, BigRational::zero());
        let v = check_discrete_morse(&h, &c);
        assert!(!v.ok);
        let edges_flagged = v
            .violations
            .iter()
            .filter(|x| x.rule == Rule::DExceeds1 && h.dim(x.cell) == 1)
            .count();
        assert_eq!(edges_flagged, 3);
        assert!(check_discrete_morse(&h, &DiscreteFunction::dimension(&h)).ok);
    }

    #[test]
    fn irregular_record_needs_strict_increase() {
        let k = Complex::build_from_incidence([("v", 0), ("e", 1)], [("e", "v", 2, false)]).unwrap();
        let flat = DiscreteFunction::from_integers(&k, [("v", 1), ("e", 1)]).unwrap();
        let v = check_morse_bott(&k, &flat);
        assert_eq!(v.violations[0].rule, Rule::IrregularFaceValue);
        assert!(!check_discrete_morse(&k, &flat).ok);
        let up = DiscreteFunction::from_integers(&k, [("v", 0), ("e", 1)]).unwrap();
        assert!(check_morse_bott(&k, &up).ok);
    }

    #[test]
    fn classification_examples() {
        let k = simplicial(&[&["a", "b", "c"]]);
        let f = DiscreteFunction::dimension(&k);
        let cols = collections(&k, &f);
        let edges = cols.iter().find(|c| c.cells.len() == 3).unwrap();
        assert!(classify(&k, &f, edges).unwrap().values().all(|c| *c == CellClass::Interior));

        let (s, g) = segment();
        let cols = collections(&s, &g);
        let ve = cols.iter().find(|c| c.cells.len() == 2).unwrap();
        assert!(classify(&s, &g, ve).unwrap().values().all(|c| *c == CellClass::Interior));
        let w = s.resolve("w").unwrap();
        assert!(matches!(
            classify_cell(&s, &g, ve, w),
            Err(MorseError::CellOutsideCollection { .. })
        ));

        // v alone with a lower coface
        let h = DiscreteFunction::from_integers(&s, [("v", 2), ("v-w", 1), ("w", 0)]).unwrap();
        let cols = collections(&s, &h);
        let v = s.resolve("v").unwrap();
        let cv = cols.iter().find(|c| c.cells.contains(&v)).unwrap();
        assert_eq!(
            classify_cell(&s, &h, cv, v).unwrap(),
            CellClass::Upward { witness: s.resolve("v-w").unwrap() }
        );
        let red = reduce_collection(&s, &h, cv).unwrap();
        assert!(red.is_empty());
    }

    #[test]
    fn noncritical_pair_detection() {
        let (s, f) = segment();
        let d = decompose(&s, &f).unwrap();
        let pair = d.reduced.iter().find(|r| r.cells.len() == 2).unwrap();
        assert!(is_noncritical_pair(&s, pair));
        assert_eq!(d.essential(&s).count(), 1);

        let h = hollow();
        let two_vertices = ReducedCollection {
            parent: 0,
            value: BigRational::zero(),
            cells: h.resolve_all(&["a", "b"]).unwrap(),
            classification: BTreeMap::new(),
        };
        assert!(!is_noncritical_pair(&h, &two_vertices));
    }

    #[test]
    fn critical_cell_examples() {
        let k = simplicial(&[&["a", "b", "c"]]);
        assert_eq!(critical_cells(&k, &DiscreteFunction::dimension(&k)).len(), 7);
        let (s, f) = segment();
        assert_eq!(ids(&s, &critical_cells(&s, &f)), vec!["w"]);
        let h = hollow();
        assert!(critical_cells(&h, &DiscreteFunction::constant(&h, BigRational::zero())).is_empty());
    }

    #[test]
    fn perturbation_examples() {
        let k = simplicial(&[&["a", "b", "c"]]);
        let f = DiscreteFunction::dimension(&k);
        let g = perturb(&k, &f, &Epsilon::Value(q(1, 2))).unwrap();
        for c in k.indices() {
            let expect = match k.dim(c) {
                0 => q(-1, 2),
                1 => q(3, 4),
                _ => q(11, 6),
            };
            assert_eq!(g.value(c), &expect);
        }
        assert!(check_discrete_morse(&k, &g).ok);
        assert_eq!(critical_cells(&k, &g).len(), 7);

        let h = hollow();
        let c = DiscreteFunction::constant(&h, BigRational::zero());
        assert_eq!(auto_epsilon(&c), BigRational::one());
        let g = perturb(&h, &c, &Epsilon::Auto).unwrap();
        for x in h.indices() {
            let expect = if h.dim(x) == 0 { q(-1, 1) } else { q(-1, 2) };
            assert_eq!(g.value(x), &expect);
        }
        assert!(check_discrete_morse(&h, &g).ok);
        assert_eq!(critical_cells(&h, &g), h.all_cells());
        assert_eq!(decompose(&h, &c).unwrap().reduced_union(), h.all_cells());

        assert_eq!(
            perturb(&h, &c, &Epsilon::Value(BigRational::zero())).unwrap_err(),
            MorseError::NonPositiveEpsilon
        );
    }

    #[test]
    fn function_construction_errors() {
        let (s, _) = segment();
        assert_eq!(
            DiscreteFunction::from_integers(&s, [("v", 0), ("v-w", 1)]).unwrap_err(),
            MorseError::MissingCell("w".into())
        );
        assert_eq!(
            DiscreteFunction::from_integers(&s, [("v", 0), ("v", 1)]).unwrap_err(),
            MorseError::DuplicateValue("v".into())
        );
        assert_eq!(format_rational(&q(1, 2)), "1/2");
        assert_eq!(format_rational(&q(-4, 2)), "-2");
    }
}
