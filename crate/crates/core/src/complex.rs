//! Finite CW complexes given by explicit facet incidence records.
//!
//! A [`Complex`] stores its cells sorted by `(dim, id)` and one [`FaceRecord`]
//! per facet relation `child < parent` (codimension one). Deeper face
//! relations are derived on demand by [`Complex::closure`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Position of a cell inside its [`Complex`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellIdx(usize);

impl CellIdx {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for CellIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Ordered set of cells; iteration follows the complex's `(dim, id)` order.
pub type CellSet = BTreeSet<CellIdx>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
}

/// Facet relation `child < parent` with incidence number `[parent : child]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceRecord {
    pub parent: CellIdx,
    pub child: CellIdx,
    pub incidence: i64,
    pub regular: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("duplicate cell id `{0}`")]
    DuplicateCell(String),
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("dim mismatch: face `{parent}` -> `{child}` has dims {parent_dim} and {child_dim}")]
    DimMismatch {
        parent: String,
        child: String,
        parent_dim: usize,
        child_dim: usize,
    },
    #[error("duplicate face record `{parent}` -> `{child}`")]
    DuplicateFace { parent: String, child: String },
    #[error("empty input: at least one simplex is required")]
    EmptyInput,
    #[error("empty simplex")]
    EmptySimplex,
    #[error("repeated vertex `{0}` inside one simplex")]
    RepeatedVertex(String),
    #[error("invalid vertex id `{0}`: ids must be nonempty and may not contain '-' or whitespace")]
    InvalidVertexId(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub cells: Vec<String>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }
}

/// Immutable finite CW complex.
#[derive(Clone, Debug)]
pub struct Complex {
    cells: Vec<Cell>,
    faces: Vec<FaceRecord>,
    lookup: HashMap<String, CellIdx>,
    facets: Vec<Vec<usize>>,
    cofacets: Vec<Vec<usize>>,
    simplicial: bool,
}

impl Complex {
    /// Builds a complex from declared cells and facet records.
    ///
    /// Checks id uniqueness, references, and the codimension-one rule; the
    /// chain condition is left to [`Complex::validate`].
    pub fn build_from_incidence<S, T>(
        cells: impl IntoIterator<Item = (S, usize)>,
        faces: impl IntoIterator<Item = (T, T, i64, bool)>,
    ) -> Result<Complex, ComplexError>
    where
        S: Into<String>,
        T: AsRef<str>,
    {
        let mut raw: Vec<Cell> = Vec::new();
        let mut seen = HashSet::new();
        for (id, dim) in cells {
            let id = id.into();
            if !seen.insert(id.clone()) {
                return Err(ComplexError::DuplicateCell(id));
            }
            raw.push(Cell { id, dim });
        }
        raw.sort_by(|a, b| (a.dim, &a.id).cmp(&(b.dim, &b.id)));
        let lookup: HashMap<String, CellIdx> = raw
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.clone(), CellIdx(i)))
            .collect();

        let mut records = Vec::new();
        let mut pairs = HashSet::new();
        for (parent, child, incidence, regular) in faces {
            let (parent, child) = (parent.as_ref(), child.as_ref());
            let p = *lookup
                .get(parent)
                .ok_or_else(|| ComplexError::UnknownCell(parent.to_string()))?;
            let c = *lookup
                .get(child)
                .ok_or_else(|| ComplexError::UnknownCell(child.to_string()))?;
            let (pd, cd) = (raw[p.0].dim, raw[c.0].dim);
            if pd != cd + 1 {
                return Err(ComplexError::DimMismatch {
                    parent: parent.to_string(),
                    child: child.to_string(),
                    parent_dim: pd,
                    child_dim: cd,
                });
            }
            if !pairs.insert((p, c)) {
                return Err(ComplexError::DuplicateFace {
                    parent: parent.to_string(),
                    child: child.to_string(),
                });
            }
            records.push(FaceRecord {
                parent: p,
                child: c,
                incidence,
                regular,
            });
        }
        records.sort_by_key(|r| (r.parent, r.child));
        Ok(Self::assemble(raw, records, lookup, false))
    }

    /// Builds the simplicial complex generated by the given maximal simplices.
    ///
    /// Every simplex is named by its sorted vertex ids joined with `-`, and
    /// `[s : s \ v_i] = (-1)^i` for the sorted vertex list of `s`.
    pub fn build_simplicial<S: AsRef<str>>(
        maximal_simplices: &[Vec<S>],
    ) -> Result<Complex, ComplexError> {
        if maximal_simplices.is_empty() {
            return Err(ComplexError::EmptyInput);
        }
        let mut simplices: BTreeSet<Vec<String>> = BTreeSet::new();
        for tuple in maximal_simplices {
            if tuple.is_empty() {
                return Err(ComplexError::EmptySimplex);
            }
            let mut verts: Vec<String> = Vec::with_capacity(tuple.len());
            for v in tuple {
                let v = v.as_ref();
                if v.is_empty() || v.contains('-') || v.chars().any(char::is_whitespace) {
                    return Err(ComplexError::InvalidVertexId(v.to_string()));
                }
                verts.push(v.to_string());
            }
            verts.sort();
            if let Some(w) = verts.windows(2).find(|w| w[0] == w[1]) {
                return Err(ComplexError::RepeatedVertex(w[0].clone()));
            }
            // all nonempty subsets, bitmask enumeration keeps sorted order
            let n = verts.len();
            for mask in 1u64..(1u64 << n) {
                let sub: Vec<String> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| verts[i].clone())
                    .collect();
                simplices.insert(sub);
            }
        }

        let cells: Vec<(String, usize)> = simplices
            .iter()
            .map(|s| (s.join("-"), s.len() - 1))
            .collect();
        let mut faces = Vec::new();
        for s in simplices.iter().filter(|s| s.len() > 1) {
            let parent = s.join("-");
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                faces.push((parent.clone(), face.join("-"), sign, true));
            }
        }
        let mut complex = Self::build_from_incidence(cells, faces)?;
        complex.simplicial = true;
        Ok(complex)
    }

    fn assemble(
        cells: Vec<Cell>,
        faces: Vec<FaceRecord>,
        lookup: HashMap<String, CellIdx>,
        simplicial: bool,
    ) -> Complex {
        let mut facets = vec![Vec::new(); cells.len()];
        let mut cofacets = vec![Vec::new(); cells.len()];
        for (i, r) in faces.iter().enumerate() {
            facets[r.parent.0].push(i);
            cofacets[r.child.0].push(i);
        }
        Complex {
            cells,
            faces,
            lookup,
            facets,
            cofacets,
            simplicial,
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Whether the complex was produced by [`Complex::build_simplicial`].
    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, c: CellIdx) -> &Cell {
        &self.cells[c.0]
    }

    pub fn id(&self, c: CellIdx) -> &str {
        &self.cells[c.0].id
    }

    pub fn dim(&self, c: CellIdx) -> usize {
        self.cells[c.0].dim
    }

    pub fn faces(&self) -> &[FaceRecord] {
        &self.faces
    }

    /// Largest cell dimension, `None` for the empty complex.
    pub fn top_dim(&self) -> Option<usize> {
        self.cells.last().map(|c| c.dim)
    }

    pub fn indices(&self) -> impl Iterator<Item = CellIdx> + '_ {
        (0..self.cells.len()).map(CellIdx)
    }

    pub fn all_cells(&self) -> CellSet {
        self.indices().collect()
    }

    pub fn cells_of_dim(&self, k: usize) -> impl Iterator<Item = CellIdx> + '_ {
        self.indices().filter(move |&c| self.dim(c) == k)
    }

    pub fn lookup(&self, id: &str) -> Option<CellIdx> {
        self.lookup.get(id).copied()
    }

    pub fn resolve(&self, id: &str) -> Result<CellIdx, ComplexError> {
        self.lookup(id)
            .ok_or_else(|| ComplexError::UnknownCell(id.to_string()))
    }

    pub fn resolve_all<S: AsRef<str>>(&self, ids: &[S]) -> Result<CellSet, ComplexError> {
        ids.iter().map(|s| self.resolve(s.as_ref())).collect()
    }

    /// Facet records `ν < σ` for the given cell σ.
    pub fn facets(&self, c: CellIdx) -> impl Iterator<Item = &FaceRecord> + '_ {
        self.facets[c.0].iter().map(move |&i| &self.faces[i])
    }

    /// Facet records `σ < τ` for the given cell σ.
    pub fn cofacets(&self, c: CellIdx) -> impl Iterator<Item = &FaceRecord> + '_ {
        self.cofacets[c.0].iter().map(move |&i| &self.faces[i])
    }

    /// Facet record `child < parent`, if any.
    pub fn face_record(&self, parent: CellIdx, child: CellIdx) -> Option<&FaceRecord> {
        self.facets(parent).find(|r| r.child == child)
    }

    pub fn is_facet(&self, child: CellIdx, parent: CellIdx) -> bool {
        self.face_record(parent, child).is_some()
    }

    /// `S` together with every iterated face of its members.
    pub fn closure(&self, cells: &CellSet) -> CellSet {
        let mut out = cells.clone();
        let mut stack: Vec<CellIdx> = cells.iter().copied().collect();
        while let Some(c) = stack.pop() {
            for r in self.facets(c) {
                if out.insert(r.child) {
                    stack.push(r.child);
                }
            }
        }
        out
    }

    pub fn closure_of_cell(&self, c: CellIdx) -> CellSet {
        self.closure(&CellSet::from([c]))
    }

    pub fn closure_of_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<CellSet, ComplexError> {
        Ok(self.closure(&self.resolve_all(ids)?))
    }

    /// A set is a subcomplex iff it contains every facet of its members.
    pub fn is_subcomplex(&self, cells: &CellSet) -> bool {
        cells
            .iter()
            .all(|&c| self.facets(c).all(|r| cells.contains(&r.child)))
    }

    pub fn is_subcomplex_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<bool, ComplexError> {
        Ok(self.is_subcomplex(&self.resolve_all(ids)?))
    }

    /// Alternating cell count `Σ (−1)^dim` over a set of cells.
    pub fn cell_euler(&self, cells: &CellSet) -> i64 {
        cells
            .iter()
            .map(|&c| if self.dim(c).is_multiple_of(2) { 1 } else { -1 })
            .sum()
    }

    pub fn ids_of<'a>(&self, cells: impl IntoIterator<Item = &'a CellIdx>) -> Vec<String> {
        let mut ids: Vec<String> = cells.into_iter().map(|&c| self.id(c).to_string()).collect();
        ids.sort();
        ids
    }

    /// Checks incidence and chain-condition rules.
    ///
    /// Dimensions of face records are already enforced at build time, so the
    /// face poset is graded and therefore acyclic; the dimension rule is
    /// re-checked here for completeness. The chain condition
    /// `Σ_σ [τ:σ][σ:ρ] = 0` is only required for `(τ, ρ)` pairs whose
    /// connecting records are all regular.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for r in &self.faces {
            if self.dim(r.parent) != self.dim(r.child) + 1 {
                violations.push(Violation {
                    rule: "dim-consistency".into(),
                    cells: vec![self.id(r.parent).into(), self.id(r.child).into()],
                    message: "face record does not lower dimension by one".into(),
                });
            }
            if r.regular && r.incidence.abs() != 1 {
                violations.push(Violation {
                    rule: "regular-incidence".into(),
                    cells: vec![self.id(r.parent).into(), self.id(r.child).into()],
                    message: format!(
                        "regular facet must have incidence ±1, found {}",
                        r.incidence
                    ),
                });
            }
        }
        for tau in self.indices() {
            let mut sums: BTreeMap<CellIdx, (i64, bool)> = BTreeMap::new();
            for outer in self.facets(tau) {
                for inner in self.facets(outer.child) {
                    let e = sums.entry(inner.child).or_insert((0, true));
                    e.0 += outer.incidence * inner.incidence;
                    e.1 &= outer.regular && inner.regular;
                }
            }
            for (rho, (sum, all_regular)) in sums {
                if all_regular && sum != 0 {
                    violations.push(Violation {
                        rule: "chain-condition".into(),
                        cells: vec![self.id(tau).into(), self.id(rho).into()],
                        message: format!(
                            "Σ [{}:σ][σ:{}] = {} ≠ 0",
                            self.id(tau),
                            self.id(rho),
                            sum
                        ),
                    });
                }
            }
        }
        ValidationReport::from_violations(violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Complex {
        Complex::build_simplicial(&[vec!["a", "b", "c"]]).unwrap()
    }

    fn hollow() -> Complex {
        Complex::build_simplicial(&[vec!["a", "b"], vec!["b", "c"], vec!["a", "c"]]).unwrap()
    }

    #[test]
    fn point_and_segment() {
        let p = Complex::build_from_incidence([("v", 0)], Vec::<(&str, &str, i64, bool)>::new())
            .unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.top_dim(), Some(0));

        let s = Complex::build_from_incidence(
            [("v", 0), ("w", 0), ("e", 1)],
            [("e", "v", 1, true), ("e", "w", -1, true)],
        )
        .unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.validate().ok);
    }

    #[test]
    fn dim_mismatch_and_dangling() {
        let err = Complex::build_from_incidence([("v", 0), ("e", 0)], [("e", "v", 1, true)])
            .unwrap_err();
        assert!(matches!(err, ComplexError::DimMismatch { .. }));
        assert!(err.to_string().contains("dim mismatch"));
        let err = Complex::build_from_incidence([("e", 1)], [("e", "v", 1, true)]).unwrap_err();
        assert_eq!(err, ComplexError::UnknownCell("v".into()));
        let err = Complex::build_from_incidence(
            [("v", 0), ("v", 0)],
            Vec::<(&str, &str, i64, bool)>::new(),
        )
        .unwrap_err();
        assert_eq!(err, ComplexError::DuplicateCell("v".into()));
    }

    #[test]
    fn simplicial_orientation() {
        let k = triangle();
        assert_eq!(k.len(), 7);
        assert_eq!(k.cells_of_dim(0).count(), 3);
        assert_eq!(k.cells_of_dim(1).count(), 3);
        let abc = k.resolve("a-b-c").unwrap();
        let inc = |f: &str| {
            k.face_record(abc, k.resolve(f).unwrap())
                .map(|r| r.incidence)
        };
        assert_eq!(inc("b-c"), Some(1));
        assert_eq!(inc("a-c"), Some(-1));
        assert_eq!(inc("a-b"), Some(1));
        assert!(k.faces().iter().all(|r| r.regular));

        let h = hollow();
        assert_eq!(h.len(), 6);
        assert_eq!(h.top_dim(), Some(1));
    }

    #[test]
    fn simplicial_errors() {
        assert_eq!(
            Complex::build_simplicial(&[vec!["a", "a", "b"]]).unwrap_err(),
            ComplexError::RepeatedVertex("a".into())
        );
        assert_eq!(
            Complex::build_simplicial::<&str>(&[]).unwrap_err(),
            ComplexError::EmptyInput
        );
        assert_eq!(
            Complex::build_simplicial::<&str>(&[vec![]]).unwrap_err(),
            ComplexError::EmptySimplex
        );
        assert!(matches!(
            Complex::build_simplicial(&[vec!["a-b", "c"]]).unwrap_err(),
            ComplexError::InvalidVertexId(_)
        ));
    }

    #[test]
    fn validate_loop_and_flipped_sign() {
        // segment with both ends glued to v: one irregular record
        let lp = Complex::build_from_incidence([("v", 0), ("e", 1)], [("e", "v", 2, false)])
            .unwrap();
        assert!(lp.validate().ok);

        let t = triangle();
        let mut faces: Vec<(String, String, i64, bool)> = t
            .faces()
            .iter()
            .map(|r| (t.id(r.parent).to_string(), t.id(r.child).to_string(), r.incidence, r.regular))
            .collect();
        let pos = faces
            .iter()
            .position(|f| f.0 == "a-b-c" && f.1 == "a-c")
            .unwrap();
        faces[pos].2 = 1;
        let cells: Vec<(String, usize)> = t
            .cells()
            .iter()
            .map(|c| (c.id.clone(), c.dim))
            .collect();
        let bad = Complex::build_from_incidence(cells, faces).unwrap();
        let rep = bad.validate();
        assert!(!rep.ok);
        assert!(rep.violations.iter().all(|v| v.rule == "chain-condition"));
        // [abc:ab][ab:a] + [abc:ac][ac:a] = 1·(−1) + 1·(−1) = −2 at ρ = a, similarly at c
        assert_eq!(rep.violations.len(), 2);
    }

    #[test]
    fn regular_incidence_rule() {
        let k = Complex::build_from_incidence(
            [("v", 0), ("w", 0), ("e", 1)],
            [("e", "v", 2, true), ("e", "w", -1, true)],
        )
        .unwrap();
        let rep = k.validate();
        assert!(!rep.ok);
        assert_eq!(rep.violations[0].rule, "regular-incidence");
    }

    #[test]
    fn closure_and_subcomplex() {
        let k = triangle();
        assert_eq!(k.closure_of_ids(&["a-b-c"]).unwrap().len(), 7);
        assert_eq!(k.closure_of_ids(&["a"]).unwrap(), k.resolve_all(&["a"]).unwrap());
        let h = hollow();
        assert_eq!(
            h.closure_of_ids(&["a-b", "b-c"]).unwrap(),
            h.resolve_all(&["a-b", "b-c", "a", "b", "c"]).unwrap()
        );
        assert!(k.is_subcomplex(&k.all_cells()));
        assert!(!k.is_subcomplex_ids(&["a-b"]).unwrap());
        assert!(k.is_subcomplex(&CellSet::new()));
        assert_eq!(
            k.closure_of_ids(&["zz"]).unwrap_err(),
            ComplexError::UnknownCell("zz".into())
        );
    }
}
