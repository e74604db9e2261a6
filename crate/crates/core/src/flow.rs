//! Discrete vector fields and their closed orbits.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{CellIdx, Complex};
use crate::morse::DiscreteFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("arrow `{0}` -> `{1}` is not along a regular facet")]
    NotARegularFacet(String, String),
}

/// Arrows `σ → τ` with `σ` a regular facet of `τ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ArrowSet {
    arrows: Vec<(CellIdx, CellIdx)>,
}

impl ArrowSet {
    /// Arbitrary arrow set, e.g. one not induced by any function.
    pub fn from_pairs(
        complex: &Complex,
        pairs: impl IntoIterator<Item = (CellIdx, CellIdx)>,
    ) -> Result<ArrowSet, FlowError> {
        let mut arrows = BTreeSet::new();
        for (s, t) in pairs {
            match complex.face_record(t, s) {
                Some(r) if r.regular => {
                    arrows.insert((s, t));
                }
                _ => {
                    return Err(FlowError::NotARegularFacet(
                        complex.id(s).to_string(),
                        complex.id(t).to_string(),
                    ))
                }
            }
        }
        Ok(ArrowSet {
            arrows: arrows.into_iter().collect(),
        })
    }

    pub fn arrows(&self) -> &[(CellIdx, CellIdx)] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// `{(σ, τ) : σ regular facet of τ, f(σ) ≥ f(τ)}`
pub fn vector_field(complex: &Complex, f: &DiscreteFunction) -> ArrowSet {
    let arrows = complex
        .faces()
        .iter()
        .filter(|r| r.regular && f.value(r.child) >= f.value(r.parent))
        .map(|r| (r.child, r.parent))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    ArrowSet { arrows }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldViolation {
    pub rule: &'static str,
    pub cell: CellIdx,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldVerdict {
    pub ok: bool,
    pub violations: Vec<FieldViolation>,
}

/// Forman's axioms: every cell is the source of at most one arrow, the target
/// of at most one arrow, and never both.
pub fn is_combinatorial(field: &ArrowSet, complex: &Complex) -> FieldVerdict {
    let n = complex.len();
    let (mut out_deg, mut in_deg) = (vec![0usize; n], vec![0usize; n]);
    for &(s, t) in &field.arrows {
        out_deg[s.index()] += 1;
        in_deg[t.index()] += 1;
    }
    let mut violations = Vec::new();
    for c in complex.indices() {
        let (o, i) = (out_deg[c.index()], in_deg[c.index()]);
        if o > 1 {
            violations.push(FieldViolation { rule: "multiple-outgoing", cell: c });
        }
        if i > 1 {
            violations.push(FieldViolation { rule: "multiple-incoming", cell: c });
        }
        if o > 0 && i > 0 {
            violations.push(FieldViolation { rule: "source-and-target", cell: c });
        }
    }
    FieldVerdict {
        ok: violations.is_empty(),
        violations,
    }
}

/// Closed V-path `σ0 → τ0 > σ1 → τ1 > … > σ0`, stored as its arrows and
/// rotated so that the smallest arrow comes first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Orbit {
    pub arrows: Vec<(CellIdx, CellIdx)>,
}

impl Orbit {
    /// `σ0, τ0, σ1, τ1, …, σ0`
    pub fn cells(&self) -> Vec<CellIdx> {
        let mut out: Vec<CellIdx> = self.arrows.iter().flat_map(|&(s, t)| [s, t]).collect();
        if let Some(&(s, _)) = self.arrows.first() {
            out.push(s);
        }
        out
    }

    /// Distinct collection ids visited, given the owner map of a partition.
    pub fn collections_visited(&self, owner: &[usize]) -> BTreeSet<usize> {
        self.arrows
            .iter()
            .flat_map(|&(s, t)| [owner[s.index()], owner[t.index()]])
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSearch {
    pub orbits: Vec<Orbit>,
    /// Set when more than `limit` orbits exist; only `limit` are returned.
    pub truncated: bool,
}

/// Successor relation between arrows: `(σ, τ) ⇒ (σ', τ')` when `σ' < τ`,
/// `σ' ≠ σ` and `τ' ≠ τ`.
pub(crate) fn arrow_graph(field: &ArrowSet, complex: &Complex) -> Vec<Vec<usize>> {
    let arrows = &field.arrows;
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); complex.len()];
    for (i, &(s, _)) in arrows.iter().enumerate() {
        by_source[s.index()].push(i);
    }
    arrows
        .iter()
        .map(|&(s, t)| {
            complex
                .facets(t)
                .filter(|r| r.child != s)
                .flat_map(|r| by_source[r.child.index()].iter().copied())
                .filter(|&j| arrows[j].1 != t)
                .collect()
        })
        .collect()
}

struct Johnson<'a> {
    adj: &'a [Vec<usize>],
    blocked: Vec<bool>,
    blocked_by: Vec<HashSet<usize>>,
    stack: Vec<usize>,
    found: Vec<Vec<usize>>,
    cap: usize,
}

impl Johnson<'_> {
    fn unblock(&mut self, v: usize) {
        let mut pending = vec![v];
        while let Some(u) = pending.pop() {
            if self.blocked[u] {
                self.blocked[u] = false;
                pending.extend(self.blocked_by[u].drain());
            }
        }
    }

    fn circuit(&mut self, v: usize, start: usize) -> bool {
        let mut closed = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in &self.adj[v] {
            if self.found.len() >= self.cap {
                break;
            }
            if w < start {
                continue;
            }
            if w == start {
                self.found.push(self.stack.clone());
                closed = true;
            } else if !self.blocked[w] && self.circuit(w, start) {
                closed = true;
            }
        }
        if closed {
            self.unblock(v);
        } else {
            for &w in &self.adj[v] {
                if w >= start {
                    self.blocked_by[w].insert(v);
                }
            }
        }
        self.stack.pop();
        closed
    }
}

/// Enumerates the elementary closed orbits of `field` (Johnson's algorithm on
/// the arrow successor graph), returning at most `limit` of them.
pub fn closed_orbits(field: &ArrowSet, complex: &Complex, limit: usize) -> OrbitSearch {
    let adj = arrow_graph(field, complex);
    let n = adj.len();
    let mut j = Johnson {
        adj: &adj,
        blocked: vec![false; n],
        blocked_by: vec![HashSet::new(); n],
        stack: Vec::new(),
        found: Vec::new(),
        cap: limit.saturating_add(1),
    };
    for start in 0..n {
        if j.found.len() >= j.cap {
            break;
        }
        for v in start..n {
            j.blocked[v] = false;
            j.blocked_by[v].clear();
        }
        j.circuit(start, start);
    }
    let truncated = j.found.len() > limit;
    let orbits = j
        .found
        .into_iter()
        .take(limit)
        .map(|cycle| Orbit {
            arrows: cycle.into_iter().map(|i| field.arrows[i]).collect(),
        })
        .collect();
    OrbitSearch { orbits, truncated }
}

/// Orbits that visit at least two distinct collections.
pub fn cross_collection_orbits(orbits: &[Orbit], owner: &[usize]) -> Vec<Orbit> {
    orbits
        .iter()
        .filter(|o| o.collections_visited(owner).len() >= 2)
        .cloned()
        .collect()
}

/// Graphviz rendering of the arrows.
pub fn to_dot(field: &ArrowSet, complex: &Complex) -> String {
    let mut out = String::from("digraph vector_field {\n");
    for c in complex.indices() {
        let _ = writeln!(out, "  \"{}\" [label=\"{}\\ndim {}\"];", complex.id(c), complex.id(c), complex.dim(c));
    }
    for &(s, t) in &field.arrows {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", complex.id(s), complex.id(t));
    }
    out.push_str("}\n");
    out
}
