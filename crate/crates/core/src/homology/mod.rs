//! Exact chain complexes, Betti numbers and Poincaré polynomials.
//!
//! Integer homology goes through [`smith_normal_form`]; the GF(2) path uses
//! bit-packed elimination ([`rank_mod2`]) and is kept separate so the two can
//! cross-check each other.

mod poly;
mod snf;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{CellIdx, CellSet, Complex};

pub use poly::Polynomial;
pub use snf::{rank_mod2, smith_normal_form, IntMatrix, SnfResult};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficients {
    #[default]
    #[serde(rename = "z")]
    Integers,
    #[serde(rename = "z2")]
    Mod2,
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coefficients::Integers => "z",
            Coefficients::Mod2 => "z2",
        })
    }
}

impl std::str::FromStr for Coefficients {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "z" | "Z" => Ok(Coefficients::Integers),
            "z2" | "Z2" => Ok(Coefficients::Mod2),
            other => Err(format!("unknown coefficient ring `{other}` (expected z or z2)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("boundary composition ∂_{degree}∘∂_{} is nonzero", degree + 1)]
    NotAChainComplex { degree: usize },
    #[error("cell set is not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("relative pair (X, A) requires A ⊆ X")]
    NotContained,
}

/// Graded free module with boundary matrices.
///
/// `boundary(k)` maps degree `k` to degree `k − 1`; its rows follow
/// `basis(k − 1)` and its columns follow `basis(k)`. `boundary(0)` has no rows.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    ring: Coefficients,
    bases: Vec<Vec<CellIdx>>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    /// Assembles a chain complex from explicit bases and matrices.
    pub fn from_parts(
        ring: Coefficients,
        bases: Vec<Vec<CellIdx>>,
        boundaries: Vec<IntMatrix>,
    ) -> ChainComplex {
        assert_eq!(bases.len(), boundaries.len());
        for (k, d) in boundaries.iter().enumerate() {
            assert_eq!(d.cols(), bases[k].len());
            assert_eq!(d.rows(), if k == 0 { 0 } else { bases[k - 1].len() });
        }
        let boundaries = match ring {
            Coefficients::Integers => boundaries,
            Coefficients::Mod2 => boundaries.iter().map(IntMatrix::reduce_mod2).collect(),
        };
        ChainComplex {
            ring,
            bases,
            boundaries,
        }
    }

    pub fn ring(&self) -> Coefficients {
        self.ring
    }

    /// Number of degrees stored, that is top degree + 1.
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.iter().all(Vec::is_empty)
    }

    pub fn basis(&self, k: usize) -> &[CellIdx] {
        self.bases.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn boundary(&self, k: usize) -> Option<&IntMatrix> {
        self.boundaries.get(k)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// First degree `k` with `∂_{k−1} ∘ ∂_k ≠ 0`, if any (mod 2 over GF(2)).
    pub fn square_defect(&self) -> Option<usize> {
        (2..self.boundaries.len()).find_map(|k| {
            let prod = self.boundaries[k - 1].mul(&self.boundaries[k]);
            let prod = match self.ring {
                Coefficients::Integers => prod,
                Coefficients::Mod2 => prod.reduce_mod2(),
            };
            (!prod.is_zero()).then_some(k - 1)
        })
    }

    /// Alternating sum of basis sizes.
    pub fn euler(&self) -> i64 {
        self.bases
            .iter()
            .enumerate()
            .map(|(k, b)| if k % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) })
            .sum()
    }
}

/// Chain complex spanned by `cells`, keeping only incidences between members.
///
/// This single restriction realizes the full cellular complex, the quotient
/// complex of a pair, and the reduced boundary operator.
fn restricted(complex: &Complex, cells: &CellSet, ring: Coefficients) -> ChainComplex {
    let degrees = complex.top_dim().map_or(0, |d| d + 1);
    let mut bases: Vec<Vec<CellIdx>> = vec![Vec::new(); degrees];
    for &c in cells {
        bases[complex.dim(c)].push(c);
    }
    let position: HashMap<CellIdx, usize> = bases
        .iter()
        .flat_map(|b| b.iter().enumerate().map(|(i, &c)| (c, i)))
        .collect();
    let boundaries = (0..degrees)
        .map(|k| {
            let rows = if k == 0 { 0 } else { bases[k - 1].len() };
            let mut d = IntMatrix::zeros(rows, bases[k].len());
            for (j, &tau) in bases[k].iter().enumerate() {
                for r in complex.facets(tau) {
                    if let Some(&i) = position.get(&r.child) {
                        d.set(i, j, BigInt::from(r.incidence));
                    }
                }
            }
            d
        })
        .collect();
    ChainComplex::from_parts(ring, bases, boundaries)
}

/// Cellular chain complex of the whole of `complex`.
pub fn chain_complex(complex: &Complex, ring: Coefficients) -> Result<ChainComplex, HomologyError> {
    let cc = restricted(complex, &complex.all_cells(), ring);
    match cc.square_defect() {
        Some(degree) => Err(HomologyError::NotAChainComplex { degree }),
        None => Ok(cc),
    }
}

/// Quotient complex `C(X)/C(A)` of a subcomplex pair `A ⊆ X`.
///
/// Basis cells are `X \ A`; boundary entries landing in `A` are dropped.
pub fn relative_chain_complex(
    complex: &Complex,
    space: &CellSet,
    sub: &CellSet,
    ring: Coefficients,
) -> Result<ChainComplex, HomologyError> {
    if !complex.is_subcomplex(space) {
        return Err(HomologyError::NotSubcomplex("X".into()));
    }
    if !complex.is_subcomplex(sub) {
        return Err(HomologyError::NotSubcomplex("A".into()));
    }
    if !sub.is_subset(space) {
        return Err(HomologyError::NotContained);
    }
    let quotient: CellSet = space.difference(sub).copied().collect();
    let cc = restricted(complex, &quotient, ring);
    match cc.square_defect() {
        Some(degree) => Err(HomologyError::NotAChainComplex { degree }),
        None => Ok(cc),
    }
}

/// Boundary operator restricted to chains supported on `cells`:
/// `∂τ = Σ_{σ ∈ cells, σ < τ} [τ:σ] σ`.
pub fn reduced_boundary(
    complex: &Complex,
    cells: &CellSet,
    ring: Coefficients,
) -> Result<ChainComplex, HomologyError> {
    let cc = restricted(complex, cells, ring);
    match cc.square_defect() {
        Some(degree) => Err(HomologyError::NotAChainComplex { degree }),
        None => Ok(cc),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary {
    pub ring: Coefficients,
    pub cell_counts: Vec<usize>,
    /// `rank ∂_k`, with `rank ∂_0 = 0`.
    pub ranks: Vec<usize>,
    pub kernel_dims: Vec<usize>,
    pub betti: Vec<usize>,
    /// Invariant factors > 1 of `∂_{k+1}`, integer coefficients only.
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologySummary {
    pub fn euler(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.torsion.iter().any(|t| !t.is_empty())
    }
}

pub fn betti(cc: &ChainComplex) -> HomologySummary {
    let n = cc.len();
    let counts = cc.counts();
    let mut ranks = vec![0usize; n + 1];
    let mut torsion_of = vec![Vec::new(); n + 1];
    for k in 1..n {
        let d = cc.boundary(k).expect("degree in range");
        match cc.ring() {
            Coefficients::Integers => {
                let snf = smith_normal_form(d);
                ranks[k] = snf.rank;
                torsion_of[k] = snf.torsion();
            }
            Coefficients::Mod2 => ranks[k] = rank_mod2(d),
        }
    }
    let kernel_dims: Vec<usize> = (0..n).map(|k| counts[k] - ranks[k]).collect();
    let betti = (0..n).map(|k| kernel_dims[k] - ranks[k + 1]).collect();
    let torsion = (0..n).map(|k| torsion_of[k + 1].clone()).collect();
    HomologySummary {
        ring: cc.ring(),
        cell_counts: counts,
        ranks: ranks[..n].to_vec(),
        kernel_dims,
        betti,
        torsion,
    }
}

/// `Σ_k b_k t^k` (free ranks only).
pub fn poincare_polynomial(h: &HomologySummary) -> Polynomial {
    Polynomial::from_counts(&h.betti)
}

/// Betti numbers of `(X, A)` computed as the reduced homology of `X ∪ cone(A)`.
///
/// This never forms the quotient complex, so it serves as an independent
/// route to relative homology. An empty `A` cones to a disjoint point.
pub fn relative_betti_by_cone(
    complex: &Complex,
    space: &CellSet,
    sub: &CellSet,
    ring: Coefficients,
) -> Result<Vec<usize>, HomologyError> {
    if !complex.is_subcomplex(space) || !complex.is_subcomplex(sub) {
        return Err(HomologyError::NotSubcomplex("pair".into()));
    }
    if !sub.is_subset(space) {
        return Err(HomologyError::NotContained);
    }
    let top = complex.top_dim().map_or(0, |d| d + 1);
    // generators: cells of X, the apex, and one cone cell per cell of A
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum Gen {
        Cell(CellIdx),
        Apex,
        Cone(CellIdx),
    }
    let mut bases: Vec<Vec<Gen>> = vec![Vec::new(); top + 1];
    for &c in space {
        bases[complex.dim(c)].push(Gen::Cell(c));
    }
    bases[0].push(Gen::Apex);
    for &a in sub {
        bases[complex.dim(a) + 1].push(Gen::Cone(a));
    }
    let pos: HashMap<Gen, usize> = bases
        .iter()
        .flat_map(|b| b.iter().enumerate().map(|(i, &g)| (g, i)))
        .collect();
    let mut mats = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let rows = if k == 0 { 0 } else { bases[k - 1].len() };
        let mut d = IntMatrix::zeros(rows, bases[k].len());
        for (j, g) in bases[k].iter().enumerate() {
            let mut add = |target: Gen, v: i64| {
                let i = pos[&target];
                let cur = d.get(i, j) + BigInt::from(v);
                d.set(i, j, cur);
            };
            match *g {
                Gen::Apex => {}
                Gen::Cell(c) => {
                    for r in complex.facets(c) {
                        add(Gen::Cell(r.child), r.incidence);
                    }
                }
                // ∂(cv) = v − apex, ∂(ca) = a − Σ [a:b] cb
                Gen::Cone(a) => {
                    add(Gen::Cell(a), 1);
                    if complex.dim(a) == 0 {
                        add(Gen::Apex, -1);
                    } else {
                        for r in complex.facets(a) {
                            add(Gen::Cone(r.child), -r.incidence);
                        }
                    }
                }
            }
        }
        mats.push(d);
    }
    // the ChainComplex basis type is CellIdx; the cone lives only here, so
    // compute ranks directly
    let counts: Vec<usize> = bases.iter().map(Vec::len).collect();
    let rank = |m: &IntMatrix| match ring {
        Coefficients::Integers => smith_normal_form(m).rank,
        Coefficients::Mod2 => rank_mod2(m),
    };
    let mut ranks = vec![0usize; top + 2];
    for k in 1..=top {
        let prod = if k >= 2 { Some(mats[k - 1].mul(&mats[k])) } else { None };
        if let Some(p) = prod {
            let p = match ring {
                Coefficients::Integers => p,
                Coefficients::Mod2 => p.reduce_mod2(),
            };
            if !p.is_zero() {
                return Err(HomologyError::NotAChainComplex { degree: k - 1 });
            }
        }
        ranks[k] = rank(&mats[k]);
    }
    let mut betti: Vec<usize> = (0..=top).map(|k| counts[k] - ranks[k] - ranks[k + 1]).collect();
    // reduced homology: drop the augmentation class
    betti[0] -= 1;
    betti.truncate(top);
    Ok(betti)
}

/// Compares the reduced-boundary homology of `cells` with the relative
/// homology of `(closure(cells), closure(cells) \ cells)`, the latter computed
/// both by the quotient complex and by coning off the subcomplex.
pub fn equivalence_check(
    complex: &Complex,
    cells: &CellSet,
    ring: Coefficients,
) -> Result<bool, HomologyError> {
    let closure = complex.closure(cells);
    let rim: CellSet = closure.difference(cells).copied().collect();
    let reduced = poincare_polynomial(&betti(&reduced_boundary(complex, cells, ring)?));
    let quotient = match relative_chain_complex(complex, &closure, &rim, ring) {
        Ok(cc) => poincare_polynomial(&betti(&cc)),
        Err(HomologyError::NotSubcomplex(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let coned = Polynomial::from_counts(&relative_betti_by_cone(complex, &closure, &rim, ring)?);
    Ok(reduced == quotient && quotient == coned)
}
