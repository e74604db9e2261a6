//! The discrete Morse-Bott inequalities and their supporting checks.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::complex::{CellIdx, CellSet, Complex};
use crate::flow::{is_combinatorial, vector_field};
use crate::homology::{
    betti, chain_complex, poincare_polynomial, reduced_boundary, ChainComplex, Coefficients,
    HomologyError, IntMatrix, Polynomial,
};
use crate::morse::{
    critical_cells, decompose, is_noncritical_pair, perturb, DiscreteFunction, Epsilon,
    MorseError, ReducedCollection,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("reduced collection is empty")]
    EmptyCollection,
    #[error("defect division by 1 + t leaves remainder {0}")]
    DefectRemainder(i64),
    #[error("defect {0} has a negative coefficient")]
    DefectNegative(Polynomial),
    #[error("defect routes disagree: {division} by division, {kernels} from kernels")]
    DefectMismatch {
        division: Polynomial,
        kernels: Polynomial,
    },
    #[error("perturbed function does not induce a combinatorial vector field")]
    NotCombinatorial,
    #[error("noncritical cell `{0}` lies on no arrow of the perturbed field")]
    UnpairedCell(String),
}

/// `r(t) = (Σ n_k t^k − P_t(R)) / (1 + t)`, cross-checked against
/// `Σ_k (n_k − dim ker ∂^red_k) t^{k−1}`.
pub fn collection_defect(
    complex: &Complex,
    reduced: &ReducedCollection,
    ring: Coefficients,
) -> Result<Polynomial, AnalysisError> {
    if reduced.is_empty() {
        return Err(AnalysisError::EmptyCollection);
    }
    let h = betti(&reduced_boundary(complex, &reduced.cells, ring)?);
    let counts = Polynomial::from_counts(&h.cell_counts);
    let (division, rem) = (&counts - &poincare_polynomial(&h)).div_rem_one_plus_t();
    if rem != 0 {
        return Err(AnalysisError::DefectRemainder(rem));
    }
    let kernels = Polynomial::new(
        (1..h.cell_counts.len())
            .map(|k| (h.cell_counts[k] - h.kernel_dims[k]) as i64)
            .collect(),
    );
    if division != kernels {
        return Err(AnalysisError::DefectMismatch { division, kernels });
    }
    if !division.is_nonnegative() {
        return Err(AnalysisError::DefectNegative(division));
    }
    Ok(division)
}

/// One reduced collection's contribution to the inequalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollectionTerm {
    pub collection: usize,
    pub value: BigRational,
    pub cells: CellSet,
    pub counts: Vec<usize>,
    pub poincare: Polynomial,
    pub euler: i64,
    pub defect: Result<Polynomial, AnalysisError>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityReport {
    pub ring: Coefficients,
    pub terms: Vec<CollectionTerm>,
    /// Collections whose reduction is empty or a noncritical pair.
    pub excluded: Vec<usize>,
    pub complex_poincare: Polynomial,
    pub complex_euler: i64,
    pub sum: Polynomial,
    /// Quotient of `ΣP_t − P_t(K)` by `1 + t`.
    pub quotient: Polynomial,
    pub division_remainder: i64,
    pub divisible: bool,
    pub nonneg: bool,
    pub euler_identity: bool,
}

impl InequalityReport {
    pub fn sum_euler(&self) -> i64 {
        self.terms.iter().map(|t| t.euler).sum()
    }

    pub fn defects_ok(&self) -> bool {
        self.terms.iter().all(|t| t.defect.is_ok())
    }

    /// `ΣP_t = P_t(K) + (1+t) R(t)` with `R ≥ 0`, plus the Euler identity.
    pub fn holds(&self) -> bool {
        self.divisible && self.nonneg && self.euler_identity
    }
}

pub fn morse_bott_inequalities(
    complex: &Complex,
    f: &DiscreteFunction,
    ring: Coefficients,
) -> Result<InequalityReport, AnalysisError> {
    let dec = decompose(complex, f)?;
    let whole = betti(&chain_complex(complex, ring)?);
    let complex_poincare = poincare_polynomial(&whole);
    let mut terms = Vec::new();
    let mut excluded = Vec::new();
    for r in &dec.reduced {
        if r.is_empty() || is_noncritical_pair(complex, r) {
            excluded.push(r.parent);
            continue;
        }
        let h = betti(&reduced_boundary(complex, &r.cells, ring)?);
        terms.push(CollectionTerm {
            collection: r.parent,
            value: r.value.clone(),
            cells: r.cells.clone(),
            counts: h.cell_counts.clone(),
            poincare: poincare_polynomial(&h),
            euler: h.euler(),
            defect: collection_defect(complex, r, ring),
        });
    }
    let sum: Polynomial = terms.iter().map(|t| &t.poincare).sum();
    let (quotient, division_remainder) = (&sum - &complex_poincare).div_rem_one_plus_t();
    let divisible = division_remainder == 0;
    let complex_euler = whole.euler();
    let sum_euler: i64 = terms.iter().map(|t| t.euler).sum();
    Ok(InequalityReport {
        ring,
        nonneg: divisible && quotient.is_nonnegative(),
        divisible,
        euler_identity: complex_euler == sum_euler,
        terms,
        excluded,
        complex_poincare,
        complex_euler,
        sum,
        quotient,
        division_remainder,
    })
}

/// `(χ(K), Σ χ(C^{i,red}), equal)`
pub fn euler_summary(report: &InequalityReport) -> (i64, i64, bool) {
    let s = report.sum_euler();
    (report.complex_euler, s, report.complex_euler == s)
}

/// Forman's Morse complex of the perturbation `f_ε` (auto ε).
#[derive(Clone, Debug)]
pub struct MorseComplex {
    pub function: DiscreteFunction,
    pub critical: CellSet,
    pub chain: ChainComplex,
}

/// Builds the Morse complex by flowing `∂β` of each critical cell `β` down the
/// gradient of `f_ε` until it is supported on critical cells.
pub fn morse_complex(
    complex: &Complex,
    f: &DiscreteFunction,
    ring: Coefficients,
) -> Result<MorseComplex, AnalysisError> {
    let g = perturb(complex, f, &Epsilon::Auto)?;
    let field = vector_field(complex, &g);
    if !is_combinatorial(&field, complex).ok {
        return Err(AnalysisError::NotCombinatorial);
    }
    let critical = critical_cells(complex, &g);
    let mut up: HashMap<CellIdx, CellIdx> = HashMap::new();
    let mut down: CellSet = CellSet::new();
    for &(s, t) in field.arrows() {
        up.insert(s, t);
        down.insert(t);
    }
    let degrees = complex.top_dim().map_or(0, |d| d + 1);
    let mut bases: Vec<Vec<CellIdx>> = vec![Vec::new(); degrees];
    for &c in &critical {
        bases[complex.dim(c)].push(c);
    }
    let position: HashMap<CellIdx, usize> = bases
        .iter()
        .flat_map(|b| b.iter().enumerate().map(|(i, &c)| (c, i)))
        .collect();
    let mut boundaries = Vec::with_capacity(degrees);
    for k in 0..degrees {
        let rows = if k == 0 { 0 } else { bases[k - 1].len() };
        let mut d = IntMatrix::zeros(rows, bases[k].len());
        for (j, &beta) in bases[k].iter().enumerate() {
            let chain = flow_boundary(complex, &g, &critical, &up, &down, beta)?;
            for (c, v) in chain {
                d.set(position[&c], j, v);
            }
        }
        boundaries.push(d);
    }
    let chain = ChainComplex::from_parts(ring, bases, boundaries);
    if let Some(degree) = chain.square_defect() {
        return Err(HomologyError::NotAChainComplex { degree }.into());
    }
    Ok(MorseComplex {
        function: g,
        critical,
        chain,
    })
}

fn flow_boundary(
    complex: &Complex,
    g: &DiscreteFunction,
    critical: &CellSet,
    up: &HashMap<CellIdx, CellIdx>,
    down: &CellSet,
    beta: CellIdx,
) -> Result<Vec<(CellIdx, BigInt)>, AnalysisError> {
    let mut chain: HashMap<CellIdx, BigInt> = HashMap::new();
    let add = |chain: &mut HashMap<CellIdx, BigInt>, c: CellIdx, v: BigInt| {
        let e = chain.entry(c).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            chain.remove(&c);
        }
    };
    for r in complex.facets(beta) {
        add(&mut chain, r.child, BigInt::from(r.incidence));
    }
    loop {
        let next = chain
            .keys()
            .filter(|c| !critical.contains(c))
            .max_by(|a, b| g.value(**a).cmp(g.value(**b)).then(a.cmp(b)))
            .copied();
        let Some(sigma) = next else { break };
        let coeff = chain.remove(&sigma).expect("key present");
        if let Some(&tau) = up.get(&sigma) {
            // [τ:σ] = ±1 on a regular facet, so it is its own inverse
            let inc = complex.face_record(tau, sigma).expect("arrow along a facet").incidence;
            for r in complex.facets(tau).filter(|r| r.child != sigma) {
                add(&mut chain, r.child, -(&coeff * BigInt::from(inc * r.incidence)));
            }
        } else if !down.contains(&sigma) {
            return Err(AnalysisError::UnpairedCell(complex.id(sigma).to_string()));
        }
    }
    let mut out: Vec<(CellIdx, BigInt)> = chain.into_iter().collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelDegree {
    pub degree: usize,
    /// `Σ_i dim ker ∂^{C^{i,red}}_k` over all nonempty reduced collections.
    pub collection_sum: usize,
    /// `dim ker ∂^F_k` of the Morse complex.
    pub morse: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelCheck {
    pub degrees: Vec<KernelDegree>,
    /// `Σ_k (Σ_i dim ker_k − dim ker ∂^F_k) t^{k−1}`, which equals `R(t)`.
    pub remainder: Polynomial,
    pub ok: bool,
}

pub fn kernel_inequality_check(
    complex: &Complex,
    f: &DiscreteFunction,
    ring: Coefficients,
) -> Result<KernelCheck, AnalysisError> {
    let dec = decompose(complex, f)?;
    let morse = betti(&morse_complex(complex, f, ring)?.chain);
    let n = morse.kernel_dims.len();
    let mut sums = vec![0usize; n];
    for r in dec.reduced.iter().filter(|r| !r.is_empty()) {
        let h = betti(&reduced_boundary(complex, &r.cells, ring)?);
        for (s, k) in sums.iter_mut().zip(&h.kernel_dims) {
            *s += k;
        }
    }
    let degrees: Vec<KernelDegree> = (1..n)
        .map(|k| KernelDegree {
            degree: k,
            collection_sum: sums[k],
            morse: morse.kernel_dims[k],
            holds: sums[k] >= morse.kernel_dims[k],
        })
        .collect();
    let remainder = Polynomial::new(
        degrees
            .iter()
            .map(|d| d.collection_sum as i64 - d.morse as i64)
            .collect(),
    );
    Ok(KernelCheck {
        ok: degrees.iter().all(|d| d.holds),
        degrees,
        remainder,
    })
}
