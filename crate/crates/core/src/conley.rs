//! Isolated invariant sets, index pairs and homological Conley indices.

use thiserror::Error;

use crate::complex::{CellSet, Complex};
use crate::homology::{
    betti, chain_complex, poincare_polynomial, reduced_boundary, relative_chain_complex,
    Coefficients, HomologyError, Polynomial,
};
use crate::morse::{decompose, DiscreteFunction, MorseError, ReducedCollection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConleyError {
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("exit set of collection {0} differs from N \\ I")]
    ExitMismatch(usize),
    #[error("{what} of collection {collection} is not a subcomplex")]
    NotSubcomplex { what: &'static str, collection: usize },
}

/// Nonempty reduced collections that are not noncritical pairs.
pub fn isolated_invariant_sets(
    complex: &Complex,
    f: &DiscreteFunction,
) -> Result<Vec<ReducedCollection>, MorseError> {
    let dec = decompose(complex, f)?;
    Ok(dec.essential(complex).cloned().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexPair {
    pub collection: usize,
    pub invariant: CellSet,
    pub neighborhood: CellSet,
    pub exit: CellSet,
    /// Members of the exit set at the collection's own value.
    pub exit_cells: CellSet,
}

/// `N = closure(I)`, `E = {σ ∈ N \ I : f(σ) ≤ f(I)}`.
pub fn index_pair(
    complex: &Complex,
    f: &DiscreteFunction,
    invariant: &ReducedCollection,
) -> Result<IndexPair, ConleyError> {
    let id = invariant.parent;
    let neighborhood = complex.closure(&invariant.cells);
    let rest: CellSet = neighborhood.difference(&invariant.cells).copied().collect();
    let exit: CellSet = rest
        .iter()
        .filter(|&&c| f.value(c) <= &invariant.value)
        .copied()
        .collect();
    if exit != rest {
        return Err(ConleyError::ExitMismatch(id));
    }
    if !complex.is_subcomplex(&neighborhood) {
        return Err(ConleyError::NotSubcomplex { what: "N", collection: id });
    }
    if !complex.is_subcomplex(&exit) {
        return Err(ConleyError::NotSubcomplex { what: "E", collection: id });
    }
    let exit_cells = exit
        .iter()
        .filter(|&&c| f.value(c) == &invariant.value)
        .copied()
        .collect();
    Ok(IndexPair {
        collection: id,
        invariant: invariant.cells.clone(),
        neighborhood,
        exit,
        exit_cells,
    })
}

/// `C_t(I) = Σ_k rank H_k(N, E) t^k`
pub fn conley_index(
    complex: &Complex,
    pair: &IndexPair,
    ring: Coefficients,
) -> Result<Polynomial, HomologyError> {
    let cc = relative_chain_complex(complex, &pair.neighborhood, &pair.exit, ring)?;
    Ok(poincare_polynomial(&betti(&cc)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerCheck {
    pub reduced: i64,
    pub neighborhood: i64,
    pub exit: i64,
    pub ok: bool,
}

/// `χ(C^red) = χ(N) − χ(E)`, every term from integer Betti numbers.
pub fn euler_index_check(complex: &Complex, pair: &IndexPair) -> Result<EulerCheck, HomologyError> {
    let z = Coefficients::Integers;
    let chi = |cells: &CellSet| reduced_boundary(complex, cells, z).map(|cc| betti(&cc).euler());
    let reduced = chi(&pair.invariant)?;
    let neighborhood = chi(&pair.neighborhood)?;
    let exit = chi(&pair.exit)?;
    Ok(EulerCheck {
        reduced,
        neighborhood,
        exit,
        ok: reduced == neighborhood - exit,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSetReport {
    pub pair: IndexPair,
    pub index: Polynomial,
    /// `P_t(C^red)` from the reduced boundary operator.
    pub reduced_poincare: Polynomial,
    pub euler: EulerCheck,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConleyReport {
    pub ring: Coefficients,
    pub sets: Vec<InvariantSetReport>,
    pub sum: Polynomial,
    pub complex_poincare: Polynomial,
    pub quotient: Polynomial,
    pub division_remainder: i64,
    pub divisible: bool,
    pub nonneg: bool,
    /// `C_t(I) = P_t(C^red)` for every invariant set.
    pub agrees_with_reduced: bool,
}

impl ConleyReport {
    pub fn euler_ok(&self) -> bool {
        self.sets.iter().all(|s| s.euler.ok)
    }

    pub fn holds(&self) -> bool {
        self.divisible && self.nonneg && self.agrees_with_reduced && self.euler_ok()
    }
}

/// `P_t(K) + (1 + t) R(t) = Σ_j C_t(I_j)`
pub fn conley_theorem_check(
    complex: &Complex,
    f: &DiscreteFunction,
    ring: Coefficients,
) -> Result<ConleyReport, ConleyError> {
    let complex_poincare = poincare_polynomial(&betti(&chain_complex(complex, ring)?));
    let mut sets = Vec::new();
    for inv in isolated_invariant_sets(complex, f)? {
        let pair = index_pair(complex, f, &inv)?;
        let index = conley_index(complex, &pair, ring)?;
        let reduced_poincare = poincare_polynomial(&betti(&reduced_boundary(complex, &inv.cells, ring)?));
        let euler = euler_index_check(complex, &pair)?;
        sets.push(InvariantSetReport {
            pair,
            index,
            reduced_poincare,
            euler,
        });
    }
    let sum: Polynomial = sets.iter().map(|s| &s.index).sum();
    let (quotient, division_remainder) = (&sum - &complex_poincare).div_rem_one_plus_t();
    let divisible = division_remainder == 0;
    Ok(ConleyReport {
        ring,
        agrees_with_reduced: sets.iter().all(|s| s.index == s.reduced_poincare),
        nonneg: divisible && quotient.is_nonnegative(),
        divisible,
        sets,
        sum,
        complex_poincare,
        quotient,
        division_remainder,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn simplicial(simplices: &[&[&str]]) -> Complex {
        let v: Vec<Vec<&str>> = simplices.iter().map(|t| t.to_vec()).collect();
        Complex::build_simplicial(&v).unwrap()
    }

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    #[test]
    fn invariant_sets_of_triangle() {
        let tri = simplicial(&[&["a", "b", "c"]]);
        let f = DiscreteFunction::dimension(&tri);
        let sets = isolated_invariant_sets(&tri, &f).unwrap();
        assert_eq!(sets.len(), 5);
        let edges = sets.iter().find(|s| s.cells.len() == 3).unwrap();
        let pair = index_pair(&tri, &f, edges).unwrap();
        assert_eq!(tri.ids_of(&pair.neighborhood), vec!["a", "a-b", "a-c", "b", "b-c", "c"]);
        assert_eq!(tri.ids_of(&pair.exit), vec!["a", "b", "c"]);
        assert!(pair.exit_cells.is_empty());
        assert_eq!(conley_index(&tri, &pair, Coefficients::Integers).unwrap(), p(&[0, 3]));
        let e = euler_index_check(&tri, &pair).unwrap();
        assert_eq!((e.reduced, e.neighborhood, e.exit, e.ok), (-3, 0, 3, true));

        let rep = conley_theorem_check(&tri, &f, Coefficients::Integers).unwrap();
        assert_eq!(rep.sum, p(&[3, 3, 1]));
        assert_eq!(rep.quotient, p(&[2, 1]));
        assert!(rep.holds());
    }

    #[test]
    fn singleton_cells_have_sphere_indices() {
        for k in 0..4 {
            let verts: Vec<String> = (0..=k).map(|i| format!("v{i}")).collect();
            let s = Complex::build_simplicial(&[verts]).unwrap();
            let f = DiscreteFunction::dimension(&s);
            let top = s.cells_of_dim(k).next().unwrap();
            let inv = isolated_invariant_sets(&s, &f)
                .unwrap()
                .into_iter()
                .find(|r| r.cells.contains(&top))
                .unwrap();
            let pair = index_pair(&s, &f, &inv).unwrap();
            let c = conley_index(&s, &pair, Coefficients::Integers).unwrap();
            assert_eq!(c, Polynomial::monomial(1, k));
            // P_t(N, E) + 1 is the Poincaré polynomial of the k-sphere N/E
            let verts: Vec<String> = (0..=k + 1).map(|i| format!("v{i}")).collect();
            let facets: Vec<Vec<String>> = (0..=k + 1)
                .map(|skip| verts.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v.clone()).collect())
                .collect();
            let sphere = Complex::build_simplicial(&facets).unwrap();
            let sphere_p = poincare_polynomial(&betti(&chain_complex(&sphere, Coefficients::Integers).unwrap()));
            assert_eq!(&c + &Polynomial::constant(1), sphere_p);
            let e = euler_index_check(&s, &pair).unwrap();
            assert_eq!(e.reduced, if k % 2 == 0 { 1 } else { -1 });
            assert!(e.ok);
        }
    }

    #[test]
    fn noncritical_pair_segment_and_circle() {
        let seg = simplicial(&[&["v", "w"]]);
        let f = DiscreteFunction::from_integers(&seg, [("v", 1), ("v-w", 1), ("w", 0)]).unwrap();
        let sets = isolated_invariant_sets(&seg, &f).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(seg.ids_of(&sets[0].cells), vec!["w"]);
        let rep = conley_theorem_check(&seg, &f, Coefficients::Integers).unwrap();
        assert_eq!((rep.sum.clone(), rep.quotient.clone()), (p(&[1]), Polynomial::zero()));

        let hollow = simplicial(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
        let c = DiscreteFunction::constant(&hollow, BigRational::zero());
        let rep = conley_theorem_check(&hollow, &c, Coefficients::Integers).unwrap();
        assert_eq!(rep.sets.len(), 1);
        assert!(rep.sets[0].pair.exit.is_empty());
        assert_eq!(rep.sum, p(&[1, 1]));
        assert_eq!(rep.quotient, Polynomial::zero());
        assert_eq!((rep.sets[0].euler.reduced, rep.sets[0].euler.exit), (0, 0));
    }

    #[test]
    fn exit_cells_at_collection_value() {
        // v shares the value of u-v but is upward noncritical through v-w
        let k = simplicial(&[&["u", "v"], &["v", "w"]]);
        let f = DiscreteFunction::from_integers(&k, [("u", 0), ("v", 1), ("u-v", 1), ("v-w", 0), ("w", -1)]).unwrap();
        let sets = isolated_invariant_sets(&k, &f).unwrap();
        assert_eq!(sets.len(), 3);
        let edge = sets.iter().find(|s| s.cells.len() == 1 && k.dim(*s.cells.first().unwrap()) == 1).unwrap();
        let pair = index_pair(&k, &f, edge).unwrap();
        assert_eq!(k.ids_of(&pair.exit), vec!["u", "v"]);
        assert_eq!(k.ids_of(&pair.exit_cells), vec!["v"]);
        let rep = conley_theorem_check(&k, &f, Coefficients::Integers).unwrap();
        assert_eq!(rep.sum, p(&[2, 1]));
        assert_eq!(rep.quotient, p(&[1]));
        assert!(rep.holds());
    }
}
