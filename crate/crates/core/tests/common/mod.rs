//! Random instances and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use morsebott::complex::{CellIdx, Complex};
use morsebott::morse::{check_discrete_morse, check_morse_bott, collections, DiscreteFunction};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn simplicial(simplices: &[&[&str]]) -> Complex {
    let v: Vec<Vec<&str>> = simplices.iter().map(|s| s.to_vec()).collect();
    Complex::build_simplicial(&v).unwrap()
}

/// Random simplicial complex on at most six vertices with at most `max_cells` cells.
pub fn random_simplicial(rng: &mut ChaCha8Rng, max_cells: usize) -> Complex {
    loop {
        let n_vertices = rng.gen_range(2..=6);
        let vertices: Vec<String> = (0..n_vertices).map(|i| format!("v{i}")).collect();
        let n_simplices = rng.gen_range(1..=4);
        let simplices: Vec<Vec<String>> = (0..n_simplices)
            .map(|_| {
                let size = rng.gen_range(1..=4.min(n_vertices));
                vertices.choose_multiple(rng, size).cloned().collect()
            })
            .collect();
        let k = Complex::build_simplicial(&simplices).unwrap();
        if k.len() <= max_cells {
            return k;
        }
    }
}

/// Random integer values, then local repair: each violation is resolved by
/// moving a witness onto the offending cell's value (or the reverse), which
/// merges the two into one collection. Restarts after too many rounds.
pub fn random_morse_bott(rng: &mut ChaCha8Rng, complex: &Complex) -> DiscreteFunction {
    for _ in 0..20 {
        let mut values: Vec<i64> = complex.indices().map(|_| rng.gen_range(0..=6)).collect();
        for _ in 0..100 {
            let f = DiscreteFunction::from_fn(complex, |c| int(values[c.index()]));
            let verdict = check_morse_bott(complex, &f);
            if verdict.ok {
                return f;
            }
            let v = verdict.violations.choose(rng).unwrap();
            let w = *v.witnesses.choose(rng).unwrap();
            if rng.gen_bool(0.5) {
                values[w.index()] = values[v.cell.index()];
            } else {
                values[v.cell.index()] = values[w.index()];
            }
        }
    }
    DiscreteFunction::constant(complex, BigRational::zero())
}

/// `n` Morse-Bott instances on random complexes with at most 25 cells.
pub fn corpus(n: usize, seed: u64) -> Vec<(Complex, DiscreteFunction)> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let k = random_simplicial(&mut r, 25);
            let f = random_morse_bott(&mut r, &k);
            (k, f)
        })
        .collect()
}

/// Discrete Morse function whose collections are singletons or facet pairs:
/// starts from a spread-out `dim` function and greedily matches random facet
/// pairs, either tying their values or inverting them.
pub fn random_discrete_morse(rng: &mut ChaCha8Rng, complex: &Complex) -> DiscreteFunction {
    let mut values: Vec<i64> = complex
        .indices()
        .map(|c| 100 * complex.dim(c) as i64 + rng.gen_range(0..50))
        .collect();
    let mut records: Vec<(CellIdx, CellIdx)> = complex.faces().iter().map(|r| (r.child, r.parent)).collect();
    records.shuffle(rng);
    let build = |values: &[i64]| DiscreteFunction::from_fn(complex, |c| int(values[c.index()]));
    for (s, t) in records {
        if rng.gen_bool(0.4) {
            continue;
        }
        let mut trial = values.clone();
        trial[s.index()] = if rng.gen_bool(0.5) { trial[t.index()] } else { trial[t.index()] + 1 };
        let f = build(&trial);
        let small = collections(complex, &f).iter().all(|c| c.cells.len() <= 2);
        if small && check_discrete_morse(complex, &f).ok && check_morse_bott(complex, &f).ok {
            values = trial;
        }
    }
    build(&values)
}

pub fn torus7() -> Complex {
    let mut tris = Vec::new();
    for i in 0..7 {
        for (a, b) in [(1, 3), (2, 3)] {
            tris.push(vec![format!("{i}"), format!("{}", (i + a) % 7), format!("{}", (i + b) % 7)]);
        }
    }
    Complex::build_simplicial(&tris).unwrap()
}

pub fn rp2_6() -> Complex {
    let tris = [
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
        [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
    ];
    let tris: Vec<Vec<String>> = tris.iter().map(|t| t.iter().map(|v| v.to_string()).collect()).collect();
    Complex::build_simplicial(&tris).unwrap()
}

pub fn sphere2() -> Complex {
    simplicial(&[&["a", "b", "c"], &["a", "b", "d"], &["a", "c", "d"], &["b", "c", "d"]])
}

/// Betti numbers over Q by exact Gaussian elimination on the incidence data.
pub fn rational_betti(complex: &Complex) -> Vec<usize> {
    let top = complex.top_dim().unwrap_or(0);
    let count: Vec<usize> = (0..=top).map(|k| complex.cells_of_dim(k).count()).collect();
    let rank = |k: usize| -> usize {
        if k == 0 || k > top {
            return 0;
        }
        let rows: Vec<CellIdx> = complex.cells_of_dim(k - 1).collect();
        let cols: Vec<CellIdx> = complex.cells_of_dim(k).collect();
        let mut m: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|&r| {
                cols.iter()
                    .map(|&c| complex.face_record(c, r).map_or_else(BigRational::zero, |f| int(f.incidence)))
                    .collect()
            })
            .collect();
        rank_q(&mut m)
    };
    (0..=top).map(|k| count[k] - rank(k) - rank(k + 1)).collect()
}

fn rank_q(m: &mut [Vec<BigRational>]) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        let prow: Vec<BigRational> = m[r].iter().map(|x| x / &pivot).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &factor * y;
                }
            }
        }
        m[r] = prow;
        r += 1;
    }
    r
}

/// Forman-critical cells straight from the definition.
pub fn brute_critical(complex: &Complex, f: &DiscreteFunction) -> BTreeSet<CellIdx> {
    complex
        .indices()
        .filter(|&s| {
            let up = complex.faces().iter().filter(|r| r.child == s && f.value(r.parent) <= f.value(s)).count();
            let down = complex.faces().iter().filter(|r| r.parent == s && f.value(r.child) >= f.value(s)).count();
            up == 0 && down == 0
        })
        .collect()
}

/// Exact quotient of `p` by `1 + t` on plain coefficient vectors, or `None`.
pub fn divide_one_plus_t(p: &[i64]) -> Option<Vec<i64>> {
    let mut rest = p.to_vec();
    while rest.last() == Some(&0) {
        rest.pop();
    }
    if rest.is_empty() {
        return Some(Vec::new());
    }
    let mut q = vec![0; rest.len().saturating_sub(1)];
    for k in (1..rest.len()).rev() {
        q[k - 1] = rest[k];
        rest[k - 1] -= rest[k];
        rest[k] = 0;
    }
    if rest[0] != 0 {
        return None;
    }
    while q.last() == Some(&0) {
        q.pop();
    }
    Some(q)
}

/// Every elementary closed V-path by exhaustive backtracking from each arrow,
/// each rotated to start at its smallest arrow.
pub fn brute_orbits(complex: &Complex, arrows: &[(CellIdx, CellIdx)]) -> BTreeSet<Vec<(CellIdx, CellIdx)>> {
    let follows = |a: (CellIdx, CellIdx), b: (CellIdx, CellIdx)| {
        b.0 != a.0 && b.1 != a.1 && complex.faces().iter().any(|r| r.parent == a.1 && r.child == b.0)
    };
    let mut found = BTreeSet::new();
    fn extend(
        path: &mut Vec<usize>,
        arrows: &[(CellIdx, CellIdx)],
        follows: &dyn Fn((CellIdx, CellIdx), (CellIdx, CellIdx)) -> bool,
        found: &mut BTreeSet<Vec<(CellIdx, CellIdx)>>,
    ) {
        let last = arrows[*path.last().unwrap()];
        for j in 0..arrows.len() {
            if !follows(last, arrows[j]) {
                continue;
            }
            if j == path[0] {
                let mut cycle: Vec<(CellIdx, CellIdx)> = path.iter().map(|&i| arrows[i]).collect();
                let start = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap();
                cycle.rotate_left(start);
                found.insert(cycle);
            } else if !path.contains(&j) {
                path.push(j);
                extend(path, arrows, follows, found);
                path.pop();
            }
        }
    }
    for s in 0..arrows.len() {
        extend(&mut vec![s], arrows, &follows, &mut found);
    }
    found
}

pub fn one() -> BigRational {
    BigRational::one()
}
