#![allow(dead_code)]

use std::path::PathBuf;

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use signed_inertia::matrix::{frac, Matrix, Rat};
use signed_inertia::{InertiaPair, SignedGraph, SymMat};

/// Partial inertia from the characteristic polynomial.
///
/// `det(xI - A)` is computed with the Faddeev-LeVerrier recurrence. A
/// symmetric matrix has only real eigenvalues, so Descartes' rule of signs
/// is exact: sign changes of `p(x)` count the positive roots and sign
/// changes of `p(-x)` the negative ones.
pub fn charpoly_pin(a: &SymMat) -> InertiaPair {
    let n = a.size();
    let am = a.as_matrix();
    // coeffs[k] multiplies x^k
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut next = am.mul(&m).unwrap();
        for i in 0..n {
            let d = &next[(i, i)] + &coeffs[n - k + 1];
            next.set(i, i, d);
        }
        let am_next = am.mul(&next).unwrap();
        let trace: Rat = (0..n).map(|i| am_next[(i, i)].clone()).sum();
        coeffs[n - k] = -trace / Rat::from_integer((k as i64).into());
        m = next;
    }
    let changes = |c: &[Rat]| {
        let signs: Vec<bool> = c.iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let flipped: Vec<Rat> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
        .collect();
    InertiaPair::new(changes(&coeffs), changes(&flipped))
}

pub fn rat_strategy(bound: i64) -> impl Strategy<Value = Rat> {
    (-bound..=bound, 1..=bound).prop_map(|(n, d)| frac(n, d))
}

pub fn sym_strategy(max: usize, bound: i64) -> impl Strategy<Value = SymMat> {
    (0..=max).prop_flat_map(move |n| {
        proptest::collection::vec(rat_strategy(bound), n * (n + 1) / 2).prop_map(move |v| {
            let mut m = SymMat::zeros(n);
            let mut it = v.into_iter();
            for i in 0..n {
                for j in i..n {
                    m.set_sym(i, j, it.next().unwrap());
                }
            }
            m
        })
    })
}

pub fn graph_strategy(max_n: usize) -> impl Strategy<Value = SignedGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let edge = (1..=n, 1..=n, any::<bool>());
        proptest::collection::vec(edge, 0..=2 * n).prop_map(move |es| {
            let mut g = SignedGraph::new(n);
            for (a, b, odd) in es {
                let parity = if odd { signed_inertia::Parity::Odd } else { signed_inertia::Parity::Even };
                g.add_edge(a, b, parity).unwrap();
            }
            g
        })
    })
}

pub fn graphs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../graphs")
}

pub fn load(path: &PathBuf) -> SignedGraph {
    std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .parse()
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn fixture(name: &str) -> SignedGraph {
    load(&graphs_dir().join("fixtures").join(format!("{name}.sg")))
}

/// Corpus graphs sorted by file name.
pub fn corpus() -> Vec<(String, SignedGraph)> {
    let dir = graphs_dir().join("corpus");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "sg"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), load(p)))
        .collect()
}

pub fn intro_matrix() -> SymMat {
    SymMat::from_i64(&[&[0, 1, 0], &[1, 0, -2], &[0, -2, -3]])
}
