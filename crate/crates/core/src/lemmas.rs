//! Randomized self-check of every congruence construction.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::EdgeProfile;
use crate::matrix::{direct_sum, entry_allowed, frac, int, pin, InertiaPair, Matrix, Rat, SymMat};
use crate::transforms::{
    adjoin, alternative_decide, compose_term, hyperbolic_reduce, one_sum_decide, subdirect_arrow,
    vertex_delete_arrow, vertex_embed_arrow, Alternative, OneSum,
};

#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub trials: usize,
    pub passed: usize,
    /// First few failure descriptions.
    pub failures: Vec<String>,
}

impl LemmaCheck {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub seed: u64,
    pub size_max: usize,
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(LemmaCheck::ok)
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.ok() { "ok" } else { "FAIL" };
            writeln!(f, "{:<20} {:>5}/{:<5} {}", c.name, c.passed, c.trials, status)?;
            for msg in &c.failures {
                writeln!(f, "    {msg}")?;
            }
        }
        Ok(())
    }
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    let num = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
    frac(num, rng.gen_range(1..=9))
}

/// Random symmetric matrix, roughly a third of its entries zero; with
/// probability one half it is built as `L S Lᵀ` of lower rank.
pub fn random_sym(rng: &mut ChaCha8Rng, n: usize) -> SymMat {
    if n > 0 && rng.gen_bool(0.5) {
        let r = rng.gen_range(0..n);
        let mut l = Matrix::zeros(n, r);
        for i in 0..n {
            for j in 0..r {
                l.set(i, j, int(rng.gen_range(-2..=2)));
            }
        }
        let signs: Vec<Rat> = (0..r).map(|_| int(if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
        let s = SymMat::diag(&signs);
        let m = l.mul(s.as_matrix()).and_then(|x| x.mul(&l.transpose())).expect("conformable");
        return SymMat::new(m).expect("symmetric");
    }
    let mut m = SymMat::zeros(n);
    for i in 0..n {
        for j in i..n {
            if !rng.gen_bool(1.0 / 3.0) {
                m.set_sym(i, j, random_rat(rng));
            }
        }
    }
    m
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    (0..n)
        .map(|_| if rng.gen_bool(1.0 / 3.0) { Rat::zero() } else { random_rat(rng) })
        .collect()
}

fn ensure(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::IdentityFailed(what.to_string()))
    }
}

fn dominated(a: InertiaPair, b: InertiaPair, what: &str) -> Result<()> {
    ensure(a.leq(&b), &format!("{what}: {a} not <= {b}"))
}

fn check_vertex_delete(rng: &mut ChaCha8Rng, size_max: usize) -> Result<()> {
    let n = rng.gen_range(1..=size_max);
    let a = random_sym(rng, n);
    let w = vertex_delete_arrow(&a)?;
    dominated(pin(&w.target), pin(&a), "pin after deletion")
}

fn check_vertex_embed(rng: &mut ChaCha8Rng, size_max: usize) -> Result<()> {
    let k = rng.gen_range(0..size_max);
    let a11 = random_sym(rng, k);
    let a21 = random_vec(rng, k);
    let a22 = if rng.gen_bool(0.3) { Rat::zero() } else { random_rat(rng) };
    let w = vertex_embed_arrow(&a11, &a21, &a22)?;
    dominated(pin(&w.target), pin(&a11) + InertiaPair::HYPERBOLIC, "pin after embedding")
}

fn check_hyperbolic(rng: &mut ChaCha8Rng, size_max: usize) -> Result<()> {
    let n = rng.gen_range(2..=size_max.max(2));
    let mut m = random_sym(rng, n);
    m.set_sym(0, 0, Rat::zero());
    if m[(0, 1)].is_zero() {
        m.set_sym(0, 1, random_rat(rng));
    }
    let r = hyperbolic_reduce(&m)?;
    ensure(r.witness.is_equivalence(), "reduction is two-way")?;
    ensure(pin(&m) == InertiaPair::HYPERBOLIC + pin(&r.rest), "pin splits off (1,1)")
}

fn check_adjoin(rng: &mut ChaCha8Rng, size_max: usize) -> Result<()> {
    let n = rng.gen_range(1..=size_max);
    let k = rng.gen_range(0..n);
    let mut m = random_sym(rng, n);
    // make the trailing block singular more often than not
    let tail = random_sym(rng, n - k);
    for i in 0..n - k {
        for j in 0..n - k {
            m.set_sym(k + i, k + j, tail[(i, j)].clone());
        }
    }
    let tail_idx: Vec<usize> = (k..n).collect();
    let c = m.as_matrix().select(&tail_idx, &tail_idx);
    let basis = c.kernel_basis();
    let mut x = vec![Rat::zero(); n - k];
    for v in &basis {
        let s = int(rng.gen_range(-2..=2));
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += &s * vi;
        }
    }
    let w = adjoin(&m, k, &x)?;
    ensure(pin(&w.target) == pin(&m), "bordering keeps pin")
}

fn check_subdirect(rng: &mut ChaCha8Rng, size_max: usize) -> Result<()> {
    let m = rng.gen_range(1..=size_max);
    let n = rng.gen_range(1..=size_max);
    let k = rng.gen_range(0..=m.min(n));
    let a = random_sym(rng, m);
    let b = random_sym(rng, n);
    let w = subdirect_arrow(&a, &b, k)?;
    ensure(pin(&w.source) == pin(&a) + pin(&b), "direct sum adds pins")?;
    dominated(pin(&w.target), pin(&a) + pin(&b), "subdirect sum")
}

/// Random matrix with a `k`/`m`/rest block structure and zero corners.
fn three_block(rng: &mut ChaCha8Rng, n: usize, k: usize, m: usize) -> SymMat {
    let mut a = SymMat::zeros(n);
    let blocks = [(0, k), (k + m, n)];
    for (lo, hi) in blocks {
        let b = random_sym(rng, hi - lo);
        for i in lo..hi {
            for j in lo..hi {
                a.set_sym(i, j, b[(i - lo, j - lo)].clone());
            }
        }
    }
    for i in k..k + m {
        for j in 0..n {
            let x = if rng.gen_bool(0.4) { Rat::zero() } else { random_rat(rng) };
            a.set_sym(i, j, x);
        }
    }
    a
}

fn check_alternative(rng: &mut ChaCha8Rng, size_max: usize) -> Result<()> {
    let n = rng.gen_range(1..=size_max);
    let m = rng.gen_range(1..=n);
    let k = rng.gen_range(0..=n - m);
    let a = three_block(rng, n, k, m);
    match alternative_decide(&a, k, m)? {
        Alternative::Split { left, right, witness, .. } => {
            ensure(witness.target == direct_sum(&left, &right), "split target")?;
            ensure(pin(&a) == pin(&left) + pin(&right), "split keeps pin")
        }
        Alternative::Border { bordered, witness, .. } => {
            ensure(witness.is_equivalence(), "border is two-way")?;
            ensure(pin(&a) == pin(&bordered), "border keeps pin")
        }
    }
}

fn check_one_sum(rng: &mut ChaCha8Rng, size_max: usize) -> Result<()> {
    let n = rng.gen_range(1..=size_max);
    let k = rng.gen_range(0..n);
    let a = three_block(rng, n, k, 1);
    let r = one_sum_decide(&a, k)?;
    let w = r.witness();
    ensure(w.is_equivalence(), "one-sum arrow is two-way")?;
    match &r {
        OneSum::Split { left, right, .. } => ensure(pin(&a) == pin(left) + pin(right), "split keeps pin"),
        OneSum::Hyperbolic { .. } => {
            let rest: Vec<usize> = (0..n - 1).collect();
            let head = w.target.principal(&rest);
            ensure(pin(&a) == pin(&head) + InertiaPair::HYPERBOLIC, "hyperbolic case keeps pin")
        }
    }
}

fn check_compose(rng: &mut ChaCha8Rng, size_max: usize) -> Result<()> {
    let (nc, nd) = (rng.gen_range(1..=size_max), rng.gen_range(1..=size_max));
    let c = random_sym(rng, nc);
    let d = random_sym(rng, nd);
    let profile = [EdgeProfile::None, EdgeProfile::OddOnly, EdgeProfile::EvenOnly, EdgeProfile::Both][rng.gen_range(0..4)];
    let r = match compose_term(&c, &d, profile) {
        Ok(r) => r,
        // no positive scale reaches an allowed sign, e.g. c = 0, d > 0 with only even loops
        Err(Error::NoRealizableSign) => return Ok(()),
        Err(e) => return Err(e),
    };
    let v = c.size() - 1;
    ensure(entry_allowed(&r.matrix[(v, v)], profile), "overlap sign allowed")?;
    ensure(r.alpha > Rat::zero(), "alpha positive")?;
    dominated(pin(&r.matrix), pin(&c) + pin(&d), "composition")
}

type Check = fn(&mut ChaCha8Rng, usize) -> Result<()>;

const CHECKS: [(&str, Check); 8] = [
    ("vertex_delete", check_vertex_delete),
    ("vertex_embed", check_vertex_embed),
    ("hyperbolic_reduce", check_hyperbolic),
    ("adjoin", check_adjoin),
    ("subdirect", check_subdirect),
    ("alternative_decide", check_alternative),
    ("one_sum_decide", check_one_sum),
    ("compose_term", check_compose),
];

/// Runs `trials` random instances of every construction. Each instance
/// re-verifies its congruence identities exactly and compares pins.
pub fn check_lemmas(trials: usize, seed: u64, size_max: usize) -> LemmaReport {
    let size_max = size_max.max(1);
    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(idx, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx as u64);
            let mut passed = 0;
            let mut failures = Vec::new();
            for t in 0..trials {
                match check(&mut rng, size_max) {
                    Ok(()) => passed += 1,
                    Err(e) if failures.len() < 5 => failures.push(format!("trial {t}: {e}")),
                    Err(_) => {}
                }
            }
            LemmaCheck {
                name,
                trials,
                passed,
                failures,
            }
        })
        .collect();
    LemmaReport { seed, size_max, checks }
}
