//! Direct search for the inertia pairs of a signed graph's matrix class.
//!
//! Two strategies feed one pair set:
//!
//! * sampling: every sign branch of the `Both` positions (or a seeded subset
//!   when there are too many) is crossed with a grid over a small value pool
//!   plus `budget` random rationals;
//! * completion: random members whose block on one or two looped vertices is
//!   replaced by the Schur completion of the rest, which makes them singular
//!   while keeping the pin of the complementary block;
//! * factor search: for pairs `(p, q)` not yet dominated by an observed pin,
//!   integer matrices `X` with `X D Xᵀ` in the class are searched, where
//!   `D = diag(I_p, -I_q)`. This finds the singular members that random
//!   values almost never hit.
//!
//! Neither is complete, so a report records which searches ran out of nodes.

use std::collections::BTreeMap;

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{EdgeProfile, SignedGraph};
use crate::matrix::{default_pool, entry_allowed, frac, membership, pin, InertiaPair, Matrix, Rat, SignChoice, SymMat};
use crate::pairs::PairSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Random rational samples per sign branch.
    pub budget: usize,
    pub seed: u64,
    /// Branches enumerated exhaustively up to this count, sampled above it.
    pub max_branches: usize,
    /// Pool grid enumerated in full up to this many points, sampled above it.
    pub grid_cap: usize,
    /// Node limit for each factor search.
    pub factor_nodes: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            budget: 100,
            seed: 0,
            max_branches: 729,
            grid_cap: 256,
            factor_nodes: 400_000,
        }
    }
}

impl OracleConfig {
    pub fn new(budget: usize, seed: u64) -> Self {
        OracleConfig {
            budget,
            seed,
            ..OracleConfig::default()
        }
    }
}

/// How a witness was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    Grid,
    Random,
    Completion,
    Factor,
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub pairs: PairSet,
    /// One member of the class per observed pair, with that exact pin.
    pub witnesses: BTreeMap<InertiaPair, (SymMat, WitnessSource)>,
    pub samples: usize,
    pub seed: u64,
    pub budget: usize,
    /// `3^b` for `b` positions with both parities (saturating).
    pub branches_total: u64,
    pub branches_run: usize,
    /// Factor searches run, and the targets whose search hit the node limit.
    pub factor_searches: usize,
    pub incomplete: Vec<InertiaPair>,
}

impl OracleReport {
    pub fn frontier(&self) -> PairSet {
        self.pairs.minimal()
    }

    pub fn coverage(&self) -> f64 {
        if self.branches_total == 0 {
            1.0
        } else {
            self.branches_run as f64 / self.branches_total as f64
        }
    }

    /// The `{pairs, samples, seed}` block of a verification report.
    pub fn summary(&self) -> OracleSummary {
        OracleSummary {
            pairs: self.pairs.clone(),
            frontier: self.frontier(),
            samples: self.samples,
            seed: self.seed,
            budget: self.budget,
            branch_coverage: self.coverage(),
            factor_searches: self.factor_searches,
            incomplete: self.incomplete.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSummary {
    pub pairs: PairSet,
    pub frontier: PairSet,
    pub samples: usize,
    pub seed: u64,
    pub budget: usize,
    pub branch_coverage: f64,
    pub factor_searches: usize,
    pub incomplete: Vec<InertiaPair>,
}

/// A fixed sign for every upper-triangular position; `None` means forced zero.
type SignPattern = Vec<((usize, usize), Option<bool>)>;

fn branch_pattern(table: &[Vec<EdgeProfile>], both: &[(usize, usize)], digits: &[SignChoice]) -> SignPattern {
    let n = table.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let sign = match table[i][j] {
                EdgeProfile::None => None,
                EdgeProfile::OddOnly => Some(true),
                EdgeProfile::EvenOnly => Some(false),
                EdgeProfile::Both => {
                    let at = both.iter().position(|&x| x == (i, j)).expect("both position");
                    match digits[at] {
                        SignChoice::Neg => Some(false),
                        SignChoice::Zero => None,
                        SignChoice::Pos => Some(true),
                    }
                }
            };
            out.push(((i, j), sign));
        }
    }
    out
}

fn build(n: usize, pattern: &SignPattern, mut magnitude: impl FnMut(usize) -> Rat) -> SymMat {
    let mut m = Matrix::zeros(n, n);
    let mut free = 0;
    for &((i, j), sign) in pattern {
        let Some(positive) = sign else { continue };
        let x = magnitude(free);
        free += 1;
        let x = if positive { x } else { -x };
        m.set(i, j, x.clone());
        m.set(j, i, x);
    }
    SymMat::new(m).expect("symmetric by construction")
}

struct BranchResult {
    samples: usize,
    found: BTreeMap<InertiaPair, (SymMat, WitnessSource)>,
}

fn record(found: &mut BTreeMap<InertiaPair, (SymMat, WitnessSource)>, a: SymMat, src: WitnessSource) {
    found.entry(pin(&a)).or_insert((a, src));
}

/// Index sets whose principal block is recomputed as a Schur completion:
/// single vertices with a loop, and adjacent pairs of such vertices.
fn completion_sets(table: &[Vec<EdgeProfile>]) -> Vec<Vec<usize>> {
    let n = table.len();
    if n < 2 {
        return Vec::new();
    }
    let looped: Vec<usize> = (0..n).filter(|&v| table[v][v] != EdgeProfile::None).collect();
    let mut out: Vec<Vec<usize>> = looped.iter().map(|&v| vec![v]).collect();
    if n >= 3 {
        for (x, &u) in looped.iter().enumerate() {
            for &w in &looped[x + 1..] {
                if table[u][w] != EdgeProfile::None {
                    out.push(vec![u, w]);
                }
            }
        }
    }
    out
}

/// Replaces the `set` block of `a` by `Bᵀ A'⁻¹ B`, where `A'` is the
/// complementary principal block and `B` the off-diagonal block, so that
/// the result has the same pin as `A'` and rank `n - |set|`.
fn schur_complete(a: &SymMat, set: &[usize]) -> Option<SymMat> {
    let n = a.size();
    let rest: Vec<usize> = (0..n).filter(|i| !set.contains(i)).collect();
    let inner = a.as_matrix().select(&rest, &rest);
    let b = a.as_matrix().select(&rest, set);
    let y = inner.inverse()?.mul(&b).ok()?;
    let c = b.transpose().mul(&y).ok()?;
    let mut out = a.clone();
    for (x, &i) in set.iter().enumerate() {
        for (z, &j) in set.iter().enumerate() {
            out.set_sym(i, j, c[(x, z)].clone());
        }
    }
    Some(out)
}

fn in_class(a: &SymMat, table: &[Vec<EdgeProfile>]) -> bool {
    let n = a.size();
    (0..n).all(|i| (i..n).all(|j| entry_allowed(&a[(i, j)], table[i][j])))
}

fn run_branch(
    table: &[Vec<EdgeProfile>],
    pattern: &SignPattern,
    completions: &[Vec<usize>],
    cfg: &OracleConfig,
    stream: u64,
) -> BranchResult {
    let n = table.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let mags: Vec<Rat> = default_pool().into_iter().filter(|x| x.is_positive()).collect();
    let free = pattern.iter().filter(|(_, s)| s.is_some()).count();
    let mut found = BTreeMap::new();
    let mut samples = 0;

    let grid_size = (mags.len() as u64).checked_pow(free as u32);
    match grid_size {
        Some(size) if size <= cfg.grid_cap as u64 => {
            for idx in 0..size {
                let a = build(n, pattern, |f| mags[((idx / (mags.len() as u64).pow(f as u32)) % mags.len() as u64) as usize].clone());
                record(&mut found, a, WitnessSource::Grid);
                samples += 1;
            }
        }
        _ => {
            for _ in 0..cfg.grid_cap {
                let a = build(n, pattern, |_| mags[rng.gen_range(0..mags.len())].clone());
                record(&mut found, a, WitnessSource::Grid);
                samples += 1;
            }
        }
    }
    if free > 0 {
        for _ in 0..cfg.budget {
            let a = build(n, pattern, |_| frac(rng.gen_range(1..=9), rng.gen_range(1..=9)));
            record(&mut found, a, WitnessSource::Random);
            samples += 1;
        }
    }
    if !completions.is_empty() {
        for t in 0..cfg.budget {
            let set = &completions[t % completions.len()];
            let a = build(n, pattern, |_| frac(rng.gen_range(1..=9), rng.gen_range(1..=9)));
            samples += 1;
            if let Some(c) = schur_complete(&a, set) {
                if in_class(&c, table) {
                    record(&mut found, c, WitnessSource::Completion);
                }
            }
        }
    }
    BranchResult { samples, found }
}

fn branch_digits(mut idx: u64, len: usize) -> Vec<SignChoice> {
    (0..len)
        .map(|_| {
            let d = SignChoice::ALL[(idx % 3) as usize];
            idx /= 3;
            d
        })
        .collect()
}

/// Searches the class of `g` for its inertia pairs.
pub fn oracle_inertia(g: &SignedGraph, cfg: &OracleConfig) -> OracleReport {
    let n = g.vertex_count();
    let table = g.profile_table();
    let both: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .filter(|&(i, j)| table[i][j] == EdgeProfile::Both)
        .collect();
    let completions = completion_sets(&table);
    let total = 3u64.checked_pow(both.len() as u32).unwrap_or(u64::MAX);

    let branches: Vec<(u64, Vec<SignChoice>)> = if total <= cfg.max_branches as u64 {
        (0..total).map(|i| (i, branch_digits(i, both.len()))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..cfg.max_branches as u64)
            .map(|i| {
                let d = (0..both.len()).map(|_| SignChoice::ALL[rng.gen_range(0..3)]).collect();
                (i, d)
            })
            .collect()
    };

    let results: Vec<BranchResult> = branches
        .par_iter()
        .map(|(idx, digits)| run_branch(&table, &branch_pattern(&table, &both, digits), &completions, cfg, *idx))
        .collect();

    let mut witnesses = BTreeMap::new();
    let mut samples = 0;
    for r in results {
        samples += r.samples;
        for (k, v) in r.found {
            witnesses.entry(k).or_insert(v);
        }
    }

    let mut factor_searches = 0;
    let mut incomplete = Vec::new();
    for r in 0..=n {
        for p in 0..=r {
            let target = InertiaPair::new(p, r - p);
            if witnesses.keys().any(|b: &InertiaPair| b.leq(&target)) {
                continue;
            }
            factor_searches += 1;
            match factor_search(&table, target, cfg.factor_nodes) {
                Search::Found(a) => {
                    debug_assert!(membership(&a, g).unwrap_or(false));
                    record(&mut witnesses, a, WitnessSource::Factor);
                }
                Search::Exhausted => {}
                Search::Limit => incomplete.push(target),
            }
        }
    }

    OracleReport {
        pairs: witnesses.keys().copied().collect(),
        witnesses,
        samples,
        seed: cfg.seed,
        budget: cfg.budget,
        branches_total: if both.is_empty() { 1 } else { total },
        branches_run: branches.len(),
        factor_searches,
        incomplete,
    }
}

enum Search {
    Found(SymMat),
    Exhausted,
    Limit,
}

fn sign_ok(x: i64, profile: EdgeProfile) -> bool {
    match x.signum() {
        1 => profile.allows_positive(),
        -1 => profile.allows_negative(),
        _ => profile.allows_zero(),
    }
}

struct FactorSearch<'a> {
    table: &'a [Vec<EdgeProfile>],
    p: usize,
    r: usize,
    candidates: Vec<Vec<i64>>,
    rows: Vec<usize>,
    nodes: u64,
    limit: u64,
}

impl FactorSearch<'_> {
    fn form(&self, a: &[i64], b: &[i64]) -> i64 {
        (0..self.r).map(|c| if c < self.p { a[c] * b[c] } else { -a[c] * b[c] }).sum()
    }

    /// Columns canonical up to the symmetries of `D`: each column's first
    /// nonzero entry is positive and columns within a block are
    /// lexicographically non-increasing.
    fn canonical_prefix(&self, next: &[i64]) -> bool {
        for c in 0..self.r {
            let lead_zero = self.rows.iter().all(|&i| self.candidates[i][c] == 0);
            if lead_zero && next[c] < 0 {
                return false;
            }
        }
        for c in 1..self.r {
            if c == self.p {
                continue;
            }
            let mut prefix_equal = true;
            for &i in &self.rows {
                let (a, b) = (self.candidates[i][c - 1], self.candidates[i][c]);
                if a != b {
                    prefix_equal = false;
                    break;
                }
            }
            if prefix_equal && next[c - 1] < next[c] {
                return false;
            }
        }
        true
    }

    fn dfs(&mut self) -> Option<bool> {
        let k = self.rows.len();
        if k == self.table.len() {
            return Some(true);
        }
        for ci in 0..self.candidates.len() {
            self.nodes += 1;
            if self.nodes > self.limit {
                return None;
            }
            let v = &self.candidates[ci];
            if !sign_ok(self.form(v, v), self.table[k][k]) {
                continue;
            }
            if !self.rows.iter().enumerate().all(|(i, &ri)| sign_ok(self.form(&self.candidates[ri], v), self.table[i][k])) {
                continue;
            }
            if !self.canonical_prefix(v) {
                continue;
            }
            self.rows.push(ci);
            match self.dfs() {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.rows.pop();
        }
        Some(false)
    }
}

fn vectors(r: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    // small entries first so that witnesses stay readable
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), v.iter().map(|x| -x).collect::<Vec<_>>()));
    out
}

/// Looks for integer `X` (`n x (p + q)`) with `X D Xᵀ` matching the profile
/// table, first with entries in `{-1, 0, 1}` and then, for narrow `X`, in
/// `{-2, ..., 2}`.
fn factor_search(table: &[Vec<EdgeProfile>], target: InertiaPair, limit: u64) -> Search {
    let n = table.len();
    let r = target.total();
    let mut hit_limit = false;
    let ranges: &[(i64, i64)] = if r <= 3 { &[(-1, 1), (-2, 2)] } else { &[(-1, 1)] };
    for &(lo, hi) in ranges {
        let mut s = FactorSearch {
            table,
            p: target.p,
            r,
            candidates: vectors(r, lo, hi),
            rows: Vec::new(),
            nodes: 0,
            limit,
        };
        match s.dfs() {
            Some(true) => {
                let mut x = Matrix::zeros(n, r);
                for (i, &ci) in s.rows.iter().enumerate() {
                    for (c, &v) in s.candidates[ci].iter().enumerate() {
                        x.set(i, c, Rat::from_integer(v.into()));
                    }
                }
                let mut d = Matrix::zeros(r, r);
                for c in 0..r {
                    d.set(c, c, if c < target.p { Rat::one() } else { -Rat::one() });
                }
                let a = x.mul(&d).and_then(|xd| xd.mul(&x.transpose())).expect("conformable");
                return Search::Found(SymMat::new(a).expect("XDXᵀ is symmetric"));
            }
            None => hit_limit = true,
            Some(false) => {}
        }
    }
    if hit_limit {
        Search::Limit
    } else {
        Search::Exhausted
    }
}

/// Whether every stored witness is a member with the recorded pin.
pub fn witnesses_valid(g: &SignedGraph, report: &OracleReport) -> bool {
    report
        .witnesses
        .iter()
        .all(|(k, (a, _))| membership(a, g).unwrap_or(false) && pin(a) == *k)
}
