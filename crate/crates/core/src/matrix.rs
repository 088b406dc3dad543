//! Exact rational matrices, partial inertia by symmetric congruence
//! elimination, direct and subdirect sums, and membership in the matrix
//! class of a signed graph.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Index};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{EdgeProfile, SignedGraph};

pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Dense rectangular matrix over the rationals. Zero rows or columns are
/// allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rat;

    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .expect("rectangular literal")
    }

    /// A single column.
    pub fn column(v: &[Rat]) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rat) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self[(i, j)].clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rat) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("subtraction".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Submatrix with the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self[(i, j)].clone());
            }
        }
        m
    }

    /// Places `block` with its top-left corner at `(r, c)`.
    pub fn put(&mut self, r: usize, c: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block[(i, j)].clone());
            }
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let idx = r * m.cols + j;
                m.data[idx] = &m.data[idx] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let delta = &f * &m[(r, j)];
                    let idx = i * m.cols + j;
                    m.data[idx] -= delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Kernel basis, one vector per non-pivot column in ascending order.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some `X` with `self * X = rhs`, free variables set to zero.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let mut aug = Matrix::zeros(self.rows, self.cols + rhs.cols);
        aug.put(0, 0, self);
        aug.put(0, self.cols, rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r[(row, self.cols + j)].clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.rows))?;
        (self.rank() == self.rows).then_some(x)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Symmetric square matrix; `n = 0` is the empty matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMat(Matrix);

impl Index<(usize, usize)> for SymMat {
    type Output = Rat;

    fn index(&self, ij: (usize, usize)) -> &Rat {
        &self.0[ij]
    }
}

impl SymMat {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::DimensionMismatch(format!("{}x{} is not square", m.rows, m.cols)));
        }
        for i in 0..m.rows {
            for j in 0..i {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(SymMat(m))
    }

    pub fn zeros(n: usize) -> Self {
        SymMat(Matrix::zeros(n, n))
    }

    pub fn empty() -> Self {
        SymMat::zeros(0)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        SymMat::new(Matrix::from_i64(rows)).expect("symmetric literal")
    }

    pub fn diag(entries: &[Rat]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        SymMat(m)
    }

    /// The hyperbolic block `[[0, 1], [1, 0]]`.
    pub fn hyperbolic() -> Self {
        SymMat::from_i64(&[&[0, 1], &[1, 0]])
    }

    pub fn size(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// Sets `(i, j)` and `(j, i)`.
    pub fn set_sym(&mut self, i: usize, j: usize, x: Rat) {
        self.0.set(i, j, x.clone());
        self.0.set(j, i, x);
    }

    /// Principal submatrix on `idx` in the given order.
    pub fn principal(&self, idx: &[usize]) -> SymMat {
        SymMat(self.0.select(idx, idx))
    }

    /// `result[a][b] = self[order[a]][order[b]]`.
    pub fn permuted(&self, order: &[usize]) -> SymMat {
        self.principal(order)
    }

    /// Inverse of [`SymMat::permuted`]: `result[order[a]][order[b]] = self[a][b]`.
    pub fn unpermuted(&self, order: &[usize]) -> SymMat {
        let mut inv = vec![0; order.len()];
        for (a, &o) in order.iter().enumerate() {
            inv[o] = a;
        }
        self.principal(&inv)
    }

    pub fn scale(&self, s: &Rat) -> SymMat {
        SymMat(self.0.scale(s))
    }
}

impl fmt::Display for SymMat {
    /// `m <n>` then one line per row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "m {}", self.size())?;
        write!(f, "{}", self.0)
    }
}

impl std::str::FromStr for SymMat {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "missing `m <n>` header".into(),
        })?;
        let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["m", count] => count.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("bad size `{count}`"),
            })?,
            _ => {
                return Err(Error::Parse {
                    line,
                    message: "expected `m <n>`".into(),
                })
            }
        };
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (line, body) = lines.next().ok_or(Error::Parse {
                line: 0,
                message: format!("expected {n} rows"),
            })?;
            let row = body
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<Rat>().map_err(|_| Error::Parse {
                        line,
                        message: format!("bad rational `{tok}`"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != n {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {n} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse {
                line,
                message: "trailing content".into(),
            });
        }
        SymMat::new(Matrix::from_rows(rows).unwrap_or_else(|_| Matrix::zeros(0, 0)))
    }
}

/// Partial inertia `(p, q)`: counts of positive and negative eigenvalues.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InertiaPair {
    pub p: usize,
    pub q: usize,
}

impl InertiaPair {
    pub const ZERO: InertiaPair = InertiaPair { p: 0, q: 0 };
    pub const HYPERBOLIC: InertiaPair = InertiaPair { p: 1, q: 1 };

    pub fn new(p: usize, q: usize) -> Self {
        InertiaPair { p, q }
    }

    /// Componentwise `self <= other`.
    pub fn leq(&self, other: &InertiaPair) -> bool {
        self.p <= other.p && self.q <= other.q
    }

    pub fn total(&self) -> usize {
        self.p + self.q
    }
}

impl Add for InertiaPair {
    type Output = InertiaPair;

    fn add(self, o: InertiaPair) -> InertiaPair {
        InertiaPair::new(self.p + o.p, self.q + o.q)
    }
}

impl fmt::Display for InertiaPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl Serialize for InertiaPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.p, self.q].serialize(s)
    }
}

impl<'de> Deserialize<'de> for InertiaPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [p, q] = <[usize; 2]>::deserialize(d)?;
        Ok(InertiaPair { p, q })
    }
}

/// Partial inertia by symmetric Gaussian elimination.
///
/// Each step takes the nonzero diagonal pivot of largest absolute value
/// (lowest index on ties) and records its sign. When every remaining
/// diagonal entry is zero but the matrix is not, the off-diagonal entry with
/// the lowest `(row, col)` index becomes a 2x2 hyperbolic pivot contributing
/// `(1, 1)`.
pub fn pin(a: &SymMat) -> InertiaPair {
    let n = a.size();
    let mut w: Vec<Vec<Rat>> = (0..n).map(|i| a.as_matrix().row(i).to_vec()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut out = InertiaPair::ZERO;

    while !active.is_empty() {
        let mut best: Option<usize> = None;
        for &i in &active {
            let d = &w[i][i];
            if d.is_zero() {
                continue;
            }
            if best.is_none_or(|b| d.abs() > w[b][b].abs()) {
                best = Some(i);
            }
        }
        if let Some(k) = best {
            let pivot = w[k][k].clone();
            if pivot.is_positive() {
                out.p += 1;
            } else {
                out.q += 1;
            }
            active.retain(|&i| i != k);
            for &i in &active {
                if w[i][k].is_zero() {
                    continue;
                }
                let f = &w[i][k] / &pivot;
                for &j in &active {
                    if j < i || w[k][j].is_zero() {
                        continue;
                    }
                    let delta = &f * &w[k][j];
                    w[i][j] -= delta;
                    if i != j {
                        w[j][i] = w[i][j].clone();
                    }
                }
            }
            continue;
        }

        // All-zero diagonal: hyperbolic step on the first nonzero off-diagonal entry.
        let mut hit = None;
        'search: for (x, &i) in active.iter().enumerate() {
            for &j in &active[x + 1..] {
                if !w[i][j].is_zero() {
                    hit = Some((i.min(j), i.max(j)));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = hit else { break };
        let a_ij = w[i][j].clone();
        out.p += 1;
        out.q += 1;
        active.retain(|&r| r != i && r != j);
        let ci: Vec<Rat> = active.iter().map(|&r| w[r][i].clone()).collect();
        let cj: Vec<Rat> = active.iter().map(|&r| w[r][j].clone()).collect();
        for (x, &r) in active.iter().enumerate() {
            for (y, &s) in active.iter().enumerate().skip(x) {
                let t = &ci[x] * &cj[y] + &cj[x] * &ci[y];
                if t.is_zero() {
                    continue;
                }
                w[r][s] -= t / &a_ij;
                if r != s {
                    w[s][r] = w[r][s].clone();
                }
            }
        }
    }
    out
}

/// `Pᵀ A P`.
pub fn congruence(a: &SymMat, p: &Matrix) -> Result<SymMat> {
    if p.rows() != a.size() {
        return Err(Error::DimensionMismatch(format!(
            "P has {} rows, A has size {}",
            p.rows(),
            a.size()
        )));
    }
    let ap = a.as_matrix().mul(p)?;
    let b = p.transpose().mul(&ap)?;
    SymMat::new(b)
}

pub fn direct_sum(a: &SymMat, b: &SymMat) -> SymMat {
    let (m, n) = (a.size(), b.size());
    let mut out = Matrix::zeros(m + n, m + n);
    out.put(0, 0, a.as_matrix());
    out.put(m, m, b.as_matrix());
    SymMat(out)
}

/// `A ⊕ₖ B`: the trailing `k x k` block of `A` overlaps the leading `k x k`
/// block of `B` and the overlap entries are added.
pub fn subdirect_sum(a: &SymMat, b: &SymMat, k: usize) -> Result<SymMat> {
    let (m, n) = (a.size(), b.size());
    if k > m.min(n) {
        return Err(Error::OverlapTooLarge { k, left: m, right: n });
    }
    let size = m + n - k;
    let mut out = Matrix::zeros(size, size);
    out.put(0, 0, a.as_matrix());
    let off = m - k;
    for i in 0..n {
        for j in 0..n {
            let x = &out[(off + i, off + j)] + &b[(i, j)];
            out.set(off + i, off + j, x);
        }
    }
    Ok(SymMat(out))
}

/// Removes row and column `j` (zero-based).
pub fn principal_delete(a: &SymMat, j: usize) -> Result<SymMat> {
    if j >= a.size() {
        return Err(Error::IndexOutOfRange { index: j, size: a.size() });
    }
    let keep: Vec<usize> = (0..a.size()).filter(|&i| i != j).collect();
    Ok(a.principal(&keep))
}

pub fn entry_allowed(x: &Rat, profile: EdgeProfile) -> bool {
    match x.cmp(&Rat::zero()) {
        Ordering::Greater => profile.allows_positive(),
        Ordering::Less => profile.allows_negative(),
        Ordering::Equal => profile.allows_zero(),
    }
}

/// Whether `A` belongs to the matrix class of `g`.
pub fn membership(a: &SymMat, g: &SignedGraph) -> Result<bool> {
    if a.size() != g.vertex_count() {
        return Err(Error::DimensionMismatch(format!(
            "matrix size {} vs {} vertices",
            a.size(),
            g.vertex_count()
        )));
    }
    Ok(first_violation(a, g).is_none())
}

/// First `(i, j)` (zero-based, `i <= j`) whose entry the profile forbids.
pub fn first_violation(a: &SymMat, g: &SignedGraph) -> Option<(usize, usize)> {
    let t = g.profile_table();
    (0..a.size())
        .flat_map(|i| (i..a.size()).map(move |j| (i, j)))
        .find(|&(i, j)| !entry_allowed(&a[(i, j)], t[i][j]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SignChoice {
    Neg,
    Zero,
    Pos,
}

impl SignChoice {
    pub const ALL: [SignChoice; 3] = [SignChoice::Neg, SignChoice::Zero, SignChoice::Pos];

    pub fn allowed_by(self, profile: EdgeProfile) -> bool {
        match self {
            SignChoice::Neg => profile.allows_negative(),
            SignChoice::Zero => profile.allows_zero(),
            SignChoice::Pos => profile.allows_positive(),
        }
    }
}

/// Sign choices for individual positions, keyed by zero-based `(i, j)` with
/// `i <= j`. Positions not listed follow their profile; `Both` positions
/// without a choice draw a random sign.
pub type SignBranch = BTreeMap<(usize, usize), SignChoice>;

/// `{±1, ±2, ±1/2, ±3}`.
pub fn default_pool() -> Vec<Rat> {
    let mut v = Vec::new();
    for x in [int(1), int(2), frac(1, 2), int(3)] {
        v.push(-x.clone());
        v.push(x);
    }
    v
}

/// Draws a member of the class of `g` with entries from `pool`.
pub fn sample(g: &SignedGraph, pool: &[Rat], branch: &SignBranch, seed: u64) -> Result<SymMat> {
    let pos: Vec<&Rat> = pool.iter().filter(|x| x.is_positive()).collect();
    let neg: Vec<&Rat> = pool.iter().filter(|x| x.is_negative()).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::BadPool);
    }
    let n = g.vertex_count();
    let t = g.profile_table();
    for (&(i, j), &c) in branch {
        if i > j || j >= n {
            return Err(Error::IndexOutOfRange { index: j, size: n });
        }
        if !c.allowed_by(t[i][j]) {
            return Err(Error::UnsatisfiableBranch(i, j));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = SymMat::zeros(n);
    for i in 0..n {
        for j in i..n {
            let prof = t[i][j];
            let choice = match branch.get(&(i, j)) {
                Some(&c) => c,
                None => match prof {
                    EdgeProfile::None => SignChoice::Zero,
                    EdgeProfile::OddOnly => SignChoice::Pos,
                    EdgeProfile::EvenOnly => SignChoice::Neg,
                    EdgeProfile::Both => SignChoice::ALL[rng.gen_range(0..3)],
                },
            };
            let x = match choice {
                SignChoice::Zero => Rat::zero(),
                SignChoice::Pos => (*pos.choose(&mut rng).expect("nonempty")).clone(),
                SignChoice::Neg => (*neg.choose(&mut rng).expect("nonempty")).clone(),
            };
            a.set_sym(i, j, x);
        }
    }
    Ok(a)
}
