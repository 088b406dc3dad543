//! Constructive congruences between symmetric matrices.
//!
//! Every operation returns explicit transform matrices together with the
//! transformed matrix, and each [`ArrowWitness`] re-checks `Pᵀ A P = B`
//! exactly when it is built.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeProfile, SignedGraph, Separation};
use crate::matrix::{
    congruence, direct_sum, entry_allowed, first_violation, int, membership, subdirect_sum, Matrix, Rat,
    SymMat,
};

/// `source → target` via `forwardᵀ · source · forward = target`, and the
/// reverse arrow when `reverse` is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowWitness {
    pub source: SymMat,
    pub target: SymMat,
    pub forward: Matrix,
    pub reverse: Option<Matrix>,
}

impl ArrowWitness {
    pub fn new(source: SymMat, target: SymMat, forward: Matrix, reverse: Option<Matrix>) -> Result<Self> {
        let w = ArrowWitness {
            source,
            target,
            forward,
            reverse,
        };
        w.verify()?;
        Ok(w)
    }

    pub fn verify(&self) -> Result<()> {
        let fwd = congruence(&self.source, &self.forward)?;
        if fwd != self.target {
            return Err(Error::IdentityFailed("forward congruence".into()));
        }
        if let Some(rev) = &self.reverse {
            if congruence(&self.target, rev)? != self.source {
                return Err(Error::IdentityFailed("reverse congruence".into()));
            }
        }
        Ok(())
    }

    pub fn is_equivalence(&self) -> bool {
        self.reverse.is_some()
    }

    /// `self` followed by `next`; `next.source` must equal `self.target`.
    pub fn then(&self, next: &ArrowWitness) -> Result<ArrowWitness> {
        if self.target != next.source {
            return Err(Error::IdentityFailed("arrows do not chain".into()));
        }
        let forward = self.forward.mul(&next.forward)?;
        let reverse = match (&self.reverse, &next.reverse) {
            (Some(a), Some(b)) => Some(b.mul(a)?),
            _ => None,
        };
        ArrowWitness::new(self.source.clone(), next.target.clone(), forward, reverse)
    }
}

/// `P` with `Pᵀ A P = A.permuted(order)`.
pub fn permutation_matrix(order: &[usize]) -> Matrix {
    let n = order.len();
    let mut p = Matrix::zeros(n, n);
    for (a, &o) in order.iter().enumerate() {
        p.set(o, a, Rat::one());
    }
    p
}

/// `A ↔ A.permuted(order)`.
pub fn permute_arrow(a: &SymMat, order: &[usize]) -> Result<ArrowWitness> {
    let p = permutation_matrix(order);
    let back = p.transpose();
    ArrowWitness::new(a.clone(), a.permuted(order), p, Some(back))
}

/// `A → A₁₁`, deleting the last row and column.
pub fn vertex_delete_arrow(a: &SymMat) -> Result<ArrowWitness> {
    let n = a.size();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut p = Matrix::zeros(n, n - 1);
    p.put(0, 0, &Matrix::identity(n - 1));
    let keep: Vec<usize> = (0..n - 1).collect();
    ArrowWitness::new(a.clone(), a.principal(&keep), p, None)
}

/// Deletes index `j` by congruence with the identity minus column `j`.
pub fn index_delete_arrow(a: &SymMat, j: usize) -> Result<ArrowWitness> {
    let n = a.size();
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, size: n });
    }
    let keep: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    let p = Matrix::identity(n).select(&(0..n).collect::<Vec<_>>(), &keep);
    ArrowWitness::new(a.clone(), a.principal(&keep), p, None)
}

/// `A₁₁ ⊕ H → A` for the bordered matrix `A = [[A₁₁, A₂₁ᵀ], [A₂₁, a₂₂]]`.
pub fn vertex_embed_arrow(a11: &SymMat, a21: &[Rat], a22: &Rat) -> Result<ArrowWitness> {
    let k = a11.size();
    if a21.len() != k {
        return Err(Error::DimensionMismatch(format!("border of length {} for a {k}x{k} block", a21.len())));
    }
    let source = direct_sum(a11, &SymMat::hyperbolic());
    let mut target = Matrix::zeros(k + 1, k + 1);
    target.put(0, 0, a11.as_matrix());
    for (j, x) in a21.iter().enumerate() {
        target.set(k, j, x.clone());
        target.set(j, k, x.clone());
    }
    target.set(k, k, a22.clone());
    let mut p = Matrix::zeros(k + 2, k + 1);
    p.put(0, 0, &Matrix::identity(k));
    p.set(k, k, Rat::one());
    for (j, x) in a21.iter().enumerate() {
        p.set(k + 1, j, x.clone());
    }
    p.set(k + 1, k, a22 / int(2));
    ArrowWitness::new(source, SymMat::new(target)?, p, None)
}

/// `A ⊕ B → A ⊕ₖ B`.
pub fn subdirect_arrow(a: &SymMat, b: &SymMat, k: usize) -> Result<ArrowWitness> {
    let (m, n) = (a.size(), b.size());
    let target = subdirect_sum(a, b, k)?;
    let size = m + n - k;
    let mut p = Matrix::zeros(m + n, size);
    p.put(0, 0, &Matrix::identity(m));
    p.put(m, m - k, &Matrix::identity(n));
    ArrowWitness::new(direct_sum(a, b), target, p, None)
}

/// Result of splitting off a hyperbolic block.
#[derive(Clone, Debug)]
pub struct HyperbolicReduction {
    /// `M ↔ H ⊕ rest`.
    pub witness: ArrowWitness,
    pub rest: SymMat,
}

/// `M ↔ H ⊕ B₂₂` for `m₁₁ = 0`, `m₁₂ = a ≠ 0`.
///
/// When the first row carries further nonzeros they are first cleared
/// against the second column, so that the matrix has the bordered shape
/// `[[0, a, 0], [a, b₁₁, B₁₂], [0, B₂₁, B₂₂]]`.
pub fn hyperbolic_reduce(m: &SymMat) -> Result<HyperbolicReduction> {
    let n = m.size();
    if n < 2 {
        return Err(Error::MalformedPartition("need at least two rows".into()));
    }
    if !m[(0, 0)].is_zero() {
        return Err(Error::MalformedPartition("leading entry must be zero".into()));
    }
    let a = m[(0, 1)].clone();
    if a.is_zero() {
        return Err(Error::ZeroPivot);
    }
    let mut clear = Matrix::identity(n);
    for j in 2..n {
        clear.set(1, j, -(&m[(0, j)] / &a));
    }
    let shaped = congruence(m, &clear)?;
    let b11 = shaped[(1, 1)].clone();
    let mut p = Matrix::identity(n);
    p.set(0, 0, a.recip());
    p.set(0, 1, -(&b11 / (int(2) * &a)));
    for j in 2..n {
        p.set(0, j, -(&shaped[(1, j)] / &a));
    }
    let forward = clear.mul(&p)?;
    let reverse = forward.inverse().ok_or(Error::IdentityFailed("transform is singular".into()))?;
    let tail: Vec<usize> = (2..n).collect();
    let rest = shaped.principal(&tail);
    let target = direct_sum(&SymMat::hyperbolic(), &rest);
    let witness = ArrowWitness::new(m.clone(), target, forward, Some(reverse))?;
    Ok(HyperbolicReduction { witness, rest })
}

/// Bordering `[[A, B], [Bᵀ, C]]` (leading block `k x k`) by the row
/// `(0, (Bx)ᵀ, 0)` for `x ∈ ker C`; the two matrices are congruent both ways.
pub fn adjoin(m: &SymMat, k: usize, x: &[Rat]) -> Result<ArrowWitness> {
    let n = m.size();
    if k > n || x.len() != n - k {
        return Err(Error::DimensionMismatch(format!(
            "kernel vector of length {} for a trailing block of size {}",
            x.len(),
            n.saturating_sub(k)
        )));
    }
    let head: Vec<usize> = (0..k).collect();
    let tail: Vec<usize> = (k..n).collect();
    let c = m.as_matrix().select(&tail, &tail);
    if c.mul_vec(x).iter().any(|v| !v.is_zero()) {
        return Err(Error::NotInKernel);
    }
    let b = m.as_matrix().select(&head, &tail);
    let bx = b.mul_vec(x);
    let mut bordered = Matrix::zeros(n + 1, n + 1);
    bordered.put(1, 1, m.as_matrix());
    for (i, v) in bx.iter().enumerate() {
        bordered.set(0, 1 + i, v.clone());
        bordered.set(1 + i, 0, v.clone());
    }
    let mut p = Matrix::zeros(n, n + 1);
    p.put(0, 1, &Matrix::identity(n));
    for (i, v) in x.iter().enumerate() {
        p.set(k + i, 0, v.clone());
    }
    let mut back = Matrix::zeros(n + 1, n);
    back.put(1, 0, &Matrix::identity(n));
    ArrowWitness::new(m.clone(), SymMat::new(bordered)?, p, Some(back))
}

fn check_partition(a: &SymMat, k: usize, m: usize) -> Result<()> {
    let n = a.size();
    if k + m > n {
        return Err(Error::MalformedPartition(format!("k + m = {} exceeds size {n}", k + m)));
    }
    for i in 0..k {
        for j in k + m..n {
            if !a[(i, j)].is_zero() {
                return Err(Error::MalformedPartition(format!("corner entry ({i}, {j}) is nonzero")));
            }
        }
    }
    Ok(())
}

/// Outcome of the split-or-border alternative for a three-block matrix.
#[derive(Clone, Debug)]
pub enum Alternative {
    /// `A ↔ left ⊕ right` with `A₁₁ Y = A₁₂`.
    Split {
        y: Matrix,
        left: SymMat,
        right: SymMat,
        witness: ArrowWitness,
    },
    /// `A ↔ bordered`, the border row being `(0, 0, zᵀ, 0)` with
    /// `z = [A₂₁ A₂₃] u ≠ 0` for `u ∈ ker(A₁₁ ⊕ A₃₃)`.
    Border {
        u: Vec<Rat>,
        z: Vec<Rat>,
        bordered: SymMat,
        witness: ArrowWitness,
    },
}

/// Decides, for `A = [[A₁₁, A₁₂, 0], [A₂₁, A₂₂, A₂₃], [0, A₃₂, A₃₃]]` with
/// `A₁₁` of size `k` and `A₂₂` of size `m`, which alternative applies.
///
/// The kernel of `A₁₁ ⊕ A₃₃` is computed exactly; if `[A₂₁ A₂₃]`
/// annihilates it the split is produced, otherwise the first kernel basis
/// vector with nonzero image gives the border.
pub fn alternative_decide(a: &SymMat, k: usize, m: usize) -> Result<Alternative> {
    check_partition(a, k, m)?;
    let n = a.size();
    let outer: Vec<usize> = (0..k).chain(k + m..n).collect();
    let mid: Vec<usize> = (k..k + m).collect();
    let d = a.as_matrix().select(&outer, &outer);
    let link = a.as_matrix().select(&mid, &outer);

    for u in d.kernel_basis() {
        let z = link.mul_vec(&u);
        if z.iter().any(|v| !v.is_zero()) {
            let mut full = vec![Rat::zero(); n];
            for (pos, &idx) in outer.iter().enumerate() {
                full[idx] = u[pos].clone();
            }
            let mut forward = Matrix::zeros(n, n + 1);
            forward.put(0, 1, &Matrix::identity(n));
            for (i, v) in full.iter().enumerate() {
                forward.set(i, 0, v.clone());
            }
            let bordered = congruence(a, &forward)?;
            let mut back = Matrix::zeros(n + 1, n);
            back.put(1, 0, &Matrix::identity(n));
            let witness = ArrowWitness::new(a.clone(), bordered.clone(), forward, Some(back))?;
            return Ok(Alternative::Border {
                u: full,
                z,
                bordered,
                witness,
            });
        }
    }

    let head: Vec<usize> = (0..k).collect();
    let a11 = a.as_matrix().select(&head, &head);
    let a12 = a.as_matrix().select(&head, &mid);
    let y = a11
        .solve(&a12)
        .ok_or_else(|| Error::IdentityFailed("A11 Y = A12 has no solution".into()))?;
    let yay = y.transpose().mul(&a11.mul(&y)?)?;

    let mut left = Matrix::zeros(k + m, k + m);
    left.put(0, 0, &a.as_matrix().select(&(0..k + m).collect::<Vec<_>>(), &(0..k + m).collect::<Vec<_>>()));
    left.put(k, k, &yay);
    let right_idx: Vec<usize> = (k..n).collect();
    let mut right = a.as_matrix().select(&right_idx, &right_idx);
    let a22 = a.as_matrix().select(&mid, &mid);
    right.put(0, 0, &a22.sub(&yay)?);
    let left = SymMat::new(left)?;
    let right = SymMat::new(right)?;

    // P = [[I_k, Y, -Y, 0], [0, 0, I_m, 0], [0, 0, 0, I]]
    let rest = n - k - m;
    let mut forward = Matrix::zeros(n, n + m);
    forward.put(0, 0, &Matrix::identity(k));
    forward.put(0, k, &y);
    forward.put(0, k + m, &y.scale(&int(-1)));
    forward.put(k, k + m, &Matrix::identity(m));
    forward.put(k + m, k + 2 * m, &Matrix::identity(rest));
    let back = subdirect_arrow(&left, &right, m)?.forward;
    let witness = ArrowWitness::new(a.clone(), direct_sum(&left, &right), forward, Some(back))?;
    Ok(Alternative::Split { y, left, right, witness })
}

/// The two cases for a matrix whose middle block is a single row.
#[derive(Clone, Debug)]
pub enum OneSum {
    /// `A ↔ left ⊕ right` with the middle diagonal split as
    /// `xᵀA₁₁x` and `a₂₂ - xᵀA₁₁x`.
    Split {
        x: Vec<Rat>,
        left: SymMat,
        right: SymMat,
        witness: ArrowWitness,
    },
    /// `A ↔ A₁₁ ⊕ A₃₃ ⊕ H`.
    Hyperbolic { witness: ArrowWitness },
}

impl OneSum {
    pub fn witness(&self) -> &ArrowWitness {
        match self {
            OneSum::Split { witness, .. } | OneSum::Hyperbolic { witness } => witness,
        }
    }
}

/// Splits `A` around the single index `k` (zero-based), which separates a
/// leading `k x k` block from a trailing block with zero corners.
pub fn one_sum_decide(a: &SymMat, k: usize) -> Result<OneSum> {
    match alternative_decide(a, k, 1)? {
        Alternative::Split { y, left, right, witness } => Ok(OneSum::Split {
            x: y.col(0),
            left,
            right,
            witness,
        }),
        Alternative::Border { bordered, witness, .. } => {
            let n = a.size();
            // bordered order: new, block 1 (1..=k), middle (k+1), block 3
            let mut order = vec![0, k + 1];
            order.extend(1..=k);
            order.extend(k + 2..=n);
            let perm = permute_arrow(&bordered, &order)?;
            let hyp = hyperbolic_reduce(&perm.target)?;
            let size = n + 1;
            let mut back: Vec<usize> = (2..size).collect();
            back.extend([0, 1]);
            let last = permute_arrow(&hyp.witness.target, &back)?;
            let chained = witness.then(&perm)?.then(&hyp.witness)?.then(&last)?;
            Ok(OneSum::Hyperbolic { witness: chained })
        }
    }
}

/// A member of the class of `G` written as a 1-sum of members of the two
/// sides of a separation.
#[derive(Clone, Debug, Serialize)]
pub struct OneSumSplit {
    /// Side-1 matrix, cut vertex last.
    #[serde(skip)]
    pub b: SymMat,
    /// Side-2 matrix, cut vertex first.
    #[serde(skip)]
    pub c: SymMat,
    #[serde(serialize_with = "ser_rat")]
    pub b_vv: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub c_vv: Rat,
    /// Zero-based parent indices in `b ⊕₁ c` order.
    pub order: Vec<usize>,
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// How the cut-vertex diagonal entry `a` is shared between the two sides,
/// given the loop profiles of each side at the cut vertex.
pub fn split_diagonal(a: &Rat, side1: EdgeProfile, side2: EdgeProfile) -> (Rat, Rat) {
    let zero = Rat::zero();
    let one = Rat::one();
    if a.is_positive() || a.is_negative() {
        let positive = a.is_positive();
        let has = |p: EdgeProfile| if positive { p.has_odd() } else { p.has_even() };
        // the opposite-signed fallback when zero is not allowed
        let off = if positive { -one.clone() } else { one.clone() };
        if has(side1) && has(side2) {
            let half = a / int(2);
            return (half.clone(), half);
        }
        if has(side1) {
            let c = if side2.allows_zero() { zero } else { off };
            return (a - &c, c);
        }
        let b = if side1.allows_zero() { zero } else { off };
        let c = a - &b;
        return (b, c);
    }
    use EdgeProfile::*;
    match (side1, side2) {
        (OddOnly, _) => (one.clone(), -one),
        (EvenOnly, _) => (-one.clone(), one),
        (Both, OddOnly) => (-one.clone(), one),
        (Both, EvenOnly) => (one.clone(), -one),
        _ => (zero.clone(), zero),
    }
}

/// Writes `A ∈ S(G)` as `B ⊕₁ C` with `B`, `C` in the classes of the two
/// sides of `sep`.
pub fn split_1sep(a: &SymMat, g: &SignedGraph, sep: &Separation) -> Result<OneSumSplit> {
    if !membership(a, g)? {
        let (i, j) = first_violation(a, g).unwrap_or_default();
        return Err(Error::NotMember(format!("entry ({}, {})", i + 1, j + 1)));
    }
    let g1 = sep.graph1(g);
    let g2 = sep.graph2(g);
    let n1 = g1.vertex_count();
    let order: Vec<usize> = sep.merged_order().iter().map(|w| w - 1).collect();
    let pa = a.permuted(&order);
    let v = n1 - 1;
    let (b_vv, c_vv) = split_diagonal(&pa[(v, v)], g1.profile_unchecked(n1, n1), g2.profile_unchecked(1, 1));
    let mut b = pa.principal(&(0..n1).collect::<Vec<_>>());
    b.set_sym(v, v, b_vv.clone());
    let mut c = pa.principal(&(v..pa.size()).collect::<Vec<_>>());
    c.set_sym(0, 0, c_vv.clone());
    if subdirect_sum(&b, &c, 1)? != pa {
        return Err(Error::IdentityFailed("B ⊕₁ C differs from A".into()));
    }
    if !membership(&b, &g1)? || !membership(&c, &g2)? {
        return Err(Error::NotMember("split summand".into()));
    }
    Ok(OneSumSplit {
        b,
        c,
        b_vv,
        c_vv,
        order,
    })
}

/// `αC ⊕₁ D` with the overlap entry's sign permitted by `loop_profile`.
#[derive(Clone, Debug)]
pub struct Composition {
    pub alpha: Rat,
    pub matrix: SymMat,
}

/// Glues `C` (cut vertex last) and `D` (cut vertex first) at the cut
/// vertex, scaling `C` by a positive `α` chosen so that the overlap
/// diagonal `α c + d` has a sign allowed by the parent's loops at the cut.
///
/// `α = 1` whenever it works. Otherwise, when `c d < 0` and `t = -d/c`:
/// the sign of `c` is reached by the smallest integer above `t`, the sign of
/// `d` by `t/2`, and zero by `t` itself, tried in that order.
pub fn compose_term(c: &SymMat, d: &SymMat, loop_profile: EdgeProfile) -> Result<Composition> {
    if c.size() == 0 || d.size() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let cv = c[(c.size() - 1, c.size() - 1)].clone();
    let dv = d[(0, 0)].clone();
    let ok = |alpha: &Rat| entry_allowed(&(alpha * &cv + &dv), loop_profile);
    let mut alpha = Rat::one();
    if !ok(&alpha) {
        if (&cv * &dv).is_negative() {
            let t = -(&dv / &cv);
            let above = t.floor() + Rat::one();
            let below = if t > Rat::one() { Rat::one() } else { &t / int(2) };
            alpha = [above, below, t]
                .into_iter()
                .find(|x| ok(x))
                .ok_or(Error::NoRealizableSign)?;
        } else {
            return Err(Error::NoRealizableSign);
        }
    }
    let matrix = subdirect_sum(&c.scale(&alpha), d, 1)?;
    Ok(Composition { alpha, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{frac, pin, InertiaPair};

    fn intro() -> SymMat {
        SymMat::from_i64(&[&[0, 1, 0], &[1, 0, -2], &[0, -2, -3]])
    }

    #[test]
    fn vertex_delete_examples() {
        assert_eq!(vertex_delete_arrow(&intro()).unwrap().target, SymMat::hyperbolic());
        assert_eq!(vertex_delete_arrow(&SymMat::from_i64(&[&[4]])).unwrap().target, SymMat::empty());
        assert_eq!(vertex_delete_arrow(&SymMat::hyperbolic()).unwrap().target, SymMat::zeros(1));
        assert_eq!(vertex_delete_arrow(&SymMat::empty()), Err(Error::EmptyMatrix));
    }

    #[test]
    fn vertex_embed_examples() {
        // P = [[1, 0], [0, 1], [2, 3]]; Pᵀ diag(1, H) P = [[1, 2], [2, 6]]
        let w = vertex_embed_arrow(&SymMat::from_i64(&[&[1]]), &[int(2)], &int(6)).unwrap();
        assert_eq!(w.target, SymMat::from_i64(&[&[1, 2], &[2, 6]]));
        assert_eq!(w.forward, Matrix::from_i64(&[&[1, 0], &[0, 1], &[2, 3]]));

        let w = vertex_embed_arrow(&SymMat::empty(), &[], &int(0)).unwrap();
        assert_eq!(w.source, SymMat::hyperbolic());
        assert_eq!(w.target, SymMat::zeros(1));

        let h = SymMat::hyperbolic();
        let w = vertex_embed_arrow(&h, &[int(0), int(0)], &int(0)).unwrap();
        assert_eq!(w.target, direct_sum(&h, &SymMat::zeros(1)));
        assert!(vertex_embed_arrow(&h, &[int(0)], &int(0)).is_err());
    }

    #[test]
    fn hyperbolic_examples() {
        let r = hyperbolic_reduce(&SymMat::hyperbolic()).unwrap();
        assert_eq!(r.rest, SymMat::empty());
        assert!(r.witness.is_equivalence());

        // det = -4 < 0, so the 2x2 block is indefinite
        let m = SymMat::from_i64(&[&[0, 2], &[2, 5]]);
        let r = hyperbolic_reduce(&m).unwrap();
        assert_eq!(r.witness.target, SymMat::hyperbolic());
        assert_eq!(pin(&m), InertiaPair::new(1, 1));

        let m = SymMat::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]);
        let r = hyperbolic_reduce(&m).unwrap();
        assert_eq!(r.rest, SymMat::from_i64(&[&[3]]));
        assert_eq!(pin(&m), InertiaPair::new(2, 1));

        assert_eq!(hyperbolic_reduce(&SymMat::zeros(2)).unwrap_err(), Error::ZeroPivot);
    }

    #[test]
    fn hyperbolic_clears_general_first_row() {
        let m = SymMat::from_i64(&[&[0, 2, 3], &[2, 1, 1], &[3, 1, -1]]);
        let r = hyperbolic_reduce(&m).unwrap();
        assert_eq!(pin(&m), InertiaPair::HYPERBOLIC + pin(&r.rest));
    }

    #[test]
    fn adjoin_examples() {
        // C nonsingular: only x = 0, border row vanishes
        let m = SymMat::from_i64(&[&[1, 2], &[2, 3]]);
        let w = adjoin(&m, 1, &[int(0)]).unwrap();
        assert!(w.target.as_matrix().row(0).iter().all(Zero::is_zero));
        assert_eq!(pin(&w.target), pin(&m));
        assert_eq!(w.target.size(), 3);

        let m = SymMat::from_i64(&[&[0, 1], &[1, 0]]);
        let w = adjoin(&m, 1, &[int(1)]).unwrap();
        assert_eq!(w.target, SymMat::from_i64(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]));
        assert_eq!(pin(&w.target), InertiaPair::new(1, 1));
        assert_eq!(pin(&m), InertiaPair::new(1, 1));

        let m = SymMat::from_i64(&[&[1, -1], &[-1, 1]]);
        let w = adjoin(&m, 0, &[int(1), int(1)]).unwrap();
        assert!(w.target.as_matrix().row(0).iter().all(Zero::is_zero));
        assert_eq!(pin(&w.target), pin(&m));

        assert_eq!(adjoin(&SymMat::from_i64(&[&[1, 2], &[2, 3]]), 1, &[int(1)]), Err(Error::NotInKernel));
    }

    #[test]
    fn alternative_examples() {
        let a = SymMat::diag(&[int(1), int(5)]);
        match alternative_decide(&a, 1, 1).unwrap() {
            Alternative::Split { y, left, right, .. } => {
                assert!(y.is_zero());
                assert_eq!(left, SymMat::from_i64(&[&[1, 0], &[0, 0]]));
                assert_eq!(right, SymMat::from_i64(&[&[5]]));
            }
            other => panic!("expected split, got {other:?}"),
        }

        match alternative_decide(&SymMat::hyperbolic(), 1, 1).unwrap() {
            Alternative::Border { z, .. } => assert_eq!(z, vec![int(1)]),
            other => panic!("expected border, got {other:?}"),
        }

        let a = SymMat::from_i64(&[&[1, 1, 0], &[1, 2, 1], &[0, 1, 1]]);
        match alternative_decide(&a, 1, 1).unwrap() {
            Alternative::Split { y, left, right, .. } => {
                assert_eq!(y, Matrix::from_i64(&[&[1]]));
                assert_eq!(left, SymMat::from_i64(&[&[1, 1], &[1, 1]]));
                assert_eq!(right, SymMat::from_i64(&[&[1, 1], &[1, 1]]));
            }
            other => panic!("expected split, got {other:?}"),
        }

        let bad = SymMat::from_i64(&[&[1, 0, 1], &[0, 1, 0], &[1, 0, 1]]);
        assert!(matches!(alternative_decide(&bad, 1, 1), Err(Error::MalformedPartition(_))));
    }

    #[test]
    fn one_sum_examples() {
        match one_sum_decide(&SymMat::hyperbolic(), 1).unwrap() {
            OneSum::Hyperbolic { witness } => {
                assert_eq!(witness.target, direct_sum(&SymMat::zeros(1), &SymMat::hyperbolic()));
                assert_eq!(pin(&witness.target), InertiaPair::new(1, 1));
            }
            other => panic!("expected hyperbolic case, got {other:?}"),
        }
        match one_sum_decide(&SymMat::diag(&[int(1), int(-1)]), 1).unwrap() {
            OneSum::Split { x, .. } => assert_eq!(x, vec![int(0)]),
            other => panic!("expected split, got {other:?}"),
        }
        // intro matrix around vertex 2: A11 = [0] is singular and A21 = 1,
        // so the border case applies: [0] ⊕ [-3] ⊕ H, pin (1, 2)
        let r = one_sum_decide(&intro(), 1).unwrap();
        let w = r.witness();
        assert!(matches!(r, OneSum::Hyperbolic { .. }));
        assert_eq!(
            w.target,
            direct_sum(&SymMat::diag(&[int(0), int(-3)]), &SymMat::hyperbolic())
        );
        assert_eq!(pin(&w.target), InertiaPair::new(1, 2));
    }

    fn sep_at(g: &SignedGraph, v: usize) -> Separation {
        g.find_1_separations().into_iter().find(|s| s.cut == v && s.is_vertex_reducing()).unwrap()
    }

    #[test]
    fn split_examples() {
        // a_vv = 0, no loops at v
        let g: SignedGraph = "n 3\ne 1 2 o\ne 2 3 o".parse().unwrap();
        let a = SymMat::from_i64(&[&[0, 1, 0], &[1, 0, 2], &[0, 2, 0]]);
        let s = split_1sep(&a, &g, &sep_at(&g, 2)).unwrap();
        assert_eq!((s.b_vv.clone(), s.c_vv.clone()), (int(0), int(0)));

        // a_vv > 0, odd loop at v only on side 1, side 2 loopless: c = 0
        let g: SignedGraph = "n 3\ne 1 2 o\ne 2 2 o\ne 2 3 o".parse().unwrap();
        let a = SymMat::from_i64(&[&[0, 1, 0], &[1, 4, 2], &[0, 2, 0]]);
        let s = split_1sep(&a, &g, &sep_at(&g, 2)).unwrap();
        assert_eq!((s.b_vv.clone(), s.c_vv.clone()), (int(4), int(0)));

        // side 2 carries only an even loop at v: c = -1, b = a + 1
        let g: SignedGraph = "n 3\ne 1 2 o\ne 2 3 o\ne 2 2 o\ne 2 2 e".parse().unwrap();
        let sep = Separation {
            cut: 2,
            side1: crate::graph::Side { vertices: vec![1, 2], edges: vec![0, 2] },
            side2: crate::graph::Side { vertices: vec![2, 3], edges: vec![1, 3] },
        };
        let a = SymMat::from_i64(&[&[0, 1, 0], &[1, 4, 2], &[0, 2, 0]]);
        let s = split_1sep(&a, &g, &sep).unwrap();
        assert_eq!((s.b_vv.clone(), s.c_vv.clone()), (int(5), int(-1)));

        // a_vv = 0 with both-parity loops on both sides
        let g: SignedGraph = "n 3\ne 1 2 o\ne 2 3 o\ne 2 2 o\ne 2 2 e\ne 2 2 o\ne 2 2 e".parse().unwrap();
        let sep = Separation {
            cut: 2,
            side1: crate::graph::Side { vertices: vec![1, 2], edges: vec![0, 2, 3] },
            side2: crate::graph::Side { vertices: vec![2, 3], edges: vec![1, 4, 5] },
        };
        let a = SymMat::from_i64(&[&[0, 1, 0], &[1, 0, 2], &[0, 2, 0]]);
        let s = split_1sep(&a, &g, &sep).unwrap();
        assert_eq!((s.b_vv.clone(), s.c_vv.clone()), (int(0), int(0)));

        // a member of a different class is rejected
        let g: SignedGraph = "n 3\ne 1 2 o\ne 2 3 o".parse().unwrap();
        let a = SymMat::from_i64(&[&[0, 1, 0], &[1, 3, 2], &[0, 2, 0]]);
        assert!(matches!(split_1sep(&a, &g, &sep_at(&g, 2)), Err(Error::NotMember(_))));
    }

    #[test]
    fn split_diagonal_table() {
        use EdgeProfile::*;
        assert_eq!(split_diagonal(&int(2), OddOnly, OddOnly), (int(1), int(1)));
        assert_eq!(split_diagonal(&int(2), None, Both), (int(0), int(2)));
        assert_eq!(split_diagonal(&int(-3), EvenOnly, EvenOnly), (frac(-3, 2), frac(-3, 2)));
        assert_eq!(split_diagonal(&int(-3), EvenOnly, OddOnly), (int(-4), int(1)));
        assert_eq!(split_diagonal(&int(0), OddOnly, EvenOnly), (int(1), int(-1)));
        assert_eq!(split_diagonal(&int(0), EvenOnly, Both), (int(-1), int(1)));
        assert_eq!(split_diagonal(&int(0), None, Both), (int(0), int(0)));
        assert_eq!(split_diagonal(&int(0), Both, OddOnly), (int(-1), int(1)));
        assert_eq!(split_diagonal(&int(0), Both, Both), (int(0), int(0)));
    }

    #[test]
    fn compose_examples() {
        // c = 1, d = -2, parent has only an odd loop: α - 2 > 0 needs α = 3
        let c = SymMat::from_i64(&[&[1]]);
        let d = SymMat::from_i64(&[&[-2]]);
        let r = compose_term(&c, &d, EdgeProfile::OddOnly).unwrap();
        assert_eq!(r.alpha, int(3));
        assert_eq!(r.matrix, SymMat::from_i64(&[&[1]]));

        let r = compose_term(&c, &SymMat::from_i64(&[&[1]]), EdgeProfile::OddOnly).unwrap();
        assert_eq!(r.alpha, int(1));
        assert_eq!(r.matrix, SymMat::from_i64(&[&[2]]));

        let z = SymMat::zeros(1);
        let r = compose_term(&z, &z, EdgeProfile::Both).unwrap();
        assert_eq!(r.alpha, int(1));
        assert_eq!(r.matrix, z);

        // sign of d: 4α - 1 < 0 needs α < 1/4, midpoint 1/8
        let r = compose_term(&SymMat::from_i64(&[&[4]]), &SymMat::from_i64(&[&[-1]]), EdgeProfile::EvenOnly).unwrap();
        assert_eq!(r.alpha, frac(1, 8));
        // only zero allowed: α = t
        let r = compose_term(&SymMat::from_i64(&[&[-2]]), &SymMat::from_i64(&[&[3]]), EdgeProfile::None).unwrap();
        assert_eq!(r.alpha, frac(3, 2));
        assert_eq!(r.matrix, SymMat::zeros(1));

        assert_eq!(
            compose_term(&SymMat::from_i64(&[&[1]]), &SymMat::from_i64(&[&[1]]), EdgeProfile::EvenOnly).unwrap_err(),
            Error::NoRealizableSign
        );
    }
}
