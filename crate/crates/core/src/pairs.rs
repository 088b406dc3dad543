//! Finite sets of inertia pairs and their minimal-pair algebra.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::matrix::InertiaPair;

/// Finite subset of ℕ², iterated in lexicographic `(p, q)` order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PairSet(BTreeSet<InertiaPair>);

impl FromIterator<InertiaPair> for PairSet {
    fn from_iter<I: IntoIterator<Item = InertiaPair>>(it: I) -> Self {
        PairSet(it.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a PairSet {
    type Item = &'a InertiaPair;
    type IntoIter = std::collections::btree_set::Iter<'a, InertiaPair>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl PairSet {
    pub fn new() -> Self {
        PairSet::default()
    }

    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        pairs.iter().map(|&(p, q)| InertiaPair::new(p, q)).collect()
    }

    pub fn singleton(p: InertiaPair) -> Self {
        PairSet(BTreeSet::from([p]))
    }

    pub fn insert(&mut self, p: InertiaPair) -> bool {
        self.0.insert(p)
    }

    pub fn contains(&self, p: &InertiaPair) -> bool {
        self.0.contains(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &InertiaPair> {
        self.0.iter()
    }

    pub fn minkowski_add(&self, other: &PairSet) -> PairSet {
        self.iter()
            .flat_map(|a| other.iter().map(move |b| *a + *b))
            .collect()
    }

    /// Pairs not strictly dominated by another member.
    pub fn minimal(&self) -> PairSet {
        self.iter()
            .filter(|a| !self.iter().any(|b| b != *a && b.leq(a)))
            .copied()
            .collect()
    }

    /// Every member of `self` dominates some member of `other`.
    pub fn leq(&self, other: &PairSet) -> bool {
        self.iter().all(|a| other.iter().any(|b| b.leq(a)))
    }

    pub fn cong(&self, other: &PairSet) -> bool {
        self.leq(other) && other.leq(self)
    }

    /// Members with `p + q <= n`.
    pub fn truncate_n(&self, n: usize) -> PairSet {
        self.iter().filter(|a| a.total() <= n).copied().collect()
    }

    pub fn union(&self, other: &PairSet) -> PairSet {
        self.iter().chain(other.iter()).copied().collect()
    }

    /// Some member `b <= a`, if any.
    pub fn dominated_member(&self, a: &InertiaPair) -> Option<InertiaPair> {
        self.iter().find(|b| b.leq(a)).copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pairs serialize")
    }

    /// ASCII staircase: `q` rows descending, `p` columns ascending, `*` on
    /// minimal pairs, `o` on other members, `.` elsewhere.
    pub fn grid(&self) -> String {
        let frontier = self.minimal();
        let pmax = self.iter().map(|a| a.p).max().unwrap_or(0);
        let qmax = self.iter().map(|a| a.q).max().unwrap_or(0);
        let width = pmax.max(qmax).to_string().len();
        let mut out = String::new();
        for q in (0..=qmax).rev() {
            out.push_str(&format!("{q:>width$} |"));
            for p in 0..=pmax {
                let a = InertiaPair::new(p, q);
                let c = if frontier.contains(&a) {
                    '*'
                } else if self.contains(&a) {
                    'o'
                } else {
                    '.'
                };
                out.push_str(&format!(" {c:>width$}"));
            }
            out.push('\n');
        }
        out.push_str(&format!("{:>width$}  ", ""));
        for p in 0..=pmax {
            out.push_str(&format!(" {p:>width$}"));
        }
        out.push('\n');
        out
    }
}

impl fmt::Display for PairSet {
    /// Space-separated `(p,q)` list; `{}` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}
