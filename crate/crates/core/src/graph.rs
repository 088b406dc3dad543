//! Signed multigraphs: vertices `1..=n`, a multiset of parity-labelled edges
//! (parallel edges and loops allowed), the text format, and 1-separations.
//!
//! Only the per-pair [`EdgeProfile`] matters for the matrix class a graph
//! describes; edge multiplicities are kept so that parsing and serializing are
//! faithful.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Parity {
    /// Permits a positive entry.
    Odd,
    /// Permits a negative entry.
    Even,
}

impl Parity {
    pub fn token(self) -> char {
        match self {
            Parity::Odd => 'o',
            Parity::Even => 'e',
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
        }
    }
}

/// An edge with `u <= v`; `u == v` is a loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub parity: Parity,
}

impl Edge {
    pub fn new(a: usize, b: usize, parity: Parity) -> Self {
        Edge {
            u: a.min(b),
            v: a.max(b),
            parity,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn touches(&self, w: usize) -> bool {
        self.u == w || self.v == w
    }
}

/// Which parities join a vertex pair, multiplicities collapsed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeProfile {
    None,
    EvenOnly,
    OddOnly,
    Both,
}

impl EdgeProfile {
    fn from_flags(odd: bool, even: bool) -> Self {
        match (odd, even) {
            (false, false) => EdgeProfile::None,
            (false, true) => EdgeProfile::EvenOnly,
            (true, false) => EdgeProfile::OddOnly,
            (true, true) => EdgeProfile::Both,
        }
    }

    pub fn has_odd(self) -> bool {
        matches!(self, EdgeProfile::OddOnly | EdgeProfile::Both)
    }

    pub fn has_even(self) -> bool {
        matches!(self, EdgeProfile::EvenOnly | EdgeProfile::Both)
    }

    pub fn allows_positive(self) -> bool {
        self.has_odd()
    }

    pub fn allows_negative(self) -> bool {
        self.has_even()
    }

    pub fn allows_zero(self) -> bool {
        matches!(self, EdgeProfile::None | EdgeProfile::Both)
    }

    /// Profile after adding one edge of the given parity.
    pub fn with(self, parity: Parity) -> Self {
        match parity {
            Parity::Odd => EdgeProfile::from_flags(true, self.has_even()),
            Parity::Even => EdgeProfile::from_flags(self.has_odd(), true),
        }
    }

    /// Profile of the union of two edge multisets.
    pub fn union(self, other: EdgeProfile) -> Self {
        EdgeProfile::from_flags(
            self.has_odd() || other.has_odd(),
            self.has_even() || other.has_even(),
        )
    }
}

/// Canonical memo key: vertex count plus the upper-triangular profile table
/// under the identity labelling.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProfileKey {
    pub n: usize,
    pub profiles: Vec<EdgeProfile>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SignedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl PartialEq for SignedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for SignedGraph {}

impl SignedGraph {
    pub fn new(n: usize) -> Self {
        SignedGraph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, Parity)>) -> Result<Self> {
        let mut g = SignedGraph::new(n);
        for (a, b, p) in edges {
            g.add_edge(a, b, p)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize, parity: Parity) -> Result<()> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        self.edges.push(Edge::new(a, b, parity));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut e = self.edges.clone();
        e.sort();
        e
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    pub fn edge_profile(&self, u: usize, v: usize) -> Result<EdgeProfile> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.profile_unchecked(u, v))
    }

    pub(crate) fn profile_unchecked(&self, u: usize, v: usize) -> EdgeProfile {
        let (a, b) = (u.min(v), u.max(v));
        let mut odd = false;
        let mut even = false;
        for e in self.edges.iter().filter(|e| e.u == a && e.v == b) {
            match e.parity {
                Parity::Odd => odd = true,
                Parity::Even => even = true,
            }
        }
        EdgeProfile::from_flags(odd, even)
    }

    /// Dense `n x n` profile table indexed from zero.
    pub fn profile_table(&self) -> Vec<Vec<EdgeProfile>> {
        let mut t = vec![vec![EdgeProfile::None; self.n]; self.n];
        for e in &self.edges {
            let (i, j) = (e.u - 1, e.v - 1);
            t[i][j] = t[i][j].with(e.parity);
            t[j][i] = t[i][j];
        }
        t
    }

    pub fn profile_key(&self) -> ProfileKey {
        let t = self.profile_table();
        let mut profiles = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for (i, row) in t.iter().enumerate() {
            profiles.extend_from_slice(&row[i..]);
        }
        ProfileKey { n: self.n, profiles }
    }

    /// Removes `v` and its incident edges; higher labels shift down by one.
    pub fn delete_vertex(&self, v: usize) -> Result<SignedGraph> {
        self.check_vertex(v)?;
        let shift = |w: usize| if w > v { w - 1 } else { w };
        let edges = self
            .edges
            .iter()
            .filter(|e| !e.touches(v))
            .map(|e| Edge::new(shift(e.u), shift(e.v), e.parity))
            .collect();
        Ok(SignedGraph { n: self.n - 1, edges })
    }

    /// Adds one loop of parity `p` at `v`.
    pub fn augment_loop(&self, v: usize, p: Parity) -> Result<SignedGraph> {
        self.check_vertex(v)?;
        let mut g = self.clone();
        g.edges.push(Edge::new(v, v, p));
        Ok(g)
    }

    /// Subgraph on `order` (original labels), relabelled so that `order[i]`
    /// becomes `i + 1`, keeping the listed edges only.
    pub fn subgraph(&self, order: &[usize], edge_indices: &[usize]) -> SignedGraph {
        let mut label = vec![0usize; self.n + 1];
        for (i, &w) in order.iter().enumerate() {
            label[w] = i + 1;
        }
        let edges = edge_indices
            .iter()
            .map(|&k| {
                let e = self.edges[k];
                debug_assert!(label[e.u] > 0 && label[e.v] > 0);
                Edge::new(label[e.u], label[e.v], e.parity)
            })
            .collect();
        SignedGraph {
            n: order.len(),
            edges,
        }
    }

    /// Subgraph induced by `order`, relabelled as in [`SignedGraph::subgraph`].
    pub fn induced(&self, order: &[usize]) -> SignedGraph {
        let inside: BTreeSet<usize> = order.iter().copied().collect();
        let idx: Vec<usize> = (0..self.edges.len())
            .filter(|&k| inside.contains(&self.edges[k].u) && inside.contains(&self.edges[k].v))
            .collect();
        self.subgraph(order, &idx)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        adj
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_without(None)
    }

    fn components_without(&self, removed: Option<usize>) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n + 1];
        if let Some(r) = removed {
            seen[r] = true;
        }
        let mut out = Vec::new();
        for s in 1..=self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// All proper 1-separations, ordered by cut vertex and then by side
    /// assignment. Within one cut vertex the parts are the components of
    /// `G - v` (by smallest vertex) followed by the loops at `v` (by edge
    /// index); the first part always lies in the first side and the
    /// remaining parts are assigned by ascending bitmask. Separations that
    /// produce identical sides (parallel loops) are reported once.
    pub fn find_1_separations(&self) -> Vec<Separation> {
        let mut out = Vec::new();
        for v in 1..=self.n {
            let mut seen = BTreeSet::new();
            for sep in self.separations_at(v) {
                let key = (sep.side1.clone(), sep.side2.clone(), self.side_signature(&sep));
                if seen.insert(key) {
                    out.push(sep);
                }
            }
        }
        out
    }

    fn side_signature(&self, sep: &Separation) -> (Vec<Edge>, Vec<Edge>) {
        let sig = |side: &Side| {
            let mut e: Vec<Edge> = side.edges.iter().map(|&k| self.edges[k]).collect();
            e.sort();
            e
        };
        (sig(&sep.side1), sig(&sep.side2))
    }

    fn separations_at(&self, v: usize) -> impl Iterator<Item = Separation> + '_ {
        let comps = self.components_without(Some(v));
        let loops: Vec<usize> = (0..self.edges.len())
            .filter(|&k| self.edges[k].u == v && self.edges[k].v == v)
            .collect();
        let parts = comps.len() + loops.len();
        let masks = if parts >= 2 { 1u64..(1u64 << (parts - 1)) } else { 0..0 };
        masks.map(move |mask| {
            let mut s1 = Side::default();
            let mut s2 = Side::default();
            for part in 0..parts {
                let side = if part > 0 && (mask >> (part - 1)) & 1 == 1 {
                    &mut s2
                } else {
                    &mut s1
                };
                if part < comps.len() {
                    let comp = &comps[part];
                    side.vertices.extend_from_slice(comp);
                    for (k, e) in self.edges.iter().enumerate() {
                        if comp.contains(&e.u) || comp.contains(&e.v) {
                            side.edges.push(k);
                        }
                    }
                } else {
                    side.edges.push(loops[part - comps.len()]);
                }
            }
            for side in [&mut s1, &mut s2] {
                side.vertices.push(v);
                side.vertices.sort_unstable();
                side.edges.sort_unstable();
            }
            Separation {
                cut: v,
                side1: s1,
                side2: s2,
            }
        })
    }

    /// First separation in [`SignedGraph::find_1_separations`] order whose
    /// sides both contain a vertex other than the cut vertex.
    pub fn first_vertex_reducing_separation(&self) -> Option<Separation> {
        (1..=self.n).find_map(|v| {
            self.separations_at(v)
                .find(|s| s.is_vertex_reducing())
        })
    }

    pub fn serialize(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<SignedGraph> {
        text.parse()
    }
}

impl fmt::Display for SignedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        let mut idx: Vec<usize> = (0..self.edges.len()).collect();
        idx.sort_by_key(|&k| (self.edges[k], k));
        for k in idx {
            let e = self.edges[k];
            writeln!(f, "e {} {} {}", e.u, e.v, e.parity.token())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for SignedGraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut graph: Option<SignedGraph> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line, message };
            let fields: Vec<&str> = body.split_whitespace().collect();
            let number = |s: &str| -> Result<usize> {
                s.parse::<usize>()
                    .map_err(|_| err(format!("expected a non-negative integer, found `{s}`")))
            };
            match (fields[0], graph.as_mut()) {
                ("n", None) => {
                    if fields.len() != 2 {
                        return Err(err("expected `n <count>`".into()));
                    }
                    graph = Some(SignedGraph::new(number(fields[1])?));
                }
                ("n", Some(_)) => return Err(err("duplicate `n` line".into())),
                ("e", Some(g)) => {
                    if fields.len() != 4 {
                        return Err(err("expected `e <u> <v> <o|e>`".into()));
                    }
                    let u = number(fields[1])?;
                    let v = number(fields[2])?;
                    let parity = match fields[3] {
                        "o" => Parity::Odd,
                        "e" => Parity::Even,
                        other => return Err(err(format!("unknown parity `{other}`"))),
                    };
                    g.add_edge(u, v, parity).map_err(|e| err(e.to_string()))?;
                }
                (_, None) => return Err(err("first directive must be `n <count>`".into())),
                (other, Some(_)) => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        graph.ok_or(Error::Parse {
            line: 0,
            message: "missing `n <count>` line".into(),
        })
    }
}

/// One side of a separation, in the parent graph's labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Side {
    /// Sorted, includes the cut vertex.
    pub vertices: Vec<usize>,
    /// Indices into the parent graph's edge list, sorted.
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub cut: usize,
    pub side1: Side,
    pub side2: Side,
}

impl Separation {
    pub fn is_vertex_reducing(&self) -> bool {
        self.side1.vertices.len() >= 2 && self.side2.vertices.len() >= 2
    }

    /// Vertex order for side 1: private vertices ascending, cut vertex last.
    pub fn order1(&self) -> Vec<usize> {
        let mut o: Vec<usize> = self.side1.vertices.iter().copied().filter(|&w| w != self.cut).collect();
        o.push(self.cut);
        o
    }

    /// Vertex order for side 2: cut vertex first, private vertices ascending.
    pub fn order2(&self) -> Vec<usize> {
        let mut o = vec![self.cut];
        o.extend(self.side2.vertices.iter().copied().filter(|&w| w != self.cut));
        o
    }

    /// Parent vertex order matching `side1 ⊕₁ side2`: side-1 private
    /// vertices, the cut vertex, side-2 private vertices.
    pub fn merged_order(&self) -> Vec<usize> {
        let mut o = self.order1();
        o.extend(self.order2().into_iter().skip(1));
        o
    }

    /// Side 1 as a graph with the cut vertex relabelled last.
    pub fn graph1(&self, g: &SignedGraph) -> SignedGraph {
        g.subgraph(&self.order1(), &self.side1.edges)
    }

    /// Side 2 as a graph with the cut vertex relabelled first.
    pub fn graph2(&self, g: &SignedGraph) -> SignedGraph {
        g.subgraph(&self.order2(), &self.side2.edges)
    }
}
