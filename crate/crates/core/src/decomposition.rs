//! Recursive evaluation of the four-term cut-vertex formula, comparison
//! against the oracle, and witness construction for frontier pairs.
//!
//! For a connected graph with a cut vertex `v` splitting it into `G₁` (cut
//! vertex last) and `G₂` (cut vertex first), the frontier is
//!
//! ```text
//! minimal(truncate_n(T1 ∪ T2 ∪ T3 ∪ T4))
//!   T1 = I(G₁ - v) + I(G₂ - v) + {(1,1)}
//!   T2 = I(G₁) + I(G₂)
//!   T3 = I(G₁ + even loop at v) + I(G₂ + odd loop at v)
//!   T4 = I(G₁ + odd loop at v) + I(G₂ + even loop at v)
//! ```
//!
//! Disconnected graphs add their components' frontiers; graphs without a
//! vertex-reducing separation go to the oracle.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::sync::{Arc, Mutex};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{EdgeProfile, Parity, ProfileKey, Separation, SignedGraph};
use crate::matrix::{direct_sum, int, membership, pin, subdirect_sum, InertiaPair, Matrix, Rat, SymMat};
use crate::oracle::{oracle_inertia, OracleConfig, OracleReport, OracleSummary};
use crate::pairs::PairSet;
use crate::transforms::compose_term;

/// Which part of the evaluation produced a frontier pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Base,
    Components,
    Term1,
    Term2,
    Term3,
    Term4,
}

impl Provenance {
    pub const TERMS: [Provenance; 4] = [Provenance::Term1, Provenance::Term2, Provenance::Term3, Provenance::Term4];
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Base => "base",
            Provenance::Components => "components",
            Provenance::Term1 => "term1",
            Provenance::Term2 => "term2",
            Provenance::Term3 => "term3",
            Provenance::Term4 => "term4",
        };
        f.write_str(s)
    }
}

/// The eight sub-evaluations of a cut-vertex split.
#[derive(Debug)]
pub struct OneSepChildren {
    pub g1_minus: Arc<SeparationTree>,
    pub g2_minus: Arc<SeparationTree>,
    pub g1: Arc<SeparationTree>,
    pub g2: Arc<SeparationTree>,
    pub g1_even: Arc<SeparationTree>,
    pub g1_odd: Arc<SeparationTree>,
    pub g2_even: Arc<SeparationTree>,
    pub g2_odd: Arc<SeparationTree>,
}

#[derive(Debug)]
pub enum TreeNode {
    Base(Box<OracleReport>),
    /// Components as sorted vertex lists with their evaluations.
    Components(Vec<(Vec<usize>, Arc<SeparationTree>)>),
    OneSep {
        sep: Separation,
        children: Box<OneSepChildren>,
        /// Minimal frontiers of the four terms, before truncation.
        terms: [PairSet; 4],
    },
}

#[derive(Debug)]
pub struct SeparationTree {
    pub graph: SignedGraph,
    pub frontier: PairSet,
    pub provenance: BTreeMap<InertiaPair, Provenance>,
    pub node: TreeNode,
}

impl SeparationTree {
    pub fn term(&self, t: Provenance) -> Option<&PairSet> {
        match (&self.node, t) {
            (TreeNode::OneSep { terms, .. }, Provenance::Term1) => Some(&terms[0]),
            (TreeNode::OneSep { terms, .. }, Provenance::Term2) => Some(&terms[1]),
            (TreeNode::OneSep { terms, .. }, Provenance::Term3) => Some(&terms[2]),
            (TreeNode::OneSep { terms, .. }, Provenance::Term4) => Some(&terms[3]),
            _ => None,
        }
    }

    /// Targets of base-case searches that stopped at the node limit.
    pub fn incomplete_searches(&self) -> Vec<(SignedGraph, InertiaPair)> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let TreeNode::Base(r) = &t.node {
                out.extend(r.incomplete.iter().map(|&p| (t.graph.clone(), p)));
            }
        });
        out
    }

    fn visit(&self, f: &mut dyn FnMut(&SeparationTree)) {
        f(self);
        match &self.node {
            TreeNode::Base(_) => {}
            TreeNode::Components(parts) => parts.iter().for_each(|(_, t)| t.visit(f)),
            TreeNode::OneSep { children: c, .. } => {
                for t in [&c.g1_minus, &c.g2_minus, &c.g1, &c.g2, &c.g1_even, &c.g1_odd, &c.g2_even, &c.g2_odd] {
                    t.visit(f);
                }
            }
        }
    }

    fn provenance_json(&self) -> Value {
        Value::Array(
            self.provenance
                .iter()
                .map(|(k, v)| json!([k.p, k.q, v.to_string()]))
                .collect(),
        )
    }

    /// Nested JSON description with per-pair provenance.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "n": self.graph.vertex_count(),
            "frontier": self.frontier,
            "provenance": self.provenance_json(),
        });
        let obj = v.as_object_mut().expect("object");
        match &self.node {
            TreeNode::Base(r) => {
                obj.insert("kind".into(), json!("base"));
                obj.insert("graph".into(), json!(self.graph.serialize()));
                obj.insert("oracle".into(), json!(r.summary()));
            }
            TreeNode::Components(parts) => {
                obj.insert("kind".into(), json!("components"));
                let list: Vec<Value> = parts
                    .iter()
                    .map(|(vs, t)| json!({"vertices": vs, "tree": t.to_json()}))
                    .collect();
                obj.insert("components".into(), Value::Array(list));
            }
            TreeNode::OneSep { sep, children: c, terms } => {
                obj.insert("kind".into(), json!("one_sep"));
                obj.insert("cut".into(), json!(sep.cut));
                obj.insert("side1".into(), json!(sep.side1.vertices));
                obj.insert("side2".into(), json!(sep.side2.vertices));
                obj.insert(
                    "terms".into(),
                    json!({"term1": terms[0], "term2": terms[1], "term3": terms[2], "term4": terms[3]}),
                );
                obj.insert(
                    "children".into(),
                    json!({
                        "g1_minus_v": c.g1_minus.to_json(),
                        "g2_minus_v": c.g2_minus.to_json(),
                        "g1": c.g1.to_json(),
                        "g2": c.g2.to_json(),
                        "g1_even": c.g1_even.to_json(),
                        "g1_odd": c.g1_odd.to_json(),
                        "g2_even": c.g2_even.to_json(),
                        "g2_odd": c.g2_odd.to_json(),
                    }),
                );
            }
        }
        v
    }

    /// Indented text rendering, one node per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, "", 0);
        out
    }

    fn render_into(&self, out: &mut String, label: &str, depth: usize) {
        let pad = "  ".repeat(depth);
        let prov: Vec<String> = self.provenance.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        let head = match &self.node {
            TreeNode::Base(_) => "base".to_string(),
            TreeNode::Components(p) => format!("components({})", p.len()),
            TreeNode::OneSep { sep, .. } => format!(
                "cut {} sides {:?} {:?}",
                sep.cut, sep.side1.vertices, sep.side2.vertices
            ),
        };
        let _ = writeln!(
            out,
            "{pad}{label}{head} n={} frontier {} [{}]",
            self.graph.vertex_count(),
            self.frontier,
            prov.join(" ")
        );
        match &self.node {
            TreeNode::Base(_) => {}
            TreeNode::Components(parts) => {
                for (vs, t) in parts {
                    t.render_into(out, &format!("{vs:?}: "), depth + 1);
                }
            }
            TreeNode::OneSep { children: c, terms, .. } => {
                for (i, t) in terms.iter().enumerate() {
                    let _ = writeln!(out, "{pad}  term{}: {}", i + 1, t);
                }
                let named = [
                    ("G1-v", &c.g1_minus),
                    ("G2-v", &c.g2_minus),
                    ("G1", &c.g1),
                    ("G2", &c.g2),
                    ("G1+e", &c.g1_even),
                    ("G1+o", &c.g1_odd),
                    ("G2+e", &c.g2_even),
                    ("G2+o", &c.g2_odd),
                ];
                for (name, t) in named {
                    t.render_into(out, &format!("{name}: "), depth + 1);
                }
            }
        }
    }
}

/// Memoized formula evaluation. The memo is keyed on the labelled profile
/// table, so graphs differing only in edge multiplicity share an entry.
pub struct Evaluator {
    cfg: OracleConfig,
    memo: Mutex<HashMap<ProfileKey, Arc<SeparationTree>>>,
}

impl Evaluator {
    pub fn new(cfg: OracleConfig) -> Self {
        Evaluator {
            cfg,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &OracleConfig {
        &self.cfg
    }

    pub fn evaluate(&self, g: &SignedGraph) -> Result<Arc<SeparationTree>> {
        self.eval(g, 0, g.vertex_count())
    }

    /// Evaluates with `sep` at the top level instead of the default choice.
    pub fn evaluate_with(&self, g: &SignedGraph, sep: &Separation) -> Result<Arc<SeparationTree>> {
        if !sep.is_vertex_reducing() {
            return Err(Error::MalformedPartition("both sides need a vertex besides the cut".into()));
        }
        self.one_sep(g, sep.clone(), 0, g.vertex_count()).map(Arc::new)
    }

    fn eval(&self, g: &SignedGraph, depth: usize, bound: usize) -> Result<Arc<SeparationTree>> {
        if depth > bound {
            return Err(Error::DepthExceeded(bound));
        }
        let key = g.profile_key();
        if let Some(t) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(Arc::clone(t));
        }
        let tree = Arc::new(self.build(g, depth, bound)?);
        let mut memo = self.memo.lock().expect("memo lock");
        Ok(Arc::clone(memo.entry(key).or_insert(tree)))
    }

    fn build(&self, g: &SignedGraph, depth: usize, bound: usize) -> Result<SeparationTree> {
        let n = g.vertex_count();
        if n >= 2 && !g.is_connected() {
            let mut parts = Vec::new();
            let mut acc = PairSet::singleton(InertiaPair::ZERO);
            for comp in g.components() {
                let t = self.eval(&g.induced(&comp), depth, bound)?;
                acc = acc.minkowski_add(&t.frontier).minimal();
                parts.push((comp, t));
            }
            let provenance = acc.iter().map(|&p| (p, Provenance::Components)).collect();
            return Ok(SeparationTree {
                graph: g.clone(),
                frontier: acc,
                provenance,
                node: TreeNode::Components(parts),
            });
        }
        match g.first_vertex_reducing_separation() {
            Some(sep) => self.one_sep(g, sep, depth, bound),
            None => {
                let report = oracle_inertia(g, &self.cfg);
                let frontier = report.frontier();
                let provenance = frontier.iter().map(|&p| (p, Provenance::Base)).collect();
                Ok(SeparationTree {
                    graph: g.clone(),
                    frontier,
                    provenance,
                    node: TreeNode::Base(Box::new(report)),
                })
            }
        }
    }

    fn one_sep(&self, g: &SignedGraph, sep: Separation, depth: usize, bound: usize) -> Result<SeparationTree> {
        let n = g.vertex_count();
        let g1 = sep.graph1(g);
        let g2 = sep.graph2(g);
        let n1 = g1.vertex_count();
        let sub = |h: &SignedGraph| self.eval(h, depth + 1, bound);
        let children = OneSepChildren {
            g1_minus: sub(&g1.delete_vertex(n1)?)?,
            g2_minus: sub(&g2.delete_vertex(1)?)?,
            g1: sub(&g1)?,
            g2: sub(&g2)?,
            g1_even: sub(&g1.augment_loop(n1, Parity::Even)?)?,
            g1_odd: sub(&g1.augment_loop(n1, Parity::Odd)?)?,
            g2_even: sub(&g2.augment_loop(1, Parity::Even)?)?,
            g2_odd: sub(&g2.augment_loop(1, Parity::Odd)?)?,
        };
        let c = &children;
        let hyp = PairSet::singleton(InertiaPair::HYPERBOLIC);
        let terms = [
            c.g1_minus.frontier.minkowski_add(&c.g2_minus.frontier).minkowski_add(&hyp).minimal(),
            c.g1.frontier.minkowski_add(&c.g2.frontier).minimal(),
            c.g1_even.frontier.minkowski_add(&c.g2_odd.frontier).minimal(),
            c.g1_odd.frontier.minkowski_add(&c.g2_even.frontier).minimal(),
        ];
        let union = terms.iter().fold(PairSet::new(), |acc, t| acc.union(t));
        let frontier = union.truncate_n(n).minimal();
        let provenance = frontier
            .iter()
            .map(|p| {
                let at = terms.iter().position(|t| t.contains(p)).expect("frontier pair comes from a term");
                (*p, Provenance::TERMS[at])
            })
            .collect();
        Ok(SeparationTree {
            graph: g.clone(),
            frontier,
            provenance,
            node: TreeNode::OneSep {
                sep,
                children: Box::new(children),
                terms,
            },
        })
    }
}

/// Formula frontier of `g` with its evaluation tree.
pub fn formula_minimal(g: &SignedGraph, cfg: &OracleConfig) -> Result<Arc<SeparationTree>> {
    Evaluator::new(cfg.clone()).evaluate(g)
}

pub fn minimum_rank(g: &SignedGraph, cfg: &OracleConfig) -> Result<usize> {
    let t = formula_minimal(g, cfg)?;
    Ok(t.frontier.iter().map(InertiaPair::total).min().unwrap_or(0))
}

/// A member of the class with `pin <= target`.
#[derive(Clone, Debug)]
pub struct Witness {
    pub matrix: SymMat,
    pub pin: InertiaPair,
    pub target: InertiaPair,
}

impl Witness {
    pub fn is_exact(&self) -> bool {
        self.pin == self.target
    }
}

/// Entry used for an edge profile when extending a matrix by one vertex.
fn canonical_entry(p: EdgeProfile) -> Rat {
    match p {
        EdgeProfile::OddOnly => int(1),
        EdgeProfile::EvenOnly => int(-1),
        EdgeProfile::None | EdgeProfile::Both => int(0),
    }
}

fn split_pair(target: InertiaPair, a: &PairSet, b: &PairSet) -> Option<(InertiaPair, InertiaPair)> {
    a.iter()
        .filter(|x| x.leq(&target))
        .find_map(|x| {
            let rest = InertiaPair::new(target.p - x.p, target.q - x.q);
            b.contains(&rest).then_some((*x, rest))
        })
}

/// Splits `target` as a sum of one frontier pair from each part.
fn split_many(target: InertiaPair, parts: &[&PairSet]) -> Option<Vec<InertiaPair>> {
    let Some((first, rest)) = parts.split_first() else {
        return (target == InertiaPair::ZERO).then(Vec::new);
    };
    for x in first.iter().filter(|x| x.leq(&target)) {
        let remaining = InertiaPair::new(target.p - x.p, target.q - x.q);
        if let Some(mut tail) = split_many(remaining, rest) {
            tail.insert(0, *x);
            return Some(tail);
        }
    }
    None
}

fn tree_witness(tree: &SeparationTree, target: InertiaPair) -> Result<SymMat> {
    let missing = || Error::MissingProvenance(target.p, target.q);
    let prov = *tree.provenance.get(&target).ok_or_else(missing)?;
    let g = &tree.graph;
    match &tree.node {
        TreeNode::Base(report) => report.witnesses.get(&target).map(|(a, _)| a.clone()).ok_or_else(missing),
        TreeNode::Components(parts) => {
            let sets: Vec<&PairSet> = parts.iter().map(|(_, t)| &t.frontier).collect();
            let split = split_many(target, &sets).ok_or_else(missing)?;
            let mut acc = SymMat::empty();
            let mut order = Vec::new();
            for ((vs, t), x) in parts.iter().zip(split) {
                acc = direct_sum(&acc, &tree_witness(t, x)?);
                order.extend(vs.iter().map(|w| w - 1));
            }
            Ok(acc.unpermuted(&order))
        }
        TreeNode::OneSep { sep, children: c, .. } => {
            let order: Vec<usize> = sep.merged_order().iter().map(|w| w - 1).collect();
            let g1 = &c.g1.graph;
            let g2 = &c.g2.graph;
            let n1 = g1.vertex_count();
            let loop_profile = g.edge_profile(sep.cut, sep.cut)?;
            let glued = match prov {
                Provenance::Term1 => {
                    let target = InertiaPair::new(target.p - 1, target.q - 1);
                    let (x, y) = split_pair(target, &c.g1_minus.frontier, &c.g2_minus.frontier).ok_or_else(missing)?;
                    let b0 = tree_witness(&c.g1_minus, x)?;
                    let c0 = tree_witness(&c.g2_minus, y)?;
                    let mut b = Matrix::zeros(n1, n1);
                    b.put(0, 0, b0.as_matrix());
                    for i in 1..n1 {
                        let e = canonical_entry(g1.edge_profile(i, n1)?);
                        b.set(i - 1, n1 - 1, e.clone());
                        b.set(n1 - 1, i - 1, e);
                    }
                    b.set(n1 - 1, n1 - 1, canonical_entry(g1.edge_profile(n1, n1)?));
                    let n2 = g2.vertex_count();
                    let mut cm = Matrix::zeros(n2, n2);
                    cm.put(1, 1, c0.as_matrix());
                    for j in 2..=n2 {
                        let e = canonical_entry(g2.edge_profile(1, j)?);
                        cm.set(0, j - 1, e.clone());
                        cm.set(j - 1, 0, e);
                    }
                    cm.set(0, 0, canonical_entry(g2.edge_profile(1, 1)?));
                    subdirect_sum(&SymMat::new(b)?, &SymMat::new(cm)?, 1)?
                }
                Provenance::Term2 => {
                    let (x, y) = split_pair(target, &c.g1.frontier, &c.g2.frontier).ok_or_else(missing)?;
                    subdirect_sum(&tree_witness(&c.g1, x)?, &tree_witness(&c.g2, y)?, 1)?
                }
                Provenance::Term3 | Provenance::Term4 => {
                    let (left, right) = if prov == Provenance::Term3 {
                        (&c.g1_even, &c.g2_odd)
                    } else {
                        (&c.g1_odd, &c.g2_even)
                    };
                    let (x, y) = split_pair(target, &left.frontier, &right.frontier).ok_or_else(missing)?;
                    compose_term(&tree_witness(left, x)?, &tree_witness(right, y)?, loop_profile)?.matrix
                }
                Provenance::Base | Provenance::Components => return Err(missing()),
            };
            Ok(glued.unpermuted(&order))
        }
    }
}

/// Builds a member of the class of `g` whose pin is at most `target`,
/// following the provenance recorded in `tree`.
pub fn witness_for_pair(g: &SignedGraph, target: InertiaPair, tree: &SeparationTree) -> Result<Witness> {
    if g.profile_key() != tree.graph.profile_key() {
        return Err(Error::DimensionMismatch("tree was built for a different graph".into()));
    }
    let matrix = tree_witness(tree, target)?;
    if !membership(&matrix, g)? {
        return Err(Error::NotMember(format!("witness for {target}")));
    }
    let p = pin(&matrix);
    if !p.leq(&target) {
        return Err(Error::IdentityFailed(format!("witness pin {p} exceeds {target}")));
    }
    Ok(Witness { matrix, pin: p, target })
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    /// `soundness`, `formula_only`, `oracle_only` or `witness`.
    pub kind: String,
    pub pair: InertiaPair,
    pub detail: String,
    /// Matrix text of the relevant witness, when there is one.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub graph: String,
    pub frontier: PairSet,
    pub tree: Value,
    pub oracle: OracleSummary,
    pub cong: bool,
    pub sound: bool,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.cong && self.violations.is_empty()
    }
}

/// Compares the formula frontier with the oracle on the whole graph and
/// checks a witness for every formula-minimal pair.
pub fn verify_equivalence(g: &SignedGraph, cfg: &OracleConfig) -> Result<VerifyReport> {
    verify_with(&Evaluator::new(cfg.clone()), g)
}

pub fn verify_with(ev: &Evaluator, g: &SignedGraph) -> Result<VerifyReport> {
    let tree = ev.evaluate(g)?;
    let oracle = oracle_inertia(g, ev.config());
    let oracle_front = oracle.frontier();
    let mut violations = Vec::new();

    for a in oracle.pairs.iter() {
        if tree.frontier.dominated_member(a).is_none() {
            violations.push(Violation {
                kind: "soundness".into(),
                pair: *a,
                detail: "oracle pair dominates no formula pair".into(),
                witness: oracle.witnesses.get(a).map(|(m, _)| m.to_string()),
            });
        }
    }
    let sound = violations.is_empty();

    for a in tree.frontier.iter() {
        match witness_for_pair(g, *a, &tree) {
            Ok(w) => {
                if !oracle_front.contains(a) {
                    violations.push(Violation {
                        kind: "formula_only".into(),
                        pair: *a,
                        detail: format!("witness pin {}", w.pin),
                        witness: Some(w.matrix.to_string()),
                    });
                }
            }
            Err(e) => violations.push(Violation {
                kind: "witness".into(),
                pair: *a,
                detail: e.to_string(),
                witness: None,
            }),
        }
    }
    for a in oracle_front.iter().filter(|a| !tree.frontier.contains(a)) {
        violations.push(Violation {
            kind: "oracle_only".into(),
            pair: *a,
            detail: "oracle frontier pair missing from formula".into(),
            witness: oracle.witnesses.get(a).map(|(m, _)| m.to_string()),
        });
    }

    Ok(VerifyReport {
        graph: g.serialize(),
        frontier: tree.frontier.clone(),
        tree: tree.to_json(),
        oracle: oracle.summary(),
        cong: oracle_front.cong(&tree.frontier),
        sound,
        violations,
    })
}
