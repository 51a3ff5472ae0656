//! Splice diagrams: the edge-weighted trees underlying graph-manifold
//! decompositions.
//!
//! Three layers are kept:
//! * [`MaximalSpliceDiagram`] — the full plumbing tree with a signed cut
//!   determinant at every (vertex, incident edge) end;
//! * [`UnnormalizedSpliceDiagram`] — valence-2 vertices erased, leaf-end
//!   decorations dropped, signed weights at node ends;
//! * [`SpliceDiagram`] — absolute weights plus a sign per node.
//!
//! Derivation computes the unnormalized diagram twice (directly from cut
//! determinants, and by erasing the maximal diagram) and insists the two
//! agree bit for bit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::Int;
use crate::plumbing::PlumbingDiagram;
use crate::Error;

fn sign_of(x: &Int) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// A normalized splice diagram: leaves (valence 1) and nodes (valence >= 3),
/// a non-negative weight at every node end, and a sign per node. A node-less
/// diagram is represented by the explicit atomic marker rather than an empty
/// tree so downstream consumers can refuse it loudly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpliceDiagram {
    names: Vec<String>,
    is_node: Vec<bool>,
    signs: Vec<i8>,
    edges: Vec<(usize, usize)>,
    weights: BTreeMap<(usize, usize), Int>,
    adj: Vec<Vec<usize>>,
    atomic: bool,
}

/// Same tree as [`SpliceDiagram`] but with signed end weights and no node signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnnormalizedSpliceDiagram {
    names: Vec<String>,
    is_node: Vec<bool>,
    edges: Vec<(usize, usize)>,
    weights: BTreeMap<(usize, usize), Int>,
    adj: Vec<Vec<usize>>,
    det: Int,
    atomic: bool,
}

/// The full plumbing tree with a signed cut determinant at every end of
/// every vertex. Indices coincide with the source plumbing's vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalSpliceDiagram {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    weights: BTreeMap<(usize, usize), Int>,
    adj: Vec<Vec<usize>>,
    det: Int,
}

/// Why a splice diagram fails validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpliceViolation {
    NotConnected,
    HasCycle,
    ValenceTwoVertex { vertex: String },
    ZeroLeafEdgeWeight { leaf: String },
    MultipleZeroWeightsAtNode { node: String },
}

impl fmt::Display for SpliceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpliceViolation::NotConnected => write!(f, "splice diagram is not connected"),
            SpliceViolation::HasCycle => write!(f, "splice diagram contains a cycle"),
            SpliceViolation::ValenceTwoVertex { vertex } => {
                write!(f, "vertex `{vertex}` has valence 2")
            }
            SpliceViolation::ZeroLeafEdgeWeight { leaf } => {
                write!(f, "edge to leaf `{leaf}` carries weight 0")
            }
            SpliceViolation::MultipleZeroWeightsAtNode { node } => {
                write!(f, "node `{node}` has more than one zero end weight")
            }
        }
    }
}

/// Orbifold data: a degree per leaf (absent means 1, the smooth case).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrbifoldDecoration {
    degrees: BTreeMap<usize, Int>,
}

impl OrbifoldDecoration {
    pub fn trivial() -> Self {
        OrbifoldDecoration::default()
    }

    /// Builds a decoration over `diagram` from `(leaf name, degree)` pairs.
    /// Degrees must be >= 1 and may only sit on leaves whose edge weight is
    /// nonzero.
    pub fn from_names(diagram: &SpliceDiagram, degrees: &[(&str, i64)]) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        for &(name, p) in degrees {
            if p < 1 {
                return Err(Error::Input(format!(
                    "orbifold degree {p} at `{name}` must be at least 1"
                )));
            }
            let v = diagram
                .vertex_index(name)
                .ok_or_else(|| Error::Input(format!("`{name}` is not a vertex")))?;
            if diagram.is_node(v) {
                return Err(Error::Input(format!(
                    "`{name}` is a node; orbifold degrees live on leaves"
                )));
            }
            if p > 1 {
                if diagram.leaf_edge_weight(v)?.is_zero() {
                    return Err(Error::Input(format!(
                        "leaf `{name}` has edge weight 0 and cannot carry an orbifold curve"
                    )));
                }
                map.insert(v, Int::from(p));
            }
        }
        Ok(OrbifoldDecoration { degrees: map })
    }

    /// Degree at a leaf (1 when undecorated).
    pub fn degree(&self, leaf: usize) -> Int {
        self.degrees.get(&leaf).cloned().unwrap_or_else(Int::one)
    }

    /// Leaves carrying degree > 1, with their degrees.
    pub fn decorated(&self) -> Vec<(usize, Int)> {
        self.degrees.iter().map(|(&v, p)| (v, p.clone())).collect()
    }

    /// Product of all degrees.
    pub fn product(&self) -> Int {
        self.degrees.values().fold(Int::one(), |acc, p| acc * p)
    }
}

/// All three diagram layers derived from one plumbing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpliceBundle {
    pub splice: SpliceDiagram,
    pub unnormalized: UnnormalizedSpliceDiagram,
    pub maximal: MaximalSpliceDiagram,
}

impl SpliceBundle {
    /// `det(-A)` of the source plumbing.
    pub fn det(&self) -> &Int {
        self.maximal.det()
    }
}

// Shared tree helpers over an adjacency list.
fn build_adj(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

fn tree_path(adj: &[Vec<usize>], v: usize, w: usize) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    seen[v] = true;
    queue.push_back(v);
    while let Some(x) = queue.pop_front() {
        if x == w {
            let mut path = vec![w];
            let mut cur = w;
            while cur != v {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &u in &adj[x] {
            if !seen[u] {
                seen[u] = true;
                parent[u] = x;
                queue.push_back(u);
            }
        }
    }
    None
}

impl SpliceDiagram {
    /// The node-less marker.
    pub fn atomic() -> Self {
        SpliceDiagram {
            names: Vec::new(),
            is_node: Vec::new(),
            signs: Vec::new(),
            edges: Vec::new(),
            weights: BTreeMap::new(),
            adj: Vec::new(),
            atomic: true,
        }
    }

    /// Builds a diagram from named nodes (with signs), leaves, and edges.
    /// Each edge supplies the weight at either end: present exactly when that
    /// end is a node.
    pub fn new(
        nodes: Vec<(String, i8)>,
        leaves: Vec<String>,
        edges: Vec<(String, String, Option<Int>, Option<Int>)>,
    ) -> Result<Self, Error> {
        let mut names = Vec::new();
        let mut is_node = Vec::new();
        let mut signs = Vec::new();
        for (name, sign) in nodes {
            if sign != 1 && sign != -1 {
                return Err(Error::Input(format!(
                    "node `{name}` sign must be +1 or -1, got {sign}"
                )));
            }
            if names.contains(&name) {
                return Err(Error::Input(format!("duplicate vertex id `{name}`")));
            }
            names.push(name);
            is_node.push(true);
            signs.push(sign);
        }
        for name in leaves {
            if names.contains(&name) {
                return Err(Error::Input(format!("duplicate vertex id `{name}`")));
            }
            names.push(name);
            is_node.push(false);
            signs.push(1);
        }
        if names.is_empty() {
            return Err(Error::Input(
                "splice diagram needs at least one vertex (or use the atomic marker)".into(),
            ));
        }
        let lookup = |n: &str| -> Result<usize, Error> {
            names
                .iter()
                .position(|x| x == n)
                .ok_or_else(|| Error::Input(format!("edge endpoint `{n}` is not a vertex")))
        };
        let mut idx_edges = Vec::new();
        let mut weights = BTreeMap::new();
        for (a, b, wa, wb) in edges {
            let (ia, ib) = (lookup(&a)?, lookup(&b)?);
            if ia == ib {
                return Err(Error::Input(format!("self-loop at `{a}`")));
            }
            let key = (ia.min(ib), ia.max(ib));
            if idx_edges.contains(&key) {
                return Err(Error::Input(format!("duplicate edge `{a}`-`{b}`")));
            }
            idx_edges.push(key);
            for (end, other, w, end_name) in [(ia, ib, wa, &a), (ib, ia, wb, &b)] {
                match (is_node[end], w) {
                    (true, Some(x)) => {
                        if x.is_negative() {
                            return Err(Error::Input(format!(
                                "normalized weight at `{end_name}` must be non-negative"
                            )));
                        }
                        weights.insert((end, other), x);
                    }
                    (false, None) => {}
                    (true, None) => {
                        return Err(Error::Input(format!(
                            "missing end weight at node `{end_name}`"
                        )))
                    }
                    (false, Some(_)) => {
                        return Err(Error::Input(format!(
                            "leaf `{end_name}` cannot carry an end weight"
                        )))
                    }
                }
            }
        }
        let adj = build_adj(names.len(), &idx_edges);
        Ok(SpliceDiagram {
            names,
            is_node,
            signs,
            edges: idx_edges,
            weights,
            adj,
            atomic: false,
        })
    }

    /// Test-friendly constructor over string slices and small weights.
    pub fn from_parts(
        nodes: &[(&str, i8)],
        leaves: &[&str],
        edges: &[(&str, &str, Option<i64>, Option<i64>)],
    ) -> Result<Self, Error> {
        SpliceDiagram::new(
            nodes.iter().map(|&(n, s)| (n.to_string(), s)).collect(),
            leaves.iter().map(|&n| n.to_string()).collect(),
            edges
                .iter()
                .map(|&(a, b, wa, wb)| {
                    (
                        a.to_string(),
                        b.to_string(),
                        wa.map(Int::from),
                        wb.map(Int::from),
                    )
                })
                .collect(),
        )
    }

    pub fn is_atomic(&self) -> bool {
        self.atomic
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_node(&self, v: usize) -> bool {
        self.is_node[v]
    }

    pub fn sign(&self, v: usize) -> i8 {
        self.signs[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn nodes(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.is_node[v]).collect()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| !self.is_node[v]).collect()
    }

    /// Weight at the `v` end of the edge toward `toward`; `None` at leaf ends.
    pub fn end_weight(&self, v: usize, toward: usize) -> Option<&Int> {
        self.weights.get(&(v, toward))
    }

    /// Weight at the node end of the edge of leaf `v`.
    pub fn leaf_edge_weight(&self, v: usize) -> Result<&Int, Error> {
        if self.is_node[v] {
            return Err(Error::Input(format!("`{}` is not a leaf", self.names[v])));
        }
        let node = self.adj[v]
            .first()
            .copied()
            .ok_or_else(|| Error::Input(format!("leaf `{}` has no edge", self.names[v])))?;
        Ok(&self.weights[&(node, v)])
    }

    /// Product of the end weights at node `v` toward every neighbor except
    /// `excluded`; the empty product is 1.
    pub fn other_end_product(&self, v: usize, excluded: usize) -> Int {
        self.adj[v]
            .iter()
            .filter(|&&u| u != excluded)
            .fold(Int::one(), |acc, &u| acc * &self.weights[&(v, u)])
    }

    /// Product of all end weights at node `v`.
    pub fn all_end_product(&self, v: usize) -> Int {
        self.adj[v]
            .iter()
            .fold(Int::one(), |acc, &u| acc * &self.weights[&(v, u)])
    }

    /// Checks the structural invariants: tree, no valence-2 vertex, nonzero
    /// leaf-edge weights, at most one zero end weight per node.
    pub fn validate(&self) -> Result<(), SpliceViolation> {
        if self.atomic {
            return Ok(());
        }
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count != n {
            return Err(SpliceViolation::NotConnected);
        }
        if self.edges.len() != n - 1 {
            return Err(SpliceViolation::HasCycle);
        }
        for v in 0..n {
            if self.adj[v].len() == 2 {
                return Err(SpliceViolation::ValenceTwoVertex {
                    vertex: self.names[v].clone(),
                });
            }
        }
        for v in 0..n {
            if !self.is_node[v] {
                if let Some(&node) = self.adj[v].first() {
                    if self.weights[&(node, v)].is_zero() {
                        return Err(SpliceViolation::ZeroLeafEdgeWeight {
                            leaf: self.names[v].clone(),
                        });
                    }
                }
            } else {
                let zeros = self.adj[v]
                    .iter()
                    .filter(|&&u| self.weights[&(v, u)].is_zero())
                    .count();
                if zeros > 1 {
                    return Err(SpliceViolation::MultipleZeroWeightsAtNode {
                        node: self.names[v].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Edge determinant `D = r0*r1 - e0*e1*N0*N1` of the node-edge `(v, w)`,
    /// where `N_i` is the product of all other end weights at that node and
    /// `e_i` its sign.
    pub fn edge_determinant(&self, v: usize, w: usize) -> Result<Int, Error> {
        if !self.adj[v].contains(&w) {
            return Err(Error::Input(format!(
                "`{}`-`{}` is not an edge",
                self.names[v], self.names[w]
            )));
        }
        if !self.is_node[v] || !self.is_node[w] {
            return Err(Error::Input(format!(
                "edge `{}`-`{}` touches a leaf; edge determinants need a node-edge",
                self.names[v], self.names[w]
            )));
        }
        let r0 = &self.weights[&(v, w)];
        let r1 = &self.weights[&(w, v)];
        let n0 = self.other_end_product(v, w);
        let n1 = self.other_end_product(w, v);
        let eps = Int::from((self.signs[v] * self.signs[w]) as i64);
        Ok(r0 * r1 - eps * n0 * n1)
    }

    /// Does the end weight at `(v, toward)` see leaf `leaf`? True exactly
    /// when `leaf` lies in the connected component of `toward` after node `v`
    /// is deleted.
    pub fn sees(&self, v: usize, toward: usize, leaf: usize) -> Result<bool, Error> {
        if !self.is_node[v] {
            return Err(Error::Input(format!("`{}` is not a node", self.names[v])));
        }
        if !self.adj[v].contains(&toward) {
            return Err(Error::Input(format!(
                "`{}`-`{}` is not an edge",
                self.names[v], self.names[toward]
            )));
        }
        if self.is_node[leaf] {
            return Err(Error::Input(format!("`{}` is not a leaf", self.names[leaf])));
        }
        let mut seen = vec![false; self.vertex_count()];
        seen[v] = true;
        seen[toward] = true;
        let mut stack = vec![toward];
        while let Some(x) = stack.pop() {
            if x == leaf {
                return Ok(true);
            }
            for &u in &self.adj[x] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        Ok(leaf == toward)
    }

    /// Product over the path from node `v` to node `w` of the end weights
    /// adjacent to, but not on, the path. For `v == w` this is the product of
    /// all end weights at `v`.
    pub fn linking_product(&self, v: usize, w: usize) -> Result<Int, Error> {
        if !self.is_node[v] || !self.is_node[w] {
            return Err(Error::Input(
                "linking products are defined between nodes".into(),
            ));
        }
        if v == w {
            return Ok(self.all_end_product(v));
        }
        let path = tree_path(&self.adj, v, w)
            .ok_or_else(|| Error::Input("vertices are not connected".into()))?;
        let on_path: BTreeSet<usize> = path.iter().copied().collect();
        let mut product = Int::one();
        for (i, &x) in path.iter().enumerate() {
            for &u in &self.adj[x] {
                let u_precedes = i > 0 && path[i - 1] == u;
                let u_follows = i + 1 < path.len() && path[i + 1] == u;
                if !u_precedes && !u_follows {
                    debug_assert!(!on_path.contains(&u));
                    product *= &self.weights[&(x, u)];
                }
            }
        }
        Ok(product)
    }

    /// True iff at every node the incident end weights are pairwise coprime.
    pub fn pairwise_coprime_at_nodes(&self) -> bool {
        for v in self.nodes() {
            let ws: Vec<&Int> = self.adj[v].iter().map(|&u| &self.weights[&(v, u)]).collect();
            for i in 0..ws.len() {
                for j in i + 1..ws.len() {
                    if ws[i].gcd(ws[j]) > Int::one() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Multiplies every end weight that sees a decorated leaf by that leaf's
    /// degree; returns the adjusted diagram and the total degree product P.
    /// The order of the orbifold first homology group is `P * |H1|` of the
    /// underlying manifold.
    pub fn orbifold_adjust(&self, deco: &OrbifoldDecoration) -> Result<(SpliceDiagram, Int), Error> {
        if self.atomic {
            return Err(Error::Input(
                "orbifold adjustment needs a diagram with nodes".into(),
            ));
        }
        let mut adjusted = self.clone();
        for (leaf, p) in deco.decorated() {
            if self.is_node.get(leaf).copied().unwrap_or(false) {
                return Err(Error::Input(format!(
                    "`{}` is not a leaf",
                    self.names.get(leaf).map(String::as_str).unwrap_or("?")
                )));
            }
            if self.leaf_edge_weight(leaf)?.is_zero() {
                return Err(Error::Input(format!(
                    "leaf `{}` has edge weight 0 and cannot carry an orbifold curve",
                    self.names[leaf]
                )));
            }
            for v in self.nodes() {
                for &u in &self.adj[v] {
                    if self.sees(v, u, leaf)? {
                        let w = adjusted.weights.get_mut(&(v, u)).expect("node end");
                        *w *= &p;
                    }
                }
            }
        }
        Ok((adjusted, deco.product()))
    }
}

impl UnnormalizedSpliceDiagram {
    fn atomic(det: Int) -> Self {
        UnnormalizedSpliceDiagram {
            names: Vec::new(),
            is_node: Vec::new(),
            edges: Vec::new(),
            weights: BTreeMap::new(),
            adj: Vec::new(),
            det,
            atomic: true,
        }
    }

    pub fn is_atomic(&self) -> bool {
        self.atomic
    }

    pub fn det(&self) -> &Int {
        &self.det
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_node(&self, v: usize) -> bool {
        self.is_node[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn nodes(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.is_node[v]).collect()
    }

    /// Signed weight at the `v` end of the edge toward `toward`.
    pub fn end_weight(&self, v: usize, toward: usize) -> Option<&Int> {
        self.weights.get(&(v, toward))
    }

    pub fn other_end_product(&self, v: usize, excluded: usize) -> Int {
        self.adj[v]
            .iter()
            .filter(|&&u| u != excluded)
            .fold(Int::one(), |acc, &u| acc * &self.weights[&(v, u)])
    }

    /// Signed edge determinant `D~ = r0*r1 - N0*N1` of the node-edge `(v, w)`.
    pub fn edge_determinant(&self, v: usize, w: usize) -> Result<Int, Error> {
        if !self.adj[v].contains(&w) {
            return Err(Error::Input(format!(
                "`{}`-`{}` is not an edge",
                self.names[v], self.names[w]
            )));
        }
        if !self.is_node[v] || !self.is_node[w] {
            return Err(Error::Input(format!(
                "edge `{}`-`{}` touches a leaf; edge determinants need a node-edge",
                self.names[v], self.names[w]
            )));
        }
        let r0 = &self.weights[&(v, w)];
        let r1 = &self.weights[&(w, v)];
        let n0 = self.other_end_product(v, w);
        let n1 = self.other_end_product(w, v);
        Ok(r0 * r1 - n0 * n1)
    }

    /// Normalizes: weights become absolute values; each node's sign is
    /// `sign(det) * product of the signs of its nonzero end weights`.
    pub fn normalize(&self) -> Result<SpliceDiagram, Error> {
        if self.atomic {
            return Ok(SpliceDiagram::atomic());
        }
        let det_sign = sign_of(&self.det);
        if det_sign == 0 {
            return Err(Error::Input("determinant is zero".into()));
        }
        let mut signs = vec![1i8; self.vertex_count()];
        for v in self.nodes() {
            let mut s = det_sign;
            for &u in &self.adj[v] {
                let w = &self.weights[&(v, u)];
                if !w.is_zero() {
                    s *= sign_of(w);
                }
            }
            signs[v] = s;
        }
        let weights = self
            .weights
            .iter()
            .map(|(&k, w)| (k, w.abs()))
            .collect();
        Ok(SpliceDiagram {
            names: self.names.clone(),
            is_node: self.is_node.clone(),
            signs,
            edges: self.edges.clone(),
            weights,
            adj: self.adj.clone(),
            atomic: false,
        })
    }
}

impl MaximalSpliceDiagram {
    /// Weights every end of every vertex with the determinant of the piece
    /// cut off at that end (the component of the far endpoint).
    fn from_plumbing(delta: &PlumbingDiagram, det: Int) -> Result<Self, Error> {
        let n = delta.vertex_count();
        let names = (0..n).map(|v| delta.name(v).to_string()).collect();
        let edges = delta.edges().to_vec();
        let mut weights = BTreeMap::new();
        for v in 0..n {
            for &u in delta.neighbors(v) {
                let piece = delta.cut_after(v, u)?;
                weights.insert((v, u), piece.det_plumbing().0);
            }
        }
        let adj = build_adj(n, &edges);
        Ok(MaximalSpliceDiagram {
            names,
            edges,
            weights,
            adj,
            det,
        })
    }

    pub fn det(&self) -> &Int {
        &self.det
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Signed weight at the `v` end of the edge toward `toward`.
    pub fn end_weight(&self, v: usize, toward: usize) -> Option<&Int> {
        self.weights.get(&(v, toward))
    }

    /// Signed linking product over the path from `v` to `w` (any vertices):
    /// the product of the end weights adjacent to but not on the path. For
    /// `v == w`, the product of all end weights at `v`.
    pub fn linking_product(&self, v: usize, w: usize) -> Result<Int, Error> {
        if v == w {
            return Ok(self.adj[v]
                .iter()
                .fold(Int::one(), |acc, &u| acc * &self.weights[&(v, u)]));
        }
        let path = tree_path(&self.adj, v, w)
            .ok_or_else(|| Error::Input("vertices are not connected".into()))?;
        let mut product = Int::one();
        for (i, &x) in path.iter().enumerate() {
            for &u in &self.adj[x] {
                let u_precedes = i > 0 && path[i - 1] == u;
                let u_follows = i + 1 < path.len() && path[i + 1] == u;
                if !u_precedes && !u_follows {
                    product *= &self.weights[&(x, u)];
                }
            }
        }
        Ok(product)
    }

    /// Erases valence-2 vertices (concatenating their edges) and drops the
    /// decorations at leaf ends, leaving signed weights at node ends only.
    pub fn erase_to_unnormalized(&self) -> UnnormalizedSpliceDiagram {
        let n = self.vertex_count();
        let keep: Vec<usize> = (0..n).filter(|&v| self.adj[v].len() != 2).collect();
        if !keep.iter().any(|&v| self.adj[v].len() >= 3) {
            return UnnormalizedSpliceDiagram::atomic(self.det.clone());
        }
        let mut to_new = vec![usize::MAX; n];
        for (i, &v) in keep.iter().enumerate() {
            to_new[v] = i;
        }
        let names: Vec<String> = keep.iter().map(|&v| self.names[v].clone()).collect();
        let is_node: Vec<bool> = keep.iter().map(|&v| self.adj[v].len() >= 3).collect();
        let mut edge_set = BTreeSet::new();
        let mut weights = BTreeMap::new();
        for &v in &keep {
            if self.adj[v].len() < 3 {
                continue;
            }
            for &first in &self.adj[v] {
                // Walk through valence-2 vertices to the terminal kept vertex.
                let (mut prev, mut cur) = (v, first);
                while self.adj[cur].len() == 2 {
                    let next = *self.adj[cur].iter().find(|&&x| x != prev).expect("valence 2");
                    prev = cur;
                    cur = next;
                }
                let (a, b) = (to_new[v], to_new[cur]);
                edge_set.insert((a.min(b), a.max(b)));
                weights.insert((a, b), self.weights[&(v, first)].clone());
            }
        }
        let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
        let adj = build_adj(names.len(), &edges);
        UnnormalizedSpliceDiagram {
            names,
            is_node,
            edges,
            weights,
            adj,
            det: self.det.clone(),
            atomic: false,
        }
    }
}

/// Computes the unnormalized diagram directly from cut determinants, without
/// going through the maximal diagram.
fn direct_unnormalized(
    delta: &PlumbingDiagram,
    det: Int,
) -> Result<UnnormalizedSpliceDiagram, Error> {
    let n = delta.vertex_count();
    let keep: Vec<usize> = (0..n).filter(|&v| delta.valence(v) != 2).collect();
    if !keep.iter().any(|&v| delta.valence(v) >= 3) {
        return Ok(UnnormalizedSpliceDiagram::atomic(det));
    }
    let mut to_new = vec![usize::MAX; n];
    for (i, &v) in keep.iter().enumerate() {
        to_new[v] = i;
    }
    let names: Vec<String> = keep.iter().map(|&v| delta.name(v).to_string()).collect();
    let is_node: Vec<bool> = keep.iter().map(|&v| delta.valence(v) >= 3).collect();
    let mut edge_set = BTreeSet::new();
    let mut weights = BTreeMap::new();
    for &v in &keep {
        if delta.valence(v) < 3 {
            continue;
        }
        for &first in delta.neighbors(v) {
            let (string, terminal) = delta.walk_string(v, first);
            let other = terminal.unwrap_or_else(|| *string.last().expect("leaf walk"));
            let (a, b) = (to_new[v], to_new[other]);
            edge_set.insert((a.min(b), a.max(b)));
            let side = delta.side_vertices(v, first)?;
            weights.insert((a, b), delta.det_of_subset(&side));
        }
    }
    let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
    let adj = build_adj(names.len(), &edges);
    Ok(UnnormalizedSpliceDiagram {
        names,
        is_node,
        edges,
        weights,
        adj,
        det,
        atomic: false,
    })
}

/// Derives all three splice layers from a validated plumbing diagram with
/// nonzero determinant. The unnormalized diagram is computed twice — directly
/// and by erasing the maximal diagram — and the two must agree exactly.
pub fn splice_from_plumbing(delta: &PlumbingDiagram) -> Result<SpliceBundle, Error> {
    delta
        .validate_normal_form()
        .map_err(|v| Error::Input(v.to_string()))?;
    let (det, _) = delta.det_plumbing();
    if det.is_zero() {
        return Err(Error::Input(
            "plumbing determinant is zero; the manifold is not a rational homology sphere".into(),
        ));
    }
    let maximal = MaximalSpliceDiagram::from_plumbing(delta, det.clone())?;
    let direct = direct_unnormalized(delta, det)?;
    let erased = maximal.erase_to_unnormalized();
    if direct != erased {
        return Err(Error::Inconsistency(
            "direct splice derivation disagrees with the erased maximal diagram".into(),
        ));
    }
    let splice = direct.normalize()?;
    if !splice.is_atomic() {
        if let Err(violation) = splice.validate() {
            return Err(Error::Inconsistency(format!(
                "derived splice diagram fails validation: {violation}"
            )));
        }
    }
    Ok(SpliceBundle {
        splice,
        unnormalized: direct,
        maximal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{inverse_exact, Rat};
    use crate::fixtures;

    fn int(x: i64) -> Int {
        Int::from(x)
    }

    #[test]
    fn e8_derivation() {
        let bundle = splice_from_plumbing(&fixtures::e8()).unwrap();
        let g = &bundle.splice;
        assert!(!g.is_atomic());
        assert_eq!(g.nodes().len(), 1);
        assert_eq!(g.leaves().len(), 3);
        let c = g.vertex_index("c").unwrap();
        assert_eq!(g.sign(c), 1);
        let mut ws: Vec<Int> = g.neighbors(c).iter().map(|&u| g.end_weight(c, u).unwrap().clone()).collect();
        ws.sort();
        assert_eq!(ws, vec![int(2), int(3), int(5)]);
        assert!(g.pairwise_coprime_at_nodes());
        assert_eq!(bundle.det(), &int(1));
    }

    #[test]
    fn dumbbell_derivation() {
        let bundle = splice_from_plumbing(&fixtures::dumbbell48()).unwrap();
        let g = &bundle.splice;
        assert_eq!(g.nodes().len(), 2);
        assert_eq!(g.leaves().len(), 4);
        let u = g.vertex_index("u").unwrap();
        let w = g.vertex_index("w").unwrap();
        assert_eq!((g.sign(u), g.sign(w)), (1, 1));
        assert_eq!(g.end_weight(u, w).unwrap(), &int(8));
        assert_eq!(g.end_weight(w, u).unwrap(), &int(8));
        for &leaf in &["l1", "l2"] {
            let l = g.vertex_index(leaf).unwrap();
            assert_eq!(g.end_weight(u, l).unwrap(), &int(2));
        }
        assert_eq!(g.edge_determinant(u, w).unwrap(), int(48));
        assert!(!g.pairwise_coprime_at_nodes());

        let gu = &bundle.unnormalized;
        let uu = gu.vertex_index("u").unwrap();
        let uw = gu.vertex_index("w").unwrap();
        assert_eq!(gu.edge_determinant(uu, uw).unwrap(), int(48));
        assert_eq!(gu.det(), &int(48));

        // Edge determinants on leaf edges are refused.
        let l1 = g.vertex_index("l1").unwrap();
        assert!(g.edge_determinant(u, l1).is_err());
    }

    #[test]
    fn strings_are_atomic() {
        let path = fixtures::star(-2, &[&[-2, -3]]);
        let bundle = splice_from_plumbing(&path).unwrap();
        assert!(bundle.splice.is_atomic());
        assert!(bundle.unnormalized.is_atomic());

        let single = crate::plumbing::PlumbingDiagram::from_parts(&[("a", -3)], &[]).unwrap();
        assert!(splice_from_plumbing(&single).unwrap().splice.is_atomic());
    }

    #[test]
    fn zero_weight_pair_derivation() {
        let bundle = splice_from_plumbing(&fixtures::zero_weight_pair()).unwrap();
        let g = &bundle.splice;
        let v0 = g.vertex_index("v0").unwrap();
        let v1 = g.vertex_index("v1").unwrap();
        assert_eq!((g.sign(v0), g.sign(v1)), (-1, -1));
        assert_eq!(g.end_weight(v0, v1).unwrap(), &int(0));
        assert_eq!(g.end_weight(v1, v0).unwrap(), &int(0));
        assert!(g.validate().is_ok());
        assert_eq!(g.edge_determinant(v0, v1).unwrap(), int(-16));
        let gu = &bundle.unnormalized;
        let w0 = gu.vertex_index("v0").unwrap();
        let w1 = gu.vertex_index("v1").unwrap();
        assert_eq!(gu.edge_determinant(w0, w1).unwrap(), int(-16));
        assert_eq!(bundle.det(), &int(-16));
    }

    #[test]
    fn hand_built_mixed_sign_diagram() {
        let g = fixtures::mixed_sign_splice();
        assert!(g.validate().is_ok());
        let v1 = g.vertex_index("v1").unwrap();
        let v2 = g.vertex_index("v2").unwrap();
        let v3 = g.vertex_index("v3").unwrap();
        assert_eq!(g.edge_determinant(v1, v2).unwrap(), int(430));
        assert_eq!(g.edge_determinant(v2, v3).unwrap(), int(432));
        assert_eq!(g.linking_product(v1, v3).unwrap(), int(630));
        assert!(!g.pairwise_coprime_at_nodes());
    }

    #[test]
    fn linking_products_on_dumbbell() {
        let bundle = splice_from_plumbing(&fixtures::dumbbell48()).unwrap();
        let g = &bundle.splice;
        let u = g.vertex_index("u").unwrap();
        let w = g.vertex_index("w").unwrap();
        assert_eq!(g.linking_product(u, w).unwrap(), int(16));
        assert_eq!(g.linking_product(u, u).unwrap(), int(32));
        let l1 = g.vertex_index("l1").unwrap();
        assert!(g.linking_product(u, l1).is_err());
    }

    #[test]
    fn coprime_single_node() {
        let g = SpliceDiagram::from_parts(
            &[("n", 1)],
            &["a", "b", "c"],
            &[
                ("n", "a", Some(2), None),
                ("n", "b", Some(3), None),
                ("n", "c", Some(5), None),
            ],
        )
        .unwrap();
        assert!(g.pairwise_coprime_at_nodes());
    }

    #[test]
    fn validation_violations() {
        let zero_leaf = SpliceDiagram::from_parts(
            &[("n", 1)],
            &["a", "b", "c"],
            &[
                ("n", "a", Some(0), None),
                ("n", "b", Some(3), None),
                ("n", "c", Some(5), None),
            ],
        )
        .unwrap();
        assert_eq!(
            zero_leaf.validate(),
            Err(SpliceViolation::ZeroLeafEdgeWeight { leaf: "a".into() })
        );

        let two_zeros = SpliceDiagram::from_parts(
            &[("n", 1), ("m", 1), ("k", 1)],
            &["a1", "a2", "b1", "b2", "c1", "c2"],
            &[
                ("n", "a1", Some(2), None),
                ("n", "a2", Some(3), None),
                ("m", "b1", Some(2), None),
                ("m", "b2", Some(3), None),
                ("k", "c1", Some(2), None),
                ("k", "c2", Some(3), None),
                ("n", "m", Some(0), Some(5)),
                ("n", "k", Some(0), Some(5)),
            ],
        )
        .unwrap();
        assert_eq!(
            two_zeros.validate(),
            Err(SpliceViolation::MultipleZeroWeightsAtNode { node: "n".into() })
        );

        let valence_two = SpliceDiagram::from_parts(
            &[("n", 1)],
            &["a", "b"],
            &[("n", "a", Some(2), None), ("n", "b", Some(3), None)],
        )
        .unwrap();
        assert_eq!(
            valence_two.validate(),
            Err(SpliceViolation::ValenceTwoVertex { vertex: "n".into() })
        );
    }

    #[test]
    fn sees_relation() {
        let bundle = splice_from_plumbing(&fixtures::dumbbell48()).unwrap();
        let g = &bundle.splice;
        let u = g.vertex_index("u").unwrap();
        let w = g.vertex_index("w").unwrap();
        let l1 = g.vertex_index("l1").unwrap();
        assert!(g.sees(w, u, l1).unwrap());
        assert!(!g.sees(u, w, l1).unwrap());
        assert!(g.sees(u, l1, l1).unwrap());
        assert!(!g.sees(u, g.vertex_index("l2").unwrap(), l1).unwrap());
    }

    #[test]
    fn orbifold_adjustment() {
        let bundle = splice_from_plumbing(&fixtures::dumbbell48()).unwrap();
        let g = &bundle.splice;

        let (same, p) = g.orbifold_adjust(&OrbifoldDecoration::trivial()).unwrap();
        assert_eq!(&same, g);
        assert_eq!(p, int(1));

        let deco = OrbifoldDecoration::from_names(g, &[("l1", 3)]).unwrap();
        let (adj, p) = g.orbifold_adjust(&deco).unwrap();
        assert_eq!(p, int(3));
        let u = adj.vertex_index("u").unwrap();
        let w = adj.vertex_index("w").unwrap();
        let l1 = adj.vertex_index("l1").unwrap();
        let l2 = adj.vertex_index("l2").unwrap();
        let r1 = adj.vertex_index("r1").unwrap();
        assert_eq!(adj.end_weight(u, l1).unwrap(), &int(6));
        assert_eq!(adj.end_weight(u, l2).unwrap(), &int(2));
        assert_eq!(adj.end_weight(u, w).unwrap(), &int(8));
        assert_eq!(adj.end_weight(w, u).unwrap(), &int(24));
        assert_eq!(adj.end_weight(w, r1).unwrap(), &int(2));
        // Every edge determinant picks up exactly one factor of 3.
        assert_eq!(adj.edge_determinant(u, w).unwrap(), int(144));

        let e8 = splice_from_plumbing(&fixtures::e8()).unwrap().splice;
        let deco = OrbifoldDecoration::from_names(&e8, &[("a2_3", 2)]).unwrap();
        let (adj, p) = e8.orbifold_adjust(&deco).unwrap();
        assert_eq!(p, int(2));
        let c = adj.vertex_index("c").unwrap();
        let mut ws: Vec<Int> = adj
            .neighbors(c)
            .iter()
            .map(|&x| adj.end_weight(c, x).unwrap().clone())
            .collect();
        ws.sort();
        assert_eq!(ws, vec![int(2), int(3), int(10)]);

        // Degree > 1 on a zero-weight leaf is refused.
        let with_zero_leaf = SpliceDiagram::from_parts(
            &[("n", 1)],
            &["a", "b", "z"],
            &[
                ("n", "a", Some(2), None),
                ("n", "b", Some(3), None),
                ("n", "z", Some(0), None),
            ],
        )
        .unwrap();
        assert!(OrbifoldDecoration::from_names(&with_zero_leaf, &[("z", 2)]).is_err());
    }

    #[test]
    fn maximal_end_weights_and_linking() {
        let d = fixtures::dumbbell48();
        let bundle = splice_from_plumbing(&d).unwrap();
        let m = &bundle.maximal;
        let u = m.vertex_index("u").unwrap();
        let w = m.vertex_index("w").unwrap();
        let l1 = m.vertex_index("l1").unwrap();
        assert_eq!(m.end_weight(u, w).unwrap(), &int(8));
        assert_eq!(m.end_weight(u, l1).unwrap(), &int(2));
        assert_eq!(m.end_weight(l1, u).unwrap(), &int(32));
        assert_eq!(m.linking_product(u, w).unwrap(), int(16));
        assert_eq!(m.linking_product(u, u).unwrap(), int(32));
    }

    // The signed linking product over the maximal diagram divided by det(-A)
    // equals the corresponding entry of (-A)^{-1}, for every vertex pair.
    #[test]
    fn linking_identity_on_fixtures() {
        for d in [fixtures::dumbbell48(), fixtures::e8(), fixtures::zero_weight_pair()] {
            let bundle = splice_from_plumbing(&d).unwrap();
            let m = &bundle.maximal;
            let neg_a = d.intersection_matrix().negated();
            let inv = inverse_exact(&neg_a).unwrap();
            let det = Rat::from_integer(m.det().clone());
            for v in 0..d.vertex_count() {
                for w in 0..d.vertex_count() {
                    let lk = Rat::from_integer(m.linking_product(v, w).unwrap()) / det.clone();
                    assert_eq!(&lk, inv.get(v, w), "pair {v},{w} in {}", d.name(0));
                }
            }
        }
        // In particular the self-linking at a node with a zero end weight is 0.
        let z = fixtures::zero_weight_pair();
        let bundle = splice_from_plumbing(&z).unwrap();
        let v0 = bundle.maximal.vertex_index("v0").unwrap();
        assert_eq!(bundle.maximal.linking_product(v0, v0).unwrap(), int(0));
    }

    // D~ equals det(-A) times the string determinant of the cut path, and
    // D = sign(r0~) sign(r1~) D~ whenever both central weights are nonzero.
    #[test]
    fn edge_determinant_relations() {
        for string in [&[][..], &[-2][..], &[-2, -3][..], &[-4][..]] {
            let d = if string.is_empty() {
                fixtures::dumbbell48()
            } else {
                fixtures::two_nodes_through_string(string)
            };
            let bundle = splice_from_plumbing(&d).unwrap();
            let g = &bundle.splice;
            let gu = &bundle.unnormalized;
            let (n1, n2) = if string.is_empty() { ("u", "w") } else { ("n1", "n2") };
            let v = gu.vertex_index(n1).unwrap();
            let w = gu.vertex_index(n2).unwrap();
            let d_tilde = gu.edge_determinant(v, w).unwrap();
            let p = d
                .string_determinant(d.vertex_index(n1).unwrap(), d.vertex_index(n2).unwrap())
                .unwrap();
            assert_eq!(&d_tilde, &(gu.det() * &p));
            let r0 = gu.end_weight(v, w).unwrap();
            let r1 = gu.end_weight(w, v).unwrap();
            if !r0.is_zero() && !r1.is_zero() {
                let sv = g.vertex_index(n1).unwrap();
                let sw = g.vertex_index(n2).unwrap();
                let d_norm = g.edge_determinant(sv, sw).unwrap();
                assert_eq!(
                    d_norm,
                    Int::from((sign_of(r0) * sign_of(r1)) as i64) * &d_tilde
                );
            }
        }
    }

    // Derivation succeeds on random normal-form diagrams; normalized weights
    // are the absolute signed ones, leaf weights are at least 2, and no node
    // carries two zero end weights.
    #[test]
    fn derivation_properties_on_random_diagrams() {
        for seed in 0..60u64 {
            let d = crate::plumbing::PlumbingDiagram::random_normal_form(seed, 10);
            let bundle = splice_from_plumbing(&d).expect("derivation");
            let g = &bundle.splice;
            if g.is_atomic() {
                continue;
            }
            assert!(g.validate().is_ok(), "seed {seed}");
            let gu = &bundle.unnormalized;
            for v in g.nodes() {
                for &u in g.neighbors(v) {
                    let normalized = g.end_weight(v, u).unwrap();
                    let w_name = g.name(v).to_string();
                    let u_name = g.name(u).to_string();
                    let uv = gu.vertex_index(&w_name).unwrap();
                    let uu = gu.vertex_index(&u_name).unwrap();
                    let signed = gu.end_weight(uv, uu).unwrap();
                    assert_eq!(normalized, &signed.abs(), "seed {seed}");
                    if !g.is_node(u) {
                        assert!(normalized >= &int(2), "seed {seed}: leaf weight too small");
                    }
                }
            }
        }
    }

    #[test]
    fn zero_det_is_rejected() {
        // Center -2 with four single -2 arms: e = -2 + 4/2 = 0, so det = 0.
        let d = fixtures::star(-2, &[&[-2], &[-2], &[-2], &[-2]]);
        assert!(d.det_plumbing().0.is_zero());
        match splice_from_plumbing(&d) {
            Err(Error::Input(_)) => {}
            other => panic!("expected input error, got {other:?}"),
        }
    }
}
