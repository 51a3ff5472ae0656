//! Plumbing diagrams: weighted trees describing graph manifolds.
//!
//! Every vertex carries an Euler weight (genus is always 0 here, so it is not
//! stored); edges are unordered and unweighted. Normal form requires the
//! graph to be a tree and every vertex of valence at most 2 to have weight at
//! most -2; node weights are unconstrained. All derived quantities
//! (intersection matrix, determinants, Seifert data) are exact.

use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{cf_eval, cf_numerators, det_exact, ExactMatrix, Int, Rat};
use crate::Error;

/// A plumbing diagram: vertices with integer Euler weights joined into a
/// graph (a tree once validated). Vertex identity is the index; names are
/// kept for I/O and error messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingDiagram {
    names: Vec<String>,
    weights: Vec<i64>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

/// Why a diagram fails normal-form validation; names the offending element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalFormViolation {
    NotConnected,
    HasCycle,
    /// A vertex of valence <= 2 has weight > -2.
    StringWeightAboveMinusTwo { vertex: String, weight: i64 },
}

impl fmt::Display for NormalFormViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalFormViolation::NotConnected => write!(f, "diagram is not connected"),
            NormalFormViolation::HasCycle => write!(f, "diagram contains a cycle"),
            NormalFormViolation::StringWeightAboveMinusTwo { vertex, weight } => write!(
                f,
                "string vertex `{vertex}` has weight {weight}; valence <= 2 requires weight <= -2"
            ),
        }
    }
}

impl PlumbingDiagram {
    /// Builds a diagram from named vertices and edges. Rejects duplicate
    /// names, unknown endpoints, self-loops and duplicate edges; tree-ness is
    /// checked separately by [`validate_normal_form`](Self::validate_normal_form).
    pub fn new(
        vertices: Vec<(String, i64)>,
        edges: Vec<(String, String)>,
    ) -> Result<Self, Error> {
        if vertices.is_empty() {
            return Err(Error::Input("diagram needs at least one vertex".into()));
        }
        let mut names = Vec::with_capacity(vertices.len());
        let mut weights = Vec::with_capacity(vertices.len());
        for (name, w) in vertices {
            if names.contains(&name) {
                return Err(Error::Input(format!("duplicate vertex id `{name}`")));
            }
            names.push(name);
            weights.push(w);
        }
        let lookup = |name: &str| -> Result<usize, Error> {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Input(format!("edge endpoint `{name}` is not a vertex")))
        };
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (a, b) in &edges {
            let (ia, ib) = (lookup(a)?, lookup(b)?);
            if ia == ib {
                return Err(Error::Input(format!("self-loop at vertex `{a}`")));
            }
            let e = (ia.min(ib), ia.max(ib));
            if idx_edges.contains(&e) {
                return Err(Error::Input(format!("duplicate edge `{a}`-`{b}`")));
            }
            idx_edges.push(e);
        }
        let mut adj = vec![Vec::new(); names.len()];
        for &(a, b) in &idx_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        Ok(PlumbingDiagram {
            names,
            weights,
            edges: idx_edges,
            adj,
        })
    }

    /// Convenience constructor from string slices.
    pub fn from_parts(vertices: &[(&str, i64)], edges: &[(&str, &str)]) -> Result<Self, Error> {
        Self::new(
            vertices
                .iter()
                .map(|&(n, w)| (n.to_string(), w))
                .collect(),
            edges
                .iter()
                .map(|&(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn weight(&self, v: usize) -> i64 {
        self.weights[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn valence(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Vertices of valence at least 3: the nodes of the splice diagram.
    pub fn nodes(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| self.valence(v) >= 3)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// Checks the two normal-form constraints: the graph is a tree and every
    /// valence-<=2 vertex has weight <= -2.
    pub fn validate_normal_form(&self) -> Result<(), NormalFormViolation> {
        if !self.is_connected() {
            return Err(NormalFormViolation::NotConnected);
        }
        if self.edges.len() != self.vertex_count() - 1 {
            return Err(NormalFormViolation::HasCycle);
        }
        for v in 0..self.vertex_count() {
            if self.valence(v) <= 2 && self.weights[v] > -2 {
                return Err(NormalFormViolation::StringWeightAboveMinusTwo {
                    vertex: self.names[v].clone(),
                    weight: self.weights[v],
                });
            }
        }
        Ok(())
    }

    /// The symmetric intersection matrix A: Euler weights on the diagonal and
    /// 1 for each edge.
    pub fn intersection_matrix(&self) -> ExactMatrix {
        let n = self.vertex_count();
        let mut m = ExactMatrix::zeros(n, n);
        for v in 0..n {
            m.set(v, v, Rat::from_integer(Int::from(self.weights[v])));
        }
        for &(a, b) in &self.edges {
            m.set(a, b, Rat::from_integer(Int::from(1)));
            m.set(b, a, Rat::from_integer(Int::from(1)));
        }
        m
    }

    /// Determinant of the vertex-induced submatrix of -A; the empty set gives 1.
    pub fn det_of_subset(&self, verts: &[usize]) -> Int {
        let k = verts.len();
        let mut m = ExactMatrix::zeros(k, k);
        for (i, &v) in verts.iter().enumerate() {
            m.set(i, i, Rat::from_integer(Int::from(-self.weights[v])));
            for (j, &w) in verts.iter().enumerate() {
                if i != j && self.adj[v].contains(&w) {
                    m.set(i, j, Rat::from_integer(Int::from(-1)));
                }
            }
        }
        det_exact(&m).expect("square by construction").to_integer()
    }

    /// `det(-A)` together with `|det|`, the order of the first homology group
    /// (0 encodes an infinite group).
    pub fn det_plumbing(&self) -> (Int, Int) {
        let all: Vec<usize> = (0..self.vertex_count()).collect();
        let d = self.det_of_subset(&all);
        let h1 = d.abs();
        (d, h1)
    }

    /// Vertex set of the connected component of `Δ - {edge (v, toward)}`
    /// containing `toward`.
    pub fn side_vertices(&self, v: usize, toward: usize) -> Result<Vec<usize>, Error> {
        if !self.adj[v].contains(&toward) {
            return Err(Error::Input(format!(
                "`{}`-`{}` is not an edge",
                self.names[v], self.names[toward]
            )));
        }
        let mut seen = vec![false; self.vertex_count()];
        seen[v] = true;
        seen[toward] = true;
        let mut order = vec![toward];
        let mut stack = vec![toward];
        while let Some(x) = stack.pop() {
            for &w in self.neighbors(x) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                    stack.push(w);
                }
            }
        }
        order.sort_unstable();
        Ok(order)
    }

    /// The piece of the diagram obtained by cutting just after `v` on the
    /// edge toward `toward`: the component of the far endpoint, with all its
    /// weights and edges.
    pub fn cut_after(&self, v: usize, toward: usize) -> Result<PlumbingDiagram, Error> {
        let side = self.side_vertices(v, toward)?;
        let keep: Vec<bool> = {
            let mut k = vec![false; self.vertex_count()];
            for &x in &side {
                k[x] = true;
            }
            k
        };
        let vertices: Vec<(String, i64)> = side
            .iter()
            .map(|&x| (self.names[x].clone(), self.weights[x]))
            .collect();
        let edges: Vec<(String, String)> = self
            .edges
            .iter()
            .filter(|&&(a, b)| keep[a] && keep[b])
            .map(|&(a, b)| (self.names[a].clone(), self.names[b].clone()))
            .collect();
        PlumbingDiagram::new(vertices, edges)
    }

    /// Walks from `v` along the edge toward `first`, collecting consecutive
    /// valence-<=2 vertices. Returns the collected vertices and the node the
    /// walk ran into, if any (`None` means the walk ended at a leaf).
    pub fn walk_string(&self, v: usize, first: usize) -> (Vec<usize>, Option<usize>) {
        let mut prev = v;
        let mut cur = first;
        let mut string = Vec::new();
        loop {
            if self.valence(cur) >= 3 {
                return (string, Some(cur));
            }
            string.push(cur);
            match self.neighbors(cur).iter().find(|&&w| w != prev) {
                Some(&next) => {
                    prev = cur;
                    cur = next;
                }
                None => return (string, None),
            }
        }
    }

    /// Seifert data of a star-shaped diagram read at its center: for each arm
    /// with outward negated weights `c_1, ..., c_a`, the pair is
    /// `(numerator[c_1..c_a], numerator[c_2..c_a])`, and
    /// `e = b + sum beta_i/alpha_i` with `b` the center weight.
    pub fn seifert_data(&self, center: usize) -> Result<SeifertData, Error> {
        let nodes = self.nodes();
        let is_star = match nodes.len() {
            0 => self.vertex_count() == 1 && center == 0,
            1 => nodes[0] == center,
            _ => false,
        };
        if !is_star {
            return Err(Error::Input(
                "seifert data requires a star-shaped diagram read at its center".into(),
            ));
        }
        let b = self.weights[center];
        let mut pairs = Vec::new();
        let mut e = Rat::from_integer(Int::from(b));
        for &first in self.neighbors(center) {
            let (string, node) = self.walk_string(center, first);
            if node.is_some() {
                return Err(Error::Input("arm runs into another node".into()));
            }
            let values: Vec<Int> = string.iter().map(|&x| Int::from(-self.weights[x])).collect();
            let alpha = cf_numerators(&values).last().unwrap().clone();
            let beta = cf_numerators(&values[1..]).last().unwrap().clone();
            e += Rat::new(beta.clone(), alpha.clone());
            pairs.push((alpha, beta));
        }
        Ok(SeifertData { b, pairs, e })
    }

    /// Rational Euler number of the Seifert piece at node `v`, read from the
    /// plumbing weights: `e = b + sum over emanating directions of
    /// 1/[outward string values]`, where a direction toward another node uses
    /// only the vertices strictly between (an empty string contributes 0) and
    /// a direction toward a leaf uses the whole arm.
    pub fn node_euler_from_plumbing(&self, v: usize) -> Result<Rat, Error> {
        if self.valence(v) < 3 && self.vertex_count() > 1 {
            return Err(Error::Input(format!(
                "`{}` is not a node (valence {})",
                self.names[v],
                self.valence(v)
            )));
        }
        let mut e = Rat::from_integer(Int::from(self.weights[v]));
        for &first in self.neighbors(v) {
            let (string, _node) = self.walk_string(v, first);
            let values: Vec<Int> = string.iter().map(|&x| Int::from(-self.weights[x])).collect();
            e += cf_eval(&values)?.reciprocal_or_zero()?;
        }
        Ok(e)
    }

    /// Determinant of -A restricted to the string strictly between the nodes
    /// `v` and `w`; an empty string gives 1. Errors when the two are not
    /// joined by a string of valence-2 vertices.
    pub fn string_determinant(&self, v: usize, w: usize) -> Result<Int, Error> {
        for &first in self.neighbors(v) {
            let (string, node) = self.walk_string(v, first);
            if node == Some(w) {
                return Ok(self.det_of_subset(&string));
            }
        }
        Err(Error::Input(format!(
            "nodes `{}` and `{}` are not joined by a string",
            self.names[v], self.names[w]
        )))
    }

    /// Deterministic random normal-form tree: same seed, same diagram. The
    /// output always validates and has nonzero determinant (degenerate draws
    /// are resampled). Strings get weights in [-5,-2], nodes in [-5,-1].
    pub fn random_normal_form(seed: u64, max_vertices: usize) -> PlumbingDiagram {
        Self::random_with_min_nodes(seed, max_vertices, 0)
    }

    /// Like [`random_normal_form`](Self::random_normal_form) but resamples
    /// until the diagram has at least `min_nodes` vertices of valence >= 3.
    pub fn random_with_min_nodes(
        seed: u64,
        max_vertices: usize,
        min_nodes: usize,
    ) -> PlumbingDiagram {
        let max_vertices = max_vertices.max(min_nodes.max(1) * 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let lo = (min_nodes.max(1) * 4).min(max_vertices);
            let n = rng.gen_range(lo..=max_vertices);
            let mut edges = Vec::new();
            for i in 1..n {
                let parent = rng.gen_range(0..i);
                edges.push((parent, i));
            }
            let mut valence = vec![0usize; n];
            for &(a, b) in &edges {
                valence[a] += 1;
                valence[b] += 1;
            }
            let weights: Vec<i64> = (0..n)
                .map(|v| {
                    if valence[v] >= 3 {
                        -rng.gen_range(1..=5)
                    } else {
                        -rng.gen_range(2..=5)
                    }
                })
                .collect();
            let diagram = PlumbingDiagram::new(
                (0..n).map(|v| (format!("v{v}"), weights[v])).collect(),
                edges
                    .iter()
                    .map(|&(a, b)| (format!("v{a}"), format!("v{b}")))
                    .collect(),
            )
            .expect("generated vertices and edges are well formed");
            debug_assert!(diagram.validate_normal_form().is_ok());
            if diagram.nodes().len() < min_nodes {
                continue;
            }
            let (det, _) = diagram.det_plumbing();
            if det.is_zero() {
                continue;
            }
            return diagram;
        }
    }
}

/// Seifert invariants of a star-shaped plumbing: center weight `b`, one
/// `(alpha, beta)` pair per arm and the rational Euler number
/// `e = b + sum beta_i/alpha_i`.
///
/// `beta` is reported straight from the outward-tail continued fraction;
/// `gcd(alpha, beta) > 1` is permitted and flags orbifold data rather than
/// being normalized away.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertData {
    pub b: i64,
    pub pairs: Vec<(Int, Int)>,
    pub e: Rat,
}
