//! Command-line front end: plumbing text parsing and serialization, JSON
//! reports and DOT renderings, and the randomized cross-validation suites.
//!
//! All JSON output is deterministic: keys are emitted in sorted order, graph
//! elements follow the input order, and integers that may exceed native
//! precision are emitted as strings of decimal digits (rationals as
//! `numerator/denominator`).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_traits::{One, Signed};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::cover::{ideal_generator, root_piece, split_at_edge, uac_plan, zhs_check};
use crate::cover::{CoverPieceData, CoverSplit, PresentedPiece, UacDescriptor};
use crate::exact::{
    inverse_exact, is_positive_definite, positive_definite_by_elimination, ExactMatrix, Int, Rat,
};
use crate::invariants::{
    decomposition_graph_checked, euler_number, fiber_pairing, linking_number, DecompositionGraph,
    ReducedPlumbingMatrix,
};
use crate::plumbing::PlumbingDiagram;
use crate::singularity::{is_singularity_link, Certificate, SingularityVerdict};
use crate::splice::{splice_from_plumbing, SpliceBundle, SpliceDiagram};
use crate::Error;

/// Parses the plumbing line grammar: `v <id> <weight>` declares a vertex,
/// `e <id> <id>` an edge between declared vertices, `#` starts a comment,
/// blank lines are ignored. Errors carry 1-based line numbers.
pub fn parse_plumbing(text: &str) -> Result<PlumbingDiagram, Error> {
    let mut vertices: Vec<(String, i64)> = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "v" => {
                if tokens.len() != 3 {
                    return Err(Error::Input(format!(
                        "line {lineno}: expected `v <id> <weight>`"
                    )));
                }
                let id = tokens[1];
                if vertices.iter().any(|(n, _)| n == id) {
                    return Err(Error::Input(format!(
                        "line {lineno}: duplicate vertex `{id}`"
                    )));
                }
                let weight: i64 = tokens[2].parse().map_err(|_| {
                    Error::Input(format!(
                        "line {lineno}: weight `{}` is not an integer",
                        tokens[2]
                    ))
                })?;
                vertices.push((id.to_string(), weight));
            }
            "e" => {
                if tokens.len() != 3 {
                    return Err(Error::Input(format!(
                        "line {lineno}: expected `e <id> <id>`"
                    )));
                }
                for id in [tokens[1], tokens[2]] {
                    if !vertices.iter().any(|(n, _)| n == id) {
                        return Err(Error::Input(format!(
                            "line {lineno}: edge endpoint `{id}` is not a declared vertex"
                        )));
                    }
                }
                edges.push((tokens[1].to_string(), tokens[2].to_string()));
            }
            other => {
                return Err(Error::Input(format!(
                    "line {lineno}: unknown directive `{other}` (expected `v` or `e`)"
                )));
            }
        }
    }
    PlumbingDiagram::new(vertices, edges)
}

/// Serializes a plumbing back into the line grammar; `parse_plumbing` of the
/// result reproduces the diagram.
pub fn serialize_plumbing(delta: &PlumbingDiagram) -> String {
    let mut out = String::new();
    for v in 0..delta.vertex_count() {
        out.push_str(&format!("v {} {}\n", delta.name(v), delta.weight(v)));
    }
    for &(a, b) in delta.edges() {
        out.push_str(&format!("e {} {}\n", delta.name(a), delta.name(b)));
    }
    out
}

fn int_json(x: &Int) -> Value {
    Value::String(x.to_string())
}

fn rat_json(x: &Rat) -> Value {
    if x.denom().is_one() {
        Value::String(x.numer().to_string())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

/// Splice diagram as JSON: `nodes` with signs, `leaves`, and `edges` whose
/// `wa`/`wb` are the end weights at `a`/`b` (null at leaf ends).
pub fn splice_json(g: &SpliceDiagram) -> Value {
    let nodes: Vec<Value> = g
        .nodes()
        .into_iter()
        .map(|v| json!({"id": g.name(v), "sign": i64::from(g.sign(v))}))
        .collect();
    let leaves: Vec<Value> = g
        .leaves()
        .into_iter()
        .map(|v| Value::String(g.name(v).to_string()))
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            json!({
                "a": g.name(a),
                "b": g.name(b),
                "wa": g.end_weight(a, b).map_or(Value::Null, int_json),
                "wb": g.end_weight(b, a).map_or(Value::Null, int_json),
            })
        })
        .collect();
    json!({"nodes": nodes, "leaves": leaves, "edges": edges})
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::NegativeNodeSign { node } => {
            json!({"type": "negative_node_sign", "node": node})
        }
        Certificate::NonPositiveEdgeDeterminant { a, b, value } => {
            json!({"type": "non_positive_edge_determinant", "a": a, "b": b, "value": int_json(value)})
        }
        Certificate::NonNegativePivot { node, value } => {
            json!({"type": "non_negative_pivot", "node": node, "value": rat_json(value)})
        }
        Certificate::SpliceConditionsHold => json!({"type": "splice_conditions_hold"}),
        Certificate::NegativeDefinite { pivots } => {
            let pivots: Vec<Value> = pivots.iter().map(rat_json).collect();
            json!({"type": "negative_definite", "pivots": pivots})
        }
    }
}

/// Verdict as JSON: `{verdict, route_agreement, certificate}`.
pub fn verdict_json(v: &SingularityVerdict) -> Value {
    // A verdict is only returned when all routes agreed; disagreement is an
    // internal inconsistency and never reaches serialization.
    json!({
        "verdict": v.verdict,
        "route_agreement": true,
        "certificate": certificate_json(&v.certificate),
    })
}

/// Decomposition graph as JSON: per-node Euler numbers and orbifold Euler
/// characteristics, per-edge fiber pairings, and the reduced matrix.
pub fn decomposition_json(graph: &DecompositionGraph, reduced: &ReducedPlumbingMatrix) -> Value {
    let nodes: Vec<Value> = graph
        .node_names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            json!({
                "id": name,
                "euler": rat_json(&graph.euler_numbers[i]),
                "chi_orb": rat_json(&graph.orbifold_chis[i]),
            })
        })
        .collect();
    let edges: Vec<Value> = graph
        .edges
        .iter()
        .map(|(i, j, p)| {
            json!({
                "a": graph.node_names[*i],
                "b": graph.node_names[*j],
                "fiber_pairing": rat_json(p),
            })
        })
        .collect();
    let k = graph.node_names.len();
    let matrix: Vec<Value> = (0..k)
        .map(|i| {
            Value::Array(
                (0..k)
                    .map(|j| rat_json(reduced.matrix.get(i, j)))
                    .collect(),
            )
        })
        .collect();
    json!({"nodes": nodes, "edges": edges, "reduced_matrix": matrix})
}

fn unnormalized_index(bundle: &SpliceBundle, name: &str) -> usize {
    (0..bundle.unnormalized.vertex_count())
        .find(|&i| bundle.unnormalized.name(i) == name)
        .expect("the unnormalized diagram carries the same names")
}

/// Full invariant report of a plumbing file: input digest, determinant and
/// homology order, splice diagram, node-edge determinants with fiber
/// pairings, decomposition graph with reduced matrix, and the
/// singularity-link verdict (the last two are null for diagrams without
/// nodes).
pub fn report_json(text: &str, delta: &PlumbingDiagram) -> Result<Value, Error> {
    let bundle = splice_from_plumbing(delta)?;
    let g = &bundle.splice;
    let mut edge_dets = Vec::new();
    for &(a, b) in g.edges() {
        if !g.is_node(a) || !g.is_node(b) {
            continue;
        }
        let d = g.edge_determinant(a, b)?;
        let ua = unnormalized_index(&bundle, g.name(a));
        let ub = unnormalized_index(&bundle, g.name(b));
        let d_signed = bundle.unnormalized.edge_determinant(ua, ub)?;
        let p = fiber_pairing(&bundle, a, b)?;
        edge_dets.push(json!({
            "a": g.name(a),
            "b": g.name(b),
            "det": int_json(&d),
            "det_signed": int_json(&d_signed),
            "fiber_pairing": rat_json(&p),
        }));
    }
    let (decomposition, singularity) = if g.nodes().is_empty() {
        (Value::Null, Value::Null)
    } else {
        let (graph, reduced) = decomposition_graph_checked(&bundle)?;
        let verdict = is_singularity_link(delta)?;
        (
            decomposition_json(&graph, &reduced),
            verdict_json(&verdict),
        )
    };
    Ok(json!({
        "input_digest": input_digest(text),
        "det": int_json(bundle.det()),
        "h1_order": int_json(&bundle.det().abs()),
        "splice": splice_json(g),
        "edge_determinants": edge_dets,
        "decomposition": decomposition,
        "singularity": singularity,
        "zhs": zhs_check(g),
    }))
}

fn piece_data_json(d: &CoverPieceData) -> Value {
    json!({
        "node": d.node,
        "lambda": int_json(&d.lambda),
        "fiber_degree": int_json(&d.fiber_degree),
        "base_degree": int_json(&d.base_degree),
        "euler_base": rat_json(&d.euler_base),
        "euler_cover": rat_json(&d.euler_cover),
    })
}

fn piece_json(p: &PresentedPiece<'_>) -> Value {
    let g = p.diagram();
    let mut degrees = Map::new();
    for leaf in g.leaves() {
        let d = p.leaf_degree(g.name(leaf));
        if !d.is_one() {
            degrees.insert(g.name(leaf).to_string(), int_json(&d));
        }
    }
    json!({
        "order": int_json(p.order()),
        "diagram": splice_json(g),
        "leaf_degrees": Value::Object(degrees),
    })
}

/// A split as JSON: cut edge, ideal generators, gluing degrees, component
/// counts, per-side covering data and filled pieces.
pub fn cover_split_json(split: &CoverSplit<'_>) -> Value {
    let components = split.components();
    json!({
        "edge": {"a": split.edge.0, "b": split.edge.1},
        "degree": int_json(&split.degree),
        "d0": int_json(&split.d0),
        "d1": int_json(&split.d1),
        "p_glue": [int_json(&split.p_glue.0), int_json(&split.p_glue.1)],
        "components": [int_json(&components.0), int_json(&components.1)],
        "gluing": "complete_bipartite",
        "sides": [
            json!({"data": piece_data_json(&split.data.0), "piece": piece_json(&split.pieces.0)}),
            json!({"data": piece_data_json(&split.data.1), "piece": piece_json(&split.pieces.1)}),
        ],
    })
}

/// Recursive cover plan as JSON.
pub fn uac_json(u: &UacDescriptor) -> Value {
    match u {
        UacDescriptor::Brieskorn {
            weights,
            reversed,
            degree,
        } => {
            let ws: Vec<Value> = weights.iter().map(int_json).collect();
            json!({
                "type": "brieskorn",
                "weights": ws,
                "orientation_reversed": reversed,
                "degree": int_json(degree),
            })
        }
        UacDescriptor::ConnectedSum { summands, degree } => {
            let ss: Vec<Value> = summands.iter().map(int_json).collect();
            json!({
                "type": "connected_sum",
                "summands": ss,
                "degree": int_json(degree),
            })
        }
        UacDescriptor::Split {
            edge,
            degree,
            d0,
            d1,
            p_glue,
            components,
            data,
            children,
        } => json!({
            "type": "split",
            "edge": {"a": edge.0, "b": edge.1},
            "degree": int_json(degree),
            "d0": int_json(d0),
            "d1": int_json(d1),
            "p_glue": [int_json(&p_glue.0), int_json(&p_glue.1)],
            "components": [int_json(&components.0), int_json(&components.1)],
            "gluing": "complete_bipartite",
            "sides": [piece_data_json(&data.0), piece_data_json(&data.1)],
            "children": [uac_json(&children.0), uac_json(&children.1)],
        }),
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT rendering of a splice diagram: node signs as `(+)`/`(-)` labels,
/// boxes for leaves, end weights as tail/head labels on undirected edges.
pub fn splice_dot(g: &SpliceDiagram) -> String {
    let mut out = String::from("digraph splice {\n  edge [dir=none];\n");
    for v in 0..g.vertex_count() {
        if g.is_node(v) {
            let sign = if g.sign(v) == 1 { "+" } else { "-" };
            out.push_str(&format!(
                "  {} [shape=circle, label=\"{} ({sign})\"];\n",
                dot_quote(g.name(v)),
                g.name(v)
            ));
        } else {
            out.push_str(&format!(
                "  {} [shape=box, label=\"{}\"];\n",
                dot_quote(g.name(v)),
                g.name(v)
            ));
        }
    }
    for &(a, b) in g.edges() {
        let mut attrs = Vec::new();
        if let Some(w) = g.end_weight(a, b) {
            attrs.push(format!("taillabel=\"{w}\""));
        }
        if let Some(w) = g.end_weight(b, a) {
            attrs.push(format!("headlabel=\"{w}\""));
        }
        let attrs = if attrs.is_empty() {
            String::new()
        } else {
            format!(" [{}]", attrs.join(", "))
        };
        out.push_str(&format!(
            "  {} -> {}{attrs};\n",
            dot_quote(g.name(a)),
            dot_quote(g.name(b))
        ));
    }
    out.push_str("}\n");
    out
}

/// SHA-256 of the input text, as lower-case hex.
pub fn input_digest(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

// ---------------------------------------------------------------------------
// Randomized cross-validation suites. Each failure carries the seed and a
// reproduction in the plumbing line grammar.

fn with_repro<T>(r: Result<T, Error>, suite: &str, seed: u64, delta: &PlumbingDiagram) -> Result<T, Error> {
    r.map_err(|e| match e {
        Error::Input(msg) => Error::Input(msg),
        Error::Inconsistency(msg) => Error::Inconsistency(format!(
            "{suite} suite, seed {seed}: {msg}\nreproduction:\n{}",
            serialize_plumbing(delta)
        )),
    })
}

fn inconsistency(suite: &str, seed: u64, delta: &PlumbingDiagram, msg: String) -> Error {
    Error::Inconsistency(format!(
        "{suite} suite, seed {seed}: {msg}\nreproduction:\n{}",
        serialize_plumbing(delta)
    ))
}

/// Counts reported by [`fuzz_identities`].
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityCounts {
    pub seeds: u64,
    pub nodes: u64,
    pub node_edges: u64,
    pub linking_pairs: u64,
}

/// Cross-validates, on seeded random normal-form trees: the signed edge
/// determinant against determinant times string determinant, the fiber
/// pairing routes, the Euler number read from the splice diagram against the
/// continued-fraction route on the plumbing, and the inverse intersection
/// matrix against the linking products of the weight-decorated tree.
pub fn fuzz_identities(seeds: u64, max_vertices: usize) -> Result<IdentityCounts, Error> {
    let mut counts = IdentityCounts::default();
    for seed in 0..seeds {
        let delta = PlumbingDiagram::random_normal_form(seed, max_vertices);
        let bundle = with_repro(splice_from_plumbing(&delta), "identities", seed, &delta)?;
        let g = &bundle.splice;
        let d = bundle.det().abs();

        for v in g.nodes() {
            let from_splice = with_repro(euler_number(g, &d, v), "identities", seed, &delta)?;
            let pv = delta.vertex_index(g.name(v)).expect("node name");
            let from_plumbing = delta.node_euler_from_plumbing(pv)?;
            if from_splice != from_plumbing {
                return Err(inconsistency(
                    "identities",
                    seed,
                    &delta,
                    format!(
                        "euler number at `{}`: splice route {from_splice}, plumbing route {from_plumbing}",
                        g.name(v)
                    ),
                ));
            }
            counts.nodes += 1;
        }

        for &(a, b) in g.edges() {
            if !g.is_node(a) || !g.is_node(b) {
                continue;
            }
            with_repro(fiber_pairing(&bundle, a, b), "identities", seed, &delta)?;
            let pa = delta.vertex_index(g.name(a)).expect("node name");
            let pb = delta.vertex_index(g.name(b)).expect("node name");
            let p_string = delta.string_determinant(pa, pb)?;
            let ua = unnormalized_index(&bundle, g.name(a));
            let ub = unnormalized_index(&bundle, g.name(b));
            let d_signed = bundle.unnormalized.edge_determinant(ua, ub)?;
            if d_signed != bundle.det() * &p_string {
                return Err(inconsistency(
                    "identities",
                    seed,
                    &delta,
                    format!(
                        "signed determinant of `{}`-`{}` is {d_signed}, determinant times string determinant is {}",
                        g.name(a),
                        g.name(b),
                        bundle.det() * &p_string
                    ),
                ));
            }
            counts.node_edges += 1;
        }

        // Inverse-matrix route against the linking products, all pairs.
        let a = delta.intersection_matrix();
        let inv = inverse_exact(&a)?;
        let det_signed = bundle.det();
        let n = delta.vertex_count();
        for v in 0..n {
            for w in v..n {
                let from_inverse = -inv.get(v, w).clone();
                let product = bundle.maximal.linking_product(v, w)?;
                let from_products = Rat::new(product, det_signed.clone());
                if from_inverse != from_products {
                    return Err(inconsistency(
                        "identities",
                        seed,
                        &delta,
                        format!(
                            "linking of `{}`,`{}`: inverse route {from_inverse}, product route {from_products}",
                            delta.name(v),
                            delta.name(w)
                        ),
                    ));
                }
                counts.linking_pairs += 1;
            }
        }
        // The public cofactor-based operation on a sample of edges.
        for &(v, w) in delta.edges().iter().take(3) {
            let lk = linking_number(&delta, v, w)?;
            if lk != -inv.get(v, w).clone() {
                return Err(inconsistency(
                    "identities",
                    seed,
                    &delta,
                    format!("cofactor linking of `{}`,`{}` disagrees", delta.name(v), delta.name(w)),
                ));
            }
        }
        counts.seeds += 1;
    }
    Ok(counts)
}

/// Counts reported by [`fuzz_link_criterion`].
#[derive(Clone, Copy, Debug, Default)]
pub struct LinkCriterionCounts {
    pub seeds: u64,
    pub positive: u64,
    pub negative: u64,
}

/// Cross-validates the singularity-link verdict routes on seeded random
/// trees: the splice condition, the reduced-matrix elimination, and the
/// definiteness of the intersection form must agree, and the elimination
/// route must match the leading-minor route on the negated intersection
/// matrix.
pub fn fuzz_link_criterion(seeds: u64, max_vertices: usize) -> Result<LinkCriterionCounts, Error> {
    let mut counts = LinkCriterionCounts::default();
    for seed in 0..seeds {
        let delta = PlumbingDiagram::random_with_min_nodes(seed, max_vertices, 1);
        let verdict = with_repro(is_singularity_link(&delta), "link criterion", seed, &delta)?;
        let a = delta.intersection_matrix();
        let n = delta.vertex_count();
        let mut neg = ExactMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                neg.set(i, j, -a.get(i, j).clone());
            }
        }
        let minors = is_positive_definite(&neg)?;
        let elimination = positive_definite_by_elimination(&neg)?;
        if minors != elimination || minors != verdict.verdict {
            return Err(inconsistency(
                "link criterion",
                seed,
                &delta,
                format!(
                    "verdict {} vs leading minors {minors} vs elimination {elimination}",
                    verdict.verdict
                ),
            ));
        }
        if verdict.verdict {
            counts.positive += 1;
        } else {
            counts.negative += 1;
        }
        counts.seeds += 1;
    }
    Ok(counts)
}

/// Counts reported by [`fuzz_cover`].
#[derive(Clone, Copy, Debug, Default)]
pub struct CoverCounts {
    pub completed: u64,
    pub skipped: u64,
    pub strings: u64,
}

fn plan_conserves_degree(plan: &UacDescriptor) -> Result<(), String> {
    if let UacDescriptor::Split {
        degree,
        d0,
        d1,
        children,
        ..
    } = plan
    {
        if children.0.degree() * d1 != *degree || children.1.degree() * d0 != *degree {
            return Err(format!(
                "degree {degree} is not conserved (children {} x {d1}, {} x {d0})",
                children.0.degree(),
                children.1.degree()
            ));
        }
        plan_conserves_degree(&children.0)?;
        plan_conserves_degree(&children.1)?;
    }
    Ok(())
}

/// Cross-validates the cover machinery on seeded random multi-node trees:
/// runs the full recursive plan (whose construction verifies divisibility,
/// boundary kernels, homology orders, the meridian-order oracle and the
/// Euler degree relation at every level), checks degree conservation, and
/// checks that ideal generators are constant along every string. Diagrams
/// rejected as degenerate count as skipped.
pub fn fuzz_cover(seeds: u64, max_vertices: usize) -> Result<CoverCounts, Error> {
    let mut counts = CoverCounts::default();
    for seed in 0..seeds {
        let delta = PlumbingDiagram::random_with_min_nodes(seed, max_vertices, 2);
        match uac_plan(&delta, &[]) {
            Ok(plan) => {
                plan_conserves_degree(&plan)
                    .map_err(|msg| inconsistency("cover", seed, &delta, msg))?;
                counts.completed += 1;
            }
            Err(Error::Input(_)) => {
                counts.skipped += 1;
            }
            Err(Error::Inconsistency(msg)) => {
                return Err(inconsistency("cover", seed, &delta, msg));
            }
        }
        // Ideal generators along each node-to-node string, both orientations.
        for v in delta.nodes() {
            for &first in delta.neighbors(v) {
                let (string, Some(w)) = delta.walk_string(v, first) else {
                    continue;
                };
                if w < v {
                    continue; // each string once
                }
                let mut path = vec![v];
                path.extend(string);
                path.push(w);
                let forward: Result<Vec<Int>, Error> = path
                    .windows(2)
                    .map(|e| ideal_generator(&delta, e[0], e[1]))
                    .collect();
                let backward: Result<Vec<Int>, Error> = path
                    .windows(2)
                    .map(|e| ideal_generator(&delta, e[1], e[0]))
                    .collect();
                match (forward, backward) {
                    (Ok(fwd), Ok(bwd)) => {
                        if fwd.windows(2).any(|p| p[0] != p[1])
                            || bwd.windows(2).any(|p| p[0] != p[1])
                        {
                            return Err(inconsistency(
                                "cover",
                                seed,
                                &delta,
                                format!(
                                    "ideal generator varies along the string `{}`-`{}`: {fwd:?} / {bwd:?}",
                                    delta.name(v),
                                    delta.name(w)
                                ),
                            ));
                        }
                        counts.strings += 1;
                    }
                    _ => continue,
                }
            }
        }
    }
    Ok(counts)
}

// ---------------------------------------------------------------------------
// Command dispatch.

/// Exact invariants of plumbed 3-manifolds: splice diagrams, singularity-link
/// verdicts, decomposition graphs and universal abelian cover plans.
#[derive(Debug, Parser)]
#[command(name = "plumb", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive the splice diagram and the full invariant report.
    Derive {
        /// Plumbing file in the line grammar (`v id weight`, `e id id`).
        file: PathBuf,
        /// Emit JSON (the default).
        #[arg(long)]
        json: bool,
    },
    /// Decide whether the manifold is a singularity link.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Exit with code 3 when the verdict is negative.
        #[arg(long)]
        strict: bool,
    },
    /// Decomposition graph and reduced plumbing matrix.
    Decomp {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Split the manifold along the torus of a node-to-node edge.
    Cover {
        file: PathBuf,
        /// Cut edge, written `<nodeA>-<nodeB>` with splice-diagram node names.
        #[arg(long)]
        edge: String,
        #[arg(long)]
        json: bool,
    },
    /// Recursive plan of the universal abelian cover.
    Uac {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the randomized cross-validation suites.
    Fuzz {
        /// Number of seeds per suite.
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        /// Upper bound on generated diagram sizes.
        #[arg(long, default_value_t = 12)]
        max_vertices: usize,
    },
    /// Render the derived splice diagram.
    Render {
        file: PathBuf,
        /// Emit DOT (the default).
        #[arg(long)]
        dot: bool,
        /// Emit the splice diagram as JSON instead.
        #[arg(long)]
        json: bool,
    },
}

fn load(path: &Path) -> Result<(String, PlumbingDiagram), Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let delta = parse_plumbing(&text)?;
    Ok((text, delta))
}

// A closed stdout (e.g. piping into `head`) is not a failure for a
// filter-style tool, so broken pipes end the output quietly.
fn write_text(out: &mut dyn Write, text: &str) -> Result<(), Error> {
    match out.write_all(text.as_bytes()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(Error::Input(format!("write failed: {e}"))),
    }
}

fn emit(out: &mut dyn Write, value: &Value) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).expect("value serializes");
    write_text(out, &format!("{text}\n"))
}

/// Resolve an `A-B` edge spec against vertex names of `g`. Vertex names may
/// themselves contain `-`, so every split position is tried.
pub fn parse_edge_spec(spec: &str, g: &SpliceDiagram) -> Result<(usize, usize), Error> {
    for (i, _) in spec.match_indices('-') {
        let (a, b) = (&spec[..i], &spec[i + 1..]);
        if a.is_empty() || b.is_empty() {
            continue;
        }
        if let (Some(v), Some(w)) = (g.vertex_index(a), g.vertex_index(b)) {
            return Ok((v, w));
        }
    }
    Err(Error::Input(format!(
        "edge `{spec}` does not name two diagram vertices as `<nodeA>-<nodeB>`"
    )))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Error> {
    match cli.command {
        Command::Derive { file, .. } => {
            let (text, delta) = load(&file)?;
            let report = report_json(&text, &delta)?;
            emit(out, &report)?;
            Ok(0)
        }
        Command::Check { file, strict, .. } => {
            let (text, delta) = load(&file)?;
            let verdict = is_singularity_link(&delta)?;
            let mut value = verdict_json(&verdict);
            value
                .as_object_mut()
                .expect("object")
                .insert("input_digest".into(), json!(input_digest(&text)));
            emit(out, &value)?;
            Ok(if strict && !verdict.verdict { 3 } else { 0 })
        }
        Command::Decomp { file, .. } => {
            let (text, delta) = load(&file)?;
            let bundle = splice_from_plumbing(&delta)?;
            let (graph, reduced) = decomposition_graph_checked(&bundle)?;
            let mut value = decomposition_json(&graph, &reduced);
            value
                .as_object_mut()
                .expect("object")
                .insert("input_digest".into(), json!(input_digest(&text)));
            emit(out, &value)?;
            Ok(0)
        }
        Command::Cover { file, edge, .. } => {
            let (text, delta) = load(&file)?;
            let root = root_piece(&delta, &[])?;
            let (v, w) = parse_edge_spec(&edge, root.diagram())?;
            let split = split_at_edge(&root, v, w)?;
            let mut value = cover_split_json(&split);
            value
                .as_object_mut()
                .expect("object")
                .insert("input_digest".into(), json!(input_digest(&text)));
            emit(out, &value)?;
            Ok(0)
        }
        Command::Uac { file, .. } => {
            let (text, delta) = load(&file)?;
            let plan = uac_plan(&delta, &[])?;
            let mut report = report_json(&text, &delta)?;
            report
                .as_object_mut()
                .expect("object")
                .insert("cover_plan".into(), uac_json(&plan));
            emit(out, &report)?;
            Ok(0)
        }
        Command::Fuzz {
            seeds,
            max_vertices,
        } => {
            let identities = fuzz_identities(seeds, max_vertices)?;
            let criterion = fuzz_link_criterion(seeds, max_vertices)?;
            let cover = fuzz_cover(seeds, max_vertices)?;
            let summary = json!({
                "seeds": seeds,
                "max_vertices": max_vertices,
                "suites": {
                    "identities": {
                        "status": "pass",
                        "nodes": identities.nodes,
                        "node_edges": identities.node_edges,
                        "linking_pairs": identities.linking_pairs,
                    },
                    "link_criterion": {
                        "status": "pass",
                        "positive": criterion.positive,
                        "negative": criterion.negative,
                    },
                    "cover": {
                        "status": "pass",
                        "completed": cover.completed,
                        "skipped": cover.skipped,
                        "strings": cover.strings,
                    },
                },
            });
            emit(out, &summary)?;
            Ok(0)
        }
        Command::Render { file, dot, json } => {
            if dot && json {
                return Err(Error::Input("choose one of --dot or --json".into()));
            }
            let (_, delta) = load(&file)?;
            let bundle = splice_from_plumbing(&delta)?;
            if json {
                emit(out, &splice_json(&bundle.splice))?;
            } else {
                write_text(out, &splice_dot(&bundle.splice))?;
            }
            Ok(0)
        }
    }
}

/// Runs a parsed command line, writing results to `out`. Returns the process
/// exit code: 0 success, 1 input error, 2 internal cross-check disagreement,
/// 3 negative strict verdict.
pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            match e {
                Error::Input(_) => 1,
                Error::Inconsistency(_) => 2,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{dumbbell48, e8, zero_weight_pair};

    #[test]
    fn parse_reports_line_numbers() {
        let err = parse_plumbing("v a -2\n\nv a -3\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(err.to_string().contains("duplicate vertex `a`"), "{err}");

        let err = parse_plumbing("v a -2\ne a b\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(err.to_string().contains("`b`"), "{err}");

        let err = parse_plumbing("v a two\n").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");

        let err = parse_plumbing("w a -2\n").unwrap_err();
        assert!(err.to_string().contains("unknown directive `w`"), "{err}");
    }

    #[test]
    fn plumbing_round_trip() {
        for delta in [e8(), dumbbell48()] {
            let text = serialize_plumbing(&delta);
            let parsed = parse_plumbing(&text).unwrap();
            assert_eq!(serialize_plumbing(&parsed), text);
            // Comments and blank lines are transparent.
            let with_comments = format!("# fixture\n\n{text}# end\n");
            let parsed = parse_plumbing(&with_comments).unwrap();
            assert_eq!(serialize_plumbing(&parsed), text);
        }
    }

    fn run_on_fixture(delta: &PlumbingDiagram, args: &[&str]) -> (i32, String) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("input.plumb");
        std::fs::write(&path, serialize_plumbing(delta)).unwrap();
        let mut full = vec!["plumb".to_string()];
        full.push(args[0].to_string());
        full.push(path.to_str().unwrap().to_string());
        full.extend(args[1..].iter().map(|s| s.to_string()));
        let cli = Cli::parse_from(full);
        let mut out = Vec::new();
        let code = run(cli, &mut out);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn derive_is_deterministic() {
        let (c1, o1) = run_on_fixture(&dumbbell48(), &["derive"]);
        let (c2, o2) = run_on_fixture(&dumbbell48(), &["derive"]);
        assert_eq!(c1, 0);
        assert_eq!(c2, 0);
        assert_eq!(o1, o2);
        let v: Value = serde_json::from_str(&o1).unwrap();
        assert_eq!(v["h1_order"], json!("48"));
        assert_eq!(v["det"], json!("48"));
        assert_eq!(v["edge_determinants"][0]["det"], json!("48"));
        assert_eq!(v["edge_determinants"][0]["fiber_pairing"], json!("1"));
        assert_eq!(v["zhs"], json!(false));
    }

    #[test]
    fn check_exit_codes() {
        let (code, out) = run_on_fixture(&e8(), &["check"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], json!(true));
        assert_eq!(v["route_agreement"], json!(true));

        // The dumbbell is a singularity link (all signs positive, edge
        // determinant 48 > 0) even though it is not an integral homology
        // sphere.
        let (code, out) = run_on_fixture(&dumbbell48(), &["check", "--strict"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], json!(true));

        // A diagram with a negative node sign fails, and --strict turns that
        // into exit code 3.
        let (code, _) = run_on_fixture(&zero_weight_pair(), &["check"]);
        assert_eq!(code, 0);
        let (code, out) = run_on_fixture(&zero_weight_pair(), &["check", "--strict"]);
        assert_eq!(code, 3);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], json!(false));
    }

    #[test]
    fn missing_file_is_an_input_error() {
        let cli = Cli::parse_from(["plumb", "derive", "/nonexistent/x.plumb"]);
        let mut out = Vec::new();
        assert_eq!(run(cli, &mut out), 1);
    }

    #[test]
    fn cover_and_uac_commands() {
        let (code, out) = run_on_fixture(&dumbbell48(), &["cover", "--edge", "u-w"]);
        assert_eq!(code, 0, "{out}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["d0"], json!("2"));
        assert_eq!(v["d1"], json!("2"));
        assert_eq!(v["sides"][0]["piece"]["order"], json!("24"));
        assert_eq!(v["sides"][0]["data"]["euler_cover"], json!("-4/3"));

        let (code, out) = run_on_fixture(&dumbbell48(), &["uac"]);
        assert_eq!(code, 0, "{out}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["cover_plan"]["type"], json!("split"));
        assert_eq!(v["cover_plan"]["children"][0]["type"], json!("brieskorn"));
        assert_eq!(
            v["cover_plan"]["children"][0]["weights"],
            json!(["2", "2", "4"])
        );

        let (code, _) = run_on_fixture(&dumbbell48(), &["cover", "--edge", "u-z"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn render_emits_dot() {
        let (code, out) = run_on_fixture(&e8(), &["render"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("digraph splice {"), "{out}");
        assert!(out.contains("taillabel=\"2\"") || out.contains("headlabel=\"2\""), "{out}");
        assert!(out.contains("(+)"), "{out}");
        let (c1, o1) = run_on_fixture(&e8(), &["render"]);
        assert_eq!((c1, &o1), (0, &out));

        let (code, out) = run_on_fixture(&e8(), &["render", "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["nodes"][0]["sign"], json!(1));
    }

    #[test]
    fn fuzz_suites_smoke() {
        let id = fuzz_identities(25, 10).unwrap();
        assert_eq!(id.seeds, 25);
        assert!(id.linking_pairs > 0);
        let lc = fuzz_link_criterion(25, 10).unwrap();
        assert_eq!(lc.seeds, 25);
        assert!(lc.positive + lc.negative == 25);
        let cv = fuzz_cover(10, 9).unwrap();
        assert!(cv.completed > 0);
        assert!(cv.strings > 0);
    }
}
