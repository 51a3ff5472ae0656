//! Numerical invariants read off a splice diagram: orbifold Euler
//! characteristics, rational Euler numbers of the Seifert pieces, fiber
//! pairings of the decomposition edges, exact linking numbers, and the
//! decomposition graph with its reduced plumbing matrix.
//!
//! The rational Euler number and the fiber pairing each have several
//! independent computation routes (normalized splice weights, signed splice
//! weights, plumbing continued fractions / string determinants); consumers
//! that hold more than one representation cross-assert them.

use num_traits::{One, Signed, Zero};

use crate::exact::{det_exact, ExactMatrix, Int, Rat};
use crate::plumbing::PlumbingDiagram;
use crate::splice::{SpliceBundle, SpliceDiagram, UnnormalizedSpliceDiagram};
use crate::Error;

/// Per-node and per-edge data of the decomposition graph: the splice tree
/// with leaves erased, each node carrying its rational Euler number `e` and
/// orbifold Euler characteristic `chi`, each edge its fiber pairing `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionGraph {
    /// Splice-diagram vertex index of each node, in diagram order.
    pub node_ids: Vec<usize>,
    pub node_names: Vec<String>,
    pub euler_numbers: Vec<Rat>,
    pub orbifold_chis: Vec<Rat>,
    /// Edges as positions into `node_ids`, with the fiber pairing.
    pub edges: Vec<(usize, usize, Rat)>,
}

/// The symmetric node-indexed matrix with `e_v` on the diagonal and `1/p_e`
/// for adjacent nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedPlumbingMatrix {
    pub matrix: ExactMatrix,
    pub node_names: Vec<String>,
}

/// Orbifold Euler characteristic at node `v`:
/// `2 - valence(v) + sum of 1/d over the leaf edges at v`.
pub fn orbifold_euler_char(g: &SpliceDiagram, v: usize) -> Result<Rat, Error> {
    if g.is_atomic() {
        return Err(Error::Input("atomic diagram has no nodes".into()));
    }
    if !g.is_node(v) {
        return Err(Error::Input(format!("`{}` is not a node", g.name(v))));
    }
    let valence = g.neighbors(v).len();
    let mut chi = Rat::from_integer(Int::from(2 - valence as i64));
    for &u in g.neighbors(v) {
        if !g.is_node(u) {
            let d = g.end_weight(v, u).expect("node end");
            if d.is_zero() {
                return Err(Error::Input(format!(
                    "leaf edge `{}`-`{}` has weight 0",
                    g.name(v),
                    g.name(u)
                )));
            }
            chi += Rat::new(Int::one(), d.clone());
        }
    }
    Ok(chi)
}

// Node-edge neighbors of v in an admissible order: a zero near-end weight is
// moved to the front (the Euler-number formula requires r_i != 0 for i >= 2).
fn admissible_node_edge_order(g: &SpliceDiagram, v: usize) -> Result<Vec<usize>, Error> {
    let mut order: Vec<usize> = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&u| g.is_node(u))
        .collect();
    let zeros: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&u| g.end_weight(v, u).expect("node end").is_zero())
        .collect();
    if zeros.len() > 1 {
        return Err(Error::Input(format!(
            "node `{}` has more than one zero end weight",
            g.name(v)
        )));
    }
    if let Some(&z) = zeros.first() {
        order.retain(|&u| u != z);
        order.insert(0, z);
    }
    Ok(order)
}

/// Rational Euler number of the Seifert piece at node `v`, from the
/// normalized diagram and the order `d` of the first homology group.
///
/// With node-edges ordered `1..k` (a zero near-end weight forced to index 1),
/// near weights `r_i`, far weights `s_i`, edge determinants `D_i`, neighbor
/// signs `e_i`, `N` the product of the leaf end weights at `v` and `M_i` the
/// product of the other end weights at the i-th neighbor:
/// `e_v = -d * (e_v_sign*s_1/(N*D_1*r_2*..*r_k) + sum_{i>=2} e_i*M_i/(r_i*D_i))`,
/// and `e_v = -d*sign/N` when `v` has no node-edges.
pub fn euler_number(g: &SpliceDiagram, d: &Int, v: usize) -> Result<Rat, Error> {
    let order = admissible_node_edge_order(g, v)?;
    euler_number_ordered(g, d, v, &order)
}

/// [`euler_number`] with an explicit node-edge order; the value is the same
/// for every admissible order.
pub fn euler_number_ordered(
    g: &SpliceDiagram,
    d: &Int,
    v: usize,
    order: &[usize],
) -> Result<Rat, Error> {
    if g.is_atomic() {
        return Err(Error::Input("atomic diagram has no nodes".into()));
    }
    if !g.is_node(v) {
        return Err(Error::Input(format!("`{}` is not a node", g.name(v))));
    }
    if !d.is_positive() {
        return Err(Error::Input(
            "the homology order d must be a positive integer".into(),
        ));
    }
    let mut node_neighbors: Vec<usize> = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&u| g.is_node(u))
        .collect();
    let mut given = order.to_vec();
    node_neighbors.sort_unstable();
    given.sort_unstable();
    if node_neighbors != given {
        return Err(Error::Input(
            "order must list exactly the node-neighbors of v".into(),
        ));
    }
    for &u in &order[1.min(order.len())..] {
        if g.end_weight(v, u).expect("node end").is_zero() {
            return Err(Error::Input(
                "a zero near-end weight must be indexed first".into(),
            ));
        }
    }
    let sign_v = Int::from(g.sign(v) as i64);
    let n_leaf: Int = g
        .neighbors(v)
        .iter()
        .filter(|&&u| !g.is_node(u))
        .fold(Int::one(), |acc, &u| acc * g.end_weight(v, u).expect("node end"));
    if order.is_empty() {
        if n_leaf.is_zero() {
            return Err(Error::Input("zero leaf edge weight".into()));
        }
        return Ok(Rat::new(-d * sign_v, n_leaf));
    }
    let first = order[0];
    let d1 = g.edge_determinant(v, first)?;
    if d1.is_zero() {
        return Err(Error::Input("edge determinant is zero".into()));
    }
    let s1 = g.end_weight(first, v).expect("node end").clone();
    let r_tail: Int = order[1..]
        .iter()
        .fold(Int::one(), |acc, &u| acc * g.end_weight(v, u).expect("node end"));
    let denom = &n_leaf * &d1 * &r_tail;
    if denom.is_zero() {
        return Err(Error::Input("zero leaf edge weight".into()));
    }
    let mut total = Rat::new(&sign_v * &s1, denom);
    for &u in &order[1..] {
        let di = g.edge_determinant(v, u)?;
        if di.is_zero() {
            return Err(Error::Input("edge determinant is zero".into()));
        }
        let ri = g.end_weight(v, u).expect("node end").clone();
        let mi = g.other_end_product(u, v);
        let sign_i = Int::from(g.sign(u) as i64);
        total += Rat::new(sign_i * mi, ri * di);
    }
    Ok(Rat::from_integer(-d.clone()) * total)
}

/// Rational Euler number from the signed diagram alone: same shape as
/// [`euler_number`] but with signed weights, signed edge determinants and
/// `d` replaced by the signed determinant, with no sign factors.
pub fn euler_number_unnormalized(gu: &UnnormalizedSpliceDiagram, v: usize) -> Result<Rat, Error> {
    if gu.is_atomic() {
        return Err(Error::Input("atomic diagram has no nodes".into()));
    }
    if !gu.is_node(v) {
        return Err(Error::Input(format!("`{}` is not a node", gu.name(v))));
    }
    let mut order: Vec<usize> = gu
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&u| gu.is_node(u))
        .collect();
    let zeros: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&u| gu.end_weight(v, u).expect("node end").is_zero())
        .collect();
    if zeros.len() > 1 {
        return Err(Error::Input(format!(
            "node `{}` has more than one zero end weight",
            gu.name(v)
        )));
    }
    if let Some(&z) = zeros.first() {
        order.retain(|&u| u != z);
        order.insert(0, z);
    }
    let det = gu.det().clone();
    let n_leaf: Int = gu
        .neighbors(v)
        .iter()
        .filter(|&&u| !gu.is_node(u))
        .fold(Int::one(), |acc, &u| acc * gu.end_weight(v, u).expect("node end"));
    if order.is_empty() {
        if n_leaf.is_zero() {
            return Err(Error::Input("zero leaf edge weight".into()));
        }
        return Ok(Rat::new(-det, n_leaf));
    }
    let first = order[0];
    let d1 = gu.edge_determinant(v, first)?;
    if d1.is_zero() {
        return Err(Error::Input("edge determinant is zero".into()));
    }
    let s1 = gu.end_weight(first, v).expect("node end").clone();
    let r_tail: Int = order[1..]
        .iter()
        .fold(Int::one(), |acc, &u| acc * gu.end_weight(v, u).expect("node end"));
    let denom = &n_leaf * &d1 * &r_tail;
    if denom.is_zero() {
        return Err(Error::Input("zero leaf edge weight".into()));
    }
    let mut total = Rat::new(s1, denom);
    for &u in &order[1..] {
        let di = gu.edge_determinant(v, u)?;
        if di.is_zero() {
            return Err(Error::Input("edge determinant is zero".into()));
        }
        let ri = gu.end_weight(v, u).expect("node end").clone();
        let mi = gu.other_end_product(u, v);
        total += Rat::new(mi, ri * di);
    }
    Ok(Rat::from_integer(-det) * total)
}

/// Fiber pairing of the node-edge `(v, w)` from the normalized diagram:
/// `p = |D| / d`.
pub fn fiber_pairing_normalized(
    g: &SpliceDiagram,
    d: &Int,
    v: usize,
    w: usize,
) -> Result<Rat, Error> {
    if !d.is_positive() {
        return Err(Error::Input(
            "the homology order d must be a positive integer".into(),
        ));
    }
    let det_edge = g.edge_determinant(v, w)?;
    Ok(Rat::new(det_edge.abs(), d.clone()))
}

/// Fiber pairing from the signed diagram: `p = D~ / det`.
pub fn fiber_pairing_unnormalized(
    gu: &UnnormalizedSpliceDiagram,
    v: usize,
    w: usize,
) -> Result<Rat, Error> {
    if gu.det().is_zero() {
        return Err(Error::Input("determinant is zero".into()));
    }
    let det_edge = gu.edge_determinant(v, w)?;
    Ok(Rat::new(det_edge, gu.det().clone()))
}

/// Fiber pairing with both routes cross-asserted (the derived normalized and
/// signed diagrams share vertex indices).
pub fn fiber_pairing(bundle: &SpliceBundle, v: usize, w: usize) -> Result<Rat, Error> {
    let d = bundle.det().abs();
    let normalized = fiber_pairing_normalized(&bundle.splice, &d, v, w)?;
    let signed = fiber_pairing_unnormalized(&bundle.unnormalized, v, w)?;
    if normalized != signed {
        return Err(Error::Inconsistency(format!(
            "fiber pairing routes disagree on `{}`-`{}`: |D|/d = {normalized}, signed = {signed}",
            bundle.splice.name(v),
            bundle.splice.name(w)
        )));
    }
    Ok(normalized)
}

/// Exact linking number `-(A^{-1})_{vw}` of the fibers over vertices `v`, `w`
/// of the plumbing, computed via the adjugate: `-C_vw / det(A)` with `C_vw`
/// the cofactor.
pub fn linking_number(delta: &PlumbingDiagram, v: usize, w: usize) -> Result<Rat, Error> {
    let a = delta.intersection_matrix();
    let det_a = det_exact(&a)?;
    if det_a.is_zero() {
        return Err(Error::Input("intersection matrix is singular".into()));
    }
    let n = delta.vertex_count();
    let cofactor = if n == 1 {
        Rat::one()
    } else {
        let mut sub = ExactMatrix::zeros(n - 1, n - 1);
        let mut si = 0;
        for i in 0..n {
            if i == w {
                continue;
            }
            let mut sj = 0;
            for j in 0..n {
                if j == v {
                    continue;
                }
                sub.set(si, sj, a.get(i, j).clone());
                sj += 1;
            }
            si += 1;
        }
        let minor = det_exact(&sub)?;
        if (v + w) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    Ok(-cofactor / det_a)
}

/// Builds the decomposition graph and reduced plumbing matrix from a
/// validated splice diagram and homology order `d`.
pub fn decomposition_graph(
    g: &SpliceDiagram,
    d: &Int,
) -> Result<(DecompositionGraph, ReducedPlumbingMatrix), Error> {
    if g.is_atomic() {
        return Err(Error::Input("atomic diagram has no nodes".into()));
    }
    g.validate().map_err(|v| Error::Input(v.to_string()))?;
    let node_ids = g.nodes();
    let position = |v: usize| node_ids.iter().position(|&x| x == v).expect("node");
    let node_names: Vec<String> = node_ids.iter().map(|&v| g.name(v).to_string()).collect();
    let mut euler_numbers = Vec::new();
    let mut orbifold_chis = Vec::new();
    for &v in &node_ids {
        euler_numbers.push(euler_number(g, d, v)?);
        orbifold_chis.push(orbifold_euler_char(g, v)?);
    }
    let mut edges = Vec::new();
    for &(a, b) in g.edges() {
        if g.is_node(a) && g.is_node(b) {
            let p = fiber_pairing_normalized(g, d, a, b)?;
            if !p.is_positive() {
                return Err(Error::Input(format!(
                    "fiber pairing on `{}`-`{}` is not positive",
                    g.name(a),
                    g.name(b)
                )));
            }
            edges.push((position(a), position(b), p));
        }
    }
    let k = node_ids.len();
    let mut matrix = ExactMatrix::zeros(k, k);
    for (i, e) in euler_numbers.iter().enumerate() {
        matrix.set(i, i, e.clone());
    }
    for (i, j, p) in &edges {
        let recip = Rat::one() / p.clone();
        matrix.set(*i, *j, recip.clone());
        matrix.set(*j, *i, recip);
    }
    Ok((
        DecompositionGraph {
            node_ids,
            node_names,
            euler_numbers,
            orbifold_chis,
            edges,
        },
        ReducedPlumbingMatrix {
            matrix,
            node_names: g.nodes().iter().map(|&v| g.name(v).to_string()).collect(),
        },
    ))
}

/// [`decomposition_graph`] over a derived bundle, with every node's Euler
/// number and every edge's pairing recomputed through the signed diagram and
/// compared; disagreement is an inconsistency.
pub fn decomposition_graph_checked(
    bundle: &SpliceBundle,
) -> Result<(DecompositionGraph, ReducedPlumbingMatrix), Error> {
    let d = bundle.det().abs();
    let (graph, reduced) = decomposition_graph(&bundle.splice, &d)?;
    for (pos, &v) in graph.node_ids.iter().enumerate() {
        let signed = euler_number_unnormalized(&bundle.unnormalized, v)?;
        if signed != graph.euler_numbers[pos] {
            return Err(Error::Inconsistency(format!(
                "euler number routes disagree at `{}`: normalized {}, signed {}",
                graph.node_names[pos], graph.euler_numbers[pos], signed
            )));
        }
    }
    for &(i, j, ref p) in &graph.edges {
        let signed = fiber_pairing_unnormalized(
            &bundle.unnormalized,
            graph.node_ids[i],
            graph.node_ids[j],
        )?;
        if &signed != p {
            return Err(Error::Inconsistency(format!(
                "fiber pairing routes disagree on `{}`-`{}`: normalized {}, signed {}",
                graph.node_names[i], graph.node_names[j], p, signed
            )));
        }
    }
    Ok((graph, reduced))
}
