//! Small hand-checked diagrams shared by unit, integration and fuzz tests.

use crate::plumbing::PlumbingDiagram;
use crate::splice::SpliceDiagram;

/// The E8 plumbing: a central -2 vertex with -2 arms of lengths 1, 2 and 4.
/// `det(-A) = 1`, so the manifold is an integral homology sphere (the
/// Poincaré sphere, Seifert invariants (2,3,5)).
pub fn e8() -> PlumbingDiagram {
    star(-2, &[&[-2], &[-2, -2], &[-2, -2, -2, -2]])
}

/// Two -3 nodes joined by an edge, each carrying two -2 leaves.
/// `det(-A) = 48`; the splice diagram has one edge with weights 8 and 8.
pub fn dumbbell48() -> PlumbingDiagram {
    PlumbingDiagram::from_parts(
        &[("l1", -2), ("l2", -2), ("u", -3), ("w", -3), ("r1", -2), ("r2", -2)],
        &[("l1", "u"), ("l2", "u"), ("u", "w"), ("w", "r1"), ("w", "r2")],
    )
    .expect("fixture is well formed")
}

/// Star-shaped diagram: center `c` with the given weight and one arm per
/// entry of `arms`, each listing its weights outward. Arm vertices are named
/// `a<i>_<j>`.
pub fn star(center_weight: i64, arms: &[&[i64]]) -> PlumbingDiagram {
    let mut vertices = vec![("c".to_string(), center_weight)];
    let mut edges = Vec::new();
    for (i, arm) in arms.iter().enumerate() {
        let mut prev = "c".to_string();
        for (j, &w) in arm.iter().enumerate() {
            let name = format!("a{i}_{j}");
            vertices.push((name.clone(), w));
            edges.push((prev, name.clone()));
            prev = name;
        }
    }
    PlumbingDiagram::new(vertices, edges).expect("fixture is well formed")
}

/// Two nodes `n1`, `n2` (weight -3, two -2 leaves each) joined through a
/// string with the given weights. Useful for string-determinant checks.
pub fn two_nodes_through_string(string_weights: &[i64]) -> PlumbingDiagram {
    let mut vertices = vec![
        ("l1".to_string(), -2),
        ("l2".to_string(), -2),
        ("n1".to_string(), -3),
        ("n2".to_string(), -3),
        ("r1".to_string(), -2),
        ("r2".to_string(), -2),
    ];
    let mut edges = vec![
        ("l1".to_string(), "n1".to_string()),
        ("l2".to_string(), "n1".to_string()),
        ("n2".to_string(), "r1".to_string()),
        ("n2".to_string(), "r2".to_string()),
    ];
    let mut prev = "n1".to_string();
    for (j, &w) in string_weights.iter().enumerate() {
        let name = format!("s{j}");
        vertices.push((name.clone(), w));
        edges.push((prev, name.clone()));
        prev = name;
    }
    edges.push((prev, "n2".to_string()));
    PlumbingDiagram::new(vertices, edges).expect("fixture is well formed")
}

/// Hand-built three-node splice diagram with mixed node signs:
/// `v1 (+, leaves 3,5, toward v2: 22) — v2 (-, leaf 7, ends 10|2) — v3 (+,
/// toward v2: 6, leaves 3,2)`. Edge determinants are 430 and 432.
pub fn mixed_sign_splice() -> SpliceDiagram {
    SpliceDiagram::from_parts(
        &[("v1", 1), ("v2", -1), ("v3", 1)],
        &["p", "q", "r", "s", "t"],
        &[
            ("v1", "p", Some(3), None),
            ("v1", "q", Some(5), None),
            ("v1", "v2", Some(22), Some(10)),
            ("v2", "r", Some(7), None),
            ("v2", "v3", Some(2), Some(6)),
            ("v3", "s", Some(3), None),
            ("v3", "t", Some(2), None),
        ],
    )
    .expect("fixture is well formed")
}

/// Two -1 nodes joined by an edge, each with two -2 leaves. Both splice
/// weights on the central edge vanish and `det(-A) = -16`; exercises the
/// degenerate-weight conventions.
pub fn zero_weight_pair() -> PlumbingDiagram {
    PlumbingDiagram::from_parts(
        &[("a1", -2), ("a2", -2), ("v0", -1), ("v1", -1), ("a3", -2), ("a4", -2)],
        &[("a1", "v0"), ("a2", "v0"), ("v0", "v1"), ("v1", "a3"), ("v1", "a4")],
    )
    .expect("fixture is well formed")
}
