//! Python bindings for the graphsplice engine.
//!
//! Every function takes a plumbing diagram in the same line-oriented text
//! grammar the `plumb` CLI reads, and returns the same JSON (or DOT) text the
//! corresponding CLI subcommand prints, so results are directly comparable
//! across the two front ends. Input errors raise `ValueError`; internal
//! cross-check disagreements raise `RuntimeError`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use graphsplice_core::cli;
use graphsplice_core::cover::{root_piece, split_at_edge, uac_plan, zhs_check};
use graphsplice_core::invariants::decomposition_graph_checked;
use graphsplice_core::plumbing::PlumbingDiagram;
use graphsplice_core::singularity::is_singularity_link;
use graphsplice_core::splice::splice_from_plumbing;
use graphsplice_core::Error;
use serde_json::{json, Value};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Input(msg) => PyValueError::new_err(msg),
        Error::Inconsistency(msg) => PyRuntimeError::new_err(msg),
    }
}

fn parse(text: &str) -> PyResult<PlumbingDiagram> {
    cli::parse_plumbing(text).map_err(to_py_err)
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON value serializes")
}

fn with_digest(mut value: Value, text: &str) -> String {
    value
        .as_object_mut()
        .expect("top-level JSON object")
        .insert("input_digest".into(), json!(cli::input_digest(text)));
    pretty(&value)
}

/// Full invariant report (determinant, splice diagram, edge determinants,
/// decomposition graph, singularity verdict) as a JSON string.
#[pyfunction]
fn derive(text: &str) -> PyResult<String> {
    let delta = parse(text)?;
    let report = cli::report_json(text, &delta).map_err(to_py_err)?;
    Ok(pretty(&report))
}

/// Singularity-link verdict with its certificate, as a JSON string.
#[pyfunction]
fn check(text: &str) -> PyResult<String> {
    let delta = parse(text)?;
    let verdict = is_singularity_link(&delta).map_err(to_py_err)?;
    Ok(with_digest(cli::verdict_json(&verdict), text))
}

/// Decomposition graph (Euler numbers, orbifold characteristics, fiber
/// pairings, reduced matrix) as a JSON string.
#[pyfunction]
fn decomp(text: &str) -> PyResult<String> {
    let delta = parse(text)?;
    let bundle = splice_from_plumbing(&delta).map_err(to_py_err)?;
    let (graph, reduced) = decomposition_graph_checked(&bundle).map_err(to_py_err)?;
    Ok(with_digest(cli::decomposition_json(&graph, &reduced), text))
}

/// Splits the universal abelian cover at one node-to-node edge, given as
/// `"A-B"` in splice-vertex names. Returns the split data as a JSON string.
#[pyfunction]
fn cover(text: &str, edge: &str) -> PyResult<String> {
    let delta = parse(text)?;
    let root = root_piece(&delta, &[]).map_err(to_py_err)?;
    let (v, w) = cli::parse_edge_spec(edge, root.diagram()).map_err(to_py_err)?;
    let split = split_at_edge(&root, v, w).map_err(to_py_err)?;
    Ok(with_digest(cli::cover_split_json(&split), text))
}

/// Full report plus the recursive universal-abelian-cover plan, as a JSON
/// string.
#[pyfunction]
fn uac(text: &str) -> PyResult<String> {
    let delta = parse(text)?;
    let plan = uac_plan(&delta, &[]).map_err(to_py_err)?;
    let mut report = cli::report_json(text, &delta).map_err(to_py_err)?;
    report
        .as_object_mut()
        .expect("top-level JSON object")
        .insert("cover_plan".into(), cli::uac_json(&plan));
    Ok(pretty(&report))
}

/// Splice diagram as a Graphviz DOT string.
#[pyfunction]
fn render_dot(text: &str) -> PyResult<String> {
    let delta = parse(text)?;
    let bundle = splice_from_plumbing(&delta).map_err(to_py_err)?;
    Ok(cli::splice_dot(&bundle.splice))
}

/// Splice diagram (nodes with signs, leaves, decorated edges) as a JSON
/// string.
#[pyfunction]
fn splice(text: &str) -> PyResult<String> {
    let delta = parse(text)?;
    let bundle = splice_from_plumbing(&delta).map_err(to_py_err)?;
    Ok(pretty(&cli::splice_json(&bundle.splice)))
}

/// True exactly when the diagram's splice diagram is that of an integral
/// homology sphere.
#[pyfunction]
fn zhs(text: &str) -> PyResult<bool> {
    let delta = parse(text)?;
    let bundle = splice_from_plumbing(&delta).map_err(to_py_err)?;
    Ok(zhs_check(&bundle.splice))
}

/// Parses and re-serializes a plumbing, yielding its canonical text form.
#[pyfunction]
fn normalize(text: &str) -> PyResult<String> {
    Ok(cli::serialize_plumbing(&parse(text)?))
}

#[pymodule]
fn graphsplice(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(derive, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(decomp, m)?)?;
    m.add_function(wrap_pyfunction!(cover, m)?)?;
    m.add_function(wrap_pyfunction!(uac, m)?)?;
    m.add_function(wrap_pyfunction!(render_dot, m)?)?;
    m.add_function(wrap_pyfunction!(splice, m)?)?;
    m.add_function(wrap_pyfunction!(zhs, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    Ok(())
}
