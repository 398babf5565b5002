use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

use rospace::error::Error;
use rospace::graph::{dimension_report, enumerate_maximal, Budget, MarkedMetricAGraph};
use rospace::tree::{q_rank_report, total_index, tree_from_point, verify_prop41, GraphOfGroupsTree};
use rospace::word::FreeFactorSystem;

type ShapeList = Vec<(usize, Vec<(usize, usize)>)>;

fn err(e: Error) -> PyErr {
    if e.is_property_failure() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn parse_tree(text: &str) -> PyResult<GraphOfGroupsTree> {
    let v: Value = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    if v.get("wedge_cycles").is_some() {
        MarkedMetricAGraph::from_json(&v)
            .and_then(|x| tree_from_point(&x))
            .map_err(err)
    } else {
        GraphOfGroupsTree::from_json(&v).map_err(err)
    }
}

fn system(n: usize, factors: Vec<usize>) -> PyResult<FreeFactorSystem> {
    FreeFactorSystem::standard(n, &factors).map_err(err)
}

/// `{"V", "E", "dim_cv", "dim_spine"}` for the system `(n, factors)`.
#[pyfunction]
#[pyo3(signature = (n, factors=Vec::new()))]
fn dims<'py>(py: Python<'py>, n: usize, factors: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
    let d = dimension_report(&system(n, factors)?);
    to_py(py, &serde_json::to_value(d).expect("report serializes"))
}

/// Maximal collapsed shapes as `(vertices, edges)` pairs.
#[pyfunction]
#[pyo3(signature = (n, factors=Vec::new()))]
fn enumerate(n: usize, factors: Vec<usize>) -> PyResult<ShapeList> {
    let en = enumerate_maximal(&system(n, factors)?, false, Budget::default()).map_err(err)?;
    Ok(en.maximal.into_iter().map(|s| (s.vertices, s.edges)).collect())
}

/// JSON text of a built-in fixture tree.
#[pyfunction]
fn fixture(name: &str) -> PyResult<String> {
    let f = rospace::fixtures::fixture(name).map_err(err)?;
    Ok(rospace::fixtures::file_contents(&f))
}

/// Translation length of `word` as a string (`"3/2"`, `"λ1 + 2·λ2"`).
#[pyfunction]
fn translation_length(tree_json: &str, word: &str) -> PyResult<String> {
    let t = parse_tree(tree_json)?;
    let w = t.system.parse_word(word).map_err(err)?;
    Ok(t.translation_length(&w).map_err(err)?.to_string())
}

#[pyfunction]
fn index<'py>(py: Python<'py>, tree_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let r = total_index(&parse_tree(tree_json)?).map_err(err)?;
    to_py(py, &serde_json::to_value(r).expect("report serializes"))
}

#[pyfunction]
fn qrank<'py>(py: Python<'py>, tree_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let r = q_rank_report(&parse_tree(tree_json)?, None).map_err(err)?;
    to_py(py, &serde_json::to_value(r).expect("report serializes"))
}

#[pyfunction]
fn prop41<'py>(py: Python<'py>, tree_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let r = verify_prop41(&parse_tree(tree_json)?, None).map_err(err)?;
    to_py(py, &serde_json::to_value(r).expect("report serializes"))
}

/// Runs one acceptance criterion, or all of them.
#[pyfunction]
#[pyo3(signature = (criterion=None, seed=rospace::verify::DEFAULT_SEED))]
fn verify<'py>(py: Python<'py>, criterion: Option<u8>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let reports = match criterion {
        Some(id) => vec![rospace::verify::run_criterion(id, seed)],
        None => rospace::verify::run_all(seed),
    };
    to_py(py, &serde_json::to_value(reports).expect("reports serialize"))
}

/// The command line: `run(["index", "--tree", path])` gives
/// `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    rospace::cli::run(std::iter::once("rospace".to_string()).chain(args))
}

#[pymodule]
#[pyo3(name = "rospace")]
fn rospace_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(dims, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(fixture, m)?)?;
    m.add_function(wrap_pyfunction!(translation_length, m)?)?;
    m.add_function(wrap_pyfunction!(index, m)?)?;
    m.add_function(wrap_pyfunction!(qrank, m)?)?;
    m.add_function(wrap_pyfunction!(prop41, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("FIXTURES", rospace::fixtures::NAMES.to_vec())?;
    Ok(())
}
