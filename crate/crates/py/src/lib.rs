//! Python bindings. Structured results come back as plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use legendrian_cost::cli::{front_from_text, front_to_text};
use legendrian_cost::cost;
use legendrian_cost::graph::{build_cost_graph, verify_metric, CostGraph};
use legendrian_cost::knot_types::{self, KnotTypeDescriptor};
use legendrian_cost::moves::{self, Sign};
use legendrian_cost::{classical_invariants, connect_sum, reverse_orientation, OrientedFront, SearchBudget};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

/// An oriented front diagram.
#[pyclass(name = "Front", module = "legcost", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Front(OrientedFront);

#[pymethods]
impl Front {
    /// Parses front text; a `# orientation: reversed` line flips the orientation.
    #[new]
    fn new(text: &str) -> PyResult<Front> {
        front_from_text(text).map(Front).map_err(value_err)
    }

    /// A built-in front: unknot, right_trefoil, left_trefoil, e(K,L), torus(P,Q).
    #[staticmethod]
    #[pyo3(signature = (name, tb=None, rot=None))]
    fn builtin(name: &str, tb: Option<i64>, rot: Option<i64>) -> PyResult<Front> {
        let f = match (tb, rot) {
            (Some(tb), Some(rot)) => knot_types::standard_front(name, tb, rot),
            (None, None) => knot_types::peak_fronts(name).map(|mut v| v.remove(0)),
            _ => return Err(PyValueError::new_err("give both tb and rot, or neither")),
        };
        f.map(Front).map_err(value_err)
    }

    fn invariants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &serde_json::to_value(classical_invariants(&self.0)).map_err(value_err)?)
    }

    #[getter]
    fn tb(&self) -> i64 {
        classical_invariants(&self.0).tb
    }

    #[getter]
    fn rot(&self) -> i64 {
        classical_invariants(&self.0).rot
    }

    #[getter]
    fn reversed(&self) -> bool {
        self.0.is_reversed()
    }

    /// `sign` is "+" or "-".
    #[pyo3(signature = (sign, site=0))]
    fn stabilize(&self, sign: &str, site: usize) -> PyResult<Front> {
        let sign = match sign {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            s => return Err(PyValueError::new_err(format!("sign must be + or -, got {s:?}"))),
        };
        moves::stabilize(&self.0, sign, site).map(Front).map_err(value_err)
    }

    fn connect_sum(&self, other: PyRef<'_, Front>) -> Front {
        Front(connect_sum(&self.0, &other.0))
    }

    fn reverse(&self) -> Front {
        Front(reverse_orientation(&self.0))
    }

    fn canonical(&self) -> Front {
        Front(moves::canonical_oriented(&self.0))
    }

    fn __str__(&self) -> String {
        front_to_text(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Front({:?})", self.0.word().to_string())
    }
}

fn budget(max_width: Option<u32>, max_events: Option<usize>, max_states: Option<usize>, max_cost: Option<u64>) -> SearchBudget {
    let d = SearchBudget::default();
    SearchBudget {
        max_width: max_width.unwrap_or(d.max_width),
        max_events: max_events.unwrap_or(d.max_events),
        max_states: max_states.unwrap_or(d.max_states),
        max_cost: max_cost.unwrap_or(d.max_cost),
    }
}

/// Bounded isotopy search; returns the verdict as a dict.
#[pyfunction]
#[pyo3(signature = (a, b, max_width=None, max_events=None, max_states=None))]
fn lr_equivalent<'py>(
    py: Python<'py>,
    a: PyRef<'py, Front>,
    b: PyRef<'py, Front>,
    max_width: Option<u32>,
    max_events: Option<usize>,
    max_states: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let bud = budget(max_width, max_events, max_states, None);
    let (fa, fb) = (a.0.clone(), b.0.clone());
    let v = py
        .detach(move || legendrian_cost::lr_equivalent(&fa, &fb, &bud))
        .map_err(value_err)?;
    to_py(py, &v.to_json())
}

#[pyfunction]
#[pyo3(signature = (a, b, max_width=None, max_events=None, max_states=None, max_cost=None))]
fn cost_search<'py>(
    py: Python<'py>,
    a: PyRef<'py, Front>,
    b: PyRef<'py, Front>,
    max_width: Option<u32>,
    max_events: Option<usize>,
    max_states: Option<usize>,
    max_cost: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let bud = budget(max_width, max_events, max_states, max_cost);
    let (fa, fb) = (a.0.clone(), b.0.clone());
    let c = py
        .detach(move || legendrian_cost::cost_search(&fa, &fb, &bud))
        .map_err(value_err)?;
    to_py(py, &c.to_json())
}

/// Cost between two (tb, rot) classes of a simple type.
#[pyfunction]
fn cost_simple(a: (i64, i64), b: (i64, i64)) -> u64 {
    use legendrian_cost::ClassicalInvariants as CI;
    cost::cost_simple(&CI::from_pair(a.0, a.1), &CI::from_pair(b.0, b.1))
}

#[pyfunction]
fn cost_maxtb_sum<'py>(py: Python<'py>, r1: i64, r2: i64, same_rot_order: bool) -> PyResult<Bound<'py, PyAny>> {
    let r = cost::cost_maxtb_sum(r1, r2, same_rot_order).map_err(value_err)?;
    to_py(py, &r.to_json())
}

#[pyfunction]
fn twist_cost<'py>(py: Python<'py>, k: u64, l: u64, k2: u64, l2: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = cost::twist_cost(k, l, k2, l2).map_err(value_err)?;
    to_py(py, &r.to_json())
}

fn descriptor(desc: &str) -> PyResult<KnotTypeDescriptor> {
    if desc.trim_start().starts_with('{') {
        KnotTypeDescriptor::from_json(desc).map_err(value_err)
    } else {
        knot_types::builtin_descriptor(desc).map_err(value_err)
    }
}

/// Descriptor of a built-in type, or validation of a JSON descriptor.
#[pyfunction]
fn knot_type<'py>(py: Python<'py>, desc: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(descriptor(desc)?).map_err(value_err)?)
}

#[pyfunction]
fn sum_type<'py>(py: Python<'py>, a: &str, b: &str) -> PyResult<Bound<'py, PyAny>> {
    let d = knot_types::sum_descriptor(&descriptor(a)?, &descriptor(b)?);
    to_py(py, &serde_json::to_value(d).map_err(value_err)?)
}

fn graph(desc: &str, tb_floor: i64) -> PyResult<CostGraph> {
    build_cost_graph(&descriptor(desc)?, tb_floor).map_err(value_err)
}

/// Cost graph down to `tb_floor`; `fmt` is "json" (a dict) or "dot" (a string).
#[pyfunction]
#[pyo3(signature = (desc, tb_floor, fmt="json"))]
fn cost_graph<'py>(py: Python<'py>, desc: &str, tb_floor: i64, fmt: &str) -> PyResult<Bound<'py, PyAny>> {
    let g = graph(desc, tb_floor)?;
    match fmt {
        "json" => to_py(py, &g.to_json()),
        "dot" => Ok(g.to_dot().into_pyobject(py)?.into_any()),
        f => Err(PyValueError::new_err(format!("format must be json or dot, got {f:?}"))),
    }
}

#[pyfunction]
fn verify_graph<'py>(py: Python<'py>, desc: &str, tb_floor: i64) -> PyResult<Bound<'py, PyAny>> {
    let report = verify_metric(&graph(desc, tb_floor)?);
    to_py(py, &serde_json::to_value(report).map_err(value_err)?)
}

#[pymodule]
pub fn legcost(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Front>()?;
    m.add_function(wrap_pyfunction!(lr_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(cost_search, m)?)?;
    m.add_function(wrap_pyfunction!(cost_simple, m)?)?;
    m.add_function(wrap_pyfunction!(cost_maxtb_sum, m)?)?;
    m.add_function(wrap_pyfunction!(twist_cost, m)?)?;
    m.add_function(wrap_pyfunction!(knot_type, m)?)?;
    m.add_function(wrap_pyfunction!(sum_type, m)?)?;
    m.add_function(wrap_pyfunction!(cost_graph, m)?)?;
    m.add_function(wrap_pyfunction!(verify_graph, m)?)?;
    Ok(())
}
