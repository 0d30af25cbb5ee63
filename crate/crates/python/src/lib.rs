//! Python bindings: metric spaces, weighted trees, discrete gradients, collapses and persistence.
//!
//! Exact values are returned as `fractions.Fraction` in rational mode and as `float` in decimal
//! mode. Simplices are tuples of vertex indices.

// The pyo3 0.22 method macros expand to `PyErr -> PyErr` conversions.
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use ripscollapse::complex::{
    distance_levels, vietoris_rips_at_level, DistanceLevels, Filtration, Simplex, SimplexOrder, SimplicialComplex,
    VertexOrder,
};
use ripscollapse::gradients::{self, TreeMetricSpace};
use ripscollapse::metric::{self, FiniteMetricSpace, LoadOptions, MatrixFormat, WeightedTree};
use ripscollapse::morse::{self, DiscreteGradient, ValidationOptions};
use ripscollapse::persistence;
use ripscollapse::{DistanceValue, NumericMode};

/// `(x, y, r)` attaining the geodesic defect.
type DefectWitness = Option<(usize, usize, PyObject)>;

const BUDGET: usize = ripscollapse::complex::DEFAULT_SIMPLEX_BUDGET;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mode_of(mode: &str, eps: f64) -> PyResult<NumericMode> {
    match mode {
        "rational" => Ok(NumericMode::Rational),
        "decimal" => Ok(NumericMode::Decimal { eps }),
        other => Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    }
}

fn to_py(py: Python<'_>, v: &DistanceValue) -> PyResult<PyObject> {
    match v {
        DistanceValue::Rational(_) => {
            let fraction = py.import_bound("fractions")?.getattr("Fraction")?;
            Ok(fraction.call1((v.to_string(),))?.unbind())
        }
        DistanceValue::Decimal(x) => Ok(x.into_py(py)),
    }
}

/// Accepts int, float, str or Fraction.
fn from_py(value: &Bound<'_, PyAny>, mode: NumericMode) -> PyResult<DistanceValue> {
    let text = value.str()?.to_string();
    mode.parse(&text).map_err(err)
}

fn tuple(s: Simplex) -> Vec<usize> {
    s.vertices().collect()
}

fn simplex_of(vertices: &[usize]) -> PyResult<Simplex> {
    if vertices.is_empty() || vertices.iter().any(|&v| v >= ripscollapse::complex::MAX_VERTICES) {
        return Err(PyValueError::new_err("a simplex needs between 1 and 64 vertices below 64"));
    }
    Ok(Simplex::new(vertices))
}

fn order_of(n: usize, order: Option<Vec<usize>>) -> PyResult<VertexOrder> {
    match order {
        None => Ok(VertexOrder::identity(n)),
        Some(seq) if seq.len() == n => VertexOrder::from_sequence(seq).map_err(|e| err(format!("not a permutation ({})", e.0))),
        Some(seq) => Err(PyValueError::new_err(format!("order lists {} of {n} points", seq.len()))),
    }
}

fn level_of(levels: &DistanceLevels, t: Option<&Bound<'_, PyAny>>) -> PyResult<usize> {
    match t {
        None => Ok(levels.top()),
        Some(t) => {
            let t = from_py(t, levels.mode())?;
            levels.level_at_most(&t).ok_or_else(|| PyValueError::new_err("scale must be nonnegative"))
        }
    }
}

/// A finite metric space with named points.
#[pyclass(module = "ripscollapse", frozen)]
#[derive(Clone)]
struct MetricSpace {
    inner: FiniteMetricSpace,
}

#[pymethods]
impl MetricSpace {
    /// Parses a lower-triangular (`format="lower"`) or square (`"square"`) distance matrix.
    #[staticmethod]
    #[pyo3(signature = (text, format = "lower", mode = "rational", eps = 1e-9, allow_pseudo = false))]
    fn parse(text: &str, format: &str, mode: &str, eps: f64, allow_pseudo: bool) -> PyResult<Self> {
        let format = match format {
            "lower" => MatrixFormat::LowerTriangular,
            "square" => MatrixFormat::Square,
            other => return Err(PyValueError::new_err(format!("unknown format {other:?}"))),
        };
        let inner = metric::load_metric(text, format, mode_of(mode, eps)?, LoadOptions { allow_pseudo }).map_err(err)?;
        Ok(MetricSpace { inner })
    }

    /// Builds a space from a square matrix of numbers, strings or fractions.
    #[staticmethod]
    #[pyo3(signature = (rows, names = None, mode = "rational", eps = 1e-9))]
    fn from_matrix(rows: Vec<Vec<Bound<'_, PyAny>>>, names: Option<Vec<String>>, mode: &str, eps: f64) -> PyResult<Self> {
        let mode = mode_of(mode, eps)?;
        let n = rows.len();
        let mut matrix = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(PyValueError::new_err("the matrix must be square"));
            }
            for v in row {
                matrix.push(from_py(v, mode)?);
            }
        }
        let names = names.unwrap_or_else(|| (0..n).map(|i| format!("p{i}")).collect());
        let inner = FiniteMetricSpace::new(names, matrix, mode, LoadOptions::default()).map_err(err)?;
        Ok(MetricSpace { inner })
    }

    /// The shortest-path metric of the unit cycle on `n` vertices.
    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        if n < 3 {
            return Err(PyValueError::new_err("a cycle needs at least three vertices"));
        }
        Ok(MetricSpace { inner: ripscollapse::datasets::cycle_graph(n) })
    }

    /// A seeded random metric: shortest paths of a random connected graph with integer weights.
    #[staticmethod]
    #[pyo3(signature = (n, seed = 0))]
    fn random(n: usize, seed: u64) -> PyResult<Self> {
        if n == 0 || n > ripscollapse::complex::MAX_VERTICES {
            return Err(PyValueError::new_err("n must be between 1 and 64"));
        }
        Ok(MetricSpace { inner: ripscollapse::datasets::random_metric(n, seed, Default::default()) })
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("MetricSpace({} points)", self.inner.len())
    }

    fn distance(&self, py: Python<'_>, i: usize, j: usize) -> PyResult<PyObject> {
        if i >= self.inner.len() || j >= self.inner.len() {
            return Err(PyValueError::new_err("point index out of range"));
        }
        to_py(py, self.inner.dist(i, j))
    }

    /// `(delta, witness)`: the four-point hyperbolicity and a quadruple attaining it.
    fn hyperbolicity(&self, py: Python<'_>) -> PyResult<(PyObject, Option<[usize; 4]>)> {
        let h = metric::hyperbolicity(&self.inner);
        Ok((to_py(py, &h.delta)?, h.witness))
    }

    /// `(nu, witness)`: the geodesic defect and a pair `(x, y, r)` attaining it.
    fn geodesic_defect(&self, py: Python<'_>) -> PyResult<(PyObject, DefectWitness)> {
        let d = metric::geodesic_defect(&self.inner);
        let witness = match &d.witness {
            Some((x, y, r)) => Some((*x, *y, to_py(py, r)?)),
            None => None,
        };
        Ok((to_py(py, &d.nu)?, witness))
    }

    /// `4δ + 2ν`, above which the Vietoris–Rips complexes are collapsible.
    fn threshold(&self, py: Python<'_>) -> PyResult<PyObject> {
        to_py(py, &gradients::contractibility_threshold(&self.inner).theta)
    }

    /// The distinct distances in increasing order, starting at 0.
    fn levels(&self, py: Python<'_>) -> PyResult<Vec<PyObject>> {
        distance_levels(&self.inner).values().iter().map(|v| to_py(py, v)).collect()
    }

    /// Simplices of `VR_t` with their diameters, in diameter-lexicographic order.
    #[pyo3(signature = (t = None, dim_cap = None))]
    fn vietoris_rips(&self, py: Python<'_>, t: Option<&Bound<'_, PyAny>>, dim_cap: Option<usize>) -> PyResult<Vec<(Vec<usize>, PyObject)>> {
        let levels = distance_levels(&self.inner);
        let m = level_of(&levels, t)?;
        let k = vietoris_rips_at_level(&levels, m, dim_cap, BUDGET).map_err(err)?;
        let f = Filtration::new(k, levels, VertexOrder::identity(self.inner.len()), SimplexOrder::Lexicographic);
        f.simplices().iter().map(|s| Ok((tuple(*s), to_py(py, f.diameter(*s))?))).collect()
    }
}

/// A positively weighted tree; its path metric is a tree metric.
#[pyclass(module = "ripscollapse", frozen)]
#[derive(Clone)]
struct Tree {
    inner: WeightedTree,
}

#[pymethods]
impl Tree {
    /// Parses `name_u name_v length` lines with an optional `root name` line.
    #[staticmethod]
    #[pyo3(signature = (text, mode = "rational", eps = 1e-9))]
    fn parse(text: &str, mode: &str, eps: f64) -> PyResult<Self> {
        Ok(Tree { inner: metric::parse_tree(text, mode_of(mode, eps)?).map_err(err)? })
    }

    /// A seeded uniformly random labelled tree with integer weights in `low..=high`.
    #[staticmethod]
    #[pyo3(signature = (n, seed = 0, low = 1, high = 10))]
    fn random(n: usize, seed: u64, low: i64, high: i64) -> PyResult<Self> {
        if n == 0 || n > ripscollapse::complex::MAX_VERTICES || low < 1 || low > high {
            return Err(PyValueError::new_err("need 1 <= n <= 64 and 1 <= low <= high"));
        }
        let weights = ripscollapse::datasets::WeightRange { low, high };
        Ok(Tree { inner: ripscollapse::datasets::random_tree(n, seed, weights) })
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Tree({} vertices)", self.inner.len())
    }

    /// Edges as `(u, v, length)`.
    fn edges(&self, py: Python<'_>) -> PyResult<Vec<(usize, usize, PyObject)>> {
        self.inner.edges().iter().map(|e| Ok((e.u, e.v, to_py(py, &e.length)?))).collect()
    }

    fn metric(&self) -> MetricSpace {
        MetricSpace { inner: metric::tree_metric(&self.inner) }
    }

    /// A vertex order in which every vertex follows the vertices on its path to `root`.
    #[pyo3(signature = (root = 0))]
    fn compatible_order(&self, root: usize) -> PyResult<Vec<usize>> {
        if root >= self.inner.len() {
            return Err(PyValueError::new_err("root out of range"));
        }
        Ok(metric::compatible_order(&self.inner, root).sequence().to_vec())
    }
}

/// A discrete gradient: disjoint regular intervals `[rho, phi]` of simplices.
#[pyclass(module = "ripscollapse", frozen)]
#[derive(Clone)]
struct Gradient {
    inner: DiscreteGradient,
}

#[pymethods]
impl Gradient {
    /// Builds a gradient from `(rho, phi)` pairs of vertex tuples.
    #[new]
    fn new(intervals: Vec<(Vec<usize>, Vec<usize>)>) -> PyResult<Self> {
        let pairs = intervals
            .iter()
            .map(|(r, p)| Ok((simplex_of(r)?, simplex_of(p)?)))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = DiscreteGradient::from_pairs(pairs).map_err(err)?;
        Ok(Gradient { inner })
    }

    fn intervals(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.inner.sorted().intervals().iter().map(|i| (tuple(i.rho), tuple(i.phi))).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Gradient({} intervals)", self.inner.len())
    }

    /// Simplices of `VR_t(space)` not covered by any interval.
    #[pyo3(signature = (space, t = None))]
    fn critical_cells(&self, space: &MetricSpace, t: Option<&Bound<'_, PyAny>>) -> PyResult<Vec<Vec<usize>>> {
        let levels = distance_levels(&space.inner);
        let k = vietoris_rips_at_level(&levels, level_of(&levels, t)?, None, BUDGET).map_err(err)?;
        Ok(morse::critical_cells(&self.inner, &k).into_iter().map(tuple).collect())
    }

    /// Runs every gradient check on `VR_t(space)`; returns `{check: passed}`. With `reference`,
    /// the intervals must cover everything but that point; `diameter=True` requires
    /// diameter-constant intervals.
    #[pyo3(signature = (space, t = None, reference = None, diameter = false))]
    fn validate<'py>(
        &self,
        py: Python<'py>,
        space: &MetricSpace,
        t: Option<&Bound<'_, PyAny>>,
        reference: Option<usize>,
        diameter: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let levels = distance_levels(&space.inner);
        let k = vietoris_rips_at_level(&levels, level_of(&levels, t)?, None, BUDGET).map_err(err)?;
        let point = reference
            .map(|p| SimplicialComplex::closure(space.inner.len(), [Simplex::vertex(p)]))
            .transpose()
            .map_err(err)?;
        let options = ValidationOptions { subcomplex: point.as_ref(), order: None, levels: diameter.then_some(&levels) };
        let report = morse::validate_gradient(&k, &self.inner, options);
        let out = PyDict::new_bound(py);
        for o in &report.outcomes {
            match o.status {
                morse::CheckStatus::Skipped => {}
                status => out.set_item(o.check.name(), status == morse::CheckStatus::Pass)?,
            }
        }
        Ok(out)
    }
}

fn tree_space(tree: &Tree) -> PyResult<TreeMetricSpace> {
    TreeMetricSpace::from_tree(&tree.inner).map_err(err)
}

/// The cone gradient of `VR_t` towards `reference`; `t` defaults to `4δ + 2ν`.
#[pyfunction]
#[pyo3(signature = (space, t = None, reference = 0, enforce_threshold = true))]
fn cone_gradient(space: &MetricSpace, t: Option<&Bound<'_, PyAny>>, reference: usize, enforce_threshold: bool) -> PyResult<Gradient> {
    let t = match t {
        Some(t) => from_py(t, space.inner.mode())?,
        None => gradients::contractibility_threshold(&space.inner).theta,
    };
    let cone = gradients::cone_gradient(&space.inner, &t, reference, enforce_threshold, BUDGET).map_err(err)?;
    Ok(Gradient { inner: cone.gradient })
}

/// A gradient on the full complex collapsing every `VR_u` onto `VR_t` and onto `reference` for
/// all `u > t ≥ 4δ + 2ν`.
#[pyfunction]
#[pyo3(signature = (space, reference = 0))]
fn filtered_cone_gradient(space: &MetricSpace, reference: usize) -> PyResult<Gradient> {
    let fc = gradients::filtered_cone_gradient(&space.inner, reference, BUDGET).map_err(err)?;
    Ok(Gradient { inner: fc.gradient })
}

#[pyfunction]
fn canonical_gradient(tree: &Tree) -> PyResult<Gradient> {
    Ok(Gradient { inner: gradients::canonical_gradient(&tree_space(tree)?).map_err(err)? })
}

#[pyfunction]
#[pyo3(signature = (tree, order = None))]
fn perturbed_gradient(tree: &Tree, order: Option<Vec<usize>>) -> PyResult<Gradient> {
    let order = order_of(tree.inner.len(), order)?;
    Ok(Gradient { inner: gradients::perturbed_gradient(&tree_space(tree)?, &order).map_err(err)? })
}

/// Requires pairwise distinct distances.
#[pyfunction]
fn generic_gradient(tree: &Tree) -> PyResult<Gradient> {
    Ok(Gradient { inner: gradients::generic_gradient(&tree_space(tree)?).map_err(err)? })
}

fn filtration(space: &MetricSpace, order: Option<Vec<usize>>, reverse_colex: bool, dim_cap: Option<usize>) -> PyResult<Filtration> {
    let levels = distance_levels(&space.inner);
    let k = vietoris_rips_at_level(&levels, levels.top(), dim_cap, BUDGET).map_err(err)?;
    let convention = if reverse_colex { SimplexOrder::ReverseColexicographic } else { SimplexOrder::Lexicographic };
    Ok(Filtration::new(k, levels, order_of(space.inner.len(), order)?, convention))
}

/// Apparent pairs of the diameter-lexicographic filtration of the full complex.
#[pyfunction]
#[pyo3(signature = (space, order = None, zero_persistence = false, reverse_colex = false, dim_cap = None))]
fn apparent_pairs(
    space: &MetricSpace,
    order: Option<Vec<usize>>,
    zero_persistence: bool,
    reverse_colex: bool,
    dim_cap: Option<usize>,
) -> PyResult<Gradient> {
    let f = filtration(space, order, reverse_colex, dim_cap)?;
    let m = if zero_persistence { gradients::zero_persistence_apparent_pairs(&f) } else { gradients::apparent_pairs(&f) };
    Ok(Gradient { inner: m.to_gradient() })
}

/// Whether the intervals of `fine` partition every interval of `coarse`.
#[pyfunction]
fn refines(coarse: &Gradient, fine: &Gradient) -> bool {
    gradients::refinement_check(&coarse.inner, &fine.inner).refines
}

/// Collapses `VR_u ↘ VR_t` with `gradient` restricted to the difference. Returns the removed
/// `(sigma, tau)` pairs; raises if the restricted gradient leaves critical simplices.
#[pyfunction]
#[pyo3(signature = (space, gradient, u, t))]
fn collapse(space: &MetricSpace, gradient: &Gradient, u: &Bound<'_, PyAny>, t: &Bound<'_, PyAny>) -> PyResult<Vec<(Vec<usize>, Vec<usize>)>> {
    let levels = distance_levels(&space.inner);
    let k = vietoris_rips_at_level(&levels, level_of(&levels, Some(u))?, None, BUDGET).map_err(err)?;
    let l = vietoris_rips_at_level(&levels, level_of(&levels, Some(t))?, None, BUDGET).map_err(err)?;
    if !l.is_subcomplex_of(&k) {
        return Err(PyValueError::new_err("t must not exceed u"));
    }
    let restricted = gradient.inner.restrict(&k, Some(&l));
    let certificate = morse::collapse(&k, &restricted, &l, &VertexOrder::identity(space.inner.len()))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(certificate.steps.iter().map(|(s, t)| (tuple(*s), tuple(*t))).collect())
}

/// Betti numbers over Z/2 of `VR_t`.
#[pyfunction]
#[pyo3(signature = (space, t = None))]
fn betti_numbers(space: &MetricSpace, t: Option<&Bound<'_, PyAny>>) -> PyResult<Vec<usize>> {
    let levels = distance_levels(&space.inner);
    let k = vietoris_rips_at_level(&levels, level_of(&levels, t)?, None, BUDGET).map_err(err)?;
    persistence::homology_oracle(&k, persistence::DEFAULT_ORACLE_BUDGET).map_err(err)
}

/// Z/2 persistence of the Vietoris–Rips filtration. Returns `{"barcode": [[(birth, death)]],
/// "additions": int, "additions_by_degree": [int], "apparent_skipped": int}`; `death` is `None`
/// for essential classes.
#[pyfunction]
#[pyo3(signature = (space, max_degree = 1, order = None, reverse_colex = false, shortcut = true))]
fn persistent_homology<'py>(
    py: Python<'py>,
    space: &MetricSpace,
    max_degree: usize,
    order: Option<Vec<usize>>,
    reverse_colex: bool,
    shortcut: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let f = filtration(space, order, reverse_colex, Some(max_degree + 2))?;
    let (barcode, stats) = persistence::persistent_homology(&f, max_degree, shortcut, BUDGET).map_err(err)?;
    let bars = PyList::empty_bound(py);
    for k in 0..=max_degree {
        let degree = PyList::empty_bound(py);
        for i in barcode.degree(k) {
            let death = match &i.death {
                Some(d) => to_py(py, d)?,
                None => py.None(),
            };
            degree.append((to_py(py, &i.birth)?, death))?;
        }
        bars.append(degree)?;
    }
    let out = PyDict::new_bound(py);
    out.set_item("barcode", bars)?;
    out.set_item("additions", stats.additions)?;
    out.set_item("additions_by_degree", stats.per_degree.iter().map(|d| d.additions).collect::<Vec<_>>())?;
    out.set_item("apparent_skipped", stats.apparent_skipped)?;
    Ok(out)
}

#[pymodule]
#[pyo3(name = "ripscollapse")]
fn ripscollapse_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<MetricSpace>()?;
    m.add_class::<Tree>()?;
    m.add_class::<Gradient>()?;
    m.add_function(wrap_pyfunction!(cone_gradient, m)?)?;
    m.add_function(wrap_pyfunction!(filtered_cone_gradient, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_gradient, m)?)?;
    m.add_function(wrap_pyfunction!(perturbed_gradient, m)?)?;
    m.add_function(wrap_pyfunction!(generic_gradient, m)?)?;
    m.add_function(wrap_pyfunction!(apparent_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(refines, m)?)?;
    m.add_function(wrap_pyfunction!(collapse, m)?)?;
    m.add_function(wrap_pyfunction!(betti_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(persistent_homology, m)?)?;
    Ok(())
}
