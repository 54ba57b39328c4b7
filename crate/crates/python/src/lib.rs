//! Python bindings: rankings and coefficients, datasets, the label ranking
//! rule model, pairwise rules and cross-validation.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use prefrules_core::harness::{evaluate_cv, train_model, EvalConfig};
use prefrules_core::lrar::{Aggregation, LrarModel, LrarParams, MinConf};
use prefrules_core::par::{describe_rule, mine_par as mine_par_core, ParParams};
use prefrules_core::ranking::{self, Ranking, SimilarityKind};
use prefrules_core::{Dataset, Error};

fn err(e: Error) -> PyErr {
    match e {
        Error::Io(m) => PyIOError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parsed<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

#[pyclass(name = "Ranking", module = "prefrules", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyRanking {
    inner: Ranking,
}

impl From<Ranking> for PyRanking {
    fn from(inner: Ranking) -> Self {
        PyRanking { inner }
    }
}

#[pymethods]
impl PyRanking {
    /// Dense rank vector; 0 marks an unranked label.
    #[new]
    fn new(ranks: Vec<u32>) -> PyResult<Self> {
        Ranking::new(ranks).map(Into::into).map_err(err)
    }

    /// Parses `L1>L2=L3`; labels missing from the text get rank 0.
    #[staticmethod]
    fn from_text(text: &str, labels: Vec<String>) -> PyResult<Self> {
        Ranking::parse_text(text, &labels).map(Into::into).map_err(err)
    }

    fn to_text(&self, labels: Vec<String>) -> PyResult<String> {
        if labels.len() != self.inner.k() {
            return Err(PyValueError::new_err(format!(
                "{} labels for a ranking over {}",
                labels.len(),
                self.inner.k()
            )));
        }
        Ok(self.inner.to_text(&labels))
    }

    #[getter]
    fn ranks(&self) -> Vec<u32> {
        self.inner.ranks().to_vec()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn is_strict_total(&self) -> bool {
        self.inner.is_strict_total()
    }

    fn reverse(&self) -> Self {
        self.inner.reverse().into()
    }

    fn __len__(&self) -> usize {
        self.inner.k()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ranking({:?})", self.inner.ranks())
    }
}

#[pyfunction]
fn kendall_tau(p: &PyRanking, q: &PyRanking) -> PyResult<f64> {
    ranking::kendall_tau(&p.inner, &q.inner).map_err(err)
}

#[pyfunction]
fn kendall_tau_b(p: &PyRanking, q: &PyRanking) -> PyResult<f64> {
    ranking::kendall_tau_b(&p.inner, &q.inner).map_err(err)
}

#[pyfunction]
fn gamma(p: &PyRanking, q: &PyRanking) -> PyResult<f64> {
    ranking::gamma(&p.inner, &q.inner).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (p, q, theta = 0.0, base = "tau"))]
fn censored_similarity(p: &PyRanking, q: &PyRanking, theta: f64, base: &str) -> PyResult<f64> {
    ranking::censored_similarity(&p.inner, &q.inner, theta, parsed(base)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (rankings, weights = None, strict = false))]
fn average_ranking(rankings: Vec<PyRanking>, weights: Option<Vec<f64>>, strict: bool) -> PyResult<PyRanking> {
    let rs: Vec<Ranking> = rankings.into_iter().map(|r| r.inner).collect();
    ranking::average_ranking(&rs, weights.as_deref(), strict)
        .map(Into::into)
        .map_err(err)
}

#[pyclass(name = "Dataset", module = "prefrules", frozen)]
struct PyDataset {
    inner: Dataset,
}

#[pymethods]
impl PyDataset {
    #[staticmethod]
    #[pyo3(signature = (path, target = "ranking"))]
    fn from_csv(path: &str, target: &str) -> PyResult<Self> {
        let file = std::fs::File::open(path).map_err(|e| PyIOError::new_err(format!("{path}: {e}")))?;
        Dataset::parse_csv(std::io::BufReader::new(file), target)
            .map(|inner| PyDataset { inner })
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (text, target = "ranking"))]
    fn from_csv_text(text: &str, target: &str) -> PyResult<Self> {
        Dataset::parse_csv(text.as_bytes(), target)
            .map(|inner| PyDataset { inner })
            .map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn label_names(&self) -> Vec<String> {
        self.inner.label_names().to_vec()
    }

    #[getter]
    fn targets(&self) -> Vec<PyRanking> {
        self.inner.targets().iter().cloned().map(Into::into).collect()
    }

    #[getter]
    fn attributes(&self) -> Vec<String> {
        self.inner.schema().iter().map(|a| a.name.clone()).collect()
    }

    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = self.inner.stats().map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("n", s.n)?;
        d.set_item("m", s.m)?;
        d.set_item("k", s.k)?;
        d.set_item("U_pi", s.u_pi)?;
        d.set_item("label_names", s.label_names)?;
        Ok(d)
    }

    /// Equal-width binning of the numeric attributes.
    #[pyo3(signature = (bins = 4))]
    fn discretize(&self, bins: usize) -> PyResult<Self> {
        self.inner
            .equal_width_discretize(bins)
            .map(|inner| PyDataset { inner })
            .map_err(err)
    }

    fn to_csv(&self) -> PyResult<String> {
        self.inner.to_csv_string().map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset(n={}, m={}, k={})",
            self.inner.n(),
            self.inner.m(),
            self.inner.k()
        )
    }
}

#[pyclass(name = "LrarModel", module = "prefrules", frozen)]
struct PyLrarModel {
    inner: LrarModel,
}

#[pymethods]
impl PyLrarModel {
    #[getter]
    fn rules<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let out = PyList::empty(py);
        for r in &self.inner.rules {
            let d = PyDict::new(py);
            let antecedent: Vec<String> = r
                .antecedent
                .iter()
                .map(|&a| self.inner.descriptor_text(a))
                .collect();
            d.set_item("antecedent", antecedent)?;
            d.set_item("consequent", PyRanking::from(r.consequent.clone()))?;
            d.set_item("consequent_text", r.consequent.to_text(&self.inner.label_names))?;
            d.set_item("sup_lr", r.sup_lr)?;
            d.set_item("conf_lr", r.conf_lr)?;
            d.set_item("lift_lr", r.lift_lr)?;
            d.set_item("coverage", r.coverage)?;
            out.append(d)?;
        }
        Ok(out)
    }

    #[getter]
    fn default_ranking(&self) -> PyRanking {
        self.inner.default_ranking.clone().into()
    }

    #[getter]
    fn minconf(&self) -> f64 {
        self.inner.params.minconf
    }

    #[getter]
    fn label_names(&self) -> Vec<String> {
        self.inner.label_names.clone()
    }

    #[pyo3(signature = (data, aggregation = "average", strict = false))]
    fn predict(&self, data: &PyDataset, aggregation: &str, strict: bool) -> PyResult<Vec<PyRanking>> {
        let agg: Aggregation = parsed(aggregation)?;
        self.inner
            .predict_dataset(&data.inner, agg, strict)
            .map(|ps| ps.into_iter().map(Into::into).collect())
            .map_err(err)
    }

    /// Fraction of rows matched by at least one rule.
    fn coverage(&self, data: &PyDataset) -> PyResult<f64> {
        self.inner.coverage(&data.inner).map_err(err)
    }

    fn to_jsonl(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        self.inner.write_jsonl(&mut buf).map_err(err)?;
        Ok(String::from_utf8(buf).expect("JSON is UTF-8"))
    }

    #[staticmethod]
    fn from_jsonl(text: &str) -> PyResult<Self> {
        LrarModel::read_jsonl(text.as_bytes())
            .map(|inner| PyLrarModel { inner })
            .map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.rules.len()
    }

    fn __repr__(&self) -> String {
        format!("LrarModel(rules={})", self.inner.rules.len())
    }
}

/// `minconf` as a number or the string "auto".
fn min_conf(value: &Bound<'_, PyAny>, step: f64, min_coverage: f64) -> PyResult<MinConf> {
    if let Ok(s) = value.extract::<String>() {
        if s == "auto" {
            return Ok(MinConf::Auto { step, min_coverage });
        }
        return Err(PyValueError::new_err(format!("minconf must be a number or 'auto', got '{s}'")));
    }
    Ok(MinConf::Fixed(value.extract::<f64>()?))
}

fn lrar_params(minsup: f64, theta: f64, min_imp: f64, alpha: f64, base: &str, minconf: &MinConf) -> PyResult<LrarParams> {
    Ok(LrarParams {
        minsup,
        minconf: match minconf {
            MinConf::Fixed(c) => *c,
            MinConf::Auto { .. } => 0.0,
        },
        theta,
        min_imp,
        alpha,
        base: parsed::<SimilarityKind>(base)?,
        max_antecedent: None,
    })
}

/// Mines label ranking association rules. Numeric attributes are binned
/// into `bins` equal-width intervals first.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (data, minsup = 0.01, minconf = None, theta = 0.0, min_imp = 0.01, alpha = 0.05, base = "tau", bins = 4, step = 0.05, min_coverage = 0.95))]
fn mine_lrar(
    py: Python<'_>,
    data: &PyDataset,
    minsup: f64,
    minconf: Option<&Bound<'_, PyAny>>,
    theta: f64,
    min_imp: f64,
    alpha: f64,
    base: &str,
    bins: usize,
    step: f64,
    min_coverage: f64,
) -> PyResult<PyLrarModel> {
    let minconf = match minconf {
        Some(v) => min_conf(v, step, min_coverage)?,
        None => MinConf::Fixed(0.5),
    };
    let params = lrar_params(minsup, theta, min_imp, alpha, base, &minconf)?;
    let ds = &data.inner;
    py.detach(|| train_model(ds, &params, minconf, bins))
        .map(|inner| PyLrarModel { inner })
        .map_err(err)
}

/// Mines pairwise association rules, sorted by lift.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (data, minsup = 0.01, minconf = 0.5, min_lift = 0.0, min_imp = 0.01, alpha = 0.05, max_consequent = 4, bins = 4))]
fn mine_par<'py>(
    py: Python<'py>,
    data: &PyDataset,
    minsup: f64,
    minconf: f64,
    min_lift: f64,
    min_imp: f64,
    alpha: f64,
    max_consequent: usize,
    bins: usize,
) -> PyResult<Bound<'py, PyList>> {
    let ds = if data.inner.is_categorical() {
        data.inner.clone()
    } else {
        data.inner.equal_width_discretize(bins).map_err(err)?
    };
    let params = ParParams {
        minsup,
        minconf,
        min_lift,
        min_imp,
        alpha,
        max_consequent: Some(max_consequent),
        max_antecedent: None,
    };
    let rules = py.detach(|| mine_par_core(&ds, &params)).map_err(err)?;
    let names = ds.label_names();
    let out = PyList::empty(py);
    for r in &rules {
        let desc = describe_rule(r, names);
        let d = PyDict::new(py);
        let antecedent: Vec<String> = r
            .antecedent
            .iter()
            .map(|&(a, v)| {
                let attr = &ds.schema()[a];
                format!("{}={}", attr.name, attr.values[v as usize])
            })
            .collect();
        let consequent: Vec<String> = r.consequent.iter().map(|rel| rel.render(names)).collect();
        d.set_item("antecedent", antecedent)?;
        d.set_item("consequent", consequent)?;
        d.set_item("consequent_text", desc.text)?;
        d.set_item("subranking", desc.subranking.map(PyRanking::from))?;
        d.set_item("sup", r.sup)?;
        d.set_item("conf", r.conf)?;
        d.set_item("lift", r.lift)?;
        out.append(d)?;
    }
    Ok(out)
}

/// Cross-validated mean Kendall tau of the label ranker.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (data, folds = 10, seed = 0, minsup = 0.01, minconf = None, theta = 0.0, min_imp = 0.01, alpha = 0.05, base = "tau", aggregation = "average", bins = 4, step = 0.05, min_coverage = 0.95))]
fn evaluate<'py>(
    py: Python<'py>,
    data: &PyDataset,
    folds: usize,
    seed: u64,
    minsup: f64,
    minconf: Option<&Bound<'_, PyAny>>,
    theta: f64,
    min_imp: f64,
    alpha: f64,
    base: &str,
    aggregation: &str,
    bins: usize,
    step: f64,
    min_coverage: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let minconf = match minconf {
        Some(v) => min_conf(v, step, min_coverage)?,
        None => MinConf::Auto { step, min_coverage },
    };
    let cfg = EvalConfig {
        params: lrar_params(minsup, theta, min_imp, alpha, base, &minconf)?,
        minconf,
        folds,
        seed,
        aggregation: parsed(aggregation)?,
        bins,
        tune_once: false,
    };
    let ds = &data.inner;
    let report = py.detach(|| evaluate_cv(ds, &cfg)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("mean_tau", report.mean_tau)?;
    d.set_item("fold_tau", report.fold_tau)?;
    d.set_item("rule_counts", report.rule_counts)?;
    d.set_item("coverage", report.coverage)?;
    d.set_item("minconf", report.minconf)?;
    Ok(d)
}

#[pymodule]
fn prefrules(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRanking>()?;
    m.add_class::<PyDataset>()?;
    m.add_class::<PyLrarModel>()?;
    m.add_function(wrap_pyfunction!(kendall_tau, m)?)?;
    m.add_function(wrap_pyfunction!(kendall_tau_b, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(censored_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(average_ranking, m)?)?;
    m.add_function(wrap_pyfunction!(mine_lrar, m)?)?;
    m.add_function(wrap_pyfunction!(mine_par, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    Ok(())
}
