//! Python bindings. Labels are `int` or `(int, int)`, objects are
//! `{label: multiplicity}` dicts.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use hg::slicing::{
    f_compatibility_witness, gluable_witness, grading_witness, implication_check, perverse_witness, psi,
    pushforward_support, BaricOracle, BeilinsonSouleConfig, HeartOracle, HeartRule, HeartTable, HeartWindow, PsiArg,
    Witness,
};
use hg::model::{AQuiver, QuiverOracle, QuiverSlicing};
use hg::upperset::{
    perversity_to_upperset, perversity_to_upperset_complement, upperset_to_perversity, upperset_to_perversity_northeast,
};
use hg::{Element, ExtInt, ExtPerversity, SharedOracle, SupportObject, UpperSet2D, ZSetMap, ZToset};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: hg::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ext_to_py(py: Python<'_>, v: ExtInt) -> PyResult<Bound<'_, PyAny>> {
    Ok(match v {
        ExtInt::Fin(n) => n.into_pyobject(py)?.into_any(),
        ExtInt::PosInf => f64::INFINITY.into_pyobject(py)?.into_any(),
        ExtInt::NegInf => f64::NEG_INFINITY.into_pyobject(py)?.into_any(),
    })
}

fn element_from_py(obj: &Bound<'_, PyAny>) -> PyResult<Element> {
    if let Ok((a, b)) = obj.extract::<(i64, i64)>() {
        return Ok(Element::Pair(a, b));
    }
    obj.extract::<i64>().map(Element::Int).map_err(|_| PyValueError::new_err("label: expected int or (int, int)"))
}

fn element_to_py(py: Python<'_>, x: Element) -> PyResult<Bound<'_, PyAny>> {
    Ok(match x {
        Element::Int(n) => n.into_pyobject(py)?.into_any(),
        Element::Pair(a, b) => (a, b).into_pyobject(py)?.into_any(),
    })
}

fn witness_to_py(py: Python<'_>, w: Option<Witness>) -> PyResult<Option<Bound<'_, PyAny>>> {
    w.map(|w| Ok((element_to_py(py, w.phi)?, element_to_py(py, w.psi)?, w.shift).into_pyobject(py)?.into_any()))
        .transpose()
}

fn object_from_py(d: &Bound<'_, PyDict>) -> PyResult<SupportObject> {
    let mut items = Vec::new();
    for (k, v) in d.iter() {
        items.push((element_from_py(&k)?, v.extract::<u32>()?));
    }
    SupportObject::new(items).map_err(err)
}

fn object_to_py<'py>(py: Python<'py>, x: &SupportObject) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (label, m) in x.descending() {
        d.set_item(element_to_py(py, label)?, m)?;
    }
    Ok(d)
}

fn route_is_northeast(route: &str) -> PyResult<bool> {
    match route {
        "northeast" => Ok(true),
        "complement" => Ok(false),
        other => Err(PyValueError::new_err(format!("route: expected northeast or complement, found {other:?}"))),
    }
}

/// A perversity function, or one of the constant infinite ones.
#[pyclass(name = "Perversity", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPerversity {
    inner: ExtPerversity,
}

#[pymethods]
impl PyPerversity {
    #[staticmethod]
    fn zero() -> Self {
        hg::Perversity::zero().into()
    }

    #[staticmethod]
    fn identity() -> Self {
        hg::Perversity::identity().into()
    }

    #[staticmethod]
    fn middle() -> Self {
        hg::Perversity::middle().into()
    }

    #[staticmethod]
    fn chi(k: i64) -> Self {
        hg::Perversity::chi(k).into()
    }

    #[staticmethod]
    fn constant(c: i64) -> Self {
        hg::Perversity::constant(c).into()
    }

    #[staticmethod]
    fn plus_infinity() -> Self {
        PyPerversity { inner: ExtPerversity::PlusInfinity }
    }

    #[staticmethod]
    fn minus_infinity() -> Self {
        PyPerversity { inner: ExtPerversity::MinusInfinity }
    }

    /// Values on `[anchor, anchor + len)`, with `(period, shift)` tails.
    #[staticmethod]
    fn from_values(anchor: i64, values: Vec<i64>, left: (i64, i64), right: (i64, i64)) -> PyResult<Self> {
        let t = |(p, s): (i64, i64)| hg::Tail::new(p, s);
        hg::Perversity::new(anchor, &values, t(left), t(right)).map(Into::into).map_err(err)
    }

    /// Every perversity on `window`, valued in `values`, constant outside.
    #[staticmethod]
    fn enumerate(window: (i64, i64), values: (i64, i64)) -> Vec<Self> {
        hg::Perversity::enumerate(window, values).into_iter().map(Into::into).collect()
    }

    fn __call__<'py>(&self, py: Python<'py>, n: i64) -> PyResult<Bound<'py, PyAny>> {
        ext_to_py(py, self.inner.eval(n))
    }

    fn act_dot(&self, k: i64) -> Self {
        PyPerversity { inner: self.inner.act_dot(k) }
    }

    fn act_plus(&self, k: i64) -> Self {
        PyPerversity { inner: self.inner.act_plus(k) }
    }

    fn le(&self, other: &PyPerversity) -> bool {
        self.inner.le(&other.inner)
    }

    fn is_strict(&self) -> PyResult<bool> {
        self.inner.is_strict().map_err(err)
    }

    #[pyo3(signature = (route = "northeast"))]
    fn to_upperset(&self, route: &str) -> PyResult<PyUpperSet> {
        let inner = if route_is_northeast(route)? {
            perversity_to_upperset(&self.inner)
        } else {
            perversity_to_upperset_complement(&self.inner)
        };
        Ok(PyUpperSet { inner })
    }

    fn __repr__(&self) -> String {
        format!("Perversity({})", self.inner)
    }
}

impl From<hg::Perversity> for PyPerversity {
    fn from(p: hg::Perversity) -> Self {
        PyPerversity { inner: p.into() }
    }
}

/// An upper set of Z x Z in the product order.
#[pyclass(name = "UpperSet", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyUpperSet {
    inner: UpperSet2D,
}

#[pymethods]
impl PyUpperSet {
    #[staticmethod]
    fn empty() -> Self {
        PyUpperSet { inner: UpperSet2D::empty() }
    }

    #[staticmethod]
    fn full() -> Self {
        PyUpperSet { inner: UpperSet2D::full() }
    }

    #[staticmethod]
    fn north_of(k: i64) -> Self {
        PyUpperSet { inner: UpperSet2D::north_of(k) }
    }

    #[staticmethod]
    fn east_of(k: i64) -> Self {
        PyUpperSet { inner: UpperSet2D::east_of(k) }
    }

    fn __contains__(&self, point: (i64, i64)) -> bool {
        self.inner.contains(point.0, point.1)
    }

    fn is_subset(&self, other: &PyUpperSet) -> bool {
        self.inner.is_subset(&other.inner)
    }

    fn is_kinky(&self) -> bool {
        self.inner.is_kinky()
    }

    #[pyo3(signature = (route = "complement"))]
    fn to_perversity(&self, route: &str) -> PyResult<PyPerversity> {
        let inner = if route_is_northeast(route)? {
            upperset_to_perversity_northeast(&self.inner)
        } else {
            upperset_to_perversity(&self.inner)
        };
        Ok(PyPerversity { inner })
    }

    /// Rows of `#` (member) and `.`, from `n' = m1` down to `m0`.
    fn plot(&self, n0: i64, n1: i64, m0: i64, m1: i64) -> String {
        let mut s = String::new();
        for m in (m0..=m1).rev() {
            s.extend((n0..=n1).map(|n| if self.inner.contains(n, m) { '#' } else { '.' }));
            s.push('\n');
        }
        s
    }

    fn __repr__(&self) -> String {
        format!("UpperSet({})", self.inner)
    }
}

/// A Z-equivariant map between Z-tosets.
#[pyclass(name = "Map", frozen)]
struct PyMap {
    inner: ZSetMap,
}

#[pymethods]
impl PyMap {
    #[staticmethod]
    fn identity() -> Self {
        PyMap { inner: ZSetMap::identity(ZToset::z_lex_zhat()) }
    }

    #[staticmethod]
    fn exchange() -> PyResult<Self> {
        Ok(PyMap { inner: ZSetMap::exchange(&ZToset::z_lex_zhat()).map_err(err)? })
    }

    #[staticmethod]
    fn alpha() -> Self {
        PyMap { inner: ZSetMap::alpha() }
    }

    #[staticmethod]
    fn beta() -> Self {
        PyMap { inner: ZSetMap::beta() }
    }

    #[staticmethod]
    fn gamma(p: &PyPerversity) -> PyResult<Self> {
        Ok(PyMap { inner: ZSetMap::gamma(&p.inner).map_err(err)? })
    }

    #[staticmethod]
    fn g(p: &PyPerversity) -> PyResult<Self> {
        Ok(PyMap { inner: ZSetMap::g(&p.inner).map_err(err)? })
    }

    #[staticmethod]
    fn projection_first() -> PyResult<Self> {
        Ok(PyMap { inner: ZSetMap::projection_first(&ZToset::z_lex_zhat()).map_err(err)? })
    }

    fn then(&self, other: &PyMap) -> PyResult<Self> {
        Ok(PyMap { inner: ZSetMap::compose(self.inner.clone(), other.inner.clone()).map_err(err)? })
    }

    fn __call__<'py>(&self, py: Python<'py>, x: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        element_to_py(py, self.inner.apply(&element_from_py(x)?).map_err(err)?)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }
}

/// A slicing, given by which Hom groups between slices vanish.
#[pyclass(name = "Oracle", frozen)]
struct PyOracle {
    inner: SharedOracle,
}

fn heart(rule: HeartRule) -> PyOracle {
    PyOracle { inner: Arc::new(HeartOracle::new(rule)) }
}

#[pymethods]
impl PyOracle {
    #[staticmethod]
    fn semisimple() -> Self {
        heart(HeartRule::Semisimple)
    }

    #[staticmethod]
    fn koszul() -> Self {
        heart(HeartRule::Koszul)
    }

    #[staticmethod]
    fn coherent_support(dim: i64) -> Self {
        heart(HeartRule::CoherentSupport { dim })
    }

    #[staticmethod]
    fn torsion_pair() -> Self {
        heart(HeartRule::TorsionPair)
    }

    /// `entries[(phi, psi, shift)] = vanishes`, on top of the degree-0 baseline.
    #[staticmethod]
    #[pyo3(signature = (entries, default_vanishes = true, weights = None))]
    fn table(entries: BTreeMap<(i64, i64, i64), bool>, default_vanishes: bool, weights: Option<(i64, i64)>) -> Self {
        let rule = HeartRule::Table(HeartTable { entries, default_vanishes });
        let o = match weights {
            Some((lo, hi)) => HeartOracle::with_weights(rule, lo, hi),
            None => HeartOracle::new(rule),
        };
        PyOracle { inner: Arc::new(o) }
    }

    /// Baric slicing with vanishing governed by `number-field` or `generic`,
    /// with extra nonvanishing `(weight, degree)` groups planted.
    #[staticmethod]
    #[pyo3(signature = (preset = "number-field", planted = Vec::new()))]
    fn beilinson_soule(preset: &str, planted: Vec<(i64, i64)>) -> PyResult<Self> {
        let mut cfg = match preset {
            "number-field" => BeilinsonSouleConfig::number_field(),
            "generic" => BeilinsonSouleConfig::generic(),
            other => return Err(PyValueError::new_err(format!("preset: unknown preset {other:?}"))),
        };
        cfg.planted_nonzero = planted.into_iter().collect::<BTreeSet<_>>();
        Ok(PyOracle { inner: Arc::new(BaricOracle::beilinson_soule(cfg)) })
    }

    #[staticmethod]
    #[pyo3(signature = (n, slicing = "slope"))]
    fn quiver(n: usize, slicing: &str) -> PyResult<Self> {
        let s = match slicing {
            "standard" => QuiverSlicing::Standard,
            "slope" => QuiverSlicing::Slope,
            "top" => QuiverSlicing::Top,
            other => return Err(PyValueError::new_err(format!("slicing: unknown slicing {other:?}"))),
        };
        let q = AQuiver::new(n).map_err(err)?;
        Ok(PyOracle { inner: Arc::new(QuiverOracle::new(q, s)) })
    }

    fn vanishes(&self, phi: &Bound<'_, PyAny>, psi: &Bound<'_, PyAny>, shift: i64) -> PyResult<bool> {
        self.inner.vanishes(&element_from_py(phi)?, &element_from_py(psi)?, shift).map_err(err)
    }

    /// First `(phi, psi, shift)` violating f-compatibility on the labels, or None.
    fn compatibility_witness<'py>(
        &self,
        py: Python<'py>,
        f: &PyMap,
        labels: Vec<Bound<'py, PyAny>>,
    ) -> PyResult<Option<Bound<'py, PyAny>>> {
        let labels: Vec<Element> = labels.iter().map(element_from_py).collect::<PyResult<_>>()?;
        witness_to_py(py, f_compatibility_witness(self.inner.as_ref(), &f.inner, &labels).map_err(err)?)
    }

    /// Gluable, grading, perverse and exchange witnesses (None when the
    /// property holds) on weights and shifts in `[lo, hi]`.
    fn implications<'py>(&self, py: Python<'py>, lo: i64, hi: i64) -> PyResult<Bound<'py, PyDict>> {
        let w = window(self, lo, hi);
        let r = implication_check(self.inner.as_ref(), &w).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("gluable", witness_to_py(py, r.gluable)?)?;
        d.set_item("grading", witness_to_py(py, r.grading)?)?;
        d.set_item("perverse", witness_to_py(py, r.perverse)?)?;
        d.set_item("exchange", witness_to_py(py, r.exchange)?)?;
        Ok(d)
    }

    fn is_gluable(&self, lo: i64, hi: i64) -> PyResult<bool> {
        Ok(gluable_witness(self.inner.as_ref(), &window(self, lo, hi)).map_err(err)?.is_none())
    }

    fn is_grading(&self, lo: i64, hi: i64) -> PyResult<bool> {
        Ok(grading_witness(self.inner.as_ref(), &window(self, lo, hi)).map_err(err)?.is_none())
    }

    fn is_perverse(&self, lo: i64, hi: i64) -> PyResult<bool> {
        Ok(perverse_witness(self.inner.as_ref(), &window(self, lo, hi)).map_err(err)?.is_none())
    }

    fn pushforward<'py>(&self, py: Python<'py>, f: &PyMap, object: &Bound<'py, PyDict>) -> PyResult<Bound<'py, PyDict>> {
        let x = object_from_py(object)?;
        object_to_py(py, &pushforward_support(self.inner.as_ref(), &f.inner, &x).map_err(err)?)
    }

    /// For each object: `(in_heart, violating labels)` under psi(p).
    /// Raises if the slicing does not meet the precondition on the window.
    #[pyo3(signature = (p, objects, lo = -8, hi = 8))]
    fn heart<'py>(
        &self,
        py: Python<'py>,
        p: &PyPerversity,
        objects: Vec<Bound<'py, PyDict>>,
        lo: i64,
        hi: i64,
    ) -> PyResult<Vec<(bool, Vec<Bound<'py, PyAny>>)>> {
        let (desc, _) =
            psi(self.inner.as_ref(), &PsiArg::Perversity(p.inner.clone()), &window(self, lo, hi)).map_err(err)?;
        let mut out = Vec::new();
        for o in &objects {
            let (ok, bad) = desc.heart_membership(&object_from_py(o)?).map_err(err)?;
            out.push((ok, bad.into_iter().map(|l| element_to_py(py, l)).collect::<PyResult<_>>()?));
        }
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!("Oracle({})", self.inner.describe())
    }
}

fn window(o: &PyOracle, lo: i64, hi: i64) -> HeartWindow {
    let idx = o.inner.index();
    HeartWindow::new((lo..=hi).filter(|w| idx.contains(&Element::Pair(0, *w))), (lo, hi))
}

/// Runs a named scenario; returns `(passed, report)`.
#[pyfunction]
#[pyo3(signature = (name, k = 0, dim = 3))]
fn run_demo(name: &str, k: i64, dim: i64) -> PyResult<(bool, String)> {
    let r = hg::scenarios::run(name, k, dim).map_err(err)?;
    Ok((r.passed(), r.to_string()))
}

#[pymodule]
fn heartglue(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPerversity>()?;
    m.add_class::<PyUpperSet>()?;
    m.add_class::<PyMap>()?;
    m.add_class::<PyOracle>()?;
    m.add_function(wrap_pyfunction!(run_demo, m)?)?;
    m.add("SCENARIOS", hg::scenarios::SCENARIOS.to_vec())?;
    Ok(())
}
