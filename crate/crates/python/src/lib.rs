//! Python bindings: the finite-field contexts, cuspidal parameters, the
//! congruence and lifting checks, the counts and the verification grid.

use cuspcount::cli::verify_json;
use cuspcount::congruence::{check_thm12, check_thm13};
use cuspcount::counting::{self, CountQuery};
use cuspcount::lifting;
use cuspcount::limits::Limits;
use cuspcount::reps::{self, EndoclassRecord, InnerForm, Level};
use cuspcount::verify::{self, GridSpec};
use cuspcount::Error;
use num_rational::Ratio;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(cuspcount_py, CapExceeded, PyException);
create_exception!(cuspcount_py, ConsistencyError, PyException);

fn py_err(e: Error) -> PyErr {
    match e.exit_code() {
        3 => CapExceeded::new_err(e.to_string()),
        4 => ConsistencyError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn limits(cap: Option<u128>) -> PyResult<Limits> {
    match cap {
        Some(c) => Ok(Limits::with_cap(c)),
        None => Limits::from_env().map_err(py_err),
    }
}

/// Residue cardinality `q` and banned prime `ell`.
#[pyclass(frozen, from_py_object)]
#[derive(Clone, Copy)]
struct GroundData(reps::GroundData);

#[pymethods]
impl GroundData {
    #[new]
    fn new(q: u128, ell: u128) -> PyResult<Self> {
        reps::GroundData::new(q, ell).map(GroundData).map_err(py_err)
    }

    #[getter]
    fn q(&self) -> u128 {
        self.0.q()
    }

    #[getter]
    fn ell(&self) -> u128 {
        self.0.ell()
    }

    #[getter]
    fn p(&self) -> u128 {
        self.0.p()
    }

    fn __repr__(&self) -> String {
        format!("GroundData(q={}, ell={})", self.0.q(), self.0.ell())
    }
}

/// The finite group attached to an inner form and an endoclass.
#[pyclass(frozen, from_py_object)]
#[derive(Clone, Copy)]
struct FieldContext(reps::FieldContext);

#[pymethods]
impl FieldContext {
    /// `level` is a `(num, den)` pair.
    #[new]
    #[pyo3(signature = (ground, m, d, deg=1, res_deg=1, level=(0, 1)))]
    fn new(ground: GroundData, m: u32, d: u32, deg: u32, res_deg: u32, level: (u64, u64)) -> PyResult<Self> {
        if level.1 == 0 {
            return Err(PyValueError::new_err("level denominator must be >= 1"));
        }
        let endo = EndoclassRecord::new(deg, res_deg, Level::new(level.0, level.1)).map_err(py_err)?;
        let form = InnerForm::new(m, d).map_err(py_err)?;
        reps::FieldContext::new(ground.0, form, endo).map(FieldContext).map_err(py_err)
    }

    #[getter]
    fn d_prime(&self) -> u32 {
        self.0.d_prime()
    }

    #[getter]
    fn m_prime(&self) -> u32 {
        self.0.m_prime()
    }

    #[getter]
    fn q_e(&self) -> u128 {
        self.0.q_e()
    }

    #[getter]
    fn ambient_modulus(&self) -> u128 {
        self.0.ambient().modulus()
    }

    #[getter]
    fn f_rho(&self) -> u128 {
        self.0.f_rho()
    }
}

/// An ℓ-adic cuspidal parameter, given by an exponent in the ambient group.
#[pyclass(frozen, from_py_object)]
#[derive(Clone, Copy)]
struct AdicCuspidal(reps::AdicCuspidal);

#[pymethods]
impl AdicCuspidal {
    #[new]
    fn new(ctx: FieldContext, exponent: u128) -> PyResult<Self> {
        reps::AdicCuspidal::from_exponent(ctx.0, exponent).map(AdicCuspidal).map_err(py_err)
    }

    #[staticmethod]
    fn of_order(ctx: FieldContext, order: u128) -> PyResult<Self> {
        let x = ctx.0.ambient().element_of_order(order).map_err(py_err)?;
        reps::AdicCuspidal::new(ctx.0, x).map(AdicCuspidal).map_err(py_err)
    }

    #[getter]
    fn exponent(&self) -> u128 {
        self.0.x().exponent()
    }

    fn invariants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let inv = self.0.invariants();
        let d = PyDict::new(py);
        d.set_item("s", inv.s_adic)?;
        d.set_item("f_rho", inv.f_rho)?;
        d.set_item("n", inv.n_adic)?;
        d.set_item("deg_x", inv.deg_x)?;
        d.set_item("c", self.0.c().map_err(py_err)?)?;
        Ok(d)
    }

    /// `t`, `c`, `w` and whether `t <= c` with equality exactly when `w = 1`.
    #[pyo3(signature = (cap=None))]
    fn congruence_bound<'py>(&self, py: Python<'py>, cap: Option<u128>) -> PyResult<Bound<'py, PyDict>> {
        let r = check_thm12(&self.0, &limits(cap)?).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("t", r.t)?;
        d.set_item("c", r.c)?;
        d.set_item("w", r.w)?;
        d.set_item("holds", r.holds)?;
        d.set_item("brute_force_skipped", r.brute_force_skipped)?;
        Ok(d)
    }

    /// The exact value of `t·w`, with the branch chosen by `v(w)` and the one
    /// chosen by whether `t` is prime to `ℓ`.
    #[pyo3(signature = (cap=None))]
    fn congruence_exact<'py>(&self, py: Python<'py>, cap: Option<u128>) -> PyResult<Bound<'py, PyDict>> {
        let r = check_thm13(&self.0, &limits(cap)?).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("t", r.t)?;
        d.set_item("w", r.w)?;
        d.set_item("c", r.c)?;
        d.set_item("case", r.case.as_str())?;
        d.set_item("expected", r.expected)?;
        d.set_item("holds", r.holds)?;
        d.set_item("t_condition_case", r.paper_case.as_str())?;
        d.set_item("branch_conditions_agree", r.paper_condition_agrees)?;
        Ok(d)
    }
}

/// An ℓ-modular cuspidal parameter, given by the exponent of an ℓ-regular element.
#[pyclass(frozen, from_py_object)]
#[derive(Clone, Copy)]
struct ModCuspidal(reps::ModCuspidal);

#[pymethods]
impl ModCuspidal {
    #[new]
    #[pyo3(signature = (ctx, exponent, cap=None))]
    fn new(ctx: FieldContext, exponent: u128, cap: Option<u128>) -> PyResult<Self> {
        reps::ModCuspidal::from_exponent(ctx.0, exponent, &limits(cap)?)
            .map(ModCuspidal)
            .map_err(py_err)
    }

    #[getter]
    fn exponent(&self) -> u128 {
        self.0.y().exponent()
    }

    #[getter]
    fn is_supercuspidal(&self) -> bool {
        self.0.is_supercuspidal()
    }

    fn invariants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let inv = self.0.invariants();
        let d = PyDict::new(py);
        d.set_item("k", inv.k)?;
        d.set_item("s", inv.s)?;
        d.set_item("n", inv.n_mod)?;
        d.set_item("epsilon", inv.epsilon)?;
        d.set_item("f_rho", inv.f_rho)?;
        d.set_item("deg_y", inv.deg_y)?;
        d.set_item("e_y", inv.e_y)?;
        Ok(d)
    }

    /// Whether a lift of relative degree `a` exists, by the closed criterion
    /// and by search, with the witness exponent when found.
    #[pyo3(signature = (a, cap=None))]
    fn lift<'py>(&self, py: Python<'py>, a: u128, cap: Option<u128>) -> PyResult<Bound<'py, PyDict>> {
        let r = lifting::lift_criterion(&self.0, a, &limits(cap)?).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("a", r.a)?;
        d.set_item("exists", r.exists_closed)?;
        d.set_item("exists_brute", r.exists_brute)?;
        d.set_item("witness", r.witness.map(|x| x.exponent()))?;
        d.set_item("u", r.u)?;
        Ok(d)
    }
}

/// Number of ℓ-regular orbits counted at `(n, w)` over the ground field.
#[pyfunction]
#[pyo3(signature = (ground, n, w, cap=None))]
fn y1(ground: GroundData, n: u128, w: u128, cap: Option<u128>) -> PyResult<u128> {
    counting::y1(&ground.0, n, w, &limits(cap)?).map_err(py_err)
}

/// Level-zero count `Σ s/d` over the relevant parameters of `GL_u(D)`, `u | m`.
#[pyfunction]
#[pyo3(signature = (ground, m, d, w, cap=None))]
fn weighted_level_zero_count(ground: GroundData, m: u32, d: u32, w: u128, cap: Option<u128>) -> PyResult<u128> {
    counting::weighted_b_count(&ground.0, m, d, w, &limits(cap)?).map_err(py_err)
}

/// Per-(m, d) totals over the listed endoclasses, each `(deg, res_deg, (num, den))`.
#[pyfunction]
#[pyo3(signature = (ground, n, w, endoclasses=None, pairs=None, level_bound=None, cap=None))]
#[allow(clippy::too_many_arguments, clippy::type_complexity)]
fn a_total<'py>(
    py: Python<'py>,
    ground: GroundData,
    n: u128,
    w: u128,
    endoclasses: Option<Vec<(u32, u32, (u64, u64))>>,
    pairs: Option<Vec<(u32, u32)>>,
    level_bound: Option<(u64, u64)>,
    cap: Option<u128>,
) -> PyResult<Bound<'py, PyDict>> {
    let ratio = |(num, den): (u64, u64)| {
        if den == 0 {
            Err(PyValueError::new_err("level denominator must be >= 1"))
        } else {
            Ok(Ratio::new(num, den))
        }
    };
    let endos = match endoclasses {
        None => vec![EndoclassRecord::zero()],
        Some(list) => list
            .into_iter()
            .map(|(deg, res, level)| EndoclassRecord::new(deg, res, ratio(level)?).map_err(py_err))
            .collect::<PyResult<_>>()?,
    };
    let pairs = match pairs {
        Some(p) => p,
        None => CountQuery::all_pairs(n).map_err(py_err)?,
    };
    let bound = level_bound.map(ratio).transpose()?;
    let query = CountQuery::new(ground.0, n, w, pairs, endos, bound).map_err(py_err)?;
    let table = counting::a_total(&query, &limits(cap)?).map_err(py_err)?;
    let rows = table
        .rows
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("m", r.m)?;
            d.set_item("d", r.d)?;
            d.set_item("total", r.total)?;
            d.set_item("weighted_total", r.weighted_total)?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    let out = PyDict::new(py);
    out.set_item("rows", rows)?;
    out.set_item("equal", table.equal)?;
    out.set_item("counts_agree", table.counts_agree)?;
    Ok(out)
}

/// Runs the verification grid and returns the machine-readable report.
#[pyfunction]
#[pyo3(signature = (q_max=5, n_max=6, ells=vec![2, 3, 5, 7], cap=None))]
fn verify_grid(py: Python<'_>, q_max: u128, n_max: u32, ells: Vec<u128>, cap: Option<u128>) -> PyResult<Py<PyAny>> {
    let spec = GridSpec {
        q_max,
        n_max,
        ells,
        ..GridSpec::default()
    };
    let lim = limits(cap)?;
    let report = py.detach(|| verify::run(&spec, &lim));
    let text = verify_json(&spec, &report).to_string();
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pymodule]
fn cuspcount_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("CapExceeded", m.py().get_type::<CapExceeded>())?;
    m.add("ConsistencyError", m.py().get_type::<ConsistencyError>())?;
    m.add_class::<GroundData>()?;
    m.add_class::<FieldContext>()?;
    m.add_class::<AdicCuspidal>()?;
    m.add_class::<ModCuspidal>()?;
    m.add_function(wrap_pyfunction!(y1, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_level_zero_count, m)?)?;
    m.add_function(wrap_pyfunction!(a_total, m)?)?;
    m.add_function(wrap_pyfunction!(verify_grid, m)?)?;
    Ok(())
}
