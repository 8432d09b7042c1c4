//! Python bindings: fans, Σ_n, incidence data and the moduli/incidence
//! comparison. Integers cross the boundary as Python ints of any size.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use murphy_toric::chern::{validate_murphy, MurphyRule};
use murphy_toric::divisor::{class_group, is_cartier, TDivisor};
use murphy_toric::exact::{smith_normal_form, IntMatrix, PrimeField};
use murphy_toric::fan::{self as fans, Cone, LatticeVector};
use murphy_toric::incidence::{self, EnumOptions, IncidenceData};
use murphy_toric::io;
use murphy_toric::moduli::{audit_pairwise, generate_conditions, MurphyInstance};
use murphy_toric::murphy_fan::{self, build_murphy_fan, BuildMode, MurphyFanHandle, RayLabel};

fn err(e: murphy_toric::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(p: u64) -> PyResult<PrimeField> {
    PrimeField::new(p).map_err(err)
}

#[pyclass(name = "Fan", module = "pymurphy", frozen)]
struct PyFan(fans::Fan);

#[pymethods]
impl PyFan {
    #[new]
    fn new(rays: Vec<Vec<BigInt>>, max_cones: Vec<Vec<usize>>) -> PyResult<Self> {
        let dim = rays.first().map_or(0, Vec::len);
        let fan = fans::Fan::new(dim, rays.into_iter().map(LatticeVector).collect(), max_cones).map_err(err)?;
        Ok(PyFan(fan))
    }

    #[staticmethod]
    fn projective(n: usize) -> PyResult<Self> {
        fans::projective_fan(n).map(PyFan).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::fan_from_json(&io::parse_json(text).map_err(err)?).map(PyFan).map_err(err)
    }

    fn to_json(&self) -> String {
        io::to_canonical_string(&io::fan_to_json(&self.0))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Rays in canonical (lexicographic) order.
    #[getter]
    fn rays(&self) -> Vec<Vec<BigInt>> {
        self.0.rays().iter().map(|r| r.0.clone()).collect()
    }

    #[getter]
    fn max_cones(&self) -> Vec<Vec<usize>> {
        self.0.max_cones().to_vec()
    }

    /// None for a valid fan, otherwise the first violation.
    fn validate(&self) -> Option<String> {
        fans::validate_fan(&self.0).err().map(|v| v.to_string())
    }

    fn is_smooth(&self) -> bool {
        fans::is_smooth(&self.0)
    }

    fn is_complete(&self) -> bool {
        fans::is_complete(&self.0)
    }

    /// Star subdivision of the cone spanned by the given ray indices.
    fn subdivide(&self, cone: Vec<usize>) -> PyResult<Self> {
        let gens = cone
            .iter()
            .map(|&i| self.0.rays().get(i).cloned().ok_or_else(|| PyValueError::new_err(format!("no ray {i}"))))
            .collect::<PyResult<Vec<_>>>()?;
        let cone = Cone::new(gens).map_err(err)?;
        fans::star_subdivide(&self.0, &cone).map(PyFan).map_err(err)
    }

    /// (free rank, torsion coefficients).
    fn class_group(&self) -> PyResult<(usize, Vec<BigInt>)> {
        let cl = class_group(&self.0).map_err(err)?;
        Ok((cl.rank, cl.torsion))
    }

    /// Local characters per maximal cone, or None when not Cartier.
    /// Coefficients follow the canonical ray order.
    fn cartier_data(&self, coeffs: Vec<BigInt>) -> PyResult<Option<Vec<(Vec<usize>, Vec<BigInt>)>>> {
        Ok(is_cartier(&self.0, &TDivisor::new(coeffs))
            .map_err(err)?
            .ok()
            .map(|s| s.cones.into_iter().map(|(c, m)| (c, m.0)).collect()))
    }

    fn __repr__(&self) -> String {
        format!("Fan(dim={}, rays={}, max_cones={})", self.0.dim(), self.0.rays().len(), self.0.max_cones().len())
    }
}

#[pyclass(name = "MurphyFan", module = "pymurphy", frozen)]
struct PyMurphyFan(MurphyFanHandle);

fn labels(sets: Vec<Vec<usize>>) -> Vec<RayLabel> {
    sets.into_iter().map(RayLabel::from_members).collect()
}

#[pymethods]
impl PyMurphyFan {
    #[new]
    #[pyo3(signature = (n, lazy = false))]
    fn new(n: usize, lazy: bool) -> PyResult<Self> {
        let mode = if lazy { BuildMode::Lazy } else { BuildMode::Materialized };
        build_murphy_fan(n, mode).map(PyMurphyFan).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn ray_count(&self) -> u128 {
        murphy_fan::ray_count_formula(self.0.n())
    }

    #[getter]
    fn max_cone_count(&self) -> u128 {
        murphy_fan::max_cone_count_formula(self.0.n())
    }

    /// Every ray as its subset of {1, …, n+1}.
    fn labels(&self) -> Vec<Vec<usize>> {
        self.0.all_labels().iter().map(|l| l.members()).collect()
    }

    /// Whether the rays with these labels span a cone of Σ_n.
    fn cone_membership(&self, rays: Vec<Vec<usize>>) -> PyResult<bool> {
        self.0.cone_membership(&labels(rays)).map_err(err)
    }

    /// The materialized fan, if any.
    fn fan(&self) -> Option<PyFan> {
        self.0.fan().cloned().map(PyFan)
    }

    fn to_json(&self) -> PyResult<String> {
        Ok(io::to_canonical_string(&io::murphy_fan_to_json(&self.0).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("MurphyFan(n={}, materialized={})", self.0.n(), self.0.is_materialized())
    }
}

#[pyclass(name = "Incidence", module = "pymurphy", frozen)]
struct PyIncidence(IncidenceData);

#[pymethods]
impl PyIncidence {
    #[new]
    #[pyo3(signature = (points, lines, incidences = Vec::new()))]
    fn new(points: usize, lines: usize, incidences: Vec<(usize, usize)>) -> PyResult<Self> {
        IncidenceData::new(points, lines, incidences).map(PyIncidence).map_err(err)
    }

    #[staticmethod]
    fn fano() -> Self {
        PyIncidence(IncidenceData::fano())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::incidence_from_json(&io::parse_json(text).map_err(err)?).map(PyIncidence).map_err(err)
    }

    fn to_json(&self) -> String {
        io::to_canonical_string(&io::incidence_to_json(&self.0))
    }

    #[getter]
    fn points(&self) -> usize {
        self.0.points()
    }

    #[getter]
    fn lines(&self) -> usize {
        self.0.lines()
    }

    #[getter]
    fn incidences(&self) -> Vec<(usize, usize)> {
        self.0.pairs().to_vec()
    }

    /// Characters of the rule datum on the cone Cone(ρ_a, ρ_b, chain…).
    fn characters(&self, a: usize, b: usize, chain: Vec<Vec<usize>>) -> PyResult<Vec<Vec<BigInt>>> {
        let flag = murphy_fan::Flag::new(a, b, labels(chain));
        let chars = MurphyRule::new(self.0.clone()).characters(&flag).map_err(err)?;
        Ok(chars.into_iter().map(|c| c.0).collect())
    }

    /// Checks the rule datum on Σ_n: exhaustively when materialized,
    /// otherwise on `samples` random adjacent cone pairs.
    #[pyo3(signature = (samples = 1000, seed = 0, lazy = false))]
    fn chern_is_valid(&self, samples: usize, seed: u64, lazy: bool) -> PyResult<bool> {
        let n = self.0.objects().saturating_sub(1);
        let mode = if lazy || n > murphy_fan::MATERIALIZE_LIMIT { BuildMode::Lazy } else { BuildMode::Materialized };
        let handle = build_murphy_fan(n, mode).map_err(err)?;
        Ok(validate_murphy(&MurphyRule::new(self.0.clone()), &handle, samples, seed).map_err(err)?.is_ok())
    }

    /// Compiled moduli conditions, one atom string per object pair.
    #[pyo3(signature = (allow_degenerate = false))]
    fn conditions(&self, allow_degenerate: bool) -> PyResult<Vec<String>> {
        let instance = MurphyInstance::new(self.0.clone(), allow_degenerate).map_err(err)?;
        let cs = generate_conditions(&instance).map_err(err)?;
        Ok(cs.atoms().iter().map(|a| a.to_string()).collect())
    }

    /// Whether no cone of Σ_n holds three original rays.
    #[pyo3(signature = (allow_degenerate = false))]
    fn audit(&self, allow_degenerate: bool) -> PyResult<bool> {
        let instance = MurphyInstance::new(self.0.clone(), allow_degenerate).map_err(err)?;
        Ok(audit_pairwise(&instance).map_err(err)?.is_ok())
    }

    /// Every configuration over F_p realizing the data, as
    /// (points, lines) of normalized coordinate triples.
    #[allow(clippy::type_complexity)]
    fn enumerate(&self, py: Python<'_>, p: u64) -> PyResult<Vec<(Vec<[u32; 3]>, Vec<[u32; 3]>)>> {
        let f = field(p)?;
        let configs = py
            .detach(|| incidence::enumerate_c_i(&self.0, &f, &EnumOptions::default()))
            .map_err(err)?;
        Ok(configs.into_iter().map(|c| (c.points, c.lines)).collect())
    }

    /// Compares the moduli solutions with C_I over F_p.
    #[pyo3(signature = (p, allow_degenerate = false))]
    fn verify<'py>(&self, py: Python<'py>, p: u64, allow_degenerate: bool) -> PyResult<Bound<'py, PyDict>> {
        let f = field(p)?;
        let r = py
            .detach(|| incidence::verify_equivalence(&self.0, &f, &EnumOptions::default(), allow_degenerate))
            .map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("equal", r.equal)?;
        d.set_item("moduli_count", r.moduli_count)?;
        d.set_item("incidence_count", r.incidence_count)?;
        d.set_item("report", io::to_canonical_string(&io::report_to_json(&r)))?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Incidence(points={}, lines={}, incidences={:?})", self.0.points(), self.0.lines(), self.0.pairs())
    }
}

/// Invariant factors of an integer matrix.
#[pyfunction]
fn smith_form(rows: Vec<Vec<BigInt>>) -> PyResult<Vec<BigInt>> {
    Ok(smith_normal_form(&IntMatrix::from_rows(rows).map_err(err)?))
}

#[pymodule]
fn pymurphy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SCHEMA_VERSION", io::SCHEMA_VERSION)?;
    m.add_class::<PyFan>()?;
    m.add_class::<PyMurphyFan>()?;
    m.add_class::<PyIncidence>()?;
    m.add_function(wrap_pyfunction!(smith_form, m)?)?;
    Ok(())
}
