//! Python bindings: germs, canyon reports, signatures and comparison.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

create_exception!(canyons, AnalysisError, PyRuntimeError, "The analysis could not be completed.");

fn to_py(e: canyons::Error) -> PyErr {
    use canyons::Error::*;
    match e {
        Parse { .. } | NotVanishingAtOrigin | DegreeCap { .. } | EmptyInput | NotReduced | InvalidInput(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => AnalysisError::new_err(e.to_string()),
    }
}

#[pymodule]
#[pyo3(name = "canyons")]
mod canyons_python {
    use pyo3::prelude::*;

    use canyons::analysis::{self, Settings};
    use canyons::canyon::disk_geometry;
    use canyons::cluster::{CanyonSignature, Verdict};
    use canyons::parse::{parse_constant, parse_polynomial, InputGerm, DEFAULT_DEGREE_CAP};
    use canyons::report::{analyze_json, to_json, Labels};
    use canyons::series::Exponent;
    use canyons::solver::PolarBranch;

    use super::to_py;

    #[pymodule_export]
    use super::AnalysisError;

    fn settings(precision: u32, horizon: Option<&str>) -> PyResult<Settings> {
        let horizon = horizon.map(|h| h.parse::<Exponent>()).transpose().map_err(to_py)?;
        Ok(Settings { precision, horizon, ..Settings::default() })
    }

    /// A polar branch, rendered in the germ's `y` variable.
    #[pyclass(frozen, get_all, skip_from_py_object, module = "canyons")]
    #[derive(Clone)]
    struct Polar {
        series: String,
        multiplicity: usize,
        puiseux_multiplicity: u64,
        exact: bool,
        degree: Option<String>,
    }

    #[pymethods]
    impl Polar {
        fn __repr__(&self) -> String {
            format!("Polar({}, multiplicity={})", self.series, self.multiplicity)
        }
    }

    fn polar(p: &PolarBranch, degree: Option<String>, y: &str) -> Polar {
        Polar {
            series: p.series().render(y),
            multiplicity: p.multiplicity,
            puiseux_multiplicity: p.branch_mult,
            exact: p.exact,
            degree,
        }
    }

    /// A gradient canyon. Rationals are strings such as `"11/2"`; an infinite degree is `"inf"`.
    #[pyclass(frozen, get_all, skip_from_py_object, module = "canyons")]
    #[derive(Clone)]
    struct Canyon {
        degree: String,
        jet: String,
        multiplicity: usize,
        h: String,
        a: Option<String>,
        partial_milnor: i64,
        curvature_units: i64,
        /// `(disk_count, radius, separation, center_truncation)` exponents, for degrees above 1.
        disk_geometry: Option<(i64, String, String, String)>,
    }

    #[pymethods]
    impl Canyon {
        fn __repr__(&self) -> String {
            format!("Canyon(degree={}, multiplicity={}, h={})", self.degree, self.multiplicity, self.h)
        }
    }

    /// The canyon signature, the comparison object of `compare`.
    #[pyclass(frozen, eq, skip_from_py_object, module = "canyons")]
    #[derive(Clone, PartialEq)]
    struct Signature {
        inner: CanyonSignature,
    }

    #[pymethods]
    impl Signature {
        fn to_json(&self) -> String {
            self.inner.to_json()
        }

        #[getter]
        fn degrees(&self) -> Vec<String> {
            self.inner.degrees().iter().map(|d| d.to_string()).collect()
        }

        fn __repr__(&self) -> String {
            format!("Signature(degrees=[{}])", self.degrees().join(", "))
        }
    }

    /// Full report of `Germ.analyze`.
    #[pyclass(frozen, get_all, module = "canyons")]
    struct Analysis {
        milnor: i64,
        polars: Vec<Polar>,
        canyons: Vec<Canyon>,
        signature: Signature,
        /// Whether the degree-1 canyon is minimal, `None` without one.
        enr_minimal: Option<bool>,
        json: String,
    }

    #[pymethods]
    impl Analysis {
        fn to_json(&self) -> String {
            self.json.clone()
        }

        fn __repr__(&self) -> String {
            format!("Analysis(milnor={}, canyons={})", self.milnor, self.canyons.len())
        }
    }

    /// A germ parsed from an expression such as `"x^3 + y^12"`.
    #[pyclass(frozen, module = "canyons")]
    struct Germ {
        inner: InputGerm,
    }

    impl Germ {
        fn labels(&self) -> Labels {
            Labels {
                expression: self.inner.expression.clone(),
                x: self.inner.vars.0.clone(),
                y: self.inner.vars.1.clone(),
            }
        }
    }

    #[pymethods]
    impl Germ {
        #[new]
        #[pyo3(signature = (expression, y_var = None))]
        fn new(expression: &str, y_var: Option<&str>) -> PyResult<Self> {
            Ok(Germ { inner: parse_polynomial(expression, y_var, DEFAULT_DEGREE_CAP).map_err(to_py)? })
        }

        #[getter]
        fn variables(&self) -> (String, String) {
            self.inner.vars.clone()
        }

        #[getter]
        fn polynomial(&self) -> String {
            self.inner.poly.render(&self.inner.vars.0, &self.inner.vars.1)
        }

        #[pyo3(signature = (precision = 256, horizon = None))]
        fn analyze(&self, py: Python<'_>, precision: u32, horizon: Option<&str>) -> PyResult<Analysis> {
            let s = settings(precision, horizon)?;
            let a = py.detach(|| analysis::analyze(&self.inner.poly, &s)).map_err(to_py)?;
            let y = &self.inner.vars.1;
            Ok(Analysis {
                milnor: a.milnor,
                polars: a.polars.iter().enumerate().map(|(k, p)| polar(p, Some(a.polar_degree(k).to_string()), y)).collect(),
                canyons: a
                    .canyons
                    .iter()
                    .map(|c| Canyon {
                        degree: c.degree.to_string(),
                        jet: c.jet.render(y),
                        multiplicity: c.multiplicity,
                        h: c.h.to_string(),
                        a: c.leading_coeff.as_ref().map(|x| x.to_string()),
                        partial_milnor: c.partial_milnor,
                        curvature_units: c.curvature_units,
                        disk_geometry: disk_geometry(c).map(|d| {
                            (
                                d.disk_count,
                                d.radius_exponent.to_string(),
                                d.separation_exponent.to_string(),
                                d.center_truncation_exponent.to_string(),
                            )
                        }),
                    })
                    .collect(),
                signature: Signature { inner: a.signature.clone() },
                enr_minimal: a.structure.enr_minimal,
                json: to_json(&analyze_json(&a, &self.labels())),
            })
        }

        #[pyo3(signature = (precision = 256, horizon = None))]
        fn polars(&self, py: Python<'_>, precision: u32, horizon: Option<&str>) -> PyResult<Vec<Polar>> {
            let s = settings(precision, horizon)?;
            let (_, ps, _) = py.detach(|| analysis::polars_of(&self.inner.poly, &s)).map_err(to_py)?;
            Ok(ps.iter().map(|p| polar(p, None, &self.inner.vars.1)).collect())
        }

        /// Roots of `f_x + tau f_y`; `tau` is a constant such as `"-1/2+i"`.
        #[pyo3(signature = (tau, precision = 256, horizon = None))]
        fn generic_polars(&self, py: Python<'_>, tau: &str, precision: u32, horizon: Option<&str>) -> PyResult<Vec<Polar>> {
            let s = settings(precision, horizon)?;
            let t = parse_constant(tau).map_err(to_py)?;
            if t.is_zero() {
                return Err(to_py(canyons::Error::InvalidInput("tau must be nonzero".into())));
            }
            let (_, ps, _) = py.detach(|| analysis::generic_polars_of(&self.inner.poly, &t, &s)).map_err(to_py)?;
            Ok(ps.iter().map(|p| polar(p, None, &self.inner.vars.1)).collect())
        }

        fn milnor(&self, py: Python<'_>) -> PyResult<i64> {
            py.detach(|| analysis::milnor_of(&self.inner.poly, &Settings::default())).map_err(to_py)
        }

        /// Milnor number from resultants of the partial derivatives; `None` if not isolated.
        fn milnor_resultant(&self, py: Python<'_>) -> Option<u64> {
            py.detach(|| canyons::oracle::milnor_oracle(&self.inner.poly))
        }

        fn signature(&self, py: Python<'_>) -> PyResult<Signature> {
            let inner = py.detach(|| analysis::signature_of(&self.inner.poly, &Settings::default())).map_err(to_py)?;
            Ok(Signature { inner })
        }

        fn __repr__(&self) -> String {
            format!("Germ({:?})", self.polynomial())
        }
    }

    /// Compares two germs: `("DISTINGUISHED", witness)` or `("INDISTINGUISHABLE", None)`.
    #[pyfunction]
    fn compare(py: Python<'_>, a: &Germ, b: &Germ) -> PyResult<(String, Option<String>)> {
        let (verdict, _, _) =
            py.detach(|| analysis::compare_germs(&a.inner.poly, &b.inner.poly, &Settings::default())).map_err(to_py)?;
        Ok(match verdict {
            Verdict::Distinguished { witness } => ("DISTINGUISHED".into(), Some(witness)),
            Verdict::Indistinguishable => ("INDISTINGUISHABLE".into(), None),
        })
    }
}
