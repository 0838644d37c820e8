//! Python bindings: the stratification record with its main computations,
//! plus free functions for tableaux and straightening. Rational values cross
//! the boundary as "p/q" strings to stay exact.

use std::collections::BTreeMap;
use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use stratkit::builtins::{builtin_example, Builtin};
use stratkit::fan::{fan_of_monoids, gamma_for_chain, lattice_basis_from_generators, GammaSource};
use stratkit::newton::{
    leading_term, ls_volume, multidegrees, polytope, rational_structure, veronese_poset, volume,
};
use stratkit::pluecker::{
    nonvanishing_standard_count, parse_expr, quasi_valuation_pluecker, standard_on_stratum_count,
    straighten,
};
use stratkit::poset::Chain;
use stratkit::rational::fmt_rat;
use stratkit::strat::{build_type_a, classify, validate_strat, StratData, TypeA};
use stratkit::tableaux::{enumerate_ssyt, Shape};
use stratkit::valuation::{parse_poly, quasi_valuation};
use stratkit::weyl::{full_cuts, Coset};

fn err(e: stratkit::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

enum Inner {
    Builtin(Box<Builtin>),
    TypeA(Box<TypeA>),
    Plain(Box<StratData>),
}

impl Inner {
    fn strat(&self) -> &StratData {
        match self {
            Inner::Builtin(b) => &b.strat,
            Inner::TypeA(t) => &t.strat,
            Inner::Plain(s) => s,
        }
    }
}

/// A multiprojective Seshadri stratification (combinatorial record).
#[pyclass]
struct Stratification {
    inner: Inner,
}

#[pymethods]
impl Stratification {
    /// Load a builtin example: "y1", "y0y1" or "antiA2".
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        Ok(Stratification {
            inner: Inner::Builtin(Box::new(builtin_example(name).map_err(err)?)),
        })
    }

    /// The type-A flag stratification for ascending k_list.
    #[staticmethod]
    fn type_a(n: usize, k_list: Vec<usize>) -> PyResult<Self> {
        Ok(Stratification {
            inner: Inner::TypeA(Box::new(build_type_a(n, &k_list).map_err(err)?)),
        })
    }

    /// Load from the JSON interchange format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Stratification {
            inner: Inner::Plain(Box::new(StratData::from_json(text).map_err(err)?)),
        })
    }

    fn to_json(&self) -> String {
        self.inner.strat().to_json()
    }

    fn elements(&self) -> Vec<String> {
        self.inner.strat().poset.elements().to_vec()
    }

    fn maximal_chains(&self) -> Vec<Vec<String>> {
        self.inner
            .strat()
            .poset
            .maximal_chains()
            .into_iter()
            .map(|c| c.labels)
            .collect()
    }

    fn hasse_dot(&self) -> String {
        self.inner.strat().poset.export_hasse()
    }

    fn validate(&self) -> Vec<String> {
        validate_strat(self.inner.strat())
    }

    /// (is_hodge, is_ls_candidate)
    fn classify(&self) -> (bool, bool) {
        let c = classify(self.inner.strat());
        (c.is_hodge, c.is_ls_candidate)
    }

    /// Pairs (k, degree); build a dict with tuple(k) keys on the Python side.
    fn multidegrees(&self) -> PyResult<Vec<(Vec<usize>, u64)>> {
        Ok(multidegrees(self.inner.strat())
            .map_err(err)?
            .into_iter()
            .collect())
    }

    /// Monoid generators of a maximal chain: a list of {label: "p/q"} dicts.
    fn gamma(&self, chain: Vec<String>) -> PyResult<Vec<HashMap<String, String>>> {
        let s = self.inner.strat();
        let ch = s.poset.sort_chain(&chain).map_err(err)?;
        let m = gamma_for_chain(s, &ch, GammaSource::Auto).map_err(err)?;
        Ok(m.generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|(l, c)| (l.clone(), fmt_rat(c)))
                    .collect::<HashMap<_, _>>()
            })
            .collect())
    }

    /// The maximal chains whose Veronese restriction is maximal at degree d.
    fn veronese_components(&self, d: Vec<u64>) -> PyResult<Vec<Vec<String>>> {
        let vp = veronese_poset(self.inner.strat(), &d).map_err(err)?;
        let mut reps = vp.maximal_chain_representatives();
        reps.sort();
        Ok(reps)
    }

    /// Exact lattice-normalized volume of a chain polytope at degree d.
    fn volume(&self, chain: Vec<String>, d: Vec<u64>) -> PyResult<String> {
        let s = self.inner.strat();
        let ch = s.poset.sort_chain(&chain).map_err(err)?;
        let p = polytope(s, &ch, &d, None).map_err(err)?;
        if p.empty {
            return Ok("0".to_string());
        }
        let m = gamma_for_chain(s, &ch, GammaSource::Auto).map_err(err)?;
        let lattice = lattice_basis_from_generators(&m.generators);
        let rs = rational_structure(s, &ch, &lattice).map_err(err)?;
        Ok(fmt_rat(&volume(s, &p, &rs).map_err(err)?.value))
    }

    fn ls_volume(&self, chain: Vec<String>, d: Vec<u64>) -> PyResult<String> {
        let s = self.inner.strat();
        let ch = s.poset.sort_chain(&chain).map_err(err)?;
        Ok(fmt_rat(&ls_volume(s, &ch, &d).map_err(err)?))
    }

    fn leading_term(&self, d: Vec<u64>) -> PyResult<String> {
        let s = self.inner.strat();
        let fan = fan_of_monoids(s).map_err(err)?;
        Ok(fmt_rat(&leading_term(s, &d, &fan).map_err(err)?.value))
    }

    fn polytope_json(&self, chain: Vec<String>, d: Vec<u64>) -> PyResult<String> {
        let s = self.inner.strat();
        let ch = s.poset.sort_chain(&chain).map_err(err)?;
        let p = polytope(s, &ch, &d, None).map_err(err)?;
        Ok(serde_json_string(&p.to_json()))
    }

    /// Quasi-valuation of a polynomial through the attached charts (builtin
    /// stratifications only); returns {label: "p/q"}.
    fn quasi_val(&self, expr: &str) -> PyResult<HashMap<String, String>> {
        let Inner::Builtin(b) = &self.inner else {
            return Err(PyValueError::new_err(
                "quasi_val needs a builtin with charts; use quasi_val_pluecker for type A",
            ));
        };
        let g = parse_poly(expr, &b.vars).map_err(err)?;
        let order = b.strat.poset.linearize();
        let r = quasi_valuation(&g, &b.charts, &b.strat, &b.vars, &order).map_err(err)?;
        Ok(r.value
            .iter()
            .map(|(l, c)| (l.clone(), fmt_rat(c)))
            .collect())
    }

    /// Quasi-valuation of a Pluecker expression on a type-A stratification.
    fn quasi_val_pluecker(&self, expr: &str, seed: u64) -> PyResult<HashMap<String, String>> {
        let Inner::TypeA(t) = &self.inner else {
            return Err(PyValueError::new_err("quasi_val_pluecker needs type A"));
        };
        let e = parse_expr(expr, t.uw.n, &t.uw.k_list).map_err(err)?;
        let order = t.strat.poset.linearize();
        let v = quasi_valuation_pluecker(&e, &t.uw, &order, seed).map_err(err)?;
        Ok(v.iter().map(|(l, c)| (l.clone(), fmt_rat(c))).collect())
    }

    /// Number of standard monomials of degree d that restrict to a basis of
    /// the stratum's coordinate ring.
    fn standard_count(&self, stratum: &str, d: Vec<u64>) -> PyResult<u64> {
        let label = match &self.inner {
            Inner::Builtin(b) => b.resolve_stratum(stratum).map_err(err)?,
            _ => stratum.to_string(),
        };
        standard_on_stratum_count(self.inner.strat(), &label, &d).map_err(err)
    }

    /// Number of standard monomials of degree d not vanishing on the Schubert
    /// multicone of the given one-line permutation (type A only).
    fn schubert_nonvanishing_count(&self, word: Vec<usize>, d: Vec<u64>) -> PyResult<u64> {
        let Inner::TypeA(t) = &self.inner else {
            return Err(PyValueError::new_err("needs a type-A stratification"));
        };
        let w = Coset::new(t.uw.n, full_cuts(t.uw.n), word).map_err(err)?;
        nonvanishing_standard_count(&t.uw, &t.strat, &w, &d).map_err(err)
    }
}

fn serde_json_string(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).unwrap()
}

/// Number of semistandard tableaux with entries in [1, n] and shape[i]
/// columns of length k_list[i].
#[pyfunction]
fn ssyt_count(n: usize, k_list: Vec<usize>, shape: Vec<usize>) -> PyResult<usize> {
    Ok(enumerate_ssyt(n, &k_list, &Shape::new(shape))
        .map_err(err)?
        .len())
}

/// All semistandard tableaux of a shape, as column lists.
#[pyfunction]
fn ssyt_list(n: usize, k_list: Vec<usize>, shape: Vec<usize>) -> PyResult<Vec<Vec<Vec<usize>>>> {
    Ok(enumerate_ssyt(n, &k_list, &Shape::new(shape))
        .map_err(err)?
        .into_iter()
        .map(|t| t.columns)
        .collect())
}

/// Straighten a Pluecker expression into the semistandard basis; returns the
/// rendered standard expression.
#[pyfunction]
fn straighten_expr(expr: &str, n: usize, k_list: Vec<usize>, seed: u64) -> PyResult<String> {
    let e = parse_expr(expr, n, &k_list).map_err(err)?;
    let (std_expr, _) = straighten(&e, n, &k_list, seed).map_err(err)?;
    Ok(std_expr.render())
}

/// Membership in the LS-lattice of a chain of covers: coefficients are given
/// as {label: "p/q"}.
#[pyfunction]
fn ls_lattice_contains(
    strat: &Stratification,
    chain: Vec<String>,
    coeffs: BTreeMap<String, String>,
) -> PyResult<bool> {
    let s = strat.inner.strat();
    let ch = Chain::new(chain);
    let mut v = stratkit::qvec::QVector::zero();
    for (l, c) in &coeffs {
        v.set(l, stratkit::rational::parse_rat(c).map_err(err)?);
    }
    stratkit::fan::ls_lattice_contains(s, &ch, &v).map_err(err)
}

#[pymodule]
fn stratkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Stratification>()?;
    m.add_function(wrap_pyfunction!(ssyt_count, m)?)?;
    m.add_function(wrap_pyfunction!(ssyt_list, m)?)?;
    m.add_function(wrap_pyfunction!(straighten_expr, m)?)?;
    m.add_function(wrap_pyfunction!(ls_lattice_contains, m)?)?;
    Ok(())
}
