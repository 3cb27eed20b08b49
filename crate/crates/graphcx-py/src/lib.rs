//! Python bindings. Chains cross the boundary as `{encoded graph: "p/q"}` dicts.

use graphcx::complexes::{self, ComplexSpec, Family, MaurerCartan, Twisted};
use graphcx::graph::{canonicalize, decode, encode, Canon, ChainVector, Coeff, Symmetry};
use graphcx::numint::{self, IntegralTask, Sampler};
use graphcx::poisson::{self, parse_expr};
use graphcx::report::JobConfig;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::collections::BTreeMap;

type Chain = BTreeMap<String, String>;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn spec_of(family: &str, n: i64, m: Option<i64>, arity: Option<usize>) -> PyResult<ComplexSpec> {
    let family = Family::parse(family).ok_or_else(|| err(format!("unknown family {family}")))?;
    ComplexSpec { family, n, m, arity, twist: complexes::Twist::None }.validated().map_err(err)
}

fn to_chain(chain: &Chain, sym: Symmetry) -> PyResult<ChainVector> {
    let mut x = ChainVector::new(sym);
    for (g, c) in chain {
        let c: Coeff = c.parse().map_err(|_| err(format!("bad coefficient {c}")))?;
        x.add_graph(&decode(g).map_err(err)?, &c).map_err(err)?;
    }
    Ok(x)
}

fn from_chain(x: &ChainVector) -> Chain {
    x.iter().map(|(g, c)| (g.encode(), c.to_string())).collect()
}

fn config(json: &str) -> PyResult<JobConfig> {
    JobConfig::from_json(json).map_err(err)
}

/// Canonical form of a graph and its orientation sign, or None if it vanishes.
#[pyfunction]
#[pyo3(signature = (graph, family, n, m=None, arity=None))]
fn canonical(graph: &str, family: &str, n: i64, m: Option<i64>, arity: Option<usize>) -> PyResult<Option<(String, i8)>> {
    let spec = spec_of(family, n, m, arity)?;
    match canonicalize(&decode(graph).map_err(err)?, spec.symmetry()).map_err(err)? {
        Canon::Zero => Ok(None),
        Canon::Graph(c, s) => Ok(Some((encode(c.graph()), s))),
    }
}

/// `(degree, graph)` pairs of the window described by a JSON config.
#[pyfunction]
fn enumerate(config_json: &str) -> PyResult<Vec<(i64, String)>> {
    let (spec, window) = config(config_json)?.resolve().map_err(err)?;
    let table = complexes::enumerate(&ComplexSpec { twist: complexes::Twist::None, ..spec }, &window).map_err(err)?;
    Ok(table.iter().map(|(d, g)| (d, g.encode())).collect())
}

/// `{degree: betti}` of an untwisted window.
#[pyfunction]
fn homology(config_json: &str) -> PyResult<BTreeMap<i64, usize>> {
    let (spec, window) = config(config_json)?.resolve().map_err(err)?;
    let t = graphcx::homology::homology(&spec, &window, graphcx::homology::RankMethod::Exact).map_err(err)?;
    Ok(t.rows.iter().map(|r| (r.degree, r.betti)).collect())
}

#[pyfunction]
fn euler(config_json: &str) -> PyResult<i64> {
    let (spec, window) = config(config_json)?.resolve().map_err(err)?;
    let table = complexes::enumerate(&spec, &window).map_err(err)?;
    Ok(graphcx::homology::euler(&table))
}

#[pyfunction]
#[pyo3(signature = (chain, family, n, m=None, arity=None))]
fn differential(chain: Chain, family: &str, n: i64, m: Option<i64>, arity: Option<usize>) -> PyResult<Chain> {
    let spec = spec_of(family, n, m, arity)?;
    let x = to_chain(&chain, spec.symmetry())?;
    Ok(from_chain(&complexes::differential(&x, &spec).map_err(err)?))
}

/// Differential of `HGC_{n-1,n}` twisted by the corona element, through `h_max` hairs.
#[pyfunction]
fn twisted_differential(chain: Chain, n: i64, h_max: usize) -> PyResult<Chain> {
    let tw = Twisted::new(MaurerCartan::alpha(n, h_max).map_err(err)?).map_err(err)?;
    let x = to_chain(&chain, tw.spec().symmetry())?;
    Ok(from_chain(&tw.differential(&x).map_err(err)?))
}

#[pyfunction]
fn tripod_series(n: i64, h_max: usize) -> PyResult<Chain> {
    Ok(from_chain(&complexes::tripod_series(n, h_max).map_err(err)?))
}

/// Hair counts where `δα + ½[α,α]` is nonzero for coronas with the given ratio.
#[pyfunction]
#[pyo3(signature = (n, h_max, ratio="1/4"))]
fn mc_residual(n: i64, h_max: usize, ratio: &str) -> PyResult<Vec<usize>> {
    let ratio: Coeff = ratio.parse().map_err(|_| err(format!("bad ratio {ratio}")))?;
    let mc = MaurerCartan::geometric(n, h_max, ratio).map_err(err)?;
    Ok(mc.residual().map_err(err)?.into_iter().filter(|(_, x)| !x.is_zero()).map(|(h, _)| h).collect())
}

/// `(r, degree, closed, nonzero)` rows for the loop graphs of `GC2_n`.
#[pyfunction]
fn loop_classes(n: i64, r_max: usize) -> PyResult<Vec<(usize, i64, bool, bool)>> {
    let rep = complexes::loop_classes(n, r_max).map_err(err)?;
    Ok(rep.rows.iter().map(|r| (r.r, r.degree, r.closed, r.nonzero)).collect())
}

/// `(estimate, stderr, samples)` for the `r`-pod coefficient.
#[pyfunction]
#[pyo3(signature = (n, r, samples, seed, sampler="sphere"))]
fn pod_coefficient(n: usize, r: usize, samples: u64, seed: u64, sampler: &str) -> PyResult<(f64, f64, u64)> {
    let sampler = match sampler {
        "sphere" => Sampler::Sphere,
        "hemisphere" => Sampler::Hemisphere,
        other => return Err(err(format!("unknown sampler {other}"))),
    };
    let task = IntegralTask::new(n, r, samples, seed).map_err(err)?;
    let e = numint::pod_coefficient(&task, sampler).map_err(err)?;
    Ok((e.estimate, e.stderr, e.samples))
}

/// Forest normal form `{forest: "p/q"}` of an expression such as "[1,2]^3" in `Poiss_n`.
#[pyfunction]
fn poisson_normal_form(expr: &str, n: i64) -> PyResult<BTreeMap<String, String>> {
    let p = parse_expr(expr).map_err(err)?.to_poisson(n).map_err(err)?;
    Ok(p.terms().map(|(f, c)| (f.to_string(), c.to_string())).collect())
}

/// PBW image `{permutation word: "p/q"}` of an expression in `Poiss_1`.
#[pyfunction]
fn pbw(expr: &str) -> PyResult<BTreeMap<String, String>> {
    let p = parse_expr(expr).map_err(err)?.to_poisson(1).map_err(err)?;
    let a = poisson::pbw(&p).map_err(err)?;
    Ok(a.terms().map(|(w, c)| (w.iter().map(u8::to_string).collect::<String>(), c.to_string())).collect())
}

#[pyfunction]
fn filtration_check(arity: usize) -> bool {
    poisson::filtration_check(arity).passed()
}

#[pymodule]
#[pyo3(name = "graphcx")]
fn graphcx_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(canonical, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(homology, m)?)?;
    m.add_function(wrap_pyfunction!(euler, m)?)?;
    m.add_function(wrap_pyfunction!(differential, m)?)?;
    m.add_function(wrap_pyfunction!(twisted_differential, m)?)?;
    m.add_function(wrap_pyfunction!(tripod_series, m)?)?;
    m.add_function(wrap_pyfunction!(mc_residual, m)?)?;
    m.add_function(wrap_pyfunction!(loop_classes, m)?)?;
    m.add_function(wrap_pyfunction!(pod_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(pbw, m)?)?;
    m.add_function(wrap_pyfunction!(filtration_check, m)?)?;
    m.add("LEDGER_VERSION", graphcx::report::LEDGER_VERSION)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chains_round_trip() {
        let spec = spec_of("Graphs", 2, None, Some(2)).unwrap();
        let chain: Chain = [("N2 k0 | 1>2".to_string(), "3/2".to_string())].into_iter().collect();
        assert_eq!(from_chain(&to_chain(&chain, spec.symmetry()).unwrap()), chain);
    }

    #[test]
    fn tripod_series_is_closed() {
        let t = tripod_series(2, 7).unwrap();
        assert!(twisted_differential(t, 2, 7).unwrap().is_empty());
        assert_eq!(mc_residual(2, 7, "1/4").unwrap(), Vec::<usize>::new());
    }
}
