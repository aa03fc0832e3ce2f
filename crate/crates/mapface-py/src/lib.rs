use mapface::bounds;
use mapface::configmodel::{self, DegreeSequence, FixedRotation};
use mapface::embed_random::{self, Sampler};
use mapface::enumerate;
use mapface::{Error, Graph};
use num_traits::ToPrimitive;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use std::collections::BTreeMap;

fn err(e: Error) -> PyErr {
    if e.is_refusal() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// Face-count histogram of all embeddings of K_n.
#[pyfunction]
#[pyo3(signature = (n, fix_first=false))]
fn face_distribution(n: usize, fix_first: bool) -> PyResult<BTreeMap<usize, u64>> {
    let c = enumerate::face_distribution(&Graph::complete(n), fix_first).map_err(err)?;
    Ok(c.by_faces)
}

/// Genus histogram of all embeddings of K_n.
#[pyfunction]
#[pyo3(signature = (n, fix_first=false))]
fn genus_distribution(n: usize, fix_first: bool) -> PyResult<BTreeMap<usize, u64>> {
    let c = enumerate::genus_distribution(&Graph::complete(n), fix_first).map_err(err)?;
    Ok(c.by_genus)
}

/// Exact E[F(K_n)] as a "p/q" string.
#[pyfunction]
fn expected_faces_exact(n: usize) -> PyResult<String> {
    Ok(enumerate::expected_faces_exact(&Graph::complete(n)).map_err(err)?.to_string())
}

/// Monte Carlo (mean, stderr) of the face count of K_n.
#[pyfunction]
#[pyo3(signature = (n, trials, seed=0, process="uniform"))]
fn sample_faces(n: usize, trials: u64, seed: u64, process: &str) -> PyResult<(f64, f64)> {
    let sampler = match process {
        "uniform" => Sampler::Uniform,
        "A" | "a" => Sampler::ProcessA,
        "B" | "b" => Sampler::ProcessB,
        _ => return Err(PyValueError::new_err("process must be uniform, A or B")),
    };
    if trials == 0 || (sampler != Sampler::Uniform && n < 3) {
        return Err(PyValueError::new_err("need trials >= 1 and n >= 3 for processes A/B"));
    }
    let e = embed_random::estimate_expected_faces(&Graph::complete(n), sampler, trials, seed);
    Ok((e.mean, e.stderr))
}

#[pyfunction]
fn logsq_upper(n: usize) -> PyResult<f64> {
    bounds::logsq_upper(n).map_err(err)
}

#[pyfunction]
fn lower_bound(n: usize) -> PyResult<f64> {
    bounds::lower_bound(n).map_err(err)
}

/// β(2..=n_max) as a list of (n, β) pairs.
#[pyfunction]
fn beta_table(n_max: usize) -> PyResult<Vec<(usize, f64)>> {
    let t = bounds::beta_table(n_max).map_err(err)?;
    Ok(t.entries.iter().map(|e| (e.n, e.beta)).collect())
}

/// Exact expected faces under the configuration model, as (string, float).
#[pyfunction]
fn configmodel_expected_faces(degrees: Vec<usize>) -> PyResult<(String, f64)> {
    let ds = DegreeSequence::new(degrees).map_err(err)?;
    let r = FixedRotation::canonical(&ds);
    let e = configmodel::expected_faces_exact_cm(&r, configmodel::DEFAULT_MATCHING_BUDGET).map_err(err)?;
    Ok((e.to_string(), e.to_f64().unwrap_or(f64::NAN)))
}

/// Faces and genus of a map given in the JSON map format.
#[pyfunction]
fn map_faces_genus(json: &str) -> PyResult<(usize, usize)> {
    let m = mapface::io::map_from_json(json).map_err(err)?;
    Ok((m.count_faces(), m.genus().map_err(err)?))
}

#[pymodule]
fn mapface_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(face_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(genus_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(expected_faces_exact, m)?)?;
    m.add_function(wrap_pyfunction!(sample_faces, m)?)?;
    m.add_function(wrap_pyfunction!(logsq_upper, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(beta_table, m)?)?;
    m.add_function(wrap_pyfunction!(configmodel_expected_faces, m)?)?;
    m.add_function(wrap_pyfunction!(map_faces_genus, m)?)?;
    Ok(())
}
