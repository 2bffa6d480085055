//! Reference states, density-matrix file I/O, and spectral ensembles.
//!
//! Named state specs:
//! - `ghz:n` / `ghz:n:d` — the n-site GHZ state of local dimension d (default 2)
//! - `w:n` — the n-qubit W state
//! - `basis:<bitstring>` — a computational basis product state
//!
//! The density-matrix file format is JSON:
//! `{"dims": [d1, ..., dn], "re": [[...]], "im": [[...]]}` with row-major
//! nested arrays.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{
    hermitian_eigen, require_density_matrix, Operator, StateVector, SubsystemShape,
    EIGENVALUE_CUTOFF,
};

/// GHZ state vector `(1/sqrt(d)) sum_i |i>^{x n}`.
pub fn ghz_vector(n: usize, d: usize) -> Result<StateVector> {
    let shape = SubsystemShape::uniform(n, d)?;
    let dim = shape.total_dim();
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = DVector::zeros(dim);
    // |i,i,...,i> has index i * (d^n - 1) / (d - 1).
    let step = (dim - 1) / (d - 1);
    for i in 0..d {
        v[i * step] = amp;
    }
    Ok(v)
}

/// W state vector `(1/sqrt(n)) sum_{wt(v)=1} |v>`.
pub fn w_vector(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::argument("W state needs at least 2 sites"));
    }
    let dim = 1usize << n;
    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut v = DVector::zeros(dim);
    for site in 0..n {
        v[1usize << (n - 1 - site)] = amp;
    }
    Ok(v)
}

/// Computational basis vector for a bitstring such as `"01"`.
pub fn basis_vector(bits: &str) -> Result<(StateVector, SubsystemShape)> {
    let mask = crate::subset::SubsetMask::from_bitstring(bits)?;
    let n = mask.n();
    let mut v = DVector::zeros(1usize << n);
    v[mask.bits()] = Complex64::new(1.0, 0.0);
    Ok((v, SubsystemShape::qubits(n)))
}

/// `|psi><psi|` of a (not necessarily normalized) vector.
pub fn pure_density(psi: &StateVector) -> Operator {
    let norm = psi.norm();
    let v = psi / Complex64::new(norm, 0.0);
    &v * v.adjoint()
}

/// Resolve a named state spec to a density matrix and its shape.
pub fn named_state(spec: &str) -> Result<(Operator, SubsystemShape)> {
    let mut parts = spec.split(':');
    let head = parts.next().unwrap_or("");
    match head {
        "ghz" => {
            let n = parse_field(spec, parts.next(), "site count")?;
            let d = match parts.next() {
                Some(text) => parse_usize(spec, text, "local dimension")?,
                None => 2,
            };
            expect_end(spec, parts.next())?;
            if n < 1 || d < 2 {
                return Err(Error::argument(format!("ghz spec out of range: {spec}")));
            }
            let shape = SubsystemShape::uniform(n, d)?;
            Ok((pure_density(&ghz_vector(n, d)?), shape))
        }
        "w" => {
            let n = parse_field(spec, parts.next(), "site count")?;
            expect_end(spec, parts.next())?;
            Ok((pure_density(&w_vector(n)?), SubsystemShape::qubits(n)))
        }
        "basis" => {
            let bits = parts
                .next()
                .ok_or_else(|| spec_error(spec, "missing bitstring"))?;
            expect_end(spec, parts.next())?;
            let (v, shape) = basis_vector(bits)?;
            Ok((pure_density(&v), shape))
        }
        _ => Err(spec_error(
            spec,
            "expected ghz:n[:d], w:n, or basis:<bitstring>",
        )),
    }
}

/// Names understood by [`named_state`], for resolution diagnostics.
pub fn is_named_state_spec(spec: &str) -> bool {
    matches!(
        spec.split(':').next().unwrap_or(""),
        "ghz" | "w" | "basis"
    )
}

fn spec_error(spec: &str, msg: &str) -> Error {
    Error::parse(0, format!("bad state spec {spec:?}: {msg}"))
}

fn parse_field(spec: &str, field: Option<&str>, what: &str) -> Result<usize> {
    match field {
        Some(text) => parse_usize(spec, text, what),
        None => Err(spec_error(spec, &format!("missing {what}"))),
    }
}

fn parse_usize(spec: &str, text: &str, what: &str) -> Result<usize> {
    text.parse()
        .map_err(|_| spec_error(spec, &format!("invalid {what} {text:?}")))
}

fn expect_end(spec: &str, next: Option<&str>) -> Result<()> {
    match next {
        None => Ok(()),
        Some(_) => Err(spec_error(spec, "trailing fields")),
    }
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixFile {
    dims: Vec<usize>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// Serialize a density matrix to the JSON file format.
pub fn density_matrix_to_json(rho: &Operator, shape: &SubsystemShape) -> Result<String> {
    let dim = shape.total_dim();
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::shape(format!(
            "matrix is {}x{}, shape expects {dim}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let file = DensityMatrixFile {
        dims: shape.local_dims().to_vec(),
        re: (0..dim)
            .map(|i| (0..dim).map(|j| rho[(i, j)].re).collect())
            .collect(),
        im: (0..dim)
            .map(|i| (0..dim).map(|j| rho[(i, j)].im).collect())
            .collect(),
    };
    crate::json::to_canonical_string(&file)
}

/// Parse and validate a density matrix from the JSON file format.
pub fn density_matrix_from_json(text: &str) -> Result<(Operator, SubsystemShape)> {
    let file: DensityMatrixFile = serde_json::from_str(text)?;
    let shape = SubsystemShape::new(file.dims)?;
    let dim = shape.total_dim();
    let rows_ok = |rows: &Vec<Vec<f64>>| rows.len() == dim && rows.iter().all(|r| r.len() == dim);
    if !rows_ok(&file.re) || !rows_ok(&file.im) {
        return Err(Error::shape(format!(
            "matrix entries do not form a {dim}x{dim} array"
        )));
    }
    let rho = Operator::from_fn(dim, dim, |i, j| Complex64::new(file.re[i][j], file.im[i][j]));
    require_density_matrix(&rho, &shape)?;
    Ok((rho, shape))
}

/// Load a density matrix from a JSON file on disk.
pub fn load_density_matrix(path: &std::path::Path) -> Result<(Operator, SubsystemShape)> {
    density_matrix_from_json(&std::fs::read_to_string(path)?)
}

/// A spectral ensemble: pure states with their probabilities.
#[derive(Clone, Debug)]
pub struct Ensemble {
    pairs: Vec<(f64, StateVector)>,
}

impl Ensemble {
    pub fn pairs(&self) -> &[(f64, StateVector)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Reassemble `sum_i p_i |psi_i><psi_i|`.
    pub fn to_density(&self) -> Operator {
        let dim = self.pairs[0].1.len();
        let mut rho = Operator::zeros(dim, dim);
        for (p, v) in &self.pairs {
            rho += (v * v.adjoint()).map(|z| z * *p);
        }
        rho
    }
}

/// Spectral decomposition of a density matrix, keeping eigenvalues above
/// [`EIGENVALUE_CUTOFF`] and renormalizing the retained probabilities.
pub fn ensemble_of(rho: &Operator, shape: &SubsystemShape) -> Result<Ensemble> {
    require_density_matrix(rho, shape)?;
    let (eigs, vecs) = hermitian_eigen(rho)?;
    let mut pairs: Vec<(f64, StateVector)> = Vec::new();
    for (idx, &lambda) in eigs.iter().enumerate() {
        if lambda > EIGENVALUE_CUTOFF {
            pairs.push((lambda, vecs.column(idx).into_owned()));
        }
    }
    if pairs.is_empty() {
        return Err(Error::Numeric("spectral decomposition found no support".into()));
    }
    let total: f64 = pairs.iter().map(|(p, _)| p).sum();
    for (p, _) in &mut pairs {
        *p /= total;
    }
    Ok(Ensemble { pairs })
}
