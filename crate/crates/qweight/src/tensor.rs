//! Dense complex linear algebra over multipartite Hilbert spaces.
//!
//! Operators are `nalgebra` dynamic matrices of `Complex64`. A
//! [`SubsystemShape`] records the local dimension of each site; basis indices
//! are mixed-radix numbers with **site 0 as the most significant digit**, so
//! for qubits the basis label `|0110>` is index `0b0110`. This matches the
//! [`crate::subset::SubsetMask`] bit layout.
//!
//! All functions are pure; none mutate their inputs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::subset::SubsetMask;

/// Dense complex operator.
pub type Operator = DMatrix<Complex64>;

/// Dense complex state vector.
pub type StateVector = DVector<Complex64>;

/// Default cap on dense operator size: `2^24` complex entries (a 4096 x 4096
/// matrix), enough for 12 qubits.
pub const MATRIX_ENTRY_CAP: usize = 1 << 24;

/// Hermiticity tolerance used by validation preconditions.
pub const HERMITICITY_TOL: f64 = 1e-9;

/// Eigenvalues above this threshold are considered nonzero when forming
/// spectral ensembles.
pub const EIGENVALUE_CUTOFF: f64 = 1e-12;

/// Dimensions of each site of a multipartite system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemShape {
    local_dims: Vec<usize>,
}

impl SubsystemShape {
    pub fn new(local_dims: Vec<usize>) -> Result<Self> {
        if local_dims.is_empty() {
            return Err(Error::argument("shape needs at least one site"));
        }
        if let Some(&d) = local_dims.iter().find(|&&d| d < 2) {
            return Err(Error::argument(format!("local dimension {d} < 2")));
        }
        let mut total: usize = 1;
        for &d in &local_dims {
            total = total
                .checked_mul(d)
                .filter(|&t| t <= MATRIX_ENTRY_CAP)
                .ok_or_else(|| {
                    Error::size_cap(format!("total dimension exceeds {MATRIX_ENTRY_CAP}"))
                })?;
        }
        Ok(SubsystemShape { local_dims })
    }

    pub fn qubits(n: usize) -> Self {
        SubsystemShape {
            local_dims: vec![2; n],
        }
    }

    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        SubsystemShape::new(vec![d; n])
    }

    pub fn n(&self) -> usize {
        self.local_dims.len()
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn local_dim(&self, site: usize) -> usize {
        self.local_dims[site]
    }

    pub fn total_dim(&self) -> usize {
        self.local_dims.iter().product()
    }

    pub fn is_qubit(&self) -> bool {
        self.local_dims.iter().all(|&d| d == 2)
    }

    /// Local dimension if it is the same on every site.
    pub fn uniform_dim(&self) -> Option<usize> {
        let d = self.local_dims[0];
        self.local_dims.iter().all(|&x| x == d).then_some(d)
    }

    /// Place value of the digit of `site` in a full basis index.
    pub fn site_stride(&self, site: usize) -> usize {
        self.local_dims[site + 1..].iter().product()
    }

    /// Product of the local dimensions of the sites in `mask`.
    pub fn subset_dim(&self, mask: SubsetMask) -> usize {
        mask.sites().iter().map(|&s| self.local_dims[s]).product()
    }

    /// Offsets of every sub-index of the sites in `mask` within a full basis
    /// index (the remaining digits set to zero). Enumerated in sub-index
    /// order, i.e. member sites keep their original relative order.
    fn subset_offsets(&self, mask: SubsetMask) -> Vec<usize> {
        let sites = mask.sites();
        let mut offsets = vec![0usize];
        for &s in &sites {
            let stride = self.site_stride(s);
            let d = self.local_dims[s];
            let mut next = Vec::with_capacity(offsets.len() * d);
            for &o in &offsets {
                for digit in 0..d {
                    next.push(o + digit * stride);
                }
            }
            offsets = next;
        }
        offsets
    }
}

fn check_square_on_shape(op: &Operator, shape: &SubsystemShape) -> Result<()> {
    let dim = shape.total_dim();
    if op.nrows() != dim || op.ncols() != dim {
        return Err(Error::shape(format!(
            "operator is {}x{}, shape expects {dim}x{dim}",
            op.nrows(),
            op.ncols()
        )));
    }
    Ok(())
}

fn check_same_dims(a: &Operator, b: &Operator) -> Result<()> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::shape(format!(
            "operands are {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(())
}

/// Largest absolute deviation from hermiticity.
pub fn hermiticity_error(m: &Operator) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let diff = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(diff);
        }
    }
    worst
}

pub fn require_hermitian(m: &Operator, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::shape(format!("{what} is not square")));
    }
    let err = hermiticity_error(m);
    if err > HERMITICITY_TOL {
        return Err(Error::validation(format!(
            "{what} is not Hermitian (deviation {err:.3e})"
        )));
    }
    Ok(())
}

/// Kronecker product with the default entry cap.
pub fn kron(a: &Operator, b: &Operator) -> Result<Operator> {
    let rows = a.nrows().checked_mul(b.nrows());
    let cols = a.ncols().checked_mul(b.ncols());
    match (rows, cols) {
        (Some(r), Some(c)) if r.saturating_mul(c) <= MATRIX_ENTRY_CAP => Ok(a.kronecker(b)),
        _ => Err(Error::size_cap(format!(
            "kron result would exceed {MATRIX_ENTRY_CAP} entries"
        ))),
    }
}

/// Kronecker product of a sequence of operators, left to right (site 0 first).
pub fn kron_all<'a>(ops: impl IntoIterator<Item = &'a Operator>) -> Result<Operator> {
    let mut iter = ops.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::argument("kron_all needs at least one factor"))?;
    let mut acc = first.clone();
    for op in iter {
        acc = kron(&acc, op)?;
    }
    Ok(acc)
}

/// Partial trace keeping the sites in `keep` (original site order).
///
/// The trace is preserved: `Tr(result) == Tr(op)`. Keeping every site returns
/// the operator unchanged; keeping none returns the 1x1 matrix `[Tr(op)]`.
pub fn partial_trace(op: &Operator, shape: &SubsystemShape, keep: SubsetMask) -> Result<Operator> {
    check_square_on_shape(op, shape)?;
    if keep.n() != shape.n() {
        return Err(Error::shape(format!(
            "mask covers {} sites, shape has {}",
            keep.n(),
            shape.n()
        )));
    }
    let kept = shape.subset_offsets(keep);
    let traced = shape.subset_offsets(keep.complement());
    let k = kept.len();
    let mut out = Operator::zeros(k, k);
    for (i, &ri) in kept.iter().enumerate() {
        for (j, &rj) in kept.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &t in &traced {
                acc += op[(ri + t, rj + t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Embed an operator acting on `support` into the full space, identity
/// elsewhere, with tensor factors at their original site positions.
pub fn embed_with_identity(
    op_s: &Operator,
    shape: &SubsystemShape,
    support: SubsetMask,
) -> Result<Operator> {
    if support.n() != shape.n() {
        return Err(Error::shape(format!(
            "mask covers {} sites, shape has {}",
            support.n(),
            shape.n()
        )));
    }
    let sub_dim = shape.subset_dim(support);
    if op_s.nrows() != sub_dim || op_s.ncols() != sub_dim {
        return Err(Error::shape(format!(
            "operator is {}x{}, support expects {sub_dim}x{sub_dim}",
            op_s.nrows(),
            op_s.ncols()
        )));
    }
    let dim = shape.total_dim();
    if dim.saturating_mul(dim) > MATRIX_ENTRY_CAP {
        return Err(Error::size_cap(format!(
            "embedding would exceed {MATRIX_ENTRY_CAP} entries"
        )));
    }
    let sup = shape.subset_offsets(support);
    let rest = shape.subset_offsets(support.complement());
    let mut out = Operator::zeros(dim, dim);
    for (i, &ri) in sup.iter().enumerate() {
        for (j, &rj) in sup.iter().enumerate() {
            let v = op_s[(i, j)];
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            for &t in &rest {
                out[(ri + t, rj + t)] = v;
            }
        }
    }
    Ok(out)
}

/// Hilbert-Schmidt inner product `Re Tr(a b)` of two Hermitian operators.
pub fn hs_inner(a: &Operator, b: &Operator) -> Result<f64> {
    check_same_dims(a, b)?;
    require_hermitian(a, "left operand")?;
    require_hermitian(b, "right operand")?;
    let tr = trace_product(a, b);
    if tr.im.abs() > HERMITICITY_TOL {
        return Err(Error::Numeric(format!(
            "Tr(ab) has imaginary part {:.3e}",
            tr.im
        )));
    }
    Ok(tr.re)
}

/// `Tr(a b)` without hermiticity checks.
pub fn trace_product(a: &Operator, b: &Operator) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Eigendecomposition of a Hermitian operator. Returns eigenvalues (ascending
/// is not guaranteed) and the unitary of column eigenvectors.
pub fn hermitian_eigen(m: &Operator) -> Result<(Vec<f64>, Operator)> {
    require_hermitian(m, "eigendecomposition input")?;
    let eig = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric("Hermitian eigensolver did not converge".into()))?;
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

/// Trace distance `0.5 * sum |eig(a - b)|`.
pub fn trace_distance(a: &Operator, b: &Operator) -> Result<f64> {
    check_same_dims(a, b)?;
    require_hermitian(a, "left operand")?;
    require_hermitian(b, "right operand")?;
    let (eigs, _) = hermitian_eigen(&(a - b))?;
    Ok(0.5 * eigs.iter().map(|x| x.abs()).sum::<f64>())
}

/// Validate Hermiticity, positivity (eigenvalues >= -1e-10) and unit trace
/// (within 1e-12) of a density matrix on `shape`.
pub fn require_density_matrix(rho: &Operator, shape: &SubsystemShape) -> Result<()> {
    check_square_on_shape(rho, shape)?;
    require_hermitian(rho, "density matrix")?;
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
        return Err(Error::validation(format!("trace is {tr}, expected 1")));
    }
    let (eigs, _) = hermitian_eigen(rho)?;
    if let Some(bad) = eigs.iter().find(|&&x| x < -1e-10) {
        return Err(Error::validation(format!(
            "density matrix has negative eigenvalue {bad:.3e}"
        )));
    }
    Ok(())
}

/// Purity `Tr(rho^2)` of a Hermitian operator.
pub fn purity(rho: &Operator) -> f64 {
    trace_product(rho, rho).re
}

pub fn identity(dim: usize) -> Operator {
    Operator::identity(dim, dim)
}
