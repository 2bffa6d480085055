//! Applications of the SWAP-test enumerators: code distance, robustness,
//! k-uniformity, entanglement measures, and sampling budgets.

use serde::{Deserialize, Serialize};

use crate::enumerators::{binomial, rains_from_distribution};
use crate::error::{Error, Result};
use crate::subset::{SubsetMask, SubsetVector};
use crate::swap::{analytic_distribution, SwapDistribution};
use crate::tensor::{
    partial_trace, purity, require_density_matrix, trace_distance, Operator, SubsystemShape,
};

/// Result of the distance scan over the residuals `K B'_j - A'_j`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistanceReport {
    pub n: usize,
    #[serde(rename = "K")]
    pub code_dim: f64,
    pub d: usize,
    /// Determined distance: the first weight whose residual exceeds the
    /// tolerance (`n + 1` when none does; see `degenerate`).
    pub delta: usize,
    /// Whether the code is pure: `A'_{delta-1} = C(n, delta-1) d^{1-delta}`.
    pub pure: bool,
    /// All residuals vanished through weight `n`.
    pub degenerate: bool,
    pub tolerance: f64,
    /// `K B'_j - A'_j` for `j = 0..=n`.
    pub residuals: Vec<f64>,
}

/// Recommended shot budget for estimating a weight-`j` residual to accuracy
/// `epsilon`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SamplePlan {
    pub n: usize,
    #[serde(rename = "K")]
    pub code_dim: f64,
    pub d: usize,
    pub j: usize,
    pub epsilon: f64,
    /// Worst-case variance numerator `((K+1) C(n,j))^2`.
    pub variance_bound: f64,
    pub shots: u64,
}

/// Determine the code distance of a normalized projector `rho_Q = Pi/K`.
///
/// Computes the unitary enumerators through the SWAP-test distribution, then
/// scans residuals upward from `j = 0`; the distance is the first weight
/// whose residual leaves `[-tol, tol]`. For `K > 1` the residual is
/// `K B'_j - A'_j`. For `K = 1` that expression vanishes identically
/// (`B'_j = A'_j` for pure states), and one-dimensional codes are pure by
/// definition, so the scan uses the pure-code residual
/// `A'_j - C(n,j) d^{-j}` instead — making the distance equal the
/// k-uniformity plus one.
///
/// Residuals must vanish on a prefix; a zero residual reappearing after a
/// nonzero one means inconsistent input and is reported as an error.
pub fn code_distance(
    rho_q: &Operator,
    code_dim: f64,
    shape: &SubsystemShape,
    tol: f64,
) -> Result<DistanceReport> {
    if tol <= 0.0 {
        return Err(Error::argument("tolerance must be positive"));
    }
    if code_dim < 1.0 {
        return Err(Error::argument(format!("code dimension {code_dim} < 1")));
    }
    require_density_matrix(rho_q, shape)?;
    // rho_Q must be a normalized projector: (K rho)^2 = K rho.
    let pi = rho_q.map(|z| z * code_dim);
    let pi_sq = &pi * &pi;
    let projector_err = (&pi_sq - &pi).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if projector_err > 1e-6 {
        return Err(Error::validation(format!(
            "input is not a normalized projector (max |Pi^2 - Pi| = {projector_err:.3e})"
        )));
    }
    let d = shape
        .uniform_dim()
        .ok_or_else(|| Error::argument("distance scan needs a uniform local dimension"))?;
    let n = shape.n();
    let dist = analytic_distribution(rho_q, rho_q, shape)?;
    let (a_prime, b_prime) = rains_from_distribution(&dist);
    let one_dimensional = (code_dim - 1.0).abs() < 1e-9;
    let residuals: Vec<f64> = (0..=n)
        .map(|j| {
            if one_dimensional {
                a_prime[j] - binomial(n, j) as f64 / (d as f64).powi(j as i32)
            } else {
                code_dim * b_prime[j] - a_prime[j]
            }
        })
        .collect();
    let delta = residuals
        .iter()
        .position(|r| r.abs() >= tol)
        .unwrap_or(n + 1);
    let degenerate = delta == n + 1;
    if let Some(stray) = residuals[delta.min(n)..]
        .iter()
        .skip(1)
        .position(|r| r.abs() < tol)
    {
        return Err(Error::validation(format!(
            "residual prefix violated: the residual is below tol again at j = {}",
            delta + 1 + stray
        )));
    }
    let probe = delta.saturating_sub(1).min(n);
    let pure_target = binomial(n, probe) as f64 * (d as f64).powi(1 - delta.min(n + 1) as i32);
    let pure = one_dimensional || (a_prime[probe] - pure_target).abs() < tol;
    Ok(DistanceReport {
        n,
        code_dim,
        d,
        delta,
        pure,
        degenerate,
        tolerance: tol,
        residuals,
    })
}

/// Robustness bound of the distance residual under preparation noise:
/// a trace-distance-`epsilon` perturbation moves `|K B'_{delta-1} - A'_{delta-1}|`
/// by at most `4 (K+1) C(n, delta-1) epsilon`.
pub fn robustness_bound(n: usize, code_dim: f64, delta: usize, epsilon: f64) -> f64 {
    4.0 * (code_dim + 1.0) * binomial(n, delta - 1) as f64 * epsilon
}

/// Check that a perturbed state keeps its weight-`delta-1` residual within
/// the robustness bound implied by its trace distance to the target.
pub fn closeness_check(
    rho_prime: &Operator,
    rho_q: &Operator,
    shape: &SubsystemShape,
    report: &DistanceReport,
) -> Result<bool> {
    require_density_matrix(rho_prime, shape)?;
    let epsilon = trace_distance(rho_prime, rho_q)?;
    let bound = robustness_bound(report.n, report.code_dim, report.delta, epsilon);
    let dist = analytic_distribution(rho_prime, rho_prime, shape)?;
    let (a_prime, b_prime) = rains_from_distribution(&dist);
    let j = report.delta - 1;
    let residual = report.code_dim * b_prime[j] - a_prime[j];
    Ok(residual.abs() <= bound + 1e-12)
}

/// Largest `k` such that every `k'`-site marginal is maximally mixed for all
/// `k' <= k`, i.e. `A'_{k'} = C(n, k') d^{-k'}`.
pub fn k_uniformity(psi_rho: &Operator, shape: &SubsystemShape, tol: f64) -> Result<usize> {
    require_density_matrix(psi_rho, shape)?;
    let p = purity(psi_rho);
    if (p - 1.0).abs() > 1e-9 {
        return Err(Error::validation(format!(
            "k-uniformity needs a pure state; purity is {p}"
        )));
    }
    let d = shape
        .uniform_dim()
        .ok_or_else(|| Error::argument("k-uniformity needs a uniform local dimension"))?;
    let n = shape.n();
    let dist = analytic_distribution(psi_rho, psi_rho, shape)?;
    let (a_prime, _) = rains_from_distribution(&dist);
    let mut k = 0;
    for k_probe in 1..=n {
        let target = binomial(n, k_probe) as f64 / (d as f64).powi(k_probe as i32);
        if (a_prime[k_probe] - target).abs() < tol {
            k = k_probe;
        } else {
            break;
        }
    }
    Ok(k)
}

/// Fixed partition measure `E_S = 1 - (1/m) sum_i Tr(rho_{S_i}^2)` of a pure
/// state over the subset family `subsets`.
///
/// Both the direct purity form and the SWAP-distribution form are evaluated;
/// they must agree within 1e-10 and the distribution form is returned.
pub fn fixed_partition_measure(
    psi_rho: &Operator,
    shape: &SubsystemShape,
    subsets: &[SubsetMask],
) -> Result<f64> {
    require_density_matrix(psi_rho, shape)?;
    let p = purity(psi_rho);
    if (p - 1.0).abs() > 1e-9 {
        return Err(Error::validation(format!(
            "fixed partition measure needs a pure state; purity is {p}"
        )));
    }
    if subsets.is_empty() {
        return Err(Error::argument("subset family is empty"));
    }
    if subsets.iter().all(|s| s.is_empty()) {
        return Err(Error::argument(
            "subset family must contain a nonempty subset",
        ));
    }
    if let Some(bad) = subsets.iter().find(|s| s.n() != shape.n()) {
        return Err(Error::shape(format!(
            "subset {bad} covers {} sites, shape has {}",
            bad.n(),
            shape.n()
        )));
    }
    let m = subsets.len() as f64;
    let mut direct = 0.0;
    for s in subsets {
        direct += purity(&partial_trace(psi_rho, shape, *s)?);
    }
    let direct = 1.0 - direct / m;

    let dist = analytic_distribution(psi_rho, psi_rho, shape)?;
    let overlaps = crate::swap::overlaps_from_distribution(&dist);
    let from_dist = 1.0 - subsets.iter().map(|s| overlaps.value(*s)).sum::<f64>() / m;

    if (direct - from_dist).abs() > 1e-10 {
        return Err(Error::Numeric(format!(
            "purity form {direct} and distribution form {from_dist} disagree"
        )));
    }
    Ok(from_dist)
}

/// Bipartite concurrence `C_{S|S^c} = sqrt(2 [1 - Tr(rho_S^2)])` of a pure
/// state.
pub fn concurrence(psi_rho: &Operator, shape: &SubsystemShape, s: SubsetMask) -> Result<f64> {
    require_density_matrix(psi_rho, shape)?;
    let p = purity(psi_rho);
    if (p - 1.0).abs() > 1e-9 {
        return Err(Error::validation(format!(
            "concurrence needs a pure state; purity is {p}"
        )));
    }
    let sub = purity(&partial_trace(psi_rho, shape, s)?);
    Ok((2.0 * (1.0 - sub).max(0.0)).sqrt())
}

/// Signed concurrence sum `sum_S (-1)^{|S & T|} C^2_{S|S^c}` of a pure state.
///
/// Non-positive for even `|T|` and zero for odd `|T|` (the monogamy
/// inequalities).
pub fn monogamy_check(psi_rho: &Operator, shape: &SubsystemShape, t: SubsetMask) -> Result<f64> {
    require_density_matrix(psi_rho, shape)?;
    let p = purity(psi_rho);
    if (p - 1.0).abs() > 1e-9 {
        return Err(Error::validation(format!(
            "monogamy check needs a pure state; purity is {p}"
        )));
    }
    if t.is_empty() {
        return Err(Error::argument("T must be nonempty"));
    }
    let n = shape.n();
    let mut acc = 0.0;
    for s in SubsetMask::all(n) {
        let c_sq = 2.0 * (1.0 - purity(&partial_trace(psi_rho, shape, s)?));
        let sign = if s.intersection(&t).weight() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        acc += sign * c_sq;
    }
    Ok(acc)
}

/// Exact combinatorial kernel `f_k(w) = sum_m (-1)^m C(n-w, k-m) C(w, m)`:
/// the signed subset sum `sum_{wt(t)=k} (-1)^{z.t}` at `wt(z) = w`.
pub fn f_coeff(n: usize, k: usize, w: usize) -> i64 {
    let mut acc = 0i64;
    for m in 0..=k.min(w) {
        let term = (binomial(n - w, k - m) * binomial(w, m)) as i64;
        acc += if m % 2 == 0 { term } else { -term };
    }
    acc
}

/// Variance of the linear estimator `sum_z coeffs[z] * N_z / N` under the
/// multinomial model: `(sum_z f(z)^2 p(z) - R^2) / N`.
pub fn estimator_variance(dist: &SwapDistribution, coeffs: &SubsetVector, shots: u64) -> f64 {
    let mean: f64 = dist
        .p()
        .values()
        .iter()
        .zip(coeffs.values())
        .map(|(p, f)| p * f)
        .sum();
    let second: f64 = dist
        .p()
        .values()
        .iter()
        .zip(coeffs.values())
        .map(|(p, f)| p * f * f)
        .sum();
    (second - mean * mean) / shots as f64
}

/// Coefficients of the distance-residual estimator
/// `K B'_j - A'_j = sum_z [K f_{n-j}(wt z) - f_j(wt z)] p(z)`.
pub fn residual_coeffs(n: usize, code_dim: f64, j: usize) -> SubsetVector {
    SubsetVector::from_fn(n, |mask| {
        let w = mask.weight();
        code_dim * f_coeff(n, n - j, w) as f64 - f_coeff(n, j, w) as f64
    })
}

/// Shot budget `ceil((K+1)^2 C(n,j)^2 / epsilon^2)` for a weight-`j` residual
/// at accuracy `epsilon`.
pub fn sample_plan(n: usize, code_dim: f64, d: usize, j: usize, epsilon: f64) -> Result<SamplePlan> {
    if epsilon <= 0.0 {
        return Err(Error::argument("epsilon must be positive"));
    }
    if j > n {
        return Err(Error::argument(format!("weight {j} exceeds {n} sites")));
    }
    let bound = ((code_dim + 1.0) * binomial(n, j) as f64).powi(2);
    let shots = (bound / (epsilon * epsilon)).ceil().max(1.0) as u64;
    Ok(SamplePlan {
        n,
        code_dim,
        d,
        j,
        epsilon,
        variance_bound: bound,
        shots,
    })
}

/// What a SWAP-test distribution reveals about its input pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionCharacter {
    /// `p(0) = 1`: both inputs are the same pure product state.
    ProductPair,
    /// Uniform distribution: all nonempty reduced overlaps vanish.
    OrthogonalSupports,
    Neither,
}

/// Classify a distribution per the `p(0) = 1` / uniform dichotomies,
/// with tolerance 1e-9.
pub fn characterize_distribution(dist: &SwapDistribution) -> DistributionCharacter {
    let p0 = dist.p().values()[0];
    if (p0 - 1.0).abs() < 1e-9 {
        return DistributionCharacter::ProductPair;
    }
    let uniform = 1.0 / dist.p().len() as f64;
    let max_dev = dist
        .p()
        .values()
        .iter()
        .map(|&v| (v - uniform).abs())
        .fold(0.0, f64::max);
    if max_dev < 1e-9 {
        return DistributionCharacter::OrthogonalSupports;
    }
    DistributionCharacter::Neither
}
