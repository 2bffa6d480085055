//! The n-qubit parallelized SWAP test, realized two independent ways.
//!
//! Given states `rho` and `sigma` on the same n-site system, the test uses n
//! ancilla qubits; ancilla i controls a SWAP between site i of the two state
//! registers, sandwiched between Hadamards. The probability of reading
//! ancilla bitstring `z` is
//!
//! ```text
//! p(z) = 2^-n * sum_{S subset of sites} (-1)^{|S & supp(z)|} Tr(rho_S sigma_S)
//! ```
//!
//! so the distribution is the signed subset transform of the overlap vector
//! `Tr(rho_S sigma_S)`, and the transform inverts: one run of the test
//! determines every reduced-state overlap.
//!
//! [`analytic_distribution`] evaluates the closed form via partial traces;
//! [`circuit_distribution`] simulates the circuit on a statevector and must
//! agree to near machine precision. A seedable multinomial sampler turns
//! distributions into shot records.
//!
//! Register layout in the simulation: ancillas `A_1..A_n`, then register B,
//! then register C, with `A_1` (site 0) as the most significant index digit.
//! The measured ancilla bitstring therefore *is* the subset-mask integer.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::ensemble_of;
use crate::subset::{SubsetMask, SubsetVector};
use crate::tensor::{
    hs_inner, partial_trace, require_density_matrix, Operator, StateVector, SubsystemShape,
};

/// Default cap on the simulated joint register: `2^22` amplitudes.
pub const STATEVECTOR_AMPLITUDE_CAP: usize = 1 << 22;

/// Negative probabilities beyond this magnitude violate the non-negativity
/// of SWAP-test outcomes and are treated as an invariant violation.
pub const NEGATIVITY_TOL: f64 = 1e-10;

/// How a [`SwapDistribution`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineMethod {
    Analytic,
    Circuit,
    Sampled,
}

impl std::fmt::Display for EngineMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EngineMethod::Analytic => f.write_str("analytic"),
            EngineMethod::Circuit => f.write_str("circuit"),
            EngineMethod::Sampled => f.write_str("sampled"),
        }
    }
}

/// Outcome distribution of the parallelized SWAP test, indexed by ancilla
/// bitstring mask.
#[derive(Clone, Debug, PartialEq)]
pub struct SwapDistribution {
    n: usize,
    p: SubsetVector,
    method: EngineMethod,
}

impl SwapDistribution {
    /// Wrap a probability vector, enforcing normalization (1e-10) and
    /// non-negativity up to [`NEGATIVITY_TOL`].
    pub fn new(p: SubsetVector, method: EngineMethod) -> Result<Self> {
        let total: f64 = p.values().iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::validation(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        if let Some(&bad) = p.values().iter().find(|&&x| x < -NEGATIVITY_TOL) {
            return Err(Error::validation(format!(
                "negative probability {bad:.3e} violates SWAP-test non-negativity"
            )));
        }
        Ok(SwapDistribution {
            n: p.n(),
            p,
            method,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> &SubsetVector {
        &self.p
    }

    pub fn method(&self) -> EngineMethod {
        self.method
    }

    pub fn probability(&self, mask: SubsetMask) -> f64 {
        self.p.value(mask)
    }

    /// Whether all masks of equal weight carry the same probability (within
    /// `tol`), as for permutation-symmetric states.
    pub fn is_weight_symmetric(&self, tol: f64) -> bool {
        for w in 0..=self.n {
            let mut reference: Option<f64> = None;
            for m in SubsetMask::all(self.n).filter(|m| m.weight() == w) {
                let v = self.p.value(m);
                match reference {
                    None => reference = Some(v),
                    Some(r) if (v - r).abs() > tol => return false,
                    _ => {}
                }
            }
        }
        true
    }

    /// Serialize as `{"n": .., "method": .., "p": {"<bitstring>": ..}}`.
    /// Entries that are exactly zero are omitted.
    pub fn to_json(&self) -> Result<String> {
        crate::json::to_canonical_string(&DistributionDoc::from(self))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DistributionDoc = serde_json::from_str(text)?;
        doc.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct DistributionDoc {
    n: usize,
    method: EngineMethod,
    p: BTreeMap<String, f64>,
}

impl From<&SwapDistribution> for DistributionDoc {
    fn from(dist: &SwapDistribution) -> Self {
        let mut p = BTreeMap::new();
        for mask in SubsetMask::all(dist.n) {
            let v = dist.p.value(mask);
            if v != 0.0 {
                p.insert(mask.bitstring(), v);
            }
        }
        DistributionDoc {
            n: dist.n,
            method: dist.method,
            p,
        }
    }
}

impl TryFrom<DistributionDoc> for SwapDistribution {
    type Error = Error;

    fn try_from(doc: DistributionDoc) -> Result<Self> {
        let mut p = SubsetVector::zeros(doc.n);
        for (bits, v) in &doc.p {
            let mask = SubsetMask::from_bitstring(bits)?;
            if mask.n() != doc.n {
                return Err(Error::validation(format!(
                    "bitstring {bits:?} does not match n = {}",
                    doc.n
                )));
            }
            p.set(mask, *v);
        }
        SwapDistribution::new(p, doc.method)
    }
}

/// Overlaps `Tr(rho_S sigma_S)` for every subset `S`, via partial traces.
/// The empty-set entry is `Tr(rho) Tr(sigma) = 1`.
pub fn overlap_vector(
    rho: &Operator,
    sigma: &Operator,
    shape: &SubsystemShape,
) -> Result<SubsetVector> {
    require_density_matrix(rho, shape)?;
    require_density_matrix(sigma, shape)?;
    let n = shape.n();
    let mut out = SubsetVector::zeros(n);
    let same = rho == sigma;
    for mask in SubsetMask::all(n) {
        let rho_s = partial_trace(rho, shape, mask)?;
        let sigma_s = if same {
            rho_s.clone()
        } else {
            partial_trace(sigma, shape, mask)?
        };
        out.set(mask, hs_inner(&rho_s, &sigma_s)?);
    }
    Ok(out)
}

/// Closed-form outcome distribution: the signed subset transform of the
/// overlap vector, scaled by `2^-n`.
pub fn analytic_distribution(
    rho: &Operator,
    sigma: &Operator,
    shape: &SubsystemShape,
) -> Result<SwapDistribution> {
    let overlaps = overlap_vector(rho, sigma, shape)?;
    distribution_from_overlaps(&overlaps)
}

/// Distribution from a precomputed overlap vector.
pub fn distribution_from_overlaps(overlaps: &SubsetVector) -> Result<SwapDistribution> {
    let n = overlaps.n();
    let scale = 1.0 / (1u64 << n) as f64;
    let mut p = overlaps.fwht_signed();
    for v in p.values_mut() {
        *v *= scale;
    }
    SwapDistribution::new(p, EngineMethod::Analytic)
}

/// Invert a distribution back to the overlap vector:
/// `Tr(rho_T sigma_T) = sum_z (-1)^{|z & t|} p(z)`.
pub fn overlaps_from_distribution(dist: &SwapDistribution) -> SubsetVector {
    dist.p().fwht_signed()
}

/// Simulate the circuit with the default statevector cap.
pub fn circuit_distribution(
    rho: &Operator,
    sigma: &Operator,
    shape: &SubsystemShape,
) -> Result<SwapDistribution> {
    circuit_distribution_with_cap(rho, sigma, shape, STATEVECTOR_AMPLITUDE_CAP)
}

/// Simulate the circuit: Hadamard each ancilla, controlled-SWAP each site
/// pair, Hadamard again, then marginalize the ancilla register.
///
/// Mixed inputs run once per spectral ensemble pair `(psi_i, phi_j)` and the
/// outcome distributions combine with weights `p_i q_j`, which keeps memory
/// at a single pure statevector.
pub fn circuit_distribution_with_cap(
    rho: &Operator,
    sigma: &Operator,
    shape: &SubsystemShape,
    amplitude_cap: usize,
) -> Result<SwapDistribution> {
    require_density_matrix(rho, shape)?;
    require_density_matrix(sigma, shape)?;
    let n = shape.n();
    let dim = shape.total_dim();
    let amps = (1usize << n)
        .checked_mul(dim)
        .and_then(|x| x.checked_mul(dim))
        .filter(|&x| x <= amplitude_cap)
        .ok_or_else(|| {
            Error::size_cap(format!(
                "joint register needs 2^{n} * {dim}^2 amplitudes, above the cap of \
                 {amplitude_cap}; use the analytic engine instead"
            ))
        })?;
    let rho_ens = ensemble_of(rho, shape)?;
    let sigma_ens = ensemble_of(sigma, shape)?;
    let mut probs = vec![0.0f64; 1usize << n];
    let mut workspace = vec![Complex64::new(0.0, 0.0); amps];
    for (pw, psi) in rho_ens.pairs() {
        for (qw, phi) in sigma_ens.pairs() {
            run_pure_swap_test(psi, phi, shape, &mut workspace, pw * qw, &mut probs);
        }
    }
    let p = SubsetVector::from_values(n, probs)?;
    SwapDistribution::new(p, EngineMethod::Circuit)
}

/// One pure-state run; adds `weight * p(z)` into `probs`.
fn run_pure_swap_test(
    psi: &StateVector,
    phi: &StateVector,
    shape: &SubsystemShape,
    amps: &mut [Complex64],
    weight: f64,
    probs: &mut [f64],
) {
    let n = shape.n();
    let dim = shape.total_dim();
    let block = dim * dim;

    // |0..0>_A |psi>_B |phi>_C
    amps.fill(Complex64::new(0.0, 0.0));
    for b in 0..dim {
        if psi[b].norm_sqr() == 0.0 {
            continue;
        }
        for c in 0..dim {
            amps[b * dim + c] = psi[b] * phi[c];
        }
    }

    for site in 0..n {
        hadamard_ancilla(amps, n, site, block);
    }
    for site in 0..n {
        controlled_swap(amps, shape, site, dim, block);
    }
    for site in 0..n {
        hadamard_ancilla(amps, n, site, block);
    }

    for (idx, amp) in amps.iter().enumerate() {
        let z = idx / block;
        probs[z] += weight * amp.norm_sqr();
    }
}

/// Hadamard on ancilla `site`; ancilla digits sit above the `block`-sized
/// B x C register, site 0 most significant.
fn hadamard_ancilla(amps: &mut [Complex64], n: usize, site: usize, block: usize) {
    let stride = (1usize << (n - 1 - site)) * block;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let len = amps.len();
    let mut base = 0;
    while base < len {
        for idx in base..base + stride {
            let a = amps[idx];
            let b = amps[idx + stride];
            amps[idx] = (a + b) * inv_sqrt2;
            amps[idx + stride] = (a - b) * inv_sqrt2;
        }
        base += 2 * stride;
    }
}

/// SWAP of site digits between registers B and C, controlled on ancilla
/// `site` being 1. For qubits this is the Fredkin gate; for local dimension
/// d it is the swap permutation of the two d-valued digits.
fn controlled_swap(
    amps: &mut [Complex64],
    shape: &SubsystemShape,
    site: usize,
    dim: usize,
    block: usize,
) {
    let n = shape.n();
    let d = shape.local_dim(site);
    let stride = shape.site_stride(site);
    let ancilla_stride = (1usize << (n - 1 - site)) * block;
    for idx in 0..amps.len() {
        if (idx / ancilla_stride) & 1 == 0 {
            continue;
        }
        let b = (idx % block) / dim;
        let c = idx % dim;
        let digit_b = (b / stride) % d;
        let digit_c = (c / stride) % d;
        if digit_b < digit_c {
            let delta = digit_c - digit_b;
            let partner = idx + delta * stride * dim - delta * stride;
            amps.swap(idx, partner);
        }
    }
}

/// Sampled bitstring counts from a SWAP-test distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub n: usize,
    pub shots: u64,
    pub seed: u64,
    /// Count per mask index; sums to `shots`.
    pub counts: Vec<u64>,
}

/// Draw a multinomial sample of `shots` outcomes.
///
/// Sampling is inverse-CDF over the cumulative distribution with a ChaCha12
/// stream seeded by `seed`, so results are identical across platforms.
/// Probabilities in `[-NEGATIVITY_TOL, 0)` are clamped to zero first.
pub fn sample(dist: &SwapDistribution, shots: u64, seed: u64) -> Result<ShotRecord> {
    use rand::{Rng, SeedableRng};
    if shots == 0 {
        return Err(Error::argument("shots must be >= 1"));
    }
    let mut cumulative = Vec::with_capacity(dist.p().len());
    let mut acc = 0.0f64;
    for &v in dist.p().values() {
        acc += v.max(0.0);
        cumulative.push(acc);
    }
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; dist.p().len()];
    let last = counts.len() - 1;
    for _ in 0..shots {
        let u: f64 = rng.gen::<f64>() * acc;
        let idx = cumulative.partition_point(|&c| c <= u).min(last);
        counts[idx] += 1;
    }
    Ok(ShotRecord {
        n: dist.n(),
        shots,
        seed,
        counts,
    })
}

/// Empirical distribution `counts / shots` (the unbiased estimator of the
/// outcome probabilities).
pub fn estimate(record: &ShotRecord) -> Result<SwapDistribution> {
    let values = record
        .counts
        .iter()
        .map(|&c| c as f64 / record.shots as f64)
        .collect();
    let p = SubsetVector::from_values(record.n, values)?;
    SwapDistribution::new(p, EngineMethod::Sampled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density_matrix, random_pure_density};
    use crate::states::named_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} != {b} (tol {tol})");
    }

    #[test]
    fn overlap_vector_of_pure_product_self_test_is_all_ones() {
        let (rho, shape) = named_state("basis:010").unwrap();
        let ov = overlap_vector(&rho, &rho, &shape).unwrap();
        assert!(ov.values().iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn overlap_vector_of_ghz2_self_test() {
        let (rho, shape) = named_state("ghz:2").unwrap();
        let ov = overlap_vector(&rho, &rho, &shape).unwrap();
        assert_eq!(ov.values().len(), 4);
        assert_close(ov.values()[0b00], 1.0, 1e-12);
        assert_close(ov.values()[0b01], 0.5, 1e-12);
        assert_close(ov.values()[0b10], 0.5, 1e-12);
        assert_close(ov.values()[0b11], 1.0, 1e-12);
    }

    #[test]
    fn overlap_vector_of_orthogonal_basis_states() {
        let (rho, shape) = named_state("basis:000").unwrap();
        let (sigma, _) = named_state("basis:111").unwrap();
        let ov = overlap_vector(&rho, &sigma, &shape).unwrap();
        assert_close(ov.values()[0], 1.0, 1e-12);
        assert!(ov.values()[1..].iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn ghz4_analytic_distribution() {
        let (rho, shape) = named_state("ghz:4").unwrap();
        let dist = analytic_distribution(&rho, &rho, &shape).unwrap();
        for mask in SubsetMask::all(4) {
            let expect = match mask.weight() {
                0 => 9.0 / 16.0,
                2 => 1.0 / 16.0,
                4 => 1.0 / 16.0,
                _ => 0.0,
            };
            assert_close(dist.probability(mask), expect, 1e-12);
        }
        assert!(dist.is_weight_symmetric(1e-12));
    }

    #[test]
    fn w_state_analytic_distribution() {
        for n in 2..=5 {
            let (rho, shape) = named_state(&format!("w:{n}")).unwrap();
            let dist = analytic_distribution(&rho, &rho, &shape).unwrap();
            for mask in SubsetMask::all(n) {
                let expect = match mask.weight() {
                    0 => (n as f64 + 1.0) / (2.0 * n as f64),
                    2 => 1.0 / (n as f64 * n as f64),
                    _ => 0.0,
                };
                assert_close(dist.probability(mask), expect, 1e-12);
            }
        }
    }

    #[test]
    fn orthogonal_product_states_give_uniform_distribution() {
        let (rho, shape) = named_state("basis:000").unwrap();
        let (sigma, _) = named_state("basis:111").unwrap();
        let dist = analytic_distribution(&rho, &sigma, &shape).unwrap();
        for &v in dist.p().values() {
            assert_close(v, 1.0 / 8.0, 1e-12);
        }
    }

    #[test]
    fn overlaps_round_trip_through_distribution() {
        let mut rng = ChaCha12Rng::seed_from_u64(71);
        let shape = SubsystemShape::qubits(3);
        let rho = random_density_matrix(8, 3, &mut rng);
        let sigma = random_density_matrix(8, 2, &mut rng);
        let ov = overlap_vector(&rho, &sigma, &shape).unwrap();
        let dist = analytic_distribution(&rho, &sigma, &shape).unwrap();
        let back = overlaps_from_distribution(&dist);
        for (a, b) in ov.values().iter().zip(back.values()) {
            assert_close(*a, *b, 1e-10);
        }
    }

    #[test]
    fn uniform_distribution_inverts_to_delta_overlaps() {
        let p = SubsetVector::from_values(3, vec![1.0 / 8.0; 8]).unwrap();
        let dist = SwapDistribution::new(p, EngineMethod::Analytic).unwrap();
        let ov = overlaps_from_distribution(&dist);
        assert_close(ov.values()[0], 1.0, 1e-12);
        assert!(ov.values()[1..].iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn circuit_matches_standard_swap_test_on_one_qubit() {
        let (rho, shape) = named_state("basis:0").unwrap();
        let dist = circuit_distribution(&rho, &rho, &shape).unwrap();
        assert_close(dist.p().values()[0], 1.0, 1e-12);
        assert_close(dist.p().values()[1], 0.0, 1e-12);
    }

    #[test]
    fn circuit_matches_analytic_on_ghz2() {
        let (rho, shape) = named_state("ghz:2").unwrap();
        let circuit = circuit_distribution(&rho, &rho, &shape).unwrap();
        let analytic = analytic_distribution(&rho, &rho, &shape).unwrap();
        for (a, b) in circuit.p().values().iter().zip(analytic.p().values()) {
            assert_close(*a, *b, 1e-12);
        }
        assert_close(circuit.p().values()[0b00], 0.75, 1e-12);
        assert_close(circuit.p().values()[0b11], 0.25, 1e-12);
    }

    #[test]
    fn circuit_matches_analytic_on_random_mixed_pairs() {
        let mut rng = ChaCha12Rng::seed_from_u64(73);
        let shape = SubsystemShape::qubits(3);
        for _ in 0..3 {
            let rho = random_density_matrix(8, 2, &mut rng);
            let sigma = random_density_matrix(8, 2, &mut rng);
            let circuit = circuit_distribution(&rho, &sigma, &shape).unwrap();
            let analytic = analytic_distribution(&rho, &sigma, &shape).unwrap();
            for (a, b) in circuit.p().values().iter().zip(analytic.p().values()) {
                assert_close(*a, *b, 1e-9);
            }
        }
    }

    #[test]
    fn circuit_handles_qutrite_ghz() {
        let (rho, shape) = named_state("ghz:2:3").unwrap();
        let circuit = circuit_distribution(&rho, &rho, &shape).unwrap();
        let analytic = analytic_distribution(&rho, &rho, &shape).unwrap();
        for (a, b) in circuit.p().values().iter().zip(analytic.p().values()) {
            assert_close(*a, *b, 1e-10);
        }
    }

    #[test]
    fn circuit_cap_directs_to_analytic_path() {
        let (rho, shape) = named_state("ghz:3").unwrap();
        let err = circuit_distribution_with_cap(&rho, &rho, &shape, 64).unwrap_err();
        match err {
            Error::SizeCap(msg) => assert!(msg.contains("analytic")),
            other => panic!("expected size cap, got {other:?}"),
        }
    }

    #[test]
    fn shadow_nonnegativity_on_random_pairs() {
        let mut rng = ChaCha12Rng::seed_from_u64(79);
        for n in 2..=4usize {
            let shape = SubsystemShape::qubits(n);
            let dim = 1usize << n;
            for _ in 0..20 {
                let rho = random_density_matrix(dim, 1 + (dim / 2), &mut rng);
                let sigma = random_pure_density(dim, &mut rng);
                let dist = analytic_distribution(&rho, &sigma, &shape).unwrap();
                let min = dist.p().values().iter().cloned().fold(f64::INFINITY, f64::min);
                assert!(min >= -NEGATIVITY_TOL);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_and_counts_sum() {
        let (rho, shape) = named_state("ghz:4").unwrap();
        let dist = analytic_distribution(&rho, &rho, &shape).unwrap();
        let a = sample(&dist, 10_000, 42).unwrap();
        let b = sample(&dist, 10_000, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.iter().sum::<u64>(), 10_000);
        let c = sample(&dist, 10_000, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn single_shot_and_deterministic_distribution() {
        let (rho, shape) = named_state("basis:00").unwrap();
        let dist = analytic_distribution(&rho, &rho, &shape).unwrap();
        let rec = sample(&dist, 1, 7).unwrap();
        assert_eq!(rec.counts.iter().sum::<u64>(), 1);
        let rec = sample(&dist, 1000, 7).unwrap();
        assert_eq!(rec.counts[0], 1000); // p(0) = 1
        let est = estimate(&rec).unwrap();
        assert_eq!(est.method(), EngineMethod::Sampled);
        assert_close(est.p().values()[0], 1.0, 1e-15);
    }

    #[test]
    fn sampled_frequencies_concentrate() {
        let (rho, shape) = named_state("ghz:4").unwrap();
        let dist = analytic_distribution(&rho, &rho, &shape).unwrap();
        let shots = 1_000_000u64;
        let est = estimate(&sample(&dist, shots, 2024).unwrap()).unwrap();
        for mask in SubsetMask::all(4) {
            let p = dist.probability(mask);
            let bound = 5.0 * (p * (1.0 - p) / shots as f64).sqrt();
            assert!(
                (est.probability(mask) - p).abs() <= bound.max(1e-5),
                "mask {mask}: {} vs {p}",
                est.probability(mask)
            );
        }
    }

    #[test]
    fn distribution_json_round_trip_omits_zeros() {
        let (rho, shape) = named_state("ghz:2").unwrap();
        let dist = analytic_distribution(&rho, &rho, &shape).unwrap();
        let text = dist.to_json().unwrap();
        assert!(text.contains("\"00\""));
        assert!(!text.contains("\"01\"")); // zero entry omitted
        let back = SwapDistribution::from_json(&text).unwrap();
        for (a, b) in dist.p().values().iter().zip(back.p().values()) {
            assert_close(*a, *b, 1e-15);
        }
        assert_eq!(back.to_json().unwrap(), text);
    }
}
