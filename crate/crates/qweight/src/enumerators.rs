//! The five weight-enumerator families and their transforms.
//!
//! For a state `rho` (typically `rho_Q = Pi/K` of a code) the families are:
//!
//! - `A_j`, `B_j` — unnormalized Pauli-correlation sums at weight `j`:
//!   `A_j = sum_{wt(E)=j} Tr(E rho) Tr(E^dag rho)`,
//!   `B_j = sum_{wt(E)=j} Tr(E rho E^dag rho)`.
//! - `A'_j`, `B'_j` — sums of reduced-state purities over `j`-subsets and
//!   their complements.
//! - `s_T` — the normalized shadow enumerator, which equals the SWAP-test
//!   outcome probability `p(z)` at `supp(z) = T^c`; `s_j` sums it over
//!   `|T| = j`.
//!
//! The distribution path computes `A'` as signed subset sums of the SWAP
//! probabilities and `A`, `B` from `A'`, `B'` by the quantum MacWilliams
//! binomial transform. Independent definitional oracles (`rains_direct`,
//! `shor_laflamme_direct`, `shadow_direct`) evaluate the defining sums
//! without touching the distribution, and the test suite holds the two
//! routes together.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stabilizer::ENUMERATION_SITE_CAP;
use crate::subset::{SubsetMask, SubsetVector};
use crate::swap::{analytic_distribution, overlaps_from_distribution, SwapDistribution};
use crate::tensor::{
    embed_with_identity, partial_trace, purity, require_density_matrix, Operator, SubsystemShape,
};

/// The five enumerator families plus code metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumeratorSet {
    pub n: usize,
    pub d: usize,
    #[serde(rename = "K")]
    pub code_dim: f64,
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    #[serde(rename = "B")]
    pub b: Vec<f64>,
    #[serde(rename = "A_prime")]
    pub a_prime: Vec<f64>,
    #[serde(rename = "B_prime")]
    pub b_prime: Vec<f64>,
    #[serde(rename = "s")]
    pub shadow: Vec<f64>,
}

impl EnumeratorSet {
    pub fn to_json(&self) -> Result<String> {
        crate::json::to_canonical_string(self)
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial fits in u64 at this scale")
}

/// Shadow enumerator `s_T` read off a SWAP-test distribution: the probability
/// at the complement mask.
pub fn shadow_enumerator(dist: &SwapDistribution, t: SubsetMask) -> f64 {
    debug_assert_eq!(t.n(), dist.n());
    dist.probability(t.complement())
}

/// Aggregated shadow weights `s_j = sum_{|T|=j} s_T`.
pub fn shadow_weight_distribution(dist: &SwapDistribution) -> Vec<f64> {
    let n = dist.n();
    (0..=n).map(|j| dist.p().weight_class_sum(n - j)).collect()
}

/// Rains unitary enumerators from a self-test distribution:
/// `A'_j = sum_{wt(t)=j} sum_z (-1)^{z.t} p(z)`, `B'_j = A'_{n-j}`.
pub fn rains_from_distribution(dist: &SwapDistribution) -> (Vec<f64>, Vec<f64>) {
    let overlaps = overlaps_from_distribution(dist);
    rains_from_overlaps(&overlaps)
}

fn rains_from_overlaps(overlaps: &SubsetVector) -> (Vec<f64>, Vec<f64>) {
    let n = overlaps.n();
    let a_prime: Vec<f64> = (0..=n).map(|j| overlaps.weight_class_sum(j)).collect();
    let b_prime: Vec<f64> = (0..=n).map(|j| a_prime[n - j]).collect();
    (a_prime, b_prime)
}

/// Rains unitary enumerators evaluated as direct purity sums over subsets.
pub fn rains_direct(rho: &Operator, shape: &SubsystemShape) -> Result<(Vec<f64>, Vec<f64>)> {
    require_density_matrix(rho, shape)?;
    let n = shape.n();
    let purities = SubsetVector::from_values(
        n,
        SubsetMask::all(n)
            .map(|mask| partial_trace(rho, shape, mask).map(|r| purity(&r)))
            .collect::<Result<Vec<f64>>>()?,
    )?;
    Ok(rains_from_overlaps(&purities))
}

/// Quantum MacWilliams transform from the unitary enumerators:
/// `A_j = sum_{k<=j} (-1)^{j-k} C(n-k, j-k) d^k A'_k` and likewise for `B`.
pub fn shor_laflamme_from_rains(
    a_prime: &[f64],
    b_prime: &[f64],
    d: usize,
    n: usize,
) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a_prime.len(), n + 1);
    assert_eq!(b_prime.len(), n + 1);
    let transform = |src: &[f64]| -> Vec<f64> {
        (0..=n)
            .map(|j| {
                (0..=j)
                    .map(|k| {
                        let sign = if (j - k) % 2 == 0 { 1.0 } else { -1.0 };
                        sign * binomial(n - k, j - k) as f64 * (d as f64).powi(k as i32) * src[k]
                    })
                    .sum()
            })
            .collect()
    };
    (transform(a_prime), transform(b_prime))
}

/// Expectation values `Tr(E rho)` for all `4^n` qubit Pauli words, indexed by
/// [`crate::pauli::PauliString::word_index`].
///
/// Computed by contracting one site at a time against the single-site Pauli
/// basis, `O(n 4^n)` total.
pub fn pauli_expectations(rho: &Operator, shape: &SubsystemShape) -> Result<Vec<Complex64>> {
    if let Some(d) = shape.local_dims().iter().find(|&&d| d != 2) {
        return Err(Error::UnsupportedDimension(*d));
    }
    let n = shape.n();
    if n > ENUMERATION_SITE_CAP {
        return Err(Error::size_cap(format!(
            "Pauli-basis enumeration capped at {ENUMERATION_SITE_CAP} sites, got {n}"
        )));
    }
    let dim = 1usize << n;
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::shape(format!(
            "operator is {}x{}, expected {dim}x{dim}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    // spread(x) doubles the gap between bits: bit j of x -> bit 2j.
    let mut spread = vec![0usize; dim];
    for x in 1..dim {
        spread[x] = (spread[x >> 1] << 2) | (x & 1);
    }
    // u[2*spread(r) + spread(c)] = rho[c][r]; the per-site base-4 digit is
    // then (2 r_i + c_i) and site transforms act on aligned 4-blocks.
    let mut u = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            u[2 * spread[r] + spread[c]] = rho[(c, r)];
        }
    }
    let i = Complex64::new(0.0, 1.0);
    for site in 0..n {
        let stride = 1usize << (2 * (n - 1 - site));
        let block = stride << 2;
        let mut base = 0;
        while base < u.len() {
            for low in base..base + stride {
                let u0 = u[low];
                let u1 = u[low + stride];
                let u2 = u[low + 2 * stride];
                let u3 = u[low + 3 * stride];
                u[low] = u0 + u3; // Tr(I .)
                u[low + stride] = u1 + u2; // Tr(X .)
                u[low + 2 * stride] = i * (u2 - u1); // Tr(Y .)
                u[low + 3 * stride] = u0 - u3; // Tr(Z .)
            }
            base += block;
        }
    }
    Ok(u)
}

/// Weight of each base-4 word index (number of nonzero digits).
fn word_weights(n: usize) -> Vec<u8> {
    let len = 1usize << (2 * n);
    let mut wt = vec![0u8; len];
    for idx in 1..len {
        wt[idx] = wt[idx >> 2] + u8::from(idx & 3 != 0);
    }
    wt
}

/// Shor-Laflamme enumerators evaluated directly in the Pauli basis.
///
/// `A_j` sums `|Tr(E rho)|^2` over weight-`j` words. Each `B_j` term uses the
/// Pauli-conjugation identity `Tr(E rho E rho) = 2^-n sum_F chi(E,F) Tr(F rho)^2`,
/// where `chi = -1` iff the words anticommute; since `chi` factorizes per
/// site, all `4^n` terms come out of one more `O(n 4^n)` pass. Qubits only;
/// capped at [`ENUMERATION_SITE_CAP`] sites.
pub fn shor_laflamme_direct(
    rho: &Operator,
    shape: &SubsystemShape,
) -> Result<(Vec<f64>, Vec<f64>)> {
    require_density_matrix(rho, shape)?;
    let n = shape.n();
    let coeffs = pauli_expectations(rho, shape)?;
    let wt = word_weights(n);
    let mut a = vec![0.0f64; n + 1];
    let mut sq = vec![0.0f64; coeffs.len()];
    for (idx, c) in coeffs.iter().enumerate() {
        let v = c.norm_sqr();
        a[wt[idx] as usize] += v;
        sq[idx] = v;
    }
    // Per-site commutation-sign transform of the squared coefficients.
    for site in 0..n {
        let stride = 1usize << (2 * (n - 1 - site));
        let block = stride << 2;
        let mut base = 0;
        while base < sq.len() {
            for low in base..base + stride {
                let v0 = sq[low];
                let v1 = sq[low + stride];
                let v2 = sq[low + 2 * stride];
                let v3 = sq[low + 3 * stride];
                sq[low] = v0 + v1 + v2 + v3;
                sq[low + stride] = v0 + v1 - v2 - v3;
                sq[low + 2 * stride] = v0 - v1 + v2 - v3;
                sq[low + 3 * stride] = v0 - v1 - v2 + v3;
            }
            base += block;
        }
    }
    let scale = 1.0 / (1u64 << n) as f64;
    let mut b = vec![0.0f64; n + 1];
    for (idx, v) in sq.iter().enumerate() {
        b[wt[idx] as usize] += v * scale;
    }
    Ok((a, b))
}

/// State inversion `rho -> Y^{x n} conj(rho) Y^{x n}` evaluated entrywise:
/// `out[r][c] = (-1)^{|r|+|c|} conj(rho[~r][~c])`.
pub fn state_inversion(rho: &Operator, shape: &SubsystemShape) -> Result<Operator> {
    require_qubits(shape)?;
    let n = shape.n();
    let dim = 1usize << n;
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::shape(format!(
            "operator is {}x{}, expected {dim}x{dim}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let full = dim - 1;
    Ok(Operator::from_fn(dim, dim, |r, c| {
        let v = rho[(full ^ r, full ^ c)].conj();
        if (r.count_ones() + c.count_ones()) % 2 == 0 {
            v
        } else {
            -v
        }
    }))
}

/// State inversion as the signed subset sum
/// `sum_S (-1)^{|S|} rho_S (x) I_{S^c}`; agrees with [`state_inversion`].
pub fn state_inversion_subset_sum(rho: &Operator, shape: &SubsystemShape) -> Result<Operator> {
    require_qubits(shape)?;
    let n = shape.n();
    let dim = shape.total_dim();
    let mut out = Operator::zeros(dim, dim);
    for mask in SubsetMask::all(n) {
        let reduced = partial_trace(rho, shape, mask)?;
        let embedded = embed_with_identity(&reduced, shape, mask)?;
        if mask.weight() % 2 == 0 {
            out += embedded;
        } else {
            out -= embedded;
        }
    }
    Ok(out)
}

fn require_qubits(shape: &SubsystemShape) -> Result<()> {
    match shape.local_dims().iter().find(|&&d| d != 2) {
        Some(&d) => Err(Error::UnsupportedDimension(d)),
        None => Ok(()),
    }
}

/// Sites above this count make the `3^|T| * 4^n` shadow sum unreasonable.
pub const SHADOW_DIRECT_SITE_CAP: usize = 8;

/// Shadow enumerator from its Pauli-basis definition:
/// `s_T(rho, rho) = 2^-n sum_{supp(E)=T} Tr(rho E rho~ E)`.
pub fn shadow_direct(rho: &Operator, shape: &SubsystemShape, t: SubsetMask) -> Result<f64> {
    let inverted = state_inversion(rho, shape)?;
    shadow_direct_with_inversion(rho, &inverted, shape, t)
}

/// Same as [`shadow_direct`] but with a caller-supplied state inversion, so
/// both inversion implementations can drive the identical sum.
pub fn shadow_direct_with_inversion(
    rho: &Operator,
    inverted: &Operator,
    shape: &SubsystemShape,
    t: SubsetMask,
) -> Result<f64> {
    require_qubits(shape)?;
    let n = shape.n();
    if n > SHADOW_DIRECT_SITE_CAP {
        return Err(Error::size_cap(format!(
            "direct shadow sum capped at {SHADOW_DIRECT_SITE_CAP} sites, got {n}"
        )));
    }
    let dim = 1usize << n;
    let sites = t.sites();
    let mut acc = Complex64::new(0.0, 0.0);
    // Tr(rho E rho~ E) = base^2 sum_{a,b} sgn(a^flip) sgn(b)
    //                      rho[a][b] rho~[b^flip][a^flip],
    // with E[r][r^flip] = base * sgn(r) from the row action. The transpose
    // puts the a-indexed factor of rho~ in column order.
    let rho_cols = rho.as_slice();
    let inv_t = inverted.transpose();
    let inv_rows = inv_t.as_slice();
    let mut sgn_f = vec![1.0f64; dim];
    // Words with support exactly T: each member site ranges over {X, Y, Z}.
    let choices = 3usize.pow(sites.len() as u32);
    let mut ops = vec![crate::pauli::PauliOp::I; n];
    for assignment in 0..choices {
        let mut rem = assignment;
        for &s in &sites {
            ops[s] = crate::pauli::PauliOp::from_index(1 + rem % 3);
            rem /= 3;
        }
        let word = crate::pauli::PauliString::new(ops.clone(), 0)?;
        let act = word.row_action();
        let flip = act.flip;
        for (a, slot) in sgn_f.iter_mut().enumerate() {
            *slot = if ((a ^ flip) & act.sign).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
        }
        let mut term = Complex64::new(0.0, 0.0);
        for b in 0..dim {
            let rho_col = &rho_cols[b * dim..(b + 1) * dim];
            let inv_row = &inv_rows[(b ^ flip) * dim..((b ^ flip) + 1) * dim];
            let mut partial = Complex64::new(0.0, 0.0);
            for a in 0..dim {
                partial += rho_col[a] * inv_row[(a ^ flip) & (dim - 1)] * sgn_f[a];
            }
            let sb = if (b & act.sign).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            term += partial * sb;
        }
        acc += term * act.base * act.base;
    }
    if acc.im.abs() > 1e-9 {
        return Err(Error::Numeric(format!(
            "shadow sum has imaginary part {:.3e}",
            acc.im
        )));
    }
    Ok(acc.re / (1u64 << n) as f64)
}

/// Assemble all five families for a self-test of `rho` with code dimension
/// `code_dim` via the SWAP-test distribution path.
pub fn enumerator_set(
    rho: &Operator,
    shape: &SubsystemShape,
    code_dim: f64,
) -> Result<EnumeratorSet> {
    let d = shape
        .uniform_dim()
        .ok_or_else(|| Error::argument("enumerators need a uniform local dimension"))?;
    let dist = analytic_distribution(rho, rho, shape)?;
    let set = enumerator_set_from_distribution(&dist, d, code_dim)?;
    // On the analytic path every family is a sum of squares, purities, or
    // probabilities; a genuinely negative entry means a bug. Sampled
    // distributions go through enumerator_set_from_distribution directly,
    // where estimator noise makes small negative entries legitimate.
    for (family, values) in [
        ("A", &set.a),
        ("B", &set.b),
        ("A'", &set.a_prime),
        ("B'", &set.b_prime),
        ("s", &set.shadow),
    ] {
        if let Some(bad) = values.iter().find(|&&x| x < -1e-9) {
            return Err(Error::Numeric(format!(
                "negative {family} entry {bad:.3e} on the analytic path"
            )));
        }
    }
    Ok(set)
}

/// Assemble the families from an existing self-test distribution.
pub fn enumerator_set_from_distribution(
    dist: &SwapDistribution,
    d: usize,
    code_dim: f64,
) -> Result<EnumeratorSet> {
    let n = dist.n();
    let (a_prime, b_prime) = rains_from_distribution(dist);
    let (a, b) = shor_laflamme_from_rains(&a_prime, &b_prime, d, n);
    Ok(EnumeratorSet {
        n,
        d,
        code_dim,
        a,
        b,
        a_prime,
        b_prime,
        shadow: shadow_weight_distribution(dist),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;
    use crate::random::{random_density_matrix, random_pure_density};
    use crate::stabilizer::{named_code, weight_distribution};
    use crate::states::named_state;
    use crate::tensor::trace_product;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn assert_vec_close(got: &[f64], expect: &[f64], tol: f64) {
        assert_eq!(got.len(), expect.len());
        for (g, e) in got.iter().zip(expect) {
            assert!((g - e).abs() < tol, "{got:?} != {expect:?}");
        }
    }

    /// Definitional oracle on dense matrices, viable for small n only.
    fn shor_laflamme_naive(rho: &Operator, n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut a = vec![0.0f64; n + 1];
        let mut b = vec![0.0f64; n + 1];
        for idx in 0..(1usize << (2 * n)) {
            let word = PauliString::from_word_index(idx, n);
            let e = word.to_matrix().unwrap();
            let w = word.weight();
            let c = trace_product(&e, rho);
            a[w] += c.norm_sqr();
            let conj = &e * rho * &e;
            b[w] += trace_product(&conj, rho).re;
        }
        (a, b)
    }

    #[test]
    fn direct_oracle_matches_naive_on_random_states() {
        let mut rng = ChaCha12Rng::seed_from_u64(97);
        for n in 1..=3usize {
            let shape = SubsystemShape::qubits(n);
            let dim = 1usize << n;
            for _ in 0..4 {
                let rho = random_density_matrix(dim, dim.min(3), &mut rng);
                let (a, b) = shor_laflamme_direct(&rho, &shape).unwrap();
                let (na, nb) = shor_laflamme_naive(&rho, n);
                assert_vec_close(&a, &na, 1e-10);
                assert_vec_close(&b, &nb, 1e-10);
            }
        }
    }

    #[test]
    fn single_qubit_basis_state_enumerators() {
        let (rho, shape) = named_state("basis:0").unwrap();
        let (a, _) = shor_laflamme_direct(&rho, &shape).unwrap();
        assert_vec_close(&a, &[1.0, 1.0], 1e-12);
    }

    #[test]
    fn five_qubit_code_both_paths_match_golden_values() {
        let code = named_code("five-qubit").unwrap().code_projector().unwrap();
        let set = enumerator_set(&code.rho, &code.shape, code.dim as f64).unwrap();
        assert_vec_close(&set.a_prime, &[1.0, 2.5, 2.5, 1.25, 1.25, 0.5], 1e-10);
        assert_vec_close(&set.b_prime, &[0.5, 1.25, 1.25, 2.5, 2.5, 1.0], 1e-10);
        assert_vec_close(&set.a, &[1.0, 0.0, 0.0, 0.0, 15.0, 0.0], 1e-9);
        assert_vec_close(&set.b, &[0.5, 0.0, 0.0, 15.0, 7.5, 9.0], 1e-9);

        let (da, db) = shor_laflamme_direct(&code.rho, &code.shape).unwrap();
        assert_vec_close(&da, &set.a, 1e-9);
        assert_vec_close(&db, &set.b, 1e-9);
        let (pa, pb) = rains_direct(&code.rho, &code.shape).unwrap();
        assert_vec_close(&pa, &set.a_prime, 1e-10);
        assert_vec_close(&pb, &set.b_prime, 1e-10);
    }

    #[test]
    fn ghz4_rains_enumerators() {
        let (rho, shape) = named_state("ghz:4").unwrap();
        let set = enumerator_set(&rho, &shape, 1.0).unwrap();
        assert_vec_close(&set.a_prime, &[1.0, 2.0, 3.0, 2.0, 1.0], 1e-10);
        assert_vec_close(&set.shadow, &[1.0 / 16.0, 0.0, 6.0 / 16.0, 0.0, 9.0 / 16.0], 1e-10);
    }

    #[test]
    fn pure_product_state_purities_are_binomial() {
        let (rho, shape) = named_state("basis:0000").unwrap();
        let (a_prime, _) = rains_direct(&rho, &shape).unwrap();
        let expect: Vec<f64> = (0..=4).map(|j| binomial(4, j) as f64).collect();
        assert_vec_close(&a_prime, &expect, 1e-12);
    }

    #[test]
    fn maximally_mixed_state_enumerators() {
        let n = 2;
        let shape = SubsystemShape::qubits(n);
        let dim = 1usize << n;
        let rho = crate::tensor::identity(dim).map(|z| z / dim as f64);
        let (a_prime, b_prime) = rains_direct(&rho, &shape).unwrap();
        let expect: Vec<f64> = (0..=n)
            .map(|j| binomial(n, j) as f64 / 2f64.powi(j as i32))
            .collect();
        assert_vec_close(&a_prime, &expect, 1e-12);
        // Only the identity word contributes to A.
        let (a, _) = shor_laflamme_from_rains(&a_prime, &b_prime, 2, n);
        let mut expect_a = vec![0.0; n + 1];
        expect_a[0] = 1.0;
        assert_vec_close(&a, &expect_a, 1e-12);
    }

    #[test]
    fn macwilliams_consistency_on_random_states() {
        let mut rng = ChaCha12Rng::seed_from_u64(101);
        let shape = SubsystemShape::qubits(3);
        for _ in 0..5 {
            let rho = random_density_matrix(8, 2, &mut rng);
            let (a_prime, b_prime) = rains_direct(&rho, &shape).unwrap();
            let (a, b) = shor_laflamme_from_rains(&a_prime, &b_prime, 2, 3);
            let (da, db) = shor_laflamme_direct(&rho, &shape).unwrap();
            assert_vec_close(&a, &da, 1e-9);
            assert_vec_close(&b, &db, 1e-9);
        }
    }

    #[test]
    fn state_inversion_flips_basis_state() {
        let (rho, shape) = named_state("basis:0").unwrap();
        let inv = state_inversion(&rho, &shape).unwrap();
        assert!((inv[(1, 1)].re - 1.0).abs() < 1e-15);
        assert!(inv[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn state_inversion_implementations_agree() {
        let mut rng = ChaCha12Rng::seed_from_u64(103);
        for n in 1..=4usize {
            let shape = SubsystemShape::qubits(n);
            let rho = random_density_matrix(1 << n, 2, &mut rng);
            let a = state_inversion(&rho, &shape).unwrap();
            let b = state_inversion_subset_sum(&rho, &shape).unwrap();
            assert!((&a - &b).iter().all(|z| z.norm() < 1e-10));
            assert!(crate::tensor::hermiticity_error(&a) < 1e-12);
        }
    }

    #[test]
    fn singlet_is_invariant_under_inversion() {
        let mut v = nalgebra::DVector::zeros(4);
        v[0b01] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[0b10] = Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let rho = crate::states::pure_density(&v);
        let inv = state_inversion(&rho, &SubsystemShape::qubits(2)).unwrap();
        assert!((&inv - &rho).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn shadow_direct_single_qubit_example() {
        // s_emptyset(|0><0|) = Tr(rho rho~)/2 = 0 since rho~ = |1><1|.
        let (rho, shape) = named_state("basis:0").unwrap();
        let s = shadow_direct(&rho, &shape, SubsetMask::empty(1)).unwrap();
        assert!(s.abs() < 1e-12);
    }

    #[test]
    fn shadow_direct_matches_distribution_path() {
        let mut rng = ChaCha12Rng::seed_from_u64(107);
        for n in 1..=3usize {
            let shape = SubsystemShape::qubits(n);
            let dim = 1usize << n;
            for trial in 0..3 {
                let rho = if trial == 0 {
                    random_pure_density(dim, &mut rng)
                } else {
                    random_density_matrix(dim, 2, &mut rng)
                };
                let dist = analytic_distribution(&rho, &rho, &shape).unwrap();
                let sub = state_inversion_subset_sum(&rho, &shape).unwrap();
                for t in SubsetMask::all(n) {
                    let via_dist = shadow_enumerator(&dist, t);
                    let via_def = shadow_direct(&rho, &shape, t).unwrap();
                    assert!((via_dist - via_def).abs() < 1e-9, "T = {t}");
                    let via_sub =
                        shadow_direct_with_inversion(&rho, &sub, &shape, t).unwrap();
                    assert!((via_dist - via_sub).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn ghz2_shadow_matches_both_paths() {
        let (rho, shape) = named_state("ghz:2").unwrap();
        let dist = analytic_distribution(&rho, &rho, &shape).unwrap();
        for t in SubsetMask::all(2) {
            let via_def = shadow_direct(&rho, &shape, t).unwrap();
            assert!((shadow_enumerator(&dist, t) - via_def).abs() < 1e-12);
        }
    }

    #[test]
    fn stabilizer_shadow_counts_match_brute_force() {
        // 2^{n+k} s_j equals the weight-j count in the shadow set S(G).
        for (name, k) in [("five-qubit", 1usize)] {
            let group = named_code(name).unwrap();
            let n = group.n();
            let code = group.code_projector().unwrap();
            let dist = analytic_distribution(&code.rho, &code.rho, &code.shape).unwrap();
            let s = shadow_weight_distribution(&dist);
            let counts = weight_distribution(&group.shadow_set().unwrap(), n);
            let scale = (1u64 << (n + k)) as f64;
            for j in 0..=n {
                assert!(
                    (s[j] * scale - counts[j] as f64).abs() < 1e-6,
                    "weight {j}: {} vs {}",
                    s[j] * scale,
                    counts[j]
                );
            }
        }
    }

    #[test]
    fn odd_generator_shadow_counts_match() {
        // G = {I, Y}: shadow = {X, Z}, and 2^{n+k} s = (0, 2).
        let group = crate::stabilizer::StabilizerGroup::new(vec![PauliString::parse("Y", 1)
            .unwrap()])
        .unwrap();
        let code = group.code_projector().unwrap();
        let dist = analytic_distribution(&code.rho, &code.rho, &code.shape).unwrap();
        let s = shadow_weight_distribution(&dist);
        let counts = weight_distribution(&group.shadow_set().unwrap(), 1);
        let scale = 2f64;
        for j in 0..=1 {
            assert!((s[j] * scale - counts[j] as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn stabilizer_counting_invariants_five_qubit() {
        let group = named_code("five-qubit").unwrap();
        let code = group.code_projector().unwrap();
        let set = enumerator_set(&code.rho, &code.shape, code.dim as f64).unwrap();
        let a_counts = weight_distribution(&group.group_words(), 5);
        let c_counts = weight_distribution(&group.centralizer().unwrap(), 5);
        for j in 0..=5 {
            assert!((set.a[j] - a_counts[j] as f64).abs() < 1e-6);
            assert!((set.code_dim * set.b[j] - c_counts[j] as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn enumerator_set_invariants() {
        let code = named_code("steane").unwrap().code_projector().unwrap();
        let set = enumerator_set(&code.rho, &code.shape, code.dim as f64).unwrap();
        assert!((set.a[0] - 1.0).abs() < 1e-10);
        assert!((set.b[0] - 1.0 / set.code_dim).abs() < 1e-10);
        assert!((set.a_prime[0] - 1.0).abs() < 1e-10);
        assert!((set.b_prime[set.n] - 1.0).abs() < 1e-10);
        assert!((set.a_prime[set.n] - 1.0 / set.code_dim).abs() < 1e-10);
        for j in 0..=set.n {
            assert_eq!(set.b_prime[j], set.a_prime[set.n - j]);
        }
        assert!(set
            .a
            .iter()
            .chain(&set.b)
            .chain(&set.shadow)
            .all(|&x| x > -1e-9));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(9, 4), 126);
        assert_eq!(binomial(9, 10), 0);
        assert_eq!(binomial(16, 8), 12870);
    }

    #[test]
    fn enumerator_json_shape() {
        let code = named_code("five-qubit").unwrap().code_projector().unwrap();
        let set = enumerator_set(&code.rho, &code.shape, code.dim as f64).unwrap();
        let text = set.to_json().unwrap();
        assert!(text.contains("\"A_prime\""));
        assert!(text.contains("\"K\""));
        let back: EnumeratorSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back.n, 5);
    }
}
