//! Golden-value checks: closed-form SWAP-test distributions for the named
//! state pairs, the enumerator tables of the three reference codes, and the
//! reference codes' full outcome distributions.
//!
//! Every check recomputes a quantity with this crate's engines and reports
//! the maximum absolute deviation from hard-coded reference values.

use crate::enumerators::{enumerator_set, rains_direct, shor_laflamme_direct};
use crate::error::{Error, Result};
use crate::stabilizer::named_code;
use crate::states::named_state;
use crate::subset::SubsetMask;
use crate::swap::analytic_distribution;
use crate::tensor::{Operator, SubsystemShape};

/// Outcome of one golden check.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CheckResult {
    pub label: String,
    pub max_err: f64,
    pub tol: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_err < self.tol
    }
}

/// The eight closed-form rows of the named-pair distribution table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairRow {
    ZerosZeros,
    WW,
    GhzGhz,
    ZerosOnes,
    WZeros,
    WOnes,
    GhzZeros,
    GhzW,
}

pub const PAIR_ROWS: [PairRow; 8] = [
    PairRow::ZerosZeros,
    PairRow::WW,
    PairRow::GhzGhz,
    PairRow::ZerosOnes,
    PairRow::WZeros,
    PairRow::WOnes,
    PairRow::GhzZeros,
    PairRow::GhzW,
];

impl PairRow {
    pub fn label(&self) -> &'static str {
        match self {
            PairRow::ZerosZeros => "p(0n,0n)",
            PairRow::WW => "p(W,W)",
            PairRow::GhzGhz => "p(GHZ,GHZ)",
            PairRow::ZerosOnes => "p(0n,1n)",
            PairRow::WZeros => "p(W,0n)",
            PairRow::WOnes => "p(W,1n)",
            PairRow::GhzZeros => "p(GHZ,0n)",
            PairRow::GhzW => "p(GHZ,W)",
        }
    }

    /// The two states of the row.
    pub fn states(&self, n: usize) -> Result<(Operator, Operator, SubsystemShape)> {
        let zeros = || named_state(&format!("basis:{}", "0".repeat(n)));
        let ones = || named_state(&format!("basis:{}", "1".repeat(n)));
        let w = || named_state(&format!("w:{n}"));
        let ghz = || named_state(&format!("ghz:{n}"));
        let ((a, shape), (b, _)) = match self {
            PairRow::ZerosZeros => (zeros()?, zeros()?),
            PairRow::WW => (w()?, w()?),
            PairRow::GhzGhz => (ghz()?, ghz()?),
            PairRow::ZerosOnes => (zeros()?, ones()?),
            PairRow::WZeros => (w()?, zeros()?),
            PairRow::WOnes => (w()?, ones()?),
            PairRow::GhzZeros => (ghz()?, zeros()?),
            PairRow::GhzW => (ghz()?, w()?),
        };
        Ok((a, b, shape))
    }

    /// Closed-form probability at outcome weight `k`.
    pub fn expected(&self, n: usize, k: usize) -> f64 {
        let nf = n as f64;
        let pow = |e: usize| (1u64 << e) as f64;
        match self {
            PairRow::ZerosZeros => {
                if k == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            PairRow::WW => match k {
                0 => (nf + 1.0) / (2.0 * nf),
                2 => 1.0 / (nf * nf),
                _ => 0.0,
            },
            PairRow::GhzGhz => {
                if k == 0 {
                    (pow(n - 1) + 1.0) / pow(n)
                } else if k % 2 == 0 {
                    1.0 / pow(n) // (1 + (-1)^k) / 2^{n+1}
                } else {
                    0.0
                }
            }
            PairRow::ZerosOnes => 1.0 / pow(n),
            PairRow::WZeros => match k {
                0 => 0.5,
                1 => 1.0 / (2.0 * nf),
                _ => 0.0,
            },
            PairRow::WOnes => {
                if k == 0 {
                    1.0 / pow(n - 1)
                } else {
                    (nf - k as f64) / (pow(n - 1) * nf)
                }
            }
            PairRow::GhzZeros => {
                if k == 0 {
                    (pow(n) + 1.0) / (2.0 * pow(n))
                } else {
                    1.0 / (2.0 * pow(n))
                }
            }
            PairRow::GhzW => match k {
                0 => (pow(n.saturating_sub(2)) + 1.0) / pow(n),
                1 => (pow(n.saturating_sub(2)) + nf - 1.0) / (pow(n) * nf),
                _ => (nf - k as f64) / (pow(n) * nf),
            },
        }
    }
}

/// Recompute every named-pair row for the given site counts.
pub fn check_named_pairs(site_counts: &[usize]) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for &n in site_counts {
        for row in PAIR_ROWS {
            let (a, b, shape) = row.states(n)?;
            let dist = analytic_distribution(&a, &b, &shape)?;
            let mut max_err = 0.0f64;
            for mask in SubsetMask::all(n) {
                let expect = row.expected(n, mask.weight());
                max_err = max_err.max((dist.probability(mask) - expect).abs());
            }
            out.push(CheckResult {
                label: format!("{} n={n}", row.label()),
                max_err,
                tol: 1e-10,
            });
        }
    }
    Ok(out)
}

/// Golden enumerator table of one reference code.
pub struct CodeGolden {
    pub name: &'static str,
    pub a: &'static [f64],
    pub b: &'static [f64],
    pub a_prime: &'static [f64],
    pub b_prime: &'static [f64],
}

pub fn code_golden(name: &str) -> Option<CodeGolden> {
    match name {
        "five-qubit" => Some(CodeGolden {
            name: "five-qubit",
            a: &[1.0, 0.0, 0.0, 0.0, 15.0, 0.0],
            b: &[0.5, 0.0, 0.0, 15.0, 7.5, 9.0],
            a_prime: &[1.0, 2.5, 2.5, 1.25, 1.25, 0.5],
            b_prime: &[0.5, 1.25, 1.25, 2.5, 2.5, 1.0],
        }),
        "steane" => Some(CodeGolden {
            name: "steane",
            a: &[1.0, 0.0, 0.0, 0.0, 21.0, 0.0, 42.0, 0.0],
            b: &[0.5, 0.0, 0.0, 10.5, 10.5, 63.0, 21.0, 22.5],
            a_prime: &[1.0, 3.5, 5.25, 4.375, 3.5, 2.625, 1.75, 0.5],
            b_prime: &[0.5, 1.75, 2.625, 3.5, 4.375, 5.25, 3.5, 1.0],
        }),
        "shor" => Some(CodeGolden {
            name: "shor",
            a: &[1.0, 0.0, 9.0, 0.0, 27.0, 0.0, 75.0, 0.0, 144.0, 0.0],
            b: &[0.5, 0.0, 4.5, 19.5, 13.5, 103.5, 37.5, 166.5, 72.0, 94.5],
            a_prime: &[
                1.0,
                4.5,
                11.25,
                147.0 / 8.0,
                171.0 / 8.0,
                18.0,
                93.0 / 8.0,
                45.0 / 8.0,
                2.25,
                0.5,
            ],
            b_prime: &[
                0.5,
                2.25,
                45.0 / 8.0,
                93.0 / 8.0,
                18.0,
                171.0 / 8.0,
                147.0 / 8.0,
                11.25,
                4.5,
                1.0,
            ],
        }),
        _ => None,
    }
}

fn max_abs_diff(got: &[f64], expect: &[f64]) -> f64 {
    got.iter()
        .zip(expect)
        .map(|(g, e)| (g - e).abs())
        .fold(0.0, f64::max)
}

/// Recompute every enumerator family of the three reference codes, by both
/// the distribution path and the definitional oracles, against the golden
/// table.
pub fn check_code_enumerators() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for name in crate::stabilizer::NAMED_CODES {
        let golden = code_golden(name).expect("golden data for named code");
        let code = named_code(name)
            .ok_or_else(|| Error::argument(format!("unknown code {name}")))?
            .code_projector()?;
        let set = enumerator_set(&code.rho, &code.shape, code.dim as f64)?;
        for (family, got, expect) in [
            ("A", &set.a, golden.a),
            ("B", &set.b, golden.b),
            ("A'", &set.a_prime, golden.a_prime),
            ("B'", &set.b_prime, golden.b_prime),
        ] {
            out.push(CheckResult {
                label: format!("{name} {family} (distribution path)"),
                max_err: max_abs_diff(got, expect),
                tol: 1e-9,
            });
        }
        let (da, db) = shor_laflamme_direct(&code.rho, &code.shape)?;
        let (pa, pb) = rains_direct(&code.rho, &code.shape)?;
        for (family, got, expect) in [
            ("A", &da, golden.a),
            ("B", &db, golden.b),
            ("A'", &pa, golden.a_prime),
            ("B'", &pb, golden.b_prime),
        ] {
            out.push(CheckResult {
                label: format!("{name} {family} (direct oracle)"),
                max_err: max_abs_diff(got, expect),
                tol: 1e-9,
            });
        }
        let cross = max_abs_diff(&da, &set.a)
            .max(max_abs_diff(&db, &set.b))
            .max(max_abs_diff(&pa, &set.a_prime))
            .max(max_abs_diff(&pb, &set.b_prime));
        out.push(CheckResult {
            label: format!("{name} path agreement"),
            max_err: cross,
            tol: 1e-9,
        });
    }
    Ok(out)
}

/// Expected self-test probability of the five-qubit code at a given mask.
pub fn five_qubit_expected(mask: SubsetMask) -> f64 {
    match mask.weight() {
        0 => 9.0 / 32.0,
        1 | 2 => 3.0 / 64.0,
        5 => 1.0 / 64.0,
        _ => 0.0,
    }
}

/// The fourteen Steane outcome bitstrings carrying probability 3/256
/// (seven of weight 3 and seven of weight 4).
pub const STEANE_NAMED_MASKS: [&str; 14] = [
    "0010110", "0011001", "0100101", "0101010", "1000011", "1001100", "1110000", "1101001",
    "1100110", "1011010", "1010101", "0111100", "0110011", "0001111",
];

/// Expected self-test probability of the Steane code at a given mask.
pub fn steane_expected(mask: SubsetMask) -> f64 {
    let named = STEANE_NAMED_MASKS
        .iter()
        .any(|bits| SubsetMask::from_bitstring(bits).unwrap() == mask);
    if named {
        return 3.0 / 256.0;
    }
    match mask.weight() {
        0 => 45.0 / 256.0,
        1 | 2 => 3.0 / 128.0,
        7 => 1.0 / 256.0,
        _ => 0.0,
    }
}

/// Expected self-test probability of the Shor code at a given mask, by the
/// block-case rules over the blocks {1,2,3}, {4,5,6}, {7,8,9}.
pub fn shor_expected(mask: SubsetMask) -> f64 {
    let blocks = [
        SubsetMask::from_sites(&[0, 1, 2], 9).unwrap(),
        SubsetMask::from_sites(&[3, 4, 5], 9).unwrap(),
        SubsetMask::from_sites(&[6, 7, 8], 9).unwrap(),
    ];
    let hits: Vec<usize> = blocks
        .iter()
        .map(|b| mask.intersection(b).weight())
        .collect();
    let in_one_block = hits.iter().filter(|&&h| h > 0).count() == 1;
    let full_blocks = hits.iter().filter(|&&h| h == 3).count();
    match mask.weight() {
        0 => 189.0 / 1024.0,
        1 => 1.0 / 64.0,
        2 => {
            if in_one_block {
                25.0 / 1024.0
            } else {
                1.0 / 256.0
            }
        }
        3 => {
            if full_blocks == 1 {
                1.0 / 64.0
            } else if hits == [1, 1, 1] {
                1.0 / 1024.0
            } else {
                0.0
            }
        }
        4 => {
            if full_blocks == 1 {
                1.0 / 256.0
            } else if hits.iter().filter(|&&h| h == 2).count() == 2 {
                5.0 / 1024.0
            } else {
                0.0
            }
        }
        5 => {
            if full_blocks == 1 && hits.iter().filter(|&&h| h == 1).count() == 2 {
                1.0 / 1024.0
            } else {
                0.0
            }
        }
        6 => {
            if full_blocks == 2 {
                1.0 / 256.0
            } else if hits == [2, 2, 2] {
                1.0 / 1024.0
            } else {
                0.0
            }
        }
        7 => {
            if full_blocks == 2 {
                1.0 / 1024.0
            } else {
                0.0
            }
        }
        9 => 1.0 / 1024.0,
        _ => 0.0,
    }
}

/// Recompute the three reference codes' full self-test distributions against
/// the expected per-mask values.
pub fn check_reference_distributions() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let cases: [(&str, fn(SubsetMask) -> f64); 3] = [
        ("five-qubit", five_qubit_expected),
        ("steane", steane_expected),
        ("shor", shor_expected),
    ];
    for (name, expected) in cases {
        let code = named_code(name)
            .ok_or_else(|| Error::argument(format!("unknown code {name}")))?
            .code_projector()?;
        let dist = analytic_distribution(&code.rho, &code.rho, &code.shape)?;
        let mut max_err = 0.0f64;
        for mask in SubsetMask::all(code.shape.n()) {
            max_err = max_err.max((dist.probability(mask) - expected(mask)).abs());
        }
        out.push(CheckResult {
            label: format!("{name} outcome distribution"),
            max_err,
            tol: 1e-10,
        });
    }
    Ok(out)
}

/// Run the full battery: named pair rows for n in 2..=6, the code enumerator
/// tables, and the reference distributions.
pub fn run_all() -> Result<Vec<CheckResult>> {
    let mut out = check_named_pairs(&[2, 3, 4, 5, 6])?;
    out.extend(check_code_enumerators()?);
    out.extend(check_reference_distributions()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_rows_are_normalized() {
        for n in 2..=6usize {
            for row in PAIR_ROWS {
                let total: f64 = SubsetMask::all(n)
                    .map(|m| row.expected(n, m.weight()))
                    .sum();
                assert!(
                    (total - 1.0).abs() < 1e-12,
                    "{} n={n} sums to {total}",
                    row.label()
                );
            }
        }
    }

    #[test]
    fn reference_distributions_are_normalized() {
        let five: f64 = SubsetMask::all(5).map(five_qubit_expected).sum();
        assert!((five - 1.0).abs() < 1e-12);
        let steane: f64 = SubsetMask::all(7).map(steane_expected).sum();
        assert!((steane - 1.0).abs() < 1e-12);
        let shor: f64 = SubsetMask::all(9).map(shor_expected).sum();
        assert!((shor - 1.0).abs() < 1e-12);
    }

    #[test]
    fn steane_named_masks_have_weights_three_and_four() {
        let mut threes = 0;
        let mut fours = 0;
        for bits in STEANE_NAMED_MASKS {
            match SubsetMask::from_bitstring(bits).unwrap().weight() {
                3 => threes += 1,
                4 => fours += 1,
                w => panic!("unexpected weight {w}"),
            }
        }
        assert_eq!((threes, fours), (7, 7));
    }

    #[test]
    fn named_pair_checks_pass_for_small_n() {
        for check in check_named_pairs(&[2, 3]).unwrap() {
            assert!(check.passed(), "{}: err {}", check.label, check.max_err);
        }
    }

    #[test]
    fn five_qubit_distribution_check_passes() {
        let results = check_reference_distributions().unwrap();
        let five = results.iter().find(|c| c.label.contains("five")).unwrap();
        assert!(five.passed(), "err {}", five.max_err);
    }
}
