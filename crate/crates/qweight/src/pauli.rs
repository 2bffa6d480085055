//! Symbolic n-site Pauli words with exact phase tracking.
//!
//! A [`PauliString`] is a word over `{I, X, Y, Z}` together with a phase
//! `i^lambda`, `lambda` in `Z_4`. Multiplication tracks the phase exponent as
//! an integer, so group computations (stabilizer closures, centralizers) are
//! exact. Site 0 is the leftmost letter of the printed form, e.g. `"XZZXI"`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::subset::SubsetMask;
use crate::tensor::Operator;

/// Single-site Pauli operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum PauliOp {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl PauliOp {
    pub fn from_char(ch: char) -> Option<PauliOp> {
        match ch {
            'I' => Some(PauliOp::I),
            'X' => Some(PauliOp::X),
            'Y' => Some(PauliOp::Y),
            'Z' => Some(PauliOp::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            PauliOp::I => 'I',
            PauliOp::X => 'X',
            PauliOp::Y => 'Y',
            PauliOp::Z => 'Z',
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(idx: usize) -> PauliOp {
        match idx & 3 {
            0 => PauliOp::I,
            1 => PauliOp::X,
            2 => PauliOp::Y,
            _ => PauliOp::Z,
        }
    }

    pub fn is_identity(self) -> bool {
        self == PauliOp::I
    }

    /// The 2x2 matrix of this operator.
    pub fn matrix(self) -> Operator {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            PauliOp::I => DMatrix::from_row_slice(2, 2, &[one, z, z, one]),
            PauliOp::X => DMatrix::from_row_slice(2, 2, &[z, one, one, z]),
            PauliOp::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
            PauliOp::Z => DMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
        }
    }
}

/// `a * b = i^phase_delta * c` for single-site Paulis; returns `(c, phase_delta)`.
fn mul_single(a: PauliOp, b: PauliOp) -> (PauliOp, u8) {
    use PauliOp::*;
    match (a, b) {
        (I, x) => (x, 0),
        (x, I) => (x, 0),
        (x, y) if x == y => (I, 0),
        (X, Y) => (Z, 1),
        (Y, Z) => (X, 1),
        (Z, X) => (Y, 1),
        (Y, X) => (Z, 3),
        (Z, Y) => (X, 3),
        (X, Z) => (Y, 3),
        _ => unreachable!(),
    }
}

/// An n-site Pauli word with phase `i^phase_pow`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    ops: Vec<PauliOp>,
    phase_pow: u8,
}

impl PauliString {
    pub fn new(ops: Vec<PauliOp>, phase_pow: u8) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::argument("Pauli string needs at least one site"));
        }
        Ok(PauliString {
            ops,
            phase_pow: phase_pow & 3,
        })
    }

    pub fn identity(n: usize) -> Self {
        PauliString {
            ops: vec![PauliOp::I; n],
            phase_pow: 0,
        }
    }

    /// Parse an optional sign prefix (`+`, `-`, `i`, `+i`, `-i`) followed by
    /// exactly `expected_n` letters from `{I, X, Y, Z}`.
    pub fn parse(text: &str, expected_n: usize) -> Result<Self> {
        let (phase_pow, rest, offset) = strip_sign_prefix(text);
        if rest.len() != expected_n {
            return Err(Error::parse(
                offset,
                format!("expected {expected_n} Pauli letters, found {}", rest.len()),
            ));
        }
        let mut ops = Vec::with_capacity(expected_n);
        for (k, ch) in rest.chars().enumerate() {
            match PauliOp::from_char(ch) {
                Some(op) => ops.push(op),
                None => {
                    return Err(Error::parse(
                        offset + k,
                        format!("expected one of I, X, Y, Z, found {ch:?}"),
                    ));
                }
            }
        }
        PauliString::new(ops, phase_pow)
    }

    /// Parse with the length inferred from the text.
    pub fn parse_any_len(text: &str) -> Result<Self> {
        let (_, rest, _) = strip_sign_prefix(text);
        PauliString::parse(text, rest.len())
    }

    pub fn n(&self) -> usize {
        self.ops.len()
    }

    pub fn ops(&self) -> &[PauliOp] {
        &self.ops
    }

    pub fn op(&self, site: usize) -> PauliOp {
        self.ops[site]
    }

    pub fn phase_pow(&self) -> u8 {
        self.phase_pow
    }

    pub fn phase(&self) -> Complex64 {
        match self.phase_pow {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        self.ops.iter().filter(|op| !op.is_identity()).count()
    }

    /// Mask of non-identity sites.
    pub fn support(&self) -> SubsetMask {
        let sites: Vec<usize> = (0..self.n())
            .filter(|&s| !self.ops[s].is_identity())
            .collect();
        SubsetMask::from_sites(&sites, self.n()).expect("sites in range")
    }

    pub fn is_identity_word(&self) -> bool {
        self.ops.iter().all(|op| op.is_identity())
    }

    /// The phase-free image of the word (the group homomorphism that drops
    /// the `i^lambda` factor).
    pub fn phase_free(&self) -> PauliString {
        PauliString {
            ops: self.ops.clone(),
            phase_pow: 0,
        }
    }

    /// Whether the two words commute (an even number of sites hold distinct
    /// non-identity operators).
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        debug_assert_eq!(self.n(), other.n());
        let clashes = self
            .ops
            .iter()
            .zip(&other.ops)
            .filter(|(a, b)| !a.is_identity() && !b.is_identity() && a != b)
            .count();
        clashes % 2 == 0
    }

    /// Product with exact phase tracking.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        debug_assert_eq!(self.n(), other.n());
        let mut phase = self.phase_pow + other.phase_pow;
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(&a, &b)| {
                let (c, delta) = mul_single(a, b);
                phase += delta;
                c
            })
            .collect();
        PauliString {
            ops,
            phase_pow: phase & 3,
        }
    }

    /// Base-4 encoding of the word with site 0 as the most significant digit
    /// (digit values follow [`PauliOp::index`]). Phase is not encoded.
    pub fn word_index(&self) -> usize {
        self.ops.iter().fold(0, |acc, op| (acc << 2) | op.index())
    }

    pub fn from_word_index(index: usize, n: usize) -> PauliString {
        let ops = (0..n)
            .map(|s| PauliOp::from_index(index >> (2 * (n - 1 - s))))
            .collect();
        PauliString { ops, phase_pow: 0 }
    }

    /// Row action of the dense matrix: `M[r][r ^ flip] = base * (-1)^{popcount(r & sign)}`
    /// where bit `(n-1-s)` corresponds to site `s`. Every Pauli word has
    /// exactly one nonzero entry per row, so this fully describes the matrix.
    pub fn row_action(&self) -> RowAction {
        let n = self.n();
        let mut flip = 0usize;
        let mut sign = 0usize;
        let mut num_y = 0u32;
        for (s, op) in self.ops.iter().enumerate() {
            let bit = 1usize << (n - 1 - s);
            match op {
                PauliOp::I => {}
                PauliOp::X => flip |= bit,
                PauliOp::Y => {
                    flip |= bit;
                    sign |= bit;
                    num_y += 1;
                }
                PauliOp::Z => sign |= bit,
            }
        }
        // Y[r][1-r] = -i * (-1)^r, so each Y contributes -i to the base.
        let minus_i = Complex64::new(0.0, -1.0);
        let base = self.phase() * minus_i.powu(num_y);
        RowAction { flip, sign, base }
    }

    /// Dense `2^n x 2^n` matrix of the word including its phase.
    pub fn to_matrix(&self) -> Result<Operator> {
        let n = self.n();
        let dim = 1usize
            .checked_shl(n as u32)
            .filter(|d| d.saturating_mul(*d) <= crate::tensor::MATRIX_ENTRY_CAP)
            .ok_or_else(|| Error::size_cap(format!("dense Pauli matrix for n = {n}")))?;
        let act = self.row_action();
        let mut m = Operator::zeros(dim, dim);
        for r in 0..dim {
            m[(r, r ^ act.flip)] = act.entry(r);
        }
        Ok(m)
    }
}

/// Sparse description of a Pauli word's dense matrix; see
/// [`PauliString::row_action`].
#[derive(Clone, Copy, Debug)]
pub struct RowAction {
    pub flip: usize,
    pub sign: usize,
    pub base: Complex64,
}

impl RowAction {
    /// The single nonzero entry of row `r`, located at column `r ^ self.flip`.
    #[inline]
    pub fn entry(&self, r: usize) -> Complex64 {
        if (r & self.sign).count_ones() % 2 == 0 {
            self.base
        } else {
            -self.base
        }
    }
}

fn strip_sign_prefix(text: &str) -> (u8, &str, usize) {
    for (prefix, pow) in [("-i", 3u8), ("+i", 1), ("-", 2), ("+", 0), ("i", 1)] {
        if let Some(rest) = text.strip_prefix(prefix) {
            return (pow, rest, prefix.len());
        }
    }
    (0, text, 0)
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase_pow {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for op in &self.ops {
            write!(f, "{}", op.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::kron;
    use proptest::prelude::*;

    #[test]
    fn parse_five_qubit_generator() {
        let g = PauliString::parse("XZZXI", 5).unwrap();
        assert_eq!(g.weight(), 4);
        assert_eq!(g.support().sites(), vec![0, 1, 2, 3]);
        assert_eq!(g.phase_pow(), 0);
        assert_eq!(g.to_string(), "XZZXI");
    }

    #[test]
    fn parse_identity_and_signed() {
        let id = PauliString::parse("IIIII", 5).unwrap();
        assert!(id.is_identity_word());
        assert_eq!(id.weight(), 0);
        let neg = PauliString::parse("-YY", 2).unwrap();
        assert_eq!(neg.phase_pow(), 2);
        assert_eq!(neg.weight(), 2);
        assert_eq!(neg.to_string(), "-YY");
        assert_eq!(PauliString::parse("i XZ".replace(' ', "").as_str(), 2).unwrap().phase_pow(), 1);
    }

    #[test]
    fn parse_errors_carry_position() {
        match PauliString::parse("XQZ", 3) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(PauliString::parse("XX", 3).is_err());
        match PauliString::parse("-iXQ", 2) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn single_site_products() {
        let x = PauliString::parse("X", 1).unwrap();
        let y = PauliString::parse("Y", 1).unwrap();
        let z = PauliString::parse("Z", 1).unwrap();
        // XY = iZ, YX = -iZ
        assert_eq!(x.mul(&y).to_string(), "iZ");
        assert_eq!(y.mul(&x).to_string(), "-iZ");
        assert_eq!(y.mul(&z).to_string(), "iX");
        assert_eq!(x.mul(&x).to_string(), "I");
    }

    #[test]
    fn commutation_rules() {
        let a = PauliString::parse("XZ", 2).unwrap();
        let b = PauliString::parse("ZX", 2).unwrap();
        assert!(a.commutes_with(&b)); // two clashing sites
        let c = PauliString::parse("XI", 2).unwrap();
        let d = PauliString::parse("ZI", 2).unwrap();
        assert!(!c.commutes_with(&d));
    }

    #[test]
    fn matrix_matches_kron_of_factors() {
        for text in ["XZ", "YI", "-ZY", "iXY"] {
            let p = PauliString::parse_any_len(text).unwrap();
            let dense = p.to_matrix().unwrap();
            let factors: Vec<_> = p.ops().iter().map(|op| op.matrix()).collect();
            let expect = kron(&factors[0], &factors[1]).unwrap().map(|z| z * p.phase());
            assert!((dense - expect).iter().all(|z| z.norm() < 1e-15));
        }
    }

    #[test]
    fn matrix_product_agrees_with_symbolic_product() {
        let a = PauliString::parse("XY", 2).unwrap();
        let b = PauliString::parse("ZY", 2).unwrap();
        let symbolic = a.mul(&b).to_matrix().unwrap();
        let dense = a.to_matrix().unwrap() * b.to_matrix().unwrap();
        assert!((symbolic - dense).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn word_index_round_trip() {
        let p = PauliString::parse("IXYZ", 4).unwrap();
        let idx = p.word_index();
        assert_eq!(idx, 0b00_01_10_11);
        assert_eq!(PauliString::from_word_index(idx, 4), p);
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(
            ops in proptest::collection::vec(0usize..4, 1..9),
            phase in 0u8..4,
        ) {
            let p = PauliString::new(ops.iter().map(|&i| PauliOp::from_index(i)).collect(), phase).unwrap();
            let text = p.to_string();
            let back = PauliString::parse(&text, p.n()).unwrap();
            prop_assert_eq!(p, back);
        }

        #[test]
        fn product_weight_parity_is_additive_for_commuting_words(
            a_ops in proptest::collection::vec(0usize..4, 4),
            b_ops in proptest::collection::vec(0usize..4, 4),
        ) {
            let a = PauliString::new(a_ops.iter().map(|&i| PauliOp::from_index(i)).collect(), 0).unwrap();
            let b = PauliString::new(b_ops.iter().map(|&i| PauliOp::from_index(i)).collect(), 0).unwrap();
            prop_assume!(a.commutes_with(&b));
            let prod = a.mul(&b);
            prop_assert_eq!(prod.weight() % 2, (a.weight() + b.weight()) % 2);
        }
    }
}
