//! Subset bitmasks over `n` sites and real vectors indexed by them.
//!
//! A [`SubsetMask`] identifies a subset of the sites `0..n`. Masks use the
//! same place-value convention as Hilbert-space basis indices throughout the
//! crate: **site 0 owns the most significant bit**, so the bitstring `"0110"`
//! (sites 1 and 2 set) parses to `bits == 0b0110`. With that convention a
//! measured ancilla bitstring, a computational basis label, and a subset mask
//! are all the same integer.
//!
//! [`SubsetVector`] stores one real value per subset (length `2^n`) and is the
//! carrier for overlap vectors and SWAP-test probability distributions. The
//! signed fast Walsh-Hadamard transform [`SubsetVector::fwht_signed`] maps
//! between the two: `out[t] = sum_z (-1)^{|z AND t|} v[z]`.

use std::fmt;

use crate::error::{Error, Result};

/// Maximum number of sites for subset-indexed data (`2^n` values must fit
/// comfortably in memory).
pub const MAX_SITES: usize = 26;

/// A subset of `n` sites, packed into an integer bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: usize,
    n: usize,
}

impl SubsetMask {
    pub fn new(bits: usize, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_SITES {
            return Err(Error::argument(format!(
                "site count must be in 1..={MAX_SITES}, got {n}"
            )));
        }
        if bits >= (1usize << n) {
            return Err(Error::argument(format!(
                "mask bits {bits:#x} out of range for {n} sites"
            )));
        }
        Ok(SubsetMask { bits, n })
    }

    pub fn empty(n: usize) -> Self {
        SubsetMask { bits: 0, n }
    }

    pub fn full(n: usize) -> Self {
        SubsetMask {
            bits: (1usize << n) - 1,
            n,
        }
    }

    /// Build a mask from 0-based site indices.
    pub fn from_sites(sites: &[usize], n: usize) -> Result<Self> {
        let mut bits = 0usize;
        for &s in sites {
            if s >= n {
                return Err(Error::argument(format!(
                    "site {s} out of range for {n} sites"
                )));
            }
            bits |= 1usize << (n - 1 - s);
        }
        SubsetMask::new(bits, n)
    }

    /// Parse a bitstring such as `"0110"`, leftmost character = site 0.
    pub fn from_bitstring(s: &str) -> Result<Self> {
        let n = s.len();
        if n == 0 || n > MAX_SITES {
            return Err(Error::parse(0, format!("bitstring length must be 1..={MAX_SITES}")));
        }
        let mut bits = 0usize;
        for (pos, ch) in s.bytes().enumerate() {
            bits <<= 1;
            match ch {
                b'0' => {}
                b'1' => bits |= 1,
                _ => {
                    return Err(Error::parse(pos, format!("expected '0' or '1', found {:?}", ch as char)));
                }
            }
        }
        Ok(SubsetMask { bits, n })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of sites in the subset (`wt` of the bitstring).
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == (1usize << self.n) - 1
    }

    pub fn complement(&self) -> Self {
        SubsetMask {
            bits: !self.bits & ((1usize << self.n) - 1),
            n: self.n,
        }
    }

    /// Whether the 0-based site index is a member.
    pub fn contains(&self, site: usize) -> bool {
        debug_assert!(site < self.n);
        (self.bits >> (self.n - 1 - site)) & 1 == 1
    }

    /// Member sites in increasing order (0-based).
    pub fn sites(&self) -> Vec<usize> {
        (0..self.n).filter(|&s| self.contains(s)).collect()
    }

    pub fn intersection(&self, other: &SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.n, other.n);
        SubsetMask {
            bits: self.bits & other.bits,
            n: self.n,
        }
    }

    pub fn bitstring(&self) -> String {
        (0..self.n)
            .map(|s| if self.contains(s) { '1' } else { '0' })
            .collect()
    }

    /// All `2^n` masks in index order.
    pub fn all(n: usize) -> impl Iterator<Item = SubsetMask> {
        (0..1usize << n).map(move |bits| SubsetMask { bits, n })
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bitstring())
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetMask({})", self.bitstring())
    }
}

/// A real vector of length `2^n` indexed by [`SubsetMask`] bits.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetVector {
    n: usize,
    values: Vec<f64>,
}

impl SubsetVector {
    pub fn zeros(n: usize) -> Self {
        SubsetVector {
            n,
            values: vec![0.0; 1usize << n],
        }
    }

    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != 1usize << n {
            return Err(Error::argument(format!(
                "subset vector for {n} sites needs {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::validation(format!("non-finite subset value {bad}")));
        }
        Ok(SubsetVector { n, values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(SubsetMask) -> f64) -> Self {
        let values = SubsetMask::all(n).map(|m| f(m)).collect();
        SubsetVector { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, mask: SubsetMask) -> f64 {
        debug_assert_eq!(mask.n(), self.n);
        self.values[mask.bits()]
    }

    pub fn set(&mut self, mask: SubsetMask, v: f64) {
        debug_assert_eq!(mask.n(), self.n);
        self.values[mask.bits()] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn masks(&self) -> impl Iterator<Item = SubsetMask> {
        SubsetMask::all(self.n)
    }

    /// Signed Walsh-Hadamard transform: `out[t] = sum_z (-1)^{|z AND t|} v[z]`.
    ///
    /// The transform is an involution up to the factor `2^n`: applying it
    /// twice and dividing by `2^n` recovers the input.
    pub fn fwht_signed(&self) -> SubsetVector {
        let mut out = self.values.clone();
        fwht_signed_in_place(&mut out);
        SubsetVector {
            n: self.n,
            values: out,
        }
    }

    /// Sum of `values[z]` over masks `z` of the given weight.
    pub fn weight_class_sum(&self, weight: usize) -> f64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(bits, _)| bits.count_ones() as usize == weight)
            .map(|(_, v)| v)
            .sum()
    }
}

impl std::ops::Index<SubsetMask> for SubsetVector {
    type Output = f64;

    fn index(&self, mask: SubsetMask) -> &f64 {
        &self.values[mask.bits()]
    }
}

/// In-place butterfly for the signed Walsh-Hadamard transform.
///
/// `values.len()` must be a power of two. Runs in `O(2^n * n)`.
pub fn fwht_signed_in_place(values: &mut [f64]) {
    let len = values.len();
    assert!(len.is_power_of_two(), "length must be a power of two");
    let mut half = 1;
    while half < len {
        let step = half << 1;
        for block in (0..len).step_by(step) {
            for i in block..block + half {
                let a = values[i];
                let b = values[i + half];
                values[i] = a + b;
                values[i + half] = a - b;
            }
        }
        half = step;
    }
}
