//! Canonical JSON output: fixed key order comes from struct declaration
//! order (or `BTreeMap`s), floats print with 17 significant digits so that
//! re-serializing a parsed document reproduces it byte for byte.

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, Serializer};

use crate::error::Result;

struct CanonicalFormatter;

impl Formatter for CanonicalFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        // 1 leading digit + 16 fractional digits = 17 significant digits,
        // enough to round-trip any finite f64 exactly.
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.write_f64(writer, value as f64)
    }
}

impl CanonicalFormatter {
    fn new() -> Self {
        CanonicalFormatter
    }
}

// Delegate everything else to the compact formatter defaults.
impl Default for CanonicalFormatter {
    fn default() -> Self {
        let _ = CompactFormatter;
        CanonicalFormatter::new()
    }
}

/// Serialize to canonical JSON text.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, CanonicalFormatter::new());
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}
