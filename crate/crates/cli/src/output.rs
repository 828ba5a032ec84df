//! Deterministic output rendering: JSON with a fixed key order (struct
//! order) and floats printed with 17 significant digits, so identical
//! inputs and seed produce byte-identical files.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

/// Formats every float as `{:.16e}`: 17 significant digits, enough to
/// round-trip any f64 exactly.
pub struct F17Formatter;

impl Formatter for F17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes a payload to a compact JSON string with 17-digit floats.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, F17Formatter);
    value
        .serialize(&mut ser)
        .expect("report serialization cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// The float format used in CSV cells, matching the JSON one.
pub fn float(value: f64) -> String {
    format!("{value:.16e}")
}
