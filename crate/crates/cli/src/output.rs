//! Output encoding. JSON carries every float with 17 significant digits so
//! that parsing the text recovers the exact double; the human-readable form
//! uses the shortest round-tripping representation, which recovers the same
//! bits. Both views are therefore loss-free.

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;
use std::io::{self, Write};

struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes to a JSON string with loss-free float encoding.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    String::from_utf8(buf).expect("JSON output is UTF-8")
}

/// Renders a JSON value as `key = value` lines, flattening nested objects
/// with underscore-joined keys.
pub fn human_lines(value: &Value) -> String {
    let mut out = String::new();
    flatten("", value, &mut out);
    out
}

fn flatten(prefix: &str, value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}_{k}")
                };
                flatten(&key, v, out);
            }
        }
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format!("{prefix} = {}\n", n.as_f64().expect("checked")));
            } else {
                out.push_str(&format!("{prefix} = {n}\n"));
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix} = {s}\n")),
        other => out.push_str(&format!("{prefix} = {other}\n")),
    }
}
