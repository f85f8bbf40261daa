use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

pub const SCHEMA_VERSION: u32 = 1;

/// Seventeen significant digits in scientific notation, independent of
/// locale; non-finite values as `NaN`, `inf`, `-inf`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Default)]
struct Fixed17;

impl Formatter for Fixed17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Top-level JSON envelope.
#[derive(Debug, Serialize)]
pub struct Document<'a, T: Serialize> {
    pub schema: u32,
    pub kind: &'a str,
    pub data: &'a T,
}

/// Compact JSON with fixed float formatting, newline-terminated.
pub fn to_json<T: Serialize>(kind: &str, data: &T) -> String {
    let doc = Document { schema: SCHEMA_VERSION, kind, data };
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Fixed17);
    doc.serialize(&mut ser).expect("in-memory serialisation of plain data");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        for x in [0.1f64, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = to_json("t", &x);
            let v: serde_json::Value = serde_json::from_str(&s).unwrap();
            assert_eq!(v["data"].as_f64().unwrap().to_bits(), x.to_bits());
            assert_eq!(v["schema"], 1);
        }
        assert_eq!(to_json("t", &1.0), "{\"schema\":1,\"kind\":\"t\",\"data\":1.0000000000000000e0}\n");
        assert!(to_json("t", &f64::NAN).contains("null"));
    }
}
