//! Deterministic text output: fixed-point numbers, CSV, JSON.

use std::io::Write;

use serde_json::{Map, Value};

use crate::error::CliError;

const SIGNIFICANT: i32 = 12;
const MAX_DECIMALS: i32 = 12;

/// Fixed-point with 12 significant digits, at most 12 decimals.
pub fn number(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let decimals = if v == 0.0 {
        MAX_DECIMALS
    } else {
        (SIGNIFICANT - 1 - v.abs().log10().floor() as i32).clamp(0, MAX_DECIMALS)
    };
    let s = format!("{:.*}", decimals as usize, v);
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Rounds to 12 significant digits; JSON then prints the shortest form.
pub fn round_significant(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v + 0.0;
    }
    format!("{:.*e}", (SIGNIFICANT - 1) as usize, v)
        .parse()
        .unwrap_or(v)
        + 0.0
}

pub struct Csv {
    columns: Vec<&'static str>,
    text: String,
}

impl Csv {
    pub fn new(columns: &[&'static str]) -> Self {
        let mut text = columns.join(",");
        text.push('\n');
        Self {
            columns: columns.to_vec(),
            text,
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.columns.len());
        let cells: Vec<String> = values.iter().map(|&v| number(v)).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Flat JSON object with lexicographically ordered keys.
#[derive(Default)]
pub struct JsonObject(Map<String, Value>);

impl JsonObject {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(&mut self, key: &str, v: f64) -> Result<&mut Self, CliError> {
        let n = serde_json::Number::from_f64(round_significant(v))
            .ok_or_else(|| CliError::numerical(format!("{key} is not finite ({v})")))?;
        self.0.insert(key.to_string(), Value::Number(n));
        Ok(self)
    }

    pub fn int(&mut self, key: &str, v: u64) -> &mut Self {
        self.0.insert(key.to_string(), Value::from(v));
        self
    }

    pub fn render(&self) -> String {
        // serde_json's default map is ordered by key
        let mut s = serde_json::to_string_pretty(&self.0).expect("map of numbers serializes");
        s.push('\n');
        s
    }
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&std::path::Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(number(6.4), "6.40000000000");
        assert_eq!(number(1234.5678), "1234.56780000");
        assert_eq!(number(-0.141858), "-0.141858000000");
        assert_eq!(number(0.0), "0.000000000000");
        assert_eq!(number(2.5e-15), "0.000000000000");
        assert_eq!(number(8.99e9), "8990000000.00");
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(number(-0.0), "0.000000000000");
        assert_eq!(number(-1e-14), "0.000000000000");
    }

    #[test]
    fn csv_layout() {
        let mut csv = Csv::new(&["a_Hz", "b"]);
        csv.row(&[1.0, -2.0]);
        assert_eq!(csv.into_string(), "a_Hz,b\n1.00000000000,-2.00000000000\n");
    }

    #[test]
    fn json_keys_sorted() {
        let mut j = JsonObject::new();
        j.num("zeta", 1.0).unwrap();
        j.num("alpha", 2.0).unwrap();
        let s = j.render();
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
        assert!(j.num("bad", f64::NAN).is_err());
    }

    #[test]
    fn json_numbers_are_rounded() {
        let mut j = JsonObject::new();
        j.num("f", 6.630000000000001)
            .unwrap()
            .num("z", -0.0)
            .unwrap();
        let s = j.render();
        assert!(s.contains("\"f\": 6.63,"), "{s}");
        assert!(s.contains("\"z\": 0.0"), "{s}");
    }
}
