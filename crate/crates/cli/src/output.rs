//! Rendering helpers shared by all subcommands.
//!
//! Numbers are rounded to 12 significant digits before serialization, in
//! CSV and JSON alike, and every output embeds the command, its
//! parameters and the seed, so identical invocations produce
//! byte-identical files.

use serde_json::{Map, Value};

/// Round to 12 significant digits (decimal rounding, then nearest f64).
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Shortest form of the value rounded to 12 significant digits; switches
/// to scientific notation away from magnitude 1 to keep columns readable.
pub fn fmt_f64(x: f64) -> String {
    let rounded = round_sig12(x);
    if rounded == 0.0 {
        return "0".into();
    }
    if rounded.abs() < 1e-4 || rounded.abs() >= 1e15 {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

pub fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(round_sig12(x))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// Invocation metadata embedded in every output.
pub struct Meta {
    pub command: &'static str,
    pub params: Vec<(&'static str, String)>,
    pub seed: u64,
}

impl Meta {
    /// Leading comment block of a CSV file.
    pub fn csv_comments(&self) -> String {
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        format!(
            "# command: {}\n# params: {}\n# seed: {}\n",
            self.command, params, self.seed
        )
    }

    /// `command`, `params` and `seed` fields of a JSON document.
    pub fn json_envelope(&self) -> Map<String, Value> {
        let mut params = Map::new();
        for (k, v) in &self.params {
            // Parameters are echoed as strings exactly as rendered in the
            // CSV comment block.
            params.insert((*k).into(), Value::String(v.clone()));
        }
        let mut envelope = Map::new();
        envelope.insert("command".into(), Value::String(self.command.into()));
        envelope.insert("params".into(), Value::Object(params));
        envelope.insert("seed".into(), Value::Number(self.seed.into()));
        envelope
    }
}

/// A CSV document under construction.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(meta: &Meta, extra_comments: &[String], header: &str) -> Self {
        let mut text = meta.csv_comments();
        for line in extra_comments {
            text.push_str(&format!("# {line}\n"));
        }
        text.push_str(header);
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Pretty-printed JSON document with a trailing newline.
pub fn json_document(fields: Map<String, Value>) -> String {
    let mut text = serde_json::to_string_pretty(&Value::Object(fields))
        .expect("serializing constructed values cannot fail");
    text.push('\n');
    text
}

/// JSON object for a density matrix, {"dim", "re", "im"}, rounded like
/// every other number.
pub fn density_matrix_json(rho: &rhosq::DensityMatrix) -> Value {
    let d = rho.dim();
    let component = |f: &dyn Fn(usize, usize) -> f64| -> Value {
        Value::Array(
            (0..d)
                .map(|i| Value::Array((0..d).map(|j| json_f64(f(i, j))).collect()))
                .collect(),
        )
    };
    let mut obj = Map::new();
    obj.insert("dim".into(), Value::Number(d.into()));
    obj.insert("re".into(), component(&|i, j| rho.get(i, j).re));
    obj.insert("im".into(), component(&|i, j| rho.get(i, j).im));
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(fmt_f64(std::f64::consts::FRAC_1_SQRT_2), "0.707106781187");
        assert_eq!(fmt_f64(1.0), "1");
        assert_eq!(fmt_f64(0.51), "0.51");
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(-0.625), "-0.625");
        assert_eq!(fmt_f64(1e-15), "1e-15");
        assert_eq!(fmt_f64(6.12323399574e-17), "6.12323399574e-17");
    }

    #[test]
    fn csv_embeds_invocation() {
        let meta = Meta {
            command: "purify",
            params: vec![("f0", "0.51".into())],
            seed: 7,
        };
        let csv = Csv::new(&meta, &[], "a,b");
        let text = csv.finish();
        assert!(text.starts_with("# command: purify\n# params: f0=0.51\n# seed: 7\na,b\n"));
    }
}
