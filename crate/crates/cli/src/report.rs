use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub input: Value,
    pub results: Value,
    pub provenance: Value,
    /// Set by verification runs.
    pub passed: Option<bool>,
}

impl Report {
    pub fn new(command: &str, input: Value, results: Value) -> Self {
        Report { command: command.to_string(), input, results, provenance: json!({}), passed: None }
    }

    pub fn with_provenance(mut self, extra: Value) -> Self {
        self.provenance = extra;
        self
    }

    pub fn to_json(&self) -> Value {
        let mut prov = match &self.provenance {
            Value::Object(m) => m.clone(),
            _ => Map::new(),
        };
        prov.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
        let mut out = Map::new();
        out.insert("schema_version".into(), json!(SCHEMA_VERSION));
        out.insert("command".into(), Value::String(self.command.clone()));
        out.insert("input".into(), self.input.clone());
        out.insert("results".into(), self.results.clone());
        out.insert("provenance".into(), Value::Object(prov));
        if let Some(p) = self.passed {
            out.insert("passed".into(), Value::Bool(p));
        }
        Value::Object(out)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = String::new();
                text(&self.to_json(), 0, &mut s);
                s
            }
        }
    }
}

/// Integers that fit in 64 bits stay numbers; larger ones become decimal strings.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => Value::String(x.to_string()),
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn rat(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).expect("scalar")).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(a)
            if a.iter().all(|x| x.as_array().is_some_and(|r| r.iter().all(|y| !y.is_object() && !y.is_array()))) =>
        {
            Some(a.iter().map(|x| scalar(x).expect("flat row")).collect::<Vec<_>>().join(" "))
        }
        _ => None,
    }
}

fn text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        text(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).expect("scalar"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_sorted_and_versioned() {
        let r = Report::new("x", json!({"b": 1, "a": 2}), json!({"z": [1, 2], "m": {"q": "1/2"}}));
        let s = r.render(Format::Json);
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.contains("\"schema_version\": 1"));
        assert_eq!(s, r.render(Format::Json));
    }

    #[test]
    fn rationals_render_exactly() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(rat(&half), json!("1/2"));
        assert_eq!(rat(&BigRational::from_integer(BigInt::from(-3))), json!("-3"));
        assert_eq!(int(&BigInt::from(7)), json!(7));
        assert_eq!(int(&(BigInt::from(1) << 80)), json!("1208925819614629174706176"));
    }

    #[test]
    fn text_layout() {
        let r = Report::new("t", json!({"w": [3, 3]}), json!({"parts": [[2, 3], [3]], "x": {"y": null}}));
        let s = r.render(Format::Text);
        assert!(s.contains("w: [3, 3]"));
        assert!(s.contains("parts: [2, 3] [3]"));
        assert!(s.contains("    y: -"));
    }
}
