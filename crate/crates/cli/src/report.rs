//! Ordered report trees rendered as indented `key: value` text or JSON.

use lqs_core::numeric::SpectrumReport;
use lqs_core::Complex;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Number formatting for one rendering mode.
#[derive(Debug, Clone, Copy)]
pub struct Fmt {
    pub machine: bool,
}

fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn short_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if !(1e-4..1e6).contains(&a) {
        return format!("{x:.6e}");
    }
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

impl Fmt {
    pub fn real(&self, x: f64) -> Value {
        if self.machine {
            Value::String(format!("{:.16e}", clean(x)))
        } else if x.is_finite() {
            Value::String(short_real(x))
        } else {
            Value::String(x.to_string())
        }
    }

    pub fn complex_str(&self, z: Complex) -> String {
        let (re, im) = (clean(z.re), clean(z.im));
        if self.machine {
            let sign = if im.is_sign_negative() { '-' } else { '+' };
            return format!("{re:.16e}{sign}{:.16e}i", im.abs());
        }
        let tiny = 1e-12 * z.norm().max(1.0);
        let re_s = short_real(if re.abs() <= tiny { 0.0 } else { re });
        if im.abs() <= tiny {
            return re_s;
        }
        let im_s = short_real(im.abs());
        let im_s = if im_s == "1" { String::new() } else { im_s };
        let sign = if im < 0.0 { "-" } else { "+" };
        if re_s == "0" {
            let sign = if im < 0.0 { "-" } else { "" };
            format!("{sign}{im_s}i")
        } else {
            format!("{re_s}{sign}{im_s}i")
        }
    }

    pub fn complex(&self, z: Complex) -> Value {
        Value::String(self.complex_str(z))
    }

    pub fn complex_list(&self, v: &[Complex]) -> Value {
        Value::Array(v.iter().map(|&z| self.complex(z)).collect())
    }

    /// Values with multiplicities, plus method and notes.
    pub fn spectrum(&self, s: &SpectrumReport) -> Value {
        let mut m = Map::new();
        m.insert("method".into(), json!(s.method.name()));
        m.insert("count".into(), json!(s.len()));
        m.insert(
            "values".into(),
            Value::Array(
                s.values
                    .iter()
                    .map(|&(z, k)| json!({"value": self.complex(z), "multiplicity": k}))
                    .collect(),
            ),
        );
        if !s.notes.is_empty() {
            m.insert("notes".into(), json!(s.notes));
        }
        Value::Object(m)
    }
}

/// Builder for one command's report: `command`, `input`, `settings`,
/// `results`, `warnings`, in that order.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub input: Value,
    pub settings: Map<String, Value>,
    pub results: Map<String, Value>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, input: Value) -> Self {
        Self {
            command: command.to_string(),
            input,
            settings: Map::new(),
            results: Map::new(),
            warnings: Vec::new(),
        }
    }

    pub fn setting(&mut self, k: &str, v: Value) -> &mut Self {
        self.settings.insert(k.into(), v);
        self
    }

    pub fn result(&mut self, k: &str, v: Value) -> &mut Self {
        self.results.insert(k.into(), v);
        self
    }

    pub fn warn(&mut self, w: impl Into<String>) -> &mut Self {
        self.warnings.push(w.into());
        self
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("input".into(), self.input.clone());
        m.insert("settings".into(), Value::Object(self.settings.clone()));
        m.insert("results".into(), Value::Object(self.results.clone()));
        m.insert("warnings".into(), json!(self.warnings));
        Value::Object(m)
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => Some(format!(
            "[{}]",
            a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")
        )),
        Value::Array(a)
            if a.iter()
                .all(|x| matches!(x, Value::Array(r) if r.iter().all(|y| !y.is_object() && !y.is_array()))) =>
        {
            Some(format!(
                "[{}]",
                a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")
            ))
        }
        _ => None,
    }
}

fn write_text(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_text(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        if let Value::Object(m) = x {
                            // spectrum entries render on one line
                            if m.len() == 2 && m.contains_key("value") && m.contains_key("multiplicity") {
                                let val = scalar_text(&m["value"]).unwrap_or_default();
                                out.push_str(&format!("{pad}- {val} (x{})\n", m["multiplicity"]));
                                continue;
                            }
                        }
                        out.push_str(&format!("{pad}-\n"));
                        write_text(out, x, indent + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other).unwrap_or_default())),
    }
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("report values serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            write_text(&mut s, v, 0);
            s
        }
    }
}
