use padwave::json::{document, SCHEMA};
use padwave::Error;
use serde_json::{json, Map, Value};

/// Why a command produced no report.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(String),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Input(_) => "input",
            Failure::Internal(_) => "internal",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Internal(_) => Failure::Internal(e.to_string()),
            Error::NotPrime(_) => Failure::Usage(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

pub fn error_document(kind: &str, message: &str) -> Value {
    document("error", json!({ "error": { "kind": kind, "message": message } }))
}

/// A finished document plus whether every exact check in it passed.
pub struct Output {
    pub value: Value,
    pub passed: bool,
}

impl Output {
    /// A bare object (a function, say) emitted as its own document.
    pub fn object(kind: &str, body: Value) -> Output {
        Output {
            value: document(kind, body),
            passed: true,
        }
    }

    pub fn error(f: &Failure) -> Output {
        Output {
            value: error_document(f.kind(), f.message()),
            passed: false,
        }
    }
}

/// Command report: exact results and advisory numerics live under separate keys.
pub struct Report {
    command: String,
    inputs: Map<String, Value>,
    results: Map<String, Value>,
    advisory: Option<Value>,
    checks: Vec<(String, bool)>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.into(),
            inputs: Map::new(),
            results: Map::new(),
            advisory: None,
            checks: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.into(), v.into());
        self
    }

    pub fn result(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.results.insert(key.into(), v.into());
        self
    }

    /// Record an exact check; any false one makes the exit code 1.
    pub fn check(&mut self, name: &str, ok: bool) -> &mut Self {
        self.checks.push((name.into(), ok));
        self
    }

    pub fn advisory(&mut self, v: Value) -> &mut Self {
        self.advisory = Some(v);
        self
    }

    pub fn finish(self) -> Output {
        let passed = self.checks.iter().all(|(_, ok)| *ok);
        let checks: Map<String, Value> = self.checks.into_iter().map(|(k, v)| (k, Value::Bool(v))).collect();
        let mut body = json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "checks": checks,
            "passed": passed,
        });
        if let Some(a) = self.advisory {
            body["advisory"] = a;
        }
        Output {
            value: document("report", body),
            passed,
        }
    }
}

/// One `path  value` line per leaf.
pub fn render_table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0).min(48);
    let mut out = String::new();
    for (k, val) in rows {
        if k == "schema" && val == SCHEMA {
            continue;
        }
        let pad = width.saturating_sub(k.chars().count());
        out.push_str(&k);
        out.push_str(&" ".repeat(pad + 2));
        out.push_str(&val);
        out.push('\n');
    }
    out
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{}.{}", prefix, k)
        }
    };
    match v {
        Value::Object(m) if is_cyc(m) => rows.push((prefix.into(), cyc_text(m))),
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, rows);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            rows.push((prefix.into(), format!("[{}]", items.join(", "))));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), x, rows);
            }
        }
        other => rows.push((prefix.into(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn is_cyc(m: &Map<String, Value>) -> bool {
    m.len() == 2 && m.contains_key("order") && m.get("coeffs").is_some_and(Value::is_array)
}

/// c_0 + c_1 ζ_n + … with zero terms dropped.
fn cyc_text(m: &Map<String, Value>) -> String {
    let n = m["order"].as_u64().unwrap_or(1);
    let coeffs = m["coeffs"].as_array().cloned().unwrap_or_default();
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter_map(|(j, c)| {
            let c = scalar(c);
            if c == "0" {
                None
            } else if j == 0 {
                Some(c)
            } else {
                let z = if j == 1 {
                    format!("ζ{}", n)
                } else {
                    format!("ζ{}^{}", n, j)
                };
                Some(if c == "1" { z } else { format!("({})·{}", c, z) })
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
