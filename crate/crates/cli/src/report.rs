use serde::Serialize;
use serde_json::{Map, Value};

pub const TOOL: &str = "hodge-degen";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: &'static str,
    pub status: Status,
    pub data: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: &'static str, status: Status, data: Value) -> Self {
        Check { name: name.into(), anchor, status, data }
    }

    /// A check whose computation itself errored.
    pub fn errored(name: impl Into<String>, anchor: &'static str, err: &hodge_degen::Error) -> Self {
        Check::new(name, anchor, Status::Fail, serde_json::json!({ "error": err.to_string() }))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: impl Into<String>, checks: Vec<Check>) -> Self {
        Report {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            checks,
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// Round every float in the check data to `digits` significant digits.
    pub fn round_floats(&mut self, digits: usize) {
        for c in &mut self.checks {
            round_value(&mut c.data, digits);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("# {} {}\n\n", TOOL, self.command);
        s.push_str("| check | anchor | status |\n|---|---|---|\n");
        for c in &self.checks {
            s.push_str(&format!("| {} | `{}` | {} |\n", c.name, c.anchor, c.status.label()));
        }
        for c in &self.checks {
            s.push_str(&format!("\n## {} (`{}`)\n\n", c.name, c.anchor));
            markdown_data(&c.data, 0, &mut s);
        }
        s.push_str(&format!("\nelapsed: {} ms\n", self.elapsed_ms));
        s
    }
}

fn round_value(v: &mut Value, digits: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(0.0);
            let r: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x);
            if let Some(m) = serde_json::Number::from_f64(r) {
                *n = m;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(|x| round_value(x, digits)),
        Value::Object(o) => o.values_mut().for_each(|x| round_value(x, digits)),
        _ => {}
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn markdown_data(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(o) => markdown_object(o, depth, out),
        Value::Array(a) if a.iter().all(is_scalar) => out.push_str(&format!("{pad}- {v}\n")),
        Value::Array(a) => {
            for x in a {
                if is_scalar(x) || matches!(x, Value::Array(_)) {
                    out.push_str(&format!("{pad}- {x}\n"));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    markdown_data(x, depth + 1, out);
                }
            }
        }
        _ => out.push_str(&format!("{pad}- {v}\n")),
    }
}

fn markdown_object(o: &Map<String, Value>, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    for (k, x) in o {
        if is_scalar(x) || matches!(x, Value::Array(a) if a.iter().all(is_scalar)) {
            out.push_str(&format!("{pad}- {k}: {x}\n"));
        } else {
            out.push_str(&format!("{pad}- {k}:\n"));
            markdown_data(x, depth + 1, out);
        }
    }
}
