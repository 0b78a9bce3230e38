use std::time::Duration;

use serde_json::{json, Map, Value};

/// One command's output. Human and JSON renderings carry the same payload.
pub struct Report {
    pub command: String,
    pub pass: bool,
    pub result: Map<String, Value>,
    pub witness: Option<Value>,
    pub checks: Vec<(String, bool, String)>,
    pub worst_residual: Option<f64>,
    pub elapsed: Duration,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            pass: true,
            result: Map::new(),
            witness: None,
            checks: Vec::new(),
            worst_residual: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.result.insert(key.into(), v.into());
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.pass &= pass;
        self.checks.push((name.into(), pass, detail.into()));
    }

    pub fn residual(&mut self, r: f64) {
        self.worst_residual = Some(self.worst_residual.map_or(r, |w| w.max(r)));
    }

    fn summary(&self) -> Value {
        let mut v = json!({
            "command": self.command,
            "pass": self.pass,
            "result": self.result,
            "elapsed_ms": self.elapsed.as_secs_f64() * 1e3,
        });
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        if let Some(r) = self.worst_residual {
            v["worst_residual"] = json!(r);
        }
        v
    }

    /// Line-delimited JSON: one line per check, then the summary.
    pub fn render_json(&self) -> String {
        let mut out = String::new();
        for (name, pass, detail) in &self.checks {
            let line = json!({ "check": name, "pass": pass, "detail": detail });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out.push_str(&self.summary().to_string());
        out.push('\n');
        out
    }

    pub fn render_human(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (k, v) in &self.result {
            out.push_str(&format!("{k}: {}\n", plain(v)));
        }
        if let Some(w) = &self.witness {
            out.push_str("witness:\n");
            match w {
                Value::Array(items) => {
                    for it in items {
                        out.push_str(&format!("  {}\n", plain(it)));
                    }
                }
                other => out.push_str(&format!("  {}\n", plain(other))),
            }
        }
        if !self.checks.is_empty() {
            let width = self.checks.iter().map(|c| c.0.len()).max().unwrap_or(0);
            for (name, pass, detail) in &self.checks {
                let tag = if *pass { "PASS" } else { "FAIL" };
                out.push_str(&format!("{tag}  {name:<width$}  {detail}\n"));
            }
        }
        if let Some(r) = self.worst_residual {
            out.push_str(&format!("worst residual: {r:.3e}\n"));
        }
        out.push_str(&format!(
            "{} in {:.2}s\n",
            if self.pass { "pass" } else { "FAIL" },
            self.elapsed.as_secs_f64()
        ));
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) if m.values().all(|v| !v.is_object() && !v.is_array()) => {
            let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect();
            parts.join(", ")
        }
        other => other.to_string(),
    }
}
