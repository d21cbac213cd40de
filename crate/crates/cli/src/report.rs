use std::time::Duration;

use serde_json::{json, Map, Value};

/// Output of one command: text lines, a JSON document and the overall verdict.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub passed: bool,
    lines: Vec<String>,
    data: Map<String, Value>,
    elapsed_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &'static str) -> Report {
        Report { command, passed: true, lines: Vec::new(), data: Map::new(), elapsed_ms: None }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.data.insert(key.to_string(), v.into());
    }

    /// Records an assertion; a failed one fails the report.
    pub fn assert(&mut self, label: &str, ok: bool) {
        self.passed &= ok;
        self.line(format!("{}: {label}", if ok { "PASS" } else { "FAIL" }));
    }

    pub fn set_elapsed(&mut self, d: Duration) {
        self.elapsed_ms = Some(d.as_millis());
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        if let Some(ms) = self.elapsed_ms {
            s.push_str(&format!("elapsed: {ms} ms\n"));
        }
        s.push_str(if self.passed { "ok\n" } else { "FAILED\n" });
        s
    }

    pub fn to_json_string(&self) -> String {
        let mut v = json!({
            "command": self.command,
            "passed": self.passed,
            "result": Value::Object(self.data.clone()),
        });
        if let Some(ms) = self.elapsed_ms {
            v["timings"] = json!({ "elapsed_ms": ms });
        }
        segal_topos::io::to_canonical_string(&v)
    }
}
