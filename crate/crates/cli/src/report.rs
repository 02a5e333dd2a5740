use std::fmt::Write;
use std::time::Duration;

use omd_core::AnswerSet;
use serde::Serialize;

/// Summary of one command, printed as text on the error stream or as a JSON
/// object on standard output.
#[derive(Debug, Default, Serialize)]
pub struct RunReport {
    pub command: String,
    pub verdict: String,
    pub steps_used: usize,
    #[serde(rename = "elapsed_ms", serialize_with = "millis")]
    pub elapsed: Duration,
    pub diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub answers: Option<Answers>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct Answers {
    pub vars: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl From<&AnswerSet> for Answers {
    fn from(a: &AnswerSet) -> Self {
        Answers {
            vars: a.vars.clone(),
            rows: a.raw_rows(),
        }
    }
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1000.0)
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            ..RunReport::default()
        }
    }

    /// One summary line, e.g. `chase: consistent (4 steps, 0.3 ms)`.
    pub fn summary(&self) -> String {
        let mut s = format!("{}: {}", self.command, self.verdict);
        if self.command != "validate" {
            let _ = write!(
                s,
                " ({} steps, {:.1} ms)",
                self.steps_used,
                self.elapsed.as_secs_f64() * 1000.0
            );
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
