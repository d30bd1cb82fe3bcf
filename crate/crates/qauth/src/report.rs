//! Machine-readable run reports and their text rendering.
//!
//! The JSON schema is versioned; field names are stable across versions,
//! and text output carries the same numbers as the structured form.

use serde::{Deserialize, Serialize};

use crate::adversary::RateEstimate;
use crate::ledger::{ModelClass, ResourceTally};
use crate::protocols::Outcome;

pub const SCHEMA_VERSION: u32 = 1;

pub fn tool_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// The sizes, seed, and adversary selection a report was produced under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    pub seed: u64,
    pub adversary: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeSummary {
    pub accepted: bool,
    pub eavesdrop_detected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovered_message: Option<Vec<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub session_key: Option<Vec<f64>>,
}

impl From<&Outcome> for OutcomeSummary {
    fn from(o: &Outcome) -> Self {
        OutcomeSummary {
            accepted: o.accepted,
            eavesdrop_detected: o.eavesdrop_detected,
            recovered_message: o.recovered_message.clone(),
            session_key: o.session_key.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Rates {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detection: Option<RateEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub impersonation_acceptance: Option<RateEstimate>,
}

/// One protocol execution, fully accounted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub protocol: String,
    pub params: ReportParams,
    pub tally: ResourceTally,
    pub model: ModelClass,
    /// Rendered complexity notation, e.g. `Q(f_I) = 3n`.
    pub expression: String,
    pub outcome: OutcomeSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rates: Option<Rates>,
    /// Unix seconds; absent under `--deterministic`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let t = &self.tally;
        out.push_str(&format!("protocol: {}\n", self.protocol));
        out.push_str(&format!(
            "params: n={} m={} s={} seed={} adversary={}\n",
            self.params.n, self.params.m, self.params.s, self.params.seed, self.params.adversary
        ));
        out.push_str(&format!(
            "tally: qubits={} classical_bits={} ebits_prior={} ebits_in_protocol={}\n",
            t.qubits_sent, t.classical_bits_sent, t.ebits_prior, t.ebits_in_protocol
        ));
        out.push_str(&format!("model: {:?}\n", self.model));
        out.push_str(&format!("expression: {}\n", self.expression));
        out.push_str(&format!(
            "outcome: {}{}\n",
            if self.outcome.accepted { "accepted" } else { "rejected" },
            if self.outcome.eavesdrop_detected {
                " (eavesdropping detected)"
            } else {
                ""
            }
        ));
        if let Some(msg) = &self.outcome.recovered_message {
            let bits: String = msg.iter().map(|&b| if b { '1' } else { '0' }).collect();
            out.push_str(&format!("recovered_message: {bits}\n"));
        }
        if let Some(rates) = &self.rates {
            if let Some(d) = &rates.detection {
                out.push_str(&format!(
                    "detection_rate: {:.4} [{:.4}, {:.4}] over {} trials\n",
                    d.point, d.lo, d.hi, d.trials
                ));
            }
            if let Some(a) = &rates.impersonation_acceptance {
                out.push_str(&format!(
                    "impersonation_acceptance: {:.4} [{:.4}, {:.4}] over {} trials\n",
                    a.point, a.lo, a.hi, a.trials
                ));
            }
        }
        out
    }
}

/// `analyze` output: declared vs fitted complexity for one protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub protocol: String,
    pub simulable: bool,
    pub declared: String,
    /// Fitted expression over the size grid (simulable protocols only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted: Option<String>,
    /// Declared and fitted coefficients agree (bound kind ignored).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
    /// `((n, m), counted communications)` for each grid point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<((u64, u64), u64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl AnalyzeReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "protocol: {}\nsimulable: {}\ndeclared: {}\n",
            self.protocol, self.simulable, self.declared
        );
        if let Some(f) = &self.fitted {
            out.push_str(&format!("fitted: {f}\n"));
        }
        if let Some(a) = self.agreement {
            out.push_str(&format!("agreement: {a}\n"));
        }
        if let Some(grid) = &self.grid {
            for ((n, m), c) in grid {
                out.push_str(&format!("  (n={n}, m={m}) -> {c} communications\n"));
            }
        }
        out
    }
}

/// One row of the full registry table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub protocol: String,
    pub task: String,
    pub model: ModelClass,
    pub complexity: String,
    pub simulable: bool,
    /// Fit agreement from a self-check run; absent for accounting-only rows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub rows: Vec<TableRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl TableReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<16} {:<4} {:<13} {:<18} {:<9} verified\n",
            "protocol", "task", "model", "complexity", "simulable"
        ));
        for r in &self.rows {
            let verified = match r.verified {
                Some(true) => "true",
                Some(false) => "false",
                None => "n/a",
            };
            out.push_str(&format!(
                "{:<16} {:<4} {:<13} {:<18} {:<9} {verified}\n",
                r.protocol,
                r.task,
                format!("{:?}", r.model),
                r.complexity,
                r.simulable
            ));
        }
        out
    }
}

pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
