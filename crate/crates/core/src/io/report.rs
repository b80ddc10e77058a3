use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_json, sha256_hex, write_json};
use crate::certificates::{BatteryConfig, BatteryReport, Obstruction, Verdict};
use crate::error::Result;
use crate::exponent::{BoundKind, BrFact};
use crate::field::FieldTag;

pub const TOOL_NAME: &str = "borank";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo { name: TOOL_NAME.into(), version: TOOL_VERSION.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorIdentity {
    pub id: String,
    pub hash: String,
    pub dims: [usize; 3],
    /// Field the tensor was given over; the analysis field is in the battery.
    pub field: FieldTag,
}

/// Everything `analyze` produces for one tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub tool: ToolInfo,
    pub tensor: TensorIdentity,
    pub config: BatteryConfig,
    pub battery: BatteryReport,
    pub aggregate_lower_bound: usize,
    /// The lower bound of this report plus any known upper bounds.
    pub facts: Vec<BrFact>,
    /// SHA-256 of the report with wall times zeroed and this field empty.
    pub reproducibility_hash: String,
}

impl CertificateReport {
    pub fn new(tensor: TensorIdentity, config: BatteryConfig, battery: BatteryReport, upper: Vec<BrFact>) -> Self {
        let aggregate = battery.aggregate_lower_bound;
        let lower = BrFact::lower(
            &tensor.id,
            aggregate as u64,
            format!("{TOOL_NAME} {TOOL_VERSION} analyze {} seed {} over {}", &tensor.hash[..12.min(tensor.hash.len())], battery.seed, battery.field),
        );
        let mut facts = vec![lower];
        facts.extend(upper.into_iter().filter(|f| f.kind == BoundKind::Upper));
        let mut report = CertificateReport {
            tool: ToolInfo::default(),
            tensor,
            config,
            battery,
            aggregate_lower_bound: aggregate,
            facts,
            reproducibility_hash: String::new(),
        };
        report.reproducibility_hash = report.compute_reproducibility_hash();
        report
    }

    pub fn compute_reproducibility_hash(&self) -> String {
        let mut stripped = self.clone();
        stripped.reproducibility_hash.clear();
        for o in &mut stripped.battery.obstructions {
            o.wall_time_ms = 0;
        }
        sha256_hex(&serde_json::to_vec(&stripped).expect("serializable"))
    }

    pub fn obstructions(&self) -> &[Obstruction] {
        &self.battery.obstructions
    }

    pub fn upper_bound(&self) -> Option<u64> {
        self.facts.iter().filter(|f| f.kind == BoundKind::Upper).map(|f| f.value).min()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn read(path: &Path) -> Result<Self> {
        read_json(path)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }

    /// Plain-text summary, one line per obstruction.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "tensor {} ({}x{}x{}, sha256 {}…)\nfield {}, seed {}\n",
            self.tensor.id,
            self.tensor.dims[0],
            self.tensor.dims[1],
            self.tensor.dims[2],
            &self.tensor.hash[..12.min(self.tensor.hash.len())],
            self.battery.field,
            self.battery.seed,
        );
        for o in &self.battery.obstructions {
            let mut detail = String::new();
            if let Some(p) = o.witness.get("p").and_then(|p| p.as_u64()) {
                detail += &format!("p={p} ");
            }
            if let Some(side) = o.witness.get("side").and_then(|s| s.as_str()) {
                detail += &format!("side {side}");
            }
            let mut line = format!("  {:<16} {:<12} {:<12}", o.name.to_string(), detail.trim_end(), o.verdict.to_string());
            if let Some(p) = o.payload {
                line += &format!(" payload {p}");
            }
            if let Some(b) = o.lower_bound {
                line += &format!(" bound {b}");
            }
            if let Some(v) = o.exact_recheck {
                line += &format!(" exact {v}");
            }
            if o.verdict == Verdict::Inapplicable {
                if let Some(r) = o.witness.get("reason").and_then(|r| r.as_str()) {
                    line += &format!(" ({r})");
                }
            }
            out += line.trim_end();
            out.push('\n');
        }
        out += &format!("border rank ≥ {}", self.aggregate_lower_bound);
        if let Some(u) = self.upper_bound() {
            out += &format!(", ≤ {u}");
        }
        out.push('\n');
        out
    }
}
