//! Machine-readable reports.
//!
//! Structured reports are pretty-printed JSON with sorted summary keys; the
//! CSV fiber dump has the columns `fiber_id,dim,smin2,smax2`.

use serde::Serialize;
use serde_json::Value;
use zakfiber::{FrameReport, Tolerances64, C64};

use crate::scenario::SCHEMA_VERSION;

pub const FIBER_ORDER: &str = "lexicographic order of dual tuples";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ValidationFailure,
    OracleDisagreement,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ValidationFailure => 2,
            Status::OracleDisagreement => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberRecord {
    pub fiber_id: usize,
    /// Character of the fiber as a dual tuple.
    pub fiber: Vec<usize>,
    pub dim: usize,
    pub smin2: Option<f64>,
    pub smax2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToleranceRecord {
    pub rank: f64,
    pub riesz: f64,
    pub verdict: f64,
    pub membership: f64,
}

impl From<&Tolerances64> for ToleranceRecord {
    fn from(t: &Tolerances64) -> Self {
        ToleranceRecord { rank: t.rank, riesz: t.riesz, verdict: t.verdict, membership: t.membership }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToolMetadata {
    pub name: &'static str,
    pub version: &'static str,
    pub tolerances: ToleranceRecord,
    pub fiber_order: &'static str,
    pub normalization: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub scenario: String,
    pub status: Status,
    pub fibers: Vec<FiberRecord>,
    pub summary: Value,
    pub tool: ToolMetadata,
}

impl Report {
    pub fn new(command: &str, scenario: &str, tol: &Tolerances64, normalization: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            scenario: scenario.to_string(),
            status: Status::Ok,
            fibers: Vec::new(),
            summary: Value::Object(Default::default()),
            tool: ToolMetadata {
                name: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                tolerances: tol.into(),
                fiber_order: FIBER_ORDER,
                normalization,
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("fiber_id,dim,smin2,smax2\n");
        let cell = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for f in &self.fibers {
            out.push_str(&format!("{},{},{},{}\n", f.fiber_id, f.dim, cell(f.smin2), cell(f.smax2)));
        }
        out
    }
}

pub fn complex(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn complex_vec(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().copied().map(complex).collect()
}

/// Per-fiber records of a frame or Riesz report. `labels[i]` is the dual
/// tuple of fiber `i`.
pub fn fiber_records(report: &FrameReport<f64>, labels: &[Vec<usize>]) -> Vec<FiberRecord> {
    report
        .fibers
        .iter()
        .zip(labels)
        .enumerate()
        .map(|(i, (f, label))| {
            let smin2 = match report.kind {
                zakfiber::BoundKind::Frame => f.smin2_range,
                zakfiber::BoundKind::Riesz => Some(f.full_smin2),
            };
            FiberRecord {
                fiber_id: i,
                fiber: label.clone(),
                dim: f.dim,
                smin2,
                smax2: Some(f.smax2),
                bracket: None,
            }
        })
        .collect()
}

/// Summary fields shared by every bounds report.
pub fn bounds_summary(report: &FrameReport<f64>) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("A".into(), report.lower.into());
    m.insert("B".into(), report.upper.into());
    m.insert("degenerate".into(), report.degenerate.into());
    m.insert("frame".into(), report.is_frame.into());
    m.insert("parseval".into(), report.is_parseval.into());
    m.insert("riesz".into(), report.is_riesz.into());
    m.insert("support".into(), report.support.clone().into());
    m.insert("length".into(), report.fibers.iter().map(|f| f.dim).max().unwrap_or(0).into());
    m
}
