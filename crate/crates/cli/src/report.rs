//! Run reports and CSV rows.

use std::collections::BTreeMap;

use equinorm::portfolio::Alpha;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDescriptor {
    pub kind: String,
    pub summary: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioOut {
    pub vectors: Vec<Vec<f64>>,
    pub provenance: Vec<String>,
    pub alpha: Alpha,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioCert {
    /// `None` when the ratio is infinite.
    pub ratio: Option<f64>,
    /// `true` for a certified maximum, `false` for a lower bound from samples
    /// or from a partial reference.
    pub exact: bool,
    pub evaluated: usize,
    /// Top-k index (1-based) or weight index attaining the ratio.
    pub worst: usize,
    pub reference: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Certificates {
    pub claimed_alpha: Option<f64>,
    pub topk: Option<RatioCert>,
    pub ordered: Option<RatioCert>,
    pub samples: usize,
    pub seed: u64,
    pub violation: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub instance: InstanceDescriptor,
    pub method: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
    pub portfolio: PortfolioOut,
    pub details: Value,
    pub certificates: Certificates,
    pub timings: Option<Timings>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
        s.push('\n');
        s
    }
}

/// One row of a trade-off sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TradeoffRow {
    pub param: f64,
    pub portfolio_size: usize,
    pub exact_topk_ratio: Option<f64>,
    pub sampled_ord_ratio: Option<f64>,
    pub seconds: f64,
}

pub fn tradeoff_csv(rows: &[TradeoffRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialise");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_blank_missing_values() {
        let rows = vec![TradeoffRow {
            param: 8.0,
            portfolio_size: 2,
            exact_topk_ratio: Some(1.25),
            sampled_ord_ratio: None,
            seconds: 0.0,
        }];
        assert_eq!(
            tradeoff_csv(&rows),
            "param,portfolio_size,exact_topk_ratio,sampled_ord_ratio,seconds\n8.0,2,1.25,,0.0\n"
        );
    }
}
