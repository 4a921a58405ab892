use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Which way the objective points. Counts compare against the rounded-up LP
/// when no optimum is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
    Count,
}

/// Attained ratio of `rounded` against the optimum, or against the LP bound
/// when no optimum is known. `None` when the ratio is unbounded.
pub fn ratio(sense: Sense, lp: Option<f64>, rounded: f64, oracle: Option<f64>) -> Option<f64> {
    let reference = match (sense, oracle, lp) {
        (_, Some(o), _) => o,
        (Sense::Count, None, Some(l)) => (l - 1e-9).ceil().max(0.0),
        (_, None, Some(l)) => l,
        (_, None, None) => return None,
    };
    let (num, den) = match sense {
        Sense::Max => (reference, rounded),
        Sense::Min | Sense::Count => (rounded, reference),
    };
    if den.abs() <= 1e-9 {
        return (num.abs() <= 1e-9).then_some(1.0);
    }
    Some(num / den)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub command: String,
    pub problem: String,
    pub sense: Sense,
    pub lp_value: Option<f64>,
    pub rounded: f64,
    pub oracle: Option<f64>,
    pub ratio_bound: Option<f64>,
    pub ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub timings_ms: BTreeMap<String, f64>,
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn recompute_ratio(&self) -> Option<f64> {
        ratio(self.sense, self.lp_value, self.rounded, self.oracle)
    }

    pub fn refresh(&mut self) {
        self.ratio = self.recompute_ratio();
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub ratio_bound: f64,
    pub attained_ratio: Option<f64>,
}

/// Solution as written to disk. Nodes are instance ids; `objective` and
/// `bound` are exact decimals or fractions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub instance: String,
    pub problem: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<String>,
    pub paths: Vec<Vec<String>>,
    pub objective: String,
    pub lp_value: Option<f64>,
    pub certificate: CertificateFile,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> RunReport {
        let mut r = RunReport {
            instance: "STAR3".into(),
            command: "solve".into(),
            problem: "rvrp-r2".into(),
            sense: Sense::Count,
            lp_value: Some(1.0 / 3.0),
            rounded: 2.0,
            oracle: None,
            ratio_bound: Some(15.0),
            ratio: None,
            timings_ms: BTreeMap::from([("lp".to_string(), 0.1 + 0.2)]),
            seed: Some(7),
        };
        r.refresh();
        r
    }

    #[test]
    fn round_trip() {
        let r = report();
        let back: RunReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.recompute_ratio(), back.ratio);
    }

    #[test]
    fn ratios() {
        assert_eq!(report().ratio, Some(2.0));
        assert_eq!(ratio(Sense::Max, Some(3.0), 1.0, None), Some(3.0));
        assert_eq!(ratio(Sense::Max, Some(3.0), 2.0, Some(2.0)), Some(1.0));
        assert_eq!(ratio(Sense::Max, Some(1.0), 0.0, None), None);
        assert_eq!(ratio(Sense::Min, Some(0.0), 0.0, None), Some(1.0));
        assert_eq!(ratio(Sense::Count, Some(0.0), 0.0, None), Some(1.0));
        assert_eq!(ratio(Sense::Min, None, 4.0, None), None);
    }
}
