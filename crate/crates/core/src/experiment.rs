//! Seeded trial pools and the report record every experiment emits.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::rng::StreamRng;

/// Runs `trials` independent trials in parallel. Trial `i` gets substream `i`
/// of `seed`; results come back in trial order whatever the scheduling.
pub fn run_trials<T, F>(seed: u64, trials: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut StreamRng) -> T + Sync,
{
    let root = StreamRng::new(seed);
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = root.substream(i as u64);
            f(i, &mut rng)
        })
        .collect()
}

/// Fraction of `true` in `outcomes` (0 for an empty slice).
pub fn success_rate(outcomes: &[bool]) -> f64 {
    if outcomes.is_empty() {
        return 0.0;
    }
    outcomes.iter().filter(|&&b| b).count() as f64 / outcomes.len() as f64
}

/// Record of one seeded run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub op: String,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
    pub trials: usize,
    pub success_rate: Option<f64>,
    pub curve: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, Value>,
}

impl ExperimentReport {
    pub fn new(op: impl Into<String>, seed: u64) -> Self {
        Self {
            op: op.into(),
            params: BTreeMap::new(),
            seed,
            trials: 0,
            success_rate: None,
            curve: Vec::new(),
            slope: None,
            passed: None,
            extra: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn with_extra(mut self, key: &str, value: impl Serialize) -> Self {
        self.extra.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trials_are_ordered_and_reproducible() {
        let a = run_trials(9, 500, |i, rng| (i, rng.next_u64()));
        let b = run_trials(9, 500, |i, rng| (i, rng.next_u64()));
        assert_eq!(a, b);
        assert!(a.iter().enumerate().all(|(k, (i, _))| k == *i));
        let c = run_trials(10, 500, |_, rng| rng.next_u64());
        assert_ne!(a[0].1, c[0]);
    }

    #[test]
    fn report_json_shape() {
        let mut r = ExperimentReport::new("demo", 3).param("b", 2).param("a", "x");
        r.trials = 4;
        r.success_rate = Some(0.5);
        r.curve.push([1.0, 0.25]);
        let v: Value = serde_json::from_str(&r.to_json_string()).unwrap();
        assert_eq!(v["op"], "demo");
        assert_eq!(v["params"]["a"], "x");
        assert_eq!(v["curve"][0][1], 0.25);
        assert!(v.get("slope").is_none());
        let keys: Vec<_> = v["params"].as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, vec!["a", "b"]);
        assert_eq!(success_rate(&[true, false, true, true]), 0.75);
    }
}
