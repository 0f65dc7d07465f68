use std::io::Write;

use serde_json::Value;

use dmexp_core::ExperimentReport;

/// A fixed-column table plus the summary record it came from.
#[derive(Clone, Debug)]
pub struct Report {
    pub record: ExperimentReport,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    /// One-line human summary, printed to stderr.
    pub summary: String,
}

impl Report {
    pub fn new(op: &str, seed: Option<u64>, columns: &[&'static str]) -> Self {
        let record = ExperimentReport::new(op, seed.unwrap_or(0)).with_extra("seeded", seed.is_some());
        Self { record, columns: columns.to_vec(), rows: Vec::new(), summary: String::new() }
    }

    pub fn param(mut self, key: &str, value: impl serde::Serialize) -> Self {
        self.record = self.record.param(key, value);
        self
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn passed(&self) -> bool {
        self.record.passed.unwrap_or(true)
    }

    pub fn set_passed(&mut self, passed: bool) {
        self.record.passed = Some(passed);
    }

    pub fn extra(&mut self, key: &str, value: impl serde::Serialize) {
        self.record.extra.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn write_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json_string(&self) -> String {
        let mut record = self.record.clone();
        record.extra.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        record.extra.insert("columns".into(), serde_json::to_value(&self.columns).expect("strings"));
        record.extra.insert("rows".into(), Value::Array(self.rows.iter().cloned().map(Value::Array).collect()));
        record.to_json_string()
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
