//! CSV tables and the structured JSON run report.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        let row: Vec<String> = row.into_iter().map(|c| c.to_string()).collect();
        assert_eq!(row.len(), self.columns.len(), "row width must match header of table {}", self.name);
        self.rows.push(row);
    }

    /// RFC 4180 CSV with a header row.
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }
}

/// One record per run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    /// SHA-256 of the canonical map text the run analysed.
    pub input_digest: String,
    pub verdict: String,
    pub tables: Vec<Table>,
    pub floats: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, canonical_input: &str) -> Self {
        Self {
            command: command.into(),
            input_digest: digest(canonical_input),
            verdict: String::new(),
            tables: Vec::new(),
            floats: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn float(&mut self, key: &str, value: f64) {
        self.floats.insert(key.into(), value);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_when_needed() {
        let mut t = Table::new("t", &["n", "entry"]);
        t.push(["1", "x + y"]);
        t.push(["2", "a,b"]);
        assert_eq!(t.to_csv(), "n,entry\n1,x + y\n2,\"a,b\"\n");
    }

    #[test]
    #[should_panic(expected = "row width")]
    fn ragged_rows_are_rejected() {
        Table::new("t", &["a", "b"]).push(["1"]);
    }

    #[test]
    fn report_is_stable_json() {
        let mut r = Report::new("degseq", "abc");
        r.verdict = "linear".into();
        r.float("b", 0.5);
        r.float("a", 1e-12);
        let json = r.to_json();
        assert!(json.find("\"a\"").unwrap() < json.find("\"b\"").unwrap());
        assert_eq!(r.input_digest, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["floats"]["a"], 1e-12);
    }
}
