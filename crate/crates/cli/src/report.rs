//! Machine-readable reports: JSON by default, CSV tables on request.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use qhh::Presentation;

use crate::format::print_algebra;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    CertificationFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraInfo {
    pub source: String,
    pub field: String,
    /// SHA-256 of the canonical printed presentation.
    pub fingerprint: String,
    pub vertices: usize,
    pub arrows: usize,
    pub relations: usize,
}

impl AlgebraInfo {
    pub fn new(source: &str, p: &Presentation) -> AlgebraInfo {
        AlgebraInfo {
            source: source.to_string(),
            field: p.field.to_string(),
            fingerprint: fingerprint(p),
            vertices: p.quiver.num_vertices(),
            arrows: p.quiver.num_arrows(),
            relations: p.relations.len(),
        }
    }
}

pub fn fingerprint(p: &Presentation) -> String {
    hex::encode(Sha256::digest(print_algebra(p).as_bytes()))
}

/// A rectangular table for CSV output.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Table {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row<I: IntoIterator<Item = S>, S: ToString>(&mut self, cells: I) {
        self.rows.push(cells.into_iter().map(|c| c.to_string()).collect());
    }

    /// `degree, <name>` rows from a per-degree array.
    pub fn per_degree(name: &str, column: &str, values: &[usize]) -> Table {
        let mut t = Table::new(name, &["degree", column]);
        for (d, v) in values.iter().enumerate() {
            t.row([d, *v]);
        }
        t
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub algebra: AlgebraInfo,
    pub status: Status,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u128>,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
                s.push('\n');
                s
            }
            OutputFormat::Csv => {
                let mut out = String::new();
                for (k, t) in self.tables.iter().enumerate() {
                    if k > 0 {
                        out.push('\n');
                    }
                    out.push_str(&format!("# {}\n", t.name));
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(&t.columns).expect("in-memory write");
                    for r in &t.rows {
                        w.write_record(r).expect("in-memory write");
                    }
                    out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"));
                }
                out
            }
        }
    }
}
