//! Emitting scan results as CSV, JSON or a Markdown table laid out like the
//! published tables (one row per `(k, n)`, one column per `s`).

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scan::ScanRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
    Markdown,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            _ => Err(Error::InvalidConfig(format!("unknown format {s:?}"))),
        }
    }
}

/// One `(k, n)` row of the layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub ambient: usize,
    pub saturation: usize,
    pub k: usize,
    pub n: usize,
    /// `(s, computed_dim, defect)` in increasing `s`.
    pub cells: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmittedTable {
    pub rows: Vec<TableRow>,
    records: Vec<ScanRecord>,
}

impl EmittedTable {
    /// Groups records by `(n, k)`, ascending.
    pub fn from_records(records: &[ScanRecord]) -> Self {
        let mut sorted = records.to_vec();
        sorted.sort_by_key(|r| (r.n, r.k, r.s));
        let mut rows: Vec<TableRow> = Vec::new();
        for r in &sorted {
            match rows.last_mut() {
                Some(row) if (row.k, row.n) == (r.k, r.n) => row.cells.push((r.s, r.computed_dim, r.defect)),
                _ => rows.push(TableRow {
                    ambient: r.ambient,
                    saturation: r.saturation,
                    k: r.k,
                    n: r.n,
                    cells: vec![(r.s, r.computed_dim, r.defect)],
                }),
            }
        }
        Self { rows, records: sorted }
    }

    pub fn records(&self) -> &[ScanRecord] {
        &self.records
    }

    pub fn write<W: Write>(&self, format: TableFormat, paper_style: bool, mut w: W) -> Result<()> {
        match format {
            TableFormat::Csv => write_csv(&self.records, w),
            TableFormat::Json => {
                serde_json::to_writer_pretty(&mut w, &self.records).map_err(|e| Error::Parse(e.to_string()))?;
                writeln!(w)?;
                Ok(())
            }
            TableFormat::Markdown => {
                w.write_all(self.markdown(paper_style).as_bytes())?;
                Ok(())
            }
        }
    }

    /// Defective cells print as `dim (δ=d)`, or `dim*` in paper style.
    pub fn markdown(&self, paper_style: bool) -> String {
        let s_min = 2;
        let s_max = self.rows.iter().flat_map(|r| r.cells.iter().map(|c| c.0)).max().unwrap_or(1).max(s_min - 1);
        let mut out = String::from("| N | S | k | n |");
        for s in s_min..=s_max {
            let _ = write!(out, " G^{s} |");
        }
        out.push_str("\n|---|---|---|---|");
        for _ in s_min..=s_max {
            out.push_str("---|");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "| {} | {} | {} | {} |", row.ambient, row.saturation, row.k, row.n);
            for s in s_min..=s_max {
                match row.cells.iter().find(|c| c.0 == s) {
                    Some(&(_, dim, 0)) => {
                        let _ = write!(out, " {dim} |");
                    }
                    Some(&(_, dim, d)) if paper_style => {
                        let _ = write!(out, " {dim}* |");
                        let _ = d;
                    }
                    Some(&(_, dim, d)) => {
                        let _ = write!(out, " {dim} (δ={d}) |");
                    }
                    None => out.push_str("  |"),
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn write_csv<W: Write>(records: &[ScanRecord], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in records {
        wr.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    if records.is_empty() {
        wr.write_record(CSV_COLUMNS).map_err(|e| Error::Parse(e.to_string()))?;
    }
    wr.flush()?;
    Ok(())
}

pub const CSV_COLUMNS: [&str; 13] =
    ["n", "k", "s", "N", "S", "expected_dim", "computed_dim", "defect", "status", "backend", "prime", "seed", "trials"];

pub fn parse_csv(text: &str) -> Result<Vec<ScanRecord>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let headers = rd.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if headers.iter().ne(CSV_COLUMNS.iter().copied()) {
        return Err(Error::Parse(format!("unexpected CSV header {headers:?}")));
    }
    rd.deserialize().map(|r| r.map_err(|e| Error::Parse(e.to_string()))).collect()
}
