//! Versioned CSV schema for trial records.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::runner::TrialRecord;

pub const SCHEMA_VERSION: u32 = 1;

pub const COLUMNS: [&str; 15] = [
    "schema_version",
    "problem",
    "n",
    "params",
    "engine",
    "trial",
    "seed",
    "iterations",
    "fitness_evals",
    "row_evals",
    "t_max",
    "final_size",
    "final_error",
    "gen_error",
    "success",
];

/// One CSV line. Field order matches [`COLUMNS`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub schema_version: u32,
    pub problem: String,
    pub n: usize,
    pub params: String,
    pub engine: String,
    pub trial: u32,
    pub seed: u64,
    pub iterations: u64,
    pub fitness_evals: u64,
    pub row_evals: u64,
    pub t_max: usize,
    pub final_size: usize,
    pub final_error: f64,
    pub gen_error: Option<f64>,
    pub success: bool,
}

impl From<&TrialRecord> for CsvRow {
    fn from(t: &TrialRecord) -> Self {
        let r = &t.record;
        Self {
            schema_version: SCHEMA_VERSION,
            problem: t.problem.clone(),
            n: t.n,
            params: t.params.clone(),
            engine: t.engine.clone(),
            trial: t.trial,
            seed: t.seed,
            iterations: r.iterations,
            fitness_evals: r.fitness_evals,
            row_evals: r.row_evals,
            t_max: r.t_max,
            final_size: r.final_size,
            final_error: r.final_error,
            gen_error: r.generalization_error,
            success: r.success,
        }
    }
}

/// Writes a header once, then rows as they arrive.
pub struct CsvSink<W: Write> {
    writer: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    pub fn new(inner: W) -> Self {
        Self {
            writer: csv::WriterBuilder::new().has_headers(true).from_writer(inner),
        }
    }

    pub fn write(&mut self, rec: &TrialRecord) -> csv::Result<()> {
        self.writer.serialize(CsvRow::from(rec))?;
        self.writer.flush()?;
        Ok(())
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        self.writer.flush()?;
        self.writer.into_inner().map_err(|e| e.into_error())
    }
}

pub fn read_rows<R: Read>(reader: R) -> csv::Result<Vec<CsvRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != COLUMNS {
        return Err(csv::Error::from(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("unexpected CSV header {:?}", headers),
        )));
    }
    rdr.deserialize().collect()
}

/// Rows in (problem, params, engine, n, trial) order.
pub fn canonical_sort(rows: &mut [CsvRow]) {
    rows.sort_by(|a, b| {
        (&a.problem, &a.params, &a.engine, a.n, a.trial).cmp(&(&b.problem, &b.params, &b.engine, b.n, b.trial))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use gplab_core::engine::RunRecord;

    fn record(trial: u32, gen: Option<f64>) -> TrialRecord {
        TrialRecord {
            problem: "order".into(),
            n: 8,
            params: "a=1;b=2".into(),
            engine: "rls-gp".into(),
            trial,
            seed: 42,
            record: RunRecord {
                iterations: 10,
                fitness_evals: 11,
                row_evals: 11,
                t_max: 5,
                final_size: 4,
                final_error: 0.5,
                generalization_error: gen,
                success: true,
                seed: 42,
                trajectory: vec![],
            },
            failure: None,
        }
    }

    #[test]
    fn round_trip_and_header() {
        let mut sink = CsvSink::new(Vec::new());
        sink.write(&record(0, None)).unwrap();
        sink.write(&record(1, Some(0.25))).unwrap();
        let bytes = sink.finish().unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
        let rows = read_rows(bytes.as_slice()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0], CsvRow::from(&record(0, None)));
        assert_eq!(rows[1].gen_error, Some(0.25));
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(read_rows("a,b\n1,2\n".as_bytes()).is_err());
    }
}
