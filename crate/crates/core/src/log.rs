//! Per-run time series and its CSV form.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::RunError;

pub const CSV_HEADER: [&str; 6] = [
    "iteration",
    "visited_infosets",
    "wall_time_s",
    "exploitability",
    "window",
    "population_size",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRow {
    pub iteration: u64,
    /// Cumulative algorithm work: CFR traversals, best responses and threshold probes.
    pub visited_infosets: u64,
    pub wall_time_s: f64,
    pub exploitability: f64,
    pub window: u64,
    pub population_size: u64,
}

impl LogRow {
    fn record(&self) -> [String; 6] {
        [
            self.iteration.to_string(),
            self.visited_infosets.to_string(),
            format!("{:.16e}", self.wall_time_s),
            format!("{:.16e}", self.exploitability),
            self.window.to_string(),
            self.population_size.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunLog {
    rows: Vec<LogRow>,
}

impl RunLog {
    pub fn push(&mut self, row: LogRow) {
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[LogRow] {
        &self.rows
    }

    pub fn last(&self) -> Option<&LogRow> {
        self.rows.last()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), RunError> {
        let mut writer = CsvLogWriter::new(out)?;
        for row in &self.rows {
            writer.write(row)?;
        }
        writer.flush()
    }

    pub fn to_csv_string(&self) -> Result<String, RunError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is ascii"))
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, RunError> {
        let mut reader = csv::Reader::from_reader(input);
        let header = reader.headers()?;
        if header.iter().ne(CSV_HEADER) {
            return Err(RunError::Config(format!("unexpected csv header {:?}", header.as_slice())));
        }
        let rows = reader
            .deserialize::<LogRow>()
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { rows })
    }
}

/// Streams rows to CSV as they are produced.
pub struct CsvLogWriter<W: Write> {
    writer: csv::Writer<W>,
}

impl<W: Write> CsvLogWriter<W> {
    pub fn new(out: W) -> Result<Self, RunError> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(CSV_HEADER)?;
        Ok(Self { writer })
    }

    pub fn write(&mut self, row: &LogRow) -> Result<(), RunError> {
        self.writer.write_record(row.record())?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<(), RunError> {
        self.writer.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let mut log = RunLog::default();
        for i in 1..20u64 {
            log.push(LogRow {
                iteration: i * 10,
                visited_infosets: i * 12345,
                wall_time_s: (i as f64).sqrt() / 7.0,
                exploitability: 1.0 / (i as f64 * 3.0) + 1e-17,
                window: i / 4,
                population_size: 10 + i,
            });
        }
        let text = log.to_csv_string().unwrap();
        assert!(text.starts_with("iteration,visited_infosets,wall_time_s,exploitability,window,population_size\n"));
        let back = RunLog::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, log);
        for (a, b) in back.rows().iter().zip(log.rows()) {
            assert_eq!(a.exploitability.to_bits(), b.exploitability.to_bits());
        }
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(RunLog::read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
