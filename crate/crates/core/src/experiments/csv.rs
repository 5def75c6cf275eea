use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::sweep::SweepRow;
use crate::error::{Error, Result};
use crate::randomness::SpreadReport;

pub const SWEEP_HEADER: [&str; 13] = [
    "n", "k", "ell", "r", "p", "trials", "successes", "unknowns", "p_hat", "wilson_low", "wilson_high", "seed",
    "elapsed_ms",
];

pub const SPREAD_HEADER: [&str; 7] = ["size", "sets", "max_frequency", "sum_frequency", "q_hat", "trials", "seed"];

fn write_rows<W: Write, T: Serialize>(out: W, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn read_rows<R: Read, T: for<'de> Deserialize<'de>>(input: R, header: &[&str]) -> Result<Vec<T>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let found = r.headers()?.clone();
    let missing: Vec<&str> = header.iter().copied().filter(|h| !found.iter().any(|f| f == *h)).collect();
    if !missing.is_empty() {
        return Err(Error::Schema(format!("CSV lacks columns {}", missing.join(", "))));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn write_sweep_csv_to<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    write_rows(out, &SWEEP_HEADER, rows)
}

pub fn read_sweep_csv_from<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    read_rows(input, &SWEEP_HEADER)
}

/// Writes sweep rows under the fixed header; an empty list gives a
/// header-only file.
pub fn write_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    write_sweep_csv_to(std::fs::File::create(path)?, rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<SweepRow>> {
    read_sweep_csv_from(std::fs::File::open(path)?)
}

/// One row per set size of a spread report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadRow {
    pub size: usize,
    pub sets: u128,
    pub max_frequency: f64,
    pub sum_frequency: f64,
    pub q_hat: f64,
    pub trials: usize,
    pub seed: u64,
}

pub fn spread_rows(report: &SpreadReport, seed: u64) -> Vec<SpreadRow> {
    report
        .per_size
        .iter()
        .map(|(&size, s)| SpreadRow {
            size,
            sets: s.sets,
            max_frequency: s.max,
            sum_frequency: s.sum,
            q_hat: report.q_hat,
            trials: report.trials,
            seed,
        })
        .collect()
}

pub fn write_spread_csv_to<W: Write>(out: W, rows: &[SpreadRow]) -> Result<()> {
    write_rows(out, &SPREAD_HEADER, rows)
}

pub fn read_spread_csv_from<R: Read>(input: R) -> Result<Vec<SpreadRow>> {
    read_rows(input, &SPREAD_HEADER)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(p: f64) -> SweepRow {
        SweepRow {
            n: 12,
            k: 2,
            ell: 1,
            r: 1,
            p,
            trials: 30,
            successes: 7,
            unknowns: 1,
            p_hat: 7.0 / 29.0,
            wilson_low: 0.1 + p / 3.0,
            wilson_high: 0.4111111111111111,
            seed: 5,
            elapsed_ms: 17,
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let rows = vec![row(0.1), row(1.0 / 3.0), row(0.0)];
        let mut buf = Vec::new();
        write_sweep_csv_to(&mut buf, &rows).unwrap();
        assert_eq!(read_sweep_csv_from(&buf[..]).unwrap(), rows);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,k,ell,r,p,trials,successes,unknowns,p_hat,wilson_low,wilson_high,seed,elapsed_ms\n"));
    }

    #[test]
    fn empty_list_is_header_only() {
        let mut buf = Vec::new();
        write_sweep_csv_to(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), format!("{}\n", SWEEP_HEADER.join(",")));
        assert!(read_sweep_csv_from(&buf[..]).unwrap().is_empty());
    }

    #[test]
    fn missing_column_is_a_schema_error() {
        let text = "n,k,ell,r,p,trials,successes,unknowns,p_hat,wilson_low,wilson_high,seed\n12,2,1,1,0.5,3,1,0,0.3,0.1,0.9,1\n";
        assert!(matches!(read_sweep_csv_from(text.as_bytes()), Err(Error::Schema(_))));
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("chainforge-csv-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("rows.csv");
        write_csv(&[row(0.25)], &path).unwrap();
        assert_eq!(read_csv(&path).unwrap(), vec![row(0.25)]);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
