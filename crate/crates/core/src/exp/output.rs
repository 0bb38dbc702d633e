//! Result persistence: raw and aggregated CSVs, plot-ready series files,
//! threshold reports, and the incremental progress journal.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! re-run over identical records reproduces the files byte for byte.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::threshold::{PointStat, SeriesKey, ThresholdReport};
use super::{ExpError, ResultRecord};

/// Column order of the raw record CSV.
pub const RAW_HEADER: &str = "model,p,n,L,instance,final_cost,iterations,shots,seed,depth";

/// Column order of the aggregated CSV.
pub const AGGREGATE_HEADER: &str = "model,p,n,L,instances,mean_final_cost,se_final_cost";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExpError + '_ {
    move |source| ExpError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn raw_row(rec: &ResultRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        rec.model,
        rec.p,
        rec.n,
        rec.layers,
        rec.instance,
        rec.final_cost,
        rec.iterations,
        rec.shots,
        rec.seed,
        rec.depth
    )
}

/// Writes the raw per-instance records.
pub fn write_raw_csv(path: &Path, records: &[ResultRecord]) -> Result<(), ExpError> {
    let mut out = BufWriter::new(File::create(path).map_err(io_err(path))?);
    let write = |out: &mut BufWriter<File>, line: &str| -> std::io::Result<()> {
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")
    };
    write(&mut out, RAW_HEADER).map_err(io_err(path))?;
    for rec in records {
        write(&mut out, &raw_row(rec)).map_err(io_err(path))?;
    }
    out.flush().map_err(io_err(path))
}

/// Writes per-point means and standard errors.
pub fn write_aggregate_csv(
    path: &Path,
    series: &BTreeMap<SeriesKey, Vec<PointStat>>,
) -> Result<(), ExpError> {
    let mut out = BufWriter::new(File::create(path).map_err(io_err(path))?);
    writeln!(out, "{}", AGGREGATE_HEADER).map_err(io_err(path))?;
    for (key, points) in series {
        for pt in points {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                key.model, pt.p, key.n, key.layers, pt.instances, pt.mean, pt.se
            )
            .map_err(io_err(path))?;
        }
    }
    out.flush().map_err(io_err(path))
}

/// Writes one two-column `p cost` file per series, named
/// `plot_<model>_n<n>_L<L>.dat`. Returns the paths written.
pub fn write_plot_files(
    dir: &Path,
    series: &BTreeMap<SeriesKey, Vec<PointStat>>,
) -> Result<Vec<PathBuf>, ExpError> {
    let mut written = Vec::new();
    for (key, points) in series {
        let path = dir.join(format!("plot_{}_n{}_L{}.dat", key.model, key.n, key.layers));
        let mut out = BufWriter::new(File::create(&path).map_err(io_err(&path))?);
        writeln!(out, "# final cost vs noise level: {}", key).map_err(io_err(&path))?;
        writeln!(out, "# p mean_final_cost").map_err(io_err(&path))?;
        for pt in points {
            writeln!(out, "{} {}", pt.p, pt.mean).map_err(io_err(&path))?;
        }
        out.flush().map_err(io_err(&path))?;
        written.push(path);
    }
    Ok(written)
}

/// Writes the threshold report with pairwise model comparisons.
pub fn write_threshold_report(
    path: &Path,
    reports: &[ThresholdReport],
    comparisons: &[String],
) -> Result<(), ExpError> {
    let mut out = BufWriter::new(File::create(path).map_err(io_err(path))?);
    writeln!(out, "# noise-resiliency thresholds").map_err(io_err(path))?;
    for report in reports {
        writeln!(out, "{}", report).map_err(io_err(path))?;
    }
    if !comparisons.is_empty() {
        writeln!(out, "# pairwise comparisons (grid resolution)").map_err(io_err(path))?;
        for line in comparisons {
            writeln!(out, "{}", line).map_err(io_err(path))?;
        }
    }
    out.flush().map_err(io_err(path))
}

/// Append-only journal of completed records, one JSON object per line.
pub struct ProgressWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl ProgressWriter {
    /// Opens the journal for appending, creating it if absent.
    pub fn open(path: &Path) -> Result<Self, ExpError> {
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(io_err(path))?;
        Ok(ProgressWriter {
            path: path.to_path_buf(),
            out: BufWriter::new(file),
        })
    }

    /// Appends one record and flushes, so a killed run loses at most the
    /// record being written.
    pub fn append(&mut self, record: &ResultRecord) -> Result<(), ExpError> {
        let line = serde_json::to_string(record)?;
        self.out.write_all(line.as_bytes()).map_err(io_err(&self.path))?;
        self.out.write_all(b"\n").map_err(io_err(&self.path))?;
        self.out.flush().map_err(io_err(&self.path))
    }
}

/// Reads journalled records back.
///
/// A torn final line (from a run killed mid-write) is dropped; malformed
/// JSON anywhere else is an error.
pub fn read_progress(path: &Path) -> Result<Vec<ResultRecord>, ExpError> {
    let file = File::open(path).map_err(io_err(path))?;
    let lines: Vec<String> = BufReader::new(file)
        .lines()
        .collect::<Result<_, _>>()
        .map_err(io_err(path))?;
    let mut records = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ResultRecord>(line) {
            Ok(rec) => records.push(rec),
            Err(_) if i + 1 == lines.len() => break,
            Err(err) => return Err(ExpError::Json(err)),
        }
    }
    Ok(records)
}

/// Parses a raw CSV written by [`write_raw_csv`].
pub fn read_raw_csv(path: &Path) -> Result<Vec<ResultRecord>, ExpError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .transpose()
        .map_err(io_err(path))?
        .unwrap_or_default();
    if header.trim() != RAW_HEADER {
        return Err(ExpError::BadCsvHeader {
            path: path.to_path_buf(),
            found: header,
        });
    }
    let mut records = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(ExpError::BadCsvRow {
                path: path.to_path_buf(),
                line: lineno + 2,
            });
        }
        let row_err = || ExpError::BadCsvRow {
            path: path.to_path_buf(),
            line: lineno + 2,
        };
        records.push(ResultRecord {
            model: fields[0].to_string(),
            p: fields[1].parse().map_err(|_| row_err())?,
            n: fields[2].parse().map_err(|_| row_err())?,
            layers: fields[3].parse().map_err(|_| row_err())?,
            instance: fields[4].parse().map_err(|_| row_err())?,
            final_cost: fields[5].parse().map_err(|_| row_err())?,
            iterations: fields[6].parse().map_err(|_| row_err())?,
            shots: fields[7].parse().map_err(|_| row_err())?,
            seed: fields[8].parse().map_err(|_| row_err())?,
            depth: fields[9].parse().map_err(|_| row_err())?,
            gates: BTreeMap::new(),
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exp::threshold::aggregate;

    fn record(p: f64, instance: usize, cost: f64) -> ResultRecord {
        ResultRecord {
            model: "cat".to_string(),
            p,
            n: 5,
            layers: 2,
            instance,
            final_cost: cost,
            iterations: 137,
            shots: 10_000,
            seed: 42,
            depth: 31,
            gates: BTreeMap::from([("CNOT".to_string(), 12)]),
        }
    }

    #[test]
    fn raw_csv_round_trips_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("raw.csv");
        let records = vec![
            record(1e-9, 0, 0.2734182374),
            record(3.1622776601683795e-5, 1, 0.5),
        ];
        write_raw_csv(&path, &records).unwrap();

        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(RAW_HEADER));

        let back = read_raw_csv(&path).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].p.to_bits(), records[0].p.to_bits());
        assert_eq!(back[1].p.to_bits(), records[1].p.to_bits());
        assert_eq!(back[0].final_cost, records[0].final_cost);
        assert_eq!(back[1].model, "cat");
        assert_eq!(back[1].depth, 31);
    }

    #[test]
    fn empty_record_set_writes_headers_only() {
        let dir = tempfile::tempdir().unwrap();
        let raw = dir.path().join("raw.csv");
        let agg = dir.path().join("aggregate.csv");
        write_raw_csv(&raw, &[]).unwrap();
        write_aggregate_csv(&agg, &BTreeMap::new()).unwrap();
        assert_eq!(
            std::fs::read_to_string(&raw).unwrap(),
            format!("{}\n", RAW_HEADER)
        );
        assert_eq!(
            std::fs::read_to_string(&agg).unwrap(),
            format!("{}\n", AGGREGATE_HEADER)
        );
        assert!(read_raw_csv(&raw).unwrap().is_empty());
    }

    #[test]
    fn mismatched_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("raw.csv");
        std::fs::write(&path, "model,p,n\ncat,0.1,5\n").unwrap();
        assert!(matches!(
            read_raw_csv(&path),
            Err(ExpError::BadCsvHeader { .. })
        ));
    }

    #[test]
    fn progress_journal_survives_a_torn_tail() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("progress.jsonl");
        {
            let mut journal = ProgressWriter::open(&path).unwrap();
            journal.append(&record(1e-3, 0, 0.3)).unwrap();
            journal.append(&record(1e-3, 1, 0.4)).unwrap();
        }
        let mut bytes = std::fs::read(&path).unwrap();
        bytes.extend_from_slice(b"{\"model\":\"cat\",\"p\":0.0");
        std::fs::write(&path, bytes).unwrap();

        let records = read_progress(&path).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[1].instance, 1);
        assert_eq!(records[1].gates["CNOT"], 12);
    }

    #[test]
    fn corrupt_middle_line_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("progress.jsonl");
        let good = serde_json::to_string(&record(1e-3, 0, 0.3)).unwrap();
        std::fs::write(&path, format!("{}\nnot json\n{}\n", good, good)).unwrap();
        assert!(read_progress(&path).is_err());
    }

    #[test]
    fn journal_round_trips_floats_to_the_exact_bit() {
        // Resume compacts the journal by parsing and re-serializing every
        // record, so parsing must return the identical f64: shot means are
        // repeating binary fractions, and a 1-ulp parse error would change
        // the CSV bytes on every resume.
        let costs = [
            0.19933333333333295,
            0.21833333333333282,
            1.0 / 3.0,
            0.1 + 0.2,
            f64::MIN_POSITIVE,
        ];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("progress.jsonl");
        {
            let mut journal = ProgressWriter::open(&path).unwrap();
            for (i, &cost) in costs.iter().enumerate() {
                journal.append(&record(1e-3, i, cost)).unwrap();
            }
        }
        let back = read_progress(&path).unwrap();
        assert_eq!(back.len(), costs.len());
        for (rec, &cost) in back.iter().zip(&costs) {
            assert_eq!(rec.final_cost.to_bits(), cost.to_bits());
        }
    }

    #[test]
    fn plot_files_carry_two_columns_per_series() {
        let dir = tempfile::tempdir().unwrap();
        let records = vec![record(1e-3, 0, 0.25), record(1e-2, 0, 0.5)];
        let series = aggregate(&records);
        let paths = write_plot_files(dir.path(), &series).unwrap();
        assert_eq!(paths.len(), 1);
        assert!(paths[0].ends_with("plot_cat_n5_L2.dat"));
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        let data_lines: Vec<&str> = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.is_empty())
            .collect();
        assert_eq!(data_lines, vec!["0.001 0.25", "0.01 0.5"]);
    }

    #[test]
    fn record_json_keeps_the_layer_field_short() {
        let json = serde_json::to_string(&record(0.1, 3, 0.5)).unwrap();
        assert!(json.contains("\"L\":2"), "json: {}", json);
        assert!(json.contains("\"gates\""));
    }
}
