//! CSV output with a single `#` provenance line ahead of the header row.
//!
//! Everything after the first line is a pure function of the inputs, so two
//! runs with the same config and seed differ only in that line.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{Error, Result};

pub struct CsvSink {
    path: PathBuf,
    writer: csv::Writer<BufWriter<File>>,
}

impl CsvSink {
    /// Creates `path`, writing `# <title> generated_unix=<secs>` as the first line.
    pub fn create(path: &Path, title: &str) -> Result<Self> {
        let io_err = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(out, "# {title} generated_unix={stamp}").map_err(io_err)?;
        Ok(Self {
            path: path.to_path_buf(),
            writer: csv::Writer::from_writer(out),
        })
    }

    pub fn write<T: Serialize>(&mut self, row: &T) -> Result<()> {
        self.writer.serialize(row).map_err(|source| Error::Csv {
            path: self.path.clone(),
            source,
        })
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush().map_err(|source| Error::Io {
            path: self.path.clone(),
            source,
        })
    }
}

/// Writes all rows in order.
pub fn write_rows<T: Serialize>(path: &Path, title: &str, rows: &[T]) -> Result<()> {
    let mut sink = CsvSink::create(path, title)?;
    for row in rows {
        sink.write(row)?;
    }
    sink.finish()
}

/// Reads a file written by [`CsvSink`], skipping `#` lines.
pub fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(csv_err)?;
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(csv_err)
}

/// File contents without the provenance line.
pub fn body(path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    struct Row {
        k: usize,
        value: f64,
        label: String,
    }

    #[test]
    fn round_trip_skips_stamp() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        let rows = vec![
            Row {
                k: 1,
                value: 0.1 + 0.2,
                label: "a".into(),
            },
            Row {
                k: 2,
                value: -1.5e-300,
                label: "b,c".into(),
            },
        ];
        write_rows(&path, "test", &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# test generated_unix="));
        assert_eq!(read_rows::<Row>(&path).unwrap(), rows);
        assert!(body(&path).unwrap().starts_with("k,value,label\n"));
    }

    #[test]
    fn missing_directory_reports_path() {
        let err = write_rows::<Row>(Path::new("/nonexistent/dir/x.csv"), "t", &[]).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/x.csv"));
    }
}
