//! Session CSV files.
//!
//! Schema: a header of channel names plus a final `label` column, one sample
//! per row, values as plain decimal text. The standard five-channel header is
//! `mq135,tgs2610,mq2,tgs2611,mq3,label`. Rows labeled `rest` are retained in
//! files but excluded from the loaded dataset. Values are written in Rust's
//! shortest round-trip form, so write-then-read is exact.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{LabeledDataset, SessionRow, REST_LABEL};
use crate::error::{Error, Result};
use crate::fis::SensorSample;

const LABEL_COLUMN: &str = "label";

/// Reads a session CSV into a dataset (rest rows dropped).
pub fn read_csv(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    read_csv_from(BufReader::new(File::open(path)?))
}

/// Reader-level variant of [`read_csv`].
pub fn read_csv_from(reader: impl Read) -> Result<LabeledDataset> {
    let mut lines = BufReader::new(reader).lines();
    let header = match lines.next() {
        Some(line) => line?,
        None => return Err(Error::parse(1, "missing header")),
    };
    let mut columns: Vec<&str> = header.split(',').collect();
    match columns.pop() {
        Some(LABEL_COLUMN) if !columns.is_empty() => {}
        _ => {
            return Err(Error::parse(
                1,
                format!("header must be channel names followed by `{LABEL_COLUMN}`, got `{header}`"),
            ))
        }
    }
    if columns.iter().any(|c| c.is_empty()) {
        return Err(Error::parse(1, "header contains an empty channel name"));
    }
    let channels: Vec<String> = columns.iter().map(|c| c.to_string()).collect();

    let mut rows = Vec::new();
    for (index, line) in lines.enumerate() {
        let line_no = index + 2;
        let line = line?;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != channels.len() + 1 {
            return Err(Error::parse(
                line_no,
                format!(
                    "expected {} columns, found {}",
                    channels.len() + 1,
                    fields.len()
                ),
            ));
        }
        let mut values = Vec::with_capacity(channels.len());
        for (column, field) in channels.iter().zip(&fields) {
            let value: f64 = field.parse().map_err(|_| {
                Error::parse(line_no, format!("column `{column}`: `{field}` is not a number"))
            })?;
            if !value.is_finite() {
                return Err(Error::parse(
                    line_no,
                    format!("column `{column}`: value `{field}` is not finite"),
                ));
            }
            values.push(value);
        }
        let label = fields[channels.len()];
        if label != REST_LABEL && (label.is_empty() || label.trim() != label) {
            return Err(Error::parse(line_no, format!("unknown label `{label}`")));
        }
        rows.push(SessionRow {
            label: label.to_string(),
            sample: SensorSample::new(values)
                .map_err(|e| Error::parse(line_no, e.to_string()))?,
        });
    }
    LabeledDataset::from_rows(channels, rows)
}

/// Writes a dataset as a session CSV (object rows only).
pub fn write_csv(dataset: &LabeledDataset, path: impl AsRef<Path>) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    write_csv_to(dataset, &mut file)?;
    file.flush()?;
    Ok(())
}

/// Writer-level variant of [`write_csv`].
pub fn write_csv_to(dataset: &LabeledDataset, writer: &mut impl Write) -> Result<()> {
    write_header(dataset.channels(), writer)?;
    for object in dataset.objects() {
        for sample in object.samples() {
            write_row(object.label(), sample, writer)?;
        }
    }
    Ok(())
}

/// Writes a full session recording, rest rows included.
pub fn write_session_csv(
    channels: &[String],
    rows: &[SessionRow],
    path: impl AsRef<Path>,
) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    write_session_csv_to(channels, rows, &mut file)?;
    file.flush()?;
    Ok(())
}

/// Writer-level variant of [`write_session_csv`].
pub fn write_session_csv_to(
    channels: &[String],
    rows: &[SessionRow],
    writer: &mut impl Write,
) -> Result<()> {
    write_header(channels, writer)?;
    for row in rows {
        write_row(&row.label, &row.sample, writer)?;
    }
    Ok(())
}

fn write_header(channels: &[String], writer: &mut impl Write) -> Result<()> {
    writeln!(writer, "{},{LABEL_COLUMN}", channels.join(","))?;
    Ok(())
}

fn write_row(label: &str, sample: &SensorSample, writer: &mut impl Write) -> Result<()> {
    for value in sample.channels() {
        write!(writer, "{value},")?;
    }
    writeln!(writer, "{label}")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate_session, generate_session_rows, SessionConfig, CHANNEL_NAMES};

    fn roundtrip(dataset: &LabeledDataset) -> LabeledDataset {
        let mut buffer = Vec::new();
        write_csv_to(dataset, &mut buffer).unwrap();
        read_csv_from(buffer.as_slice()).unwrap()
    }

    #[test]
    fn empty_file_reports_missing_header() {
        let err = read_csv_from("".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("missing header"), "{err}");
    }

    #[test]
    fn minimal_file_one_row_per_object() {
        let text = "mq135,tgs2610,mq2,tgs2611,mq3,label\n\
                    0.1,0.2,0.3,0.4,0.5,a\n\
                    0.5,0.4,0.3,0.2,0.1,b\n\
                    1,1,1,1,1,c\n";
        let ds = read_csv_from(text.as_bytes()).unwrap();
        assert_eq!(ds.object_count(), 3);
        assert_eq!(ds.channels(), &LabeledDataset::standard_channels()[..]);
        for object in ds.objects() {
            assert_eq!(object.len(), 1);
        }
    }

    #[test]
    fn malformed_rows_carry_line_numbers() {
        let header = "mq135,tgs2610,mq2,tgs2611,mq3,label\n";
        let cases = [
            ("0.1,0.2,0.3,a\n", "expected 6 columns"),
            ("0.1,0.2,x,0.4,0.5,a\n", "is not a number"),
            ("0.1,0.2,0.3,0.4,0.5,\n", "unknown label"),
            ("0.1,0.2,0.3,0.4,nan,a\n", "not finite"),
        ];
        for (row, expected) in cases {
            let err = read_csv_from(format!("{header}{row}").as_bytes()).unwrap_err();
            match err {
                Error::Parse { line, ref message } => {
                    assert_eq!(line, 2);
                    assert!(message.contains(expected), "`{message}` vs `{expected}`");
                }
                other => panic!("expected parse error, got {other}"),
            }
        }
    }

    #[test]
    fn rejects_header_without_label_column() {
        let err = read_csv_from("a,b,c\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn dataset_roundtrip_is_identity() {
        let config = SessionConfig {
            rest_duration: 5,
            exposure_duration: 20,
            inter_rest_duration: 3,
            ..SessionConfig::default()
        };
        let ds = generate_session(&config).unwrap();
        assert_eq!(roundtrip(&ds), ds);
    }

    #[test]
    fn session_file_retains_rest_rows_but_dataset_drops_them() {
        let config = SessionConfig {
            rest_duration: 4,
            exposure_duration: 3,
            inter_rest_duration: 2,
            ..SessionConfig::default()
        };
        let rows = generate_session_rows(&config).unwrap();
        let channels = LabeledDataset::standard_channels();
        let mut buffer = Vec::new();
        write_session_csv_to(&channels, &rows, &mut buffer).unwrap();

        let text = String::from_utf8(buffer.clone()).unwrap();
        assert!(text.starts_with(&format!("{},label\n", CHANNEL_NAMES.join(","))));
        assert_eq!(text.matches(",rest\n").count(), 4 + 2 * 2);

        let ds = read_csv_from(buffer.as_slice()).unwrap();
        assert_eq!(ds.object_count(), 3);
        assert_eq!(ds.sample_count(), 9);
    }
}
