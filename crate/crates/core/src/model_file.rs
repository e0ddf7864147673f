//! On-disk model format: a self-describing text file with a version line,
//! header fields, and the three parameter matrices as row-major decimal text.
//!
//! Values are written in Rust's shortest round-trip form, so saving and
//! loading reproduces the model bit-exactly, and files diff cleanly.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fis::{Combinator, FisModel, Matrix};

const VERSION_LINE: &str = "fisnose-model v1";

/// A trained model together with the object labels and the training
/// configuration that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub model: FisModel,
    pub labels: Vec<String>,
    pub eta: f64,
    pub epochs: usize,
    pub seed: u64,
    pub shuffle: bool,
}

impl ModelFile {
    pub fn new(
        model: FisModel,
        labels: Vec<String>,
        eta: f64,
        epochs: usize,
        seed: u64,
        shuffle: bool,
    ) -> Result<Self> {
        if labels.len() != model.output_count() {
            return Err(Error::invalid_argument(format!(
                "{} labels for a model with {} outputs",
                labels.len(),
                model.output_count()
            )));
        }
        if labels.iter().any(|l| l.is_empty() || l.contains(',') || l.contains('\n')) {
            return Err(Error::invalid_argument(
                "labels must be non-empty and free of commas and newlines",
            ));
        }
        Ok(ModelFile {
            model,
            labels,
            eta,
            epochs,
            seed,
            shuffle,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{VERSION_LINE}");
        let _ = writeln!(out, "combinator {}", self.model.combinator());
        let _ = writeln!(out, "inputs {}", self.model.input_count());
        let _ = writeln!(out, "rules {}", self.model.rule_count());
        let _ = writeln!(out, "outputs {}", self.model.output_count());
        let _ = writeln!(out, "labels {}", self.labels.join(","));
        let _ = writeln!(out, "eta {}", self.eta);
        let _ = writeln!(out, "epochs {}", self.epochs);
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(out, "shuffle {}", self.shuffle);
        for (name, matrix) in [
            ("input_centers", self.model.input_centers()),
            ("input_widths", self.model.input_widths()),
            ("output_centers", self.model.output_centers()),
        ] {
            let _ = writeln!(out, "{name}");
            for row in 0..matrix.rows() {
                let line: Vec<String> = matrix.row(row).iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let mut next_line = |expect: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((index, line)) => Ok((index + 1, line.to_string())),
                None => Err(Error::parse(0, format!("file ended before {expect}"))),
            }
        };

        let (line_no, version) = next_line("the version line")?;
        if version != VERSION_LINE {
            return Err(Error::parse(
                line_no,
                format!("expected `{VERSION_LINE}`, got `{version}`"),
            ));
        }

        let mut field = |name: &str| -> Result<(usize, String)> {
            let (line_no, line) = next_line(&format!("field `{name}`"))?;
            match line.split_once(' ') {
                Some((key, value)) if key == name => Ok((line_no, value.to_string())),
                _ => Err(Error::parse(line_no, format!("expected `{name} <value>`, got `{line}`"))),
            }
        };

        let combinator: Combinator = {
            let (line_no, value) = field("combinator")?;
            value
                .parse()
                .map_err(|e: Error| Error::parse(line_no, e.to_string()))?
        };
        let parse_usize = |(line_no, value): (usize, String)| -> Result<usize> {
            value
                .parse()
                .map_err(|_| Error::parse(line_no, format!("`{value}` is not a count")))
        };
        let inputs = parse_usize(field("inputs")?)?;
        let rules = parse_usize(field("rules")?)?;
        let outputs = parse_usize(field("outputs")?)?;
        let labels: Vec<String> = {
            let (_, value) = field("labels")?;
            value.split(',').map(str::to_string).collect()
        };
        let eta: f64 = {
            let (line_no, value) = field("eta")?;
            value
                .parse()
                .map_err(|_| Error::parse(line_no, format!("`{value}` is not a number")))?
        };
        let epochs = parse_usize(field("epochs")?)?;
        let seed: u64 = {
            let (line_no, value) = field("seed")?;
            value
                .parse()
                .map_err(|_| Error::parse(line_no, format!("`{value}` is not a seed")))?
        };
        let shuffle: bool = {
            let (line_no, value) = field("shuffle")?;
            value
                .parse()
                .map_err(|_| Error::parse(line_no, format!("`{value}` is not a boolean")))?
        };

        let mut matrix = |name: &str, rows: usize, cols: usize| -> Result<Matrix> {
            let (line_no, line) = next_line(&format!("matrix `{name}`"))?;
            if line != name {
                return Err(Error::parse(line_no, format!("expected matrix `{name}`, got `{line}`")));
            }
            let mut data = Vec::with_capacity(rows);
            for _ in 0..rows {
                let (line_no, line) = next_line(&format!("a row of `{name}`"))?;
                let row: Vec<f64> = line
                    .split(' ')
                    .map(|field| {
                        field.parse().map_err(|_| {
                            Error::parse(line_no, format!("`{field}` is not a number in `{name}`"))
                        })
                    })
                    .collect::<Result<_>>()?;
                if row.len() != cols {
                    return Err(Error::parse(
                        line_no,
                        format!("`{name}` row has {} values, expected {cols}", row.len()),
                    ));
                }
                data.push(row);
            }
            Matrix::from_rows(data)
        };

        let input_centers = matrix("input_centers", inputs, rules)?;
        let input_widths = matrix("input_widths", inputs, rules)?;
        let output_centers = matrix("output_centers", outputs, rules)?;
        let model = FisModel::from_parts(combinator, input_centers, input_widths, output_centers)?;
        ModelFile::new(model, labels, eta, epochs, seed, shuffle)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_file() -> ModelFile {
        let model = FisModel::init(5, 10, 3, Combinator::ExpOfNegatedSum, 42).unwrap();
        ModelFile::new(
            model,
            vec!["apple".into(), "banana".into(), "citrus".into()],
            0.1,
            10,
            42,
            false,
        )
        .unwrap()
    }

    #[test]
    fn text_roundtrip_is_bit_exact() {
        let original = sample_file();
        let text = original.to_text();
        let loaded = ModelFile::from_text(&text).unwrap();
        assert_eq!(loaded, original);
        assert_eq!(loaded.to_text(), text);
    }

    #[test]
    fn roundtrip_survives_training_artifacts() {
        // Trained parameters are arbitrary doubles, not pretty decimals.
        let model = FisModel::init(2, 3, 2, Combinator::ProductOfGaussians, 7).unwrap();
        let sample = crate::fis::SensorSample::new(vec![0.3, 0.9]).unwrap();
        let model = model.train_step(&sample, &[1.0, 0.0], 0.137).unwrap();
        let file = ModelFile::new(model, vec!["a".into(), "b".into()], 0.137, 3, 7, true).unwrap();
        let loaded = ModelFile::from_text(&file.to_text()).unwrap();
        assert_eq!(loaded, file);
    }

    #[test]
    fn rejects_wrong_version_line() {
        let err = ModelFile::from_text("fisnose-model v9\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn rejects_truncated_and_malformed_files() {
        let text = sample_file().to_text();
        let truncated: String = text.lines().take(12).collect::<Vec<_>>().join("\n");
        assert!(ModelFile::from_text(&truncated).is_err());

        let broken = text.replace("rules 10", "rules ten");
        assert!(ModelFile::from_text(&broken).is_err());

        let bad_width = text.replacen("input_widths\n", "input_widths\nnot a row\n", 1);
        assert!(ModelFile::from_text(&bad_width).is_err());
    }

    #[test]
    fn label_count_must_match_outputs() {
        let model = FisModel::init(5, 10, 3, Combinator::ExpOfNegatedSum, 1).unwrap();
        assert!(ModelFile::new(model, vec!["only".into()], 0.1, 10, 1, false).is_err());
    }
}
