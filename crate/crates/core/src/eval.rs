//! Segment-based examination: windowed RMSE against candidate targets,
//! pass counting, and the confusion matrix with its efficiency score.
//!
//! Test data is cut into a fixed number of segments (16 by default) spread
//! over the objects in label order. A segment "passes" a candidate object
//! when its RMSE against that object's one-hot target stays strictly below
//! the threshold; the percentage of passes out of the full segment count
//! fills one confusion-matrix cell.

use crate::error::{Error, Result};
use crate::fis::{output_errors, FisModel, SensorSample};
use crate::pipeline::one_hot_target;

/// Examination parameters. The per-segment sample count T is derived from
/// the data length at segmentation time.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    /// RMSE pass threshold (strict).
    pub epsilon: f64,
    /// Total number of examination segments.
    pub segments: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            epsilon: 0.1,
            segments: 16,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(Error::invalid_argument(format!(
                "epsilon must be a positive finite threshold, got {}",
                self.epsilon
            )));
        }
        if self.segments == 0 {
            return Err(Error::invalid_argument("segment count must be at least 1"));
        }
        Ok(())
    }
}

/// Root mean squared error of the model over a segment, against one fixed
/// target: `sqrt((1/T) * sum_k sum_l e_l(k)^2)`.
pub fn rmse(model: &FisModel, samples: &[SensorSample], target: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid_argument("cannot compute RMSE of an empty segment"));
    }
    let mut total = 0.0;
    for sample in samples {
        let prediction = model.infer(sample)?;
        total += output_errors(&prediction, target)?.squared_sum();
    }
    Ok((total / samples.len() as f64).sqrt())
}

/// Pass criterion: strictly below the threshold.
pub fn segment_passes(rmse_value: f64, epsilon: f64) -> bool {
    rmse_value < epsilon
}

/// Pass count and percentage for one (input segments, candidate target) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExamScore {
    /// Number of segments that passed.
    pub ec: usize,
    /// `ec / total_segments * 100`.
    pub pec: f64,
}

/// Per-candidate-object pass counts and percentages for one input object.
#[derive(Debug, Clone, PartialEq)]
pub struct ExamTally {
    pub ec: Vec<usize>,
    pub pec: Vec<f64>,
}

/// Examines segments against a single candidate target.
///
/// The percentage denominator is the full examination segment count, not the
/// number of segments passed in, so per-object scores stay comparable across
/// objects that own different segment shares.
pub fn examine<S: AsRef<[SensorSample]>>(
    model: &FisModel,
    segments: &[S],
    target: &[f64],
    epsilon: f64,
    total_segments: usize,
) -> Result<ExamScore> {
    if segments.is_empty() {
        return Err(Error::invalid_argument("examination needs at least one segment"));
    }
    if total_segments < segments.len() {
        return Err(Error::invalid_argument(format!(
            "total segment count {total_segments} is smaller than the {} segments provided",
            segments.len()
        )));
    }
    let mut ec = 0;
    for segment in segments {
        if segment_passes(rmse(model, segment.as_ref(), target)?, epsilon) {
            ec += 1;
        }
    }
    Ok(ExamScore {
        ec,
        pec: pec_percentage(ec, total_segments),
    })
}

/// Examines one input object's segments against every candidate object.
pub fn examine_against_all<S: AsRef<[SensorSample]>>(
    model: &FisModel,
    segments: &[S],
    epsilon: f64,
    total_segments: usize,
) -> Result<ExamTally> {
    let mut ec = Vec::with_capacity(model.output_count());
    let mut pec = Vec::with_capacity(model.output_count());
    for candidate in 1..=model.output_count() {
        let target = one_hot_target(candidate, model.output_count())?;
        let score = examine(model, segments, target.as_slice(), epsilon, total_segments)?;
        ec.push(score.ec);
        pec.push(score.pec);
    }
    Ok(ExamTally { ec, pec })
}

fn pec_percentage(ec: usize, total_segments: usize) -> f64 {
    ec as f64 * 100.0 / total_segments as f64
}

/// L x L grid of pass percentages: `cell[output][input]` is the PEC of the
/// input object's segments examined against the output object's target.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    cells: Vec<Vec<f64>>,
    efficiency: f64,
}

impl ConfusionMatrix {
    pub fn cells(&self) -> &[Vec<f64>] {
        &self.cells
    }

    pub fn cell(&self, output: usize, input: usize) -> f64 {
        self.cells[output][input]
    }

    pub fn size(&self) -> usize {
        self.cells.len()
    }

    /// Sum of the main-diagonal percentages.
    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    /// CSV rendering: input-label header, one row per output label, cells
    /// with two fractional digits, final `efficiency` line.
    pub fn to_csv(&self, labels: &[String]) -> String {
        let mut out = String::new();
        out.push_str("output");
        for label in labels {
            out.push(',');
            out.push_str(label);
        }
        out.push('\n');
        for (row, label) in self.cells.iter().zip(labels) {
            out.push_str(label);
            for cell in row {
                out.push_str(&format!(",{cell:.2}"));
            }
            out.push('\n');
        }
        out.push_str(&format!("efficiency,{:.2}\n", self.efficiency));
        out
    }

    /// Aligned terminal table with the efficiency line appended.
    pub fn render_table(&self, labels: &[String]) -> String {
        let corner = "output \\ input";
        let label_width = labels
            .iter()
            .map(String::len)
            .chain([corner.len()])
            .max()
            .unwrap_or(0);
        let cell_width = labels.iter().map(String::len).chain([8]).max().unwrap_or(8);

        let mut out = format!("{corner:<label_width$}");
        for label in labels {
            out.push_str(&format!("  {label:>cell_width$}"));
        }
        out.push('\n');
        for (row, label) in self.cells.iter().zip(labels) {
            out.push_str(&format!("{label:<label_width$}"));
            for cell in row {
                out.push_str(&format!("  {:>cell_width$}", format!("{cell:.2}")));
            }
            out.push('\n');
        }
        out.push_str(&format!("efficiency: {:.2}\n", self.efficiency));
        out
    }
}

/// Builds the confusion matrix from per-object segmented test inputs.
///
/// `per_object_inputs[i]` holds the segments cut from input object `i`; the
/// segment counts must sum to `total_segments`.
pub fn confusion_matrix<S: AsRef<[SensorSample]>>(
    model: &FisModel,
    per_object_inputs: &[Vec<S>],
    epsilon: f64,
    total_segments: usize,
) -> Result<ConfusionMatrix> {
    let objects = model.output_count();
    if per_object_inputs.len() != objects {
        return Err(Error::invalid_argument(format!(
            "got segments for {} objects but the model has {objects} outputs",
            per_object_inputs.len()
        )));
    }
    let provided: usize = per_object_inputs.iter().map(Vec::len).sum();
    if provided != total_segments {
        return Err(Error::invalid_argument(format!(
            "segment counts sum to {provided}, expected {total_segments}"
        )));
    }

    let mut cells = vec![vec![0.0; objects]; objects];
    for (input, segments) in per_object_inputs.iter().enumerate() {
        let tally = examine_against_all(model, segments, epsilon, total_segments)?;
        for (output, pec) in tally.pec.iter().enumerate() {
            cells[output][input] = *pec;
        }
    }
    let efficiency = (0..objects).map(|i| cells[i][i]).sum();
    Ok(ConfusionMatrix { cells, efficiency })
}

/// Segment shares per object in label order: every object gets
/// `total / objects`, the last object absorbs the remainder.
pub fn segment_counts(total_segments: usize, objects: usize) -> Vec<usize> {
    if objects == 0 {
        return Vec::new();
    }
    let base = total_segments / objects;
    let mut counts = vec![base; objects];
    counts[objects - 1] += total_segments % objects;
    counts
}

/// Cuts an object's test samples into `count` consecutive segments of
/// `T = len / count` samples each, discarding any trailing remainder.
pub fn segment_object(samples: &[SensorSample], count: usize) -> Result<Vec<&[SensorSample]>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let t = samples.len() / count;
    if t == 0 {
        return Err(Error::invalid_argument(format!(
            "object has {} test samples, fewer than the {count} segments required",
            samples.len()
        )));
    }
    Ok(samples.chunks(t).take(count).collect())
}
