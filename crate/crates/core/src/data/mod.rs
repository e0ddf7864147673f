//! Dataset container and ingest: ADC conversion, synthetic session
//! generation, CSV files, and the live line protocol.

mod adc;
mod csv;
mod stream;
mod synth;

pub use adc::{adc_to_volts, RawAdcReading, ADC_MAX, VOLTS_PER_UNIT};
pub use csv::{read_csv, read_csv_from, write_csv, write_csv_to, write_session_csv, write_session_csv_to};
pub use stream::read_stream;
pub use synth::{generate_session, generate_session_rows, ObjectProfile, SessionConfig};

use crate::error::{Error, Result};
use crate::fis::SensorSample;

/// Channel column order used everywhere: `z1..z5`.
pub const CHANNEL_NAMES: [&str; 5] = ["mq135", "tgs2610", "mq2", "tgs2611", "mq3"];

/// Label reserved for rest-phase rows; such rows are kept in session files
/// but never become part of a [`LabeledDataset`].
pub const REST_LABEL: &str = "rest";

/// Hard ceiling on sensor voltages.
pub const VOLTAGE_MAX: f64 = 5.0;

/// One recorded row of a session: a sample plus the label active at that
/// time step (an object label or [`REST_LABEL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct SessionRow {
    pub label: String,
    pub sample: SensorSample,
}

/// Time-ordered samples for one labeled object.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectSeries {
    label: String,
    samples: Vec<SensorSample>,
}

impl ObjectSeries {
    pub fn new(label: impl Into<String>, samples: Vec<SensorSample>) -> Result<Self> {
        let label = label.into();
        validate_label(&label)?;
        Ok(ObjectSeries { label, samples })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn samples(&self) -> &[SensorSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn validate_label(label: &str) -> Result<()> {
    if label.is_empty() {
        return Err(Error::invalid_argument("object label must not be empty"));
    }
    if label == REST_LABEL {
        return Err(Error::invalid_argument(format!(
            "`{REST_LABEL}` is reserved for rest-phase rows"
        )));
    }
    if label.contains(',') || label.contains('\n') {
        return Err(Error::invalid_argument(format!(
            "object label `{label}` must not contain commas or newlines"
        )));
    }
    Ok(())
}

/// Ordered per-object sample lists with a channel-name manifest.
///
/// Every sample has exactly `channels.len()` values; the object count is the
/// model's output count `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    channels: Vec<String>,
    objects: Vec<ObjectSeries>,
}

impl LabeledDataset {
    pub fn new(channels: Vec<String>, objects: Vec<ObjectSeries>) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::invalid_argument("dataset needs at least one channel"));
        }
        let mut seen = std::collections::HashSet::new();
        for object in &objects {
            if !seen.insert(object.label.clone()) {
                return Err(Error::invalid_argument(format!(
                    "duplicate object label `{}`",
                    object.label
                )));
            }
            if let Some(sample) = object.samples.iter().find(|s| s.len() != channels.len()) {
                return Err(Error::invalid_argument(format!(
                    "object `{}` has a sample with {} channels, expected {}",
                    object.label,
                    sample.len(),
                    channels.len()
                )));
            }
        }
        Ok(LabeledDataset { channels, objects })
    }

    /// Groups session rows by label in order of first appearance, dropping
    /// rest-phase rows.
    pub fn from_rows(channels: Vec<String>, rows: Vec<SessionRow>) -> Result<Self> {
        let mut order: Vec<String> = Vec::new();
        let mut grouped: std::collections::HashMap<String, Vec<SensorSample>> =
            std::collections::HashMap::new();
        for row in rows {
            if row.label == REST_LABEL {
                continue;
            }
            if !grouped.contains_key(&row.label) {
                order.push(row.label.clone());
            }
            grouped.entry(row.label).or_default().push(row.sample);
        }
        let objects = order
            .into_iter()
            .map(|label| {
                let samples = grouped.remove(&label).unwrap_or_default();
                ObjectSeries::new(label, samples)
            })
            .collect::<Result<Vec<_>>>()?;
        LabeledDataset::new(channels, objects)
    }

    pub fn channels(&self) -> &[String] {
        &self.channels
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn objects(&self) -> &[ObjectSeries] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn labels(&self) -> Vec<String> {
        self.objects.iter().map(|o| o.label.clone()).collect()
    }

    /// Total sample count across all objects.
    pub fn sample_count(&self) -> usize {
        self.objects.iter().map(ObjectSeries::len).sum()
    }

    /// The standard five-channel manifest.
    pub fn standard_channels() -> Vec<String> {
        CHANNEL_NAMES.iter().map(|s| s.to_string()).collect()
    }
}
