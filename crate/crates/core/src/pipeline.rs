//! End-to-end orchestration: one-hot targets, train/test split, the
//! object-sequential training loop, and the full experiment (train, segment,
//! examine, report).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::eval::{
    confusion_matrix, rmse, segment_counts, segment_object, segment_passes, ConfusionMatrix,
    EvalConfig,
};
use crate::fis::{output_errors, Combinator, FisModel};

/// One-hot supervision vector: exactly one entry is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetVector {
    values: Vec<f64>,
}

impl TargetVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// One-hot target for a 1-based object index.
pub fn one_hot_target(object_index: usize, outputs: usize) -> Result<TargetVector> {
    if object_index == 0 || object_index > outputs {
        return Err(Error::invalid_argument(format!(
            "object index {object_index} is outside 1..={outputs}"
        )));
    }
    let mut values = vec![0.0; outputs];
    values[object_index - 1] = 1.0;
    Ok(TargetVector { values })
}

/// Training parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Learning rate, strictly inside (0, 1).
    pub eta: f64,
    /// Passes over the training data.
    pub epochs: usize,
    /// RNG seed for parameter initialization (and shuffling, when enabled).
    pub seed: u64,
    /// Rule count m.
    pub rules: usize,
    pub combinator: Combinator,
    /// Off by default: the protocol trains object blocks in label order.
    pub shuffle: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            eta: 0.1,
            epochs: 10,
            seed: 1,
            rules: 10,
            combinator: Combinator::ExpOfNegatedSum,
            shuffle: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.eta.is_finite() || self.eta <= 0.0 || self.eta >= 1.0 {
            return Err(Error::invalid_argument(format!(
                "learning rate must lie strictly inside (0, 1), got {}",
                self.eta
            )));
        }
        if self.epochs == 0 {
            return Err(Error::invalid_argument("epoch count must be at least 1"));
        }
        if self.rules == 0 {
            return Err(Error::invalid_argument("rule count must be at least 1"));
        }
        Ok(())
    }
}

/// Splits every object's samples in time order: first half (rounded up) for
/// training, the rest for examination.
pub fn split_train_test(dataset: &LabeledDataset) -> Result<(LabeledDataset, LabeledDataset)> {
    let mut train_objects = Vec::with_capacity(dataset.object_count());
    let mut test_objects = Vec::with_capacity(dataset.object_count());
    for object in dataset.objects() {
        if object.len() < 2 {
            return Err(Error::invalid_argument(format!(
                "object `{}` has {} samples; at least 2 are needed to split",
                object.label(),
                object.len()
            )));
        }
        let cut = object.len().div_ceil(2);
        train_objects.push(crate::data::ObjectSeries::new(
            object.label(),
            object.samples()[..cut].to_vec(),
        )?);
        test_objects.push(crate::data::ObjectSeries::new(
            object.label(),
            object.samples()[cut..].to_vec(),
        )?);
    }
    Ok((
        LabeledDataset::new(dataset.channels().to_vec(), train_objects)?,
        LabeledDataset::new(dataset.channels().to_vec(), test_objects)?,
    ))
}

/// A trained model plus its per-epoch training-RMSE trace.
///
/// `rmse_trace[0]` is the freshly initialized model's RMSE over the training
/// data; entry `k` is the RMSE after `k` epochs.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub model: FisModel,
    pub rmse_trace: Vec<f64>,
}

/// Trains a fresh model on the dataset.
///
/// Each epoch walks the objects in label order (object 1's block first) and
/// applies one gradient step per sample with that object's one-hot target.
/// With `shuffle` enabled the (sample, target) pairs are permuted once per
/// epoch instead.
pub fn train(dataset: &LabeledDataset, config: &TrainConfig) -> Result<TrainOutcome> {
    config.validate()?;
    if dataset.object_count() == 0 {
        return Err(Error::invalid_argument("dataset has no objects"));
    }
    if let Some(object) = dataset.objects().iter().find(|o| o.is_empty()) {
        return Err(Error::invalid_argument(format!(
            "object `{}` has no training samples",
            object.label()
        )));
    }

    let outputs = dataset.object_count();
    let targets: Vec<TargetVector> = (1..=outputs)
        .map(|i| one_hot_target(i, outputs))
        .collect::<Result<_>>()?;

    let mut pairs: Vec<(usize, usize)> = dataset
        .objects()
        .iter()
        .enumerate()
        .flat_map(|(o, object)| (0..object.len()).map(move |s| (o, s)))
        .collect();
    let mut shuffle_rng = config
        .shuffle
        .then(|| ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1)));

    let mut model = FisModel::init(
        dataset.channel_count(),
        config.rules,
        outputs,
        config.combinator,
        config.seed,
    )?;
    let mut trace = vec![training_rmse(&model, dataset, &targets)?];
    for _ in 0..config.epochs {
        if let Some(rng) = shuffle_rng.as_mut() {
            pairs.shuffle(rng);
        }
        for &(object, sample) in &pairs {
            let sample = &dataset.objects()[object].samples()[sample];
            model = model.train_step(sample, targets[object].as_slice(), config.eta)?;
        }
        trace.push(training_rmse(&model, dataset, &targets)?);
    }
    Ok(TrainOutcome {
        model,
        rmse_trace: trace,
    })
}

/// RMSE over the whole training set with per-object targets.
fn training_rmse(
    model: &FisModel,
    dataset: &LabeledDataset,
    targets: &[TargetVector],
) -> Result<f64> {
    let mut total = 0.0;
    let mut count = 0usize;
    for (object, target) in dataset.objects().iter().zip(targets) {
        for sample in object.samples() {
            let prediction = model.infer(sample)?;
            total += output_errors(&prediction, target.as_slice())?.squared_sum();
            count += 1;
        }
    }
    Ok((total / count as f64).sqrt())
}

/// Everything one experiment run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub labels: Vec<String>,
    pub channel_count: usize,
    pub train_config: TrainConfig,
    pub eval_config: EvalConfig,
    pub confusion: ConfusionMatrix,
    pub rmse_trace: Vec<f64>,
    /// Test segments whose RMSE passed more than one candidate target.
    pub ambiguous_segments: usize,
    /// Set when the matrix cannot certify unique classification: some segment
    /// matched several objects, or some object never matched itself.
    pub degenerate: bool,
}

impl ExperimentReport {
    pub fn efficiency(&self) -> f64 {
        self.confusion.efficiency()
    }

    /// Plain-text summary with the confusion table.
    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "rules: {}  eta: {}  epochs: {}  seed: {}  combinator: {}\n",
            self.train_config.rules,
            self.train_config.eta,
            self.train_config.epochs,
            self.train_config.seed,
            self.train_config.combinator,
        ));
        out.push_str(&format!(
            "epsilon: {}  segments: {}  parameters: {}\n",
            self.eval_config.epsilon,
            self.eval_config.segments,
            self.parameter_count(),
        ));
        if let (Some(first), Some(last)) = (self.rmse_trace.first(), self.rmse_trace.last()) {
            out.push_str(&format!("training RMSE: {first:.4} -> {last:.4}\n"));
        }
        out.push_str(&self.confusion.render_table(&self.labels));
        if self.degenerate {
            out.push_str("warning: degenerate examination (objects are not uniquely separable)\n");
        }
        out
    }

    /// Key-value CSV summary, one row per key plus one per matrix cell.
    pub fn summary_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("key,value\n");
        out.push_str(&format!("m,{}\n", self.train_config.rules));
        out.push_str(&format!("eta,{}\n", self.train_config.eta));
        out.push_str(&format!("epsilon,{}\n", self.eval_config.epsilon));
        out.push_str(&format!("epochs,{}\n", self.train_config.epochs));
        out.push_str(&format!("seed,{}\n", self.train_config.seed));
        out.push_str(&format!("combinator,{}\n", self.train_config.combinator));
        out.push_str(&format!("efficiency,{:.2}\n", self.confusion.efficiency()));
        for (o, row) in self.confusion.cells().iter().enumerate() {
            for (i, cell) in row.iter().enumerate() {
                out.push_str(&format!(
                    "pec_{}_{},{cell:.2}\n",
                    self.labels[o], self.labels[i]
                ));
            }
        }
        out
    }

    /// Tunable parameter count of the trained model: `m * (2n + L)`.
    pub fn parameter_count(&self) -> usize {
        self.train_config.rules * (2 * self.channel_count + self.labels.len())
    }
}

/// Runs the full protocol: split, train, segment the test half, examine, and
/// assemble the report.
pub fn run_experiment(
    dataset: &LabeledDataset,
    train_config: &TrainConfig,
    eval_config: &EvalConfig,
) -> Result<ExperimentReport> {
    eval_config.validate()?;
    let (train_half, test_half) = split_train_test(dataset)?;
    let outcome = train(&train_half, train_config)?;

    let counts = segment_counts(eval_config.segments, test_half.object_count());
    let mut per_object_segments = Vec::with_capacity(test_half.object_count());
    for (object, &count) in test_half.objects().iter().zip(&counts) {
        per_object_segments.push(segment_object(object.samples(), count)?);
    }
    let confusion = confusion_matrix(
        &outcome.model,
        &per_object_segments,
        eval_config.epsilon,
        eval_config.segments,
    )?;

    let outputs = test_half.object_count();
    let mut ambiguous_segments = 0;
    for segments in &per_object_segments {
        for segment in segments {
            let mut passes = 0;
            for candidate in 1..=outputs {
                let target = one_hot_target(candidate, outputs)?;
                if segment_passes(
                    rmse(&outcome.model, segment, target.as_slice())?,
                    eval_config.epsilon,
                ) {
                    passes += 1;
                }
            }
            if passes > 1 {
                ambiguous_segments += 1;
            }
        }
    }
    let degenerate =
        ambiguous_segments > 0 || (0..outputs).any(|i| confusion.cell(i, i) == 0.0);

    Ok(ExperimentReport {
        labels: dataset.labels(),
        channel_count: dataset.channel_count(),
        train_config: train_config.clone(),
        eval_config: eval_config.clone(),
        confusion,
        rmse_trace: outcome.rmse_trace,
        ambiguous_segments,
        degenerate,
    })
}
