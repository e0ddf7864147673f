//! Gaussian fuzzy inference model and its gradient-descent training step.
//!
//! A [`FisModel`] holds `m` rules over `n` inputs and `L` outputs. Each rule
//! carries per-input Gaussian membership centers and widths plus per-output
//! consequent centers. Outputs are the firing-strength-weighted average of the
//! consequent centers, and all three parameter matrices are tuned online by
//! [`FisModel::train_step`], which descends the summed squared output error
//! for one sample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Lower bound kept on membership widths; they appear as `sigma^2` and
/// `sigma^3` denominators, so crossing zero must be impossible.
pub const WIDTH_FLOOR: f64 = 1e-3;

/// Below this total activation the normalized average is numerically
/// meaningless and inference falls back to uniform rule weights.
pub const ACTIVATION_FLOOR: f64 = 1e-300;

/// How rule activations are computed from per-input squared distances.
///
/// Both variants are algebraically identical for Gaussian memberships; they
/// differ only in evaluation order and exist so the two can be compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combinator {
    /// `alpha_j = exp(-sum_i (z_i - c_ij)^2 / sigma_ij^2)`
    ExpOfNegatedSum,
    /// `alpha_j = prod_i exp(-(z_i - c_ij)^2 / sigma_ij^2)`
    ProductOfGaussians,
}

impl Combinator {
    pub fn as_str(&self) -> &'static str {
        match self {
            Combinator::ExpOfNegatedSum => "exp-sum",
            Combinator::ProductOfGaussians => "product",
        }
    }
}

impl std::fmt::Display for Combinator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Combinator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp-sum" => Ok(Combinator::ExpOfNegatedSum),
            "product" => Ok(Combinator::ProductOfGaussians),
            other => Err(Error::invalid_argument(format!(
                "unknown combinator `{other}` (expected `exp-sum` or `product`)"
            ))),
        }
    }
}

/// Dense row-major matrix of `f64`, sized for rule parameter grids.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in &rows {
            if row.len() != n_cols {
                return Err(Error::invalid_argument(format!(
                    "ragged matrix rows: expected {n_cols} columns, found {}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.data.iter().copied()
    }

    fn fill_uniform(rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        let data = (0..rows * cols).map(|_| rng.gen::<f64>()).collect();
        Matrix { rows, cols, data }
    }
}

/// One time step of sensor readings, ordered `z1..zn`.
///
/// For the five-channel board the index assignment is fixed:
/// `z1` MQ-135, `z2` TGS-2610, `z3` MQ-2, `z4` TGS-2611, `z5` MQ-3.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorSample {
    channels: Vec<f64>,
}

impl SensorSample {
    /// Rejects empty or non-finite channel values.
    pub fn new(channels: Vec<f64>) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::invalid_argument("sample must have at least one channel"));
        }
        if let Some(bad) = channels.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid_argument(format!(
                "sample channel value {bad} is not finite"
            )));
        }
        Ok(SensorSample { channels })
    }

    pub fn channels(&self) -> &[f64] {
        &self.channels
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }
}

/// Rule activations for one sample, with the raw exponents that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct FiringVector {
    pub activations: Vec<f64>,
    pub exponents: Vec<f64>,
}

impl FiringVector {
    /// Sum of all rule activations (the normalizer in inference).
    pub fn total(&self) -> f64 {
        self.activations.iter().sum()
    }
}

/// Model outputs for one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub outputs: Vec<f64>,
}

/// Per-output signed errors `e_l = predicted_l - target_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorVector {
    pub errors: Vec<f64>,
}

impl ErrorVector {
    /// Sum of squared errors over all outputs.
    pub fn squared_sum(&self) -> f64 {
        self.errors.iter().map(|e| e * e).sum()
    }
}

/// Signed output errors against a target vector.
pub fn output_errors(predicted: &Prediction, target: &[f64]) -> Result<ErrorVector> {
    if predicted.outputs.len() != target.len() {
        return Err(Error::invalid_argument(format!(
            "prediction has {} outputs but target has {} entries",
            predicted.outputs.len(),
            target.len()
        )));
    }
    let errors = predicted
        .outputs
        .iter()
        .zip(target)
        .map(|(y_hat, y)| y_hat - y)
        .collect();
    Ok(ErrorVector { errors })
}

/// Gaussian fuzzy inference model.
///
/// Immutable after construction; [`FisModel::train_step`] returns an updated
/// copy, so values are freely shareable across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct FisModel {
    inputs: usize,
    rules: usize,
    outputs: usize,
    combinator: Combinator,
    input_centers: Matrix,
    input_widths: Matrix,
    output_centers: Matrix,
}

impl FisModel {
    /// Random initialization: every parameter drawn uniformly from `[0, 1)`,
    /// widths then floored at [`WIDTH_FLOOR`]. The same seed always produces
    /// the same model.
    pub fn init(
        inputs: usize,
        rules: usize,
        outputs: usize,
        combinator: Combinator,
        seed: u64,
    ) -> Result<Self> {
        if inputs == 0 || rules == 0 || outputs == 0 {
            return Err(Error::invalid_argument(format!(
                "model dimensions must be positive (inputs={inputs}, rules={rules}, outputs={outputs})"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input_centers = Matrix::fill_uniform(inputs, rules, &mut rng);
        let mut input_widths = Matrix::fill_uniform(inputs, rules, &mut rng);
        for v in &mut input_widths.data {
            *v = v.max(WIDTH_FLOOR);
        }
        let output_centers = Matrix::fill_uniform(outputs, rules, &mut rng);
        Ok(FisModel {
            inputs,
            rules,
            outputs,
            combinator,
            input_centers,
            input_widths,
            output_centers,
        })
    }

    /// Assembles a model from explicit parameter matrices, validating shapes,
    /// finiteness, and strictly positive widths.
    pub fn from_parts(
        combinator: Combinator,
        input_centers: Matrix,
        input_widths: Matrix,
        output_centers: Matrix,
    ) -> Result<Self> {
        let inputs = input_centers.rows();
        let rules = input_centers.cols();
        let outputs = output_centers.rows();
        if inputs == 0 || rules == 0 || outputs == 0 {
            return Err(Error::invalid_model("model dimensions must be positive"));
        }
        if input_widths.rows() != inputs || input_widths.cols() != rules {
            return Err(Error::invalid_model(format!(
                "width matrix is {}x{} but centers are {inputs}x{rules}",
                input_widths.rows(),
                input_widths.cols()
            )));
        }
        if output_centers.cols() != rules {
            return Err(Error::invalid_model(format!(
                "output centers have {} columns but the model has {rules} rules",
                output_centers.cols()
            )));
        }
        for m in [&input_centers, &input_widths, &output_centers] {
            if m.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid_model("model parameters must be finite"));
            }
        }
        if input_widths.iter().any(|v| v <= 0.0) {
            return Err(Error::invalid_model("membership widths must be strictly positive"));
        }
        Ok(FisModel {
            inputs,
            rules,
            outputs,
            combinator,
            input_centers,
            input_widths,
            output_centers,
        })
    }

    pub fn input_count(&self) -> usize {
        self.inputs
    }

    pub fn rule_count(&self) -> usize {
        self.rules
    }

    pub fn output_count(&self) -> usize {
        self.outputs
    }

    pub fn combinator(&self) -> Combinator {
        self.combinator
    }

    pub fn input_centers(&self) -> &Matrix {
        &self.input_centers
    }

    pub fn input_widths(&self) -> &Matrix {
        &self.input_widths
    }

    pub fn output_centers(&self) -> &Matrix {
        &self.output_centers
    }

    /// Number of tunable parameters (`m * (2n + L)`).
    pub fn parameter_count(&self) -> usize {
        self.rules * (2 * self.inputs + self.outputs)
    }

    fn check_sample(&self, sample: &SensorSample) -> Result<()> {
        if sample.len() != self.inputs {
            return Err(Error::invalid_argument(format!(
                "sample has {} channels but the model expects {}",
                sample.len(),
                self.inputs
            )));
        }
        Ok(())
    }

    /// Rule activations for one sample.
    ///
    /// The exponent `x_j = -sum_i (z_i - c_ij)^2 / sigma_ij^2` is returned
    /// alongside the activation regardless of combinator.
    pub fn firing_strengths(&self, sample: &SensorSample) -> Result<FiringVector> {
        self.check_sample(sample)?;
        let z = sample.channels();
        let mut activations = Vec::with_capacity(self.rules);
        let mut exponents = Vec::with_capacity(self.rules);
        for j in 0..self.rules {
            let mut distance_sum = 0.0;
            let mut product = 1.0;
            for (i, &z_i) in z.iter().enumerate() {
                let diff = z_i - self.input_centers.get(i, j);
                let width = self.input_widths.get(i, j);
                let term = diff * diff / (width * width);
                distance_sum += term;
                if self.combinator == Combinator::ProductOfGaussians {
                    product *= (-term).exp();
                }
            }
            exponents.push(-distance_sum);
            activations.push(match self.combinator {
                Combinator::ExpOfNegatedSum => (-distance_sum).exp(),
                Combinator::ProductOfGaussians => product,
            });
        }
        Ok(FiringVector {
            activations,
            exponents,
        })
    }

    /// Normalized weighted average of the output centers.
    ///
    /// When the total activation underflows [`ACTIVATION_FLOOR`], the result
    /// is the uniform average of each output's centers, which keeps every
    /// output inside its row's min/max interval.
    pub fn infer(&self, sample: &SensorSample) -> Result<Prediction> {
        let firing = self.firing_strengths(sample)?;
        Ok(self.infer_from(&firing))
    }

    fn infer_from(&self, firing: &FiringVector) -> Prediction {
        let total = firing.total();
        let outputs = (0..self.outputs)
            .map(|l| {
                if total < ACTIVATION_FLOOR {
                    self.output_centers.row(l).iter().sum::<f64>() / self.rules as f64
                } else {
                    let weighted: f64 = (0..self.rules)
                        .map(|j| self.output_centers.get(l, j) * firing.activations[j])
                        .sum();
                    weighted / total
                }
            })
            .collect();
        Prediction { outputs }
    }

    /// One gradient-descent update on `0.5 * sum_l e_l^2` for a single
    /// (sample, target) pair.
    ///
    /// All activations, predictions, and errors are evaluated on the
    /// pre-update parameters and the deltas applied simultaneously. Updated
    /// widths are clamped to [`WIDTH_FLOOR`]. If the total activation is
    /// below [`ACTIVATION_FLOOR`], inference used uniform weights, so only
    /// the output centers receive a (uniform-weight) update.
    pub fn train_step(&self, sample: &SensorSample, target: &[f64], eta: f64) -> Result<FisModel> {
        if !eta.is_finite() || eta <= 0.0 || eta >= 1.0 {
            return Err(Error::invalid_argument(format!(
                "learning rate must lie strictly inside (0, 1), got {eta}"
            )));
        }
        if target.len() != self.outputs {
            return Err(Error::invalid_argument(format!(
                "target has {} entries but the model has {} outputs",
                target.len(),
                self.outputs
            )));
        }
        let firing = self.firing_strengths(sample)?;
        let prediction = self.infer_from(&firing);
        let errors = output_errors(&prediction, target)?;

        let mut next = self.clone();
        let total = firing.total();
        if total < ACTIVATION_FLOOR {
            // Fallback prediction is the uniform average; its gradient only
            // touches the output centers, each with weight 1/m.
            let weight = 1.0 / self.rules as f64;
            for l in 0..self.outputs {
                for j in 0..self.rules {
                    let updated = self.output_centers.get(l, j) - eta * weight * errors.errors[l];
                    next.output_centers.set(l, j, updated);
                }
            }
            return Ok(next);
        }

        let z = sample.channels();
        for j in 0..self.rules {
            let normalized = firing.activations[j] / total;

            for l in 0..self.outputs {
                let updated = self.output_centers.get(l, j) - eta * normalized * errors.errors[l];
                next.output_centers.set(l, j, updated);
            }

            for (i, &z_i) in z.iter().enumerate() {
                let center = self.input_centers.get(i, j);
                let width = self.input_widths.get(i, j);
                let diff = z_i - center;
                // Center and width gradients accumulate one term per output.
                let mut center_grad = 0.0;
                let mut width_grad = 0.0;
                for l in 0..self.outputs {
                    let consequent_gap = self.output_centers.get(l, j) - prediction.outputs[l];
                    let common = 2.0 * normalized * consequent_gap * errors.errors[l];
                    center_grad += common * diff / (width * width);
                    width_grad += common * diff * diff / (width * width * width);
                }
                next.input_centers.set(i, j, center - eta * center_grad);
                next.input_widths
                    .set(i, j, (width - eta * width_grad).max(WIDTH_FLOOR));
            }
        }
        Ok(next)
    }
}
