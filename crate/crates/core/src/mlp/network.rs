//! Fully connected network with logistic activations on every layer,
//! trained on per-bit binary cross-entropy with Adam.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::dataset::{TrainingRow, NUM_FEATURES};
use crate::data::CandidateTable;
use crate::error::{Error, Result};
use crate::fitness::SelectionVector;
use crate::seed::{rng_from_seed, Rng};
use crate::NUM_DESTINATIONS;

const FORMAT_MAGIC: &str = "evac-mlp";
const FORMAT_VERSION: u32 = 1;

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPSILON: f64 = 1e-8;

/// Predicted probabilities are clamped to `[PROB_FLOOR, 1 - PROB_FLOOR]`.
const PROB_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    /// Widths of the hidden layers.
    pub hidden: Vec<usize>,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 25,
            learning_rate: 0.01,
            batch_size: 16,
            hidden: vec![64, 32],
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Config(format!("learning rate {} must be positive", self.learning_rate)));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        if self.hidden.contains(&0) {
            return Err(Error::Config("hidden layer widths must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Dense {
    inputs: usize,
    outputs: usize,
    /// Row-major `outputs × inputs`.
    weights: Vec<f64>,
    biases: Vec<f64>,
}

impl Dense {
    fn xavier(inputs: usize, outputs: usize, rng: &mut Rng) -> Self {
        let limit = (6.0 / (inputs + outputs) as f64).sqrt();
        Dense {
            inputs,
            outputs,
            weights: (0..inputs * outputs).map(|_| rng.random_range(-limit..=limit)).collect(),
            biases: vec![0.0; outputs],
        }
    }

    fn pre_activation(&self, input: &[f64]) -> Vec<f64> {
        self.weights
            .chunks_exact(self.inputs)
            .zip(&self.biases)
            .map(|(row, b)| b + row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>())
            .collect()
    }

    fn len(&self) -> usize {
        self.weights.len() + self.biases.len()
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Binary cross-entropy of `sigmoid(z)` against `y`, computed from the logit.
fn bce_from_logit(z: f64, y: f64) -> f64 {
    z.max(0.0) - z * y + (-z.abs()).exp().ln_1p()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub seed: u64,
    /// Mean training loss of each epoch, accumulated over its mini-batches.
    pub loss_curve: Vec<f64>,
}

/// A trained `31 → hidden… → 10` network.
///
/// Inputs are standardized with the per-feature mean and standard deviation
/// of the training set before the first layer.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    layers: Vec<Dense>,
    input_mean: Vec<f64>,
    input_std: Vec<f64>,
    pub metadata: TrainingMetadata,
}

impl MlpModel {
    /// Randomly initialized, untrained model with identity input scaling.
    pub fn new(hidden: &[usize], rng: &mut Rng) -> Self {
        let mut sizes = vec![NUM_FEATURES];
        sizes.extend_from_slice(hidden);
        sizes.push(NUM_DESTINATIONS);
        let layers = sizes.windows(2).map(|w| Dense::xavier(w[0], w[1], rng)).collect();
        MlpModel {
            layers,
            input_mean: vec![0.0; NUM_FEATURES],
            input_std: vec![1.0; NUM_FEATURES],
            metadata: TrainingMetadata {
                epochs: 0,
                learning_rate: 0.0,
                batch_size: 0,
                seed: 0,
                loss_curve: Vec::new(),
            },
        }
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![self.layers[0].inputs];
        sizes.extend(self.layers.iter().map(|l| l.outputs));
        sizes
    }

    pub fn num_parameters(&self) -> usize {
        self.layers.iter().map(Dense::len).sum()
    }

    fn locate(&self, mut index: usize) -> (usize, bool, usize) {
        for (li, l) in self.layers.iter().enumerate() {
            if index < l.weights.len() {
                return (li, true, index);
            }
            index -= l.weights.len();
            if index < l.biases.len() {
                return (li, false, index);
            }
            index -= l.biases.len();
        }
        panic!("parameter index out of range");
    }

    /// Parameter `index` in flat order: each layer's weights (row-major)
    /// then its biases, input layer first.
    pub fn parameter(&self, index: usize) -> f64 {
        let (li, is_weight, i) = self.locate(index);
        let l = &self.layers[li];
        if is_weight {
            l.weights[i]
        } else {
            l.biases[i]
        }
    }

    pub fn set_parameter(&mut self, index: usize, value: f64) {
        let (li, is_weight, i) = self.locate(index);
        let l = &mut self.layers[li];
        if is_weight {
            l.weights[i] = value;
        } else {
            l.biases[i] = value;
        }
    }

    pub fn parameters_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.weights.iter().chain(&l.biases).all(|v| v.is_finite()))
    }

    fn standardize(&self, features: &[f64]) -> Vec<f64> {
        features
            .iter()
            .zip(self.input_mean.iter().zip(&self.input_std))
            .map(|(x, (m, s))| (x - m) / s)
            .collect()
    }

    /// Activations of every layer (standardized input first) and the output
    /// logits.
    fn forward(&self, features: &[f64]) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut acts = vec![self.standardize(features)];
        let mut logits = Vec::new();
        for layer in &self.layers {
            let z = layer.pre_activation(acts.last().expect("input"));
            acts.push(z.iter().map(|&v| sigmoid(v)).collect());
            logits = z;
        }
        (acts, logits)
    }

    pub fn predict_features(&self, features: &[f64; NUM_FEATURES]) -> [f64; NUM_DESTINATIONS] {
        let (acts, _) = self.forward(features);
        let out = acts.last().expect("output layer");
        std::array::from_fn(|i| out[i].clamp(PROB_FLOOR, 1.0 - PROB_FLOOR))
    }

    /// Per-destination selection probabilities for `table`.
    pub fn predict(&self, table: &CandidateTable) -> [f64; NUM_DESTINATIONS] {
        self.predict_features(&table.features())
    }

    /// Mean per-bit binary cross-entropy over `rows`.
    pub fn loss(&self, rows: &[TrainingRow]) -> f64 {
        let total: f64 = rows
            .iter()
            .map(|row| {
                let (_, logits) = self.forward(&row.features());
                logits
                    .iter()
                    .zip(row.targets())
                    .map(|(&z, y)| bce_from_logit(z, y))
                    .sum::<f64>()
            })
            .sum();
        total / (rows.len() * NUM_DESTINATIONS) as f64
    }

    /// Mean loss over `rows` and its gradient in [`parameter`](Self::parameter) order.
    pub fn loss_and_gradient(&self, rows: &[&TrainingRow]) -> (f64, Vec<f64>) {
        let mut grads: Vec<Dense> = self
            .layers
            .iter()
            .map(|l| Dense {
                inputs: l.inputs,
                outputs: l.outputs,
                weights: vec![0.0; l.weights.len()],
                biases: vec![0.0; l.biases.len()],
            })
            .collect();
        let scale = 1.0 / (rows.len() * NUM_DESTINATIONS) as f64;
        let mut loss = 0.0;

        for row in rows {
            let (acts, logits) = self.forward(&row.features());
            let targets = row.targets();
            let out = acts.last().expect("output");
            loss += logits.iter().zip(&targets).map(|(&z, &y)| bce_from_logit(z, y)).sum::<f64>();

            // d loss / d logit for sigmoid + BCE.
            let mut delta: Vec<f64> = out.iter().zip(&targets).map(|(a, y)| (a - y) * scale).collect();
            for li in (0..self.layers.len()).rev() {
                let layer = &self.layers[li];
                let input = &acts[li];
                let g = &mut grads[li];
                for (o, d) in delta.iter().enumerate() {
                    g.biases[o] += d;
                    let row = &mut g.weights[o * layer.inputs..(o + 1) * layer.inputs];
                    for (gw, x) in row.iter_mut().zip(input) {
                        *gw += d * x;
                    }
                }
                if li > 0 {
                    delta = (0..layer.inputs)
                        .map(|j| {
                            let back: f64 = delta
                                .iter()
                                .enumerate()
                                .map(|(o, d)| d * layer.weights[o * layer.inputs + j])
                                .sum();
                            let a = input[j];
                            back * a * (1.0 - a)
                        })
                        .collect();
                }
            }
        }
        let flat = grads
            .into_iter()
            .flat_map(|g| g.weights.into_iter().chain(g.biases))
            .collect();
        (loss * scale, flat)
    }

    fn fit_standardization(&mut self, rows: &[TrainingRow]) {
        let n = rows.len() as f64;
        let mut mean = vec![0.0; NUM_FEATURES];
        for row in rows {
            for (m, x) in mean.iter_mut().zip(row.features()) {
                *m += x / n;
            }
        }
        let mut var = vec![0.0; NUM_FEATURES];
        for row in rows {
            for ((v, x), m) in var.iter_mut().zip(row.features()).zip(&mean) {
                *v += (x - m) * (x - m) / n;
            }
        }
        self.input_std = var.iter().map(|v| if *v > 1e-12 { v.sqrt() } else { 1.0 }).collect();
        self.input_mean = mean;
    }

    /// Writes the plain-text model format.
    pub fn write(&self, mut w: impl Write) -> Result<()> {
        let mut s = String::new();
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
        let sizes = self.layer_sizes();
        let m = &self.metadata;
        writeln!(s, "{FORMAT_MAGIC} {FORMAT_VERSION}").unwrap();
        writeln!(s, "layers {}", sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")).unwrap();
        writeln!(s, "activation sigmoid").unwrap();
        writeln!(s, "loss_function binary_cross_entropy").unwrap();
        writeln!(s, "optimizer adam").unwrap();
        writeln!(s, "epochs {}", m.epochs).unwrap();
        writeln!(s, "learning_rate {}", m.learning_rate).unwrap();
        writeln!(s, "batch_size {}", m.batch_size).unwrap();
        writeln!(s, "seed {}", m.seed).unwrap();
        writeln!(s, "loss_curve {}", join(&m.loss_curve)).unwrap();
        writeln!(s, "input_mean {}", join(&self.input_mean)).unwrap();
        writeln!(s, "input_std {}", join(&self.input_std)).unwrap();
        for (i, l) in self.layers.iter().enumerate() {
            writeln!(s, "layer {} {} {}", i + 1, l.outputs, l.inputs).unwrap();
            for row in l.weights.chunks_exact(l.inputs) {
                writeln!(s, "w {}", join(row)).unwrap();
            }
            writeln!(s, "b {}", join(&l.biases)).unwrap();
        }
        w.write_all(s.as_bytes()).map_err(|e| Error::io("<model>", e))
    }

    pub fn read(r: impl BufRead) -> Result<Self> {
        let fmt_err = |m: String| Error::ModelFormat(m);
        let mut lines = r.lines().enumerate().map(|(i, l)| l.map(|l| (i + 1, l)));
        let mut next = |expect: &str| -> Result<(usize, Vec<String>)> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| fmt_err(format!("unexpected end of file, expected {expect:?}")))?
                .map_err(|e| Error::io("<model>", e))?;
            let mut parts = line.split_whitespace().map(str::to_owned);
            match parts.next() {
                Some(key) if key == expect => Ok((no, parts.collect())),
                other => Err(fmt_err(format!("line {no}: expected {expect:?}, found {other:?}"))),
            }
        };
        fn nums<T: std::str::FromStr>(no: usize, parts: &[String]) -> Result<Vec<T>> {
            parts
                .iter()
                .map(|p| {
                    p.parse()
                        .map_err(|_| Error::ModelFormat(format!("line {no}: bad number {p:?}")))
                })
                .collect()
        }
        fn one<T: std::str::FromStr>(no: usize, parts: &[String]) -> Result<T> {
            let mut v = nums(no, parts)?;
            if v.len() != 1 {
                return Err(Error::ModelFormat(format!("line {no}: expected one value")));
            }
            Ok(v.remove(0))
        }

        let (no, v) = next(FORMAT_MAGIC)?;
        if one::<u32>(no, &v)? != FORMAT_VERSION {
            return Err(fmt_err(format!("unsupported version {v:?}")));
        }
        let (no, v) = next("layers")?;
        let sizes: Vec<usize> = nums(no, &v)?;
        if sizes.len() < 2 || sizes[0] != NUM_FEATURES || sizes[sizes.len() - 1] != NUM_DESTINATIONS {
            return Err(fmt_err(format!(
                "layer sizes {sizes:?} must start at {NUM_FEATURES} and end at {NUM_DESTINATIONS}"
            )));
        }
        for (key, value) in [
            ("activation", "sigmoid"),
            ("loss_function", "binary_cross_entropy"),
            ("optimizer", "adam"),
        ] {
            let (no, v) = next(key)?;
            if v != [value] {
                return Err(fmt_err(format!("line {no}: unsupported {key} {v:?}")));
            }
        }
        let (no, v) = next("epochs")?;
        let epochs = one(no, &v)?;
        let (no, v) = next("learning_rate")?;
        let learning_rate = one(no, &v)?;
        let (no, v) = next("batch_size")?;
        let batch_size = one(no, &v)?;
        let (no, v) = next("seed")?;
        let seed = one(no, &v)?;
        let (no, v) = next("loss_curve")?;
        let loss_curve = nums(no, &v)?;
        let (no, v) = next("input_mean")?;
        let input_mean: Vec<f64> = nums(no, &v)?;
        let (no2, v) = next("input_std")?;
        let input_std: Vec<f64> = nums(no2, &v)?;
        if input_mean.len() != NUM_FEATURES || input_std.len() != NUM_FEATURES {
            return Err(fmt_err(format!("line {no}: input scaling needs {NUM_FEATURES} values")));
        }

        let mut layers = Vec::new();
        for (i, w) in sizes.windows(2).enumerate() {
            let (inputs, outputs) = (w[0], w[1]);
            let (no, v) = next("layer")?;
            if nums::<usize>(no, &v)? != [i + 1, outputs, inputs] {
                return Err(fmt_err(format!("line {no}: layer header mismatch")));
            }
            let mut weights = Vec::with_capacity(inputs * outputs);
            for _ in 0..outputs {
                let (no, v) = next("w")?;
                let row: Vec<f64> = nums(no, &v)?;
                if row.len() != inputs {
                    return Err(fmt_err(format!("line {no}: expected {inputs} weights")));
                }
                weights.extend(row);
            }
            let (no, v) = next("b")?;
            let biases: Vec<f64> = nums(no, &v)?;
            if biases.len() != outputs {
                return Err(fmt_err(format!("line {no}: expected {outputs} biases")));
            }
            layers.push(Dense {
                inputs,
                outputs,
                weights,
                biases,
            });
        }
        let model = MlpModel {
            layers,
            input_mean,
            input_std,
            metadata: TrainingMetadata {
                epochs,
                learning_rate,
                batch_size,
                seed,
                loss_curve,
            },
        };
        if !model.parameters_finite() {
            return Err(fmt_err("non-finite parameter".into()));
        }
        Ok(model)
    }
}

/// Trains with default architecture and batch size.
pub fn train(dataset: &[TrainingRow], epochs: usize, learning_rate: f64, seed: u64) -> Result<MlpModel> {
    train_with(
        dataset,
        &TrainConfig {
            epochs,
            learning_rate,
            seed,
            ..TrainConfig::default()
        },
    )
}

/// Mini-batch training. The seed drives both initialization and the
/// per-epoch shuffle, so a longer run with the same seed replays a shorter
/// one's epochs exactly before continuing.
pub fn train_with(dataset: &[TrainingRow], config: &TrainConfig) -> Result<MlpModel> {
    config.validate()?;
    if dataset.is_empty() {
        return Err(Error::EmptyDataset("cannot train on zero rows".into()));
    }
    let mut rng = rng_from_seed(config.seed);
    let mut model = MlpModel::new(&config.hidden, &mut rng);
    model.fit_standardization(dataset);

    let n_params = model.num_parameters();
    let mut m = vec![0.0; n_params];
    let mut v = vec![0.0; n_params];
    let mut step = 0i32;
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    let mut loss_curve = Vec::with_capacity(config.epochs);

    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(config.batch_size) {
            let rows: Vec<&TrainingRow> = batch.iter().map(|&i| &dataset[i]).collect();
            let (loss, grad) = model.loss_and_gradient(&rows);
            epoch_loss += loss * rows.len() as f64;

            step += 1;
            let bias1 = 1.0 - ADAM_BETA1.powi(step);
            let bias2 = 1.0 - ADAM_BETA2.powi(step);
            let mut idx = 0;
            for layer in &mut model.layers {
                for p in layer.weights.iter_mut().chain(layer.biases.iter_mut()) {
                    let g = grad[idx];
                    m[idx] = ADAM_BETA1 * m[idx] + (1.0 - ADAM_BETA1) * g;
                    v[idx] = ADAM_BETA2 * v[idx] + (1.0 - ADAM_BETA2) * g * g;
                    let m_hat = m[idx] / bias1;
                    let v_hat = v[idx] / bias2;
                    *p -= config.learning_rate * m_hat / (v_hat.sqrt() + ADAM_EPSILON);
                    idx += 1;
                }
            }
        }
        let epoch_loss = epoch_loss / dataset.len() as f64;
        if !epoch_loss.is_finite() || !model.parameters_finite() {
            return Err(Error::Divergence { epoch, loss: epoch_loss });
        }
        loss_curve.push(epoch_loss);
    }

    model.metadata = TrainingMetadata {
        epochs: config.epochs,
        learning_rate: config.learning_rate,
        batch_size: config.batch_size,
        seed: config.seed,
        loss_curve,
    };
    Ok(model)
}

/// `k` individuals from per-bit probabilities: the 0.5-thresholded vector
/// first, then `k - 1` independent Bernoulli draws.
pub fn sample_from_probabilities(
    probabilities: &[f64; NUM_DESTINATIONS],
    k: usize,
    rng: &mut Rng,
) -> Vec<SelectionVector> {
    if k == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(k);
    out.push(SelectionVector::from_bits(std::array::from_fn(|i| probabilities[i] >= 0.5)));
    for _ in 1..k {
        out.push(SelectionVector::from_bits(std::array::from_fn(|i| {
            rng.random::<f64>() < probabilities[i]
        })));
    }
    out
}

/// NN-generated individuals for `table`. See [`sample_from_probabilities`].
pub fn sample_individuals(model: &MlpModel, table: &CandidateTable, k: usize, rng: &mut Rng) -> Vec<SelectionVector> {
    sample_from_probabilities(&model.predict(table), k, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlp::synthesize_dataset;

    fn random_rows(n: usize, seed: u64) -> Vec<TrainingRow> {
        let mut rng = rng_from_seed(seed);
        let tables: Vec<CandidateTable> = (0..n)
            .map(|_| {
                let rows = std::array::from_fn(|_| (rng.random(), rng.random(), rng.random()));
                CandidateTable::from_normalized(rng.random_range(0.0..8.0), rows)
            })
            .collect();
        synthesize_dataset(&tables)
    }

    #[test]
    fn gradient_matches_central_differences() {
        let rows = random_rows(6, 1);
        let refs: Vec<&TrainingRow> = rows.iter().collect();
        let mut model = MlpModel::new(&[12, 8], &mut rng_from_seed(2));
        model.fit_standardization(&rows);
        let (_, grad) = model.loss_and_gradient(&refs);
        let mut rng = rng_from_seed(3);
        let h = 1e-5;
        for _ in 0..20 {
            let i = rng.random_range(0..model.num_parameters());
            let w = model.parameter(i);
            model.set_parameter(i, w + h);
            let up = model.loss(&rows);
            model.set_parameter(i, w - h);
            let down = model.loss(&rows);
            model.set_parameter(i, w);
            let numeric = (up - down) / (2.0 * h);
            let rel = (grad[i] - numeric).abs() / grad[i].abs().max(numeric.abs()).max(1e-7);
            assert!(rel < 1e-4, "param {i}: analytic {} numeric {numeric} rel {rel}", grad[i]);
        }
    }

    #[test]
    fn single_row_is_memorized() {
        let rows = random_rows(1, 7);
        let cfg = TrainConfig {
            epochs: 500,
            seed: 4,
            ..TrainConfig::default()
        };
        let model = train_with(&rows, &cfg).unwrap();
        let probs = model.predict(&rows[0].to_table());
        let predicted = SelectionVector::from_bits(std::array::from_fn(|i| probs[i] >= 0.5));
        assert_eq!(predicted, rows[0].labels);
        let sampled = sample_individuals(&model, &rows[0].to_table(), 1, &mut rng_from_seed(0));
        assert_eq!(sampled, vec![rows[0].labels]);
    }

    #[test]
    fn training_is_deterministic_and_loss_falls() {
        let rows = random_rows(40, 5);
        let a = train(&rows, 25, 0.01, 9).unwrap();
        let b = train(&rows, 25, 0.01, 9).unwrap();
        assert_eq!(a, b);
        let short = train(&rows, 5, 0.01, 9).unwrap();
        assert_eq!(short.metadata.loss_curve[..], a.metadata.loss_curve[..5]);
        let curve = &a.metadata.loss_curve;
        assert!(curve[24] < curve[0]);
        assert!(curve[24] <= short.metadata.loss_curve[4]);
    }

    #[test]
    fn outputs_are_open_unit_interval() {
        let model = MlpModel::new(&[64, 32], &mut rng_from_seed(0));
        let mut rows = [(0.0, 0.0, 0.0); 10];
        rows[0] = (1e6, -1e6, 1e6);
        let t = CandidateTable::from_normalized(1e9, rows);
        let p = model.predict(&t);
        assert!(p.iter().all(|&x| x > 0.0 && x < 1.0));
        assert_eq!(p, model.predict(&t));
    }

    #[test]
    fn sampling_rules() {
        let mut rng = rng_from_seed(8);
        let saturated = [1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0];
        let s = sample_from_probabilities(&saturated, 25, &mut rng);
        assert_eq!(s.len(), 25);
        assert!(s.iter().all(|x| *x == s[0]));
        assert_eq!(s[0].to_string(), "1011001010");

        let half = [0.5; 10];
        let s = sample_from_probabilities(&half, 101, &mut rng);
        assert_eq!(s[0], SelectionVector::FULL);
        for i in 0..10 {
            let mean = s[1..].iter().filter(|x| x.bit(i)).count() as f64 / 100.0;
            assert!((0.4..=0.6).contains(&mean), "bit {i}: {mean}");
        }
        assert!(sample_from_probabilities(&half, 0, &mut rng).is_empty());
    }

    #[test]
    fn model_file_round_trips_exactly() {
        let rows = random_rows(20, 3);
        let model = train(&rows, 3, 0.01, 1).unwrap();
        let mut buf = Vec::new();
        model.write(&mut buf).unwrap();
        let back = MlpModel::read(buf.as_slice()).unwrap();
        assert_eq!(back, model);
        let mut again = Vec::new();
        back.write(&mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn invalid_training_inputs() {
        let rows = random_rows(3, 0);
        assert!(matches!(train(&rows, 0, 0.01, 0), Err(Error::Config(_))));
        assert!(matches!(train(&[], 5, 0.01, 0), Err(Error::EmptyDataset(_))));
        assert!(matches!(
            train(&rows, 3, f64::MAX, 0),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn corrupt_model_file() {
        assert!(matches!(
            MlpModel::read("evac-mlp 2\n".as_bytes()),
            Err(Error::ModelFormat(_))
        ));
        assert!(matches!(
            MlpModel::read("evac-mlp 1\nlayers 30 10\n".as_bytes()),
            Err(Error::ModelFormat(_))
        ));
    }
}
