//! Property tests for the model invariants and the examination arithmetic.

use fisnose::data::{read_csv_from, write_csv_to, LabeledDataset, ObjectSeries};
use fisnose::eval::{examine, rmse};
use fisnose::fis::{Combinator, FisModel, Matrix, SensorSample};
use fisnose::model_file::ModelFile;
use fisnose::pipeline::one_hot_target;
use proptest::prelude::*;

fn random_model() -> impl Strategy<Value = (FisModel, Vec<f64>)> {
    ((1usize..5), (1usize..8), (1usize..4), any::<u64>()).prop_flat_map(|(n, m, l, seed)| {
        let model = FisModel::init(n, m, l, Combinator::ExpOfNegatedSum, seed).unwrap();
        (Just(model), prop::collection::vec(-1.0f64..2.0, n))
    })
}

/// n=1 model predicting ~0 at z=0 and ~1 at z=1; used to drive pass/fail
/// patterns deterministically.
fn step_model() -> FisModel {
    FisModel::from_parts(
        Combinator::ExpOfNegatedSum,
        Matrix::from_rows(vec![vec![0.0, 1.0]]).unwrap(),
        Matrix::from_rows(vec![vec![0.1, 0.1]]).unwrap(),
        Matrix::from_rows(vec![vec![0.0, 1.0]]).unwrap(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn combinator_routes_agree((model, z) in random_model()) {
        let product = FisModel::from_parts(
            Combinator::ProductOfGaussians,
            model.input_centers().clone(),
            model.input_widths().clone(),
            model.output_centers().clone(),
        ).unwrap();
        let sample = SensorSample::new(z).unwrap();
        let a = model.firing_strengths(&sample).unwrap();
        let b = product.firing_strengths(&sample).unwrap();
        for (x, y) in a.activations.iter().zip(&b.activations) {
            prop_assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn inference_is_a_convex_combination((model, z) in random_model()) {
        let sample = SensorSample::new(z).unwrap();
        let prediction = model.infer(&sample).unwrap();
        for (l, y) in prediction.outputs.iter().enumerate() {
            let row = model.output_centers().row(l);
            let min = row.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(*y >= min - 1e-12 && *y <= max + 1e-12);
        }
    }

    #[test]
    fn pec_is_quantized_by_the_segment_total(passing in 0usize..=16) {
        let model = step_model();
        let mut segments = Vec::new();
        for _ in 0..passing {
            segments.push(vec![SensorSample::new(vec![0.0]).unwrap(); 2]);
        }
        for _ in passing..16 {
            segments.push(vec![SensorSample::new(vec![1.0]).unwrap(); 2]);
        }
        let score = examine(&model, &segments, &[0.0], 0.1, 16).unwrap();
        prop_assert_eq!(score.ec, passing);
        prop_assert_eq!(score.pec, passing as f64 * 6.25);
    }

    #[test]
    fn raising_epsilon_is_monotone(
        levels in prop::collection::vec(0.0f64..1.0, 1..12),
        lo in 1e-4f64..1.0,
        factor in 1.0f64..20.0,
    ) {
        let model = step_model();
        let segments: Vec<Vec<SensorSample>> = levels
            .iter()
            .map(|v| vec![SensorSample::new(vec![*v]).unwrap(); 2])
            .collect();
        let hi = lo * factor;
        let low_score = examine(&model, &segments, &[0.0], lo, 16).unwrap();
        let high_score = examine(&model, &segments, &[0.0], hi, 16).unwrap();
        prop_assert!(high_score.ec >= low_score.ec);
    }

    #[test]
    fn rmse_ignores_sample_order(
        values in prop::collection::vec(-0.5f64..1.5, 1..30),
        rotate in 0usize..30,
    ) {
        let model = step_model();
        let samples: Vec<SensorSample> = values
            .iter()
            .map(|v| SensorSample::new(vec![*v]).unwrap())
            .collect();
        let mut rotated = samples.clone();
        rotated.rotate_left(rotate % samples.len());
        let a = rmse(&model, &samples, &[0.5]).unwrap();
        let b = rmse(&model, &rotated, &[0.5]).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn one_hot_targets_sum_to_one(outputs in 1usize..10, index in 1usize..10) {
        prop_assume!(index <= outputs);
        let target = one_hot_target(index, outputs).unwrap();
        prop_assert_eq!(target.as_slice().iter().sum::<f64>(), 1.0);
        prop_assert_eq!(target.as_slice()[index - 1], 1.0);
    }

    #[test]
    fn csv_roundtrip_is_identity(
        object_lengths in prop::collection::vec(1usize..6, 1..4),
        seed in any::<u64>(),
    ) {
        // Arbitrary-ish finite voltages, deterministic per seed.
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 10.0 - 5.0
        };
        let objects: Vec<ObjectSeries> = object_lengths
            .iter()
            .enumerate()
            .map(|(i, len)| {
                let samples = (0..*len)
                    .map(|_| SensorSample::new(vec![next(), next()]).unwrap())
                    .collect();
                ObjectSeries::new(format!("object{i}"), samples).unwrap()
            })
            .collect();
        let dataset = LabeledDataset::new(vec!["a".into(), "b".into()], objects).unwrap();
        let mut buffer = Vec::new();
        write_csv_to(&dataset, &mut buffer).unwrap();
        let loaded = read_csv_from(buffer.as_slice()).unwrap();
        prop_assert_eq!(loaded, dataset);
    }

    #[test]
    fn model_file_roundtrip_is_identity(
        n in 1usize..5,
        m in 1usize..8,
        l in 1usize..4,
        seed in any::<u64>(),
    ) {
        let model = FisModel::init(n, m, l, Combinator::ProductOfGaussians, seed).unwrap();
        let labels = (0..l).map(|i| format!("object{i}")).collect();
        let file = ModelFile::new(model, labels, 0.1, 10, seed, false).unwrap();
        let loaded = ModelFile::from_text(&file.to_text()).unwrap();
        prop_assert_eq!(loaded, file);
    }
}
