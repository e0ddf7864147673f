//! Regression tests on the shipped synthetic fixture: the default session
//! (seed 1) must train to a perfectly diagonal confusion matrix with both
//! the compact and the product-combinator configurations.

use fisnose::data::{generate_session, SessionConfig};
use fisnose::eval::{rmse, segment_counts, segment_object, EvalConfig};
use fisnose::fis::Combinator;
use fisnose::pipeline::{one_hot_target, run_experiment, split_train_test, train, TrainConfig};

#[test]
fn default_fixture_classifies_perfectly_with_ten_rules() {
    let dataset = generate_session(&SessionConfig::default()).unwrap();
    let report = run_experiment(&dataset, &TrainConfig::default(), &EvalConfig::default()).unwrap();
    assert_eq!(report.confusion.cell(0, 0), 31.25);
    assert_eq!(report.confusion.cell(1, 1), 31.25);
    assert_eq!(report.confusion.cell(2, 2), 37.5);
    for output in 0..3 {
        for input in 0..3 {
            if output != input {
                assert_eq!(report.confusion.cell(output, input), 0.0);
            }
        }
    }
    assert_eq!(report.efficiency(), 100.0);
    assert!(!report.degenerate);
}

#[test]
fn default_fixture_classifies_perfectly_with_product_baseline() {
    let dataset = generate_session(&SessionConfig::default()).unwrap();
    let config = TrainConfig {
        rules: 20,
        combinator: Combinator::ProductOfGaussians,
        ..TrainConfig::default()
    };
    let report = run_experiment(&dataset, &config, &EvalConfig::default()).unwrap();
    assert_eq!(report.efficiency(), 100.0);
}

#[test]
fn every_test_segment_fits_its_own_target_below_threshold() {
    let dataset = generate_session(&SessionConfig::default()).unwrap();
    let (train_half, test_half) = split_train_test(&dataset).unwrap();
    let outcome = train(&train_half, &TrainConfig::default()).unwrap();

    let counts = segment_counts(16, 3);
    for (index, (object, &count)) in test_half.objects().iter().zip(&counts).enumerate() {
        let own_target = one_hot_target(index + 1, 3).unwrap();
        for segment in segment_object(object.samples(), count).unwrap() {
            let own = rmse(&outcome.model, segment, own_target.as_slice()).unwrap();
            assert!(own < 0.1, "object {index} segment RMSE {own} not below 0.1");
            for other in 1..=3 {
                if other == index + 1 {
                    continue;
                }
                let target = one_hot_target(other, 3).unwrap();
                let foreign = rmse(&outcome.model, segment, target.as_slice()).unwrap();
                assert!(
                    foreign >= 0.1,
                    "object {index} passed foreign target {other} with RMSE {foreign}"
                );
            }
        }
    }
}

#[test]
fn training_reduces_rmse_on_the_fixture() {
    let dataset = generate_session(&SessionConfig::default()).unwrap();
    let (train_half, _) = split_train_test(&dataset).unwrap();
    let outcome = train(&train_half, &TrainConfig::default()).unwrap();
    let trace = &outcome.rmse_trace;
    assert_eq!(trace.len(), TrainConfig::default().epochs + 1);
    assert!(trace.last().unwrap() <= trace.first().unwrap());
}
