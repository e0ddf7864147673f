//! Command-line surface: generate synthetic sessions, train models, examine
//! them into confusion matrices, classify live readings, and compare two
//! configurations side by side.
//!
//! Datasets are session CSVs. Training always consumes the first half of
//! each object's samples (in time order); evaluation examines the second
//! half, so `train` and `evaluate` on the same file reproduce one experiment.

use std::io::BufRead;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use fisnose::data::{
    adc_to_volts, generate_session_rows, read_csv, read_stream, write_session_csv, LabeledDataset,
    ObjectProfile, SessionConfig,
};
use fisnose::eval::{rmse, EvalConfig};
use fisnose::fis::Combinator;
use fisnose::model_file::ModelFile;
use fisnose::pipeline::{one_hot_target, run_experiment, split_train_test, train, TrainConfig};

#[derive(Parser)]
#[command(
    name = "fisnose",
    version,
    about = "Gaussian fuzzy inference classifier for five-channel gas-sensor data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic odor session CSV.
    Generate(GenerateArgs),
    /// Train a model on the first half of each object's samples.
    Train(TrainArgs),
    /// Examine the second half of each object's samples into a confusion matrix.
    Evaluate(EvaluateArgs),
    /// Classify windows of live ADC readings from a line stream.
    Classify(ClassifyArgs),
    /// Train and examine two configurations side by side.
    Compare(CompareArgs),
}

fn combinator_value(s: &str) -> Result<Combinator, String> {
    s.parse().map_err(|e: fisnose::Error| e.to_string())
}

#[derive(Args)]
struct GenerateArgs {
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Exposure samples recorded per object.
    #[arg(long, default_value_t = 800)]
    samples_per_object: usize,
    /// Comma-separated object labels (up to five supported).
    #[arg(long, value_delimiter = ',')]
    objects: Option<Vec<String>>,
}

#[derive(Args)]
struct TrainArgs {
    /// Session CSV to train on.
    #[arg(long)]
    data: PathBuf,
    /// Where to write the trained model.
    #[arg(long)]
    model_out: PathBuf,
    /// Rule count m.
    #[arg(long, default_value_t = 10)]
    rules: usize,
    /// Learning rate, strictly inside (0, 1).
    #[arg(long, default_value_t = 0.1)]
    eta: f64,
    #[arg(long, default_value_t = 10)]
    epochs: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Firing-strength formula: `exp-sum` or `product`.
    #[arg(long, default_value = "exp-sum", value_parser = combinator_value)]
    combinator: Combinator,
    /// Shuffle (sample, target) pairs each epoch instead of object order.
    #[arg(long, default_value_t = false)]
    shuffle: bool,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Session CSV to examine (its test half is used).
    #[arg(long)]
    data: PathBuf,
    /// Trained model file.
    #[arg(long)]
    model: PathBuf,
    /// RMSE pass threshold (strict).
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Total examination segments.
    #[arg(long, default_value_t = 16)]
    segments: usize,
    /// Optional confusion-matrix CSV output.
    #[arg(long)]
    report_out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Trained model file.
    #[arg(long)]
    model: PathBuf,
    /// Line source of `v1,v2,v3,v4,v5` ADC integers; standard input if omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Samples per classification window.
    #[arg(long, default_value_t = 25)]
    window: usize,
}

#[derive(Args)]
struct CompareArgs {
    /// Session CSV both configurations train and examine on.
    #[arg(long)]
    data: PathBuf,
    /// Rule count of configuration A (the compact setup).
    #[arg(long, default_value_t = 10)]
    rules_a: usize,
    #[arg(long, default_value = "exp-sum", value_parser = combinator_value)]
    combinator_a: Combinator,
    /// Rule count of configuration B (the reference setup).
    #[arg(long, default_value_t = 20)]
    rules_b: usize,
    #[arg(long, default_value = "product", value_parser = combinator_value)]
    combinator_b: Combinator,
    #[arg(long, default_value_t = 0.1)]
    eta: f64,
    #[arg(long, default_value_t = 10)]
    epochs: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Seed override for configuration A only.
    #[arg(long)]
    seed_a: Option<u64>,
    /// Seed override for configuration B only.
    #[arg(long)]
    seed_b: Option<u64>,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 16)]
    segments: usize,
    /// Optional side-by-side summary CSV output.
    #[arg(long)]
    report_out: Option<PathBuf>,
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Generate(args) => cmd_generate(args),
        Command::Train(args) => cmd_train(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Compare(args) => cmd_compare(args),
    }
}

/// Response profiles for a custom label list: the three built-in patterns,
/// then channel rotations of them for a fourth and fifth object.
fn profiles_for(labels: &[String]) -> anyhow::Result<Vec<ObjectProfile>> {
    let defaults = SessionConfig::default().objects;
    if labels.is_empty() || labels.len() > 5 {
        bail!("between 1 and 5 object labels are supported, got {}", labels.len());
    }
    Ok(labels
        .iter()
        .enumerate()
        .map(|(k, label)| {
            let base = defaults[k % defaults.len()].response;
            let mut response = [0.0; 5];
            for i in 0..5 {
                response[i] = base[(i + k / defaults.len()) % 5];
            }
            ObjectProfile::new(label.clone(), response)
        })
        .collect())
}

fn cmd_generate(args: GenerateArgs) -> anyhow::Result<()> {
    let mut config = SessionConfig {
        seed: args.seed,
        exposure_duration: args.samples_per_object,
        ..SessionConfig::default()
    };
    if let Some(labels) = &args.objects {
        config.objects = profiles_for(labels)?;
    }
    let rows = generate_session_rows(&config)?;
    write_session_csv(&LabeledDataset::standard_channels(), &rows, &args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    let labels: Vec<String> = config.objects.iter().map(|o| o.label.clone()).collect();
    println!(
        "wrote {} rows ({} objects x {} samples, plus rest phases) to {}",
        rows.len(),
        labels.len(),
        config.exposure_duration,
        args.out.display()
    );
    Ok(())
}

fn cmd_train(args: TrainArgs) -> anyhow::Result<()> {
    let dataset = read_csv(&args.data).with_context(|| format!("reading {}", args.data.display()))?;
    let config = TrainConfig {
        eta: args.eta,
        epochs: args.epochs,
        seed: args.seed,
        rules: args.rules,
        combinator: args.combinator,
        shuffle: args.shuffle,
    };
    config.validate()?;
    let (train_half, _) = split_train_test(&dataset)?;
    let outcome = train(&train_half, &config)?;

    for (epoch, value) in outcome.rmse_trace.iter().enumerate() {
        if epoch == 0 {
            println!("epoch  0 (init): RMSE {value:.6}");
        } else {
            println!("epoch {epoch:>2}: RMSE {value:.6}");
        }
    }
    let file = ModelFile::new(
        outcome.model,
        dataset.labels(),
        config.eta,
        config.epochs,
        config.seed,
        config.shuffle,
    )?;
    file.save(&args.model_out)
        .with_context(|| format!("writing {}", args.model_out.display()))?;
    println!(
        "saved model ({} rules, {} parameters) to {}",
        file.model.rule_count(),
        file.model.parameter_count(),
        args.model_out.display()
    );
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> anyhow::Result<()> {
    let dataset = read_csv(&args.data).with_context(|| format!("reading {}", args.data.display()))?;
    let file = ModelFile::load(&args.model).with_context(|| format!("reading {}", args.model.display()))?;
    if dataset.labels() != file.labels {
        bail!(
            "dataset objects ({}) do not match the model's labels ({})",
            dataset.labels().join(","),
            file.labels.join(",")
        );
    }
    let eval_config = EvalConfig {
        epsilon: args.epsilon,
        segments: args.segments,
    };
    eval_config.validate()?;

    let (_, test_half) = split_train_test(&dataset)?;
    let counts = fisnose::eval::segment_counts(eval_config.segments, test_half.object_count());
    let mut per_object = Vec::new();
    for (object, &count) in test_half.objects().iter().zip(&counts) {
        per_object.push(fisnose::eval::segment_object(object.samples(), count)?);
    }
    let confusion = fisnose::eval::confusion_matrix(
        &file.model,
        &per_object,
        eval_config.epsilon,
        eval_config.segments,
    )?;

    print!("{}", confusion.render_table(&file.labels));
    if let Some(path) = &args.report_out {
        std::fs::write(path, confusion.to_csv(&file.labels))
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote confusion CSV to {}", path.display());
    }
    Ok(())
}

fn cmd_classify(args: ClassifyArgs) -> anyhow::Result<()> {
    let file = ModelFile::load(&args.model).with_context(|| format!("reading {}", args.model.display()))?;
    if file.model.input_count() != 5 {
        bail!(
            "the live protocol carries 5 channels but the model expects {}",
            file.model.input_count()
        );
    }
    if args.window == 0 {
        bail!("window must hold at least one sample");
    }

    let stdin = std::io::stdin();
    let source: Box<dyn BufRead> = match &args.input {
        Some(path) => Box::new(std::io::BufReader::new(
            std::fs::File::open(path).with_context(|| format!("reading {}", path.display()))?,
        )),
        None => Box::new(stdin.lock()),
    };

    let mut window = Vec::with_capacity(args.window);
    let mut classified = 0usize;
    let classify_window = |window: &mut Vec<fisnose::SensorSample>| -> anyhow::Result<()> {
        let mut best: Option<(usize, f64)> = None;
        for candidate in 1..=file.model.output_count() {
            let target = one_hot_target(candidate, file.model.output_count())?;
            let value = rmse(&file.model, window, target.as_slice())?;
            if best.is_none_or(|(_, current)| value < current) {
                best = Some((candidate, value));
            }
        }
        let (candidate, value) = best.expect("models have at least one output");
        println!("{} (window RMSE {value:.4})", file.labels[candidate - 1]);
        window.clear();
        Ok(())
    };

    for item in read_stream(source) {
        match item {
            Ok(reading) => {
                window.push(adc_to_volts(&reading));
                if window.len() == args.window {
                    classify_window(&mut window)?;
                    classified += 1;
                }
            }
            Err(err) => eprintln!("warning: {err}"),
        }
    }
    if !window.is_empty() {
        classify_window(&mut window)?;
        classified += 1;
    }
    if classified == 0 {
        bail!("no samples");
    }
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> anyhow::Result<()> {
    let dataset = read_csv(&args.data).with_context(|| format!("reading {}", args.data.display()))?;
    let eval_config = EvalConfig {
        epsilon: args.epsilon,
        segments: args.segments,
    };
    let configs = [
        (
            "A",
            TrainConfig {
                eta: args.eta,
                epochs: args.epochs,
                seed: args.seed_a.unwrap_or(args.seed),
                rules: args.rules_a,
                combinator: args.combinator_a,
                shuffle: false,
            },
        ),
        (
            "B",
            TrainConfig {
                eta: args.eta,
                epochs: args.epochs,
                seed: args.seed_b.unwrap_or(args.seed),
                rules: args.rules_b,
                combinator: args.combinator_b,
                shuffle: false,
            },
        ),
    ];

    let mut reports = Vec::new();
    for (tag, config) in &configs {
        config.validate()?;
        let report = run_experiment(&dataset, config, &eval_config)?;
        println!("=== configuration {tag} ===");
        print!("{}", report.summary_text());
        println!();
        reports.push((*tag, report));
    }

    let (a, b) = (&reports[0].1, &reports[1].1);
    println!("--- comparison ---");
    println!(
        "rules: A={} B={}  parameters: A={} B={}",
        a.train_config.rules,
        b.train_config.rules,
        a.parameter_count(),
        b.parameter_count()
    );
    println!(
        "efficiency: A={:.2} B={:.2}",
        a.efficiency(),
        b.efficiency()
    );
    if a.train_config.seed != b.train_config.seed {
        println!(
            "note: configurations used different seeds (A={} B={})",
            a.train_config.seed, b.train_config.seed
        );
    }

    if let Some(path) = &args.report_out {
        let mut csv = String::from("config,key,value\n");
        for (tag, report) in &reports {
            for line in report.summary_csv().lines().skip(1) {
                csv.push_str(&format!("{tag},{line}\n"));
            }
        }
        std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
        println!("wrote comparison CSV to {}", path.display());
    }
    Ok(())
}
