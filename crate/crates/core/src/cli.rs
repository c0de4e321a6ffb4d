//! The `hqfnn` command-line front end.
//!
//! Every subcommand accepts `--config FILE`, a flat `key = value` file whose
//! keys are flag names without the leading dashes. Flags given on the
//! command line override values from the file.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand};
use serde_json::json;

use crate::analysis::{entangling_score, expressibility_score, gate_count_report, noise_sweep};
use crate::data::{load_idx, parse_config, Dataset};
use crate::error::{Error, Result};
use crate::model::{load_checkpoint, save_checkpoint, ModelConfig, ModelParams};
use crate::qsim::ChannelKind;
use crate::train::{evaluate, train_with, write_metrics_csv, AdamConfig, MetricsRecord, TrainConfig};

#[derive(Debug, Parser)]
#[command(name = "hqfnn", version, about = "Hybrid quantum-fuzzy neural network", args_override_self = true, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train on an IDX dataset; writes metrics.csv, checkpoint.bin and summary.json.
    Train(TrainArgs),
    /// Evaluate a checkpoint on the test set.
    Eval(EvalArgs),
    /// Fidelity of the noisy membership circuit under the four Kraus channels.
    NoiseSweep(NoiseArgs),
    /// KL divergence of the analysis circuit's fidelity distribution from Haar.
    Expressibility(ExprArgs),
    /// Mean Meyer–Wallach entanglement of the analysis circuit.
    Entangle(EntangleArgs),
    /// Gate and parameter counts of a model configuration.
    Gates(GatesArgs),
}

#[derive(Debug, Args)]
struct ConfigArg {
    /// key = value file with defaults for any flag of this subcommand
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// features produced by the CNN stem
    #[arg(long, default_value_t = 16)]
    d: usize,
    /// membership functions per feature
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// re-uploading layers per membership circuit
    #[arg(long = "L_q", default_value_t = 4)]
    layers: usize,
    /// defuzzifier qubits
    #[arg(long, default_value_t = 6)]
    q: usize,
    /// size of the first measurement head [default: q/2]
    #[arg(long)]
    head_split: Option<usize>,
    #[arg(long, default_value_t = 64)]
    hidden: usize,
    #[arg(long, default_value_t = 10)]
    n_classes: usize,
}

impl ModelArgs {
    fn config(&self) -> Result<ModelConfig> {
        let c = ModelConfig {
            d: self.d,
            m: self.m,
            layers: self.layers,
            qubits: self.q,
            head_split: self.head_split.unwrap_or(self.q / 2),
            hidden: self.hidden,
            n_classes: self.n_classes,
            image_size: crate::data::MNIST_SIDE,
        };
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Args)]
struct DataArgs {
    /// directory holding {train,t10k}-{images-idx3,labels-idx1}-ubyte[.gz]
    #[arg(long, default_value = "data/mnist-5k")]
    data_dir: PathBuf,
    #[arg(long)]
    train_images: Option<PathBuf>,
    #[arg(long)]
    train_labels: Option<PathBuf>,
    #[arg(long)]
    test_images: Option<PathBuf>,
    #[arg(long)]
    test_labels: Option<PathBuf>,
    /// seeded random subset of the training file
    #[arg(long)]
    train_n: Option<usize>,
    /// seeded random subset of the test file
    #[arg(long)]
    test_n: Option<usize>,
}

impl DataArgs {
    fn resolve(&self, explicit: &Option<PathBuf>, stem: &str) -> Result<PathBuf> {
        if let Some(p) = explicit {
            return Ok(p.clone());
        }
        for name in [stem.to_string(), format!("{stem}.gz")] {
            let p = self.data_dir.join(name);
            if p.exists() {
                return Ok(p);
            }
        }
        Err(Error::InvalidArgument(format!("no {stem}[.gz] in {}", self.data_dir.display())))
    }

    fn load_train(&self, seed: u64) -> Result<Dataset> {
        let ds = load_idx(
            &self.resolve(&self.train_images, "train-images-idx3-ubyte")?,
            &self.resolve(&self.train_labels, "train-labels-idx1-ubyte")?,
        )?;
        match self.train_n {
            Some(n) => ds.random_subset(n, seed),
            None => Ok(ds),
        }
    }

    fn load_test(&self, seed: u64) -> Result<Dataset> {
        let ds = load_idx(
            &self.resolve(&self.test_images, "t10k-images-idx3-ubyte")?,
            &self.resolve(&self.test_labels, "t10k-labels-idx1-ubyte")?,
        )?;
        match self.test_n {
            Some(n) => ds.random_subset(n, seed.wrapping_add(2)),
            None => Ok(ds),
        }
    }
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 200)]
    epochs: usize,
    #[arg(long, default_value_t = 500)]
    batch_size: usize,
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    /// epochs after which the learning rate is multiplied by 0.1
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "100,150")]
    milestones: Vec<usize>,
    /// fraction of the training subset held out for validation
    #[arg(long, default_value_t = 0.1)]
    val_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "runs/train")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long)]
    checkpoint: PathBuf,
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct NoiseArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// channels to sweep (AD, DP, BF, PF)
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "AD,DP,BF,PF")]
    channel: Vec<ChannelKind>,
    /// noise probabilities
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "0.01,0.05,0.10")]
    probs: Vec<f64>,
    /// inputs sampled at equal intervals over [0, 2π)
    #[arg(long, default_value_t = 50)]
    n_inputs: usize,
    #[arg(long = "L_q", default_value_t = 4)]
    layers: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "runs/noise")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct ExprArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long = "L_q", value_delimiter = ',', action = ArgAction::Set, default_value = "4")]
    layers: Vec<usize>,
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "6")]
    q: Vec<usize>,
    #[arg(long, default_value_t = 5000)]
    pairs: usize,
    #[arg(long, default_value_t = 75)]
    bins: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "runs/expressibility")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct EntangleArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long = "L_q", value_delimiter = ',', action = ArgAction::Set, default_value = "4")]
    layers: Vec<usize>,
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "6")]
    q: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "runs/entangle")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct GatesArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    model: ModelArgs,
    /// print the report as JSON
    #[arg(long)]
    json: bool,
}

/// Splices `--key value` pairs from a `--config FILE` argument in front of
/// the user's own flags, so later (command-line) occurrences win.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate().skip(1) {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = args.get(i + 1).cloned();
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(p.into());
        }
    }
    let Some(path) = path else { return Ok(args) };
    if args.len() < 2 {
        return Ok(args);
    }
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read config {}: {e}", Path::new(&path).display())))?;
    let mut out = args[..2].to_vec();
    for entry in parse_config(&text)? {
        let key = entry.key.trim_start_matches('-');
        if key == "config" {
            continue;
        }
        let value = entry.value.to_ascii_lowercase();
        if value == "true" {
            out.push(format!("--{key}").into());
        } else if value != "false" {
            out.push(format!("--{key}").into());
            out.push(entry.value.into());
        }
    }
    out.extend(args[2..].iter().cloned());
    Ok(out)
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

fn metrics_json(r: &MetricsRecord) -> serde_json::Value {
    json!({ "loss": r.loss, "accuracy": r.accuracy, "precision": r.precision, "recall": r.recall, "f1": r.f1 })
}

fn run_train(a: &TrainArgs) -> Result<()> {
    let model = a.model.config()?;
    let tc = TrainConfig {
        batch_size: a.batch_size,
        lr0: a.lr,
        epochs: a.epochs,
        milestones: a.milestones.clone(),
        adam: AdamConfig::default(),
        seed: a.seed,
    };
    tc.validate()?;
    let full = a.data.load_train(a.seed)?;
    let (train_set, val_set) = full.split(a.val_fraction, a.seed.wrapping_add(1))?;
    let test_set = a.data.load_test(a.seed)?;
    eprintln!("train {} / val {} / test {} images", train_set.len(), val_set.len(), test_set.len());

    let init = ModelParams::init(model, a.seed)?;
    let out = train_with(&train_set, &val_set, init, &tc, |r, lr| {
        eprintln!(
            "epoch {:>3}/{}  lr {lr:.1e}  loss {:.4}  val acc {:.4}  f1 {:.4}",
            r.epoch, tc.epochs, r.loss, r.accuracy, r.f1
        );
    })?;
    let test = evaluate(&out.best, &test_set)?;

    fs::create_dir_all(&a.out_dir)?;
    write_metrics_csv(fs::File::create(a.out_dir.join("metrics.csv"))?, &out.history)?;
    save_checkpoint(&a.out_dir.join("checkpoint.bin"), &out.best)?;
    write_json(
        &a.out_dir.join("summary.json"),
        &json!({
            "model": model,
            "train": {
                "epochs": tc.epochs, "batch_size": tc.batch_size, "lr0": tc.lr0,
                "milestones": tc.milestones, "seed": tc.seed, "val_fraction": a.val_fraction,
            },
            "n_train": train_set.len(), "n_val": val_set.len(), "n_test": test_set.len(),
            "best_epoch": out.best_epoch,
            "lr_history": out.lr_history,
            "test": metrics_json(&test),
        }),
    )?;
    println!(
        "best epoch {}: test accuracy {:.4}  precision {:.4}  recall {:.4}  f1 {:.4}  loss {:.4}",
        out.best_epoch, test.accuracy, test.precision, test.recall, test.f1, test.loss
    );
    Ok(())
}

fn run_eval(a: &EvalArgs) -> Result<()> {
    let params = load_checkpoint(&a.checkpoint)?;
    let test = a.data.load_test(a.seed)?;
    let r = evaluate(&params, &test)?;
    println!("{}", serde_json::to_string_pretty(&metrics_json(&r)).map_err(|e| Error::Format(e.to_string()))?);
    Ok(())
}

fn run_noise(a: &NoiseArgs) -> Result<()> {
    fs::create_dir_all(&a.out_dir)?;
    let mut csv = String::from("channel,P,input,fidelity\n");
    let mut summary = Vec::new();
    println!("channel  {}", a.probs.iter().map(|p| format!("P={p:<8}")).collect::<Vec<_>>().join(" "));
    for &kind in &a.channel {
        let results = noise_sweep(kind, &a.probs, a.n_inputs, a.layers, a.seed)?;
        let mut row = format!("{:<8}", kind.code());
        for r in &results {
            for (x, f) in r.inputs.iter().zip(&r.fidelities) {
                csv.push_str(&format!("{},{},{},{}\n", kind.code(), r.probability, x, f));
            }
            row.push_str(&format!(" {:<10.4}", r.mean_fidelity));
            summary.push(json!({ "channel": kind, "P": r.probability, "mean_fidelity": r.mean_fidelity }));
        }
        println!("{row}");
    }
    fs::write(a.out_dir.join("noise_sweep.csv"), csv)?;
    write_json(
        &a.out_dir.join("noise_summary.json"),
        &json!({ "L_q": a.layers, "n_inputs": a.n_inputs, "seed": a.seed, "results": summary }),
    )
}

fn run_expr(a: &ExprArgs) -> Result<()> {
    fs::create_dir_all(&a.out_dir)?;
    let mut csv = String::from("L_q,q,expressibility,n_pairs,n_bins,seed\n");
    let mut hist = String::from("L_q,q,bin,lo,hi,empirical,haar\n");
    let mut rows = Vec::new();
    for &l in &a.layers {
        for &q in &a.q {
            let out = expressibility_score(l, q, a.pairs, a.bins, a.seed)?;
            println!("L_q={l} q={q}  expressibility {:.5}", out.kl);
            csv.push_str(&format!("{l},{q},{},{},{},{}\n", out.kl, a.pairs, a.bins, a.seed));
            for (b, (e, h)) in out.empirical.iter().zip(&out.haar).enumerate() {
                let (lo, hi) = (b as f64 / a.bins as f64, (b + 1) as f64 / a.bins as f64);
                hist.push_str(&format!("{l},{q},{b},{lo},{hi},{e},{h}\n"));
            }
            rows.push(json!({ "L_q": l, "q": q, "expressibility": out.kl }));
        }
    }
    fs::write(a.out_dir.join("expressibility.csv"), csv)?;
    fs::write(a.out_dir.join("expressibility_hist.csv"), hist)?;
    write_json(
        &a.out_dir.join("expressibility_summary.json"),
        &json!({ "n_pairs": a.pairs, "n_bins": a.bins, "seed": a.seed, "results": rows }),
    )
}

fn run_entangle(a: &EntangleArgs) -> Result<()> {
    fs::create_dir_all(&a.out_dir)?;
    let mut csv = String::from("L_q,q,entanglement,n_samples,seed\n");
    let mut rows = Vec::new();
    for &l in &a.layers {
        for &q in &a.q {
            let ent = entangling_score(l, q, a.samples, a.seed)?;
            println!("L_q={l} q={q}  entanglement {ent:.5}");
            csv.push_str(&format!("{l},{q},{ent},{},{}\n", a.samples, a.seed));
            rows.push(json!({ "L_q": l, "q": q, "entanglement": ent }));
        }
    }
    fs::write(a.out_dir.join("entangle.csv"), csv)?;
    write_json(&a.out_dir.join("entangle_summary.json"), &json!({ "n_samples": a.samples, "seed": a.seed, "results": rows }))
}

fn run_gates(a: &GatesArgs) -> Result<()> {
    let r = gate_count_report(&a.model.config()?)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&r).map_err(|e| Error::Format(e.to_string()))?);
        return Ok(());
    }
    println!("qmf_single_qubit_gates {}", r.qmf_single_qubit_gates);
    println!("qd_rx_gates {}", r.qd_rx_gates);
    println!("qd_cluster_cnots {}", r.qd_cluster_cnots);
    println!("qd_wrap_cnots {}", r.qd_wrap_cnots);
    println!("rule_weights {}", r.rule_weights);
    println!("qd_projection_weights {}", r.qd_projection_weights);
    println!("classifier_weights {}", r.classifier_weights);
    println!("total_parameters {}", r.total_parameters);
    Ok(())
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code: 0 on success, 2 on usage errors, 1 on
/// runtime failures.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = match expand_config(args.into_iter().map(Into::into).collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Train(a) => run_train(a),
        Command::Eval(a) => run_eval(a),
        Command::NoiseSweep(a) => run_noise(a),
        Command::Expressibility(a) => run_expr(a),
        Command::Entangle(a) => run_entangle(a),
        Command::Gates(a) => run_gates(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
