use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use flate2::write::GzEncoder;
use flate2::Compression;
use hqfnn::cli::run_cli;
use hqfnn::data::{load_idx, make_batches};
use hqfnn::model::{load_checkpoint, ModelConfig, ModelParams};
use hqfnn::Error;

fn mnist_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/mnist-5k")
}

/// Hand-assembled IDX pair: image `i` has every pixel equal to `10·i`.
fn write_fixture(dir: &Path, n: u32, side: u32, n_labels: u32) -> (PathBuf, PathBuf) {
    let mut img = vec![0, 0, 8, 3];
    for v in [n, side, side] {
        img.extend_from_slice(&v.to_be_bytes());
    }
    for i in 0..n {
        img.extend(std::iter::repeat_n((10 * i) as u8, (side * side) as usize));
    }
    let mut lbl = vec![0, 0, 8, 1];
    lbl.extend_from_slice(&n_labels.to_be_bytes());
    lbl.extend((0..n_labels).map(|i| (i % 10) as u8));
    let (ip, lp) = (dir.join("img.idx"), dir.join("lbl.idx"));
    fs::write(&ip, img).unwrap();
    fs::write(&lp, lbl).unwrap();
    (ip, lp)
}

#[test]
fn hand_built_fixture_loads() {
    let dir = tempfile::tempdir().unwrap();
    let (ip, lp) = write_fixture(dir.path(), 10, 28, 10);
    let ds = load_idx(&ip, &lp).unwrap();
    assert_eq!(ds.len(), 10);
    assert_eq!(ds.image(0).len(), 784);
    assert_eq!(ds.labels()[7], 7);
    // pixel means 0, 10, …, 90 over 255
    assert!((ds.mean() - 45.0 / 255.0).abs() < 1e-12);
    let mean: f64 = ds.pixels().iter().sum::<f64>() / ds.pixels().len() as f64;
    assert!(mean.abs() < 1e-12);
}

#[test]
fn gzip_files_are_read_transparently() {
    let dir = tempfile::tempdir().unwrap();
    let (ip, lp) = write_fixture(dir.path(), 3, 28, 3);
    let gz = dir.path().join("img.idx.gz");
    let mut enc = GzEncoder::new(fs::File::create(&gz).unwrap(), Compression::default());
    enc.write_all(&fs::read(&ip).unwrap()).unwrap();
    enc.finish().unwrap();
    let (a, b) = (load_idx(&gz, &lp).unwrap(), load_idx(&ip, &lp).unwrap());
    assert_eq!(a.pixels(), b.pixels());
    assert_eq!(a.labels(), b.labels());
}

#[test]
fn malformed_files_fail_closed() {
    let dir = tempfile::tempdir().unwrap();
    let (ip, lp) = write_fixture(dir.path(), 4, 28, 4);
    let bytes = fs::read(&ip).unwrap();
    fs::write(&ip, &bytes[..bytes.len() - 5]).unwrap();
    assert!(matches!(load_idx(&ip, &lp), Err(Error::Format(_))));
    // swapped files: wrong magic
    let (ip, lp) = write_fixture(dir.path(), 4, 28, 4);
    assert!(matches!(load_idx(&lp, &ip), Err(Error::Format(_))));
    let (ip, lp) = write_fixture(dir.path(), 4, 27, 4);
    assert!(matches!(load_idx(&ip, &lp), Err(Error::Format(_))));
    let (ip, lp) = write_fixture(dir.path(), 4, 28, 5);
    assert!(matches!(load_idx(&ip, &lp), Err(Error::Consistency(_))));
}

#[test]
fn constant_images_keep_unit_std() {
    let dir = tempfile::tempdir().unwrap();
    let (ip, lp) = write_fixture(dir.path(), 1, 28, 1);
    let ds = load_idx(&ip, &lp).unwrap();
    assert_eq!((ds.mean(), ds.std()), (0.0, 1.0));
}

#[test]
fn mnist_subset_is_standardised() {
    let d = mnist_dir();
    let ds = load_idx(&d.join("train-images-idx3-ubyte.gz"), &d.join("train-labels-idx1-ubyte.gz")).unwrap();
    assert_eq!(ds.len(), 4000);
    let n = ds.pixels().len() as f64;
    let mean = ds.pixels().iter().sum::<f64>() / n;
    let std = (ds.pixels().iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n).sqrt();
    assert!(mean.abs() < 1e-6 && (std - 1.0).abs() < 1e-6);
    assert_eq!(ds.num_classes(), 10);
}

#[test]
fn batches_cover_the_dataset_once() {
    let b = make_batches(103, 10, 42, true).unwrap();
    assert_eq!(b.len(), 11);
    let mut seen = vec![0; 103];
    for i in b.concat() {
        seen[i] += 1;
    }
    assert!(seen.iter().all(|&c| c == 1));
}

fn cli(args: &[&str]) -> i32 {
    run_cli(std::iter::once("hqfnn").chain(args.iter().copied()))
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&[]), 2);
    assert_eq!(cli(&["nonsense"]), 2);
    assert_eq!(cli(&["gates", "--unknown-flag", "1"]), 2);
    assert_eq!(cli(&["gates", "--L_q", "four"]), 2);
}

#[test]
fn runtime_errors_exit_1() {
    assert_eq!(cli(&["gates", "--q", "2"]), 1);
    assert_eq!(cli(&["eval", "--checkpoint", "/nonexistent/x.bin"]), 1);
    assert_eq!(cli(&["noise-sweep", "--probs", "1.5", "--out-dir", "/tmp/unused"]), 1);
}

#[test]
fn gates_runs_and_reads_config_files() {
    assert_eq!(cli(&["gates", "--L_q", "4", "--m", "3", "--d", "16"]), 0);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("g.cfg");
    fs::write(&cfg, "# comment\nq = 2\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(cli(&["gates", "--config", cfg]), 1);
    assert_eq!(cli(&["gates", "--config", cfg, "--q", "6"]), 0);
    fs::write(dir.path().join("bad.cfg"), "bogus = 1\n").unwrap();
    assert_eq!(cli(&["gates", "--config", dir.path().join("bad.cfg").to_str().unwrap()]), 2);
}

fn train_args<'a>(data: &'a str, out: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["train", "--data-dir", data, "--train-n", "60", "--test-n", "30", "--d", "4", "--out-dir", out];
    v.extend_from_slice(extra);
    v
}

#[test]
fn zero_lr_training_saves_the_initialisation() {
    let data = mnist_dir();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let (data, out_s) = (data.to_str().unwrap(), out.to_str().unwrap());
    assert_eq!(cli(&train_args(data, out_s, &["--epochs", "1", "--lr", "0", "--seed", "5"])), 0);
    let saved = load_checkpoint(&out.join("checkpoint.bin")).unwrap();
    let init = ModelParams::init(ModelConfig { d: 4, ..ModelConfig::default() }, 5).unwrap();
    assert_eq!(saved, init);
    let csv = fs::read_to_string(out.join("metrics.csv")).unwrap();
    assert!(csv.starts_with("epoch,loss,acc,precision,recall,f1\n1,"));
    assert_eq!(cli(&["eval", "--checkpoint", out.join("checkpoint.bin").to_str().unwrap(), "--data-dir", data, "--test-n", "30"]), 0);
}

#[test]
fn identical_runs_write_identical_files() {
    let data = mnist_dir();
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let data = data.to_str().unwrap();
    for out in [&a, &b] {
        assert_eq!(cli(&train_args(data, out.to_str().unwrap(), &["--epochs", "2", "--batch-size", "20"])), 0);
    }
    for f in ["metrics.csv", "checkpoint.bin", "summary.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn analysis_subcommands_write_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let (n, e, x) = (out("noise"), out("ent"), out("expr"));
    assert_eq!(cli(&["noise-sweep", "--channel", "DP,AD", "--probs", "0,0.1", "--n-inputs", "4", "--out-dir", &n]), 0);
    let csv = fs::read_to_string(Path::new(&n).join("noise_sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 4);
    assert!(Path::new(&n).join("noise_summary.json").exists());
    assert_eq!(cli(&["entangle", "--L_q", "1", "--q", "3,4", "--samples", "100", "--out-dir", &e]), 0);
    assert_eq!(fs::read_to_string(Path::new(&e).join("entangle.csv")).unwrap().lines().count(), 3);
    assert_eq!(cli(&["expressibility", "--L_q", "1", "--q", "3", "--pairs", "1000", "--bins", "20", "--out-dir", &x]), 0);
    assert_eq!(fs::read_to_string(Path::new(&x).join("expressibility_hist.csv")).unwrap().lines().count(), 21);
}
