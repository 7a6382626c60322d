use std::path::Path;
use std::process::{Command, Output};

fn rgg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rgg"))
        .args(args)
        .env_remove("RGG_THREADS")
        .output()
        .expect("run rgg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    assert_eq!(rgg(&["--help"]).status.code(), Some(0));
    assert_eq!(rgg(&["--version"]).status.code(), Some(0));
    assert_eq!(rgg(&["expect", "--pattern", "C4", "--n", "50", "--d", "30", "--p", "0.5"]).status.code(), Some(0));
    assert_eq!(rgg(&["expect", "--bogus"]).status.code(), Some(1));
    assert_eq!(rgg(&[]).status.code(), Some(1));
    // p outside (0, 1]
    assert_eq!(rgg(&["sample", "--n", "5", "--d", "3", "--p", "1.5"]).status.code(), Some(1));
    // a C4 block wraps around at d = 2
    assert_eq!(rgg(&["signed-expect", "--pattern", "C4", "--n", "10", "--d", "2", "--p", "0.5"]).status.code(), Some(1));
    assert_eq!(rgg(&["bounds", "kl", "--n", "10000", "--d", "1000", "--p", "0.5"]).status.code(), Some(1));
    assert_eq!(rgg(&["sample", "--n", "5", "--d", "3", "--p", "0.5", "--format", "binary", "phase-diagram"]).status.code(), Some(1));
}

#[test]
fn header_records_parameters_and_seed() {
    let o = rgg(&["--seed", "5", "sample", "--n", "20", "--d", "4", "--p", "0.3"]);
    let text = stdout(&o);
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("# rgg "), "{header}");
    for part in ["command=sample", "n=20", "d=4", "q=inf", "p=0.3", "seed=5"] {
        assert!(header.split(' ').any(|w| w == part), "{part} missing from {header}");
    }
    assert!(!header.contains("threads"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed=5"));
}

#[test]
fn missing_seed_is_drawn_and_reported() {
    let o = rgg(&["sample", "--n", "10", "--d", "3", "--p", "0.5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let seed = text.lines().next().unwrap().rsplit("seed=").next().unwrap().to_string();
    let again = rgg(&["--seed", &seed, "sample", "--n", "10", "--d", "3", "--p", "0.5"]);
    assert_eq!(text, stdout(&again));
}

#[test]
fn config_file_supplies_flags_and_command_line_wins() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "kl.conf",
        "# bound at two dimensions\ncommand = bounds kl\nn = 20\nd = 1000,2000\np = 0.5\nseed = 1\n",
    );
    let from_file = stdout(&rgg(&["--config", &cfg]));
    let explicit = stdout(&rgg(&["--seed", "1", "bounds", "kl", "--n", "20", "--d", "1000,2000", "--p", "0.5"]));
    assert_eq!(from_file, explicit);
    assert_eq!(from_file.lines().count(), 4);

    let overridden = stdout(&rgg(&["--config", &cfg, "--n", "30"]));
    assert!(overridden.lines().next().unwrap().contains(" n=30 "));
    let row = overridden.lines().nth(2).unwrap();
    assert!(row.starts_with("30,"), "{row}");

    let bad = write(dir.path(), "bad.conf", "command = bounds kl\nconfig = other.conf\n");
    assert_eq!(rgg(&["--config", &bad]).status.code(), Some(1));
}

#[test]
fn output_file_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let o = rgg(&[
        "--seed", "3", "--format", "json", "--out", out.to_str().unwrap(),
        "moments", "--d", "40", "--p", "0.5",
    ]);
    // `moments` lives under `bounds`
    assert_eq!(o.status.code(), Some(1));
    let o = rgg(&[
        "--seed", "3", "--format", "json", "--out", out.to_str().unwrap(),
        "bounds", "moments", "--d", "40", "--p", "0.5", "--t-max", "3",
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["tool"], "rgg");
    assert_eq!(v["seed"], 3);
    assert_eq!(v["config"]["d"], 40);
    assert!(v["result"].is_object() || v["result"].is_array());
}

#[test]
fn binary_sample_round_trips_edge_count() {
    let args = ["--seed", "9", "sample", "--n", "70", "--d", "5", "--p", "0.4"];
    let csv = stdout(&rgg(&args));
    let edges = csv.lines().filter(|l| !l.starts_with('#') && *l != "u,v").count();
    let mut bin_args = args.to_vec();
    bin_args.extend(["--format", "binary"]);
    let bin = rgg(&bin_args).stdout;
    assert_eq!(&bin[..4], b"RGGB");
    assert_eq!(u64::from_le_bytes(bin[6..14].try_into().unwrap()), 70);
    assert_eq!(bin.len(), 14 + (70 * 69 / 2usize).div_ceil(8));
    let ones: u32 = bin[14..].iter().map(|b| b.count_ones()).sum();
    assert_eq!(ones as usize, edges);
}

#[test]
fn selftest_lists_every_check() {
    for name in rgg_cli::selftest::check_names() {
        assert!(!name.is_empty());
    }
    assert!(rgg_cli::selftest::check_names().len() >= 25);
}
