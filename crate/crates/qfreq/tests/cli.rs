//! End-to-end checks of the qfreq binary: generate → run → verify round trips,
//! exit codes, and the external file formats.

use std::process::Command;

fn qfreq() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qfreq"))
}

fn tempdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("qfreq_cli_{tag}_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn gen_writes_a_valid_stream_file() {
    let dir = tempdir("gen");
    let out = dir.join("pairs.txt");
    let status = qfreq()
        .args([
            "gen",
            "pairs",
            "--params",
            "n=64",
            "--seed",
            "9",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());

    let stream = qfreq::stream::load_stream(&out).unwrap();
    assert_eq!(stream.n(), 64);
    assert_eq!(
        qfreq::moments::exact_moment(&stream, 2),
        num_bigint::BigUint::from(128u32)
    );
}

#[test]
fn run_reads_config_and_writes_csv() {
    let dir = tempdir("run");
    let stream_path = dir.join("in.txt");
    let csv_path = dir.join("out.csv");
    let status = qfreq()
        .args([
            "gen",
            "balanced",
            "--params",
            "n=128,f0=32,m=256",
            "--seed",
            "4",
            "--out",
            stream_path.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());

    let config_path = dir.join("exp.cfg");
    std::fs::write(
        &config_path,
        format!(
            "[experiment]\nalgorithm = f0_query\ntrials = 8\nseed = 11\nepsilon = 1.0\noutput = {}\n\
             [stream]\nsource = file\npath = {}\n",
            csv_path.display(),
            stream_path.display()
        ),
    )
    .unwrap();

    let output = qfreq()
        .args(["run", config_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), qfreq::harness::RESULT_CSV_HEADER);
    assert_eq!(lines.count(), 8);
}

#[test]
fn verify_suite_passes_and_unknown_suite_exits_2() {
    let output = qfreq().args(["verify", "nk"]).output().unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("PASS nk_exact_mean"));

    let output = qfreq().args(["verify", "not_a_suite"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn theory_emits_the_grid() {
    let output = qfreq()
        .args(["theory", "f0_query_upper", "--grid", "n=10000;epsilon=0.1"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("f0_query_upper,upper,10000,2,0.1,1000"));
}

#[test]
fn malformed_stream_file_is_rejected_with_line_number() {
    let dir = tempdir("badfile");
    let stream_path = dir.join("bad.txt");
    std::fs::write(&stream_path, "2 4\n1\n9\n").unwrap();
    let config_path = dir.join("exp.cfg");
    std::fs::write(
        &config_path,
        format!(
            "[experiment]\nalgorithm = f0_query\ntrials = 1\nseed = 1\n\
             [stream]\nsource = file\npath = {}\n",
            stream_path.display()
        ),
    )
    .unwrap();
    let output = qfreq()
        .args(["run", config_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 3"), "stderr: {stderr}");
}

#[test]
fn missing_command_exits_2() {
    let output = qfreq().output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}
