//! qfreq command line: run experiments from config files, generate instances,
//! emit theory-curve tables, and run the verification suites.
//!
//! Exit codes: 0 success, 2 validation failure (bad arguments, bad config,
//! failed verification), 1 runtime error.

use std::collections::BTreeMap;
use std::process::ExitCode;

use qfreq::harness::{
    run_and_write, run_suite, theory_table, CurveId, ExperimentConfig, GeneratorSpec, ALL_CURVES,
};

const USAGE: &str = "\
qfreq — frequency-moment simulation lab

USAGE:
  qfreq run <config>                      run an experiment config, write its CSV
  qfreq theory <curve|all> --grid SPEC    evaluate theory curves on a grid
        [--out FILE]                      grid SPEC: n=256,1024;k=2,3;epsilon=0.5,0.25
  qfreq gen <name> --params k1=v1,k2=v2   generate an instance stream file
        --seed N --out FILE               names: uniform zipf all_equal all_distinct
                                          pairs near_pairs balanced equality
  qfreq verify <suite>                    run a verification suite and print one
                                          line per check; suites: collision_moments
                                          hash collision ams nk all

Exit codes: 0 ok, 2 validation failure, 1 runtime error.
";

enum CliError {
    Validation(String),
    Runtime(String),
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(message)) => {
            eprintln!("error: {message}");
            eprintln!("{USAGE}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(args: &[String]) -> Result<(), CliError> {
    match args.first().map(String::as_str) {
        Some("run") => cmd_run(&args[1..]),
        Some("theory") => cmd_theory(&args[1..]),
        Some("gen") => cmd_gen(&args[1..]),
        Some("verify") => cmd_verify(&args[1..]),
        Some("--help") | Some("-h") | Some("help") => {
            println!("{USAGE}");
            Ok(())
        }
        Some(other) => Err(CliError::Validation(format!("unknown command {other:?}"))),
        None => Err(CliError::Validation("missing command".into())),
    }
}

fn flag_value<'a>(args: &'a [String], name: &str) -> Option<&'a str> {
    args.iter()
        .position(|a| a == name)
        .and_then(|i| args.get(i + 1))
        .map(String::as_str)
}

fn cmd_run(args: &[String]) -> Result<(), CliError> {
    let path = args
        .first()
        .ok_or_else(|| CliError::Validation("run: missing config path".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("reading {path}: {e}")))?;
    let config =
        ExperimentConfig::from_text(&text).map_err(|e| CliError::Validation(e.to_string()))?;
    let rows = run_and_write(&config).map_err(|e| CliError::Runtime(e.to_string()))?;

    let successes = rows.iter().filter(|r| r.success).count();
    println!(
        "{}: {} trials, {} within tolerance ({:.1}%)",
        config.algorithm.id(),
        rows.len(),
        successes,
        100.0 * successes as f64 / rows.len() as f64
    );
    if let Some(out) = &config.output {
        println!("wrote {}", out.display());
    }
    Ok(())
}

type Grid = (Vec<u64>, Vec<u32>, Vec<f64>);

fn parse_grid(spec: &str) -> Result<Grid, CliError> {
    let mut ns = vec![1024u64];
    let mut ks = vec![2u32];
    let mut epsilons = vec![0.5f64];
    for part in spec.split(';') {
        let Some((key, values)) = part.split_once('=') else {
            return Err(CliError::Validation(format!(
                "grid: expected key=v1,v2 in {part:?}"
            )));
        };
        match key.trim() {
            "n" => ns = parse_list(values)?,
            "k" => ks = parse_list(values)?,
            "epsilon" => epsilons = parse_list(values)?,
            other => {
                return Err(CliError::Validation(format!(
                    "grid: unknown axis {other:?}"
                )))
            }
        }
    }
    Ok((ns, ks, epsilons))
}

fn parse_list<T: std::str::FromStr>(values: &str) -> Result<Vec<T>, CliError> {
    values
        .split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| CliError::Validation(format!("grid: bad value {v:?}")))
        })
        .collect()
}

fn cmd_theory(args: &[String]) -> Result<(), CliError> {
    let which = args
        .first()
        .ok_or_else(|| CliError::Validation("theory: missing curve id".into()))?;
    let curves: Vec<CurveId> = if which == "all" {
        ALL_CURVES.to_vec()
    } else {
        vec![CurveId::parse(which).map_err(|e| CliError::Validation(e.to_string()))?]
    };
    let grid = flag_value(args, "--grid")
        .ok_or_else(|| CliError::Validation("theory: missing --grid".into()))?;
    let (ns, ks, epsilons) = parse_grid(grid)?;
    let csv = theory_table(&curves, &ns, &ks, &epsilons);
    match flag_value(args, "--out") {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| CliError::Runtime(format!("writing {path}: {e}")))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_gen(args: &[String]) -> Result<(), CliError> {
    let name = args
        .first()
        .ok_or_else(|| CliError::Validation("gen: missing generator name".into()))?;
    let mut params: BTreeMap<String, String> = BTreeMap::new();
    if let Some(spec) = flag_value(args, "--params") {
        for pair in spec.split(',') {
            let Some((k, v)) = pair.split_once('=') else {
                return Err(CliError::Validation(format!(
                    "gen: expected key=value in {pair:?}"
                )));
            };
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    let seed: u64 = flag_value(args, "--seed")
        .map(|s| {
            s.parse()
                .map_err(|_| CliError::Validation(format!("gen: bad seed {s:?}")))
        })
        .transpose()?
        .unwrap_or(0);
    let out = flag_value(args, "--out")
        .ok_or_else(|| CliError::Validation("gen: missing --out".into()))?;

    let spec =
        GeneratorSpec::parse(name, &params).map_err(|e| CliError::Validation(e.to_string()))?;
    let instance = spec
        .generate(&mut qfreq::rng::seeded_rng(seed))
        .map_err(|e| CliError::Validation(e.to_string()))?;
    qfreq::stream::save_stream(out, &instance.stream)
        .map_err(|e| CliError::Runtime(format!("writing {out}: {e}")))?;

    println!(
        "wrote {} (n = {}, m = {})",
        out,
        instance.stream.n(),
        instance.stream.universe()
    );
    for (k, value) in &instance.advertised {
        println!("advertised F_{k} = {value}");
    }
    Ok(())
}

fn cmd_verify(args: &[String]) -> Result<(), CliError> {
    let suite = args
        .first()
        .ok_or_else(|| CliError::Validation("verify: missing suite name".into()))?;
    let results = run_suite(suite).map_err(|e| CliError::Validation(e.to_string()))?;
    let mut all_passed = true;
    for r in &results {
        println!(
            "{} {} — {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
        all_passed &= r.passed;
    }
    if all_passed {
        println!("{} checks passed", results.len());
        Ok(())
    } else {
        Err(CliError::Validation("verification checks failed".into()))
    }
}
