use std::fs;
use std::path::Path;
use std::process::Command as Process;

use clap::Parser;
use dpfilter::cli::{run, RunConfig, Status};
use dpfilter::io::{read_signal, read_signal_file, write_coefficients, write_signal};
use dpfilter::{filter_multiplier, grid_point, HarmonicCoefficients, KernelSpec, Parity, SampledSignal, Variant};

fn run_args(args: &[&str]) -> dpfilter::Result<(Status, String)> {
    let config =
        RunConfig::try_parse_from(std::iter::once("dpfilter").chain(args.iter().copied())).expect("arguments parse");
    let mut out = Vec::new();
    let status = run(&config, &mut out)?;
    Ok((status, String::from_utf8(out).unwrap()))
}

fn parse_curve(text: &str) -> Vec<(f64, f64)> {
    text.lines()
        .skip(1)
        .map(|line| {
            let (a, b) = line.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

fn binary(args: &[&str]) -> std::process::Output {
    Process::new(env!("CARGO_BIN_EXE_dpfilter"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn kernel_output_is_a_grid_curve() {
    let (status, text) = run_args(&["kernel", "--N", "2", "--variant", "fixed", "--points", "64"]).unwrap();
    assert_eq!(status, Status::Ok);
    assert!(text.starts_with("theta,value\n"));
    let rows = parse_curve(&text);
    assert_eq!(rows.len(), 64);
    for (j, (theta, value)) in rows.iter().enumerate() {
        assert!((theta - grid_point(j, 64)).abs() < 1e-15);
        assert!(*value >= 0.0);
    }
    // Hat of half-width 0.5 peaks at 1/ε = 2.
    let peak = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    assert!(peak <= 2.0 + 1e-12);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["scaled-kernel", "--N", "12", "--points", "128"];
    let (_, first) = run_args(&args).unwrap();
    let (_, second) = run_args(&args).unwrap();
    assert_eq!(first, second);
}

#[test]
fn sweep_writes_one_file_per_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep");
    let (status, listing) = run_args(&[
        "sweep",
        "--variant",
        "gaussian",
        "--N",
        "1,4,16",
        "--points",
        "32",
        "--out",
        out.to_str().unwrap(),
    ])
    .unwrap();
    assert_eq!(status, Status::Ok);
    assert_eq!(listing.lines().count(), 3);
    for n in [1, 4, 16] {
        let text = fs::read_to_string(out.join(format!("gaussian_N{n}.csv"))).unwrap();
        assert_eq!(parse_curve(&text).len(), 32);
    }
}

#[test]
fn sweep_without_directory_is_rejected() {
    assert!(run_args(&["sweep", "--variant", "naive"]).is_err());
}

#[test]
fn filter_coefficients_from_json() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.json");
    let coeffs = HarmonicCoefficients::new(Parity::Sine, vec![1.0, 0.5, 0.25]).unwrap();
    write_coefficients(&input, &coeffs).unwrap();
    let (_, text) = run_args(&[
        "filter",
        "--input",
        input.to_str().unwrap(),
        "--N",
        "3",
        "--variant",
        "fixed",
    ])
    .unwrap();
    let spec = KernelSpec::new(3, 0.5, Variant::Fixed).unwrap();
    let rows: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split_once(',').unwrap().1.parse().unwrap())
        .collect();
    assert_eq!(rows.len(), 3);
    for (i, (got, a)) in rows.iter().zip(coeffs.coeffs()).enumerate() {
        assert!((got - a * filter_multiplier(i + 1, &spec)).abs() < 1e-15);
    }
}

#[test]
fn filter_samples_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("s.csv");
    let output = dir.path().join("f.csv");
    let signal = SampledSignal::from_fn(2048, |t| (3.0 * t).cos()).unwrap();
    write_signal(fs::File::create(&input).unwrap(), &signal).unwrap();
    run_args(&[
        "filter",
        "--input",
        input.to_str().unwrap(),
        "--N",
        "2",
        "--variant",
        "fixed",
        "--out",
        output.to_str().unwrap(),
    ])
    .unwrap();
    let filtered = read_signal_file(&output).unwrap();
    let factor = filter_multiplier(3, &KernelSpec::new(2, 0.5, Variant::Fixed).unwrap());
    for (t, v) in filtered.thetas().zip(filtered.values()) {
        assert!((v - factor * (3.0 * t).cos()).abs() < 1e-6);
    }
}

#[test]
fn malformed_signal_is_rejected() {
    let text = "theta,value\n0.0,1.0\n1.0,2.0\n";
    assert!(read_signal(text.as_bytes()).is_err());
    assert!(read_signal("x,y\n".as_bytes()).is_err());
}

#[test]
fn invariants_report_is_json() {
    let (_, text) = run_args(&["invariants", "--N", "100", "--order", "2"]).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    let table = report["zero_derivative_points"].as_array().unwrap();
    let counts: Vec<u64> = table.iter().map(|r| r["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![2, 3, 5]);
    for p in report["invariant_points"].as_array().unwrap() {
        let gap = p["kernel"].as_f64().unwrap() - p["expected"].as_f64().unwrap();
        assert!(gap.abs() < 1e-9);
    }
}

#[test]
fn selfcheck_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("check.json");
    let (status, text) = run_args(&["selfcheck", "--out", report.to_str().unwrap()]).unwrap();
    assert_eq!(status, Status::Ok, "{text}");
    let parsed: serde_json::Value = serde_json::from_slice(&fs::read(&report).unwrap()).unwrap();
    assert!(parsed.as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn exit_codes() {
    assert_eq!(binary(&["--help"]).status.code(), Some(0));
    assert_eq!(binary(&["kernel", "--bogus"]).status.code(), Some(1));
    // Four naive stages of width 1 reach past π.
    assert_eq!(binary(&["kernel", "--N", "4", "--eps", "1.0"]).status.code(), Some(1));
    let starved = binary(&[
        "kernel",
        "--N",
        "20",
        "--variant",
        "gaussian",
        "--kmax",
        "4",
        "--tol",
        "1e-14",
    ]);
    assert_eq!(
        starved.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&starved.stderr)
    );
    let ok = binary(&["scaled-kernel", "--N", "4", "--points", "8"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap().lines().count(), 9);
}

#[test]
fn waveform_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    run_args(&[
        "waveform",
        "--kind",
        "triangle",
        "--points",
        "256",
        "--out",
        path.to_str().unwrap(),
    ])
    .unwrap();
    let signal = read_signal_file(Path::new(&path)).unwrap();
    assert_eq!(signal.resolution(), 256);
    assert!(signal.values().iter().all(|v| v.is_finite()));
}
