//! End-to-end behavior of the `cncc` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_cncc")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn cncc")
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("cncc_cli_{name}"))
}

/// Splits a CSV body into (comments, named sections of data rows).
fn data_rows(text: &str, header: &str) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    let mut in_section = false;
    for line in text.lines() {
        if line.starts_with('#') {
            continue;
        }
        if line == header {
            in_section = true;
            continue;
        }
        if in_section {
            if !line.contains(',') || line.chars().next().is_some_and(|c| c.is_alphabetic()) {
                break;
            }
            rows.push(line.split(',').map(str::to_string).collect());
        }
    }
    rows
}

#[test]
fn enumerate_presets_reproduce_diversity_rows() {
    let expect: [(&str, [u32; 4], &str, &str); 2] = [
        ("1", [2, 3, 4, 4], "2/3", "2/3"),
        ("4", [4, 7, 10, 11], "1/2", "2/5"),
    ];
    for (preset, diversity, cncc_tp, lnc_tp) in expect {
        let out = run(&["enumerate", "--preset", preset]);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let rows = data_rows(&text, "m,diversity_cncc,diversity_lnc,throughput_cncc,throughput_lnc");
        assert_eq!(rows.len(), 4, "preset {preset}:\n{text}");
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row[0], (i + 1).to_string());
            assert_eq!(row[1], diversity[i].to_string(), "preset {preset} m={}", i + 1);
            assert_eq!(row[3], cncc_tp);
            assert_eq!(row[4], lnc_tp);
        }
    }
}

#[test]
fn enumerate_preset_2_throughput_beats_baseline() {
    let out = run(&["enumerate", "--preset", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_rows(&text, "m,diversity_cncc,diversity_lnc,throughput_cncc,throughput_lnc");
    assert_eq!(rows[0][3], "2/3");
    assert_eq!(rows[0][4], "1/2");
}

#[test]
fn analyze_slope_settles_to_diversity() {
    // preset 2 with Rayleigh relay hops: exponent 3
    let out = run(&["analyze", "--preset", "2", "--m", "1", "--snr-db", "90,100,110"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_rows(
        &text,
        "gamma_rd_dB,Pe,Pf,PbGivenF,PbGivenS_bound,Pb_bound,Pb_bound_raw,slope_estimate",
    );
    assert_eq!(rows.len(), 3);
    let slope: f64 = rows[2][7].parse().unwrap();
    assert!((slope + 3.0).abs() < 0.3, "slope {slope}");

    // preset 3 at m = 4: both exponents equal 9
    let out = run(&["analyze", "--preset", "3", "--m", "4", "--snr-db", "90,100,110"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_rows(
        &text,
        "gamma_rd_dB,Pe,Pf,PbGivenF,PbGivenS_bound,Pb_bound,Pb_bound_raw,slope_estimate",
    );
    let slope: f64 = rows[2][7].parse().unwrap();
    assert!((slope + 9.0).abs() < 0.5, "slope {slope}");
}

#[test]
fn analyze_bound_is_monotone_on_the_grid() {
    let out = run(&["analyze", "--preset", "1", "--snr-db", "0,5,10,15,20,25,30"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_rows(
        &text,
        "gamma_rd_dB,Pe,Pf,PbGivenF,PbGivenS_bound,Pb_bound,Pb_bound_raw,slope_estimate",
    );
    let bounds: Vec<f64> = rows.iter().map(|r| r[6].parse().unwrap()).collect();
    for pair in bounds.windows(2) {
        assert!(pair[1] <= pair[0], "bound not monotone: {bounds:?}");
    }
}

#[test]
fn simulate_stays_under_bound_and_orders_presets() {
    // preset 2 against its bound column
    let out = run(&[
        "simulate", "--preset", "2", "--m", "1", "--beta", "3", "--snr-db", "6,10", "--seed",
        "21", "--stop-errors", "150", "--max-rounds", "2000000",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_rows(
        &text,
        "gamma_rd_dB,trials,bit_errors,ber,ci_radius,ps_empirical,throughput_net,pb_bound_raw",
    );
    assert_eq!(rows.len(), 2);
    let mut preset2_ber = Vec::new();
    for row in &rows {
        let errors: u64 = row[2].parse().unwrap();
        let ber: f64 = row[3].parse().unwrap();
        let bound: f64 = row[7].parse().unwrap();
        assert!(errors >= 100);
        assert!(ber <= bound, "ber {ber} above bound {bound}");
        preset2_ber.push(ber);
    }

    // one more antenna at the relay beats preset 1 pointwise
    let out = run(&[
        "simulate", "--preset", "1", "--m", "1", "--beta", "3", "--snr-db", "6,10", "--seed",
        "21", "--stop-errors", "150", "--max-rounds", "2000000",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_rows(
        &text,
        "gamma_rd_dB,trials,bit_errors,ber,ci_radius,ps_empirical,throughput_net,pb_bound_raw",
    );
    for (row, &p2) in rows.iter().zip(&preset2_ber) {
        let ber1: f64 = row[3].parse().unwrap();
        assert!(p2 < ber1, "preset 2 ber {p2} not below preset 1 ber {ber1}");
    }
}

#[test]
fn same_seed_gives_identical_bytes() {
    let a = tmp("repeat_a.csv");
    let b = tmp("repeat_b.csv");
    for out in [&a, &b] {
        let status = Command::new(bin())
            .args([
                "simulate", "--preset", "1", "--snr-db", "4", "--seed", "33", "--stop-errors",
                "40", "--max-rounds", "20000", "--out",
            ])
            .arg(out)
            .stderr(std::process::Stdio::null())
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let _ = std::fs::remove_file(&a);
    let _ = std::fs::remove_file(&b);
}

#[test]
fn sweep_beta_reports_the_grid() {
    let cfg = tmp("sweep.cfg");
    std::fs::write(
        &cfg,
        "[network]\npreset = 1\n[sweep-beta]\nbeta_grid = 2,5\ngamma_rd_db = 8\nstop_errors = 60\nmax_rounds = 40000\nseed = 3\n",
    )
    .unwrap();
    let out = Command::new(bin())
        .args(["sweep-beta", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_rows(&text, "beta,trials,bit_errors,ber,ci_radius,ps_empirical,throughput_net");
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "2");
    assert_eq!(rows[1][0], "5");
    let _ = std::fs::remove_file(&cfg);
}

#[test]
fn invalid_generator_text_reports_position() {
    let cfg = tmp("bad_gen.cfg");
    std::fs::write(&cfg, "[network]\nmemory = 3\nrow1 = 1+x / 1+D\n").unwrap();
    let out = Command::new(bin())
        .args(["enumerate", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error at byte 2"), "stderr: {err}");
    let _ = std::fs::remove_file(&cfg);
}

#[test]
fn simulate_refuses_unaffordable_grids() {
    // deep-SNR points need billions of rounds for 200 errors
    let out = run(&[
        "simulate", "--preset", "1", "--snr-db", "10,40,45", "--stop-errors", "200",
        "--max-rounds", "100000000000",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("trim the grid"), "stderr: {err}");
    assert!(err.contains("--snr-db 10"), "stderr: {err}");
}

#[test]
fn partial_points_flag_the_exit_code() {
    let out = run(&[
        "simulate", "--preset", "1", "--snr-db", "2", "--seed", "9", "--stop-errors", "100000",
        "--max-rounds", "2000",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("flagged"), "stderr: {err}");
}
