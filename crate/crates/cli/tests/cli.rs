use std::f64::consts::PI;
use std::process::{Command, Output};

use fraclap_cli::{Cell, Report};

fn fraclap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraclap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Header and numeric rows of a CSV table, skipping comments.
fn table(o: &Output) -> (String, Vec<Vec<f64>>) {
    let text = stdout(o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().expect("header").to_string();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn apply_fourier_gaussian_at_origin() {
    let o = fraclap(&[
        "apply", "--route", "fourier", "--alpha", "1", "--dim", "1", "--func", "gaussian", "--x",
        "0",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, rows) = table(&o);
    assert_eq!(header, "x,value");
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][1] + 2.0 / PI.sqrt()).abs() < 1e-9, "{:?}", rows);
}

#[test]
fn mellin_and_singular_agree_through_the_binary() {
    let run = |route| {
        let o = fraclap(&["apply", "--route", route, "--alpha", "1.2", "--x", "0,1.5"]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        table(&o).1
    };
    let (m, s) = (run("mellin"), run("singular"));
    for (a, b) in m.iter().zip(&s) {
        assert!(
            (a[1] - b[1]).abs() <= 1e-6 * a[1].abs().max(1e-12),
            "{a:?} {b:?}"
        );
    }
}

#[test]
fn out_of_range_alpha_is_a_usage_error() {
    let o = fraclap(&["apply", "--alpha", "2.5", "--func", "gaussian", "--x", "0"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("alpha"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["compare", "--func", "sinc"][..],
        &["apply", "--x", "1,,2"],
        &["apply", "--route", "laplace"],
        &["apply", "--route", "fourier", "--dim", "2"],
        &["apply", "--out", "xml"],
        &["apply", "--contour-c", "1.5"],
        &["apply", "--no-such-flag"],
        &["frobnicate"],
        &["sfde", "--t", "0"],
        &["theorems", "--func", "exponential"],
        &["apply", "--config", "/nonexistent/fraclap.conf"],
    ] {
        let o = fraclap(args);
        assert_eq!(code(&o), 1, "{args:?}: {}", stderr(&o));
    }
    assert_eq!(code(&fraclap(&["--help"])), 0);
}

#[test]
fn numeric_failures_exit_two_and_name_the_stage() {
    let o = fraclap(&[
        "apply",
        "--route",
        "mellin",
        "--func",
        "exponential",
        "--alpha",
        "1.5",
        "--x",
        "0",
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("route mellin"), "{}", stderr(&o));
    let o = fraclap(&["compare", "--alpha", "1", "--x", "0.5", "--tol", "1e-300"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("exceeds tol"));
    // the table is still written
    assert_eq!(table(&o).1.len(), 1);
}

#[test]
fn compare_gaussian_all_routes() {
    let o = fraclap(&[
        "compare",
        "--func",
        "gaussian",
        "--alpha",
        "1",
        "--tol",
        "1e-5",
        "--x",
        "0,0.5,1,2",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, rows) = table(&o);
    assert_eq!(header, "x,heat,fourier,singular,mellin,max_rel_err");
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r[5] <= 1e-5));
}

#[test]
fn compare_cauchy_near_order_two() {
    let o = fraclap(&[
        "compare",
        "--func",
        "cauchy",
        "--alpha",
        "1.9",
        "--route",
        "singular,mellin",
        "--tol",
        "1e-4",
        "--x",
        "0,1,3",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(table(&o).0, "x,singular,mellin,max_rel_err");
}

#[test]
fn sfde_residuals() {
    let o = fraclap(&["sfde", "--alpha", "1", "--t", "1", "--tol", "1e-6"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, rows) = table(&o);
    assert_eq!(header, "x,dt,lp,residual");
    assert!(rows.iter().all(|r| r[3] <= 1e-6));
    let o = fraclap(&["sfde", "--alpha", "1.5", "--t", "1", "--route", "mellin"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(table(&o).1.iter().all(|r| r[3] <= 1e-4));
}

fn theorem_rows(args: &[&str]) -> Vec<Vec<String>> {
    let o = fraclap(args);
    assert_eq!(code(&o), 0, "{args:?}: {}", stderr(&o));
    stdout(&o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn theorem_checks() {
    let rows = theorem_rows(&["theorems", "--func", "bump", "--alpha", "0.5"]);
    assert!(rows.iter().any(|r| r[0] == "caputo-kernel"));
    assert!(rows.iter().any(|r| r[0] == "rl-kernel"));
    assert!(rows.iter().all(|r| r[6] == "pass"));
    let rows = theorem_rows(&["theorems", "--alpha", "2"]);
    assert_eq!(rows.iter().filter(|r| r[0] == "delta-reduction").count(), 3);
    let rows = theorem_rows(&["theorems", "--alpha", "1", "--func", "cauchy", "--x", "0,1"]);
    let hilbert: Vec<_> = rows.iter().filter(|r| r[0] == "hilbert-cauchy").collect();
    assert_eq!(hilbert.len(), 2);
    assert!((hilbert[0][2].parse::<f64>().unwrap() + 1.0 / PI).abs() < 1e-6);
    assert!(hilbert[1][2].parse::<f64>().unwrap().abs() < 1e-6);
}

#[test]
fn csv_is_plain_and_carries_provenance() {
    let o = fraclap(&[
        "apply",
        "--alpha",
        "0.7",
        "--x",
        "0.3,-2",
        "--contour-height",
        "24",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    for key in [
        "# alpha=0.7",
        "# route=mellin",
        "# contour_height=24",
        "# rel_tol=",
    ] {
        assert!(
            text.lines().any(|l| l.starts_with(key)),
            "{key} missing:\n{text}"
        );
    }
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        for cell in line.split(',') {
            let digits = cell
                .split(['e', 'E'])
                .next()
                .unwrap()
                .chars()
                .filter(char::is_ascii_digit)
                .collect::<String>();
            assert!(digits.trim_start_matches('0').len() <= 17, "{cell}");
            assert!(cell.parse::<f64>().is_ok(), "{cell}");
        }
    }
}

#[test]
fn json_round_trips_bit_exactly() {
    let args = ["compare", "--alpha", "1.5", "--x", "0,0.25,3"];
    let json = fraclap(&[&args[..], &["--out", "json"]].concat());
    assert_eq!(code(&json), 0, "{}", stderr(&json));
    let report: Report = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(report.to_json() + "\n", stdout(&json));
    let csv = table(&fraclap(&args)).1;
    for (row, csv_row) in report.rows.iter().zip(&csv) {
        for (cell, &v) in row.iter().zip(csv_row) {
            let Cell::Num(j) = cell else {
                panic!("text cell")
            };
            assert_eq!(j.to_bits(), v.to_bits());
        }
    }
}

#[test]
fn config_file_fills_unset_flags() {
    let dir = std::env::temp_dir().join(format!("fraclap-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.conf");
    std::fs::write(
        &path,
        "# run\nalpha = 1.5\nfunc = bump\nx = 0.5, 1\nrel_tol = 1e-11\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let o = fraclap(&["apply", "--config", p, "--alpha", "0.5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("# alpha=0.5"));
    assert!(text.contains("# func=bump"));
    assert!(text.contains("# rel_tol=1e-11"));
    assert_eq!(table(&o).1.len(), 2);
    std::fs::write(&path, "alpha: 1.5\n").unwrap();
    assert_eq!(code(&fraclap(&["apply", "--config", p])), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
