use std::path::Path;
use std::process::{Command, Output};

use bellcheck::cli::report::{to_json, OptimizeDocument, VerifyDocument};
use bellcheck::cli::{Quantity, Track};
use bellcheck::TSIRELSON_BOUND;

fn bellcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellcheck")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn verify_all_canonical() {
    let text = stdout(&bellcheck(&["verify", "--track", "all", "--canonical", "--seed", "7"]));
    let doc: VerifyDocument = serde_json::from_str(&text).unwrap();
    let quantities: Vec<Quantity> = doc.reports.iter().map(|r| r.quantity).collect();
    assert_eq!(
        quantities,
        [
            Quantity::ChshClassicalValue,
            Quantity::ChshQmValue,
            Quantity::ChshOperatorNorm,
            Quantity::SPrime,
            Quantity::GaBoundExpression
        ]
    );
    for r in &doc.reports {
        assert!(r.attained, "{:?} not attained: {}", r.quantity, r.value);
        assert!((r.value - r.bound).abs() < 1e-9);
        assert_eq!(r.seed, 7);
    }
    assert_eq!(doc.reports[0].value, 2.0);
    assert!((doc.reports[1].value - TSIRELSON_BOUND).abs() < 1e-12);
}

#[test]
fn json_round_trip_is_byte_identical() {
    let text = stdout(&bellcheck(&["verify", "--track", "all", "--canonical", "--seed", "3"]));
    let doc: VerifyDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(to_json(&doc).unwrap(), text);

    let text = stdout(&bellcheck(&["optimize", "--track", "quantum", "--restarts", "4", "--seed", "9"]));
    let doc: OptimizeDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(to_json(&doc).unwrap(), text);
}

#[test]
fn verify_from_config_file_writes_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let cfg = write(
        dir.path(),
        "run.toml",
        &format!(
            "track = \"classical\"\nseed = 11\nsamples = 2000\noutput_format = \"csv\"\noutput_path = {:?}\n\n\
             [[lhv_model.states]]\nweight = 0.5\nresponses = [1.0, 1.0, 1.0, 1.0]\n\n\
             [[lhv_model.states]]\nweight = 0.5\nresponses = [0.0, 0.0, 0.0, 0.0]\n",
            out.to_str().unwrap()
        ),
    );
    assert!(stdout(&bellcheck(&["verify", "--config", &cfg])).is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "track,quantity,value,bound,margin,attained,seed,tool_version");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0..2], ["classical", "chsh_classical_value"]);
    assert_eq!(row[2].parse::<f64>().unwrap(), 1.0);
    assert_eq!(row[5], "false");
    assert_eq!(row[6], "11");
    assert!(lines.next().is_none());
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", "track = \"ga\"\nseed = 1\nconfiguration = [0, 0, 0, 0]\n");
    let text = stdout(&bellcheck(&["verify", "--config", &cfg, "--track", "quantum", "--seed", "5"]));
    let doc: VerifyDocument = serde_json::from_str(&text).unwrap();
    assert!(doc.reports.iter().all(|r| r.track == Track::Quantum && r.seed == 5));
    // All four directions equal: |-1 - 1 - 1 + 1| = 2.
    assert!((doc.reports[0].value - 2.0).abs() < 1e-12);
}

#[test]
fn sweep_csv_grid() {
    let text = stdout(&bellcheck(&["sweep", "--steps", "5"]));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    let peak = rows.iter().max_by(|a, b| a[2].total_cmp(&b[2])).unwrap();
    assert!((peak[0] - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    assert!((peak[2] - TSIRELSON_BOUND).abs() < 1e-12);

    let text = stdout(&bellcheck(&["sweep", "--steps", "2"]));
    let ends: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(ends.len(), 2);
    assert!(ends.iter().all(|v| (v - 2.0).abs() < 1e-12));
}

#[test]
fn optimize_tracks() {
    let classical: OptimizeDocument = serde_json::from_str(&stdout(&bellcheck(&["optimize", "--track", "classical"]))).unwrap();
    assert_eq!(classical.result.best_value, 2.0);
    assert_eq!(classical.maximizers.unwrap().signed, 8);
    for track in ["quantum", "ga"] {
        let doc: OptimizeDocument =
            serde_json::from_str(&stdout(&bellcheck(&["optimize", "--track", track, "--restarts", "8", "--seed", "2"])))
                .unwrap();
        assert!((doc.result.best_value - TSIRELSON_BOUND).abs() < 1e-6, "{track}: {}", doc.result.best_value);
        assert!(doc.attained);
    }
}

#[test]
fn optimize_is_reproducible() {
    let args = ["optimize", "--track", "ga", "--restarts", "6", "--seed", "42"];
    assert_eq!(stdout(&bellcheck(&args)), stdout(&bellcheck(&args)));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        write(dir.path(), "unknown.toml", "track = \"all\"\ncolour = 1\n"),
        write(dir.path(), "nonunit.toml", "track = \"quantum\"\n[configuration]\na = [1, 1, 0]\na_prime = 0\nb = 0\nb_prime = 0\n"),
        write(dir.path(), "weights.toml", "track = \"classical\"\n[[lhv_model.states]]\nweight = 0.4\nresponses = [1, 1, 1, 1]\n"),
        write(dir.path(), "range.toml", "track = \"ga\"\n[coefficients]\nalpha_a = 2\nalpha_a_prime = 1\nalpha_b = 1\nalpha_b_prime = 1\n"),
        write(dir.path(), "notoml.toml", "track = [\n"),
    ];
    for cfg in &cases {
        let out = bellcheck(&["verify", "--config", cfg]);
        assert_eq!(out.status.code(), Some(2), "{cfg}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(bellcheck(&["verify", "--config", "/nonexistent/run.toml"]).status.code(), Some(2));
    assert_eq!(bellcheck(&["verify", "--canonical"]).status.code(), Some(2));
    assert_eq!(bellcheck(&["verify", "--track", "all", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(bellcheck(&["sweep", "--steps", "1"]).status.code(), Some(2));
    assert_eq!(bellcheck(&["optimize", "--track", "quantum", "--restarts", "0"]).status.code(), Some(2));
    assert_eq!(bellcheck(&["verify", "--track", "everything"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_1() {
    let out = bellcheck(&["verify", "--track", "quantum", "--out", "/nonexistent/dir/report.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn relation_listing_goes_to_stderr() {
    let out = bellcheck(&["verify", "--track", "quantum", "--paper"]);
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(stdout(&out).starts_with('{'));
    assert_eq!(err.lines().count(), 2);
    assert!(err.contains("chsh_operator_norm"));
}
