use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_cohomsol");

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn fixture(name: &str) -> String {
    fixtures()
        .join(format!("{name}.toml"))
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn rows(csv_text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    r.records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect()
}

/// Value after `label: ` in a summary.
fn summary_value(text: &str, label: &str) -> f64 {
    let line = text
        .lines()
        .find(|l| l.starts_with(label))
        .unwrap_or_else(|| panic!("no '{label}' in\n{text}"));
    line[label.len()..]
        .trim_start_matches(':')
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn cigar_jet_is_the_square_of_tanh_over_t() {
    let o = run(&[
        "series",
        "--geometry",
        "cigar",
        "--epsilon",
        "0",
        "--u2",
        "-2",
        "--order",
        "10",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    // (tanh t / t)² = 1 - 2t²/3 + 17t⁴/45 - 62t⁶/315 + ...
    let expected = [1.0, 0.0, -2.0 / 3.0, 0.0, 17.0 / 45.0, 0.0, -62.0 / 315.0];
    let x: Vec<f64> = rows(&stdout(&o))
        .iter()
        .filter(|r| r[0] == "x")
        .map(|r| r[3].parse().unwrap())
        .collect();
    for (m, e) in expected.iter().enumerate() {
        assert!((x[m] - e).abs() < 1e-12, "x_{m} = {}", x[m]);
    }
}

#[test]
fn gaussian_jet_is_flat() {
    let o = run(&[
        "series",
        "--geometry",
        "gaussian-flat",
        "--k",
        "3",
        "--epsilon",
        "2",
        "--u2",
        "-1",
    ]);
    assert!(o.status.success());
    for r in rows(&stdout(&o)) {
        let (m, v): (usize, f64) = (r[2].parse().unwrap(), r[3].parse().unwrap());
        match (r[0].as_str(), m) {
            ("x", 0) => assert_eq!(v, 1.0),
            ("u", 2) => assert_eq!(v, -0.5),
            _ => assert_eq!(v, 0.0, "{r:?}"),
        }
    }
}

#[test]
fn sine_cone_potential_vanishes() {
    let o = run(&[
        "series",
        "--geometry",
        "sine-cone",
        "--n",
        "2",
        "--epsilon",
        "-4",
        "--u2",
        "0",
    ]);
    assert!(o.status.success());
    assert!(rows(&stdout(&o))
        .iter()
        .filter(|r| r[0] == "u")
        .all(|r| r[3].parse::<f64>().unwrap() == 0.0));
}

#[test]
fn exact_mode_prints_rationals() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["series", "--geometry", "cigar", "--exact", "--outputs", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("jet_exact.csv")).unwrap();
    let row = rows(&text)
        .into_iter()
        .find(|r| r[0] == "x" && r[2] == "4")
        .unwrap();
    assert_eq!(row[4], "17/45");
    let kernel = run(&["series", "--config", &fixture("stiefel_so_4"), "--exact"]);
    assert_eq!(kernel.status.code(), Some(2));
}

#[test]
fn integrate_reports_closed_form_deviation_and_collapse() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&[
        "integrate",
        "--config",
        &fixture("cigar"),
        "--outputs",
        out,
        "--emit-plot-data",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(summary_value(&stdout(&o), "max closed-form deviation") <= 1e-7);
    for f in [
        "cigar_trajectory.csv",
        "cigar_handoff.csv",
        "cigar_plot.csv",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }

    let o = run(&[
        "integrate",
        "--config",
        &fixture("sine_cone_2"),
        "--outputs",
        out,
    ]);
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("outcome")).unwrap();
    let t: f64 = line
        .split("at t = ")
        .nth(1)
        .unwrap()
        .split(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((t - std::f64::consts::PI).abs() < 1e-3, "{line}");
}

#[test]
fn bryant_first_integral_is_small() {
    let o = run(&[
        "integrate",
        "--geometry",
        "bryant-sphere(3)",
        "--epsilon",
        "0",
        "--u2",
        "-1",
        "--t-end",
        "10",
        "--outputs",
        tempfile::tempdir().unwrap().path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(summary_value(&stdout(&o), "max first-integral residual") <= 1e-6);
}

#[test]
fn indeterminacy_tables() {
    let o = run(&["indeterminacy", "--geometry", "stiefel-so(4)"]);
    assert!(o.status.success());
    assert_eq!(summary_value(&stderr(&o), "total"), 1.0);
    let table = rows(&stdout(&o));
    assert_eq!(table.len(), 51);
    assert_eq!(table[0][..3], ["0", "0", "1"]);

    let o = run(&["indeterminacy", "--geometry", "gaussian-flat(3)"]);
    assert_eq!(summary_value(&stderr(&o), "minus total"), 0.0);

    let o = run(&[
        "indeterminacy",
        "--config",
        &fixture("planted"),
        "--scan-limit",
        "10",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let nonzero: Vec<_> = rows(&stdout(&o))
        .into_iter()
        .filter(|r| r[1] != "0" || r[2] != "0")
        .collect();
    assert_eq!(nonzero, [vec!["2", "0", "1", "planted"]]);
}

#[test]
fn verify_rejects_a_non_minimal_orbit() {
    let o = run(&["verify", "--geometry", "stiefel-so(4)", "--l1", "p2=0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("minimal"), "{}", stderr(&o));
}

#[test]
fn verify_flags_a_wrong_soliton_constant() {
    let o = run(&[
        "verify",
        "--config",
        &fixture("sine_cone_2"),
        "--epsilon",
        "-4.1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("FAIL closed-form residual"));
}

#[test]
fn broken_geometry_file_is_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let text = stdout(&run(&["export-geometry", "stiefel-so(4)"]));
    let broken = text.replacen("1.0]", "1.5]", 1);
    assert_ne!(text, broken);
    std::fs::write(&path, broken).unwrap();
    let o = run(&["indeterminacy", "--geometry", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));

    std::fs::write(&path, text).unwrap();
    let o = run(&["indeterminacy", "--geometry", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn unknown_builtin_and_missing_data() {
    assert_eq!(
        run(&["series", "--geometry", "torus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["series", "--geometry", "sine-cone"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["series", "--config", "/nonexistent.toml"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn parallel_sweep_writes_every_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let names = [
        "cigar",
        "bryant_sphere_3",
        "bryant_sphere_3_half",
        "stiefel_so_4",
    ];
    let mut args = vec![
        "series".to_string(),
        "--jobs".into(),
        "4".into(),
        "--outputs".into(),
        out.into(),
    ];
    for n in names {
        args.push("--config".into());
        args.push(fixture(n));
    }
    let o = Command::new(BIN).args(&args).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let serial = run(&["series", "--config", &fixture("stiefel_so_4")]);
    for n in names {
        assert!(dir.path().join(format!("{n}_jet.csv")).exists());
    }
    let parallel = std::fs::read_to_string(dir.path().join("stiefel_so_4_jet.csv")).unwrap();
    assert_eq!(parallel, stdout(&serial));
    assert_eq!(stdout(&o).matches("geometry:").count(), names.len());
}
