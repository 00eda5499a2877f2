use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mosaic_core::format::parse_point_file;
use mosaic_core::{distance, Domain, Point};
use proptest::prelude::*;
use tempfile::TempDir;

fn mosaic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mosaic")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn generate(dir: &TempDir, name: &str, extra: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut args = vec!["generate", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = mosaic(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn points(path: &Path) -> Vec<(f64, f64)> {
    parse_point_file(&std::fs::read_to_string(path).unwrap())
        .unwrap()
        .points
}

/// Parses a TSV table into rows keyed by header name.
fn table(text: &str) -> Vec<Vec<(String, String)>> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
    lines
        .map(|l| {
            header
                .iter()
                .map(|h| h.to_string())
                .zip(l.split('\t').map(str::to_owned))
                .collect()
        })
        .collect()
}

fn field<'a>(row: &'a [(String, String)], name: &str) -> &'a str {
    &row.iter().find(|(k, _)| k == name).unwrap().1
}

#[test]
fn jittered_generation_places_one_point_per_cell() {
    let dir = TempDir::new().unwrap();
    let path = generate(&dir, "j.txt", &["--kind", "jittered", "--n", "1024", "--seed", "7"]);
    let pts = points(&path);
    assert_eq!(pts.len(), 1024);
    let mut counts = vec![0; 1024];
    for (x, y) in pts {
        counts[(y * 32.0) as usize * 32 + (x * 32.0) as usize] += 1;
    }
    assert!(counts.iter().all(|&c| c == 1));
}

#[test]
fn dart_generation_respects_min_dist() {
    let dir = TempDir::new().unwrap();
    let path = generate(
        &dir,
        "d.txt",
        &["--kind", "dart", "--n", "100", "--min-dist", "0.05", "--seed", "1"],
    );
    let pts: Vec<Point> = points(&path).into_iter().map(Point::from).collect();
    assert_eq!(pts.len(), 100);
    let dom = Domain::unit_torus();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            assert!(distance(pts[i], pts[j], &dom).unwrap() >= 0.05);
        }
    }
}

#[test]
fn generation_is_reproducible_and_manifested() {
    let dir = TempDir::new().unwrap();
    let args = ["--kind", "bluenoise", "--n", "256", "--seed", "3", "--iterations", "10"];
    let a = generate(&dir, "a.txt", &args);
    let b = generate(&dir, "b.txt", &args);
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.txt.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "generate");
    assert_eq!(manifest["seed"], 3);
    let hash = manifest["outputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    let other: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("b.txt.manifest.json")).unwrap()).unwrap();
    assert_eq!(other["outputs"][0]["sha256"], hash);
}

#[test]
fn generation_requires_a_seed() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("x.txt");
    let out = mosaic(&[
        "generate",
        "--kind",
        "white",
        "--n",
        "10",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(!out_path.exists());
}

#[test]
fn infeasible_configs_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let o = dir.path().join("x.txt");
    let o = o.to_str().unwrap();
    for args in [
        vec!["--kind", "dart", "--n", "100", "--min-dist", "0.5", "--seed", "1"],
        vec!["--kind", "poisson", "--n", "100", "--seed", "1"],
        vec!["--kind", "jittered", "--n", "1000", "--seed", "1"],
    ] {
        let mut full = vec!["generate", "--out", o];
        full.extend(args);
        assert_eq!(code(&mosaic(&full)), 1, "{full:?}");
    }
    let rounded = generate(
        &dir,
        "r.txt",
        &["--kind", "jittered", "--n", "1000", "--seed", "1", "--round-to-square"],
    );
    assert_eq!(points(&rounded).len(), 1024);
}

#[test]
fn analyze_contains_per_file_failures_and_keeps_argument_order() {
    let dir = TempDir::new().unwrap();
    let blue = generate(
        &dir,
        "blue.txt",
        &["--kind", "bluenoise", "--n", "400", "--seed", "2", "--iterations", "30"],
    );
    let white = generate(&dir, "white.txt", &["--kind", "white", "--n", "400", "--seed", "2"]);
    let broken = dir.path().join("broken.txt");
    std::fs::write(&broken, "# {}\n0.1 0.2\nnot a number\n").unwrap();
    let curves = dir.path().join("curves");
    let out = mosaic(&[
        "analyze",
        blue.to_str().unwrap(),
        broken.to_str().unwrap(),
        white.to_str().unwrap(),
        "--out-dir",
        curves.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = table(&stdout(&out));
    let labels: Vec<&str> = rows.iter().map(|r| field(r, "label")).collect();
    assert_eq!(labels, ["bluenoise_400_s2", "broken", "white_400_s2"]);
    assert_eq!(field(&rows[0], "status"), "ok");
    assert!(field(&rows[1], "status").starts_with("failed"));
    assert_eq!(field(&rows[2], "status"), "ok");
    assert!(curves.join("blue.pcf.txt").exists());
    assert!(curves.join("white.pcf.txt").exists());
    assert!(!curves.join("broken.pcf.txt").exists());

    let ri_blue: f64 = field(&rows[0], "ri").parse().unwrap();
    let ri_white: f64 = field(&rows[2], "ri").parse().unwrap();
    assert!(ri_blue > ri_white);

    let sorted = mosaic(&[
        "report",
        white.to_str().unwrap(),
        broken.to_str().unwrap(),
        blue.to_str().unwrap(),
    ]);
    let labels: Vec<String> = table(&stdout(&sorted))
        .iter()
        .map(|r| field(r, "label").to_owned())
        .collect();
    assert_eq!(labels, ["white_400_s2", "bluenoise_400_s2", "broken"]);
}

#[test]
fn analyze_fails_only_when_every_input_fails() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.txt");
    std::fs::write(&a, "garbage\n").unwrap();
    let missing = dir.path().join("missing.txt");
    let out = mosaic(&[
        "analyze",
        a.to_str().unwrap(),
        missing.to_str().unwrap(),
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn reported_ri_is_mu_over_sigma() {
    let out = mosaic(&["report", &fixture("synthetic_window_90.txt")]);
    assert_eq!(code(&out), 0);
    let rows = table(&stdout(&out));
    let mu: f64 = field(&rows[0], "mu").parse().unwrap();
    let sigma: f64 = field(&rows[0], "sigma").parse().unwrap();
    let ri: f64 = field(&rows[0], "ri").parse().unwrap();
    assert!((mu / sigma - ri).abs() < 1e-5);
}

#[test]
fn windowed_fixture_loads_in_micrometers() {
    let out = mosaic(&["report", "--format", "json", &fixture("synthetic_window_90.txt")]);
    assert_eq!(code(&out), 0);
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = &rows[0];
    assert_eq!(row["label"], "synthetic-window-90");
    assert_eq!(row["topology"], "bounded");
    let outcome = &row["outcome"]["Ok"];
    assert_eq!(outcome["n"], 375);
    // regression values for the synthetic lattice fixture
    assert!((outcome["mu"].as_f64().unwrap() - 4.036206557).abs() < 1e-6);
    assert!((outcome["ri"].as_f64().unwrap() - 7.119990714).abs() < 1e-5);
}

#[test]
fn table_one_scale_fixture_is_a_regular_mosaic() {
    let out = mosaic(&["report", &fixture("synthetic_7a_scale.txt")]);
    assert_eq!(code(&out), 0);
    let rows = table(&stdout(&out));
    assert_eq!(field(&rows[0], "n"), "3272");
    let mu: f64 = field(&rows[0], "mu").parse().unwrap();
    let ri: f64 = field(&rows[0], "ri").parse().unwrap();
    assert!((mu - 4.037654377).abs() < 1e-6, "{mu}");
    assert!((ri - 7.921552725).abs() < 1e-5, "{ri}");
}

#[test]
fn compare_verdicts() {
    let dir = TempDir::new().unwrap();
    let b1 = generate(&dir, "b1.txt", &["--kind", "bluenoise", "--n", "1024", "--seed", "500"]);
    let b2 = generate(&dir, "b2.txt", &["--kind", "bluenoise", "--n", "1024", "--seed", "501"]);
    let w = generate(&dir, "w.txt", &["--kind", "white", "--n", "1024", "--seed", "500"]);
    let verdict = |a: &Path, b: &Path| {
        let out = mosaic(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        let rows = table(&stdout(&out));
        (
            field(&rows[0], "linf").parse::<f64>().unwrap(),
            field(&rows[0], "verdict").to_owned(),
        )
    };
    assert_eq!(verdict(&b1, &b1), (0.0, "SAME".to_owned()));
    assert_eq!(verdict(&b1, &b2).1, "SAME");
    assert_eq!(verdict(&w, &b1).1, "DIFFERENT");
}

#[test]
fn spectrum_is_deterministic_and_rejects_tiny_inputs() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "w.txt", &["--kind", "white", "--n", "512", "--seed", "9"]);
    let run = |name: &str| {
        let out_path = dir.path().join(name);
        let out = mosaic(&[
            "spectrum",
            input.to_str().unwrap(),
            "--max-freq",
            "24",
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        std::fs::read(out_path).unwrap()
    };
    let first = run("s1.txt");
    assert_eq!(first, run("s2.txt"));
    let text = String::from_utf8(first).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 24);

    let single = dir.path().join("one.txt");
    std::fs::write(&single, "# {}\n0.5 0.5\n").unwrap();
    let out = mosaic(&[
        "spectrum",
        single.to_str().unwrap(),
        "--out",
        dir.path().join("o.txt").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);

    let out = mosaic(&[
        "spectrum",
        input.to_str().unwrap(),
        "--max-freq",
        "1",
        "--out",
        "unused.txt",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn bad_pcf_parameters_are_usage_errors() {
    let f = fixture("synthetic_window_90.txt");
    for extra in [["--bins", "0"], ["--sigma", "-1"], ["--r-max", "nan"]] {
        let mut args = vec!["compare", f.as_str(), f.as_str()];
        args.extend_from_slice(&extra);
        assert_eq!(code(&mosaic(&args)), 1, "{extra:?}");
    }
}

fn token() -> impl Strategy<Value = String> {
    prop_oneof![
        prop::sample::select(vec![
            "generate",
            "analyze",
            "compare",
            "spectrum",
            "report",
            "--kind",
            "--n",
            "--seed",
            "--min-dist",
            "--iterations",
            "--max-attempts",
            "--round-to-square",
            "--out",
            "--manifest",
            "--mode",
            "--bins",
            "--sigma",
            "--r-min",
            "--r-max",
            "--max-freq",
            "--scale",
            "--order",
            "--format",
            "--out-dir",
            "white",
            "jittered",
            "dart",
            "poisson",
            "bluenoise",
            "raw",
            "calibrated",
            "ri",
            "input",
            "json",
            "tsv",
            "0",
            "1",
            "3",
            "9",
            "-1",
            "0.01",
            "1e309",
            "nan",
            "inf",
            "",
            "--",
            "-h",
        ])
        .prop_map(str::to_owned),
        "[ -~]{0,6}",
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn arbitrary_argument_vectors_never_panic(args in prop::collection::vec(token(), 0..9)) {
        let dir = TempDir::new().unwrap();
        let out = Command::new(env!("CARGO_BIN_EXE_mosaic"))
            .current_dir(dir.path())
            .args(&args)
            .output()
            .unwrap();
        let c = code(&out);
        let stderr = String::from_utf8_lossy(&out.stderr);
        prop_assert!(matches!(c, 0..=2), "exit {} for {:?}: {}", c, args, stderr);
        prop_assert!(!stderr.contains("panicked"), "{:?}: {}", args, stderr);
        if c == 1 {
            prop_assert!(stderr.to_lowercase().contains("usage"), "{:?}: {}", args, stderr);
        }
    }

    #[test]
    fn malformed_values_exit_with_usage(flag in prop::sample::select(vec!["--n", "--seed", "--iterations"]), junk in "[a-z]{1,5}") {
        let out = mosaic(&["generate", "--kind", "white", "--n", "10", "--seed", "1", "--out", "o.txt", flag, &junk]);
        prop_assert_eq!(code(&out), 1);
        prop_assert!(String::from_utf8_lossy(&out.stderr).to_lowercase().contains("usage"));
    }
}
