use std::path::Path;
use std::process::{Command, Output};

fn pbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbc"))
        .args(args)
        .output()
        .expect("spawn pbc")
}

fn ok(args: &[&str]) -> String {
    let out = pbc(args);
    assert!(
        out.status.success(),
        "pbc {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn kv(report: &str, key: &str) -> f64 {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in\n{report}"))
        .parse()
        .unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn full_pipeline_improves_map() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["synth", "--out-dir", d.to_str().unwrap()]);
    let out = ok(&[
        "build-index",
        "--gallery",
        &p(d, "gallery.csv"),
        "--out",
        &p(d, "index.pbci"),
    ]);
    assert!(kv(&out, "build_seconds") >= 0.0);
    ok(&[
        "rerank",
        "--index",
        &p(d, "index.pbci"),
        "--gallery",
        &p(d, "gallery.csv"),
        "--queries",
        &p(d, "probes.csv"),
        "--out",
        &p(d, "pbc.txt"),
        "--timing-out",
        &p(d, "timing.txt"),
    ]);
    ok(&[
        "rerank",
        "--index",
        &p(d, "index.pbci"),
        "--gallery",
        &p(d, "gallery.csv"),
        "--queries",
        &p(d, "probes.csv"),
        "--baseline-only",
        "--out",
        &p(d, "baseline.txt"),
    ]);
    let report = ok(&[
        "evaluate",
        "--rankings",
        &p(d, "pbc.txt"),
        "--baseline",
        &p(d, "baseline.txt"),
        "--ground-truth",
        &p(d, "ground_truth.txt"),
        "--index",
        &p(d, "index.pbci"),
        "--timing",
        &p(d, "timing.txt"),
        "--format",
        "kv",
    ]);
    assert!(kv(&report, "pbc.map") > kv(&report, "baseline.map"), "{report}");
    assert!(kv(&report, "pbc.rank1") >= kv(&report, "baseline.rank1"), "{report}");
    assert!(kv(&report, "pbc.online_median_ms") > 0.0);
}

#[test]
fn identical_invocations_give_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let common = ["--num-ids", "15", "--format", "bin"];
    for sub in ["a", "b"] {
        let out = p(d, sub);
        let mut args = vec!["synth", "--out-dir", &out];
        args.extend(common);
        ok(&args);
        ok(&[
            "build-index",
            "--gallery",
            &p(&d.join(sub), "gallery.bin"),
            "--out",
            &p(&d.join(sub), "index.pbci"),
        ]);
    }
    for file in ["gallery.bin", "probes.bin", "ground_truth.txt", "index.pbci"] {
        let a = std::fs::read(d.join("a").join(file)).unwrap();
        let b = std::fs::read(d.join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs");
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("run.cfg"), "num-ids=12\nseed=3\n").unwrap();
    let out = pbc(&[
        "--config",
        &p(d, "run.cfg"),
        "synth",
        "--out-dir",
        d.to_str().unwrap(),
        "--seed",
        "4",
    ]);
    assert!(out.status.success());
    let echo = String::from_utf8_lossy(&out.stderr);
    assert!(echo.contains("num-ids=12") && echo.contains("seed=4"), "{echo}");
}

#[test]
fn rejects_bad_invocations() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["synth", "--out-dir", d.to_str().unwrap(), "--num-ids", "10"]);
    let missing_index = pbc(&["rerank", "--queries", &p(d, "probes.csv")]);
    assert!(!missing_index.status.success());
    let zero_k0 = pbc(&[
        "build-index",
        "--gallery",
        &p(d, "gallery.csv"),
        "--k0",
        "0",
        "--out",
        &p(d, "x.pbci"),
    ]);
    assert!(!zero_k0.status.success());
    assert!(String::from_utf8_lossy(&zero_k0.stderr).contains("k0"));
    assert!(!d.join("x.pbci").exists());
}

#[test]
fn version_names_the_file_formats() {
    let v = ok(&["--version"]);
    assert!(v.contains("index format 1"), "{v}");
}

#[test]
fn score_matrices_match_feature_input() {
    use pbc_rerank::prelude::*;
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (gallery, probes) = generate_synthetic(&SynthConfig {
        num_ids: 20,
        ..SynthConfig::default()
    })
    .unwrap();
    save_features(&gallery, &d.join("gallery.csv"), FileFormat::Csv).unwrap();
    save_features(&probes, &d.join("probes.csv"), FileFormat::Csv).unwrap();
    SimilarityMatrix::gallery_from_features(&gallery, Metric::Euclidean)
        .unwrap()
        .save(&d.join("g.pbcs"))
        .unwrap();
    SimilarityMatrix::probes_from_features(&probes, &gallery, Metric::Euclidean)
        .unwrap()
        .save(&d.join("p.pbcs"))
        .unwrap();
    std::fs::write(d.join("gallery_ids.txt"), gallery.ids().join("\n")).unwrap();
    std::fs::write(d.join("probe_ids.txt"), probes.ids().join("\n")).unwrap();

    ok(&[
        "build-index",
        "--gallery",
        &p(d, "gallery.csv"),
        "--out",
        &p(d, "f.pbci"),
    ]);
    ok(&[
        "build-index",
        "--scores",
        &p(d, "g.pbcs"),
        "--gallery-ids",
        &p(d, "gallery_ids.txt"),
        "--out",
        &p(d, "s.pbci"),
    ]);
    let from_features = ok(&[
        "rerank",
        "--index",
        &p(d, "f.pbci"),
        "--gallery",
        &p(d, "gallery.csv"),
        "--queries",
        &p(d, "probes.csv"),
    ]);
    let from_scores = ok(&[
        "rerank",
        "--index",
        &p(d, "s.pbci"),
        "--queries",
        &p(d, "p.pbcs"),
        "--query-ids",
        &p(d, "probe_ids.txt"),
    ]);
    assert_eq!(from_features, from_scores);
}
