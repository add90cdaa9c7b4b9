//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Criteria: metric kernels vs independent oracles on 200 random graphs;
//! closed-form centrality values; the bundled 200-entry / 517-bullet
//! ChangeLog fixture; byte-identical pipeline reruns; edge-weight sums vs
//! an independent recount of the parsed TSV; and a 100k-contribution
//! end-to-end run under a minute.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use sha2::{Digest, Sha256};

use coedit_core::changelog::{commitlog_to_string, parse_changelog, parse_commitlog};
use coedit_core::metrics::{
    betweenness_centrality, clustering, density, eigenvector_centrality,
};
use coedit_core::render::import_graphml;
use coedit_core::synth::{graph_from_edges, random_graph, synthetic_commitlog};

use common::{fixture, oracles, run_ok};

#[test]
fn metric_oracle_suite() {
    let started = Instant::now();
    let mut checked = 0;
    for seed in 0..200u64 {
        let n = 1 + (seed as usize) % 8;
        let p = [0.15, 0.3, 0.5, 0.8][(seed as usize / 8) % 4];
        let g = random_graph(n, p, seed);

        let got = betweenness_centrality(&g, false);
        let want = oracles::betweenness_exhaustive(&g);
        for v in 0..n {
            assert!(
                (got[v] - want[v]).abs() <= 1e-9,
                "betweenness seed={seed} node={v}: {} vs {}",
                got[v],
                want[v]
            );
        }

        let (got_local, got_global) = clustering(&g);
        let (want_local, want_global) = oracles::clustering_exhaustive(&g);
        assert_eq!(got_local, want_local, "clustering seed={seed}");
        assert_eq!(got_global, want_global, "global clustering seed={seed}");

        let got_ev = eigenvector_centrality(&g, 1e-12, 20_000).unwrap();
        let want_ev = oracles::eigenvector_dense(&g);
        for v in 0..n {
            assert!(
                (got_ev[v] - want_ev[v]).abs() <= 1e-6,
                "eigenvector seed={seed} node={v}: {} vs {}",
                got_ev[v],
                want_ev[v]
            );
        }

        assert_eq!(density(&g), oracles::density_formula(&g), "density seed={seed}");
        checked += 1;
    }
    let elapsed = started.elapsed();
    assert_eq!(checked, 200);
    assert!(elapsed.as_secs_f64() < 10.0, "oracle suite took {elapsed:?}");
    println!("acceptance: metric oracle suite (200 graphs, n<=8): PASS in {elapsed:?}");
}

#[test]
fn closed_form_checks() {
    // star S4: center 0, three leaves
    let star = graph_from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
    let raw = betweenness_centrality(&star, false);
    assert_eq!(raw, vec![3.0, 0.0, 0.0, 0.0]);
    let norm = betweenness_centrality(&star, true);
    assert_eq!(norm[0], 1.0);
    let ev = eigenvector_centrality(&star, 1e-12, 10_000).unwrap();
    let ratio = ev[1] / ev[0];
    assert!(
        (ratio - 1.0 / 3.0f64.sqrt()).abs() <= 1e-9,
        "leaf/center ratio {ratio}"
    );

    // path P3
    let path = graph_from_edges(3, &[(0, 1), (1, 2)]);
    assert_eq!(betweenness_centrality(&path, false), vec![0.0, 1.0, 0.0]);
    assert_eq!(density(&path), 2.0 / 3.0);

    // complete K4
    let k4 = graph_from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    assert_eq!(density(&k4), 1.0);
    let (local, global) = clustering(&k4);
    assert!(local.iter().all(|&c| c == 1.0));
    assert_eq!(global, 1.0);

    println!("acceptance: closed-form checks (S4, P3, K4): PASS");
}

#[test]
fn parser_fixture() {
    let started = Instant::now();
    let bytes = std::fs::read(fixture("changelog-200.txt")).expect("fixture present");
    let (contribs, report) = parse_changelog(&bytes[..], true).expect("fixture parses strictly");
    assert_eq!(report.accepted, 517, "fixture bullet count");
    assert_eq!(report.rejected, 0);
    assert_eq!(contribs.len(), 517);

    // lossless round-trip through the commit-log format
    let tsv = commitlog_to_string(&contribs);
    let (reparsed, round_report) = parse_commitlog(tsv.as_bytes()).unwrap();
    assert_eq!(round_report.rejected, 0);
    assert_eq!(reparsed, contribs);

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "fixture parse took {elapsed:?}");
    println!("acceptance: parser fixture (200 entries / 517 bullets, round-trip): PASS in {elapsed:?}");
}

#[test]
fn pipeline_determinism() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let input = fixture("changelog-200.txt");
    for dir in [&dir_a, &dir_b] {
        run_ok(&[
            "run",
            "--changelog",
            input.to_str().unwrap(),
            "--preset",
            "webkit-figures",
            "--seed",
            "42",
            "-o",
            dir.path().to_str().unwrap(),
        ]);
    }
    let manifest_a = std::fs::read(dir_a.path().join("manifest.json")).unwrap();
    let manifest_b = std::fs::read(dir_b.path().join("manifest.json")).unwrap();
    assert_eq!(manifest_a, manifest_b, "manifests differ between reruns");

    // manifest hashes describe the files on disk
    let entries: serde_json::Value = serde_json::from_slice(&manifest_a).unwrap();
    let entries = entries.as_array().unwrap();
    assert!(!entries.is_empty());
    for entry in entries {
        let rel = entry["path"].as_str().unwrap();
        let bytes = std::fs::read(dir_a.path().join(rel)).unwrap();
        let digest = hex::encode(Sha256::digest(&bytes));
        assert_eq!(digest, entry["sha256"].as_str().unwrap(), "hash of {rel}");
        let other = std::fs::read(dir_b.path().join(rel)).unwrap();
        assert_eq!(bytes, other, "artifact {rel} differs between reruns");
    }
    println!(
        "acceptance: pipeline determinism ({} artifacts byte-identical): PASS",
        entries.len()
    );
}

/// Independent edge-weight oracle: per-file distinct-author counts over the
/// raw TSV text, using string timestamp comparison (the canonical format is
/// lexicographically ordered) and its own ChangeLog-exclusion rule.
fn weight_sum_from_tsv(tsv: &str, start: &str, end: &str) -> u64 {
    let mut per_file: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for line in tsv.lines() {
        let mut fields = line.splitn(3, '\t');
        let (Some(ts), Some(email), Some(path)) = (fields.next(), fields.next(), fields.next())
        else {
            panic!("malformed TSV line {line:?}");
        };
        let base = path.rsplit('/').next().unwrap_or(path);
        if ts >= start && ts < end && !base.starts_with("ChangeLog") {
            per_file.entry(path).or_default().insert(email);
        }
    }
    per_file
        .values()
        .map(|devs| (devs.len() as u64 * (devs.len() as u64).saturating_sub(1)) / 2)
        .sum()
}

#[test]
fn graph_consistency() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("changelog-200.txt");
    run_ok(&[
        "run",
        "--changelog",
        input.to_str().unwrap(),
        "--preset",
        "webkit-figures",
        "-o",
        dir.path().to_str().unwrap(),
    ]);
    let tsv = std::fs::read_to_string(dir.path().join("contributions.tsv")).unwrap();

    // the five intervals of the webkit-figures preset over its span
    let bounds = [
        "2006-09-01T00:00:00Z",
        "2007-06-29T00:00:00Z",
        "2008-09-30T00:00:00Z",
        "2011-02-03T00:00:00Z",
        "2013-04-03T00:00:00Z",
    ];
    let mut graphs: Vec<(String, &str, &str)> = (0..4)
        .map(|i| (format!("slice-{i}.graphml"), bounds[i], bounds[i + 1]))
        .collect();
    graphs.push(("cumulative.graphml".to_string(), bounds[0], bounds[4]));

    for (name, start, end) in graphs {
        let g = import_graphml(&std::fs::read(dir.path().join(&name)).unwrap()).unwrap();
        let got: u64 = g.edges.iter().map(|e| u64::from(e.weight)).sum();
        let want = weight_sum_from_tsv(&tsv, start, end);
        assert_eq!(got, want, "edge-weight sum of {name}");
    }
    println!("acceptance: graph consistency (weights = per-file pair counts): PASS");
}

#[test]
fn scale_runtime() {
    let dir = tempfile::tempdir().unwrap();
    let log = synthetic_commitlog(
        100_000,
        2_000,
        12_000,
        chrono::NaiveDate::from_ymd_opt(2006, 9, 1).unwrap(),
        2_400,
        7,
    );
    let log_path = dir.path().join("big.tsv");
    std::fs::write(&log_path, &log).unwrap();
    let out_dir = dir.path().join("out");

    let started = Instant::now();
    run_ok(&[
        "run",
        "--commitlog",
        log_path.to_str().unwrap(),
        "--preset",
        "webkit-figures",
        "--layout-iterations",
        "100",
        "-o",
        out_dir.to_str().unwrap(),
    ]);
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "end-to-end run took {elapsed:?}"
    );

    let slices = std::fs::read_to_string(out_dir.join("slices.tsv")).unwrap();
    assert_eq!(slices.lines().count(), 4, "expected four slices");
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    // parse + slices table + 4 slice TSVs + 5 graph sets of 5 formats
    assert_eq!(manifest.as_array().unwrap().len(), 31);
    println!(
        "acceptance: scale/runtime (100k contributions, 2k developers, 4 slices, all exports): PASS in {elapsed:?}"
    );
}

#[test]
fn reference_target_reporting() {
    // Reproducing published WebKit-corpus counts needs the historical
    // ChangeLogs; what must work here is the report-against-reference
    // mechanism: counts surface with a signed diff and never fail the run.
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("changelog-200.txt");
    let stderr = run_ok(&[
        "run",
        "--changelog",
        input.to_str().unwrap(),
        "--preset",
        "webkit-figures",
        "--expect-nodes",
        "445",
        "--expect-edges",
        "2169",
        "-o",
        dir.path().to_str().unwrap(),
    ]);
    assert!(stderr.contains("cumulative graph:"), "stderr: {stderr}");
    assert!(stderr.contains("expected nodes: 445 (diff "));
    assert!(stderr.contains("expected edges: 2169 (diff "));
    println!("acceptance: reference-target reporting (diff against published counts): PASS");
}
