//! Subcommand behaviors: staged composition is byte-identical to `run`,
//! exit codes match the contract, config files merge under flags.

mod common;

use std::fs;

use common::{fixture, run_expect, run_ok};

#[test]
fn staged_composition_matches_run() {
    let pipeline = tempfile::tempdir().unwrap();
    let staged = tempfile::tempdir().unwrap();
    let input = fixture("changelog-200.txt");
    let p = |name: &str| pipeline.path().join(name);
    let s = |name: &str| staged.path().join(name);

    run_ok(&[
        "run",
        "--changelog",
        input.to_str().unwrap(),
        "--preset",
        "webkit-figures",
        "-o",
        pipeline.path().to_str().unwrap(),
    ]);

    // stage 1: parse
    run_ok(&[
        "parse",
        "--changelog",
        input.to_str().unwrap(),
        "-o",
        s("contributions.tsv").to_str().unwrap(),
    ]);
    assert_eq!(
        fs::read(s("contributions.tsv")).unwrap(),
        fs::read(p("contributions.tsv")).unwrap(),
        "parse output differs from the pipeline intermediate"
    );

    // stage 2: slice
    run_ok(&[
        "slice",
        "--input",
        s("contributions.tsv").to_str().unwrap(),
        "--preset",
        "webkit-figures",
        "-o",
        staged.path().to_str().unwrap(),
    ]);
    for name in ["slices.tsv", "slice-0.tsv", "slice-1.tsv", "slice-2.tsv", "slice-3.tsv"] {
        assert_eq!(
            fs::read(s(name)).unwrap(),
            fs::read(p(name)).unwrap(),
            "{name} differs"
        );
    }

    // stage 3..5 on one slice and on the cumulative span, using the bounds
    // the slice stage reported
    let jobs = [
        ("slice-2.tsv", "slice-2", "2008-09-30", "2011-02-03"),
        ("contributions.tsv", "cumulative", "2006-09-01", "2013-04-03"),
    ];
    for (input_tsv, name, start, end) in jobs {
        let graphml = format!("{name}.graphml");
        run_ok(&[
            "graph",
            "--input",
            s(input_tsv).to_str().unwrap(),
            "--interval-start",
            start,
            "--interval-end",
            end,
            "-o",
            s(&graphml).to_str().unwrap(),
        ]);
        assert_eq!(
            fs::read(s(&graphml)).unwrap(),
            fs::read(p(&graphml)).unwrap(),
            "{graphml} differs"
        );

        for (fmt, ext) in [("csv", "metrics.csv"), ("json", "metrics.json")] {
            let out = format!("{name}.{ext}");
            run_ok(&[
                "metrics",
                "--input",
                s(&graphml).to_str().unwrap(),
                "--format",
                fmt,
                "-o",
                s(&out).to_str().unwrap(),
            ]);
            assert_eq!(
                fs::read(s(&out)).unwrap(),
                fs::read(p(&out)).unwrap(),
                "{out} differs"
            );
        }
        for (fmt, ext) in [("svg", "svg"), ("dot", "dot")] {
            let out = format!("{name}.{ext}");
            run_ok(&[
                "render",
                "--input",
                s(&graphml).to_str().unwrap(),
                "--format",
                fmt,
                "-o",
                s(&out).to_str().unwrap(),
            ]);
            assert_eq!(
                fs::read(s(&out)).unwrap(),
                fs::read(p(&out)).unwrap(),
                "{out} differs"
            );
        }
    }
    println!("stages: chained subcommands reproduce run artifacts byte-for-byte");
}

#[test]
fn metrics_of_a_triangle_graph() {
    // three developers sharing one file project to a triangle
    let dir = tempfile::tempdir().unwrap();
    let tsv = dir.path().join("tri.tsv");
    fs::write(
        &tsv,
        "2010-01-01T10:00:00Z\ta@x.com\tsrc/f.cpp\n\
         2010-01-02T10:00:00Z\tb@x.com\tsrc/f.cpp\n\
         2010-01-03T10:00:00Z\tc@x.com\tsrc/f.cpp\n",
    )
    .unwrap();
    let graphml = dir.path().join("tri.graphml");
    run_ok(&[
        "graph",
        "--input",
        tsv.to_str().unwrap(),
        "-o",
        graphml.to_str().unwrap(),
    ]);
    let csv_path = dir.path().join("tri.csv");
    run_ok(&[
        "metrics",
        "--input",
        graphml.to_str().unwrap(),
        "--format",
        "csv",
        "-o",
        csv_path.to_str().unwrap(),
    ]);
    let csv = fs::read_to_string(csv_path).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("id,email,affiliation"));
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[3], "2", "degree in {line}");
        assert_eq!(f[4], "1", "degree centrality in {line}");
        assert_eq!(f[5], "0", "betweenness in {line}");
        assert!((f[7].parse::<f64>().unwrap() - 1.0).abs() < 1e-9, "eigenvector in {line}");
        assert_eq!(f[8], "1", "clustering in {line}");
    }
    println!("stages: triangle metrics CSV matches the closed forms");
}

#[test]
fn exit_codes_follow_the_contract() {
    // 3: missing input file
    run_expect(
        &["run", "--changelog", "/definitely/not/here.txt", "-o", "/tmp/unused-coedit"],
        3,
    );

    // 2: config errors (no inputs; unknown preset; unknown render format)
    run_expect(&["run", "-o", "/tmp/unused-coedit"], 2);
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("log.txt");
    fs::write(&log, "").unwrap();
    run_expect(
        &[
            "run",
            "--changelog",
            log.to_str().unwrap(),
            "--preset",
            "no-such-preset",
            "-o",
            dir.path().join("out").to_str().unwrap(),
        ],
        2,
    );
    let graphml = dir.path().join("g.graphml");
    run_expect(
        &[
            "render",
            "--input",
            graphml.to_str().unwrap(),
            "--format",
            "tiff",
            "-o",
            dir.path().join("g.tiff").to_str().unwrap(),
        ],
        2,
    );

    // 1: strict-mode rejection
    let bad = dir.path().join("bad.tsv");
    fs::write(&bad, "only\ttwo\n").unwrap();
    run_expect(
        &[
            "run",
            "--commitlog",
            bad.to_str().unwrap(),
            "--strict",
            "-o",
            dir.path().join("out1").to_str().unwrap(),
        ],
        1,
    );

    // 0: empty input parses to empty graphs with a warning
    let stderr = run_ok(&[
        "run",
        "--changelog",
        log.to_str().unwrap(),
        "-o",
        dir.path().join("out0").to_str().unwrap(),
    ]);
    assert!(stderr.contains("warning"), "stderr: {stderr}");
    println!("stages: exit codes 0/1/2/3 verified");
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("changelog-200.txt");

    // run A: everything from flags
    let out_flags = dir.path().join("flags");
    run_ok(&[
        "run",
        "--changelog",
        input.to_str().unwrap(),
        "--preset",
        "webkit-figures",
        "--seed",
        "7",
        "-o",
        out_flags.to_str().unwrap(),
    ]);

    // run B: config file sets a different seed, the flag overrides it back
    let cfg = dir.path().join("run.conf");
    fs::write(
        &cfg,
        format!(
            "# pipeline settings\nchangelog = {}\npreset = webkit-figures\nseed = 999\n",
            input.display()
        ),
    )
    .unwrap();
    let out_cfg = dir.path().join("cfg");
    run_ok(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "7",
        "-o",
        out_cfg.to_str().unwrap(),
    ]);
    assert_eq!(
        fs::read(out_flags.join("manifest.json")).unwrap(),
        fs::read(out_cfg.join("manifest.json")).unwrap(),
        "flag-set and config-set runs should match when flags win"
    );

    // unknown config key is a config error
    let bad_cfg = dir.path().join("bad.conf");
    fs::write(&bad_cfg, "garbage_key = value\n").unwrap();
    run_expect(
        &[
            "run",
            "--config",
            bad_cfg.to_str().unwrap(),
            "-o",
            dir.path().join("never").to_str().unwrap(),
        ],
        2,
    );
    println!("stages: config file + flags-win merging verified");
}

#[test]
fn affiliations_timeline_and_style_files_load() {
    // the bundled sample configs mirror the built-in defaults, so a run
    // configured from files matches a run on defaults
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("changelog-200.txt");
    let out_default = dir.path().join("default");
    run_ok(&[
        "run",
        "--changelog",
        input.to_str().unwrap(),
        "--preset",
        "webkit-figures",
        "-o",
        out_default.to_str().unwrap(),
    ]);
    let out_files = dir.path().join("files");
    run_ok(&[
        "run",
        "--changelog",
        input.to_str().unwrap(),
        "--timeline",
        fixture("timeline.conf").to_str().unwrap(),
        "--span-start",
        "2006-09-01",
        "--span-end",
        "2013-04-03",
        "--affiliations",
        fixture("affiliations.conf").to_str().unwrap(),
        "--style",
        fixture("style.conf").to_str().unwrap(),
        "-o",
        out_files.to_str().unwrap(),
    ]);
    assert_eq!(
        fs::read(out_default.join("manifest.json")).unwrap(),
        fs::read(out_files.join("manifest.json")).unwrap(),
        "file-configured run should match the built-in defaults"
    );
    println!("stages: affiliation, timeline, and style files load and match the defaults");
}
