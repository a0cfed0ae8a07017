//! End-to-end checks of the binary: every subcommand, the problem file
//! round trip, CSV determinism across thread counts, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn mcco(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mcco"));
    cmd.args(args);
    for (key, value) in envs {
        cmd.env(key, value);
    }
    cmd.output().expect("binary runs")
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mcco-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn gen_solve_anneal_round_trip() {
    let dir = tempdir("roundtrip");
    let problem = dir.join("p.json");
    let out = mcco(
        &[
            "gen",
            "--n-bits",
            "12",
            "--seed",
            "7",
            "--out",
            problem.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success(), "{out:?}");
    let text = std::fs::read_to_string(&problem).unwrap();
    assert!(text.contains("\"n_bits\": 12"));

    let solve = mcco(
        &[
            "solve",
            "--problem",
            problem.to_str().unwrap(),
            "--sketch",
            "quad",
            "--samples",
            "250",
            "--seed",
            "3",
        ],
        &[],
    );
    assert!(solve.status.success(), "{solve:?}");
    let stdout = String::from_utf8(solve.stdout).unwrap();
    assert!(stdout.starts_with("method,sketch,n_samples"));
    assert!(stdout.contains("solve,quadruplet,250,0,3,"));
    let again = mcco(
        &[
            "solve",
            "--problem",
            problem.to_str().unwrap(),
            "--sketch",
            "quad",
            "--samples",
            "250",
            "--seed",
            "3",
        ],
        &[],
    );
    assert_eq!(stdout, String::from_utf8(again.stdout).unwrap());

    let anneal = mcco(
        &[
            "anneal",
            "--problem",
            problem.to_str().unwrap(),
            "--budget",
            "250",
            "--seed",
            "5",
        ],
        &[],
    );
    assert!(anneal.status.success(), "{anneal:?}");
    let stdout = String::from_utf8(anneal.stdout).unwrap();
    assert!(stdout.contains("anneal,none,250,0,5,"));
    assert!(stdout.contains(",250,none"));
}

#[test]
fn bench_is_byte_identical_across_thread_counts() {
    let dir = tempdir("bench");
    let problem = dir.join("p.json");
    mcco(
        &["gen", "--seed", "11", "--out", problem.to_str().unwrap()],
        &[],
    );
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let out = mcco(
            &[
                "bench",
                "--problem",
                problem.to_str().unwrap(),
                "--methods",
                "anneal,quad,random",
                "--samples",
                "50,100",
                "--trials",
                "3",
                "--seed",
                "42",
                "--out",
                path.to_str().unwrap(),
            ],
            &[("MCCO_THREADS", threads)],
        );
        assert!(out.status.success(), "{out:?}");
    }
    let csv_a = std::fs::read(&a).unwrap();
    let csv_b = std::fs::read(&b).unwrap();
    assert_eq!(csv_a, csv_b);
    let text = String::from_utf8(csv_a).unwrap();
    assert!(text.contains("# baseline=metropolis-geometric"));
    assert!(text.contains("# random_sketch_rows=144"));
    assert_eq!(
        text.lines().filter(|l| !l.starts_with('#')).count(),
        1 + 3 * 2 * 3
    );

    let svg_path = dir.join("plot.svg");
    let plot = mcco(
        &[
            "plot",
            "--csv",
            a.to_str().unwrap(),
            "--out",
            svg_path.to_str().unwrap(),
        ],
        &[],
    );
    assert!(plot.status.success(), "{plot:?}");
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("quad"));
}

#[test]
fn verify_suites_report_and_exit_codes() {
    let dir = tempdir("verify");
    let csv_path = dir.join("transform.csv");
    let out = mcco(
        &[
            "verify",
            "--suite",
            "transform",
            "--out",
            csv_path.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("l1_norm_explicit"));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("lemma_name,params,lhs,rhs,pass"));

    let out = mcco(&["verify", "--suite", "combinatorics"], &[]);
    assert!(out.status.success(), "{out:?}");

    // usage errors exit 1
    let out = mcco(&["verify", "--suite", "bogus"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let out = mcco(&["frobnicate"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let out = mcco(&["solve", "--problem", "/nonexistent.json"], &[]);
    assert_eq!(out.status.code(), Some(1));
}
