//! Command-line entry point: problem generation, single solves, the
//! annealing baseline, benchmark grids, verification suites, and SVG
//! rendering of benchmark CSVs.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when a verification
//! suite has failures.

use mcco::anneal::{dual_anneal, AnnealConfig};
use mcco::harness::{
    bench, format_real, solve, BenchConfig, DecoderKind, Method, SolveConfig, ThresholdRule,
    CSV_HEADER,
};
use mcco::plot::plot_csv;
use mcco::problem::random_problem;
use mcco::sketch::SketchKind;
use mcco::verify::{all_pass, to_csv, Suite};
use mcco::RuleSet64;
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const USAGE: &str = "\
mcco - Monte-Carlo compressive optimization of rule-based cost functions

USAGE:
  mcco gen    [--n-bits 12] [--lengths 4,5,6] [--count-min 1] [--count-max 2]
              [--reward-min 0.5] [--reward-max 2.0] [--seed 0] [--out FILE]
  mcco solve  --problem FILE [--sketch quad] [--samples 250] [--seed 0]
              [--threshold-quantile 0.5 | --threshold-abs T] [--sparsity K]
              [--decoder omp|mp] [--sketch-rows M] [--sketch-seed S]
  mcco anneal --problem FILE --budget N [--seed 0] [--restarts 2]
              [--t0 A --t1 B] [--flip-p 0.5]
  mcco bench  --problem FILE --out FILE [--methods anneal,random,quad,quint,duplet]
              [--samples 50:300:50] [--trials 200] [--seed 0]
              [--threshold-quantile 0.5] [--sparsity K] [--sketch-rows M]
  mcco verify --suite transform|combinatorics|concentration|proposition1|threshold
              [--out FILE]
  mcco plot   --csv FILE --out FILE

Sketch kinds: single, duplet, quad, quint, random.
MCCO_THREADS caps the benchmark worker count.
Exit codes: 0 ok, 1 usage error, 2 verification failures.";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            eprintln!("{USAGE}");
            ExitCode::from(1)
        }
    }
}

/// Minimal `--flag value` parser; every flag takes exactly one value.
struct Flags {
    values: HashMap<String, String>,
}

impl Flags {
    fn parse(args: &[String]) -> Result<Self, String> {
        let mut values = HashMap::new();
        let mut i = 0;
        while i < args.len() {
            let flag = args[i]
                .strip_prefix("--")
                .ok_or_else(|| format!("expected --flag, got '{}'", args[i]))?;
            let value = args
                .get(i + 1)
                .ok_or_else(|| format!("flag --{flag} needs a value"))?;
            values.insert(flag.to_string(), value.clone());
            i += 2;
        }
        Ok(Flags { values })
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.values.get(name).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, name: &str, default: T) -> Result<T, String> {
        match self.get(name) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| format!("invalid value '{raw}' for --{name}")),
        }
    }

    fn parsed_opt<T: std::str::FromStr>(&self, name: &str) -> Result<Option<T>, String> {
        match self.get(name) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| format!("invalid value '{raw}' for --{name}")),
        }
    }

    fn required(&self, name: &str) -> Result<&str, String> {
        self.get(name).ok_or_else(|| format!("missing --{name}"))
    }
}

fn run(args: &[String]) -> Result<ExitCode, String> {
    let Some(command) = args.first() else {
        return Err("missing subcommand".into());
    };
    let flags = Flags::parse(&args[1..])?;
    match command.as_str() {
        "gen" => cmd_gen(&flags),
        "solve" => cmd_solve(&flags),
        "anneal" => cmd_anneal(&flags),
        "bench" => cmd_bench(&flags),
        "verify" => cmd_verify(&flags),
        "plot" => cmd_plot(&flags),
        "help" | "--help" | "-h" => {
            println!("{USAGE}");
            Ok(ExitCode::SUCCESS)
        }
        other => Err(format!("unknown subcommand '{other}'")),
    }
}

fn load_problem(flags: &Flags) -> Result<RuleSet64, String> {
    let path = flags.required("problem")?;
    RuleSet64::load(Path::new(path)).map_err(|e| format!("loading {path}: {e}"))
}

fn cmd_gen(flags: &Flags) -> Result<ExitCode, String> {
    let n_bits: usize = flags.parsed("n-bits", 12)?;
    let lengths: Vec<usize> = flags
        .get("lengths")
        .unwrap_or("4,5,6")
        .split(',')
        .map(|s| s.parse().map_err(|_| format!("bad length '{s}'")))
        .collect::<Result<_, _>>()?;
    let count_min: usize = flags.parsed("count-min", 1)?;
    let count_max: usize = flags.parsed("count-max", 2)?;
    let reward_min: f64 = flags.parsed("reward-min", 0.5)?;
    let reward_max: f64 = flags.parsed("reward-max", 2.0)?;
    let seed: u64 = flags.parsed("seed", 0)?;
    let problem: RuleSet64 = random_problem(
        n_bits,
        &lengths,
        count_min..=count_max,
        reward_min..=reward_max,
        seed,
    )
    .map_err(|e| e.to_string())?;
    match flags.get("out") {
        Some(path) => problem
            .save(Path::new(path))
            .map_err(|e| format!("writing {path}: {e}"))?,
        None => println!("{}", problem.to_json()),
    }
    Ok(ExitCode::SUCCESS)
}

fn solve_config(flags: &Flags, samples: usize, seed: u64) -> Result<SolveConfig, String> {
    let kind =
        SketchKind::parse(flags.get("sketch").unwrap_or("quad")).map_err(|e| e.to_string())?;
    let mut config = SolveConfig::new(kind, samples, seed);
    if let Some(t) = flags.parsed_opt::<f64>("threshold-abs")? {
        config.threshold = ThresholdRule::Absolute(t);
    } else {
        config.threshold = ThresholdRule::Quantile(flags.parsed("threshold-quantile", 0.5)?);
    }
    config.sparsity = flags.parsed_opt("sparsity")?;
    config.decoder = match flags.get("decoder").unwrap_or("omp") {
        "omp" => DecoderKind::Omp,
        "mp" => DecoderKind::Mp,
        other => return Err(format!("unknown decoder '{other}' (omp|mp)")),
    };
    config.sketch_rows = flags.parsed_opt("sketch-rows")?;
    if let Some(s) = flags.parsed_opt("sketch-seed")? {
        config.sketch_seed = s;
    }
    Ok(config)
}

#[allow(clippy::too_many_arguments)]
fn print_result_row(
    method: &str,
    sketch: &str,
    problem: &RuleSet64,
    n: usize,
    seed: u64,
    estimate: &mcco::BitString,
    f_hat: f64,
    evals: usize,
    fallback: &str,
) -> Result<(), String> {
    let optimum = problem.brute_force_argmax().map_err(|e| e.to_string())?;
    let hamming = mcco::hamming(estimate, &optimum.argmax).map_err(|e| e.to_string())?;
    println!("{CSV_HEADER}");
    println!(
        "{method},{sketch},{n},0,{seed},{},{},{},{hamming},{evals},{fallback}",
        format_real(optimum.value),
        format_real(f_hat),
        format_real(optimum.value - f_hat),
    );
    println!("# estimate={estimate}");
    println!("# optimum={}", optimum.argmax);
    Ok(())
}

fn cmd_solve(flags: &Flags) -> Result<ExitCode, String> {
    let problem = load_problem(flags)?;
    let samples: usize = flags.parsed("samples", 250)?;
    let seed: u64 = flags.parsed("seed", 0)?;
    let config = solve_config(flags, samples, seed)?;
    let out = solve(&problem, &config).map_err(|e| e.to_string())?;
    print_result_row(
        "solve",
        config.sketch.label(),
        &problem,
        samples,
        seed,
        &out.estimate,
        out.f_hat,
        out.evaluations,
        out.fallback.label(),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_anneal(flags: &Flags) -> Result<ExitCode, String> {
    let problem = load_problem(flags)?;
    let budget: usize = flags
        .parsed_opt("budget")?
        .ok_or_else(|| "missing --budget".to_string())?;
    let seed: u64 = flags.parsed("seed", 0)?;
    let mut config = AnnealConfig::new(budget, seed);
    config.restarts = flags.parsed("restarts", 2)?;
    config.t_initial = flags.parsed_opt("t0")?;
    config.t_final = flags.parsed_opt("t1")?;
    config.flip_geometric_p = flags.parsed("flip-p", 0.5)?;
    let out = dual_anneal(&problem, &config).map_err(|e| e.to_string())?;
    print_result_row(
        "anneal",
        "none",
        &problem,
        budget,
        seed,
        &out.record.argmax,
        out.record.value,
        out.evaluations,
        "none",
    )?;
    Ok(ExitCode::SUCCESS)
}

/// Parses `50:300:50` ranges or `50,100,200` lists of sample sizes.
fn parse_sizes(raw: &str) -> Result<Vec<usize>, String> {
    if raw.contains(':') {
        let parts: Vec<&str> = raw.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:step, got '{raw}'"));
        }
        let lo: usize = parts[0].parse().map_err(|_| "bad range start")?;
        let hi: usize = parts[1].parse().map_err(|_| "bad range end")?;
        let step: usize = parts[2].parse().map_err(|_| "bad range step")?;
        if step == 0 || hi < lo {
            return Err(format!("degenerate range '{raw}'"));
        }
        Ok((lo..=hi).step_by(step).collect())
    } else {
        raw.split(',')
            .map(|s| s.parse().map_err(|_| format!("bad sample size '{s}'")))
            .collect()
    }
}

fn cmd_bench(flags: &Flags) -> Result<ExitCode, String> {
    let problem = load_problem(flags)?;
    let out_path = PathBuf::from(flags.required("out")?);
    let methods: Vec<Method> = flags
        .get("methods")
        .unwrap_or("anneal,random,quad,quint")
        .split(',')
        .map(|s| Method::parse(s).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let sample_sizes = parse_sizes(flags.get("samples").unwrap_or("50:300:50"))?;
    let trials: usize = flags.parsed("trials", 200)?;
    let master_seed: u64 = flags.parsed("seed", 0)?;
    let mut config = BenchConfig::new(methods, sample_sizes, trials, master_seed);
    config.threshold = ThresholdRule::Quantile(flags.parsed("threshold-quantile", 0.5)?);
    config.sparsity = flags.parsed_opt("sparsity")?;
    config.sketch_rows = flags.parsed_opt("sketch-rows")?;
    config.threads = match std::env::var("MCCO_THREADS") {
        Ok(raw) => raw
            .parse()
            .map_err(|_| format!("bad MCCO_THREADS value '{raw}'"))?,
        Err(_) => std::thread::available_parallelism().map_or(1, |p| p.get()),
    };
    let csv = bench(&problem, &config).map_err(|e| e.to_string())?;
    std::fs::write(&out_path, &csv).map_err(|e| format!("writing {out_path:?}: {e}"))?;
    let rows = csv.lines().skip(1).filter(|l| !l.starts_with('#')).count();
    println!("wrote {rows} rows to {}", out_path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(flags: &Flags) -> Result<ExitCode, String> {
    let suite = Suite::parse(flags.required("suite")?).map_err(|e| e.to_string())?;
    let rows = suite.run();
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for row in &rows {
        println!(
            "{:>6}  {:width$}  {}  [{} vs {}]{}",
            if row.pass { "pass" } else { "FAIL" },
            row.name,
            row.params,
            row.expected,
            row.actual,
            if row.diagnostic { "  (diagnostic)" } else { "" },
        );
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    println!(
        "suite {}: {passed}/{} checks pass",
        suite.label(),
        rows.len()
    );
    if let Some(path) = flags.get("out") {
        std::fs::write(path, to_csv(suite, &rows)).map_err(|e| format!("writing {path}: {e}"))?;
    }
    if all_pass(&rows) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn cmd_plot(flags: &Flags) -> Result<ExitCode, String> {
    let csv_path = flags.required("csv")?;
    let out_path = flags.required("out")?;
    let csv = std::fs::read_to_string(csv_path).map_err(|e| format!("reading {csv_path}: {e}"))?;
    let svg = plot_csv(&csv).map_err(|e| e.to_string())?;
    std::fs::write(out_path, svg).map_err(|e| format!("writing {out_path}: {e}"))?;
    println!("wrote {out_path}");
    Ok(ExitCode::SUCCESS)
}
