//! Benchmark harness: the end-to-end solve pipeline and the CSV-producing
//! comparison runner.
//!
//! A solve composes sample -> threshold -> sketch -> decode -> extract and
//! spends exactly `n` cost queries. The annealing baseline is budgeted by
//! the same `n`. `bench` runs a (method, sample size, trial) grid with
//! per-cell seeds derived from one master seed; output is byte-identical
//! for a fixed configuration regardless of the worker count.

use crate::anneal::{dual_anneal, AnnealConfig};
use crate::bits::{hamming, BitString};
use crate::decode::{extract_maximum, mp_argmax, omp};
use crate::error::{Error, Result};
use crate::problem::{OptimumRecord, RuleSet};
use crate::rng::{mix64, stable_hash};
use crate::sample::draw_uniform;
use crate::sketch::{apply_to_sample, SketchKind, SketchSpec};

/// Canonical CSV header of benchmark rows.
pub const CSV_HEADER: &str =
    "method,sketch,n_samples,trial,seed,f_opt,f_hat,distance,hamming_dist,evals,fallback";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Anneal,
    Random,
    Quad,
    Quint,
    Duplet,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Anneal => "anneal",
            Method::Random => "random",
            Method::Quad => "quad",
            Method::Quint => "quint",
            Method::Duplet => "duplet",
        }
    }

    pub fn sketch_kind(self) -> Option<SketchKind> {
        match self {
            Method::Anneal => None,
            Method::Random => Some(SketchKind::Random),
            Method::Quad => Some(SketchKind::Quadruplet),
            Method::Quint => Some(SketchKind::Quintuplet),
            Method::Duplet => Some(SketchKind::Duplet),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "anneal" => Ok(Method::Anneal),
            "random" => Ok(Method::Random),
            "quad" => Ok(Method::Quad),
            "quint" => Ok(Method::Quint),
            "duplet" => Ok(Method::Duplet),
            other => Err(Error::InvalidArgument(format!(
                "unknown method '{other}' (anneal|random|quad|quint|duplet)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdRule {
    /// Threshold at this quantile of the positive sampled values.
    Quantile(f64),
    /// Fixed absolute threshold.
    Absolute(f64),
}

impl Default for ThresholdRule {
    fn default() -> Self {
        ThresholdRule::Quantile(0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderKind {
    Omp,
    Mp,
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub sketch: SketchKind,
    pub samples: usize,
    pub threshold: ThresholdRule,
    /// OMP atom budget; `None` uses the problem's rule count.
    pub sparsity: Option<usize>,
    pub decoder: DecoderKind,
    /// Row count for the random kind; `None` matches the quadruplet count.
    pub sketch_rows: Option<usize>,
    pub sketch_seed: u64,
    pub seed: u64,
}

impl SolveConfig {
    pub fn new(sketch: SketchKind, samples: usize, seed: u64) -> Self {
        SolveConfig {
            sketch,
            samples,
            threshold: ThresholdRule::default(),
            sparsity: None,
            decoder: DecoderKind::Omp,
            sketch_rows: None,
            sketch_seed: mix64(seed ^ 0x5ce7),
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    None,
    /// Thresholding (or an all-zero sample) left nothing to decode; the
    /// best sampled point was returned instead.
    BestSample,
}

impl Fallback {
    pub fn label(self) -> &'static str {
        match self {
            Fallback::None => "none",
            Fallback::BestSample => "best_sample",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub estimate: BitString,
    pub f_hat: f64,
    pub evaluations: usize,
    pub fallback: Fallback,
}

/// Runs the full sampling solver on one problem. Exactly
/// `config.samples` cost queries are spent (all inside the sample draw).
pub fn solve(problem: &RuleSet<f64>, config: &SolveConfig) -> Result<SolveOutcome> {
    let spec = match config.sketch {
        SketchKind::Random => match config.sketch_rows {
            Some(rows) => SketchSpec::random(problem.n_bits(), rows, config.sketch_seed)?,
            None => SketchSpec::random_like_quadruplet(problem.n_bits(), config.sketch_seed)?,
        },
        kind => SketchSpec::structured(kind, problem.n_bits())?,
    };
    let sample = draw_uniform(problem, config.samples, config.seed)?;
    let t = match config.threshold {
        ThresholdRule::Quantile(q) => sample.quantile_threshold(q)?,
        ThresholdRule::Absolute(t) => t,
    };
    let kept = sample.threshold(t);
    let sketched = apply_to_sample(&spec, &kept)?;

    let fallback_outcome = |sample: &crate::sample::Sample<f64>| -> Result<SolveOutcome> {
        let (x, v) = sample.best_pair().expect("sample is nonempty");
        Ok(SolveOutcome {
            estimate: x,
            f_hat: v,
            evaluations: config.samples,
            fallback: Fallback::BestSample,
        })
    };
    if sketched.from_empty_sample() {
        return fallback_outcome(&sample);
    }

    let estimate = match config.decoder {
        DecoderKind::Mp => mp_argmax(&sketched)?,
        DecoderKind::Omp => {
            let sparsity = config.sparsity.unwrap_or(problem.rule_count().max(1));
            let est = omp(&sketched, sparsity)?;
            if est.atoms().is_empty() {
                return fallback_outcome(&sample);
            }
            extract_maximum(&est)?
        }
    };
    Ok(SolveOutcome {
        estimate,
        f_hat: problem.evaluate(&estimate)?,
        evaluations: config.samples,
        fallback: Fallback::None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResultRow {
    pub method: String,
    pub sketch: String,
    pub n_samples: usize,
    pub trial: usize,
    pub seed: u64,
    pub f_opt: f64,
    pub f_hat: f64,
    pub distance: f64,
    pub hamming_dist: u32,
    pub evals: usize,
    pub fallback: String,
}

/// Floats are serialized with 17 significant digits so equal runs produce
/// byte-identical CSV.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

impl BenchResultRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.method,
            self.sketch,
            self.n_samples,
            self.trial,
            self.seed,
            format_real(self.f_opt),
            format_real(self.f_hat),
            format_real(self.distance),
            self.hamming_dist,
            self.evals,
            self.fallback
        )
    }

    pub fn from_csv_line(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(Error::InvalidArgument(format!(
                "expected 11 CSV fields, got {} in '{line}'",
                fields.len()
            )));
        }
        let parse_f = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad float '{s}'")))
        };
        let parse_u = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad integer '{s}'")))
        };
        Ok(BenchResultRow {
            method: fields[0].to_string(),
            sketch: fields[1].to_string(),
            n_samples: parse_u(fields[2])?,
            trial: parse_u(fields[3])?,
            seed: fields[4]
                .parse::<u64>()
                .map_err(|_| Error::InvalidArgument(format!("bad seed '{}'", fields[4])))?,
            f_opt: parse_f(fields[5])?,
            f_hat: parse_f(fields[6])?,
            distance: parse_f(fields[7])?,
            hamming_dist: parse_u(fields[8])? as u32,
            evals: parse_u(fields[9])?,
            fallback: fields[10].to_string(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub methods: Vec<Method>,
    pub sample_sizes: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    pub threshold: ThresholdRule,
    pub sparsity: Option<usize>,
    pub decoder: DecoderKind,
    pub sketch_rows: Option<usize>,
    /// Worker threads; rows are computed into fixed slots so the output
    /// does not depend on this.
    pub threads: usize,
}

impl BenchConfig {
    pub fn new(
        methods: Vec<Method>,
        sample_sizes: Vec<usize>,
        trials: usize,
        master_seed: u64,
    ) -> Self {
        BenchConfig {
            methods,
            sample_sizes,
            trials,
            master_seed,
            threshold: ThresholdRule::default(),
            sparsity: None,
            decoder: DecoderKind::Omp,
            sketch_rows: None,
            threads: 1,
        }
    }
}

/// One benchmark cell, solved with its derived seed.
fn run_cell(
    problem: &RuleSet<f64>,
    optimum: &OptimumRecord<f64>,
    config: &BenchConfig,
    method: Method,
    n: usize,
    trial: usize,
) -> Result<BenchResultRow> {
    let seed = stable_hash(config.master_seed, method.label(), n as u64, trial as u64);
    let (outcome, sketch_label) = match method.sketch_kind() {
        None => {
            let anneal_config = AnnealConfig::new(n, seed);
            let out = dual_anneal(problem, &anneal_config)?;
            (
                SolveOutcome {
                    estimate: out.record.argmax,
                    f_hat: out.record.value,
                    evaluations: out.evaluations,
                    fallback: Fallback::None,
                },
                "none",
            )
        }
        Some(kind) => {
            let mut solve_config = SolveConfig::new(kind, n, seed);
            solve_config.threshold = config.threshold;
            solve_config.sparsity = config.sparsity;
            solve_config.decoder = config.decoder;
            solve_config.sketch_rows = config.sketch_rows;
            (solve(problem, &solve_config)?, kind.label())
        }
    };
    // budget parity is a hard contract of every row
    assert_eq!(outcome.evaluations, n, "evaluation count must equal n");
    let distance = optimum.value - outcome.f_hat;
    debug_assert!(distance >= -1e-9);
    Ok(BenchResultRow {
        method: method.label().to_string(),
        sketch: sketch_label.to_string(),
        n_samples: n,
        trial,
        seed,
        f_opt: optimum.value,
        f_hat: outcome.f_hat,
        distance,
        hamming_dist: hamming(&outcome.estimate, &optimum.argmax)?,
        evals: outcome.evaluations,
        fallback: outcome.fallback.label().to_string(),
    })
}

/// Runs the benchmark grid and renders the CSV (rows sorted by
/// method, n, trial, then a commented summary block).
pub fn bench(problem: &RuleSet<f64>, config: &BenchConfig) -> Result<String> {
    if config.methods.is_empty() || config.sample_sizes.is_empty() || config.trials == 0 {
        return Err(Error::InvalidArgument(
            "bench needs methods, sample sizes and trials".into(),
        ));
    }
    let optimum = problem.brute_force_argmax()?;

    let mut cells = Vec::new();
    for &method in &config.methods {
        for &n in &config.sample_sizes {
            for trial in 0..config.trials {
                cells.push((method, n, trial));
            }
        }
    }

    let workers = config.threads.max(1).min(cells.len());
    let mut rows: Vec<Option<Result<BenchResultRow>>> = vec![None; cells.len()];
    if workers <= 1 {
        for (slot, &(method, n, trial)) in cells.iter().enumerate() {
            rows[slot] = Some(run_cell(problem, &optimum, config, method, n, trial));
        }
    } else {
        let chunk = cells.len().div_ceil(workers);
        std::thread::scope(|scope| {
            for (cell_chunk, row_chunk) in cells.chunks(chunk).zip(rows.chunks_mut(chunk)) {
                let optimum = &optimum;
                scope.spawn(move || {
                    for (slot, &(method, n, trial)) in cell_chunk.iter().enumerate() {
                        row_chunk[slot] =
                            Some(run_cell(problem, optimum, config, method, n, trial));
                    }
                });
            }
        });
    }
    let mut rows: Vec<BenchResultRow> = rows
        .into_iter()
        .map(|r| r.expect("every cell computed"))
        .collect::<Result<_>>()?;
    rows.sort_by(|a, b| (&a.method, a.n_samples, a.trial).cmp(&(&b.method, b.n_samples, b.trial)));

    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    render_summary(&mut out, problem, config, &rows);
    Ok(out)
}

/// Summary block appended as comment lines: per-(method, n) mean distance,
/// plus distance and Hamming histograms per method aggregated over all n.
fn render_summary(
    out: &mut String,
    problem: &RuleSet<f64>,
    config: &BenchConfig,
    rows: &[BenchResultRow],
) {
    out.push_str("# baseline=metropolis-geometric\n");
    if config.methods.contains(&Method::Random) {
        let rows_used = config.sketch_rows.unwrap_or_else(|| {
            SketchSpec::random_like_quadruplet(problem.n_bits(), 0)
                .map(|s| s.row_count())
                .unwrap_or(0)
        });
        out.push_str(&format!(
            "# random_sketch_rows={rows_used} (default: quadruplet row count)\n"
        ));
    }
    let methods: Vec<&str> = {
        let mut seen: Vec<&str> = rows.iter().map(|r| r.method.as_str()).collect();
        seen.dedup();
        seen
    };
    for method in &methods {
        for &n in &config.sample_sizes {
            let group: Vec<&BenchResultRow> = rows
                .iter()
                .filter(|r| r.method == *method && r.n_samples == n)
                .collect();
            if group.is_empty() {
                continue;
            }
            let mean = group.iter().map(|r| r.distance).sum::<f64>() / group.len() as f64;
            out.push_str(&format!(
                "# mean_distance,method={method},n={n},value={}\n",
                format_real(mean)
            ));
        }
    }
    let f_opt = rows.first().map_or(0.0, |r| r.f_opt);
    let buckets = 10usize;
    for method in &methods {
        let group: Vec<&BenchResultRow> = rows.iter().filter(|r| r.method == *method).collect();
        let mut histogram = vec![0usize; buckets];
        for row in &group {
            let mut b = if f_opt > 0.0 {
                ((row.distance / f_opt) * buckets as f64).floor() as usize
            } else {
                0
            };
            b = b.min(buckets - 1);
            histogram[b] += 1;
        }
        for (b, count) in histogram.iter().enumerate() {
            let lo = f_opt * b as f64 / buckets as f64;
            let hi = f_opt * (b + 1) as f64 / buckets as f64;
            out.push_str(&format!(
                "# dist_hist,method={method},lo={},hi={},count={count}\n",
                format_real(lo),
                format_real(hi)
            ));
        }
        let mut hamming_hist = vec![0usize; problem.n_bits() + 1];
        for row in &group {
            hamming_hist[(row.hamming_dist as usize).min(problem.n_bits())] += 1;
        }
        for (h, count) in hamming_hist.iter().enumerate() {
            out.push_str(&format!(
                "# hamming_hist,method={method},h={h},count={count}\n"
            ));
        }
    }
}
