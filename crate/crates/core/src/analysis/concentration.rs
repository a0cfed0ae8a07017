//! Moment concentration and the effect of thresholding.
//!
//! `concentration_experiment` measures how often the empirical moments of
//! an i.i.d. uniform sample stay within a given radius of the exact
//! moments and compares the rate against the Chebyshev-style floor
//! `1 - trace(variance) / (eps^2 n)`. `variance_decomposition` splits the
//! variance of a thresholded value set into its surviving-group terms, and
//! `exp_model_variance` evaluates the same split in a closed form under an
//! exponential value profile. `closeness_radius` turns per-problem moment
//! deviations into a single shared radius.

use crate::error::{Error, Result};
use crate::problem::RuleSet;
use crate::rng::mix64;
use crate::sample::draw_with_replacement;
use crate::scalar::Scalar;
use crate::sketch::{apply_to_full, apply_to_sample, SketchSpec};

/// Exact per-row first and second moments of the (thresholded) sketched
/// cost under the uniform distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentStats<T: Scalar> {
    row_means: Vec<T>,
    row_variances: Vec<T>,
    sample_size: usize,
    threshold: T,
}

impl<T: Scalar> MomentStats<T> {
    pub fn row_means(&self) -> &[T] {
        &self.row_means
    }

    pub fn row_variances(&self) -> &[T] {
        &self.row_variances
    }

    #[inline]
    pub fn sample_size(&self) -> usize {
        self.sample_size
    }

    #[inline]
    pub fn threshold(&self) -> T {
        self.threshold
    }

    /// Sum of the per-row variances.
    pub fn variance_trace(&self) -> T {
        self.row_variances.iter().copied().sum()
    }

    /// l2 norm of the mean vector.
    pub fn mean_norm(&self) -> T {
        self.row_means.iter().map(|&m| m * m).sum::<T>().sqrt()
    }

    /// Relative l2 drift of this mean vector against a baseline.
    pub fn mean_drift_from(&self, baseline: &MomentStats<T>) -> T {
        let diff = self
            .row_means
            .iter()
            .zip(&baseline.row_means)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<T>()
            .sqrt();
        let scale = baseline.mean_norm();
        if scale > T::zero() {
            diff / scale
        } else {
            T::zero()
        }
    }
}

/// Exact row moments over the full domain: mean and variance of
/// `row(x) * T_t f(x)` for uniform `x`. Requires a domain small enough to
/// enumerate.
pub fn moment_stats<T: Scalar>(
    ruleset: &RuleSet<T>,
    spec: &SketchSpec,
    threshold: T,
    sample_size: usize,
) -> Result<MomentStats<T>> {
    let full = ruleset.full_vector()?;
    let thresholded: Vec<T> = full
        .iter()
        .map(|&v| if v >= threshold { v } else { T::zero() })
        .collect();
    let first = apply_to_full(spec, &thresholded)?;
    let squared: Vec<T> = thresholded.iter().map(|&v| v * v).collect();
    let second = apply_to_full(spec, &squared)?;
    let domain = T::from_usize(full.len()).unwrap();
    let row_means: Vec<T> = first.values().iter().map(|&s| s / domain).collect();
    let row_variances: Vec<T> = second
        .values()
        .iter()
        .zip(&row_means)
        .map(|(&sq, &mean)| sq / domain - mean * mean)
        .collect();
    Ok(MomentStats {
        row_means,
        row_variances,
        sample_size,
        threshold,
    })
}

/// Empirical coverage of the event "every empirical moment is within
/// `epsilon` of its exact value" over independent trials, and the
/// concentration floor `max(0, 1 - trace / (eps^2 n))` it must dominate.
pub fn concentration_experiment<T: Scalar>(
    ruleset: &RuleSet<T>,
    spec: &SketchSpec,
    n: usize,
    trials: usize,
    epsilon: f64,
    seed: u64,
) -> Result<(f64, f64)> {
    if ruleset.n_bits() > 14 {
        return Err(Error::Capacity {
            n_bits: ruleset.n_bits(),
            max: 14,
        });
    }
    if trials == 0 || n == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and trials >= 1".into()));
    }
    let stats = moment_stats(ruleset, spec, T::neg_infinity(), n)?;
    let exact: Vec<f64> = stats.row_means().iter().map(|m| m.to_f64_lossy()).collect();
    let trace = stats.variance_trace().to_f64_lossy();

    let mut covered = 0usize;
    for trial in 0..trials {
        let sample = draw_with_replacement(ruleset, n, mix64(seed ^ mix64(trial as u64)))?;
        let empirical = apply_to_sample(spec, &sample)?;
        let max_deviation = empirical
            .values()
            .iter()
            .zip(&exact)
            .map(|(v, e)| (v.to_f64_lossy() - e).abs())
            .fold(0.0f64, f64::max);
        if max_deviation <= epsilon {
            covered += 1;
        }
    }
    let coverage = covered as f64 / trials as f64;
    let bound = (1.0 - trace / (epsilon * epsilon * n as f64)).max(0.0);
    Ok((coverage, bound))
}

/// Variance split of a thresholded value multiset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceDecomposition<T: Scalar> {
    /// Population variance of the thresholded values (zeros included).
    pub sigma_sq: T,
    /// Fraction of values surviving the threshold.
    pub p: T,
    /// Mean of the surviving group.
    pub mu1: T,
    /// Population variance of the surviving group.
    pub sigma1_sq: T,
}

impl<T: Scalar> VarianceDecomposition<T> {
    /// `p sigma1^2 + mu1^2 p (1 - p)`: the two-group total-variance
    /// recombination, which must equal `sigma_sq`.
    pub fn recomposed(&self) -> T {
        self.p * self.sigma1_sq + self.mu1 * self.mu1 * self.p * (T::one() - self.p)
    }
}

/// Thresholds `values` at `t` (zeroing below), then reports the total
/// population variance together with the surviving-group statistics.
pub fn variance_decomposition<T: Scalar>(values: &[T], t: T) -> Result<VarianceDecomposition<T>> {
    if values.is_empty() {
        return Err(Error::Empty("value set"));
    }
    let n = T::from_usize(values.len()).unwrap();
    let thresholded: Vec<T> = values
        .iter()
        .map(|&v| if v >= t { v } else { T::zero() })
        .collect();
    let mean = thresholded.iter().copied().sum::<T>() / n;
    let sigma_sq = thresholded
        .iter()
        .map(|&v| (v - mean) * (v - mean))
        .sum::<T>()
        / n;

    let survivors: Vec<T> = values.iter().copied().filter(|&v| v >= t).collect();
    let (p, mu1, sigma1_sq) = if survivors.is_empty() {
        (T::zero(), T::zero(), T::zero())
    } else {
        let m = T::from_usize(survivors.len()).unwrap();
        let mu1 = survivors.iter().copied().sum::<T>() / m;
        let var1 = survivors.iter().map(|&v| (v - mu1) * (v - mu1)).sum::<T>() / m;
        (m / n, mu1, var1)
    };
    Ok(VarianceDecomposition {
        sigma_sq,
        p,
        mu1,
        sigma1_sq,
    })
}

/// Closed-form thresholded variance under the exponential value profile
/// `lambda * exp(-lambda x)`: survival fraction `p = -ln(t/lambda)/lambda`
/// with the matching surviving-group mean and variance, recombined by the
/// total-variance split. Valid for `0 < t <= lambda`; for very small `t`
/// the model's `p` exceeds 1 and the output can go negative, which callers
/// report rather than clamp.
pub fn exp_model_variance(lambda: f64, t: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidArgument("lambda must be positive".into()));
    }
    if !(t > 0.0 && t <= lambda) {
        return Err(Error::InvalidArgument(format!(
            "threshold must be in (0, lambda], got {t}"
        )));
    }
    let u = (t / lambda).ln();
    let p = -u / lambda;
    let mu1 = (lambda - t + t * u) / (lambda * lambda);
    let sigma1_sq =
        (lambda * lambda - t * t + 2.0 * t * t * u - t * (lambda + t) * u * u) / lambda.powi(4);
    Ok(p * sigma1_sq + mu1 * mu1 * p * (1.0 - p))
}

/// Shared deviation radius over several problems: twice the largest
/// per-problem `k * sigma / sqrt(n)` with `sigma^2` the variance trace.
pub fn closeness_radius<T: Scalar>(stats_list: &[MomentStats<T>], k: f64) -> Result<f64> {
    if stats_list.is_empty() {
        return Err(Error::Empty("stats list"));
    }
    let mut largest = 0.0f64;
    for stats in stats_list {
        if stats.sample_size() == 0 {
            return Err(Error::InvalidArgument("stats need a sample size".into()));
        }
        let sigma = stats.variance_trace().to_f64_lossy().max(0.0).sqrt();
        let epsilon = k * sigma / (stats.sample_size() as f64).sqrt();
        largest = largest.max(epsilon);
    }
    Ok(2.0 * largest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::random_problem;
    use crate::rng::SplitMix64;
    use crate::sketch::SketchKind;

    fn problem(seed: u64) -> RuleSet<f64> {
        random_problem(10, &[3, 4], 1..=3, 0.5..=2.0, seed).unwrap()
    }

    #[test]
    fn stats_match_direct_enumeration() {
        let p = problem(1);
        let spec = SketchSpec::structured(SketchKind::Duplet, 10).unwrap();
        let stats = moment_stats(&p, &spec, 0.5, 100).unwrap();
        let full = p.full_vector().unwrap();
        // spot-check one row against a plain loop
        let row = 13;
        let (mut s1, mut s2) = (0.0, 0.0);
        for (index, &v) in full.iter().enumerate() {
            let x = crate::bits::BitString::from_index(index as u64, 10).unwrap();
            let tv = if v >= 0.5 { v } else { 0.0 };
            if spec.row_value(row, &x).unwrap() {
                s1 += tv;
                s2 += tv * tv;
            }
        }
        let mean = s1 / 1024.0;
        assert!((stats.row_means()[row] - mean).abs() < 1e-12);
        assert!((stats.row_variances()[row] - (s2 / 1024.0 - mean * mean)).abs() < 1e-12);
    }

    #[test]
    fn coverage_trivial_cases() {
        let p = problem(2);
        let spec = SketchSpec::structured(SketchKind::Duplet, 10).unwrap();
        let (coverage, bound) = concentration_experiment(&p, &spec, 50, 50, 1e9, 3).unwrap();
        assert_eq!(coverage, 1.0);
        assert_eq!(bound, 1.0);

        // huge n makes the floor vacuous but coverage still reported
        let stats = moment_stats(&p, &spec, f64::NEG_INFINITY, 1).unwrap();
        let tiny_eps = (stats.variance_trace() / 4.0).sqrt() * 0.01;
        let (_, bound) = concentration_experiment(&p, &spec, 4, 10, tiny_eps, 3).unwrap();
        assert_eq!(bound, 0.0);
    }

    #[test]
    fn coverage_beats_bound_at_k2() {
        let p = problem(3);
        let spec = SketchSpec::structured(SketchKind::Duplet, 10).unwrap();
        let n = 200;
        let stats = moment_stats(&p, &spec, f64::NEG_INFINITY, n).unwrap();
        let eps = 2.0 * (stats.variance_trace() / n as f64).sqrt();
        let (coverage, bound) = concentration_experiment(&p, &spec, n, 500, eps, 7).unwrap();
        assert!((bound - 0.75).abs() < 1e-12);
        let se = (coverage * (1.0 - coverage) / 500.0)
            .sqrt()
            .max(1.0 / 1000.0);
        assert!(
            coverage >= bound - 3.0 * se,
            "coverage {coverage} bound {bound}"
        );
    }

    #[test]
    fn decomposition_examples() {
        // t = 0 on positive values: p = 1, identity reduces to sigma1
        let d = variance_decomposition::<f64>(&[1.0, 2.0, 3.0], 0.0).unwrap();
        assert_eq!(d.p, 1.0);
        assert!((d.sigma_sq - d.sigma1_sq).abs() < 1e-15);

        let d = variance_decomposition(&[0.0, 0.0, 4.0, 4.0], 1.0).unwrap();
        assert_eq!(d.p, 0.5);
        assert_eq!(d.mu1, 4.0);
        assert_eq!(d.sigma1_sq, 0.0);
        assert_eq!(d.sigma_sq, 4.0);
        assert_eq!(d.recomposed(), 4.0);

        // everything below threshold: degenerate but valid
        let d = variance_decomposition(&[1.0, 2.0], 5.0).unwrap();
        assert_eq!(d.p, 0.0);
        assert_eq!(d.sigma_sq, 0.0);
    }

    #[test]
    fn decomposition_identity_random_sets() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..200 {
            let len = 2 + rng.next_below(64) as usize;
            let values: Vec<f64> = (0..len).map(|_| rng.next_f64() * 10.0).collect();
            let t = rng.next_f64() * 10.0;
            let d = variance_decomposition(&values, t).unwrap();
            let scale = d.sigma_sq.abs().max(1.0);
            assert!((d.sigma_sq - d.recomposed()).abs() / scale < 1e-10);
        }
    }

    #[test]
    fn thresholding_can_reduce_variance_on_exponential_values() {
        // grid search over quantiles finds a variance-reducing threshold
        let mut rng = SplitMix64::new(8);
        for _ in 0..20 {
            let lambda = 0.5 + rng.next_f64() * 2.0;
            let values: Vec<f64> = (0..4000)
                .map(|_| -(1.0 - rng.next_f64()).ln() / lambda)
                .collect();
            let base = variance_decomposition(&values, f64::NEG_INFINITY)
                .unwrap()
                .sigma_sq;
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            let found = (0..100).any(|i| {
                let t = sorted[(i * values.len()) / 100];
                variance_decomposition(&values, t).unwrap().sigma_sq < base
            });
            assert!(found);
        }
    }

    #[test]
    fn exp_model_shape() {
        // vanishes at t = lambda
        for lambda in [0.5, 1.0, 3.0] {
            let v = exp_model_variance(lambda, lambda).unwrap();
            assert!(v.abs() < 1e-12);
        }
        // unique interior maximum on a grid over (0, lambda)
        let lambda = 1.0;
        let grid: Vec<f64> = (1..200).map(|i| lambda * i as f64 / 200.0).collect();
        let values: Vec<f64> = grid
            .iter()
            .map(|&t| exp_model_variance(lambda, t).unwrap())
            .collect();
        let argmax = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(argmax > 0 && argmax < values.len() - 1);
        assert!(values[..argmax].windows(2).all(|w| w[0] <= w[1]));
        assert!(values[argmax..].windows(2).all(|w| w[0] >= w[1]));

        assert!(exp_model_variance(1.0, 0.0).is_err());
        assert!(exp_model_variance(1.0, 1.5).is_err());
    }

    #[test]
    fn closeness_radius_formula() {
        let p = problem(9);
        let spec = SketchSpec::structured(SketchKind::Duplet, 10).unwrap();
        let stats = moment_stats(&p, &spec, 0.0, 100).unwrap();
        let single = closeness_radius(std::slice::from_ref(&stats), 2.0).unwrap();
        let sigma = stats.variance_trace().sqrt();
        assert!((single - 2.0 * 2.0 * sigma / 10.0).abs() < 1e-12);

        // doubling n halves the radius
        let stats4 = moment_stats(&p, &spec, 0.0, 400).unwrap();
        let quarter = closeness_radius(std::slice::from_ref(&stats4), 2.0).unwrap();
        assert!((single / quarter - 2.0).abs() < 1e-12);

        assert!(closeness_radius::<f64>(&[], 2.0).is_err());
    }
}
