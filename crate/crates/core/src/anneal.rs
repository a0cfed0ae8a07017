//! Annealing baseline with an exact query budget.
//!
//! Geometric-cooling Metropolis over `{0,1}^N` with geometric multi-bit
//! flips and independent restarts. The budget counts cost evaluations, not
//! iterations, so benchmark comparisons against the sampling solver use the
//! same currency; the count is exact, including the pilot evaluations used
//! to calibrate the initial temperature.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::problem::{OptimumRecord, RuleSet};
use crate::rng::{mix64, SplitMix64};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct AnnealConfig<T: Scalar> {
    /// Total number of cost evaluations the run may spend.
    pub budget: usize,
    /// Initial temperature; `None` calibrates it as the sample standard
    /// deviation of up to 16 pilot evaluations taken from the budget.
    pub t_initial: Option<T>,
    /// Final temperature; `None` uses `1e-3 * t_initial`.
    pub t_final: Option<T>,
    /// Independent chains splitting the budget evenly.
    pub restarts: usize,
    /// Success probability of the geometric flip-count distribution.
    pub flip_geometric_p: f64,
    pub seed: u64,
}

impl<T: Scalar> AnnealConfig<T> {
    pub fn new(budget: usize, seed: u64) -> Self {
        AnnealConfig {
            budget,
            t_initial: None,
            t_final: None,
            restarts: 2,
            flip_geometric_p: 0.5,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::InvalidArgument("budget must be >= 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("restarts must be >= 1".into()));
        }
        if self.budget < self.restarts {
            return Err(Error::InvalidArgument(format!(
                "budget {} smaller than restarts {}",
                self.budget, self.restarts
            )));
        }
        if !(0.0..=1.0).contains(&self.flip_geometric_p) || self.flip_geometric_p == 0.0 {
            return Err(Error::InvalidArgument(
                "flip_geometric_p must be in (0, 1]".into(),
            ));
        }
        if let Some(t0) = self.t_initial {
            if !(t0 > T::zero() && t0.is_finite()) {
                return Err(Error::InvalidArgument(
                    "t_initial must be positive and finite".into(),
                ));
            }
        }
        if let Some(t1) = self.t_final {
            if !(t1 > T::zero() && t1.is_finite()) {
                return Err(Error::InvalidArgument(
                    "t_final must be positive and finite".into(),
                ));
            }
        }
        if let (Some(t0), Some(t1)) = (self.t_initial, self.t_final) {
            if t1 > t0 {
                return Err(Error::InvalidArgument(
                    "need 0 < t_final <= t_initial".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealOutcome<T: Scalar> {
    /// Best string ever evaluated (not the final chain state) and its cost.
    pub record: OptimumRecord<T>,
    /// Exact number of cost evaluations spent; equals the budget.
    pub evaluations: usize,
}

/// Runs the baseline against an arbitrary cost oracle. Every call to
/// `cost` is counted; the total equals `config.budget` exactly.
pub fn dual_anneal_with<T, F>(
    n_bits: usize,
    mut cost: F,
    config: &AnnealConfig<T>,
) -> Result<AnnealOutcome<T>>
where
    T: Scalar,
    F: FnMut(&BitString) -> T,
{
    config.validate()?;
    if n_bits == 0 || n_bits > crate::bits::MAX_BITS {
        return Err(Error::InvalidArgument(format!("bad n_bits {n_bits}")));
    }
    let domain = 1u64 << n_bits;
    let mut evaluations = 0usize;
    let mut best: Option<(BitString, T)> = None;

    let track = |x: BitString, v: T, best: &mut Option<(BitString, T)>| {
        if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
            *best = Some((x, v));
        }
    };

    // Pilot evaluations calibrate t0 when it was not given.
    let mut master = SplitMix64::new(config.seed);
    let pilot_count = if config.t_initial.is_some() {
        0
    } else {
        16.min(config.budget - config.restarts)
    };
    let mut pilot_values = Vec::with_capacity(pilot_count);
    for _ in 0..pilot_count {
        let x = BitString::from_index(master.next_below(domain), n_bits)?;
        let v = cost(&x);
        evaluations += 1;
        track(x, v, &mut best);
        pilot_values.push(v);
    }
    let t0 = config.t_initial.unwrap_or_else(|| {
        let std = sample_std(&pilot_values);
        if std > T::zero() {
            std
        } else {
            T::one()
        }
    });
    let t1 = config
        .t_final
        .unwrap_or_else(|| t0 * T::from_f64_lossy(1e-3));
    let ratio = t1 / t0;

    let remaining = config.budget - evaluations;
    for chain in 0..config.restarts {
        let chain_budget =
            remaining / config.restarts + usize::from(chain < remaining % config.restarts);
        if chain_budget == 0 {
            continue;
        }
        let mut rng = SplitMix64::new(mix64(config.seed ^ mix64(chain as u64 + 1)));
        let mut x = BitString::from_index(rng.next_below(domain), n_bits)?;
        let mut v = cost(&x);
        evaluations += 1;
        track(x, v, &mut best);

        let steps = chain_budget - 1;
        for step in 0..steps {
            let temp = t0 * ratio.powf(T::from_f64_lossy(step as f64 / steps as f64));
            let flips = rng
                .next_geometric(config.flip_geometric_p)
                .min(n_bits as u64) as usize;
            let mut mask = 0u64;
            for pos in rng.sample_distinct(n_bits as u64, flips) {
                mask |= 1u64 << pos;
            }
            let candidate = x.xor_mask(mask);
            let cv = cost(&candidate);
            evaluations += 1;
            track(candidate, cv, &mut best);
            let accept = cv >= v || {
                let delta = (cv - v) / temp;
                rng.next_f64() < delta.exp().to_f64_lossy()
            };
            if accept {
                x = candidate;
                v = cv;
            }
        }
    }

    debug_assert_eq!(evaluations, config.budget);
    let (argmax, value) = best.expect("budget >= 1 evaluated at least one point");
    Ok(AnnealOutcome {
        record: OptimumRecord { argmax, value },
        evaluations,
    })
}

/// Baseline over a rule-set cost function.
pub fn dual_anneal<T: Scalar>(
    ruleset: &RuleSet<T>,
    config: &AnnealConfig<T>,
) -> Result<AnnealOutcome<T>> {
    dual_anneal_with(
        ruleset.n_bits(),
        |x| ruleset.evaluate(x).expect("matching lengths"),
        config,
    )
}

fn sample_std<T: Scalar>(values: &[T]) -> T {
    if values.len() < 2 {
        return T::zero();
    }
    let n = T::from_usize(values.len()).unwrap();
    let mean = values.iter().copied().sum::<T>() / n;
    let ss = values.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>();
    (ss / (n - T::one())).sqrt()
}
