//! Uniform sampling of the cost function and hard thresholding.
//!
//! A sample is the only view of the cost function the solver gets; its size
//! is the query budget. Thresholding removes low-value pairs but keeps the
//! pre-threshold size, which stays the normalization anchor for sketches so
//! that thresholding only removes mass and never rescales.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::problem::RuleSet;
use crate::rng::SplitMix64;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Sample<T: Scalar> {
    n_bits: usize,
    pairs: Vec<(BitString, T)>,
    pre_threshold_size: usize,
}

impl<T: Scalar> Sample<T> {
    #[inline]
    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn pairs(&self) -> &[(BitString, T)] {
        &self.pairs
    }

    /// Number of cost queries behind this sample (unchanged by thresholding).
    #[inline]
    pub fn pre_threshold_size(&self) -> usize {
        self.pre_threshold_size
    }

    /// Retains pairs with value >= t. Idempotent for a fixed t.
    pub fn threshold(&self, t: T) -> Sample<T> {
        Sample {
            n_bits: self.n_bits,
            pairs: self
                .pairs
                .iter()
                .filter(|(_, v)| *v >= t)
                .cloned()
                .collect(),
            pre_threshold_size: self.pre_threshold_size,
        }
    }

    /// Nearest-rank q-quantile of the positive sample values; `q = 0`
    /// yields 0 (threshold nothing). With no positive values the quantile
    /// is 0 as well.
    pub fn quantile_threshold(&self, q: f64) -> Result<T> {
        if self.pairs.is_empty() {
            return Err(Error::Empty("sample"));
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidArgument(format!(
                "quantile must be in [0, 1], got {q}"
            )));
        }
        if q == 0.0 {
            return Ok(T::zero());
        }
        let mut positives: Vec<T> = self
            .pairs
            .iter()
            .map(|&(_, v)| v)
            .filter(|v| *v > T::zero())
            .collect();
        if positives.is_empty() {
            return Ok(T::zero());
        }
        positives.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        let rank = (q * positives.len() as f64).ceil() as usize;
        Ok(positives[rank.clamp(1, positives.len()) - 1])
    }

    /// Best pair by value, ties to the earliest drawn. Fallback answer when
    /// thresholding leaves nothing to sketch.
    pub fn best_pair(&self) -> Option<(BitString, T)> {
        self.pairs
            .iter()
            .copied()
            .reduce(|best, cur| if cur.1 > best.1 { cur } else { best })
    }

    /// Assembles a sample directly from pairs. Intended for tests and for
    /// oracle constructions; `draw_uniform` is the production path.
    pub fn from_pairs(
        n_bits: usize,
        pairs: Vec<(BitString, T)>,
        pre_threshold_size: usize,
    ) -> Result<Self> {
        for (x, _) in &pairs {
            if x.len() != n_bits {
                return Err(Error::LengthMismatch {
                    expected: n_bits,
                    actual: x.len(),
                });
            }
        }
        if pairs.len() > pre_threshold_size {
            return Err(Error::InvalidArgument(
                "pre_threshold_size smaller than pair count".into(),
            ));
        }
        Ok(Sample {
            n_bits,
            pairs,
            pre_threshold_size,
        })
    }

    /// The whole domain in index order, one query per point.
    pub fn full(ruleset: &RuleSet<T>) -> Result<Self> {
        let n_bits = ruleset.n_bits();
        if n_bits > crate::problem::MAX_FULL_BITS {
            return Err(Error::Capacity {
                n_bits,
                max: crate::problem::MAX_FULL_BITS,
            });
        }
        let pairs = BitString::all(n_bits)
            .map(|x| Ok((x, ruleset.evaluate(&x)?)))
            .collect::<Result<Vec<_>>>()?;
        let size = pairs.len();
        Sample::from_pairs(n_bits, pairs, size)
    }
}

/// Draws `n` distinct strings uniformly without replacement and evaluates
/// the cost at each: exactly `n` cost queries. Deterministic per seed.
pub fn draw_uniform<T: Scalar>(ruleset: &RuleSet<T>, n: usize, seed: u64) -> Result<Sample<T>> {
    let n_bits = ruleset.n_bits();
    let domain = 1u64 << n_bits;
    if n == 0 || n as u64 > domain {
        return Err(Error::InvalidArgument(format!(
            "sample size {n} not in 1..=2^{n_bits}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let pairs = rng
        .sample_distinct(domain, n)
        .into_iter()
        .map(|index| {
            let x = BitString::from_index(index, n_bits)?;
            Ok((x, ruleset.evaluate(&x)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Sample::from_pairs(n_bits, pairs, n)
}

/// I.i.d. variant used by the Monte-Carlo concentration analysis, whose
/// tail bounds assume independent draws. Benchmarks default to
/// `draw_uniform`.
pub fn draw_with_replacement<T: Scalar>(
    ruleset: &RuleSet<T>,
    n: usize,
    seed: u64,
) -> Result<Sample<T>> {
    let n_bits = ruleset.n_bits();
    let domain = 1u64 << n_bits;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sample size must be positive".into(),
        ));
    }
    let mut rng = SplitMix64::new(seed);
    let pairs = (0..n)
        .map(|_| {
            let x = BitString::from_index(rng.next_below(domain), n_bits)?;
            Ok((x, ruleset.evaluate(&x)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Sample::from_pairs(n_bits, pairs, n)
}
