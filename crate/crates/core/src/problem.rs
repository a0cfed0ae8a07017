//! Rule-compressible cost functions over bit strings.
//!
//! A problem is a list of (pattern, reward) rules over strings of length
//! `n_bits`; the cost of a string is the reward-weighted number of pattern
//! occurrences across all window positions. The whole `2^N`-dimensional
//! cost vector is determined by this short description.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::ops::RangeInclusive;
use std::path::Path;

/// Dense vectors over the full domain are capped at this many bits.
pub const MAX_FULL_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct Rule<T: Scalar> {
    pub pattern: BitString,
    pub reward: T,
}

impl<T: Scalar> Rule<T> {
    pub fn new(pattern: BitString, reward: T) -> Self {
        Rule { pattern, reward }
    }
}

/// A compressed problem description: the ambient string length plus the
/// rule list. Duplicate patterns are merged additively at construction
/// (the cost is a sum, so this preserves every value).
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSet<T: Scalar> {
    n_bits: usize,
    rules: Vec<Rule<T>>,
}

/// Result of an argmax search: the maximizing string and its cost.
///
/// Exhaustive searches break ties toward the lexicographically smallest
/// string; heuristic searches report the first best string they evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimumRecord<T: Scalar> {
    pub argmax: BitString,
    pub value: T,
}

impl<T: Scalar> RuleSet<T> {
    pub fn new(n_bits: usize, rules: Vec<Rule<T>>) -> Result<Self> {
        if n_bits == 0 || n_bits > crate::bits::MAX_BITS {
            return Err(Error::InvalidArgument(format!(
                "n_bits must be in 1..={}, got {n_bits}",
                crate::bits::MAX_BITS
            )));
        }
        let mut merged: Vec<Rule<T>> = Vec::with_capacity(rules.len());
        for rule in rules {
            if rule.pattern.len() > n_bits {
                return Err(Error::InvalidArgument(format!(
                    "rule pattern \"{}\" longer than n_bits = {n_bits}",
                    rule.pattern
                )));
            }
            if !rule.reward.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "rule reward {} is not finite",
                    rule.reward
                )));
            }
            match merged.iter_mut().find(|r| r.pattern == rule.pattern) {
                Some(existing) => existing.reward += rule.reward,
                None => merged.push(rule),
            }
        }
        Ok(RuleSet {
            n_bits,
            rules: merged,
        })
    }

    #[inline]
    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn rules(&self) -> &[Rule<T>] {
        &self.rules
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// Cost of `x`: for every rule, each window position where the pattern
    /// occurs contributes the rule's reward.
    pub fn evaluate(&self, x: &BitString) -> Result<T> {
        if x.len() != self.n_bits {
            return Err(Error::LengthMismatch {
                expected: self.n_bits,
                actual: x.len(),
            });
        }
        let mut total = T::zero();
        for rule in &self.rules {
            let occurrences = x.count_occurrences(&rule.pattern);
            if occurrences > 0 {
                total += rule.reward * T::from_usize(occurrences).unwrap();
            }
        }
        Ok(total)
    }

    /// The full cost vector: entry at big-endian index `x` is
    /// `evaluate(x)`. Capped at `MAX_FULL_BITS`.
    pub fn full_vector(&self) -> Result<Vec<T>> {
        if self.n_bits > MAX_FULL_BITS {
            return Err(Error::Capacity {
                n_bits: self.n_bits,
                max: MAX_FULL_BITS,
            });
        }
        BitString::all(self.n_bits)
            .map(|x| self.evaluate(&x))
            .collect()
    }

    /// Exhaustive maximization; ties break to the lexicographically
    /// smallest string.
    pub fn brute_force_argmax(&self) -> Result<OptimumRecord<T>> {
        if self.n_bits > MAX_FULL_BITS {
            return Err(Error::Capacity {
                n_bits: self.n_bits,
                max: MAX_FULL_BITS,
            });
        }
        let mut best = OptimumRecord {
            argmax: BitString::zeros(self.n_bits)?,
            value: self.evaluate(&BitString::zeros(self.n_bits)?)?,
        };
        for x in BitString::all(self.n_bits).skip(1) {
            let value = self.evaluate(&x)?;
            if value > best.value {
                best = OptimumRecord { argmax: x, value };
            }
        }
        Ok(best)
    }

    pub fn to_json(&self) -> String {
        let file = ProblemFile {
            n_bits: self.n_bits,
            rules: self
                .rules
                .iter()
                .map(|r| RuleEntry {
                    pattern: r.pattern.to_string(),
                    reward: r.reward.to_f64_lossy(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("problem serialization")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(json)?;
        let rules = file
            .rules
            .iter()
            .map(|e| {
                Ok(Rule::new(
                    e.pattern.parse::<BitString>()?,
                    T::from_f64_lossy(e.reward),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        RuleSet::new(file.n_bits, rules)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let json = std::fs::read_to_string(path)?;
        Self::from_json(&json)
    }
}

/// On-disk problem format:
/// `{"n_bits": 12, "rules": [{"pattern": "0110", "reward": 1.5}, ...]}`.
#[derive(Serialize, Deserialize)]
struct ProblemFile {
    n_bits: usize,
    rules: Vec<RuleEntry>,
}

#[derive(Serialize, Deserialize)]
struct RuleEntry {
    pattern: String,
    reward: f64,
}

/// Draws a random problem instance.
///
/// For each length in `rule_lengths`, the number of rules is uniform in
/// `count_range` (capped at the number of available patterns) and the
/// patterns of that length are drawn uniformly without replacement, so no
/// merging is needed and the rule count is exactly the sum of the drawn
/// counts. Rewards are uniform in `reward_range`. Deterministic per seed.
pub fn random_problem<T: Scalar>(
    n_bits: usize,
    rule_lengths: &[usize],
    count_range: RangeInclusive<usize>,
    reward_range: RangeInclusive<f64>,
    seed: u64,
) -> Result<RuleSet<T>> {
    if count_range.is_empty() {
        return Err(Error::InvalidArgument("empty count range".into()));
    }
    if reward_range.is_empty() {
        return Err(Error::InvalidArgument("empty reward range".into()));
    }
    for &k in rule_lengths {
        if k == 0 || k > n_bits {
            return Err(Error::InvalidArgument(format!(
                "rule length {k} not in 1..={n_bits}"
            )));
        }
    }
    let mut rng = SplitMix64::new(seed);
    let (lo, hi) = (*count_range.start(), *count_range.end());
    let mut rules = Vec::new();
    for &k in rule_lengths {
        let mut count = lo + rng.next_below((hi - lo + 1) as u64) as usize;
        count = count.min(1usize << k.min(20));
        for index in rng.sample_distinct(1u64 << k, count) {
            let reward = rng.next_range_f64(*reward_range.start(), *reward_range.end());
            rules.push(Rule::new(
                BitString::from_index(index, k)?,
                T::from_f64_lossy(reward),
            ));
        }
    }
    RuleSet::new(n_bits, rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn single(n: usize, pattern: &str, reward: f64) -> RuleSet<f64> {
        RuleSet::new(n, vec![Rule::new(bs(pattern), reward)]).unwrap()
    }

    /// Independent oracle: evaluate by scanning the textual form.
    fn substring_scan(ruleset: &RuleSet<f64>, x: &BitString) -> f64 {
        let text = x.to_string();
        let mut total = 0.0;
        for rule in ruleset.rules() {
            let pat = rule.pattern.to_string();
            for start in 0..=(text.len() - pat.len()) {
                if text[start..start + pat.len()] == pat {
                    total += rule.reward;
                }
            }
        }
        total
    }

    #[test]
    fn evaluate_examples() {
        let r = single(5, "001", 1.0);
        assert_eq!(r.evaluate(&bs("00100")).unwrap(), 1.0);
        assert_eq!(substring_scan(&r, &bs("00100")), 1.0);

        let r = single(5, "000", 2.0);
        assert_eq!(r.evaluate(&bs("00000")).unwrap(), 6.0);
        assert_eq!(substring_scan(&r, &bs("00000")), 6.0);

        let empty = RuleSet::<f64>::new(5, vec![]).unwrap();
        assert_eq!(empty.evaluate(&bs("10101")).unwrap(), 0.0);

        assert!(r.evaluate(&bs("0000")).is_err());
    }

    #[test]
    fn full_vector_examples() {
        let empty = RuleSet::<f64>::new(2, vec![]).unwrap();
        assert_eq!(empty.full_vector().unwrap(), vec![0.0; 4]);

        let r = single(3, "001", 1.0);
        let v = r.full_vector().unwrap();
        for (i, &val) in v.iter().enumerate() {
            assert_eq!(val, if i == 1 { 1.0 } else { 0.0 });
        }

        let r = single(4, "001", 1.0);
        let v = r.full_vector().unwrap();
        assert_eq!(v.iter().sum::<f64>(), 4.0);
    }

    #[test]
    fn brute_force_examples() {
        let r = single(4, "01", 1.0);
        let best = r.brute_force_argmax().unwrap();
        assert_eq!(best.argmax.to_string(), "0101");
        assert_eq!(best.value, 2.0);

        let r = single(3, "000", 1.0);
        let best = r.brute_force_argmax().unwrap();
        assert_eq!(best.argmax.to_string(), "000");
        assert_eq!(best.value, 1.0);

        let empty = RuleSet::<f64>::new(3, vec![]).unwrap();
        let best = empty.brute_force_argmax().unwrap();
        assert_eq!(best.argmax.to_string(), "000");
        assert_eq!(best.value, 0.0);
    }

    #[test]
    fn duplicate_rules_merge_additively() {
        let merged =
            RuleSet::<f64>::new(5, vec![Rule::new(bs("01"), 1.0), Rule::new(bs("01"), 2.5)])
                .unwrap();
        assert_eq!(merged.rule_count(), 1);
        let reference = single(5, "01", 3.5);
        for x in BitString::all(5) {
            assert_eq!(
                merged.evaluate(&x).unwrap(),
                reference.evaluate(&x).unwrap()
            );
        }
    }

    #[test]
    fn random_problem_contracts() {
        let p: RuleSet<f64> = random_problem(12, &[4, 5, 6], 1..=5, 0.5..=2.0, 7).unwrap();
        assert!((3..=15).contains(&p.rule_count()), "{}", p.rule_count());
        for rule in p.rules() {
            assert!((0.5..=2.0).contains(&rule.reward));
            assert!([4, 5, 6].contains(&rule.pattern.len()));
        }
        let q: RuleSet<f64> = random_problem(12, &[4, 5, 6], 1..=5, 0.5..=2.0, 7).unwrap();
        assert_eq!(p, q);

        assert!(random_problem::<f64>(3, &[4], 1..=2, 0.5..=2.0, 0).is_err());
    }

    #[test]
    fn json_round_trip_is_stable() {
        let p: RuleSet<f64> = random_problem(12, &[4, 5, 6], 1..=3, 0.5..=2.0, 3).unwrap();
        let json = p.to_json();
        let q = RuleSet::<f64>::from_json(&json).unwrap();
        assert_eq!(p, q);
        assert_eq!(json, q.to_json());
    }

    #[test]
    fn brute_force_dominates_random_points() {
        let p: RuleSet<f64> = random_problem(10, &[3, 4], 1..=3, 0.5..=2.0, 5).unwrap();
        let best = p.brute_force_argmax().unwrap();
        let mut rng = crate::rng::SplitMix64::new(99);
        for _ in 0..1000 {
            let x = BitString::from_index(rng.next_below(1 << 10), 10).unwrap();
            assert!(best.value >= p.evaluate(&x).unwrap());
        }
    }

    proptest! {
        /// evaluate agrees with the full vector at every index.
        #[test]
        fn evaluate_matches_full_vector(seed in 0u64..50) {
            let n = 6 + (seed % 4) as usize;
            let p: RuleSet<f64> = random_problem(n, &[2, 3], 1..=3, 0.5..=2.0, seed).unwrap();
            let v = p.full_vector().unwrap();
            for x in BitString::all(n) {
                prop_assert_eq!(p.evaluate(&x).unwrap(), v[x.index() as usize]);
            }
        }

        /// evaluate agrees with the textual substring-scan oracle.
        #[test]
        fn evaluate_matches_substring_scan(seed in 0u64..50, index in 0u64..1024) {
            let p: RuleSet<f64> = random_problem(10, &[3, 4], 1..=3, 0.5..=2.0, seed).unwrap();
            let x = BitString::from_index(index, 10).unwrap();
            let direct = p.evaluate(&x).unwrap();
            let scanned = substring_scan(&p, &x);
            prop_assert!((direct - scanned).abs() < 1e-12);
        }
    }
}
