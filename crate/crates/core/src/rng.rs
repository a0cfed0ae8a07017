//! Deterministic pseudo-randomness.
//!
//! Every stochastic component of the crate (problem generation, uniform
//! sampling, annealing moves, random sketch rows, benchmark seed derivation)
//! is driven by SplitMix64 so that a single `u64` seed reproduces results
//! bit-for-bit on any platform.

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer applied to `x + gamma`. Stateless; used both as the
/// generator step and as a mixing function for counter-based hashing.
#[inline]
pub fn mix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a stream seed that is stable across runs and platforms.
///
/// Used by the benchmark harness to give every (method, n, trial) cell its
/// own independent seed from one master seed.
pub fn stable_hash(master: u64, tag: &str, a: u64, b: u64) -> u64 {
    let mut h = mix64(master);
    for &byte in tag.as_bytes() {
        h = mix64(h ^ u64::from(byte));
    }
    h = mix64(h ^ a);
    mix64(h ^ b)
}

/// Small deterministic generator with the helpers the crate needs.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent child stream; `i` distinguishes siblings.
    pub fn child(&self, i: u64) -> Self {
        SplitMix64::new(mix64(self.state ^ mix64(i)))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unbiased uniform in `[0, bound)` (Lemire rejection).
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "next_below bound must be positive");
        loop {
            let x = self.next_u64();
            let m = u128::from(x) * u128::from(bound);
            let low = m as u64;
            if low < bound {
                let threshold = bound.wrapping_neg() % bound;
                if low < threshold {
                    continue;
                }
            }
            return (m >> 64) as u64;
        }
    }

    /// Uniform in `[lo, hi]`.
    pub fn next_range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Geometric on {1, 2, ...} with success probability `p in (0, 1]`.
    pub fn next_geometric(&mut self, p: f64) -> u64 {
        assert!(p > 0.0 && p <= 1.0, "geometric p must be in (0, 1]");
        if p >= 1.0 {
            return 1;
        }
        let u = loop {
            let u = self.next_f64();
            if u > 0.0 {
                break u;
            }
        };
        let k = (u.ln() / (1.0 - p).ln()).floor() as u64;
        1 + k
    }

    /// `count` distinct values from `[0, bound)`, in selection order
    /// (sparse partial Fisher-Yates, O(count) memory).
    pub fn sample_distinct(&mut self, bound: u64, count: usize) -> Vec<u64> {
        assert!(
            count as u64 <= bound,
            "cannot draw {count} distinct from {bound}"
        );
        let mut swaps: std::collections::HashMap<u64, u64> = std::collections::HashMap::new();
        let mut out = Vec::with_capacity(count);
        for j in 0..count as u64 {
            let r = j + self.next_below(bound - j);
            let picked = *swaps.get(&r).unwrap_or(&r);
            let jth = *swaps.get(&j).unwrap_or(&j);
            swaps.insert(r, jth);
            out.push(picked);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_stream() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn next_below_in_range() {
        let mut rng = SplitMix64::new(7);
        for bound in [1u64, 2, 3, 10, 1 << 20] {
            for _ in 0..200 {
                assert!(rng.next_below(bound) < bound);
            }
        }
    }

    #[test]
    fn sample_distinct_is_distinct_and_complete() {
        let mut rng = SplitMix64::new(3);
        let picks = rng.sample_distinct(16, 16);
        let mut sorted = picks.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..16).collect::<Vec<_>>());
    }

    #[test]
    fn geometric_mean_close_to_inverse_p() {
        let mut rng = SplitMix64::new(11);
        let n = 20_000;
        let mean = (0..n).map(|_| rng.next_geometric(0.5) as f64).sum::<f64>() / n as f64;
        assert!((mean - 2.0).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn stable_hash_distinguishes_inputs() {
        let h = stable_hash(1, "quad", 50, 0);
        assert_ne!(h, stable_hash(1, "quad", 50, 1));
        assert_ne!(h, stable_hash(1, "quint", 50, 0));
        assert_ne!(h, stable_hash(2, "quad", 50, 0));
        assert_eq!(h, stable_hash(1, "quad", 50, 0));
    }
}
