//! Substring-occurrence counting: closed forms and brute-force oracles.
//!
//! Counts over length-N binary strings of: at least one `001` occurrence
//! (`count_e`), exactly one occurrence (`count_s`, recursive and explicit
//! inclusion-exclusion forms), exactly one occurrence with exactly L `00`
//! substrings (`count_z`, Fibonacci products), and strings avoiding `00`
//! altogether. `p_realize` combines them into the probability that a `00`
//! pair picked uniformly inside a single-occurrence string is followed by
//! a `1`. Brute-force enumerations of the same quantities live alongside
//! as oracles.

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Fibonacci with f(1) = f(2) = 1 and f(k) = 0 for k <= 0.
pub fn fib(k: i64) -> u64 {
    if k <= 0 {
        return 0;
    }
    let (mut a, mut b) = (1u64, 1u64); // f(1), f(2)
    for _ in 2..k {
        let c = a + b;
        a = b;
        b = c;
    }
    if k == 1 {
        1
    } else {
        b
    }
}

fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Strings of length `n` with no `00` substring, and those among them that
/// end in `1`: `(fib(n + 2), fib(n + 1))`.
pub fn count_no_00(n: usize) -> (u64, u64) {
    (fib(n as i64 + 2), fib(n as i64 + 1))
}

/// Strings of length `n` containing at least one `001`, by
/// inclusion-exclusion over non-overlapping placements.
pub fn count_e(n: usize) -> u64 {
    let n = n as i64;
    let mut total: i128 = 0;
    for k in 1..=(n / 3) {
        let term = i128::from(binomial(n - 2 * k, k)) << (n - 3 * k);
        total += if k % 2 == 1 { term } else { -term };
    }
    debug_assert!(total >= 0);
    total as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SCountMode {
    Recursive,
    Explicit,
}

/// Strings of length `n` containing exactly one `001`.
pub fn count_s(n: usize, mode: SCountMode) -> u64 {
    match mode {
        SCountMode::Explicit => {
            let n = n as i64;
            let mut total: i128 = 0;
            for k in 1..=(n / 3) {
                let term =
                    (i128::from(binomial(n - 2 * k, k)) * i128::from(k as u64)) << (n - 3 * k);
                total += if k % 2 == 1 { term } else { -term };
            }
            debug_assert!(total >= 0);
            total as u64
        }
        SCountMode::Recursive => {
            // s(m+1) = 2 s(m) - s(m-2) + 2^(m-2) - e(m-2), seeded
            // s(1) = s(2) = 0, s(3) = 1.
            if n < 3 {
                return 0;
            }
            let mut s = vec![0i128; n.max(3) + 1];
            s[3] = 1;
            for m in 3..n {
                s[m + 1] = 2 * s[m] - s[m - 2] + (1i128 << (m - 2)) - i128::from(count_e(m - 2));
            }
            debug_assert!(s[n] >= 0);
            s[n] as u64
        }
    }
}

/// Strings of length `n` with exactly one `001` and exactly `l`
/// occurrences of `00`, as sums of Fibonacci products over the placement
/// of the `001` occurrence.
pub fn count_z(n: usize, l: usize) -> u64 {
    let (n, l) = (n as i64, l as i64);
    let mut total = 0u64;
    for k in 1..=(n - 2) {
        total += fib(k - l + 1) * fib(n - k);
        for ell in 2..=l {
            total += fib(k - l + ell) * fib(n - ell - k - 1);
        }
    }
    total
}

/// The two-term specialization for `l = 2`.
pub fn count_z2_two_term(n: usize) -> u64 {
    let n = n as i64;
    (1..=(n - 2))
        .map(|k| fib(k - 1) * fib(n - k) + fib(k) * fib(n - k - 3))
        .sum()
}

/// Probability that a uniformly chosen `00` occurrence inside a uniformly
/// chosen single-`001` string of length `n` is followed by `1`:
/// `sum over l of (1/l) z_l / s_n`.
pub fn p_realize(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "p_realize needs n >= 3, got {n}"
        )));
    }
    let s = count_s(n, SCountMode::Explicit) as f64;
    let mut total = 0.0;
    for l in 1..n {
        total += count_z(n, l) as f64 / l as f64;
    }
    Ok(total / s)
}

/// All the occurrence counts for one string length in a single record.
#[derive(Debug, Clone, PartialEq)]
pub struct CountTable {
    pub n: usize,
    /// Strings with at least one `001`.
    pub e: u64,
    /// Strings with exactly one `001`.
    pub s: u64,
    /// `z[l]` = strings with exactly one `001` and exactly `l + 1`
    /// occurrences of `00` (index 0 holds `l = 1`).
    pub z: Vec<u64>,
    pub p_realize: f64,
}

impl CountTable {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "count table needs n >= 3, got {n}"
            )));
        }
        let s = count_s(n, SCountMode::Explicit);
        let z: Vec<u64> = (1..n).map(|l| count_z(n, l)).collect();
        debug_assert_eq!(z.iter().sum::<u64>(), s);
        Ok(CountTable {
            n,
            e: count_e(n),
            s,
            z,
            p_realize: p_realize(n)?,
        })
    }

    pub fn z_at(&self, l: usize) -> u64 {
        self.z.get(l.wrapping_sub(1)).copied().unwrap_or(0)
    }
}

// --- brute-force oracles ---------------------------------------------------

fn pattern(bits: &str) -> BitString {
    bits.parse().expect("valid pattern literal")
}

/// Enumerated counterpart of `count_no_00`.
pub fn brute_count_no_00(n: usize) -> (u64, u64) {
    let double_zero = pattern("00");
    let mut all = 0u64;
    let mut ending_one = 0u64;
    for x in BitString::all(n) {
        if x.count_occurrences(&double_zero) == 0 {
            all += 1;
            if x.bit(n - 1) {
                ending_one += 1;
            }
        }
    }
    (all, ending_one)
}

/// Enumerated counterpart of `count_e`.
pub fn brute_count_e(n: usize) -> u64 {
    let rule = pattern("001");
    BitString::all(n)
        .filter(|x| x.count_occurrences(&rule) >= 1)
        .count() as u64
}

/// Enumerated counterpart of `count_s`.
pub fn brute_count_s(n: usize) -> u64 {
    let rule = pattern("001");
    BitString::all(n)
        .filter(|x| x.count_occurrences(&rule) == 1)
        .count() as u64
}

/// Enumerated counterpart of `count_z`.
pub fn brute_count_z(n: usize, l: usize) -> u64 {
    let rule = pattern("001");
    let double_zero = pattern("00");
    BitString::all(n)
        .filter(|x| x.count_occurrences(&rule) == 1 && x.count_occurrences(&double_zero) == l)
        .count() as u64
}

/// Enumerated counterpart of `p_realize`: over all single-`001` strings,
/// the expected fraction of `00` occurrences that are followed by `1`.
pub fn brute_p_realize(n: usize) -> f64 {
    let rule = pattern("001");
    let double_zero = pattern("00");
    let mut total = 0.0;
    let mut strings = 0u64;
    for x in BitString::all(n) {
        if x.count_occurrences(&rule) != 1 {
            continue;
        }
        strings += 1;
        let mut zero_pairs = 0u32;
        let mut followed_by_one = 0u32;
        for start in 0..(n - 1) {
            if x.window(start, 2) == double_zero.index() {
                zero_pairs += 1;
                if start + 2 < n && x.bit(start + 2) {
                    followed_by_one += 1;
                }
            }
        }
        total += f64::from(followed_by_one) / f64::from(zero_pairs);
    }
    total / strings as f64
}
