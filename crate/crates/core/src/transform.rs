//! Embedding of rule patterns into the full optimization space.
//!
//! `f_transform(a, N)` produces the integer vector whose entry at index `x`
//! is the number of window positions where the pattern `a` occurs in `x`.
//! The cost vector of a rule set is the reward-weighted sum of these
//! transforms, so their algebra (norms, recursion, pairwise separation)
//! controls how distinguishable problems are. All quantities here are exact
//! integers except the closed-form separation bound.

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Dense transform vectors are capped at this many bits.
pub const MAX_TRANSFORM_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformVector {
    n_bits: usize,
    pattern_length: usize,
    values: Vec<i64>,
}

impl TransformVector {
    #[inline]
    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    #[inline]
    pub fn pattern_length(&self) -> usize {
        self.pattern_length
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn l1_norm(&self) -> i64 {
        // Entries are occurrence counts, all >= 0.
        self.values.iter().sum()
    }

    pub fn l2_norm_squared(&self) -> i64 {
        self.values.iter().map(|&v| v * v).sum()
    }

    pub fn inner_product(&self, other: &TransformVector) -> Result<i64> {
        self.check_compatible(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a * b)
            .sum())
    }

    fn check_compatible(&self, other: &TransformVector) -> Result<()> {
        if self.n_bits != other.n_bits {
            return Err(Error::LengthMismatch {
                expected: self.n_bits,
                actual: other.n_bits,
            });
        }
        Ok(())
    }
}

fn check_capacity(pattern: &BitString, n_bits: usize) -> Result<()> {
    if n_bits > MAX_TRANSFORM_BITS {
        return Err(Error::Capacity {
            n_bits,
            max: MAX_TRANSFORM_BITS,
        });
    }
    if pattern.len() > n_bits {
        return Err(Error::InvalidArgument(format!(
            "pattern \"{pattern}\" longer than n_bits = {n_bits}"
        )));
    }
    Ok(())
}

/// Direct construction: entry at `x` counts the window positions where
/// `pattern` occurs in `x`.
pub fn f_transform(pattern: &BitString, n_bits: usize) -> Result<TransformVector> {
    check_capacity(pattern, n_bits)?;
    let values = BitString::all(n_bits)
        .map(|x| x.count_occurrences(pattern) as i64)
        .collect();
    Ok(TransformVector {
        n_bits,
        pattern_length: pattern.len(),
        values,
    })
}

/// Recursive construction: start from the indicator vector at `pattern`
/// (the length-k base case, where the transform is the identity), then per
/// added bit stack two copies and add one to every entry whose index starts
/// with the pattern. Must agree with `f_transform` exactly.
pub fn f_transform_recursive(pattern: &BitString, n_bits: usize) -> Result<TransformVector> {
    check_capacity(pattern, n_bits)?;
    let k = pattern.len();
    let mut values = vec![0i64; 1 << k];
    values[pattern.index() as usize] = 1;
    for n in k..n_bits {
        let mut next = Vec::with_capacity(values.len() * 2);
        next.extend_from_slice(&values);
        next.extend_from_slice(&values);
        let block = 1usize << (n + 1 - k);
        let start = (pattern.index() as usize) << (n + 1 - k);
        for entry in &mut next[start..start + block] {
            *entry += 1;
        }
        values = next;
    }
    Ok(TransformVector {
        n_bits,
        pattern_length: k,
        values,
    })
}

/// Closed form for the l1 norm of any length-k pattern transformed into
/// k + l bits: `2^l * (l + 1)`. Pattern-independent.
pub fn l1_norm_explicit(k: usize, l: u32) -> Result<i64> {
    if k == 0 {
        return Err(Error::InvalidArgument("pattern length must be >= 1".into()));
    }
    if l >= 57 {
        return Err(Error::InvalidArgument(format!("l = {l} overflows i64")));
    }
    Ok((1i64 << l) * (i64::from(l) + 1))
}

/// Squared Euclidean distance between the transforms of two equal-length
/// patterns, computed entrywise. The squared form keeps everything in
/// integer arithmetic.
pub fn distance_squared(a: &BitString, b: &BitString, n_bits: usize) -> Result<i64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let fa = f_transform(a, n_bits)?;
    let fb = f_transform(b, n_bits)?;
    Ok(fa
        .values
        .iter()
        .zip(&fb.values)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum())
}

/// Companion quantities for the squared distance.
///
/// `polarization` (self_a + self_b - 2 ip) always equals `direct`. The
/// single-norm form `2 (self_a - ip)` and the min-overlap count are
/// diagnostics: they match `direct` only when both self inner products
/// agree, respectively only when no index is covered more than once by
/// both patterns; the verification suite reports where they diverge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceDiagnostics {
    pub direct: i64,
    pub self_a: i64,
    pub self_b: i64,
    pub inner_product: i64,
    /// Sum over shared support of `min(F(a)[x], F(b)[x])`.
    pub common_min: i64,
}

impl DistanceDiagnostics {
    pub fn polarization(&self) -> i64 {
        self.self_a + self.self_b - 2 * self.inner_product
    }

    /// `2 [ ||F(a)||^2 - <F(a), F(b)> ]` (assumes pattern-independent
    /// self inner product, which does not hold for every pattern).
    pub fn single_norm_form(&self) -> i64 {
        2 * (self.self_a - self.inner_product)
    }

    /// Same shape with the min-overlap count in place of the inner product.
    pub fn min_form(&self) -> i64 {
        2 * (self.self_a - self.common_min)
    }
}

pub fn distance_diagnostics(
    a: &BitString,
    b: &BitString,
    n_bits: usize,
) -> Result<DistanceDiagnostics> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let fa = f_transform(a, n_bits)?;
    let fb = f_transform(b, n_bits)?;
    let mut direct = 0;
    let mut common_min = 0;
    for (&x, &y) in fa.values.iter().zip(&fb.values) {
        direct += (x - y) * (x - y);
        common_min += x.min(y);
    }
    Ok(DistanceDiagnostics {
        direct,
        self_a: fa.l2_norm_squared(),
        self_b: fb.l2_norm_squared(),
        inner_product: fa.inner_product(&fb)?,
        common_min,
    })
}

/// Closed-form lower bound on the squared separation of two distinct
/// length-k patterns embedded into k + l bits (even/odd k branches). May
/// be negative for small k, in which case it is returned unchanged: a
/// vacuously true bound.
pub fn l2_lower_bound(k: usize, l: u32) -> Result<f64> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!(
            "separation bound needs k >= 3, got {k}"
        )));
    }
    let kf = k as f64;
    let lf = f64::from(l);
    let scale = 2f64.powi(l as i32 + 1);
    let tail = if k.is_multiple_of(2) {
        (4.0 / 3.0 * kf + 2.0 / 3.0 * lf + 20.0 / 9.0) / 2f64.powi(k as i32 - 2)
    } else {
        (5.0 / 3.0 * kf + 1.0 / 3.0 * lf + 16.0 / 9.0) / 2f64.powi(k as i32 - 2)
    };
    Ok(scale * (3.0 / 5.0 * lf - 1.0 / 9.0 - tail))
}

/// Exhaustively checks that all `2^k` transforms into `n_bits` are
/// pairwise distinct.
pub fn injectivity_check(k: usize, n_bits: usize) -> Result<bool> {
    if k > 6 || n_bits > 16 {
        return Err(Error::Capacity {
            n_bits: n_bits.max(1 << k),
            max: 16,
        });
    }
    if k == 0 || k > n_bits {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= n_bits, got k = {k}, n_bits = {n_bits}"
        )));
    }
    let transforms: Vec<TransformVector> = BitString::all(k)
        .map(|a| f_transform(&a, n_bits))
        .collect::<Result<_>>()?;
    for i in 0..transforms.len() {
        for j in (i + 1)..transforms.len() {
            if transforms[i].values == transforms[j].values {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn identity_base_case() {
        let t = f_transform(&bs("001"), 3).unwrap();
        for (i, &v) in t.values().iter().enumerate() {
            assert_eq!(v, if i == 1 { 1 } else { 0 });
        }
    }

    #[test]
    fn direct_counts_windows() {
        let t = f_transform(&bs("001"), 4).unwrap();
        assert_eq!(t.values()[bs("0010").index() as usize], 1);
        let t = f_transform(&bs("000"), 4).unwrap();
        assert_eq!(t.values()[bs("0000").index() as usize], 2);
    }

    #[test]
    fn recursive_equals_direct() {
        for pattern in ["001", "1", "0000", "0110", "10"] {
            let p = bs(pattern);
            for n in p.len()..=(p.len() + 4) {
                assert_eq!(
                    f_transform_recursive(&p, n).unwrap(),
                    f_transform(&p, n).unwrap(),
                    "pattern {pattern}, n {n}"
                );
            }
        }
    }

    #[test]
    fn l1_norm_closed_form() {
        assert_eq!(l1_norm_explicit(3, 0).unwrap(), 1);
        assert_eq!(l1_norm_explicit(3, 1).unwrap(), 4);
        assert_eq!(l1_norm_explicit(4, 2).unwrap(), 12);
        // brute check of the (4, 2) value over every pattern
        for a in BitString::all(4) {
            assert_eq!(f_transform(&a, 6).unwrap().l1_norm(), 12);
        }
    }

    #[test]
    fn l1_recursive_identity() {
        for a in BitString::all(3) {
            for n in 3..9 {
                let lhs = f_transform(&a, n + 1).unwrap().l1_norm();
                let rhs = 2 * f_transform(&a, n).unwrap().l1_norm() + (1i64 << (n - 3 + 1));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance_squared(&bs("011"), &bs("011"), 6).unwrap(), 0);
        assert_eq!(distance_squared(&bs("01"), &bs("10"), 2).unwrap(), 2);
        let d = distance_diagnostics(&bs("001"), &bs("110"), 5).unwrap();
        assert_eq!(d.direct, d.polarization());
        assert!(d.direct > 0);
    }

    #[test]
    fn self_inner_product_depends_on_pattern() {
        // 0101 is 2-periodic, 0011 is aperiodic; their transforms have
        // different squared norms, which is why the single-norm form is a
        // diagnostic rather than an identity.
        let alternating = f_transform(&bs("0101"), 10).unwrap().l2_norm_squared();
        let block = f_transform(&bs("0011"), 10).unwrap().l2_norm_squared();
        assert_ne!(alternating, block);
    }

    #[test]
    fn lower_bound_branches() {
        // small k gives a vacuously true negative bound
        assert!(l2_lower_bound(3, 0).unwrap() < 0.0);
        // the bound eventually grows monotonically in l
        let values: Vec<f64> = (0..30).map(|l| l2_lower_bound(4, l).unwrap()).collect();
        assert!(values.windows(2).skip(10).all(|w| w[1] > w[0]));
        assert!(values[29] > 1e6);
    }

    #[test]
    fn lower_bound_dominated_at_k4_l6() {
        let bound = l2_lower_bound(4, 6).unwrap();
        for a in BitString::all(4) {
            for b in BitString::all(4) {
                if a != b {
                    let d = distance_squared(&a, &b, 10).unwrap();
                    assert!(d as f64 >= bound, "pair {a} {b}: {d} < {bound}");
                }
            }
        }
    }

    #[test]
    fn injectivity_small_cases() {
        assert!(injectivity_check(2, 2).unwrap());
        assert!(injectivity_check(3, 6).unwrap());
        assert!(injectivity_check(4, 8).unwrap());
        assert!(injectivity_check(7, 8).is_err());
    }
}
