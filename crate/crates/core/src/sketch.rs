//! Sketching maps: generalized moments of the (sampled, thresholded) cost.
//!
//! Structured kinds never materialize a matrix. A row is identified by a
//! window start position and a window pattern; its value at `x` is 1 iff
//! `x` carries that pattern at that position. Row layout follows
//! `row = 2^w * position + pattern` (0-based), so for width 2 the row for
//! position i (1-based) and bits (x1, x2) is `4 (i - 1) + 2 x1 + x2`.
//! The random kind derives each entry from a counter-based hash of
//! (seed, row, index), so it is O(1) memory and reproducible from the seed.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::rng::mix64;
use crate::sample::Sample;
use crate::scalar::Scalar;

/// Full-vector sketch application is capped at this many bits.
pub const MAX_SKETCH_FULL_BITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SketchKind {
    Singulet,
    Duplet,
    Quadruplet,
    Quintuplet,
    Random,
}

impl SketchKind {
    /// Window width of a structured kind; `None` for the random kind.
    pub fn window(self) -> Option<usize> {
        match self {
            SketchKind::Singulet => Some(1),
            SketchKind::Duplet => Some(2),
            SketchKind::Quadruplet => Some(4),
            SketchKind::Quintuplet => Some(5),
            SketchKind::Random => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SketchKind::Singulet => "singulet",
            SketchKind::Duplet => "duplet",
            SketchKind::Quadruplet => "quadruplet",
            SketchKind::Quintuplet => "quintuplet",
            SketchKind::Random => "random",
        }
    }

    /// Accepts both CLI tokens and full names.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "single" | "singulet" => Ok(SketchKind::Singulet),
            "duplet" => Ok(SketchKind::Duplet),
            "quad" | "quadruplet" => Ok(SketchKind::Quadruplet),
            "quint" | "quintuplet" => Ok(SketchKind::Quintuplet),
            "random" => Ok(SketchKind::Random),
            other => Err(Error::InvalidArgument(format!(
                "unknown sketch kind '{other}' (single|duplet|quad|quint|random)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SketchSpec {
    kind: SketchKind,
    n_bits: usize,
    rows: usize,
    seed: u64,
}

impl SketchSpec {
    /// A structured family over `n_bits`; the row count is
    /// `(N - w + 1) * 2^w`.
    pub fn structured(kind: SketchKind, n_bits: usize) -> Result<Self> {
        let Some(w) = kind.window() else {
            return Err(Error::InvalidArgument(
                "random sketch needs an explicit row count; use SketchSpec::random".into(),
            ));
        };
        if n_bits < w || n_bits > crate::bits::MAX_BITS {
            return Err(Error::InvalidArgument(format!(
                "n_bits = {n_bits} incompatible with window width {w}"
            )));
        }
        Ok(SketchSpec {
            kind,
            n_bits,
            rows: (n_bits - w + 1) << w,
            seed: 0,
        })
    }

    pub fn random(n_bits: usize, rows: usize, seed: u64) -> Result<Self> {
        if rows == 0 {
            return Err(Error::InvalidArgument(
                "random sketch needs rows > 0".into(),
            ));
        }
        if n_bits == 0 || n_bits > crate::bits::MAX_BITS {
            return Err(Error::InvalidArgument(format!("bad n_bits {n_bits}")));
        }
        Ok(SketchSpec {
            kind: SketchKind::Random,
            n_bits,
            rows,
            seed,
        })
    }

    /// Random sketch sized like the quadruplet family for the same `n_bits`,
    /// for like-for-like method comparisons.
    pub fn random_like_quadruplet(n_bits: usize, seed: u64) -> Result<Self> {
        let quad = SketchSpec::structured(SketchKind::Quadruplet, n_bits)?;
        SketchSpec::random(n_bits, quad.rows, seed)
    }

    #[inline]
    pub fn kind(&self) -> SketchKind {
        self.kind
    }

    #[inline]
    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    #[inline]
    pub fn row_count(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of window positions of a structured kind.
    pub fn positions(&self) -> Option<usize> {
        self.kind.window().map(|w| self.n_bits - w + 1)
    }

    /// (position, pattern) coordinates of a structured row.
    pub fn row_coordinates(&self, row: usize) -> Option<(usize, u64)> {
        let w = self.kind.window()?;
        Some((row >> w, (row & ((1 << w) - 1)) as u64))
    }

    /// Row index of a structured (position, pattern) pair.
    pub fn row_at(&self, position: usize, pattern: u64) -> Option<usize> {
        let w = self.kind.window()?;
        debug_assert!(position + w <= self.n_bits);
        debug_assert!(pattern >> w == 0);
        Some((position << w) | pattern as usize)
    }

    /// Value of the sketch matrix at (row, x): 0 or 1.
    pub fn row_value(&self, row: usize, x: &BitString) -> Result<bool> {
        if row >= self.rows {
            return Err(Error::InvalidArgument(format!(
                "row {row} out of range (M = {})",
                self.rows
            )));
        }
        if x.len() != self.n_bits {
            return Err(Error::LengthMismatch {
                expected: self.n_bits,
                actual: x.len(),
            });
        }
        match self.kind.window() {
            Some(w) => {
                let (position, pattern) = self.row_coordinates(row).unwrap();
                Ok(x.window(position, w) == pattern)
            }
            None => Ok(random_entry(self.seed, row, x.index())),
        }
    }
}

/// Counter-based hash bit for the random sketch; marginally unbiased and
/// fully determined by (seed, row, index).
#[inline]
fn random_entry(seed: u64, row: usize, index: u64) -> bool {
    mix64(mix64(seed ^ mix64(row as u64)) ^ index) & 1 == 1
}

/// Empirical generalized moments `y` built from a sample; entries are
/// scaled by the pre-threshold sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct SketchVector<T: Scalar> {
    spec: SketchSpec,
    values: Vec<T>,
    sample_size: usize,
    empty_sample: bool,
}

impl<T: Scalar> SketchVector<T> {
    pub fn spec(&self) -> &SketchSpec {
        &self.spec
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn sample_size(&self) -> usize {
        self.sample_size
    }

    /// True when the source sample had no pairs left: the vector is all
    /// zeros and downstream consumers should prefer a fallback answer.
    #[inline]
    pub fn from_empty_sample(&self) -> bool {
        self.empty_sample
    }

    /// Assembles a sketch vector from raw values (tests, synthetic inputs).
    pub fn from_values(spec: SketchSpec, values: Vec<T>) -> Result<Self> {
        if values.len() != spec.row_count() {
            return Err(Error::LengthMismatch {
                expected: spec.row_count(),
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "sketch values must be finite".into(),
            ));
        }
        Ok(SketchVector {
            spec,
            values,
            sample_size: 0,
            empty_sample: false,
        })
    }
}

/// One streaming pass over the sample:
/// `values[m] = (1/n) * sum over pairs (x, v) of row(m, x) * v`
/// with `n` the pre-threshold sample size.
pub fn apply_to_sample<T: Scalar>(
    spec: &SketchSpec,
    sample: &Sample<T>,
) -> Result<SketchVector<T>> {
    if sample.n_bits() != spec.n_bits() {
        return Err(Error::LengthMismatch {
            expected: spec.n_bits(),
            actual: sample.n_bits(),
        });
    }
    let mut values = vec![T::zero(); spec.row_count()];
    let empty = sample.pairs().is_empty();
    for (x, v) in sample.pairs() {
        accumulate(spec, &mut values, x, *v);
    }
    if sample.pre_threshold_size() > 0 {
        let scale = T::from_usize(sample.pre_threshold_size()).unwrap();
        for value in &mut values {
            *value /= scale;
        }
    }
    Ok(SketchVector {
        spec: *spec,
        values,
        sample_size: sample.pre_threshold_size(),
        empty_sample: empty,
    })
}

/// Exact (unnormalized) product of the sketch matrix with a full-domain
/// vector; divide by `2^N` to get the uniform-expectation moments.
pub fn apply_to_full<T: Scalar>(spec: &SketchSpec, vec: &[T]) -> Result<SketchVector<T>> {
    if spec.n_bits() > MAX_SKETCH_FULL_BITS {
        return Err(Error::Capacity {
            n_bits: spec.n_bits(),
            max: MAX_SKETCH_FULL_BITS,
        });
    }
    if vec.len() != 1usize << spec.n_bits() {
        return Err(Error::LengthMismatch {
            expected: 1usize << spec.n_bits(),
            actual: vec.len(),
        });
    }
    let mut values = vec![T::zero(); spec.row_count()];
    for (index, &v) in vec.iter().enumerate() {
        let x = BitString::from_index(index as u64, spec.n_bits())?;
        accumulate(spec, &mut values, &x, v);
    }
    Ok(SketchVector {
        spec: *spec,
        values,
        sample_size: vec.len(),
        empty_sample: false,
    })
}

#[inline]
fn accumulate<T: Scalar>(spec: &SketchSpec, values: &mut [T], x: &BitString, v: T) {
    match spec.kind().window() {
        Some(w) => {
            // exactly one matching pattern per window position
            for position in 0..=(spec.n_bits() - w) {
                let row = (position << w) | x.window(position, w) as usize;
                values[row] += v;
            }
        }
        None => {
            let index = x.index();
            for (row, value) in values.iter_mut().enumerate() {
                if random_entry(spec.seed(), row, index) {
                    *value += v;
                }
            }
        }
    }
}
