//! Fixed-length bit strings.
//!
//! Convention used everywhere in this crate: big-endian, i.e. the leftmost
//! character of the textual form is the most significant bit of the integer
//! index. Lexicographic order over strings of equal length therefore equals
//! numeric order of their indices.

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Longest representable string; keeps indices inside `u64`.
pub const MAX_BITS: usize = 63;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    // Field order matters for the derived lexicographic comparison: strings
    // are first grouped by length, then compared by big-endian value.
    len: usize,
    value: u64,
}

impl BitString {
    /// Builds the string whose big-endian integer index is `index`.
    pub fn from_index(index: u64, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_BITS {
            return Err(Error::InvalidArgument(format!(
                "bit-string length must be in 1..={MAX_BITS}, got {len}"
            )));
        }
        if len < 64 && index >> len != 0 {
            return Err(Error::InvalidArgument(format!(
                "index {index} out of range for {len} bits"
            )));
        }
        Ok(BitString { len, value: index })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::from_index(0, len)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // length is always >= 1
    }

    /// Big-endian integer index of the string.
    #[inline]
    pub fn index(&self) -> u64 {
        self.value
    }

    /// Bit at 0-based position `pos` counted from the left.
    #[inline]
    pub fn bit(&self, pos: usize) -> bool {
        debug_assert!(pos < self.len);
        (self.value >> (self.len - 1 - pos)) & 1 == 1
    }

    /// Integer value of the `width`-bit window starting at 0-based `start`.
    #[inline]
    pub fn window(&self, start: usize, width: usize) -> u64 {
        debug_assert!(start + width <= self.len && width >= 1);
        (self.value >> (self.len - start - width)) & ((1u64 << width) - 1)
    }

    /// Copy with the bit at `pos` flipped.
    #[inline]
    pub fn flipped(&self, pos: usize) -> Self {
        debug_assert!(pos < self.len);
        BitString {
            len: self.len,
            value: self.value ^ (1u64 << (self.len - 1 - pos)),
        }
    }

    /// Copy with every bit of `mask` (an index-space mask) flipped.
    #[inline]
    pub fn xor_mask(&self, mask: u64) -> Self {
        debug_assert!(self.len == 64 || mask >> self.len == 0);
        BitString {
            len: self.len,
            value: self.value ^ mask,
        }
    }

    /// Number of window positions at which `pattern` occurs in `self`.
    pub fn count_occurrences(&self, pattern: &BitString) -> usize {
        if pattern.len > self.len {
            return 0;
        }
        let mut count = 0;
        for start in 0..=(self.len - pattern.len) {
            if self.window(start, pattern.len) == pattern.value {
                count += 1;
            }
        }
        count
    }

    /// All strings of length `len` in index (= lexicographic) order.
    pub fn all(len: usize) -> impl Iterator<Item = BitString> {
        assert!((1..=MAX_BITS).contains(&len));
        (0..(1u64 << len)).map(move |v| BitString { len, value: v })
    }
}

/// Hamming distance between two strings of equal length.
pub fn hamming(a: &BitString, b: &BitString) -> Result<u32> {
    if a.len != b.len {
        return Err(Error::LengthMismatch {
            expected: a.len,
            actual: b.len,
        });
    }
    Ok((a.value ^ b.value).count_ones())
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in 0..self.len {
            f.write_str(if self.bit(pos) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    // Prints the literal bits ("0101") instead of the raw fields.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > MAX_BITS {
            return Err(Error::InvalidArgument(format!(
                "bit-string length must be in 1..={MAX_BITS}, got {}",
                s.len()
            )));
        }
        let mut value = 0u64;
        for c in s.chars() {
            value <<= 1;
            match c {
                '0' => {}
                '1' => value |= 1,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "bit-string may only contain 0/1, got '{other}'"
                    )))
                }
            }
        }
        Ok(BitString {
            len: s.len(),
            value,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "1", "0101", "000", "111111111111"] {
            assert_eq!(bs(s).to_string(), s);
        }
        assert!("".parse::<BitString>().is_err());
        assert!("01a".parse::<BitString>().is_err());
    }

    #[test]
    fn big_endian_indexing() {
        assert_eq!(bs("001").index(), 1);
        assert_eq!(bs("100").index(), 4);
        assert_eq!(bs("0101").window(1, 2), 0b10);
        assert!(bs("0101").bit(1));
        assert!(!bs("0101").bit(0));
    }

    #[test]
    fn occurrence_counting() {
        assert_eq!(bs("00100").count_occurrences(&bs("001")), 1);
        assert_eq!(bs("00000").count_occurrences(&bs("000")), 3);
        assert_eq!(bs("0101").count_occurrences(&bs("01")), 2);
        assert_eq!(bs("01").count_occurrences(&bs("010")), 0);
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(&bs("0000"), &bs("0000")).unwrap(), 0);
        assert_eq!(hamming(&bs("0101"), &bs("1010")).unwrap(), 4);
        assert_eq!(hamming(&bs("0011"), &bs("0010")).unwrap(), 1);
        assert!(hamming(&bs("00"), &bs("000")).is_err());
    }

    #[test]
    fn lexicographic_order_matches_index_order() {
        let mut strings: Vec<BitString> = BitString::all(4).collect();
        strings.sort();
        let texts: Vec<String> = strings.iter().map(|b| b.to_string()).collect();
        let mut sorted_texts = texts.clone();
        sorted_texts.sort();
        assert_eq!(texts, sorted_texts);
    }

    proptest! {
        #[test]
        fn hamming_is_a_metric(a in 0u64..256, b in 0u64..256, c in 0u64..256) {
            let (a, b, c) = (
                BitString::from_index(a, 8).unwrap(),
                BitString::from_index(b, 8).unwrap(),
                BitString::from_index(c, 8).unwrap(),
            );
            let dab = hamming(&a, &b).unwrap();
            let dba = hamming(&b, &a).unwrap();
            prop_assert_eq!(dab, dba);
            prop_assert_eq!(dab == 0, a == b);
            prop_assert!(dab + hamming(&b, &c).unwrap() >= hamming(&a, &c).unwrap());
        }
    }
}
