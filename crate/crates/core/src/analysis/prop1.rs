//! Dominance of rule substrings in width-2 window moments.
//!
//! For a single 3-bit rule, the exact duplet moments of the cost vector
//! rank window patterns: at interior positions every length-2 substring of
//! the rule scores at least as high as every non-substring, and at every
//! position (boundaries included) some substring attains the position-wide
//! maximum. This is what makes the first matching-pursuit selection favor
//! strings assembled from rule substrings.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::transform::f_transform;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop1Report {
    pub rule: BitString,
    pub n_bits: usize,
    /// Interior positions: substring moments dominate non-substring moments.
    pub interior_substrings_dominate: bool,
    /// Every position has a substring attaining the maximum moment.
    pub every_position_has_dominating_substring: bool,
    /// At the first position the rule prefix attains the maximum.
    pub prefix_dominates_at_start: bool,
    /// At the last position the rule suffix attains the maximum.
    pub suffix_dominates_at_end: bool,
}

impl Prop1Report {
    /// Both proposition parts hold.
    pub fn holds(&self) -> bool {
        self.interior_substrings_dominate && self.every_position_has_dominating_substring
    }
}

/// Exact duplet moments of the single-rule cost vector, as integers:
/// `moment[position][pattern] = sum over x with that window pattern of
/// (occurrences of the rule in x)`.
fn duplet_moments(rule: &BitString, n_bits: usize) -> Result<Vec<[i64; 4]>> {
    let transform = f_transform(rule, n_bits)?;
    let positions = n_bits - 1;
    let mut moments = vec![[0i64; 4]; positions];
    for x in BitString::all(n_bits) {
        let value = transform.values()[x.index() as usize];
        if value == 0 {
            continue;
        }
        for (position, row) in moments.iter_mut().enumerate() {
            row[x.window(position, 2) as usize] += value;
        }
    }
    Ok(moments)
}

/// Checks both parts of the substring-dominance property for one 3-bit
/// rule embedded into `n_bits`.
pub fn proposition1_check(rule: &BitString, n_bits: usize) -> Result<Prop1Report> {
    if rule.len() != 3 {
        return Err(Error::InvalidArgument(format!(
            "rule must have 3 bits, got {}",
            rule.len()
        )));
    }
    if !(4..=12).contains(&n_bits) {
        return Err(Error::InvalidArgument(format!(
            "n_bits must be in 4..=12, got {n_bits}"
        )));
    }
    let moments = duplet_moments(rule, n_bits)?;
    let prefix = rule.window(0, 2) as usize;
    let suffix = rule.window(1, 2) as usize;
    let is_substring = |p: usize| p == prefix || p == suffix;
    let positions = n_bits - 1;

    let mut interior = true;
    for row in moments.iter().take(positions - 1).skip(1) {
        for sub in [prefix, suffix] {
            for z in 0..4 {
                if !is_substring(z) && row[sub] < row[z] {
                    interior = false;
                }
            }
        }
    }

    let row_max = |row: &[i64; 4]| *row.iter().max().expect("four patterns");
    let every_position = moments
        .iter()
        .all(|row| row[prefix] == row_max(row) || row[suffix] == row_max(row));
    let start = moments[0][prefix] == row_max(&moments[0]);
    let end = moments[positions - 1][suffix] == row_max(&moments[positions - 1]);

    Ok(Prop1Report {
        rule: *rule,
        n_bits,
        interior_substrings_dominate: interior,
        every_position_has_dominating_substring: every_position,
        prefix_dominates_at_start: start,
        suffix_dominates_at_end: end,
    })
}
