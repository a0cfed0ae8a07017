//! Greedy sparse recovery over the implicit dictionary of domain atoms.
//!
//! The atom of a string `x` is the sketch column at `x`. Matching pursuit
//! selects the atom best correlated with the sketch vector; orthogonal
//! matching pursuit repeats the selection against a residual and re-fits
//! coefficients by least squares each round. For structured sketches the
//! selection over all `2^N` atoms collapses to a chain dynamic program over
//! window states; the exhaustive scan stays available as the reference
//! route and as the fallback when the residual has negative buckets (the
//! DP maximizes the plain correlation, OMP selects on its absolute value).

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sketch::{SketchKind, SketchSpec, SketchVector};
use std::collections::HashSet;

/// Exhaustive atom scans are capped at this many bits.
pub const MAX_SCAN_BITS: usize = 20;

/// Sketch column of a single domain string.
pub fn atom_column<T: Scalar>(spec: &SketchSpec, x: &BitString) -> Result<Vec<T>> {
    (0..spec.row_count())
        .map(|m| {
            Ok(if spec.row_value(m, x)? {
                T::one()
            } else {
                T::zero()
            })
        })
        .collect()
}

#[inline]
fn structured_correlation<T: Scalar>(spec: &SketchSpec, values: &[T], x: &BitString) -> T {
    let w = spec.kind().window().expect("structured kind");
    let mut total = T::zero();
    for position in 0..=(spec.n_bits() - w) {
        total += values[(position << w) | x.window(position, w) as usize];
    }
    total
}

fn random_correlation<T: Scalar>(spec: &SketchSpec, values: &[T], x: &BitString) -> T {
    let mut total = T::zero();
    let mut ones = 0usize;
    for (m, &v) in values.iter().enumerate() {
        if spec.row_value(m, x).expect("row in range") {
            total += v;
            ones += 1;
        }
    }
    // l2-normalized correlation; columns of the random kind have varying
    // weight, unlike structured columns whose weight is constant.
    if ones == 0 {
        T::zero()
    } else {
        total / T::from_usize(ones).unwrap().sqrt()
    }
}

/// Correlation used for atom selection: raw window sum for structured
/// kinds (constant column norm), normalized for the random kind.
pub fn selection_correlation<T: Scalar>(spec: &SketchSpec, values: &[T], x: &BitString) -> T {
    match spec.kind() {
        SketchKind::Random => random_correlation(spec, values, x),
        _ => structured_correlation(spec, values, x),
    }
}

fn check_scan_capacity(spec: &SketchSpec) -> Result<()> {
    if spec.n_bits() > MAX_SCAN_BITS {
        return Err(Error::Capacity {
            n_bits: spec.n_bits(),
            max: MAX_SCAN_BITS,
        });
    }
    Ok(())
}

/// First matching-pursuit selection: the string whose atom has the largest
/// correlation with `y`, by exhaustive scan. Ties break to the
/// lexicographically smallest string.
pub fn mp_argmax<T: Scalar>(y: &SketchVector<T>) -> Result<BitString> {
    let spec = y.spec();
    check_scan_capacity(spec)?;
    let mut best = BitString::zeros(spec.n_bits())?;
    let mut best_score = selection_correlation(spec, y.values(), &best);
    for x in BitString::all(spec.n_bits()).skip(1) {
        let score = selection_correlation(spec, y.values(), &x);
        if score > best_score {
            best = x;
            best_score = score;
        }
    }
    Ok(best)
}

/// Chain dynamic program computing the same argmax as `mp_argmax` for
/// structured kinds in `O(N * 2^w)`: state is the previous `w - 1` bits,
/// the transition weight is the bucket value of the completed window.
/// Ties resolve by preferring bit 0, i.e. to the lexicographically
/// smallest string.
pub fn dp_argmax_windowed<T: Scalar>(y: &SketchVector<T>) -> Result<BitString> {
    let spec = y.spec();
    let Some(w) = spec.kind().window() else {
        return Err(Error::Unsupported(
            "dp_argmax_windowed needs a structured (contiguous-window) sketch".into(),
        ));
    };
    let n = spec.n_bits();
    let positions = n - w + 1;
    let states = 1usize << (w - 1);
    let state_mask = states - 1;
    let values = y.values();

    // best[s] = highest achievable score over windows i..end given that the
    // w - 1 bits entering window i are s; filled backwards.
    let mut best = vec![vec![T::zero(); states]; positions + 1];
    for i in (0..positions).rev() {
        for s in 0..states {
            let mut top = T::neg_infinity();
            for b in 0..2usize {
                let window = (s << 1) | b;
                let score = values[(i << w) | window] + best[i + 1][window & state_mask];
                if score > top {
                    top = score;
                }
            }
            best[i][s] = top;
        }
    }

    // Smallest initial state among maximizers, then greedily prefer 0.
    let mut state = 0usize;
    for s in 1..states {
        if best[0][s] > best[0][state] {
            state = s;
        }
    }
    let mut index = state as u64;
    for i in 0..positions {
        let mut chosen = 1usize;
        for b in 0..2usize {
            let window = (state << 1) | b;
            let score = values[(i << w) | window] + best[i + 1][window & state_mask];
            if score == best[i][state] {
                chosen = b;
                break;
            }
        }
        let window = (state << 1) | chosen;
        index = (index << 1) | chosen as u64;
        state = window & state_mask;
    }
    BitString::from_index(index, n)
}

/// OMP output: atoms in selection order with their (final least-squares)
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseEstimate<T: Scalar> {
    atoms: Vec<(BitString, T)>,
    residual_norm: T,
    residual_history: Vec<T>,
    early_termination: bool,
}

impl<T: Scalar> SparseEstimate<T> {
    pub fn atoms(&self) -> &[(BitString, T)] {
        &self.atoms
    }

    #[inline]
    pub fn residual_norm(&self) -> T {
        self.residual_norm
    }

    /// Residual norm after each completed iteration.
    pub fn residual_history(&self) -> &[T] {
        &self.residual_history
    }

    /// True when the decoder stopped because the selected columns became
    /// numerically rank deficient.
    #[inline]
    pub fn early_termination(&self) -> bool {
        self.early_termination
    }
}

fn l2_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// Solves `gram * x = rhs` by Cholesky factorization; `None` when a pivot
/// falls below the tolerance (rank-deficient selection).
fn cholesky_solve<T: Scalar>(gram: &[Vec<T>], rhs: &[T], pivot_tol: T) -> Option<Vec<T>> {
    let k = rhs.len();
    let mut low = vec![vec![T::zero(); k]; k];
    for i in 0..k {
        for j in 0..=i {
            let mut sum = gram[i][j];
            for (&a, &b) in low[i].iter().zip(&low[j]).take(j) {
                sum -= a * b;
            }
            if i == j {
                if sum <= pivot_tol {
                    return None;
                }
                low[i][j] = sum.sqrt();
            } else {
                low[i][j] = sum / low[j][j];
            }
        }
    }
    let mut y = vec![T::zero(); k];
    for i in 0..k {
        let mut sum = rhs[i];
        for (&lv, &yv) in low[i].iter().zip(&y).take(i) {
            sum -= lv * yv;
        }
        y[i] = sum / low[i][i];
    }
    let mut x = vec![T::zero(); k];
    for i in (0..k).rev() {
        let mut sum = y[i];
        for (row, &xv) in low.iter().zip(&x).skip(i + 1) {
            sum -= row[i] * xv;
        }
        x[i] = sum / low[i][i];
    }
    Some(x)
}

/// Best unselected atom by absolute selection correlation, exhaustive.
fn best_unselected<T: Scalar>(
    spec: &SketchSpec,
    residual: &[T],
    selected: &HashSet<u64>,
) -> Result<Option<(BitString, T)>> {
    check_scan_capacity(spec)?;
    let mut best: Option<(BitString, T)> = None;
    for x in BitString::all(spec.n_bits()) {
        if selected.contains(&x.index()) {
            continue;
        }
        let score = selection_correlation(spec, residual, &x).abs();
        match &best {
            Some((_, top)) if score <= *top => {}
            _ => best = Some((x, score)),
        }
    }
    Ok(best)
}

/// Orthogonal matching pursuit against the implicit atom dictionary.
///
/// Stops after `sparsity` atoms or once the residual norm falls below
/// 1e-12. Structured kinds route selection through the chain DP whenever
/// the residual is entrywise nonnegative (there the max correlation equals
/// the max absolute correlation); otherwise the exhaustive scan runs.
pub fn omp<T: Scalar>(y: &SketchVector<T>, sparsity: usize) -> Result<SparseEstimate<T>> {
    if sparsity == 0 {
        return Err(Error::InvalidArgument("sparsity must be >= 1".into()));
    }
    let spec = *y.spec();
    let stop_tol = T::from_f64_lossy(1e-12);
    let pivot_tol = T::from_f64_lossy(1e-10);

    let mut residual: Vec<T> = y.values().to_vec();
    let mut atoms: Vec<BitString> = Vec::new();
    let mut columns: Vec<Vec<T>> = Vec::new();
    let mut coefficients: Vec<T> = Vec::new();
    let mut selected: HashSet<u64> = HashSet::new();
    let mut history = Vec::new();
    let mut early_termination = false;

    while atoms.len() < sparsity {
        if l2_norm(&residual) < stop_tol {
            break;
        }
        let structured = spec.kind() != SketchKind::Random;
        let nonnegative = residual.iter().all(|v| *v >= T::zero());
        let candidate = if structured && nonnegative {
            let pick = dp_argmax_windowed(&SketchVector::from_values(spec, residual.clone())?)?;
            if selected.contains(&pick.index()) {
                best_unselected(&spec, &residual, &selected)?
            } else {
                let score = selection_correlation(&spec, &residual, &pick).abs();
                Some((pick, score))
            }
        } else {
            best_unselected(&spec, &residual, &selected)?
        };
        let Some((atom, score)) = candidate else {
            break;
        };
        if score <= T::zero() {
            break;
        }

        atoms.push(atom);
        selected.insert(atom.index());
        columns.push(atom_column(&spec, &atom)?);

        let k = atoms.len();
        let mut gram = vec![vec![T::zero(); k]; k];
        for i in 0..k {
            for j in 0..=i {
                let dot = columns[i]
                    .iter()
                    .zip(&columns[j])
                    .map(|(&a, &b)| a * b)
                    .sum::<T>();
                gram[i][j] = dot;
                gram[j][i] = dot;
            }
        }
        let rhs: Vec<T> = columns
            .iter()
            .map(|col| col.iter().zip(y.values()).map(|(&c, &v)| c * v).sum())
            .collect();
        match cholesky_solve(&gram, &rhs, pivot_tol) {
            Some(solution) => coefficients = solution,
            None => {
                atoms.pop();
                columns.pop();
                early_termination = true;
                break;
            }
        }

        residual = y.values().to_vec();
        for (col, &coef) in columns.iter().zip(&coefficients) {
            for (r, &c) in residual.iter_mut().zip(col) {
                *r -= coef * c;
            }
        }
        history.push(l2_norm(&residual));
    }

    Ok(SparseEstimate {
        atoms: atoms.into_iter().zip(coefficients).collect(),
        residual_norm: history
            .last()
            .copied()
            .unwrap_or_else(|| l2_norm(&residual)),
        residual_history: history,
        early_termination,
    })
}

/// Atom with the largest coefficient; ties go to the earliest selected.
pub fn extract_maximum<T: Scalar>(estimate: &SparseEstimate<T>) -> Result<BitString> {
    let mut best: Option<(BitString, T)> = None;
    for &(atom, coef) in &estimate.atoms {
        match &best {
            Some((_, top)) if coef <= *top => {}
            _ => best = Some((atom, coef)),
        }
    }
    best.map(|(atom, _)| atom)
        .ok_or(Error::Empty("sparse estimate"))
}
