//! Seeded generators for TP₂ test instances.
//!
//! Log-concave sequences are pointwise products of positive concave "tents"
//! and a geometric factor. General TP₂ matrices are products of nonnegative
//! bidiagonal matrices (which are totally nonnegative), restricted to a
//! random set of rows and columns.

use std::cmp::Ordering;

use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::Rng;

use super::{MatrixNN, PositiveSequence, SequencePair};

/// Length in `1..=max_len`, entries in `1..=max_entry`.
pub fn positive_sequence<R: Rng + ?Sized>(
    rng: &mut R,
    max_len: usize,
    max_entry: u64,
) -> PositiveSequence {
    let len = rng.gen_range(1..=max_len);
    let values = (0..len)
        .map(|_| BigUint::from(rng.gen_range(1..=max_entry)))
        .collect();
    PositiveSequence::new(values).expect("entries are positive")
}

/// A positive log-concave sequence of length `1..=max_len`.
pub fn log_concave_sequence<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> PositiveSequence {
    let len = rng.gen_range(1..=max_len);
    let last = len as u64 - 1;
    let (p, q) = (rng.gen_range(1..=3u64), rng.gen_range(1..=3u64));
    let mut values: Vec<BigUint> = (0..len as u64)
        .map(|i| BigUint::from(p).pow(i as u32) * BigUint::from(q).pow((last - i) as u32))
        .collect();
    for _ in 0..rng.gen_range(1..=3) {
        let (a, b) = (rng.gen_range(1..=6u64), rng.gen_range(0..=4u64));
        let (c, d) = (rng.gen_range(1..=6u64), rng.gen_range(0..=4u64));
        for (i, v) in values.iter_mut().enumerate() {
            let i = i as u64;
            *v *= (a + b * i).min(c + d * (last - i));
        }
    }
    PositiveSequence::new(values).expect("tents are positive")
}

/// Nonnegative lower or upper bidiagonal `size × size` matrix.
pub fn bidiagonal<R: Rng + ?Sized>(rng: &mut R, size: usize, lower: bool) -> MatrixNN {
    let mut rows = vec![vec![0u32; size]; size];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = rng.gen_range(1..=3);
        let off = if lower {
            i.checked_sub(1)
        } else {
            Some(i + 1).filter(|&j| j < size)
        };
        if let Some(j) = off {
            row[j] = rng.gen_range(0..=3);
        }
    }
    MatrixNN::from_rows(rows).expect("square matrix")
}

/// Product of `factors` random bidiagonal matrices.
pub fn bidiagonal_product<R: Rng + ?Sized>(rng: &mut R, size: usize, factors: usize) -> MatrixNN {
    (0..factors).fold(MatrixNN::identity(size), |acc, _| {
        let lower = rng.gen_bool(0.5);
        acc.multiply(&bidiagonal(rng, size, lower))
            .expect("square factors")
    })
}

fn sorted_subset<R: Rng + ?Sized>(rng: &mut R, len: usize, amount: usize) -> Vec<usize> {
    let mut idx = sample(rng, len, amount).into_vec();
    idx.sort_unstable();
    idx
}

/// A TP₂ matrix of the given shape.
pub fn tp2_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> MatrixNN {
    let size = rows.max(cols) + rng.gen_range(0..=2);
    let factors = rng.gen_range(1..=2 * size);
    let full = bidiagonal_product(rng, size, factors);
    let r = sorted_subset(rng, size, rows);
    let c = sorted_subset(rng, size, cols);
    full.select(&r, &c).expect("nonempty selection")
}

/// A pair of TP₂ matrices with compatible inner dimension. Roughly a third
/// of the left factors are two-row lifts of log-concave sequences.
pub fn tp2_pair<R: Rng + ?Sized>(rng: &mut R) -> (MatrixNN, MatrixNN) {
    let left = if rng.gen_ratio(1, 3) {
        log_concave_sequence(rng, 6).two_row_lift()
    } else {
        let (rows, inner) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        tp2_matrix(rng, rows, inner)
    };
    let cols = rng.gen_range(1..=5);
    let right = tp2_matrix(rng, left.cols(), cols);
    (left, right)
}

/// A pair satisfying `a_i·x_{i+1} ≤ a_{i+1}·x_i`, obtained by sorting random
/// `(a_i, x_i)` columns by the ratio `a_i / x_i`.
pub fn dominated_pair<R: Rng + ?Sized>(
    rng: &mut R,
    max_len: usize,
    max_entry: u64,
) -> SequencePair {
    let len = rng.gen_range(1..=max_len);
    let mut cols: Vec<(u64, u64)> = (0..len)
        .map(|_| (rng.gen_range(0..=max_entry), rng.gen_range(1..=max_entry)))
        .collect();
    cols.sort_by(|l, r| match (l.0 * r.1).cmp(&(r.0 * l.1)) {
        Ordering::Equal => l.cmp(r),
        other => other,
    });
    let (a, x): (Vec<u64>, Vec<u64>) = cols.into_iter().unzip();
    SequencePair::from_u64s(&a, &x).expect("x entries are positive")
}
