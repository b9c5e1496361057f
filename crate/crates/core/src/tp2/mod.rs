//! Total positivity of order 2.
//!
//! A nonnegative matrix is TP₂ when every 2×2 minor is nonnegative. A
//! positive sequence is log-concave exactly when the two-row matrix pairing
//! it with its right shift is TP₂, and multiplying by the upper-triangular
//! all-ones matrix turns a row into its partial sums. Everything here is
//! exact integer arithmetic.

pub mod random;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Tp2Error {
    #[error("matrix must have at least one row and one column (got {rows}×{cols})")]
    EmptyDimension { rows: usize, cols: usize },
    #[error("{rows}×{cols} matrix needs {} entries, got {len}", rows * cols)]
    Shape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("row {row} has {len} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("cannot multiply: left has {left_cols} columns, right has {right_rows} rows")]
    DimensionMismatch { left_cols: usize, right_rows: usize },
    #[error("sequence must be nonempty")]
    EmptySequence,
    #[error("sequence entry {index} is zero; entries must be positive")]
    NonPositive { index: usize },
    #[error("sequences have different lengths ({a} and {x})")]
    LengthMismatch { a: usize, x: usize },
    #[error("precondition violated at index {index}")]
    PreconditionViolated { index: usize },
    #[error("cannot parse {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// How [`MatrixNN::negative_minor_with`] searches for a negative minor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Tp2Strategy {
    /// Adjacent-column reduction for wide two-row matrices, all minors otherwise.
    #[default]
    Auto,
    /// Every `C(rows, 2)·C(cols, 2)` minor.
    AllMinors,
}

/// Widest matrix that [`Tp2Strategy::Auto`] still checks minor by minor.
pub const ALL_MINORS_MAX_COLS: usize = 8;

/// A 2×2 minor on rows `i < i′` and columns `j < j′`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Minor {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub determinant: BigInt,
}

/// Dense row-major matrix of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixNN {
    rows: usize,
    cols: usize,
    entries: Vec<BigUint>,
}

impl MatrixNN {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigUint>) -> Result<Self, Tp2Error> {
        if rows == 0 || cols == 0 {
            return Err(Tp2Error::EmptyDimension { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(Tp2Error::Shape {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(MatrixNN {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows<T: Into<BigUint>>(rows: Vec<Vec<T>>) -> Result<Self, Tp2Error> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(Tp2Error::RaggedRow {
                    row: i,
                    len: row.len(),
                    expected: n_cols,
                });
            }
            entries.extend(row.into_iter().map(Into::into));
        }
        MatrixNN::new(n_rows, n_cols, entries)
    }

    pub fn identity(size: usize) -> Self {
        Self::build(size, size, |i, j| u32::from(i == j))
    }

    /// Ones on and above the diagonal; right-multiplying a row by it yields
    /// the row's partial sums.
    pub fn upper_triangular_ones(size: usize) -> Self {
        Self::build(size, size, |i, j| u32::from(i <= j))
    }

    pub(crate) fn build(rows: usize, cols: usize, f: impl Fn(usize, usize) -> u32) -> Self {
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| BigUint::from(f(i, j)))
            .collect();
        MatrixNN {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigUint] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigUint>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// `M[i][j]·M[i′][j′] − M[i][j′]·M[i′][j]`.
    pub fn minor(&self, rows: (usize, usize), cols: (usize, usize)) -> BigInt {
        let (i, k) = rows;
        let (j, l) = cols;
        let main = self.get(i, j) * self.get(k, l);
        let anti = self.get(i, l) * self.get(k, j);
        BigInt::from(main) - BigInt::from(anti)
    }

    /// Sub-matrix on the given (increasing) row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<Self, Tp2Error> {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        MatrixNN::new(rows.len(), cols.len(), entries)
    }

    pub fn is_tp2(&self) -> bool {
        self.negative_minor().is_none()
    }

    pub fn negative_minor(&self) -> Option<Minor> {
        self.negative_minor_with(Tp2Strategy::Auto)
    }

    /// First negative minor found, or `None` when the matrix is TP₂.
    pub fn negative_minor_with(&self, strategy: Tp2Strategy) -> Option<Minor> {
        let fast =
            strategy == Tp2Strategy::Auto && self.rows == 2 && self.cols > ALL_MINORS_MAX_COLS;
        if fast {
            self.two_row_negative_minor()
        } else {
            self.all_minors_negative()
        }
    }

    fn all_minors_negative(&self) -> Option<Minor> {
        for i in 0..self.rows {
            for k in i + 1..self.rows {
                for j in 0..self.cols {
                    for l in j + 1..self.cols {
                        let det = self.minor((i, k), (j, l));
                        if det < BigInt::zero() {
                            return Some(Minor {
                                rows: (i, k),
                                cols: (j, l),
                                determinant: det,
                            });
                        }
                    }
                }
            }
        }
        None
    }

    // For two rows, each nonzero column is a vector in the closed first
    // quadrant and a minor is the cross product of two columns. All minors are
    // nonnegative iff the column angles are weakly increasing, which only has
    // to be checked between consecutive nonzero columns.
    fn two_row_negative_minor(&self) -> Option<Minor> {
        let mut previous: Option<usize> = None;
        for j in 0..self.cols {
            if self.get(0, j).is_zero() && self.get(1, j).is_zero() {
                continue;
            }
            if let Some(p) = previous {
                let det = self.minor((0, 1), (p, j));
                if det < BigInt::zero() {
                    return Some(Minor {
                        rows: (0, 1),
                        cols: (p, j),
                        determinant: det,
                    });
                }
            }
            previous = Some(j);
        }
        None
    }

    /// Exact product `self × rhs`.
    pub fn multiply(&self, rhs: &MatrixNN) -> Result<MatrixNN, Tp2Error> {
        if self.cols != rhs.rows {
            return Err(Tp2Error::DimensionMismatch {
                left_cols: self.cols,
                right_rows: rhs.rows,
            });
        }
        let mut entries = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = BigUint::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), rhs.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                entries.push(acc);
            }
        }
        MatrixNN::new(self.rows, rhs.cols, entries)
    }
}

/// Exact matrix product; see [`MatrixNN::multiply`].
pub fn matrix_multiply(a: &MatrixNN, b: &MatrixNN) -> Result<MatrixNN, Tp2Error> {
    a.multiply(b)
}

impl fmt::Display for MatrixNN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(";")?;
            }
            write_csv(f, self.row(i))?;
        }
        Ok(())
    }
}

/// Semicolon-separated rows of comma-separated integers, e.g. `"1,2;1,3"`.
impl FromStr for MatrixNN {
    type Err = Tp2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rows = s
            .split(';')
            .map(|row| parse_naturals(row, s))
            .collect::<Result<Vec<_>, _>>()?;
        MatrixNN::from_rows(rows)
    }
}

fn write_csv(f: &mut fmt::Formatter<'_>, values: &[BigUint]) -> fmt::Result {
    for (j, v) in values.iter().enumerate() {
        if j > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// Parses a comma-separated list of nonnegative integers.
pub fn parse_naturals(text: &str, context: &str) -> Result<Vec<BigUint>, Tp2Error> {
    if text.trim().is_empty() {
        return Err(Tp2Error::Parse {
            text: context.to_string(),
            reason: "empty list".into(),
        });
    }
    text.split(',')
        .map(|tok| {
            tok.trim().parse::<BigUint>().map_err(|e| Tp2Error::Parse {
                text: context.to_string(),
                reason: format!("entry {:?}: {e}", tok.trim()),
            })
        })
        .collect()
}

/// A nonempty sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PositiveSequence(Vec<BigUint>);

impl PositiveSequence {
    pub fn new(values: Vec<BigUint>) -> Result<Self, Tp2Error> {
        if values.is_empty() {
            return Err(Tp2Error::EmptySequence);
        }
        if let Some(index) = values.iter().position(Zero::is_zero) {
            return Err(Tp2Error::NonPositive { index });
        }
        Ok(PositiveSequence(values))
    }

    pub fn from_u64s(values: &[u64]) -> Result<Self, Tp2Error> {
        Self::new(values.iter().map(|&v| BigUint::from(v)).collect())
    }

    pub fn values(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `X_m = x_0 + … + x_m`.
    pub fn partial_sums(&self) -> PositiveSequence {
        PositiveSequence(running_sums(&self.0))
    }

    /// First interior `i` with `x_{i−1}·x_{i+1} > x_i²`.
    pub fn log_concavity_violation(&self) -> Option<usize> {
        self.0
            .windows(3)
            .position(|w| &w[0] * &w[2] > &w[1] * &w[1])
            .map(|i| i + 1)
    }

    pub fn is_log_concave(&self) -> bool {
        self.log_concavity_violation().is_none()
    }

    /// First index at which the sequence rises again after having fallen.
    pub fn unimodality_violation(&self) -> Option<usize> {
        let mut fallen = false;
        for (i, w) in self.0.windows(2).enumerate() {
            match w[0].cmp(&w[1]) {
                Ordering::Greater => fallen = true,
                Ordering::Less if fallen => return Some(i + 1),
                _ => {}
            }
        }
        None
    }

    pub fn is_unimodal(&self) -> bool {
        self.unimodality_violation().is_none()
    }

    /// The 2×(ℓ+1) matrix with rows `(x_0, …, x_ℓ)` and `(0, x_0, …, x_{ℓ−1})`.
    pub fn two_row_lift(&self) -> MatrixNN {
        let len = self.0.len();
        let mut entries = self.0.clone();
        entries.push(BigUint::zero());
        entries.extend_from_slice(&self.0[..len - 1]);
        MatrixNN {
            rows: 2,
            cols: len,
            entries,
        }
    }

    /// Checks that the partial sums of a log-concave sequence are log-concave.
    ///
    /// Errors with the violating index when `self` is not log-concave; a
    /// `false` result would contradict the closure property.
    pub fn partial_sums_preserve_log_concavity(&self) -> Result<bool, Tp2Error> {
        if let Some(index) = self.log_concavity_violation() {
            return Err(Tp2Error::PreconditionViolated { index });
        }
        Ok(self.partial_sums().is_log_concave())
    }
}

impl fmt::Display for PositiveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_csv(f, &self.0)
    }
}

impl FromStr for PositiveSequence {
    type Err = Tp2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PositiveSequence::new(parse_naturals(s, s)?)
    }
}

fn running_sums(values: &[BigUint]) -> Vec<BigUint> {
    let mut acc = BigUint::zero();
    values
        .iter()
        .map(|v| {
            acc += v;
            acc.clone()
        })
        .collect()
}

/// Nonnegative `a` and positive `x` of equal length, with their partial sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequencePair {
    a: Vec<BigUint>,
    x: Vec<BigUint>,
    a_sums: Vec<BigUint>,
    x_sums: Vec<BigUint>,
}

impl SequencePair {
    pub fn new(a: Vec<BigUint>, x: Vec<BigUint>) -> Result<Self, Tp2Error> {
        if a.len() != x.len() {
            return Err(Tp2Error::LengthMismatch {
                a: a.len(),
                x: x.len(),
            });
        }
        let x = PositiveSequence::new(x)?.0;
        let a_sums = running_sums(&a);
        let x_sums = running_sums(&x);
        Ok(SequencePair {
            a,
            x,
            a_sums,
            x_sums,
        })
    }

    pub fn from_u64s(a: &[u64], x: &[u64]) -> Result<Self, Tp2Error> {
        let big = |v: &[u64]| v.iter().map(|&e| BigUint::from(e)).collect();
        Self::new(big(a), big(x))
    }

    pub fn a(&self) -> &[BigUint] {
        &self.a
    }

    pub fn x(&self) -> &[BigUint] {
        &self.x
    }

    /// Partial sums `A_m` of `a`.
    pub fn a_sums(&self) -> &[BigUint] {
        &self.a_sums
    }

    /// Partial sums `X_m` of `x`.
    pub fn x_sums(&self) -> &[BigUint] {
        &self.x_sums
    }

    /// First `i` with `a_i·x_{i+1} > a_{i+1}·x_i`.
    pub fn ratio_dominance_violation(&self) -> Option<usize> {
        first_cross_violation(&self.a, &self.x)
    }

    pub fn check_ratio_dominance(&self) -> bool {
        self.ratio_dominance_violation().is_none()
    }

    /// First `m` with `A_m·X_{m+1} > A_{m+1}·X_m`.
    pub fn partial_sum_dominance_violation(&self) -> Option<usize> {
        first_cross_violation(&self.a_sums, &self.x_sums)
    }

    pub fn partial_sum_dominance(&self) -> bool {
        self.partial_sum_dominance_violation().is_none()
    }
}

fn first_cross_violation(a: &[BigUint], x: &[BigUint]) -> Option<usize> {
    (0..a.len().saturating_sub(1)).find(|&i| &a[i] * &x[i + 1] > &a[i + 1] * &x[i])
}

/// The two-row matrix with rows `x` and `a`, whose TP₂-ness is exactly the
/// ratio-dominance condition.
pub fn stacked_pair(p: &SequencePair) -> MatrixNN {
    let mut entries = p.x.clone();
    entries.extend_from_slice(&p.a);
    MatrixNN {
        rows: 2,
        cols: p.x.len(),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn m(text: &str) -> MatrixNN {
        text.parse().unwrap()
    }

    fn seq(v: &[u64]) -> PositiveSequence {
        PositiveSequence::from_u64s(v).unwrap()
    }

    #[test]
    fn is_tp2_examples() {
        assert!(m("1,2;1,3").is_tp2());
        let bad = m("1,2;3,1");
        assert!(!bad.is_tp2());
        assert_eq!(bad.negative_minor().unwrap().determinant, BigInt::from(-5));
        assert!(MatrixNN::upper_triangular_ones(4).is_tp2());
        assert!(m("5").is_tp2());
    }

    #[test]
    fn upper_triangular_minors_are_zero_or_one() {
        let u = MatrixNN::upper_triangular_ones(4);
        let mut count = 0;
        for i in 0..4 {
            for k in i + 1..4 {
                for j in 0..4 {
                    for l in j + 1..4 {
                        let d = u.minor((i, k), (j, l));
                        assert!(d == BigInt::zero() || d == BigInt::one());
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 36);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            MatrixNN::new(0, 3, vec![]),
            Err(Tp2Error::EmptyDimension { .. })
        ));
        assert!(matches!(
            MatrixNN::new(2, 2, vec![BigUint::one()]),
            Err(Tp2Error::Shape { .. })
        ));
        assert!(matches!(
            "1,2;3".parse::<MatrixNN>(),
            Err(Tp2Error::RaggedRow { row: 1, .. })
        ));
        assert!(matches!(
            "1,-2".parse::<MatrixNN>(),
            Err(Tp2Error::Parse { .. })
        ));
        assert!(matches!(
            "".parse::<MatrixNN>(),
            Err(Tp2Error::Parse { .. })
        ));
        assert_eq!(m("1,2;3,4").to_string(), "1,2;3,4");
    }

    #[test]
    fn two_row_lift_examples() {
        assert_eq!(seq(&[1, 2, 1]).two_row_lift(), m("1,2,1;0,1,2"));
        assert_eq!(seq(&[3, 5, 3]).two_row_lift(), m("3,5,3;0,3,5"));
        assert_eq!(seq(&[1]).two_row_lift(), m("1;0"));
    }

    #[test]
    fn sequence_validation() {
        assert_eq!(PositiveSequence::new(vec![]), Err(Tp2Error::EmptySequence));
        assert_eq!(
            PositiveSequence::from_u64s(&[1, 0, 2]),
            Err(Tp2Error::NonPositive { index: 1 })
        );
    }

    #[test]
    fn log_concave_examples() {
        assert!(seq(&[1, 3, 2]).is_log_concave());
        assert!(!seq(&[1, 2, 5]).is_log_concave());
        assert_eq!(seq(&[1, 2, 5]).log_concavity_violation(), Some(1));
        assert!(seq(&[3, 5, 3]).is_log_concave());
        assert!(seq(&[7]).is_log_concave());
        assert!(seq(&[1, 9]).is_log_concave());
    }

    #[test]
    fn unimodal_examples() {
        assert!(seq(&[3, 5, 3]).is_unimodal());
        assert!(!seq(&[3, 1, 3]).is_unimodal());
        assert_eq!(seq(&[3, 1, 3]).unimodality_violation(), Some(2));
        assert!(seq(&[2, 2, 2]).is_unimodal());
        assert!(seq(&[1, 2, 2, 1, 1]).is_unimodal());
        assert!(!seq(&[1, 2, 2, 1, 1, 2]).is_unimodal());
    }

    #[test]
    fn ratio_dominance_examples() {
        let p = |a: &[u64], x: &[u64]| SequencePair::from_u64s(a, x).unwrap();
        assert!(p(&[1, 2], &[1, 1]).check_ratio_dominance());
        assert!(!p(&[2, 1], &[1, 1]).check_ratio_dominance());
        assert_eq!(p(&[2, 1], &[1, 1]).ratio_dominance_violation(), Some(0));
        assert!(p(&[0, 0, 1], &[1, 1, 1]).check_ratio_dominance());
        assert!(matches!(
            SequencePair::from_u64s(&[1], &[1, 2]),
            Err(Tp2Error::LengthMismatch { a: 1, x: 2 })
        ));
        assert!(matches!(
            SequencePair::from_u64s(&[1, 1], &[1, 0]),
            Err(Tp2Error::NonPositive { index: 1 })
        ));
    }

    #[test]
    fn partial_sum_dominance_examples() {
        let p = SequencePair::from_u64s(&[1, 2], &[1, 1]).unwrap();
        let small = |v: &[BigUint]| {
            v.iter()
                .map(|e| u64::try_from(e).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(small(p.a_sums()), [1, 3]);
        assert_eq!(small(p.x_sums()), [1, 2]);
        assert!(p.partial_sum_dominance());
        assert!(SequencePair::from_u64s(&[0, 1], &[1, 1])
            .unwrap()
            .partial_sum_dominance());
        assert!(!SequencePair::from_u64s(&[3, 0], &[1, 1])
            .unwrap()
            .partial_sum_dominance());
    }

    #[test]
    fn partial_sums_preserve_log_concavity_examples() {
        assert_eq!(
            seq(&[1, 1, 1]).partial_sums_preserve_log_concavity(),
            Ok(true)
        );
        assert_eq!(seq(&[1, 2, 1]).partial_sums(), seq(&[1, 3, 4]));
        assert_eq!(
            seq(&[1, 2, 1]).partial_sums_preserve_log_concavity(),
            Ok(true)
        );
        assert_eq!(
            seq(&[1, 2, 5]).partial_sums_preserve_log_concavity(),
            Err(Tp2Error::PreconditionViolated { index: 1 })
        );
    }

    #[test]
    fn multiply_examples() {
        let lifted = seq(&[1, 2, 1]).two_row_lift();
        let product = lifted
            .multiply(&MatrixNN::upper_triangular_ones(3))
            .unwrap();
        assert_eq!(product, m("1,3,4;0,1,3"));

        let a = m("1,2,3;4,5,6");
        assert_eq!(MatrixNN::identity(2).multiply(&a).unwrap(), a);
        assert_eq!(
            a.multiply(&m("1,2;3,4")),
            Err(Tp2Error::DimensionMismatch {
                left_cols: 3,
                right_rows: 2
            })
        );
    }

    #[test]
    fn stacked_pair_rows() {
        let p = SequencePair::from_u64s(&[1, 2], &[3, 4]).unwrap();
        assert_eq!(stacked_pair(&p), m("3,4;1,2"));
        assert_eq!(stacked_pair(&p).is_tp2(), p.check_ratio_dominance());
    }

    #[test]
    fn two_row_fast_path_handles_zero_columns() {
        // zero columns contribute only zero minors
        let wide = m("0,1,0,2,0,0,3,0,4,0;0,1,0,2,0,0,4,0,6,0");
        assert_eq!(wide.cols(), 10);
        assert!(wide.is_tp2());
        assert!(wide.negative_minor_with(Tp2Strategy::AllMinors).is_none());

        let bad = m("0,1,0,2,0,0,3,0,4,0;0,1,0,3,0,0,4,0,6,0");
        let fast = bad.negative_minor().unwrap();
        assert!(bad.negative_minor_with(Tp2Strategy::AllMinors).is_some());
        assert!(fast.determinant < BigInt::zero());
        assert_eq!(fast.cols, (3, 6));

        // a column zero in one row only still counts
        let edge = m("1,0,0,0,0,0,0,0,0,1;0,0,0,0,0,0,0,0,0,1");
        assert!(edge.is_tp2());
        let flipped = m("0,0,0,0,0,0,0,0,0,1;1,0,0,0,0,0,0,0,0,1");
        assert!(!flipped.is_tp2());
    }
}
