//! Integer partitions and their Ferrers diagrams.
//!
//! A [`Partition`] is stored in canonical form: weakly decreasing positive
//! parts with no trailing zeros. The diagram is anchored at the upper-left
//! corner, so row `i` (1-indexed from the top) holds `parts[i - 1]` cells.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("invalid partition: part {index} ({value}) exceeds the part before it ({previous})")]
    InvalidPartition {
        index: usize,
        value: usize,
        previous: usize,
    },
    #[error("operation requires a nonempty partition")]
    EmptyPartition,
    #[error("cannot parse partition {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// An integer partition `λ = (λ₁ ≥ λ₂ ≥ … ≥ λ_r ≥ 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from raw parts, stripping trailing zeros.
    ///
    /// Input that is not weakly decreasing is rejected rather than sorted.
    pub fn new(raw: impl Into<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut parts = raw.into();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if let Some(i) = parts.windows(2).position(|w| w[0] < w[1]) {
            return Err(PartitionError::InvalidPartition {
                index: i + 1,
                value: parts[i + 1],
                previous: parts[i],
            });
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of nonzero parts, `r = λ′₁`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Largest part `λ₁`, or 0 for the empty partition.
    pub fn width(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    /// `|λ|`, the number of cells in the diagram.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Part `λ_i` with 1-based `i`; zero past the last part.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Transpose of the diagram: `λ′_j = #{ i : λ_i ≥ j }`.
    pub fn conjugate(&self) -> Partition {
        let parts = (1..=self.width())
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    /// Deletes the first column of the diagram, giving `μ = (λ₁−1, …, λ_r−1)`.
    pub fn remove_first_column(&self) -> Result<Partition, PartitionError> {
        if self.is_empty() {
            return Err(PartitionError::EmptyPartition);
        }
        let parts = self
            .parts
            .iter()
            .map(|&p| p - 1)
            .take_while(|&p| p > 0)
            .collect();
        Ok(Partition { parts })
    }

    /// True iff the diagram fits in a box of `rows` rows and `cols` columns.
    pub fn fits_in_box(&self, rows: usize, cols: usize) -> bool {
        self.len() <= rows && self.width() <= cols
    }

    /// Every partition whose diagram fits in a `rows × cols` box, in
    /// lexicographic order on part lists with `∅` first.
    pub fn all_in_box(rows: usize, cols: usize) -> Vec<Partition> {
        fn extend(cur: &mut Vec<usize>, rows: usize, cap: usize, out: &mut Vec<Partition>) {
            out.push(Partition { parts: cur.clone() });
            if cur.len() == rows {
                return;
            }
            for p in 1..=cap {
                cur.push(p);
                extend(cur, rows, p, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        extend(&mut Vec::with_capacity(rows), rows, cols, &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Parses the comma-separated text form; the empty string is `∅`.
impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Ok(Partition::empty());
        }
        let raw = trimmed
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|e| PartitionError::Parse {
                        text: s.to_string(),
                        reason: format!("part {:?}: {e}", tok.trim()),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn construction_examples() {
        assert_eq!(p(&[3, 1]).parts(), &[3, 1]);
        assert_eq!(p(&[1, 0, 0]), p(&[1]));
        assert_eq!(p(&[0, 0]), Partition::empty());
        assert!(matches!(
            Partition::new(vec![1, 2]),
            Err(PartitionError::InvalidPartition {
                index: 1,
                value: 2,
                previous: 1
            })
        ));
        // zeros in the middle make the list non-monotone
        assert!(Partition::new(vec![2, 0, 1]).is_err());
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[2, 2]).conjugate(), p(&[2, 2]));
    }

    #[test]
    fn remove_first_column_examples() {
        assert_eq!(p(&[1]).remove_first_column().unwrap(), Partition::empty());
        assert_eq!(p(&[3, 1]).remove_first_column().unwrap(), p(&[2]));
        assert_eq!(p(&[2, 2]).remove_first_column().unwrap(), p(&[1, 1]));
        assert_eq!(
            Partition::empty().remove_first_column(),
            Err(PartitionError::EmptyPartition)
        );
    }

    #[test]
    fn fits_in_box_examples() {
        assert!(Partition::empty().fits_in_box(0, 0));
        assert!(p(&[3, 1]).fits_in_box(2, 3));
        assert!(!p(&[3, 1]).fits_in_box(1, 3));
        assert!(!p(&[3, 1]).fits_in_box(2, 2));
    }

    #[test]
    fn text_form() {
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!("3,1".parse::<Partition>().unwrap(), p(&[3, 1]));
        assert_eq!(" 2, 2 ,0".parse::<Partition>().unwrap(), p(&[2, 2]));
        assert!("1,x".parse::<Partition>().is_err());
        assert!("1,-1".parse::<Partition>().is_err());
        assert!(matches!(
            "1,2".parse::<Partition>(),
            Err(PartitionError::InvalidPartition { .. })
        ));
        assert_eq!(p(&[3, 1]).to_string(), "3,1");
        assert_eq!(Partition::empty().to_string(), "");
    }

    #[test]
    fn box_enumeration_order_and_size() {
        let small = Partition::all_in_box(2, 2);
        let texts: Vec<String> = small.iter().map(|p| p.to_string()).collect();
        assert_eq!(texts, ["", "1", "1,1", "2", "2,1", "2,2"]);
        assert_eq!(Partition::all_in_box(0, 5), vec![Partition::empty()]);
        // C(12, 6) partitions fit in a 6×6 box
        assert_eq!(Partition::all_in_box(6, 6).len(), 924);
        let all = Partition::all_in_box(4, 3);
        assert!(all.windows(2).all(|w| w[0].parts() < w[1].parts()));
    }

    #[test]
    fn box_invariants_exhaustive() {
        for lam in Partition::all_in_box(8, 8) {
            let conj = lam.conjugate();
            assert_eq!(conj.conjugate(), lam);
            assert_eq!(conj.size(), lam.size());
            assert_eq!(conj.len(), lam.width());
            if !lam.is_empty() {
                let mu = lam.remove_first_column().unwrap();
                assert_eq!(mu.conjugate().parts(), &conj.parts()[1..]);
            }
            for rows in 0..=9 {
                for cols in 0..=9 {
                    assert_eq!(lam.fits_in_box(rows, cols), conj.fits_in_box(cols, rows));
                }
            }
        }
    }

    #[test]
    fn text_round_trip_on_canonical_forms() {
        for lam in Partition::all_in_box(5, 5) {
            assert_eq!(lam.to_string().parse::<Partition>().unwrap(), lam);
        }
    }
}
