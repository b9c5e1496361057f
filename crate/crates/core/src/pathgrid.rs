//! Counting monotone lattice paths in `R(m, n)` with a Ferrers diagram removed
//! from the upper-left corner.
//!
//! Coordinates put the lower-left corner at `(0, 0)` and the upper-right at
//! `(n, m)`. Row `i` (1-indexed from the top) spans heights `[m−i, m−i+1]`
//! and column `j` spans `[j−1, j]`. A path may touch the lower and right
//! boundaries of the removed cells but never runs through or along the
//! inside of the diagram:
//!
//! * the horizontal edge at height `y` across column `j` is admissible iff
//!   `y ≤ m − λ′_j`;
//! * the vertical edge at abscissa `x` through row `i` is admissible iff
//!   `x ≥ λ_i`.
//!
//! Three independent engines are provided: a vertex DP ([`count_dp`]), the
//! first-column recursion ([`count_recursive`]) and explicit enumeration
//! ([`enumerate_paths`]).

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("partition ({lambda}) does not fit in a {m}×{n} grid")]
    DoesNotFit {
        m: usize,
        n: usize,
        lambda: Partition,
    },
    #[error("{total} unrestricted paths exceed the enumeration cap of {cap}")]
    CapExceeded { total: BigUint, cap: u64 },
}

/// The grid `R(m, n)` with `λ` removed from its upper-left corner.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridRegion {
    m: usize,
    n: usize,
    lambda: Partition,
    conj: Partition,
}

impl GridRegion {
    pub fn new(m: usize, n: usize, lambda: Partition) -> Result<Self, GridError> {
        if !lambda.fits_in_box(m, n) {
            return Err(GridError::DoesNotFit { m, n, lambda });
        }
        let conj = lambda.conjugate();
        Ok(GridRegion { m, n, lambda, conj })
    }

    /// Number of rows.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of columns.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    /// Horizontal edge from `(x−1, y)` to `(x, y)`, for `1 ≤ x ≤ n`.
    pub fn horizontal_admissible(&self, x: usize, y: usize) -> bool {
        debug_assert!(x >= 1 && x <= self.n && y <= self.m);
        y + self.conj.part(x) <= self.m
    }

    /// Vertical edge from `(x, y−1)` to `(x, y)`, for `1 ≤ y ≤ m`.
    pub fn vertical_admissible(&self, x: usize, y: usize) -> bool {
        debug_assert!(y >= 1 && y <= self.m && x <= self.n);
        let row = self.m - y + 1;
        x >= self.lambda.part(row)
    }

    /// The region reflected through the anti-diagonal: `(n, m, λ′)`.
    pub fn transpose(&self) -> GridRegion {
        GridRegion {
            m: self.n,
            n: self.m,
            lambda: self.conj.clone(),
            conj: self.lambda.clone(),
        }
    }
}

/// A path count `N(m, n, λ)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathCount(pub BigUint);

impl PathCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }
}

impl fmt::Display for PathCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for PathCount {
    fn from(v: u64) -> Self {
        PathCount(BigUint::from(v))
    }
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // each prefix product C(n−k+i+1, i+1) is an integer
        acc *= n - k + i + 1;
        acc /= i + 1;
    }
    acc
}

/// How much of the DP table [`count_dp_with`] keeps alive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DpMemory {
    /// One rolled row of `n + 1` counts.
    #[default]
    Rolling,
    /// The full `(m + 1) × (n + 1)` vertex table.
    FullTable,
}

/// `N(m, n, λ)` by the vertex DP with a rolled row.
pub fn count_dp(region: &GridRegion) -> PathCount {
    count_dp_with(region, DpMemory::Rolling)
}

pub fn count_dp_with(region: &GridRegion, memory: DpMemory) -> PathCount {
    match memory {
        DpMemory::Rolling => {
            let mut row = vec![BigUint::zero(); region.n + 1];
            row[0] = BigUint::one();
            fill_row(region, 0, &mut row);
            for y in 1..=region.m {
                fill_row(region, y, &mut row);
            }
            PathCount(row.pop().expect("row has n + 1 entries"))
        }
        DpMemory::FullTable => {
            let table = dp_table(region);
            PathCount(table[region.m][region.n].clone())
        }
    }
}

/// The full vertex table `f[y][x]` = number of admissible paths from the
/// origin to `(x, y)`.
pub fn dp_table(region: &GridRegion) -> Vec<Vec<BigUint>> {
    let mut table = Vec::with_capacity(region.m + 1);
    let mut row = vec![BigUint::zero(); region.n + 1];
    row[0] = BigUint::one();
    for y in 0..=region.m {
        fill_row(region, y, &mut row);
        table.push(row.clone());
    }
    table
}

// Advances `row` (holding height y−1, or the seed at y = 0) to height `y`.
fn fill_row(region: &GridRegion, y: usize, row: &mut [BigUint]) {
    if y > 0 && !region.vertical_admissible(0, y) {
        row[0].set_zero();
    }
    for x in 1..=region.n {
        if y > 0 && !region.vertical_admissible(x, y) {
            row[x].set_zero();
        }
        if region.horizontal_admissible(x, y) {
            let (left, right) = row.split_at_mut(x);
            right[0] += &left[x - 1];
        }
    }
}

/// `N(m, n, λ)` by peeling the first column of `λ`:
/// `N(m, n, λ) = Σ_{k=λ′₁}^{m} N(k, n−1, μ)` with `μ` the diagram minus its
/// first column, bottoming out at `C(m+n, n)` for `λ = ∅`.
pub fn count_recursive(region: &GridRegion) -> PathCount {
    let mut memo = HashMap::new();
    PathCount(recurse(region.m, region.n, &region.lambda, &mut memo))
}

fn recurse(
    m: usize,
    n: usize,
    lambda: &Partition,
    memo: &mut HashMap<(usize, usize, Partition), BigUint>,
) -> BigUint {
    if lambda.is_empty() {
        return binomial(m + n, n);
    }
    let key = (m, n, lambda.clone());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mu = lambda
        .remove_first_column()
        .expect("nonempty partition has a first column");
    let total =
        (lambda.len()..=m).fold(BigUint::zero(), |acc, k| acc + recurse(k, n - 1, &mu, memo));
    memo.insert(key, total.clone());
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    Up,
    Right,
}

impl Step {
    pub fn as_char(self) -> char {
        match self {
            Step::Up => 'U',
            Step::Right => 'R',
        }
    }
}

/// A monotone path from `(0, 0)` to `(n, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePath {
    steps: Vec<Step>,
}

impl LatticePath {
    pub fn new(steps: Vec<Step>) -> Self {
        LatticePath { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Checks step counts and every traversed edge against `region`.
    pub fn is_admissible(&self, region: &GridRegion) -> bool {
        let ups = self.steps.iter().filter(|&&s| s == Step::Up).count();
        if ups != region.m || self.steps.len() != region.m + region.n {
            return false;
        }
        let (mut x, mut y) = (0, 0);
        for &s in &self.steps {
            let ok = match s {
                Step::Right => {
                    x += 1;
                    region.horizontal_admissible(x, y)
                }
                Step::Up => {
                    y += 1;
                    region.vertical_admissible(x, y)
                }
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.steps
            .iter()
            .try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

/// Lists every admissible path, refusing when `C(m+n, n) > cap`.
///
/// Paths come out in lexicographic order with `Up < Right`.
pub fn enumerate_paths(region: &GridRegion, cap: u64) -> Result<Vec<LatticePath>, GridError> {
    let total = binomial(region.m + region.n, region.n);
    if total > BigUint::from(cap) {
        return Err(GridError::CapExceeded { total, cap });
    }
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity(region.m + region.n);
    walk(region, 0, 0, &mut steps, &mut out);
    debug_assert!(out.iter().all(|p| p.is_admissible(region)));
    Ok(out)
}

fn walk(
    region: &GridRegion,
    x: usize,
    y: usize,
    steps: &mut Vec<Step>,
    out: &mut Vec<LatticePath>,
) {
    if x == region.n && y == region.m {
        out.push(LatticePath::new(steps.clone()));
        return;
    }
    if y < region.m && region.vertical_admissible(x, y + 1) {
        steps.push(Step::Up);
        walk(region, x, y + 1, steps, out);
        steps.pop();
    }
    if x < region.n && region.horizontal_admissible(x + 1, y) {
        steps.push(Step::Right);
        walk(region, x + 1, y, steps, out);
        steps.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(m: usize, n: usize, parts: &[usize]) -> GridRegion {
        GridRegion::new(m, n, Partition::new(parts.to_vec()).unwrap()).unwrap()
    }

    fn n_dp(m: usize, n: usize, parts: &[usize]) -> u64 {
        count_dp(&region(m, n, parts)).0.try_into().unwrap()
    }

    fn n_rec(m: usize, n: usize, parts: &[usize]) -> u64 {
        count_recursive(&region(m, n, parts)).0.try_into().unwrap()
    }

    #[test]
    fn region_rejects_oversized_partition() {
        let lam = Partition::new(vec![2]).unwrap();
        assert!(matches!(
            GridRegion::new(1, 1, lam),
            Err(GridError::DoesNotFit { m: 1, n: 1, .. })
        ));
    }

    #[test]
    fn count_dp_examples() {
        assert_eq!(n_dp(2, 2, &[]), 6);
        assert_eq!(n_dp(1, 1, &[1]), 1);
        assert_eq!(n_dp(2, 2, &[1]), 5);
        assert_eq!(n_dp(0, 0, &[]), 1);
        assert_eq!(n_dp(0, 4, &[]), 1);
        assert_eq!(n_dp(4, 0, &[]), 1);
    }

    #[test]
    fn count_recursive_examples() {
        assert_eq!(n_rec(3, 1, &[1]), 3);
        assert_eq!(n_rec(1, 3, &[1]), 3);
        assert_eq!(n_rec(2, 2, &[2, 1]), 2);
        assert_eq!(n_rec(2, 2, &[1]), 5);
        assert_eq!(n_rec(0, 0, &[]), 1);
    }

    #[test]
    fn full_table_matches_rolling_row() {
        for lam in Partition::all_in_box(4, 5) {
            let r = GridRegion::new(4, 5, lam).unwrap();
            assert_eq!(count_dp_with(&r, DpMemory::FullTable), count_dp(&r));
        }
    }

    #[test]
    fn enumerate_examples() {
        let single = enumerate_paths(&region(1, 1, &[1]), 10).unwrap();
        assert_eq!(single, vec![LatticePath::new(vec![Step::Right, Step::Up])]);

        let both = enumerate_paths(&region(1, 1, &[]), 10).unwrap();
        assert_eq!(both.len(), 2);
        assert!(both.contains(&LatticePath::new(vec![Step::Right, Step::Up])));
        assert!(both.contains(&LatticePath::new(vec![Step::Up, Step::Right])));

        assert!(matches!(
            enumerate_paths(&region(20, 20, &[]), 1_000_000),
            Err(GridError::CapExceeded { cap: 1_000_000, .. })
        ));
        // the cap bounds the unrestricted count, inclusive
        assert!(enumerate_paths(&region(2, 2, &[]), 6).is_ok());
        assert!(enumerate_paths(&region(2, 2, &[]), 5).is_err());
    }

    #[test]
    fn path_validation() {
        let r = region(1, 1, &[1]);
        assert!(LatticePath::new(vec![Step::Right, Step::Up]).is_admissible(&r));
        assert!(!LatticePath::new(vec![Step::Up, Step::Right]).is_admissible(&r));
        assert!(!LatticePath::new(vec![Step::Right]).is_admissible(&r));
        assert_eq!(
            LatticePath::new(vec![Step::Right, Step::Up]).to_string(),
            "RU"
        );
    }

    #[test]
    fn transpose_examples() {
        let t = region(2, 3, &[2, 1]).transpose();
        assert_eq!((t.m(), t.n(), t.lambda().parts()), (3, 2, &[2, 1][..]));
        let t = region(1, 3, &[1]).transpose();
        assert_eq!((t.m(), t.n(), t.lambda().parts()), (3, 1, &[1][..]));
        let r = region(2, 2, &[1]);
        assert_eq!(count_dp(&r.transpose()), count_dp(&r));
        assert_eq!(count_dp(&r).0, BigUint::from(5u32));
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(40, 20), BigUint::from(137_846_528_820u64));
    }

    #[test]
    fn monotone_in_rows() {
        for lam in Partition::all_in_box(4, 4) {
            for m in lam.len()..=5 {
                for n in lam.width()..=5 {
                    assert!(n_dp(m + 1, n, lam.parts()) >= n_dp(m, n, lam.parts()));
                }
            }
        }
    }

    #[test]
    fn counts_exceed_u64_without_overflow() {
        let c = count_dp(&region(40, 40, &[]));
        assert_eq!(c.0, binomial(80, 40));
        assert!(c.0 > BigUint::from(u64::MAX));
    }
}
