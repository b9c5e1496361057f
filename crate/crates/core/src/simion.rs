//! Anti-diagonal sequences `N(λ′₁+i, λ₁+ℓ−i, λ)` and the inequality chain
//! behind their log-concavity, checked exactly over exhaustive or seeded
//! random ranges.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::decimal;
use crate::partition::Partition;
use crate::pathgrid::{count_dp, GridRegion, PathCount};
use crate::tp2::PositiveSequence;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimionError {
    #[error("{id} at (m={m}, n={n}) references N({grid_m}, {grid_n}, ({lambda})), which is outside the domain")]
    OutOfDomain {
        id: Inequality,
        m: usize,
        n: usize,
        lambda: Partition,
        grid_m: i64,
        grid_n: i64,
    },
}

fn serialize_partition<S: Serializer>(p: &Partition, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}

/// Memoized `N(m, n, λ)` for one fixed `λ`.
#[derive(Debug, Clone)]
pub struct CountCache {
    lambda: Partition,
    counts: HashMap<(usize, usize), BigUint>,
}

impl CountCache {
    pub fn new(lambda: Partition) -> Self {
        CountCache {
            lambda,
            counts: HashMap::new(),
        }
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    /// `N(m, n, λ)`, or `None` when `λ` does not fit in `m × n`.
    pub fn get(&mut self, m: i64, n: i64) -> Option<BigUint> {
        if m < 0 || n < 0 || !self.lambda.fits_in_box(m as usize, n as usize) {
            return None;
        }
        let key = (m as usize, n as usize);
        if let Some(v) = self.counts.get(&key) {
            return Some(v.clone());
        }
        let region = GridRegion::new(key.0, key.1, self.lambda.clone()).ok()?;
        let v = count_dp(&region).into_inner();
        self.counts.insert(key, v.clone());
        Some(v)
    }
}

/// The sequence `N(λ′₁, λ₁+ℓ, λ), N(λ′₁+1, λ₁+ℓ−1, λ), …, N(λ′₁+ℓ, λ₁, λ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimionSequence {
    lambda: Partition,
    ell: usize,
    values: Vec<PathCount>,
}

impl SimionSequence {
    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn values(&self) -> &[PathCount] {
        &self.values
    }

    /// Grid dimensions `(m, n)` of term `i`.
    pub fn grid(&self, i: usize) -> (usize, usize) {
        (self.lambda.len() + i, self.lambda.width() + self.ell - i)
    }

    pub fn as_positive(&self) -> PositiveSequence {
        PositiveSequence::new(self.values.iter().map(|c| c.value().clone()).collect())
            .expect("every grid on the anti-diagonal admits a path")
    }
}

pub fn simion_sequence(lambda: &Partition, ell: usize) -> SimionSequence {
    let mut cache = CountCache::new(lambda.clone());
    simion_sequence_cached(&mut cache, ell)
}

fn simion_sequence_cached(cache: &mut CountCache, ell: usize) -> SimionSequence {
    let (r, w) = (cache.lambda.len() as i64, cache.lambda.width() as i64);
    let values = (0..=ell as i64)
        .map(|i| {
            let v = cache
                .get(r + i, w + ell as i64 - i)
                .expect("anti-diagonal grids fit");
            PathCount(v)
        })
        .collect();
    SimionSequence {
        lambda: cache.lambda.clone(),
        ell,
        values,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub log_concave: bool,
    pub unimodal: bool,
}

/// Log-concavity and unimodality of the sequence for `(λ, ℓ)`.
pub fn verify_theorem(lambda: &Partition, ell: usize) -> Verdict {
    verdict_of(&simion_sequence(lambda, ell))
}

fn verdict_of(seq: &SimionSequence) -> Verdict {
    let x = seq.as_positive();
    Verdict {
        log_concave: x.is_log_concave(),
        unimodal: x.is_unimodal(),
    }
}

/// The four inequalities of the chain and the final log-concavity step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Inequality {
    Eq1,
    Eq2,
    Eq3,
    Eq4,
    LogConcaveFinal,
}

type Offsets = [(i64, i64); 2];

impl Inequality {
    pub const ALL: [Inequality; 5] = [
        Inequality::Eq1,
        Inequality::Eq2,
        Inequality::Eq3,
        Inequality::Eq4,
        Inequality::LogConcaveFinal,
    ];

    /// Grid offsets `(Δm, Δn)` of the two factors on each side; the
    /// inequality reads `lhs₀·lhs₁ ≤ rhs₀·rhs₁`.
    pub fn terms(self) -> (Offsets, Offsets) {
        match self {
            // N(m,n+1)N(m+1,n) ≤ N(m,n)N(m+1,n+1)
            Inequality::Eq1 => ([(0, 1), (1, 0)], [(0, 0), (1, 1)]),
            // N(m−1,n+1)N(m+1,n+1) ≤ N(m,n+1)²
            Inequality::Eq2 => ([(-1, 1), (1, 1)], [(0, 1), (0, 1)]),
            // N(m−1,n+1)N(m+1,n) ≤ N(m,n)N(m,n+1)
            Inequality::Eq3 => ([(-1, 1), (1, 0)], [(0, 0), (0, 1)]),
            // N(m+1,n−1)N(m,n+1) ≤ N(m,n)N(m+1,n)
            Inequality::Eq4 => ([(1, -1), (0, 1)], [(0, 0), (1, 0)]),
            // N(m+1,n−1)N(m−1,n+1) ≤ N(m,n)²
            Inequality::LogConcaveFinal => ([(1, -1), (-1, 1)], [(0, 0), (0, 0)]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Inequality::Eq1 => "Eq1",
            Inequality::Eq2 => "Eq2",
            Inequality::Eq3 => "Eq3",
            Inequality::Eq4 => "Eq4",
            Inequality::LogConcaveFinal => "LogConcaveFinal",
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One factor `N(m, n, λ)` of an inequality side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub m: usize,
    pub n: usize,
    #[serde(serialize_with = "decimal::serialize")]
    pub count: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IneqReport {
    pub id: Inequality,
    pub m: usize,
    pub n: usize,
    #[serde(serialize_with = "serialize_partition")]
    pub lambda: Partition,
    pub lhs_factors: [Factor; 2],
    pub rhs_factors: [Factor; 2],
    #[serde(serialize_with = "decimal::serialize")]
    pub lhs: BigUint,
    #[serde(serialize_with = "decimal::serialize")]
    pub rhs: BigUint,
    pub holds: bool,
}

/// Evaluates one inequality at `(m, n, λ)`, exactly.
pub fn check_inequality(
    id: Inequality,
    m: usize,
    n: usize,
    lambda: &Partition,
) -> Result<IneqReport, SimionError> {
    check_inequality_cached(&mut CountCache::new(lambda.clone()), id, m, n)
}

pub fn check_inequality_cached(
    cache: &mut CountCache,
    id: Inequality,
    m: usize,
    n: usize,
) -> Result<IneqReport, SimionError> {
    let (lhs_off, rhs_off) = id.terms();
    let mut factor = |(dm, dn): (i64, i64)| {
        let (gm, gn) = (m as i64 + dm, n as i64 + dn);
        match cache.get(gm, gn) {
            Some(count) => Ok(Factor {
                m: gm as usize,
                n: gn as usize,
                count,
            }),
            None => Err(SimionError::OutOfDomain {
                id,
                m,
                n,
                lambda: cache.lambda.clone(),
                grid_m: gm,
                grid_n: gn,
            }),
        }
    };
    let lhs_factors = [factor(lhs_off[0])?, factor(lhs_off[1])?];
    let rhs_factors = [factor(rhs_off[0])?, factor(rhs_off[1])?];
    let lhs = &lhs_factors[0].count * &lhs_factors[1].count;
    let rhs = &rhs_factors[0].count * &rhs_factors[1].count;
    let holds = lhs <= rhs;
    Ok(IneqReport {
        id,
        m,
        n,
        lambda: cache.lambda.clone(),
        lhs_factors,
        rhs_factors,
        lhs,
        rhs,
        holds,
    })
}

/// All five inequalities at one point, plus the two implications
/// `(1) ∧ (2) ⇒ (3)` and `(3) ∧ (4) ⇒ final`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub m: usize,
    pub n: usize,
    #[serde(serialize_with = "serialize_partition")]
    pub lambda: Partition,
    pub reports: Vec<IneqReport>,
    pub eq1_eq2_imply_eq3: bool,
    pub eq3_eq4_imply_final: bool,
}

impl ChainReport {
    pub fn report(&self, id: Inequality) -> &IneqReport {
        self.reports
            .iter()
            .find(|r| r.id == id)
            .expect("chain holds all five")
    }

    pub fn all_hold(&self) -> bool {
        self.reports.iter().all(|r| r.holds) && self.eq1_eq2_imply_eq3 && self.eq3_eq4_imply_final
    }
}

pub fn derive_chain(m: usize, n: usize, lambda: &Partition) -> Result<ChainReport, SimionError> {
    derive_chain_cached(&mut CountCache::new(lambda.clone()), m, n)
}

pub fn derive_chain_cached(
    cache: &mut CountCache,
    m: usize,
    n: usize,
) -> Result<ChainReport, SimionError> {
    let reports = Inequality::ALL
        .iter()
        .map(|&id| check_inequality_cached(cache, id, m, n))
        .collect::<Result<Vec<_>, _>>()?;
    let holds = |i: usize| reports[i].holds;
    Ok(ChainReport {
        m,
        n,
        lambda: cache.lambda.clone(),
        eq1_eq2_imply_eq3: !(holds(0) && holds(1)) || holds(2),
        eq3_eq4_imply_final: !(holds(2) && holds(3)) || holds(4),
        reports,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    Exhaustive,
    Random { seed: u64, samples: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepScope {
    Theorem,
    Chain,
    All,
}

impl SweepScope {
    fn theorem(self) -> bool {
        matches!(self, SweepScope::Theorem | SweepScope::All)
    }

    fn chain(self) -> bool {
        matches!(self, SweepScope::Chain | SweepScope::All)
    }
}

/// Parameters of a verification campaign.
///
/// Partitions range over the `box_m × box_n` box and `ℓ` over `0..=ell_max`.
/// The chain is evaluated at every grid `(λ′₁+i, λ₁+ℓ−i)` on those
/// anti-diagonals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub box_m: usize,
    pub box_n: usize,
    pub ell_max: usize,
    pub mode: SweepMode,
    pub scope: SweepScope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Theorem,
    Chain,
}

/// One row of a sweep: a `(λ, ℓ)` sequence check or a chain point `(m, n, λ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceRecord {
    pub kind: InstanceKind,
    pub partition: String,
    pub ell: Option<usize>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    /// Sequence values joined with spaces (theorem rows only).
    pub values: String,
    pub log_concave: Option<bool>,
    pub unimodal: Option<bool>,
    pub inequalities_checked: usize,
    pub inequalities_skipped: usize,
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotLogConcave {
        partition: String,
        ell: usize,
        #[serde(serialize_with = "decimal::serialize_seq")]
        values: Vec<BigUint>,
        index: usize,
        #[serde(serialize_with = "decimal::serialize")]
        outer_product: BigUint,
        #[serde(serialize_with = "decimal::serialize")]
        middle_square: BigUint,
    },
    NotUnimodal {
        partition: String,
        ell: usize,
        #[serde(serialize_with = "decimal::serialize_seq")]
        values: Vec<BigUint>,
        index: usize,
    },
    Inequality(IneqReport),
    Implication {
        partition: String,
        m: usize,
        n: usize,
        premises: [Inequality; 2],
        conclusion: Inequality,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepTotals {
    pub partitions: usize,
    pub theorem_instances: usize,
    pub chain_points: usize,
    pub inequalities_checked: usize,
    pub inequalities_skipped: usize,
    pub implications_checked: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub totals: SweepTotals,
    pub instances: Vec<InstanceRecord>,
    pub violations: Vec<Violation>,
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

// A unit of sweep work: one λ with the ℓ values and chain points to visit.
struct Task {
    lambda: Partition,
    items: Vec<(usize, Option<usize>)>,
}

struct TaskOutcome {
    records: Vec<InstanceRecord>,
    violations: Vec<Violation>,
    implications: usize,
}

pub fn sweep(config: &SweepConfig) -> SweepReport {
    sweep_with_progress(config, |_, _| {})
}

/// Runs the campaign, calling `progress(done, total)` after each task.
/// Tasks run in parallel; records come back in enumeration order.
pub fn sweep_with_progress<F>(config: &SweepConfig, progress: F) -> SweepReport
where
    F: Fn(usize, usize) + Sync,
{
    let tasks = plan(config);
    let total = tasks.len();
    let done = AtomicUsize::new(0);
    let outcomes: Vec<TaskOutcome> = tasks
        .par_iter()
        .map(|task| {
            let out = run_task(task, config.scope);
            progress(done.fetch_add(1, Ordering::Relaxed) + 1, total);
            out
        })
        .collect();

    let mut partitions: Vec<&Partition> = tasks.iter().map(|t| &t.lambda).collect();
    partitions.sort();
    partitions.dedup();
    let mut totals = SweepTotals {
        partitions: partitions.len(),
        ..Default::default()
    };
    let mut instances = Vec::new();
    let mut violations = Vec::new();
    for out in outcomes {
        totals.implications_checked += out.implications;
        for rec in &out.records {
            match rec.kind {
                InstanceKind::Theorem => totals.theorem_instances += 1,
                InstanceKind::Chain => totals.chain_points += 1,
            }
            totals.inequalities_checked += rec.inequalities_checked;
            totals.inequalities_skipped += rec.inequalities_skipped;
        }
        instances.extend(out.records);
        violations.extend(out.violations);
    }
    totals.violations = violations.len();
    SweepReport {
        config: *config,
        totals,
        instances,
        violations,
    }
}

fn plan(config: &SweepConfig) -> Vec<Task> {
    match config.mode {
        SweepMode::Exhaustive => Partition::all_in_box(config.box_m, config.box_n)
            .into_iter()
            .map(|lambda| {
                let items = (0..=config.ell_max)
                    .flat_map(|ell| {
                        std::iter::once((ell, None)).chain((0..=ell).map(move |i| (ell, Some(i))))
                    })
                    .collect();
                Task { lambda, items }
            })
            .collect(),
        SweepMode::Random { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples)
                .map(|_| {
                    let lambda = random_partition(&mut rng, config.box_m, config.box_n);
                    let ell = rng.gen_range(0..=config.ell_max);
                    let i = rng.gen_range(0..=ell);
                    Task {
                        lambda,
                        items: vec![(ell, None), (ell, Some(i))],
                    }
                })
                .collect()
        }
    }
}

/// Uniform partition in a `rows × cols` box, read off a uniform lattice path.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Partition {
    // positions of the `rows` up-steps among rows + cols steps, bottom to top
    let mut ups = sample(rng, rows + cols, rows).into_vec();
    ups.sort_unstable();
    // the k-th up-step (from the bottom) at position p leaves p − k cells of
    // its row to the upper-left of the path
    let parts: Vec<usize> = ups.iter().enumerate().rev().map(|(k, &p)| p - k).collect();
    Partition::new(parts).expect("row lengths decrease upward")
}

fn run_task(task: &Task, scope: SweepScope) -> TaskOutcome {
    let mut cache = CountCache::new(task.lambda.clone());
    let mut out = TaskOutcome {
        records: Vec::new(),
        violations: Vec::new(),
        implications: 0,
    };
    let text = task.lambda.to_string();
    for &(ell, point) in &task.items {
        match point {
            None if scope.theorem() => theorem_instance(&mut cache, &text, ell, &mut out),
            Some(i) if scope.chain() => {
                let m = task.lambda.len() + i;
                let n = task.lambda.width() + ell - i;
                chain_instance(&mut cache, &text, ell, m, n, &mut out);
            }
            _ => {}
        }
    }
    out
}

fn theorem_instance(cache: &mut CountCache, text: &str, ell: usize, out: &mut TaskOutcome) {
    let seq = simion_sequence_cached(cache, ell);
    let x = seq.as_positive();
    let values: Vec<BigUint> = x.values().to_vec();
    let lc = x.log_concavity_violation();
    let uni = x.unimodality_violation();
    if let Some(index) = lc {
        out.violations.push(Violation::NotLogConcave {
            partition: text.to_string(),
            ell,
            outer_product: &values[index - 1] * &values[index + 1],
            middle_square: &values[index] * &values[index],
            values: values.clone(),
            index,
        });
    }
    if let Some(index) = uni {
        out.violations.push(Violation::NotUnimodal {
            partition: text.to_string(),
            ell,
            values: values.clone(),
            index,
        });
    }
    out.records.push(InstanceRecord {
        kind: InstanceKind::Theorem,
        partition: text.to_string(),
        ell: Some(ell),
        m: None,
        n: None,
        values: values
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" "),
        log_concave: Some(lc.is_none()),
        unimodal: Some(uni.is_none()),
        inequalities_checked: 0,
        inequalities_skipped: 0,
        violation: lc.is_some() || uni.is_some(),
    });
}

// Evaluates whatever part of the chain is in domain at (m, n); the rest is
// counted as skipped.
fn chain_instance(
    cache: &mut CountCache,
    text: &str,
    ell: usize,
    m: usize,
    n: usize,
    out: &mut TaskOutcome,
) {
    let results: Vec<Option<IneqReport>> = Inequality::ALL
        .iter()
        .map(|&id| check_inequality_cached(cache, id, m, n).ok())
        .collect();
    let checked = results.iter().flatten().count();
    let before = out.violations.len();
    for r in results.iter().flatten().filter(|r| !r.holds) {
        out.violations.push(Violation::Inequality(r.clone()));
    }
    let holds = |i: usize| results[i].as_ref().map(|r| r.holds);
    let implications = [
        (
            [0, 1],
            2,
            [Inequality::Eq1, Inequality::Eq2],
            Inequality::Eq3,
        ),
        (
            [2, 3],
            4,
            [Inequality::Eq3, Inequality::Eq4],
            Inequality::LogConcaveFinal,
        ),
    ];
    for (prem, concl, premises, conclusion) in implications {
        if let (Some(a), Some(b), Some(c)) = (holds(prem[0]), holds(prem[1]), holds(concl)) {
            out.implications += 1;
            if a && b && !c {
                out.violations.push(Violation::Implication {
                    partition: text.to_string(),
                    m,
                    n,
                    premises,
                    conclusion,
                });
            }
        }
    }
    out.records.push(InstanceRecord {
        kind: InstanceKind::Chain,
        partition: text.to_string(),
        ell: Some(ell),
        m: Some(m),
        n: Some(n),
        values: String::new(),
        log_concave: None,
        unimodal: None,
        inequalities_checked: checked,
        inequalities_skipped: Inequality::ALL.len() - checked,
        violation: out.violations.len() > before,
    });
}
