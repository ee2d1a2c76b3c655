//! Problem model shared by every solver: instances, schedules, lateness
//! metrics, the P/Q lower bounds and schedule validation.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{format_rational, max_of, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("an instance needs at least one machine")]
    NoMachines,
    #[error("p has {found} rows but the instance has {expected} machines")]
    RowCount { expected: usize, found: usize },
    #[error("p[{machine}] has {found} entries but the instance has {expected} jobs")]
    ColumnCount { machine: usize, expected: usize, found: usize },
    #[error("q has {found} entries but the instance has {expected} jobs")]
    DeliveryCount { expected: usize, found: usize },
    #[error("p[{machine}][{job}] is negative ({value})")]
    NegativeProcessing { machine: usize, job: usize, value: String },
    #[error("q[{job}] is negative ({value})")]
    NegativeDelivery { job: usize, value: String },
    #[error("schedule is infeasible: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidSchedule(Vec<Violation>),
}

/// An open shop instance: `m` machines, `n` jobs, processing times
/// `p[machine][job]` and delivery times `q[job]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    m: usize,
    n: usize,
    p: Vec<Vec<Rational>>,
    q: Vec<Rational>,
}

impl Instance {
    /// Builds an instance from a machine-major processing matrix. The job
    /// count is taken from `q`.
    pub fn new(p: Vec<Vec<Rational>>, q: Vec<Rational>) -> Result<Self, ModelError> {
        let m = p.len();
        let n = q.len();
        Self::with_dims(m, n, p, q)
    }

    /// Like [`Instance::new`] but checks the matrix against explicit
    /// dimensions (the file format carries `m` and `n` separately).
    pub fn with_dims(m: usize, n: usize, p: Vec<Vec<Rational>>, q: Vec<Rational>) -> Result<Self, ModelError> {
        if m == 0 {
            return Err(ModelError::NoMachines);
        }
        if p.len() != m {
            return Err(ModelError::RowCount { expected: m, found: p.len() });
        }
        if q.len() != n {
            return Err(ModelError::DeliveryCount { expected: n, found: q.len() });
        }
        for (machine, row) in p.iter().enumerate() {
            if row.len() != n {
                return Err(ModelError::ColumnCount { machine, expected: n, found: row.len() });
            }
            if let Some((job, value)) = row.iter().enumerate().find(|(_, v)| v.is_negative()) {
                return Err(ModelError::NegativeProcessing { machine, job, value: format_rational(value) });
            }
        }
        if let Some((job, value)) = q.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(ModelError::NegativeDelivery { job, value: format_rational(value) });
        }
        Ok(Self { m, n, p, q })
    }

    pub fn machines(&self) -> usize {
        self.m
    }

    pub fn jobs(&self) -> usize {
        self.n
    }

    pub fn processing(&self, machine: usize, job: usize) -> &Rational {
        &self.p[machine][job]
    }

    pub fn delivery(&self, job: usize) -> &Rational {
        &self.q[job]
    }

    pub fn processing_matrix(&self) -> &[Vec<Rational>] {
        &self.p
    }

    pub fn deliveries(&self) -> &[Rational] {
        &self.q
    }

    /// True when operation `(machine, job)` takes positive time and must
    /// therefore appear in a schedule.
    pub fn is_positive(&self, machine: usize, job: usize) -> bool {
        self.p[machine][job].is_positive()
    }

    /// Total work of a job over all machines.
    pub fn job_work(&self, job: usize) -> Rational {
        self.p.iter().map(|row| &row[job]).sum()
    }

    pub fn machine_load(&self, machine: usize) -> Rational {
        self.p[machine].iter().sum()
    }

    /// Longest operation of a job.
    pub fn max_operation(&self, job: usize) -> Rational {
        max_of(self.p.iter().map(|row| &row[job]))
    }

    /// Machines on which `job` has a positive operation, ascending.
    pub fn machines_of(&self, job: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.m).filter(move |&i| self.is_positive(i, job))
    }

    /// Same instance with every processing and delivery time multiplied by
    /// `factor`.
    pub fn scaled(&self, factor: &Rational) -> Self {
        Self {
            m: self.m,
            n: self.n,
            p: self.p.iter().map(|row| row.iter().map(|v| v * factor).collect()).collect(),
            q: self.q.iter().map(|v| v * factor).collect(),
        }
    }

    /// Relabels jobs so that new job `k` is old job `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            m: self.m,
            n: self.n,
            p: self.p.iter().map(|row| perm.iter().map(|&j| row[j].clone()).collect()).collect(),
            q: perm.iter().map(|&j| self.q[j].clone()).collect(),
        }
    }
}

/// One scheduled operation; occupies the half-open interval `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Operation {
    pub machine: usize,
    pub job: usize,
    pub start: Rational,
    pub end: Rational,
}

impl Operation {
    pub fn new(machine: usize, job: usize, start: Rational, end: Rational) -> Self {
        Self { machine, job, start, end }
    }

    /// Open-interval intersection: back-to-back operations do not overlap.
    pub fn overlaps(&self, other: &Operation) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// A set of operation records. Kept sorted by `(machine, start, job)` so
/// equal schedules have identical representations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schedule {
    ops: Vec<Operation>,
}

impl Schedule {
    pub fn new(mut ops: Vec<Operation>) -> Self {
        ops.sort_by(|a, b| (a.machine, &a.start, a.job, &a.end).cmp(&(b.machine, &b.start, b.job, &b.end)));
        Self { ops }
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn find(&self, machine: usize, job: usize) -> Option<&Operation> {
        self.ops.iter().find(|op| op.machine == machine && op.job == job)
    }

    pub fn on_machine(&self, machine: usize) -> impl Iterator<Item = &Operation> + '_ {
        self.ops.iter().filter(move |op| op.machine == machine)
    }

    pub fn of_job(&self, job: usize) -> impl Iterator<Item = &Operation> + '_ {
        self.ops.iter().filter(move |op| op.job == job)
    }

    pub fn makespan(&self) -> Rational {
        max_of(self.ops.iter().map(|op| &op.end))
    }

    pub fn into_ops(self) -> Vec<Operation> {
        self.ops
    }
}

impl FromIterator<Operation> for Schedule {
    fn from_iter<T: IntoIterator<Item = Operation>>(iter: T) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatenessProfile {
    pub completion: Vec<Rational>,
    pub lateness: Vec<Rational>,
    pub lmax: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    /// Largest machine workload.
    pub p: Rational,
    /// Largest `total work + delivery time` over jobs.
    pub q: Rational,
}

impl Bounds {
    pub fn lower_bound(&self) -> Rational {
        self.p.clone().max(self.q.clone())
    }

    pub fn sum(&self) -> Rational {
        &self.p + &self.q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    MachineOverlap,
    JobOverlap,
    MissingOperation,
    DuplicateOperation,
    NegativeStart,
    DurationMismatch,
    /// Record whose machine or job index is outside the instance.
    UnknownOperation,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::MachineOverlap => "machine-overlap",
            Self::JobOverlap => "job-overlap",
            Self::MissingOperation => "missing-operation",
            Self::DuplicateOperation => "duplicate-operation",
            Self::NegativeStart => "negative-start",
            Self::DurationMismatch => "duration-mismatch",
            Self::UnknownOperation => "unknown-operation",
        }
    }
}

/// A single feasibility problem. `ops` holds the offending records (two for
/// overlaps, one otherwise; for a missing operation the record carries the
/// required duration with a zero start).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub ops: Vec<Operation>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.as_str())?;
        for op in &self.ops {
            write!(
                f,
                " (machine {}, job {}, [{}, {}])",
                op.machine,
                op.job,
                format_rational(&op.start),
                format_rational(&op.end)
            )?;
        }
        Ok(())
    }
}

pub fn bounds(instance: &Instance) -> Bounds {
    let p = max_of(&(0..instance.machines()).map(|i| instance.machine_load(i)).collect::<Vec<_>>());
    let q = max_of(&(0..instance.jobs()).map(|j| instance.job_work(j) + instance.delivery(j)).collect::<Vec<_>>());
    Bounds { p, q }
}

/// Checks every schedule invariant. Returns an empty list iff the schedule
/// is feasible for `instance` and contains each positive operation once.
pub fn validate_schedule(instance: &Instance, schedule: &Schedule) -> Vec<Violation> {
    let (m, n) = (instance.machines(), instance.jobs());
    let mut violations = Vec::new();
    let mut seen = vec![vec![0usize; n]; m];
    let mut known: Vec<&Operation> = Vec::with_capacity(schedule.len());

    for op in schedule.ops() {
        if op.machine >= m || op.job >= n {
            violations.push(Violation { kind: ViolationKind::UnknownOperation, ops: vec![op.clone()] });
            continue;
        }
        seen[op.machine][op.job] += 1;
        if seen[op.machine][op.job] == 2 {
            violations.push(Violation { kind: ViolationKind::DuplicateOperation, ops: vec![op.clone()] });
        }
        if op.start.is_negative() {
            violations.push(Violation { kind: ViolationKind::NegativeStart, ops: vec![op.clone()] });
        }
        if &op.end - &op.start != *instance.processing(op.machine, op.job) {
            violations.push(Violation { kind: ViolationKind::DurationMismatch, ops: vec![op.clone()] });
        }
        known.push(op);
    }

    for (i, row) in seen.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            if count == 0 && instance.is_positive(i, j) {
                let p = instance.processing(i, j).clone();
                violations.push(Violation {
                    kind: ViolationKind::MissingOperation,
                    ops: vec![Operation::new(i, j, Rational::zero(), p)],
                });
            }
        }
    }

    let mut by_machine: Vec<Vec<&Operation>> = vec![Vec::new(); m];
    let mut by_job: Vec<Vec<&Operation>> = vec![Vec::new(); n];
    for op in known {
        by_machine[op.machine].push(op);
        by_job[op.job].push(op);
    }
    for group in &mut by_machine {
        report_overlaps(group, ViolationKind::MachineOverlap, &mut violations);
    }
    for group in &mut by_job {
        report_overlaps(group, ViolationKind::JobOverlap, &mut violations);
    }
    violations
}

fn report_overlaps(group: &mut [&Operation], kind: ViolationKind, out: &mut Vec<Violation>) {
    group.sort_by(|a, b| (&a.start, &a.end, a.machine, a.job).cmp(&(&b.start, &b.end, b.machine, b.job)));
    for (idx, a) in group.iter().enumerate() {
        for b in &group[idx + 1..] {
            if b.start >= a.end {
                break;
            }
            if a.overlaps(b) {
                out.push(Violation { kind, ops: vec![(*a).clone(), (*b).clone()] });
            }
        }
    }
}

/// Per-job completion times and lateness `C_j + q_j`, plus their maximum.
/// A job without positive operations completes at time zero.
pub fn lateness_profile(instance: &Instance, schedule: &Schedule) -> Result<LatenessProfile, ModelError> {
    let violations = validate_schedule(instance, schedule);
    if !violations.is_empty() {
        return Err(ModelError::InvalidSchedule(violations));
    }
    Ok(lateness_unchecked(instance, schedule))
}

/// Lateness profile without the validation pass. Callers must already know
/// the schedule is feasible.
pub(crate) fn lateness_unchecked(instance: &Instance, schedule: &Schedule) -> LatenessProfile {
    let mut completion = vec![Rational::zero(); instance.jobs()];
    for op in schedule.ops() {
        if op.end > completion[op.job] {
            completion[op.job] = op.end.clone();
        }
    }
    let lateness: Vec<Rational> = completion.iter().zip(instance.deliveries()).map(|(c, q)| c + q).collect();
    let lmax = max_of(&lateness);
    LatenessProfile { completion, lateness, lmax }
}
