//! Greedy list scheduling with an explicit job priority list.
//!
//! The engine never leaves a machine idle while some job could run on it:
//! at each decision instant the free machines, scanned by ascending index,
//! each take the highest-priority job that still needs a positive operation
//! there and is not running elsewhere. Jackson's order (non-increasing
//! delivery time) is the default list.

use num_traits::Zero;
use thiserror::Error;

use crate::model::{Instance, Operation, Schedule};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PriorityError {
    #[error("priority list has {found} entries, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("job {0} is out of range or repeated in the priority list")]
    NotAPermutation(usize),
}

/// A permutation of job indices; earlier entries have higher priority.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityList(Vec<usize>);

impl PriorityList {
    pub fn new(order: Vec<usize>, jobs: usize) -> Result<Self, PriorityError> {
        if order.len() != jobs {
            return Err(PriorityError::WrongLength { expected: jobs, found: order.len() });
        }
        let mut seen = vec![false; jobs];
        for &j in &order {
            if j >= jobs || seen[j] {
                return Err(PriorityError::NotAPermutation(j));
            }
            seen[j] = true;
        }
        Ok(Self(order))
    }

    pub fn identity(jobs: usize) -> Self {
        Self((0..jobs).collect())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    /// `rank[job]` = position of `job` in the list.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.0.len()];
        for (pos, &j) in self.0.iter().enumerate() {
            rank[j] = pos;
        }
        rank
    }
}

/// Jobs by non-increasing delivery time, ties by ascending index.
pub fn jackson_priority(instance: &Instance) -> PriorityList {
    let mut order: Vec<usize> = (0..instance.jobs()).collect();
    order.sort_by(|&a, &b| instance.delivery(b).cmp(instance.delivery(a)).then(a.cmp(&b)));
    PriorityList(order)
}

pub fn list_schedule(instance: &Instance, priority: &PriorityList) -> Schedule {
    list_schedule_with(instance, priority, &Rational::zero(), &[])
}

/// List schedule that starts at `release` and leaves the jobs in `blocked`
/// out entirely (their operations are not part of the result).
pub fn list_schedule_with(
    instance: &Instance,
    priority: &PriorityList,
    release: &Rational,
    blocked: &[usize],
) -> Schedule {
    let (m, n) = (instance.machines(), instance.jobs());
    assert_eq!(priority.order().len(), n, "priority list does not match the instance");

    let mut is_blocked = vec![false; n];
    for &j in blocked {
        is_blocked[j] = true;
    }
    let mut pending = vec![vec![false; n]; m];
    let mut remaining = 0usize;
    for (i, row) in pending.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if !is_blocked[j] && instance.is_positive(i, j) {
                *cell = true;
                remaining += 1;
            }
        }
    }

    let mut machine_free = vec![release.clone(); m];
    let mut job_free = vec![release.clone(); n];
    let mut ops = Vec::with_capacity(remaining);
    let mut now = release.clone();

    while remaining > 0 {
        for i in 0..m {
            if machine_free[i] > now {
                continue;
            }
            let pick = priority.order().iter().copied().find(|&j| pending[i][j] && job_free[j] <= now);
            if let Some(j) = pick {
                let end = &now + instance.processing(i, j);
                pending[i][j] = false;
                remaining -= 1;
                machine_free[i] = end.clone();
                job_free[j] = end.clone();
                ops.push(Operation::new(i, j, now.clone(), end));
            }
        }
        if remaining == 0 {
            break;
        }
        now = machine_free
            .iter()
            .chain(job_free.iter())
            .filter(|t| **t > now)
            .min()
            .cloned()
            .expect("pending operations but no future event");
    }
    Schedule::new(ops)
}

/// A machine idled on `[start, end)` while `job` had an unstarted operation
/// on it and was not being processed anywhere else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdleViolation {
    pub machine: usize,
    pub start: Rational,
    pub end: Rational,
    pub job: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GreedinessReport {
    pub violations: Vec<IdleViolation>,
}

impl GreedinessReport {
    pub fn is_greedy(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every stretch where a machine idles although some job could have
/// started on it. Each entry is a maximal sub-interval of an idle gap during
/// which the job was free.
pub fn greediness_report(instance: &Instance, schedule: &Schedule) -> GreedinessReport {
    let mut violations = Vec::new();
    for i in 0..instance.machines() {
        let mut on_machine: Vec<&Operation> = schedule.on_machine(i).filter(|op| op.start < op.end).collect();
        on_machine.sort_by(|a, b| a.start.cmp(&b.start));

        let mut gaps = Vec::new();
        let mut cursor = Rational::zero();
        for op in &on_machine {
            if op.start > cursor {
                gaps.push((cursor.clone(), op.start.clone()));
            }
            if op.end > cursor {
                cursor = op.end.clone();
            }
        }

        for (gap_start, gap_end) in gaps {
            for op in &on_machine {
                // only operations that had not started when the gap ended
                if op.start < gap_end {
                    continue;
                }
                let mut busy: Vec<(&Rational, &Rational)> = schedule
                    .of_job(op.job)
                    .filter(|o| o.machine != i && o.start < o.end)
                    .map(|o| (&o.start, &o.end))
                    .collect();
                busy.sort();
                for (start, end) in free_parts(&gap_start, &gap_end, &busy) {
                    violations.push(IdleViolation { machine: i, start, end, job: op.job });
                }
            }
        }
    }
    violations.sort_by(|a, b| (a.machine, &a.start, a.job).cmp(&(b.machine, &b.start, b.job)));
    GreedinessReport { violations }
}

/// Positive-length pieces of `[from, to)` not covered by the sorted `busy`
/// intervals.
fn free_parts(from: &Rational, to: &Rational, busy: &[(&Rational, &Rational)]) -> Vec<(Rational, Rational)> {
    let mut parts = Vec::new();
    let mut cursor = from.clone();
    for &(s, e) in busy {
        if s >= to {
            break;
        }
        if *s > cursor {
            parts.push((cursor.clone(), s.clone()));
        }
        if *e > cursor {
            cursor = e.clone();
        }
    }
    if cursor < *to {
        parts.push((cursor, to.clone()));
    }
    parts
}
