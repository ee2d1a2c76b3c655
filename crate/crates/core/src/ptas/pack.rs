//! Completing a big-job assignment with the small and tiny jobs.
//!
//! Small jobs are list scheduled (Jackson's order) from time zero; they fit
//! before `p(S)`, where the grid starts. Tiny jobs are then list scheduled
//! from `p(S)` with Jackson's order while the big operations act as holes.
//! When the chosen tiny operation does not fit in the bin before the next
//! big operation `b` on its machine, and `b` is not frozen, `b` and every big
//! operation starting no earlier than `b` (on any machine) move right just
//! enough for the tiny operation to end exactly where `b` now starts, and
//! `b` is frozen. A tiny operation facing a frozen `b` waits until `b` ends.

use num_traits::Zero;

use super::grid::{Grid, GridAssignment};
use super::partition::Partition;
use super::PtasError;
use crate::listsched::{jackson_priority, list_schedule_with};
use crate::model::{validate_schedule, Instance, Operation, Schedule};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushEvent {
    /// Decision instant at which the tiny operation started.
    pub at: Rational,
    pub machine: usize,
    /// Big job whose operation was pushed (and frozen).
    pub big_job: usize,
    pub tiny_job: usize,
    pub amount: Rational,
    /// Duration of the pushing tiny operation.
    pub tiny_duration: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackOutcome {
    pub schedule: Schedule,
    /// Big operation starts after all pushes.
    pub final_starts: GridAssignment,
    pub pushes: Vec<PushEvent>,
    /// `(machine, big job)` of every frozen operation, in freeze order.
    pub frozen: Vec<(usize, usize)>,
}

struct Slot {
    machine: usize,
    job: usize,
    start: Rational,
    len: Rational,
    frozen: bool,
    pushes: u32,
}

impl Slot {
    fn end(&self) -> Rational {
        &self.start + &self.len
    }
}

pub fn pack_tiny(
    instance: &Instance,
    partition: &Partition,
    assignment: &GridAssignment,
    grid: &Grid,
) -> Result<PackOutcome, PtasError> {
    assignment.check(instance, partition, grid)?;
    let (m, n) = (instance.machines(), instance.jobs());
    let jackson = jackson_priority(instance);

    let not_small: Vec<usize> = partition.big.iter().chain(&partition.tiny).copied().collect();
    let mut ops = list_schedule_with(instance, &jackson, &Rational::zero(), &not_small).into_ops();

    let mut slots: Vec<Slot> = assignment
        .starts
        .iter()
        .map(|(&(i, j), s)| Slot {
            machine: i,
            job: j,
            start: s.clone(),
            len: instance.processing(i, j).clone(),
            frozen: false,
            pushes: 0,
        })
        .collect();

    let is_tiny = {
        let mut v = vec![false; n];
        for &j in &partition.tiny {
            v[j] = true;
        }
        v
    };
    let order: Vec<usize> = jackson.order().iter().copied().filter(|&j| is_tiny[j]).collect();
    let mut pending = vec![vec![false; n]; m];
    let mut remaining = 0usize;
    for (i, row) in pending.iter_mut().enumerate() {
        for &j in &order {
            if instance.is_positive(i, j) {
                row[j] = true;
                remaining += 1;
            }
        }
    }

    let origin = grid.origin.clone();
    let mut machine_free = vec![origin.clone(); m];
    let mut job_free = vec![origin.clone(); n];
    let mut now = origin;
    let mut pushes = Vec::new();
    let mut frozen = Vec::new();

    while remaining > 0 {
        loop {
            let mut progressed = false;
            for i in 0..m {
                if machine_free[i] > now {
                    continue;
                }
                let running = slots.iter().any(|s| s.machine == i && s.start < now && now < s.end());
                if running {
                    continue;
                }
                // next big operation on this machine that has not started
                let next_big = slots
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.machine == i && s.start >= now)
                    .min_by(|a, b| a.1.start.cmp(&b.1.start))
                    .map(|(idx, _)| idx);

                for &j in &order {
                    if !pending[i][j] || job_free[j] > now {
                        continue;
                    }
                    let d = instance.processing(i, j);
                    let end = &now + d;
                    if let Some(b) = next_big {
                        if end > slots[b].start {
                            if slots[b].frozen {
                                continue;
                            }
                            let amount = &end - &slots[b].start;
                            let pivot = slots[b].start.clone();
                            for s in slots.iter_mut().filter(|s| s.start >= pivot) {
                                s.start += &amount;
                            }
                            let slot = &mut slots[b];
                            slot.frozen = true;
                            slot.pushes += 1;
                            if slot.pushes > 1 {
                                return Err(PtasError::PushedTwice { machine: slot.machine, job: slot.job });
                            }
                            frozen.push((slot.machine, slot.job));
                            pushes.push(PushEvent {
                                at: now.clone(),
                                machine: i,
                                big_job: slot.job,
                                tiny_job: j,
                                amount,
                                tiny_duration: d.clone(),
                            });
                        }
                    }
                    pending[i][j] = false;
                    remaining -= 1;
                    machine_free[i] = end.clone();
                    job_free[j] = end.clone();
                    ops.push(Operation::new(i, j, now.clone(), end));
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                break;
            }
        }
        if remaining == 0 {
            break;
        }
        now = machine_free
            .iter()
            .chain(job_free.iter())
            .cloned()
            .chain(slots.iter().flat_map(|s| [s.start.clone(), s.end()]))
            .filter(|t| *t > now)
            .min()
            .ok_or_else(|| PtasError::Internal("tiny operations left with no future event".into()))?;
    }

    let mut final_starts = GridAssignment::default();
    for s in &slots {
        final_starts.starts.insert((s.machine, s.job), s.start.clone());
        ops.push(Operation::new(s.machine, s.job, s.start.clone(), s.end()));
    }
    let schedule = Schedule::new(ops);
    let violations = validate_schedule(instance, &schedule);
    if let Some(v) = violations.first() {
        return Err(PtasError::Internal(format!("packed schedule is infeasible: {v}")));
    }
    Ok(PackOutcome { schedule, final_starts, pushes, frozen })
}
