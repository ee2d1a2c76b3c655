use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

use super::{partition::Partition, PtasError};
use crate::model::{bounds, Instance};
use crate::rational::{format_rational, Rational};

/// Candidate start times for big operations: `origin + r * step` for every
/// `r >= 0` with the point strictly below `horizon`, identical on every
/// machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub origin: Rational,
    pub step: Rational,
    pub horizon: Rational,
    machines: usize,
    per_machine: BigUint,
}

impl Grid {
    pub fn points_per_machine(&self) -> &BigUint {
        &self.per_machine
    }

    /// Total number of (machine, start) couples.
    pub fn point_count(&self) -> BigUint {
        &self.per_machine * BigUint::from(self.machines)
    }

    pub fn point(&self, index: u64) -> Rational {
        &self.origin + &self.step * Rational::from_integer(BigInt::from(index))
    }

    pub fn starts(&self) -> impl Iterator<Item = Rational> + '_ {
        let count = self.per_machine.to_u64().unwrap_or(u64::MAX);
        (0..count).map(move |r| self.point(r))
    }

    /// True for the enumerated points, i.e. lattice points below the horizon.
    pub fn contains(&self, t: &Rational) -> bool {
        *t < self.horizon && self.on_lattice(t)
    }

    /// True for any `origin + r * step` with `r >= 0`, including points at
    /// or past the horizon (reachable by alignment and pushes).
    pub fn on_lattice(&self, t: &Rational) -> bool {
        if *t < self.origin || self.step.is_zero() {
            return false;
        }
        ((t - &self.origin) / &self.step).is_integer()
    }

    /// `(m * big_count)^points`, the size of the naive assignment space.
    /// `None` if the exponent does not fit in 32 bits.
    pub fn enumeration_estimate(&self, big_count: usize) -> Option<BigUint> {
        let exp = self.point_count().to_u32()?;
        Some(BigUint::from(self.machines * big_count).pow(exp))
    }
}

/// Grid between `p(S)` and `m * P` with step `delta` (or the override).
pub fn build_grid(
    instance: &Instance,
    partition: &Partition,
    delta_override: Option<&Rational>,
) -> Result<Grid, PtasError> {
    if let Some(d) = delta_override {
        if !d.is_positive() {
            return Err(PtasError::InvalidDelta(format_rational(d)));
        }
    }
    let m = instance.machines();
    let step = delta_override.cloned().unwrap_or_else(|| partition.delta.clone());
    let origin = partition.p_small.clone();
    let horizon = Rational::from_integer(BigInt::from(m)) * bounds(instance).p;

    let per_machine = if step.is_zero() {
        if !partition.big.is_empty() {
            return Err(PtasError::ZeroGridStep);
        }
        BigUint::zero()
    } else if horizon > origin {
        ((&horizon - &origin) / &step).ceil().to_integer().to_biguint().unwrap_or_default()
    } else {
        BigUint::zero()
    };
    Ok(Grid { origin, step, horizon, machines: m, per_machine })
}

/// Start time for each positive big operation, keyed by `(machine, job)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GridAssignment {
    pub starts: BTreeMap<(usize, usize), Rational>,
}

/// Positive operations of big jobs, sorted by `(machine, job)`.
pub fn big_operations(instance: &Instance, partition: &Partition) -> Vec<(usize, usize)> {
    let mut ops = Vec::new();
    for i in 0..instance.machines() {
        for &j in &partition.big {
            if instance.is_positive(i, j) {
                ops.push((i, j));
            }
        }
    }
    ops
}

impl GridAssignment {
    /// Checks that the assignment covers exactly the big operations, puts
    /// each on a lattice point of the grid and has no machine or job overlap.
    /// Starts past the horizon are accepted.
    pub fn check(&self, instance: &Instance, partition: &Partition, grid: &Grid) -> Result<(), PtasError> {
        let wanted = big_operations(instance, partition);
        if wanted.len() != self.starts.len() || wanted.iter().any(|k| !self.starts.contains_key(k)) {
            return Err(PtasError::InfeasibleAssignment("assignment does not match the big operations".into()));
        }
        for (&(i, j), s) in &self.starts {
            if !grid.on_lattice(s) {
                return Err(PtasError::InfeasibleAssignment(format!(
                    "operation ({i}, {j}) starts off the grid at {}",
                    format_rational(s)
                )));
            }
        }
        let entries: Vec<_> = self.starts.iter().collect();
        for (a_idx, (&(ai, aj), a_start)) in entries.iter().enumerate() {
            let a_end = *a_start + instance.processing(ai, aj);
            for (&(bi, bj), b_start) in &entries[a_idx + 1..] {
                if ai != bi && aj != bj {
                    continue;
                }
                let b_end = *b_start + instance.processing(bi, bj);
                if *a_start < &b_end && *b_start < &a_end {
                    return Err(PtasError::InfeasibleAssignment(format!(
                        "operations ({ai}, {aj}) and ({bi}, {bj}) overlap"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Lazily enumerates every feasible assignment of the big operations to grid
/// points, in lexicographic order of the start indices (operations ordered by
/// machine, then job). After `budget` assignments, a further feasible one
/// yields [`PtasError::BudgetExhausted`] and ends the stream.
pub fn enumerate_assignments<'a>(
    instance: &'a Instance,
    partition: &Partition,
    grid: &'a Grid,
    budget: u64,
) -> Result<Assignments<'a>, PtasError> {
    let ops: Vec<(usize, usize, Rational)> = big_operations(instance, partition)
        .into_iter()
        .map(|(i, j)| (i, j, instance.processing(i, j).clone()))
        .collect();
    let points = if ops.is_empty() { 0 } else { grid.points_per_machine().to_u64().ok_or(PtasError::GridTooLarge)? };
    Ok(Assignments {
        grid,
        choice: vec![0; ops.len()],
        starts: vec![Rational::zero(); ops.len()],
        ops,
        points,
        depth: 0,
        started: false,
        finished: false,
        yielded: 0,
        budget,
        _instance: instance,
    })
}

pub struct Assignments<'a> {
    grid: &'a Grid,
    ops: Vec<(usize, usize, Rational)>,
    points: u64,
    choice: Vec<u64>,
    starts: Vec<Rational>,
    depth: usize,
    started: bool,
    finished: bool,
    yielded: u64,
    budget: u64,
    _instance: &'a Instance,
}

impl Assignments<'_> {
    fn compatible(&self, depth: usize) -> bool {
        let (i, j, ref p) = self.ops[depth];
        let start = &self.starts[depth];
        let end = start + p;
        self.ops[..depth].iter().zip(&self.starts).all(|(&(oi, oj, ref op), os)| {
            if oi != i && oj != j {
                return true;
            }
            let oe = os + op;
            !(start < &oe && os < &end)
        })
    }

    fn set(&mut self, depth: usize) {
        self.starts[depth] = self.grid.point(self.choice[depth]);
    }

    /// Moves to the next feasible full assignment.
    fn advance(&mut self) -> bool {
        let len = self.ops.len();
        if len == 0 {
            let first = !self.started;
            self.started = true;
            return first;
        }
        if !self.started {
            self.started = true;
            self.depth = 0;
            self.choice[0] = 0;
        } else {
            self.depth = len - 1;
            self.choice[self.depth] += 1;
        }
        loop {
            let d = self.depth;
            if self.choice[d] >= self.points {
                if d == 0 {
                    return false;
                }
                self.depth -= 1;
                self.choice[self.depth] += 1;
                continue;
            }
            self.set(d);
            if self.compatible(d) {
                if d + 1 == len {
                    return true;
                }
                self.depth += 1;
                self.choice[self.depth] = 0;
            } else {
                self.choice[d] += 1;
            }
        }
    }

    fn current(&self) -> GridAssignment {
        GridAssignment {
            starts: self.ops.iter().zip(&self.starts).map(|(&(i, j, _), s)| ((i, j), s.clone())).collect(),
        }
    }
}

impl Iterator for Assignments<'_> {
    type Item = Result<GridAssignment, PtasError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        if !self.advance() {
            self.finished = true;
            return None;
        }
        if self.yielded >= self.budget {
            self.finished = true;
            return Some(Err(PtasError::BudgetExhausted { evaluated: self.yielded }));
        }
        self.yielded += 1;
        Some(Ok(self.current()))
    }
}
