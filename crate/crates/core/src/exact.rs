//! Exhaustive search for optimal schedules on small instances.
//!
//! Lmax is a regular criterion, so some optimal schedule is semi-active:
//! every operation starts at the latest end of its machine predecessor and
//! its job predecessor. The search builds semi-active schedules one
//! operation at a time, appending operations in increasing
//! `(start, machine, job)` order. Every semi-active schedule has exactly one
//! such construction sequence, so the enumeration covers all acyclic
//! disjunctive orders without visiting any schedule twice.

use num_traits::Zero;
use thiserror::Error;

use crate::listsched::{jackson_priority, list_schedule};
use crate::model::{lateness_unchecked, Instance, Operation, Schedule};
use crate::rational::{max_of, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("order specification is malformed: {0}")]
    InvalidOrder(String),
    #[error("machine and job orders form a cycle")]
    Cyclic,
}

/// Disjunctive orders: per machine, the sequence of jobs with a positive
/// operation there; per job, the sequence of machines it visits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderSpec {
    pub machine_orders: Vec<Vec<usize>>,
    pub job_orders: Vec<Vec<usize>>,
}

impl OrderSpec {
    /// Orders read off a feasible schedule (by start time).
    pub fn from_schedule(instance: &Instance, schedule: &Schedule) -> Self {
        let mut machine_orders = vec![Vec::new(); instance.machines()];
        let mut job_orders = vec![Vec::new(); instance.jobs()];
        let mut ops: Vec<&Operation> = schedule.ops().iter().filter(|o| o.start < o.end).collect();
        ops.sort_by(|a, b| (&a.start, a.machine, a.job).cmp(&(&b.start, b.machine, b.job)));
        for op in ops {
            machine_orders[op.machine].push(op.job);
            job_orders[op.job].push(op.machine);
        }
        Self { machine_orders, job_orders }
    }

    fn check(&self, instance: &Instance) -> Result<(), ExactError> {
        let (m, n) = (instance.machines(), instance.jobs());
        if self.machine_orders.len() != m || self.job_orders.len() != n {
            return Err(ExactError::InvalidOrder(format!("expected {m} machine orders and {n} job orders")));
        }
        for (i, order) in self.machine_orders.iter().enumerate() {
            let mut want: Vec<usize> = (0..n).filter(|&j| instance.is_positive(i, j)).collect();
            let mut got = order.clone();
            got.sort_unstable();
            want.sort_unstable();
            if got != want {
                return Err(ExactError::InvalidOrder(format!(
                    "machine {i} order is not a permutation of its positive jobs"
                )));
            }
        }
        for (j, order) in self.job_orders.iter().enumerate() {
            let want: Vec<usize> = instance.machines_of(j).collect();
            let mut got = order.clone();
            got.sort_unstable();
            if got != want {
                return Err(ExactError::InvalidOrder(format!(
                    "job {j} order is not a permutation of its positive machines"
                )));
            }
        }
        Ok(())
    }
}

/// Semi-active schedule for fixed orders: each operation starts when both
/// its machine predecessor and its job predecessor have finished.
pub fn evaluate_orders(instance: &Instance, orders: &OrderSpec) -> Result<Schedule, ExactError> {
    orders.check(instance)?;
    let (m, n) = (instance.machines(), instance.jobs());
    let node = |i: usize, j: usize| i * n + j;

    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); m * n];
    let mut indeg = vec![0usize; m * n];
    let mut add_edge = |a: usize, b: usize, succ: &mut Vec<Vec<usize>>| {
        succ[a].push(b);
        indeg[b] += 1;
    };
    for (i, order) in orders.machine_orders.iter().enumerate() {
        for w in order.windows(2) {
            add_edge(node(i, w[0]), node(i, w[1]), &mut succ);
        }
    }
    for (j, order) in orders.job_orders.iter().enumerate() {
        for w in order.windows(2) {
            add_edge(node(w[0], j), node(w[1], j), &mut succ);
        }
    }

    let positive: Vec<usize> = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| instance.is_positive(i, j))
        .map(|(i, j)| node(i, j))
        .collect();
    let mut ready: Vec<usize> = positive.iter().copied().filter(|&v| indeg[v] == 0).collect();
    let mut start = vec![Rational::zero(); m * n];
    let mut done = 0usize;
    let mut ops = Vec::with_capacity(positive.len());
    while let Some(v) = ready.pop() {
        let (i, j) = (v / n, v % n);
        let end = &start[v] + instance.processing(i, j);
        for &w in &succ[v] {
            if end > start[w] {
                start[w] = end.clone();
            }
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(w);
            }
        }
        ops.push(Operation::new(i, j, start[v].clone(), end));
        done += 1;
    }
    if done != positive.len() {
        return Err(ExactError::Cyclic);
    }
    Ok(Schedule::new(ops))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactLimits {
    /// Upper bound on search nodes visited before giving up.
    pub max_combinations: u64,
}

impl Default for ExactLimits {
    fn default() -> Self {
        Self { max_combinations: 10_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactStatus {
    ProvedOptimal,
    LimitExceeded,
}

impl ExactStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ProvedOptimal => "proved-optimal",
            Self::LimitExceeded => "limit-exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub schedule: Schedule,
    pub lmax_star: Rational,
    /// Search nodes visited.
    pub combinations_examined: u64,
    pub status: ExactStatus,
}

impl ExactResult {
    pub fn is_optimal(&self) -> bool {
        self.status == ExactStatus::ProvedOptimal
    }
}

/// Minimum-Lmax schedule by depth-first branch and bound. The Jackson list
/// schedule seeds the incumbent; a branch is cut when its lower bound
/// cannot strictly improve on it. When the node limit is hit the best
/// schedule found so far is returned with [`ExactStatus::LimitExceeded`].
pub fn exact_solve(instance: &Instance, limits: ExactLimits) -> ExactResult {
    let seed = list_schedule(instance, &jackson_priority(instance));
    let seed_lmax = lateness_unchecked(instance, &seed).lmax;

    let mut search = Search::new(instance, limits.max_combinations, seed, seed_lmax);
    let complete = search.dfs();
    ExactResult {
        schedule: search.best,
        lmax_star: search.best_lmax,
        combinations_examined: search.nodes,
        status: if complete { ExactStatus::ProvedOptimal } else { ExactStatus::LimitExceeded },
    }
}

struct Search<'a> {
    instance: &'a Instance,
    limit: u64,
    nodes: u64,
    pending: Vec<(usize, usize)>,
    machine_free: Vec<Rational>,
    job_free: Vec<Rational>,
    machine_rest: Vec<Rational>,
    job_rest: Vec<Rational>,
    job_left: Vec<usize>,
    placed: Vec<Operation>,
    best: Schedule,
    best_lmax: Rational,
}

impl<'a> Search<'a> {
    fn new(instance: &'a Instance, limit: u64, best: Schedule, best_lmax: Rational) -> Self {
        let (m, n) = (instance.machines(), instance.jobs());
        let mut pending = Vec::new();
        let mut job_left = vec![0; n];
        for i in 0..m {
            for (j, left) in job_left.iter_mut().enumerate() {
                if instance.is_positive(i, j) {
                    pending.push((i, j));
                    *left += 1;
                }
            }
        }
        Self {
            instance,
            limit,
            nodes: 0,
            pending,
            machine_free: vec![Rational::zero(); m],
            job_free: vec![Rational::zero(); n],
            machine_rest: (0..m).map(|i| instance.machine_load(i)).collect(),
            job_rest: (0..n).map(|j| instance.job_work(j)).collect(),
            job_left,
            placed: Vec::new(),
            best,
            best_lmax,
        }
    }

    fn lower_bound(&self, floor: &Rational) -> Rational {
        let inst = self.instance;
        let mut lb = Rational::zero();
        for j in 0..inst.jobs() {
            let from = if self.job_left[j] == 0 { &self.job_free[j] } else { floor.max(&self.job_free[j]) };
            let v = from + &self.job_rest[j] + inst.delivery(j);
            if v > lb {
                lb = v;
            }
        }
        for i in 0..inst.machines() {
            let min_q = self.pending.iter().filter(|&&(pi, _)| pi == i).map(|&(_, j)| inst.delivery(j)).min();
            if let Some(q) = min_q {
                let v = floor.max(&self.machine_free[i]) + &self.machine_rest[i] + q;
                if v > lb {
                    lb = v;
                }
            }
        }
        lb
    }

    /// Returns false if the node limit was reached.
    fn dfs(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.limit {
            return false;
        }
        if self.pending.is_empty() {
            let lmax = max_of(
                &(0..self.instance.jobs()).map(|j| &self.job_free[j] + self.instance.delivery(j)).collect::<Vec<_>>(),
            );
            if lmax < self.best_lmax {
                self.best_lmax = lmax;
                self.best = Schedule::new(self.placed.clone());
            }
            return true;
        }

        let floor = self.placed.last().map(|o| o.start.clone()).unwrap_or_else(Rational::zero);
        if self.lower_bound(&floor) >= self.best_lmax {
            return true;
        }

        let last_key = self.placed.last().map(|o| (o.start.clone(), o.machine, o.job));
        let mut children: Vec<(Rational, usize, usize, usize)> = self
            .pending
            .iter()
            .enumerate()
            .map(|(idx, &(i, j))| {
                let est = self.machine_free[i].clone().max(self.job_free[j].clone());
                (est, i, j, idx)
            })
            .filter(|(est, i, j, _)| match &last_key {
                None => true,
                Some((s, li, lj)) => (est, *i, *j) > (s, *li, *lj),
            })
            .collect();
        children.sort();

        for (est, i, j, _) in children {
            let idx = self.pending.iter().position(|&o| o == (i, j)).expect("pending op");
            self.pending.swap_remove(idx);
            let p = self.instance.processing(i, j).clone();
            let end = &est + &p;
            let saved = (self.machine_free[i].clone(), self.job_free[j].clone());
            self.machine_free[i] = end.clone();
            self.job_free[j] = end.clone();
            self.machine_rest[i] -= &p;
            self.job_rest[j] -= &p;
            self.job_left[j] -= 1;
            self.placed.push(Operation::new(i, j, est, end));

            let finished = self.dfs();

            self.placed.pop();
            self.job_left[j] += 1;
            self.job_rest[j] += &p;
            self.machine_rest[i] += &p;
            self.machine_free[i] = saved.0;
            self.job_free[j] = saved.1;
            self.pending.push((i, j));
            let last = self.pending.len() - 1;
            self.pending.swap(idx, last);

            if !finished {
                return false;
            }
        }
        true
    }
}
