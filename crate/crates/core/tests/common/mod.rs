//! Seeded suites and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use openshop::harness::{gen_mixed, gen_random, Family, GeneratorSpec, SplitMix64};
use openshop::listsched::PriorityList;
use openshop::ptas::{Grid, GridAssignment, Partition};
use openshop::rational::{int, Rational};
use openshop::{Instance, Operation, Schedule};

/// 500 instances: m in {2, 3}, n in 3..=8, p <= 9, q <= 20.
pub fn random_suite() -> Vec<Instance> {
    (0..500u64)
        .map(|s| {
            let spec = GeneratorSpec {
                family: Family::Random,
                seed: s,
                m: 2 + (s % 2) as usize,
                n: 3 + ((s / 2) % 6) as usize,
                p_max: 9,
                q_max: 20,
                ..Default::default()
            };
            gen_random(&spec).unwrap()
        })
        .collect()
}

/// `count` instances with m = 2 and n in {2, 3, 4}, starting at `first_seed`.
pub fn small_suite(first_seed: u64, count: u64) -> Vec<Instance> {
    (first_seed..first_seed + count)
        .map(|s| {
            let spec = GeneratorSpec {
                family: Family::Random,
                seed: s,
                m: 2,
                n: 2 + (s % 3) as usize,
                p_max: 9,
                q_max: 20,
                ..Default::default()
            };
            gen_random(&spec).unwrap()
        })
        .collect()
}

/// 50 mixed instances on two machines: one big job, one to three unit jobs.
pub fn mixed_suite() -> Vec<Instance> {
    (0..50u64)
        .map(|s| {
            let spec = GeneratorSpec {
                family: Family::Mixed,
                seed: 100 + s,
                m: 2,
                big_ops: 200 + 7 * s,
                tiny_count: 1 + (s % 3) as usize,
                q_max: 300,
                ..Default::default()
            };
            gen_mixed(&spec).unwrap()
        })
        .collect()
}

pub fn random_priorities(jobs: usize, seed: u64, count: usize) -> Vec<PriorityList> {
    let mut rng = SplitMix64::new(seed ^ 0x5EED_0F11_1575);
    (0..count)
        .map(|_| {
            let mut order: Vec<usize> = (0..jobs).collect();
            rng.shuffle(&mut order);
            PriorityList::new(order, jobs).unwrap()
        })
        .collect()
}

pub fn all_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut tail in all_permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

pub fn lmax_of(instance: &Instance, schedule: &Schedule) -> Rational {
    let mut best: Option<Rational> = None;
    for j in 0..instance.jobs() {
        let c = schedule.of_job(j).map(|op| op.end.clone()).max().unwrap_or_else(|| int(0));
        let l = c + instance.delivery(j);
        if best.as_ref().is_none_or(|b| l > *b) {
            best = Some(l);
        }
    }
    best.unwrap_or_else(|| int(0))
}

/// Optimal Lmax by trying every machine order and every job order, placing
/// each operation at the latest end of its predecessors (a fixpoint over at
/// most `m * n` rounds; no fixpoint means the orders are cyclic).
pub fn brute_force_optimum(instance: &Instance) -> Rational {
    let (m, n) = (instance.machines(), instance.jobs());
    let machine_jobs: Vec<Vec<usize>> =
        (0..m).map(|i| (0..n).filter(|&j| instance.is_positive(i, j)).collect()).collect();
    let job_machines: Vec<Vec<usize>> =
        (0..n).map(|j| (0..m).filter(|&i| instance.is_positive(i, j)).collect()).collect();
    let machine_choices: Vec<Vec<Vec<usize>>> = machine_jobs.iter().map(|v| all_permutations(v)).collect();
    let job_choices: Vec<Vec<Vec<usize>>> = job_machines.iter().map(|v| all_permutations(v)).collect();

    let mut best: Option<Rational> = None;
    for_each_product(&machine_choices, &mut |morders| {
        for_each_product(&job_choices, &mut |jorders| {
            if let Some(l) = evaluate(instance, morders, jorders) {
                if best.as_ref().is_none_or(|b| l < *b) {
                    best = Some(l);
                }
            }
        });
    });
    best.unwrap_or_else(|| instance.deliveries().iter().max().cloned().unwrap_or_else(|| int(0)))
}

fn for_each_product(choices: &[Vec<Vec<usize>>], f: &mut dyn FnMut(&[&Vec<usize>])) {
    fn go<'a>(choices: &'a [Vec<Vec<usize>>], acc: &mut Vec<&'a Vec<usize>>, f: &mut dyn FnMut(&[&Vec<usize>])) {
        if acc.len() == choices.len() {
            f(acc);
            return;
        }
        for c in &choices[acc.len()] {
            acc.push(c);
            go(choices, acc, f);
            acc.pop();
        }
    }
    go(choices, &mut Vec::new(), f);
}

fn evaluate(instance: &Instance, morders: &[&Vec<usize>], jorders: &[&Vec<usize>]) -> Option<Rational> {
    let (m, n) = (instance.machines(), instance.jobs());
    let mut start: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for (i, order) in morders.iter().enumerate() {
        for &j in order.iter() {
            start.insert((i, j), int(0));
        }
    }
    let end =
        |start: &BTreeMap<(usize, usize), Rational>, i: usize, j: usize| &start[&(i, j)] + instance.processing(i, j);
    for _round in 0..=(m * n + 1) {
        let mut changed = false;
        for i in 0..m {
            for w in morders[i].windows(2) {
                let e = end(&start, i, w[0]);
                if start[&(i, w[1])] < e {
                    start.insert((i, w[1]), e);
                    changed = true;
                }
            }
        }
        for j in 0..n {
            for w in jorders[j].windows(2) {
                let e = end(&start, w[0], j);
                if start[&(w[1], j)] < e {
                    start.insert((w[1], j), e);
                    changed = true;
                }
            }
        }
        if !changed {
            let ops = start.iter().map(|(&(i, j), s)| Operation::new(i, j, s.clone(), s + instance.processing(i, j)));
            return Some(lmax_of(instance, &Schedule::new(ops.collect())));
        }
    }
    None
}

/// Every feasible big-operation assignment on the grid's enumerated points,
/// by plain nested loops over all index tuples and a pairwise overlap test.
pub fn brute_force_assignments(instance: &Instance, partition: &Partition, grid: &Grid) -> Vec<GridAssignment> {
    let mut ops = Vec::new();
    for i in 0..instance.machines() {
        for j in 0..instance.jobs() {
            if partition.big.contains(&j) && instance.processing(i, j) > &int(0) {
                ops.push((i, j));
            }
        }
    }
    let points: Vec<Rational> = grid.starts().collect();
    let total = points.len().pow(ops.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut idx = code;
        let mut starts = BTreeMap::new();
        for &(i, j) in ops.iter().rev() {
            starts.insert((i, j), points[idx % points.len()].clone());
            idx /= points.len();
        }
        let clash = ops.iter().enumerate().any(|(a, &(ai, aj))| {
            ops[a + 1..].iter().any(|&(bi, bj)| {
                if ai != bi && aj != bj {
                    return false;
                }
                let (sa, sb) = (&starts[&(ai, aj)], &starts[&(bi, bj)]);
                let (ea, eb) = (sa + instance.processing(ai, aj), sb + instance.processing(bi, bj));
                *sa < eb && *sb < ea
            })
        });
        if !clash {
            out.push(GridAssignment { starts });
        }
    }
    out
}

/// The optimal schedule of the three-job tight instance with parameter `a`:
/// job 3 first on M1, then jobs 1 and 2 right after.
pub fn tight_optimum(a: i64) -> Schedule {
    Schedule::new(vec![
        Operation::new(0, 2, int(0), int(1)),
        Operation::new(0, 0, int(1), int(1 + a)),
        Operation::new(1, 2, int(1), int(2)),
        Operation::new(1, 1, int(2), int(2 + a)),
    ])
}
