mod common;

use proptest::prelude::*;

use openshop::exact::{evaluate_orders, exact_solve, ExactLimits, OrderSpec};
use openshop::harness::{read_instance, read_schedule, write_instance, write_schedule};
use openshop::listsched::{greediness_report, jackson_priority, list_schedule, PriorityList};
use openshop::ptas::{
    align_to_grid, build_grid, enumerate_assignments, pack_tiny, ptas_solve, select_partition, Mode, PtasParams,
};
use openshop::rational::{int, ratio, Rational};
use openshop::{bounds, lateness_profile, validate_schedule, Instance, Operation, Schedule};

use common::{brute_force_assignments, brute_force_optimum, lmax_of};

fn value(max: i64) -> impl Strategy<Value = Rational> {
    (0..=max, prop_oneof![Just(1i64), Just(2), Just(3)]).prop_map(|(a, b)| ratio(a, b))
}

fn instance(max_m: usize, max_n: usize) -> impl Strategy<Value = Instance> {
    (1..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
        (proptest::collection::vec(proptest::collection::vec(value(12), n), m), proptest::collection::vec(value(20), n))
            .prop_map(|(p, q)| Instance::new(p, q).unwrap())
    })
}

fn with_priority(max_m: usize, max_n: usize) -> impl Strategy<Value = (Instance, PriorityList)> {
    instance(max_m, max_n).prop_flat_map(|inst| {
        let n = inst.jobs();
        (Just(inst), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(move |(inst, order)| (inst, PriorityList::new(order, n).unwrap()))
    })
}

fn exact(inst: &Instance) -> Rational {
    let res = exact_solve(inst, ExactLimits::default());
    assert!(res.is_optimal());
    res.lmax_star
}

fn relabel(schedule: &Schedule, perm: &[usize]) -> Schedule {
    // new job k is old job perm[k]
    let mut inv = vec![0; perm.len()];
    for (k, &j) in perm.iter().enumerate() {
        inv[j] = k;
    }
    schedule.ops().iter().map(|o| Operation::new(o.machine, inv[o.job], o.start.clone(), o.end.clone())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn list_schedules_are_feasible_greedy_and_within_p_plus_q((inst, prio) in with_priority(3, 6)) {
        let s = list_schedule(&inst, &prio);
        prop_assert!(validate_schedule(&inst, &s).is_empty());
        prop_assert!(greediness_report(&inst, &s).is_greedy());
        let l = lateness_profile(&inst, &s).unwrap().lmax;
        prop_assert!(l <= bounds(&inst).sum());
        prop_assert_eq!(l, lmax_of(&inst, &s));
        prop_assert_eq!(s, list_schedule(&inst, &prio));
    }

    #[test]
    fn list_schedule_commutes_with_job_relabelling((inst, prio) in with_priority(3, 5), seed in any::<u64>()) {
        let n = inst.jobs();
        let mut perm: Vec<usize> = (0..n).collect();
        openshop::harness::SplitMix64::new(seed).shuffle(&mut perm);
        let mut inv = vec![0; n];
        for (k, &j) in perm.iter().enumerate() {
            inv[j] = k;
        }
        let moved = inst.permuted(&perm);
        let moved_prio = PriorityList::new(prio.order().iter().map(|&j| inv[j]).collect(), n).unwrap();
        prop_assert_eq!(list_schedule(&moved, &moved_prio), relabel(&list_schedule(&inst, &prio), &perm));
    }

    #[test]
    fn scaling_scales_list_lmax((inst, prio) in with_priority(3, 5), num in 1i64..6, den in 1i64..4) {
        let c = ratio(num, den);
        let base = lateness_profile(&inst, &list_schedule(&inst, &prio)).unwrap().lmax;
        let scaled = inst.scaled(&c);
        let l = lateness_profile(&scaled, &list_schedule(&scaled, &prio)).unwrap().lmax;
        prop_assert_eq!(l, base * c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_matches_brute_force(inst in instance(2, 3)) {
        let res = exact_solve(&inst, ExactLimits::default());
        prop_assert!(res.is_optimal());
        prop_assert!(validate_schedule(&inst, &res.schedule).is_empty());
        prop_assert_eq!(lateness_profile(&inst, &res.schedule).unwrap().lmax, res.lmax_star.clone());
        prop_assert_eq!(res.lmax_star.clone(), brute_force_optimum(&inst));
        // its own orders reproduce a schedule at least as good
        let again = evaluate_orders(&inst, &OrderSpec::from_schedule(&inst, &res.schedule)).unwrap();
        prop_assert!(lmax_of(&inst, &again) <= res.lmax_star);
    }

    #[test]
    fn exact_is_a_lower_envelope((inst, prio) in with_priority(3, 4)) {
        let star = exact(&inst);
        prop_assert!(star >= bounds(&inst).lower_bound());
        prop_assert!(star <= lateness_profile(&inst, &list_schedule(&inst, &prio)).unwrap().lmax);
        prop_assert!(star <= lateness_profile(&inst, &list_schedule(&inst, &jackson_priority(&inst))).unwrap().lmax);
        let out = ptas_solve(&inst, &PtasParams::new(int(1), Mode::OracleGuided).unwrap()).unwrap();
        prop_assert!(validate_schedule(&inst, &out.schedule).is_empty());
        prop_assert!(star <= out.lmax);
    }

    #[test]
    fn exact_optimum_is_invariant(inst in instance(3, 4), seed in any::<u64>(), num in 1i64..5, den in 1i64..4) {
        let star = exact(&inst);
        let mut perm: Vec<usize> = (0..inst.jobs()).collect();
        openshop::harness::SplitMix64::new(seed).shuffle(&mut perm);
        prop_assert_eq!(exact(&inst.permuted(&perm)), star.clone());
        let c = ratio(num, den);
        prop_assert_eq!(exact(&inst.scaled(&c)), star * c);
    }

    #[test]
    fn partition_invariants(inst in instance(3, 8), num in 1i64..=4, den in 1i64..=4) {
        let eps = if num > den { int(1) } else { ratio(num, den) };
        let part = select_partition(&inst, &eps).unwrap();
        let n = inst.jobs();
        let mut seen = vec![0; n];
        for &j in part.big.iter().chain(&part.small).chain(&part.tiny) {
            seen[j] += 1;
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        let p = bounds(&inst).p;
        prop_assert!(part.p_small <= &eps * &p);
        prop_assert!(u64::from(part.k) <= openshop::ptas::Partition::k_limit(inst.machines(), &eps));
        prop_assert!(Rational::from_integer(part.big.len().into()) <= part.big_count_bound(inst.machines()));
        for &j in &part.big {
            prop_assert!(inst.max_operation(j) >= part.big_threshold);
        }
        for &j in &part.tiny {
            prop_assert!(inst.max_operation(j) < part.tiny_threshold || part.degenerate);
        }
    }

    #[test]
    fn alignment_shifts_within_bounds(inst in instance(3, 4)) {
        let part = select_partition(&inst, &int(1)).unwrap();
        prop_assume!(!part.degenerate);
        let grid = build_grid(&inst, &part, None).unwrap();
        let opt = exact_solve(&inst, ExactLimits::default()).schedule;
        let a = align_to_grid(&inst, &opt, &part, &grid).unwrap();
        a.check(&inst, &part, &grid).unwrap();
        let m = inst.machines();
        let lo = &grid.origin + Rational::from_integer((2 * m).into()) * &part.delta;
        let hi = &grid.origin + Rational::from_integer(((2 + part.big.len()) * m).into()) * &part.delta;
        for op in opt.ops().iter().filter(|o| part.is_big(o.job) && o.start < o.end) {
            let s = &a.starts[&(op.machine, op.job)];
            prop_assert!(&op.start + &lo <= *s && *s <= &op.start + &hi);
        }
        let out = pack_tiny(&inst, &part, &a, &grid).unwrap();
        prop_assert!(validate_schedule(&inst, &out.schedule).is_empty());
    }

    #[test]
    fn pack_respects_push_invariants(inst in instance(2, 4), div in 2i64..=4) {
        let part = select_partition(&inst, &int(1)).unwrap();
        prop_assume!(!part.degenerate && part.big.len() <= 2);
        let delta = bounds(&inst).p / int(div);
        let grid = build_grid(&inst, &part, Some(&delta)).unwrap();
        let brute = brute_force_assignments(&inst, &part, &grid);
        let listed: Vec<_> = enumerate_assignments(&inst, &part, &grid, u64::MAX).unwrap().map(Result::unwrap).collect();
        prop_assert_eq!(listed.len(), brute.len());
        for a in listed.iter().take(40) {
            let out = pack_tiny(&inst, &part, a, &grid).unwrap();
            prop_assert!(validate_schedule(&inst, &out.schedule).is_empty());
            prop_assert!(out.pushes.len() <= inst.machines() * part.big.len());
            let mut frozen = out.frozen.clone();
            frozen.sort();
            frozen.dedup();
            prop_assert_eq!(frozen.len(), out.frozen.len());
            for (key, s) in &a.starts {
                prop_assert!(out.final_starts.starts[key] >= *s);
            }
        }
    }

    #[test]
    fn codec_round_trips((inst, prio) in with_priority(3, 5)) {
        let back = read_instance(&write_instance(&inst)).unwrap();
        prop_assert_eq!(&back, &inst);
        let s = list_schedule(&inst, &prio);
        prop_assert_eq!(read_schedule(&write_schedule(&s)).unwrap(), s);
    }
}
