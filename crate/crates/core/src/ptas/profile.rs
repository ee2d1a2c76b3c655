use num_traits::Zero;

use super::grid::GridAssignment;
use super::partition::Partition;
use crate::model::{Instance, Schedule};
use crate::rational::Rational;

/// Holes (big-operation intervals) and bins (the gaps before them) on one
/// machine, in start order. `bins[r]` is the gap between the end of hole
/// `r-1` (or time zero) and the start of hole `r`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MachineProfile {
    pub hole_starts: Vec<Rational>,
    pub hole_ends: Vec<Rational>,
    pub holes: Vec<Rational>,
    pub bins: Vec<Rational>,
    pub hole_prefix: Vec<Rational>,
    pub bin_prefix: Vec<Rational>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HoleBinProfile {
    pub machines: Vec<MachineProfile>,
}

impl HoleBinProfile {
    /// Profile of arbitrary `(machine, start, end)` intervals. Intervals on a
    /// machine must not overlap.
    pub fn from_intervals<I>(machines: usize, intervals: I) -> Self
    where
        I: IntoIterator<Item = (usize, Rational, Rational)>,
    {
        let mut per_machine: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); machines];
        for (i, s, e) in intervals {
            per_machine[i].push((s, e));
        }
        let machines = per_machine
            .into_iter()
            .map(|mut holes| {
                holes.sort();
                let mut prof = MachineProfile::default();
                let mut prev_end = Rational::zero();
                let (mut h_sum, mut a_sum) = (Rational::zero(), Rational::zero());
                for (s, e) in holes {
                    let h = &e - &s;
                    let a = &s - &prev_end;
                    h_sum += &h;
                    a_sum += &a;
                    prof.hole_prefix.push(h_sum.clone());
                    prof.bin_prefix.push(a_sum.clone());
                    prof.holes.push(h);
                    prof.bins.push(a);
                    prev_end = e.clone();
                    prof.hole_starts.push(s);
                    prof.hole_ends.push(e);
                }
                prof
            })
            .collect();
        Self { machines }
    }

    pub fn from_schedule(instance: &Instance, schedule: &Schedule, partition: &Partition) -> Self {
        Self::from_intervals(
            instance.machines(),
            schedule
                .ops()
                .iter()
                .filter(|op| partition.is_big(op.job) && op.start < op.end)
                .map(|op| (op.machine, op.start.clone(), op.end.clone())),
        )
    }

    pub fn from_assignment(instance: &Instance, assignment: &GridAssignment) -> Self {
        Self::from_intervals(
            instance.machines(),
            assignment.starts.iter().map(|(&(i, j), s)| (i, s.clone(), s + instance.processing(i, j))),
        )
    }
}
