use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PtasError;
use crate::model::{bounds, Instance};
use crate::rational::{format_rational, Rational};

/// `epsilon / (2m(m+1))`.
pub fn eps_bar(machines: usize, epsilon: &Rational) -> Result<Rational, PtasError> {
    if !epsilon.is_positive() || *epsilon > Rational::one() {
        return Err(PtasError::InvalidEpsilon(format_rational(epsilon)));
    }
    let m = BigInt::from(machines);
    let denom = BigInt::from(2) * &m * (&m + 1);
    Ok(epsilon / Rational::from_integer(denom))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JobClass {
    Big,
    Small,
    Tiny,
}

/// Big / small / tiny split of the jobs for one choice of `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub epsilon: Rational,
    pub k: u32,
    pub eps_bar: Rational,
    /// Largest machine workload P.
    pub workload: Rational,
    /// `eps_bar^k * P`
    pub big_threshold: Rational,
    /// `eps_bar^(k+1) * P`
    pub tiny_threshold: Rational,
    pub big: Vec<usize>,
    pub small: Vec<usize>,
    pub tiny: Vec<usize>,
    /// Total work of the small jobs.
    pub p_small: Rational,
    /// Grid step, equal to the tiny threshold.
    pub delta: Rational,
    /// Set when every processing time is zero.
    pub degenerate: bool,
    classes: Vec<JobClass>,
}

impl Partition {
    pub fn class_of(&self, job: usize) -> JobClass {
        self.classes[job]
    }

    pub fn is_big(&self, job: usize) -> bool {
        self.classes[job] == JobClass::Big
    }

    /// Replaces the job sets (and `p_small`) by hand. Thresholds and `delta`
    /// are left as they are.
    pub fn set_classes(&mut self, instance: &Instance, big: Vec<usize>, small: Vec<usize>, tiny: Vec<usize>) {
        let mut classes = vec![JobClass::Tiny; instance.jobs()];
        for &j in &big {
            classes[j] = JobClass::Big;
        }
        for &j in &small {
            classes[j] = JobClass::Small;
        }
        self.p_small = small.iter().map(|&j| instance.job_work(j)).sum();
        self.classes = classes;
        self.big = big;
        self.small = small;
        self.tiny = tiny;
    }

    /// `ceil(m / epsilon)`, the largest `k` the scan may need.
    pub fn k_limit(machines: usize, epsilon: &Rational) -> u64 {
        (Rational::from_integer(BigInt::from(machines)) / epsilon).ceil().to_integer().to_u64().unwrap_or(u64::MAX)
    }

    /// `m / eps_bar^k`, the cap on the number of big jobs.
    pub fn big_count_bound(&self, machines: usize) -> Rational {
        Rational::from_integer(BigInt::from(machines)) / pow(&self.eps_bar, self.k)
    }
}

fn pow(base: &Rational, exp: u32) -> Rational {
    (0..exp).fold(Rational::one(), |acc, _| acc * base)
}

/// Scans `k = 1, 2, ..., ceil(m/epsilon)` and returns the first split whose
/// small jobs carry at most `epsilon * P` work. When all processing times
/// are zero the partition is degenerate: every job is tiny and `delta = 0`.
pub fn select_partition(instance: &Instance, epsilon: &Rational) -> Result<Partition, PtasError> {
    let m = instance.machines();
    let n = instance.jobs();
    let bar = eps_bar(m, epsilon)?;
    let workload = bounds(instance).p;

    if workload.is_zero() {
        return Ok(Partition {
            epsilon: epsilon.clone(),
            k: 1,
            eps_bar: bar,
            workload,
            big_threshold: Rational::zero(),
            tiny_threshold: Rational::zero(),
            big: Vec::new(),
            small: Vec::new(),
            tiny: (0..n).collect(),
            p_small: Rational::zero(),
            delta: Rational::zero(),
            degenerate: true,
            classes: vec![JobClass::Tiny; n],
        });
    }

    let largest: Vec<Rational> = (0..n).map(|j| instance.max_operation(j)).collect();
    let budget = epsilon * &workload;
    let limit = Partition::k_limit(m, epsilon);
    let mut big_threshold = &bar * &workload;
    let mut k: u32 = 1;
    loop {
        let tiny_threshold = &big_threshold * &bar;
        let classes: Vec<JobClass> = largest
            .iter()
            .map(|v| {
                if *v >= big_threshold {
                    JobClass::Big
                } else if *v >= tiny_threshold {
                    JobClass::Small
                } else {
                    JobClass::Tiny
                }
            })
            .collect();
        let p_small: Rational = (0..n).filter(|&j| classes[j] == JobClass::Small).map(|j| instance.job_work(j)).sum();
        if p_small <= budget {
            let pick = |c: JobClass| (0..n).filter(|&j| classes[j] == c).collect::<Vec<_>>();
            return Ok(Partition {
                epsilon: epsilon.clone(),
                k,
                eps_bar: bar,
                workload,
                big: pick(JobClass::Big),
                small: pick(JobClass::Small),
                tiny: pick(JobClass::Tiny),
                p_small,
                delta: tiny_threshold.clone(),
                big_threshold,
                tiny_threshold,
                degenerate: false,
                classes,
            });
        }
        if u64::from(k) >= limit {
            // Unreachable: the small sets for different k are disjoint and
            // cannot all exceed epsilon*P.
            return Err(PtasError::NoPartition);
        }
        k += 1;
        big_threshold = tiny_threshold;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn inst(rows: Vec<Vec<i64>>, q: Vec<i64>) -> Instance {
        Instance::new(
            rows.into_iter().map(|r| r.into_iter().map(int).collect()).collect(),
            q.into_iter().map(int).collect(),
        )
        .unwrap()
    }

    #[test]
    fn eps_bar_values() {
        assert_eq!(eps_bar(2, &int(1)).unwrap(), ratio(1, 12));
        assert_eq!(eps_bar(3, &ratio(1, 2)).unwrap(), ratio(1, 48));
        assert_eq!(eps_bar(1, &int(1)).unwrap(), ratio(1, 4));
    }

    #[test]
    fn eps_bar_rejects_out_of_range() {
        assert!(matches!(eps_bar(2, &int(0)), Err(PtasError::InvalidEpsilon(_))));
        assert!(matches!(eps_bar(2, &ratio(-1, 2)), Err(PtasError::InvalidEpsilon(_))));
        assert!(matches!(eps_bar(2, &ratio(3, 2)), Err(PtasError::InvalidEpsilon(_))));
    }

    #[test]
    fn tight_family_partition() {
        let p = select_partition(&inst(vec![vec![3, 0, 1], vec![0, 3, 1]], vec![0, 0, 3]), &int(1)).unwrap();
        assert_eq!(p.k, 1);
        assert_eq!(p.big_threshold, ratio(1, 3));
        assert_eq!(p.tiny_threshold, ratio(1, 36));
        assert_eq!(p.big, vec![0, 1, 2]);
        assert!(p.small.is_empty() && p.tiny.is_empty());
        assert_eq!(p.delta, ratio(1, 36));
    }

    #[test]
    fn identical_unit_jobs_need_k_2() {
        let p = select_partition(&inst(vec![vec![1; 24], vec![1; 24]], vec![0; 24]), &int(1)).unwrap();
        assert_eq!(p.k, 2);
        assert_eq!(p.big.len(), 24);
        assert!(p.small.is_empty());
        assert_eq!(p.delta, ratio(1, 72));
    }

    #[test]
    fn mixed_big_and_tiny() {
        let p =
            select_partition(&inst(vec![vec![300, 1, 1, 1], vec![300, 1, 1, 1]], vec![0, 4, 2, 9]), &int(1)).unwrap();
        assert_eq!(p.k, 1);
        assert_eq!(p.big, vec![0]);
        assert!(p.small.is_empty());
        assert_eq!(p.tiny, vec![1, 2, 3]);
        assert_eq!(p.big_threshold, ratio(303, 12));
    }

    #[test]
    fn degenerate_all_zero() {
        let p = select_partition(&inst(vec![vec![0, 0]], vec![3, 5]), &int(1)).unwrap();
        assert!(p.degenerate);
        assert_eq!(p.tiny, vec![0, 1]);
        assert!(p.delta.is_zero());
    }

    #[test]
    fn k_limit_is_ceiling() {
        assert_eq!(Partition::k_limit(2, &int(1)), 2);
        assert_eq!(Partition::k_limit(3, &ratio(1, 2)), 6);
        assert_eq!(Partition::k_limit(2, &ratio(3, 4)), 3);
    }
}
