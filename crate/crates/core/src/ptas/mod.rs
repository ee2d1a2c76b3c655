//! Polynomial time approximation scheme for a fixed number of machines.
//!
//! The pipeline:
//! 1. pick `k` and split the jobs into big, small and tiny ([`select_partition`]);
//! 2. discretize start times for big operations ([`build_grid`]);
//! 3. produce candidate big-job assignments, either by enumerating every
//!    feasible assignment ([`enumerate_assignments`]) or, in oracle-guided
//!    mode, by aligning an exact optimum to the grid ([`align_to_grid`]);
//! 4. complete each candidate with small and tiny jobs ([`pack_tiny`]);
//! 5. keep the candidate with the smallest Lmax.
//!
//! With the formal grid step the candidate set is astronomically large even
//! for tiny instances, so enumeration is capped by a budget and a coarser
//! step can be supplied through `delta_override`.

mod align;
mod grid;
mod pack;
mod partition;
mod profile;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

pub use align::align_to_grid;
pub use grid::{big_operations, build_grid, enumerate_assignments, Assignments, Grid, GridAssignment};
pub use pack::{pack_tiny, PackOutcome, PushEvent};
pub use partition::{eps_bar, select_partition, JobClass, Partition};
pub use profile::{HoleBinProfile, MachineProfile};

use crate::exact::{exact_solve, ExactLimits};
use crate::model::{lateness_unchecked, Instance, Schedule};
use crate::rational::{format_rational, max_of, to_json, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PtasError {
    #[error("epsilon must lie in (0, 1], got {0}")]
    InvalidEpsilon(String),
    #[error("grid step override must be positive, got {0}")]
    InvalidDelta(String),
    #[error("budget must be at least 1")]
    InvalidBudget,
    #[error("grid step is zero")]
    ZeroGridStep,
    #[error("grid has too many points to enumerate")]
    GridTooLarge,
    #[error("assignment budget exhausted after {evaluated} feasible assignments")]
    BudgetExhausted { evaluated: u64 },
    #[error("infeasible assignment: {0}")]
    InfeasibleAssignment(String),
    #[error("big operation ({machine}, {job}) was pushed twice")]
    PushedTwice { machine: usize, job: usize },
    #[error("exact solver hit its limit after {examined} nodes")]
    ExactLimitExceeded { examined: u64 },
    #[error("no k satisfies the small-work condition")]
    NoPartition,
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Enumerate,
    OracleGuided,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Enumerate => "enumerate",
            Self::OracleGuided => "oracle-guided",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "enumerate" => Some(Self::Enumerate),
            "oracle-guided" | "oracle" => Some(Self::OracleGuided),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtasParams {
    pub epsilon: Rational,
    pub mode: Mode,
    pub delta_override: Option<Rational>,
    /// Maximum number of feasible assignments evaluated in enumerate mode.
    pub budget: u64,
    /// Node limit for the exact solver in oracle-guided mode.
    pub exact_limits: ExactLimits,
}

impl PtasParams {
    /// Epsilon above 1 is clamped to 1 (with a warning); non-positive
    /// epsilon is rejected.
    pub fn new(epsilon: Rational, mode: Mode) -> Result<Self, PtasError> {
        if !epsilon.is_positive() {
            return Err(PtasError::InvalidEpsilon(format_rational(&epsilon)));
        }
        let epsilon = if epsilon > Rational::one() {
            log::warn!("epsilon {} clamped to 1", format_rational(&epsilon));
            Rational::one()
        } else {
            epsilon
        };
        Ok(Self { epsilon, mode, delta_override: None, budget: 1_000_000, exact_limits: ExactLimits::default() })
    }

    pub fn with_delta(mut self, delta: Rational) -> Result<Self, PtasError> {
        if !delta.is_positive() {
            return Err(PtasError::InvalidDelta(format_rational(&delta)));
        }
        self.delta_override = Some(delta);
        Ok(self)
    }

    pub fn with_budget(mut self, budget: u64) -> Result<Self, PtasError> {
        if budget == 0 {
            return Err(PtasError::InvalidBudget);
        }
        self.budget = budget;
        Ok(self)
    }

    pub fn with_exact_limits(mut self, limits: ExactLimits) -> Self {
        self.exact_limits = limits;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtasDiagnostics {
    pub k: u32,
    pub eps_bar: Rational,
    pub delta: Rational,
    pub big: Vec<usize>,
    pub small: Vec<usize>,
    pub tiny: Vec<usize>,
    pub p_small: Rational,
    pub grid_points: BigUint,
    pub assignments_evaluated: u64,
    pub mode: Mode,
}

impl PtasDiagnostics {
    pub fn to_json(&self) -> Value {
        let grid_points = match self.grid_points.to_u64() {
            Some(v) => Value::from(v),
            None => Value::String(self.grid_points.to_string()),
        };
        json!({
            "k": self.k,
            "eps_bar": to_json(&self.eps_bar),
            "delta": to_json(&self.delta),
            "B": self.big,
            "S": self.small,
            "T": self.tiny,
            "pS": to_json(&self.p_small),
            "grid_points": grid_points,
            "assignments_evaluated": self.assignments_evaluated,
            "mode": self.mode.as_str(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct PtasOutcome {
    pub schedule: Schedule,
    pub lmax: Rational,
    pub partition: Partition,
    pub grid: Option<Grid>,
    /// The winning candidate before packing.
    pub assignment: GridAssignment,
    pub pack: Option<PackOutcome>,
    pub diagnostics: PtasDiagnostics,
}

pub fn ptas_solve(instance: &Instance, params: &PtasParams) -> Result<PtasOutcome, PtasError> {
    let partition = select_partition(instance, &params.epsilon)?;

    if partition.degenerate {
        let lmax = max_of(instance.deliveries());
        let diagnostics = diagnostics(&partition, BigUint::zero(), 0, params.mode);
        return Ok(PtasOutcome {
            schedule: Schedule::default(),
            lmax,
            partition,
            grid: None,
            assignment: GridAssignment::default(),
            pack: None,
            diagnostics,
        });
    }

    let grid = build_grid(instance, &partition, params.delta_override.as_ref())?;
    let candidates: Vec<GridAssignment> = match params.mode {
        Mode::Enumerate => {
            enumerate_assignments(instance, &partition, &grid, params.budget)?.collect::<Result<_, _>>()?
        }
        Mode::OracleGuided => {
            let exact = exact_solve(instance, params.exact_limits);
            if !exact.is_optimal() {
                return Err(PtasError::ExactLimitExceeded { examined: exact.combinations_examined });
            }
            vec![align_to_grid(instance, &exact.schedule, &partition, &grid)?]
        }
    };
    if candidates.is_empty() {
        return Err(PtasError::InfeasibleAssignment("no feasible assignment on the grid".into()));
    }

    let scores = candidates
        .par_iter()
        .enumerate()
        .map(|(rank, a)| {
            let out = pack_tiny(instance, &partition, a, &grid)?;
            Ok((lateness_unchecked(instance, &out.schedule).lmax, rank))
        })
        .collect::<Result<Vec<_>, PtasError>>()?;
    let count = scores.len() as u64;
    let (lmax, rank) = scores.into_iter().min().expect("at least one candidate");
    let pack = pack_tiny(instance, &partition, &candidates[rank], &grid)?;

    let diagnostics = diagnostics(&partition, grid.point_count(), count, params.mode);
    Ok(PtasOutcome {
        schedule: pack.schedule.clone(),
        lmax,
        assignment: candidates[rank].clone(),
        partition,
        grid: Some(grid),
        pack: Some(pack),
        diagnostics,
    })
}

fn diagnostics(partition: &Partition, grid_points: BigUint, evaluated: u64, mode: Mode) -> PtasDiagnostics {
    PtasDiagnostics {
        k: partition.k,
        eps_bar: partition.eps_bar.clone(),
        delta: partition.delta.clone(),
        big: partition.big.clone(),
        small: partition.small.clone(),
        tiny: partition.tiny.clone(),
        p_small: partition.p_small.clone(),
        grid_points,
        assignments_evaluated: evaluated,
        mode,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_schedule;
    use crate::rational::{int, ratio};

    fn tight3() -> Instance {
        Instance::new(vec![vec![int(3), int(0), int(1)], vec![int(0), int(3), int(1)]], vec![int(0), int(0), int(3)])
            .unwrap()
    }

    #[test]
    fn oracle_guided_on_tight_family() {
        let inst = tight3();
        let params = PtasParams::new(int(1), Mode::OracleGuided).unwrap();
        let out = ptas_solve(&inst, &params).unwrap();
        assert!(validate_schedule(&inst, &out.schedule).is_empty());
        // L* + 2(|B|+1) m delta = 5 + 4/9
        assert!(out.lmax <= int(5) + ratio(4, 9));
        assert!(out.lmax <= int(10));
        assert_eq!(out.diagnostics.assignments_evaluated, 1);
        assert_eq!(out.diagnostics.grid_points, BigUint::from(576u32));
    }

    #[test]
    fn formal_enumeration_hits_budget() {
        let params = PtasParams::new(int(1), Mode::Enumerate).unwrap().with_budget(5).unwrap();
        assert_eq!(ptas_solve(&tight3(), &params).unwrap_err(), PtasError::BudgetExhausted { evaluated: 5 });
    }

    #[test]
    fn coarse_enumeration_on_tight_family() {
        let params = PtasParams::new(int(1), Mode::Enumerate).unwrap().with_delta(int(1)).unwrap();
        let out = ptas_solve(&tight3(), &params).unwrap();
        assert_eq!(out.lmax, int(5));
    }

    #[test]
    fn epsilon_is_clamped_or_rejected() {
        assert_eq!(PtasParams::new(int(3), Mode::Enumerate).unwrap().epsilon, int(1));
        assert!(PtasParams::new(int(0), Mode::Enumerate).is_err());
        assert!(PtasParams::new(int(1), Mode::Enumerate).unwrap().with_budget(0).is_err());
        assert!(PtasParams::new(int(1), Mode::Enumerate).unwrap().with_delta(int(0)).is_err());
    }

    #[test]
    fn degenerate_instance() {
        let inst = Instance::new(vec![vec![int(0), int(0)]], vec![int(2), int(6)]).unwrap();
        let out = ptas_solve(&inst, &PtasParams::new(int(1), Mode::Enumerate).unwrap()).unwrap();
        assert!(out.schedule.is_empty());
        assert_eq!(out.lmax, int(6));
    }

    #[test]
    fn diagnostics_json_shape() {
        let inst = tight3();
        let params = PtasParams::new(int(1), Mode::OracleGuided).unwrap();
        let d = ptas_solve(&inst, &params).unwrap().diagnostics.to_json();
        assert_eq!(d["k"], 1);
        assert_eq!(d["eps_bar"], "1/12");
        assert_eq!(d["delta"], "1/36");
        assert_eq!(d["B"], json!([0, 1, 2]));
        assert_eq!(d["pS"], 0);
        assert_eq!(d["grid_points"], 576);
        assert_eq!(d["mode"], "oracle-guided");
    }

    #[test]
    fn small_jobs_finish_before_grid_origin() {
        // job 2 is small at k = 1 (max op in [P/144, P/12)); everything
        // else must start at or after p(S)
        let inst = Instance::new(
            vec![vec![int(60), int(0), int(3), ratio(1, 4)], vec![int(0), int(60), int(2), ratio(1, 4)]],
            vec![int(0), int(0), int(5), int(1)],
        )
        .unwrap();
        let part = select_partition(&inst, &int(1)).unwrap();
        assert_eq!(part.small, vec![2]);
        let params = PtasParams::new(int(1), Mode::OracleGuided).unwrap();
        let out = ptas_solve(&inst, &params).unwrap();
        assert!(validate_schedule(&inst, &out.schedule).is_empty());
        for op in out.schedule.ops() {
            if part.class_of(op.job) == JobClass::Small {
                assert!(op.end <= part.p_small);
            } else {
                assert!(op.start >= part.p_small);
            }
        }
    }
}
