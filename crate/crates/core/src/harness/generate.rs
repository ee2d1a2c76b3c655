//! Seeded instance families.
//!
//! All randomness comes from [`SplitMix64`] seeded with `spec.seed`, drawn
//! in a fixed order so other implementations can reproduce the suites:
//!
//! * random: `p[0][0], p[0][1], ..., p[0][n-1], p[1][0], ..., p[m-1][n-1]`,
//!   each `up_to(p_max)`, then `q[0..n]`, each `up_to(q_max)`.
//! * mixed: `q[0..n]` only, each `up_to(q_max)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::rng::SplitMix64;
use crate::model::Instance;
use crate::ptas::select_partition;
use crate::rational::{int, one, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Random,
    Tight,
    Mixed,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Tight => "tight",
            Family::Mixed => "mixed",
        }
    }
}

/// Parameters of one generated instance. Fields a family does not use are
/// ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorSpec {
    pub family: Family,
    pub seed: u64,
    pub m: usize,
    pub n: usize,
    pub p_max: u64,
    pub q_max: u64,
    pub a: u64,
    /// Length of every operation of the big job.
    pub big_ops: u64,
    pub tiny_count: usize,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        Self { family: Family::Random, seed: 0, m: 2, n: 3, p_max: 9, q_max: 20, a: 1, big_ops: 300, tiny_count: 3 }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("tight family needs a >= 1, got {0}")]
    TightParameter(u64),
    #[error("need at least one machine")]
    NoMachines,
    #[error("mixed instance does not split into one big job and unit tiny jobs: B={big:?} S={small:?} T={tiny:?}")]
    MixedCheck { big: Vec<usize>, small: Vec<usize>, tiny: Vec<usize> },
}

/// Two machines, three jobs: `(a, 0)` and `(0, a)` with no delivery time,
/// and `(1, 1)` with delivery time `a`.
pub fn gen_tight(a: u64) -> Result<Instance, GenError> {
    if a < 1 {
        return Err(GenError::TightParameter(a));
    }
    let a = big(a);
    let z = int(0);
    let p = vec![vec![a.clone(), z.clone(), one()], vec![z.clone(), a.clone(), one()]];
    Ok(Instance::new(p, vec![z.clone(), z, a]).expect("tight instance is well formed"))
}

fn big(v: u64) -> Rational {
    Rational::from_integer(v.into())
}

pub fn gen_random(spec: &GeneratorSpec) -> Result<Instance, GenError> {
    if spec.m == 0 {
        return Err(GenError::NoMachines);
    }
    let mut rng = SplitMix64::new(spec.seed);
    let p = (0..spec.m).map(|_| (0..spec.n).map(|_| big(rng.up_to(spec.p_max))).collect()).collect();
    let q = (0..spec.n).map(|_| big(rng.up_to(spec.q_max))).collect();
    Ok(Instance::with_dims(spec.m, spec.n, p, q).expect("generated instance is well formed"))
}

/// Job 0 has `big_ops` on every machine; jobs `1..=tiny_count` have unit
/// operations on every machine. The split is checked with
/// `select_partition` at epsilon = 1: job 0 must be the only big job, the
/// unit jobs must all be tiny and no job may be small.
pub fn gen_mixed(spec: &GeneratorSpec) -> Result<Instance, GenError> {
    if spec.m == 0 {
        return Err(GenError::NoMachines);
    }
    let n = 1 + spec.tiny_count;
    let mut rng = SplitMix64::new(spec.seed);
    let p = (0..spec.m)
        .map(|_| std::iter::once(big(spec.big_ops)).chain((0..spec.tiny_count).map(|_| one())).collect())
        .collect();
    let q = (0..n).map(|_| big(rng.up_to(spec.q_max))).collect();
    let inst = Instance::with_dims(spec.m, n, p, q).expect("generated instance is well formed");
    let part = select_partition(&inst, &one()).expect("epsilon = 1 is valid");
    let tiny: Vec<usize> = (1..n).collect();
    if part.big != [0] || !part.small.is_empty() || part.tiny != tiny {
        return Err(GenError::MixedCheck { big: part.big, small: part.small, tiny: part.tiny });
    }
    Ok(inst)
}

pub fn generate(spec: &GeneratorSpec) -> Result<Instance, GenError> {
    match spec.family {
        Family::Random => gen_random(spec),
        Family::Tight => gen_tight(spec.a),
        Family::Mixed => gen_mixed(spec),
    }
}
