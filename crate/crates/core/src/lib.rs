//! Open shop scheduling with delivery times (minimizing maximum lateness).
//!
//! The crate provides:
//! - [`model`]: instances, schedules, lateness and lower bounds, validation;
//! - [`listsched`]: greedy list scheduling and Jackson's order;
//! - [`exact`]: an exhaustive branch-and-bound oracle for small instances;
//! - [`ptas`]: the partition / grid / push-and-freeze approximation scheme;
//! - [`harness`]: JSON codecs, instance generators and the benchmark runner.
//!
//! All arithmetic is exact ([`rational::Rational`]).

pub mod exact;
pub mod harness;
pub mod listsched;
pub mod model;
pub mod ptas;
pub mod rational;

pub use model::{
    bounds, lateness_profile, validate_schedule, Bounds, Instance, LatenessProfile, Operation, Schedule, Violation,
    ViolationKind,
};
pub use rational::Rational;
