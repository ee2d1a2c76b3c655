use num_bigint::BigInt;
use num_traits::Zero;

use super::grid::{Grid, GridAssignment};
use super::partition::Partition;
use super::PtasError;
use crate::model::{Instance, Operation, Schedule};
use crate::rational::{ceil_to_grid, Rational};

/// Shifted-and-rounded copy of a schedule's big operations.
///
/// Every big operation is first delayed by `origin + 2 * m * step`. Then,
/// in order of start time (ties by machine, then job), each operation is
/// moved right to the next grid point and all operations after it in that
/// order are translated by the same amount. The result keeps the
/// per-machine order of the input and each operation ends up between
/// `2 m step` and `(2 + |B|) m step` later than in the input (plus the grid
/// origin).
pub fn align_to_grid(
    instance: &Instance,
    schedule: &Schedule,
    partition: &Partition,
    grid: &Grid,
) -> Result<GridAssignment, PtasError> {
    let mut big: Vec<&Operation> = schedule
        .ops()
        .iter()
        .filter(|op| partition.is_big(op.job) && instance.is_positive(op.machine, op.job))
        .collect();
    if big.is_empty() {
        return Ok(GridAssignment::default());
    }
    if grid.step.is_zero() {
        return Err(PtasError::ZeroGridStep);
    }
    big.sort_by(|a, b| (&a.start, a.machine, a.job).cmp(&(&b.start, b.machine, b.job)));

    let m = Rational::from_integer(BigInt::from(instance.machines()));
    let offset = &grid.origin + Rational::from_integer(BigInt::from(2)) * m * &grid.step;
    let mut carried = Rational::zero();
    let mut assignment = GridAssignment::default();
    for op in big {
        let current = &op.start + &offset + &carried;
        let aligned = ceil_to_grid(&current, &grid.origin, &grid.step);
        carried += &aligned - &current;
        assignment.starts.insert((op.machine, op.job), aligned);
    }
    Ok(assignment)
}
