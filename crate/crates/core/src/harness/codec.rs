//! JSON encodings for instances and schedules.
//!
//! Instance: `{"m": int, "n": int, "p": [[rational]], "q": [rational]}` with
//! `p` indexed `[machine][job]`. Schedule: `{"ops": [{"machine": int,
//! "job": int, "start": rational, "end": rational}]}`. Indices are 0-based.

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::model::{Instance, ModelError, Operation, Schedule};
use crate::rational::{from_json, json_type_name, to_json, Rational};

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> CodecError {
    CodecError::Field { field: field.into(), message: message.into() }
}

fn get<'a>(obj: &'a Value, key: &str) -> Result<&'a Value, CodecError> {
    obj.get(key).ok_or_else(|| field_err(key, "missing"))
}

fn as_index(value: &Value, field: &str) -> Result<usize, CodecError> {
    value
        .as_u64()
        .and_then(|v| usize::try_from(v).ok())
        .ok_or_else(|| field_err(field, format!("expected a non-negative integer, found {}", json_type_name(value))))
}

fn as_array<'a>(value: &'a Value, field: &str) -> Result<&'a Vec<Value>, CodecError> {
    value.as_array().ok_or_else(|| field_err(field, format!("expected an array, found {}", json_type_name(value))))
}

fn as_rational(value: &Value, field: &str) -> Result<Rational, CodecError> {
    from_json(value).map_err(|e| field_err(field, e.to_string()))
}

fn nonneg(value: Rational, field: &str) -> Result<Rational, CodecError> {
    if value < Rational::from_integer(0.into()) {
        return Err(field_err(field, "must be non-negative"));
    }
    Ok(value)
}

pub fn instance_from_value(doc: &Value) -> Result<Instance, CodecError> {
    if !doc.is_object() {
        return Err(field_err("instance", "expected a JSON object"));
    }
    let m = as_index(get(doc, "m")?, "m")?;
    let n = as_index(get(doc, "n")?, "n")?;
    let rows = as_array(get(doc, "p")?, "p")?;
    if rows.len() != m {
        return Err(field_err("p", format!("expected {m} rows, found {}", rows.len())));
    }
    let mut p = Vec::with_capacity(m);
    for (i, row) in rows.iter().enumerate() {
        let name = format!("p[{i}]");
        let row = as_array(row, &name)?;
        if row.len() != n {
            return Err(field_err(name, format!("expected {n} entries, found {}", row.len())));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let name = format!("p[{i}][{j}]");
                nonneg(as_rational(v, &name)?, &name)
            })
            .collect::<Result<Vec<_>, _>>()?;
        p.push(parsed);
    }
    let qs = as_array(get(doc, "q")?, "q")?;
    if qs.len() != n {
        return Err(field_err("q", format!("expected {n} entries, found {}", qs.len())));
    }
    let q = qs
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let name = format!("q[{j}]");
            nonneg(as_rational(v, &name)?, &name)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Instance::with_dims(m, n, p, q)?)
}

pub fn read_instance(bytes: &[u8]) -> Result<Instance, CodecError> {
    instance_from_value(&serde_json::from_slice(bytes)?)
}

#[derive(Serialize)]
struct InstanceDoc {
    m: usize,
    n: usize,
    p: Vec<Vec<Value>>,
    q: Vec<Value>,
}

fn instance_doc(instance: &Instance) -> InstanceDoc {
    InstanceDoc {
        m: instance.machines(),
        n: instance.jobs(),
        p: instance.processing_matrix().iter().map(|row| row.iter().map(to_json).collect()).collect(),
        q: instance.deliveries().iter().map(to_json).collect(),
    }
}

/// Compact JSON, keys in the order `m, n, p, q`.
pub fn write_instance(instance: &Instance) -> Vec<u8> {
    serde_json::to_vec(&instance_doc(instance)).expect("instance serializes")
}

#[derive(Serialize)]
struct OpDoc {
    machine: usize,
    job: usize,
    start: Value,
    end: Value,
}

#[derive(Serialize)]
struct ScheduleDoc {
    ops: Vec<OpDoc>,
}

fn schedule_doc(schedule: &Schedule) -> ScheduleDoc {
    ScheduleDoc {
        ops: schedule
            .ops()
            .iter()
            .map(|op| OpDoc { machine: op.machine, job: op.job, start: to_json(&op.start), end: to_json(&op.end) })
            .collect(),
    }
}

/// Compact JSON, operation keys in the order `machine, job, start, end`.
pub fn write_schedule(schedule: &Schedule) -> Vec<u8> {
    serde_json::to_vec(&schedule_doc(schedule)).expect("schedule serializes")
}

/// Parses a schedule. Feasibility is not checked here; see
/// [`crate::model::validate_schedule`].
pub fn read_schedule(bytes: &[u8]) -> Result<Schedule, CodecError> {
    let doc: Value = serde_json::from_slice(bytes)?;
    let ops = as_array(get(&doc, "ops")?, "ops")?;
    let ops = ops
        .iter()
        .enumerate()
        .map(|(k, op)| {
            let at = |key: &str| format!("ops[{k}].{key}");
            let fetch = |key: &str| op.get(key).ok_or_else(|| field_err(at(key), "missing"));
            Ok(Operation::new(
                as_index(fetch("machine")?, &at("machine"))?,
                as_index(fetch("job")?, &at("job"))?,
                as_rational(fetch("start")?, &at("start"))?,
                as_rational(fetch("end")?, &at("end"))?,
            ))
        })
        .collect::<Result<Vec<_>, CodecError>>()?;
    Ok(Schedule::new(ops))
}
