//! Schedules to model valuations and back.

use num_traits::{ToPrimitive, Zero};

use super::build::arc_var_name;
use super::{MilpModel, Valuation};
use crate::error::{Error, Result};
use crate::flowgraph::{decompose_flow, FlowGraph};
use crate::instance::{Instance, Schedule};
use crate::Rational;

/// Model inputs needed to map a schedule into each formulation.
#[derive(Debug, Clone, Copy)]
pub enum AssignmentContext<'a> {
    Ti { inst: &'a Instance, t: u64 },
    Ciqp { inst: &'a Instance },
    Pti { inst: &'a Instance, t: u64 },
    Af { graph: &'a FlowGraph, inst: &'a Instance },
    Eaf { graph: &'a FlowGraph, inst: &'a Instance },
}

pub fn schedule_to_assignment(sched: &Schedule, ctx: AssignmentContext<'_>) -> Result<Valuation> {
    match ctx {
        AssignmentContext::Ti { inst, t } => ti_assignment(inst, t, sched),
        AssignmentContext::Ciqp { inst } => ciqp_assignment(inst, sched),
        AssignmentContext::Pti { inst, t } => pti_assignment(inst, t, sched),
        AssignmentContext::Af { graph, inst } | AssignmentContext::Eaf { graph, inst } => {
            arc_assignment(graph, inst, sched)
        }
    }
}

fn one() -> Rational {
    Rational::from(1)
}

/// `x_{j}_{S_j} = 1`.
pub fn ti_assignment(inst: &Instance, t: u64, sched: &Schedule) -> Result<Valuation> {
    sched.validate(inst)?;
    let starts = sched.start_times(inst);
    let mut v = Valuation::new();
    for j in inst.jobs() {
        let s = starts[j.id - 1];
        if s + j.p > t {
            return Err(Error::Mapping(format!("job {} starts at {s}, past T - p = {}", j.id, t.saturating_sub(j.p))));
        }
        v.insert(format!("x_{}_{}", j.id, s), one());
    }
    Ok(v)
}

/// `x_{j}_{k} = 1` for the machine `k` (1-based) running `j`.
pub fn ciqp_assignment(inst: &Instance, sched: &Schedule) -> Result<Valuation> {
    sched.validate(inst)?;
    let mut v = Valuation::new();
    for (k, seq) in sched.machines.iter().enumerate() {
        for &j in seq {
            v.insert(format!("x_{}_{}", j, k + 1), one());
        }
    }
    Ok(v)
}

/// Unit parts in slots `S_j + 1 ..= C_j` of the job's machine, `y = 1`.
pub fn pti_assignment(inst: &Instance, t: u64, sched: &Schedule) -> Result<Valuation> {
    sched.validate(inst)?;
    let starts = sched.start_times(inst);
    let mut v = Valuation::new();
    for (k, seq) in sched.machines.iter().enumerate() {
        for &j in seq {
            let s = starts[j - 1];
            let c = s + inst.p(j);
            if c > t {
                return Err(Error::Mapping(format!("job {j} completes at {c} > T = {t}")));
            }
            for slot in s + 1..=c {
                v.insert(format!("x_{}_{}_{}", j, k + 1, slot), one());
            }
            v.insert(format!("y_{}_{}", j, k + 1), one());
        }
    }
    Ok(v)
}

/// Unit flow along each machine's path; type arcs accumulate.
pub fn arc_assignment(g: &FlowGraph, inst: &Instance, sched: &Schedule) -> Result<Valuation> {
    let flow = schedule_flow_checked(g, inst, sched)?;
    let mut v = Valuation::new();
    for (a, &f) in g.arcs.iter().zip(&flow) {
        if f > 0 {
            v.insert(arc_var_name(g, a.tail, a.head, a.label, a.kind), Rational::from(f as i128));
        }
    }
    Ok(v)
}

fn schedule_flow_checked(g: &FlowGraph, inst: &Instance, sched: &Schedule) -> Result<Vec<u64>> {
    if sched.machines.len() != g.m {
        return Err(Error::Validation(format!("schedule has {} machines, graph has {}", sched.machines.len(), g.m)));
    }
    crate::flowgraph::schedule_flow(g, inst, sched)
}

/// Reads an integral arc valuation of `model` (built from `g`) and splits
/// it into machine schedules.
pub fn decode_arc_valuation(g: &FlowGraph, model: &MilpModel, v: &Valuation) -> Result<Schedule> {
    let mut flow = vec![0u64; g.arcs.len()];
    for (name, val) in v {
        if name == super::ONE {
            continue;
        }
        let i = model
            .var_index(name)
            .ok_or_else(|| Error::Validation(format!("unknown variable {name}")))?;
        if i >= flow.len() {
            return Err(Error::Validation(format!("{name} is not an arc variable")));
        }
        flow[i] = nonneg_int(name, val)?;
    }
    decompose_flow(g, &flow, g.m)
}

/// Rebuilds a schedule from TI start variables: jobs are assigned by start
/// time to the machine that became free first (ties by machine index).
pub fn decode_ti_valuation(inst: &Instance, t: u64, v: &Valuation) -> Result<Schedule> {
    let mut start: Vec<Option<u64>> = vec![None; inst.n()];
    for (name, val) in v {
        if name == super::ONE || val.is_zero() {
            continue;
        }
        let parsed = name
            .strip_prefix("x_")
            .and_then(|rest| rest.split_once('_'))
            .and_then(|(j, s)| Some((j.parse::<usize>().ok()?, s.parse::<u64>().ok()?)));
        let Some((j, s)) = parsed else {
            return Err(Error::Validation(format!("{name} is not a TI variable")));
        };
        if j == 0 || j > inst.n() || s + inst.p(j) > t {
            return Err(Error::Validation(format!("{name} is out of range")));
        }
        if nonneg_int(name, val)? != 1 {
            return Err(Error::Validation(format!("{name} must be 0 or 1")));
        }
        if start[j - 1].replace(s).is_some() {
            return Err(Error::Validation(format!("job {j} starts more than once")));
        }
    }
    let mut order: Vec<(u64, usize)> = Vec::with_capacity(inst.n());
    for j in 1..=inst.n() {
        let s = start[j - 1].ok_or_else(|| Error::Validation(format!("job {j} never starts")))?;
        order.push((s, j));
    }
    order.sort_unstable();

    let mut free = vec![0u64; inst.m()];
    let mut machines = vec![Vec::new(); inst.m()];
    for (s, j) in order {
        // Prefer a machine that frees exactly at s so paths stay gap-free where possible.
        let k = (0..inst.m())
            .filter(|&k| free[k] <= s)
            .max_by_key(|&k| (free[k], std::cmp::Reverse(k)))
            .ok_or_else(|| Error::Validation(format!("more than m jobs running at time {s}")))?;
        machines[k].push(j);
        free[k] = s + inst.p(j);
    }
    Ok(Schedule::new(machines))
}

fn nonneg_int(name: &str, val: &Rational) -> Result<u64> {
    if !val.is_integer() || *val < Rational::zero() {
        return Err(Error::Validation(format!("{name} = {val} is not a non-negative integer")));
    }
    val.to_integer()
        .to_u64()
        .ok_or_else(|| Error::Validation(format!("{name} is too large")))
}
