//! Arc-flow multigraphs over time points.
//!
//! A machine schedule is a path from node `0` to node `T`: one job arc per
//! job, spanning exactly its processing time, then at most one loss arc to
//! `T` for trailing idle time. Both builders only create arcs that respect
//! the WSPT sequence, so a time point is a node only if it is a sum of
//! processing times of jobs that precede the arc's job in WSPT order.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::bounds::{time_windows, type_time_windows, Horizon, TimeWindows, Window};
use crate::error::{Error, Result};
use crate::instance::{group_job_types, wspt_order, Instance, JobTypeTable, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcKind {
    Job,
    Loss,
}

/// `label` is a job id (AF), a type id (EAF), or 0 for loss arcs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: u64,
    pub head: u64,
    pub label: usize,
    pub kind: ArcKind,
    pub capacity: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// One label per job.
    Af,
    /// One label per job type.
    Eaf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowGraph {
    pub kind: GraphKind,
    pub t: u64,
    pub m: usize,
    /// Sorted time points.
    pub nodes: Vec<u64>,
    /// Job arcs grouped by label in WSPT order, then loss arcs by tail.
    pub arcs: Vec<Arc>,
    /// Job ids behind each label, ascending; `members[label - 1]`.
    pub members: Vec<Vec<usize>>,
    /// Processing time and weight per label.
    pub label_pw: Vec<(u64, u64)>,
    /// Position of each label in the construction order.
    pub label_rank: Vec<usize>,
    label_of_job: Vec<usize>,
}

impl FlowGraph {
    pub fn job_arcs(&self) -> impl Iterator<Item = &Arc> {
        self.arcs.iter().filter(|a| a.kind == ArcKind::Job)
    }

    pub fn loss_arcs(&self) -> impl Iterator<Item = &Arc> {
        self.arcs.iter().filter(|a| a.kind == ArcKind::Loss)
    }

    pub fn label_of_job(&self, job: usize) -> usize {
        self.label_of_job[job - 1]
    }

    /// Index of the arc `(tail, tail + p, label)` or of the loss arc at `tail`.
    pub fn arc_index(&self) -> HashMap<(u64, usize), usize> {
        self.arcs.iter().enumerate().map(|(i, a)| ((a.tail, a.label), i)).collect()
    }
}

/// Time points in `0..=t` reachable as `Σ q_j p_j` with `0 <= q_j <= d_j`.
pub fn normal_patterns(items: &[(u64, usize)], t: u64) -> Vec<u64> {
    let mut reach = vec![false; t as usize + 1];
    reach[0] = true;
    for &(p, d) in items {
        let p = p as usize;
        for _ in 0..d {
            for s in (0..reach.len().saturating_sub(p)).rev() {
                if reach[s] {
                    reach[s + p] = true;
                }
            }
        }
    }
    reach.iter().enumerate().filter(|(_, &r)| r).map(|(i, _)| i as u64).collect()
}

struct Layer {
    label: usize,
    p: u64,
    d: usize,
    window: Window,
}

/// Shared construction: labels are processed in order; each draws arcs from
/// the time points reached by earlier labels, chaining up to `d` copies.
#[allow(clippy::too_many_arguments)]
fn build_layers(
    kind: GraphKind,
    t: u64,
    m: usize,
    layers: &[Layer],
    members: Vec<Vec<usize>>,
    label_pw: Vec<(u64, u64)>,
    loss_from: u64,
    zero_loss: bool,
    n_jobs: usize,
) -> FlowGraph {
    let len = t as usize + 1;
    let mut reach = vec![false; len];
    reach[0] = true;
    let mut arcs = Vec::new();
    let mut label_rank = vec![0; layers.len()];

    for (rank, layer) in layers.iter().enumerate() {
        label_rank[layer.label - 1] = rank;
        let last_start = layer.window.b.min(t.saturating_sub(layer.p));
        if layer.p > t {
            continue;
        }
        let mut is_tail = vec![false; len];
        for base in (layer.window.a..=last_start).rev() {
            if !reach[base as usize] {
                continue;
            }
            for q in 0..layer.d as u64 {
                let s = base + q * layer.p;
                if s > last_start || is_tail[s as usize] {
                    break;
                }
                is_tail[s as usize] = true;
            }
        }
        for s in 0..len {
            if is_tail[s] {
                reach[s + layer.p as usize] = true;
                arcs.push(Arc {
                    tail: s as u64,
                    head: s as u64 + layer.p,
                    label: layer.label,
                    kind: ArcKind::Job,
                    capacity: layer.d as u64,
                });
            }
        }
    }

    for (s, &r) in reach.iter().enumerate().take(t as usize) {
        let s = s as u64;
        if r && (s >= loss_from || (s == 0 && zero_loss)) {
            arcs.push(Arc { tail: s, head: t, label: 0, kind: ArcKind::Loss, capacity: m as u64 });
        }
    }

    reach[t as usize] = true;
    let nodes = (0..len).filter(|&s| reach[s]).map(|s| s as u64).collect();
    let mut label_of_job = vec![0; n_jobs];
    for (i, ms) in members.iter().enumerate() {
        for &j in ms {
            label_of_job[j - 1] = i + 1;
        }
    }
    FlowGraph { kind, t, m, nodes, arcs, members, label_pw, label_rank, label_of_job }
}

/// The straight arc-flow graph: jobs in WSPT order, unit capacities, a loss
/// arc from every reachable `t < T` (from every `0 < t < T` in
/// `strict_figure` mode, which drops the idle-machine arc `(0, T)`).
pub fn build_af_graph_with(inst: &Instance, t: u64, strict_figure: bool) -> Result<FlowGraph> {
    if t < inst.p_max() {
        return Err(Error::InfeasibleHorizon { horizon: t, p_max: inst.p_max() });
    }
    let layers: Vec<Layer> = wspt_order(inst)
        .0
        .into_iter()
        .map(|j| Layer { label: j, p: inst.p(j), d: 1, window: Window { a: 0, b: t - inst.p(j) } })
        .collect();
    let members = (1..=inst.n()).map(|j| vec![j]).collect();
    let label_pw = inst.jobs().iter().map(|j| (j.p, j.w)).collect();
    let loss_from = if strict_figure { 1 } else { 0 };
    Ok(build_layers(GraphKind::Af, t, inst.m(), &layers, members, label_pw, loss_from, !strict_figure, inst.n()))
}

pub fn build_af_graph(inst: &Instance, t: u64) -> Result<FlowGraph> {
    build_af_graph_with(inst, t, false)
}

/// Reduction switches for the enhanced graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EafOptions {
    pub windows: bool,
    pub types: bool,
    pub t_prime: bool,
    /// Drop the `(0, T)` loss arc when `T' > 0`.
    pub strict_figure: bool,
}

impl Default for EafOptions {
    fn default() -> Self {
        Self { windows: true, types: true, t_prime: true, strict_figure: false }
    }
}

/// The enhanced graph: one label per job type with capacity `d`, arcs only
/// from starts inside the type's window, loss arcs only from `t >= T'`
/// (plus `(0, T)` unless `strict_figure`).
pub fn build_eaf_graph(
    inst: &Instance,
    horizon: &Horizon,
    windows: &[Window],
    types: &JobTypeTable,
    strict_figure: bool,
) -> Result<FlowGraph> {
    let t = horizon.t;
    if t < inst.p_max() {
        return Err(Error::InfeasibleHorizon { horizon: t, p_max: inst.p_max() });
    }
    if windows.len() != types.len() {
        return Err(Error::InvalidArgument(format!(
            "{} windows for {} job types",
            windows.len(),
            types.len()
        )));
    }
    let layers: Vec<Layer> = types
        .types
        .iter()
        .zip(windows)
        .enumerate()
        .map(|(i, (ty, &window))| Layer { label: i + 1, p: ty.p, d: ty.d(), window })
        .collect();
    let members = types.types.iter().map(|ty| ty.members.clone()).collect();
    let label_pw = types.types.iter().map(|ty| (ty.p, ty.w)).collect();
    let zero_loss = !strict_figure || horizon.t_prime == 0;
    Ok(build_layers(
        GraphKind::Eaf,
        t,
        inst.m(),
        &layers,
        members,
        label_pw,
        horizon.t_prime,
        zero_loss,
        inst.n(),
    ))
}

/// Computes horizon, windows and types for `inst` and builds the enhanced
/// graph with the chosen reductions.
pub fn eaf_for_instance(inst: &Instance, opts: &EafOptions) -> Result<(FlowGraph, JobTypeTable)> {
    let mut horizon = Horizon::new(inst);
    if !opts.t_prime {
        horizon.t_prime = 0;
    }
    let tw = if opts.windows {
        time_windows(inst, horizon.t)?
    } else {
        TimeWindows::unrestricted(inst, horizon.t)
    };
    let types = if opts.types { group_job_types(inst) } else { JobTypeTable::singletons(inst) };
    let windows = type_time_windows(&types, &tw);
    let g = build_eaf_graph(inst, &horizon, &windows, &types, opts.strict_figure)?;
    Ok((g, types))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GraphStats {
    pub node_count: usize,
    pub job_arc_count: usize,
    pub loss_arc_count: usize,
    pub variable_count: usize,
}

pub fn graph_stats(g: &FlowGraph) -> GraphStats {
    let job_arc_count = g.job_arcs().count();
    let loss_arc_count = g.loss_arcs().count();
    GraphStats {
        node_count: g.nodes.len(),
        job_arc_count,
        loss_arc_count,
        variable_count: job_arc_count + loss_arc_count,
    }
}

/// Percentage of variables saved going from `before` to `after`.
pub fn reduction_percent(before: f64, after: f64) -> f64 {
    100.0 * (1.0 - after / before)
}

pub fn to_dot(g: &FlowGraph) -> String {
    let name = match g.kind {
        GraphKind::Af => "af",
        GraphKind::Eaf => "eaf",
    };
    let mut out = format!("digraph {name} {{\n  rankdir=LR;\n");
    for v in &g.nodes {
        let _ = writeln!(out, "  {v};");
    }
    for a in &g.arcs {
        match (a.kind, g.kind) {
            (ArcKind::Job, GraphKind::Af) => {
                let _ = writeln!(out, "  {} -> {} [label=\"j{}\"];", a.tail, a.head, a.label);
            }
            (ArcKind::Job, GraphKind::Eaf) => {
                let _ = writeln!(
                    out,
                    "  {} -> {} [label=\"type{} x{}\"];",
                    a.tail, a.head, a.label, a.capacity
                );
            }
            (ArcKind::Loss, _) => {
                let _ = writeln!(out, "  {} -> {} [label=\"loss\", style=dashed];", a.tail, a.head);
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Splits an integral flow (one value per arc) into `m` machine schedules.
/// Type arcs hand out member job ids in ascending order.
pub fn decompose_flow(g: &FlowGraph, flow: &[u64], m: usize) -> Result<Schedule> {
    validate_flow(g, flow, m)?;
    let mut out_arcs: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, a) in g.arcs.iter().enumerate() {
        out_arcs.entry(a.tail).or_default().push(i);
    }
    let mut left = flow.to_vec();
    let mut next_member = vec![0usize; g.members.len()];
    let mut machines = Vec::with_capacity(m);
    for _ in 0..m {
        let mut seq = Vec::new();
        let mut at = 0;
        while at != g.t {
            let arc = out_arcs
                .get(&at)
                .and_then(|v| v.iter().copied().find(|&i| left[i] > 0))
                .ok_or_else(|| Error::Validation(format!("flow path stalls at node {at}")))?;
            left[arc] -= 1;
            let a = &g.arcs[arc];
            if a.kind == ArcKind::Job {
                let slot = &mut next_member[a.label - 1];
                let job = *g.members[a.label - 1].get(*slot).ok_or_else(|| {
                    Error::Validation(format!("label {} carries more flow than it has jobs", a.label))
                })?;
                *slot += 1;
                seq.push(job);
            }
            at = a.head;
        }
        machines.push(seq);
    }
    Ok(Schedule::new(machines))
}

fn validate_flow(g: &FlowGraph, flow: &[u64], m: usize) -> Result<()> {
    if flow.len() != g.arcs.len() {
        return Err(Error::Validation(format!(
            "flow has {} entries for {} arcs",
            flow.len(),
            g.arcs.len()
        )));
    }
    let mut balance: HashMap<u64, i128> = g.nodes.iter().map(|&v| (v, 0)).collect();
    for (a, &f) in g.arcs.iter().zip(flow) {
        if f > a.capacity {
            return Err(Error::Validation(format!(
                "arc ({}, {}, {}) carries {f} > capacity {}",
                a.tail, a.head, a.label, a.capacity
            )));
        }
        *balance.get_mut(&a.tail).expect("arc tail is a node") += f as i128;
        *balance.get_mut(&a.head).expect("arc head is a node") -= f as i128;
    }
    for (&v, &b) in &balance {
        let want = if v == 0 {
            m as i128
        } else if v == g.t {
            -(m as i128)
        } else {
            0
        };
        if b != want {
            return Err(Error::Validation(format!(
                "flow not conserved at node {v}: divergence {b}, expected {want}"
            )));
        }
    }
    Ok(())
}

/// The flow of a schedule: one unit along each machine's path. Machines
/// are re-sequenced by label order first; the objective does not change
/// since only equal-ratio jobs can swap.
pub fn schedule_flow(g: &FlowGraph, inst: &Instance, sched: &Schedule) -> Result<Vec<u64>> {
    sched.validate(inst)?;
    let index = g.arc_index();
    let mut flow = vec![0u64; g.arcs.len()];
    for seq in &sched.machines {
        let mut seq = seq.clone();
        seq.sort_by_key(|&j| (g.label_rank[g.label_of_job(j) - 1], j));
        let mut at = 0;
        for j in seq {
            let label = g.label_of_job(j);
            let i = *index.get(&(at, label)).ok_or_else(|| {
                Error::Mapping(format!("no arc for job {j} (label {label}) starting at {at}"))
            })?;
            flow[i] += 1;
            at += inst.p(j);
        }
        if at > g.t {
            return Err(Error::Mapping(format!("machine finishes at {at} > T = {}", g.t)));
        }
        if at < g.t {
            let i = *index
                .get(&(at, 0))
                .ok_or_else(|| Error::Mapping(format!("no loss arc from {at}")))?;
            flow[i] += 1;
        }
    }
    for (a, &f) in g.arcs.iter().zip(&flow) {
        if f > a.capacity {
            return Err(Error::Mapping(format!(
                "arc ({}, {}, {}) would carry {f} > capacity {}",
                a.tail, a.head, a.label, a.capacity
            )));
        }
    }
    Ok(flow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::horizon_t;
    use crate::fixtures::fig1;

    fn job_arcs_of(g: &FlowGraph, label: usize) -> Vec<(u64, u64)> {
        g.job_arcs().filter(|a| a.label == label).map(|a| (a.tail, a.head)).collect()
    }

    #[test]
    fn normal_pattern_examples() {
        assert_eq!(normal_patterns(&[(2, 1), (5, 1), (1, 1), (4, 1)], 8), (0..=8).collect::<Vec<_>>());
        assert_eq!(normal_patterns(&[(3, 1)], 3), vec![0, 3]);
        assert_eq!(normal_patterns(&[(2, 1), (5, 1)], 7), vec![0, 2, 5, 7]);
        assert_eq!(normal_patterns(&[(2, 3)], 10), vec![0, 2, 4, 6]);
        assert_eq!(normal_patterns(&[(3, 2), (5, 1)], 20), vec![0, 3, 5, 6, 8, 11]);
        assert_eq!(normal_patterns(&[], 4), vec![0]);
    }

    #[test]
    fn figure_af_graph() {
        let g = build_af_graph(&fig1(), 8).unwrap();
        let s = graph_stats(&g);
        assert_eq!((s.node_count, s.job_arc_count, s.loss_arc_count), (9, 11, 8));
        assert_eq!(job_arcs_of(&g, 1), vec![(0, 2)]);
        assert_eq!(job_arcs_of(&g, 2), vec![(0, 5), (2, 7)]);
        assert_eq!(job_arcs_of(&g, 3), vec![(0, 1), (2, 3), (5, 6), (7, 8)]);
        assert_eq!(job_arcs_of(&g, 4), vec![(0, 4), (1, 5), (2, 6), (3, 7)]);

        let strict = build_af_graph_with(&fig1(), 8, true).unwrap();
        assert_eq!(graph_stats(&strict).loss_arc_count, 7);
        assert!(strict.loss_arcs().all(|a| a.tail > 0));
    }

    #[test]
    fn single_job_graph() {
        let inst = Instance::new(1, [(3, 1)]).unwrap();
        let g = build_af_graph(&inst, 3).unwrap();
        assert_eq!(g.nodes, vec![0, 3]);
        assert_eq!(job_arcs_of(&g, 1), vec![(0, 3)]);
        let loss: Vec<_> = g.loss_arcs().map(|a| (a.tail, a.head, a.label)).collect();
        assert_eq!(loss, vec![(0, 3, 0)]);
        let s = graph_stats(&g);
        assert_eq!((s.node_count, s.job_arc_count, s.loss_arc_count, s.variable_count), (2, 1, 1, 2));
    }

    #[test]
    fn af_rejects_short_horizon() {
        assert!(matches!(build_af_graph(&fig1(), 4), Err(Error::InfeasibleHorizon { .. })));
    }

    #[test]
    fn horizon_node_always_present() {
        // No subset of {4, 6} sums to T = 8.
        let inst = Instance::new(2, [(4, 1), (6, 1)]).unwrap();
        let t = horizon_t(&inst);
        assert_eq!(t, 8);
        let g = build_af_graph(&inst, t).unwrap();
        assert_eq!(g.nodes, vec![0, 4, 6, 8]);
        assert_eq!(g.loss_arcs().map(|a| a.tail).collect::<Vec<_>>(), vec![0, 4, 6]);
    }

    #[test]
    fn figure_eaf_graph() {
        let (g, _) = eaf_for_instance(&fig1(), &EafOptions::default()).unwrap();
        assert_eq!(job_arcs_of(&g, 1), vec![(0, 2)]);
        assert_eq!(job_arcs_of(&g, 2), vec![(0, 5), (2, 7)]);
        assert_eq!(job_arcs_of(&g, 3), vec![(0, 1), (2, 3), (5, 6)]);
        assert_eq!(job_arcs_of(&g, 4), vec![(0, 4), (1, 5), (2, 6), (3, 7)]);
        let loss: Vec<_> = g.loss_arcs().map(|a| a.tail).collect();
        assert_eq!(loss, vec![0, 4, 5, 6, 7]);
        assert!(g.loss_arcs().all(|a| a.capacity == 2 && a.head == 8));

        let strict = eaf_for_instance(&fig1(), &EafOptions { strict_figure: true, ..Default::default() })
            .unwrap()
            .0;
        assert_eq!(strict.loss_arcs().map(|a| a.tail).collect::<Vec<_>>(), vec![4, 5, 6, 7]);
    }

    #[test]
    fn merged_identical_jobs() {
        let inst = Instance::new(1, [(2, 5); 3]).unwrap();
        let (g, types) = eaf_for_instance(&inst, &EafOptions::default()).unwrap();
        assert_eq!(types.len(), 1);
        assert_eq!(g.nodes, vec![0, 2, 4, 6]);
        assert_eq!(job_arcs_of(&g, 1), vec![(0, 2), (2, 4), (4, 6)]);
        assert!(g.job_arcs().all(|a| a.capacity == 3));
        // Without windows the chain is the same; T' = 6 = T leaves no loss arc but (0, T).
        let (g2, _) = eaf_for_instance(&inst, &EafOptions { windows: false, ..Default::default() }).unwrap();
        assert_eq!(job_arcs_of(&g2, 1), vec![(0, 2), (2, 4), (4, 6)]);
    }

    #[test]
    fn dot_output() {
        let inst = Instance::new(1, [(3, 1)]).unwrap();
        let g = build_af_graph(&inst, 3).unwrap();
        let dot = to_dot(&g);
        assert!(dot.contains("0 -> 3 [label=\"j1\"]"), "{dot}");
        assert!(dot.contains("style=dashed"));

        let g = build_af_graph(&fig1(), 8).unwrap();
        let dot = to_dot(&g);
        let node_lines = dot.lines().filter(|l| l.trim().ends_with(';') && !l.contains("->") && !l.contains('=')).count();
        let edge_lines = dot.lines().filter(|l| l.contains("->")).count();
        assert_eq!((node_lines, edge_lines), (9, 19));
        assert_eq!(dot, to_dot(&build_af_graph(&fig1(), 8).unwrap()));
    }

    fn flow_on(g: &FlowGraph, picks: &[(u64, u64, usize, u64)]) -> Vec<u64> {
        let mut flow = vec![0; g.arcs.len()];
        for &(tail, head, label, v) in picks {
            let i = g
                .arcs
                .iter()
                .position(|a| a.tail == tail && a.head == head && a.label == label)
                .unwrap();
            flow[i] = v;
        }
        flow
    }

    #[test]
    fn decompose_figure_flow() {
        let g = build_af_graph(&fig1(), 8).unwrap();
        let flow = flow_on(&g, &[(0, 2, 1, 1), (2, 3, 3, 1), (3, 7, 4, 1), (7, 8, 0, 1), (0, 5, 2, 1), (5, 8, 0, 1)]);
        let s = decompose_flow(&g, &flow, 2).unwrap();
        assert_eq!(s.canonical().machines, vec![vec![1, 3, 4], vec![2]]);
        assert_eq!(schedule_flow(&g, &fig1(), &s).unwrap(), flow);
    }

    #[test]
    fn decompose_identical_pair() {
        let inst = Instance::new(2, [(2, 1), (2, 1)]).unwrap();
        let (g, _) = eaf_for_instance(&inst, &EafOptions { windows: false, t_prime: false, ..Default::default() }).unwrap();
        let flow = flow_on(&g, &[(0, 2, 1, 2), (2, 3, 0, 2)]);
        let s = decompose_flow(&g, &flow, 2).unwrap();
        assert_eq!(s.machines, vec![vec![1], vec![2]]);
    }

    #[test]
    fn decompose_idle_machine() {
        let inst = Instance::new(1, [(3, 1)]).unwrap();
        let g = build_af_graph(&inst, 3).unwrap();
        let flow = flow_on(&g, &[(0, 3, 0, 1)]);
        let s = decompose_flow(&g, &flow, 1).unwrap();
        assert_eq!(s.machines, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn decompose_rejects_bad_flow() {
        let g = build_af_graph(&fig1(), 8).unwrap();
        let leaky = flow_on(&g, &[(0, 2, 1, 1), (0, 5, 2, 1), (5, 8, 0, 1)]);
        assert!(matches!(decompose_flow(&g, &leaky, 2), Err(Error::Validation(_))));
        let over = flow_on(&g, &[(0, 2, 1, 2), (2, 8, 0, 2)]);
        assert!(matches!(decompose_flow(&g, &over, 2), Err(Error::Validation(_))));
        assert!(decompose_flow(&g, &[0, 1], 2).is_err());
    }

    #[test]
    fn schedule_flow_respects_windows() {
        let inst = fig1();
        let eaf = eaf_for_instance(&inst, &EafOptions::default()).unwrap().0;
        let inside = Schedule::new(vec![vec![2, 3], vec![1, 4]]);
        assert!(schedule_flow(&eaf, &inst, &inside).is_ok());
        // job 3 would start at 7 > b_3 = 6
        let outside = Schedule::new(vec![vec![1, 2, 3], vec![4]]);
        assert!(matches!(schedule_flow(&eaf, &inst, &outside), Err(Error::Mapping(_))));
        let af = build_af_graph(&inst, 8).unwrap();
        assert!(schedule_flow(&af, &inst, &outside).is_ok());
    }
}
