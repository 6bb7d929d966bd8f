use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::Zero;

use super::{MilpModel, QuadTerm, Sense, VarType};
use crate::flowgraph::{ArcKind, FlowGraph, GraphKind};
use crate::instance::{wspt_cmp, Instance, JobTypeTable};
use crate::Rational;

fn int(v: impl Into<i128>) -> Rational {
    Rational::from(v.into())
}

/// Time-indexed model: `x_{j}_{t} = 1` iff job `j` starts at `t`.
pub fn build_ti(inst: &Instance, t: u64) -> MilpModel {
    let mut model = MilpModel::new("ti");
    // first[j - 1] = index of x_{j}_{0}; starts are contiguous per job.
    let mut first = Vec::with_capacity(inst.n());
    for j in inst.jobs() {
        first.push(model.variables.len());
        if j.p > t {
            continue;
        }
        for s in 0..=t - j.p {
            model.add_binary(format!("x_{}_{}", j.id, s), int(j.w as i128 * s as i128));
        }
    }
    model.obj_constant = int(inst.weighted_p_sum() as i128);

    for j in inst.jobs() {
        if j.p > t {
            continue;
        }
        let terms = (0..=t - j.p).map(|s| (first[j.id - 1] + s as usize, int(1))).collect();
        model.add_constraint(format!("assign_{}", j.id), terms, Sense::Eq, int(1));
    }
    for tt in 0..t {
        let mut terms = Vec::new();
        for j in inst.jobs() {
            if j.p > t {
                continue;
            }
            let lo = (tt + 1).saturating_sub(j.p);
            let hi = tt.min(t - j.p);
            for s in lo..=hi {
                terms.push((first[j.id - 1] + s as usize, int(1)));
            }
        }
        model.add_constraint(format!("cap_{tt}"), terms, Sense::Le, int(inst.m() as i128));
    }
    model
}

/// Assignment model with the WSPT-sequenced completion times in the
/// objective. Keeps Skutella's convex form: `(1 + x)/2 · p_j` contributes a
/// linear and a square term per `(j, k)`, and each pair `i ≺ j` on the same
/// machine contributes `w_j p_i x_{i}_{k} x_{j}_{k}`.
pub fn build_ciqp(inst: &Instance) -> MilpModel {
    let mut model = MilpModel::new("ciqp");
    let m = inst.m();
    let var = |j: usize, k: usize| (j - 1) * m + (k - 1);
    for j in inst.jobs() {
        for k in 1..=m {
            model.add_binary(format!("x_{}_{}", j.id, k), Rational::new((j.w * j.p) as i128, 2));
        }
    }
    for j in inst.jobs() {
        let terms = (1..=m).map(|k| (var(j.id, k), int(1))).collect();
        model.add_constraint(format!("assign_{}", j.id), terms, Sense::Eq, int(1));
    }
    for j in inst.jobs() {
        for k in 1..=m {
            let v = var(j.id, k);
            model.quadratic.push(QuadTerm { i: v, j: v, coef: Rational::new((j.w * j.p) as i128, 2) });
        }
    }
    for j in inst.jobs() {
        for i in inst.jobs() {
            if wspt_cmp(i, j) != Ordering::Less {
                continue;
            }
            for k in 1..=m {
                model.quadratic.push(QuadTerm {
                    i: var(i.id, k),
                    j: var(j.id, k),
                    coef: int((j.w * i.p) as i128),
                });
            }
        }
    }
    model
}

/// Preemptive time-indexed model: `x_{j}_{k}_{t}` is the part of job `j`
/// finished in slot `t` on machine `k`, `y_{j}_{k}` the assignment.
pub fn build_pti(inst: &Instance, t: u64) -> MilpModel {
    let mut model = MilpModel::new("pti");
    let m = inst.m();
    let n = inst.n();
    let x = |j: usize, k: usize, s: u64| ((j - 1) * m + (k - 1)) * t as usize + (s as usize - 1);
    for j in inst.jobs() {
        for k in 1..=m {
            for s in 1..=t {
                // (w/p)(t + (p - 1)/2) = w (2t + p - 1) / (2p)
                let coef = Rational::new(
                    j.w as i128 * (2 * s as i128 + j.p as i128 - 1),
                    2 * j.p as i128,
                );
                model.add_var(format!("x_{}_{}_{}", j.id, k, s), Rational::zero(), None, VarType::Continuous, coef);
            }
        }
    }
    let y0 = model.variables.len();
    let y = |j: usize, k: usize| y0 + (j - 1) * m + (k - 1);
    for j in inst.jobs() {
        for k in 1..=m {
            model.add_binary(format!("y_{}_{}", j.id, k), Rational::zero());
        }
    }
    for j in inst.jobs() {
        for k in 1..=m {
            let mut terms: Vec<_> = (1..=t).map(|s| (x(j.id, k, s), int(1))).collect();
            terms.push((y(j.id, k), -int(j.p as i128)));
            model.add_constraint(format!("link_{}_{}", j.id, k), terms, Sense::Eq, Rational::zero());
        }
    }
    for k in 1..=m {
        for s in 1..=t {
            let terms = (1..=n).map(|j| (x(j, k, s), int(1))).collect();
            model.add_constraint(format!("slot_{k}_{s}"), terms, Sense::Le, int(1));
        }
    }
    for j in inst.jobs() {
        let terms = (1..=m).map(|k| (y(j.id, k), int(1))).collect();
        model.add_constraint(format!("assign_{}", j.id), terms, Sense::Eq, int(1));
    }
    model
}

pub(crate) fn arc_var_name(g: &FlowGraph, tail: u64, head: u64, label: usize, kind: ArcKind) -> String {
    match (kind, g.kind) {
        (ArcKind::Loss, _) => format!("L_{tail}"),
        (ArcKind::Job, GraphKind::Af) => format!("x_{tail}_{head}_{label}"),
        (ArcKind::Job, GraphKind::Eaf) => format!("x_{tail}_{head}_t{label}"),
    }
}

/// Flow model over an AF or EAF graph: one variable per arc, conservation
/// at every node, and a covering row per label (`>= 1` per job, `>= d` per
/// type).
pub fn build_arc_model(g: &FlowGraph) -> MilpModel {
    let name = match g.kind {
        GraphKind::Af => "af",
        GraphKind::Eaf => "eaf",
    };
    let mut model = MilpModel::new(name);
    let m = int(g.m as i128);
    for a in &g.arcs {
        let name = arc_var_name(g, a.tail, a.head, a.label, a.kind);
        match a.kind {
            ArcKind::Loss => {
                model.add_var(name, Rational::zero(), Some(m), VarType::Integer, Rational::zero());
            }
            ArcKind::Job => {
                let w = g.label_pw[a.label - 1].1;
                let obj = int(w as i128 * a.tail as i128);
                if a.capacity == 1 {
                    model.add_binary(name, obj);
                } else {
                    model.add_var(name, Rational::zero(), Some(int(a.capacity as i128)), VarType::Integer, obj);
                }
            }
        }
    }
    model.obj_constant = g
        .members
        .iter()
        .zip(&g.label_pw)
        .map(|(ms, &(p, w))| int(ms.len() as i128 * (p * w) as i128))
        .sum();

    let pos: HashMap<u64, usize> = g.nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut node_terms: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); g.nodes.len()];
    let mut label_terms: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); g.members.len()];
    for (i, a) in g.arcs.iter().enumerate() {
        node_terms[pos[&a.tail]].push((i, int(1)));
        node_terms[pos[&a.head]].push((i, int(-1)));
        if a.kind == ArcKind::Job {
            label_terms[a.label - 1].push((i, int(1)));
        }
    }
    for (&v, terms) in g.nodes.iter().zip(node_terms) {
        let rhs = if v == 0 {
            m
        } else if v == g.t {
            -m
        } else {
            Rational::zero()
        };
        model.add_constraint(format!("flow_{v}"), terms, Sense::Eq, rhs);
    }
    let row = match g.kind {
        GraphKind::Af => "cover",
        GraphKind::Eaf => "demand",
    };
    for (label, terms) in label_terms.into_iter().enumerate() {
        let d = g.members[label].len();
        model.add_constraint(format!("{row}_{}", label + 1), terms, Sense::Ge, int(d as i128));
    }
    model
}

/// AF model over the straight graph.
pub fn build_af_model(g: &FlowGraph, inst: &Instance) -> MilpModel {
    debug_assert_eq!(g.members.len(), inst.n());
    build_arc_model(g)
}

/// EAF model; the constant is `Σ_types d·w·p`, i.e. `Σ_j w_j p_j`.
pub fn build_eaf_model(g: &FlowGraph, types: &JobTypeTable) -> MilpModel {
    debug_assert_eq!(g.members.len(), types.len());
    build_arc_model(g)
}
