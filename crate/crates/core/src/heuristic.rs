//! Iterated local search with GRASP starts and randomized variable
//! neighborhood descent.
//!
//! Every machine is kept in WSPT order, so a solution is just a partition
//! of the jobs and all neighborhoods are inter-machine moves.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::instance::{objective_unchecked, wspt_order, Instance, Schedule};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq)]
pub struct IlsConfig {
    pub seed: u64,
    /// Number of ILS iterations; the first one is the initial construction.
    pub max_iters: u64,
    /// Wall-clock budget. Results then depend on machine speed.
    pub time_limit: Option<Duration>,
    /// GRASP candidate-list width in `[0, 1]`; 0 is pure greedy.
    pub alpha: f64,
    /// Random moves per perturbation.
    pub perturb_strength: usize,
    /// Fresh construction after this many non-improving perturbations.
    pub restart_after: usize,
}

impl Default for IlsConfig {
    fn default() -> Self {
        Self { seed: 0, max_iters: 1000, time_limit: None, alpha: 0.3, perturb_strength: 2, restart_after: 50 }
    }
}

impl IlsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("iteration budget must be at least 1".into()));
        }
        if self.time_limit.is_some_and(|t| t.is_zero()) {
            return Err(Error::InvalidArgument("time budget must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidArgument(format!("alpha {} is outside [0, 1]", self.alpha)));
        }
        if self.perturb_strength == 0 {
            return Err(Error::InvalidArgument("perturbation strength must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlsResult {
    pub schedule: Schedule,
    pub value: u64,
    pub iterations: u64,
}

/// Search state: WSPT ranks for sorting and merging.
struct Ctx<'a> {
    inst: &'a Instance,
    rank: Vec<usize>,
}

impl<'a> Ctx<'a> {
    fn new(inst: &'a Instance) -> Self {
        Self { inst, rank: wspt_order(inst).ranks() }
    }

    fn sort(&self, seq: &mut [usize]) {
        seq.sort_by_key(|&j| self.rank[j - 1]);
    }

    fn machine_value(&self, seq: &[usize]) -> u64 {
        self.edited_value(seq, &[], &[])
    }

    /// Value of a sorted machine after dropping `remove` and inserting
    /// `add` (sorted by rank), without materializing it.
    fn edited_value(&self, seq: &[usize], remove: &[usize], add: &[usize]) -> u64 {
        let (mut t, mut total) = (0u64, 0u64);
        let mut add = add.iter().peekable();
        let step = |j: usize, t: &mut u64, total: &mut u64| {
            *t += self.inst.p(j);
            *total += self.inst.w(j) * *t;
        };
        for &j in seq {
            if remove.contains(&j) {
                continue;
            }
            while let Some(&&x) = add.peek() {
                if self.rank[x - 1] < self.rank[j - 1] {
                    step(x, &mut t, &mut total);
                    add.next();
                } else {
                    break;
                }
            }
            step(j, &mut t, &mut total);
        }
        for &x in add {
            step(x, &mut t, &mut total);
        }
        total
    }

    fn sorted_pair(&self, a: usize, b: usize) -> [usize; 2] {
        if self.rank[a - 1] < self.rank[b - 1] {
            [a, b]
        } else {
            [b, a]
        }
    }
}

/// Greedy randomized construction: jobs in WSPT order, each to a random
/// machine among those with load within `alpha · (max - min)` of the
/// minimum.
pub fn grasp_construct(inst: &Instance, rng: &mut SplitMix64, alpha: f64) -> Schedule {
    let m = inst.m();
    let mut loads = vec![0u64; m];
    let mut machines = vec![Vec::new(); m];
    let mut rcl = Vec::with_capacity(m);
    for &j in wspt_order(inst).ids() {
        let lo = *loads.iter().min().expect("m >= 1");
        let hi = *loads.iter().max().expect("m >= 1");
        let limit = lo as f64 + alpha * (hi - lo) as f64;
        rcl.clear();
        rcl.extend((0..m).filter(|&k| loads[k] == lo || (loads[k] as f64) <= limit));
        let k = if rcl.len() == 1 || alpha == 0.0 {
            rcl[0]
        } else {
            rcl[rng.range_inclusive(0, rcl.len() as u64 - 1) as usize]
        };
        machines[k].push(j);
        loads[k] += inst.p(j);
    }
    // Already in WSPT order since jobs were appended in that order.
    Schedule::new(machines)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Neighborhood {
    Shift,
    Swap11,
    Swap21,
}

const NEIGHBORHOODS: [Neighborhood; 3] = [Neighborhood::Shift, Neighborhood::Swap11, Neighborhood::Swap21];

/// `(new total value, machine a, machine b, jobs leaving a, jobs leaving b)`.
type Move = (u64, usize, usize, Vec<usize>, Vec<usize>);

fn best_move(ctx: &Ctx<'_>, machines: &[Vec<usize>], values: &[u64], kind: Neighborhood) -> Option<Move> {
    let m = machines.len();
    let all = total(values);
    let mut best: Option<Move> = None;
    let mut consider = |value: u64, a: usize, b: usize, out_a: &[usize], out_b: &[usize]| {
        if best.as_ref().is_none_or(|bm| value < bm.0) {
            best = Some((value, a, b, out_a.to_vec(), out_b.to_vec()));
        }
    };
    for a in 0..m {
        for b in 0..m {
            if a == b {
                continue;
            }
            let base = values[a] + values[b];
            let (ma, mb) = (&machines[a], &machines[b]);
            match kind {
                Neighborhood::Shift => {
                    for &j in ma {
                        let v = ctx.edited_value(ma, &[j], &[]) + ctx.edited_value(mb, &[], &[j]);
                        if v < base {
                            consider(v + (all - base), a, b, &[j], &[]);
                        }
                    }
                }
                Neighborhood::Swap11 => {
                    if a > b {
                        continue;
                    }
                    for &j in ma {
                        for &k in mb {
                            let v = ctx.edited_value(ma, &[j], &[k]) + ctx.edited_value(mb, &[k], &[j]);
                            if v < base {
                                consider(v + (all - base), a, b, &[j], &[k]);
                            }
                        }
                    }
                }
                Neighborhood::Swap21 => {
                    for (x, &j1) in ma.iter().enumerate() {
                        for &j2 in &ma[x + 1..] {
                            let pair = ctx.sorted_pair(j1, j2);
                            for &k in mb {
                                let v = ctx.edited_value(ma, &pair, &[k]) + ctx.edited_value(mb, &[k], &pair);
                                if v < base {
                                    consider(v + (all - base), a, b, &pair, &[k]);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    best
}

fn total(values: &[u64]) -> u64 {
    values.iter().sum()
}

fn apply(ctx: &Ctx<'_>, machines: &mut [Vec<usize>], mv: &Move) {
    let (_, a, b, out_a, out_b) = mv;
    machines[*a].retain(|j| !out_a.contains(j));
    machines[*b].retain(|j| !out_b.contains(j));
    machines[*a].extend_from_slice(out_b);
    machines[*b].extend_from_slice(out_a);
    ctx.sort(&mut machines[*a]);
    ctx.sort(&mut machines[*b]);
}

fn rvnd_in(ctx: &Ctx<'_>, sched: &mut Schedule, rng: &mut SplitMix64) {
    let mut values: Vec<u64> = sched.machines.iter().map(|s| ctx.machine_value(s)).collect();
    let mut list = NEIGHBORHOODS.to_vec();
    while !list.is_empty() {
        let pick = rng.range_inclusive(0, list.len() as u64 - 1) as usize;
        let current = total(&values);
        match best_move(ctx, &sched.machines, &values, list[pick]) {
            Some(mv) if mv.0 < current => {
                apply(ctx, &mut sched.machines, &mv);
                for k in [mv.1, mv.2] {
                    values[k] = ctx.machine_value(&sched.machines[k]);
                }
                debug_assert_eq!(total(&values), mv.0);
                list = NEIGHBORHOODS.to_vec();
            }
            _ => {
                list.swap_remove(pick);
            }
        }
    }
}

/// Randomized variable neighborhood descent over shift, swap(1,1) and
/// swap(2,1) with best improvement. Machines come back WSPT-sorted and the
/// value never increases.
pub fn rvnd(inst: &Instance, sched: &Schedule, rng: &mut SplitMix64) -> Schedule {
    let ctx = Ctx::new(inst);
    let mut s = sched.clone();
    for seq in &mut s.machines {
        ctx.sort(seq);
    }
    rvnd_in(&ctx, &mut s, rng);
    s
}

fn perturb_in(ctx: &Ctx<'_>, sched: &mut Schedule, rng: &mut SplitMix64, strength: usize) {
    let m = sched.machines.len();
    if m < 2 || ctx.inst.n() == 0 {
        return;
    }
    for _ in 0..strength {
        let pos = rng.range_inclusive(0, ctx.inst.n() as u64 - 1) as usize;
        // Locate the pos-th job across machines.
        let (mut a, mut i) = (0, pos);
        while i >= sched.machines[a].len() {
            i -= sched.machines[a].len();
            a += 1;
        }
        let mut b = rng.range_inclusive(0, m as u64 - 2) as usize;
        if b >= a {
            b += 1;
        }
        let j = sched.machines[a].remove(i);
        sched.machines[b].push(j);
    }
    for seq in &mut sched.machines {
        ctx.sort(seq);
    }
}

/// `strength` random job moves to a different machine, then a WSPT
/// resort. Identity when `m = 1`.
pub fn perturb(inst: &Instance, sched: &Schedule, rng: &mut SplitMix64, strength: usize) -> Schedule {
    let ctx = Ctx::new(inst);
    let mut s = sched.clone();
    perturb_in(&ctx, &mut s, rng, strength);
    s
}

pub fn ils(inst: &Instance, cfg: &IlsConfig) -> Result<IlsResult> {
    ils_with_monitor(inst, cfg, |_, _| {})
}

/// ILS loop; `monitor(iteration, best value)` runs after every iteration.
pub fn ils_with_monitor(
    inst: &Instance,
    cfg: &IlsConfig,
    mut monitor: impl FnMut(u64, u64),
) -> Result<IlsResult> {
    cfg.validate()?;
    let start = Instant::now();
    let ctx = Ctx::new(inst);
    let mut rng = SplitMix64::new(cfg.seed);

    let mut current = grasp_construct(inst, &mut rng, cfg.alpha);
    rvnd_in(&ctx, &mut current, &mut rng);
    let mut current_value = objective_unchecked(inst, &current.machines);
    let mut best = current.clone();
    let mut best_value = current_value;
    let mut iterations = 1;
    let mut stale = 0;
    monitor(iterations, best_value);

    while iterations < cfg.max_iters && cfg.time_limit.is_none_or(|limit| start.elapsed() < limit) {
        let mut cand = if stale >= cfg.restart_after {
            stale = 0;
            // Restarts replace the current solution outright.
            current_value = u64::MAX;
            grasp_construct(inst, &mut rng, cfg.alpha)
        } else {
            let mut c = current.clone();
            perturb_in(&ctx, &mut c, &mut rng, cfg.perturb_strength);
            c
        };
        rvnd_in(&ctx, &mut cand, &mut rng);
        let v = objective_unchecked(inst, &cand.machines);
        if v < current_value {
            current = cand;
            current_value = v;
            if v < best_value {
                best = current.clone();
                best_value = v;
                stale = 0;
            } else {
                stale += 1;
            }
        } else {
            stale += 1;
        }
        iterations += 1;
        monitor(iterations, best_value);
    }
    debug_assert!(best.is_wspt_sorted(inst));
    Ok(IlsResult { schedule: best, value: best_value, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig1;
    use crate::instance::{evaluate_schedule, generate_instance};

    #[test]
    fn greedy_trace_on_the_figure() {
        let inst = fig1();
        let s = grasp_construct(&inst, &mut SplitMix64::new(1), 0.0);
        assert_eq!(s.machines, vec![vec![1, 3, 4], vec![2]]);
        assert_eq!(evaluate_schedule(&inst, &s).unwrap(), 67);
    }

    #[test]
    fn grasp_output_is_sorted_and_valid() {
        for seed in 0..20 {
            let inst = generate_instance(15, 3, 20, 20, seed).unwrap();
            let s = grasp_construct(&inst, &mut SplitMix64::new(seed), 0.7);
            s.validate(&inst).unwrap();
            assert!(s.is_wspt_sorted(&inst));
        }
    }

    #[test]
    fn rvnd_repairs_the_figure() {
        let inst = fig1();
        let start = Schedule::new(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(evaluate_schedule(&inst, &start).unwrap(), 73);
        let out = rvnd(&inst, &start, &mut SplitMix64::new(3));
        assert_eq!(evaluate_schedule(&inst, &out).unwrap(), 67);
        assert!(out.is_wspt_sorted(&inst));
    }

    #[test]
    fn rvnd_never_worsens() {
        let inst = generate_instance(12, 3, 20, 20, 5).unwrap();
        let mut rng = SplitMix64::new(9);
        for _ in 0..100 {
            let s = perturb(&inst, &grasp_construct(&inst, &mut rng, 1.0), &mut rng, 5);
            let before = evaluate_schedule(&inst, &s).unwrap();
            let out = rvnd(&inst, &s, &mut rng);
            assert!(evaluate_schedule(&inst, &out).unwrap() <= before);
            // a local optimum stays put
            let again = rvnd(&inst, &out, &mut rng);
            assert_eq!(evaluate_schedule(&inst, &again).unwrap(), evaluate_schedule(&inst, &out).unwrap());
        }
    }

    #[test]
    fn perturb_properties() {
        let one = fig1().with_machines(1).unwrap();
        let s = Schedule::new(vec![vec![1, 3, 4, 2]]);
        assert_eq!(perturb(&one, &s, &mut SplitMix64::new(1), 3), s);

        let inst = fig1();
        let opt = Schedule::new(vec![vec![1, 3, 4], vec![2]]);
        let a = perturb(&inst, &opt, &mut SplitMix64::new(42), 1);
        let b = perturb(&inst, &opt, &mut SplitMix64::new(42), 1);
        assert_eq!(a, b);
        assert!(evaluate_schedule(&inst, &a).unwrap() >= 67);
        assert!(a.is_wspt_sorted(&inst));
    }

    #[test]
    fn ils_on_the_figure() {
        for seed in 0..10 {
            let cfg = IlsConfig { seed, max_iters: 100, ..Default::default() };
            let r = ils(&fig1(), &cfg).unwrap();
            assert_eq!(r.value, 67);
            assert_eq!(r.iterations, 100);
        }
    }

    #[test]
    fn ils_single_machine_is_wspt() {
        let inst = generate_instance(20, 1, 20, 20, 3).unwrap();
        let ids = wspt_order(&inst).ids().to_vec();
        let wspt = evaluate_schedule(&inst, &Schedule::new(vec![ids])).unwrap();
        let r = ils(&inst, &IlsConfig { max_iters: 1, ..Default::default() }).unwrap();
        assert_eq!(r.value, wspt);
    }

    #[test]
    fn ils_best_is_monotone_and_deterministic() {
        let inst = generate_instance(25, 3, 20, 20, 11).unwrap();
        let cfg = IlsConfig { seed: 4, max_iters: 200, ..Default::default() };
        let mut last = u64::MAX;
        let r = ils_with_monitor(&inst, &cfg, |_, v| {
            assert!(v <= last);
            last = v;
        })
        .unwrap();
        assert_eq!(r, ils(&inst, &cfg).unwrap());
        assert_eq!(evaluate_schedule(&inst, &r.schedule).unwrap(), r.value);
    }

    #[test]
    fn config_validation() {
        let bad = [
            IlsConfig { max_iters: 0, ..Default::default() },
            IlsConfig { alpha: 1.5, ..Default::default() },
            IlsConfig { perturb_strength: 0, ..Default::default() },
            IlsConfig { time_limit: Some(Duration::ZERO), ..Default::default() },
        ];
        for cfg in bad {
            assert!(matches!(ils(&fig1(), &cfg), Err(Error::InvalidArgument(_))));
        }
    }
}
