//! Exact optimum by enumerating job-to-machine partitions.
//!
//! Once the assignment is fixed, WSPT sequencing is optimal on each machine,
//! so enumerating partitions of the jobs into at most `m` blocks is exact.
//! Jobs are placed in WSPT order, which makes each placement an append with
//! O(1) cost update, and a new machine is only opened as the next unused one
//! (restricted growth), so machine relabelings are never visited twice.

use crate::error::{Error, Result};
use crate::instance::{wspt_order, Instance, Schedule};

/// Default ceiling on `m^n`.
pub const DEFAULT_GUARD: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub optimum: u64,
    /// Canonical: machines ordered by smallest job id, empty ones last.
    pub schedule: Schedule,
    /// Every distinct optimal partition, canonical and sorted; empty unless
    /// requested.
    pub optimal_assignments: Vec<Schedule>,
}

pub fn brute_force_optimal(inst: &Instance, enumerate_all: bool) -> Result<OracleResult> {
    brute_force_with_guard(inst, enumerate_all, DEFAULT_GUARD)
}

/// As [`brute_force_optimal`] with an explicit bound on `m^n`.
pub fn brute_force_with_guard(inst: &Instance, enumerate_all: bool, guard: u64) -> Result<OracleResult> {
    let (n, m) = (inst.n(), inst.m());
    let size = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > guard as u128 {
        return Err(Error::SizeGuard { n, m, bound: guard });
    }

    let order = wspt_order(inst).ids().to_vec();
    // Σ w p of the jobs not yet placed: a lower bound on their contribution.
    let mut rest = vec![0u64; n + 1];
    for i in (0..n).rev() {
        let j = order[i];
        rest[i] = rest[i + 1] + inst.w(j) * inst.p(j);
    }

    let mut search = Search {
        inst,
        order: &order,
        rest: &rest,
        enumerate_all,
        loads: vec![0; m],
        machine: vec![0; n],
        best: u64::MAX,
        best_machine: Vec::new(),
        optima: Vec::new(),
    };
    search.go(0, 0, 0);

    let to_schedule = |machine: &[usize]| {
        let mut machines = vec![Vec::new(); m];
        for (i, &k) in machine.iter().enumerate() {
            machines[k].push(order[i]);
        }
        Schedule::new(machines).canonical()
    };
    let schedule = to_schedule(&search.best_machine);
    let mut optimal_assignments: Vec<Schedule> = search.optima.iter().map(|a| to_schedule(a)).collect();
    optimal_assignments.sort_by(|a, b| a.machines.cmp(&b.machines));
    Ok(OracleResult { optimum: search.best, schedule, optimal_assignments })
}

struct Search<'a> {
    inst: &'a Instance,
    order: &'a [usize],
    rest: &'a [u64],
    enumerate_all: bool,
    loads: Vec<u64>,
    /// Machine of the `i`-th job in WSPT order.
    machine: Vec<usize>,
    best: u64,
    best_machine: Vec<usize>,
    optima: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn go(&mut self, i: usize, used: usize, cost: u64) {
        let bound = cost + self.rest[i];
        if bound > self.best || (!self.enumerate_all && bound == self.best) {
            return;
        }
        if i == self.order.len() {
            if cost < self.best {
                self.best = cost;
                self.best_machine = self.machine.clone();
                self.optima.clear();
            }
            if self.enumerate_all {
                self.optima.push(self.machine.clone());
            }
            return;
        }
        let j = self.order[i];
        let (p, w) = (self.inst.p(j), self.inst.w(j));
        let open = (used + 1).min(self.loads.len());
        for k in 0..open {
            self.loads[k] += p;
            self.machine[i] = k;
            let c = cost + w * self.loads[k];
            self.go(i + 1, used.max(k + 1), c);
            self.loads[k] -= p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig1;
    use crate::instance::{evaluate_schedule, generate_instance};

    #[test]
    fn figure_optimum() {
        let r = brute_force_optimal(&fig1(), true).unwrap();
        assert_eq!(r.optimum, 67);
        // 8 + 18 + 35 + 6 = 67 as well
        let other = Schedule::new(vec![vec![1, 4], vec![2, 3]]);
        let fig = Schedule::new(vec![vec![1, 3, 4], vec![2]]);
        assert_eq!(r.optimal_assignments, vec![fig, other]);
        assert!(r.optimal_assignments.contains(&r.schedule));
    }

    #[test]
    fn trivial_cases() {
        let one = Instance::new(3, [(4, 5)]).unwrap();
        assert_eq!(brute_force_optimal(&one, false).unwrap().optimum, 20);
        let two = Instance::new(2, [(3, 2), (5, 7)]).unwrap();
        assert_eq!(brute_force_optimal(&two, false).unwrap().optimum, 6 + 35);
    }

    #[test]
    fn guard() {
        let inst = generate_instance(14, 3, 20, 20, 1).unwrap();
        match brute_force_optimal(&inst, false) {
            Err(Error::SizeGuard { n: 14, m: 3, bound }) => assert_eq!(bound, DEFAULT_GUARD),
            other => panic!("{other:?}"),
        }
        assert!(brute_force_with_guard(&Instance::new(2, [(1, 1); 3]).unwrap(), false, 7).is_err());
    }

    #[test]
    fn optima_are_consistent() {
        for seed in 0..20 {
            let inst = generate_instance(8, 3, 5, 3, seed).unwrap();
            let r = brute_force_optimal(&inst, true).unwrap();
            assert_eq!(evaluate_schedule(&inst, &r.schedule).unwrap(), r.optimum);
            assert!(r.optimal_assignments.contains(&r.schedule));
            for s in &r.optimal_assignments {
                assert_eq!(evaluate_schedule(&inst, s).unwrap(), r.optimum);
                assert_eq!(*s, s.canonical());
            }
            let mut dedup = r.optimal_assignments.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), r.optimal_assignments.len());
            assert_eq!(brute_force_optimal(&inst, false).unwrap().optimum, r.optimum);
        }
    }

    #[test]
    fn identical_jobs_have_several_optima() {
        let inst = Instance::new(2, [(1, 1); 4]).unwrap();
        let r = brute_force_optimal(&inst, true).unwrap();
        assert_eq!(r.optimum, 6);
        // {12|34}, {13|24}, {14|23}
        assert_eq!(r.optimal_assignments.len(), 3);
    }
}
