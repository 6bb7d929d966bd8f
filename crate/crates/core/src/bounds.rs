//! Horizon bounds and start-time windows.
//!
//! `T` comes from the upper end of the interval in which some optimal
//! schedule finishes every machine; `T'` is a lower bound on the finishing
//! time of every busy machine. Windows `[a_j, b_j]` bound the start of job
//! `j` using pairwise dominance (`w_k >= w_j` and `p_k <= p_j` means some
//! optimum starts `k` no later than `j`).
//!
//! All arithmetic is on integers or exact rationals.


use crate::error::{Error, Result};
use crate::instance::{wspt_order, Instance, JobTypeTable};
use crate::Rational;

/// Horizon data shared by the graph builders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Horizon {
    pub t: u64,
    pub t_prime: u64,
    pub h_min: Rational,
    pub h_max: Rational,
    pub p_max: u64,
    /// Processing times in non-increasing order.
    pub p_sorted: Vec<u64>,
}

impl Horizon {
    pub fn new(inst: &Instance) -> Self {
        let (h_min, h_max) = h_bounds(inst);
        let mut p_sorted: Vec<u64> = inst.jobs().iter().map(|j| j.p).collect();
        p_sorted.sort_unstable_by(|a, b| b.cmp(a));
        Self {
            t: horizon_t(inst),
            t_prime: horizon_t_prime(inst),
            h_min,
            h_max,
            p_max: inst.p_max(),
            p_sorted,
        }
    }
}

/// `(H_min, H_max) = Σp/m ∓ (m-1)/m · p_max`.
pub fn h_bounds(inst: &Instance) -> (Rational, Rational) {
    let m = inst.m() as i128;
    let sum = inst.total_p() as i128;
    let spread = (m - 1) * inst.p_max() as i128;
    (Rational::new(sum - spread, m), Rational::new(sum + spread, m))
}

/// `T = floor((Σp + (m-1) p_max) / m)`.
pub fn horizon_t(inst: &Instance) -> u64 {
    let m = inst.m() as u64;
    (inst.total_p() + (m - 1) * inst.p_max()) / m
}

/// `T' = ceil((Σp - Σ_{k<m} p̄_k) / m)` with `p̄` sorted non-increasing.
/// With more machines than jobs the subtracted sum stops after `n` terms.
pub fn horizon_t_prime(inst: &Instance) -> u64 {
    let mut p: Vec<u64> = inst.jobs().iter().map(|j| j.p).collect();
    p.sort_unstable_by(|a, b| b.cmp(a));
    let longest: u64 = p.iter().take(inst.m() - 1).sum();
    (inst.total_p() - longest).div_ceil(inst.m() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub a: u64,
    pub b: u64,
}

/// Earliest and latest start per job, indexed by `id - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeWindows {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

impl TimeWindows {
    /// `[0, T - p_j]` for every job.
    pub fn unrestricted(inst: &Instance, t: u64) -> Self {
        Self {
            a: vec![0; inst.n()],
            b: inst.jobs().iter().map(|j| t.saturating_sub(j.p)).collect(),
        }
    }

    pub fn get(&self, job: usize) -> Window {
        Window { a: self.a[job - 1], b: self.b[job - 1] }
    }
}

/// Dominance-based start windows for every job.
pub fn time_windows(inst: &Instance, t: u64) -> Result<TimeWindows> {
    let m = inst.m();
    let total = inst.total_p();
    let mut a = Vec::with_capacity(inst.n());
    let mut b = Vec::with_capacity(inst.n());

    let rank = wspt_order(inst).ranks();
    for j in inst.jobs() {
        let mut before: Vec<u64> = Vec::new();
        let mut after_sum = 0u64;
        let mut after_any = false;
        for k in inst.jobs() {
            if rank[k.id - 1] < rank[j.id - 1] && k.w >= j.w && k.p <= j.p {
                before.push(k.p);
            }
            if rank[k.id - 1] > rank[j.id - 1] && k.w <= j.w && k.p >= j.p {
                after_sum += k.p;
                after_any = true;
            }
        }

        let aj = if before.len() < m {
            0
        } else {
            before.sort_unstable();
            let rho: u64 = before[..before.len() - m + 1].iter().sum();
            rho.div_ceil(m as u64)
        };

        let raw_b = if after_any {
            let tail = (after_sum + j.p).div_ceil(m as u64);
            t.checked_sub(tail).ok_or(Error::InfeasibleWindow { job: j.id, a: aj, b: 0 })?
        } else {
            (total - j.p).div_ceil(m as u64)
        };
        let latest = t.checked_sub(j.p).ok_or(Error::InfeasibleHorizon { horizon: t, p_max: j.p })?;
        let bj = raw_b.min(latest);
        if aj > bj {
            return Err(Error::InfeasibleWindow { job: j.id, a: aj, b: bj });
        }
        a.push(aj);
        b.push(bj);
    }
    Ok(TimeWindows { a, b })
}

/// Window of each type: the hull of its members' windows.
pub fn type_time_windows(types: &JobTypeTable, tw: &TimeWindows) -> Vec<Window> {
    types
        .types
        .iter()
        .map(|ty| {
            let a = ty.members.iter().map(|&j| tw.a[j - 1]).min().unwrap_or(0);
            let b = ty.members.iter().map(|&j| tw.b[j - 1]).max().unwrap_or(0);
            Window { a, b }
        })
        .collect()
}
