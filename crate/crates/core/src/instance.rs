//! Instances, schedules, WSPT ordering and job types.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// A job with integer processing time `p` and weight `w`; ids are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Job {
    pub id: usize,
    pub p: u64,
    pub w: u64,
}

/// `n` jobs to be scheduled on `m` identical machines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    m: usize,
    jobs: Vec<Job>,
}

impl Instance {
    /// Builds an instance from `(p, w)` pairs; ids follow the list order.
    pub fn new(m: usize, pw: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let jobs: Vec<Job> = pw
            .into_iter()
            .enumerate()
            .map(|(i, (p, w))| Job { id: i + 1, p, w })
            .collect();
        if m == 0 {
            return Err(Error::InvalidArgument("machine count must be at least 1".into()));
        }
        if jobs.is_empty() {
            return Err(Error::InvalidArgument("an instance needs at least one job".into()));
        }
        if let Some(j) = jobs.iter().find(|j| j.p == 0 || j.w == 0) {
            return Err(Error::InvalidArgument(format!(
                "job {} has p = {}, w = {}; both must be positive",
                j.id, j.p, j.w
            )));
        }
        Ok(Self { m, jobs })
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    /// Job by 1-based id.
    pub fn job(&self, id: usize) -> &Job {
        &self.jobs[id - 1]
    }

    pub fn p(&self, id: usize) -> u64 {
        self.jobs[id - 1].p
    }

    pub fn w(&self, id: usize) -> u64 {
        self.jobs[id - 1].w
    }

    pub fn total_p(&self) -> u64 {
        self.jobs.iter().map(|j| j.p).sum()
    }

    pub fn p_max(&self) -> u64 {
        self.jobs.iter().map(|j| j.p).max().unwrap_or(0)
    }

    /// `Σ w_j p_j`, the constant part of every start-time objective.
    pub fn weighted_p_sum(&self) -> u64 {
        self.jobs.iter().map(|j| j.w * j.p).sum()
    }

    /// Same jobs on a different machine count.
    pub fn with_machines(&self, m: usize) -> Result<Self> {
        Self::new(m, self.jobs.iter().map(|j| (j.p, j.w)))
    }
}

/// Parses the plain-text instance format: optional `#` comment lines, a
/// header `n m`, then `n` lines `p w`.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut rows = text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with('#')).then_some((i + 1, t))
    });

    let (hline, header) = rows.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header line \"n m\"".into(),
    })?;
    let head = parse_ints(hline, header)?;
    if head.len() != 2 {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header must be \"n m\", found {} values", head.len()),
        });
    }
    let (n, m) = (head[0], head[1]);
    if n == 0 || m == 0 {
        return Err(Error::Parse { line: hline, msg: "n and m must be positive".into() });
    }

    let mut pw = Vec::with_capacity(n as usize);
    let mut last_line = hline;
    for (line, row) in rows {
        last_line = line;
        if pw.len() == n as usize {
            return Err(Error::Parse {
                line,
                msg: format!("more job records than the declared n = {n}"),
            });
        }
        let v = parse_ints(line, row)?;
        if v.len() != 2 {
            return Err(Error::Parse {
                line,
                msg: format!("job record must be \"p w\", found {} values", v.len()),
            });
        }
        if v[0] == 0 || v[1] == 0 {
            return Err(Error::Parse {
                line,
                msg: format!("p and w must be at least 1 (got p = {}, w = {})", v[0], v[1]),
            });
        }
        pw.push((v[0], v[1]));
    }
    if pw.len() != n as usize {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("expected {n} job records, found {}", pw.len()),
        });
    }
    Instance::new(m as usize, pw)
}

fn parse_ints(line: usize, s: &str) -> Result<Vec<u64>> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line,
                msg: format!("expected a non-negative integer, found {tok:?}"),
            })
        })
        .collect()
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", inst.n(), inst.m());
    for j in inst.jobs() {
        let _ = writeln!(out, "{} {}", j.p, j.w);
    }
    out
}

/// Draws `p ~ U{1..p_max}` and `w ~ U{1..w_max}` per job from SplitMix64,
/// alternating `p` then `w` for each job.
pub fn generate_instance(n: usize, m: usize, p_max: u64, w_max: u64, seed: u64) -> Result<Instance> {
    if n == 0 || m == 0 || p_max == 0 || w_max == 0 {
        return Err(Error::InvalidArgument(format!(
            "generation needs n, m, p_max, w_max >= 1 (got {n}, {m}, {p_max}, {w_max})"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let pw: Vec<_> = (0..n)
        .map(|_| {
            let p = rng.range_inclusive(1, p_max);
            let w = rng.range_inclusive(1, w_max);
            (p, w)
        })
        .collect();
    Instance::new(m, pw)
}

/// Total WSPT order: larger `w/p` first, equal ratios by smaller id.
/// Ratios are compared by cross-multiplication.
pub fn wspt_cmp(a: &Job, b: &Job) -> Ordering {
    let lhs = a.w as u128 * b.p as u128;
    let rhs = b.w as u128 * a.p as u128;
    rhs.cmp(&lhs).then(a.id.cmp(&b.id))
}

/// Job ids sorted by the WSPT rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WsptOrder(pub Vec<usize>);

impl WsptOrder {
    pub fn ids(&self) -> &[usize] {
        &self.0
    }

    /// `rank[id - 1]` = position of the job in the order.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.0.len()];
        for (pos, &id) in self.0.iter().enumerate() {
            rank[id - 1] = pos;
        }
        rank
    }
}

pub fn wspt_order(inst: &Instance) -> WsptOrder {
    let mut jobs = inst.jobs().to_vec();
    jobs.sort_by(wspt_cmp);
    WsptOrder(jobs.into_iter().map(|j| j.id).collect())
}

/// Jobs sharing `(p, w)`; the type's multiplicity is `members.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobType {
    pub p: u64,
    pub w: u64,
    pub members: Vec<usize>,
}

impl JobType {
    pub fn d(&self) -> usize {
        self.members.len()
    }
}

/// Job types in WSPT order; type ids are 1-based positions in `types`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobTypeTable {
    pub types: Vec<JobType>,
    type_of: Vec<usize>,
}

impl JobTypeTable {
    /// 1-based type id of a job.
    pub fn type_of(&self, job: usize) -> usize {
        self.type_of[job - 1]
    }

    pub fn get(&self, type_id: usize) -> &JobType {
        &self.types[type_id - 1]
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    /// One singleton type per job, in WSPT order (job merging disabled).
    pub fn singletons(inst: &Instance) -> Self {
        let types = wspt_order(inst)
            .0
            .into_iter()
            .map(|id| JobType { p: inst.p(id), w: inst.w(id), members: vec![id] })
            .collect();
        Self::from_types(inst.n(), types)
    }

    fn from_types(n: usize, types: Vec<JobType>) -> Self {
        let mut type_of = vec![0; n];
        for (t, ty) in types.iter().enumerate() {
            for &j in &ty.members {
                type_of[j - 1] = t + 1;
            }
        }
        Self { types, type_of }
    }
}

/// Merges jobs with identical `(p, w)`. Types come out in WSPT order of the
/// pair, ties by smallest member id; members are ascending.
pub fn group_job_types(inst: &Instance) -> JobTypeTable {
    let mut groups: BTreeMap<(u64, u64), Vec<usize>> = BTreeMap::new();
    for j in inst.jobs() {
        groups.entry((j.p, j.w)).or_default().push(j.id);
    }
    let mut types: Vec<JobType> =
        groups.into_iter().map(|((p, w), members)| JobType { p, w, members }).collect();
    types.sort_by(|a, b| {
        wspt_cmp(
            &Job { id: a.members[0], p: a.p, w: a.w },
            &Job { id: b.members[0], p: b.p, w: b.w },
        )
    });
    JobTypeTable::from_types(inst.n(), types)
}

/// Per-machine job sequences. Jobs run back to back from time zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    pub machines: Vec<Vec<usize>>,
}

impl Schedule {
    pub fn new(machines: Vec<Vec<usize>>) -> Self {
        Self { machines }
    }

    /// Checks that the machine lists partition `1..=n` and that there are
    /// exactly `m` of them.
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        if self.machines.len() != inst.m() {
            return Err(Error::Validation(format!(
                "schedule has {} machines, instance has {}",
                self.machines.len(),
                inst.m()
            )));
        }
        let mut seen = vec![false; inst.n()];
        for &j in self.machines.iter().flatten() {
            if j == 0 || j > inst.n() {
                return Err(Error::Validation(format!("unknown job id {j}")));
            }
            if std::mem::replace(&mut seen[j - 1], true) {
                return Err(Error::Validation(format!("job {j} scheduled more than once")));
            }
        }
        if let Some(pos) = seen.iter().position(|s| !s) {
            return Err(Error::Validation(format!("job {} is not scheduled", pos + 1)));
        }
        Ok(())
    }

    /// `C[id - 1]` for every job; assumes a valid schedule.
    pub fn completion_times(&self, inst: &Instance) -> Vec<u64> {
        let mut c = vec![0; inst.n()];
        for seq in &self.machines {
            let mut t = 0;
            for &j in seq {
                t += inst.p(j);
                c[j - 1] = t;
            }
        }
        c
    }

    /// Start time of every job, indexed by `id - 1`.
    pub fn start_times(&self, inst: &Instance) -> Vec<u64> {
        let c = self.completion_times(inst);
        (1..=inst.n()).map(|j| c[j - 1] - inst.p(j)).collect()
    }

    /// Finishing time of each machine (0 when empty).
    pub fn loads(&self, inst: &Instance) -> Vec<u64> {
        self.machines.iter().map(|s| s.iter().map(|&j| inst.p(j)).sum()).collect()
    }

    /// Reorders each machine by the WSPT rule.
    pub fn sort_wspt(&mut self, inst: &Instance) {
        for seq in &mut self.machines {
            seq.sort_by(|&a, &b| wspt_cmp(inst.job(a), inst.job(b)));
        }
    }

    pub fn is_wspt_sorted(&self, inst: &Instance) -> bool {
        self.machines.iter().all(|seq| {
            seq.windows(2).all(|w| wspt_cmp(inst.job(w[0]), inst.job(w[1])) == Ordering::Less)
        })
    }

    /// Machines ordered by their smallest job id, empty machines last.
    pub fn canonical(&self) -> Schedule {
        let mut machines = self.machines.clone();
        machines.sort_by_key(|s| s.iter().copied().min().unwrap_or(usize::MAX));
        Schedule { machines }
    }
}

/// `Σ w_j C_j` of a schedule without inserted idle time.
pub fn evaluate_schedule(inst: &Instance, sched: &Schedule) -> Result<u64> {
    sched.validate(inst)?;
    Ok(objective_unchecked(inst, &sched.machines))
}

pub(crate) fn objective_unchecked(inst: &Instance, machines: &[Vec<usize>]) -> u64 {
    machines
        .iter()
        .map(|seq| {
            let mut t = 0;
            seq.iter()
                .map(|&j| {
                    t += inst.p(j);
                    inst.w(j) * t
                })
                .sum::<u64>()
        })
        .sum()
}

/// Schedule file: `objective V`, then one `machine k: j1 j2 ...` line per
/// machine.
pub fn write_schedule(inst: &Instance, sched: &Schedule) -> Result<String> {
    let value = evaluate_schedule(inst, sched)?;
    let mut out = format!("objective {value}\n");
    for (k, seq) in sched.machines.iter().enumerate() {
        let _ = write!(out, "machine {}:", k + 1);
        for j in seq {
            let _ = write!(out, " {j}");
        }
        out.push('\n');
    }
    Ok(out)
}

/// Reads a schedule file; returns the schedule and the recorded objective.
pub fn parse_schedule(text: &str) -> Result<(Schedule, Option<u64>)> {
    let mut objective = None;
    let mut machines: Vec<Vec<usize>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("objective") {
            let v = rest.trim().parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad objective value {:?}", rest.trim()),
            })?;
            objective = Some(v);
        } else if let Some(rest) = line.strip_prefix("machine") {
            let (k, jobs) = rest.split_once(':').ok_or(Error::Parse {
                line: lineno,
                msg: "expected \"machine k: ...\"".into(),
            })?;
            let k: usize = k.trim().parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad machine index {:?}", k.trim()),
            })?;
            if k != machines.len() + 1 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("machine {k} out of sequence"),
                });
            }
            let seq = jobs
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad job id {t:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            machines.push(seq);
        } else {
            return Err(Error::Parse { line: lineno, msg: format!("unrecognized line {line:?}") });
        }
    }
    Ok((Schedule::new(machines), objective))
}
