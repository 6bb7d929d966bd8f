//! Command-line front end. Every command prints a JSON [`RunReport`] on
//! stdout; files are only written where `--out` asks for them.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{time_windows, Horizon};
use crate::error::{Error, Result};
use crate::flowgraph::{
    build_af_graph_with, eaf_for_instance, graph_stats, reduction_percent, to_dot, EafOptions, FlowGraph,
};
use crate::heuristic::{ils, IlsConfig};
use crate::instance::{
    evaluate_schedule, generate_instance, parse_instance, parse_schedule, write_instance, write_schedule, Instance,
    Schedule,
};
use crate::milp::{
    build_af_model, build_ciqp, build_eaf_model, build_pti, build_ti, check_feasible,
    decode_arc_valuation, decode_ti_valuation, emit_lp, emit_mps, format_rational, parse_solution,
    schedule_to_assignment, valuation_from_solution, AssignmentContext, MilpModel,
};
use crate::oracle::{brute_force_with_guard, DEFAULT_GUARD};

/// Environment variable holding the default `--solver-cmd`.
pub const SOLVER_ENV: &str = "PMWCT_SOLVER_CMD";

#[derive(Debug, Parser)]
#[command(name = "pmwct", version, about = "Arc-flow models and heuristics for P||ΣwjCj")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Generate a random instance with U[1, pmax] times and U[1, wmax] weights.
    Gen(GenArgs),
    /// Print T, T', the completion interval and start windows.
    Bounds(InArgs),
    /// Build an AF or EAF graph; report its size, optionally write DOT.
    Graph(GraphArgs),
    /// Write one of the MILP formulations as LP or MPS.
    Model(ModelArgs),
    /// Variable counts of TI, AF and EAF over seeded instances, as CSV.
    Compare(CompareArgs),
    /// Iterated local search.
    SolveHeur(HeurArgs),
    /// Exhaustive search for tiny instances.
    SolveExact(ExactArgs),
    /// Map a schedule into a model and check feasibility.
    Check(CheckArgs),
    /// Write a model, run an external MILP solver, decode and verify.
    SolveExternal(ExternalArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub pmax: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub wmax: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct InArgs {
    /// Instance file.
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Reductions {
    /// Ignore start-time windows.
    #[arg(long)]
    pub no_windows: bool,
    /// Keep one label per job instead of merging identical jobs.
    #[arg(long)]
    pub no_types: bool,
    /// Allow loss arcs before T'.
    #[arg(long)]
    pub no_tprime: bool,
    /// Figure convention for loss arcs: none leaving node 0.
    #[arg(long)]
    pub strict_figure: bool,
}

impl Reductions {
    fn eaf(&self) -> EafOptions {
        EafOptions {
            windows: !self.no_windows,
            types: !self.no_types,
            t_prime: !self.no_tprime,
            strict_figure: self.strict_figure,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphKindArg {
    Af,
    Eaf,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "af")]
    pub kind: GraphKindArg,
    /// Write the graph in DOT format here.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    #[command(flatten)]
    pub reductions: Reductions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Ti,
    Ciqp,
    Pti,
    Af,
    Eaf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckForm {
    Ti,
    Af,
    Eaf,
}

impl From<CheckForm> for Form {
    fn from(f: CheckForm) -> Self {
        match f {
            CheckForm::Ti => Form::Ti,
            CheckForm::Af => Form::Af,
            CheckForm::Eaf => Form::Eaf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Lp,
    Mps,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub form: Form,
    #[arg(long, value_enum, default_value = "lp")]
    pub format: Format,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub reductions: Reductions,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub pmax: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub wmax: u64,
    /// Number of instances; instance `i` uses seed `seed-base + i`.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed_base: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub reductions: Reductions,
}

#[derive(Debug, Args)]
pub struct HeurArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Iteration budget.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub iters: Option<u64>,
    /// Wall-clock budget in seconds; makes the run non-deterministic.
    #[arg(long)]
    pub time: Option<f64>,
    #[arg(long, default_value_t = 0.3)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2)]
    pub strength: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Also count every optimal partition.
    #[arg(long)]
    pub all_optima: bool,
    /// Largest m^n to search.
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    pub guard: u64,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub sched: PathBuf,
    #[arg(long, value_enum)]
    pub form: CheckForm,
    #[command(flatten)]
    pub reductions: Reductions,
}

#[derive(Debug, Args)]
pub struct ExternalArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub form: CheckForm,
    /// Shell command with `{model}` and `{solution}` placeholders. The
    /// solver must write `name value` lines to `{solution}`.
    #[arg(long, env = SOLVER_ENV)]
    pub solver_cmd: String,
    /// Schedule file for the decoded solution.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub reductions: Reductions,
}

#[derive(Debug, Clone, Serialize)]
pub struct Digest {
    pub n: usize,
    pub m: usize,
    pub total_p: u64,
    pub p_max: u64,
}

impl Digest {
    fn of(inst: &Instance) -> Self {
        Self { n: inst.n(), m: inst.m(), total_p: inst.total_p(), p_max: inst.p_max() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Phase {
    pub name: String,
    pub ms: f64,
}

/// Summary of one command run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<Digest>,
    pub timings: Vec<Phase>,
    pub outputs: Vec<String>,
    pub deterministic: bool,
    pub result: Value,
}

impl RunReport {
    fn new(command: Vec<String>) -> Self {
        Self { command, instance: None, timings: Vec::new(), outputs: Vec::new(), deterministic: true, result: Value::Null }
    }

    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push(Phase { name: name.into(), ms: start.elapsed().as_secs_f64() * 1e3 });
        out
    }

    fn write(&mut self, path: &Path, text: &str) -> Result<()> {
        fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.outputs.push(path.display().to_string());
        Ok(())
    }
}

/// Maps an error to the documented exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => 2,
        Error::ExternalSolver(_) => 4,
        Error::SizeGuard { .. } => 5,
        _ => 3,
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let echo = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match run(cli, echo) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: Cli, echo: Vec<String>) -> Result<RunReport> {
    let mut report = RunReport::new(echo);
    match cli.command {
        Cmd::Gen(a) => cmd_gen(&a, &mut report)?,
        Cmd::Bounds(a) => cmd_bounds(&a, &mut report)?,
        Cmd::Graph(a) => cmd_graph(&a, &mut report)?,
        Cmd::Model(a) => cmd_model(&a, &mut report)?,
        Cmd::Compare(a) => cmd_compare(&a, &mut report)?,
        Cmd::SolveHeur(a) => cmd_solve_heur(&a, &mut report)?,
        Cmd::SolveExact(a) => cmd_solve_exact(&a, &mut report)?,
        Cmd::Check(a) => cmd_check(&a, &mut report)?,
        Cmd::SolveExternal(a) => cmd_solve_external(&a, &mut report)?,
    }
    Ok(report)
}

fn read_instance(path: &Path, report: &mut RunReport) -> Result<Instance> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let inst = parse_instance(&text)?;
    report.instance = Some(Digest::of(&inst));
    Ok(inst)
}

fn cmd_gen(a: &GenArgs, report: &mut RunReport) -> Result<()> {
    let inst = report.time("generate", || generate_instance(a.n as usize, a.m as usize, a.pmax, a.wmax, a.seed))?;
    report.instance = Some(Digest::of(&inst));
    report.write(&a.out, &write_instance(&inst))?;
    report.result = json!({ "seed": a.seed });
    Ok(())
}

fn cmd_bounds(a: &InArgs, report: &mut RunReport) -> Result<()> {
    let inst = read_instance(&a.input, report)?;
    let h = Horizon::new(&inst);
    let tw = report.time("windows", || time_windows(&inst, h.t))?;
    let windows: Vec<Value> = inst
        .jobs()
        .iter()
        .map(|j| json!({ "job": j.id, "a": tw.a[j.id - 1], "b": tw.b[j.id - 1] }))
        .collect();
    report.result = json!({
        "T": h.t,
        "T_prime": h.t_prime,
        "H_min": format_rational(&h.h_min),
        "H_max": format_rational(&h.h_max),
        "windows": windows,
    });
    Ok(())
}

fn graph_for(inst: &Instance, kind: GraphKindArg, r: &Reductions) -> Result<FlowGraph> {
    match kind {
        GraphKindArg::Af => build_af_graph_with(inst, Horizon::new(inst).t, r.strict_figure),
        GraphKindArg::Eaf => Ok(eaf_for_instance(inst, &r.eaf())?.0),
    }
}

fn cmd_graph(a: &GraphArgs, report: &mut RunReport) -> Result<()> {
    let inst = read_instance(&a.input, report)?;
    let g = report.time("build", || graph_for(&inst, a.kind, &a.reductions))?;
    if let Some(path) = &a.dot {
        report.write(path, &to_dot(&g))?;
    }
    report.result = json!({ "T": g.t, "stats": graph_stats(&g) });
    Ok(())
}

/// Builds the requested model; graph forms also return their graph.
fn build_model(inst: &Instance, form: Form, r: &Reductions) -> Result<(MilpModel, Option<FlowGraph>)> {
    let t = Horizon::new(inst).t;
    Ok(match form {
        Form::Ti => (build_ti(inst, t), None),
        Form::Ciqp => (build_ciqp(inst), None),
        Form::Pti => (build_pti(inst, t), None),
        Form::Af => {
            let g = build_af_graph_with(inst, t, r.strict_figure)?;
            (build_af_model(&g, inst), Some(g))
        }
        Form::Eaf => {
            let (g, types) = eaf_for_instance(inst, &r.eaf())?;
            (build_eaf_model(&g, &types), Some(g))
        }
    })
}

fn cmd_model(a: &ModelArgs, report: &mut RunReport) -> Result<()> {
    let inst = read_instance(&a.input, report)?;
    if a.form == Form::Ciqp && a.format == Format::Mps {
        return Err(Error::UnsupportedFormat("the quadratic CIQP model can only be written as LP".into()));
    }
    let (model, graph) = report.time("build", || build_model(&inst, a.form, &a.reductions))?;
    let text = report.time("emit", || match a.format {
        Format::Lp => Ok(emit_lp(&model)),
        Format::Mps => emit_mps(&model),
    })?;
    report.write(&a.out, &text)?;
    report.result = json!({
        "model": model.stats(),
        "graph": graph.as_ref().map(graph_stats),
    });
    Ok(())
}

#[derive(Debug, Clone, Copy)]
struct CompareRow {
    seed: u64,
    ti: usize,
    af: usize,
    eaf: usize,
}

fn ti_var_count(inst: &Instance, t: u64) -> usize {
    inst.jobs().iter().map(|j| (t + 1).saturating_sub(j.p) as usize).sum()
}

fn compare_one(a: &CompareArgs, seed: u64) -> Result<CompareRow> {
    let inst = generate_instance(a.n as usize, a.m as usize, a.pmax, a.wmax, seed)?;
    let t = Horizon::new(&inst).t;
    let af = arc_var_count(&build_af_graph_with(&inst, t, a.reductions.strict_figure)?);
    let eaf = arc_var_count(&eaf_for_instance(&inst, &a.reductions.eaf())?.0);
    Ok(CompareRow { seed, ti: ti_var_count(&inst, t), af, eaf })
}

fn arc_var_count(g: &FlowGraph) -> usize {
    graph_stats(g).variable_count
}

/// The CSV body written by `compare`, versioned by its first line.
fn compare_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from("# pmwct-compare v1\nseed,ti_vars,af_vars,eaf_vars,red_af_vs_ti,red_eaf_vs_af\n");
    let red = |b: f64, a: f64| reduction_percent(b, a);
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.2},{:.2}",
            r.seed,
            r.ti,
            r.af,
            r.eaf,
            red(r.ti as f64, r.af as f64),
            red(r.af as f64, r.eaf as f64)
        );
    }
    let k = rows.len() as f64;
    let mean = |f: fn(&CompareRow) -> usize| rows.iter().map(|r| f(r) as f64).sum::<f64>() / k;
    let (ti, af, eaf) = (mean(|r| r.ti), mean(|r| r.af), mean(|r| r.eaf));
    let _ = writeln!(out, "mean,{ti:.1},{af:.1},{eaf:.1},{:.2},{:.2}", red(ti, af), red(af, eaf));
    out
}

fn cmd_compare(a: &CompareArgs, report: &mut RunReport) -> Result<()> {
    let rows: Vec<CompareRow> = report.time("instances", || {
        (0..a.seeds).into_par_iter().map(|i| compare_one(a, a.seed_base + i)).collect::<Result<Vec<_>>>()
    })?;
    report.write(&a.out, &compare_csv(&rows))?;
    let k = rows.len() as f64;
    let mean = |f: fn(&CompareRow) -> usize| rows.iter().map(|r| f(r) as f64).sum::<f64>() / k;
    let (ti, af, eaf) = (mean(|r| r.ti), mean(|r| r.af), mean(|r| r.eaf));
    report.result = json!({
        "instances": rows.len(),
        "mean_vars": { "ti": ti, "af": af, "eaf": eaf },
        "red_af_vs_ti": reduction_percent(ti, af),
        "red_eaf_vs_af": reduction_percent(af, eaf),
        "ordered": rows.iter().all(|r| r.eaf <= r.af && r.af <= r.ti),
    });
    Ok(())
}

fn cmd_solve_heur(a: &HeurArgs, report: &mut RunReport) -> Result<()> {
    let inst = read_instance(&a.input, report)?;
    let time_limit = match a.time {
        Some(s) if !(s.is_finite() && s > 0.0) => {
            return Err(Error::InvalidArgument(format!("--time must be positive, got {s}")));
        }
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    let max_iters = match (a.iters, time_limit) {
        (Some(k), _) => k,
        (None, Some(_)) => u64::MAX,
        (None, None) => IlsConfig::default().max_iters,
    };
    let cfg = IlsConfig { seed: a.seed, max_iters, time_limit, alpha: a.alpha, perturb_strength: a.strength, ..Default::default() };
    let r = report.time("ils", || ils(&inst, &cfg))?;
    report.deterministic = time_limit.is_none();
    report.write(&a.out, &write_schedule(&inst, &r.schedule)?)?;
    report.result = json!({ "objective": r.value, "iterations": r.iterations, "seed": a.seed });
    Ok(())
}

fn cmd_solve_exact(a: &ExactArgs, report: &mut RunReport) -> Result<()> {
    let inst = read_instance(&a.input, report)?;
    let r = report.time("enumerate", || brute_force_with_guard(&inst, a.all_optima, a.guard))?;
    report.write(&a.out, &write_schedule(&inst, &r.schedule)?)?;
    report.result = if a.all_optima {
        json!({ "objective": r.optimum, "optimal_assignments": r.optimal_assignments.len() })
    } else {
        json!({ "objective": r.optimum })
    };
    Ok(())
}

fn context<'a>(form: CheckForm, inst: &'a Instance, g: Option<&'a FlowGraph>, t: u64) -> AssignmentContext<'a> {
    match (form, g) {
        (CheckForm::Af, Some(graph)) => AssignmentContext::Af { graph, inst },
        (CheckForm::Eaf, Some(graph)) => AssignmentContext::Eaf { graph, inst },
        _ => AssignmentContext::Ti { inst, t },
    }
}

fn cmd_check(a: &CheckArgs, report: &mut RunReport) -> Result<()> {
    let inst = read_instance(&a.input, report)?;
    let text = fs::read_to_string(&a.sched).map_err(|e| Error::Io(format!("{}: {e}", a.sched.display())))?;
    let (sched, _) = parse_schedule(&text)?;
    let value = evaluate_schedule(&inst, &sched)?;
    let (model, graph) = report.time("build", || build_model(&inst, a.form.into(), &a.reductions))?;
    let t = Horizon::new(&inst).t;
    let v = schedule_to_assignment(&sched, context(a.form, &inst, graph.as_ref(), t))?;
    let r = report.time("check", || check_feasible(&model, &v))?;
    report.result = json!({
        "feasible": r.feasible,
        "violated": r.violated,
        "objective": format_rational(&r.objective),
        "schedule_value": value,
    });
    if !r.feasible {
        return Err(Error::Validation(format!("schedule is infeasible for {}: {}", model.name, r.violated.join(", "))));
    }
    Ok(())
}

fn cmd_solve_external(a: &ExternalArgs, report: &mut RunReport) -> Result<()> {
    let inst = read_instance(&a.input, report)?;
    let (model, graph) = report.time("build", || build_model(&inst, a.form.into(), &a.reductions))?;
    let dir = tempfile::tempdir()?;
    let model_path = dir.path().join("model.lp");
    let sol_path = dir.path().join("solution.txt");
    fs::write(&model_path, emit_lp(&model))?;

    let cmd = a
        .solver_cmd
        .replace("{model}", &shell_quote(&model_path))
        .replace("{solution}", &shell_quote(&sol_path));
    let out = report.time("solver", || Command::new("sh").arg("-c").arg(&cmd).output())?;
    if !out.status.success() {
        return Err(Error::ExternalSolver(format!(
            "`{cmd}` exited with {}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr).trim()
        )));
    }
    let text = fs::read_to_string(&sol_path)
        .map_err(|e| Error::ExternalSolver(format!("no solution file from `{cmd}`: {e}")))?;
    let values = parse_solution(&text).map_err(|e| Error::ExternalSolver(format!("unreadable solution: {e}")))?;
    if values.is_empty() {
        return Err(Error::ExternalSolver(
            "solver returned no values; every model here is feasible, so this is a bug".into(),
        ));
    }
    let v = valuation_from_solution(&model, &values).map_err(|e| Error::ExternalSolver(e.to_string()))?;
    let check = check_feasible(&model, &v)?;
    if !check.feasible {
        return Err(Error::ExternalSolver(format!("solution violates {}", check.violated.join(", "))));
    }
    let t = Horizon::new(&inst).t;
    let sched: Schedule = match &graph {
        Some(g) => decode_arc_valuation(g, &model, &v)?,
        None => decode_ti_valuation(&inst, t, &v)?,
    };
    let value = evaluate_schedule(&inst, &sched)?;
    report.write(&a.out, &write_schedule(&inst, &sched)?)?;
    report.result = json!({
        "objective": format_rational(&check.objective),
        "schedule_value": value,
    });
    Ok(())
}

fn shell_quote(p: &Path) -> String {
    format!("'{}'", p.display().to_string().replace('\'', r"'\''"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::InvalidArgument("x".into())), 2);
        assert_eq!(exit_code(&Error::Parse { line: 1, msg: "x".into() }), 3);
        assert_eq!(exit_code(&Error::ExternalSolver("x".into())), 4);
        assert_eq!(exit_code(&Error::SizeGuard { n: 1, m: 1, bound: 1 }), 5);
    }

    #[test]
    fn csv_has_header_and_mean() {
        let rows = [CompareRow { seed: 0, ti: 100, af: 60, eaf: 30 }, CompareRow { seed: 1, ti: 200, af: 140, eaf: 70 }];
        let csv = compare_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# pmwct-compare v1");
        assert_eq!(lines[2], "0,100,60,30,40.00,50.00");
        assert_eq!(lines[4], "mean,150.0,100.0,50.0,33.33,50.00");
    }

    #[test]
    fn ti_count_matches_model() {
        let inst = crate::fixtures::fig1();
        assert_eq!(ti_var_count(&inst, 8), build_ti(&inst, 8).variables.len());
    }

    #[test]
    fn quoting() {
        assert_eq!(shell_quote(Path::new("/tmp/a b")), "'/tmp/a b'");
        assert_eq!(shell_quote(Path::new("it's")), r"'it'\''s'");
    }
}
