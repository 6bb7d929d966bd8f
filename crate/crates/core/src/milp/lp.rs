//! CPLEX LP writer.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use super::{format_rational, MilpModel, VarType, ONE};
use crate::Rational;

const TERMS_PER_LINE: usize = 8;

/// Writes `c name` terms, wrapping long rows.
struct TermWriter<'a> {
    out: &'a mut String,
    on_line: usize,
    first: bool,
}

impl<'a> TermWriter<'a> {
    fn new(out: &'a mut String) -> Self {
        Self { out, on_line: 0, first: true }
    }

    fn push(&mut self, coef: &Rational, var: &str) {
        if coef.is_zero() {
            return;
        }
        if self.on_line == TERMS_PER_LINE {
            self.out.push_str("\n  ");
            self.on_line = 0;
        }
        let sign = if coef.is_negative() { "-" } else { "+" };
        if self.first {
            if coef.is_negative() {
                self.out.push_str(" -");
            }
        } else {
            let _ = write!(self.out, " {sign}");
        }
        let abs = coef.abs();
        if abs.is_one() {
            let _ = write!(self.out, " {var}");
        } else {
            let _ = write!(self.out, " {} {var}", format_rational(&abs));
        }
        self.first = false;
        self.on_line += 1;
    }

    fn raw(&mut self, s: &str) {
        self.out.push_str(s);
        self.first = false;
    }

    /// `0 x` placeholder so an empty row still parses.
    fn finish_empty(&mut self, var: &str) {
        if self.first {
            let _ = write!(self.out, " 0 {var}");
        }
    }
}

pub fn emit_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ {}", model.name);
    out.push_str("Minimize\n obj:");
    let has_const = !model.obj_constant.is_zero();
    {
        let mut w = TermWriter::new(&mut out);
        for v in &model.variables {
            w.push(&v.obj, &v.name);
        }
        if has_const {
            w.push(&model.obj_constant, ONE);
        }
        if !model.quadratic.is_empty() {
            w.raw(" + [");
            let mut q = TermWriter::new(w.out);
            for t in &model.quadratic {
                // LP expects twice the coefficient inside `[ ]/2`.
                let c = t.coef * Rational::from(2);
                let a = &model.variables[t.i].name;
                if t.i == t.j {
                    q.push(&c, &format!("{a} ^ 2"));
                } else {
                    q.push(&c, &format!("{a} * {}", model.variables[t.j].name));
                }
            }
            w.out.push_str(" ] / 2");
        }
        let first_var = model.variables.first().map(|v| v.name.as_str()).unwrap_or(ONE);
        w.finish_empty(first_var);
    }
    out.push('\n');

    out.push_str("Subject To\n");
    for c in &model.constraints {
        let _ = write!(out, " {}:", c.name);
        let mut w = TermWriter::new(&mut out);
        for (i, a) in &c.terms {
            w.push(a, &model.variables[*i].name);
        }
        let first_var = model.variables.first().map(|v| v.name.as_str()).unwrap_or(ONE);
        w.finish_empty(first_var);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), format_rational(&c.rhs));
    }

    out.push_str("Bounds\n");
    for v in &model.variables {
        if v.vtype == VarType::Binary {
            continue;
        }
        let lo = format_rational(&v.lower);
        match &v.upper {
            Some(u) if *u == v.lower => {
                let _ = writeln!(out, " {} = {lo}", v.name);
            }
            Some(u) => {
                let _ = writeln!(out, " {lo} <= {} <= {}", v.name, format_rational(u));
            }
            None if v.lower.is_zero() => {}
            None => {
                let _ = writeln!(out, " {} >= {lo}", v.name);
            }
        }
    }
    if has_const {
        let _ = writeln!(out, " {ONE} = 1");
    }

    let section = |out: &mut String, title: &str, t: VarType| {
        let names: Vec<&str> = model.variables.iter().filter(|v| v.vtype == t).map(|v| v.name.as_str()).collect();
        if names.is_empty() {
            return;
        }
        let _ = writeln!(out, "{title}");
        for chunk in names.chunks(TERMS_PER_LINE) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    };
    section(&mut out, "Generals", VarType::Integer);
    section(&mut out, "Binaries", VarType::Binary);
    out.push_str("End\n");
    out
}
