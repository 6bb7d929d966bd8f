//! Fixed-form MPS writer.

use std::fmt::Write as _;

use num_traits::Zero;

use super::{format_rational, MilpModel, Sense, VarType, ONE};
use crate::error::{Error, Result};
use crate::Rational;

fn field_line(out: &mut String, f1: &str, f2: &str, f3: &str, f4: &str) {
    let line = format!(" {f1:<2} {f2:<8}  {f3:<8}  {f4}");
    out.push_str(line.trim_end());
    out.push('\n');
}

fn entry(out: &mut String, col: &str, row: &str, val: &Rational) {
    let _ = writeln!(out, "    {col:<8}  {row:<8}  {}", format_rational(val));
}

pub fn emit_mps(model: &MilpModel) -> Result<String> {
    if !model.quadratic.is_empty() {
        return Err(Error::UnsupportedFormat(format!(
            "model {} has quadratic terms; MPS output supports linear models only",
            model.name
        )));
    }
    let mut out = String::new();
    let _ = writeln!(out, "NAME          {}", model.name);
    out.push_str("ROWS\n");
    field_line(&mut out, "N", "OBJ", "", "");
    for c in &model.constraints {
        let t = match c.sense {
            Sense::Le => "L",
            Sense::Eq => "E",
            Sense::Ge => "G",
        };
        let _ = writeln!(out, " {t}  {}", c.name);
    }

    // Column-major view of the constraint matrix.
    let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); model.variables.len()];
    for (r, c) in model.constraints.iter().enumerate() {
        for &(i, a) in &c.terms {
            if !a.is_zero() {
                cols[i].push((r, a));
            }
        }
    }

    out.push_str("COLUMNS\n");
    let mut in_int = false;
    let mut marker = 0usize;
    for (v, col) in model.variables.iter().zip(&cols) {
        let int = v.vtype != VarType::Continuous;
        if int != in_int {
            let kind = if int { "'INTORG'" } else { "'INTEND'" };
            let _ = writeln!(out, "    MARKER{marker:<4}  'MARKER'                 {kind}");
            marker += 1;
            in_int = int;
        }
        if !v.obj.is_zero() {
            entry(&mut out, &v.name, "OBJ", &v.obj);
        }
        for &(r, a) in col {
            entry(&mut out, &v.name, &model.constraints[r].name, &a);
        }
        if v.obj.is_zero() && col.is_empty() {
            entry(&mut out, &v.name, "OBJ", &Rational::zero());
        }
    }
    if in_int {
        let _ = writeln!(out, "    MARKER{marker:<4}  'MARKER'                 'INTEND'");
    }
    let has_const = !model.obj_constant.is_zero();
    if has_const {
        entry(&mut out, ONE, "OBJ", &model.obj_constant);
    }

    out.push_str("RHS\n");
    for c in &model.constraints {
        if !c.rhs.is_zero() {
            entry(&mut out, "RHS", &c.name, &c.rhs);
        }
    }

    out.push_str("BOUNDS\n");
    for v in &model.variables {
        let name = &v.name;
        if v.vtype == VarType::Binary {
            field_line(&mut out, "BV", "BND", name, "");
            continue;
        }
        match &v.upper {
            Some(u) if *u == v.lower => field_line(&mut out, "FX", "BND", name, &format_rational(u)),
            Some(u) => {
                if !v.lower.is_zero() {
                    field_line(&mut out, "LO", "BND", name, &format_rational(&v.lower));
                }
                field_line(&mut out, "UP", "BND", name, &format_rational(u));
            }
            None => {
                if v.lower.is_zero() {
                    if v.vtype == VarType::Integer {
                        // Some readers default integer columns to [0, 1].
                        field_line(&mut out, "PL", "BND", name, "");
                    }
                } else {
                    field_line(&mut out, "LO", "BND", name, &format_rational(&v.lower));
                }
            }
        }
    }
    if has_const {
        field_line(&mut out, "FX", "BND", ONE, "1");
    }
    out.push_str("ENDATA\n");
    Ok(out)
}
