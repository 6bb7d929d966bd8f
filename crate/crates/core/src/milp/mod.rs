//! Solver-agnostic MILP records for the TI, CIQP, PTI, AF and EAF models.
//!
//! Variable names are stable so external solutions can be read back:
//!
//! | model | variables |
//! |-------|-----------|
//! | TI    | `x_{j}_{t}` (job `j` starts at `t`) |
//! | CIQP  | `x_{j}_{k}` (job `j` on machine `k`) |
//! | PTI   | `x_{j}_{k}_{t}`, `y_{j}_{k}` |
//! | AF    | `x_{q}_{r}_{j}` job arcs, `L_{q}` loss arcs |
//! | EAF   | `x_{q}_{r}_t{type}` type arcs, `L_{q}` loss arcs |
//!
//! Objective constants are kept in [`MilpModel::obj_constant`]; the writers
//! realize them through an extra variable `ONE` fixed to 1.

mod assign;
mod build;
mod lp;
mod mps;

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::Rational;

pub use assign::{
    arc_assignment, ciqp_assignment, decode_arc_valuation, decode_ti_valuation, pti_assignment,
    schedule_to_assignment, ti_assignment, AssignmentContext,
};
pub use build::{build_af_model, build_arc_model, build_ciqp, build_eaf_model, build_pti, build_ti};
pub use lp::emit_lp;
pub use mps::emit_mps;

/// Name of the auxiliary variable carrying the objective constant.
pub const ONE: &str = "ONE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VarType {
    Binary,
    Integer,
    Continuous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lower: Rational,
    /// `None` is +∞.
    pub upper: Option<Rational>,
    pub vtype: VarType,
    pub obj: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub sense: Sense,
    pub rhs: Rational,
    /// `(variable index, coefficient)`.
    pub terms: Vec<(usize, Rational)>,
}

/// `coef · x_i · x_j`; `i == j` is a square term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadTerm {
    pub i: usize,
    pub j: usize,
    pub coef: Rational,
}

/// A minimization model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilpModel {
    pub name: String,
    pub variables: Vec<Variable>,
    pub obj_constant: Rational,
    pub quadratic: Vec<QuadTerm>,
    pub constraints: Vec<Constraint>,
    index: HashMap<String, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ModelStats {
    pub variables: usize,
    pub binaries: usize,
    pub integers: usize,
    pub continuous: usize,
    pub constraints: usize,
    pub quadratic_terms: usize,
}

impl MilpModel {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            variables: Vec::new(),
            obj_constant: Rational::zero(),
            quadratic: Vec::new(),
            constraints: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Declares a variable and returns its index. Panics on duplicate names,
    /// which would be a builder bug.
    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        lower: Rational,
        upper: Option<Rational>,
        vtype: VarType,
        obj: Rational,
    ) -> usize {
        let name = name.into();
        assert!(name != ONE, "{ONE} is reserved");
        let idx = self.variables.len();
        let prev = self.index.insert(name.clone(), idx);
        assert!(prev.is_none(), "duplicate variable {name}");
        self.variables.push(Variable { name, lower, upper, vtype, obj });
        idx
    }

    pub fn add_binary(&mut self, name: impl Into<String>, obj: Rational) -> usize {
        self.add_var(name, Rational::zero(), Some(Rational::from(1)), VarType::Binary, obj)
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, Rational)>,
        sense: Sense,
        rhs: Rational,
    ) {
        self.constraints.push(Constraint { name: name.into(), sense, rhs, terms });
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn stats(&self) -> ModelStats {
        let count = |t| self.variables.iter().filter(|v| v.vtype == t).count();
        ModelStats {
            variables: self.variables.len(),
            binaries: count(VarType::Binary),
            integers: count(VarType::Integer),
            continuous: count(VarType::Continuous),
            constraints: self.constraints.len(),
            quadratic_terms: self.quadratic.len(),
        }
    }

    /// Checks name uniqueness, term references and bound order.
    pub fn validate(&self) -> Result<()> {
        if self.index.len() != self.variables.len() {
            return Err(Error::Validation("duplicate variable names".into()));
        }
        for v in &self.variables {
            if let Some(u) = &v.upper {
                if v.lower > *u {
                    return Err(Error::Validation(format!("variable {} has lower > upper", v.name)));
                }
            }
        }
        let n = self.variables.len();
        for c in &self.constraints {
            if c.terms.iter().any(|&(i, _)| i >= n) {
                return Err(Error::Validation(format!("constraint {} references an unknown variable", c.name)));
            }
        }
        if self.quadratic.iter().any(|q| q.i >= n || q.j >= n) {
            return Err(Error::Validation("quadratic term references an unknown variable".into()));
        }
        Ok(())
    }
}

/// Variable values by name; absent variables are zero.
pub type Valuation = BTreeMap<String, Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// Violated constraint names, plus `bound:<var>` and `integrality:<var>`.
    pub violated: Vec<String>,
    pub objective: Rational,
}

/// Evaluates every constraint, bound and integrality requirement exactly.
pub fn check_feasible(model: &MilpModel, v: &Valuation) -> Result<FeasibilityReport> {
    let mut x = vec![Rational::zero(); model.variables.len()];
    for (name, val) in v {
        if name == ONE {
            continue;
        }
        let i = model
            .var_index(name)
            .ok_or_else(|| Error::Validation(format!("unknown variable {name}")))?;
        x[i] = *val;
    }

    let mut violated = Vec::new();
    for (var, val) in model.variables.iter().zip(&x) {
        if *val < var.lower || var.upper.is_some_and(|u| *val > u) {
            violated.push(format!("bound:{}", var.name));
        }
        if var.vtype != VarType::Continuous && !val.is_integer() {
            violated.push(format!("integrality:{}", var.name));
        }
    }
    for c in &model.constraints {
        let lhs: Rational = c.terms.iter().map(|&(i, a)| a * x[i]).sum();
        let ok = match c.sense {
            Sense::Le => lhs <= c.rhs,
            Sense::Eq => lhs == c.rhs,
            Sense::Ge => lhs >= c.rhs,
        };
        if !ok {
            violated.push(c.name.clone());
        }
    }

    let linear: Rational = model.variables.iter().zip(&x).map(|(var, val)| var.obj * val).sum();
    let quad: Rational = model.quadratic.iter().map(|q| q.coef * x[q.i] * x[q.j]).sum();
    Ok(FeasibilityReport {
        feasible: violated.is_empty(),
        violated,
        objective: model.obj_constant + linear + quad,
    })
}

/// Reads `name value` lines (`#` starts a comment) written by an external
/// solver wrapper.
pub fn parse_solution(text: &str) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(name), Some(val), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Parse { line: i + 1, msg: format!("expected \"name value\", got {line:?}") });
        };
        let val: f64 = val
            .parse()
            .map_err(|_| Error::Parse { line: i + 1, msg: format!("bad value {val:?}") })?;
        if !val.is_finite() {
            return Err(Error::Parse { line: i + 1, msg: format!("non-finite value for {name}") });
        }
        out.push((name.to_string(), val));
    }
    Ok(out)
}

/// Converts solver output to an exact valuation: integer and binary
/// variables are rounded when within `1e-6` of an integer, continuous ones
/// are approximated by a nearby rational.
pub fn valuation_from_solution(model: &MilpModel, values: &[(String, f64)]) -> Result<Valuation> {
    let mut v = Valuation::new();
    for (name, val) in values {
        if name == ONE {
            continue;
        }
        let i = model
            .var_index(name)
            .ok_or_else(|| Error::Validation(format!("solution names unknown variable {name}")))?;
        let exact = match model.variables[i].vtype {
            VarType::Continuous => Rational::approximate_float(*val)
                .ok_or_else(|| Error::Validation(format!("cannot represent {val} for {name}")))?,
            _ => {
                let r = val.round();
                if (val - r).abs() > 1e-6 {
                    return Err(Error::Validation(format!("{name} = {val} is not integral")));
                }
                Rational::from(r as i128)
            }
        };
        if !exact.is_zero() {
            v.insert(name.clone(), exact);
        }
    }
    Ok(v)
}

/// Exact decimal for terminating fractions, otherwise 15 significant
/// digits (round half away from zero).
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.to_integer().to_string();
    }
    let neg = *r < Rational::zero();
    let (num, den) = (r.numer().unsigned_abs(), r.denom().unsigned_abs());
    let mut d = den;
    while d % 2 == 0 {
        d /= 2;
    }
    while d % 5 == 0 {
        d /= 5;
    }
    let terminating = d == 1;

    let int_part = num / den;
    let mut rem = num % den;
    let mut digits = String::new();
    let mut significant = if int_part > 0 { int_part.to_string().len() } else { 0 };
    let limit = 15usize;
    while rem != 0 && (terminating || significant < limit) {
        rem *= 10;
        let digit = rem / den;
        rem %= den;
        digits.push(char::from(b'0' + digit as u8));
        if significant > 0 || digit != 0 {
            significant += 1;
        }
    }
    let mut int_part = int_part;
    if !terminating && rem * 2 >= den {
        // Round the last kept digit up, propagating carries.
        let mut bytes: Vec<u8> = digits.into_bytes();
        let mut carry = true;
        for b in bytes.iter_mut().rev() {
            if *b == b'9' {
                *b = b'0';
            } else {
                *b += 1;
                carry = false;
                break;
            }
        }
        if carry {
            int_part += 1;
        }
        digits = String::from_utf8(bytes).expect("ascii digits");
    }
    let digits = digits.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if digits.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{digits}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(format_rational(&q(7, 1)), "7");
        assert_eq!(format_rational(&q(-3, 1)), "-3");
        assert_eq!(format_rational(&q(7, 2)), "3.5");
        assert_eq!(format_rational(&q(-1, 8)), "-0.125");
        assert_eq!(format_rational(&q(1, 3)), "0.333333333333333");
        assert_eq!(format_rational(&q(2, 3)), "0.666666666666667");
        assert_eq!(format_rational(&q(20, 3)), "6.66666666666667");
        assert_eq!(format_rational(&q(1, 7000)), "0.000142857142857143");
        // carry into the integer part
        assert_eq!(format_rational(&q(9_999_999_999_999_999, 10_000_000_000_000_001)), "1");
    }

    #[test]
    fn feasibility_of_a_toy_model() {
        let mut m = MilpModel::new("toy");
        let x = m.add_var("x", q(0, 1), Some(q(10, 1)), VarType::Integer, q(1, 1));
        m.add_constraint("c1", vec![(x, q(1, 1))], Sense::Ge, q(1, 1));
        m.validate().unwrap();

        let mut v = Valuation::new();
        let r = check_feasible(&m, &v).unwrap();
        assert!(!r.feasible);
        assert_eq!(r.violated, vec!["c1".to_string()]);

        v.insert("x".into(), q(3, 2));
        let r = check_feasible(&m, &v).unwrap();
        assert_eq!(r.violated, vec!["integrality:x".to_string()]);
        assert_eq!(r.objective, q(3, 2));

        v.insert("x".into(), q(11, 1));
        assert_eq!(check_feasible(&m, &v).unwrap().violated, vec!["bound:x".to_string()]);

        v.insert("nope".into(), q(1, 1));
        assert!(matches!(check_feasible(&m, &v), Err(Error::Validation(_))));
    }

    #[test]
    fn solution_files() {
        let s = parse_solution("# header\nx_1_0 1\n  L_3   0.9999999 # trailing\n\n").unwrap();
        assert_eq!(s, vec![("x_1_0".to_string(), 1.0), ("L_3".to_string(), 0.9999999)]);
        assert!(parse_solution("x 1 2\n").is_err());
        assert!(parse_solution("x one\n").is_err());
        assert!(parse_solution("lonely\n").is_err());

        let mut m = MilpModel::new("t");
        m.add_binary("x_1_0", q(0, 1));
        m.add_var("L_3", q(0, 1), Some(q(2, 1)), VarType::Integer, q(0, 1));
        m.add_var("c", q(0, 1), None, VarType::Continuous, q(0, 1));
        let v = valuation_from_solution(&m, &s).unwrap();
        assert_eq!(v.get("L_3"), Some(&q(1, 1)));
        let v = valuation_from_solution(&m, &[("c".into(), 0.25)]).unwrap();
        assert_eq!(v.get("c"), Some(&q(1, 4)));
        assert!(valuation_from_solution(&m, &[("x_1_0".into(), 0.5)]).is_err());
        assert!(valuation_from_solution(&m, &[("zz".into(), 1.0)]).is_err());
    }
}
