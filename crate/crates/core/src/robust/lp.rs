use std::fmt::Write as _;

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Constraint {
    pub terms: Vec<(usize, f64)>,
    pub cmp: Cmp,
    pub rhs: f64,
}

/// A minimization LP with named, bounded variables.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LinearProgram {
    names: Vec<String>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpSolution {
    pub objective: f64,
    pub values: Vec<f64>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: f64, upper: f64, cost: f64) -> usize {
        self.names.push(name.into());
        self.lower.push(lower);
        self.upper.push(upper);
        self.objective.push(cost);
        self.names.len() - 1
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, f64)>, cmp: Cmp, rhs: f64) {
        self.constraints.push(Constraint { terms, cmp, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bounds(&self, var: usize) -> (f64, f64) {
        (self.lower[var], self.upper[var])
    }

    pub fn cost(&self, var: usize) -> f64 {
        self.objective[var]
    }

    pub fn name(&self, var: usize) -> &str {
        &self.names[var]
    }

    /// Largest violation of any bound or constraint by `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, &v) in x.iter().enumerate() {
            worst = worst.max(self.lower[i] - v).max(v - self.upper[i]);
        }
        for c in &self.constraints {
            let lhs: f64 = c.terms.iter().map(|&(i, a)| a * x[i]).sum();
            let gap = match c.cmp {
                Cmp::Le => lhs - c.rhs,
                Cmp::Ge => c.rhs - lhs,
                Cmp::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(gap);
        }
        worst
    }

    /// CPLEX LP file text.
    pub fn to_lp_format(&self) -> String {
        let mut s = String::from("Minimize\n obj:");
        let obj: Vec<(usize, f64)> = self.objective.iter().copied().enumerate().filter(|&(_, c)| c != 0.0).collect();
        write_terms(&mut s, &self.names, &obj);
        s.push_str("\nSubject To\n");
        for (k, c) in self.constraints.iter().enumerate() {
            let _ = write!(s, " c{k}:");
            write_terms(&mut s, &self.names, &c.terms);
            let op = match c.cmp {
                Cmp::Le => "<=",
                Cmp::Ge => ">=",
                Cmp::Eq => "=",
            };
            let _ = writeln!(s, " {op} {}", c.rhs);
        }
        s.push_str("Bounds\n");
        for (i, name) in self.names.iter().enumerate() {
            let (lo, hi) = (self.lower[i], self.upper[i]);
            match (lo.is_finite(), hi.is_finite()) {
                (true, true) => writeln!(s, " {lo} <= {name} <= {hi}"),
                (true, false) => writeln!(s, " {name} >= {lo}"),
                (false, true) => writeln!(s, " -inf <= {name} <= {hi}"),
                (false, false) => writeln!(s, " {name} free"),
            }
            .expect("writing to a string");
        }
        s.push_str("End\n");
        s
    }
}

fn write_terms(s: &mut String, names: &[String], terms: &[(usize, f64)]) {
    if terms.is_empty() {
        s.push_str(" 0");
    }
    for &(i, a) in terms {
        let sign = if a < 0.0 { '-' } else { '+' };
        let _ = write!(s, " {sign} {} {}", a.abs(), names[i]);
    }
}

/// Solves with the `microlp` simplex backend.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = (0..lp.num_vars()).map(|i| p.add_var(lp.objective[i], (lp.lower[i], lp.upper[i]))).collect();
    for c in &lp.constraints {
        let op = match c.cmp {
            Cmp::Le => ComparisonOp::Le,
            Cmp::Ge => ComparisonOp::Ge,
            Cmp::Eq => ComparisonOp::Eq,
        };
        let expr: Vec<_> = c.terms.iter().map(|&(i, a)| (vars[i], a)).collect();
        p.add_constraint(expr, op, c.rhs);
    }
    let outcome = p.solve().map_err(|e| match e {
        microlp::Error::Infeasible => Error::LpInfeasible,
        microlp::Error::Unbounded => Error::LpUnbounded,
        other => Error::LpSolver(format!("{other:?}")),
    })?;
    let sol = outcome.into_solution().map_err(|_| Error::LpSolver("solve interrupted".into()))?;
    let values: Vec<f64> = vars.iter().map(|&v| sol.var_value(v)).collect();
    Ok(LpSolution { objective: sol.objective(), values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_lower_bound() {
        let mut lp = LinearProgram::new();
        let z = lp.add_var("z", 0.0, f64::INFINITY, 1.0);
        lp.add_constraint(vec![(z, 1.0)], Cmp::Ge, 3.0);
        let s = solve_lp(&lp).unwrap();
        assert!((s.objective - 3.0).abs() < 1e-9);
        assert!(lp.to_lp_format().contains("c0: + 1 z >= 3"));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x", 0.0, 1.0, 1.0);
        lp.add_constraint(vec![(x, 1.0)], Cmp::Ge, 2.0);
        assert!(matches!(solve_lp(&lp), Err(Error::LpInfeasible)));
        let mut lp = LinearProgram::new();
        lp.add_var("x", f64::NEG_INFINITY, f64::INFINITY, 1.0);
        assert!(matches!(solve_lp(&lp), Err(Error::LpUnbounded)));
    }
}
