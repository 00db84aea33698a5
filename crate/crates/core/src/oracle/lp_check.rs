use crate::error::{Error, Result};
use crate::robust::{Cmp, LinearProgram};

const TOL: f64 = 1e-7;

/// Solves `a x = b` by Gaussian elimination; `None` when singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..n {
                        a[r][c] -= f * a[col][c];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Minimum of the objective over all basic feasible points, by trying every
/// choice of `n` tight rows among constraints and finite bounds. `None`
/// when no vertex is feasible.
pub fn lp_vertex_enumeration(lp: &LinearProgram, max_vars: usize) -> Result<Option<f64>> {
    let n = lp.num_vars();
    if n > max_vars {
        return Err(Error::BudgetExceeded(format!("{n} variables, oracle limit {max_vars}")));
    }
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for c in lp.constraints() {
        let mut a = vec![0.0; n];
        for &(i, v) in &c.terms {
            a[i] += v;
        }
        rows.push((a, c.rhs));
    }
    for i in 0..n {
        let (lo, hi) = lp.bounds(i);
        for b in [lo, hi] {
            if b.is_finite() {
                let mut a = vec![0.0; n];
                a[i] = 1.0;
                rows.push((a, b));
            }
        }
    }
    let must: Vec<usize> =
        lp.constraints().iter().enumerate().filter(|(_, c)| c.cmp == Cmp::Eq).map(|(k, _)| k).collect();
    let mut best: Option<f64> = None;
    let mut pick: Vec<usize> = (0..n).collect();
    if n == 0 || rows.len() < n {
        return Ok(None);
    }
    loop {
        if must.iter().all(|k| pick.contains(k)) {
            let a = pick.iter().map(|&r| rows[r].0.clone()).collect();
            let b = pick.iter().map(|&r| rows[r].1).collect();
            if let Some(x) = solve_square(a, b) {
                if lp.max_violation(&x) <= TOL {
                    let obj: f64 = (0..n).map(|i| lp.cost(i) * x[i]).sum();
                    best = Some(best.map_or(obj, |b: f64| b.min(obj)));
                }
            }
        }
        // next n-combination of the rows
        let mut i = n;
        while i > 0 && pick[i - 1] == rows.len() - n + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        pick[i - 1] += 1;
        for j in i..n {
            pick[j] = pick[j - 1] + 1;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_lp() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x", 0.0, 4.0, 1.0);
        let y = lp.add_var("y", 0.0, 4.0, 2.0);
        lp.add_constraint(vec![(x, 1.0), (y, 1.0)], Cmp::Ge, 3.0);
        assert_eq!(lp_vertex_enumeration(&lp, 6).unwrap(), Some(3.0));
    }
}
