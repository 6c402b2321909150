//! Two-phase dense tableau simplex with Bland's rule.

use super::BoundsError;

pub const TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub rel: Relation,
    pub rhs: f64,
}

/// Minimize `objective · x` over `x >= 0` subject to the constraints.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LinearProgram {
    pub names: Vec<String>,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub assignment: Vec<f64>,
}

impl LinearProgram {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> LinearProgram {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let objective = vec![0.0; names.len()];
        LinearProgram {
            names,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn var(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, rel: Relation, rhs: f64) {
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    /// Adds `lo <= coeffs · x <= hi`.
    pub fn between(&mut self, coeffs: Vec<f64>, lo: f64, hi: f64) {
        self.constrain(coeffs.clone(), Relation::Ge, lo);
        self.constrain(coeffs, Relation::Le, hi);
    }

    pub fn check(&self) -> Result<(), BoundsError> {
        let n = self.names.len();
        if self.objective.len() != n {
            return Err(BoundsError::MalformedLp(format!(
                "objective has {} coefficients for {n} variables",
                self.objective.len()
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(BoundsError::MalformedLp(format!(
                    "constraint {i} has {} coefficients for {n} variables",
                    c.coeffs.len()
                )));
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|x| !x.is_finite()) {
                return Err(BoundsError::MalformedLp(format!("constraint {i} is not finite")));
            }
        }
        Ok(())
    }

    pub fn satisfied_by(&self, x: &[f64], tol: f64) -> bool {
        x.iter().all(|&v| v >= -tol)
            && self.constraints.iter().all(|c| {
                let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
                match c.rel {
                    Relation::Le => lhs <= c.rhs + tol,
                    Relation::Ge => lhs >= c.rhs - tol,
                    Relation::Eq => (lhs - c.rhs).abs() <= tol,
                }
            })
    }
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in &mut self.rows[r] {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut z = cost.to_vec();
        z.push(0.0);
        for (i, row) in self.rows.iter().enumerate() {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for (zj, a) in z.iter_mut().zip(row) {
                    *zj -= cb * a;
                }
            }
        }
        z
    }

    /// Runs to optimality over the allowed entering columns.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<(), BoundsError> {
        loop {
            let z = self.reduced_costs(cost);
            let Some(enter) = (0..allowed).find(|&j| z[j] < -TOL) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][enter];
                if a > TOL {
                    let ratio = self.rhs(i) / a;
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - TOL || (ratio <= lr + TOL && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let (r, _) = leave.ok_or(BoundsError::Unbounded)?;
            self.pivot(r, enter);
        }
    }
}

pub fn simplex_solve(lp: &LinearProgram) -> Result<LpSolution, BoundsError> {
    lp.check()?;
    let nv = lp.names.len();
    let m = lp.constraints.len();
    let rows: Vec<(Vec<f64>, Relation, f64)> = lp
        .constraints
        .iter()
        .map(|c| {
            if c.rhs < 0.0 {
                let rel = match c.rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|v| -v).collect(), rel, -c.rhs)
            } else {
                (c.coeffs.clone(), c.rel, c.rhs)
            }
        })
        .collect();
    let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let artificials = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = nv + slacks + artificials;
    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        width,
    };
    let (mut s, mut a) = (nv, nv + slacks);
    for (coeffs, rel, rhs) in rows {
        let mut row = vec![0.0; width + 1];
        row[..nv].copy_from_slice(&coeffs);
        row[width] = rhs;
        match rel {
            Relation::Le => {
                row[s] = 1.0;
                tab.basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -1.0;
                row[a] = 1.0;
                tab.basis.push(a);
                s += 1;
                a += 1;
            }
            Relation::Eq => {
                row[a] = 1.0;
                tab.basis.push(a);
                a += 1;
            }
        }
        tab.rows.push(row);
    }
    let art_start = nv + slacks;
    if artificials > 0 {
        let mut cost = vec![0.0; width];
        for c in &mut cost[art_start..] {
            *c = 1.0;
        }
        tab.optimize(&cost, width)?;
        let infeasibility: f64 = (0..m)
            .filter(|&i| tab.basis[i] >= art_start)
            .map(|i| tab.rhs(i))
            .sum();
        if infeasibility > TOL {
            return Err(BoundsError::Infeasible);
        }
        for i in 0..m {
            if tab.basis[i] >= art_start {
                if let Some(j) = (0..art_start).find(|&j| tab.rows[i][j].abs() > TOL) {
                    tab.pivot(i, j);
                }
            }
        }
    }
    let mut cost = vec![0.0; width];
    cost[..nv].copy_from_slice(&lp.objective);
    tab.optimize(&cost, art_start)?;
    let mut assignment = vec![0.0; nv];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < nv {
            assignment[b] = tab.rhs(i).max(0.0);
        }
    }
    let value = lp.objective.iter().zip(&assignment).map(|(c, x)| c * x).sum();
    Ok(LpSolution { value, assignment })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_lower_bound() {
        let mut lp = LinearProgram::new(["x"]);
        lp.objective = vec![1.0];
        lp.constrain(vec![1.0], Relation::Ge, 1.0);
        let s = simplex_solve(&lp).unwrap();
        assert!((s.value - 1.0).abs() < 1e-9);
        assert!((s.assignment[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn two_variables() {
        let mut lp = LinearProgram::new(["x", "y"]);
        lp.objective = vec![1.0, 1.0];
        lp.constrain(vec![1.0, 1.0], Relation::Ge, 2.0);
        lp.constrain(vec![1.0, 0.0], Relation::Le, 0.5);
        let s = simplex_solve(&lp).unwrap();
        assert!((s.value - 2.0).abs() < 1e-9);
        assert!(lp.satisfied_by(&s.assignment, 1e-9));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(["x"]);
        lp.objective = vec![1.0];
        lp.constrain(vec![1.0], Relation::Le, 1.0);
        lp.constrain(vec![1.0], Relation::Ge, 2.0);
        assert_eq!(simplex_solve(&lp), Err(BoundsError::Infeasible));

        let mut lp = LinearProgram::new(["x", "y"]);
        lp.objective = vec![-1.0, 0.0];
        lp.constrain(vec![1.0, -1.0], Relation::Le, 1.0);
        assert_eq!(simplex_solve(&lp), Err(BoundsError::Unbounded));
    }

    #[test]
    fn equality_and_negative_rhs() {
        let mut lp = LinearProgram::new(["x", "y"]);
        lp.objective = vec![2.0, 3.0];
        lp.constrain(vec![1.0, 1.0], Relation::Eq, 4.0);
        lp.constrain(vec![-1.0, 0.0], Relation::Ge, -1.0);
        let s = simplex_solve(&lp).unwrap();
        assert!((s.value - 11.0).abs() < 1e-9);
        assert!(lp.satisfied_by(&s.assignment, 1e-9));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(["x", "y"]);
        lp.objective = vec![1.0, 0.0];
        lp.constrain(vec![1.0, 1.0], Relation::Eq, 1.0);
        lp.constrain(vec![2.0, 2.0], Relation::Eq, 2.0);
        let s = simplex_solve(&lp).unwrap();
        assert!(s.value.abs() < 1e-9);
    }

    #[test]
    fn malformed() {
        let mut lp = LinearProgram::new(["x"]);
        lp.constrain(vec![1.0, 2.0], Relation::Le, 1.0);
        assert!(matches!(simplex_solve(&lp), Err(BoundsError::MalformedLp(_))));
    }
}
