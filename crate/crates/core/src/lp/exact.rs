//! Dense exact simplex with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::model::{Cmp, LpModel, Sense};
use crate::error::{Error, Result};
use crate::num::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableauStatus {
    Optimal,
    Unbounded,
}

/// Minimization tableau `min c x, A x = b, x >= 0` kept relative to a basis
/// that started as an identity. Columns can be appended after optimizing,
/// which is what column generation needs.
#[derive(Clone, Debug)]
pub struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    cost: Vec<Rational>,
    reduced: Vec<Rational>,
    basis: Vec<usize>,
    /// Column holding the initial identity entry of each row.
    unit: Vec<usize>,
    /// Columns that may not enter the basis.
    barred: Vec<bool>,
}

impl Tableau {
    /// `cols[j]` is a sparse column `(row, value)`. `unit[i]` must be a column
    /// equal to the `i`-th unit vector and `b >= 0`.
    pub fn new(m: usize, cols: &[Vec<(usize, Rational)>], cost: Vec<Rational>, b: Vec<Rational>, unit: Vec<usize>) -> Self {
        let n = cols.len();
        let mut rows = vec![vec![Rational::zero(); n]; m];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col {
                rows[*i][j] += v;
            }
        }
        let mut t = Self {
            rows,
            rhs: b,
            cost,
            reduced: Vec::new(),
            basis: unit.clone(),
            unit,
            barred: vec![false; n],
        };
        t.recompute_reduced();
        t
    }

    fn recompute_reduced(&mut self) {
        let n = self.cost.len();
        self.reduced = (0..n)
            .map(|j| {
                let mut d = self.cost[j].clone();
                for (i, &bj) in self.basis.iter().enumerate() {
                    if !self.cost[bj].is_zero() && !self.rows[i][j].is_zero() {
                        d -= &self.cost[bj] * &self.rows[i][j];
                    }
                }
                d
            })
            .collect();
    }

    pub fn num_cols(&self) -> usize {
        self.cost.len()
    }

    pub fn set_cost(&mut self, cost: Vec<Rational>) {
        self.cost = cost;
        self.recompute_reduced();
    }

    pub fn bar(&mut self, j: usize) {
        self.barred[j] = true;
    }

    /// Appends a column given in original coordinates.
    pub fn add_column(&mut self, col: &[(usize, Rational)], cost: Rational) -> usize {
        let m = self.rows.len();
        let mut t = vec![Rational::zero(); m];
        for (k, a) in col {
            let u = self.unit[*k];
            for (i, ti) in t.iter_mut().enumerate() {
                let binv = &self.rows[i][u];
                if !binv.is_zero() {
                    *ti += binv * a;
                }
            }
        }
        let mut d = cost.clone();
        for (i, &bj) in self.basis.iter().enumerate() {
            if !t[i].is_zero() {
                d -= &self.cost[bj] * &t[i];
            }
        }
        for (row, v) in self.rows.iter_mut().zip(t) {
            row.push(v);
        }
        self.cost.push(cost);
        self.reduced.push(d);
        self.barred.push(false);
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for &j in &nz {
                let delta = &f * &prow[j];
                self.rows[i][j] -= delta;
            }
            self.rhs[i] -= &f * &prhs;
        }
        let f = self.reduced[c].clone();
        if !f.is_zero() {
            for &j in &nz {
                let delta = &f * &prow[j];
                self.reduced[j] -= delta;
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index improving column, lowest-index basic
    /// variable among ratio-test ties.
    pub fn optimize(&mut self) -> TableauStatus {
        loop {
            let enter = (0..self.cost.len()).find(|&j| !self.barred[j] && self.reduced[j].is_negative());
            let Some(c) = enter else { return TableauStatus::Optimal };
            let mut best: Option<(Rational, usize, usize)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &best {
                        None => true,
                        Some((br, bb, _)) => ratio < *br || (ratio == *br && self.basis[i] < *bb),
                    };
                    if better {
                        best = Some((ratio, self.basis[i], i));
                    }
                }
            }
            let Some((_, _, r)) = best else { return TableauStatus::Unbounded };
            self.pivot(r, c);
        }
    }

    pub fn objective(&self) -> Rational {
        self.basis
            .iter()
            .zip(&self.rhs)
            .fold(Rational::zero(), |acc, (&j, b)| acc + &self.cost[j] * b)
    }

    pub fn values(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.cost.len()];
        for (i, &j) in self.basis.iter().enumerate() {
            x[j] = self.rhs[i].clone();
        }
        x
    }

    /// Row duals `y = c_B B^{-1}`.
    pub fn duals(&self) -> Vec<Rational> {
        self.unit.iter().map(|&u| &self.cost[u] - &self.reduced[u]).collect()
    }

    /// Pivots basic columns listed in `drop` out of the basis where a
    /// nonzero entry allows it; rows where none exists are redundant.
    pub fn drive_out(&mut self, drop: &[bool]) {
        for r in 0..self.rows.len() {
            if !drop[self.basis[r]] {
                continue;
            }
            if let Some(c) = (0..self.cost.len()).find(|&j| !drop[j] && !self.barred[j] && !self.rows[r][j].is_zero()) {
                self.pivot(r, c);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExactOutcome {
    Optimal { objective: Rational, values: Vec<Rational> },
    Infeasible,
    Unbounded,
}

/// Solves a model exactly with the two-phase method. Intended for small
/// models: the tableau is dense.
pub fn solve_exact(model: &LpModel) -> Result<ExactOutcome> {
    let nv = model.num_vars();
    let mut rows: Vec<(Vec<(usize, Rational)>, Cmp, Rational)> = Vec::new();
    for d in model.vars() {
        if d.lower.is_negative() {
            return Err(Error::InvalidArgument("exact solver needs nonnegative lower bounds".into()));
        }
    }
    // x = lower + x'
    for row in model.rows() {
        let mut rhs = row.rhs.clone();
        for (v, c) in &row.terms {
            rhs -= c * &model.var(*v).lower;
        }
        rows.push((row.terms.iter().map(|(v, c)| (v.0, c.clone())).collect(), row.cmp, rhs));
    }
    for (j, d) in model.vars().iter().enumerate() {
        if let Some(u) = &d.upper {
            rows.push((vec![(j, Rational::one())], Cmp::Le, u - &d.lower));
        }
    }
    let m = rows.len();
    let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); nv];
    let mut unit = vec![usize::MAX; m];
    let mut artificial = Vec::new();
    let mut b = Vec::with_capacity(m);
    for (i, (terms, cmp, rhs)) in rows.into_iter().enumerate() {
        let flip = rhs.is_negative();
        let s = if flip { -Rational::one() } else { Rational::one() };
        for (j, c) in terms {
            cols[j].push((i, &s * c));
        }
        b.push(if flip { -rhs } else { rhs });
        let slack = match cmp {
            Cmp::Le => Some(s.clone()),
            Cmp::Ge => Some(-s.clone()),
            Cmp::Eq => None,
        };
        if let Some(sv) = slack {
            cols.push(vec![(i, sv.clone())]);
            if sv.is_one() {
                unit[i] = cols.len() - 1;
            }
        }
        if unit[i] == usize::MAX {
            cols.push(vec![(i, Rational::one())]);
            unit[i] = cols.len() - 1;
            artificial.push(cols.len() - 1);
        }
    }
    let n = cols.len();
    let mut is_art = vec![false; n];
    for &a in &artificial {
        is_art[a] = true;
    }
    let phase1: Vec<Rational> = (0..n).map(|j| if is_art[j] { Rational::one() } else { Rational::zero() }).collect();
    let mut t = Tableau::new(m, &cols, phase1, b, unit);
    t.optimize();
    if t.objective().is_positive() {
        return Ok(ExactOutcome::Infeasible);
    }
    t.drive_out(&is_art);
    for &a in &artificial {
        t.bar(a);
    }
    let flip = model.sense() == Sense::Maximize;
    let mut cost = vec![Rational::zero(); n];
    for j in 0..nv {
        let c = model.obj(super::Var(j)).clone();
        cost[j] = if flip { -c } else { c };
    }
    t.set_cost(cost);
    if t.optimize() == TableauStatus::Unbounded {
        return Ok(ExactOutcome::Unbounded);
    }
    let x = t.values();
    let values: Vec<Rational> = (0..nv).map(|j| &x[j] + &model.var(super::Var(j)).lower).collect();
    let objective = values
        .iter()
        .zip(model.objective())
        .fold(Rational::zero(), |acc, (v, c)| acc + v * c);
    Ok(ExactOutcome::Optimal { objective, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{Cmp, LpModel, Sense};
    use crate::num::{frac, int};

    #[test]
    fn small_max_problem() {
        // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3
        let mut m = LpModel::new(Sense::Maximize);
        let x = m.add_bounded_var("x", int(0), Some(int(3)));
        let y = m.add_var("y");
        m.set_obj(x, int(3));
        m.set_obj(y, int(2));
        m.add_row("a", vec![(x, int(1)), (y, int(1))], Cmp::Le, int(4));
        m.add_row("b", vec![(x, int(1)), (y, int(3))], Cmp::Le, int(6));
        match solve_exact(&m).unwrap() {
            ExactOutcome::Optimal { objective, values } => {
                assert_eq!(objective, int(11));
                assert_eq!(values, vec![int(3), int(1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x + y, x + 2y = 3, x >= 1/2
        let mut m = LpModel::new(Sense::Minimize);
        let x = m.add_var("x");
        let y = m.add_var("y");
        m.set_obj(x, int(1));
        m.set_obj(y, int(1));
        m.add_row("e", vec![(x, int(1)), (y, int(2))], Cmp::Eq, int(3));
        m.add_row("g", vec![(x, int(1))], Cmp::Ge, frac(1, 2));
        match solve_exact(&m).unwrap() {
            ExactOutcome::Optimal { objective, .. } => assert_eq!(objective, frac(7, 4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut m = LpModel::new(Sense::Minimize);
        let x = m.add_bounded_var("x", int(0), Some(int(0)));
        m.add_row("g", vec![(x, int(1))], Cmp::Ge, int(1));
        assert_eq!(solve_exact(&m).unwrap(), ExactOutcome::Infeasible);
        let mut u = LpModel::new(Sense::Maximize);
        let y = u.add_var("y");
        u.set_obj(y, int(1));
        assert_eq!(solve_exact(&u).unwrap(), ExactOutcome::Unbounded);
    }

    #[test]
    fn duals_and_added_columns() {
        // min a1 + a2 over rows x1 = 1, x2 = 2 with artificial basis,
        // then add column (1,1) of cost 0.
        let cols = vec![vec![(0, int(1))], vec![(1, int(1))]];
        let mut t = Tableau::new(2, &cols, vec![int(1), int(1)], vec![int(1), int(2)], vec![0, 1]);
        assert_eq!(t.duals(), vec![int(1), int(1)]);
        let c = t.add_column(&[(0, int(1)), (1, int(1))], int(0));
        assert_eq!(t.optimize(), TableauStatus::Optimal);
        assert_eq!(t.values()[c], int(1));
        assert_eq!(t.objective(), int(1));
    }
}
