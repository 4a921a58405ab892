use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::model::{Cmp, LpModel, Var};
use crate::num::{max_rat, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub worst_violation: Rational,
    /// Name of the row or bound with the worst violation.
    pub worst_at: Option<String>,
    pub objective: Rational,
}

/// Exact check of a rational point; unassigned variables are zero.
pub fn check_feasibility(model: &LpModel, point: &BTreeMap<Var, Rational>) -> FeasibilityReport {
    let zero = Rational::zero();
    let val = |v: Var| point.get(&v).unwrap_or(&zero);
    let mut worst = Rational::zero();
    let mut worst_at = None;
    let mut note = |viol: Rational, name: &str| {
        if viol > worst {
            worst = viol;
            worst_at = Some(name.to_string());
        }
    };
    for (j, d) in model.vars().iter().enumerate() {
        let x = val(Var(j));
        note(&d.lower - x, &d.name);
        if let Some(u) = &d.upper {
            note(x - u, &d.name);
        }
    }
    for row in model.rows() {
        let lhs = row.terms.iter().fold(Rational::zero(), |acc, (v, c)| acc + c * val(*v));
        let viol = match row.cmp {
            Cmp::Le => &lhs - &row.rhs,
            Cmp::Ge => &row.rhs - &lhs,
            Cmp::Eq => (&lhs - &row.rhs).abs(),
        };
        note(max_rat(viol, Rational::zero()), &row.name);
    }
    let objective = point
        .iter()
        .filter(|(v, _)| v.0 < model.num_vars())
        .fold(Rational::zero(), |acc, (v, x)| acc + model.obj(*v) * x);
    FeasibilityReport { feasible: worst.is_zero(), worst_violation: worst, worst_at, objective }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Sense;
    use crate::num::int;

    #[test]
    fn zero_point_violates_cover_row() {
        let mut m = LpModel::new(Sense::Minimize);
        let x = m.add_var("x");
        m.add_row("cover", vec![(x, int(1))], Cmp::Ge, int(1));
        let rep = check_feasibility(&m, &BTreeMap::new());
        assert!(!rep.feasible);
        assert_eq!(rep.worst_violation, int(1));
        assert_eq!(rep.worst_at.as_deref(), Some("cover"));
        let ok = check_feasibility(&m, &BTreeMap::from([(x, int(1))]));
        assert!(ok.feasible);
        assert!(!ok.worst_violation.is_positive());
    }
}
