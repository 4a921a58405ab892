use num_traits::{One, Zero};

use crate::num::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct VarDef {
    pub name: String,
    pub lower: Rational,
    pub upper: Option<Rational>,
}

impl VarDef {
    pub fn is_fixed(&self) -> bool {
        self.upper.as_ref() == Some(&self.lower)
    }
}

#[derive(Clone, Debug)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(Var, Rational)>,
    pub cmp: Cmp,
    pub rhs: Rational,
}

/// Linear program with exact rational data.
#[derive(Clone, Debug)]
pub struct LpModel {
    sense: Sense,
    vars: Vec<VarDef>,
    obj: Vec<Rational>,
    rows: Vec<Row>,
}

impl LpModel {
    pub fn new(sense: Sense) -> Self {
        Self { sense, vars: Vec::new(), obj: Vec::new(), rows: Vec::new() }
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    /// Variable with bounds `[0, inf)`.
    pub fn add_var(&mut self, name: impl Into<String>) -> Var {
        self.add_bounded_var(name, Rational::zero(), None)
    }

    pub fn add_bounded_var(&mut self, name: impl Into<String>, lower: Rational, upper: Option<Rational>) -> Var {
        self.vars.push(VarDef { name: name.into(), lower, upper });
        self.obj.push(Rational::zero());
        Var(self.vars.len() - 1)
    }

    /// Pins a variable to zero without removing it from the model.
    pub fn fix_zero(&mut self, v: Var) {
        self.vars[v.0].lower = Rational::zero();
        self.vars[v.0].upper = Some(Rational::zero());
    }

    pub fn fix(&mut self, v: Var, value: Rational) {
        self.vars[v.0].lower = value.clone();
        self.vars[v.0].upper = Some(value);
    }

    pub fn set_obj(&mut self, v: Var, c: Rational) {
        self.obj[v.0] = c;
    }

    pub fn add_row(&mut self, name: impl Into<String>, terms: Vec<(Var, Rational)>, cmp: Cmp, rhs: Rational) {
        let mut terms: Vec<(Var, Rational)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by_key(|(v, _)| *v);
        terms.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += &b.1;
                true
            } else {
                false
            }
        });
        terms.retain(|(_, c)| !c.is_zero());
        self.rows.push(Row { name: name.into(), terms, cmp, rhs });
    }

    /// Row with all coefficients one.
    pub fn add_sum_row(&mut self, name: impl Into<String>, vars: &[Var], cmp: Cmp, rhs: Rational) {
        let terms = vars.iter().map(|&v| (v, Rational::one())).collect();
        self.add_row(name, terms, cmp, rhs);
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn var(&self, v: Var) -> &VarDef {
        &self.vars[v.0]
    }

    pub fn vars(&self) -> &[VarDef] {
        &self.vars
    }

    pub fn obj(&self, v: Var) -> &Rational {
        &self.obj[v.0]
    }

    pub fn objective(&self) -> &[Rational] {
        &self.obj
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn find_var(&self, name: &str) -> Option<Var> {
        self.vars.iter().position(|d| d.name == name).map(Var)
    }

    /// Same model with the rows in a different order.
    pub fn permuted_rows(&self, order: &[usize]) -> Self {
        let mut m = self.clone();
        m.rows = order.iter().map(|&i| self.rows[i].clone()).collect();
        m
    }
}
