//! CPLEX LP text format, for cross-checking with external solvers.

use std::fmt::Write;

use num_traits::{Signed, Zero};

use super::model::{Cmp, LpModel, Sense};
use crate::num::{to_f64, Rational};

fn sanitize(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || "_.[]".contains(c) { c } else { '_' }).collect()
}

fn term(out: &mut String, first: bool, c: &Rational, name: &str) {
    let v = to_f64(c);
    let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
    let _ = write!(out, " {sign} {} x{}", v.abs(), name);
}

pub fn write_lp_format(model: &LpModel) -> String {
    let names: Vec<String> = model.vars().iter().enumerate().map(|(j, d)| format!("{j}_{}", sanitize(&d.name))).collect();
    let mut out = String::new();
    out.push_str(match model.sense() {
        Sense::Minimize => "Minimize\n obj:",
        Sense::Maximize => "Maximize\n obj:",
    });
    let mut first = true;
    for (j, c) in model.objective().iter().enumerate() {
        if !c.is_zero() {
            term(&mut out, first, c, &names[j]);
            first = false;
        }
    }
    if first {
        out.push_str(" 0");
    }
    out.push_str("\nSubject To\n");
    for (i, row) in model.rows().iter().enumerate() {
        let _ = write!(out, " r{i}_{}:", sanitize(&row.name));
        for (k, (v, c)) in row.terms.iter().enumerate() {
            term(&mut out, k == 0, c, &names[v.0]);
        }
        if row.terms.is_empty() {
            out.push_str(" 0 x0");
        }
        let op = match row.cmp {
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ge => ">=",
        };
        let _ = writeln!(out, " {op} {}", to_f64(&row.rhs));
    }
    out.push_str("Bounds\n");
    for (j, d) in model.vars().iter().enumerate() {
        match &d.upper {
            Some(u) => {
                let _ = writeln!(out, " {} <= x{} <= {}", to_f64(&d.lower), names[j], to_f64(u));
            }
            None if !d.lower.is_zero() => {
                let _ = writeln!(out, " x{} >= {}", names[j], to_f64(&d.lower));
            }
            None => {}
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    #[test]
    fn dump_contains_sections() {
        let mut m = LpModel::new(Sense::Maximize);
        let x = m.add_bounded_var("x a", int(0), Some(int(2)));
        m.set_obj(x, int(3));
        m.add_row("cap", vec![(x, int(1))], Cmp::Le, int(1));
        let s = write_lp_format(&m);
        assert!(s.starts_with("Maximize"));
        assert!(s.contains("r0_cap:"));
        assert!(s.contains("<= x0_x_a <= 2"));
        assert!(s.ends_with("End\n"));
    }
}
