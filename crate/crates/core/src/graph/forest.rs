use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::Node;
use crate::num::Rational;

/// Undirected forest with the dual value that certifies its cost.
#[derive(Clone, Debug)]
pub struct Forest {
    pub nodes: Vec<Node>,
    pub edges: Vec<(Node, Node)>,
    /// Total dual grown; `cost <= 2 * dual` and `dual` is at most the cost of
    /// any fractional cover.
    pub dual: Rational,
}

impl Forest {
    /// Connected components (singletons included), each sorted.
    pub fn components(&self) -> Vec<Vec<Node>> {
        components(&self.nodes, &self.edges)
    }

    pub fn cost(&self, c: impl Fn(Node, Node) -> Rational) -> Rational {
        self.edges.iter().fold(Rational::zero(), |acc, &(u, v)| acc + c(u, v))
    }
}

fn components(nodes: &[Node], edges: &[(Node, Node)]) -> Vec<Vec<Node>> {
    let idx: BTreeMap<Node, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf: Vec<usize> = (0..nodes.len()).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        uf[x] = r;
        r
    }
    for &(u, v) in edges {
        let (a, b) = (find(&mut uf, idx[&u]), find(&mut uf, idx[&v]));
        uf[a.max(b)] = a.min(b);
    }
    let mut groups: BTreeMap<usize, Vec<Node>> = BTreeMap::new();
    for (i, &v) in nodes.iter().enumerate() {
        groups.entry(find(&mut uf, i)).or_default().push(v);
    }
    let mut out: Vec<Vec<Node>> = groups.into_values().collect();
    for g in &mut out {
        g.sort();
    }
    out.sort();
    out
}

/// Primal-dual forest for a downward-monotone 0/1 requirement `h` on the
/// complete graph over `nodes`. Every component of the result has `h = 0`.
pub fn build_downward_monotone_forest(
    nodes: &[Node],
    cost: impl Fn(Node, Node) -> Rational,
    mut h: impl FnMut(&[Node]) -> bool,
) -> Result<Forest> {
    let n = nodes.len();
    if n > 0 && h(nodes) {
        return Err(Error::InvalidArgument("requirement of the whole node set is positive".into()));
    }
    let mut comp: Vec<usize> = (0..n).collect();
    let mut members: BTreeMap<usize, Vec<Node>> = (0..n).map(|i| (i, vec![nodes[i]])).collect();
    let mut active: BTreeMap<usize, bool> = members.iter().map(|(&c, m)| (c, h(m))).collect();
    let mut load = vec![Rational::zero(); n];
    let mut dual = Rational::zero();
    let mut added: Vec<(usize, usize)> = Vec::new();
    while active.values().any(|&a| a) {
        let mut best: Option<(Rational, usize, usize)> = None;
        for i in 0..n {
            for j in i + 1..n {
                if comp[i] == comp[j] {
                    continue;
                }
                let rate = i64::from(active[&comp[i]]) + i64::from(active[&comp[j]]);
                if rate == 0 {
                    continue;
                }
                let slack = cost(nodes[i], nodes[j]) - &load[i] - &load[j];
                let t = slack / Rational::from_integer(rate.into());
                if best.as_ref().is_none_or(|(b, _, _)| t < *b) {
                    best = Some((t, i, j));
                }
            }
        }
        let Some((t, i, j)) = best else {
            return Err(Error::Invariant("active component with no outgoing edge".into()));
        };
        let t = if t.is_negative() { Rational::zero() } else { t };
        let n_active = active.values().filter(|&&a| a).count() as i64;
        dual += &t * Rational::from_integer(n_active.into());
        for v in 0..n {
            if active[&comp[v]] {
                load[v] += &t;
            }
        }
        let (keep, gone) = (comp[i].min(comp[j]), comp[i].max(comp[j]));
        for c in comp.iter_mut() {
            if *c == gone {
                *c = keep;
            }
        }
        let moved = members.remove(&gone).unwrap();
        active.remove(&gone);
        let m = members.get_mut(&keep).unwrap();
        m.extend(moved);
        m.sort();
        active.insert(keep, h(m));
        added.push((i, j));
    }
    let mut edges: Vec<(Node, Node)> = added.iter().map(|&(i, j)| (nodes[i], nodes[j])).collect();
    for k in (0..edges.len()).rev() {
        let mut trial = edges.clone();
        trial.remove(k);
        if components(nodes, &trial).iter().all(|c| !h(c)) {
            edges = trial;
        }
    }
    let forest = Forest { nodes: nodes.to_vec(), edges, dual };
    let c = forest.cost(&cost);
    if c > Rational::from_integer(2.into()) * &forest.dual {
        return Err(Error::Invariant(format!("forest cost {c} exceeds twice its dual {}", forest.dual)));
    }
    Ok(forest)
}
