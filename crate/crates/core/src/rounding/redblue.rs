use num_traits::Zero;

use crate::error::{invariant, Result};
use crate::formulations::Interval;
use crate::model::{Instance, Node, RootedPath};
use crate::num::{frac, Rational};

/// Maximal run of nodes joined by red edges; a node without red edges forms
/// its own group. The first node is the group's sentinel.
#[derive(Clone, Debug, PartialEq)]
pub struct RedGroup {
    pub sentinel: Node,
    pub interval: Interval,
    pub members: Vec<Node>,
    /// Red edges inside the group.
    pub edges: Vec<(Node, Node)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RedBlueDecomposition {
    pub path: RootedPath,
    /// `red[i]` labels the edge from the `i`-th to the `(i+1)`-th node.
    pub red: Vec<bool>,
    pub groups: Vec<RedGroup>,
    pub red_cost: Rational,
}

impl RedBlueDecomposition {
    pub fn sentinels(&self) -> impl Iterator<Item = Node> + '_ {
        self.groups.iter().map(|g| g.sentinel)
    }
}

/// An edge is red when some node up to its tail is at least as far from the
/// root as some node from its head on. Checks that red edges cost at most
/// 1.5 times the path regret and that sentinels and group ranges strictly
/// increase in distance.
pub fn classify_red_blue(inst: &Instance, path: &RootedPath) -> Result<RedBlueDecomposition> {
    let nodes = path.nodes();
    let d: Vec<&Rational> = nodes.iter().map(|&v| inst.dist(v)).collect();
    let m = nodes.len();
    let mut suffix_min: Vec<&Rational> = d.clone();
    for i in (0..m.saturating_sub(1)).rev() {
        suffix_min[i] = suffix_min[i].min(suffix_min[i + 1]);
    }
    let mut red = Vec::with_capacity(m.saturating_sub(1));
    let mut prefix_max = d[0];
    for i in 0..m.saturating_sub(1) {
        prefix_max = prefix_max.max(d[i]);
        red.push(prefix_max >= suffix_min[i + 1]);
    }
    let mut groups: Vec<RedGroup> = Vec::new();
    let mut red_cost = Rational::zero();
    for i in 1..m {
        let v = nodes[i];
        let joins = i > 1 && red[i - 1];
        if joins {
            let g = groups.last_mut().unwrap();
            g.members.push(v);
            g.edges.push((nodes[i - 1], v));
            red_cost += inst.cost(nodes[i - 1], v);
        } else {
            groups.push(RedGroup { sentinel: v, interval: Interval::new(d[i].clone(), d[i].clone()), members: vec![v], edges: Vec::new() });
        }
        let g = groups.last_mut().unwrap();
        if d[i] < &g.interval.lo {
            g.interval.lo = d[i].clone();
        }
        if d[i] > &g.interval.hi {
            g.interval.hi = d[i].clone();
        }
    }
    if red.first() == Some(&true) {
        red_cost += inst.cost(nodes[0], nodes[1]);
    }
    let regret = path.regret(inst);
    if red_cost > frac(3, 2) * &regret {
        return invariant(format!("red edges cost {red_cost} against regret {regret}"));
    }
    for w in groups.windows(2) {
        if inst.dist(w[0].sentinel) >= inst.dist(w[1].sentinel) || !w[0].interval.before(&w[1].interval) {
            return invariant("sentinel distances do not increase".to_string());
        }
    }
    Ok(RedBlueDecomposition { path: path.clone(), red, groups, red_cost })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::generators::{line3, star3};
    use crate::num::int;

    #[test]
    fn line_backtrack() {
        let l = line3();
        let p = RootedPath::new(&l, vec![0, 2, 1]).unwrap();
        let rb = classify_red_blue(&l, &p).unwrap();
        assert_eq!(rb.red, vec![false, true]);
        assert_eq!(rb.sentinels().collect::<Vec<_>>(), vec![2]);
        assert_eq!(rb.groups[0].interval, Interval::new(int(1), int(2)));
        assert_eq!(rb.red_cost, int(1));
    }

    #[test]
    fn increasing_path_is_blue() {
        let l = line3();
        let rb = classify_red_blue(&l, &RootedPath::new(&l, vec![0, 1, 2]).unwrap()).unwrap();
        assert!(rb.red.iter().all(|r| !r));
        assert_eq!(rb.sentinels().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn equal_distances_are_red() {
        let s = star3();
        let rb = classify_red_blue(&s, &RootedPath::new(&s, vec![0, 1, 2, 3]).unwrap()).unwrap();
        assert_eq!(rb.red, vec![false, true, true]);
        assert_eq!(rb.groups.len(), 1);
        assert_eq!(rb.red_cost, int(4));
    }
}
