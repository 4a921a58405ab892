use num_traits::Zero;

use super::instance::{Instance, Node};
use crate::error::{Error, Result};
use crate::num::Rational;

/// Simple path that starts at the root of its instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedPath {
    nodes: Vec<Node>,
}

impl RootedPath {
    pub fn new(inst: &Instance, nodes: Vec<Node>) -> Result<Self> {
        check_rooted(inst, &nodes)?;
        Ok(Self { nodes })
    }

    pub(crate) fn from_vec(nodes: Vec<Node>) -> Self {
        debug_assert!(!nodes.is_empty());
        Self { nodes }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<Node> {
        self.nodes
    }

    pub fn end(&self) -> Node {
        *self.nodes.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 1
    }

    pub fn contains(&self, v: Node) -> bool {
        self.nodes.contains(&v)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (Node, Node)> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn cost(&self, inst: &Instance) -> Rational {
        walk_cost(inst, &self.nodes)
    }

    /// Sum of regret arc costs, which equals `c(P) - D_end`.
    pub fn regret(&self, inst: &Instance) -> Rational {
        self.arcs().fold(Rational::zero(), |acc, (u, v)| acc + inst.regret(u, v))
    }

    pub fn reward(&self, inst: &Instance) -> Rational {
        self.nodes.iter().fold(Rational::zero(), |acc, &v| acc + inst.reward(v))
    }
}

pub fn walk_cost(inst: &Instance, nodes: &[Node]) -> Rational {
    nodes.windows(2).fold(Rational::zero(), |acc, w| acc + inst.cost(w[0], w[1]))
}

fn check_rooted(inst: &Instance, nodes: &[Node]) -> Result<()> {
    if nodes.first() != Some(&inst.root()) {
        return Err(Error::InvalidArgument("path does not start at the root".into()));
    }
    let mut seen = vec![false; inst.n()];
    for &v in nodes {
        if v >= inst.n() {
            return Err(Error::InvalidArgument(format!("unknown node {v}")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidArgument(format!("node {} repeated", inst.label(v))));
        }
    }
    Ok(())
}

/// Total regret and the regret `c_P(v) - D_v` at every node of the path.
pub fn path_regret(inst: &Instance, path: &RootedPath) -> Result<(Rational, Vec<Rational>)> {
    check_rooted(inst, path.nodes())?;
    let mut per = vec![Rational::zero()];
    let mut prefix = Rational::zero();
    for (u, v) in path.arcs() {
        prefix += inst.cost(u, v);
        per.push(&prefix - inst.dist(v));
    }
    let total = per.last().unwrap().clone();
    Ok((total, per))
}

/// Keeps the first occurrence of every node of a rooted walk. The regret of
/// the result never exceeds the regret of the walk.
pub fn shortcut_walk(walk: &[Node]) -> Vec<Node> {
    let mut seen = std::collections::HashSet::new();
    walk.iter().copied().filter(|v| seen.insert(*v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::generators::{line3, star3};
    use crate::num::int;

    #[test]
    fn star_and_line_regrets() {
        let s = star3();
        let p = RootedPath::new(&s, vec![0, 1, 2]).unwrap();
        let (total, per) = path_regret(&s, &p).unwrap();
        assert_eq!(total, int(2));
        assert_eq!(per, vec![int(0), int(0), int(2)]);
        assert_eq!(p.regret(&s), total);
        let l = line3();
        assert_eq!(RootedPath::new(&l, vec![0, 1, 2]).unwrap().regret(&l), int(0));
    }

    #[test]
    fn malformed_paths_rejected() {
        let l = line3();
        assert!(RootedPath::new(&l, vec![1, 2]).is_err());
        assert!(RootedPath::new(&l, vec![0, 1, 1]).is_err());
    }

    #[test]
    fn closed_walk_regret_equals_cost() {
        let s = star3();
        let walk = [0, 1, 2, 3, 0];
        let reg = walk.windows(2).fold(int(0), |a, w| a + s.regret(w[0], w[1]));
        assert_eq!(reg, walk_cost(&s, &walk));
    }
}
