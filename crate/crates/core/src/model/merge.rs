use num_traits::Zero;

use super::instance::{Instance, Node};
use super::path::RootedPath;
use crate::error::Result;
use crate::num::Rational;

/// Correspondence between an instance and its zero-distance quotient.
#[derive(Clone, Debug)]
pub struct MergeMap {
    /// Original nodes of each merged node, representative first.
    pub groups: Vec<Vec<Node>>,
    /// Merged index of each original node.
    pub of: Vec<Node>,
}

impl MergeMap {
    pub fn is_identity(&self) -> bool {
        self.groups.iter().all(|g| g.len() == 1)
    }

    /// Expands every merged node into its originals. Zero distances make the
    /// cost and regret of the lifted path equal to those of the input.
    pub fn lift(&self, path: &RootedPath) -> RootedPath {
        RootedPath::from_vec(path.nodes().iter().flat_map(|&v| self.groups[v].iter().copied()).collect())
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Quotient by the zero-distance relation. Merged rewards are summed.
pub fn merge_zero_distance(inst: &Instance) -> Result<(Instance, MergeMap)> {
    let n = inst.n();
    let mut parent: Vec<usize> = (0..n).collect();
    for u in 0..n {
        for v in u + 1..n {
            if inst.cost(u, v).is_zero() {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let root_class = find(&mut parent, inst.root());
    let mut order: Vec<usize> = vec![root_class];
    let mut of = vec![0; n];
    for v in 0..n {
        let c = find(&mut parent, v);
        if !order.contains(&c) {
            order.push(c);
        }
    }
    let mut groups: Vec<Vec<Node>> = vec![Vec::new(); order.len()];
    for v in 0..n {
        let c = find(&mut parent, v);
        let g = order.iter().position(|&x| x == c).unwrap();
        of[v] = g;
        groups[g].push(v);
    }
    let root_group = &mut groups[0];
    root_group.retain(|&v| v != inst.root());
    root_group.insert(0, inst.root());
    let labels = groups.iter().map(|g| g.iter().map(|&v| inst.label(v)).collect::<Vec<_>>().join("+")).collect();
    let cost = groups
        .iter()
        .map(|a| groups.iter().map(|b| inst.cost(a[0], b[0]).clone()).collect())
        .collect();
    let reward = groups
        .iter()
        .map(|g| g.iter().fold(Rational::zero(), |acc, &v| acc + inst.reward(v)))
        .collect();
    let end = inst.end().map(|t| of[t]).filter(|&t| t != 0);
    let merged = Instance::new(inst.name(), labels, 0, end, cost, reward)?;
    Ok((merged, MergeMap { groups, of }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::generators::{line3, star3};
    use crate::num::int;

    fn chain() -> Instance {
        let labels = ["r", "a", "b", "d"].iter().map(|s| s.to_string()).collect();
        let m = [[0, 1, 1, 1], [1, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0]];
        let cost = m.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        Instance::new("chain", labels, 0, None, cost, vec![int(0), int(1), int(2), int(3)]).unwrap()
    }

    #[test]
    fn identity_without_zero_pairs() {
        let s = star3();
        let (m, map) = merge_zero_distance(&s).unwrap();
        assert!(map.is_identity());
        assert_eq!(m.matrix(), s.matrix());
    }

    #[test]
    fn transitive_merge_sums_rewards() {
        let (m, map) = merge_zero_distance(&chain()).unwrap();
        assert_eq!(m.n(), 2);
        assert_eq!(m.reward(1), &int(6));
        let p = RootedPath::new(&m, vec![0, 1]).unwrap();
        let lifted = map.lift(&p);
        assert_eq!(lifted.nodes(), &[0, 1, 2, 3]);
        assert_eq!(lifted.regret(&chain()), p.regret(&m));
    }

    #[test]
    fn pair_merge() {
        let labels = ["r", "a", "b"].iter().map(|s| s.to_string()).collect();
        let cost = vec![vec![int(0), int(1), int(1)], vec![int(1), int(0), int(0)], vec![int(1), int(0), int(0)]];
        let inst = Instance::new("p", labels, 0, None, cost, vec![int(0), int(2), int(5)]).unwrap();
        let (m, _) = merge_zero_distance(&inst).unwrap();
        assert_eq!(m.n(), 2);
        assert_eq!(m.reward(1), &int(7));
        let _ = line3();
    }
}
