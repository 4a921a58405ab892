use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::num::{frac, to_f64, Rational};

pub type Node = usize;
pub type Arc = (Node, Node);

/// Symmetric metric over a root and clients, with rewards and an optional end node.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    name: String,
    labels: Vec<String>,
    root: Node,
    end: Option<Node>,
    cost: Vec<Vec<Rational>>,
    reward: Vec<Rational>,
}

impl Instance {
    /// Validates symmetry and the triangle inequality. Violations up to 1e-9
    /// are repaired by taking the metric closure.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        root: Node,
        end: Option<Node>,
        cost: Vec<Vec<Rational>>,
        mut reward: Vec<Rational>,
    ) -> Result<Self> {
        let n = labels.len();
        let bad = |m: String| Err(Error::InvalidInstance(m));
        if n == 0 {
            return bad("no nodes".into());
        }
        if root >= n || end.is_some_and(|t| t >= n || t == root) {
            return bad("root or end out of range".into());
        }
        if cost.len() != n || cost.iter().any(|row| row.len() != n) || reward.len() != n {
            return bad(format!("matrix and rewards must have {n} entries"));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return bad(format!("duplicate node id {l}"));
            }
        }
        for u in 0..n {
            if !cost[u][u].is_zero() {
                return bad(format!("nonzero diagonal at {}", labels[u]));
            }
            if reward[u].is_negative() {
                return bad(format!("negative reward at {}", labels[u]));
            }
            for v in 0..n {
                if cost[u][v].is_negative() {
                    return bad(format!("negative cost {}-{}", labels[u], labels[v]));
                }
                if cost[u][v] != cost[v][u] {
                    return bad(format!("asymmetric cost {}-{}", labels[u], labels[v]));
                }
            }
        }
        reward[root] = Rational::zero();
        if let Some(t) = end {
            reward[t] = Rational::zero();
        }
        let tol = frac(1, 1_000_000_000);
        let mut worst = Rational::zero();
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    let gap = &cost[u][w] - &cost[u][v] - &cost[v][w];
                    if gap > worst {
                        worst = gap;
                    }
                }
            }
        }
        let mut cost = cost;
        if worst > tol {
            return bad(format!("triangle inequality violated by {}", to_f64(&worst)));
        }
        if worst.is_positive() {
            metric_closure(&mut cost);
        }
        Ok(Self { name: name.into(), labels, root, end, cost, reward })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn root(&self) -> Node {
        self.root
    }

    pub fn end(&self) -> Option<Node> {
        self.end
    }

    pub fn label(&self, v: Node) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node(&self, label: &str) -> Result<Node> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown node {label}")))
    }

    pub fn cost(&self, u: Node, v: Node) -> &Rational {
        &self.cost[u][v]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.cost
    }

    pub fn reward(&self, v: Node) -> &Rational {
        &self.reward[v]
    }

    pub fn rewards(&self) -> &[Rational] {
        &self.reward
    }

    /// Distance from the root.
    pub fn dist(&self, v: Node) -> &Rational {
        &self.cost[self.root][v]
    }

    /// `D_u + c_uv - D_v`; nonnegative and an asymmetric metric.
    pub fn regret(&self, u: Node, v: Node) -> Rational {
        self.dist(u) + self.cost(u, v) - self.dist(v)
    }

    /// Every node except the root and the end node.
    pub fn clients(&self) -> Vec<Node> {
        (0..self.n()).filter(|&v| v != self.root && Some(v) != self.end).collect()
    }

    pub fn nodes(&self) -> std::ops::Range<Node> {
        0..self.n()
    }

    pub fn max_dist(&self) -> Rational {
        self.nodes().map(|v| self.dist(v).clone()).max().unwrap_or_else(Rational::zero)
    }

    pub fn with_end(&self, end: Option<Node>) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.labels.clone(),
            self.root,
            end,
            self.cost.clone(),
            self.reward.clone(),
        )
    }

    pub fn with_rewards(&self, reward: Vec<Rational>) -> Result<Self> {
        Self::new(self.name.clone(), self.labels.clone(), self.root, self.end, self.cost.clone(), reward)
    }

    /// Same nodes and metric with `root` as the new root and no end.
    pub fn rerooted(&self, root: Node) -> Result<Self> {
        Self::new(self.name.clone(), self.labels.clone(), root, None, self.cost.clone(), self.reward.clone())
    }

    /// Restriction to `nodes` (given in original indices) with a new root and
    /// end. Returns the instance and the map from new to original indices.
    pub fn restrict(&self, nodes: &[Node], root: Node, end: Option<Node>) -> Result<(Self, Vec<Node>)> {
        let mut keep: Vec<Node> = vec![root];
        for &v in nodes {
            if v != root && Some(v) != end && !keep.contains(&v) {
                keep.push(v);
            }
        }
        if let Some(t) = end {
            keep.push(t);
        }
        let pos = |v: Node| keep.iter().position(|&w| w == v);
        let cost = keep.iter().map(|&u| keep.iter().map(|&v| self.cost[u][v].clone()).collect()).collect();
        let reward = keep.iter().map(|&v| self.reward[v].clone()).collect();
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        let inst = Self::new(self.name.clone(), labels, 0, end.and_then(pos), cost, reward)?;
        Ok((inst, keep))
    }
}

/// Floyd-Warshall closure in place.
pub fn metric_closure(cost: &mut [Vec<Rational>]) {
    let n = cost.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &cost[i][k] + &cost[k][j];
                if via < cost[i][j] {
                    cost[i][j] = via;
                }
            }
        }
    }
}
