use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::num::Rational;

/// Arc-weighted network with lower bounds on node throughput.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    pub n: usize,
    pub source: usize,
    pub sink: usize,
    pub arcs: Vec<(usize, usize, Rational)>,
    pub node_lower: Vec<i64>,
    pub max_value: i64,
}

impl FlowNetwork {
    fn throughput(&self, v: usize, g: &[Rational]) -> Rational {
        let pick = |i: usize| if v == self.source { self.arcs[i].0 == v } else { self.arcs[i].1 == v };
        (0..self.arcs.len()).filter(|&i| pick(i)).fold(Rational::zero(), |acc, i| acc + &g[i])
    }

    /// Conservation, lower bounds and the value cap, checked exactly.
    pub fn check(&self, g: &[Rational]) -> Result<()> {
        if g.len() != self.arcs.len() || g.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidArgument("flow vector does not match the network".into()));
        }
        let mut bal = vec![Rational::zero(); self.n];
        for (i, (u, v, _)) in self.arcs.iter().enumerate() {
            bal[*u] -= &g[i];
            bal[*v] += &g[i];
        }
        for v in 0..self.n {
            if v != self.source && v != self.sink && !bal[v].is_zero() {
                return Err(Error::InvalidArgument(format!("flow not conserved at {v}")));
            }
            if self.throughput(v, g) < Rational::from_integer(self.node_lower[v].into()) {
                return Err(Error::InvalidArgument(format!("lower bound violated at {v}")));
            }
        }
        if bal[self.sink] > Rational::from_integer(self.max_value.into()) {
            return Err(Error::InvalidArgument("flow value exceeds its cap".into()));
        }
        Ok(())
    }

    pub fn cost(&self, g: &[Rational]) -> Rational {
        self.arcs.iter().zip(g).fold(Rational::zero(), |acc, ((_, _, c), x)| acc + c * x)
    }
}

struct Edge {
    to: usize,
    cap: i64,
    cost: Rational,
}

struct Residual {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Self { edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    fn add(&mut self, u: usize, v: usize, cap: i64, cost: Rational) -> usize {
        self.adj[u].push(self.edges.len());
        self.edges.push(Edge { to: v, cap, cost: cost.clone() });
        self.adj[v].push(self.edges.len());
        self.edges.push(Edge { to: u, cap: 0, cost: -cost });
        self.edges.len() - 2
    }

    /// Successive shortest paths with Bellman-Ford; returns the pushed amount.
    fn push(&mut self, s: usize, t: usize, want: i64) -> i64 {
        let n = self.adj.len();
        let mut sent = 0;
        while sent < want {
            let mut dist: Vec<Option<Rational>> = vec![None; n];
            let mut via = vec![usize::MAX; n];
            dist[s] = Some(Rational::zero());
            for _ in 0..n {
                let mut changed = false;
                for u in 0..n {
                    let Some(du) = dist[u].clone() else { continue };
                    for &e in &self.adj[u] {
                        let ed = &self.edges[e];
                        if ed.cap > 0 {
                            let nd = &du + &ed.cost;
                            if dist[ed.to].as_ref().is_none_or(|d| nd < *d) {
                                dist[ed.to] = Some(nd);
                                via[ed.to] = e;
                                changed = true;
                            }
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            if dist[t].is_none() {
                break;
            }
            let mut amount = want - sent;
            let mut v = t;
            while v != s {
                let e = via[v];
                amount = amount.min(self.edges[e].cap);
                v = self.edges[e ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let e = via[v];
                self.edges[e].cap -= amount;
                self.edges[e ^ 1].cap += amount;
                v = self.edges[e ^ 1].to;
            }
            sent += amount;
        }
        sent
    }
}

/// Minimum-cost integral flow on the node-split network satisfying the same
/// constraints as `g`; its cost never exceeds `cost(g)`.
pub fn round_integral_flow(net: &FlowNetwork, g: &[Rational]) -> Result<Vec<i64>> {
    net.check(g)?;
    let n = net.n;
    let big = net.max_value.max(1) + net.node_lower.iter().sum::<i64>();
    // v_in = v, v_out = n + v, super source 2n, super sink 2n + 1
    let (ss, tt) = (2 * n, 2 * n + 1);
    let mut res = Residual::new(2 * n + 2);
    let mut demand = vec![0i64; 2 * n + 2];
    for v in 0..n {
        let lb = net.node_lower[v];
        res.add(v, n + v, big - lb, Rational::zero());
        demand[n + v] += lb;
        demand[v] -= lb;
    }
    let arc_edges: Vec<usize> = net.arcs.iter().map(|(u, v, c)| res.add(n + u, *v, big, c.clone())).collect();
    res.add(n + net.sink, net.source, net.max_value, Rational::zero());
    let mut need = 0;
    for (v, &d) in demand.iter().enumerate() {
        if d > 0 {
            res.add(ss, v, d, Rational::zero());
            need += d;
        } else if d < 0 {
            res.add(v, tt, -d, Rational::zero());
        }
    }
    if res.push(ss, tt, need) < need {
        return Err(Error::Invariant("no integral flow meets the lower bounds".into()));
    }
    let flow: Vec<i64> = arc_edges.iter().map(|&e| res.edges[e ^ 1].cap).collect();
    let as_rat: Vec<Rational> = flow.iter().map(|&x| Rational::from_integer(x.into())).collect();
    net.check(&as_rat)?;
    if net.cost(&as_rat) > net.cost(g) {
        return Err(Error::Invariant("integral flow costs more than the fractional one".into()));
    }
    Ok(flow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, int};

    fn diamond(lower: i64) -> FlowNetwork {
        FlowNetwork {
            n: 4,
            source: 0,
            sink: 3,
            arcs: vec![(0, 1, int(1)), (0, 2, int(2)), (1, 3, int(1)), (2, 3, int(2))],
            node_lower: vec![0, lower, lower, 0],
            max_value: 2,
        }
    }

    #[test]
    fn integral_input_kept() {
        let mut net = diamond(1);
        net.node_lower[2] = 0;
        let g = vec![int(1), int(0), int(1), int(0)];
        assert_eq!(round_integral_flow(&net, &g).unwrap(), vec![1, 0, 1, 0]);
    }

    #[test]
    fn cheaper_branch_wins() {
        let net = FlowNetwork {
            n: 5,
            source: 0,
            sink: 4,
            arcs: vec![(0, 1, int(1)), (0, 2, int(2)), (1, 3, int(0)), (2, 3, int(0)), (3, 4, int(0))],
            node_lower: vec![0, 0, 0, 1, 0],
            max_value: 2,
        };
        let g = vec![frac(3, 5), frac(3, 5), frac(3, 5), frac(3, 5), frac(6, 5)];
        assert_eq!(round_integral_flow(&net, &g).unwrap(), vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn both_middle_nodes_force_two_units() {
        let net = diamond(1);
        let g = vec![int(1), int(1), int(1), int(1)];
        assert_eq!(round_integral_flow(&net, &g).unwrap(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn infeasible_input_rejected() {
        let net = diamond(1);
        let g = vec![frac(1, 2); 4];
        assert!(round_integral_flow(&net, &g).is_err());
    }
}
