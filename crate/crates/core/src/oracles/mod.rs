//! Exact exponential-time solvers for small instances.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{Instance, Node, RootedPath};
use crate::num::Rational;
use crate::rounding::RegretSolver;

pub const MAX_ORIENTEERING_NODES: usize = 14;
pub const MAX_RVRP_NODES: usize = 10;
pub const MAX_TSP_NODES: usize = 14;

#[derive(Clone, Debug)]
pub struct OracleResult {
    /// Reward for orienteering, path count for routing, regret for TSP paths.
    pub value: Rational,
    pub paths: Vec<RootedPath>,
    /// Number of subset-node states filled.
    pub table_size: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    Budget(Rational),
    Regret(Rational),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Rooted,
    /// Paths must end at the given node.
    P2p(Node),
}

fn guard(inst: &Instance, limit: usize, what: &'static str) -> Result<()> {
    if inst.n() > limit {
        return Err(Error::SizeGuard { what, limit, got: inst.n() });
    }
    Ok(())
}

/// The metric scaled to integers by the common denominator.
struct Scaled {
    cost: Vec<Vec<i128>>,
    scale: BigInt,
}

impl Scaled {
    fn new(inst: &Instance) -> Result<Self> {
        let mut scale = BigInt::one();
        for row in inst.matrix() {
            for c in row {
                scale = scale.lcm(c.denom());
            }
        }
        let sr = Rational::from_integer(scale.clone());
        let cost = inst
            .matrix()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| (c * &sr).to_integer().to_i128().filter(|x| x.abs() < i128::MAX / 64))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Numerical("cost denominators are too large for the exact solvers".into()))?;
        Ok(Scaled { cost, scale })
    }

    fn up(&self, r: &Rational) -> Option<i128> {
        let x = r * Rational::from_integer(self.scale.clone());
        // bounds compare against integer sums, so flooring keeps them exact
        x.floor().to_integer().to_i128()
    }

    fn down(&self, x: i128) -> Rational {
        Rational::new(BigInt::from(x), self.scale.clone())
    }
}

const INF: i128 = i128::MAX;

/// `best[S][j]`: cheapest path from `start` through exactly the listed nodes
/// of `S` ending at `items[j]`, with parent links.
struct PathTable {
    best: Vec<Vec<i128>>,
    parent: Vec<Vec<u8>>,
}

fn path_table(sc: &Scaled, start: Node, items: &[Node]) -> PathTable {
    let m = items.len();
    let full = 1usize << m;
    let mut best = vec![vec![INF; m]; full];
    let mut parent = vec![vec![u8::MAX; m]; full];
    for j in 0..m {
        best[1 << j][j] = sc.cost[start][items[j]];
    }
    for s in 1..full {
        for j in 0..m {
            let cur = best[s][j];
            if cur == INF || s & (1 << j) == 0 {
                continue;
            }
            for k in 0..m {
                if s & (1 << k) != 0 {
                    continue;
                }
                let next = s | (1 << k);
                let val = cur + sc.cost[items[j]][items[k]];
                if val < best[next][k] {
                    best[next][k] = val;
                    parent[next][k] = j as u8;
                }
            }
        }
    }
    PathTable { best, parent }
}

impl PathTable {
    fn walk(&self, start: Node, items: &[Node], mut s: usize, mut j: usize) -> Vec<Node> {
        let mut rev = vec![items[j]];
        while s.count_ones() > 1 {
            let p = self.parent[s][j] as usize;
            s &= !(1 << j);
            j = p;
            rev.push(items[j]);
        }
        rev.push(start);
        rev.reverse();
        rev
    }
}

fn subset_reward(inst: &Instance, items: &[Node], s: usize) -> Rational {
    (0..items.len()).filter(|j| s & (1 << j) != 0).fold(Rational::zero(), |acc, j| acc + inst.reward(items[j]))
}

/// Best reward over single paths within the bound; ties prefer lower cost,
/// then the smaller node sequence.
pub fn exact_orienteering(inst: &Instance, bound: &Bound, mode: Mode) -> Result<OracleResult> {
    guard(inst, MAX_ORIENTEERING_NODES, "orienteering oracle nodes")?;
    let clock = Instant::now();
    let r = inst.root();
    let end = match mode {
        Mode::Rooted => None,
        Mode::P2p(t) if t < inst.n() && t != r => Some(t),
        Mode::P2p(t) => return Err(Error::InvalidArgument(format!("end node {t} must differ from the root"))),
    };
    let sc = Scaled::new(inst)?;
    let items: Vec<Node> = inst.nodes().filter(|&v| v != r && Some(v) != end).collect();
    let table = path_table(&sc, r, &items);
    let dist = |v: Node| sc.cost[r][v];
    let (limit, regret_mode) = match bound {
        Bound::Budget(b) => (sc.up(b), false),
        Bound::Regret(x) => (sc.up(x), true),
    };
    let limit = limit.ok_or_else(|| Error::Numerical("bound does not fit the exact solver".into()))?;
    let fits = |cost: i128, last: Node| if regret_mode { cost - dist(last) <= limit } else { cost <= limit };
    // candidate: (reward, cost, nodes)
    let mut best: Option<(Rational, i128, Vec<Node>)> = None;
    let offer = |best: &mut Option<(Rational, i128, Vec<Node>)>, reward: Rational, cost: i128, nodes: Vec<Node>| {
        let better = match &*best {
            None => true,
            Some((br, bc, bn)) => reward > *br || (reward == *br && (cost < *bc || (cost == *bc && nodes < *bn))),
        };
        if better {
            *best = Some((reward, cost, nodes));
        }
    };
    let root_reward = inst.reward(r).clone();
    match end {
        None => {
            if fits(0, r) {
                offer(&mut best, root_reward.clone(), 0, vec![r]);
            }
        }
        Some(t) => {
            let c = sc.cost[r][t];
            if fits(c, t) {
                offer(&mut best, root_reward.clone() + inst.reward(t), c, vec![r, t]);
            }
        }
    }
    for s in 1..(1usize << items.len()) {
        let reward = &root_reward + subset_reward(inst, &items, s) + end.map_or_else(Rational::zero, |t| inst.reward(t).clone());
        for j in 0..items.len() {
            let c = table.best[s][j];
            if c == INF {
                continue;
            }
            let (total, last) = match end {
                None => (c, items[j]),
                Some(t) => (c + sc.cost[items[j]][t], t),
            };
            if fits(total, last) {
                let better = best.as_ref().is_none_or(|(br, bc, _)| reward > *br || (reward == *br && total <= *bc));
                if better {
                    let mut nodes = table.walk(r, &items, s, j);
                    if let Some(t) = end {
                        nodes.push(t);
                    }
                    offer(&mut best, reward.clone(), total, nodes);
                }
            }
        }
    }
    let table_size = (1usize << items.len()) * items.len().max(1);
    let (value, _, nodes) = best.ok_or_else(|| Error::Infeasible("no path satisfies the bound".into()))?;
    Ok(OracleResult { value, paths: vec![RootedPath::new(inst, nodes)?], table_size, elapsed: clock.elapsed() })
}

/// Fewest rooted paths of regret at most `regret` covering every client.
pub fn exact_rvrp(inst: &Instance, regret: &Rational) -> Result<OracleResult> {
    guard(inst, MAX_RVRP_NODES, "vehicle routing oracle nodes")?;
    let clock = Instant::now();
    let r = inst.root();
    let sc = Scaled::new(inst)?;
    let limit = sc.up(regret).ok_or_else(|| Error::Numerical("bound does not fit the exact solver".into()))?;
    let items: Vec<Node> = inst.nodes().filter(|&v| v != r).collect();
    let m = items.len();
    let full = 1usize << m;
    let table = path_table(&sc, r, &items);
    // cheapest-regret end for each subset
    let mut end_of = vec![None; full];
    for (s, row) in table.best.iter().enumerate().skip(1) {
        let mut pick: Option<(i128, usize)> = None;
        for (j, &c) in row.iter().enumerate() {
            if c != INF {
                let reg = c - sc.cost[r][items[j]];
                if reg <= limit && pick.is_none_or(|(b, _)| reg < b) {
                    pick = Some((reg, j));
                }
            }
        }
        end_of[s] = pick.map(|(_, j)| j);
    }
    let mut count = vec![usize::MAX; full];
    let mut choice = vec![0usize; full];
    count[0] = 0;
    for s in 1..full {
        let low = s & s.wrapping_neg();
        // every partition has a part holding the lowest node
        let mut t = s;
        while t > 0 {
            if t & low != 0 && end_of[t].is_some() && count[s & !t] != usize::MAX && count[s & !t] + 1 < count[s] {
                count[s] = count[s & !t] + 1;
                choice[s] = t;
            }
            t = (t - 1) & s;
        }
    }
    let mut paths = Vec::new();
    let mut s = full - 1;
    while s > 0 {
        let t = choice[s];
        let j = end_of[t].expect("chosen part is feasible");
        paths.push(RootedPath::new(inst, table.walk(r, &items, t, j))?);
        s &= !t;
    }
    Ok(OracleResult {
        value: Rational::from_integer(BigInt::from(count[full - 1])),
        paths,
        table_size: full * m.max(1),
        elapsed: clock.elapsed(),
    })
}

/// Least-regret Hamiltonian path from the root to `t`.
pub fn exact_regret_tsp_path(inst: &Instance, t: Node) -> Result<OracleResult> {
    guard(inst, MAX_TSP_NODES, "TSP path oracle nodes")?;
    let clock = Instant::now();
    let r = inst.root();
    if t >= inst.n() || t == r {
        return Err(Error::InvalidArgument(format!("end node {t} must differ from the root")));
    }
    let sc = Scaled::new(inst)?;
    let items: Vec<Node> = inst.nodes().filter(|&v| v != r).collect();
    let table = path_table(&sc, r, &items);
    let full = (1usize << items.len()) - 1;
    let j = items.iter().position(|&v| v == t).unwrap();
    let cost = table.best[full][j];
    let path = RootedPath::new(inst, table.walk(r, &items, full, j))?;
    Ok(OracleResult {
        value: sc.down(cost - sc.cost[r][t]),
        paths: vec![path],
        table_size: (full + 1) * items.len(),
        elapsed: clock.elapsed(),
    })
}

/// Exact regret orienteering as a ratio-one subsolver.
#[derive(Clone, Copy, Debug, Default)]
pub struct OracleRegretSolver;

impl RegretSolver for OracleRegretSolver {
    fn alpha(&self) -> f64 {
        1.0
    }

    fn solve(&self, inst: &Instance, regret: &Rational) -> Result<RootedPath> {
        let res = exact_orienteering(inst, &Bound::Regret(regret.clone()), Mode::Rooted)?;
        Ok(res.paths.into_iter().next().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::generators::{euclidean, gk, line3, star3};
    use crate::num::int;

    /// Every simple rooted path, by brute force.
    fn all_paths(inst: &Instance) -> Vec<Vec<Node>> {
        fn grow(inst: &Instance, cur: &mut Vec<Node>, out: &mut Vec<Vec<Node>>) {
            out.push(cur.clone());
            for v in inst.nodes() {
                if !cur.contains(&v) {
                    cur.push(v);
                    grow(inst, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        grow(inst, &mut vec![inst.root()], &mut out);
        out
    }

    fn brute_orienteering(inst: &Instance, bound: &Bound, end: Option<Node>) -> Option<Rational> {
        all_paths(inst)
            .into_iter()
            .map(|p| RootedPath::new(inst, p).unwrap())
            .filter(|p| end.is_none_or(|t| p.end() == t && p.len() > 1))
            .filter(|p| match bound {
                Bound::Budget(b) => &p.cost(inst) <= b,
                Bound::Regret(x) => &p.regret(inst) <= x,
            })
            .map(|p| p.reward(inst))
            .max()
    }

    #[test]
    fn fixtures() {
        let l = line3();
        let s = star3();
        assert_eq!(exact_orienteering(&l, &Bound::Budget(int(2)), Mode::Rooted).unwrap().value, int(3));
        assert_eq!(exact_orienteering(&s, &Bound::Budget(int(3)), Mode::Rooted).unwrap().value, int(2));
        assert_eq!(exact_orienteering(&l, &Bound::Budget(int(2)), Mode::P2p(2)).unwrap().value, int(3));
        assert_eq!(exact_rvrp(&s, &int(0)).unwrap().value, int(3));
        assert_eq!(exact_rvrp(&s, &int(2)).unwrap().value, int(2));
        assert_eq!(exact_rvrp(&l, &int(0)).unwrap().value, int(1));
        assert_eq!(exact_regret_tsp_path(&l, 2).unwrap().value, int(0));
    }

    #[test]
    fn p2p_with_zero_end_reward() {
        let l = line3().with_rewards(vec![int(0), int(1), int(0)]).unwrap();
        let res = exact_orienteering(&l, &Bound::Budget(int(2)), Mode::P2p(2)).unwrap();
        assert_eq!(res.value, int(1));
        assert_eq!(res.paths[0].nodes(), &[0, 1, 2]);
        assert!(exact_orienteering(&l, &Bound::Budget(int(1)), Mode::P2p(2)).is_err());
    }

    #[test]
    fn agrees_with_enumeration() {
        for seed in 0..6 {
            let inst = euclidean(5, seed, 10.0).unwrap();
            let t = 1 + (seed as usize % 5);
            for bound in [Bound::Budget(inst.max_dist() * int(2)), Bound::Regret(inst.max_dist() / int(2))] {
                let got = exact_orienteering(&inst, &bound, Mode::Rooted).unwrap();
                assert_eq!(Some(got.value.clone()), brute_orienteering(&inst, &bound, None));
                assert_eq!(got.paths[0].reward(&inst), got.value);
                let got = exact_orienteering(&inst, &bound, Mode::P2p(t)).ok().map(|r| r.value);
                assert_eq!(got, brute_orienteering(&inst, &bound, Some(t)));
            }
            let tsp = exact_regret_tsp_path(&inst, t).unwrap();
            let brute = all_paths(&inst)
                .into_iter()
                .filter(|p| p.len() == inst.n() && *p.last().unwrap() == t)
                .map(|p| RootedPath::new(&inst, p).unwrap().regret(&inst))
                .min()
                .unwrap();
            assert_eq!(tsp.value, brute);
            assert_eq!(tsp.paths[0].regret(&inst), brute);
        }
    }

    #[test]
    fn routing_cover_is_feasible() {
        let inst = euclidean(6, 3, 10.0).unwrap();
        let bound = inst.max_dist() / int(3);
        let res = exact_rvrp(&inst, &bound).unwrap();
        assert_eq!(res.value, int(res.paths.len() as i64));
        assert!(res.paths.iter().all(|p| p.regret(&inst) <= bound));
        for v in inst.clients() {
            assert!(res.paths.iter().any(|p| p.contains(v)));
        }
    }

    #[test]
    fn ladder_optimum() {
        for k in 2..=4 {
            let inst = gk(k).unwrap();
            let res = exact_regret_tsp_path(&inst, inst.n() - 1).unwrap();
            assert_eq!(res.value, int(2 * k as i64 - 2), "k = {k}");
        }
    }

    #[test]
    fn size_guards() {
        let big = euclidean(14, 1, 10.0).unwrap();
        assert!(matches!(exact_orienteering(&big, &Bound::Budget(int(1)), Mode::Rooted), Err(Error::SizeGuard { .. })));
        assert!(matches!(exact_rvrp(&big, &int(1)), Err(Error::SizeGuard { .. })));
        assert!(matches!(exact_regret_tsp_path(&big, 1), Err(Error::SizeGuard { .. })));
    }
}
