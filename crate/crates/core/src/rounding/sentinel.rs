use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use super::redblue::classify_red_blue;
use super::split::split_path;
use crate::error::{invariant, Error, Result};
use crate::formulations::{Sentinel, SentinelStructure};
use crate::graph::{
    build_downward_monotone_forest, decompose_flow_paths, round_integral_flow, tree_to_path, ArcVector, FlowNetwork,
    TreeWalk,
};
use crate::model::path::shortcut_walk;
use crate::model::{Instance, Node, RootedPath};
use crate::num::{ceil, frac, to_f64, Rational, FEAS_TOL};

/// Turns a fractional path cover into sentinel data: each red group becomes
/// a sentinel carrying its members, red edges become connection edges, and
/// the sentinels of each path form a distance-increasing flow path.
pub fn paths_to_sentinel_structure(inst: &Instance, paths: &[(RootedPath, Rational)]) -> Result<SentinelStructure> {
    let r = inst.root();
    let clients: Vec<Node> = inst.nodes().filter(|&u| u != r).collect();
    let mut index: BTreeMap<(Node, crate::formulations::Interval), usize> = BTreeMap::new();
    let mut st = SentinelStructure {
        root: r,
        clients,
        sentinels: Vec::new(),
        weight: Vec::new(),
        assign: BTreeMap::new(),
        z: BTreeMap::new(),
        f_root: Vec::new(),
        f_end: Vec::new(),
        f_next: BTreeMap::new(),
        k: Rational::zero(),
        regret_budget: Rational::zero(),
    };
    for (p, w) in paths {
        if p.is_empty() || w.is_zero() {
            continue;
        }
        let rb = classify_red_blue(inst, p)?;
        let mut seq = Vec::new();
        for g in &rb.groups {
            let key = (g.sentinel, g.interval.clone());
            let s = *index.entry(key).or_insert_with(|| {
                st.sentinels.push(Sentinel { node: g.sentinel, interval: g.interval.clone() });
                st.weight.push(Rational::zero());
                st.f_root.push(Rational::zero());
                st.f_end.push(Rational::zero());
                st.sentinels.len() - 1
            });
            st.weight[s] += w;
            for &y in &g.members[1..] {
                *st.assign.entry((s, y)).or_default() += w;
            }
            for &(a, b) in &g.edges {
                *st.z.entry((a.min(b), a.max(b))).or_default() += w;
            }
            seq.push(s);
        }
        st.f_root[seq[0]] += w;
        st.f_end[*seq.last().unwrap()] += w;
        for pair in seq.windows(2) {
            *st.f_next.entry((pair[0], pair[1])).or_default() += w;
        }
        st.k += w;
        st.regret_budget += w * p.regret(inst);
    }
    if let Some(&v) = st.clients.iter().find(|&&v| to_f64(&st.coverage(v)) < 1.0 - FEAS_TOL) {
        return Err(Error::InvalidArgument(format!("paths cover client {v} only {}", st.coverage(v))));
    }
    st.verify(inst, FEAS_TOL)?;
    Ok(st)
}

/// What the rounding pipeline built on its way, with the quantities its
/// analysis bounds.
#[derive(Clone, Debug)]
pub struct PipelineTrace {
    pub theta: Rational,
    pub forest_edges: Vec<(Node, Node)>,
    pub forest_cost: Rational,
    /// Twice the connection cost over `1 - theta`.
    pub forest_cap: Rational,
    pub components: Vec<Vec<Node>>,
    pub witnesses: Vec<Node>,
    /// Sentinels fractionally holding each witness inside its component.
    pub sigma: Vec<Vec<usize>>,
    /// Component sequences of the shortcut flow paths with their weights.
    pub contracted: Vec<(Vec<usize>, Rational)>,
    /// Flow weight through each component.
    pub component_flow: Vec<Rational>,
    pub fractional_cost: Rational,
    pub integral_cost: Rational,
    pub unit_paths: usize,
    pub count: usize,
    /// `(6/(1-theta) + 1/theta) alpha + ceil(k/theta)` with `alpha` the
    /// structure's regret budget over `R`; infinite when `R = 0` and the
    /// budget is positive.
    pub count_bound: f64,
}

/// Coverage of client `v` by sentinels placed at `u`.
fn node_coverage(st: &SentinelStructure, n: usize) -> Vec<Vec<Rational>> {
    let mut cov = vec![vec![Rational::zero(); n]; n];
    for (s, sen) in st.sentinels.iter().enumerate() {
        cov[sen.node][sen.node] += &st.weight[s];
    }
    for (&(s, v), val) in &st.assign {
        cov[st.sentinels[s].node][v] += val;
    }
    cov
}

pub fn count_bound(st: &SentinelStructure, regret: &Rational, theta: &Rational) -> f64 {
    let one = Rational::one();
    let factor = frac(6, 1) / (&one - theta) + &one / theta;
    let tail = to_f64(&Rational::from_integer(ceil(&(&st.k / theta))));
    if regret.is_zero() {
        if st.regret_budget.is_zero() { tail } else { f64::INFINITY }
    } else {
        to_f64(&(factor * &st.regret_budget / regret)) + tail
    }
}

/// Rounds a sentinel structure to rooted paths of regret at most `regret`
/// covering every client.
pub fn round_sentinel_structure(
    inst: &Instance,
    st: &SentinelStructure,
    regret: &Rational,
    theta: &Rational,
) -> Result<(Vec<RootedPath>, PipelineTrace)> {
    if !(theta.is_positive() && theta < &Rational::one()) {
        return Err(Error::InvalidArgument("theta must lie strictly between 0 and 1".into()));
    }
    let n = inst.n();
    let r = inst.root();
    let m = st.sentinels.len();
    let cov = node_coverage(st, n);

    // forest whose components each hold a node covered theta from inside
    let h = |set: &[Node]| set.iter().all(|&v| set.iter().fold(Rational::zero(), |acc, &u| acc + &cov[u][v]) < *theta);
    let forest = build_downward_monotone_forest(&st.clients, |a, b| inst.cost(a, b).clone(), h)?;
    let forest_cost = forest.cost(|a, b| inst.cost(a, b).clone());
    let forest_cap = frac(2, 1) * st.z_cost(inst) / (Rational::one() - theta);
    if to_f64(&forest_cost) > to_f64(&forest_cap) * (1.0 + 1e-9) + 1e-9 {
        return invariant(format!("forest cost {forest_cost} exceeds {forest_cap}"));
    }
    let components = forest.components();
    let mut comp_of = vec![usize::MAX; n];
    for (c, z) in components.iter().enumerate() {
        for &u in z {
            comp_of[u] = c;
        }
    }

    // witnesses and the sentinels holding them
    let mut witnesses = Vec::new();
    let mut sigma = Vec::new();
    let mut sigma_of = vec![usize::MAX; m];
    for (c, z) in components.iter().enumerate() {
        let inside = |w: Node| z.iter().fold(Rational::zero(), |acc, &u| acc + &cov[u][w]);
        let mut best: Option<(Rational, Node)> = None;
        for &w in z {
            let c_w = inside(w);
            if &c_w >= theta && best.as_ref().is_none_or(|(b, _)| &c_w > b) {
                best = Some((c_w, w));
            }
        }
        let Some((_, w)) = best else {
            return invariant(format!("component {z:?} has no witness"));
        };
        let held: Vec<usize> = (0..m)
            .filter(|&s| {
                let u = st.sentinels[s].node;
                comp_of[u] == c && if u == w { st.weight[s].is_positive() } else { st.assign.get(&(s, w)).is_some_and(|x| x.is_positive()) }
            })
            .collect();
        for &s in &held {
            sigma_of[s] = c;
        }
        witnesses.push(w);
        sigma.push(held);
    }

    // decompose the sentinel flow and keep only sentinels holding witnesses
    let (src, snk) = (0, m + 1);
    let mut f = ArcVector::new();
    for s in 0..m {
        f.add((src, s + 1), &st.f_root[s]);
        f.add((s + 1, snk), &st.f_end[s]);
    }
    for (&(p, q), val) in &st.f_next {
        f.add((p + 1, q + 1), val);
    }
    let decomposition = decompose_flow_paths(&f, src, snk)?;
    let mut contracted: Vec<(Vec<usize>, Rational)> = Vec::new();
    let mut routes: Vec<(Vec<Node>, Rational)> = Vec::new();
    for (aux, y) in &decomposition.paths {
        let kept: Vec<usize> = aux.iter().filter(|&&a| a != src && a != snk).map(|&a| a - 1).filter(|&s| sigma_of[s] != usize::MAX).collect();
        let comps: Vec<usize> = kept.iter().map(|&s| sigma_of[s]).collect();
        let distinct: BTreeSet<usize> = comps.iter().copied().collect();
        if distinct.len() != comps.len() {
            return invariant("a flow path meets a witness's sentinels twice".to_string());
        }
        routes.push((kept.iter().map(|&s| st.sentinels[s].node).collect(), y.clone()));
        contracted.push((comps, y.clone()));
    }

    // contracted flow: acyclic in witness distance order, covering each component theta
    let mut component_flow = vec![Rational::zero(); components.len()];
    for (seq, y) in &contracted {
        for &c in seq {
            component_flow[c] += y;
        }
        for w in seq.windows(2) {
            if inst.dist(witnesses[w[0]]) >= inst.dist(witnesses[w[1]]) {
                return invariant("contracted flow is not ordered by witness distance".to_string());
            }
        }
    }
    if let Some(c) = (0..components.len()).find(|&c| &component_flow[c] < theta) {
        return invariant(format!("component {c} carries flow {} below theta", component_flow[c]));
    }

    // integral flow over the contracted graph, arcs labelled by their real endpoints
    let nc = components.len();
    let (hs, ht) = (0, nc + 1);
    let mut arc_index: BTreeMap<(usize, usize, Node, Node), usize> = BTreeMap::new();
    let mut arcs: Vec<(usize, usize, Rational)> = Vec::new();
    let mut labels: Vec<(Node, Node)> = Vec::new();
    let mut g: Vec<Rational> = Vec::new();
    for (route, y) in &routes {
        let mut prev = (hs, r);
        let stops = route.iter().map(|&u| (comp_of[u] + 1, u)).chain([(ht, r)]);
        for next in stops {
            let key = (prev.0, next.0, prev.1, next.1);
            let i = *arc_index.entry(key).or_insert_with(|| {
                let cost = if next.0 == ht { Rational::zero() } else { inst.regret(prev.1, next.1) };
                arcs.push((prev.0, next.0, cost));
                labels.push((prev.1, next.1));
                g.push(Rational::zero());
                arcs.len() - 1
            });
            g[i] += y / theta;
            prev = next;
        }
    }
    let mut node_lower = vec![1i64; nc + 2];
    node_lower[hs] = 0;
    node_lower[ht] = 0;
    let max_value = ceil(&(&st.k / theta)).try_into().map_err(|_| Error::Numerical("path count overflow".into()))?;
    let net = FlowNetwork { n: nc + 2, source: hs, sink: ht, arcs, node_lower, max_value };
    let fractional_cost = net.cost(&g);
    if fractional_cost > &st.regret_budget / theta {
        return invariant(format!("contracted flow costs {fractional_cost}, above budget over theta"));
    }
    let flow = round_integral_flow(&net, &g)?;
    let integral_cost = net.arcs.iter().zip(&flow).fold(Rational::zero(), |acc, ((_, _, c), &x)| acc + c * Rational::from_integer(x.into()));

    // unit paths, each stop entering a component at one node and leaving at another
    let mut left = flow.clone();
    let mut unit_paths: Vec<Vec<(usize, Node, Node)>> = Vec::new();
    loop {
        let Some(first) = (0..net.arcs.len()).find(|&i| net.arcs[i].0 == hs && left[i] > 0) else { break };
        let mut stops = Vec::new();
        let mut i = first;
        loop {
            left[i] -= 1;
            let (_, to, _) = net.arcs[i];
            if to == ht {
                break;
            }
            let enter = labels[i].1;
            let Some(j) = (0..net.arcs.len()).find(|&j| net.arcs[j].0 == to && left[j] > 0) else {
                return invariant("integral flow is not conserved".to_string());
            };
            stops.push((to - 1, enter, labels[j].0));
            i = j;
        }
        unit_paths.push(stops);
    }

    // expand components along the paths; a component is toured on its first visit only
    let mut toured = vec![false; nc];
    let mut expanded = Vec::new();
    for stops in &unit_paths {
        let mut walk = vec![r];
        for &(c, u, w) in stops {
            if std::mem::replace(&mut toured[c], true) {
                continue;
            }
            let z: BTreeSet<Node> = components[c].iter().copied().collect();
            let edges: Vec<(Node, Node)> = forest.edges.iter().copied().filter(|(a, b)| z.contains(a) && z.contains(b)).collect();
            walk.extend(tree_to_path(&edges, TreeWalk::EnterExit { u, w })?);
        }
        let nodes = shortcut_walk(&walk);
        if nodes.len() > 1 {
            expanded.push(RootedPath::new(inst, nodes)?);
        }
    }
    if let Some(c) = toured.iter().position(|t| !t) {
        return invariant(format!("component {c} lies on no rounded path"));
    }

    let mut out = Vec::new();
    for p in &expanded {
        out.extend(split_path(inst, p, regret));
    }
    let bound = count_bound(st, regret, theta);
    if out.len() as f64 > bound + 1e-9 {
        return invariant(format!("{} paths exceed the bound {bound}", out.len()));
    }
    let mut seen = vec![false; n];
    for p in &out {
        for &v in p.nodes() {
            seen[v] = true;
        }
    }
    if let Some(&v) = st.clients.iter().find(|&&v| !seen[v]) {
        return invariant(format!("client {v} is left uncovered"));
    }
    let trace = PipelineTrace {
        theta: theta.clone(),
        forest_cost,
        forest_cap,
        forest_edges: forest.edges.clone(),
        components,
        witnesses,
        sigma,
        contracted,
        component_flow,
        fractional_cost,
        integral_cost,
        unit_paths: unit_paths.len(),
        count: out.len(),
        count_bound: bound,
    };
    Ok((out, trace))
}
