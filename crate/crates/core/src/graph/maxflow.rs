//! Exact max-flow on small dense networks.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use super::arcs::ArcVector;
use crate::error::{Error, Result};
use crate::model::Node;
use crate::num::Rational;

#[derive(Clone, Debug)]
pub struct Cut {
    pub value: Rational,
    /// Smallest sink side of a minimum cut.
    pub sink_side: Vec<bool>,
}

/// Edmonds-Karp on a dense capacity matrix with several sources and sinks.
pub fn min_cut(cap: &[Vec<Rational>], sources: &[usize], sinks: &[usize]) -> Cut {
    let n = cap.len();
    let (value, res) = augment(cap, sources, sinks);
    // nodes that can still reach a sink form the sink side
    let mut reach = vec![false; n];
    let mut queue = VecDeque::new();
    for &b in sinks {
        reach[b] = true;
        queue.push_back(b);
    }
    while let Some(v) = queue.pop_front() {
        for u in 0..n {
            if !reach[u] && res[u][v].is_positive() {
                reach[u] = true;
                queue.push_back(u);
            }
        }
    }
    Cut { value, sink_side: reach }
}

/// Maximum `s`-`t` flow value and one flow attaining it, without
/// opposite flows on antiparallel arcs.
pub fn max_flow(cap: &[Vec<Rational>], s: usize, t: usize) -> (Rational, Vec<Vec<Rational>>) {
    let n = cap.len();
    let (value, res) = augment(cap, &[s], &[t]);
    let flow = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| {
                    let f = &cap[u][v] - &res[u][v];
                    if f.is_positive() { f } else { Rational::zero() }
                })
                .collect()
        })
        .collect();
    (value, flow)
}

/// Shortest augmenting paths from any source to any sink; returns the flow
/// value and the residual matrix.
fn augment(cap: &[Vec<Rational>], sources: &[usize], sinks: &[usize]) -> (Rational, Vec<Vec<Rational>>) {
    let n = cap.len();
    let mut res: Vec<Vec<Rational>> = cap.to_vec();
    let mut is_sink = vec![false; n];
    for &b in sinks {
        is_sink[b] = true;
    }
    let mut value = Rational::zero();
    if sources.iter().any(|&a| is_sink[a]) {
        return (value, res);
    }
    loop {
        let mut prev = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &a in sources {
            prev[a] = a;
            queue.push_back(a);
        }
        let mut end = None;
        while let Some(u) = queue.pop_front() {
            if is_sink[u] {
                end = Some(u);
                break;
            }
            for v in 0..n {
                if prev[v] == usize::MAX && res[u][v].is_positive() {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let Some(end) = end else { break };
        let mut aug: Option<Rational> = None;
        let mut v = end;
        while prev[v] != v {
            let u = prev[v];
            if aug.as_ref().is_none_or(|a| res[u][v] < *a) {
                aug = Some(res[u][v].clone());
            }
            v = u;
        }
        let aug = aug.expect("a sink is never a source");
        let mut v = end;
        while prev[v] != v {
            let u = prev[v];
            res[u][v] -= &aug;
            res[v][u] += &aug;
            v = u;
        }
        value += aug;
    }
    (value, res)
}

/// Floating-point min cut value, used to skip exact cuts that are clearly
/// slack.
pub(crate) fn min_cut_value_f64(cap: &[Vec<f64>], sources: &[usize], sinks: &[usize]) -> f64 {
    let n = cap.len();
    let (s, t) = (n, n + 1);
    let mut res = vec![vec![0.0; n + 2]; n + 2];
    for (u, row) in cap.iter().enumerate() {
        res[u][..n].copy_from_slice(row);
    }
    for &a in sources {
        res[s][a] = f64::INFINITY;
    }
    for &b in sinks {
        res[b][t] = f64::INFINITY;
    }
    let mut value = 0.0;
    loop {
        let mut prev = vec![usize::MAX; n + 2];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for v in 0..n + 2 {
                if prev[v] == usize::MAX && res[u][v] > 1e-12 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX || value == f64::INFINITY {
            return value;
        }
        let mut aug = f64::INFINITY;
        let mut v = t;
        while v != s {
            aug = aug.min(res[prev[v]][v]);
            v = prev[v];
        }
        let mut v = t;
        while v != s {
            let u = prev[v];
            res[u][v] -= aug;
            res[v][u] += aug;
            v = u;
        }
        value += aug;
    }
}

pub fn capacity_matrix(x: &ArcVector, n: usize) -> Vec<Vec<Rational>> {
    let mut cap = vec![vec![Rational::zero(); n]; n];
    for (&(u, v), c) in x.iter() {
        cap[u][v] += c;
    }
    cap
}

/// Minimum capacity of an arc set entering a set that contains `v` but not `r`.
pub fn connectivity(x: &ArcVector, r: Node, v: Node) -> Result<Rational> {
    if r == v {
        return Err(Error::InvalidArgument("connectivity from the root to itself".into()));
    }
    let n = x.nodes().iter().copied().chain([r, v]).max().unwrap() + 1;
    Ok(min_cut(&capacity_matrix(x, n), &[r], &[v]).value)
}
