use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{Arc, Node};

/// How a tree is turned into a walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeWalk {
    /// Start at `root`, visit everything, finish at `v`.
    EndAt { root: Node, v: Node },
    /// Start at `u`, visit everything, finish at `w`. For `u == w` the walk
    /// returns to `u`.
    EnterExit { u: Node, w: Node },
}

/// Doubles every tree edge off the start-finish path, takes the Euler walk
/// that handles the path child last, and shortcuts to first visits. The
/// finish node is moved to the end. Edges are read as undirected.
pub fn tree_to_path(edges: &[Arc], mode: TreeWalk) -> Result<Vec<Node>> {
    let (start, finish) = match mode {
        TreeWalk::EndAt { root, v } => (root, v),
        TreeWalk::EnterExit { u, w } => (u, w),
    };
    let mut adj: BTreeMap<Node, BTreeSet<Node>> = BTreeMap::new();
    adj.entry(start).or_default();
    for &(a, b) in edges {
        adj.entry(a).or_default().insert(b);
        adj.entry(b).or_default().insert(a);
    }
    if !adj.contains_key(&finish) {
        return Err(Error::InvalidArgument(format!("node {finish} is not in the tree")));
    }
    let mut parent: BTreeMap<Node, Node> = BTreeMap::new();
    let mut stack = vec![start];
    let mut seen = BTreeSet::from([start]);
    while let Some(u) = stack.pop() {
        for &v in &adj[&u] {
            if seen.insert(v) {
                parent.insert(v, u);
                stack.push(v);
            }
        }
    }
    if seen.len() != adj.len() || edges.len() + 1 != adj.len() {
        return Err(Error::InvalidArgument("edge set is not a tree".into()));
    }
    let mut on_path = BTreeSet::from([finish]);
    let mut x = finish;
    while let Some(&p) = parent.get(&x) {
        on_path.insert(p);
        x = p;
    }
    let mut order = Vec::with_capacity(adj.len());
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        order.push(u);
        let mut kids: Vec<Node> = adj[&u].iter().copied().filter(|v| parent.get(v) == Some(&u)).collect();
        kids.sort_by_key(|v| (on_path.contains(v), *v));
        stack.extend(kids.into_iter().rev());
    }
    if start == finish {
        if order.len() > 1 {
            order.push(start);
        }
        return Ok(order);
    }
    order.retain(|&v| v != finish);
    order.push(finish);
    Ok(order)
}
