use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{Arc, Node};
use crate::num::Rational;

/// Sparse nonnegative rational values on arcs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ArcVector {
    map: BTreeMap<Arc, Rational>,
}

impl ArcVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Arc, Rational)>) -> Self {
        let mut x = Self::new();
        for (a, v) in pairs {
            x.add(a, &v);
        }
        x
    }

    pub fn get(&self, a: Arc) -> Rational {
        self.map.get(&a).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, a: Arc, v: Rational) {
        if v.is_zero() {
            self.map.remove(&a);
        } else {
            self.map.insert(a, v);
        }
    }

    pub fn add(&mut self, a: Arc, v: &Rational) {
        let cur = self.get(a);
        self.set(a, cur + v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Arc, &Rational)> {
        self.map.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = Arc> + '_ {
        self.map.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn nodes(&self) -> BTreeSet<Node> {
        self.map.keys().flat_map(|&(u, v)| [u, v]).collect()
    }

    pub fn in_sum(&self, v: Node) -> Rational {
        self.map.iter().filter(|((_, h), _)| *h == v).fold(Rational::zero(), |acc, (_, x)| acc + x)
    }

    pub fn out_sum(&self, v: Node) -> Rational {
        self.map.iter().filter(|((t, _), _)| *t == v).fold(Rational::zero(), |acc, (_, x)| acc + x)
    }

    /// In-flow minus out-flow at every node of the support.
    pub fn excess(&self) -> BTreeMap<Node, Rational> {
        let mut ex: BTreeMap<Node, Rational> = BTreeMap::new();
        for (&(u, v), x) in &self.map {
            *ex.entry(v).or_insert_with(Rational::zero) += x;
            *ex.entry(u).or_insert_with(Rational::zero) -= x;
        }
        ex
    }

    pub fn check_nonnegative(&self) -> Result<()> {
        match self.map.iter().find(|(_, x)| x.is_negative()) {
            Some((a, _)) => Err(Error::InvalidArgument(format!("negative value on arc {a:?}"))),
            None => Ok(()),
        }
    }

    /// In-flow at least out-flow at every node other than `root`.
    pub fn is_preflow(&self, root: Node) -> bool {
        self.excess().iter().all(|(&v, e)| v == root || !e.is_negative())
    }

    pub fn cost(&self, c: impl Fn(Node, Node) -> Rational) -> Rational {
        self.map.iter().fold(Rational::zero(), |acc, (&(u, v), x)| acc + c(u, v) * x)
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        Self::from_pairs(self.map.iter().map(|(a, x)| (*a, x * s)))
    }
}
