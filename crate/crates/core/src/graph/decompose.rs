use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::arcs::ArcVector;
use crate::error::{Error, Result};
use crate::model::Node;
use crate::num::{min_rat, Rational};

/// Weighted node sequences, e.g. the paths of a flow decomposition.
#[derive(Clone, Debug, Default)]
pub struct WeightedPathFamily {
    pub paths: Vec<(Vec<Node>, Rational)>,
    /// Total weight of cycles dropped during decomposition.
    pub discarded: Rational,
}

impl WeightedPathFamily {
    /// Weighted arc sums of the paths.
    pub fn arc_sums(&self) -> ArcVector {
        let mut x = ArcVector::new();
        for (p, w) in &self.paths {
            for a in p.windows(2) {
                x.add((a[0], a[1]), w);
            }
        }
        x
    }

    pub fn total_weight(&self) -> Rational {
        self.paths.iter().fold(Rational::zero(), |acc, (_, w)| acc + w)
    }
}

/// Decomposes `f` into `source`-rooted paths. A path ends at `sink` or at any
/// node with positive excess (absorption); cycles met on the way are removed
/// and counted in `discarded`.
pub fn decompose_flow_paths(f: &ArcVector, source: Node, sink: Node) -> Result<WeightedPathFamily> {
    f.check_nonnegative()?;
    let mut excess = f.excess();
    for (&v, e) in &excess {
        if v != source && v != sink && e.is_negative() {
            return Err(Error::InvalidArgument(format!("flow deficit at node {v}")));
        }
    }
    let mut out: BTreeMap<Node, BTreeMap<Node, Rational>> = BTreeMap::new();
    for (&(u, v), x) in f.iter() {
        if x.is_positive() {
            out.entry(u).or_default().insert(v, x.clone());
        }
    }
    let absorbs = |v: Node, excess: &BTreeMap<Node, Rational>| v != source && (v == sink || excess.get(&v).is_some_and(|e| e.is_positive()));
    let mut fam = WeightedPathFamily::default();
    loop {
        let Some(first) = out.get(&source).and_then(|m| m.keys().next().copied()) else { break };
        let mut walk = vec![source, first];
        let mut pos: BTreeMap<Node, usize> = BTreeMap::from([(source, 0), (first, 1)]);
        loop {
            let u = *walk.last().unwrap();
            if absorbs(u, &excess) {
                let mut w = excess.get(&u).cloned().unwrap_or_else(Rational::zero);
                if u == sink {
                    w = walk.windows(2).map(|a| out[&a[0]][&a[1]].clone()).min().unwrap();
                }
                for a in walk.windows(2) {
                    w = min_rat(w, out[&a[0]][&a[1]].clone());
                }
                for a in walk.windows(2) {
                    take(&mut out, a[0], a[1], &w);
                }
                if u != sink {
                    *excess.get_mut(&u).unwrap() -= &w;
                }
                fam.paths.push((walk, w));
                break;
            }
            let Some(next) = out.get(&u).and_then(|m| m.keys().next().copied()) else {
                return Err(Error::Invariant(format!("flow path stuck at node {u}")));
            };
            if let Some(&i) = pos.get(&next) {
                let mut cycle = walk[i..].to_vec();
                cycle.push(next);
                let w = cycle.windows(2).map(|a| out[&a[0]][&a[1]].clone()).min().unwrap();
                for a in cycle.windows(2) {
                    take(&mut out, a[0], a[1], &w);
                }
                fam.discarded += w;
                break;
            }
            pos.insert(next, walk.len());
            walk.push(next);
        }
    }
    Ok(fam)
}

fn take(out: &mut BTreeMap<Node, BTreeMap<Node, Rational>>, u: Node, v: Node, w: &Rational) {
    let m = out.get_mut(&u).unwrap();
    let x = m.get_mut(&v).unwrap();
    *x -= w;
    if x.is_zero() {
        m.remove(&v);
        if m.is_empty() {
            out.remove(&u);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, int};

    #[test]
    fn absorbing_nodes() {
        let f = ArcVector::from_pairs([((0, 1), int(1)), ((1, 2), frac(1, 2))]);
        let fam = decompose_flow_paths(&f, 0, 9).unwrap();
        assert_eq!(fam.paths.len(), 2);
        assert_eq!(fam.arc_sums(), f);
        assert!(fam.paths.iter().all(|(_, w)| *w == frac(1, 2)));
    }

    #[test]
    fn integral_path() {
        let f = ArcVector::from_pairs([((0, 2), int(1)), ((2, 1), int(1)), ((1, 3), int(1))]);
        let fam = decompose_flow_paths(&f, 0, 3).unwrap();
        assert_eq!(fam.paths, vec![(vec![0, 2, 1, 3], int(1))]);
    }

    #[test]
    fn cycle_is_discarded() {
        let f = ArcVector::from_pairs([((0, 1), int(1)), ((1, 2), frac(5, 4)), ((2, 1), frac(1, 4)), ((2, 3), int(1))]);
        let fam = decompose_flow_paths(&f, 0, 3).unwrap();
        assert_eq!(fam.discarded, frac(1, 4));
        let expect = ArcVector::from_pairs([((0, 1), int(1)), ((1, 2), int(1)), ((2, 3), int(1))]);
        assert_eq!(fam.arc_sums(), expect);
    }

    #[test]
    fn deficit_is_rejected() {
        let f = ArcVector::from_pairs([((1, 2), int(1))]);
        assert!(decompose_flow_paths(&f, 0, 2).is_err());
    }
}
