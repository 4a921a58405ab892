#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use regroute::graph::ArcVector;
use regroute::num::frac;

/// Weighted walks from the root plus weighted cycles: always a preflow.
pub fn preflow() -> impl Strategy<Value = (usize, ArcVector)> {
    (2usize..=7).prop_flat_map(|n| {
        let walk = (prop::collection::vec(0..n, 1..n + 1), 1i64..8, 1i64..5);
        let cycle = (prop::collection::vec(0..n, 2..n + 1), 1i64..8, 1i64..5);
        (Just(n), prop::collection::vec(walk, 1..5), prop::collection::vec(cycle, 0..3)).prop_map(|(n, walks, cycles)| {
            let mut x = ArcVector::new();
            for (w, p, q) in walks {
                let mut prev = 0;
                for v in w {
                    if v != prev {
                        x.add((prev, v), &frac(p, q));
                        prev = v;
                    }
                }
            }
            for (c, p, q) in cycles {
                let mut c = c;
                c.dedup();
                let c: Vec<usize> = c.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
                if c.len() >= 2 {
                    for i in 0..c.len() {
                        x.add((c[i], c[(i + 1) % c.len()]), &frac(p, q));
                    }
                }
            }
            (n, x)
        })
    })
}

/// First violated packing condition for `x` at cap `k`, if any.
pub fn packing_violation(n: usize, x: &ArcVector, k: &regroute::Rational) -> Option<String> {
    use num_traits::Zero;
    use regroute::graph::{connectivity, pack_arborescences};
    use regroute::num::min_rat;
    let fam = match pack_arborescences(x, 0, k) {
        Ok(f) => f,
        Err(e) => return Some(e.to_string()),
    };
    let total = fam.trees.iter().fold(regroute::Rational::zero(), |acc, (_, g)| acc + g);
    if &total != k {
        return Some(format!("weights sum to {total}, not {k}"));
    }
    let mut usage = ArcVector::new();
    for (t, g) in &fam.trees {
        if !t.is_arborescence() {
            return Some(format!("{:?} is not an arborescence", t.arcs));
        }
        for &a in &t.arcs {
            usage.add(a, g);
        }
    }
    if let Some((a, _)) = usage.iter().find(|(a, u)| **u > x.get(**a)) {
        return Some(format!("arc {a:?} is overused"));
    }
    for v in 1..n {
        let lambda = connectivity(x, 0, v).unwrap();
        if fam.coverage(v) != min_rat(k.clone(), lambda) {
            return Some(format!("node {v} is covered {} times", fam.coverage(v)));
        }
    }
    None
}
