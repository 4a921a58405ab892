//! Minimum-cost spanning arborescence (Chu-Liu/Edmonds).

use crate::num::Rational;

/// Arcs `(tail, head, cost)` over nodes `0..n`. Returns indices of a
/// cheapest arborescence rooted at `root` spanning all nodes, or `None` when
/// some node is unreachable. Ties go to the lower arc index.
pub fn min_arborescence(n: usize, root: usize, arcs: &[(usize, usize, Rational)]) -> Option<Vec<usize>> {
    let work: Vec<(usize, usize, Rational, usize)> =
        arcs.iter().enumerate().filter(|(_, a)| a.0 != a.1 && a.1 != root).map(|(i, a)| (a.0, a.1, a.2.clone(), i)).collect();
    solve(n, root, &work)
}

fn solve(n: usize, root: usize, arcs: &[(usize, usize, Rational, usize)]) -> Option<Vec<usize>> {
    let mut best: Vec<Option<usize>> = vec![None; n];
    for (k, a) in arcs.iter().enumerate() {
        if a.1 == root || a.0 == a.1 {
            continue;
        }
        match best[a.1] {
            Some(b) if arcs[b].2 <= a.2 => {}
            _ => best[a.1] = Some(k),
        }
    }
    if (0..n).any(|v| v != root && best[v].is_none()) {
        return None;
    }
    // find a cycle among the chosen in-arcs
    let mut color = vec![0usize; n];
    let mut cycle: Option<Vec<usize>> = None;
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut v = start;
        while v != root && color[v] == 0 {
            color[v] = start + 1;
            path.push(v);
            v = arcs[best[v].unwrap()].0;
        }
        if v != root && color[v] == start + 1 {
            let pos = path.iter().position(|&x| x == v).unwrap();
            cycle = Some(path[pos..].to_vec());
            break;
        }
        for &p in &path {
            color[p] = usize::MAX;
        }
    }
    let Some(cycle) = cycle else {
        return Some((0..n).filter(|&v| v != root).map(|v| arcs[best[v].unwrap()].3).collect());
    };
    let mut in_cycle = vec![false; n];
    for &v in &cycle {
        in_cycle[v] = true;
    }
    // contract: cycle becomes node `c`, others renumbered
    let mut id = vec![0usize; n];
    let mut next = 0;
    for v in 0..n {
        if !in_cycle[v] {
            id[v] = next;
            next += 1;
        }
    }
    let c = next;
    for &v in &cycle {
        id[v] = c;
    }
    let mut sub = Vec::new();
    let mut origin = Vec::new();
    for (k, a) in arcs.iter().enumerate() {
        let (u, v) = (a.0, a.1);
        if in_cycle[u] && in_cycle[v] {
            continue;
        }
        let w = if in_cycle[v] { &a.2 - &arcs[best[v].unwrap()].2 } else { a.2.clone() };
        sub.push((id[u], id[v], w, sub.len()));
        origin.push(k);
    }
    let chosen = solve(c + 1, id[root], &sub)?;
    let mut result = Vec::new();
    let mut entered = None;
    for s in chosen {
        let k = origin[s];
        result.push(arcs[k].3);
        if in_cycle[arcs[k].1] {
            entered = Some(arcs[k].1);
        }
    }
    let entered = entered?;
    for &v in &cycle {
        if v != entered {
            result.push(arcs[best[v].unwrap()].3);
        }
    }
    Some(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    fn brute(n: usize, root: usize, arcs: &[(usize, usize, Rational)]) -> Option<Rational> {
        // choose one in-arc per non-root node, keep acyclic choices
        let heads: Vec<usize> = (0..n).filter(|&v| v != root).collect();
        let options: Vec<Vec<usize>> = heads.iter().map(|&v| (0..arcs.len()).filter(|&k| arcs[k].1 == v && arcs[k].0 != v).collect()).collect();
        let mut best: Option<Rational> = None;
        let mut idx = vec![0usize; heads.len()];
        if options.iter().any(|o| o.is_empty()) {
            return None;
        }
        loop {
            let mut parent = vec![usize::MAX; n];
            let mut cost = int(0);
            for (i, &v) in heads.iter().enumerate() {
                let k = options[i][idx[i]];
                parent[v] = arcs[k].0;
                cost += &arcs[k].2;
            }
            let ok = heads.iter().all(|&v| {
                let mut u = v;
                for _ in 0..=n {
                    if u == root {
                        return true;
                    }
                    u = parent[u];
                }
                false
            });
            if ok && best.as_ref().is_none_or(|b| cost < *b) {
                best = Some(cost);
            }
            let mut i = 0;
            loop {
                if i == heads.len() {
                    return best;
                }
                idx[i] += 1;
                if idx[i] < options[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(2..6);
            let mut arcs = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.gen_bool(0.6) {
                        arcs.push((u, v, int(rng.gen_range(0..10))));
                    }
                }
            }
            let got = min_arborescence(n, 0, &arcs);
            let want = brute(n, 0, &arcs);
            match (got, want) {
                (None, None) => {}
                (Some(sel), Some(w)) => {
                    let cost = sel.iter().fold(int(0), |a, &k| a + &arcs[k].2);
                    assert_eq!(cost, w);
                    assert_eq!(sel.len(), n - 1);
                }
                (g, w) => panic!("mismatch {g:?} {w:?}"),
            }
        }
    }
}
