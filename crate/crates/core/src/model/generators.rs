//! Fixture and random instance families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::instance::{metric_closure, Arc, Instance};
use crate::error::{Error, Result};
use crate::num::{frac, int, Rational};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn int_matrix(m: &[&[i64]]) -> Vec<Vec<Rational>> {
    m.iter().map(|row| row.iter().map(|&x| int(x)).collect()).collect()
}

/// Three collinear nodes `r - a - b` with unit spacing.
pub fn line3() -> Instance {
    let cost = int_matrix(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]);
    Instance::new("LINE3", labels(&["r", "a", "b"]), 0, None, cost, vec![int(0), int(1), int(2)])
        .expect("fixture is a metric")
}

/// Root at unit distance from three leaves that are pairwise two apart.
pub fn star3() -> Instance {
    let cost = int_matrix(&[&[0, 1, 1, 1], &[1, 0, 2, 2], &[1, 2, 0, 2], &[1, 2, 2, 0]]);
    Instance::new("STAR3", labels(&["r", "u", "v", "w"]), 0, None, cost, vec![int(0), int(1), int(1), int(1)])
        .expect("fixture is a metric")
}

/// Ladder graph `r, u_1..u_k, v_1..v_k, t` with unit edges, closed under
/// shortest paths. Node order is `r, u_1..u_k, v_1..v_k, t`.
pub fn gk(k: usize) -> Result<Instance> {
    if k < 2 {
        return Err(Error::InvalidArgument("ladder family needs k >= 2".into()));
    }
    let n = 2 * k + 2;
    let (r, t) = (0, n - 1);
    let u = |i: usize| i;
    let v = |i: usize| k + i;
    let mut edges = vec![(r, u(1)), (r, v(1)), (u(1), v(1)), (u(k), t), (v(k), t), (u(k), v(k))];
    for i in 1..k {
        edges.push((u(i), u(i + 1)));
        edges.push((v(i), v(i + 1)));
    }
    let big = int(n as i64 + 1);
    let mut cost = vec![vec![big; n]; n];
    for (i, row) in cost.iter_mut().enumerate() {
        row[i] = int(0);
    }
    for (a, b) in edges {
        cost[a][b] = int(1);
        cost[b][a] = int(1);
    }
    metric_closure(&mut cost);
    let mut names = vec!["r".to_string()];
    names.extend((1..=k).map(|i| format!("u{i}")));
    names.extend((1..=k).map(|i| format!("v{i}")));
    names.push("t".into());
    let mut reward = vec![int(1); n];
    reward[r] = int(0);
    Instance::new(format!("GK{k}"), names, r, Some(t), cost, reward)
}

/// Instance where the single-flow orienteering relaxation has value
/// `b/2 + 1` but every feasible path collects reward at most 2: `c(r,r')=1`,
/// `c(r',v_i)=b-1`, `c(r,v_i)=b`, `c(v_i,v_j)=1`, budget `b`.
pub fn ro_gap(b: usize) -> Result<Instance> {
    if b < 2 {
        return Err(Error::InvalidArgument("gap family needs B >= 2".into()));
    }
    let n = b + 2;
    let bb = b as i64;
    let mut cost = vec![vec![int(0); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            cost[i][j] = match (i.min(j), i.max(j)) {
                (0, 1) => int(1),
                (0, _) => int(bb),
                (1, _) => int(bb - 1),
                _ => int(1),
            };
        }
    }
    let mut names = vec!["r".to_string(), "r'".to_string()];
    names.extend((1..=b).map(|i| format!("v{i}")));
    let mut reward = vec![int(1); n];
    reward[0] = int(0);
    Instance::new(format!("ROGAP{b}"), names, 0, None, cost, reward)
}

/// Half-unit flow on `r, r', v_1..v_b` plus half-unit on `r, r'`: the
/// fractional point of the single-flow relaxation on [`ro_gap`].
pub fn ro_gap_point(b: usize) -> Vec<(Arc, Rational)> {
    let mut arcs = vec![((0, 1), int(1))];
    arcs.push(((1, 2), frac(1, 2)));
    arcs.extend((2..b + 1).map(|i| ((i, i + 1), frac(1, 2))));
    arcs
}

/// Fractional degree-feasible solution on [`gk`] whose regret cost is `k`.
pub fn gk_point(k: usize) -> Vec<(Arc, Rational)> {
    let n = 2 * k + 2;
    let (r, t) = (0, n - 1);
    let u = |i: usize| i;
    let v = |i: usize| k + i;
    let mut arcs = vec![
        ((r, u(1)), frac(1, 2)),
        ((r, v(1)), frac(1, 2)),
        ((u(k), t), frac(1, 2)),
        ((v(k), t), frac(1, 2)),
        ((u(1), v(1)), frac(1, 4)),
        ((v(1), u(1)), frac(1, 4)),
        ((u(k), v(k)), frac(1, 4)),
        ((v(k), u(k)), frac(1, 4)),
    ];
    for i in 1..k {
        arcs.push(((u(i), u(i + 1)), frac(3, 4)));
        arcs.push(((v(i), v(i + 1)), frac(3, 4)));
        arcs.push(((u(i + 1), u(i)), frac(1, 4)));
        arcs.push(((v(i + 1), v(i)), frac(1, 4)));
    }
    arcs
}

/// Root plus `n` clients uniform in `[0, side)^2` on a 1e-6 grid, integer
/// rewards in `1..=10`. Distances are rounded to the grid and closed under
/// shortest paths so that the stored metric is exact.
pub fn euclidean(n: usize, seed: u64, side: f64) -> Result<Instance> {
    if n < 1 {
        return Err(Error::InvalidArgument("need at least one client".into()));
    }
    if !(side.is_finite() && side > 0.0) {
        return Err(Error::InvalidArgument("box side must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(f64, f64)> = (0..=n)
        .map(|_| {
            let x = (rng.gen_range(0.0..side) * 1e6).round() / 1e6;
            let y = (rng.gen_range(0.0..side) * 1e6).round() / 1e6;
            (x, y)
        })
        .collect();
    let mut reward: Vec<Rational> = (0..=n).map(|_| int(rng.gen_range(1..=10))).collect();
    reward[0] = int(0);
    let mut names = vec!["r".to_string()];
    names.extend((1..=n).map(|i| format!("c{i}")));
    Instance::new(format!("EUC{n}-{seed}"), names, 0, None, grid_metric(&points), reward)
}

/// Euclidean distances rounded to micro-units and closed under shortest paths.
pub fn grid_metric(points: &[(f64, f64)]) -> Vec<Vec<Rational>> {
    let n = points.len();
    let mut d = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (dx, dy) = (points[i].0 - points[j].0, points[i].1 - points[j].1);
            d[i][j] = ((dx * dx + dy * dy).sqrt() * 1e6).round() as i64;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    d.iter().map(|row| row.iter().map(|&x| frac(x, 1_000_000)).collect()).collect()
}

/// Named fixture lookup used by the command line.
pub fn fixture(name: &str) -> Result<Instance> {
    match name.to_ascii_uppercase().as_str() {
        "LINE3" => Ok(line3()),
        "STAR3" => Ok(star3()),
        other => {
            if let Some(k) = other.strip_prefix("GK").and_then(|k| k.parse().ok()) {
                return gk(k);
            }
            if let Some(b) = other.strip_prefix("ROGAP").and_then(|b| b.parse().ok()) {
                return ro_gap(b);
            }
            Err(Error::InvalidArgument(format!("unknown fixture {name}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_distances() {
        let g = gk(4).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.dist(g.end().unwrap()), &int(5));
        let g2 = gk(2).unwrap();
        let (u1, v2) = (g2.node("u1").unwrap(), g2.node("v2").unwrap());
        assert_eq!(g2.dist(u1), &int(1));
        assert_eq!(g2.dist(v2), &int(2));
        assert_eq!(g2.cost(u1, v2), &int(2));
        assert!(gk(1).is_err());
    }

    #[test]
    fn euclidean_is_deterministic() {
        let a = euclidean(5, 7, 100.0).unwrap();
        let b = euclidean(5, 7, 100.0).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        assert_ne!(a.matrix(), euclidean(5, 8, 100.0).unwrap().matrix());
        assert!(euclidean(0, 1, 1.0).is_err());
    }

    #[test]
    fn gap_instance_shape() {
        let g = ro_gap(10).unwrap();
        assert_eq!(g.n(), 12);
        assert_eq!(g.cost(0, 1), &int(1));
        assert_eq!(g.cost(1, 5), &int(9));
        assert_eq!(g.cost(0, 5), &int(10));
    }
}
