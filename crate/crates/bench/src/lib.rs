//! Shared inputs for the benchmarks in `benches/`.

use regroute::model::generators::euclidean;
use regroute::num::frac;
use regroute::{Instance, Rational};

/// Random instances with `n` clients and a bound of `q/4` of the farthest
/// distance.
pub fn suite(n: usize, count: u64, q: i64) -> Vec<(Instance, Rational)> {
    (0..count)
        .map(|s| {
            let inst = euclidean(n, 1000 + s, 10.0).expect("valid generator input");
            let b = inst.max_dist() * frac(q, 4);
            (inst, b)
        })
        .collect()
}
