use num_traits::Zero;

use crate::error::{invariant, Result};
use crate::model::{Instance, RootedPath};
use crate::num::Rational;

/// Cuts one path into maximal consecutive segments of regret at most
/// `bound`, each re-rooted at the root. Regret out of the root is zero, so a
/// segment keeps exactly the regret of its arcs.
pub fn split_path(inst: &Instance, path: &RootedPath, bound: &Rational) -> Vec<RootedPath> {
    let r = inst.root();
    let nodes = &path.nodes()[1..];
    if nodes.is_empty() {
        return vec![path.clone()];
    }
    let mut out = Vec::new();
    let mut seg = vec![r, nodes[0]];
    let mut reg = Rational::zero();
    for w in nodes.windows(2) {
        let step = inst.regret(w[0], w[1]);
        if &(&reg + &step) > bound {
            out.push(RootedPath::from_vec(std::mem::replace(&mut seg, vec![r, w[1]])));
            reg = Rational::zero();
        } else {
            seg.push(w[1]);
            reg += step;
        }
    }
    out.push(RootedPath::from_vec(seg));
    out
}

/// Splits every weighted path at `bound`. The weighted number of output
/// paths is at most the input weight plus total weighted regret over
/// `bound`; a zero bound admits this only for regret-free input.
pub fn split_by_regret(
    inst: &Instance,
    paths: &[(RootedPath, Rational)],
    bound: &Rational,
) -> Result<Vec<(RootedPath, Rational)>> {
    let mut out = Vec::new();
    for (p, w) in paths {
        let segs = split_path(inst, p, bound);
        let count = Rational::from_integer(segs.len().into());
        let reg = p.regret(inst);
        let ok = if bound.is_zero() { !reg.is_zero() || segs.len() == 1 } else { count <= &reg / bound + Rational::from_integer(1.into()) };
        if !ok {
            return invariant(format!("split produced {} segments for regret {reg}", segs.len()));
        }
        if let Some(s) = segs.iter().find(|s| &s.regret(inst) > bound) {
            return invariant(format!("segment {:?} exceeds the regret bound", s.nodes()));
        }
        out.extend(segs.into_iter().map(|s| (s, w.clone())));
    }
    Ok(out)
}
