use serde::Serialize;

use super::Verdict;
use crate::cubes::{CubeId, Hda, Labeling, Side};
use crate::unfold::{unfold, Unfolding};
use crate::{HdaError, Result};

/// Result of comparing two unfoldings.
#[derive(Debug, Clone, Serialize)]
pub struct OracleOutcome {
    /// Whether the root pair survived.
    pub related: bool,
    /// `related` is exact: either it is false, or both unfoldings are
    /// complete.
    pub definite: bool,
    pub depth: usize,
    pub left_nodes: usize,
    pub right_nodes: usize,
    pub surviving_pairs: usize,
}

impl OracleOutcome {
    pub fn verdict(&self) -> Verdict {
        if self.definite {
            self.related.into()
        } else {
            Verdict::Inconclusive
        }
    }
}

/// Compares the unfoldings of `x` and `y` to `depth`.
///
/// On the trees every node is reached by a single class of runs, so the
/// one-step zig-zag relation between nodes is a relation between runs up to
/// homotopy. It is computed here by plain repeated sweeps, independently of
/// the worklist engine. Nodes cut off by the depth bound are exempt from
/// zig-zag obligations. Restricted to the truncated trees, the true relation
/// still survives every sweep (a pair of non-frontier nodes has all its
/// successors present), so a negative answer is always exact; a positive
/// one only when neither unfolding lost a node.
pub fn hp_oracle(
    x: &Hda,
    y: &Hda,
    depth: usize,
    labels: Option<(&Labeling, &Labeling)>,
    cap: usize,
) -> Result<OracleOutcome> {
    if let Some((lx, ly)) = labels {
        if lx.events != ly.events {
            return Err(HdaError::MismatchedEvents);
        }
    }
    let ux = unfold(x, depth, cap)?;
    let uy = unfold(y, depth, cap)?;
    let (tx, ty) = (ux.tree.space(), uy.tree.space());

    let compatible = |a: CubeId, b: CubeId| {
        tx.dim(a) == ty.dim(b)
            && labels.map_or(true, |(lx, ly)| lx.label(ux.project(a)) == ly.label(uy.project(b)))
    };
    let mut rel: Vec<Vec<bool>> = tx
        .cubes()
        .map(|a| ty.cubes().map(|b| compatible(a, b)).collect())
        .collect();

    loop {
        let mut changed = false;
        for a in tx.cubes() {
            for b in ty.cubes() {
                if !rel[a.index()][b.index()] {
                    continue;
                }
                if !keeps(&ux, &uy, &rel, a, b) {
                    rel[a.index()][b.index()] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let related = rel[ux.tree.initial().index()][uy.tree.initial().index()];
    Ok(OracleOutcome {
        related,
        definite: !related || (ux.is_complete() && uy.is_complete()),
        depth,
        left_nodes: tx.len(),
        right_nodes: ty.len(),
        surviving_pairs: rel.iter().flatten().filter(|&&r| r).count(),
    })
}

fn keeps(
    ux: &Unfolding,
    uy: &Unfolding,
    rel: &[Vec<bool>],
    a: CubeId,
    b: CubeId,
) -> bool {
    let holds = |rel: &[Vec<bool>], a: CubeId, b: CubeId| rel[a.index()][b.index()];
    let (tx, ty) = (ux.tree.space(), uy.tree.space());
    for side in Side::BOTH {
        for k in 1..=tx.dim(a) {
            if !holds(rel, tx.face(a, side, k).unwrap(), ty.face(b, side, k).unwrap()) {
                return false;
            }
        }
    }
    if ux.is_frontier(a) || uy.is_frontier(b) {
        return true;
    }
    let starts = |s: &crate::cubes::PrecubicalSet, c: CubeId| -> Vec<(usize, CubeId)> {
        s.cubes()
            .filter(|&c2| s.dim(c2) == s.dim(c) + 1)
            .flat_map(|c2| {
                (1..=s.dim(c2))
                    .filter(move |&k| s.face(c2, Side::Lower, k) == Some(c))
                    .map(move |k| (k, c2))
            })
            .collect()
    };
    let (sa, sb) = (starts(tx, a), starts(ty, b));
    let zig = sa.iter().all(|&(k, a2)| sb.iter().any(|&(kb, b2)| kb == k && holds(rel, a2, b2)));
    let zag = sb.iter().all(|&(k, b2)| sa.iter().any(|&(ka, a2)| ka == k && holds(rel, a2, b2)));
    zig && zag
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::{CubeSpec, PrecubicalSet};
    use crate::paths::DEFAULT_CAP;

    fn cycle(n: usize) -> Hda {
        let mut specs: Vec<CubeSpec> = (0..n).map(|i| CubeSpec::vertex(format!("v{i}"))).collect();
        for i in 0..n {
            let (s, t) = (format!("v{i}"), format!("v{}", (i + 1) % n));
            specs.push(CubeSpec::new(format!("e{i}"), 1, &[s.as_str()], &[t.as_str()]));
        }
        Hda::new(PrecubicalSet::from_specs(specs).unwrap(), "v0").unwrap()
    }

    #[test]
    fn cycles_are_inconclusive_but_positive() {
        let o = hp_oracle(&cycle(2), &cycle(3), 6, None, DEFAULT_CAP).unwrap();
        assert!(o.related);
        assert!(!o.definite);
        assert_eq!(o.verdict(), Verdict::Inconclusive);
    }
}
