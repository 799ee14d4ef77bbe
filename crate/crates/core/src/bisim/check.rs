use std::collections::HashSet;

use serde::Serialize;

use crate::cubes::{CubeId, Hda, Labeling, Morphism, MorphismDefect, Side};

/// First way a relation fails to witness bisimilarity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RelationDefect {
    MissingInitial,
    Dimension { x: String, y: String },
    Label { x: String, y: String },
    FaceNotClosed { x: String, y: String, side: Side, k: usize },
    Zig { x: String, y: String, k: usize, x2: String },
    Zag { x: String, y: String, k: usize, y2: String },
}

/// Checks a candidate relation directly against the definition: initial
/// pair, equal dimensions (and labels), face closure, and both zig-zag
/// conditions on pairs of reachable cubes.
pub fn check_relation(
    x: &Hda,
    y: &Hda,
    pairs: &[(CubeId, CubeId)],
    labels: Option<(&Labeling, &Labeling)>,
) -> Result<(), RelationDefect> {
    let (sx, sy) = (x.space(), y.space());
    let set: HashSet<(CubeId, CubeId)> = pairs.iter().copied().collect();
    if !set.contains(&(x.initial(), y.initial())) {
        return Err(RelationDefect::MissingInitial);
    }
    let (rx, ry) = (x.reachable(), y.reachable());
    let names = |a: CubeId, b: CubeId| (sx.name(a).to_string(), sy.name(b).to_string());
    for &(a, b) in pairs {
        let (xa, yb) = names(a, b);
        if sx.dim(a) != sy.dim(b) {
            return Err(RelationDefect::Dimension { x: xa, y: yb });
        }
        if let Some((lx, ly)) = labels {
            if lx.label(a) != ly.label(b) {
                return Err(RelationDefect::Label { x: xa, y: yb });
            }
        }
        for side in Side::BOTH {
            for k in 1..=sx.dim(a) {
                if !set.contains(&(sx.face(a, side, k).unwrap(), sy.face(b, side, k).unwrap())) {
                    return Err(RelationDefect::FaceNotClosed { x: xa, y: yb, side, k });
                }
            }
        }
        if !(rx.contains(a) && ry.contains(b)) {
            continue;
        }
        for a2 in sx.cubes_of_dim(sx.dim(a) + 1) {
            for k in 1..=sx.dim(a2) {
                if sx.face(a2, Side::Lower, k) != Some(a) {
                    continue;
                }
                let answered = sy
                    .cubes_of_dim(sy.dim(b) + 1)
                    .any(|b2| sy.face(b2, Side::Lower, k) == Some(b) && set.contains(&(a2, b2)));
                if !answered {
                    return Err(RelationDefect::Zig {
                        x: xa,
                        y: yb,
                        k,
                        x2: sx.name(a2).to_string(),
                    });
                }
            }
        }
        for b2 in sy.cubes_of_dim(sy.dim(b) + 1) {
            for k in 1..=sy.dim(b2) {
                if sy.face(b2, Side::Lower, k) != Some(b) {
                    continue;
                }
                let answered = sx
                    .cubes_of_dim(sx.dim(a) + 1)
                    .any(|a2| sx.face(a2, Side::Lower, k) == Some(a) && set.contains(&(a2, b2)));
                if !answered {
                    return Err(RelationDefect::Zag {
                        x: xa,
                        y: yb,
                        k,
                        y2: sy.name(b2).to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// A reachable `x1` whose image can start event `k` into `y2`, with no
/// matching start out of `x1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpenMapCounterexample {
    pub x1: String,
    pub y2: String,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpenMapReport {
    pub open: bool,
    /// Set when the map is not a pointed morphism to begin with.
    pub defect: Option<MorphismDefect>,
    pub counterexample: Option<OpenMapCounterexample>,
}

/// One-step openness: for every reachable `x1` and every `y2` with
/// `f(x1) = δ_k^0 y2`, some `x2` has `x1 = δ_k^0 x2` and `f(x2) = y2`.
pub fn open_map_check(f: &Morphism<'_>) -> OpenMapReport {
    if let Some(defect) = f.defect() {
        return OpenMapReport {
            open: false,
            defect: Some(defect),
            counterexample: None,
        };
    }
    let (s, t) = (f.source.space(), f.target.space());
    for x1 in f.source.reachable().iter() {
        for &(k, y2) in t.cofaces(f.apply(x1), Side::Lower) {
            let lifted = s
                .cofaces(x1, Side::Lower)
                .iter()
                .any(|&(kx, x2)| kx == k && f.apply(x2) == y2);
            if !lifted {
                return OpenMapReport {
                    open: false,
                    defect: None,
                    counterexample: Some(OpenMapCounterexample {
                        x1: s.name(x1).to_string(),
                        y2: t.name(y2).to_string(),
                        k,
                    }),
                };
            }
        }
    }
    OpenMapReport {
        open: true,
        defect: None,
        counterexample: None,
    }
}
