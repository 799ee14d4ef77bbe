//! Deciding bisimilarity of finite HDA.
//!
//! Two HDA are bisimilar iff some face-closed relation `R ⊆ X × Y` between
//! equal-dimension cubes contains the pair of initial vertices and has the
//! zig-zag property on reachable pairs: every start `x1 = δ_k^0 x2` on one
//! side is answered by a start `y1 = δ_k^0 y2` with `(x2, y2) ∈ R`, and
//! vice versa. The greatest such relation is computed by deleting
//! violating pairs from the full universe until nothing changes.

mod check;
mod oracle;

pub use check::{check_relation, open_map_check, OpenMapCounterexample, OpenMapReport, RelationDefect};
pub use oracle::{hp_oracle, OracleOutcome};

use std::collections::VecDeque;

use serde::{Serialize, Serializer};

use crate::cubes::{CubeId, Hda, LabeledHda, Labeling, Side};
use crate::{HdaError, Result};

/// Why the engine deleted a pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Deletion {
    /// Never in the universe: the label tuples differ.
    Labels,
    /// `(δ_k^ν x, δ_k^ν y)` was already gone.
    Face { side: Side, k: usize },
    /// `x` can start event `k` into `x2`, `y` cannot follow.
    Zig { k: usize, x2: String },
    /// `y` can start event `k` into `y2`, `x` cannot follow.
    Zag { k: usize, y2: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub struct FixpointStats {
    /// `|X × Y|`.
    pub product: usize,
    /// Pairs of equal dimension (and equal labels, when labeled).
    pub universe: usize,
    /// Deleted pairs; each pair is deleted at most once.
    pub deletions: usize,
    /// Individual pair re-examinations.
    pub checks: usize,
}

/// Greatest face-closed zig-zag relation between two HDA.
#[derive(Debug, Clone)]
pub struct Fixpoint {
    pub related: bool,
    /// Surviving pairs in (dimension, left id, right id) order.
    pub pairs: Vec<(CubeId, CubeId)>,
    /// Reason the initial pair was deleted, when it was.
    pub initial_deletion: Option<Deletion>,
    pub stats: FixpointStats,
}

struct Engine<'a> {
    x: &'a Hda,
    y: &'a Hda,
    ny: usize,
    alive: Vec<bool>,
    rx: Vec<bool>,
    ry: Vec<bool>,
}

impl Engine<'_> {
    fn idx(&self, a: CubeId, b: CubeId) -> usize {
        a.index() * self.ny + b.index()
    }

    fn is_alive(&self, a: CubeId, b: CubeId) -> bool {
        self.alive[self.idx(a, b)]
    }

    fn violation(&self, a: CubeId, b: CubeId) -> Option<Deletion> {
        let (sx, sy) = (self.x.space(), self.y.space());
        for side in Side::BOTH {
            for (k, (&fa, &fb)) in sx.faces(a, side).iter().zip(sy.faces(b, side)).enumerate() {
                if !self.is_alive(fa, fb) {
                    return Some(Deletion::Face { side, k: k + 1 });
                }
            }
        }
        if !(self.rx[a.index()] && self.ry[b.index()]) {
            return None;
        }
        let (ca, cb) = (sx.cofaces(a, Side::Lower), sy.cofaces(b, Side::Lower));
        for &(k, a2) in ca {
            if !cb.iter().any(|&(kb, b2)| kb == k && self.is_alive(a2, b2)) {
                return Some(Deletion::Zig {
                    k,
                    x2: sx.name(a2).to_string(),
                });
            }
        }
        for &(k, b2) in cb {
            if !ca.iter().any(|&(ka, a2)| ka == k && self.is_alive(a2, b2)) {
                return Some(Deletion::Zag {
                    k,
                    y2: sy.name(b2).to_string(),
                });
            }
        }
        None
    }
}

/// Runs the worklist fixpoint. With labelings, only pairs carrying equal
/// label tuples enter the universe.
fn fixpoint(x: &Hda, y: &Hda, labels: Option<(&Labeling, &Labeling)>) -> Fixpoint {
    let (sx, sy) = (x.space(), y.space());
    let (nx, ny) = (sx.len(), sy.len());
    let mut engine = Engine {
        x,
        y,
        ny,
        alive: vec![false; nx * ny],
        rx: x.reachable().mask().to_vec(),
        ry: y.reachable().mask().to_vec(),
    };
    let mut stats = FixpointStats {
        product: nx * ny,
        ..Default::default()
    };
    let same_label = |a: CubeId, b: CubeId| labels.map_or(true, |(lx, ly)| lx.label(a) == ly.label(b));
    for a in sx.cubes() {
        for b in sy.cubes_of_dim(sx.dim(a)) {
            if same_label(a, b) {
                let i = engine.idx(a, b);
                engine.alive[i] = true;
                stats.universe += 1;
            }
        }
    }

    let mut initial_deletion = if engine.is_alive(x.initial(), y.initial()) {
        None
    } else {
        Some(Deletion::Labels)
    };
    let mut queue = VecDeque::new();
    let mut delete = |engine: &mut Engine, a: CubeId, b: CubeId, why: Deletion, queue: &mut VecDeque<_>| {
        let i = engine.idx(a, b);
        engine.alive[i] = false;
        if (a, b) == (x.initial(), y.initial()) {
            initial_deletion = Some(why);
        }
        queue.push_back((a, b));
    };

    // sweep in (dimension, id, id) order
    for a in sx.cubes() {
        for b in sy.cubes_of_dim(sx.dim(a)) {
            if !engine.is_alive(a, b) {
                continue;
            }
            stats.checks += 1;
            if let Some(why) = engine.violation(a, b) {
                delete(&mut engine, a, b, why, &mut queue);
            }
        }
    }

    while let Some((a, b)) = queue.pop_front() {
        stats.deletions += 1;
        // cofaces sharing (k, ν) lose a face
        for side in Side::BOTH {
            for &(k, ca) in sx.cofaces(a, side) {
                for &(kb, cb) in sy.cofaces(b, side) {
                    if kb == k && engine.is_alive(ca, cb) {
                        delete(&mut engine, ca, cb, Deletion::Face { side, k }, &mut queue);
                    }
                }
            }
        }
        // pairs that may have used (a, b) to answer a start
        for k in 1..=sx.dim(a) {
            let (fa, fb) = (sx.face_unchecked(a, Side::Lower, k), sy.face_unchecked(b, Side::Lower, k));
            if engine.is_alive(fa, fb) {
                stats.checks += 1;
                if let Some(why) = engine.violation(fa, fb) {
                    delete(&mut engine, fa, fb, why, &mut queue);
                }
            }
        }
    }

    let mut pairs = Vec::new();
    for a in sx.cubes() {
        for b in sy.cubes_of_dim(sx.dim(a)) {
            if engine.is_alive(a, b) {
                pairs.push((a, b));
            }
        }
    }
    Fixpoint {
        related: engine.is_alive(x.initial(), y.initial()),
        pairs,
        initial_deletion,
        stats,
    }
}

/// Decides bisimilarity of two unlabeled HDA.
pub fn bisimilar(x: &Hda, y: &Hda) -> Fixpoint {
    fixpoint(x, y, None)
}

/// Decides bisimilarity of labeled HDA over the same event list.
pub fn labeled_bisimilar(x: &LabeledHda, y: &LabeledHda) -> Result<Fixpoint> {
    if x.labeling.events != y.labeling.events {
        return Err(HdaError::MismatchedEvents);
    }
    Ok(fixpoint(&x.hda, &y.hda, Some((&x.labeling, &y.labeling))))
}

pub const UNLABELED_JUSTIFICATION: &str = "greatest face-closed zig-zag relation on cubes; it contains the initial pair \
     iff the HDA are joined by a span of open maps, which holds iff they are homotopy bisimilar, \
     iff they are history-preserving bisimilar";

pub const LABELED_JUSTIFICATION: &str = "greatest face-closed zig-zag relation on cubes with equal label tuples \
     (label equality inferred from the labeled open-map and run conditions); it contains the initial pair \
     iff the labeled HDA are history-preserving bisimilar";

/// History-preserving bisimilarity, decided by the cube-level fixpoint.
pub fn hp_bisimilar(x: &Hda, y: &Hda) -> (Fixpoint, &'static str) {
    (bisimilar(x, y), UNLABELED_JUSTIFICATION)
}

pub fn labeled_hp_bisimilar(x: &LabeledHda, y: &LabeledHda) -> Result<(Fixpoint, &'static str)> {
    Ok((labeled_bisimilar(x, y)?, LABELED_JUSTIFICATION))
}

/// `true`, `false`, or the string `"inconclusive"` in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Verdict::Holds => s.serialize_bool(true),
            Verdict::Fails => s.serialize_bool(false),
            Verdict::Inconclusive => s.serialize_str("inconclusive"),
        }
    }
}

/// Serializable report of a decision.
#[derive(Debug, Clone, Serialize)]
pub struct Decision {
    pub result: Verdict,
    pub witness: Vec<(String, String)>,
    pub justification: String,
    pub counterexample: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<FixpointStats>,
}

impl Decision {
    pub fn from_fixpoint(x: &Hda, y: &Hda, f: &Fixpoint, justification: &str) -> Self {
        Decision {
            result: f.related.into(),
            witness: if f.related {
                f.pairs
                    .iter()
                    .map(|&(a, b)| (x.space().name(a).to_string(), y.space().name(b).to_string()))
                    .collect()
            } else {
                Vec::new()
            },
            justification: justification.to_string(),
            counterexample: f.initial_deletion.as_ref().map(|d| {
                serde_json::json!({
                    "pair": [x.space().name(x.initial()), y.space().name(y.initial())],
                    "reason": d,
                })
            }),
            stats: Some(f.stats),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::{CubeSpec, PrecubicalSet};

    fn hda(specs: Vec<CubeSpec>, init: &str) -> Hda {
        Hda::new(PrecubicalSet::from_specs(specs).unwrap(), init).unwrap()
    }

    fn square(filled: bool) -> Hda {
        let mut specs = vec![
            CubeSpec::vertex("i"),
            CubeSpec::vertex("u"),
            CubeSpec::vertex("v"),
            CubeSpec::vertex("w"),
            CubeSpec::new("a", 1, &["i"], &["v"]),
            CubeSpec::new("b", 1, &["i"], &["u"]),
            CubeSpec::new("a2", 1, &["u"], &["w"]),
            CubeSpec::new("b2", 1, &["v"], &["w"]),
        ];
        if filled {
            specs.push(CubeSpec::new("ab", 2, &["b", "a"], &["b2", "a2"]));
        }
        hda(specs, "i")
    }

    fn cycle(n: usize) -> Hda {
        let mut specs: Vec<CubeSpec> = (0..n).map(|i| CubeSpec::vertex(format!("v{i}"))).collect();
        for i in 0..n {
            let (s, t) = (format!("v{i}"), format!("v{}", (i + 1) % n));
            specs.push(CubeSpec::new(format!("e{i}"), 1, &[s.as_str()], &[t.as_str()]));
        }
        hda(specs, "v0")
    }

    #[test]
    fn filled_and_hollow_squares_differ() {
        let f = bisimilar(&square(true), &square(false));
        assert!(!f.related);
        assert!(f.initial_deletion.is_some());
        assert!(f.stats.deletions <= f.stats.product);
    }

    #[test]
    fn reflexive_with_diagonal() {
        let x = square(true);
        let f = bisimilar(&x, &x);
        assert!(f.related);
        for c in x.space().cubes() {
            assert!(f.pairs.contains(&(c, c)));
        }
        assert_eq!(check_relation(&x, &x, &f.pairs, None), Ok(()));
    }

    #[test]
    fn cycles_of_different_length() {
        let f = bisimilar(&cycle(2), &cycle(3));
        assert!(f.related);
        assert_eq!(check_relation(&cycle(2), &cycle(3), &f.pairs, None), Ok(()));
    }

    #[test]
    fn verdict_serialization() {
        assert_eq!(serde_json::to_string(&Verdict::Holds).unwrap(), "true");
        assert_eq!(serde_json::to_string(&Verdict::Inconclusive).unwrap(), "\"inconclusive\"");
    }
}
