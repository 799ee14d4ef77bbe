//! Cube paths, the step relation, adjacency and homotopy, fan-shaping and
//! path objects.

mod fan;
pub(crate) mod homotopy;
mod object;

pub use fan::{fan_bound_doubled, fan_shape, is_fan_shaped, t_measure, FanShaping, Rewrite, RewriteKind};
pub use homotopy::{
    adjacency, adjacent_paths, are_homotopic, homotopy_class, Adjacency, HomotopyVerdict, DEFAULT_CAP,
};
pub use object::{is_path_object, is_representation, PathObjectRep, PathObjectRejection};

use serde::Serialize;

use crate::cubes::{CubeId, Hda, PrecubicalSet};
use crate::{HdaError, Result};

/// How two consecutive cubes of a path are related.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepClause {
    /// `x_j = δ_k^0 x_{j+1}`: a new event starts.
    LowerFaceOfNext,
    /// `x_{j+1} = δ_k^1 x_j`: a running event ends.
    UpperFaceOfPrevious,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Step {
    pub clause: StepClause,
    pub k: usize,
}

/// Step between `x` and `y`, preferring the lower-face clause and the least `k`.
pub fn step_between(space: &PrecubicalSet, x: CubeId, y: CubeId) -> Option<Step> {
    if let Some(k) = space.faces(y, crate::cubes::Side::Lower).iter().position(|&f| f == x) {
        return Some(Step {
            clause: StepClause::LowerFaceOfNext,
            k: k + 1,
        });
    }
    space
        .faces(x, crate::cubes::Side::Upper)
        .iter()
        .position(|&f| f == y)
        .map(|k| Step {
            clause: StepClause::UpperFaceOfPrevious,
            k: k + 1,
        })
}

/// Per-step diagnosis; `position` is the 1-based index of the earlier cube.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepDiagnosis {
    pub position: usize,
    pub from: String,
    pub to: String,
    pub step: Option<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathCheck {
    pub valid: bool,
    pub steps: Vec<StepDiagnosis>,
}

/// Checks every consecutive pair of `seq` against the step relation.
pub fn check_steps(space: &PrecubicalSet, seq: &[CubeId]) -> PathCheck {
    let steps: Vec<StepDiagnosis> = seq
        .windows(2)
        .enumerate()
        .map(|(i, w)| StepDiagnosis {
            position: i + 1,
            from: space.name(w[0]).to_string(),
            to: space.name(w[1]).to_string(),
            step: step_between(space, w[0], w[1]),
        })
        .collect();
    PathCheck {
        valid: !seq.is_empty() && steps.iter().all(|s| s.step.is_some()),
        steps,
    }
}

/// Resolves `ids` and checks them against the step relation.
pub fn is_cube_path<S: AsRef<str>>(space: &PrecubicalSet, ids: &[S]) -> Result<PathCheck> {
    let seq = space.resolve(ids)?;
    Ok(check_steps(space, &seq))
}

/// A non-empty sequence of cubes in which every consecutive pair is a step.
///
/// Paths are plain values: the space they live in is passed alongside.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubePath(Vec<CubeId>);

impl CubePath {
    pub fn new(space: &PrecubicalSet, seq: Vec<CubeId>) -> Result<Self> {
        if seq.is_empty() {
            return Err(HdaError::EmptyPath);
        }
        let check = check_steps(space, &seq);
        if let Some(bad) = check.steps.into_iter().find(|s| s.step.is_none()) {
            return Err(HdaError::NotAPath {
                position: bad.position,
                from: bad.from,
                to: bad.to,
            });
        }
        Ok(CubePath(seq))
    }

    pub fn from_names<S: AsRef<str>>(space: &PrecubicalSet, ids: &[S]) -> Result<Self> {
        Self::new(space, space.resolve(ids)?)
    }

    /// Parses a comma-separated list of ids, e.g. `i,a,x`.
    pub fn parse(space: &PrecubicalSet, list: &str) -> Result<Self> {
        let ids: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        Self::from_names(space, &ids)
    }

    pub(crate) fn from_vec_unchecked(seq: Vec<CubeId>) -> Self {
        debug_assert!(!seq.is_empty());
        CubePath(seq)
    }

    pub fn single(x: CubeId) -> Self {
        CubePath(vec![x])
    }

    pub fn cubes(&self) -> &[CubeId] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<CubeId> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> CubeId {
        self.0[0]
    }

    pub fn last(&self) -> CubeId {
        *self.0.last().expect("paths are non-empty")
    }

    pub fn names<'a>(&self, space: &'a PrecubicalSet) -> Vec<&'a str> {
        self.0.iter().map(|&c| space.name(c)).collect()
    }

    pub fn render(&self, space: &PrecubicalSet) -> String {
        format!("({})", self.names(space).join(","))
    }

    pub fn is_pointed(&self, hda: &Hda) -> bool {
        self.first() == hda.initial()
    }

    /// `self * other`, defined when the last cube of `self` and the first of
    /// `other` form a step.
    pub fn concat(&self, other: &CubePath, space: &PrecubicalSet) -> Result<CubePath> {
        if step_between(space, self.last(), other.first()).is_none() {
            return Err(HdaError::IncompatibleJunction {
                left: space.name(self.last()).to_string(),
                right: space.name(other.first()).to_string(),
            });
        }
        let mut seq = self.0.clone();
        seq.extend_from_slice(&other.0);
        Ok(CubePath(seq))
    }

    /// Appends one cube, which must form a step with the current end.
    pub fn extended(&self, next: CubeId, space: &PrecubicalSet) -> Result<CubePath> {
        self.concat(&CubePath::single(next), space)
    }

    /// `self ⊑ other`: equal, or `other = self * σ` for some path `σ`.
    pub fn is_prefix_of(&self, other: &CubePath) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn prefix(&self, len: usize) -> CubePath {
        CubePath(self.0[..len].to_vec())
    }
}

/// All pointed cube paths with at most `max_len` cubes, ordered by length
/// and then lexicographically by id sequence.
pub fn enumerate_pointed_paths(hda: &Hda, max_len: usize) -> Vec<CubePath> {
    let space = hda.space();
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    let mut level = vec![vec![hda.initial()]];
    for len in 1..=max_len {
        let mut keyed: Vec<(Vec<&str>, Vec<CubeId>)> =
            level.into_iter().map(|p| (p.iter().map(|&c| space.name(c)).collect(), p)).collect();
        keyed.sort();
        level = keyed.into_iter().map(|(_, p)| p).collect();
        out.extend(level.iter().cloned().map(CubePath));
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for p in &level {
            let end = *p.last().expect("non-empty");
            for y in hda.successors(end) {
                let mut q = p.clone();
                q.push(y);
                next.push(q);
            }
        }
        next.dedup();
        level = next;
    }
    out
}

/// Compares two paths by their id sequences.
pub fn cmp_by_ids(space: &PrecubicalSet, a: &[CubeId], b: &[CubeId]) -> std::cmp::Ordering {
    a.iter().map(|&c| space.name(c)).cmp(b.iter().map(|&c| space.name(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::{CubeSpec, PrecubicalSet};

    fn two_cycle() -> Hda {
        let set = PrecubicalSet::from_specs(vec![
            CubeSpec::vertex("x"),
            CubeSpec::vertex("y"),
            CubeSpec::new("e1", 1, &["x"], &["y"]),
            CubeSpec::new("e2", 1, &["y"], &["x"]),
        ])
        .unwrap();
        Hda::new(set, "x").unwrap()
    }

    #[test]
    fn enumeration_of_a_cycle() {
        let h = two_cycle();
        let paths: Vec<String> = enumerate_pointed_paths(&h, 3).iter().map(|p| p.render(h.space())).collect();
        assert_eq!(paths, ["(x)", "(x,e1)", "(x,e1,y)"]);
        assert_eq!(enumerate_pointed_paths(&h, 1).len(), 1);
        assert!(enumerate_pointed_paths(&h, 0).is_empty());
    }

    #[test]
    fn step_clauses() {
        let h = two_cycle();
        let s = h.space();
        let (x, e1, y) = (s.lookup("x").unwrap(), s.lookup("e1").unwrap(), s.lookup("y").unwrap());
        assert_eq!(
            step_between(s, x, e1),
            Some(Step {
                clause: StepClause::LowerFaceOfNext,
                k: 1
            })
        );
        assert_eq!(
            step_between(s, e1, y),
            Some(Step {
                clause: StepClause::UpperFaceOfPrevious,
                k: 1
            })
        );
        assert_eq!(step_between(s, y, e1), None);
        assert_eq!(step_between(s, x, x), None);
    }

    #[test]
    fn concat_and_prefix() {
        let h = two_cycle();
        let s = h.space();
        let a = CubePath::parse(s, "x,e1").unwrap();
        let b = CubePath::parse(s, "y,e2").unwrap();
        let ab = a.concat(&b, s).unwrap();
        assert_eq!(ab.render(s), "(x,e1,y,e2)");
        assert!(a.is_prefix_of(&ab));
        assert!(ab.is_prefix_of(&ab));
        assert!(!b.is_prefix_of(&ab));
        assert!(matches!(a.concat(&a, s), Err(HdaError::IncompatibleJunction { .. })));
        assert!(matches!(CubePath::parse(s, "x,y"), Err(HdaError::NotAPath { position: 1, .. })));
        assert!(matches!(CubePath::parse(s, "x,q"), Err(HdaError::UnknownCube(_))));
        assert!(matches!(CubePath::parse(s, ""), Err(HdaError::EmptyPath)));
    }
}
