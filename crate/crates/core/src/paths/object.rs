use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{step_between, CubePath};
use crate::cubes::{CubeId, PrecubicalSet, Side};

/// A precubical path object together with its representing sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathObjectRep {
    pub rep: CubePath,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum PathObjectRejection {
    RepeatedCube { cube: String },
    NotAStep { position: usize },
    /// `cube` is not an iterated face of any entry.
    Uncovered { cube: String },
    /// `cube` is reachable from some entry, but only along several index sets.
    AmbiguousFace { cube: String, entry: String },
    /// No sequence satisfies all conditions; `closest` covered the most cubes.
    NoRepresentation {
        closest: Vec<String>,
        first_failure: Box<PathObjectRejection>,
    },
    SearchLimit { explored: usize },
}

/// Sorted index sets `{k_1 < … < k_p}` along which each iterated face of `x`
/// is reached (ν arbitrary).
fn iterated_faces(space: &PrecubicalSet, x: CubeId) -> HashMap<CubeId, BTreeSet<Vec<usize>>> {
    let mut out: HashMap<CubeId, BTreeSet<Vec<usize>>> = HashMap::new();
    // innermost face map carries the largest index
    fn go(
        space: &PrecubicalSet,
        c: CubeId,
        bound: usize,
        seq: &mut Vec<usize>,
        out: &mut HashMap<CubeId, BTreeSet<Vec<usize>>>,
    ) {
        let mut sorted = seq.clone();
        sorted.reverse();
        out.entry(c).or_default().insert(sorted);
        for k in 1..bound.min(space.dim(c) + 1) {
            for side in Side::BOTH {
                let f = space.face_unchecked(c, side, k);
                seq.push(k);
                go(space, f, k, seq, out);
                seq.pop();
            }
        }
    }
    go(space, x, space.dim(x) + 1, &mut Vec::new(), &mut out);
    out
}

/// Checks the three conditions on a candidate sequence; `Ok` if it
/// represents `space` as a path object.
pub fn is_representation(space: &PrecubicalSet, seq: &[CubeId]) -> Result<(), PathObjectRejection> {
    for (i, &c) in seq.iter().enumerate() {
        if seq[..i].contains(&c) {
            return Err(PathObjectRejection::RepeatedCube {
                cube: space.name(c).to_string(),
            });
        }
    }
    if let Some(i) = seq.windows(2).position(|w| step_between(space, w[0], w[1]).is_none()) {
        return Err(PathObjectRejection::NotAStep { position: i + 1 });
    }
    coverage(space, seq, &seq.iter().map(|&x| iterated_faces(space, x)).collect::<Vec<_>>()).1
}

/// Counts covered cubes and reports the first (storage-order) failure.
fn coverage(
    space: &PrecubicalSet,
    seq: &[CubeId],
    faces: &[HashMap<CubeId, BTreeSet<Vec<usize>>>],
) -> (usize, Result<(), PathObjectRejection>) {
    let mut covered = 0;
    let mut failure = None;
    for c in space.cubes() {
        let hits: Vec<usize> = (0..seq.len()).filter(|&j| faces[j].contains_key(&c)).collect();
        if hits.iter().any(|&j| faces[j][&c].len() == 1) {
            covered += 1;
        } else if failure.is_none() {
            failure = Some(match hits.first() {
                None => PathObjectRejection::Uncovered {
                    cube: space.name(c).to_string(),
                },
                Some(&j) => PathObjectRejection::AmbiguousFace {
                    cube: space.name(c).to_string(),
                    entry: space.name(seq[j]).to_string(),
                },
            });
        }
    }
    (covered, failure.map_or(Ok(()), Err))
}

/// Searches for a representing sequence of `space`.
///
/// Candidates are sequences of distinct cubes linked by steps, starting at
/// a vertex. The shortest one is returned, ties broken by id sequence;
/// `limit` bounds the number of candidates examined.
pub fn is_path_object(space: &PrecubicalSet, limit: usize) -> Result<PathObjectRep, PathObjectRejection> {
    let faces: Vec<HashMap<CubeId, BTreeSet<Vec<usize>>>> = space.cubes().map(|x| iterated_faces(space, x)).collect();
    let mut vertices: Vec<CubeId> = space.cubes_of_dim(0).collect();
    vertices.sort_by(|a, b| space.name(*a).cmp(space.name(*b)));
    let mut level: Vec<Vec<CubeId>> = vertices.into_iter().map(|v| vec![v]).collect();
    let mut explored = 0;
    let mut closest: Option<(usize, Vec<CubeId>, PathObjectRejection)> = None;
    while !level.is_empty() {
        for seq in &level {
            explored += 1;
            if explored > limit {
                return Err(PathObjectRejection::SearchLimit { explored: limit });
            }
            let f: Vec<_> = seq.iter().map(|x| faces[x.index()].clone()).collect();
            match coverage(space, seq, &f) {
                (_, Ok(())) => {
                    return Ok(PathObjectRep {
                        rep: CubePath::from_vec_unchecked(seq.clone()),
                    })
                }
                (n, Err(why)) => {
                    if closest.as_ref().map_or(true, |(best, _, _)| n > *best) {
                        closest = Some((n, seq.clone(), why));
                    }
                }
            }
        }
        let mut next = Vec::new();
        for seq in &level {
            let last = *seq.last().expect("non-empty");
            let mut succ: Vec<CubeId> = space
                .cofaces(last, Side::Lower)
                .iter()
                .map(|&(_, c)| c)
                .chain(space.faces(last, Side::Upper).iter().copied())
                .filter(|c| !seq.contains(c))
                .collect();
            succ.sort_by(|a, b| space.name(*a).cmp(space.name(*b)));
            succ.dedup();
            for c in succ {
                let mut q = seq.clone();
                q.push(c);
                next.push(q);
            }
        }
        level = next;
    }
    let (_, seq, why) = closest.expect("a precubical set with cubes has a vertex");
    Err(PathObjectRejection::NoRepresentation {
        closest: seq.iter().map(|&c| space.name(c).to_string()).collect(),
        first_failure: Box::new(why),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::CubeSpec;

    #[test]
    fn a_lone_vertex_is_a_path() {
        let s = PrecubicalSet::from_specs(vec![CubeSpec::vertex("v")]).unwrap();
        let rep = is_path_object(&s, 1000).unwrap();
        assert_eq!(rep.rep.render(&s), "(v)");
    }

    #[test]
    fn a_fork_is_not() {
        let s = PrecubicalSet::from_specs(vec![
            CubeSpec::vertex("i"),
            CubeSpec::vertex("u"),
            CubeSpec::vertex("v"),
            CubeSpec::new("a", 1, &["i"], &["u"]),
            CubeSpec::new("b", 1, &["i"], &["v"]),
        ])
        .unwrap();
        let err = is_path_object(&s, 1000).unwrap_err();
        assert!(matches!(err, PathObjectRejection::NoRepresentation { .. }), "{err:?}");
    }

    #[test]
    fn self_linked_squares_are_ambiguous() {
        // both lower (and upper) faces of x are the same loop e
        let s = PrecubicalSet::from_specs(vec![
            CubeSpec::vertex("v"),
            CubeSpec::new("e", 1, &["v"], &["v"]),
            CubeSpec::new("x", 2, &["e", "e"], &["e", "e"]),
        ])
        .unwrap();
        assert_eq!(
            is_representation(&s, &[s.lookup("x").unwrap()]),
            Err(PathObjectRejection::AmbiguousFace {
                cube: "e".into(),
                entry: "x".into()
            })
        );
    }

    #[test]
    fn step_and_repetition_violations() {
        let s = PrecubicalSet::from_specs(vec![
            CubeSpec::vertex("i"),
            CubeSpec::vertex("u"),
            CubeSpec::new("a", 1, &["i"], &["u"]),
        ])
        .unwrap();
        let (i, u, a) = (s.lookup("i").unwrap(), s.lookup("u").unwrap(), s.lookup("a").unwrap());
        assert_eq!(is_representation(&s, &[i, a, u]), Ok(()));
        assert_eq!(is_representation(&s, &[i, u]), Err(PathObjectRejection::NotAStep { position: 1 }));
        assert!(matches!(is_representation(&s, &[i, a, i]), Err(PathObjectRejection::RepeatedCube { .. })));
        assert!(matches!(is_representation(&s, &[i]), Err(PathObjectRejection::Uncovered { .. })));
    }
}
