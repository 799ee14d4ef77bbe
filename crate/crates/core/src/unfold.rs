//! Bounded unfoldings: trees of homotopy classes of pointed cube paths.
//!
//! A class of paths with `m` cubes ending in dimension `n` is kept iff
//! `m + n ≤ depth`. Upper faces preserve `m + n` and lower faces lower it
//! by two, so every truncation is closed under faces.
//!
//! The lower face `δ̃_k^0` of a class is the set of classes of prefixes
//! `σ` with `σ * (x) ` in the class. When a cube has coinciding faces this
//! set can contain several classes; construction then stops with
//! [`HdaError::AmbiguousLowerFace`] instead of picking one.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::cubes::{
    torus, torus_cube_id, CubeId, CubeSpec, EventSet, Hda, LabelTuple, LabeledHda, Labeling, Morphism,
    PrecubicalSet, Side,
};
use crate::paths::homotopy::closure;
use crate::paths::{cmp_by_ids, CubePath};
use crate::{HdaError, Result};

/// Homotopy classes of pointed paths, discovered breadth-first by length.
struct Classes {
    reps: Vec<Vec<CubeId>>,
    members: Vec<Vec<Vec<CubeId>>>,
    index: HashMap<Vec<CubeId>, usize>,
    frontier: Vec<bool>,
}

impl Classes {
    fn build(hda: &Hda, keep: impl Fn(usize, usize) -> bool, cap: usize) -> Result<Self> {
        let space = hda.space();
        let root = vec![hda.initial()];
        let mut classes = Classes {
            reps: vec![root.clone()],
            members: vec![vec![root.clone()]],
            index: HashMap::from([(root, 0)]),
            frontier: vec![false],
        };
        let mut next = 0;
        while next < classes.reps.len() {
            let rep = classes.reps[next].clone();
            let end = *rep.last().expect("non-empty");
            for y in hda.successors(end) {
                let mut q = rep.clone();
                q.push(y);
                if classes.index.contains_key(&q) {
                    continue;
                }
                if !keep(q.len(), space.dim(y)) {
                    classes.frontier[next] = true;
                    continue;
                }
                let mut members = closure(space, &q, cap, None).map_err(|_| HdaError::CapExceeded {
                    cap,
                    path: CubePath::from_vec_unchecked(q.clone()).render(space),
                })?;
                members.sort_by(|a, b| cmp_by_ids(space, a, b));
                let id = classes.reps.len();
                for m in &members {
                    classes.index.insert(m.clone(), id);
                }
                classes.reps.push(members[0].clone());
                classes.members.push(members);
                classes.frontier.push(false);
            }
            next += 1;
        }
        Ok(classes)
    }
}

/// The unfolding of an HDA up to a depth, with its projection.
#[derive(Debug, Clone)]
pub struct Unfolding {
    pub base: Hda,
    pub depth: usize,
    pub tree: Hda,
    /// Per tree cube: the canonical representative path in the base.
    reps: Vec<CubePath>,
    /// Per tree cube: the image under the projection.
    projection: Vec<CubeId>,
    frontier: Vec<bool>,
    /// Every member path of every class, mapped to its tree cube.
    lookup: HashMap<Vec<CubeId>, CubeId>,
}

fn node_id(space: &PrecubicalSet, rep: &[CubeId]) -> String {
    rep.iter().map(|&c| space.name(c)).collect::<Vec<_>>().join("/")
}

/// Builds the unfolding of `hda` truncated at `depth` (see module docs).
pub fn unfold(hda: &Hda, depth: usize, cap: usize) -> Result<Unfolding> {
    let depth = depth.max(1);
    let space = hda.space();
    let classes = Classes::build(hda, |m, n| m + n <= depth, cap)?;

    let mut specs = Vec::with_capacity(classes.reps.len());
    for (c, rep) in classes.reps.iter().enumerate() {
        let end = *rep.last().expect("non-empty");
        let n = space.dim(end);
        let mut lower = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        for k in 1..=n {
            let mut up = rep.clone();
            up.push(space.face_unchecked(end, Side::Upper, k));
            let up_class = classes
                .index
                .get(&up)
                .ok_or_else(|| HdaError::Unfolding(format!("upper face {k} of {} is missing", node_id(space, rep))))?;
            upper.push(node_id(space, &classes.reps[*up_class]));

            let target = space.face_unchecked(end, Side::Lower, k);
            let mut low_class = None;
            for m in &classes.members[c] {
                if m.len() < 2 || m[m.len() - 2] != target {
                    continue;
                }
                let found = *classes.index.get(&m[..m.len() - 1]).ok_or_else(|| {
                    HdaError::Unfolding(format!("lower face {k} of {} is missing", node_id(space, rep)))
                })?;
                match low_class {
                    None => low_class = Some(found),
                    Some(seen) if seen != found => {
                        return Err(HdaError::AmbiguousLowerFace {
                            node: node_id(space, rep),
                            k,
                            first: node_id(space, &classes.reps[seen]),
                            second: node_id(space, &classes.reps[found]),
                        })
                    }
                    Some(_) => {}
                }
            }
            let low_class = low_class.ok_or_else(|| {
                HdaError::Unfolding(format!("no member of {} enters through lower face {k}", node_id(space, rep)))
            })?;
            lower.push(node_id(space, &classes.reps[low_class]));
        }
        specs.push(CubeSpec {
            id: node_id(space, rep),
            dim: n,
            lower,
            upper,
        });
    }
    let tree_space = PrecubicalSet::from_specs(specs).map_err(|r| HdaError::Unfolding(r.to_string()))?;
    let tree = Hda::new(tree_space, &node_id(space, &classes.reps[0])).map_err(HdaError::Invalid)?;

    let n = tree.space().len();
    let mut reps = vec![CubePath::single(hda.initial()); n];
    let mut projection = vec![hda.initial(); n];
    let mut frontier = vec![false; n];
    let mut tree_of_class = Vec::with_capacity(classes.reps.len());
    for (c, rep) in classes.reps.iter().enumerate() {
        let t = tree.space().lookup(&node_id(space, rep)).expect("node");
        reps[t.index()] = CubePath::from_vec_unchecked(rep.clone());
        projection[t.index()] = *rep.last().expect("non-empty");
        frontier[t.index()] = classes.frontier[c];
        tree_of_class.push(t);
    }
    let lookup = classes.index.into_iter().map(|(p, c)| (p, tree_of_class[c])).collect();
    Ok(Unfolding {
        base: hda.clone(),
        depth,
        tree,
        reps,
        projection,
        frontier,
        lookup,
    })
}

impl Unfolding {
    /// Projection image of a tree cube.
    pub fn project(&self, t: CubeId) -> CubeId {
        self.projection[t.index()]
    }

    pub fn rep(&self, t: CubeId) -> &CubePath {
        &self.reps[t.index()]
    }

    /// True when some successor of the node was cut off by the depth bound.
    pub fn is_frontier(&self, t: CubeId) -> bool {
        self.frontier[t.index()]
    }

    pub fn frontier(&self) -> impl Iterator<Item = CubeId> + '_ {
        self.tree.space().cubes().filter(|t| self.frontier[t.index()])
    }

    /// Complete iff no node lost a successor to truncation.
    pub fn is_complete(&self) -> bool {
        !self.frontier.iter().any(|&f| f)
    }

    /// Tree node holding the class of a pointed base path, if within depth.
    pub fn node_of(&self, path: &CubePath) -> Option<CubeId> {
        self.lookup.get(path.cubes()).copied()
    }

    pub fn projection_morphism(&self) -> Morphism<'_> {
        Morphism {
            source: &self.tree,
            target: &self.base,
            map: self.projection.clone(),
            pointed: true,
        }
    }

    /// The unique tree path over `path` that begins at `start`.
    pub fn lift_path(&self, start: CubeId, path: &CubePath) -> Result<CubePath> {
        if self.project(start) != path.first() {
            return Err(HdaError::Unfolding(format!(
                "{} does not start over node {}",
                path.render(self.base.space()),
                self.tree.space().name(start)
            )));
        }
        let mut out = vec![start];
        let mut cur = start;
        for &y in &path.cubes()[1..] {
            let mut q = self.rep(cur).cubes().to_vec();
            q.push(y);
            cur = *self.lookup.get(&q).ok_or(HdaError::DepthExceeded { depth: self.depth })?;
            out.push(cur);
        }
        Ok(CubePath::from_vec_unchecked(out))
    }

    /// Node id → projected base id, for export next to the tree.
    /// Labels each tree cube like its projection.
    pub fn pull_back(&self, labeling: &Labeling) -> Labeling {
        Labeling {
            events: labeling.events.clone(),
            assign: self
                .tree
                .space()
                .cubes()
                .filter_map(|t| labeling.label(self.project(t)).map(|l| (t, l.clone())))
                .collect(),
        }
    }

    pub fn sidecar(&self) -> BTreeMap<String, String> {
        self.tree
            .space()
            .cubes()
            .map(|t| {
                (
                    self.tree.space().name(t).to_string(),
                    self.base.space().name(self.project(t)).to_string(),
                )
            })
            .collect()
    }
}

/// Outcome of the bounded tree check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeCheck {
    pub is_tree: bool,
    pub depth: usize,
    pub classes: usize,
    /// An endpoint with two non-homotopic pointed paths.
    pub counterexample: Option<(String, Vec<String>, Vec<String>)>,
}

/// Whether every cube reached by pointed paths of at most `depth` cubes is
/// reached by exactly one homotopy class of such paths.
pub fn is_tree(hda: &Hda, depth: usize, cap: usize) -> Result<TreeCheck> {
    let space = hda.space();
    let classes = Classes::build(hda, |m, _| m <= depth, cap)?;
    let mut first: HashMap<CubeId, usize> = HashMap::new();
    let names = |p: &[CubeId]| p.iter().map(|&c| space.name(c).to_string()).collect::<Vec<_>>();
    for (c, rep) in classes.reps.iter().enumerate() {
        let end = *rep.last().expect("non-empty");
        if let Some(&other) = first.get(&end) {
            return Ok(TreeCheck {
                is_tree: false,
                depth,
                classes: classes.reps.len(),
                counterexample: Some((space.name(end).to_string(), names(&classes.reps[other]), names(rep))),
            });
        }
        first.insert(end, c);
    }
    Ok(TreeCheck {
        is_tree: true,
        depth,
        classes: classes.reps.len(),
        counterexample: None,
    })
}

/// Closed form of the unfolding of the torus over `events` at `depth`:
/// cubes `(x, m)` with `m ≥ dim x`, `m ≡ dim x (mod 2)`, `m + dim x ≤ depth − 1`,
/// `δ_k^0 (x, m) = (δ_k^0 x, m − 1)` and `δ_k^1 (x, m) = (δ_k^1 x, m + 1)`.
///
/// Labeled by the torus labels of the first components.
///
/// This agrees with `unfold(torus(events, depth − 1), depth)` only when there
/// is at most one event: with two, `(ι, (a), ι)` and `(ι, (b), ι)` have equal
/// length and endpoint but are not homotopic, and the closed form merges
/// their classes.
pub fn torus_unfolding(events: &EventSet, depth: usize) -> LabeledHda {
    let depth = depth.max(1);
    let base = torus(events, (depth - 1) / 2);
    let bs = base.hda.space();
    let id = |x: CubeId, m: usize| format!("{}#{m}", bs.name(x));
    let mut specs = Vec::new();
    let mut labels = Vec::new();
    for x in bs.cubes() {
        let n = bs.dim(x);
        let mut m = n;
        while m + n < depth {
            if events.is_empty() && m > 0 {
                // without events nothing but the root is reachable
                break;
            }
            let lower = bs.faces(x, Side::Lower).iter().map(|&f| id(f, m - 1)).collect();
            let upper = bs.faces(x, Side::Upper).iter().map(|&f| id(f, m + 1)).collect();
            specs.push(CubeSpec {
                id: id(x, m),
                dim: n,
                lower,
                upper,
            });
            labels.push((id(x, m), base.label(x).clone()));
            m += 2;
        }
    }
    let space = PrecubicalSet::assemble(specs).expect("closed-form torus unfolding is face-closed");
    let assign = labels
        .into_iter()
        .map(|(name, t): (String, LabelTuple)| (space.lookup(&name).expect("cube"), t))
        .collect();
    let initial = space.lookup(&format!("{}#0", torus_cube_id(events, &[]))).expect("root");
    LabeledHda {
        hda: Hda::from_parts(space, initial),
        labeling: Labeling {
            events: events.clone(),
            assign,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::{CubeSpec, PrecubicalSet};
    use crate::paths::DEFAULT_CAP;

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

    /// Square whose two upper faces are the same edge `t`.
    fn pinched_square() -> Hda {
        let set = PrecubicalSet::from_specs(vec![
            CubeSpec::vertex("p"),
            CubeSpec::vertex("q"),
            CubeSpec::vertex("r"),
            CubeSpec::new("e1", 1, &["p"], &["q"]),
            CubeSpec::new("e2", 1, &["p"], &["q"]),
            CubeSpec::new("t", 1, &["q"], &["r"]),
            CubeSpec::new("s", 2, &["e1", "e2"], &["t", "t"]),
        ])
        .unwrap();
        Hda::new(set, "p").unwrap()
    }

    #[test]
    fn coinciding_faces_make_lower_faces_ambiguous() {
        // (p,e1,s,t) ~ (p,e1,q,t) ~ … ~ (p,e2,q,t), but (p,e1,q) ≁ (p,e2,q)
        let h = pinched_square();
        assert!(unfold(&h, 4, DEFAULT_CAP).is_ok());
        match unfold(&h, 5, DEFAULT_CAP) {
            Err(HdaError::AmbiguousLowerFace { node, k, first, second }) => {
                assert_eq!((node.as_str(), k), ("p/e1/q/t", 1));
                assert_eq!((first.as_str(), second.as_str()), ("p/e1/q", "p/e2/q"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn a_cycle_unfolds_into_a_line() {
        let u = unfold(&two_cycle(), 5, DEFAULT_CAP).unwrap();
        assert_eq!(u.tree.space().count_by_dim(), vec![3, 2]);
        assert!(!u.is_complete());
        let frontier: Vec<_> = u.frontier().map(|t| u.tree.space().name(t).to_string()).collect();
        assert_eq!(frontier, ["x/e1/y/e2/x"]);
        let s = u.base.space();
        let p = CubePath::parse(s, "x,e1,y,e2,x").unwrap();
        let lifted = u.lift_path(u.tree.initial(), &p).unwrap();
        assert_eq!(lifted.len(), 5);
        assert!(matches!(
            u.lift_path(u.tree.initial(), &CubePath::parse(s, "x,e1,y,e2,x,e1").unwrap()),
            Err(HdaError::DepthExceeded { depth: 5 })
        ));
        assert!(u.projection_morphism().is_valid());
    }

    #[test]
    fn depth_one_is_the_root() {
        let u = unfold(&two_cycle(), 1, DEFAULT_CAP).unwrap();
        assert_eq!(u.tree.space().len(), 1);
        assert!(u.is_frontier(u.tree.initial()));
    }

    #[test]
    fn torus_closed_form_counts() {
        let a = EventSet::new(["a"]).unwrap();
        // (a,a)#2 is reached by ((), (a), (a,a))
        assert_eq!(torus_unfolding(&a, 5).hda.space().count_by_dim(), vec![3, 2, 1]);
        let line = unfold(&torus(&a, 1).hda, 5, DEFAULT_CAP).unwrap();
        assert_eq!(line.tree.space().count_by_dim(), vec![3, 2]);
        assert_eq!(torus_unfolding(&a, 1).hda.space().len(), 1);
        let none = EventSet::new(Vec::<String>::new()).unwrap();
        assert_eq!(torus_unfolding(&none, 6).hda.space().len(), 1);
        let ab = EventSet::new(["a", "b"]).unwrap();
        let t = torus_unfolding(&ab, 5);
        assert!(t.hda.space().validate().is_ok());
        assert!(crate::cubes::validate_labeling(&t.hda, &t.labeling).is_ok());
    }

    #[test]
    fn cycles_are_not_trees_but_their_unfoldings_are() {
        let x = two_cycle();
        assert!(is_tree(&x, 2, DEFAULT_CAP).unwrap().is_tree);
        let check = is_tree(&x, 5, DEFAULT_CAP).unwrap();
        assert!(!check.is_tree);
        assert_eq!(check.counterexample.unwrap().0, "x");
        let u = unfold(&x, 7, DEFAULT_CAP).unwrap();
        assert!(is_tree(&u.tree, 7, DEFAULT_CAP).unwrap().is_tree);
    }
}
