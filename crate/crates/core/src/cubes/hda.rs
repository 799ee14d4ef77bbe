use std::collections::VecDeque;

use super::set::{CubeId, PrecubicalSet, Side, ValidationReport, Violation};

/// A higher-dimensional automaton: a precubical set with an initial 0-cube.
#[derive(Debug, Clone)]
pub struct Hda {
    space: PrecubicalSet,
    initial: CubeId,
}

impl Hda {
    pub fn new(space: PrecubicalSet, initial: &str) -> Result<Self, ValidationReport> {
        let mut report = ValidationReport::ok();
        match space.lookup(initial) {
            None => report.push(Violation::MissingInitial {
                id: initial.to_string(),
            }),
            Some(i) if space.dim(i) != 0 => report.push(Violation::InitialDimension {
                id: initial.to_string(),
                dim: space.dim(i),
            }),
            Some(i) => return Ok(Hda { space, initial: i }),
        }
        Err(report)
    }

    pub(crate) fn from_parts(space: PrecubicalSet, initial: CubeId) -> Self {
        debug_assert_eq!(space.dim(initial), 0);
        Hda { space, initial }
    }

    pub fn space(&self) -> &PrecubicalSet {
        &self.space
    }

    pub fn initial(&self) -> CubeId {
        self.initial
    }

    /// Cubes `y` one step after `x`: lower cofaces (`x = δ_k^0 y`) first,
    /// then upper faces (`y = δ_k^1 x`).
    pub fn successors(&self, x: CubeId) -> impl Iterator<Item = CubeId> + '_ {
        self.space
            .cofaces(x, Side::Lower)
            .iter()
            .map(|&(_, y)| y)
            .chain(self.space.faces(x, Side::Upper).iter().copied())
    }

    /// Closure of the initial cube under the step relation.
    pub fn reachable(&self) -> Reachable {
        let n = self.space.len();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial.index()] = true;
        while let Some(x) = queue.pop_front() {
            for y in self.successors(x) {
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    parent[y.index()] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        Reachable {
            initial: self.initial,
            seen,
            parent,
        }
    }

    /// True iff the step relation has no cycle through a reachable cube.
    pub fn is_acyclic(&self) -> bool {
        self.longest_pointed_path().is_some()
    }

    /// Length (in cubes) plus end dimension, maximized over all pointed cube
    /// paths, or `None` when some pointed path can be extended forever.
    ///
    /// An unfolding built to at least this depth is complete.
    pub fn longest_pointed_path(&self) -> Option<usize> {
        // Iterative DFS with colors; memoizes the best (length, len + dim)
        // reachable from each cube.
        let n = self.space.len();
        let mut best: Vec<Option<usize>> = vec![None; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<(CubeId, Vec<CubeId>)> = Vec::new();
        let succ = |x: CubeId| -> Vec<CubeId> { self.successors(x).collect() };

        stack.push((self.initial, succ(self.initial)));
        on_stack[self.initial.index()] = true;
        while let Some((x, pending)) = stack.last_mut() {
            let x = *x;
            if let Some(y) = pending.pop() {
                if on_stack[y.index()] {
                    return None;
                }
                if best[y.index()].is_none() {
                    on_stack[y.index()] = true;
                    let next = succ(y);
                    stack.push((y, next));
                }
            } else {
                // Value of x: max over continuations, measured as extra
                // cubes plus final dimension.
                let own = self.space.dim(x);
                let v = self
                    .successors(x)
                    .map(|y| 1 + best[y.index()].expect("successor finished"))
                    .max()
                    .unwrap_or(0)
                    .max(own);
                best[x.index()] = Some(v);
                on_stack[x.index()] = false;
                stack.pop();
            }
        }
        best[self.initial.index()].map(|v| v + 1)
    }
}

/// Reachable cubes together with a BFS tree of witnesses.
#[derive(Debug, Clone)]
pub struct Reachable {
    initial: CubeId,
    seen: Vec<bool>,
    parent: Vec<Option<CubeId>>,
}

impl Reachable {
    pub fn contains(&self, x: CubeId) -> bool {
        self.seen[x.index()]
    }

    pub fn mask(&self) -> &[bool] {
        &self.seen
    }

    pub fn iter(&self) -> impl Iterator<Item = CubeId> + '_ {
        self.seen
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| CubeId::from_index(i))
    }

    pub fn count(&self) -> usize {
        self.seen.iter().filter(|&&s| s).count()
    }

    /// A pointed cube path ending at `x`, if `x` is reachable.
    pub fn witness(&self, x: CubeId) -> Option<Vec<CubeId>> {
        if !self.contains(x) {
            return None;
        }
        let mut path = vec![x];
        let mut cur = x;
        while cur != self.initial {
            cur = self.parent[cur.index()]?;
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::CubeSpec;

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
    fn initial_must_be_a_vertex() {
        let set = two_cycle().space().clone();
        assert!(matches!(
            Hda::new(set.clone(), "e1").unwrap_err().violations[0],
            Violation::InitialDimension { dim: 1, .. }
        ));
        assert!(matches!(
            Hda::new(set, "zz").unwrap_err().violations[0],
            Violation::MissingInitial { .. }
        ));
    }

    #[test]
    fn isolated_initial() {
        let set = PrecubicalSet::from_specs(vec![
            CubeSpec::vertex("i"),
            CubeSpec::vertex("p"),
            CubeSpec::vertex("q"),
            CubeSpec::new("e", 1, &["p"], &["q"]),
        ])
        .unwrap();
        let hda = Hda::new(set, "i").unwrap();
        let r = hda.reachable();
        assert_eq!(r.iter().collect::<Vec<_>>(), vec![hda.initial()]);
        assert_eq!(hda.longest_pointed_path(), Some(1));
    }

    #[test]
    fn cycles_have_no_longest_path() {
        let hda = two_cycle();
        assert_eq!(hda.reachable().count(), 4);
        assert!(!hda.is_acyclic());
    }

    #[test]
    fn witness_paths_start_at_initial() {
        let hda = two_cycle();
        let r = hda.reachable();
        let y = hda.space().lookup("y").unwrap();
        let w = r.witness(y).unwrap();
        let names: Vec<_> = w.iter().map(|&c| hda.space().name(c)).collect();
        assert_eq!(names, ["x", "e1", "y"]);
    }
}
