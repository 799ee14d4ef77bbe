use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use super::CubePath;
use crate::cubes::{CubeId, PrecubicalSet, Side};
use crate::{HdaError, Result};

/// Default bound on the number of distinct paths a closure may enumerate.
pub const DEFAULT_CAP: usize = 100_000;

/// Which adjacency clause relates two paths, and where.
///
/// `position` is 1-based. `mirrored` is set when the clause holds with the
/// roles of the two paths swapped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Adjacency {
    pub clause: u8,
    pub position: usize,
    pub k: usize,
    pub l: usize,
    pub mirrored: bool,
}

/// Tests the four clauses with `a` in the first path's role and `b` in the
/// second's, around the fixed neighbours `prev` and `next`.
///
/// Clauses, for some k < l:
/// 1. `prev = δ_k^0 a`, `a = δ_l^0 next`, `prev = δ_{l-1}^0 b`, `b = δ_k^0 next`
/// 2. `a = δ_l^1 prev`, `next = δ_k^1 a`, `b = δ_k^1 prev`, `next = δ_{l-1}^1 b`
/// 3. `a = δ_k^0 δ_l^1 b`, `prev = δ_k^0 b`, `next = δ_l^1 b`
/// 4. `a = δ_k^1 δ_l^0 b`, `prev = δ_l^0 b`, `next = δ_k^1 b`
fn clause(s: &PrecubicalSet, prev: CubeId, a: CubeId, b: CubeId, next: CubeId) -> Option<(u8, usize, usize)> {
    use Side::{Lower, Upper};
    let (dp, da, db, dn) = (s.dim(prev), s.dim(a), s.dim(b), s.dim(next));
    let is = |x: CubeId, side, k: usize, y: CubeId| k >= 1 && s.face(y, side, k) == Some(x);

    if da == db && dp + 1 == da && da + 1 == dn {
        for k in 1..=da {
            for l in k + 1..=dn {
                if is(prev, Lower, k, a) && is(a, Lower, l, next) && is(prev, Lower, l - 1, b) && is(b, Lower, k, next) {
                    return Some((1, k, l));
                }
            }
        }
    }
    if da == db && dp == da + 1 && da == dn + 1 {
        for k in 1..=da {
            for l in k + 1..=dp {
                if is(a, Upper, l, prev) && is(next, Upper, k, a) && is(b, Upper, k, prev) && is(next, Upper, l - 1, b) {
                    return Some((2, k, l));
                }
            }
        }
    }
    if db == da + 2 && dp == da + 1 && dn == da + 1 {
        for k in 1..=db {
            for l in k + 1..=db {
                if is(prev, Lower, k, b) && is(next, Upper, l, b) && is(a, Lower, k, next) {
                    return Some((3, k, l));
                }
            }
        }
        for k in 1..=db {
            for l in k + 1..=db {
                if is(prev, Lower, l, b) && is(next, Upper, k, b) && is(a, Upper, k, prev) {
                    return Some((4, k, l));
                }
            }
        }
    }
    None
}

fn adjacency_slices(space: &PrecubicalSet, x: &[CubeId], y: &[CubeId]) -> Option<Adjacency> {
    if x.len() != y.len() || x.len() < 3 {
        return None;
    }
    let mut diff = x.iter().zip(y).enumerate().filter(|(_, (a, b))| a != b).map(|(i, _)| i);
    let p = diff.next()?;
    if diff.next().is_some() || p == 0 || p + 1 == x.len() {
        return None;
    }
    let (prev, next) = (x[p - 1], x[p + 1]);
    let hit = |clause_hit: Option<(u8, usize, usize)>, mirrored| {
        clause_hit.map(|(clause, k, l)| Adjacency {
            clause,
            position: p + 1,
            k,
            l,
            mirrored,
        })
    };
    hit(clause(space, prev, x[p], y[p], next), false).or_else(|| hit(clause(space, prev, y[p], x[p], next), true))
}

/// The adjacency between two paths, if any. Symmetric up to the `mirrored` flag.
pub fn adjacency(space: &PrecubicalSet, x: &CubePath, y: &CubePath) -> Option<Adjacency> {
    adjacency_slices(space, x.cubes(), y.cubes())
}

/// Cubes that could replace `seq[p]` in an adjacent path: lower faces of the
/// next cube, upper faces of the previous one, and lower cofaces of the
/// previous one. Every candidate is then confirmed by the clause check.
fn neighbours_into(space: &PrecubicalSet, seq: &[CubeId], out: &mut Vec<Vec<CubeId>>) {
    for p in 1..seq.len().saturating_sub(1) {
        let (prev, cur, next) = (seq[p - 1], seq[p], seq[p + 1]);
        let mut cands: Vec<CubeId> = space
            .faces(next, Side::Lower)
            .iter()
            .chain(space.faces(prev, Side::Upper))
            .copied()
            .chain(space.cofaces(prev, Side::Lower).iter().map(|&(_, c)| c))
            .filter(|&c| c != cur)
            .collect();
        cands.sort_unstable();
        cands.dedup();
        for c in cands {
            if clause(space, prev, cur, c, next).is_some() || clause(space, prev, c, cur, next).is_some() {
                let mut q = seq.to_vec();
                q[p] = c;
                out.push(q);
            }
        }
    }
}

/// All paths adjacent to `path`, in ascending (position, cube) order.
pub fn adjacent_paths(space: &PrecubicalSet, path: &CubePath) -> Vec<CubePath> {
    let mut out = Vec::new();
    neighbours_into(space, path.cubes(), &mut out);
    out.into_iter().map(CubePath::from_vec_unchecked).collect()
}

/// Breadth-first adjacency closure of `start`. Stops early when `goal`
/// is met; returns `Err(visited)` when more than `cap` paths would be
/// enumerated.
pub(crate) fn closure(
    space: &PrecubicalSet,
    start: &[CubeId],
    cap: usize,
    goal: Option<&[CubeId]>,
) -> std::result::Result<Vec<Vec<CubeId>>, usize> {
    let mut seen: HashSet<Vec<CubeId>> = HashSet::from([start.to_vec()]);
    let mut order = vec![start.to_vec()];
    let mut queue = VecDeque::from([start.to_vec()]);
    let mut buf = Vec::new();
    if goal == Some(start) {
        return Ok(order);
    }
    while let Some(cur) = queue.pop_front() {
        buf.clear();
        neighbours_into(space, &cur, &mut buf);
        for q in buf.drain(..) {
            if seen.contains(&q) {
                continue;
            }
            if seen.len() >= cap {
                return Err(seen.len());
            }
            seen.insert(q.clone());
            order.push(q.clone());
            if goal == Some(q.as_slice()) {
                return Ok(order);
            }
            queue.push_back(q);
        }
    }
    Ok(order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum HomotopyVerdict {
    Homotopic,
    NotHomotopic,
    /// The closure grew past the cap before reaching a verdict.
    Exhausted { explored: usize },
}

/// Decides `x ∼ y` by closing `x` under adjacency.
pub fn are_homotopic(space: &PrecubicalSet, x: &CubePath, y: &CubePath, cap: usize) -> HomotopyVerdict {
    if x == y {
        return HomotopyVerdict::Homotopic;
    }
    if x.len() != y.len() || x.first() != y.first() || x.last() != y.last() {
        return HomotopyVerdict::NotHomotopic;
    }
    match closure(space, x.cubes(), cap, Some(y.cubes())) {
        Ok(members) if members.last().map(Vec::as_slice) == Some(y.cubes()) => HomotopyVerdict::Homotopic,
        Ok(_) => HomotopyVerdict::NotHomotopic,
        Err(explored) => HomotopyVerdict::Exhausted { explored },
    }
}

/// The full homotopy class of `path`, sorted lexicographically by id sequence.
pub fn homotopy_class(space: &PrecubicalSet, path: &CubePath, cap: usize) -> Result<Vec<CubePath>> {
    let mut members = closure(space, path.cubes(), cap, None).map_err(|_| HdaError::CapExceeded {
        cap,
        path: path.render(space),
    })?;
    members.sort_by(|a, b| super::cmp_by_ids(space, a, b));
    Ok(members.into_iter().map(CubePath::from_vec_unchecked).collect())
}
