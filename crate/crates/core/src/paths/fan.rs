use serde::Serialize;

use super::CubePath;
use crate::cubes::{CubeId, PrecubicalSet, Side};
use crate::{HdaError, Result};

/// Sum of the dimensions along the path.
pub fn t_measure(space: &PrecubicalSet, path: &CubePath) -> usize {
    path.cubes().iter().map(|&c| space.dim(c)).sum()
}

/// `n² + m − 1` for a path of `m` cubes ending in dimension `n`: twice the
/// least possible T-measure.
pub fn fan_bound_doubled(space: &PrecubicalSet, path: &CubePath) -> usize {
    let n = space.dim(path.last());
    n * n + path.len() - 1
}

/// Dimension a fan-shaped path of length `m` ending in dimension `n` has at
/// 1-based position `j`.
fn fan_dim(j: usize, m: usize, n: usize) -> Option<usize> {
    if n > m {
        return None;
    }
    Some(if j <= m - n {
        usize::from(j % 2 == 0)
    } else {
        n + j - m
    })
}

/// Fan-shaped: alternating vertices and edges, then one dimension up per
/// step until the final cube.
pub fn is_fan_shaped(space: &PrecubicalSet, path: &CubePath) -> bool {
    let (m, n) = (path.len(), space.dim(path.last()));
    path.cubes()
        .iter()
        .enumerate()
        .all(|(i, &c)| fan_dim(i + 1, m, n) == Some(space.dim(c)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RewriteKind {
    /// Swaps `x_{ℓ−1}` for a cube of equal dimension; T unchanged.
    Prepare,
    /// Replaces the peak `x_ℓ` by a cube two dimensions lower; T drops by 2.
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rewrite {
    pub kind: RewriteKind,
    /// 1-based position of the replaced cube.
    pub position: usize,
    #[serde(skip)]
    pub path: CubePath,
}

/// Result of [`fan_shape`]: the normal form and every intermediate path.
#[derive(Debug, Clone)]
pub struct FanShaping {
    pub result: CubePath,
    pub trace: Vec<Rewrite>,
}

impl FanShaping {
    /// Number of T-lowering iterations.
    pub fn iterations(&self) -> usize {
        self.trace.iter().filter(|r| r.kind == RewriteKind::Lower).count()
    }
}

fn lower_index(space: &PrecubicalSet, face: CubeId, of: CubeId) -> Option<usize> {
    space.faces(of, Side::Lower).iter().position(|&f| f == face).map(|k| k + 1)
}

fn upper_index(space: &PrecubicalSet, face: CubeId, of: CubeId) -> Option<usize> {
    space.faces(of, Side::Upper).iter().position(|&f| f == face).map(|k| k + 1)
}

/// Rewrites a cube path starting at a vertex into a homotopic fan-shaped
/// one by repeatedly flattening the first peak of dimension ≥ 2.
pub fn fan_shape(space: &PrecubicalSet, path: &CubePath) -> Result<FanShaping> {
    if space.dim(path.first()) != 0 {
        return Err(HdaError::FanShape(format!(
            "{}: path must start at a vertex",
            path.render(space)
        )));
    }
    let mut x: Vec<CubeId> = path.cubes().to_vec();
    let mut trace = Vec::new();
    let stalled = |x: &[CubeId]| HdaError::FanShape(CubePath::from_vec_unchecked(x.to_vec()).render(space));
    loop {
        // least peak ℓ (0-based index i = ℓ − 1) with a lower step in and an upper step out
        let peak = (2..x.len().saturating_sub(1)).find_map(|i| {
            if space.dim(x[i]) < 2 {
                return None;
            }
            let k2 = lower_index(space, x[i - 1], x[i])?;
            let k3 = upper_index(space, x[i + 1], x[i])?;
            Some((i, k2, k3))
        });
        let Some((i, mut k2, k3)) = peak else {
            break;
        };
        let k1 = lower_index(space, x[i - 2], x[i - 1]).ok_or_else(|| stalled(&x))?;
        if k2 == k3 {
            let k = if k1 < k2 { k1 } else { k1 + 1 };
            x[i - 1] = space.face(x[i], Side::Lower, k).ok_or_else(|| stalled(&x))?;
            trace.push(Rewrite {
                kind: RewriteKind::Prepare,
                position: i,
                path: CubePath::from_vec_unchecked(x.clone()),
            });
            k2 = k;
        }
        x[i] = if k2 < k3 {
            space.face(x[i + 1], Side::Lower, k2)
        } else {
            space.face(x[i - 1], Side::Upper, k3)
        }
        .ok_or_else(|| stalled(&x))?;
        trace.push(Rewrite {
            kind: RewriteKind::Lower,
            position: i + 1,
            path: CubePath::from_vec_unchecked(x.clone()),
        });
    }
    let result = CubePath::from_vec_unchecked(x);
    if !is_fan_shaped(space, &result) {
        return Err(stalled(result.cubes()));
    }
    Ok(FanShaping { result, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::CubeSpec;
    use crate::paths::{adjacency, are_homotopic, DEFAULT_CAP};

    fn square() -> PrecubicalSet {
        PrecubicalSet::from_specs(vec![
            CubeSpec::vertex("p00"),
            CubeSpec::vertex("p01"),
            CubeSpec::vertex("p10"),
            CubeSpec::vertex("p11"),
            CubeSpec::vertex("q"),
            CubeSpec::new("l", 1, &["p00"], &["p01"]),
            CubeSpec::new("r", 1, &["p10"], &["p11"]),
            CubeSpec::new("bo", 1, &["p00"], &["p10"]),
            CubeSpec::new("to", 1, &["p01"], &["p11"]),
            CubeSpec::new("e", 1, &["p11"], &["q"]),
            CubeSpec::new("x", 2, &["l", "bo"], &["r", "to"]),
        ])
        .unwrap()
    }

    #[test]
    fn fan_table() {
        assert_eq!((1..=5).map(|j| fan_dim(j, 5, 0).unwrap()).collect::<Vec<_>>(), [0, 1, 0, 1, 0]);
        assert_eq!((1..=5).map(|j| fan_dim(j, 5, 2).unwrap()).collect::<Vec<_>>(), [0, 1, 0, 1, 2]);
        assert_eq!((1..=4).map(|j| fan_dim(j, 4, 3).unwrap()).collect::<Vec<_>>(), [0, 1, 2, 3]);
        assert_eq!(fan_dim(1, 1, 2), None);
    }

    #[test]
    fn flattening_through_the_diagonal() {
        let s = square();
        let p = CubePath::parse(&s, "p00,l,x,r,p11,e").unwrap();
        assert!(!is_fan_shaped(&s, &p));
        assert_eq!(t_measure(&s, &p), 5);
        let f = fan_shape(&s, &p).unwrap();
        assert!(is_fan_shaped(&s, &f.result));
        assert_eq!(2 * t_measure(&s, &f.result), fan_bound_doubled(&s, &f.result));
        assert_eq!(f.iterations(), 1);
        let mut prev = p.clone();
        for r in &f.trace {
            assert!(adjacency(&s, &prev, &r.path).is_some());
            prev = r.path.clone();
        }
        assert_eq!(are_homotopic(&s, &p, &f.result, DEFAULT_CAP), crate::paths::HomotopyVerdict::Homotopic);
    }

    #[test]
    fn equal_indices_need_preparation() {
        // p00 -bo-> x -> to: k2 = 2 (bo = δ_2^0 x) and k3 = 2 (to = δ_2^1 x)
        let s = square();
        let p = CubePath::parse(&s, "p00,bo,x,to,p11").unwrap();
        let f = fan_shape(&s, &p).unwrap();
        assert_eq!(f.trace[0].kind, RewriteKind::Prepare);
        assert_eq!(f.result.render(&s), "(p00,l,p01,to,p11)");
    }

    #[test]
    fn fan_shaped_inputs_are_fixed() {
        let s = square();
        let p = CubePath::parse(&s, "p00,l,x").unwrap();
        let f = fan_shape(&s, &p).unwrap();
        assert!(f.trace.is_empty());
        assert_eq!(f.result, p);
        assert!(fan_shape(&s, &CubePath::parse(&s, "l,p01").unwrap()).is_err());
    }
}
