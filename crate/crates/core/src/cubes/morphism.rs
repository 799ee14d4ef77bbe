use std::collections::BTreeMap;

use serde::Serialize;

use super::hda::Hda;
use super::set::{CubeId, Side};
use crate::{HdaError, Result};

/// A graded map between the cubes of two HDA.
#[derive(Debug, Clone)]
pub struct Morphism<'a> {
    pub source: &'a Hda,
    pub target: &'a Hda,
    /// Image of each source cube, indexed by source `CubeId`.
    pub map: Vec<CubeId>,
    /// Whether the initial cube must be preserved.
    pub pointed: bool,
}

/// Why a cube map fails to be a (pointed) precubical morphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MorphismDefect {
    Dimension {
        cube: String,
        image: String,
    },
    Face {
        cube: String,
        side: Side,
        k: usize,
        image_of_face: String,
        face_of_image: String,
    },
    Initial {
        image: String,
    },
}

impl<'a> Morphism<'a> {
    pub fn identity(hda: &'a Hda) -> Self {
        Morphism {
            source: hda,
            target: hda,
            map: hda.space().cubes().collect(),
            pointed: true,
        }
    }

    /// Builds a map from source id to target id; every source cube needs an image.
    pub fn from_names(
        source: &'a Hda,
        target: &'a Hda,
        names: &BTreeMap<String, String>,
        pointed: bool,
    ) -> Result<Self> {
        for key in names.keys() {
            if source.space().lookup(key).is_none() {
                return Err(HdaError::UnknownCube(key.clone()));
            }
        }
        let map = source
            .space()
            .cubes()
            .map(|x| {
                let name = source.space().name(x);
                let image = names
                    .get(name)
                    .ok_or_else(|| HdaError::MapNotTotal(name.to_string()))?;
                target
                    .space()
                    .lookup(image)
                    .ok_or_else(|| HdaError::UnknownCube(image.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism {
            source,
            target,
            map,
            pointed,
        })
    }

    pub fn apply(&self, x: CubeId) -> CubeId {
        self.map[x.index()]
    }

    /// First failure of dimension preservation, face commutation or (when
    /// pointed) initial preservation, scanning cubes in storage order.
    pub fn defect(&self) -> Option<MorphismDefect> {
        let (s, t) = (self.source.space(), self.target.space());
        if self.pointed && self.apply(self.source.initial()) != self.target.initial() {
            return Some(MorphismDefect::Initial {
                image: t.name(self.apply(self.source.initial())).to_string(),
            });
        }
        for x in s.cubes() {
            let fx = self.apply(x);
            if s.dim(x) != t.dim(fx) {
                return Some(MorphismDefect::Dimension {
                    cube: s.name(x).to_string(),
                    image: t.name(fx).to_string(),
                });
            }
            for side in Side::BOTH {
                for (k, (&face, &image_face)) in s.faces(x, side).iter().zip(t.faces(fx, side)).enumerate() {
                    if self.apply(face) != image_face {
                        return Some(MorphismDefect::Face {
                            cube: s.name(x).to_string(),
                            side,
                            k: k + 1,
                            image_of_face: t.name(self.apply(face)).to_string(),
                            face_of_image: t.name(image_face).to_string(),
                        });
                    }
                }
            }
        }
        None
    }

    pub fn is_valid(&self) -> bool {
        self.defect().is_none()
    }

    pub fn is_bijective(&self) -> bool {
        let mut hit = vec![false; self.target.space().len()];
        for &y in &self.map {
            if std::mem::replace(&mut hit[y.index()], true) {
                return false;
            }
        }
        hit.into_iter().all(|h| h)
    }

    pub fn to_names(&self) -> BTreeMap<String, String> {
        self.source
            .space()
            .cubes()
            .map(|x| {
                (
                    self.source.space().name(x).to_string(),
                    self.target.space().name(self.apply(x)).to_string(),
                )
            })
            .collect()
    }
}

/// Searches for a pointed isomorphism `left → right` by backtracking.
///
/// Candidates for a cube are drawn from the cofaces of the image of one of
/// its already mapped faces, so the search is essentially forced on
/// connected inputs.
pub fn pointed_isomorphism(left: &Hda, right: &Hda) -> Option<Vec<CubeId>> {
    let (a, b) = (left.space(), right.space());
    if a.count_by_dim() != b.count_by_dim() {
        return None;
    }
    let n = a.len();
    let mut map: Vec<Option<CubeId>> = vec![None; n];
    let mut used = vec![false; n];
    map[left.initial().index()] = Some(right.initial());
    used[right.initial().index()] = true;

    // Assignment order: BFS over the face/coface graph from the initial
    // cube, then any leftovers in storage order.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[left.initial().index()] = true;
    let mut queue = std::collections::VecDeque::from([left.initial()]);
    while let Some(x) = queue.pop_front() {
        order.push(x);
        let neighbours = Side::BOTH
            .iter()
            .flat_map(|&s| a.faces(x, s).iter().copied().chain(a.cofaces(x, s).iter().map(|&(_, y)| y)))
            .collect::<Vec<_>>();
        for y in neighbours {
            if !seen[y.index()] {
                seen[y.index()] = true;
                queue.push_back(y);
            }
        }
    }
    for x in a.cubes() {
        if !seen[x.index()] {
            order.push(x);
        }
    }

    fn consistent(
        a: &super::PrecubicalSet,
        b: &super::PrecubicalSet,
        map: &[Option<CubeId>],
        x: CubeId,
        y: CubeId,
    ) -> bool {
        if a.dim(x) != b.dim(y) {
            return false;
        }
        for side in Side::BOTH {
            // faces of x already mapped must land on faces of y
            for (&fx, &fy) in a.faces(x, side).iter().zip(b.faces(y, side)) {
                if let Some(img) = map[fx.index()] {
                    if img != fy {
                        return false;
                    }
                }
            }
            // mapped cofaces of x must have y as the same face
            for &(k, c) in a.cofaces(x, side) {
                if let Some(img) = map[c.index()] {
                    if b.face(img, side, k) != Some(y) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn candidates(
        a: &super::PrecubicalSet,
        b: &super::PrecubicalSet,
        map: &[Option<CubeId>],
        x: CubeId,
    ) -> Vec<CubeId> {
        for side in Side::BOTH {
            for (k, &f) in a.faces(x, side).iter().enumerate() {
                if let Some(img) = map[f.index()] {
                    return b
                        .cofaces(img, side)
                        .iter()
                        .filter(|&&(kk, _)| kk == k + 1)
                        .map(|&(_, y)| y)
                        .collect();
                }
            }
            for &(k, c) in a.cofaces(x, side) {
                if let Some(img) = map[c.index()] {
                    return b.face(img, side, k).into_iter().collect();
                }
            }
        }
        b.cubes_of_dim(a.dim(x)).collect()
    }

    fn search(
        a: &super::PrecubicalSet,
        b: &super::PrecubicalSet,
        order: &[CubeId],
        pos: usize,
        map: &mut Vec<Option<CubeId>>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(&x) = order.get(pos) else {
            return true;
        };
        if map[x.index()].is_some() {
            return search(a, b, order, pos + 1, map, used);
        }
        for y in candidates(a, b, map, x) {
            if used[y.index()] || !consistent(a, b, map, x, y) {
                continue;
            }
            map[x.index()] = Some(y);
            used[y.index()] = true;
            if search(a, b, order, pos + 1, map, used) {
                return true;
            }
            map[x.index()] = None;
            used[y.index()] = false;
        }
        false
    }

    if !consistent(a, b, &map, left.initial(), right.initial()) {
        return None;
    }
    if search(a, b, &order, 0, &mut map, &mut used) {
        Some(map.into_iter().map(|m| m.expect("complete assignment")).collect())
    } else {
        None
    }
}
