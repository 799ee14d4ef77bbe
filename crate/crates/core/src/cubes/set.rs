use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Index of a cube inside one [`PrecubicalSet`].
///
/// Cubes are stored in ascending `(dimension, id)` order, so comparing two
/// `CubeId`s of the same set compares their dimensions first and their
/// string ids second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeId(u32);

impl CubeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(index: usize) -> Self {
        CubeId(u32::try_from(index).expect("cube index overflows u32"))
    }
}

/// Which family of face maps: lower (`ν = 0`) or upper (`ν = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Lower, Side::Upper];

    pub fn bit(self) -> u8 {
        match self {
            Side::Lower => 0,
            Side::Upper => 1,
        }
    }
}

/// Unresolved description of one cube, as read from a model file.
///
/// `lower[k - 1]` names the k-th lower face, `upper[k - 1]` the k-th upper face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeSpec {
    pub id: String,
    pub dim: usize,
    pub lower: Vec<String>,
    pub upper: Vec<String>,
}

impl CubeSpec {
    pub fn new(id: impl Into<String>, dim: usize, lower: &[&str], upper: &[&str]) -> Self {
        CubeSpec {
            id: id.into(),
            dim,
            lower: lower.iter().map(|s| s.to_string()).collect(),
            upper: upper.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn vertex(id: impl Into<String>) -> Self {
        CubeSpec {
            id: id.into(),
            dim: 0,
            lower: Vec::new(),
            upper: Vec::new(),
        }
    }

    fn faces(&self, side: Side) -> &[String] {
        match side {
            Side::Lower => &self.lower,
            Side::Upper => &self.upper,
        }
    }
}

/// One failed check. Face indices `k`, `l` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    EmptyModel,
    DuplicateId {
        id: String,
    },
    DanglingFace {
        cube: String,
        side: Side,
        k: usize,
        target: String,
    },
    WrongArity {
        cube: String,
        dim: usize,
        lower: usize,
        upper: usize,
    },
    FaceDimension {
        cube: String,
        side: Side,
        k: usize,
        face: String,
        expected: usize,
        found: usize,
    },
    /// `δ_k^ν δ_l^μ x = lhs` differs from `δ_{l-1}^μ δ_k^ν x = rhs`.
    PrecubicalIdentity {
        cube: String,
        k: usize,
        l: usize,
        nu: u8,
        mu: u8,
        lhs: String,
        rhs: String,
    },
    MissingInitial {
        id: String,
    },
    InitialDimension {
        id: String,
        dim: usize,
    },
    MissingLabel {
        cube: String,
    },
    UnknownLabeledCube {
        id: String,
    },
    LabelLength {
        cube: String,
        dim: usize,
        len: usize,
    },
    LabelOutOfRange {
        cube: String,
        index: usize,
        events: usize,
    },
    UnsortedLabel {
        cube: String,
        label: Vec<usize>,
    },
    LabelFace {
        cube: String,
        side: Side,
        k: usize,
        face: String,
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    DuplicateEvent {
        name: String,
    },
    LabelsWithoutEvents,
}

/// Outcome of a validation pass: `ok` iff no violations were found.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok() -> Self {
        Self::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.violations.first() {
            None => write!(f, "ok"),
            Some(first) => write!(
                f,
                "{} violation(s), first: {}",
                self.violations.len(),
                serde_json::to_string(first).unwrap_or_default()
            ),
        }
    }
}

#[derive(Debug, Clone)]
struct CubeData {
    id: String,
    dim: usize,
    lower: Vec<CubeId>,
    upper: Vec<CubeId>,
}

/// A finite precubical set: cubes graded by dimension with lower and upper
/// face maps.
///
/// Construction always checks face closure, arities and face dimensions.
/// The precubical identity is checked by [`PrecubicalSet::from_specs`] and
/// can be re-checked with [`PrecubicalSet::validate`].
#[derive(Debug, Clone)]
pub struct PrecubicalSet {
    cubes: Vec<CubeData>,
    by_id: HashMap<String, CubeId>,
    lower_cofaces: Vec<Vec<(usize, CubeId)>>,
    upper_cofaces: Vec<Vec<(usize, CubeId)>>,
}

impl PrecubicalSet {
    /// Builds and fully validates a precubical set.
    pub fn from_specs(specs: Vec<CubeSpec>) -> Result<Self, ValidationReport> {
        let set = Self::assemble(specs)?;
        let report = set.validate();
        if report.is_ok() {
            Ok(set)
        } else {
            Err(report)
        }
    }

    /// Resolves ids and checks structure, but not the precubical identity.
    pub(crate) fn assemble(mut specs: Vec<CubeSpec>) -> Result<Self, ValidationReport> {
        let mut report = ValidationReport::ok();
        if specs.is_empty() {
            report.push(Violation::EmptyModel);
            return Err(report);
        }
        specs.sort_by(|a, b| (a.dim, &a.id).cmp(&(b.dim, &b.id)));

        let mut by_id = HashMap::with_capacity(specs.len());
        for (i, spec) in specs.iter().enumerate() {
            if by_id.insert(spec.id.clone(), CubeId::from_index(i)).is_some() {
                report.push(Violation::DuplicateId {
                    id: spec.id.clone(),
                });
            }
        }

        for spec in &specs {
            if spec.lower.len() != spec.dim || spec.upper.len() != spec.dim {
                report.push(Violation::WrongArity {
                    cube: spec.id.clone(),
                    dim: spec.dim,
                    lower: spec.lower.len(),
                    upper: spec.upper.len(),
                });
            }
            for side in Side::BOTH {
                for (i, target) in spec.faces(side).iter().enumerate() {
                    match by_id.get(target) {
                        None => report.push(Violation::DanglingFace {
                            cube: spec.id.clone(),
                            side,
                            k: i + 1,
                            target: target.clone(),
                        }),
                        Some(face) => {
                            let found = specs[face.index()].dim;
                            if found + 1 != spec.dim {
                                report.push(Violation::FaceDimension {
                                    cube: spec.id.clone(),
                                    side,
                                    k: i + 1,
                                    face: target.clone(),
                                    expected: spec.dim.saturating_sub(1),
                                    found,
                                });
                            }
                        }
                    }
                }
            }
        }
        if !report.is_ok() {
            return Err(report);
        }

        let resolve = |names: &[String]| -> Vec<CubeId> { names.iter().map(|n| by_id[n]).collect() };
        let cubes: Vec<CubeData> = specs
            .iter()
            .map(|s| CubeData {
                id: s.id.clone(),
                dim: s.dim,
                lower: resolve(&s.lower),
                upper: resolve(&s.upper),
            })
            .collect();

        let mut lower_cofaces = vec![Vec::new(); cubes.len()];
        let mut upper_cofaces = vec![Vec::new(); cubes.len()];
        for (i, c) in cubes.iter().enumerate() {
            let y = CubeId::from_index(i);
            for (k, f) in c.lower.iter().enumerate() {
                lower_cofaces[f.index()].push((k + 1, y));
            }
            for (k, f) in c.upper.iter().enumerate() {
                upper_cofaces[f.index()].push((k + 1, y));
            }
        }
        for list in lower_cofaces.iter_mut().chain(upper_cofaces.iter_mut()) {
            list.sort_unstable();
        }

        Ok(PrecubicalSet {
            cubes,
            by_id,
            lower_cofaces,
            upper_cofaces,
        })
    }

    /// Checks the precubical identity `δ_k^ν δ_l^μ = δ_{l-1}^μ δ_k^ν` for
    /// every cube, every `k < l` and every `ν, μ`.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::ok();
        for x in self.cubes() {
            let n = self.dim(x);
            for l in 2..=n {
                for k in 1..l {
                    for nu in Side::BOTH {
                        for mu in Side::BOTH {
                            let lhs = self.face_unchecked(self.face_unchecked(x, mu, l), nu, k);
                            let rhs = self.face_unchecked(self.face_unchecked(x, nu, k), mu, l - 1);
                            if lhs != rhs {
                                report.push(Violation::PrecubicalIdentity {
                                    cube: self.name(x).to_string(),
                                    k,
                                    l,
                                    nu: nu.bit(),
                                    mu: mu.bit(),
                                    lhs: self.name(lhs).to_string(),
                                    rhs: self.name(rhs).to_string(),
                                });
                            }
                        }
                    }
                }
            }
        }
        report
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    /// All cubes in ascending `(dimension, id)` order.
    pub fn cubes(&self) -> impl DoubleEndedIterator<Item = CubeId> + ExactSizeIterator + '_ {
        (0..self.cubes.len()).map(CubeId::from_index)
    }

    pub fn cubes_of_dim(&self, dim: usize) -> impl Iterator<Item = CubeId> + '_ {
        self.cubes().filter(move |&c| self.dim(c) == dim)
    }

    pub fn max_dim(&self) -> usize {
        self.cubes.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_dim() + 1];
        for c in &self.cubes {
            counts[c.dim] += 1;
        }
        counts
    }

    pub fn lookup(&self, id: &str) -> Option<CubeId> {
        self.by_id.get(id).copied()
    }

    pub fn name(&self, x: CubeId) -> &str {
        &self.cubes[x.index()].id
    }

    pub fn dim(&self, x: CubeId) -> usize {
        self.cubes[x.index()].dim
    }

    pub fn faces(&self, x: CubeId, side: Side) -> &[CubeId] {
        let c = &self.cubes[x.index()];
        match side {
            Side::Lower => &c.lower,
            Side::Upper => &c.upper,
        }
    }

    /// `δ_k^side x` with 1-based `k`, or `None` when `k` is out of range.
    pub fn face(&self, x: CubeId, side: Side, k: usize) -> Option<CubeId> {
        if k == 0 {
            return None;
        }
        self.faces(x, side).get(k - 1).copied()
    }

    pub(crate) fn face_unchecked(&self, x: CubeId, side: Side, k: usize) -> CubeId {
        self.faces(x, side)[k - 1]
    }

    pub fn lower(&self, x: CubeId, k: usize) -> Option<CubeId> {
        self.face(x, Side::Lower, k)
    }

    pub fn upper(&self, x: CubeId, k: usize) -> Option<CubeId> {
        self.face(x, Side::Upper, k)
    }

    /// Pairs `(k, y)` with `x = δ_k^side y`, sorted.
    pub fn cofaces(&self, x: CubeId, side: Side) -> &[(usize, CubeId)] {
        match side {
            Side::Lower => &self.lower_cofaces[x.index()],
            Side::Upper => &self.upper_cofaces[x.index()],
        }
    }

    /// Resolves a list of ids.
    pub fn resolve<S: AsRef<str>>(&self, ids: &[S]) -> crate::Result<Vec<CubeId>> {
        ids.iter()
            .map(|s| {
                self.lookup(s.as_ref())
                    .ok_or_else(|| crate::HdaError::UnknownCube(s.as_ref().to_string()))
            })
            .collect()
    }

    /// Exports the set back to unresolved specs, in storage order.
    pub fn to_specs(&self) -> Vec<CubeSpec> {
        self.cubes
            .iter()
            .map(|c| CubeSpec {
                id: c.id.clone(),
                dim: c.dim,
                lower: c.lower.iter().map(|&f| self.name(f).to_string()).collect(),
                upper: c.upper.iter().map(|&f| self.name(f).to_string()).collect(),
            })
            .collect()
    }

    /// The sub-precubical set spanned by `keep`, which must be closed under
    /// faces. Returns the subset and, per new cube, the old cube it came from.
    pub fn restrict(&self, keep: &[bool]) -> Result<(PrecubicalSet, Vec<CubeId>), ValidationReport> {
        let specs: Vec<CubeSpec> = self
            .to_specs()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| keep[*i])
            .map(|(_, s)| s)
            .collect();
        let sub = PrecubicalSet::assemble(specs)?;
        let origin = sub.cubes().map(|c| self.by_id[sub.name(c)]).collect();
        Ok((sub, origin))
    }
}

/// Validates unresolved cube descriptions: face closure, arity, face
/// dimensions, then the precubical identity.
pub fn validate_precubical(specs: &[CubeSpec]) -> ValidationReport {
    match PrecubicalSet::assemble(specs.to_vec()) {
        Err(report) => report,
        Ok(set) => set.validate(),
    }
}

/// The componentwise product of two precubical sets.
#[derive(Debug, Clone)]
pub struct Product {
    pub space: PrecubicalSet,
    /// For each product cube, its two components.
    pub components: Vec<(CubeId, CubeId)>,
    index: HashMap<(CubeId, CubeId), CubeId>,
}

impl Product {
    pub fn pair(&self, x: CubeId, y: CubeId) -> Option<CubeId> {
        self.index.get(&(x, y)).copied()
    }
}

/// Cubes are pairs of equal dimension with `δ_k^ν (x, y) = (δ_k^ν x, δ_k^ν y)`.
pub fn product(left: &PrecubicalSet, right: &PrecubicalSet) -> Product {
    let pair_name = |x: CubeId, y: CubeId| format!("({},{})", left.name(x), right.name(y));
    let mut specs = Vec::new();
    for x in left.cubes() {
        for y in right.cubes_of_dim(left.dim(x)) {
            let faces = |side| -> Vec<String> {
                left.faces(x, side)
                    .iter()
                    .zip(right.faces(y, side))
                    .map(|(&fx, &fy)| pair_name(fx, fy))
                    .collect()
            };
            specs.push(CubeSpec {
                id: pair_name(x, y),
                dim: left.dim(x),
                lower: faces(Side::Lower),
                upper: faces(Side::Upper),
            });
        }
    }
    let space = PrecubicalSet::assemble(specs).expect("product of valid sets is structurally sound");
    let mut by_name = HashMap::new();
    for x in left.cubes() {
        for y in right.cubes_of_dim(left.dim(x)) {
            by_name.insert(pair_name(x, y), (x, y));
        }
    }
    let components: Vec<_> = space.cubes().map(|c| by_name[space.name(c)]).collect();
    let index = components
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, CubeId::from_index(i)))
        .collect();
    Product {
        space,
        components,
        index,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<CubeSpec> {
        vec![
            CubeSpec::vertex("p00"),
            CubeSpec::vertex("p01"),
            CubeSpec::vertex("p10"),
            CubeSpec::vertex("p11"),
            CubeSpec::new("l", 1, &["p00"], &["p01"]),
            CubeSpec::new("r", 1, &["p10"], &["p11"]),
            CubeSpec::new("bo", 1, &["p00"], &["p10"]),
            CubeSpec::new("t", 1, &["p01"], &["p11"]),
            CubeSpec::new("x", 2, &["l", "bo"], &["r", "t"]),
        ]
    }

    #[test]
    fn square_validates() {
        assert!(validate_precubical(&square()).is_ok());
    }

    #[test]
    fn lone_vertex_validates() {
        assert!(validate_precubical(&[CubeSpec::vertex("i")]).is_ok());
    }

    #[test]
    fn redirected_corner_is_reported_with_indices() {
        let mut specs = square();
        specs.push(CubeSpec::vertex("q"));
        specs[6] = CubeSpec::new("bo", 1, &["q"], &["p10"]);
        let report = validate_precubical(&specs);
        assert_eq!(
            report.violations,
            vec![Violation::PrecubicalIdentity {
                cube: "x".into(),
                k: 1,
                l: 2,
                nu: 0,
                mu: 0,
                lhs: "q".into(),
                rhs: "p00".into(),
            }]
        );
    }

    #[test]
    fn structural_errors() {
        let mut specs = square();
        specs[8] = CubeSpec::new("x", 2, &["l"], &["r", "t"]);
        assert!(matches!(
            validate_precubical(&specs).violations[0],
            Violation::WrongArity { .. }
        ));

        let mut specs = square();
        specs[4] = CubeSpec::new("l", 1, &["nowhere"], &["p01"]);
        assert!(matches!(
            validate_precubical(&specs).violations[0],
            Violation::DanglingFace { k: 1, .. }
        ));

        let mut specs = square();
        specs[4] = CubeSpec::new("l", 1, &["bo"], &["p01"]);
        assert!(matches!(
            validate_precubical(&specs).violations[0],
            Violation::FaceDimension { .. }
        ));

        let mut specs = square();
        specs.push(CubeSpec::vertex("p00"));
        assert!(matches!(
            validate_precubical(&specs).violations[0],
            Violation::DuplicateId { .. }
        ));

        assert_eq!(validate_precubical(&[]).violations, vec![Violation::EmptyModel]);
    }

    #[test]
    fn storage_order_is_dimension_then_id() {
        let set = PrecubicalSet::from_specs(square()).unwrap();
        let names: Vec<_> = set.cubes().map(|c| set.name(c)).collect();
        assert_eq!(names, ["p00", "p01", "p10", "p11", "bo", "l", "r", "t", "x"]);
        let x = set.lookup("x").unwrap();
        assert_eq!(set.name(set.lower(x, 2).unwrap()), "bo");
        assert_eq!(set.cofaces(set.lookup("bo").unwrap(), Side::Lower), &[(2, x)]);
    }

    #[test]
    fn edge_times_edge() {
        let edge = PrecubicalSet::from_specs(vec![
            CubeSpec::vertex("s"),
            CubeSpec::vertex("t"),
            CubeSpec::new("e", 1, &["s"], &["t"]),
        ])
        .unwrap();
        let p = product(&edge, &edge);
        assert_eq!(p.space.count_by_dim(), vec![4, 1]);
        assert!(p.space.validate().is_ok());
        let e = edge.lookup("e").unwrap();
        let pe = p.pair(e, e).unwrap();
        assert_eq!(p.space.name(pe), "(e,e)");
    }

    #[test]
    fn restrict_requires_face_closure() {
        let set = PrecubicalSet::from_specs(square()).unwrap();
        let mut keep = vec![true; set.len()];
        keep[set.lookup("x").unwrap().index()] = false;
        let (hollow, origin) = set.restrict(&keep).unwrap();
        assert_eq!(hollow.len(), 8);
        assert_eq!(set.name(origin[0]), "p00");
        keep[set.lookup("p00").unwrap().index()] = false;
        assert!(set.restrict(&keep).is_err());
    }
}
