use std::collections::BTreeMap;

use super::hda::Hda;
use super::set::{CubeId, CubeSpec, PrecubicalSet, Side, ValidationReport, Violation};

/// Ordered, duplicate-free list of event names. The order is the order used
/// to sort label tuples.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EventSet {
    names: Vec<String>,
}

impl EventSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, ValidationReport> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut report = ValidationReport::ok();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                report.push(Violation::DuplicateEvent { name: n.clone() });
            }
        }
        if report.is_ok() {
            Ok(EventSet { names })
        } else {
            Err(report)
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Positions `(i_1, …, i_n)` into an [`EventSet`], 0-based. Valid tuples are
/// sorted with repetitions allowed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabelTuple(pub Vec<usize>);

impl LabelTuple {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// The tuple with its k-th entry (1-based) removed; this is the label
    /// every k-th face must carry.
    pub fn without(&self, k: usize) -> LabelTuple {
        let mut v = self.0.clone();
        v.remove(k - 1);
        LabelTuple(v)
    }

    pub fn render(&self, events: &EventSet) -> String {
        let parts: Vec<&str> = self.0.iter().map(|&i| events.names[i].as_str()).collect();
        format!("({})", parts.join(","))
    }
}

/// A labeling of an HDA's cubes by sorted event tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    pub events: EventSet,
    pub assign: BTreeMap<CubeId, LabelTuple>,
}

impl Labeling {
    pub fn label(&self, x: CubeId) -> Option<&LabelTuple> {
        self.assign.get(&x)
    }
}

/// An HDA together with a labeling that has passed [`validate_labeling`].
#[derive(Debug, Clone)]
pub struct LabeledHda {
    pub hda: Hda,
    pub labeling: Labeling,
}

impl LabeledHda {
    pub fn new(hda: Hda, labeling: Labeling) -> Result<Self, ValidationReport> {
        let report = validate_labeling(&hda, &labeling);
        if report.is_ok() {
            Ok(LabeledHda { hda, labeling })
        } else {
            Err(report)
        }
    }

    pub fn label(&self, x: CubeId) -> &LabelTuple {
        &self.labeling.assign[&x]
    }
}

/// Checks that every cube has a sorted tuple of the right length and that
/// the assignment commutes with faces: `label(δ_k^ν x) = label(x)` minus its
/// k-th entry.
pub fn validate_labeling(hda: &Hda, labeling: &Labeling) -> ValidationReport {
    let space = hda.space();
    let mut report = ValidationReport::ok();
    let events = labeling.events.len();
    for x in space.cubes() {
        let name = space.name(x).to_string();
        let Some(label) = labeling.label(x) else {
            report.push(Violation::MissingLabel { cube: name });
            continue;
        };
        if label.len() != space.dim(x) {
            report.push(Violation::LabelLength {
                cube: name.clone(),
                dim: space.dim(x),
                len: label.len(),
            });
            continue;
        }
        if let Some(&index) = label.0.iter().find(|&&i| i >= events) {
            report.push(Violation::LabelOutOfRange {
                cube: name.clone(),
                index: index + 1,
                events,
            });
            continue;
        }
        if !label.is_sorted() {
            report.push(Violation::UnsortedLabel {
                cube: name.clone(),
                label: label.0.iter().map(|i| i + 1).collect(),
            });
            continue;
        }
        for side in Side::BOTH {
            for (k, &face) in space.faces(x, side).iter().enumerate() {
                let expected = label.without(k + 1);
                if let Some(found) = labeling.label(face) {
                    if *found != expected {
                        report.push(Violation::LabelFace {
                            cube: name.clone(),
                            side,
                            k: k + 1,
                            face: space.name(face).to_string(),
                            expected: expected.0.iter().map(|i| i + 1).collect(),
                            found: found.0.iter().map(|i| i + 1).collect(),
                        });
                    }
                }
            }
        }
    }
    report
}

/// Sorted tuples of length `n` over `0..events`.
fn multisets(events: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(events: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in start..events {
            cur.push(e);
            go(events, n, e, cur, out);
            cur.pop();
        }
    }
    go(events, n, 0, &mut cur, &mut out);
    out
}

/// Id of the torus cube for a sorted tuple, e.g. `()`, `(a)`, `(a,b)`.
pub fn torus_cube_id(events: &EventSet, tuple: &[usize]) -> String {
    LabelTuple(tuple.to_vec()).render(events)
}

/// The labeling torus over `events`, truncated at `maxdim`: its n-cubes are
/// the sorted n-tuples of events and `δ_k^ν` deletes the k-th entry. Every
/// cube is labeled by itself.
pub fn torus(events: &EventSet, maxdim: usize) -> LabeledHda {
    let mut specs = Vec::new();
    let mut tuples = Vec::new();
    for n in 0..=maxdim {
        for t in multisets(events.len(), n) {
            let faces: Vec<String> = (1..=n)
                .map(|k| {
                    let mut f = t.clone();
                    f.remove(k - 1);
                    torus_cube_id(events, &f)
                })
                .collect();
            specs.push(CubeSpec {
                id: torus_cube_id(events, &t),
                dim: n,
                lower: faces.clone(),
                upper: faces,
            });
            tuples.push(t);
        }
    }
    let space = PrecubicalSet::assemble(specs).expect("torus is structurally sound");
    let mut assign = BTreeMap::new();
    for t in tuples {
        let id = space.lookup(&torus_cube_id(events, &t)).expect("torus cube");
        assign.insert(id, LabelTuple(t));
    }
    let initial = space.lookup("()").expect("torus has a vertex");
    LabeledHda {
        hda: Hda::from_parts(space, initial),
        labeling: Labeling {
            events: events.clone(),
            assign,
        },
    }
}

/// Number of size-`n` multisets over `k` elements.
pub fn multiset_count(k: usize, n: usize) -> usize {
    if k == 0 {
        return usize::from(n == 0);
    }
    // C(k + n - 1, n)
    let mut acc: u128 = 1;
    for i in 0..n as u128 {
        acc = acc * (k as u128 + i) / (i + 1);
    }
    acc as usize
}
