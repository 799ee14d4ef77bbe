//! JSON exchange format.
//!
//! ```json
//! {"cubes":[{"id":"x","dim":2,"d0":["e1","e2"],"d1":["e3","e4"]}],
//!  "initial":"i","events":["a","b"],"labels":{"x":[1,2]}}
//! ```
//!
//! `d0`/`d1` are positional (entry `k-1` is `δ_k^ν`). Label entries are
//! 1-based positions into `events`. Vertices may omit their (empty) label.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cubes::{
    validate_labeling, CubeSpec, EventSet, Hda, LabelTuple, LabeledHda, Labeling, PrecubicalSet, ValidationReport,
    Violation,
};
use crate::{HdaError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeEntry {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub d0: Vec<String>,
    #[serde(default)]
    pub d1: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub cubes: Vec<CubeEntry>,
    pub initial: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, Vec<usize>>>,
}

/// A loaded and validated model.
#[derive(Debug, Clone)]
pub struct Model {
    pub hda: Hda,
    pub labeling: Option<Labeling>,
}

impl Model {
    pub fn labeled(&self) -> Result<LabeledHda> {
        let labeling = self.labeling.clone().ok_or(HdaError::MissingLabeling)?;
        Ok(LabeledHda {
            hda: self.hda.clone(),
            labeling,
        })
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile::from_hda(&self.hda, self.labeling.as_ref())
    }
}

impl From<LabeledHda> for Model {
    fn from(l: LabeledHda) -> Self {
        Model {
            hda: l.hda,
            labeling: Some(l.labeling),
        }
    }
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files serialize")
    }

    pub fn from_hda(hda: &Hda, labeling: Option<&Labeling>) -> Self {
        let space = hda.space();
        ModelFile {
            cubes: space
                .to_specs()
                .into_iter()
                .map(|s| CubeEntry {
                    id: s.id,
                    dim: s.dim,
                    d0: s.lower,
                    d1: s.upper,
                })
                .collect(),
            initial: space.name(hda.initial()).to_string(),
            events: labeling.map(|l| l.events.names().to_vec()),
            labels: labeling.map(|l| {
                l.assign
                    .iter()
                    .map(|(&c, t)| (space.name(c).to_string(), t.0.iter().map(|i| i + 1).collect()))
                    .collect()
            }),
        }
    }

    /// Validates everything and reports all violations found.
    pub fn build(&self) -> std::result::Result<Model, ValidationReport> {
        let specs: Vec<CubeSpec> = self
            .cubes
            .iter()
            .map(|c| CubeSpec {
                id: c.id.clone(),
                dim: c.dim,
                lower: c.d0.clone(),
                upper: c.d1.clone(),
            })
            .collect();
        let space = PrecubicalSet::from_specs(specs)?;
        let hda = Hda::new(space, &self.initial)?;
        let labeling = match (&self.events, &self.labels) {
            (None, None) => None,
            (None, Some(_)) => {
                let mut r = ValidationReport::ok();
                r.push(Violation::LabelsWithoutEvents);
                return Err(r);
            }
            (Some(events), labels) => Some(self.labeling(&hda, events, labels.as_ref())?),
        };
        Ok(Model { hda, labeling })
    }

    fn labeling(
        &self,
        hda: &Hda,
        events: &[String],
        labels: Option<&BTreeMap<String, Vec<usize>>>,
    ) -> std::result::Result<Labeling, ValidationReport> {
        let space = hda.space();
        let events = EventSet::new(events.iter().cloned())?;
        let mut report = ValidationReport::ok();
        let mut assign = BTreeMap::new();
        let empty = BTreeMap::new();
        let labels = labels.unwrap_or(&empty);
        for (id, tuple) in labels {
            let Some(c) = space.lookup(id) else {
                report.push(Violation::UnknownLabeledCube { id: id.clone() });
                continue;
            };
            if let Some(&bad) = tuple.iter().find(|&&i| i == 0 || i > events.len()) {
                report.push(Violation::LabelOutOfRange {
                    cube: id.clone(),
                    index: bad,
                    events: events.len(),
                });
                continue;
            }
            assign.insert(c, LabelTuple(tuple.iter().map(|i| i - 1).collect()));
        }
        for v in space.cubes_of_dim(0) {
            assign.entry(v).or_default();
        }
        let labeling = Labeling { events, assign };
        report.extend(validate_labeling(hda, &labeling));
        if report.is_ok() {
            Ok(labeling)
        } else {
            Err(report)
        }
    }
}

/// Reads and validates a model file.
pub fn load(path: impl AsRef<Path>) -> Result<Model> {
    ModelFile::read(path)?.build().map_err(HdaError::Invalid)
}

/// Parses and validates a model from JSON text.
pub fn parse(text: &str) -> Result<Model> {
    ModelFile::parse(text)?.build().map_err(HdaError::Invalid)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EDGE: &str = r#"{"cubes":[{"id":"i","dim":0},{"id":"j","dim":0},
        {"id":"a","dim":1,"d0":["i"],"d1":["j"]}],"initial":"i",
        "events":["a"],"labels":{"a":[1]}}"#;

    #[test]
    fn round_trip() {
        let m = parse(EDGE).unwrap();
        assert_eq!(m.hda.space().len(), 3);
        let again = parse(&m.to_file().to_json()).unwrap();
        assert_eq!(again.to_file(), m.to_file());
        assert_eq!(m.labeled().unwrap().label(m.hda.space().lookup("a").unwrap()).0, vec![0]);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = EDGE.replace("\"initial\"", "\"colour\":1,\"initial\"");
        assert!(matches!(parse(&bad), Err(HdaError::Json(_))));
    }

    #[test]
    fn label_problems() {
        let zero = EDGE.replace("[1]}", "[0]}");
        let Err(HdaError::Invalid(r)) = parse(&zero) else { panic!() };
        assert!(matches!(r.violations[0], Violation::LabelOutOfRange { index: 0, .. }));
        let orphan = EDGE.replace("\"events\":[\"a\"],", "");
        let Err(HdaError::Invalid(r)) = parse(&orphan) else { panic!() };
        assert_eq!(r.violations, vec![Violation::LabelsWithoutEvents]);
        let stray = EDGE.replace("{\"a\":[1]}", "{\"a\":[1],\"q\":[]}");
        let Err(HdaError::Invalid(r)) = parse(&stray) else { panic!() };
        assert!(matches!(r.violations[0], Violation::UnknownLabeledCube { .. }));
    }

    #[test]
    fn unlabeled_models_have_no_labeling() {
        let plain = r#"{"cubes":[{"id":"i","dim":0}],"initial":"i"}"#;
        let m = parse(plain).unwrap();
        assert!(m.labeling.is_none());
        assert!(matches!(m.labeled(), Err(HdaError::MissingLabeling)));
    }
}
