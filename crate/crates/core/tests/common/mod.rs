#![allow(dead_code)]

use std::path::PathBuf;

use hda::cubes::{Hda, LabeledHda};
use hda::model::{self, Model};
use hda::paths::CubePath;

pub fn model_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(format!("{name}.json"))
}

pub fn model(name: &str) -> Model {
    model::load(model_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn hda(name: &str) -> Hda {
    model(name).hda
}

pub fn labeled(name: &str) -> LabeledHda {
    model(name).labeled().unwrap()
}

pub fn path(h: &Hda, list: &str) -> CubePath {
    CubePath::parse(h.space(), list).unwrap_or_else(|e| panic!("{list}: {e}"))
}

/// A chain of adjacent runs through the square `bc`.
pub const RUN_CHAIN: [&str; 4] = [
    "i,a,x,b,bc,c,z,d",
    "i,a,x,xc,bc,c,z,d",
    "i,a,x,xc,bc,yb,z,d",
    "i,a,x,xc,y,yb,z,d",
];
