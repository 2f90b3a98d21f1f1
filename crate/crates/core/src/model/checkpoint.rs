use serde::{Deserialize, Serialize};

use super::{CutConstraint, CutKind, Model, ModelError, PointSet};
use crate::geom::{Point, Polygon};

/// Serializable snapshot of guards, witnesses, and cuts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub guards: Vec<Point>,
    pub witnesses: Vec<Point>,
    #[serde(default)]
    pub cuts: Vec<CutRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutRecord {
    pub kind: CutKind,
    pub witnesses: Vec<Point>,
    pub rhs: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<u32>,
}

impl From<&CutConstraint> for CutRecord {
    fn from(c: &CutConstraint) -> Self {
        CutRecord {
            kind: c.kind,
            witnesses: c.witnesses.clone(),
            rhs: c.rhs,
            certificate: c.certificate,
        }
    }
}

impl Checkpoint {
    pub fn of(model: &Model) -> Self {
        Checkpoint {
            guards: model.guards().points().to_vec(),
            witnesses: model.witnesses().points().to_vec(),
            cuts: model.cuts().iter().map(CutRecord::from).collect(),
        }
    }

    /// Rebuilds a model over `polygon`.
    pub fn restore(&self, polygon: Polygon) -> Result<Model, ModelError> {
        let mut m = Model::with_sets(
            polygon,
            PointSet::from_points(self.guards.iter().cloned()),
            PointSet::from_points(self.witnesses.iter().cloned()),
        )?;
        for c in &self.cuts {
            let cut = match c.kind {
                CutKind::Sc => CutConstraint::sc(c.witnesses.clone())?,
                CutKind::Ec => CutConstraint::ec(c.witnesses.clone(), c.certificate.unwrap_or(2))?,
            };
            m.add_cut(cut);
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("checkpoint serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
