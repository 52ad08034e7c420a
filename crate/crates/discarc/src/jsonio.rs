//! JSON documents: points as `{"acc": j}` / `{"reg": [j, k]}`, arcs as
//! two-element lists, triangulations as `{"n", "base", "removed", "added"}`,
//! and index vectors as `{"triangulation", "coeffs"}`. The model parameter
//! `n` travels inside every top-level document and all points are validated
//! against it on load.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::index::IndexVector;
use crate::surface::{Arc, MarkedPoint, ModelParams, Obj};
use crate::triangulation::FanTriangulation;

#[derive(Error, Debug)]
pub enum DocumentError {
    #[error("ParseError: {0}")]
    Json(#[from] serde_json::Error),
    #[error("ParseError: {0}")]
    Model(String),
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(untagged)]
pub enum PointRepr {
    Acc { acc: u32 },
    Reg { reg: (u32, i64) },
}

impl From<MarkedPoint> for PointRepr {
    fn from(p: MarkedPoint) -> Self {
        match p {
            MarkedPoint::Accumulation { interval } => PointRepr::Acc { acc: interval },
            MarkedPoint::Regular { interval, position } => {
                PointRepr::Reg { reg: (interval, position) }
            }
        }
    }
}

impl From<PointRepr> for MarkedPoint {
    fn from(p: PointRepr) -> Self {
        match p {
            PointRepr::Acc { acc } => MarkedPoint::acc(acc),
            PointRepr::Reg { reg: (j, k) } => MarkedPoint::reg(j, k),
        }
    }
}

pub type ArcRepr = (PointRepr, PointRepr);

pub fn arc_repr(arc: &Arc) -> ArcRepr {
    (arc.lo().into(), arc.hi().into())
}

pub fn arc_from_repr(repr: ArcRepr, params: ModelParams) -> Result<Arc, DocumentError> {
    let (p, q): (MarkedPoint, MarkedPoint) = (repr.0.into(), repr.1.into());
    for point in [p, q] {
        if !params.contains_point(point) {
            return Err(DocumentError::Model(format!(
                "point {point} is outside the model with n = {}",
                params.n()
            )));
        }
    }
    Arc::new(p, q).map_err(|e| DocumentError::Model(e.to_string()))
}

/// On-disk form of a fan triangulation. Flip histories are not serialized;
/// the normalized description determines the arc set.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TriangulationDoc {
    pub n: u32,
    pub base: PointRepr,
    #[serde(default)]
    pub removed: Vec<ArcRepr>,
    #[serde(default)]
    pub added: Vec<ArcRepr>,
}

impl TriangulationDoc {
    pub fn from_triangulation(tri: &FanTriangulation) -> Self {
        TriangulationDoc {
            n: tri.params().n(),
            base: tri.base().into(),
            removed: tri.removed().map(arc_repr).collect(),
            added: tri.added().map(arc_repr).collect(),
        }
    }

    pub fn into_triangulation(self) -> Result<FanTriangulation, DocumentError> {
        let params = ModelParams::new(self.n).map_err(|e| DocumentError::Model(e.to_string()))?;
        let base: MarkedPoint = self.base.into();
        let removed = self
            .removed
            .into_iter()
            .map(|r| arc_from_repr(r, params))
            .collect::<Result<Vec<_>, _>>()?;
        let added = self
            .added
            .into_iter()
            .map(|r| arc_from_repr(r, params))
            .collect::<Result<Vec<_>, _>>()?;
        FanTriangulation::from_parts(params, base, removed, added)
            .map_err(|e| DocumentError::Model(e.to_string()))
    }
}

pub fn triangulation_to_json(tri: &FanTriangulation) -> String {
    serde_json::to_string_pretty(&TriangulationDoc::from_triangulation(tri))
        .expect("triangulation documents always serialize")
}

pub fn triangulation_from_json(json: &str) -> Result<FanTriangulation, DocumentError> {
    let doc: TriangulationDoc = serde_json::from_str(json)?;
    doc.into_triangulation()
}

/// On-disk form of an index vector, coefficients in canonical arc order.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct IndexVectorDoc {
    pub triangulation: TriangulationDoc,
    pub coeffs: Vec<(ArcRepr, i64)>,
}

impl IndexVectorDoc {
    pub fn from_vector(v: &IndexVector) -> Self {
        IndexVectorDoc {
            triangulation: TriangulationDoc::from_triangulation(v.triangulation()),
            coeffs: v.coefficients().map(|(a, c)| (arc_repr(a), c)).collect(),
        }
    }

    pub fn into_vector(self) -> Result<IndexVector, DocumentError> {
        let tri = self.triangulation.into_triangulation()?;
        let params = tri.params();
        let entries = self
            .coeffs
            .into_iter()
            .map(|(repr, c)| Ok((arc_from_repr(repr, params)?, c)))
            .collect::<Result<Vec<_>, DocumentError>>()?;
        IndexVector::from_entries(&tri, entries).map_err(|e| DocumentError::Model(e.to_string()))
    }
}

pub fn index_vector_from_json(json: &str) -> Result<IndexVector, DocumentError> {
    let doc: IndexVectorDoc = serde_json::from_str(json)?;
    doc.into_vector()
}

pub fn index_vector_to_json(v: &IndexVector) -> String {
    serde_json::to_string_pretty(&IndexVectorDoc::from_vector(v))
        .expect("index vector documents always serialize")
}

/// Object document: a list of arcs.
pub fn obj_repr(obj: &Obj) -> Vec<ArcRepr> {
    obj.summands().iter().map(arc_repr).collect()
}

pub fn obj_from_json(json: &str, params: ModelParams) -> Result<Obj, DocumentError> {
    let reprs: Vec<ArcRepr> = serde_json::from_str(json)?;
    let arcs = reprs
        .into_iter()
        .map(|r| arc_from_repr(r, params))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Obj::from_arcs(arcs))
}

pub fn validate_obj(obj: &Obj, params: ModelParams) -> Result<(), DocumentError> {
    for arc in obj.summands() {
        if !params.contains_arc(arc) {
            return Err(DocumentError::Model(format!(
                "arc {arc} is outside the model with n = {}",
                params.n()
            )));
        }
    }
    Ok(())
}
