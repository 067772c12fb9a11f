//! JSON surface files.
//!
//! Reading goes through serde with unknown fields rejected. Writing is done
//! by hand so every number carries 17 significant digits and the output is
//! byte-stable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::scalar::{Complex, Real};

use super::{FlatSurface, SurfaceError, SurfaceParts};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    /// Outgoing half-edge pinning the vertex label. Optional; without it
    /// vertices are numbered by their smallest outgoing half-edge id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub vertices: Vec<VertexSpec>,
    pub triangles: Vec<[usize; 3]>,
    pub gluing: Vec<[usize; 2]>,
    pub vectors: BTreeMap<String, [f64; 2]>,
    #[serde(default)]
    pub forest: Vec<usize>,
}

impl SurfaceSpec {
    pub fn from_json(text: &str) -> Result<Self, SurfaceError> {
        serde_json::from_str(text).map_err(|e| SurfaceError::Format(e.to_string()))
    }

    /// Canonical text: fixed key order, 17 significant digits per number.
    pub fn to_json(&self) -> String {
        let num = |x: f64| format!("{x:.16e}");
        let mut out = String::from("{\n  \"vertices\": [");
        for (k, v) in self.vertices.iter().enumerate() {
            let sep = if k == 0 { "\n    " } else { ",\n    " };
            let _ = write!(out, "{sep}{{\"id\": {}", v.id);
            if let Some(a) = v.angle {
                let _ = write!(out, ", \"angle\": {}", num(a));
            }
            if let Some(h) = v.anchor {
                let _ = write!(out, ", \"anchor\": {h}");
            }
            out.push('}');
        }
        out.push_str("\n  ],\n  \"triangles\": [");
        for (k, t) in self.triangles.iter().enumerate() {
            let sep = if k == 0 { "" } else { ", " };
            let _ = write!(out, "{sep}[{}, {}, {}]", t[0], t[1], t[2]);
        }
        out.push_str("],\n  \"gluing\": [");
        for (k, g) in self.gluing.iter().enumerate() {
            let sep = if k == 0 { "" } else { ", " };
            let _ = write!(out, "{sep}[{}, {}]", g[0], g[1]);
        }
        out.push_str("],\n  \"vectors\": {");
        let mut keyed: Vec<(usize, &[f64; 2])> = self
            .vectors
            .iter()
            .map(|(k, v)| (k.parse().unwrap_or(usize::MAX), v))
            .collect();
        keyed.sort_by_key(|&(k, _)| k);
        for (k, (h, z)) in keyed.iter().enumerate() {
            let sep = if k == 0 { "\n    " } else { ",\n    " };
            let _ = write!(out, "{sep}\"{h}\": [{}, {}]", num(z[0]), num(z[1]));
        }
        out.push_str("\n  },\n  \"forest\": [");
        for (k, e) in self.forest.iter().enumerate() {
            let sep = if k == 0 { "" } else { ", " };
            let _ = write!(out, "{sep}{e}");
        }
        out.push_str("]\n}\n");
        out
    }
}

/// Validate a declarative description and build the surface.
pub fn build_surface<T: Real>(spec: &SurfaceSpec) -> Result<FlatSurface<T>, SurfaceError> {
    let nh = 3 * spec.triangles.len();
    let mut twins = vec![usize::MAX; nh];
    for &[a, b] in &spec.gluing {
        if a >= nh || b >= nh || a == b || twins[a] != usize::MAX || twins[b] != usize::MAX {
            return Err(SurfaceError::Malformed(format!(
                "gluing pair [{a}, {b}] is out of range or repeats a half-edge"
            )));
        }
        twins[a] = b;
        twins[b] = a;
    }
    if let Some(h) = twins.iter().position(|&t| t == usize::MAX) {
        return Err(SurfaceError::Malformed(format!("half-edge {h} is not glued")));
    }
    let mut vectors = vec![None; nh];
    for (key, z) in &spec.vectors {
        let h: usize = key
            .parse()
            .map_err(|_| SurfaceError::Format(format!("vector key {key:?} is not a half-edge id")))?;
        if h >= nh || vectors[h].is_some() {
            return Err(SurfaceError::Malformed(format!("vector for unknown half-edge {h}")));
        }
        vectors[h] = Some(Complex::new(T::of(z[0]), T::of(z[1])));
    }
    let vectors = vectors
        .into_iter()
        .enumerate()
        .map(|(h, z)| z.ok_or_else(|| SurfaceError::Malformed(format!("half-edge {h} has no vector"))))
        .collect::<Result<Vec<_>, _>>()?;

    let n = spec.vertices.len();
    let mut target_angles = vec![None; n];
    let mut anchors = vec![None; n];
    let mut seen = vec![false; n];
    for v in &spec.vertices {
        if v.id >= n || seen[v.id] {
            return Err(SurfaceError::Malformed(format!(
                "vertex ids must be 0..{n} without repeats (found {})",
                v.id
            )));
        }
        seen[v.id] = true;
        target_angles[v.id] = v.angle.map(T::of);
        anchors[v.id] = v.anchor;
    }
    let anchors = if anchors.iter().all(Option::is_some) && n > 0 {
        Some(anchors.into_iter().map(Option::unwrap).collect())
    } else if anchors.iter().all(Option::is_none) {
        None
    } else {
        return Err(SurfaceError::Malformed(
            "either every vertex or no vertex carries an anchor".into(),
        ));
    };
    let forest: BTreeSet<usize> = spec.forest.iter().copied().collect();
    if forest.len() != spec.forest.len() {
        return Err(SurfaceError::Malformed("repeated forest edge".into()));
    }
    FlatSurface::from_parts(SurfaceParts {
        triangles: spec.triangles.clone(),
        twins,
        vectors,
        target_angles,
        anchors,
        forest,
    })
}

impl<T: Real> FlatSurface<T> {
    pub fn to_spec(&self) -> SurfaceSpec {
        SurfaceSpec {
            vertices: self
                .vertices()
                .iter()
                .map(|v| VertexSpec {
                    id: v.id,
                    angle: v.target_angle.map(Real::as_f64),
                    anchor: Some(v.anchor),
                })
                .collect(),
            triangles: self.triangles().to_vec(),
            gluing: self.edges().map(|e| [e, self.twin(e)]).collect(),
            vectors: self
                .vectors()
                .iter()
                .enumerate()
                .map(|(h, z)| (h.to_string(), [z.re.as_f64(), z.im.as_f64()]))
                .collect(),
            forest: self.forest().iter().copied().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_spec().to_json()
    }

    pub fn from_json(text: &str) -> Result<Self, SurfaceError> {
        build_surface(&SurfaceSpec::from_json(text)?)
    }
}
