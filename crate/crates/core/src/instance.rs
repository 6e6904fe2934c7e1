//! JSON instance files.
//!
//! ```json
//! {"kind": "tree_vertex", "ground": [1, 2, 3],
//!  "data": {"edges": [[1, 2], [2, 3]]}, "winning": [1, 3]}
//! ```
//!
//! `tree_edge` lists one vertex pair per ground element, in ground order.
//! `affine` carries `{"dim": 1|2, "coords": {label: [ints]}}` and
//! `explicit` carries `{"family": [[labels]]}`. Labels may be strings or
//! integers; they are read as strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::game::{GameError, GameSpec};
use crate::geometry::{build_geometry, GeometryDescriptor, GeometryError};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("winning: {0}")]
    Game(#[from] GameError),
}

impl InstanceError {
    /// Whether the failure is a convex-geometry axiom violation.
    pub fn is_axiom_violation(&self) -> bool {
        matches!(self, InstanceError::Geometry(GeometryError::AxiomViolation { .. }))
    }
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> InstanceError {
    InstanceError::Field {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawLabel {
    Str(String),
    Int(i64),
}

impl From<RawLabel> for String {
    fn from(l: RawLabel) -> Self {
        match l {
            RawLabel::Str(s) => s,
            RawLabel::Int(i) => i.to_string(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    kind: String,
    ground: Vec<RawLabel>,
    data: Value,
    winning: Vec<RawLabel>,
}

#[derive(Serialize)]
struct CanonicalInstance<'a> {
    kind: &'a str,
    ground: &'a [String],
    data: Value,
    winning: &'a [String],
}

/// A parsed instance file: a geometry description plus a winning set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub geometry: GeometryDescriptor,
    pub winning: Vec<String>,
}

fn label_of(v: &Value, field: &str) -> Result<String, InstanceError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() => Ok(n.to_string()),
        _ => Err(field_err(field, format!("expected a label, got {v}"))),
    }
}

fn pairs(data: &Value) -> Result<Vec<(String, String)>, InstanceError> {
    let edges = data
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| field_err("data.edges", "expected a list of [a, b] pairs"))?;
    edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let field = format!("data.edges[{i}]");
            match e.as_array().map(Vec::as_slice) {
                Some([a, b]) => Ok((label_of(a, &field)?, label_of(b, &field)?)),
                _ => Err(field_err(field, "expected a pair [a, b]")),
            }
        })
        .collect()
}

fn check_keys(data: &Value, allowed: &[&str]) -> Result<(), InstanceError> {
    let map = data
        .as_object()
        .ok_or_else(|| field_err("data", "expected an object"))?;
    for k in map.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(field_err(format!("data.{k}"), "unknown field"));
        }
    }
    Ok(())
}

impl Instance {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let raw: RawInstance = serde_json::from_str(text)?;
        let ground: Vec<String> = raw.ground.into_iter().map(String::from).collect();
        let winning: Vec<String> = raw.winning.into_iter().map(String::from).collect();
        if winning.is_empty() {
            return Err(field_err("winning", "must be nonempty"));
        }
        for w in &winning {
            if !ground.contains(w) {
                return Err(field_err("winning", format!("unknown label {w:?}")));
            }
        }
        let data = &raw.data;
        let geometry = match raw.kind.as_str() {
            "explicit" => {
                check_keys(data, &["family"])?;
                let family = data
                    .get("family")
                    .and_then(Value::as_array)
                    .ok_or_else(|| field_err("data.family", "expected a list of label lists"))?;
                let family = family
                    .iter()
                    .enumerate()
                    .map(|(i, k)| {
                        let field = format!("data.family[{i}]");
                        k.as_array()
                            .ok_or_else(|| field_err(&field, "expected a list of labels"))?
                            .iter()
                            .map(|l| label_of(l, &field))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                GeometryDescriptor::Explicit { ground, family }
            }
            "tree_vertex" => {
                check_keys(data, &["edges"])?;
                GeometryDescriptor::TreeVertex {
                    ground,
                    edges: pairs(data)?,
                }
            }
            "tree_edge" => {
                check_keys(data, &["edges"])?;
                let edges = pairs(data)?;
                if edges.len() != ground.len() {
                    return Err(field_err(
                        "data.edges",
                        format!("expected one pair per ground element ({}), got {}", ground.len(), edges.len()),
                    ));
                }
                GeometryDescriptor::TreeEdge { ground, edges }
            }
            "affine" => {
                check_keys(data, &["dim", "coords"])?;
                let dim = data
                    .get("dim")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| field_err("data.dim", "expected 1 or 2"))?;
                let dim = u8::try_from(dim).map_err(|_| field_err("data.dim", "expected 1 or 2"))?;
                let coords = data
                    .get("coords")
                    .and_then(Value::as_object)
                    .ok_or_else(|| field_err("data.coords", "expected an object mapping labels to points"))?;
                for k in coords.keys() {
                    if !ground.contains(k) {
                        return Err(field_err(format!("data.coords.{k}"), "label not in ground"));
                    }
                }
                let coords = ground
                    .iter()
                    .map(|l| {
                        let field = format!("data.coords.{l}");
                        coords
                            .get(l)
                            .and_then(Value::as_array)
                            .ok_or_else(|| field_err(&field, "missing point"))?
                            .iter()
                            .map(|x| x.as_i64().ok_or_else(|| field_err(&field, "expected integers")))
                            .collect::<Result<Vec<i64>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                GeometryDescriptor::Affine { ground, dim, coords }
            }
            other => {
                return Err(field_err(
                    "kind",
                    format!("unknown kind {other:?}; expected explicit, tree_vertex, tree_edge or affine"),
                ))
            }
        };
        Ok(Instance { geometry, winning })
    }

    pub fn kind(&self) -> &'static str {
        match self.geometry {
            GeometryDescriptor::Explicit { .. } => "explicit",
            GeometryDescriptor::TreeVertex { .. } => "tree_vertex",
            GeometryDescriptor::TreeEdge { .. } => "tree_edge",
            GeometryDescriptor::Affine { .. } => "affine",
        }
    }

    pub fn ground(&self) -> &[String] {
        match &self.geometry {
            GeometryDescriptor::Explicit { ground, .. }
            | GeometryDescriptor::TreeVertex { ground, .. }
            | GeometryDescriptor::TreeEdge { ground, .. }
            | GeometryDescriptor::Affine { ground, .. } => ground,
        }
    }

    fn data(&self) -> Value {
        let pairs = |edges: &[(String, String)]| -> Value {
            edges.iter().map(|(a, b)| Value::from(vec![a.clone(), b.clone()])).collect()
        };
        match &self.geometry {
            GeometryDescriptor::Explicit { family, .. } => serde_json::json!({ "family": family }),
            GeometryDescriptor::TreeVertex { edges, .. } | GeometryDescriptor::TreeEdge { edges, .. } => {
                serde_json::json!({ "edges": pairs(edges) })
            }
            GeometryDescriptor::Affine { ground, dim, coords } => {
                let map: BTreeMap<&String, &Vec<i64>> = ground.iter().zip(coords).collect();
                serde_json::json!({ "dim": dim, "coords": map })
            }
        }
    }

    /// Canonical JSON: top-level keys in schema order, `data` keys sorted,
    /// labels as strings.
    pub fn to_json(&self) -> String {
        let c = CanonicalInstance {
            kind: self.kind(),
            ground: self.ground(),
            data: self.data(),
            winning: &self.winning,
        };
        serde_json::to_string(&c).expect("instance serializes")
    }

    /// Validates the geometry and builds the game.
    pub fn build(&self) -> Result<GameSpec, InstanceError> {
        let g = build_geometry(&self.geometry)?;
        let w = g.ground().subset(&self.winning)?;
        Ok(GameSpec::new(Arc::new(g.with_closure_table()), w)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PATH: &str = r#"{"kind":"tree_vertex","ground":[1,2,3],"data":{"edges":[[1,2],[2,3]]},"winning":[1,3]}"#;

    #[test]
    fn parses_integer_labels() {
        let inst = Instance::parse(PATH).unwrap();
        assert_eq!(inst.winning, vec!["1", "3"]);
        let spec = inst.build().unwrap();
        assert_eq!(spec.size(), 3);
        assert_eq!(crate::game::nim_game(&spec).unwrap(), 0);
    }

    #[test]
    fn canonical_round_trip() {
        let inst = Instance::parse(PATH).unwrap();
        let text = inst.to_json();
        assert_eq!(
            text,
            r#"{"kind":"tree_vertex","ground":["1","2","3"],"data":{"edges":[["1","2"],["2","3"]]},"winning":["1","3"]}"#
        );
        assert_eq!(Instance::parse(&text).unwrap(), inst);
        assert_eq!(Instance::parse(&text).unwrap().to_json(), text);
    }

    #[test]
    fn affine_round_trip() {
        let text = r#"{"kind":"affine","ground":["b","a"],"data":{"dim":2,"coords":{"a":[0,0],"b":[1,0]}},"winning":["a"]}"#;
        let inst = Instance::parse(text).unwrap();
        let canonical = r#"{"kind":"affine","ground":["b","a"],"data":{"coords":{"a":[0,0],"b":[1,0]},"dim":2},"winning":["a"]}"#;
        assert_eq!(inst.to_json(), canonical);
        assert_eq!(Instance::parse(canonical).unwrap(), inst);
        match &inst.geometry {
            GeometryDescriptor::Affine { coords, .. } => assert_eq!(coords, &vec![vec![1, 0], vec![0, 0]]),
            _ => unreachable!(),
        }
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (r#"{"kind":"ring","ground":[1],"data":{},"winning":[1]}"#, "kind"),
            (r#"{"kind":"tree_vertex","ground":[1],"data":{},"winning":[1]}"#, "data.edges"),
            (r#"{"kind":"tree_vertex","ground":[1],"data":{"edges":[]},"winning":[]}"#, "winning"),
            (r#"{"kind":"tree_vertex","ground":[1],"data":{"edges":[]},"winning":[7]}"#, "winning"),
            (r#"{"kind":"affine","ground":[1,2],"data":{"dim":1,"coords":{"1":[0]}},"winning":[1]}"#, "data.coords.2"),
            (r#"{"kind":"tree_edge","ground":["A"],"data":{"edges":[]},"winning":["A"]}"#, "data.edges"),
        ];
        for (text, field) in cases {
            let err = Instance::parse(text).unwrap_err().to_string();
            assert!(err.starts_with(field), "{err}");
        }
        let err = Instance::parse(r#"{"kind":"affine","ground":[1]}"#).unwrap_err().to_string();
        assert!(err.contains("data"), "{err}");
    }

    #[test]
    fn axiom_violations_are_flagged() {
        let text = r#"{"kind":"explicit","ground":[1,2],"data":{"family":[[],[1],[2]]},"winning":[1]}"#;
        let err = Instance::parse(text).unwrap().build().unwrap_err();
        assert!(err.is_axiom_violation());
    }
}
