use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{GeoGraph, VertexId};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
pub(crate) struct GeoGraphJson {
    vertices: Vec<VertexId>,
    edges: Vec<[VertexId; 2]>,
    token: VertexId,
    #[serde(default)]
    labels: BTreeMap<VertexId, String>,
}

impl GeoGraphJson {
    pub(crate) fn into_graph(self) -> Result<GeoGraph> {
        let n = self.vertices.len();
        let vertices = self.vertices.into_iter();
        let g = GeoGraph::new(
            vertices,
            self.edges.into_iter().map(|[u, v]| (u, v)),
            self.token,
        )?;
        if g.vertices().len() != n {
            return Err(Error::InvalidGraph("duplicate vertex id".into()));
        }
        g.with_labels(self.labels)
    }
}

impl From<&GeoGraph> for GeoGraphJson {
    fn from(g: &GeoGraph) -> Self {
        GeoGraphJson {
            vertices: g.vertices().iter().copied().collect(),
            edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
            token: g.token(),
            labels: g.labels().clone(),
        }
    }
}

impl Serialize for GeoGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GeoGraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeoGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        GeoGraphJson::deserialize(d)?
            .into_graph()
            .map_err(serde::de::Error::custom)
    }
}

fn role_colour(tag: &str) -> &'static str {
    match tag.split('_').next().unwrap_or("") {
        "start" => "gold",
        "b" => "lightblue",
        "a" => "lightcyan",
        "s" => "palegreen",
        "t" => "plum",
        "c" => "lightsalmon",
        "d" => "khaki",
        "payload" => "lightgrey",
        _ => "white",
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl GeoGraph {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("GeoGraph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GeoGraphJson = serde_json::from_str(text)?;
        raw.into_graph()
    }

    /// Graphviz digraph. The token is drawn as a double circle; labelled
    /// vertices are filled by role.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph geography {\n    node [shape=circle];\n");
        for &v in self.vertices() {
            let mut attrs = Vec::new();
            match self.label(v) {
                Some(tag) => {
                    attrs.push(format!("label=\"{}\"", escape(tag)));
                    attrs.push(format!("style=filled, fillcolor=\"{}\"", role_colour(tag)));
                }
                None => attrs.push(format!("label=\"{v}\"")),
            }
            if v == self.token() {
                attrs.push("shape=doublecircle, penwidth=2".into());
            }
            writeln!(out, "    v{v} [{}];", attrs.join(", ")).unwrap();
        }
        for &(u, v) in self.edges() {
            writeln!(out, "    v{u} -> v{v};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labelled() -> GeoGraph {
        GeoGraph::new([0, 1, 2], [(0, 1), (0, 2), (1, 2)], 0)
            .unwrap()
            .with_labels(BTreeMap::from([
                (0, "start".to_string()),
                (2, "t_0".to_string()),
            ]))
            .unwrap()
    }

    #[test]
    fn token_only_graph_json() {
        let g = GeoGraph::new([4], [], 4).unwrap();
        let json: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
        assert_eq!(json["vertices"].as_array().unwrap().len(), 1);
        assert_eq!(json["edges"].as_array().unwrap().len(), 0);
        assert_eq!(json["token"], 4);
    }

    #[test]
    fn json_round_trip() {
        let g = labelled();
        let text = g.to_json();
        assert_eq!(GeoGraph::from_json(&text).unwrap(), g);
        assert_eq!(GeoGraph::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn import_rejects_invalid_graphs() {
        for bad in [
            r#"{"vertices":[0,1],"edges":[[0,0]],"token":0}"#,
            r#"{"vertices":[0,1],"edges":[[0,1],[0,1]],"token":0}"#,
            r#"{"vertices":[0,0],"edges":[],"token":0}"#,
            r#"{"vertices":[0],"edges":[],"token":3}"#,
            r#"{"vertices":[0],"edges":[],"token":0,"labels":{"9":"b_0"}}"#,
            r#"{"vertices":[0],"edges":[[0]],"token":0}"#,
            r#"[1,2]"#,
        ] {
            assert!(GeoGraph::from_json(bad).is_err(), "{bad}");
        }
        // labels are optional
        assert!(GeoGraph::from_json(r#"{"vertices":[0],"edges":[],"token":0}"#).is_ok());
    }

    #[test]
    fn dot_marks_token_and_roles() {
        let dot = labelled().to_dot();
        assert!(dot.starts_with("digraph geography {"));
        assert!(dot.contains("v0 [label=\"start\", style=filled, fillcolor=\"gold\", shape=doublecircle, penwidth=2];"));
        assert!(dot.contains("v1 [label=\"1\"];"));
        assert!(dot.contains("v2 [label=\"t_0\", style=filled, fillcolor=\"plum\"];"));
        assert!(dot.contains("v0 -> v2;"));
        assert_eq!(dot, labelled().to_dot());
    }
}
