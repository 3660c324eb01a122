//! The on-disk document: a cone, an optional Reeb ray and metadata.
//!
//! ```json
//! {"name": "example k=2", "provenance": "construct",
//!  "cone": {"normals": [[1,0,1], [1,1,1], [1,2,3], [1,3,7], [1,1,4]]},
//!  "reeb": {"p": ["1","0","1"], "q": ["1","3","7"], "d": 2}}
//! ```
//!
//! A bare cone `{"normals": [...]}` is also a document.

use serde_json::{json, Map, Value};

use crate::cone::GoodCone;
use crate::error::{Error, Result};
use crate::json;
use crate::reeb::ReebVector;

#[derive(Clone, Debug)]
pub struct Document {
    pub name: Option<String>,
    pub provenance: Option<String>,
    pub cone: GoodCone,
    pub reeb: Option<ReebVector>,
}

impl Document {
    pub fn new(cone: GoodCone, reeb: Option<ReebVector>) -> Document {
        Document { name: None, provenance: None, cone, reeb }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        if let Some(n) = &self.name {
            m.insert("name".into(), json!(n));
        }
        if let Some(p) = &self.provenance {
            m.insert("provenance".into(), json!(p));
        }
        m.insert("cone".into(), self.cone.to_json());
        if let Some(r) = &self.reeb {
            m.insert("reeb".into(), r.to_json());
        }
        Value::Object(m)
    }

    /// Parses a document; a Reeb ray without `"d"` gets `default_d`.
    pub fn from_json(v: &Value, default_d: u64) -> Result<Document> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("document must be a JSON object".into()))?;
        let cone_v = if obj.contains_key("normals") { v } else { obj.get("cone").ok_or_else(|| Error::Parse("document lacks \"cone\"".into()))? };
        let cone = GoodCone::new(parse_normals(cone_v)?)?;
        let reeb = match obj.get("reeb") {
            None | Some(Value::Null) => None,
            Some(r) => {
                let mut r = r.clone();
                if let Some(o) = r.as_object_mut() {
                    o.entry("d").or_insert(json!(default_d));
                }
                Some(ReebVector::from_json(&r)?)
            }
        };
        let text = |k: &str| -> Result<Option<String>> {
            match obj.get(k) {
                None | Some(Value::Null) => Ok(None),
                Some(Value::String(s)) => Ok(Some(s.clone())),
                Some(_) => Err(Error::Parse(format!("\"{k}\" must be a string"))),
            }
        };
        Ok(Document { name: text("name")?, provenance: text("provenance")?, cone, reeb })
    }
}

/// `{"normals": [...]}` or a bare array of integer triples.
pub fn parse_normals(v: &Value) -> Result<Vec<crate::exactnum::V3>> {
    let arr = match v {
        Value::Array(a) => a,
        Value::Object(o) => o
            .get("normals")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("expected \"normals\": [[a, b, c], ...]".into()))?,
        _ => return Err(Error::Parse("expected a list of normals".into())),
    };
    arr.iter().map(json::parse_v3).collect()
}

/// Parses JSON text, reporting the line and column of a syntax error.
pub fn parse_text(source: &str, text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{source}:{}:{}: {e}", e.line(), e.column())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::example_family;

    #[test]
    fn round_trip() {
        let (c, r) = example_family(3).unwrap();
        let mut d = Document::new(c, Some(r));
        d.name = Some("k3".into());
        let v = d.to_json();
        let back = Document::from_json(&v, 2).unwrap();
        assert_eq!(back.to_json(), v);
        let bare = Document::from_json(&json!({"normals": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}), 2).unwrap();
        assert!(bare.reeb.is_none());
        let e = parse_text("x.json", "{\"normals\": [1,\n 2,]}").unwrap_err();
        assert!(e.to_string().contains("x.json:2:"), "{e}");
    }

    #[test]
    fn default_discriminant() {
        let v = json!({"normals": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]});
        let mut w = json!({"cone": v, "reeb": {"p": ["1", "1", "1"], "q": ["1", "0", "0"]}});
        assert_eq!(Document::from_json(&w, 3).unwrap().reeb.unwrap().d(), 3);
        w["reeb"]["d"] = json!(5);
        assert_eq!(Document::from_json(&w, 3).unwrap().reeb.unwrap().d(), 5);
    }
}
