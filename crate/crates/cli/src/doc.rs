//! The on-disk document format: JSON with a versioned `schema` header and a
//! `kind` tag.
//!
//! Identities are implicit. The identity of object `o` is referred to as
//! `id:o`. Fiber elements are numbered from 0.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA: &str = "ionad/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub schema: String,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Body {
    Category(CategoryBody),
    Basis(BasisBody),
    Space(SpaceBody),
    GroupAction(ActionBody),
    Map(MapBody),
    Presheaf(PresheafBody),
    Family(FamilyBody),
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Category(_) => "category",
            Body::Basis(_) => "basis",
            Body::Space(_) => "space",
            Body::GroupAction(_) => "group-action",
            Body::Map(_) => "map",
            Body::Presheaf(_) => "presheaf",
            Body::Family(_) => "family",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub name: String,
    pub src: String,
    pub dst: String,
}

/// `then ∘ first = result`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Composite {
    pub first: String,
    pub then: String,
    pub result: String,
}

/// Objects, non-identity morphisms, and a composite for every composable pair
/// of non-identity morphisms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryBody {
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<Morphism>,
    #[serde(default)]
    pub compositions: Vec<Composite>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceBody {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyBody {
    pub points: Vec<String>,
    pub fibers: BTreeMap<String, usize>,
}

/// A basis `M : B → Set^X`. `values[b][x]` is the size of `M(b)(x)`;
/// `actions[g][x][s]` is the image of `s` under `M(g)` at `x`. Points where
/// the source fiber is empty may be left out of an action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisBody {
    pub points: Vec<String>,
    pub shape: CategoryBody,
    pub values: BTreeMap<String, BTreeMap<String, usize>>,
    #[serde(default)]
    pub actions: BTreeMap<String, BTreeMap<String, Vec<usize>>>,
}

/// A presheaf `P : B^op → Set`. For `g : a → b`, `actions[g][s]` is the image
/// in `P(a)` of `s ∈ P(b)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafBody {
    pub shape: CategoryBody,
    pub values: BTreeMap<String, usize>,
    #[serde(default)]
    pub actions: BTreeMap<String, Vec<usize>>,
}

/// A group, as a one-object category, acting on a space. `action[g][x]` is
/// `g·x`, for every non-identity element `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionBody {
    pub group: CategoryBody,
    pub space: SpaceBody,
    #[serde(default)]
    pub action: BTreeMap<String, BTreeMap<String, String>>,
}

/// A point map between two ionads given by their own documents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapBody {
    pub src: Box<Document>,
    pub dst: Box<Document>,
    pub points: BTreeMap<String, String>,
}

impl Document {
    pub fn new(body: Body) -> Self {
        Document {
            schema: SCHEMA.to_string(),
            body,
        }
    }
}

/// Parses a document. `path` only labels error messages.
pub fn parse(path: &str, text: &str) -> Result<Document> {
    let located = |e: serde_json::Error| CliError::Syntax {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    };
    // syntax first, so that malformed text is reported before schema problems
    serde_json::from_str::<serde_json::Value>(text).map_err(located)?;
    let doc: Document = serde_json::from_str(text).map_err(|e| CliError::Schema {
        path: path.to_string(),
        message: strip_position(&e.to_string()),
    })?;
    check_schema(path, &doc)?;
    Ok(doc)
}

fn check_schema(path: &str, doc: &Document) -> Result<()> {
    if doc.schema != SCHEMA {
        return Err(CliError::Schema {
            path: path.to_string(),
            message: format!("unsupported schema `{}`, expected `{SCHEMA}`", doc.schema),
        });
    }
    if let Body::Map(m) = &doc.body {
        check_schema(path, &m.src)?;
        check_schema(path, &m.dst)?;
    }
    Ok(())
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn serialize(doc: &Document) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse("t.json", "{\n  \"schema\": \"ionad/1\",\n  \"kind\": }").unwrap_err();
        match err {
            CliError::Syntax { line, column, .. } => assert_eq!((line, column), (3, 11)),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn wrong_schema_is_rejected() {
        let text = r#"{"schema": "ionad/0", "kind": "family", "points": [], "fibers": {}}"#;
        assert!(matches!(parse("t", text), Err(CliError::Schema { .. })));
    }

    #[test]
    fn kinds_round_trip() {
        let doc = Document::new(Body::Family(FamilyBody {
            points: vec!["a".into()],
            fibers: [("a".to_string(), 2)].into_iter().collect(),
        }));
        let text = serialize(&doc);
        assert!(text.contains("\"kind\": \"family\""));
        assert_eq!(parse("t", &text).unwrap(), doc);
    }
}
