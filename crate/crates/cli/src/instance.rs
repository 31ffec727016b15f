//! Instance documents: named finite sets (optionally with an equivalence),
//! maps, relations and composable pairs, as JSON.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use excomp::excompletion::{ex_arrow_validate, ExArrow, ExCompletion, ExObj};
use excomp::qcart::Span;
use excomp::{FiniteMap, FiniteSet};

/// Where in the text a problem was found, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub location: Option<Location>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            Some(l) => write!(f, "{}:{}: {}", l.line, l.column, self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}

/// A set, either discrete or carrying the equivalence generated by one of
/// the document's relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetDef {
    Plain(Vec<String>),
    Setoid {
        elements: Vec<String>,
        equivalence: String,
    },
}

impl SetDef {
    pub fn elements(&self) -> &[String] {
        match self {
            SetDef::Plain(e) | SetDef::Setoid { elements: e, .. } => e,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDef {
    pub dom: String,
    pub cod: String,
    pub table: BTreeMap<String, String>,
}

/// A relation given by two legs out of a common apex, or by its pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RelDef {
    Span { left: String, right: String },
    Pairs { between: [String; 2], pairs: Vec<[String; 2]> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDef {
    pub f: String,
    pub g: String,
}

/// The document as written.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    #[serde(default)]
    pub sets: BTreeMap<String, SetDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, MapDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relations: BTreeMap<String, RelDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub pairs: BTreeMap<String, PairDef>,
}

/// A validated document with every name resolved.
#[derive(Clone, Debug)]
pub struct Instance {
    pub doc: InstanceDocument,
    pub sets: BTreeMap<String, FiniteSet>,
    pub maps: BTreeMap<String, FiniteMap>,
    pub relations: BTreeMap<String, Span>,
}

/// Position of the first occurrence of the quoted `tokens`, each searched
/// after the previous one.
fn locate(text: &str, tokens: &[&str]) -> Option<Location> {
    let mut at = 0;
    for t in tokens {
        let quoted = serde_json::to_string(t).ok()?;
        at += text[at..].find(&quoted)?;
        at += 1;
    }
    let before = &text[..at - 1];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Some(Location { line, column })
}

struct Validator<'a> {
    text: &'a str,
}

impl Validator<'_> {
    fn err(&self, path: &[&str], message: String) -> ParseError {
        // fall back to shorter prefixes when the full path is not literal text
        let location = (1..=path.len()).rev().find_map(|k| locate(self.text, &path[..k]));
        ParseError { location, message }
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let doc: InstanceDocument = serde_json::from_str(text).map_err(|e| ParseError {
        location: (e.line() > 0).then(|| Location {
            line: e.line(),
            column: e.column(),
        }),
        message: e.to_string().split(" at line ").next().unwrap_or_default().to_string(),
    })?;
    resolve(doc, text)
}

fn resolve(doc: InstanceDocument, text: &str) -> Result<Instance, ParseError> {
    let v = Validator { text };
    let mut sets = BTreeMap::new();
    for (name, def) in &doc.sets {
        let set = FiniteSet::explicit(def.elements().to_vec()).map_err(|e| {
            let dup = duplicate(def.elements()).unwrap_or_default();
            v.err(&["sets", name, &dup], format!("set `{name}`: {e}"))
        })?;
        sets.insert(name.clone(), set);
    }
    let set = |path: &[&str], name: &str| -> Result<FiniteSet, ParseError> {
        sets.get(name)
            .cloned()
            .ok_or_else(|| v.err(path, format!("unknown set `{name}`")))
    };

    let mut maps = BTreeMap::new();
    for (name, def) in &doc.maps {
        let dom = set(&["maps", name, "dom", &def.dom], &def.dom)?;
        let cod = set(&["maps", name, "cod", &def.cod], &def.cod)?;
        for key in def.table.keys() {
            if dom.index_of(key).is_err() {
                return Err(v.err(
                    &["maps", name, "table", key],
                    format!("map `{name}`: `{key}` is not an element of `{}`", def.dom),
                ));
            }
        }
        let mut table = Vec::with_capacity(dom.len());
        for x in dom.labels() {
            let Some(y) = def.table.get(&x) else {
                return Err(v.err(
                    &["maps", name, "table"],
                    format!("map `{name}` is not total: no value for `{x}`"),
                ));
            };
            let target = cod.index_of(y).map_err(|_| {
                v.err(
                    &["maps", name, "table", &x, y],
                    format!("map `{name}`: `{y}` is not an element of `{}`", def.cod),
                )
            })?;
            table.push(target);
        }
        let map = FiniteMap::new(dom, cod, table).map_err(|e| v.err(&["maps", name], e.to_string()))?;
        maps.insert(name.clone(), map);
    }

    let mut relations = BTreeMap::new();
    for (name, def) in &doc.relations {
        let span = match def {
            RelDef::Span { left, right } => {
                let get = |which: &str, m: &str| {
                    maps.get(m)
                        .cloned()
                        .ok_or_else(|| v.err(&["relations", name, which, m], format!("unknown map `{m}`")))
                };
                let (l, r) = (get("left", left)?, get("right", right)?);
                Span::new(l, r).map_err(|e| v.err(&["relations", name], format!("relation `{name}`: {e}")))?
            }
            RelDef::Pairs { between, pairs } => {
                let a = set(&["relations", name, "between", &between[0]], &between[0])?;
                let b = set(&["relations", name, "between", &between[1]], &between[1])?;
                let mut rel = excomp::qcart::ElementRelation::empty(a.len(), b.len());
                for [x, y] in pairs {
                    let ix = a.index_of(x).map_err(|_| {
                        v.err(&["relations", name, "pairs", x], format!("`{x}` is not an element of `{}`", between[0]))
                    })?;
                    let iy = b.index_of(y).map_err(|_| {
                        v.err(&["relations", name, "pairs", x, y], format!("`{y}` is not an element of `{}`", between[1]))
                    })?;
                    rel.insert(ix, iy);
                }
                Span::from_relation(&rel, &a, &b)
            }
        };
        relations.insert(name.clone(), span);
    }

    for (name, def) in &doc.sets {
        if let SetDef::Setoid { equivalence, .. } = def {
            let Some(span) = relations.get(equivalence) else {
                return Err(v.err(
                    &["sets", name, "equivalence", equivalence],
                    format!("unknown relation `{equivalence}`"),
                ));
            };
            let s = &sets[name];
            if span.left_foot() != s || span.right_foot() != s {
                return Err(v.err(
                    &["sets", name, "equivalence", equivalence],
                    format!("relation `{equivalence}` is not a relation on `{name}`"),
                ));
            }
        }
    }

    for (name, def) in &doc.pairs {
        for (which, m) in [("f", &def.f), ("g", &def.g)] {
            if !maps.contains_key(m) {
                return Err(v.err(&["pairs", name, which, m], format!("unknown map `{m}`")));
            }
        }
        if maps[&def.g].cod() != maps[&def.f].dom() {
            return Err(v.err(&["pairs", name], format!("pair `{name}`: `{}` and `{}` do not compose", def.g, def.f)));
        }
    }

    Ok(Instance {
        doc,
        sets,
        maps,
        relations,
    })
}

fn duplicate(labels: &[String]) -> Option<String> {
    let mut seen = std::collections::BTreeSet::new();
    labels.iter().find(|l| !seen.insert(l.as_str())).cloned()
}

pub fn serialize_instance(doc: &InstanceDocument) -> String {
    serde_json::to_string_pretty(doc).expect("documents always serialize")
}

impl Instance {
    pub fn set(&self, name: &str) -> Result<&FiniteSet, String> {
        self.sets.get(name).ok_or_else(|| format!("unknown set `{name}`"))
    }

    pub fn map(&self, name: &str) -> Result<&FiniteMap, String> {
        self.maps.get(name).ok_or_else(|| format!("unknown map `{name}`"))
    }

    /// The set's name in the document.
    pub fn name_of(&self, set: &FiniteSet) -> Option<&str> {
        self.sets.iter().find(|(_, s)| *s == set).map(|(n, _)| n.as_str())
    }

    /// The object of the exact completion a set denotes.
    pub fn object(&self, ex: &ExCompletion, name: &str) -> excomp::Result<ExObj> {
        let set = &self.sets[name];
        match &self.doc.sets[name] {
            SetDef::Plain(_) => Ok(ex.gamma(set)),
            SetDef::Setoid { equivalence, .. } => ex.object_from_span(&self.relations[equivalence]),
        }
    }

    pub fn arrow(&self, ex: &ExCompletion, map: &str) -> Result<ExArrow, String> {
        let def = self.doc.maps.get(map).ok_or_else(|| format!("unknown map `{map}`"))?;
        let src = self.object(ex, &def.dom).map_err(|e| e.to_string())?;
        let dst = self.object(ex, &def.cod).map_err(|e| e.to_string())?;
        ex_arrow_validate(self.maps[map].clone(), &src, &dst).map_err(|e| format!("map `{map}`: {e}"))
    }
}
