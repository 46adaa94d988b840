//! Versioned JSON description of a surface, its base structure and coordinate vectors.
//!
//! ```json
//! {
//!   "version": 1,
//!   "surface": { "kind": "flute", "hole_length": 1.0 },
//!   "base": { "lengths": { "rule": "power_decay", "scale": 1.0, "exponent": 1.0 } },
//!   "vectors": [
//!     { "id": "x", "overrides": [{ "index": 3, "length": 0.5, "twist": 0.1 }],
//!       "tail": { "kind": "log_decay", "c": 1.0, "p": 1.0, "c_twist": 0.0, "q": 1.0 } }
//!   ]
//! }
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coords::{FnVector, Profile, TailRule};
use crate::error::{Error, Result};
use crate::surface::{BaseRule, BaseStructure, Coord, Family, LengthRule, PantsGraph, Slot};

pub const VERSION: u32 = 1;

/// A parsed document.
#[derive(Debug, Clone)]
pub struct Spec {
    pub base: Arc<BaseStructure>,
    pub vectors: Vec<(String, FnVector)>,
}

impl Spec {
    pub fn new(base: Arc<BaseStructure>) -> Self {
        Spec { base, vectors: Vec::new() }
    }

    pub fn vector(&self, id: &str) -> Result<&FnVector> {
        self.vectors
            .iter()
            .find(|(name, _)| name == id)
            .map(|(_, x)| x)
            .ok_or_else(|| Error::Malformed(format!("no vector with id {id:?}")))
    }

    pub fn parse(text: &str) -> Result<Spec> {
        let raw: RawDoc = from_json(text)?;
        raw.build()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&RawDoc::from_spec(self)).expect("documents serialize");
        s.push('\n');
        s
    }
}

fn from_json<'de, T: Deserialize<'de>>(text: &'de str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse { path, line: inner.line(), column: inner.column(), message: strip_location(&inner) }
    })
}

fn strip_location(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(k) => s[..k].to_string(),
        None => s,
    }
}

/// A semantic error at a known field; the location is not tracked past deserialization.
fn at(path: impl Into<String>) -> impl FnOnce(Error) -> Error {
    let path = path.into();
    move |e| Error::Parse { path, line: 0, column: 0, message: e.to_string() }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    version: u32,
    surface: RawSurface,
    base: RawBase,
    #[serde(default)]
    vectors: Vec<RawVector>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawSurface {
    Ladder,
    Flute {
        hole_length: f64,
    },
    Finite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pants: Option<Vec<[Slot; 3]>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        genus: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        holes: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        punctures: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hole_length: Option<f64>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBase {
    lengths: LengthRule,
    #[serde(default)]
    twist: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    overrides: Vec<RawOverride>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOverride {
    index: i64,
    length: f64,
    twist: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVector {
    id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    overrides: Vec<RawOverride>,
    #[serde(default)]
    tail: RawTail,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawTail {
    #[default]
    Base,
    LogDecay {
        c: f64,
        p: f64,
        c_twist: f64,
        q: f64,
    },
    ConstOffset {
        c: f64,
        c_twist: f64,
    },
    Profile {
        length: Profile,
        twist: Profile,
    },
}

impl RawTail {
    fn rule(&self) -> TailRule {
        match *self {
            RawTail::Base => TailRule::BASE,
            RawTail::LogDecay { c, p, c_twist, q } => TailRule::log_decay(c, p, c_twist, q),
            RawTail::ConstOffset { c, c_twist } => TailRule::const_offset(c, c_twist),
            RawTail::Profile { length, twist } => TailRule { length, twist },
        }
    }

    fn of(rule: TailRule) -> RawTail {
        match (rule.length, rule.twist) {
            (Profile::Zero, Profile::Zero) => RawTail::Base,
            (Profile::Decay { scale: c, exponent: p }, Profile::Decay { scale: c_twist, exponent: q }) => {
                RawTail::LogDecay { c, p, c_twist, q }
            }
            (Profile::Const { value: c }, Profile::Const { value: c_twist }) => RawTail::ConstOffset { c, c_twist },
            (length, twist) => RawTail::Profile { length, twist },
        }
    }
}

fn overrides(list: &[RawOverride], path: &str) -> Result<BTreeMap<i64, Coord>> {
    let mut out = BTreeMap::new();
    for (k, o) in list.iter().enumerate() {
        let here = format!("{path}[{k}]");
        let c = Coord::new(o.length, o.twist).map_err(at(here.clone()))?;
        if out.insert(o.index, c).is_some() {
            return Err(at(here)(Error::Malformed(format!("curve {} is listed twice", o.index))));
        }
    }
    Ok(out)
}

fn raw_overrides(map: &BTreeMap<i64, Coord>) -> Vec<RawOverride> {
    map.iter().map(|(&index, c)| RawOverride { index, length: c.length, twist: c.twist }).collect()
}

impl RawDoc {
    fn build(&self) -> Result<Spec> {
        if self.version != VERSION {
            return Err(at("version")(Error::Unsupported(format!(
                "document version {} (this build reads version {VERSION})",
                self.version
            ))));
        }
        let graph = self.surface.build().map_err(at("surface"))?;
        let mut rule = BaseRule::new(self.base.lengths).with_twist(self.base.twist);
        rule.overrides = overrides(&self.base.overrides, "base.overrides")?;
        let base = Arc::new(BaseStructure::new(graph, rule).map_err(at("base"))?);
        let mut spec = Spec::new(base.clone());
        for (k, v) in self.vectors.iter().enumerate() {
            let path = format!("vectors[{k}]");
            if spec.vector(&v.id).is_ok() {
                return Err(at(format!("{path}.id"))(Error::Malformed(format!("duplicate id {:?}", v.id))));
            }
            let ov = overrides(&v.overrides, &format!("{path}.overrides"))?;
            let x = FnVector::new(base.clone(), ov, v.tail.rule()).map_err(at(path))?;
            spec.vectors.push((v.id.clone(), x));
        }
        Ok(spec)
    }

    fn from_spec(spec: &Spec) -> RawDoc {
        let base = &spec.base;
        let g = base.graph();
        let surface = match g.family() {
            Family::Ladder => RawSurface::Ladder,
            Family::Flute => RawSurface::Flute { hole_length: g.hole_length().expect("flutes have holes") },
            Family::Finite => RawSurface::Finite {
                pants: g.pants().map(<[_]>::to_vec),
                genus: None,
                holes: None,
                punctures: None,
                hole_length: None,
            },
        };
        let rule = base.rule();
        RawDoc {
            version: VERSION,
            surface,
            base: RawBase { lengths: rule.lengths, twist: rule.twist, overrides: raw_overrides(&rule.overrides) },
            vectors: spec
                .vectors
                .iter()
                .map(|(id, x)| RawVector {
                    id: id.clone(),
                    overrides: raw_overrides(x.overrides()),
                    tail: RawTail::of(x.tail()),
                })
                .collect(),
        }
    }
}

impl RawSurface {
    fn build(&self) -> Result<PantsGraph> {
        match *self {
            RawSurface::Ladder => Ok(PantsGraph::ladder()),
            RawSurface::Flute { hole_length } => PantsGraph::flute(hole_length),
            RawSurface::Finite { ref pants, genus, holes, punctures, hole_length } => {
                let builder = genus.is_some() || holes.is_some() || punctures.is_some() || hole_length.is_some();
                match pants {
                    Some(_) if builder => Err(Error::Malformed(
                        "give either an explicit pants list or genus/holes/punctures, not both".into(),
                    )),
                    Some(p) => PantsGraph::finite(p.clone()),
                    None => PantsGraph::caterpillar(
                        genus.unwrap_or(0),
                        holes.unwrap_or(0),
                        punctures.unwrap_or(0),
                        hole_length.unwrap_or(1.0),
                    ),
                }
            }
        }
    }
}
