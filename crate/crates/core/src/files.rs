//! TOML input files and their canonical serialization.
//!
//! A semigroup file:
//!
//! ```toml
//! size = 2
//! identity = false
//! table = [[0, 0], [0, 1]]
//! alphabet = ["a", "b"]
//! images = [1, 0]
//! ```
//!
//! A graph file names its semigroup file relative to itself and lists
//! `[[vertex]]` and `[[edge]]` tables with `name`, `label`, an optional
//! `phi` (an element index, `"1"`, or `"auto"`), and for edges `from`, `to`
//! and an optional `split`. A labeling file is a list of `[[label]]` tables
//! with `name` and `term`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finsemi::{Delta, Element, FinSemigroup, GeneratorMap};
use crate::kterm::KTerm;
use crate::reduce::graph::{Edge, GraphElement, GraphSystem, Labeling};
use crate::wordkit::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub size: usize,
    #[serde(default)]
    pub identity: bool,
    pub table: Vec<Vec<usize>>,
}

impl TableSpec {
    pub fn build(&self) -> Result<FinSemigroup> {
        if self.table.len() != self.size || self.table.iter().any(|r| r.len() != self.size) {
            return Err(Error::Structural(format!(
                "table is not {0}x{0}",
                self.size
            )));
        }
        FinSemigroup::new(self.size, self.table.concat(), self.identity)
    }

    pub fn of(s: &FinSemigroup) -> Self {
        TableSpec {
            size: s.size(),
            identity: s.has_adjoined_identity(),
            table: s.table().chunks(s.size()).map(<[usize]>::to_vec).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupFile {
    pub size: usize,
    #[serde(default)]
    pub identity: bool,
    pub table: Vec<Vec<usize>>,
    pub alphabet: Vec<String>,
    pub images: Vec<usize>,
}

impl SemigroupFile {
    pub fn build(&self) -> Result<Delta> {
        let s = TableSpec {
            size: self.size,
            identity: self.identity,
            table: self.table.clone(),
        }
        .build()?;
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())?;
        let images = self.images.iter().map(|&i| Element(i)).collect();
        Ok(Delta::new(
            s.clone(),
            GeneratorMap::new(alphabet, images, &s)?,
        ))
    }

    pub fn of(d: &Delta) -> Self {
        let t = TableSpec::of(&d.semigroup);
        SemigroupFile {
            size: t.size,
            identity: t.identity,
            table: t.table,
            alphabet: d.alphabet().names().to_vec(),
            images: d.generators.images().iter().map(|e| e.0).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhiSpec {
    Index(usize),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub name: String,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub name: String,
    pub from: String,
    pub to: String,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub semigroup: String,
    #[serde(default, rename = "vertex")]
    pub vertices: Vec<VertexSpec>,
    #[serde(default, rename = "edge")]
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelSpec {
    pub name: String,
    pub term: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelingFile {
    #[serde(default, rename = "label")]
    pub labels: Vec<LabelSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleFile {
    #[serde(default, rename = "member")]
    pub members: Vec<TableSpec>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

pub fn parse_toml<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        Error::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse {
            line,
            column,
            message,
        } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    }
}

pub fn load_semigroup(path: &Path) -> Result<Delta> {
    let f: SemigroupFile = parse_toml(&read(path)?).map_err(|e| with_path(path, e))?;
    f.build()
}

pub fn load_sample(path: &Path) -> Result<Vec<FinSemigroup>> {
    let f: SampleFile = parse_toml(&read(path)?).map_err(|e| with_path(path, e))?;
    if f.members.is_empty() {
        return Err(Error::input("sample file lists no semigroup"));
    }
    f.members.iter().map(TableSpec::build).collect()
}

fn term(text: &str, alphabet: &Alphabet, name: &str) -> Result<KTerm> {
    KTerm::parse(text, alphabet).map_err(|e| Error::input(format!("label of {name}: {e}")))
}

fn phi_value(p: &Option<PhiSpec>, name: &str) -> Result<Option<Option<Element>>> {
    match p {
        None => Ok(None),
        Some(PhiSpec::Index(i)) => Ok(Some(Some(Element(*i)))),
        Some(PhiSpec::Text(t)) if t == "auto" => Ok(None),
        Some(PhiSpec::Text(t)) if t == "1" => Ok(Some(None)),
        Some(PhiSpec::Text(t)) => Err(Error::input(format!(
            "phi of {name}: expected an index, \"1\" or \"auto\", got {t:?}"
        ))),
    }
}

pub fn build_graph(f: &GraphFile, delta: Delta) -> Result<GraphSystem> {
    let alphabet = delta.alphabet().clone();
    let vertex = |n: &str| {
        f.vertices
            .iter()
            .position(|v| v.name == n)
            .ok_or_else(|| Error::input(format!("unknown vertex {n:?}")))
    };
    let vertices = f
        .vertices
        .iter()
        .map(|v| {
            Ok((
                v.name.clone(),
                term(&v.label, &alphabet, &v.name)?,
                phi_value(&v.phi, &v.name)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let edges = f
        .edges
        .iter()
        .map(|e| {
            let phi = match phi_value(&e.phi, &e.name)? {
                Some(None) => {
                    return Err(Error::input(format!(
                        "phi of edge {} must lie in S",
                        e.name
                    )))
                }
                Some(Some(x)) => Some(x),
                None => None,
            };
            let edge = Edge {
                name: e.name.clone(),
                from: vertex(&e.from)?,
                to: vertex(&e.to)?,
                split: e.split,
            };
            Ok((edge, term(&e.label, &alphabet, &e.name)?, phi))
        })
        .collect::<Result<Vec<_>>>()?;
    GraphSystem::new(delta, vertices, edges)
}

/// Loads a graph file and the semigroup file it refers to.
pub fn load_graph(path: &Path) -> Result<GraphSystem> {
    let f: GraphFile = parse_toml(&read(path)?).map_err(|e| with_path(path, e))?;
    let sg: PathBuf = path.parent().unwrap_or(Path::new(".")).join(&f.semigroup);
    let delta = load_semigroup(&sg)?;
    build_graph(&f, delta)
}

/// Reads labels for `g`; elements not mentioned keep `defaults`.
pub fn parse_labeling(text: &str, g: &GraphSystem, defaults: &Labeling) -> Result<Labeling> {
    let f: LabelingFile = parse_toml(text)?;
    let mut out = defaults.clone();
    for l in &f.labels {
        let el = g
            .find(&l.name)
            .ok_or_else(|| Error::input(format!("labeling names unknown element {:?}", l.name)))?;
        let t = term(&l.term, g.delta.alphabet(), &l.name)?;
        match el {
            GraphElement::Vertex(i) => out.vertices[i] = t,
            GraphElement::Edge(i) => out.edges[i] = t,
        }
    }
    g.check_labeling(&out)?;
    Ok(out)
}

pub fn load_labeling(path: &Path, g: &GraphSystem, defaults: &Labeling) -> Result<Labeling> {
    parse_labeling(&read(path)?, g, defaults).map_err(|e| with_path(path, e))
}

pub fn labeling_to_toml(g: &GraphSystem, labels: &Labeling) -> String {
    let a = g.delta.alphabet();
    let f = LabelingFile {
        labels: g
            .elements()
            .map(|el| LabelSpec {
                name: g.name(el).to_string(),
                term: labels.get(el).show(a),
            })
            .collect(),
    };
    toml::to_string(&f).expect("labels serialize")
}

pub fn semigroup_to_toml(d: &Delta) -> String {
    toml::to_string(&SemigroupFile::of(d)).expect("semigroup serializes")
}
