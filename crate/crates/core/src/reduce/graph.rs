use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::finsemi::{Delta, Element};
use crate::kterm::KTerm;

/// A vertex or an edge of the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphElement {
    Vertex(usize),
    Edge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub from: usize,
    pub to: usize,
    /// Top-level factor index at which an infinite label leaving a finite
    /// vertex is cut into two infinite halves during simplification.
    pub split: Option<usize>,
}

/// Labels for every vertex and edge, indexed like the graph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Labeling {
    pub vertices: Vec<KTerm>,
    pub edges: Vec<KTerm>,
}

impl Labeling {
    pub fn get(&self, g: GraphElement) -> &KTerm {
        match g {
            GraphElement::Vertex(i) => &self.vertices[i],
            GraphElement::Edge(i) => &self.edges[i],
        }
    }
}

/// A finite graph `Γ` with the labelings `η` and `φ` of the system `Σ_Γ`,
/// whose equations are `(αe)·e = ωe`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSystem {
    pub delta: Delta,
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
    pub eta: Labeling,
    /// Vertex values in `S¹`; `None` is the adjoined identity.
    pub phi_vertices: Vec<Option<Element>>,
    pub phi_edges: Vec<Element>,
}

impl GraphSystem {
    /// Checks the shape of the graph and `δ∘η = φ`. A `phi` entry of `None`
    /// means "use `δ(η g)`".
    pub fn new(
        delta: Delta,
        vertices: Vec<(String, KTerm, Option<Option<Element>>)>,
        edges: Vec<(Edge, KTerm, Option<Element>)>,
    ) -> Result<Self> {
        let mut names = BTreeSet::new();
        for n in vertices
            .iter()
            .map(|v| &v.0)
            .chain(edges.iter().map(|e| &e.0.name))
        {
            if !names.insert(n.clone()) {
                return Err(Error::input(format!("duplicate name {n:?}")));
            }
        }
        let alpha = delta.alphabet().len();
        let mut g = GraphSystem {
            delta,
            vertices: Vec::new(),
            edges: Vec::new(),
            eta: Labeling::default(),
            phi_vertices: Vec::new(),
            phi_edges: Vec::new(),
        };
        for (name, label, phi) in vertices {
            check_letters(&label, alpha, &name)?;
            let value = g.delta.eval_monoid(&label)?;
            let phi = phi.unwrap_or(value);
            if phi != value {
                return Err(Error::input(format!(
                    "phi({name}) = {} but delta(eta({name})) = {}",
                    show_s1(phi),
                    show_s1(value)
                )));
            }
            g.vertices.push(name);
            g.eta.vertices.push(label);
            g.phi_vertices.push(phi);
        }
        for (edge, label, phi) in edges {
            let name = &edge.name;
            if edge.from >= g.vertices.len() || edge.to >= g.vertices.len() {
                return Err(Error::input(format!("edge {name} has an unknown endpoint")));
            }
            if label.is_empty() {
                return Err(Error::input(format!(
                    "edge {name} is labeled by the empty word"
                )));
            }
            check_letters(&label, alpha, name)?;
            let value = g.delta.eval_kterm(&label)?;
            let phi = phi.unwrap_or(value);
            if phi != value {
                return Err(Error::input(format!(
                    "phi({name}) = {} but delta(eta({name})) = {}",
                    phi.0, value.0
                )));
            }
            if let Some(c) = edge.split {
                if c == 0 || c >= label.factors().len() {
                    return Err(Error::input(format!(
                        "split index {c} of edge {name} is out of range"
                    )));
                }
            }
            g.edges.push(edge);
            g.eta.edges.push(label);
            g.phi_edges.push(phi);
        }
        Ok(g)
    }

    pub fn elements(&self) -> impl Iterator<Item = GraphElement> {
        (0..self.vertices.len())
            .map(GraphElement::Vertex)
            .chain((0..self.edges.len()).map(GraphElement::Edge))
    }

    pub fn name(&self, g: GraphElement) -> &str {
        match g {
            GraphElement::Vertex(i) => &self.vertices[i],
            GraphElement::Edge(i) => &self.edges[i].name,
        }
    }

    pub fn find(&self, name: &str) -> Option<GraphElement> {
        self.elements().find(|&g| self.name(g) == name)
    }

    pub fn phi(&self, g: GraphElement) -> Option<Element> {
        match g {
            GraphElement::Vertex(i) => self.phi_vertices[i],
            GraphElement::Edge(i) => Some(self.phi_edges[i]),
        }
    }

    /// Checks that `labels` has the shape of this graph and only uses
    /// letters of the alphabet.
    pub fn check_labeling(&self, labels: &Labeling) -> Result<()> {
        if labels.vertices.len() != self.vertices.len() || labels.edges.len() != self.edges.len() {
            return Err(Error::input("labeling does not match the graph"));
        }
        let alpha = self.delta.alphabet().len();
        for g in self.elements() {
            check_letters(labels.get(g), alpha, self.name(g))?;
        }
        if let Some(i) = labels.edges.iter().position(KTerm::is_empty) {
            return Err(Error::input(format!(
                "edge {} is labeled by the empty word",
                self.edges[i].name
            )));
        }
        Ok(())
    }
}

pub(crate) fn show_s1(x: Option<Element>) -> String {
    x.map_or_else(|| "1".to_string(), |e| e.0.to_string())
}

fn check_letters(t: &KTerm, alpha: usize, name: &str) -> Result<()> {
    match t.content().into_iter().find(|a| a.0 as usize >= alpha) {
        Some(a) => Err(Error::input(format!(
            "label of {name} uses unknown letter {}",
            a.0
        ))),
        None => Ok(()),
    }
}

impl fmt::Display for GraphElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphElement::Vertex(i) => write!(f, "vertex#{i}"),
            GraphElement::Edge(i) => write!(f, "edge#{i}"),
        }
    }
}
