//! The four rewrites that bring `(Γ, η)` to a system whose vertices are all
//! infinite and whose finite edges are letters, and the inverse lift.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::kterm::{Factor, KTerm};
use crate::reduce::graph::{Edge, GraphElement, GraphSystem, Labeling};
use crate::wordkit::Word;

/// How the label of one element of the original graph is rebuilt from a
/// labeling of the simplified graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lift {
    Same(GraphElement),
    Fixed(KTerm),
    /// `η′e = π′₁·η′e₁` where `η′v₁ = u·π′₁`.
    Split {
        vertex: usize,
        prefix: Word,
        edge: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftRecipe {
    pub vertices: Vec<Lift>,
    pub edges: Vec<Lift>,
}

impl LiftRecipe {
    pub fn apply(&self, simplified: &Labeling) -> Result<Labeling> {
        let one = |l: &Lift| -> Result<KTerm> {
            Ok(match l {
                Lift::Same(g) => simplified.get(*g).clone(),
                Lift::Fixed(t) => t.clone(),
                Lift::Split {
                    vertex,
                    prefix,
                    edge,
                } => {
                    let head = simplified.vertices[*vertex]
                        .strip_prefix(prefix)
                        .ok_or_else(|| {
                            Error::internal(
                                "lifted vertex label does not keep the prefix of the finite vertex",
                            )
                        })?;
                    head.mul(&simplified.edges[*edge])
                }
            })
        };
        Ok(Labeling {
            vertices: self.vertices.iter().map(one).collect::<Result<_>>()?,
            edges: self.edges.iter().map(one).collect::<Result<_>>()?,
        })
    }
}

/// Cuts an infinite label into two infinite halves: at `split` when given,
/// else at the first top-level position with an (ω−1)-power on both sides,
/// else through `x^{ω−1} = x^{ω−1}·x^ω` at the first (ω−1)-power.
pub fn cut_infinite(pi: &KTerm, split: Option<usize>) -> Result<(KTerm, KTerm)> {
    let fs = pi.factors();
    let halves = |c: usize| {
        (
            KTerm::from_factors(fs[..c].to_vec()),
            KTerm::from_factors(fs[c..].to_vec()),
        )
    };
    if let Some(c) = split {
        let (a, b) = halves(c);
        if a.is_finite() || b.is_finite() {
            return Err(Error::input(format!("split at {c} leaves a finite half")));
        }
        return Ok((a, b));
    }
    let is_pow = |f: &Factor| matches!(f, Factor::Pow(_));
    let first = fs
        .iter()
        .position(is_pow)
        .ok_or_else(|| Error::input("cannot cut a finite label into infinite halves"))?;
    let last = fs.iter().rposition(is_pow).expect("has a power");
    if first < last {
        return Ok(halves(first + 1));
    }
    let Factor::Pow(x) = &fs[first] else {
        unreachable!()
    };
    let left = KTerm::from_factors(fs[..=first].to_vec());
    let right = KTerm::omega(x.clone()).mul(&KTerm::from_factors(fs[first + 1..].to_vec()));
    Ok((left, right))
}

struct Builder {
    vertices: Vec<(String, KTerm)>,
    edges: Vec<(Edge, KTerm)>,
    names: BTreeSet<String>,
}

impl Builder {
    fn fresh(&mut self, base: String) -> String {
        let mut n = base;
        while self.names.contains(&n) {
            n.push('\'');
        }
        self.names.insert(n.clone());
        n
    }

    fn vertex(&mut self, name: String, label: KTerm) -> usize {
        let name = self.fresh(name);
        self.vertices.push((name, label));
        self.vertices.len() - 1
    }

    fn edge(&mut self, name: String, from: usize, to: usize, label: KTerm) -> usize {
        let name = self.fresh(name);
        self.edges.push((
            Edge {
                name,
                from,
                to,
                split: None,
            },
            label,
        ));
        self.edges.len() - 1
    }
}

/// Applies the rewrites in order: drop finite edges leaving finite
/// vertices; remove finite vertices that begin no edge; replace each
/// infinite edge leaving a finite vertex `u` by a new vertex `uπ₁` with an
/// edge `π₂`; split finite edges into letter paths. New elements are named
/// after the edge they come from.
pub fn simplify(g: &GraphSystem) -> Result<(GraphSystem, LiftRecipe)> {
    let finite_v: Vec<bool> = g.eta.vertices.iter().map(KTerm::is_finite).collect();
    let finite_e: Vec<bool> = g.eta.edges.iter().map(KTerm::is_finite).collect();
    let dropped: Vec<bool> = g
        .edges
        .iter()
        .zip(&finite_e)
        .map(|(e, &f)| f && finite_v[e.from])
        .collect();

    let mut b = Builder {
        vertices: Vec::new(),
        edges: Vec::new(),
        names: g.elements().map(|el| g.name(el).to_string()).collect(),
    };
    let mut recipe = LiftRecipe {
        vertices: Vec::new(),
        edges: Vec::new(),
    };
    let mut new_index = vec![None; g.vertices.len()];
    for (i, name) in g.vertices.iter().enumerate() {
        if finite_v[i] {
            recipe.vertices.push(Lift::Fixed(g.eta.vertices[i].clone()));
            continue;
        }
        b.names.remove(name);
        let j = b.vertex(name.clone(), g.eta.vertices[i].clone());
        new_index[i] = Some(j);
        recipe.vertices.push(Lift::Same(GraphElement::Vertex(j)));
    }
    for (i, e) in g.edges.iter().enumerate() {
        let label = &g.eta.edges[i];
        if dropped[i] {
            recipe.edges.push(Lift::Fixed(label.clone()));
            continue;
        }
        let to = new_index[e.to].ok_or_else(|| {
            Error::input(format!(
                "edge {} enters vertex {} with a finite label from an infinite side",
                e.name, g.vertices[e.to]
            ))
        })?;
        if finite_v[e.from] {
            let u = g.eta.vertices[e.from].as_word().expect("finite vertex");
            let (p1, p2) = cut_infinite(label, e.split).map_err(|err| match err {
                Error::Input(m) => Error::input(format!("edge {}: {m}", e.name)),
                other => other,
            })?;
            let v1 = b.vertex(format!("{}~v", e.name), KTerm::word(&u).mul(&p1));
            let e1 = b.edge(format!("{}~e", e.name), v1, to, p2);
            recipe.edges.push(Lift::Split {
                vertex: v1,
                prefix: Word::from(u),
                edge: e1,
            });
            continue;
        }
        let from = new_index[e.from].expect("infinite vertex kept");
        match label.as_word() {
            Some(w) if w.len() > 1 => {
                let mut prev = from;
                let mut acc = g.eta.vertices[e.from].clone();
                for (p, &a) in w.iter().enumerate() {
                    acc.push_letter(a);
                    let next = if p + 1 == w.len() {
                        to
                    } else {
                        b.vertex(format!("{}~v{}", e.name, p + 1), acc.clone())
                    };
                    b.edge(
                        format!("{}~e{}", e.name, p + 1),
                        prev,
                        next,
                        KTerm::letter(a),
                    );
                    prev = next;
                }
                recipe.edges.push(Lift::Fixed(label.clone()));
            }
            _ => {
                b.names.remove(&e.name);
                let j = b.edge(e.name.clone(), from, to, label.clone());
                b.edges[j].0.split = e.split;
                recipe.edges.push(Lift::Same(GraphElement::Edge(j)));
            }
        }
    }
    let simplified = GraphSystem::new(
        g.delta.clone(),
        b.vertices.into_iter().map(|(n, t)| (n, t, None)).collect(),
        b.edges.into_iter().map(|(e, t)| (e, t, None)).collect(),
    )?;
    Ok((simplified, recipe))
}
