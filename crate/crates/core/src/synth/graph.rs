//! Graph and weighted graph states.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::continuous::ContinuousCircuit;
use crate::circuit::{expand, graph_basis, Circuit};
use crate::error::{Error, Result};

/// Undirected simple graph; edges are stored as `(low, high)` pairs. A
/// weighted graph carries a phase for every edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    num_vertices: usize,
    edges: BTreeMap<(usize, usize), Option<f64>>,
}

impl Graph {
    pub fn new(num_vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(num_vertices)?;
        for (a, b) in edges {
            g.insert(a, b, None)?;
        }
        Ok(g)
    }

    pub fn weighted(
        num_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut g = Graph::empty(num_vertices)?;
        for (a, b, w) in edges {
            if !w.is_finite() {
                return Err(Error::InvalidGraph(format!("non-finite phase on ({a}, {b})")));
            }
            g.insert(a, b, Some(w))?;
        }
        Ok(g)
    }

    fn empty(num_vertices: usize) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        Ok(Graph {
            num_vertices,
            edges: BTreeMap::new(),
        })
    }

    fn insert(&mut self, a: usize, b: usize, w: Option<f64>) -> Result<()> {
        if a == b {
            return Err(Error::InvalidGraph(format!("self-loop on vertex {a}")));
        }
        if a.max(b) >= self.num_vertices {
            return Err(Error::InvalidGraph(format!(
                "edge ({a}, {b}) outside {} vertices",
                self.num_vertices
            )));
        }
        if self.edges.insert((a.min(b), a.max(b)), w).is_some() {
            return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
        }
        Ok(())
    }

    /// Graph number `mask` on `n` vertices: bit `i` of `mask` selects the
    /// `i`-th pair in lexicographic order.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        Graph::new(
            n,
            pairs
                .into_iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| e),
        )
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.keys().copied()
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<f64> {
        self.edges.get(&(a.min(b), a.max(b))).copied().flatten()
    }

    pub fn is_weighted(&self) -> bool {
        self.edges.values().any(Option::is_some)
    }

    /// Parses `vertices N` followed by `edge a b [phase]` lines.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut n = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |message: &str| Error::Parse {
                line: i + 1,
                message: message.to_string(),
            };
            let words: Vec<&str> = line.split_whitespace().collect();
            match (words[0], n) {
                ("vertices", None) => {
                    n = Some(
                        words
                            .get(1)
                            .and_then(|w| w.parse::<usize>().ok())
                            .ok_or_else(|| perr("expected a vertex count"))?,
                    )
                }
                ("edge", Some(_)) => {
                    let idx = |k: usize| {
                        words
                            .get(k)
                            .and_then(|w| w.parse::<usize>().ok())
                            .ok_or_else(|| perr("expected a vertex index"))
                    };
                    let phase = match words.get(3) {
                        Some(w) => Some(w.parse::<f64>().map_err(|_| perr("bad phase"))?),
                        None => None,
                    };
                    edges.push((idx(1)?, idx(2)?, phase));
                }
                _ => return Err(perr(&format!("unexpected `{}`", words[0]))),
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 1,
            message: "missing `vertices` line".into(),
        })?;
        let mut g = Graph::empty(n)?;
        for (a, b, w) in &edges {
            g.insert(*a, *b, *w)?;
        }
        if g.is_weighted() {
            if let Some((a, b)) = g.edges.iter().find(|(_, w)| w.is_none()).map(|(e, _)| *e) {
                return Err(Error::MissingWeight(a, b));
            }
        }
        Ok(g)
    }
}

/// `N` Hadamards followed by one CZ per edge. Over the coarse basis the CZ
/// is a single gate; with `exact_cz` it is expanded over the standard basis.
pub fn graph_state_circuit(g: &Graph, exact_cz: bool) -> Result<Circuit> {
    if g.is_weighted() {
        return Err(Error::WeightedGraph);
    }
    let (basis, dict) = graph_basis();
    let mut c = Circuit::new(g.num_vertices, basis);
    for q in 0..g.num_vertices {
        c.push("H", &[q])?;
    }
    for (a, b) in g.edges() {
        c.push("CZ", &[a, b])?;
    }
    if exact_cz {
        expand(&c, &dict)
    } else {
        Ok(c)
    }
}

/// `N` single-qubit `|+⟩` preparations followed by `cphase(φ_kl)` per edge.
pub fn weighted_graph_state_circuit(g: &Graph) -> Result<ContinuousCircuit> {
    let mut cc = ContinuousCircuit::new(g.num_vertices);
    for q in 0..g.num_vertices {
        cc.ry(PI / 2.0, q)?;
    }
    for (&(a, b), w) in &g.edges {
        let w = w.ok_or(Error::MissingWeight(a, b))?;
        cc.cphase(w, a, b)?;
    }
    Ok(cc)
}
