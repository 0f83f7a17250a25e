//! The cost graph of a simple knot type: classes as vertices, cost-1 pairs
//! as edges.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::cost::cost_simple;
use crate::front::ClassicalInvariants;
use crate::knot_types::{classes_down_to, KnotError, KnotTypeDescriptor, LegendrianClass};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("{0} is not known to be Legendrian simple; refusing to build its graph")]
    NotSimple(String),
    #[error("{0} is not a vertex of the graph")]
    NotAVertex(LegendrianClass),
    #[error("bad graph document: {0}")]
    Parse(String),
    #[error(transparent)]
    Knot(#[from] KnotError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostGraph {
    pub descriptor: KnotTypeDescriptor,
    pub tb_floor: i64,
    /// Sorted by tb descending, then rot ascending.
    vertices: Vec<LegendrianClass>,
    /// Index pairs `(i, j)` with `i < j`, sorted.
    edges: Vec<(usize, usize)>,
    index: BTreeMap<LegendrianClass, usize>,
}

fn inv(c: LegendrianClass) -> ClassicalInvariants {
    ClassicalInvariants::from_pair(c.tb, c.rot)
}

fn adjacent(a: LegendrianClass, b: LegendrianClass) -> bool {
    a.tb.abs_diff(b.tb) == 1 && a.rot.abs_diff(b.rot) == 1
}

fn order_key(c: &LegendrianClass) -> (i64, i64) {
    (-c.tb, c.rot)
}

impl CostGraph {
    fn from_vertices(descriptor: KnotTypeDescriptor, tb_floor: i64, mut vertices: Vec<LegendrianClass>) -> CostGraph {
        vertices.sort_by_key(order_key);
        vertices.dedup();
        let index = vertices.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut edges = Vec::new();
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                if adjacent(vertices[i], vertices[j]) {
                    edges.push((i, j));
                }
            }
        }
        CostGraph {
            descriptor,
            tb_floor,
            vertices,
            edges,
            index,
        }
    }

    pub fn vertices(&self) -> &[LegendrianClass] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (LegendrianClass, LegendrianClass)> + '_ {
        self.edges.iter().map(|&(i, j)| (self.vertices[i], self.vertices[j]))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, c: LegendrianClass) -> bool {
        self.index.contains_key(&c)
    }

    pub fn degree(&self, c: LegendrianClass) -> Result<usize, GraphError> {
        let i = self.vertex(c)?;
        Ok(self.edges.iter().filter(|&&(a, b)| a == i || b == i).count())
    }

    fn vertex(&self, c: LegendrianClass) -> Result<usize, GraphError> {
        self.index.get(&c).copied().ok_or(GraphError::NotAVertex(c))
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// Hop counts from vertex `s`; `None` where unreachable.
    fn bfs(&self, adj: &[Vec<usize>], s: usize) -> Vec<Option<u64>> {
        let mut dist = vec![None; self.vertices.len()];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap() + 1;
            for &v in &adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<LegendrianClass>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for s in 0..self.vertices.len() {
            if seen[s] {
                continue;
            }
            let comp: Vec<LegendrianClass> = self
                .bfs(&adj, s)
                .iter()
                .enumerate()
                .filter(|(_, d)| d.is_some())
                .map(|(i, _)| {
                    seen[i] = true;
                    self.vertices[i]
                })
                .collect();
            out.push(comp);
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let label = |c: &LegendrianClass| format!("\"({},{})\"", c.tb, c.rot);
        let mut s = format!("graph \"{}\" {{\n", self.descriptor.name.replace('"', "'"));
        for c in &self.vertices {
            let _ = writeln!(s, "  {};", label(c));
        }
        for (a, b) in self.edges() {
            let _ = writeln!(s, "  {} -- {};", label(&a), label(&b));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pair = |c: LegendrianClass| json!([c.tb, c.rot]);
        json!({
            "type": self.descriptor,
            "tb_floor": self.tb_floor,
            "vertices": self.vertices.iter().map(|&c| pair(c)).collect::<Vec<_>>(),
            "edges": self.edges().map(|(a, b)| json!([pair(a), pair(b)])).collect::<Vec<_>>(),
        })
    }

    /// Reads a document written by [`CostGraph::to_json`] and checks it
    /// against the edge rule.
    pub fn from_json(text: &str) -> Result<CostGraph, GraphError> {
        #[derive(Deserialize)]
        struct Doc {
            #[serde(rename = "type")]
            descriptor: KnotTypeDescriptor,
            tb_floor: i64,
            vertices: Vec<(i64, i64)>,
            edges: Vec<((i64, i64), (i64, i64))>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        doc.descriptor.validate()?;
        let cls = |(tb, rot): (i64, i64)| LegendrianClass { tb, rot };
        let g = CostGraph::from_vertices(
            doc.descriptor,
            doc.tb_floor,
            doc.vertices.into_iter().map(cls).collect(),
        );
        let mut edges = Vec::with_capacity(doc.edges.len());
        for (a, b) in doc.edges {
            let (i, j) = (g.vertex(cls(a))?, g.vertex(cls(b))?);
            edges.push((i.min(j), i.max(j)));
        }
        edges.sort_unstable();
        edges.dedup();
        if edges != g.edges {
            return Err(GraphError::Parse("edge list does not follow the cost-1 rule".into()));
        }
        Ok(g)
    }
}

/// Vertices: every class of `d` with tb at least `tb_floor`. Peaks of a
/// multi-peak type are merged by (tb, rot).
pub fn build_cost_graph(d: &KnotTypeDescriptor, tb_floor: i64) -> Result<CostGraph, GraphError> {
    if !d.is_simple() {
        return Err(GraphError::NotSimple(d.name.clone()));
    }
    let vertices = classes_down_to(d, tb_floor)?;
    Ok(CostGraph::from_vertices(d.clone(), tb_floor, vertices))
}

/// Shortest-path length, or `None` when `u` and `v` lie in different
/// components.
pub fn graph_distance(g: &CostGraph, u: LegendrianClass, v: LegendrianClass) -> Result<Option<u64>, GraphError> {
    let (i, j) = (g.vertex(u)?, g.vertex(v)?);
    Ok(g.bfs(&g.adjacency(), i)[j])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum MetricViolation {
    Asymmetric { u: LegendrianClass, v: LegendrianClass },
    /// Zero distance between distinct classes, or nonzero from a class to itself.
    Identity { u: LegendrianClass, v: LegendrianClass },
    Triangle { u: LegendrianClass, v: LegendrianClass, w: LegendrianClass },
    /// Graph distance differs from the invariant formula.
    Formula {
        u: LegendrianClass,
        v: LegendrianClass,
        distance: Option<u64>,
        formula: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetricReport {
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: Vec<MetricViolation>,
}

impl MetricReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check of the metric axioms for the graph distance, and of its
/// agreement with `cost_simple`, over all pairs and triples.
pub fn verify_metric(g: &CostGraph) -> MetricReport {
    let n = g.vertices.len();
    let adj = g.adjacency();
    let dist: Vec<Vec<Option<u64>>> = (0..n).map(|s| g.bfs(&adj, s)).collect();
    let vs = &g.vertices;
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (u, v) = (vs[i], vs[j]);
            if dist[i][j] != dist[j][i] {
                violations.push(MetricViolation::Asymmetric { u, v });
            }
            if (dist[i][j] == Some(0)) != (i == j) {
                violations.push(MetricViolation::Identity { u, v });
            }
            let formula = cost_simple(&inv(u), &inv(v));
            if dist[i][j] != Some(formula) {
                violations.push(MetricViolation::Formula {
                    u,
                    v,
                    distance: dist[i][j],
                    formula,
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let Some(ij) = dist[i][j] else { continue };
            for k in 0..n {
                if let (Some(jk), ik) = (dist[j][k], dist[i][k]) {
                    if ik.is_none_or(|ik| ik > ij + jk) {
                        violations.push(MetricViolation::Triangle {
                            u: vs[i],
                            v: vs[j],
                            w: vs[k],
                        });
                    }
                }
            }
        }
    }
    MetricReport {
        vertices: n,
        edges: g.edges.len(),
        components: g.components().len(),
        pairs_checked: n * n,
        triples_checked: n * n * n,
        violations,
    }
}
