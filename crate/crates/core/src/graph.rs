//! Finite multigraphs with a fixed edge orientation, closed walks, spanning
//! trees and the binary cycle space.
//!
//! Loops and parallel edges are allowed, so walks are always sequences of
//! `(edge, direction)` steps rather than vertex sequences.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BitVector, Gf2Basis};

/// Element of the binary cycle space, one bit per edge.
pub type BinaryVector = BitVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("edge {edge:?} refers to unknown vertex {vertex:?}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("unknown vertex {0:?}")]
    NoSuchVertex(String),
    #[error("unknown edge {0:?}")]
    NoSuchEdge(String),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("walk step {step} uses edge {edge:?} which does not leave vertex {at:?}")]
    BrokenWalk {
        step: usize,
        edge: String,
        at: String,
    },
    #[error("walk starting at {start:?} ends at {end:?} and is not closed")]
    OpenWalk { start: String, end: String },
    #[error("edge set is not a spanning tree: {0}")]
    InvalidTree(String),
    #[error("walk direction must be 1 or -1, got {0}")]
    BadDirection(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub label: String,
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// A finite multigraph whose edges carry a fixed orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertices: Vec<String>,
    vertex_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, usize>,
}

impl Multigraph {
    /// Builds a graph from vertex ids and `(edge id, tail, head)` triples.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut out = Vec::new();
        let mut edge_index = HashMap::new();
        for (label, tail, head) in edges {
            let lookup = |v: &String| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| GraphError::UnknownVertex {
                        edge: label.clone(),
                        vertex: v.clone(),
                    })
            };
            let (t, h) = (lookup(&tail)?, lookup(&head)?);
            if edge_index.insert(label.clone(), out.len()).is_some() {
                return Err(GraphError::DuplicateEdge(label));
            }
            out.push(Edge {
                label,
                tail: t,
                head: h,
            });
        }
        Ok(Multigraph {
            vertices,
            vertex_index,
            edges: out,
            edge_index,
        })
    }

    /// Graph on vertices `v0..v{n-1}` with edges `e0, e1, …` given by index.
    pub fn from_indices(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Multigraph::new(
            (0..n).map(|i| format!("v{i}")),
            edges
                .iter()
                .enumerate()
                .map(|(j, &(t, h))| (format!("e{j}"), format!("v{t}"), format!("v{h}"))),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex(&self, label: &str) -> Result<usize, GraphError> {
        self.vertex_index
            .get(label)
            .copied()
            .ok_or_else(|| GraphError::NoSuchVertex(label.to_string()))
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_by_label(&self, label: &str) -> Result<usize, GraphError> {
        self.edge_index
            .get(label)
            .copied()
            .ok_or_else(|| GraphError::NoSuchEdge(label.to_string()))
    }

    /// Number of connected components (an empty graph has none).
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count());
        let mut components = self.vertex_count();
        for e in &self.edges {
            if uf.union(e.tail, e.head) {
                components -= 1;
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn ensure_connected(&self) -> Result<(), GraphError> {
        match self.component_count() {
            1 => Ok(()),
            components => Err(GraphError::Disconnected { components }),
        }
    }

    /// Dimension of the binary cycle space, `|E| - |V| + c`.
    pub fn cycle_rank(&self) -> usize {
        self.edge_count() + self.component_count() - self.vertex_count()
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.label.clone(),
                    tail: self.vertices[e.tail].clone(),
                    head: self.vertices[e.head].clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self, GraphError> {
        Multigraph::new(
            json.vertices.iter().cloned(),
            json.edges
                .iter()
                .map(|e| (e.id.clone(), e.tail.clone(), e.head.clone())),
        )
    }

    /// Graphviz rendering; `edge_note` may attach a label to each edge.
    pub fn to_dot(&self, name: &str, edge_note: impl Fn(usize) -> Option<String>) -> String {
        let mut out = format!("digraph \"{}\" {{\n", escape(name));
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{}\";", escape(v));
        }
        for (i, e) in self.edges.iter().enumerate() {
            let label = match edge_note(i) {
                Some(note) => format!("{}: {}", e.label, note),
                None => e.label.clone(),
            };
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                escape(&self.vertices[e.tail]),
                escape(&self.vertices[e.head]),
                escape(&label)
            );
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Vertex and edge ids in JSON may be strings or integers.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
enum RawId {
    Str(String),
    Int(i64),
}

pub(crate) fn deserialize_id<'de, D: serde::Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    Ok(match RawId::deserialize(d)? {
        RawId::Str(s) => s,
        RawId::Int(i) => i.to_string(),
    })
}

fn deserialize_ids<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
    Ok(Vec::<RawId>::deserialize(d)?
        .into_iter()
        .map(|r| match r {
            RawId::Str(s) => s,
            RawId::Int(i) => i.to_string(),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(deserialize_with = "deserialize_ids")]
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    #[serde(deserialize_with = "deserialize_id")]
    pub id: String,
    #[serde(deserialize_with = "deserialize_id")]
    pub tail: String,
    #[serde(deserialize_with = "deserialize_id")]
    pub head: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: usize,
    pub dir: Direction,
}

impl Step {
    pub fn forward(edge: usize) -> Step {
        Step {
            edge,
            dir: Direction::Forward,
        }
    }

    pub fn backward(edge: usize) -> Step {
        Step {
            edge,
            dir: Direction::Backward,
        }
    }
}

/// A walk validated against a particular graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    start: usize,
    end: usize,
    steps: Vec<Step>,
}

impl Walk {
    pub fn new(g: &Multigraph, start: usize, steps: Vec<Step>) -> Result<Walk, GraphError> {
        if start >= g.vertex_count() {
            return Err(GraphError::NoSuchVertex(start.to_string()));
        }
        let mut at = start;
        for (i, s) in steps.iter().enumerate() {
            let Some(e) = g.edges.get(s.edge) else {
                return Err(GraphError::NoSuchEdge(s.edge.to_string()));
            };
            let (from, to) = match s.dir {
                Direction::Forward => (e.tail, e.head),
                Direction::Backward => (e.head, e.tail),
            };
            if from != at {
                return Err(GraphError::BrokenWalk {
                    step: i,
                    edge: e.label.clone(),
                    at: g.vertex_label(at).to_string(),
                });
            }
            at = to;
        }
        Ok(Walk {
            start,
            end: at,
            steps,
        })
    }

    pub fn empty(v: usize) -> Walk {
        Walk {
            start: v,
            end: v,
            steps: Vec::new(),
        }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.start == self.end
    }

    /// The same walk traversed backwards.
    pub fn reversed(&self) -> Walk {
        Walk {
            start: self.end,
            end: self.start,
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| Step {
                    edge: s.edge,
                    dir: s.dir.flip(),
                })
                .collect(),
        }
    }

    /// `self` followed by `other`; `other` must start where `self` ends.
    pub fn concat(&self, other: &Walk) -> Option<Walk> {
        if self.end != other.start {
            return None;
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Some(Walk {
            start: self.start,
            end: other.end,
            steps,
        })
    }

    /// Vertices visited, including the start (length `len() + 1`).
    pub fn vertices(&self, g: &Multigraph) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(self.start);
        for s in &self.steps {
            let e = g.edge(s.edge);
            out.push(match s.dir {
                Direction::Forward => e.head,
                Direction::Backward => e.tail,
            });
        }
        out
    }

    /// Cyclic shift of a closed walk so that it starts after `k` steps.
    pub fn rotated(&self, g: &Multigraph, k: usize) -> Option<Walk> {
        if !self.is_closed() {
            return None;
        }
        if self.steps.is_empty() {
            return Some(self.clone());
        }
        let k = k % self.steps.len();
        let start = self.vertices(g)[k];
        let mut steps = self.steps[k..].to_vec();
        steps.extend_from_slice(&self.steps[..k]);
        Some(Walk {
            start,
            end: start,
            steps,
        })
    }

    pub fn to_json(&self, g: &Multigraph) -> WalkJson {
        WalkJson {
            start: g.vertex_label(self.start).to_string(),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    edge: g.edge(s.edge).label.clone(),
                    dir: s.dir.sign() as i8,
                })
                .collect(),
        }
    }

    pub fn from_json(g: &Multigraph, json: &WalkJson) -> Result<Walk, GraphError> {
        let start = g.vertex(&json.start)?;
        let steps = json
            .steps
            .iter()
            .map(|s| {
                let edge = g.edge_by_label(&s.edge)?;
                let dir = match s.dir {
                    1 => Direction::Forward,
                    -1 => Direction::Backward,
                    other => return Err(GraphError::BadDirection(other as i64)),
                };
                Ok(Step { edge, dir })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Walk::new(g, start, steps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkJson {
    #[serde(deserialize_with = "deserialize_id")]
    pub start: String,
    pub steps: Vec<StepJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepJson {
    #[serde(deserialize_with = "deserialize_id")]
    pub edge: String,
    pub dir: i8,
}

/// A family of closed walks proposed as cyclic orientations of a binary
/// cycle basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasisCandidate {
    walks: Vec<Walk>,
}

impl CycleBasisCandidate {
    pub fn new(walks: Vec<Walk>) -> Result<Self, GraphError> {
        Ok(CycleBasisCandidate { walks })
    }

    pub fn walks(&self) -> &[Walk] {
        &self.walks
    }

    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn to_json(&self, g: &Multigraph) -> CandidateJson {
        CandidateJson {
            walks: self.walks.iter().map(|w| w.to_json(g)).collect(),
        }
    }

    pub fn from_json(g: &Multigraph, json: &CandidateJson) -> Result<Self, GraphError> {
        let walks = json
            .walks
            .iter()
            .map(|w| Walk::from_json(g, w))
            .collect::<Result<Vec<_>, _>>()?;
        CycleBasisCandidate::new(walks)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateJson {
    pub walks: Vec<WalkJson>,
}

/// A rooted spanning tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    root: usize,
    in_tree: Vec<bool>,
    /// `(parent edge, direction from parent to child)` for each non-root vertex.
    parent_step: Vec<Option<Step>>,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    /// Vertices in breadth-first order from the root.
    order: Vec<usize>,
}

impl SpanningTree {
    /// Builds a rooted tree from an explicit edge set.
    pub fn from_edges(g: &Multigraph, edges: &[usize], root: usize) -> Result<Self, GraphError> {
        let n = g.vertex_count();
        if root >= n {
            return Err(GraphError::InvalidTree(format!("root {root} out of range")));
        }
        if edges.len() + 1 != n {
            return Err(GraphError::InvalidTree(format!(
                "{} edges for {} vertices",
                edges.len(),
                n
            )));
        }
        let mut in_tree = vec![false; g.edge_count()];
        let mut uf = UnionFind::new(n);
        let mut adjacency = vec![Vec::new(); n];
        for &e in edges {
            let edge = g
                .edges
                .get(e)
                .ok_or_else(|| GraphError::InvalidTree(format!("edge {e} out of range")))?;
            if in_tree[e] || !uf.union(edge.tail, edge.head) {
                return Err(GraphError::InvalidTree(format!(
                    "edge {:?} closes a cycle",
                    edge.label
                )));
            }
            in_tree[e] = true;
            adjacency[edge.tail].push((e, edge.head, Direction::Forward));
            adjacency[edge.head].push((e, edge.tail, Direction::Backward));
        }
        let mut parent_step = vec![None; n];
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut order = vec![root];
        seen[root] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &(e, w, dir) in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    parent_step[w] = Some(Step { edge: e, dir });
                    depth[w] = depth[v] + 1;
                    order.push(w);
                }
            }
        }
        Ok(SpanningTree {
            root,
            in_tree,
            parent_step,
            parent,
            depth,
            order,
        })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn contains(&self, e: usize) -> bool {
        self.in_tree[e]
    }

    pub fn edges(&self) -> Vec<usize> {
        (0..self.in_tree.len())
            .filter(|&e| self.in_tree[e])
            .collect()
    }

    pub fn non_tree_edges(&self) -> Vec<usize> {
        (0..self.in_tree.len())
            .filter(|&e| !self.in_tree[e])
            .collect()
    }

    /// Vertices in breadth-first order; each vertex after the root has its
    /// parent earlier in the list.
    pub fn bfs_order(&self) -> &[usize] {
        &self.order
    }

    /// Step from the parent of `v` into `v` (`None` for the root).
    pub fn parent_step(&self, v: usize) -> Option<Step> {
        self.parent_step[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Tree path from `a` to `b`.
    pub fn path(&self, a: usize, b: usize) -> Vec<Step> {
        let mut up_a = Vec::new();
        let mut down_b = Vec::new();
        let (mut x, mut y) = (a, b);
        while self.depth[x] > self.depth[y] {
            let s = self.parent_step[x].expect("non-root");
            up_a.push(Step {
                edge: s.edge,
                dir: s.dir.flip(),
            });
            x = self.parent[x].expect("non-root");
        }
        while self.depth[y] > self.depth[x] {
            down_b.push(self.parent_step[y].expect("non-root"));
            y = self.parent[y].expect("non-root");
        }
        while x != y {
            let s = self.parent_step[x].expect("non-root");
            up_a.push(Step {
                edge: s.edge,
                dir: s.dir.flip(),
            });
            x = self.parent[x].expect("non-root");
            down_b.push(self.parent_step[y].expect("non-root"));
            y = self.parent[y].expect("non-root");
        }
        up_a.extend(down_b.into_iter().rev());
        up_a
    }

    pub fn path_walk(&self, g: &Multigraph, a: usize, b: usize) -> Walk {
        Walk::new(g, a, self.path(a, b)).expect("tree paths are walks")
    }
}

/// Deterministic spanning tree: edges are scanned in input order and kept
/// when they join two components; rooted at vertex 0.
pub fn spanning_tree(g: &Multigraph) -> Result<SpanningTree, GraphError> {
    let order: Vec<usize> = (0..g.edge_count()).collect();
    spanning_tree_with_order(g, &order, 0)
}

/// Spanning tree built by scanning edges in the given order.
pub fn spanning_tree_with_order(
    g: &Multigraph,
    order: &[usize],
    root: usize,
) -> Result<SpanningTree, GraphError> {
    g.ensure_connected()?;
    let mut uf = UnionFind::new(g.vertex_count());
    let edges: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&e| {
            let edge = g.edge(e);
            uf.union(edge.tail, edge.head)
        })
        .collect();
    SpanningTree::from_edges(g, &edges, root)
}

/// One closed walk per non-tree edge: start at its tail, cross the edge,
/// return through the tree.
pub fn fundamental_circles(g: &Multigraph, tree: &SpanningTree) -> Vec<Walk> {
    tree.non_tree_edges()
        .into_iter()
        .map(|e| fundamental_circle(g, tree, e))
        .collect()
}

pub fn fundamental_circle(g: &Multigraph, tree: &SpanningTree, e: usize) -> Walk {
    let edge = g.edge(e);
    let mut steps = vec![Step::forward(e)];
    steps.extend(tree.path(edge.head, edge.tail));
    Walk::new(g, edge.tail, steps).expect("fundamental circles are walks")
}

/// Reduction of a closed walk modulo 2: bit `e` is set iff edge `e` is
/// traversed an odd number of times.
pub fn binary_image(g: &Multigraph, w: &Walk) -> Result<BinaryVector, GraphError> {
    if !w.is_closed() {
        return Err(GraphError::OpenWalk {
            start: g.vertex_label(w.start()).to_string(),
            end: g.vertex_label(w.end()).to_string(),
        });
    }
    let mut v = BitVector::zeros(g.edge_count());
    for s in w.steps() {
        v.flip(s.edge);
    }
    Ok(v)
}

/// True iff every vertex meets the edge set an even number of times
/// (loops count twice).
pub fn is_binary_cycle(g: &Multigraph, v: &BinaryVector) -> bool {
    let mut parity = vec![false; g.vertex_count()];
    for e in v.ones() {
        let edge = g.edge(e);
        parity[edge.tail] ^= true;
        parity[edge.head] ^= true;
    }
    parity.iter().all(|&p| !p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisReport {
    pub is_basis: bool,
    pub rank: usize,
    pub candidate_count: usize,
    pub cycle_rank: usize,
}

/// Checks whether the binary images of the candidate walks form a basis of
/// the binary cycle space.
pub fn is_binary_cycle_basis(
    g: &Multigraph,
    cand: &CycleBasisCandidate,
) -> Result<BasisReport, GraphError> {
    let mut basis = Gf2Basis::new();
    for w in cand.walks() {
        basis.insert(&binary_image(g, w)?);
    }
    let cycle_rank = g.cycle_rank();
    Ok(BasisReport {
        is_basis: basis.rank() == cand.len() && cand.len() == cycle_rank,
        rank: basis.rank(),
        candidate_count: cand.len(),
        cycle_rank,
    })
}

/// Fundamental cycles of the subgraph formed by `edges`, each given as
/// `(global index, tail, head)`, as bit vectors of length `total_edges`.
pub fn subgraph_cycle_vectors(
    vertex_count: usize,
    total_edges: usize,
    edges: &[(usize, usize, usize)],
) -> Vec<BitVector> {
    let mut uf = UnionFind::new(vertex_count);
    let mut forest: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_count];
    let mut closing = Vec::new();
    for &(e, t, h) in edges {
        if uf.union(t, h) {
            forest[t].push((h, e));
            forest[h].push((t, e));
        } else {
            closing.push((e, t, h));
        }
    }
    closing
        .into_iter()
        .map(|(e, t, h)| {
            let mut v = BitVector::zeros(total_edges);
            v.flip(e);
            // Breadth-first search for the forest path from h back to t.
            let mut came_from: Vec<Option<(usize, usize)>> = vec![None; vertex_count];
            let mut seen = vec![false; vertex_count];
            let mut queue = std::collections::VecDeque::from([h]);
            seen[h] = true;
            while let Some(x) = queue.pop_front() {
                if x == t {
                    break;
                }
                for &(y, edge) in &forest[x] {
                    if !seen[y] {
                        seen[y] = true;
                        came_from[y] = Some((x, edge));
                        queue.push_back(y);
                    }
                }
            }
            let mut x = t;
            while let Some((prev, edge)) = came_from[x] {
                v.flip(edge);
                x = prev;
            }
            v
        })
        .collect()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if `a` and `b` were in different sets.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// The wheel `W_n`: hub `h`, rim vertices `r0..r{n-1}`, rim edges
/// `e{i}: r{i} -> r{i+1}` listed first, then spokes `s{i}: h -> r{i}`.
pub fn wheel(n: usize) -> Multigraph {
    assert!(n >= 3, "a wheel needs at least three rim vertices");
    let vertices = std::iter::once("h".to_string()).chain((0..n).map(|i| format!("r{i}")));
    let rim = (0..n).map(|i| {
        (
            format!("e{i}"),
            format!("r{i}"),
            format!("r{}", (i + 1) % n),
        )
    });
    let spokes = (0..n).map(|i| (format!("s{i}"), "h".to_string(), format!("r{i}")));
    Multigraph::new(vertices, rim.chain(spokes).collect::<Vec<_>>()).expect("wheel is well formed")
}
