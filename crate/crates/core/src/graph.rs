//! Game positions as multigraphs with loops, and the edge-removal rule.
//!
//! A vertex stays in the structure only while it has at least one incident
//! edge. Removing the last edge at a vertex captures it: the vertex is erased
//! and the mover scores a point. A loop counts once toward the incident count
//! of its vertex.

use alloc::vec::Vec;
use core::fmt;

use crate::canonical;

/// Vertex identifier. Generators emit dense 0-based labels.
pub type Vertex = u32;

/// One endpoint pair `{u, v}` with `u <= v`; `u == v` is a loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeRef {
    u: Vertex,
    v: Vertex,
}

impl EdgeRef {
    pub fn new(a: Vertex, b: Vertex) -> Self {
        if a <= b {
            EdgeRef { u: a, v: b }
        } else {
            EdgeRef { u: b, v: a }
        }
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }

    pub fn is_loop(self) -> bool {
        self.u == self.v
    }

    pub fn touches(self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.u, self.v)
    }
}

/// All parallel instances of one endpoint pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeClass {
    pub edge: EdgeRef,
    pub multiplicity: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphError {
    /// The referenced edge is not present in the position.
    EdgeNotPresent(EdgeRef),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::EdgeNotPresent(e) => {
                write!(f, "position integrity: edge {{{}}} is not present", e)
            }
        }
    }
}

/// A live game position.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LoopyMultigraph {
    // sorted by edge, every multiplicity >= 1
    classes: Vec<EdgeClass>,
    // indexed by vertex id, 0 = absent; no trailing zeros
    incident: Vec<u32>,
    vertex_count: usize,
    edge_count: usize,
}

/// Result of deleting one edge instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveOutcome {
    /// Vertices isolated by the removal (0, 1 or 2).
    pub captured: u32,
    pub successor: LoopyMultigraph,
    pub mover_moves_again: bool,
}

impl LoopyMultigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from endpoint pairs; repeated pairs raise multiplicity.
    pub fn from_edges<I: IntoIterator<Item = (Vertex, Vertex)>>(edges: I) -> Self {
        let mut g = Self::new();
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Adds one instance of `{u, v}`, creating either vertex on first mention.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        self.add_edges(u, v, 1);
    }

    /// Builder form of [`add_edge`](Self::add_edge).
    pub fn with_edge(mut self, u: Vertex, v: Vertex) -> Self {
        self.add_edge(u, v);
        self
    }

    pub fn add_edges(&mut self, u: Vertex, v: Vertex, count: u32) {
        if count == 0 {
            return;
        }
        let edge = EdgeRef::new(u, v);
        match self.classes.binary_search_by(|c| c.edge.cmp(&edge)) {
            Ok(i) => self.classes[i].multiplicity += count,
            Err(i) => self.classes.insert(
                i,
                EdgeClass {
                    edge,
                    multiplicity: count,
                },
            ),
        }
        self.bump(edge.u, count);
        if !edge.is_loop() {
            self.bump(edge.v, count);
        }
        self.edge_count += count as usize;
    }

    fn bump(&mut self, x: Vertex, count: u32) {
        let i = x as usize;
        if i >= self.incident.len() {
            self.incident.resize(i + 1, 0);
        }
        if self.incident[i] == 0 {
            self.vertex_count += 1;
        }
        self.incident[i] += count;
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.edge_count == 0
    }

    pub fn contains_vertex(&self, x: Vertex) -> bool {
        self.incident_count(x) > 0
    }

    /// Number of edge instances touching `x`, a loop counted once.
    pub fn incident_count(&self, x: Vertex) -> u32 {
        self.incident.get(x as usize).copied().unwrap_or(0)
    }

    pub fn multiplicity(&self, a: Vertex, b: Vertex) -> u32 {
        let edge = EdgeRef::new(a, b);
        self.classes
            .binary_search_by(|c| c.edge.cmp(&edge))
            .map(|i| self.classes[i].multiplicity)
            .unwrap_or(0)
    }

    pub fn loops(&self, x: Vertex) -> u32 {
        self.multiplicity(x, x)
    }

    /// Present vertices in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.incident
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i as Vertex)
    }

    /// One past the largest vertex id in use.
    pub fn label_bound(&self) -> usize {
        self.incident.len()
    }

    /// Edge classes sorted by endpoint pair.
    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.classes
    }

    /// Every edge instance, parallel edges repeated.
    pub fn edge_instances(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.classes
            .iter()
            .flat_map(|c| core::iter::repeat(c.edge).take(c.multiplicity as usize))
    }

    /// Deletes one instance of `e` and every vertex left without edges.
    pub fn remove_edge(&self, e: EdgeRef) -> Result<MoveOutcome, GraphError> {
        let idx = self
            .classes
            .binary_search_by(|c| c.edge.cmp(&e))
            .map_err(|_| GraphError::EdgeNotPresent(e))?;
        let mut succ = self.clone();
        if succ.classes[idx].multiplicity == 1 {
            succ.classes.remove(idx);
        } else {
            succ.classes[idx].multiplicity -= 1;
        }
        succ.edge_count -= 1;
        let mut captured = 0;
        captured += succ.drop_incidence(e.u);
        if !e.is_loop() {
            captured += succ.drop_incidence(e.v);
        }
        if captured > 0 {
            let last = succ.incident.iter().rposition(|&c| c > 0).map_or(0, |p| p + 1);
            succ.incident.truncate(last);
        }
        let mover_moves_again = captured > 0 && succ.edge_count > 0;
        Ok(MoveOutcome {
            captured,
            successor: succ,
            mover_moves_again,
        })
    }

    fn drop_incidence(&mut self, x: Vertex) -> u32 {
        let c = &mut self.incident[x as usize];
        *c -= 1;
        if *c == 0 {
            self.vertex_count -= 1;
            1
        } else {
            0
        }
    }

    /// How many vertices removing `e` would capture, without building the successor.
    pub fn capture_count(&self, e: EdgeRef) -> u32 {
        if e.is_loop() {
            (self.incident_count(e.u) == 1) as u32
        } else {
            (self.incident_count(e.u) == 1) as u32 + (self.incident_count(e.v) == 1) as u32
        }
    }

    /// Legal moves up to identical successors.
    ///
    /// Parallel instances always collapse to one move. With `orbit_dedup`,
    /// moves in the same orbit under the automorphism group also collapse.
    pub fn distinct_moves(&self, orbit_dedup: bool) -> Vec<EdgeRef> {
        if orbit_dedup {
            canonical::edge_orbit_representatives(self)
        } else {
            self.classes.iter().map(|c| c.edge).collect()
        }
    }

    /// Relabels `other` past this graph's labels and merges the two.
    pub fn disjoint_union(&self, other: &LoopyMultigraph) -> LoopyMultigraph {
        let shift = self.label_bound() as Vertex;
        let mut out = self.clone();
        for c in &other.classes {
            out.add_edges(c.edge.u + shift, c.edge.v + shift, c.multiplicity);
        }
        out
    }

    /// Applies `map` to every endpoint. `map` must be injective on present vertices.
    pub fn relabel<F: Fn(Vertex) -> Vertex>(&self, map: F) -> LoopyMultigraph {
        let mut out = LoopyMultigraph::new();
        for c in &self.classes {
            out.add_edges(map(c.edge.u), map(c.edge.v), c.multiplicity);
        }
        out
    }

    /// Relabels present vertices to `0..vertex_count` preserving order.
    pub fn compact(&self) -> LoopyMultigraph {
        let mut index = alloc::vec![Vertex::MAX; self.incident.len()];
        for (i, x) in self.vertices().enumerate() {
            index[x as usize] = i as Vertex;
        }
        self.relabel(|x| index[x as usize])
    }

    /// Connected components as vertex lists, each ascending, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let n = self.incident.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for c in &self.classes {
            let a = find(&mut parent, c.edge.u as usize);
            let b = find(&mut parent, c.edge.v as usize);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut slot = alloc::vec![usize::MAX; n];
        let mut out: Vec<Vec<Vertex>> = Vec::new();
        for x in self.vertices() {
            let r = find(&mut parent, x as usize);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(x);
        }
        out
    }

    /// Subgraph induced by `keep` (which must be a union of components to stay live).
    pub fn induced(&self, keep: &[Vertex]) -> LoopyMultigraph {
        let mut mark = alloc::vec![false; self.incident.len()];
        for &x in keep {
            if (x as usize) < mark.len() {
                mark[x as usize] = true;
            }
        }
        let mut out = LoopyMultigraph::new();
        for c in &self.classes {
            if mark[c.edge.u as usize] && mark[c.edge.v as usize] {
                out.add_edges(c.edge.u, c.edge.v, c.multiplicity);
            }
        }
        out
    }

    /// True when the position has no cycle: no loops, no parallel edges,
    /// and `edges == vertices - components`.
    pub fn is_forest(&self) -> bool {
        if self.classes.iter().any(|c| c.edge.is_loop() || c.multiplicity > 1) {
            return false;
        }
        self.edge_count + self.components().len() == self.vertex_count
    }

    /// Recomputes incident counts from the edge list; used to audit the cache.
    pub fn recount_incidence(&self) -> Vec<u32> {
        let mut counts = alloc::vec![0u32; self.incident.len()];
        for c in &self.classes {
            counts[c.edge.u as usize] += c.multiplicity;
            if !c.edge.is_loop() {
                counts[c.edge.v as usize] += c.multiplicity;
            }
        }
        counts
    }

    /// Cached incident counts indexed by vertex id.
    pub fn incidence(&self) -> &[u32] {
        &self.incident
    }
}
