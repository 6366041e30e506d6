//! Canonical keys for loopy multigraphs.
//!
//! Labeling runs color refinement to an equitable ordered partition and then
//! backtracks over individualizations of the first largest non-singleton
//! cell, keeping the least certificate among the leaves. Automorphisms found
//! along the way prune sibling subtrees in the same orbit. Disconnected
//! graphs are labeled component by component and the component keys are
//! concatenated in byte order, so a union's key is a function of its parts.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{EdgeRef, LoopyMultigraph, Vertex};

type Triple = (u32, u32, u32);

/// Isomorphism-invariant serialization of a position.
///
/// Layout: `[u16 vertex-count]` followed by `(u16 u, u16 v, u16 multiplicity)`
/// triples sorted ascending, all little-endian. Loops appear as `u == v`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Box<[u8]>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyError {
    /// Length is not `2 + 6k`.
    Framing(usize),
    /// An endpoint is out of range, a triple is unsorted or has zero multiplicity.
    Content,
}

impl fmt::Display for KeyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KeyError::Framing(n) => write!(f, "canonical key of {} bytes is not 2 + 6k", n),
            KeyError::Content => write!(f, "canonical key content is malformed"),
        }
    }
}

impl CanonicalKey {
    fn encode(n: usize, triples: &[Triple]) -> Self {
        let mut out = Vec::with_capacity(2 + 6 * triples.len());
        out.extend_from_slice(&to_u16(n as u32).to_le_bytes());
        for &(u, v, m) in triples {
            out.extend_from_slice(&to_u16(u).to_le_bytes());
            out.extend_from_slice(&to_u16(v).to_le_bytes());
            out.extend_from_slice(&to_u16(m).to_le_bytes());
        }
        CanonicalKey(out.into_boxed_slice())
    }

    /// Keys of the connected components, which occupy consecutive label ranges.
    pub fn split_components(&self) -> Vec<CanonicalKey> {
        let comps = self.to_graph().components();
        if comps.len() <= 1 {
            return alloc::vec![self.clone()];
        }
        let triples = self.triples();
        comps
            .iter()
            .map(|c| {
                let (lo, hi) = (c[0], c[c.len() - 1]);
                let own: Vec<Triple> = triples
                    .iter()
                    .filter(|t| t.0 >= lo && t.0 <= hi)
                    .map(|&(u, v, m)| (u - lo, v - lo, m))
                    .collect();
                CanonicalKey::encode(c.len(), &own)
            })
            .collect()
    }

    /// Wraps raw bytes after checking framing and content.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, KeyError> {
        if bytes.len() < 2 || (bytes.len() - 2) % 6 != 0 {
            return Err(KeyError::Framing(bytes.len()));
        }
        let key = CanonicalKey(bytes.into());
        let n = key.vertex_count() as u32;
        let triples = key.triples();
        let mut seen = vec![false; n as usize];
        for (i, &(u, v, m)) in triples.iter().enumerate() {
            if u > v || v >= n || m == 0 {
                return Err(KeyError::Content);
            }
            if i > 0 && triples[i - 1] >= (u, v, m) {
                return Err(KeyError::Content);
            }
            seen[u as usize] = true;
            seen[v as usize] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(KeyError::Content);
        }
        Ok(key)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn vertex_count(&self) -> usize {
        u16::from_le_bytes([self.0[0], self.0[1]]) as usize
    }

    fn triples(&self) -> Vec<Triple> {
        self.0[2..]
            .chunks_exact(6)
            .map(|c| {
                (
                    u16::from_le_bytes([c[0], c[1]]) as u32,
                    u16::from_le_bytes([c[2], c[3]]) as u32,
                    u16::from_le_bytes([c[4], c[5]]) as u32,
                )
            })
            .collect()
    }

    /// The canonically labeled graph this key serializes.
    pub fn to_graph(&self) -> LoopyMultigraph {
        let mut g = LoopyMultigraph::new();
        for (u, v, m) in self.triples() {
            g.add_edges(u, v, m);
        }
        g
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey(n={}, {:?})", self.vertex_count(), self.triples())
    }
}

fn to_u16(x: u32) -> u16 {
    u16::try_from(x).expect("canonical keys hold at most 65535 vertices and multiplicity")
}

/// Ordered partition of the present vertices into color cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredPartition {
    cells: Vec<Vec<Vertex>>,
}

impl ColoredPartition {
    /// All present vertices in one cell.
    pub fn unit(g: &LoopyMultigraph) -> Self {
        let all: Vec<Vertex> = g.vertices().collect();
        let cells = if all.is_empty() { Vec::new() } else { vec![all] };
        ColoredPartition { cells }
    }

    /// Caller-supplied cells; empty cells are dropped.
    pub fn from_cells(cells: Vec<Vec<Vertex>>) -> Self {
        ColoredPartition {
            cells: cells.into_iter().filter(|c| !c.is_empty()).collect(),
        }
    }

    pub fn cells(&self) -> &[Vec<Vertex>] {
        &self.cells
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 1)
    }
}

/// Coarsest equitable refinement of `p`.
///
/// The signature of a vertex is its incident count, loop multiplicity and the
/// multiset of (neighbor cell, edge multiplicity) pairs. Cells split in place,
/// sub-cells ordered by ascending signature.
pub fn color_refine(g: &LoopyMultigraph, p: &ColoredPartition) -> ColoredPartition {
    let dense = Dense::new(g);
    let mut cells: Vec<Vec<u32>> = p
        .cells
        .iter()
        .map(|c| c.iter().map(|&x| dense.index[x as usize]).collect())
        .collect();
    dense.refine(&mut cells);
    ColoredPartition {
        cells: cells
            .into_iter()
            .map(|c| c.into_iter().map(|i| dense.verts[i as usize]).collect())
            .collect(),
    }
}

/// A canonical labeling together with automorphism generators.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    /// `labeling[p]` is the original vertex placed at canonical position `p`.
    pub labeling: Vec<Vertex>,
    /// Automorphisms as maps indexed by original vertex id (identity off the graph).
    pub generators: Vec<Vec<Vertex>>,
}

pub fn canonical_key(g: &LoopyMultigraph) -> CanonicalKey {
    canonical_form(g).key
}

/// Key of the disjoint union of graphs with the given keys.
pub fn key_from_components(parts: &[CanonicalKey]) -> CanonicalKey {
    let mut pieces: Vec<CanonicalKey> = Vec::with_capacity(parts.len());
    for k in parts {
        pieces.extend(k.split_components());
    }
    pieces.sort();
    let mut n = 0u32;
    let mut triples = Vec::new();
    for k in &pieces {
        for (u, v, m) in k.triples() {
            triples.push((u + n, v + n, m));
        }
        n += k.vertex_count() as u32;
    }
    CanonicalKey::encode(n as usize, &triples)
}

pub fn canonical_form(g: &LoopyMultigraph) -> CanonicalForm {
    let bound = g.label_bound();
    let identity: Vec<Vertex> = (0..bound as Vertex).collect();
    let comps = g.components();
    if comps.len() <= 1 {
        let dense = Dense::new(g);
        let r = Searcher::run(&dense);
        let generators = r
            .autos
            .iter()
            .map(|a| {
                let mut m = identity.clone();
                for (i, &img) in a.iter().enumerate() {
                    m[dense.verts[i] as usize] = dense.verts[img as usize];
                }
                m
            })
            .collect();
        return CanonicalForm {
            key: CanonicalKey::encode(dense.n, &r.cert),
            labeling: r.order.iter().map(|&i| dense.verts[i as usize]).collect(),
            generators,
        };
    }

    struct Part {
        key: CanonicalKey,
        labeling: Vec<Vertex>,
        generators: Vec<Vec<Vertex>>,
    }
    let mut parts: Vec<Part> = comps
        .iter()
        .map(|c| {
            let f = canonical_form(&g.induced(c));
            Part {
                key: f.key,
                labeling: f.labeling,
                generators: f.generators,
            }
        })
        .collect();
    parts.sort_by(|a, b| a.key.cmp(&b.key));

    let key = key_from_components(&parts.iter().map(|p| p.key.clone()).collect::<Vec<_>>());
    let mut labeling = Vec::with_capacity(g.vertex_count());
    let mut generators = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        labeling.extend_from_slice(&part.labeling);
        for gen in &part.generators {
            let mut m = identity.clone();
            for &x in &part.labeling {
                m[x as usize] = gen[x as usize];
            }
            generators.push(m);
        }
        if i + 1 < parts.len() && parts[i + 1].key == part.key {
            let next = &parts[i + 1];
            let mut m = identity.clone();
            for (&a, &b) in part.labeling.iter().zip(&next.labeling) {
                m[a as usize] = b;
                m[b as usize] = a;
            }
            generators.push(m);
        }
    }
    CanonicalForm {
        key,
        labeling,
        generators,
    }
}

/// One representative (the least endpoint pair) per automorphism orbit of edge classes.
pub fn edge_orbit_representatives(g: &LoopyMultigraph) -> Vec<EdgeRef> {
    if g.is_empty() {
        return Vec::new();
    }
    orbit_representatives_with(g, &canonical_form(g))
}

/// As [`edge_orbit_representatives`], reusing an already computed form of `g`.
pub fn orbit_representatives_with(g: &LoopyMultigraph, form: &CanonicalForm) -> Vec<EdgeRef> {
    let classes = g.edge_classes();
    let mut parent: Vec<usize> = (0..classes.len()).collect();
    for gen in &form.generators {
        for (i, c) in classes.iter().enumerate() {
            let (u, v) = c.edge.endpoints();
            let img = EdgeRef::new(gen[u as usize], gen[v as usize]);
            let j = classes
                .binary_search_by(|x| x.edge.cmp(&img))
                .expect("automorphism maps edges to edges");
            let (a, b) = (uf_find(&mut parent, i), uf_find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..classes.len())
        .filter(|&i| uf_find(&mut parent, i) == i)
        .map(|i| classes[i].edge)
        .collect()
}

fn uf_find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Exhaustive isomorphism test by backtracking vertex matching.
///
/// Independent of the canonical labeling; intended for small graphs.
pub fn are_isomorphic(a: &LoopyMultigraph, b: &LoopyMultigraph) -> bool {
    if a.vertex_count() != b.vertex_count()
        || a.edge_count() != b.edge_count()
        || a.edge_classes().len() != b.edge_classes().len()
    {
        return false;
    }
    let profile = |g: &LoopyMultigraph, x: Vertex| {
        let mut mults: Vec<u32> = g
            .edge_classes()
            .iter()
            .filter(|c| c.edge.touches(x) && !c.edge.is_loop())
            .map(|c| c.multiplicity)
            .collect();
        mults.sort_unstable();
        (g.incident_count(x), g.loops(x), mults)
    };
    let av: Vec<Vertex> = a.vertices().collect();
    let bv: Vec<Vertex> = b.vertices().collect();
    let ap: Vec<_> = av.iter().map(|&x| profile(a, x)).collect();
    let bp: Vec<_> = bv.iter().map(|&x| profile(b, x)).collect();
    let mut sa = ap.clone();
    let mut sb = bp.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }

    fn extend(
        i: usize,
        a: &LoopyMultigraph,
        b: &LoopyMultigraph,
        av: &[Vertex],
        bv: &[Vertex],
        ap: &[(u32, u32, Vec<u32>)],
        bp: &[(u32, u32, Vec<u32>)],
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == av.len() {
            return true;
        }
        for j in 0..bv.len() {
            if used[j] || ap[i] != bp[j] {
                continue;
            }
            let ok = (0..i).all(|k| {
                let mk = map[k].unwrap();
                a.multiplicity(av[i], av[k]) == b.multiplicity(bv[j], bv[mk])
            });
            if !ok {
                continue;
            }
            map[i] = Some(j);
            used[j] = true;
            if extend(i + 1, a, b, av, bv, ap, bp, map, used) {
                return true;
            }
            map[i] = None;
            used[j] = false;
        }
        false
    }

    let mut map = vec![None; av.len()];
    let mut used = vec![false; bv.len()];
    extend(0, a, b, &av, &bv, &ap, &bp, &mut map, &mut used)
}

// Dense relabeling of a graph used by refinement and search.
struct Dense {
    n: usize,
    verts: Vec<Vertex>,
    index: Vec<u32>,
    loops: Vec<u32>,
    incident: Vec<u32>,
    adj: Vec<Vec<(u32, u32)>>,
    classes: Vec<Triple>,
}

impl Dense {
    fn new(g: &LoopyMultigraph) -> Self {
        let verts: Vec<Vertex> = g.vertices().collect();
        let n = verts.len();
        let mut index = vec![u32::MAX; g.label_bound()];
        for (i, &x) in verts.iter().enumerate() {
            index[x as usize] = i as u32;
        }
        let mut loops = vec![0; n];
        let mut adj = vec![Vec::new(); n];
        let mut classes = Vec::with_capacity(g.edge_classes().len());
        for c in g.edge_classes() {
            let (u, v) = c.edge.endpoints();
            let (a, b) = (index[u as usize], index[v as usize]);
            classes.push((a, b, c.multiplicity));
            if a == b {
                loops[a as usize] = c.multiplicity;
            } else {
                adj[a as usize].push((b, c.multiplicity));
                adj[b as usize].push((a, c.multiplicity));
            }
        }
        let incident = verts.iter().map(|&x| g.incident_count(x)).collect();
        Dense {
            n,
            verts,
            index,
            loops,
            incident,
            adj,
            classes,
        }
    }

    fn refine(&self, cells: &mut Vec<Vec<u32>>) {
        let mut cell_of = vec![0u32; self.n];
        let mut sig: Vec<(u32, u32, Vec<(u32, u32)>)> = vec![(0, 0, Vec::new()); self.n];
        loop {
            for (ci, c) in cells.iter().enumerate() {
                for &x in c {
                    cell_of[x as usize] = ci as u32;
                }
            }
            let mut split = false;
            let mut next: Vec<Vec<u32>> = Vec::with_capacity(cells.len());
            for c in cells.iter() {
                if c.len() == 1 {
                    next.push(c.clone());
                    continue;
                }
                for &x in c {
                    let s = &mut sig[x as usize];
                    s.0 = self.incident[x as usize];
                    s.1 = self.loops[x as usize];
                    s.2.clear();
                    s.2.extend(self.adj[x as usize].iter().map(|&(w, m)| (cell_of[w as usize], m)));
                    s.2.sort_unstable();
                }
                let mut members = c.clone();
                members.sort_by(|&x, &y| sig[x as usize].cmp(&sig[y as usize]).then(x.cmp(&y)));
                let start = next.len();
                let mut cur = vec![members[0]];
                for w in members.windows(2) {
                    if sig[w[0] as usize] == sig[w[1] as usize] {
                        cur.push(w[1]);
                    } else {
                        next.push(core::mem::take(&mut cur));
                        cur.push(w[1]);
                    }
                }
                next.push(cur);
                if next.len() - start > 1 {
                    split = true;
                }
            }
            *cells = next;
            if !split {
                return;
            }
        }
    }

    fn certificate(&self, order: &[u32]) -> Vec<Triple> {
        let mut lab = vec![0u32; self.n];
        for (p, &x) in order.iter().enumerate() {
            lab[x as usize] = p as u32;
        }
        let mut cert: Vec<Triple> = self
            .classes
            .iter()
            .map(|&(a, b, m)| {
                let (x, y) = (lab[a as usize], lab[b as usize]);
                if x <= y {
                    (x, y, m)
                } else {
                    (y, x, m)
                }
            })
            .collect();
        cert.sort_unstable();
        cert
    }
}

struct Leaf {
    path: Vec<u32>,
    order: Vec<u32>,
    cert: Vec<Triple>,
}

struct Searcher<'a> {
    dense: &'a Dense,
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Vec<u32>>,
}

struct SearchResult {
    cert: Vec<Triple>,
    order: Vec<u32>,
    autos: Vec<Vec<u32>>,
}

impl<'a> Searcher<'a> {
    fn run(dense: &'a Dense) -> SearchResult {
        if dense.n == 0 {
            return SearchResult {
                cert: Vec::new(),
                order: Vec::new(),
                autos: Vec::new(),
            };
        }
        let mut s = Searcher {
            dense,
            first: None,
            best: None,
            autos: Vec::new(),
        };
        let mut cells = vec![(0..dense.n as u32).collect::<Vec<_>>()];
        dense.refine(&mut cells);
        let mut path = Vec::new();
        s.visit(cells, &mut path);
        let best = s.best.take().expect("search reaches a leaf");
        SearchResult {
            cert: best.cert,
            order: best.order,
            autos: s.autos,
        }
    }

    // Returns Some(depth) to abandon every frame deeper than `depth`.
    fn visit(&mut self, cells: Vec<Vec<u32>>, path: &mut Vec<u32>) -> Option<usize> {
        let mut target = None;
        let mut size = 1;
        for (i, c) in cells.iter().enumerate() {
            if c.len() > size {
                size = c.len();
                target = Some(i);
            }
        }
        let Some(t) = target else {
            let order: Vec<u32> = cells.iter().map(|c| c[0]).collect();
            return self.leaf(order, path);
        };

        let mut explored: Vec<u32> = Vec::new();
        for &c in &cells[t] {
            if !explored.is_empty() && self.same_orbit(c, &explored, path) {
                continue;
            }
            explored.push(c);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..t]);
            child.push(vec![c]);
            child.push(cells[t].iter().copied().filter(|&x| x != c).collect());
            child.extend_from_slice(&cells[t + 1..]);
            self.dense.refine(&mut child);
            path.push(c);
            let jump = self.visit(child, path);
            path.pop();
            if let Some(depth) = jump {
                if depth < path.len() {
                    return Some(depth);
                }
            }
        }
        None
    }

    fn leaf(&mut self, order: Vec<u32>, path: &[u32]) -> Option<usize> {
        let cert = self.dense.certificate(&order);
        let Some(first) = &self.first else {
            let leaf = Leaf {
                path: path.to_vec(),
                order,
                cert,
            };
            self.best = Some(Leaf {
                path: leaf.path.clone(),
                order: leaf.order.clone(),
                cert: leaf.cert.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if cert == first.cert {
            let auto = map_between(&first.order, &order);
            let jump = jump_depth(&auto, &first.path, path);
            self.autos.push(auto);
            return jump;
        }
        let best = self.best.as_ref().expect("best set with first");
        match cert.cmp(&best.cert) {
            core::cmp::Ordering::Equal => {
                let auto = map_between(&best.order, &order);
                let jump = jump_depth(&auto, &best.path, path);
                self.autos.push(auto);
                jump
            }
            core::cmp::Ordering::Less => {
                self.best = Some(Leaf {
                    path: path.to_vec(),
                    order,
                    cert,
                });
                None
            }
            core::cmp::Ordering::Greater => None,
        }
    }

    fn same_orbit(&self, c: u32, explored: &[u32], path: &[u32]) -> bool {
        let mut parent: Vec<usize> = (0..self.dense.n).collect();
        let mut any = false;
        for a in &self.autos {
            if path.iter().any(|&x| a[x as usize] != x) {
                continue;
            }
            any = true;
            for (x, &y) in a.iter().enumerate() {
                let (p, q) = (uf_find(&mut parent, x), uf_find(&mut parent, y as usize));
                if p != q {
                    parent[p.max(q)] = p.min(q);
                }
            }
        }
        if !any {
            return false;
        }
        let rc = uf_find(&mut parent, c as usize);
        explored.iter().any(|&e| uf_find(&mut parent, e as usize) == rc)
    }
}

// Permutation sending from[p] to to[p].
fn map_between(from: &[u32], to: &[u32]) -> Vec<u32> {
    let mut m = vec![0u32; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        m[a as usize] = b;
    }
    m
}

// If `auto` carries the reference path onto the current one up to the first
// point of divergence, the current subtree is the image of one already
// searched and the search may resume at the divergence depth.
fn jump_depth(auto: &[u32], reference: &[u32], current: &[u32]) -> Option<usize> {
    let d = reference
        .iter()
        .zip(current)
        .take_while(|(a, b)| a == b)
        .count();
    if d >= current.len() || d >= reference.len() {
        return None;
    }
    let carried = (0..=d).all(|i| auto[reference[i] as usize] == current[i]);
    carried.then_some(d)
}
