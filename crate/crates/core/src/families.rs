//! Generators for the graph families studied here.
//!
//! Every generator emits dense 0-based labels with a fixed layout, so the
//! same spec always produces the same labeled graph.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{LoopyMultigraph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Complete(u32),
    CompleteBipartite(u32, u32),
    Cycle(u32),
    Path(u32),
    Tree(Vec<(Vertex, Vertex)>),
    Friendship(u32),
    Pinwheel(u32),
    LoopyStar(u32),
    /// `x` outer vertices carrying `y` loops each.
    GeneralizedLoopyStar(u32, u32),
    /// `n` branches of `k` vertices counting the shared center, `m` loops at each tip.
    LoopyStarlike(u32, u32, u32),
    /// Cycle on `n` vertices with loops on the `k` consecutive vertices `0..k`.
    LoopyCycle(u32, u32),
    /// Wheel with `s` spokes (`s + 1` vertices).
    Wheel(u32),
    FerrisWheel(u32),
    BalloonPath(u32),
    Hypercube(u32),
    Prism(u32),
    Petersen,
    Custom(Vec<(Vertex, Vertex)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyError {
    UnknownFamily(String),
    Arity {
        family: &'static str,
        expected: &'static str,
        got: usize,
    },
    Domain {
        family: &'static str,
        reason: &'static str,
    },
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::UnknownFamily(name) => {
                write!(f, "unknown family '{}'; known families: ", name)?;
                for (i, t) in FAMILY_TOKENS.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(t)?;
                }
                Ok(())
            }
            FamilyError::Arity {
                family,
                expected,
                got,
            } => write!(f, "{} takes {} parameter(s), got {}", family, expected, got),
            FamilyError::Domain { family, reason } => write!(f, "{}: {}", family, reason),
        }
    }
}

/// Family tokens accepted by [`parse_family`].
pub const FAMILY_TOKENS: &[&str] = &[
    "complete",
    "complete_bipartite",
    "cycle",
    "path",
    "tree",
    "friendship",
    "pinwheel",
    "loopy_star",
    "double_loopy_star",
    "generalized_loopy_star",
    "loopy_starlike",
    "loopy_cycle",
    "wheel",
    "ferris_wheel",
    "balloon_path",
    "hypercube",
    "prism",
    "petersen",
    "custom",
];

fn domain(family: &'static str, reason: &'static str) -> FamilyError {
    FamilyError::Domain { family, reason }
}

fn exact<const N: usize>(family: &'static str, params: &[u32]) -> Result<[u32; N], FamilyError> {
    params.try_into().map_err(|_| FamilyError::Arity {
        family,
        expected: ["0", "1", "2", "3"][N],
        got: params.len(),
    })
}

fn pairs(family: &'static str, params: &[u32]) -> Result<Vec<(Vertex, Vertex)>, FamilyError> {
    if params.is_empty() || params.len() % 2 != 0 {
        return Err(FamilyError::Arity {
            family,
            expected: "a non-empty even number of",
            got: params.len(),
        });
    }
    Ok(params.chunks_exact(2).map(|c| (c[0], c[1])).collect())
}

/// Maps a family token and its integer parameters to a validated spec.
///
/// `double_loopy_star n` is shorthand for `generalized_loopy_star n 2`; the
/// edge-list families take a flattened list `u0 v0 u1 v1 ...`.
pub fn parse_family(name: &str, params: &[u32]) -> Result<FamilySpec, FamilyError> {
    let spec = match name {
        "complete" => FamilySpec::Complete(exact::<1>("complete", params)?[0]),
        "complete_bipartite" => {
            let [a, b] = exact("complete_bipartite", params)?;
            FamilySpec::CompleteBipartite(a, b)
        }
        "cycle" => FamilySpec::Cycle(exact::<1>("cycle", params)?[0]),
        "path" => FamilySpec::Path(exact::<1>("path", params)?[0]),
        "tree" => FamilySpec::Tree(pairs("tree", params)?),
        "friendship" => FamilySpec::Friendship(exact::<1>("friendship", params)?[0]),
        "pinwheel" => FamilySpec::Pinwheel(exact::<1>("pinwheel", params)?[0]),
        "loopy_star" => FamilySpec::LoopyStar(exact::<1>("loopy_star", params)?[0]),
        "double_loopy_star" => {
            FamilySpec::GeneralizedLoopyStar(exact::<1>("double_loopy_star", params)?[0], 2)
        }
        "generalized_loopy_star" => {
            let [x, y] = exact("generalized_loopy_star", params)?;
            FamilySpec::GeneralizedLoopyStar(x, y)
        }
        "loopy_starlike" => {
            let [n, m, k] = exact("loopy_starlike", params)?;
            FamilySpec::LoopyStarlike(n, m, k)
        }
        "loopy_cycle" => {
            let [n, k] = exact("loopy_cycle", params)?;
            FamilySpec::LoopyCycle(n, k)
        }
        "wheel" => FamilySpec::Wheel(exact::<1>("wheel", params)?[0]),
        "ferris_wheel" => FamilySpec::FerrisWheel(exact::<1>("ferris_wheel", params)?[0]),
        "balloon_path" => FamilySpec::BalloonPath(exact::<1>("balloon_path", params)?[0]),
        "hypercube" => FamilySpec::Hypercube(exact::<1>("hypercube", params)?[0]),
        "prism" => FamilySpec::Prism(exact::<1>("prism", params)?[0]),
        "petersen" => {
            exact::<0>("petersen", params)?;
            FamilySpec::Petersen
        }
        "custom" => FamilySpec::Custom(pairs("custom", params)?),
        other => return Err(FamilyError::UnknownFamily(other.into())),
    };
    spec.validate()?;
    Ok(spec)
}

impl FamilySpec {
    pub fn token(&self) -> &'static str {
        match self {
            FamilySpec::Complete(_) => "complete",
            FamilySpec::CompleteBipartite(..) => "complete_bipartite",
            FamilySpec::Cycle(_) => "cycle",
            FamilySpec::Path(_) => "path",
            FamilySpec::Tree(_) => "tree",
            FamilySpec::Friendship(_) => "friendship",
            FamilySpec::Pinwheel(_) => "pinwheel",
            FamilySpec::LoopyStar(_) => "loopy_star",
            FamilySpec::GeneralizedLoopyStar(..) => "generalized_loopy_star",
            FamilySpec::LoopyStarlike(..) => "loopy_starlike",
            FamilySpec::LoopyCycle(..) => "loopy_cycle",
            FamilySpec::Wheel(_) => "wheel",
            FamilySpec::FerrisWheel(_) => "ferris_wheel",
            FamilySpec::BalloonPath(_) => "balloon_path",
            FamilySpec::Hypercube(_) => "hypercube",
            FamilySpec::Prism(_) => "prism",
            FamilySpec::Petersen => "petersen",
            FamilySpec::Custom(_) => "custom",
        }
    }

    /// Integer parameters in the order [`parse_family`] accepts them.
    pub fn params(&self) -> Vec<u32> {
        use FamilySpec::*;
        match self {
            Complete(n) | Cycle(n) | Path(n) | Friendship(n) | Pinwheel(n) | LoopyStar(n)
            | Wheel(n) | FerrisWheel(n) | BalloonPath(n) | Hypercube(n) | Prism(n) => {
                alloc::vec![*n]
            }
            CompleteBipartite(a, b) | GeneralizedLoopyStar(a, b) | LoopyCycle(a, b) => {
                alloc::vec![*a, *b]
            }
            LoopyStarlike(n, m, k) => alloc::vec![*n, *m, *k],
            Petersen => Vec::new(),
            Tree(es) | Custom(es) => es.iter().flat_map(|&(u, v)| [u, v]).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        use FamilySpec::*;
        let pos = |family, x: u32| {
            if x >= 1 {
                Ok(())
            } else {
                Err(domain(family, "size parameters must be at least 1"))
            }
        };
        match *self {
            Complete(n) if n < 2 => Err(domain("complete", "K_n needs n >= 2 to have an edge")),
            CompleteBipartite(a, b) => pos("complete_bipartite", a.min(b)),
            Cycle(n) => pos("cycle", n),
            Path(n) if n < 2 => Err(domain("path", "a path needs at least 2 vertices")),
            Tree(ref es) => check_tree(es),
            Friendship(n) => pos("friendship", n),
            Pinwheel(n) => pos("pinwheel", n),
            LoopyStar(n) => pos("loopy_star", n),
            GeneralizedLoopyStar(x, y) => pos("generalized_loopy_star", x.min(y)),
            LoopyStarlike(n, m, k) => {
                pos("loopy_starlike", n.min(m))?;
                if k < 2 {
                    Err(domain("loopy_starlike", "branch length k counts the center and must be >= 2"))
                } else {
                    Ok(())
                }
            }
            LoopyCycle(n, k) => {
                pos("loopy_cycle", n.min(k))?;
                if k > n {
                    Err(domain("loopy_cycle", "needs k <= n"))
                } else {
                    Ok(())
                }
            }
            Wheel(s) if s < 3 => Err(domain("wheel", "needs at least 3 spokes")),
            FerrisWheel(n) => pos("ferris_wheel", n),
            BalloonPath(n) => pos("balloon_path", n),
            Hypercube(d) if !(1..=15).contains(&d) => {
                Err(domain("hypercube", "dimension must be in 1..=15"))
            }
            Prism(n) if n < 3 => Err(domain("prism", "needs n >= 3")),
            Custom(ref es) if es.is_empty() => Err(domain("custom", "needs at least one edge")),
            _ => Ok(()),
        }
    }
}

fn check_tree(es: &[(Vertex, Vertex)]) -> Result<(), FamilyError> {
    let g = LoopyMultigraph::from_edges(es.iter().copied());
    if es.is_empty() || !g.is_forest() || g.components().len() != 1 {
        return Err(domain("tree", "edge list must form a tree"));
    }
    Ok(())
}

fn add_cycle(g: &mut LoopyMultigraph, verts: &[Vertex]) {
    let n = verts.len();
    for i in 0..n {
        g.add_edge(verts[i], verts[(i + 1) % n]);
    }
}

/// Builds the family member described by `spec`.
pub fn generate(spec: &FamilySpec) -> Result<LoopyMultigraph, FamilyError> {
    spec.validate()?;
    use FamilySpec::*;
    let mut g = LoopyMultigraph::new();
    match *spec {
        Complete(n) => {
            for u in 0..n {
                for v in u + 1..n {
                    g.add_edge(u, v);
                }
            }
        }
        CompleteBipartite(a, b) => {
            for u in 0..a {
                for v in a..a + b {
                    g.add_edge(u, v);
                }
            }
        }
        Cycle(n) => add_cycle(&mut g, &(0..n).collect::<Vec<_>>()),
        Path(n) => {
            for i in 0..n - 1 {
                g.add_edge(i, i + 1);
            }
        }
        Tree(ref es) | Custom(ref es) => {
            return Ok(LoopyMultigraph::from_edges(es.iter().copied()));
        }
        // hub 0; triangle i on 2i+1, 2i+2
        Friendship(n) => {
            for i in 0..n {
                let (a, b) = (2 * i + 1, 2 * i + 2);
                add_cycle(&mut g, &[0, a, b]);
            }
        }
        // hub 0; square i is 0 - 3i+1 - 3i+2 - 3i+3 - 0
        Pinwheel(n) => {
            for i in 0..n {
                add_cycle(&mut g, &[0, 3 * i + 1, 3 * i + 2, 3 * i + 3]);
            }
        }
        LoopyStar(n) => return generate(&GeneralizedLoopyStar(n, 1)),
        GeneralizedLoopyStar(x, y) => {
            for i in 1..=x {
                g.add_edge(0, i);
                g.add_edges(i, i, y);
            }
        }
        // center 0; branch b holds k-1 vertices in order away from the center
        LoopyStarlike(n, m, k) => {
            let len = k - 1;
            for b in 0..n {
                let first = 1 + b * len;
                g.add_edge(0, first);
                for j in 0..len - 1 {
                    g.add_edge(first + j, first + j + 1);
                }
                let tip = first + len - 1;
                g.add_edges(tip, tip, m);
            }
        }
        LoopyCycle(n, k) => {
            add_cycle(&mut g, &(0..n).collect::<Vec<_>>());
            for i in 0..k {
                g.add_edge(i, i);
            }
        }
        // rim 0..s, hub s
        Wheel(s) => {
            add_cycle(&mut g, &(0..s).collect::<Vec<_>>());
            for i in 0..s {
                g.add_edge(i, s);
            }
        }
        FerrisWheel(n) => return generate(&LoopyCycle(n, n)),
        BalloonPath(n) => {
            for i in 0..n {
                if i + 1 < n {
                    g.add_edge(i, i + 1);
                }
                g.add_edge(i, i);
            }
        }
        Hypercube(d) => {
            for u in 0..1u32 << d {
                for bit in 0..d {
                    let v = u ^ (1 << bit);
                    if u < v {
                        g.add_edge(u, v);
                    }
                }
            }
        }
        // outer n-gon 0..n, inner n-gon n..2n, rungs i - n+i
        Prism(n) => {
            add_cycle(&mut g, &(0..n).collect::<Vec<_>>());
            add_cycle(&mut g, &(n..2 * n).collect::<Vec<_>>());
            for i in 0..n {
                g.add_edge(i, n + i);
            }
        }
        // outer pentagon 0..5, inner pentagram 5..10, spokes i - 5+i
        Petersen => {
            for i in 0..5 {
                g.add_edge(i, (i + 1) % 5);
                g.add_edge(5 + i, 5 + (i + 2) % 5);
                g.add_edge(i, 5 + i);
            }
        }
    }
    Ok(g)
}

/// Two copies of `base` joined by one edge from `a` in the first copy to
/// `b` in the second. The second copy is `base` shifted past its labels.
pub fn doubled(base: &LoopyMultigraph, a: Vertex, b: Vertex) -> LoopyMultigraph {
    let shift = base.label_bound() as Vertex;
    let mut h = base.disjoint_union(base);
    h.add_edge(a, b + shift);
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{are_isomorphic, canonical_key};

    fn gen(name: &str, params: &[u32]) -> LoopyMultigraph {
        generate(&parse_family(name, params).unwrap()).unwrap()
    }

    fn counts(g: &LoopyMultigraph) -> (usize, usize) {
        (g.vertex_count(), g.edge_count())
    }

    #[test]
    fn sizes() {
        assert_eq!(counts(&gen("friendship", &[3])), (7, 9));
        assert_eq!(counts(&gen("wheel", &[5])), (6, 10));
        assert_eq!(counts(&gen("balloon_path", &[5])), (5, 9));
        assert_eq!(counts(&gen("hypercube", &[3])), (8, 12));
        assert_eq!(counts(&gen("pinwheel", &[2])), (7, 8));
        assert_eq!(counts(&gen("prism", &[5])), (10, 15));
        assert_eq!(counts(&gen("complete_bipartite", &[2, 3])), (5, 6));
        assert_eq!(counts(&gen("loopy_starlike", &[5, 1, 5])), (21, 25));
    }

    #[test]
    fn generalized_loopy_star_three_two() {
        let g = gen("generalized_loopy_star", &[3, 2]);
        assert_eq!(g.vertex_count(), 4);
        let loops: u32 = g.vertices().map(|x| g.loops(x)).sum();
        assert_eq!(loops, 6);
        assert_eq!(g.edge_count() - loops as usize, 3);
    }

    #[test]
    fn loopy_cycle_loops_are_consecutive() {
        let g = gen("loopy_cycle", &[5, 3]);
        let looped: Vec<_> = g.vertices().filter(|&x| g.loops(x) == 1).collect();
        assert_eq!(looped, [0, 1, 2]);
        assert_eq!(g.edge_count(), 8);
    }

    #[test]
    fn starlike_branch_geometry() {
        // L(5,1,5): four path vertices per branch beyond the center
        let g = gen("loopy_starlike", &[5, 1, 5]);
        assert_eq!(g.incident_count(0), 5);
        assert_eq!(g.vertex_count(), 1 + 5 * 4);
        let g = gen("loopy_starlike", &[5, 3, 6]);
        assert_eq!(g.vertex_count(), 1 + 5 * 5);
        assert_eq!(g.loops(5), 3);
    }

    #[test]
    fn family_identities() {
        assert_eq!(
            canonical_key(&gen("complete_bipartite", &[2, 2])),
            canonical_key(&gen("cycle", &[4]))
        );
        for n in 1..8 {
            assert_eq!(
                canonical_key(&gen("ferris_wheel", &[n])),
                canonical_key(&gen("loopy_cycle", &[n, n]))
            );
            assert!(are_isomorphic(
                &gen("generalized_loopy_star", &[n, 1]),
                &gen("loopy_star", &[n])
            ));
            assert_eq!(
                canonical_key(&gen("double_loopy_star", &[n])),
                canonical_key(&gen("generalized_loopy_star", &[n, 2]))
            );
        }
        for s in 3..10 {
            assert_eq!(counts(&gen("wheel", &[s])), (s as usize + 1, 2 * s as usize));
        }
        assert_eq!(canonical_key(&gen("wheel", &[3])), canonical_key(&gen("complete", &[4])));
        assert_eq!(canonical_key(&gen("pinwheel", &[1])), canonical_key(&gen("cycle", &[4])));
        assert_eq!(canonical_key(&gen("hypercube", &[2])), canonical_key(&gen("cycle", &[4])));
    }

    #[test]
    fn petersen_is_cubic() {
        let g = gen("petersen", &[]);
        assert_eq!(counts(&g), (10, 15));
        assert!(g.vertices().all(|x| g.incident_count(x) == 3));
        assert!(g.edge_classes().iter().all(|c| c.multiplicity == 1 && !c.edge.is_loop()));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_family("friendship", &[4]), Ok(FamilySpec::Friendship(4)));
        assert_eq!(
            parse_family("loopy_starlike", &[5, 1, 5]),
            Ok(FamilySpec::LoopyStarlike(5, 1, 5))
        );
        assert!(matches!(parse_family("prism", &[2]), Err(FamilyError::Domain { .. })));
        assert!(matches!(parse_family("wheel", &[2]), Err(FamilyError::Domain { .. })));
        assert!(matches!(parse_family("loopy_cycle", &[3, 4]), Err(FamilyError::Domain { .. })));
        assert!(matches!(parse_family("complete", &[1]), Err(FamilyError::Domain { .. })));
        assert!(matches!(parse_family("cycle", &[3, 4]), Err(FamilyError::Arity { .. })));
        assert!(matches!(parse_family("tree", &[0, 1, 1, 2, 2, 0]), Err(FamilyError::Domain { .. })));
        assert!(matches!(parse_family("moebius", &[3]), Err(FamilyError::UnknownFamily(_))));
    }

    #[test]
    fn params_round_trip() {
        for spec in [
            FamilySpec::LoopyStarlike(3, 2, 5),
            FamilySpec::Petersen,
            FamilySpec::Custom(alloc::vec![(0, 1), (1, 1)]),
            FamilySpec::Hypercube(4),
        ] {
            assert_eq!(parse_family(spec.token(), &spec.params()), Ok(spec));
        }
    }

    #[test]
    fn doubled_graph_shape() {
        let c5 = gen("cycle", &[5]);
        let h = doubled(&c5, 0, 2);
        assert_eq!(counts(&h), (10, 11));
        assert_eq!(h.multiplicity(0, 7), 1);
    }
}
