#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use snc_core::{canonical_key, LoopyMultigraph, Vertex};

/// Exhaustive game value over raw edge instances: no canonical keys, no
/// symmetry, no pruning. States are bitmasks of the remaining instances.
pub fn brute_value(g: &LoopyMultigraph) -> i32 {
    let edges: Vec<(Vertex, Vertex)> = g.edge_instances().map(|e| e.endpoints()).collect();
    assert!(edges.len() <= 20, "oracle is exponential");
    let mut memo = HashMap::new();
    brute(&edges, (1u32 << edges.len()) - 1, &mut memo)
}

fn brute(edges: &[(Vertex, Vertex)], mask: u32, memo: &mut HashMap<u32, i32>) -> i32 {
    if mask == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&mask) {
        return v;
    }
    let touched = |m: u32, x: Vertex| {
        (0..edges.len()).any(|j| m & (1 << j) != 0 && (edges[j].0 == x || edges[j].1 == x))
    };
    let mut best = i32::MIN;
    for i in 0..edges.len() {
        if mask & (1 << i) == 0 {
            continue;
        }
        let rest = mask & !(1 << i);
        let (a, b) = edges[i];
        let mut captured = 0;
        if !touched(rest, a) {
            captured += 1;
        }
        if b != a && !touched(rest, b) {
            captured += 1;
        }
        let v = if captured > 0 {
            captured + brute(edges, rest, memo)
        } else {
            -brute(edges, rest, memo)
        };
        best = best.max(v);
    }
    memo.insert(mask, best);
    best
}

/// Every connected loopy multigraph with 1..=max_edges edges, one per
/// isomorphism class, grown edge by edge.
pub fn connected_corpus(max_edges: usize) -> Vec<LoopyMultigraph> {
    let mut out = Vec::new();
    let mut layer = vec![
        LoopyMultigraph::from_edges([(0, 0)]),
        LoopyMultigraph::from_edges([(0, 1)]),
    ];
    for size in 1..=max_edges {
        out.extend(layer.iter().cloned());
        if size == max_edges {
            break;
        }
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for g in &layer {
            let n = g.label_bound() as Vertex;
            for u in 0..n {
                for v in u..=n {
                    let grown = g.clone().with_edge(u, v);
                    if seen.insert(canonical_key(&grown)) {
                        next.push(grown);
                    }
                }
            }
        }
        layer = next;
    }
    out
}

/// Connected classes plus unions of two of them, all up to `max_edges`.
pub fn corpus(max_edges: usize, union_edges: usize) -> Vec<LoopyMultigraph> {
    let connected = connected_corpus(max_edges);
    let small: Vec<_> = connected.iter().filter(|g| g.edge_count() < union_edges).collect();
    let mut out = connected.clone();
    for (i, a) in small.iter().enumerate() {
        for b in &small[i..] {
            if a.edge_count() + b.edge_count() <= union_edges {
                out.push(a.disjoint_union(b));
            }
        }
    }
    out
}

/// Arbitrary position: up to `max_v` vertices, 1..=max_e edges including
/// loops and parallels, then compacted so no label is skipped.
pub fn arb_graph(max_v: u32, max_e: usize) -> impl Strategy<Value = LoopyMultigraph> {
    (1..=max_v).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 1..=max_e)
            .prop_map(|edges| LoopyMultigraph::from_edges(edges).compact())
    })
}

pub fn arb_permuted(max_v: u32, max_e: usize) -> impl Strategy<Value = (LoopyMultigraph, LoopyMultigraph)> {
    arb_graph(max_v, max_e).prop_flat_map(|g| {
        let n = g.label_bound() as u32;
        Just((0..n).collect::<Vec<u32>>())
            .prop_shuffle()
            .prop_map(move |perm| {
                let h = g.relabel(|x| perm[x as usize]);
                (g.clone(), h)
            })
    })
}

/// Every vertex permutation of `g` that fixes the graph.
pub fn automorphisms(g: &LoopyMultigraph) -> Vec<Vec<Vertex>> {
    let n = g.label_bound();
    let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
    let mut out = Vec::new();
    permute(&mut perm, 0, &mut |p| {
        if g.relabel(|x| p[x as usize]) == *g {
            out.push(p.to_vec());
        }
    });
    out
}

fn permute(p: &mut Vec<Vertex>, k: usize, f: &mut impl FnMut(&[Vertex])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}
