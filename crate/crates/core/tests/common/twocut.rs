//! Brute-force classification of loops meeting a diagram in two edge points.
//!
//! Every ordered pair of edge sides sharing faces is realized on a copy of
//! the surface: the edges are subdivided, two arcs are drawn through the
//! faces, and pairs whose arcs cannot both be drawn without crossing are
//! dropped. The surviving loop is cut along and its sides are inspected.

use std::collections::BTreeMap;

use gadc_core::Diagram;

use super::map::{cut_along, HalfEdges};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Trivial,
    Essential,
    SeparatingNontrivial,
}

/// A loop as its two arcs, each an unordered pair of half-edges naming the
/// edge sides it joins.
pub type Key = [(usize, usize); 2];

fn key(a: (usize, usize), b: (usize, usize)) -> Key {
    let a = (a.0.min(a.1), a.0.max(a.1));
    let b = (b.0.min(b.1), b.0.max(b.1));
    [a.min(b), a.max(b)]
}

/// Classes of all simple two-point loops, or `None` for decorated diagrams.
pub fn classify_all(d: &Diagram) -> Option<BTreeMap<Key, Class>> {
    if !d.free_loops.is_empty() || d.region_genus.values().any(|&g| g > 0) {
        return None;
    }
    let base = HalfEdges::from_diagram(d);
    let (face, nf) = base.faces();
    let n = base.len();
    let crossings = base.vertices;
    let mut out: BTreeMap<Key, Class> = BTreeMap::new();
    for h1 in 0..n {
        for h2 in 0..n {
            let (t1, t2) = (base.twin[h1], base.twin[h2]);
            if face[h1] != face[h2] || face[t1] != face[t2] {
                continue;
            }
            let mut g = base.clone();
            let (p1, q1) = g.subdivide(h1);
            let (arc_a, arc_b) = if h2 == h1 || h2 == t1 {
                let (p2, q2) = g.subdivide(q1);
                if h2 == h1 {
                    ((p1, p2), (q1, q2))
                } else {
                    ((p1, q2), (q1, p2))
                }
            } else {
                let (p2, q2) = g.subdivide(h2);
                ((p1, p2), (q1, q2))
            };
            let (x1, y1) = g.join(arc_a.0, arc_a.1);
            let (x2, y2) = g.join(arc_b.0, arc_b.1);
            if g.faces().1 != nf + 2 {
                continue;
            }
            let mut on_curve = vec![false; g.len()];
            for h in [x1, y1, x2, y2] {
                on_curve[h] = true;
            }
            let class = classify(&g, &on_curve, crossings);
            let k = key((h1, h2), (t1, t2));
            if let Some(prev) = out.insert(k, class) {
                assert_eq!(prev, class, "loop {k:?} classified two ways");
            }
        }
    }
    Some(out)
}

fn classify(g: &HalfEdges, on_curve: &[bool], crossings: usize) -> Class {
    let (side_of_face, chi) = cut_along(g, on_curve);
    if chi.len() == 1 {
        return Class::Essential;
    }
    let (face, _) = g.faces();
    let mut inner_crossings = vec![0; chi.len()];
    let mut edges = vec![0; chi.len()];
    let mut seen = vec![false; g.vertices];
    for h in 0..g.len() {
        let s = side_of_face[face[h]];
        let v = g.vertex[h];
        if v < crossings && !seen[v] {
            seen[v] = true;
            inner_crossings[s] += 1;
        }
        if !on_curve[h] && h < g.twin[h] {
            edges[s] += 1;
        }
    }
    let disks: Vec<usize> = (0..chi.len()).filter(|&s| chi[s] == 1).collect();
    if disks
        .iter()
        .any(|&s| inner_crossings[s] == 0 && edges[s] == 1)
    {
        Class::Trivial
    } else if disks.is_empty() {
        Class::Essential
    } else {
        Class::SeparatingNontrivial
    }
}

/// Primeness according to the brute-force classifier.
pub fn is_prime(d: &Diagram) -> bool {
    if d.crossings.is_empty() {
        return false;
    }
    match classify_all(d) {
        Some(loops) => loops.values().all(|&c| c == Class::Trivial),
        None => false,
    }
}
