//! Face-width (representativity) of the embedded diagram graph.
//!
//! Works on the radial graph: one vertex per crossing and per region, one
//! edge per corner. Its faces are in bijection with the diagram edges, so a
//! closed curve meeting the diagram k times transversally is homotopic to a
//! radial cycle of length 2k and vice versa.

use std::collections::VecDeque;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::diagram::{CheckedDiagram, Dart};
use crate::unionfind::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FaceWidth {
    Finite(usize),
    Infinite,
}

impl Serialize for FaceWidth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            FaceWidth::Finite(k) => s.serialize_u64(*k as u64),
            FaceWidth::Infinite => s.serialize_str("infinite"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FaceWidthError {
    #[error("diagram is not cellularly embedded (region {0} is not a disk)")]
    NonCellular(usize),
}

/// Radial graph of a cellular diagram. Vertices `0..C` are crossings and
/// `C..C+F` regions; edge `c` is the corner `c`.
#[derive(Clone, Debug)]
pub struct RadialGraph {
    pub crossings: usize,
    pub regions: usize,
    /// `(crossing vertex, region vertex)` per corner.
    pub ends: Vec<(usize, usize)>,
    /// Diagram edge (face of the radial graph) on each side of a corner.
    faces: Vec<(Dart, Dart)>,
    incident: Vec<Vec<Dart>>,
}

impl RadialGraph {
    pub fn new(d: &CheckedDiagram) -> RadialGraph {
        let crossings = d.crossing_count();
        let regions = d.base_region_count();
        let n = d.dart_count();
        let ends: Vec<(usize, usize)> = (0..n)
            .map(|c| (d.crossing_of(c), crossings + d.corner_region(c)))
            .collect();
        let faces = (0..n)
            .map(|c| (d.edge_of(c), d.edge_of(d.rot(c))))
            .collect();
        let mut incident = vec![Vec::new(); crossings + regions];
        for (c, &(x, r)) in ends.iter().enumerate() {
            incident[x].push(c);
            incident[r].push(c);
        }
        RadialGraph {
            crossings,
            regions,
            ends,
            faces,
            incident,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.crossings + self.regions
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn other_end(&self, corner: Dart, v: usize) -> usize {
        let (x, r) = self.ends[corner];
        if v == x {
            r
        } else {
            x
        }
    }

    pub fn incident(&self, v: usize) -> &[Dart] {
        &self.incident[v]
    }

    /// Whether the simple cycle with the given corners bounds a disk.
    pub fn is_contractible(&self, cycle: &[Dart]) -> bool {
        let n = self.edge_count();
        let mut on_cycle = vec![false; n];
        let mut vertex_on = vec![false; self.vertex_count()];
        for &c in cycle {
            on_cycle[c] = true;
            let (x, r) = self.ends[c];
            vertex_on[x] = true;
            vertex_on[r] = true;
        }
        // faces are indexed by the smaller dart of their diagram edge
        let mut uf = UnionFind::new(n);
        for c in 0..n {
            if !on_cycle[c] {
                uf.union(self.faces[c].0, self.faces[c].1);
            }
        }
        let mut face_ids: Vec<Dart> = self.faces.iter().map(|f| f.0).collect();
        face_ids.sort_unstable();
        face_ids.dedup();
        let mut sides: Vec<usize> = face_ids.iter().map(|&f| uf.find(f)).collect();
        sides.sort_unstable();
        sides.dedup();
        if sides.len() < 2 {
            return false;
        }
        let mut chi = vec![0i64; n];
        for &f in &face_ids {
            chi[uf.find(f)] += 1;
        }
        for c in 0..n {
            if !on_cycle[c] {
                chi[uf.find(self.faces[c].0)] -= 1;
            }
        }
        for v in 0..self.vertex_count() {
            if !vertex_on[v] {
                chi[uf.find(self.faces[self.incident[v][0]].0)] += 1;
            }
        }
        sides.iter().any(|&s| chi[s] == 1)
    }
}

/// Breadth-first tree from `root`: parent corner and depth per vertex.
fn bfs(g: &RadialGraph, root: usize) -> (Vec<Option<Dart>>, Vec<usize>) {
    let nv = g.vertex_count();
    let mut parent = vec![None; nv];
    let mut depth = vec![usize::MAX; nv];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &c in g.incident(u) {
            let w = g.other_end(c, u);
            if depth[w] == usize::MAX {
                depth[w] = depth[u] + 1;
                parent[w] = Some(c);
                queue.push_back(w);
            }
        }
    }
    (parent, depth)
}

/// The simple cycle formed by a non-tree corner and the tree paths to the
/// lowest common ancestor of its ends.
fn fundamental_cycle(
    g: &RadialGraph,
    parent: &[Option<Dart>],
    depth: &[usize],
    closing: Dart,
) -> Vec<Dart> {
    let (mut a, mut b) = g.ends[closing];
    let mut cycle = vec![closing];
    while a != b {
        if depth[a] >= depth[b] {
            let c = parent[a].unwrap();
            cycle.push(c);
            a = g.other_end(c, a);
        } else {
            let c = parent[b].unwrap();
            cycle.push(c);
            b = g.other_end(c, b);
        }
    }
    cycle
}

/// Corners of a shortest noncontractible radial cycle, if the surface has one.
pub fn shortest_noncontractible_cycle(
    d: &CheckedDiagram,
) -> Result<Option<Vec<Dart>>, FaceWidthError> {
    check_cellular(d)?;
    if d.crossing_count() == 0 || d.cellular_genus() == 0 {
        return Ok(None);
    }
    let g = RadialGraph::new(d);
    let mut best: Option<Vec<Dart>> = None;
    for root in 0..g.vertex_count() {
        let (parent, depth) = bfs(&g, root);
        let mut tree = vec![false; g.edge_count()];
        for c in parent.iter().flatten() {
            tree[*c] = true;
        }
        for closing in 0..g.edge_count() {
            if tree[closing] {
                continue;
            }
            let (x, r) = g.ends[closing];
            let bound = best.as_ref().map_or(usize::MAX, Vec::len);
            if depth[x] + depth[r] + 1 >= bound {
                continue;
            }
            let mut cycle = fundamental_cycle(&g, &parent, &depth, closing);
            if cycle.len() < bound && !g.is_contractible(&cycle) {
                cycle.sort_unstable();
                best = Some(cycle);
            }
        }
    }
    Ok(best)
}

fn check_cellular(d: &CheckedDiagram) -> Result<(), FaceWidthError> {
    if let Some(r) = d.regions().iter().find(|r| r.genus > 0) {
        return Err(FaceWidthError::NonCellular(r.index));
    }
    if d.cellular_genus() > 0 {
        if let Some(r) = d.regions().iter().find(|r| !r.is_disk()) {
            return Err(FaceWidthError::NonCellular(r.index));
        }
    }
    Ok(())
}

/// Half the length of a shortest noncontractible radial cycle; `Infinite` on
/// the sphere.
pub fn face_width(d: &CheckedDiagram) -> Result<FaceWidth, FaceWidthError> {
    Ok(match shortest_noncontractible_cycle(d)? {
        Some(cycle) => FaceWidth::Finite(cycle.len() / 2),
        None => FaceWidth::Infinite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{from_pd, Crossing, Diagram};
    use std::collections::BTreeMap;

    fn torus_one_crossing() -> CheckedDiagram {
        CheckedDiagram::new(Diagram {
            crossings: vec![Crossing {
                darts: [0, 1, 2, 3],
                under: 0,
            }],
            pairing: vec![(0, 2), (1, 3)],
            ..Diagram::default()
        })
        .unwrap()
    }

    fn weave() -> CheckedDiagram {
        // darts 4k + (E, N, W, S) at cell k = i + 2j
        let cell = |i: usize, j: usize| (i % 2) + 2 * (j % 2);
        let mut crossings = Vec::new();
        let mut pairing = Vec::new();
        for j in 0..2 {
            for i in 0..2 {
                let k = cell(i, j);
                crossings.push(Crossing {
                    darts: [4 * k, 4 * k + 1, 4 * k + 2, 4 * k + 3],
                    under: if (i + j) % 2 == 0 { 1 } else { 0 },
                });
                pairing.push((4 * k, 4 * cell(i + 1, j) + 2));
                pairing.push((4 * k + 1, 4 * cell(i, j + 1) + 3));
            }
        }
        CheckedDiagram::new(Diagram {
            crossings,
            pairing,
            ..Diagram::default()
        })
        .unwrap()
    }

    #[test]
    fn radial_graph_counts() {
        let g = RadialGraph::new(&weave());
        assert_eq!(g.edge_count(), 16);
        assert_eq!(g.vertex_count(), 8);
    }

    #[test]
    fn sphere_is_infinite() {
        let d = CheckedDiagram::new(
            from_pd(&[([4, 2, 5, 1], 3), ([3, 6, 4, 1], 0), ([5, 2, 6, 3], 0)]).unwrap(),
        )
        .unwrap();
        assert_eq!(face_width(&d), Ok(FaceWidth::Infinite));
    }

    #[test]
    fn torus_examples() {
        assert_eq!(face_width(&torus_one_crossing()), Ok(FaceWidth::Finite(1)));
        assert_eq!(face_width(&weave()), Ok(FaceWidth::Finite(2)));
    }

    #[test]
    fn decorated_regions_are_rejected() {
        let mut raw = torus_one_crossing().diagram().clone();
        raw.region_genus = BTreeMap::from([(0, 1)]);
        let d = CheckedDiagram::new(raw).unwrap();
        assert_eq!(face_width(&d), Err(FaceWidthError::NonCellular(0)));
    }

    #[test]
    fn serializes_sentinel() {
        assert_eq!(
            serde_json::to_string(&FaceWidth::Infinite).unwrap(),
            "\"infinite\""
        );
        assert_eq!(serde_json::to_string(&FaceWidth::Finite(2)).unwrap(), "2");
    }
}
