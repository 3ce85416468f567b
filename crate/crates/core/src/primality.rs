//! Primeness of a diagram.
//!
//! A loop meeting the diagram in two non-crossing points consists of two
//! arcs, one in each of the regions it passes through. With all regions
//! disks, such an arc is determined up to isotopy by the two edge-sides it
//! joins, so loops are enumerated as pairs of edge-sides. Each loop is then
//! classified by cutting the surface along it and comparing the Euler
//! characteristics of the pieces.
//!
//! Edge-side `s` is the side of edge `{s, partner(s)}` lying in corner `s`;
//! its position in the region walk equals the position of corner `s`.

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{CheckedDiagram, Dart};
use crate::unionfind::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CutClass {
    /// Bounds a disk whose only diagram content is a crossing-free arc.
    TrivialArc,
    /// Does not bound a disk in the surface.
    EssentialInF,
    /// Bounds a disk, but that disk contains crossings.
    SeparatingNontrivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutPoint {
    pub edge: Dart,
    /// The edge-sides met by the arcs in `via_regions.0` and `via_regions.1`.
    pub sides: [Dart; 2],
    /// Positions of those edge-sides in their region walks.
    pub positions: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoCut {
    pub passages: [CutPoint; 2],
    pub via_regions: (usize, usize),
    pub class: CutClass,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrimalityError {
    #[error("region {0} is not an open disk")]
    NonCellular(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeWitness {
    NoCrossings,
    NonDiskRegion { region: usize },
    Cut(TwoCut),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Primality {
    pub ok: bool,
    pub witness: Option<PrimeWitness>,
}

struct WalkIndex {
    position: Vec<usize>,
}

impl WalkIndex {
    fn new(d: &CheckedDiagram) -> Self {
        let mut position = vec![0; d.dart_count()];
        for r in d.regions() {
            for (i, &c) in r.corners.iter().enumerate() {
                position[c] = i;
            }
        }
        WalkIndex { position }
    }
}

/// One loop per isotopy class of simple loops meeting the diagram in two
/// edge points, in edge order.
pub fn enumerate_two_cuts(d: &CheckedDiagram) -> Result<Vec<TwoCut>, PrimalityError> {
    if let Some(r) = d.regions().iter().find(|r| !r.is_disk()) {
        return Err(PrimalityError::NonCellular(r.index));
    }
    let idx = WalkIndex::new(d);
    let edges = d.edges();
    let mut cuts = Vec::new();
    for (i, &a) in edges.iter().enumerate() {
        let pa = d.partner(a);
        let point = CutPoint {
            edge: a,
            sides: [a, pa],
            positions: [idx.position[a], idx.position[pa]],
        };
        cuts.push(TwoCut {
            passages: [point.clone(), point],
            via_regions: (d.corner_region(a), d.corner_region(pa)),
            class: CutClass::TrivialArc,
        });
        for &b in &edges[i + 1..] {
            for s2 in [b, d.partner(b)] {
                if let Some(cut) = cross_cut(d, &idx, a, s2) {
                    cuts.push(cut);
                }
            }
        }
    }
    Ok(cuts)
}

/// The loop whose arcs join edge-sides `s1, s2` and `partner(s1), partner(s2)`,
/// if those arcs exist and are disjoint.
fn cross_cut(d: &CheckedDiagram, idx: &WalkIndex, s1: Dart, s2: Dart) -> Option<TwoCut> {
    let (t1, t2) = (d.partner(s1), d.partner(s2));
    let r = d.corner_region(s1);
    let r2 = d.corner_region(t1);
    if d.corner_region(s2) != r || d.corner_region(t2) != r2 {
        return None;
    }
    if r == r2 {
        let p = |s: Dart| idx.position[s];
        if interleaved((p(s1), p(s2)), (p(t1), p(t2))) {
            return None;
        }
    }
    let class = classify_cross_cut(d, idx, s1, s2);
    Some(TwoCut {
        passages: [
            CutPoint {
                edge: d.edge_of(s1),
                sides: [s1, t1],
                positions: [idx.position[s1], idx.position[t1]],
            },
            CutPoint {
                edge: d.edge_of(s2),
                sides: [s2, t2],
                positions: [idx.position[s2], idx.position[t2]],
            },
        ],
        via_regions: (r, r2),
        class,
    })
}

/// Whether chords `a` and `b` of a circle (positions all distinct) cross.
fn interleaved(a: (usize, usize), b: (usize, usize)) -> bool {
    let (lo, hi) = (a.0.min(a.1), a.0.max(a.1));
    let inside = |x: usize| lo < x && x < hi;
    inside(b.0) != inside(b.1)
}

#[derive(Default, Clone, Copy, Debug)]
struct SideContent {
    crossings: i64,
    edges: i64,
    pieces: i64,
}

impl SideContent {
    fn chi(&self) -> i64 {
        self.crossings - self.edges + self.pieces
    }
}

fn classify_cross_cut(d: &CheckedDiagram, idx: &WalkIndex, s1: Dart, s2: Dart) -> CutClass {
    let n = d.dart_count();
    let (t1, t2) = (d.partner(s1), d.partner(s2));
    let mut uf = UnionFind::new(n);
    for x in 0..d.crossing_count() {
        let c = d.crossing(x).darts;
        for p in 1..4 {
            uf.union(c[0], c[p]);
        }
    }

    let chords = [(s1, s2), (t1, t2)];
    let mut pieces: Vec<Dart> = Vec::new();
    for region in d.regions() {
        let here: Vec<(usize, usize)> = chords
            .iter()
            .filter(|(u, _)| d.corner_region(*u) == region.index)
            .map(|&(u, v)| (idx.position[u], idx.position[v]))
            .collect();
        for piece in split_walk(region.corners.len(), &here) {
            let first = region.corners[piece[0]];
            for &p in &piece[1..] {
                uf.union(first, region.corners[p]);
            }
            pieces.push(first);
        }
    }

    let classes: Vec<usize> = {
        let mut roots: Vec<usize> = (0..n).map(|c| uf.find(c)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots
    };
    if classes.len() == 1 {
        return CutClass::EssentialInF;
    }
    debug_assert_eq!(classes.len(), 2);
    let side_of = |uf: &mut UnionFind, c: Dart| usize::from(uf.find(c) != classes[0]);

    let mut content = [SideContent::default(); 2];
    for x in 0..d.crossing_count() {
        content[side_of(&mut uf, d.dart_at(x, 0))].crossings += 1;
    }
    let cut_edges = [d.edge_of(s1), d.edge_of(s2)];
    for e in d.edges() {
        if cut_edges.contains(&e) {
            content[side_of(&mut uf, e)].edges += 1;
            content[side_of(&mut uf, d.partner(e))].edges += 1;
        } else {
            content[side_of(&mut uf, e)].edges += 1;
        }
    }
    for &p in &pieces {
        content[side_of(&mut uf, p)].pieces += 1;
    }

    let disk = |s: &SideContent| s.chi() == 1;
    if content
        .iter()
        .any(|s| disk(s) && s.crossings == 0 && s.edges == 1)
    {
        CutClass::TrivialArc
    } else if content.iter().any(disk) {
        CutClass::SeparatingNontrivial
    } else {
        CutClass::EssentialInF
    }
}

/// Split a walk of `len` corners by non-crossing chords between edge-side
/// slots. Slot `i` sits just before corner `i`. Returns corner positions of
/// each piece.
fn split_walk(len: usize, chords: &[(usize, usize)]) -> Vec<Vec<usize>> {
    if chords.is_empty() {
        return vec![(0..len).collect()];
    }
    let mut ends: Vec<(usize, usize)> = Vec::new(); // (slot, chord)
    for (i, &(u, v)) in chords.iter().enumerate() {
        ends.push((u, i));
        ends.push((v, i));
    }
    ends.sort_unstable();
    let k = ends.len();
    let mate = |t: usize| -> usize {
        let (slot, chord) = ends[t];
        let (u, v) = chords[chord];
        let other = if slot == u { v } else { u };
        ends.iter()
            .position(|&(s, c)| s == other && c == chord)
            .unwrap()
    };
    // arc t runs from endpoint t to endpoint t+1
    let arc = |t: usize| -> Vec<usize> {
        let from = ends[t].0;
        let to = ends[(t + 1) % k].0;
        let mut out = Vec::new();
        let mut p = from;
        loop {
            out.push(p);
            p = (p + 1) % len;
            if p == to {
                break;
            }
        }
        out
    };
    let mut done = vec![false; k];
    let mut pieces = Vec::new();
    for start in 0..k {
        if done[start] {
            continue;
        }
        let mut piece = Vec::new();
        let mut t = start;
        while !done[t] {
            done[t] = true;
            piece.extend(arc(t));
            t = mate((t + 1) % k);
        }
        piece.sort_unstable();
        pieces.push(piece);
    }
    pieces
}

pub fn is_prime(d: &CheckedDiagram) -> Primality {
    let fail = |w| Primality {
        ok: false,
        witness: Some(w),
    };
    if d.crossing_count() == 0 {
        return fail(PrimeWitness::NoCrossings);
    }
    let cuts = match enumerate_two_cuts(d) {
        Ok(c) => c,
        Err(PrimalityError::NonCellular(region)) => {
            return fail(PrimeWitness::NonDiskRegion { region })
        }
    };
    match cuts.into_iter().find(|c| c.class != CutClass::TrivialArc) {
        Some(cut) => fail(PrimeWitness::Cut(cut)),
        None => Primality {
            ok: true,
            witness: None,
        },
    }
}
