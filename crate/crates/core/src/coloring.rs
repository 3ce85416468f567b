//! Checkerboard colorings and the two checkerboard spanning surfaces.
//!
//! Conventions pinned here:
//!
//! * Region 0 is black.
//! * A crossing has type `Black` when the black corners are the ones swept by
//!   rotating the over-strand counterclockwise onto the under-strand, i.e. the
//!   corner following an over-passage dart is black.
//! * A crossing is positive when the outgoing under-strand dart follows the
//!   outgoing over-strand dart counterclockwise.
//!
//! With these, the surface of color `X` induces sign `-1` at crossings of type
//! `X` and `+1` elsewhere, and its band at a crossing of type `X` adds a
//! positive half twist to the surface framing relative to the blackboard one.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{is_alternating, CheckedDiagram, Dart};
use crate::unionfind::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// An edge of the region adjacency graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Adjacency {
    /// A diagram edge, named by its smaller dart.
    Edge(Dart),
    FreeLoop(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddCycle {
    pub regions: Vec<usize>,
    pub edges: Vec<Adjacency>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("region adjacency graph is not bipartite (odd cycle through regions {:?})", .0.regions)]
    NotBipartite(OddCycle),
    #[error("crossing types requested for a non-alternating diagram")]
    Inconsistent,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("both checkerboard surfaces are orientable")]
    BothOrientable,
    #[error("diagram has {0} components; a knot was expected")]
    MultiComponent(usize),
    #[error("surface is not orientable")]
    NotOrientable,
    #[error("orientation assignment does not induce a coherent orientation of the diagram")]
    InconsistentOrientation,
    #[error("surface is disconnected")]
    Disconnected,
    #[error("boundary slope is only defined for knots ({0} components)")]
    LinkInput(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub color_of: Vec<Color>,
}

impl Coloring {
    pub fn swapped(&self) -> Coloring {
        Coloring {
            color_of: self.color_of.iter().map(|c| c.other()).collect(),
        }
    }

    pub fn class(&self, color: Color) -> Vec<usize> {
        (0..self.color_of.len())
            .filter(|&r| self.color_of[r] == color)
            .collect()
    }

    pub fn corner_color(&self, d: &CheckedDiagram, corner: Dart) -> Color {
        self.color_of[d.corner_region(corner)]
    }
}

struct OddWitness {
    nodes: Vec<usize>,
    edges: Vec<usize>,
}

/// Breadth-first 2-coloring of the nodes flagged `active`. Parity `true`
/// means "differs from the component root".
fn two_color(
    n: usize,
    edges: &[(usize, usize)],
    active: &[bool],
) -> Result<Vec<Option<bool>>, OddWitness> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, id));
        if u != v {
            adj[v].push((u, id));
        }
    }
    let mut parity: Vec<Option<bool>> = vec![None; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if !active[root] || parity[root].is_some() {
            continue;
        }
        parity[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(v, id) in &adj[u] {
                match parity[v] {
                    None => {
                        parity[v] = Some(!parity[u].unwrap());
                        parent[v] = Some((u, id));
                        depth[v] = depth[u] + 1;
                        queue.push_back(v);
                    }
                    Some(p) if p == parity[u].unwrap() => {
                        return Err(odd_cycle(u, v, id, &parent, &depth));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(parity)
}

fn odd_cycle(
    u: usize,
    v: usize,
    closing: usize,
    parent: &[Option<(usize, usize)>],
    depth: &[usize],
) -> OddWitness {
    if u == v {
        return OddWitness {
            nodes: vec![u],
            edges: vec![closing],
        };
    }
    let (mut a, mut b) = (u, v);
    let (mut up_a, mut up_b) = (vec![a], vec![b]);
    let (mut ea, mut eb) = (Vec::new(), Vec::new());
    while a != b {
        if depth[a] >= depth[b] {
            let (p, e) = parent[a].unwrap();
            ea.push(e);
            a = p;
            up_a.push(a);
        } else {
            let (p, e) = parent[b].unwrap();
            eb.push(e);
            b = p;
            up_b.push(b);
        }
    }
    up_b.pop();
    let mut nodes = up_b;
    nodes.reverse();
    nodes.extend(up_a.into_iter().rev());
    let mut edges = eb;
    edges.reverse();
    edges.extend(ea.into_iter().rev());
    edges.push(closing);
    // nodes: v .. lca .. u, edges: v→lca, lca→u, then u→v
    OddWitness { nodes, edges }
}

fn adjacency_edges(d: &CheckedDiagram) -> (Vec<(usize, usize)>, Vec<Adjacency>) {
    let mut pairs = Vec::new();
    let mut names = Vec::new();
    for a in d.edges() {
        pairs.push((d.corner_region(a), d.corner_region(d.partner(a))));
        names.push(Adjacency::Edge(a));
    }
    let base = d.base_region_count();
    for (i, fl) in d.diagram().free_loops.iter().enumerate() {
        pairs.push((fl.region, base + i));
        names.push(Adjacency::FreeLoop(i));
    }
    (pairs, names)
}

/// 2-color the region adjacency graph with region 0 black.
pub fn checkerboard_coloring(d: &CheckedDiagram) -> Result<Coloring, ColoringError> {
    let n = d.regions().len();
    let (pairs, names) = adjacency_edges(d);
    match two_color(n, &pairs, &vec![true; n]) {
        Ok(parity) => Ok(Coloring {
            color_of: parity
                .into_iter()
                .map(|p| {
                    if p.unwrap() {
                        Color::White
                    } else {
                        Color::Black
                    }
                })
                .collect(),
        }),
        Err(w) => Err(ColoringError::NotBipartite(OddCycle {
            regions: w.nodes,
            edges: w.edges.into_iter().map(|e| names[e]).collect(),
        })),
    }
}

/// Color of the corners swept by rotating the over-strand counterclockwise
/// onto the under-strand, per crossing.
pub fn crossing_types(d: &CheckedDiagram, c: &Coloring) -> Result<Vec<Color>, ColoringError> {
    if !is_alternating(d).ok {
        return Err(ColoringError::Inconsistent);
    }
    Ok((0..d.crossing_count())
        .map(|x| crossing_type(d, c, x))
        .collect())
}

fn crossing_type(d: &CheckedDiagram, c: &Coloring, x: usize) -> Color {
    let over = d.crossing(x).under as usize + 1;
    c.corner_color(d, d.dart_at(x, over))
}

/// Position `k` in 0..2 such that corners `k` and `k + 2` of crossing `x`
/// have the given color.
fn band_position(d: &CheckedDiagram, c: &Coloring, x: usize, color: Color) -> usize {
    if c.corner_color(d, d.dart_at(x, 0)) == color {
        0
    } else {
        1
    }
}

/// Orientation signs (`+1` agrees with the surface orientation) per region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionOrientation(pub Vec<(usize, i8)>);

impl RegionOrientation {
    pub fn reversed(&self) -> RegionOrientation {
        RegionOrientation(self.0.iter().map(|&(r, s)| (r, -s)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanningSurface {
    pub color: Color,
    pub regions: Vec<usize>,
    /// One half-twisted band per crossing.
    pub bands: Vec<usize>,
    pub chi: i64,
    pub orientable: bool,
    pub connected: bool,
    pub boundary_components: usize,
    /// Crossings whose bands form an orientation-reversing cycle.
    pub odd_cycle: Option<Vec<usize>>,
    /// Built from regions carrying hidden handles.
    pub decorated: bool,
    #[serde(skip)]
    orientation: Option<RegionOrientation>,
}

impl SpanningSurface {
    /// A coherent orientation of the regions, when one exists.
    pub fn orientation(&self) -> Option<&RegionOrientation> {
        self.orientation.as_ref()
    }
}

pub fn build_spanning_surface(d: &CheckedDiagram, c: &Coloring, color: Color) -> SpanningSurface {
    let regions = c.class(color);
    let bands: Vec<usize> = (0..d.crossing_count()).collect();
    let nr = d.regions().len();

    let chi = regions
        .iter()
        .map(|&r| d.regions()[r].euler_characteristic())
        .sum::<i64>()
        - bands.len() as i64;
    let decorated = regions.iter().any(|&r| d.regions()[r].genus > 0);

    let band_ends: Vec<(usize, usize)> = bands
        .iter()
        .map(|&x| {
            let k = band_position(d, c, x, color);
            (
                d.corner_region(d.dart_at(x, k)),
                d.corner_region(d.dart_at(x, k + 2)),
            )
        })
        .collect();

    let mut active = vec![false; nr];
    for &r in &regions {
        active[r] = true;
    }
    let (orientable, odd_cycle, orientation) = match two_color(nr, &band_ends, &active) {
        Ok(parity) => {
            let o = regions
                .iter()
                .map(|&r| (r, if parity[r].unwrap() { -1 } else { 1 }))
                .collect();
            (true, None, Some(RegionOrientation(o)))
        }
        Err(w) => (
            false,
            Some(w.edges.iter().map(|&e| bands[e]).collect()),
            None,
        ),
    };

    let mut uf = UnionFind::new(nr);
    for &(a, b) in &band_ends {
        uf.union(a, b);
    }
    let connected = match regions.first() {
        Some(&r0) => regions.iter().all(|&r| uf.same(r0, r)),
        None => false,
    };

    // Boundary arcs are the diagram edges; a twisted band joins the edges at
    // positions k, k+2 and k+1, k+3.
    let n = d.dart_count();
    let mut arcs = UnionFind::new(n);
    for a in d.edges() {
        arcs.union(a, d.partner(a));
    }
    for &x in &bands {
        let k = band_position(d, c, x, color);
        arcs.union(d.dart_at(x, k), d.dart_at(x, k + 2));
        arcs.union(d.dart_at(x, k + 1), d.dart_at(x, k + 3));
    }
    let mut roots: Vec<usize> = (0..n).map(|a| arcs.find(a)).collect();
    roots.sort_unstable();
    roots.dedup();
    let boundary_components = roots.len() + d.diagram().free_loops.len();

    SpanningSurface {
        color,
        regions,
        bands,
        chi,
        orientable,
        connected,
        boundary_components,
        odd_cycle,
        decorated,
        orientation,
    }
}

/// The non-orientable checkerboard surface of a knot diagram, black first.
pub fn select_n(d: &CheckedDiagram, c: &Coloring) -> Result<SpanningSurface, SurfaceError> {
    if d.component_count() != 1 {
        return Err(SurfaceError::MultiComponent(d.component_count()));
    }
    [Color::Black, Color::White]
        .into_iter()
        .map(|color| build_spanning_surface(d, c, color))
        .find(|s| !s.orientable)
        .ok_or(SurfaceError::BothOrientable)
}

/// Direction of every dart (`true` = leaving its crossing) induced by
/// orienting the regions of `s` and taking the boundary orientation.
fn induced_directions(
    d: &CheckedDiagram,
    o: &RegionOrientation,
) -> Result<Vec<bool>, SurfaceError> {
    let mut out: Vec<Option<bool>> = vec![None; d.dart_count()];
    let mut set = |dart: Dart, v: bool| -> Result<(), SurfaceError> {
        match out[dart] {
            Some(prev) if prev != v => Err(SurfaceError::InconsistentOrientation),
            _ => {
                out[dart] = Some(v);
                Ok(())
            }
        }
    };
    for &(r, eps) in &o.0 {
        for &corner in &d.regions()[r].corners {
            // the region lies left of `corner` and right of its successor
            set(corner, eps > 0)?;
            set(d.rot(corner), eps < 0)?;
        }
    }
    let out: Vec<bool> = out
        .into_iter()
        .map(|v| v.ok_or(SurfaceError::InconsistentOrientation))
        .collect::<Result<_, _>>()?;
    for dart in 0..d.dart_count() {
        if out[dart] == out[d.partner(dart)] || out[dart] == out[d.opposite(dart)] {
            return Err(SurfaceError::InconsistentOrientation);
        }
    }
    Ok(out)
}

fn crossing_sign(d: &CheckedDiagram, outgoing: &[bool], x: usize) -> i8 {
    let u = d.crossing(x).under as usize;
    let pick = |p: usize| {
        let a = d.dart_at(x, p);
        if outgoing[a] {
            p % 4
        } else {
            (p + 2) % 4
        }
    };
    let over_out = pick(u + 1);
    let under_out = pick(u);
    if under_out == (over_out + 1) % 4 {
        1
    } else {
        -1
    }
}

/// Crossing signs under the diagram orientation induced by orienting `s`.
pub fn induced_crossing_signs(
    d: &CheckedDiagram,
    s: &SpanningSurface,
    orientation: &RegionOrientation,
) -> Result<Vec<i8>, SurfaceError> {
    if !s.orientable {
        return Err(SurfaceError::NotOrientable);
    }
    let out = induced_directions(d, orientation)?;
    Ok((0..d.crossing_count())
        .map(|x| crossing_sign(d, &out, x))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NeighborhoodBoundary {
    pub chi_closed: i64,
    pub genus: i64,
    pub complement_of_k_connected: bool,
}

/// The closed surface bounding a regular neighborhood of `s`.
pub fn neighborhood_boundary(s: &SpanningSurface) -> Result<NeighborhoodBoundary, SurfaceError> {
    if !s.connected {
        return Err(SurfaceError::Disconnected);
    }
    Ok(NeighborhoodBoundary {
        chi_closed: 2 * s.chi,
        genus: 1 - s.chi,
        complement_of_k_connected: !s.orientable,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DoubledKind {
    /// Knot strand against the pushoff of the other strand at a crossing.
    Blackboard,
    /// Knot strand against its own pushoff inside the twisted band.
    Twist,
}

/// A crossing between the knot and its surface-framed pushoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DoubledCrossing {
    pub crossing: usize,
    pub kind: DoubledKind,
    pub sign: i8,
}

/// Crossings between `K` and the pushoff of `K` into `s`.
///
/// Along edges the pushoff runs parallel to the knot inside the adjacent
/// region of `s` and crosses nothing. Near a diagram crossing with strands
/// `A` over `B`, the pushoffs `A'`, `B'` meet `B`, `A` as in a blackboard
/// parallel (sign = crossing sign) and each strand meets its own pushoff once
/// inside the band (sign `+1` for a band at a crossing of the surface's type,
/// `-1` otherwise).
pub fn doubled_crossings(
    d: &CheckedDiagram,
    c: &Coloring,
    s: &SpanningSurface,
) -> Result<Vec<DoubledCrossing>, SurfaceError> {
    let count = d.component_count();
    if count != 1 {
        return Err(SurfaceError::LinkInput(count));
    }
    let mut outgoing = vec![false; d.dart_count()];
    for comp in d.components() {
        for (i, &dart) in comp.darts.iter().enumerate() {
            outgoing[dart] = i % 2 == 1;
        }
    }
    let mut out = Vec::with_capacity(4 * s.bands.len());
    for &x in &s.bands {
        let sign = crossing_sign(d, &outgoing, x);
        let twist = if crossing_type(d, c, x) == s.color {
            1
        } else {
            -1
        };
        for (kind, sign) in [
            (DoubledKind::Blackboard, sign),
            (DoubledKind::Blackboard, sign),
            (DoubledKind::Twist, twist),
            (DoubledKind::Twist, twist),
        ] {
            out.push(DoubledCrossing {
                crossing: x,
                kind,
                sign,
            });
        }
    }
    Ok(out)
}

/// Linking number of `K` with its pushoff along `s`.
pub fn boundary_slope(
    d: &CheckedDiagram,
    c: &Coloring,
    s: &SpanningSurface,
) -> Result<i64, SurfaceError> {
    let total: i64 = doubled_crossings(d, c, s)?
        .iter()
        .map(|dc| i64::from(dc.sign))
        .sum();
    debug_assert_eq!(total % 2, 0);
    Ok(total / 2)
}
