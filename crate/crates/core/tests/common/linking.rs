//! Boundary slopes by explicit geometry.
//!
//! Near each crossing the checkerboard surface is modeled as the ruled band
//! swept by segments joining the two strands, which sit at heights ±1. The
//! pushoff of the knot moves a fraction `EPS` along those segments, and a
//! small generic shift separates the four strands. Projected crossings
//! between the knot and its pushoff are found by segment intersection and
//! signed with the right-hand rule; along edges the pushoff stays on one
//! side and crosses nothing.

use std::collections::VecDeque;

use gadc_core::Diagram;

use super::map::HalfEdges;

const EPS: f64 = 0.1;
const SHIFT_A: (f64, f64) = (0.0031, 0.0017);
const SHIFT_B: (f64, f64) = (-0.0023, 0.0041);

/// Straight segment `p + t q` for `t` in `[-1, 1]`, at constant height,
/// traversed in direction `dir` (±1 along `q`).
#[derive(Clone, Copy)]
struct Strand {
    p: (f64, f64),
    q: (f64, f64),
    height: f64,
    dir: f64,
}

impl Strand {
    fn velocity(&self) -> (f64, f64) {
        (self.q.0 * self.dir, self.q.1 * self.dir)
    }
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// Sign of the projected crossing of `a` and `b`, if they cross.
fn crossing_sign(a: &Strand, b: &Strand) -> Option<i64> {
    let det = cross(a.q, b.q);
    assert!(det.abs() > 1e-12, "parallel strands");
    let w = (b.p.0 - a.p.0, b.p.1 - a.p.1);
    let t = cross(w, b.q) / det;
    let s = cross(w, a.q) / det;
    if t.abs() > 1.0 || s.abs() > 1.0 {
        return None;
    }
    let (over, under) = if a.height > b.height { (a, b) } else { (b, a) };
    let c = cross(over.velocity(), under.velocity());
    Some(if c > 0.0 { 1 } else { -1 })
}

/// Two-coloring of the faces; `color[f]` is `true` for the class of the
/// face containing the sector after dart 0.
fn face_colors(g: &HalfEdges) -> Option<Vec<bool>> {
    let (face, nf) = g.faces();
    let mut adj = vec![Vec::new(); nf];
    for h in 0..g.len() {
        let a = face[g.next[h]];
        let b = face[g.next[g.next[h]]];
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut color: Vec<Option<bool>> = vec![None; nf];
    let root = face[g.next[0]];
    color[root] = Some(true);
    let mut queue = VecDeque::from([root]);
    while let Some(f) = queue.pop_front() {
        for &h in &adj[f] {
            match color[h] {
                None => {
                    color[h] = Some(!color[f].unwrap());
                    queue.push_back(h);
                }
                Some(c) if c == color[f].unwrap() => return None,
                Some(_) => {}
            }
        }
    }
    color.into_iter().collect()
}

/// Linking numbers of a knot with its pushoffs into the two checkerboard
/// surfaces: first the surface containing the face after dart 0, then the
/// other. `None` for links and non-colorable diagrams.
pub fn slopes(d: &Diagram) -> Option<[i64; 2]> {
    let g = HalfEdges::from_diagram(d);
    let n = g.len();
    if n == 0 || !d.free_loops.is_empty() {
        return None;
    }
    let position = |h: usize| {
        let c = &d.crossings[g.vertex[h]];
        c.darts.iter().position(|&x| x == h).unwrap()
    };
    let opposite = |h: usize| d.crossings[g.vertex[h]].darts[(position(h) + 2) % 4];

    // traverse the knot from dart 0
    let mut entering = vec![false; n];
    let mut visited = 0;
    let mut h = 0;
    loop {
        entering[h] = true;
        visited += 2;
        h = g.twin[opposite(h)];
        if h == 0 {
            break;
        }
    }
    if visited != n {
        return None;
    }

    let (face, _) = g.faces();
    let colors = face_colors(&g)?;
    let mut out = [0i64; 2];
    for (slot, surface) in [true, false].into_iter().enumerate() {
        let mut total = 0;
        for c in &d.crossings {
            let k = (0..2)
                .find(|&k| colors[face[g.next[c.darts[k]]]] == surface)
                .unwrap();
            let u = c.under as usize;
            let a_over = (k + u + 1).is_multiple_of(2);
            let (ha, hb) = if a_over { (1.0, -1.0) } else { (-1.0, 1.0) };
            let dir_a = if entering[c.darts[k]] { -1.0 } else { 1.0 };
            let dir_b = if entering[c.darts[(k + 1) % 4]] {
                -1.0
            } else {
                1.0
            };
            let a = Strand {
                p: (0.0, 0.0),
                q: (1.0, 0.0),
                height: ha,
                dir: dir_a,
            };
            let b = Strand {
                p: (0.0, 0.0),
                q: (0.0, 1.0),
                height: hb,
                dir: dir_b,
            };
            let a_push = Strand {
                p: SHIFT_A,
                q: (1.0 - EPS, EPS),
                height: ha + EPS * (hb - ha),
                dir: dir_a,
            };
            let b_push = Strand {
                p: SHIFT_B,
                q: (EPS, 1.0 - EPS),
                height: hb + EPS * (ha - hb),
                dir: dir_b,
            };
            for strand in [&a, &b] {
                for push in [&a_push, &b_push] {
                    total += crossing_sign(strand, push).unwrap_or(0);
                }
            }
        }
        assert_eq!(total % 2, 0, "odd crossing sum");
        out[slot] = total / 2;
    }
    Some(out)
}
