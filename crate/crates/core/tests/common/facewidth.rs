//! Face-width by exhaustive search over simple cycles of the radial graph.

use gadc_core::Diagram;

use super::map::{cut_along, HalfEdges};

/// The radial graph as its own rotation system: half-edge `2g` sits at the
/// crossing of dart `g` and `2g + 1` at the face containing the sector that
/// follows `g`.
pub fn radial(d: &Diagram) -> HalfEdges {
    let g = HalfEdges::from_diagram(d);
    let (face, nf) = g.faces();
    let c = g.vertices;
    let n = g.len();
    for reversed in [false, true] {
        let mut vertex = vec![0; 2 * n];
        let mut twin = vec![0; 2 * n];
        let mut next = vec![0; 2 * n];
        for s in 0..n {
            vertex[2 * s] = g.vertex[s];
            vertex[2 * s + 1] = c + face[g.next[s]];
            twin[2 * s] = 2 * s + 1;
            twin[2 * s + 1] = 2 * s;
            next[2 * s] = 2 * g.next[s];
        }
        // sectors of a face in boundary-walk order
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut e = start;
            while !seen[e] {
                seen[e] = true;
                walk.push(g.prev(e));
                e = g.step(e);
            }
            if reversed {
                walk.reverse();
            }
            for i in 0..walk.len() {
                next[2 * walk[i] + 1] = 2 * walk[(i + 1) % walk.len()] + 1;
            }
        }
        let r = HalfEdges {
            vertex,
            twin,
            next,
            vertices: c + nf,
        };
        let quads = {
            let (rf, count) = r.faces();
            let mut size = vec![0; count];
            for f in rf {
                size[f] += 1;
            }
            size.iter().all(|&k| k == 4)
        };
        if quads && r.euler() == g.euler() {
            return r;
        }
    }
    panic!("no consistent radial embedding");
}

fn contractible(r: &HalfEdges, cycle: &[usize]) -> bool {
    let mut on_curve = vec![false; r.len()];
    for &h in cycle {
        on_curve[h] = true;
        on_curve[r.twin[h]] = true;
    }
    let (_, chi) = cut_along(r, &on_curve);
    chi.len() > 1 && chi.contains(&1)
}

/// Half the length of a shortest noncontractible simple radial cycle, or
/// `None` when every cycle is contractible.
pub fn face_width(d: &Diagram) -> Option<usize> {
    let r = radial(d);
    let limit = 2 * d.crossings.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); r.vertices];
    for h in 0..r.len() {
        out[r.vertex[h]].push(h);
    }
    let mut best: Option<usize> = None;
    for start in 0..r.vertices {
        let mut on_path = vec![false; r.vertices];
        on_path[start] = true;
        let mut path = Vec::new();
        search(
            &r,
            &out,
            start,
            start,
            limit,
            &mut on_path,
            &mut path,
            &mut best,
        );
    }
    best.map(|len| len / 2)
}

#[allow(clippy::too_many_arguments)]
fn search(
    r: &HalfEdges,
    out: &[Vec<usize>],
    start: usize,
    at: usize,
    limit: usize,
    on_path: &mut [bool],
    path: &mut Vec<usize>,
    best: &mut Option<usize>,
) {
    if path.len() >= limit || best.is_some_and(|b| path.len() + 1 >= b) {
        return;
    }
    for &h in &out[at] {
        let w = r.vertex[r.twin[h]];
        if path.last() == Some(&r.twin[h]) {
            continue;
        }
        if w == start {
            path.push(h);
            if !contractible(r, path) {
                *best = Some(path.len());
            }
            path.pop();
        } else if w > start && !on_path[w] {
            on_path[w] = true;
            path.push(h);
            search(r, out, start, w, limit, on_path, path, best);
            path.pop();
            on_path[w] = false;
        }
    }
}
