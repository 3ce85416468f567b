//! A rotation system on half-edges with face tracing.

use gadc_core::Diagram;

#[derive(Clone, Debug)]
pub struct HalfEdges {
    pub vertex: Vec<usize>,
    pub twin: Vec<usize>,
    /// Next half-edge counterclockwise around the same vertex.
    pub next: Vec<usize>,
    pub vertices: usize,
}

impl HalfEdges {
    /// Half-edge `h` is dart `h` of the diagram; vertex `i` is crossing `i`.
    pub fn from_diagram(d: &Diagram) -> HalfEdges {
        let n = 4 * d.crossings.len();
        let mut vertex = vec![0; n];
        let mut next = vec![0; n];
        for (i, c) in d.crossings.iter().enumerate() {
            for k in 0..4 {
                vertex[c.darts[k]] = i;
                next[c.darts[k]] = c.darts[(k + 1) % 4];
            }
        }
        let mut twin = vec![0; n];
        for &(a, b) in &d.pairing {
            twin[a] = b;
            twin[b] = a;
        }
        HalfEdges {
            vertex,
            twin,
            next,
            vertices: d.crossings.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.vertex.len()
    }

    pub fn prev(&self, h: usize) -> usize {
        let mut g = h;
        while self.next[g] != h {
            g = self.next[g];
        }
        g
    }

    /// Face successor: cross the edge, then turn to the next half-edge.
    pub fn step(&self, h: usize) -> usize {
        self.next[self.twin[h]]
    }

    /// Face label per half-edge, numbered in order of first appearance.
    pub fn faces(&self) -> (Vec<usize>, usize) {
        let mut face = vec![usize::MAX; self.len()];
        let mut count = 0;
        for start in 0..self.len() {
            if face[start] != usize::MAX {
                continue;
            }
            let mut h = start;
            while face[h] == usize::MAX {
                face[h] = count;
                h = self.step(h);
            }
            count += 1;
        }
        (face, count)
    }

    pub fn edge_count(&self) -> usize {
        self.len() / 2
    }

    pub fn euler(&self) -> i64 {
        self.vertices as i64 - self.edge_count() as i64 + self.faces().1 as i64
    }

    fn push(&mut self, vertex: usize) -> usize {
        self.vertex.push(vertex);
        self.twin.push(usize::MAX);
        self.next.push(usize::MAX);
        self.len() - 1
    }

    /// Put a degree-2 vertex in the middle of the edge through `h`. Returns
    /// `(toward h's vertex, away from it)`.
    pub fn subdivide(&mut self, h: usize) -> (usize, usize) {
        let t = self.twin[h];
        let m = self.vertices;
        self.vertices += 1;
        let p = self.push(m);
        let q = self.push(m);
        self.next[p] = q;
        self.next[q] = p;
        self.twin[h] = p;
        self.twin[p] = h;
        self.twin[t] = q;
        self.twin[q] = t;
        (p, q)
    }

    /// Join the sector following `g` at its vertex to the sector following
    /// `k` at its vertex by a new edge. Returns the two new half-edges.
    pub fn join(&mut self, g: usize, k: usize) -> (usize, usize) {
        let x = self.push(self.vertex[g]);
        let y = self.push(self.vertex[k]);
        self.twin[x] = y;
        self.twin[y] = x;
        self.next[x] = self.next[g];
        self.next[g] = x;
        self.next[y] = self.next[k];
        self.next[k] = y;
        (x, y)
    }
}

pub struct UnionFind(Vec<usize>);

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let up = self.0[y];
            self.0[y] = r;
            y = up;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Cut a closed surface given by `g` along the simple closed curve formed by
/// the half-edges flagged in `on_curve` (both halves of each curve edge must
/// be flagged). Returns the side of every face (sides numbered by smallest
/// face) and the Euler characteristic of each side.
pub fn cut_along(g: &HalfEdges, on_curve: &[bool]) -> (Vec<usize>, Vec<i64>) {
    let (face, nf) = g.faces();
    let mut uf = UnionFind::new(nf);
    for h in 0..g.len() {
        if !on_curve[h] {
            uf.union(face[h], face[g.twin[h]]);
        }
    }
    let mut side_of_face: Vec<usize> = (0..nf).map(|f| uf.find(f)).collect();
    let mut roots = side_of_face.clone();
    roots.sort_unstable();
    roots.dedup();
    for s in &mut side_of_face {
        *s = roots.binary_search(s).unwrap();
    }
    let mut chi = vec![0i64; roots.len()];
    for f in 0..nf {
        chi[side_of_face[f]] += 1;
    }
    for h in 0..g.len() {
        if !on_curve[h] && h < g.twin[h] {
            chi[side_of_face[face[h]]] -= 1;
        }
    }
    let mut vertex_on_curve = vec![false; g.vertices];
    for h in 0..g.len() {
        if on_curve[h] {
            vertex_on_curve[g.vertex[h]] = true;
        }
    }
    let mut seen = vec![false; g.vertices];
    for h in 0..g.len() {
        let v = g.vertex[h];
        if !vertex_on_curve[v] && !seen[v] {
            seen[v] = true;
            chi[side_of_face[face[h]]] += 1;
        }
    }
    (side_of_face, chi)
}
