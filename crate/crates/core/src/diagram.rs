//! Link diagrams on closed orientable surfaces, stored as decorated
//! combinatorial maps.
//!
//! Every crossing carries four darts (edge-ends) listed counterclockwise as
//! seen from the positive side of the surface. The strand entering at
//! position `i` leaves at position `i + 2`, so the passages of a crossing are
//! the position pairs `(0, 2)` and `(1, 3)`. The `under` index names a dart
//! of the under-passage; only its parity is topologically meaningful.
//!
//! The ambient surface is the cellular surface of the rotation system, with
//! extra handles hidden inside regions listed in `region_genus`.
//!
//! Corners and edge-sides share the dart index space: corner `d` is the
//! sector swept counterclockwise from `d` to its rotation successor, and the
//! left side of `d` (looking outward from its crossing) lies in corner `d`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::{SerializeMap, SerializeSeq, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

pub type Dart = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    /// Darts in counterclockwise order.
    pub darts: [Dart; 4],
    /// Position (0..4) of a dart on the under-passage.
    pub under: u8,
}

/// A crossing-free component sitting inside a region.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeLoop {
    pub label: String,
    pub region: usize,
}

/// Raw diagram data, possibly violating the map invariants.
///
/// Use [`validate_map`] to list the violations, or [`CheckedDiagram::new`]
/// to obtain a diagram the topological operations accept.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Diagram {
    pub crossings: Vec<Crossing>,
    pub pairing: Vec<(Dart, Dart)>,
    pub components: BTreeMap<Dart, String>,
    pub free_loops: Vec<FreeLoop>,
    pub region_genus: BTreeMap<usize, u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("structure error: {0}")]
    Structure(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("Euler characteristic parity violated (2 - V + E - F = {0})")]
    Parity(i64),
}

pub mod rules {
    pub const NON_EMPTY: &str = "non-empty";
    pub const DART_IDS: &str = "dart ids";
    pub const UNDER_INDEX: &str = "under index";
    pub const INVOLUTION: &str = "fixed-point-free involution";
    pub const LABELS_COMPLETE: &str = "component labels complete";
    pub const COMPONENT_CONSTANCY: &str = "component constancy";
    pub const CONNECTED: &str = "connected map";
    pub const FREE_LOOP_REGION: &str = "free loop region";
    pub const REGION_GENUS_INDEX: &str = "region genus index";
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub message: String,
    pub darts: Vec<Dart>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "valid map");
        }
        let msgs: Vec<_> = self
            .violations
            .iter()
            .map(|v| format!("[{}] {}", v.rule, v.message))
            .collect();
        write!(f, "{}", msgs.join("; "))
    }
}

impl std::error::Error for ValidationReport {}

/// One face of `F - pi(L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionWalk {
    pub index: usize,
    /// Corner darts in walk order; empty for regions bounded only by free loops.
    pub corners: Vec<Dart>,
    pub genus: u32,
    /// Free loops lying on the boundary of this region.
    pub free_loops: Vec<usize>,
    rot: Vec<Dart>,
}

impl RegionWalk {
    /// The cyclic boundary walk as `(dart, side)` pairs.
    pub fn boundary(&self) -> Vec<(Dart, Side)> {
        self.corners
            .iter()
            .zip(&self.rot)
            .flat_map(|(&c, &r)| [(c, Side::Left), (r, Side::Right)])
            .collect()
    }

    pub fn boundary_circles(&self) -> usize {
        usize::from(!self.corners.is_empty()) + self.free_loops.len()
    }

    pub fn is_disk(&self) -> bool {
        self.genus == 0 && self.boundary_circles() == 1
    }

    /// Euler characteristic of the closed-up region.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * i64::from(self.genus) - self.boundary_circles() as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub label: String,
    /// Darts in traversal order: entry, exit, entry, exit, ...
    /// Empty for a free loop.
    pub darts: Vec<Dart>,
}

impl Component {
    pub fn edge_count(&self) -> usize {
        self.darts.len() / 2
    }

    pub fn is_free_loop(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = Dart> + '_ {
        self.darts.iter().step_by(2).copied()
    }
}

/// A diagram that satisfies every map invariant, with lookup tables.
#[derive(Clone, Debug)]
pub struct CheckedDiagram {
    diagram: Diagram,
    crossing_of: Vec<usize>,
    position: Vec<u8>,
    partner: Vec<Dart>,
    corner_region: Vec<usize>,
    base_regions: usize,
    regions: Vec<RegionWalk>,
    components: Vec<Component>,
}

impl CheckedDiagram {
    pub fn new(diagram: Diagram) -> Result<Self, ValidationReport> {
        let report = validate_map(&diagram);
        if !report.ok {
            return Err(report);
        }
        let diagram = diagram.normalized();
        let n = diagram.dart_count();
        let mut crossing_of = vec![0; n];
        let mut position = vec![0; n];
        for (x, c) in diagram.crossings.iter().enumerate() {
            for (p, &d) in c.darts.iter().enumerate() {
                crossing_of[d] = x;
                position[d] = p as u8;
            }
        }
        let mut partner = vec![0; n];
        for &(a, b) in &diagram.pairing {
            partner[a] = b;
            partner[b] = a;
        }
        let mut checked = CheckedDiagram {
            diagram,
            crossing_of,
            position,
            partner,
            corner_region: Vec::new(),
            base_regions: 0,
            regions: Vec::new(),
            components: Vec::new(),
        };
        let faces = checked.face_orbits();
        checked.base_regions = faces.len().max(1);
        checked.corner_region = vec![0; n];
        for (r, f) in faces.iter().enumerate() {
            for &c in f {
                checked.corner_region[c] = r;
            }
        }
        checked.regions = checked.build_regions(faces);
        checked.components = checked.trace_components();
        Ok(checked)
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn crossing_count(&self) -> usize {
        self.diagram.crossings.len()
    }

    pub fn dart_count(&self) -> usize {
        self.partner.len()
    }

    pub fn crossing(&self, x: usize) -> &Crossing {
        &self.diagram.crossings[x]
    }

    pub fn crossing_of(&self, d: Dart) -> usize {
        self.crossing_of[d]
    }

    pub fn position(&self, d: Dart) -> u8 {
        self.position[d]
    }

    /// The dart at `position` (mod 4) of crossing `x`.
    pub fn dart_at(&self, x: usize, position: usize) -> Dart {
        self.diagram.crossings[x].darts[position % 4]
    }

    pub fn partner(&self, d: Dart) -> Dart {
        self.partner[d]
    }

    /// Counterclockwise successor at the same crossing.
    pub fn rot(&self, d: Dart) -> Dart {
        self.dart_at(self.crossing_of[d], self.position[d] as usize + 1)
    }

    pub fn rot_inv(&self, d: Dart) -> Dart {
        self.dart_at(self.crossing_of[d], self.position[d] as usize + 3)
    }

    /// The dart where a strand entering at `d` leaves the crossing.
    pub fn opposite(&self, d: Dart) -> Dart {
        self.dart_at(self.crossing_of[d], self.position[d] as usize + 2)
    }

    pub fn is_under(&self, d: Dart) -> bool {
        let c = &self.diagram.crossings[self.crossing_of[d]];
        (self.position[d] + 4 - c.under).is_multiple_of(2)
    }

    /// Edge identifier: the smaller of its two darts.
    pub fn edge_of(&self, d: Dart) -> Dart {
        d.min(self.partner[d])
    }

    pub fn edges(&self) -> Vec<Dart> {
        (0..self.dart_count())
            .filter(|&d| d < self.partner[d])
            .collect()
    }

    pub fn regions(&self) -> &[RegionWalk] {
        &self.regions
    }

    /// Number of faces of the underlying rotation system (free-loop disks excluded).
    pub fn base_region_count(&self) -> usize {
        self.base_regions
    }

    pub fn corner_region(&self, corner: Dart) -> usize {
        self.corner_region[corner]
    }

    /// Region lying on the given side of dart `d`.
    pub fn region_of_side(&self, d: Dart, side: Side) -> usize {
        match side {
            Side::Left => self.corner_region[d],
            Side::Right => self.corner_region[self.rot_inv(d)],
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn has_free_loops(&self) -> bool {
        !self.diagram.free_loops.is_empty()
    }

    pub fn has_region_genus(&self) -> bool {
        self.diagram.region_genus.values().any(|&g| g > 0)
    }

    /// Every region is an open disk.
    pub fn is_cellular(&self) -> bool {
        self.regions.iter().all(RegionWalk::is_disk)
    }

    /// Genus of the surface carried by the rotation system alone.
    pub fn cellular_genus(&self) -> u32 {
        let c = self.crossing_count() as i64;
        if c == 0 {
            return 0;
        }
        ((2 - c + 2 * c - self.base_regions as i64) / 2) as u32
    }

    /// Exchange over and under at every crossing.
    pub fn mirror(&self) -> CheckedDiagram {
        let mut d = self.diagram.clone();
        for c in &mut d.crossings {
            c.under = (c.under + 1) % 4;
        }
        CheckedDiagram::new(d).expect("mirroring preserves validity")
    }

    fn face_orbits(&self) -> Vec<Vec<Dart>> {
        let n = self.dart_count();
        let mut seen = vec![false; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut c = start;
            while !seen[c] {
                seen[c] = true;
                walk.push(c);
                c = self.partner[self.rot(c)];
            }
            faces.push(walk);
        }
        faces
    }

    fn build_regions(&self, faces: Vec<Vec<Dart>>) -> Vec<RegionWalk> {
        let mut regions: Vec<RegionWalk> = if faces.is_empty() {
            vec![RegionWalk {
                index: 0,
                corners: Vec::new(),
                genus: 0,
                free_loops: Vec::new(),
                rot: Vec::new(),
            }]
        } else {
            faces
                .into_iter()
                .enumerate()
                .map(|(index, corners)| RegionWalk {
                    index,
                    rot: corners.iter().map(|&c| self.rot(c)).collect(),
                    corners,
                    genus: 0,
                    free_loops: Vec::new(),
                })
                .collect()
        };
        for (i, fl) in self.diagram.free_loops.iter().enumerate() {
            regions[fl.region].free_loops.push(i);
            regions.push(RegionWalk {
                index: regions.len(),
                corners: Vec::new(),
                genus: 0,
                free_loops: vec![i],
                rot: Vec::new(),
            });
        }
        for (&r, &g) in &self.diagram.region_genus {
            regions[r].genus = g;
        }
        regions
    }

    fn trace_components(&self) -> Vec<Component> {
        let n = self.dart_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut darts = Vec::new();
            let mut d = start;
            while !seen[d] {
                let exit = self.opposite(d);
                seen[d] = true;
                seen[exit] = true;
                darts.push(d);
                darts.push(exit);
                d = self.partner[exit];
            }
            let label = self
                .diagram
                .components
                .get(&start)
                .cloned()
                .unwrap_or_else(|| out.len().to_string());
            out.push(Component { label, darts });
        }
        for fl in &self.diagram.free_loops {
            out.push(Component {
                label: fl.label.clone(),
                darts: Vec::new(),
            });
        }
        out
    }
}

impl Diagram {
    pub fn dart_count(&self) -> usize {
        4 * self.crossings.len()
    }

    /// Crossings sorted by smallest dart, pairs as `(min, max)` sorted.
    pub fn normalized(&self) -> Diagram {
        let mut d = self.clone();
        d.crossings
            .sort_by_key(|c| c.darts.iter().copied().min().unwrap_or(0));
        for p in &mut d.pairing {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        d.pairing.sort();
        d
    }

    /// Rename every dart `d` to `perm[d]`, keeping the rotation at each crossing.
    ///
    /// Region decorations are carried along to the regions containing the
    /// renamed corners.
    pub fn relabeled(&self, perm: &[Dart]) -> Diagram {
        let mut out = Diagram {
            crossings: self
                .crossings
                .iter()
                .map(|c| Crossing {
                    darts: c.darts.map(|d| perm[d]),
                    under: c.under,
                })
                .collect(),
            pairing: self
                .pairing
                .iter()
                .map(|&(a, b)| (perm[a], perm[b]))
                .collect(),
            components: self
                .components
                .iter()
                .map(|(&d, l)| (perm[d], l.clone()))
                .collect(),
            free_loops: Vec::new(),
            region_genus: BTreeMap::new(),
        };
        if self.free_loops.is_empty() && self.region_genus.is_empty() {
            return out.normalized();
        }
        let (Ok(before), Ok(after)) = (
            CheckedDiagram::new(Diagram {
                free_loops: Vec::new(),
                region_genus: BTreeMap::new(),
                ..self.clone()
            }),
            CheckedDiagram::new(out.clone()),
        ) else {
            return out.normalized();
        };
        let base = before.base_region_count();
        let map_region = |r: usize| -> usize {
            if r >= base {
                return r;
            }
            match before.regions()[r].corners.first() {
                Some(&c) => after.corner_region(perm[c]),
                None => r,
            }
        };
        out.free_loops = self
            .free_loops
            .iter()
            .map(|fl| FreeLoop {
                label: fl.label.clone(),
                region: map_region(fl.region),
            })
            .collect();
        out.region_genus = self
            .region_genus
            .iter()
            .map(|(&r, &g)| (map_region(r), g))
            .collect();
        out.normalized()
    }
}

/// Check every map invariant and list all violations.
pub fn validate_map(d: &Diagram) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |rule: &'static str, message: String, darts: Vec<Dart>| {
        violations.push(Violation {
            rule,
            message,
            darts,
        })
    };
    let n = d.dart_count();
    if d.crossings.is_empty() && d.free_loops.is_empty() {
        push(
            rules::NON_EMPTY,
            "diagram has no crossings and no free loops".into(),
            vec![],
        );
    }

    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut structure_ok = true;
    for (x, c) in d.crossings.iter().enumerate() {
        for &dart in &c.darts {
            if dart >= n {
                structure_ok = false;
                push(
                    rules::DART_IDS,
                    format!("crossing {x} lists dart {dart} outside 0..{n}"),
                    vec![dart],
                );
            } else if let Some(prev) = owner[dart] {
                structure_ok = false;
                push(
                    rules::DART_IDS,
                    format!("dart {dart} listed by crossings {prev} and {x}"),
                    vec![dart],
                );
            } else {
                owner[dart] = Some(x);
            }
        }
        if c.under > 3 {
            push(
                rules::UNDER_INDEX,
                format!("crossing {x} has under index {} outside 0..4", c.under),
                c.darts.to_vec(),
            );
        }
    }

    let mut partner: Vec<Option<Dart>> = vec![None; n];
    for &(a, b) in &d.pairing {
        if a >= n || b >= n {
            structure_ok = false;
            push(
                rules::INVOLUTION,
                format!("pair ({a}, {b}) references a dart outside 0..{n}"),
                vec![a, b],
            );
            continue;
        }
        if a == b {
            structure_ok = false;
            push(
                rules::INVOLUTION,
                format!("dart {a} is paired with itself"),
                vec![a],
            );
            continue;
        }
        for (u, v) in [(a, b), (b, a)] {
            if partner[u].is_some() {
                structure_ok = false;
                push(
                    rules::INVOLUTION,
                    format!("dart {u} appears in more than one pair"),
                    vec![u],
                );
            } else {
                partner[u] = Some(v);
            }
        }
    }
    let unpaired: Vec<Dart> = (0..n).filter(|&x| partner[x].is_none()).collect();
    if !unpaired.is_empty() {
        structure_ok = false;
        push(
            rules::INVOLUTION,
            format!("{} dart(s) are not paired", unpaired.len()),
            unpaired,
        );
    }
    let unlisted: Vec<Dart> = (0..n).filter(|&x| owner[x].is_none()).collect();
    if !unlisted.is_empty() {
        structure_ok = false;
        push(
            rules::DART_IDS,
            format!("dart ids {unlisted:?} are not listed by any crossing"),
            unlisted,
        );
    }

    if !d.components.is_empty() {
        let stray: Vec<Dart> = d.components.keys().copied().filter(|&x| x >= n).collect();
        if !stray.is_empty() {
            push(
                rules::LABELS_COMPLETE,
                "component labels reference unknown darts".into(),
                stray,
            );
        }
        let missing: Vec<Dart> = (0..n).filter(|x| !d.components.contains_key(x)).collect();
        if !missing.is_empty() {
            push(
                rules::LABELS_COMPLETE,
                format!("{} dart(s) carry no component label", missing.len()),
                missing,
            );
        }
    }

    if structure_ok && n > 0 {
        let pos = |dart: Dart| -> (usize, usize) {
            let x = owner[dart].unwrap();
            let p = d.crossings[x]
                .darts
                .iter()
                .position(|&e| e == dart)
                .unwrap();
            (x, p)
        };
        let at = |x: usize, p: usize| d.crossings[x].darts[p % 4];
        let partner: Vec<Dart> = partner.iter().map(|p| p.unwrap()).collect();

        // Labels along strands.
        for dart in 0..n {
            let (x, p) = pos(dart);
            let exit = at(x, p + 2);
            for (u, v) in [(dart, exit), (exit, partner[exit])] {
                if let (Some(lu), Some(lv)) = (d.components.get(&u), d.components.get(&v)) {
                    if lu != lv && u < v {
                        push(
                            rules::COMPONENT_CONSTANCY,
                            format!(
                                "label changes from {lu:?} to {lv:?} between darts {u} and {v}"
                            ),
                            vec![u, v],
                        );
                    }
                }
            }
        }

        // Connectivity over crossings and edges.
        let mut seen = vec![false; d.crossings.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &dart in &d.crossings[x].darts {
                let y = owner[partner[dart]].unwrap();
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            let stray: Vec<Dart> = d
                .crossings
                .iter()
                .enumerate()
                .filter(|(x, _)| !seen[*x])
                .flat_map(|(_, c)| c.darts)
                .collect();
            push(
                rules::CONNECTED,
                "the underlying map is disconnected; use free loops for split crossing-free components".into(),
                stray,
            );
        }

        let mut faces = 0;
        let mut visited = vec![false; n];
        for s in 0..n {
            if visited[s] {
                continue;
            }
            faces += 1;
            let mut c = s;
            while !visited[c] {
                visited[c] = true;
                let (x, p) = pos(c);
                c = partner[at(x, p + 1)];
            }
        }
        check_decorations(d, faces, &mut push);
    } else if n == 0 {
        check_decorations(d, 1, &mut push);
    }

    ValidationReport {
        ok: violations.is_empty(),
        violations,
    }
}

fn check_decorations(
    d: &Diagram,
    base_regions: usize,
    push: &mut impl FnMut(&'static str, String, Vec<Dart>),
) {
    for (i, fl) in d.free_loops.iter().enumerate() {
        if fl.region >= base_regions + i {
            push(
                rules::FREE_LOOP_REGION,
                format!(
                    "free loop {i} ({:?}) references region {} but only {} exist at that point",
                    fl.label,
                    fl.region,
                    base_regions + i
                ),
                vec![],
            );
        }
    }
    let total = base_regions + d.free_loops.len();
    for &r in d.region_genus.keys() {
        if r >= total {
            push(
                rules::REGION_GENUS_INDEX,
                format!("region_genus references region {r} but the diagram has {total} regions"),
                vec![],
            );
        }
    }
}

pub fn trace_regions(d: &CheckedDiagram) -> Vec<RegionWalk> {
    d.regions().to_vec()
}

/// Genus of the ambient surface: cellular genus plus decorated handles.
pub fn surface_genus(d: &CheckedDiagram) -> Result<u32, DiagramError> {
    let handles: u32 = d.diagram().region_genus.values().sum();
    let c = d.crossing_count() as i64;
    if c == 0 {
        return Ok(handles);
    }
    let twice = 2 - c + 2 * c - d.base_region_count() as i64;
    if twice % 2 != 0 || twice < 0 {
        return Err(DiagramError::Parity(twice));
    }
    Ok((twice / 2) as u32 + handles)
}

pub fn components(d: &CheckedDiagram) -> Vec<Component> {
    d.components().to_vec()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Alternation {
    pub ok: bool,
    /// Entry dart of the second of two consecutive passages of the same kind.
    pub witness: Option<Dart>,
}

pub fn is_alternating(d: &CheckedDiagram) -> Alternation {
    for comp in d.components() {
        let entries: Vec<Dart> = comp.entries().collect();
        for (i, &e) in entries.iter().enumerate() {
            let next = entries[(i + 1) % entries.len()];
            if d.is_under(e) == d.is_under(next) {
                return Alternation {
                    ok: false,
                    witness: Some(next),
                };
            }
        }
    }
    Alternation {
        ok: true,
        witness: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reducedness {
    pub ok: bool,
    /// A disk region meeting exactly one crossing.
    pub witness: Option<usize>,
}

pub fn is_reduced(d: &CheckedDiagram) -> Reducedness {
    let witness = d.regions().iter().find_map(|r| {
        if !r.is_disk() || r.corners.is_empty() {
            return None;
        }
        let crossings: BTreeSet<usize> = r.corners.iter().map(|&c| d.crossing_of(c)).collect();
        (crossings.len() == 1).then_some(r.index)
    });
    Reducedness {
        ok: witness.is_none(),
        witness,
    }
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DocCrossing {
    darts: Vec<Dart>,
    under: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    crossings: Vec<DocCrossing>,
    pairing: Vec<[Dart; 2]>,
    #[serde(default)]
    components: BTreeMap<String, String>,
    #[serde(default)]
    free_loops: Vec<FreeLoop>,
    #[serde(default)]
    region_genus: BTreeMap<String, u32>,
}

/// Parse an extended-PD JSON document.
pub fn parse_diagram(text: &str) -> Result<Diagram, ParseError> {
    let doc: Doc = serde_json::from_str(text).map_err(|e| ParseError::Syntax(e.to_string()))?;
    let structure = |m: String| ParseError::Structure(m);

    let mut crossings = Vec::with_capacity(doc.crossings.len());
    for (x, c) in doc.crossings.into_iter().enumerate() {
        let darts: [Dart; 4] = c.darts.as_slice().try_into().map_err(|_| {
            structure(format!(
                "crossing {x} lists {} darts, expected 4",
                c.darts.len()
            ))
        })?;
        if c.under > 3 {
            return Err(structure(format!(
                "crossing {x} has under index {} outside 0..4",
                c.under
            )));
        }
        crossings.push(Crossing {
            darts,
            under: c.under as u8,
        });
    }

    let mut used = BTreeSet::new();
    let mut pairing = Vec::with_capacity(doc.pairing.len());
    for [a, b] in doc.pairing {
        for x in [a, b] {
            if !used.insert(x) {
                return Err(structure(format!(
                    "dart {x} is referenced twice in pairing"
                )));
            }
        }
        pairing.push((a, b));
    }

    let int_key = |k: &str, what: &str| -> Result<usize, ParseError> {
        k.parse()
            .map_err(|_| structure(format!("{what} key {k:?} is not a non-negative integer")))
    };
    let components = doc
        .components
        .into_iter()
        .map(|(k, v)| Ok((int_key(&k, "components")?, v)))
        .collect::<Result<_, ParseError>>()?;
    let region_genus = doc
        .region_genus
        .into_iter()
        .map(|(k, v)| Ok((int_key(&k, "region_genus")?, v)))
        .collect::<Result<_, ParseError>>()?;

    Ok(Diagram {
        crossings,
        pairing,
        components,
        free_loops: doc.free_loops,
        region_genus,
    })
}

struct CrossingsOut<'a>(Vec<&'a Crossing>);

impl Serialize for CrossingsOut<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            seq.serialize_element(&CrossingOut(c))?;
        }
        seq.end()
    }
}

struct CrossingOut<'a>(&'a Crossing);

impl Serialize for CrossingOut<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Crossing", 2)?;
        st.serialize_field("darts", &self.0.darts)?;
        st.serialize_field("under", &self.0.under)?;
        st.end()
    }
}

struct IntKeyed<'a, V>(&'a BTreeMap<usize, V>);

impl<V: Serialize> Serialize for IntKeyed<'_, V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(&k.to_string(), v)?;
        }
        m.end()
    }
}

/// Canonical form: keys in schema order, arrays sorted by smallest member,
/// empty decorations omitted.
impl Serialize for Diagram {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut crossings: Vec<&Crossing> = self.crossings.iter().collect();
        crossings.sort_by_key(|c| c.darts.iter().copied().min().unwrap_or(0));
        let mut pairing: Vec<[Dart; 2]> = self
            .pairing
            .iter()
            .map(|&(a, b)| [a.min(b), a.max(b)])
            .collect();
        pairing.sort();

        let mut fields = 2;
        fields += usize::from(!self.components.is_empty());
        fields += usize::from(!self.free_loops.is_empty());
        fields += usize::from(!self.region_genus.is_empty());
        let mut st = s.serialize_struct("Diagram", fields)?;
        st.serialize_field("crossings", &CrossingsOut(crossings))?;
        st.serialize_field("pairing", &pairing)?;
        if !self.components.is_empty() {
            st.serialize_field("components", &IntKeyed(&self.components))?;
        }
        if !self.free_loops.is_empty() {
            st.serialize_field("free_loops", &self.free_loops)?;
        }
        if !self.region_genus.is_empty() {
            st.serialize_field("region_genus", &IntKeyed(&self.region_genus))?;
        }
        st.end()
    }
}

pub fn to_canonical_json(d: &Diagram) -> String {
    serde_json::to_string(d).expect("diagram serialization is infallible")
}

/// Build a diagram from planar-diagram codes: each crossing lists four edge
/// labels counterclockwise plus the position of an under-passage dart.
/// Crossing `i`, position `j` becomes dart `4i + j`; darts sharing a label
/// are paired.
pub fn from_pd(code: &[([usize; 4], u8)]) -> Result<Diagram, ParseError> {
    let mut ends: BTreeMap<usize, Vec<Dart>> = BTreeMap::new();
    let crossings = code
        .iter()
        .enumerate()
        .map(|(i, (labels, under))| {
            for (j, &l) in labels.iter().enumerate() {
                ends.entry(l).or_default().push(4 * i + j);
            }
            Crossing {
                darts: [4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3],
                under: *under,
            }
        })
        .collect();
    let pairing = ends
        .into_iter()
        .map(|(label, e)| match e.as_slice() {
            &[a, b] => Ok((a, b)),
            _ => Err(ParseError::Structure(format!(
                "edge label {label} occurs {} times",
                e.len()
            ))),
        })
        .collect::<Result<_, _>>()?;
    Ok(Diagram {
        crossings,
        pairing,
        ..Diagram::default()
    })
}
