//! Fixtures, exhaustive censuses and seeded random diagrams.
//!
//! Census maps are built one dart at a time: the smallest unpaired dart is
//! glued either to a free dart of an opened crossing or to position 0 of a new
//! crossing, so every connected rotation system shows up at least once.
//! Duplicates are removed with a canonical code: the lexicographically least
//! breadth-first relabeling over all roots. Isomorphisms preserve the cyclic
//! order at crossings and the under-passage, so mirror images stay distinct.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::{
    from_pd, is_alternating, is_reduced, CheckedDiagram, Crossing, Dart, Diagram, FreeLoop,
};
use crate::primality::is_prime;

pub const DEFAULT_MAX_CROSSINGS: usize = 8;
pub const MAX_GENUS: u32 = 2;
pub const CAP_ENV: &str = "GADC_MAX_CROSSINGS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Filter {
    Alternating,
    Reduced,
    Prime,
    Knot,
    Link,
}

impl Filter {
    pub fn accepts(self, d: &CheckedDiagram) -> bool {
        match self {
            Filter::Alternating => is_alternating(d).ok,
            Filter::Reduced => is_reduced(d).ok,
            Filter::Prime => is_prime(d).ok,
            Filter::Knot => d.component_count() == 1,
            Filter::Link => d.component_count() >= 2,
        }
    }
}

impl FromStr for Filter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alternating" => Ok(Filter::Alternating),
            "reduced" => Ok(Filter::Reduced),
            "prime" => Ok(Filter::Prime),
            "knot" | "knot-only" => Ok(Filter::Knot),
            "link" | "link-only" => Ok(Filter::Link),
            _ => Err(format!("unknown filter {s:?}")),
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Filter::Alternating => "alternating",
            Filter::Reduced => "reduced",
            Filter::Prime => "prime",
            Filter::Knot => "knot",
            Filter::Link => "link",
        })
    }
}

/// Random-mode parameters: `samples` draws from one seeded stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub seed: u64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusSpec {
    pub max_crossings: usize,
    pub min_genus: u32,
    pub max_genus: u32,
    pub filters: BTreeSet<Filter>,
    /// Sample instead of enumerating exhaustively.
    pub sampling: Option<Sampling>,
}

impl CensusSpec {
    pub fn new(max_crossings: usize, max_genus: u32) -> CensusSpec {
        CensusSpec {
            max_crossings,
            min_genus: 0,
            max_genus,
            filters: BTreeSet::new(),
            sampling: None,
        }
    }

    pub fn with_filters(mut self, filters: impl IntoIterator<Item = Filter>) -> CensusSpec {
        self.filters.extend(filters);
        self
    }

    fn admits(&self, d: &CheckedDiagram) -> bool {
        let g = d.cellular_genus();
        (self.min_genus..=self.max_genus).contains(&g) && self.filters.iter().all(|f| f.accepts(d))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("{what} {requested} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
}

/// Crossing cap, overridable through the environment.
pub fn crossing_cap() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_CROSSINGS)
}

fn check_caps(spec: &CensusSpec) -> Result<(), GeneratorError> {
    let cap = crossing_cap();
    if spec.max_crossings > cap {
        return Err(GeneratorError::CapExceeded {
            what: "crossing count",
            requested: spec.max_crossings,
            cap,
        });
    }
    if spec.max_genus > MAX_GENUS {
        return Err(GeneratorError::CapExceeded {
            what: "genus",
            requested: spec.max_genus as usize,
            cap: MAX_GENUS as usize,
        });
    }
    Ok(())
}

const NONE: usize = usize::MAX;

/// A connected rotation system in position form: dart `4x + p` is position
/// `p` of crossing `x`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct RawMap {
    pair: Vec<usize>,
}

impl RawMap {
    fn crossings(&self) -> usize {
        self.pair.len() / 4
    }

    fn face_count(&self) -> usize {
        let n = self.pair.len();
        let mut seen = vec![false; n];
        let mut faces = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut c = start;
            while !seen[c] {
                seen[c] = true;
                c = self.pair[rot(c)];
            }
        }
        faces
    }

    fn genus(&self) -> u32 {
        let c = self.crossings() as i64;
        ((2 + c - self.face_count() as i64) / 2) as u32
    }

    /// Relabeling that puts `root` at position 0 of crossing 0 and numbers
    /// the remaining crossings in breadth-first order. Returns the pairing
    /// code, or `None` as soon as it exceeds `bound`.
    fn code_from_root(
        &self,
        root: usize,
        bound: Option<&[usize]>,
    ) -> Option<(Vec<usize>, Rooting)> {
        let nc = self.crossings();
        let mut label = vec![NONE; nc];
        let mut offset = vec![0usize; nc];
        let mut order = Vec::with_capacity(nc);
        label[root / 4] = 0;
        offset[root / 4] = root % 4;
        order.push(root / 4);
        let mut code = Vec::with_capacity(self.pair.len());
        let mut tight = bound.is_some();
        let mut k = 0;
        while k < order.len() {
            let x = order[k];
            for q in 0..4 {
                let p = self.pair[4 * x + (offset[x] + q) % 4];
                let y = p / 4;
                if label[y] == NONE {
                    label[y] = order.len();
                    offset[y] = p % 4;
                    order.push(y);
                }
                let v = 4 * label[y] + (p % 4 + 4 - offset[y]) % 4;
                if tight {
                    let b = bound.unwrap()[code.len()];
                    if v > b {
                        return None;
                    }
                    if v < b {
                        tight = false;
                    }
                }
                code.push(v);
            }
            k += 1;
        }
        Some((code, Rooting { label, offset }))
    }

    /// Least code and every root attaining it.
    fn canonical(&self) -> (Vec<usize>, Vec<Rooting>) {
        let mut best: Option<Vec<usize>> = None;
        let mut roots = Vec::new();
        for r in 0..self.pair.len() {
            if let Some((code, rooting)) = self.code_from_root(r, best.as_deref()) {
                if best.as_ref() != Some(&code) {
                    roots.clear();
                    best = Some(code);
                }
                roots.push(rooting);
            }
        }
        (best.unwrap_or_default(), roots)
    }
}

#[derive(Clone, Debug)]
struct Rooting {
    label: Vec<usize>,
    offset: Vec<usize>,
}

impl Rooting {
    fn new_position(&self, raw: usize) -> usize {
        let x = raw / 4;
        4 * self.label[x] + (raw % 4 + 4 - self.offset[x]) % 4
    }

    /// Under parities after relabeling.
    fn marking(&self, unders: &[u8]) -> Vec<u8> {
        let mut out = vec![0; unders.len()];
        for (x, &u) in unders.iter().enumerate() {
            out[self.label[x]] = ((u as usize + 4 - self.offset[x]) % 2) as u8;
        }
        out
    }
}

fn rot(d: usize) -> usize {
    (d & !3) | ((d + 1) & 3)
}

/// Every connected rotation system with `n` crossings, up to relabeling,
/// in canonical-code order.
fn maps_with(n: usize, max_genus: u32) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    let mut pair = vec![NONE; 4 * n];
    grow(&mut pair, 1, n, max_genus, &mut out);
    out
}

fn grow(
    pair: &mut [usize],
    opened: usize,
    n: usize,
    max_genus: u32,
    out: &mut BTreeSet<Vec<usize>>,
) {
    let Some(d) = (0..4 * opened).find(|&d| pair[d] == NONE) else {
        if opened == n {
            let map = RawMap {
                pair: pair.to_vec(),
            };
            if map.genus() <= max_genus {
                out.insert(map.canonical().0);
            }
        }
        return;
    };
    for e in d + 1..4 * opened {
        if pair[e] == NONE {
            pair[d] = e;
            pair[e] = d;
            grow(pair, opened, n, max_genus, out);
            pair[d] = NONE;
            pair[e] = NONE;
        }
    }
    if opened < n {
        let e = 4 * opened;
        pair[d] = e;
        pair[e] = d;
        grow(pair, opened + 1, n, max_genus, out);
        pair[d] = NONE;
        pair[e] = NONE;
    }
}

fn diagram_from_code(code: &[usize], marking: &[u8]) -> Diagram {
    Diagram {
        crossings: marking
            .iter()
            .enumerate()
            .map(|(x, &u)| Crossing {
                darts: [4 * x, 4 * x + 1, 4 * x + 2, 4 * x + 3],
                under: u,
            })
            .collect(),
        pairing: (0..code.len())
            .filter(|&d| d < code[d])
            .map(|d| (d, code[d]))
            .collect(),
        ..Diagram::default()
    }
}

/// Visit every census diagram in deterministic order.
pub fn for_each_diagram(
    spec: &CensusSpec,
    mut visit: impl FnMut(CheckedDiagram),
) -> Result<(), GeneratorError> {
    check_caps(spec)?;
    if let Some(s) = spec.sampling {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        for _ in 0..s.samples {
            let c = rng.gen_range(1..=spec.max_crossings.max(1));
            let d = CheckedDiagram::new(sample(c, &mut rng)).expect("sampler emits valid maps");
            if spec.admits(&d) {
                visit(d);
            }
        }
        return Ok(());
    }
    for n in 1..=spec.max_crossings {
        for code in maps_with(n, spec.max_genus) {
            let map = RawMap { pair: code.clone() };
            if map.genus() < spec.min_genus {
                continue;
            }
            let (_, autos) = map.canonical();
            for bits in 0..1u32 << n {
                let marking: Vec<u8> = (0..n).map(|x| ((bits >> x) & 1) as u8).collect();
                if autos.iter().any(|r| r.marking(&marking) < marking) {
                    continue;
                }
                let d = CheckedDiagram::new(diagram_from_code(&code, &marking))
                    .expect("census maps are valid");
                if spec.admits(&d) {
                    visit(d);
                }
            }
        }
    }
    Ok(())
}

pub fn enumerate_diagrams(spec: &CensusSpec) -> Result<Vec<CheckedDiagram>, GeneratorError> {
    let mut out = Vec::new();
    for_each_diagram(spec, |d| out.push(d))?;
    Ok(out)
}

/// Canonical representative of `d` under relabelings that preserve the
/// rotation and the under-passage. Under indices are reduced to `0` or `1`.
/// Region decorations are carried along but do not influence the choice.
pub fn canonical_form(d: &CheckedDiagram) -> Diagram {
    let nc = d.crossing_count();
    if nc == 0 {
        return d.diagram().normalized();
    }
    let raw_of = |dart: Dart| 4 * d.crossing_of(dart) + d.position(dart) as usize;
    let mut pair = vec![0; 4 * nc];
    for dart in 0..d.dart_count() {
        pair[raw_of(dart)] = raw_of(d.partner(dart));
    }
    let unders: Vec<u8> = (0..nc).map(|x| d.crossing(x).under).collect();
    let map = RawMap { pair };
    let (code, autos) = map.canonical();
    let rooting = autos
        .iter()
        .min_by_key(|r| r.marking(&unders))
        .expect("a map has at least one root");
    let marking = rooting.marking(&unders);
    let perm: Vec<Dart> = (0..d.dart_count())
        .map(|dart| rooting.new_position(raw_of(dart)))
        .collect();
    let carried = d.diagram().relabeled(&perm);
    Diagram {
        components: carried.components,
        free_loops: carried.free_loops,
        region_genus: carried.region_genus,
        ..diagram_from_code(&code, &marking)
    }
}

fn sample(crossings: usize, rng: &mut ChaCha8Rng) -> Diagram {
    let n = 4 * crossings;
    loop {
        let mut darts: Vec<Dart> = (0..n).collect();
        darts.shuffle(rng);
        let d = Diagram {
            crossings: (0..crossings)
                .map(|x| Crossing {
                    darts: [4 * x, 4 * x + 1, 4 * x + 2, 4 * x + 3],
                    under: rng.gen_range(0..4),
                })
                .collect(),
            pairing: darts
                .chunks(2)
                .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
                .collect(),
            ..Diagram::default()
        }
        .normalized();
        if CheckedDiagram::new(d.clone()).is_ok() {
            return d;
        }
    }
}

/// A seeded random connected diagram; pairings that give disconnected maps
/// are rejected and redrawn.
pub fn random_diagram(crossings: usize, seed: u64) -> Diagram {
    assert!(crossings >= 1, "random diagrams need at least one crossing");
    sample(crossings, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Standard diagram of the `(2, n)` torus link as a chain of `n` crossings.
pub fn torus_2n(n: usize) -> Diagram {
    assert!(n >= 2);
    // darts 4i + (NE, NW, SW, SE)
    let mut pairing = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        pairing.push((4 * i, 4 * j + 1));
        pairing.push((4 * i + 3, 4 * j + 2));
    }
    Diagram {
        crossings: (0..n)
            .map(|i| Crossing {
                darts: [4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3],
                under: 1,
            })
            .collect(),
        pairing,
        ..Diagram::default()
    }
    .normalized()
}

/// Glue two diagrams along one edge each, keeping the result planar and
/// alternating when the summands allow it.
pub fn connected_sum(a: &Diagram, b: &Diagram) -> Option<Diagram> {
    let shift = a.dart_count();
    let moved: Vec<Dart> = (0..b.dart_count()).map(|d| d + shift).collect();
    let b = b.relabeled(&moved);
    let target_genus = |d: &Diagram| {
        CheckedDiagram::new(d.clone())
            .map(|c| c.cellular_genus())
            .unwrap_or(0)
    };
    let genus = target_genus(a) + target_genus(&b);
    for (i, &(a1, a2)) in a.pairing.iter().enumerate() {
        for (j, &(b1, b2)) in b.pairing.iter().enumerate() {
            for glue in [[(a1, b1), (a2, b2)], [(a1, b2), (a2, b1)]] {
                let mut pairing: Vec<(Dart, Dart)> = a
                    .pairing
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, &p)| p)
                    .collect();
                pairing.extend(
                    b.pairing
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &p)| p),
                );
                pairing.extend(glue);
                let mut crossings = a.crossings.clone();
                crossings.extend(b.crossings.iter().cloned());
                let sum = Diagram {
                    crossings,
                    pairing,
                    ..Diagram::default()
                }
                .normalized();
                let Ok(c) = CheckedDiagram::new(sum.clone()) else {
                    continue;
                };
                let alternating_in = |d: &Diagram| {
                    CheckedDiagram::new(d.clone())
                        .map(|c| is_alternating(&c).ok)
                        .unwrap_or(false)
                };
                if c.cellular_genus() == genus
                    && (is_alternating(&c).ok || !(alternating_in(a) && alternating_in(&b)))
                {
                    return Some(sum);
                }
            }
        }
    }
    None
}

/// Add a one-crossing curl on the edge through dart `at`.
pub fn add_kink(d: &Diagram, at: Dart) -> Diagram {
    let k = d.crossings.len();
    let base = 4 * k;
    let mut best = None;
    for under in [0u8, 1] {
        let mut out = d.clone();
        let i = out
            .pairing
            .iter()
            .position(|&(x, y)| x == at || y == at)
            .expect("dart is paired");
        let (x, y) = out.pairing[i];
        let other = if x == at { y } else { x };
        out.pairing.remove(i);
        out.pairing
            .extend([(at, base), (base + 1, base + 2), (other, base + 3)]);
        out.crossings.push(Crossing {
            darts: [base, base + 1, base + 2, base + 3],
            under,
        });
        let out = out.normalized();
        let alt = CheckedDiagram::new(out.clone())
            .map(|c| is_alternating(&c).ok)
            .unwrap_or(false);
        if alt || best.is_none() {
            best = Some(out);
            if alt {
                break;
            }
        }
    }
    best.unwrap()
}

pub fn trefoil() -> Diagram {
    from_pd(&[([4, 2, 5, 1], 3), ([3, 6, 4, 1], 0), ([5, 2, 6, 3], 0)]).expect("trefoil code")
}

pub fn figure_eight() -> Diagram {
    from_pd(&[
        ([4, 2, 5, 1], 0),
        ([8, 6, 1, 5], 0),
        ([6, 3, 7, 4], 0),
        ([2, 7, 3, 8], 0),
    ])
    .expect("figure-eight code")
}

pub fn one_crossing_torus() -> Diagram {
    Diagram {
        crossings: vec![Crossing {
            darts: [0, 1, 2, 3],
            under: 0,
        }],
        pairing: vec![(0, 2), (1, 3)],
        ..Diagram::default()
    }
}

/// Alternating 2×2 grid on the torus.
pub fn weave() -> Diagram {
    // darts 4k + (E, N, W, S) at cell k = i + 2j
    let cell = |i: usize, j: usize| (i % 2) + 2 * (j % 2);
    let mut crossings = vec![
        Crossing {
            darts: [0; 4],
            under: 0
        };
        4
    ];
    let mut pairing = Vec::new();
    for j in 0..2 {
        for i in 0..2 {
            let k = cell(i, j);
            crossings[k] = Crossing {
                darts: [4 * k, 4 * k + 1, 4 * k + 2, 4 * k + 3],
                under: if (i + j) % 2 == 0 { 1 } else { 0 },
            };
            pairing.push((4 * k, 4 * cell(i + 1, j) + 2));
            pairing.push((4 * k + 1, 4 * cell(i, j + 1) + 3));
        }
    }
    Diagram {
        crossings,
        pairing,
        ..Diagram::default()
    }
    .normalized()
}

pub fn unknot() -> Diagram {
    Diagram {
        free_loops: vec![FreeLoop {
            label: "0".into(),
            region: 0,
        }],
        ..Diagram::default()
    }
}

/// Two unlinked circles with no crossings.
pub fn split_unlink() -> Diagram {
    Diagram {
        free_loops: vec![
            FreeLoop {
                label: "a".into(),
                region: 0,
            },
            FreeLoop {
                label: "b".into(),
                region: 0,
            },
        ],
        ..Diagram::default()
    }
}

pub fn fixtures() -> BTreeMap<String, Diagram> {
    let mut out = BTreeMap::new();
    out.insert("trefoil".to_string(), trefoil());
    out.insert("figure-eight".to_string(), figure_eight());
    for n in [2, 3, 5, 7] {
        out.insert(format!("(2,{n})"), torus_2n(n));
    }
    out.insert("one-crossing-torus".to_string(), one_crossing_torus());
    out.insert("weave".to_string(), weave());
    out.insert(
        "granny".to_string(),
        connected_sum(&trefoil(), &trefoil()).expect("trefoils can be summed"),
    );
    out.insert("kinked-trefoil".to_string(), add_kink(&trefoil(), 0));
    out.insert("unknot".to_string(), unknot());
    out.insert("split".to_string(), split_unlink());
    out
}
