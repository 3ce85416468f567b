//! Full analysis report of a diagram.

use serde::Serialize;

use crate::coloring::{
    boundary_slope, build_spanning_surface, checkerboard_coloring, crossing_types,
    induced_crossing_signs, neighborhood_boundary, Color, ColoringError, NeighborhoodBoundary,
    OddCycle, SpanningSurface,
};
use crate::diagram::{
    is_alternating, is_reduced, surface_genus, Alternation, CheckedDiagram, Dart, Diagram,
    Reducedness,
};
use crate::facewidth::{face_width, FaceWidth};
use crate::primality::{is_prime, Primality};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub alternating: Alternation,
    pub reduced: Reducedness,
    pub prime: Primality,
}

impl Hypotheses {
    pub fn evaluate(d: &CheckedDiagram) -> Hypotheses {
        Hypotheses {
            alternating: is_alternating(d),
            reduced: is_reduced(d),
            prime: is_prime(d),
        }
    }

    pub fn all_hold(&self) -> bool {
        self.alternating.ok && self.reduced.ok && self.prime.ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub label: String,
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionSummary {
    pub index: usize,
    pub corners: Vec<Dart>,
    pub genus: u32,
    pub free_loops: Vec<usize>,
    pub disk: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringSummary {
    pub ok: bool,
    pub black: Vec<usize>,
    pub white: Vec<usize>,
    pub odd_cycle: Option<OddCycle>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceSummary {
    #[serde(flatten)]
    pub surface: SpanningSurface,
    pub neighborhood: Option<NeighborhoodBoundary>,
    /// Crossing signs induced by orienting the surface.
    pub crossing_signs: Option<Vec<i8>>,
    /// Linking number of the knot with its pushoff into the surface.
    pub boundary_slope: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisData {
    pub crossings: usize,
    pub genus: u32,
    pub components: Vec<ComponentSummary>,
    pub regions: Vec<RegionSummary>,
    pub coloring: ColoringSummary,
    pub crossing_types: Option<Vec<Color>>,
    pub surfaces: Vec<SurfaceSummary>,
    /// `None` when some region is not a disk.
    pub face_width: Option<FaceWidth>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub input: Diagram,
    pub hypotheses: Hypotheses,
    #[serde(flatten)]
    pub data: AnalysisData,
}

pub fn analyze_data(d: &CheckedDiagram) -> AnalysisData {
    let components = d
        .components()
        .iter()
        .map(|c| ComponentSummary {
            label: c.label.clone(),
            edges: c.edge_count(),
        })
        .collect();
    let regions = d
        .regions()
        .iter()
        .map(|r| RegionSummary {
            index: r.index,
            corners: r.corners.clone(),
            genus: r.genus,
            free_loops: r.free_loops.clone(),
            disk: r.is_disk(),
        })
        .collect();
    let genus = surface_genus(d).unwrap_or_else(|_| d.cellular_genus());

    let (coloring, summary) = match checkerboard_coloring(d) {
        Ok(c) => {
            let s = ColoringSummary {
                ok: true,
                black: c.class(Color::Black),
                white: c.class(Color::White),
                odd_cycle: None,
            };
            (Some(c), s)
        }
        Err(ColoringError::NotBipartite(w)) => (
            None,
            ColoringSummary {
                ok: false,
                black: Vec::new(),
                white: Vec::new(),
                odd_cycle: Some(w),
            },
        ),
        Err(ColoringError::Inconsistent) => unreachable!("coloring never reports inconsistency"),
    };

    let mut types = None;
    let mut surfaces = Vec::new();
    if let Some(c) = &coloring {
        types = crossing_types(d, c).ok();
        for color in [Color::Black, Color::White] {
            let s = build_spanning_surface(d, c, color);
            let crossing_signs = s
                .orientation()
                .and_then(|o| induced_crossing_signs(d, &s, o).ok());
            surfaces.push(SurfaceSummary {
                neighborhood: neighborhood_boundary(&s).ok(),
                crossing_signs,
                boundary_slope: boundary_slope(d, c, &s).ok(),
                surface: s,
            });
        }
    }

    AnalysisData {
        crossings: d.crossing_count(),
        genus,
        components,
        regions,
        coloring: summary,
        crossing_types: types,
        surfaces,
        face_width: face_width(d).ok(),
    }
}

pub fn analyze(d: &CheckedDiagram) -> Analysis {
    Analysis {
        input: d.diagram().clone(),
        hypotheses: Hypotheses::evaluate(d),
        data: analyze_data(d),
    }
}
