//! Alternating link diagrams on closed orientable surfaces.
//!
//! Diagrams are decorated combinatorial maps ([`diagram`]). On top of them the
//! crate decides the reduced / prime / alternating hypotheses, builds the
//! checkerboard spanning surfaces with their invariants, measures the
//! face-width of the embedding, and assembles certificates whose conclusions
//! are only issued when every hypothesis holds.

pub mod certify;
pub mod coloring;
pub mod diagram;
pub mod facewidth;
pub mod generator;
pub mod primality;
pub mod report;
mod unionfind;

pub use certify::{certify, certify_knot, certify_link, Certificate, CertifyError};
pub use coloring::{
    boundary_slope, build_spanning_surface, checkerboard_coloring, crossing_types,
    induced_crossing_signs, neighborhood_boundary, select_n, Color, Coloring, NeighborhoodBoundary,
    SpanningSurface,
};
pub use diagram::{
    components, is_alternating, is_reduced, parse_diagram, surface_genus, trace_regions,
    validate_map, CheckedDiagram, Crossing, Dart, Diagram, FreeLoop, ParseError, RegionWalk, Side,
    ValidationReport,
};
pub use facewidth::{face_width, FaceWidth};
pub use generator::{
    canonical_form, enumerate_diagrams, fixtures, random_diagram, CensusSpec, Filter,
};
pub use primality::{enumerate_two_cuts, is_prime, CutClass, TwoCut};
pub use report::{analyze, Analysis, Hypotheses};
