//! Independent oracles. They read only the raw crossing lists and pairings
//! and rebuild everything else with their own half-edge structures.
#![allow(dead_code)]

pub mod facewidth;
pub mod linking;
pub mod map;
pub mod twocut;

use gadc_core::generator::{for_each_diagram, CensusSpec};
use gadc_core::CheckedDiagram;

/// Every census diagram with at most `crossings` crossings and genus at most
/// `genus`.
pub fn census(crossings: usize, genus: u32) -> Vec<CheckedDiagram> {
    let mut out = Vec::new();
    for_each_diagram(&CensusSpec::new(crossings, genus), |d| out.push(d)).unwrap();
    out
}
