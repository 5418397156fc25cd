//! Routing over historical GPS trajectories, with a road network as fallback.
//!
//! Points from both sources are bucketed into a uniform grid. A best-first
//! search moves along trajectories and road segments and switches between
//! them wherever two items share a grid cell.

pub mod cli;
pub mod cost;
pub mod eval;
pub mod geo;
pub mod geojson;
pub mod index;
pub mod ingest;
pub mod search;
pub mod synth;
