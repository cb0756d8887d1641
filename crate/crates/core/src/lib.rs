//! Grid-free sea route planning.
//!
//! The engine plans collision-safe vessel routes over a bathymetric raster
//! in two stages: a sampling-based constructor grows single routes point by
//! point, and an island-model genetic algorithm evolves populations of those
//! routes towards the earliest safe arrival at the destination.

pub mod depthmap;
pub mod ga;
pub mod geometry;
pub mod islands;
pub mod planner;
pub mod route;
