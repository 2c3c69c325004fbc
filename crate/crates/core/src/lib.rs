//! Four-edge-colourings of bridgeless cubic graphs with few medium edges.
//!
//! An edge is *poor* when its four neighbouring edges carry two colours, *rich*
//! when they carry four and *medium* otherwise. [`colouring::colour_graph`]
//! produces, for every connected bridgeless cubic multigraph on `n` vertices,
//! a proper 4-edge-colouring with at most `4n/5` medium edges, with equality
//! only for the Petersen graph. [`discharge`] replays the charge-counting
//! argument behind that bound on each concrete instance, and [`oracle`]
//! computes exact optima by exhaustive search for comparison.

pub mod colouring;
pub mod corpus;
pub mod discharge;
pub mod error;
pub mod factor;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod petersen;
pub mod reduce;
pub mod report;
pub mod selection;

pub use error::{Error, Result};
pub use graph::{EdgeId, MultiGraph, Vertex};
