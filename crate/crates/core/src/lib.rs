//! Bundlings of pseudosegment arrangements through rectangulations of the
//! dual net.
//!
//! The pipeline runs [`arrangement`] (parse, planarize, ground), [`net`]
//! (dual net and classifications), [`rectangulation`] (cut-sets, greedy,
//! extraction, bundling), and [`bipartite`] (gain-graph seeding for two-colored
//! inputs). [`oracle`] holds the exhaustive solvers used for verification.

pub mod arrangement;
pub mod bipartite;
pub mod error;
pub mod generate;
pub mod harness;
pub mod map;
pub mod net;
pub mod oracle;
pub mod rectangulation;
pub mod render;

pub use arrangement::{
    build_planarization, ground, Arrangement, Color, GroundedArrangement, Planarization,
};
pub use bipartite::{bipartite_pipeline, BipartiteResult, GainGraph};
pub use error::{Error, Result};
pub use map::HalfEdgeMap;
pub use net::{build_net, net_of, DualNet, FaceKind, VertexClass};
pub use rectangulation::{
    extract_rectangulation, greedy_rectangulate, is_saturating, saturates, to_bundling, Bundling,
    CutSet, Rectangulation, Segment, VertexOrder,
};
