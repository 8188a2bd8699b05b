//! Constructive decompositions of k-outerplanar graphs.
//!
//! The crate covers stripping layers, remember numbers of spanning trees,
//! three tree-decomposition constructions, block and Tutte decompositions,
//! the full gluing construction for connected k-outerplanar graphs, and a
//! brute-force monadic second-order logic evaluator used as an oracle.

pub mod assemble;
pub mod corpus;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod minor;
pub mod msol;
pub mod planarity;
pub mod remember;
pub mod treedec;
pub mod tutte;

pub use error::{Error, Result};
pub use graph::{
    build_graph, enumerate_cuts, fundamental_cycle, induced_subgraph, is_l_connected, root_orient, spanning_forest,
    tree_path, Cut, Edge, Graph, SpanningForest, Vertex,
};
pub use planarity::{embed, stripping_layers, Face, LayerPartition, PlanarEmbedding};
pub use remember::{edge_remember, face_remember, vertex_remember, RememberReport};
pub use treedec::{validate, BagKind, TreeDecomposition, ValidationReport};
pub use tutte::{block_decomposition, tutte_decomposition, BlockDecomposition, TutteDecomposition};
