//! Deciding whether the Pythagorean triples with entries at most `N` can be
//! 2-coloured with no monochromatic triple.
//!
//! The crate is organised as a pipeline:
//!
//! * [`triples`] enumerates Pythagorean triples (Dickson's parameterisation).
//! * [`hypergraph`] turns them into a 3-uniform hypergraph, removes pendant
//!   edges and runs BFS over the triple intersection graph.
//! * [`cnf`] encodes 2-colourability as CNF, emits/parses DIMACS and splits
//!   a formula into `2^m` cubes.
//! * [`solver`] is an embedded CDCL solver plus an adapter for external
//!   DIMACS solvers.
//! * [`split`] chooses the cube variables and gauges their independence.
//! * [`orchestrate`] runs cubes on a bounded worker pool with first-SAT
//!   cancellation, in-process or through a file-polling job queue.
//! * [`verify`] and [`render`] check and draw the final colouring.
//! * [`structure`] checks sum properties, bicycles and Steiner subsystems
//!   on concrete triple systems; [`designs`] has the small fixtures.
//!
//! Every capability has a runnable program under `examples/`.

pub mod cli;
pub mod cnf;
pub mod coloring;
pub mod designs;
mod error;
pub mod hypergraph;
pub mod orchestrate;
pub mod render;
pub mod solver;
pub mod split;
pub mod structure;
pub mod triples;
pub mod verify;

pub use coloring::Coloring;
pub use error::{Error, Result};
pub use hypergraph::{Edge, TripleSystem};
pub use triples::{Triple, UpperBound};

/// A vertex of a triple system: a positive integer.
pub type Vertex = u32;
