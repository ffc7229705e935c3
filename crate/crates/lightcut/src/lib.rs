//! Light-cone and bipolar ZY variational ansätze for MaxCut.
//!
//! The crate builds acyclic orientations of arbitrary graphs (BFS light
//! cones and st-numbering-based bipolar orientations), turns them into
//! shallow ZY-rotation circuits, simulates those circuits exactly or via
//! truncated Pauli backpropagation, evaluates the family's closed-form
//! performance guarantees, and benchmarks multi-start optimization
//! time-to-solution against a brute-force oracle.
//!
//! Modules:
//! * [`graph`] — undirected graphs, parsing, random regular ensembles,
//!   biconnected decomposition, simple-cycle counting;
//! * [`orient`] — acyclic orientations: BFS light cone, DFS and BFS bipolar
//!   (single source s, single sink t), degree statistics;
//! * [`ansatz`] — circuit construction for bipolar-ZY_p, QAOA, and R_Y
//!   layers with uniform / degree-class / per-gate parameter schemes;
//! * [`sim`] — statevector and Pauli-path backends, sampling, entropy,
//!   variance estimates;
//! * [`analysis`] — closed-form k-local expectations and the numeric
//!   min-max performance-guarantee bounds;
//! * [`optimize`] — Nelder–Mead / BFGS loops, CVaR, multi-start
//!   time-to-solution, exponential scaling fits;
//! * [`oracle`] — brute-force MaxCut, cut evaluation, greedy bit-flip
//!   post-processing.

pub mod analysis;
pub mod ansatz;
pub mod error;
pub mod exec;
pub mod graph;
pub mod optimize;
pub mod oracle;
pub mod orient;
pub mod sim;

pub use error::{Error, Result};
