//! Divide-and-conquer heuristics for integer optimisation.
//!
//! An instance is ranked by a greedy efficiency coefficient, its items (or
//! vertices) are dealt alternately into two subinstances, each subinstance is
//! solved by an oracle, and the two solutions are reassembled into a
//! solution of the original. Three problems are covered:
//!
//! * [`knapsack`]: multidimensional 0-1 knapsack, with an exact
//!   branch-and-bound oracle and a greedy one;
//! * [`binpacking`]: bin packing with next/first/best fit decreasing;
//! * [`tsp`]: travelling salesman with Held-Karp and a nearest-neighbour +
//!   2-opt oracle, child tours joined by a greedy cycle merge.
//!
//! [`harness`] runs Monte-Carlo experiments measuring how much solution
//! quality and solve time the split costs or saves.

pub mod binpacking;
pub mod dc;
pub mod error;
pub mod format;
pub mod harness;
pub mod instgen;
pub mod knapsack;
pub mod stats;
pub mod tsp;

pub use dc::{dc_solve, timed, DcResult, Decomposable, SplitPair, TimedSolve};
pub use error::{Error, Result};
pub use instgen::{GenProblem, GenSpec, Instance};
