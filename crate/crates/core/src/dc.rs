//! Problem-agnostic divide-and-conquer orchestration.
//!
//! An instance is split along a greedy ranking into two halves, each half is
//! handed to an oracle (or split again while depth remains), and the two
//! child solutions are recombined into a solution for the parent. Child
//! solve times are measured individually and summed; split and recombine
//! costs are not part of the reported time.

use crate::error::{Error, Result};

#[cfg(not(target_arch = "wasm32"))]
use std::time::Instant;
#[cfg(target_arch = "wasm32")]
use web_time::Instant;

/// Two subinstances and the parent indices their items/vertices came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPair<I> {
    pub left: I,
    pub right: I,
    pub left_map: Vec<usize>,
    pub right_map: Vec<usize>,
    /// Set when a child violates the standing hypothesis of its problem
    /// (e.g. a knapsack item heavier than the child capacity). Such children
    /// are still legal oracle inputs.
    pub flagged: bool,
}

/// Deal a ranked sequence of parent indices alternately: sorted positions
/// 1, 3, 5, ... go left, 2, 4, 6, ... go right.
pub fn alternate(order: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let left = order.iter().step_by(2).copied().collect();
    let right = order.iter().skip(1).step_by(2).copied().collect();
    (left, right)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimedSolve<S> {
    pub solution: S,
    /// Seconds.
    pub wall_time: f64,
}

/// Run `f` on `instance` and measure the wall-clock time of that call only.
pub fn timed<I: ?Sized, S, F>(f: F, instance: &I) -> TimedSolve<S>
where
    F: FnOnce(&I) -> S,
{
    let start = Instant::now();
    let solution = f(instance);
    let wall_time = start.elapsed().as_secs_f64();
    TimedSolve {
        solution,
        wall_time,
    }
}

/// Outcome of a divide-and-conquer solve. `t_dc == t_left + t_right`.
#[derive(Debug, Clone, PartialEq)]
pub struct DcResult<S> {
    pub combined: S,
    pub z_dc: f64,
    pub t_dc: f64,
    pub t_left: f64,
    pub t_right: f64,
}

/// A problem the divide-and-conquer engine can split and reassemble.
pub trait Decomposable: Sized {
    type Solution;

    /// Smallest instance size `split` accepts.
    fn min_split_size() -> usize;

    /// Number of items or vertices.
    fn size(&self) -> usize;

    fn split(&self) -> Result<SplitPair<Self>>;

    /// Assemble a parent solution from child solutions expressed in child
    /// indices.
    fn recombine(
        &self,
        pair: &SplitPair<Self>,
        left: Self::Solution,
        right: Self::Solution,
    ) -> Result<Self::Solution>;

    fn objective(solution: &Self::Solution) -> f64;
}

/// Split `instance` `depth` levels deep, solve the leaves with `oracle` and
/// recombine. Nodes that are too small to split further are solved as leaves.
pub fn dc_solve<I, F>(instance: &I, oracle: &F, depth: usize) -> Result<DcResult<I::Solution>>
where
    I: Decomposable,
    F: Fn(&I) -> Result<I::Solution>,
{
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    if instance.size() < I::min_split_size() {
        return Err(Error::TooSmallToSplit {
            size: instance.size(),
            min: I::min_split_size(),
        });
    }
    let pair = instance.split()?;
    let (left, t_left) = solve_node(&pair.left, oracle, depth - 1).map_err(|e| e.in_child('L'))?;
    let (right, t_right) =
        solve_node(&pair.right, oracle, depth - 1).map_err(|e| e.in_child('R'))?;
    let combined = instance.recombine(&pair, left, right)?;
    Ok(DcResult {
        z_dc: I::objective(&combined),
        combined,
        t_dc: t_left + t_right,
        t_left,
        t_right,
    })
}

fn solve_node<I, F>(instance: &I, oracle: &F, depth: usize) -> Result<(I::Solution, f64)>
where
    I: Decomposable,
    F: Fn(&I) -> Result<I::Solution>,
{
    if depth == 0 || instance.size() < I::min_split_size() {
        let run = timed(oracle, instance);
        return Ok((run.solution?, run.wall_time));
    }
    let res = dc_solve(instance, oracle, depth)?;
    Ok((res.combined, res.t_dc))
}
