//! WebAssembly bindings for the browser demo. Every entry point returns a
//! JSON document describing one full solve, its divide-and-conquer split and
//! the recombined result.

use dcopt::binpacking::{bpp_dc, bpp_split, Packing, PackingAlg};
use dcopt::dc::timed;
use dcopt::instgen::{gen_bpp, gen_dkp, gen_tsp_with_layout, GenProblem, GenSpec};
use dcopt::knapsack::{dkp_dc, dkp_efficiency, dkp_split, DkpOracle};
use dcopt::stats::{perf_dkp, perf_min};
use dcopt::tsp::{tsp_merge_detailed, tsp_split, Tour, TspOracle, EXACT_LIMIT};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest TSP size solved exactly in the demo; bigger ones use the heuristic.
pub const DEMO_EXACT_LIMIT: usize = 12;

#[derive(Serialize)]
pub struct TspDemo {
    pub points: Vec<(f64, f64)>,
    pub oracle: &'static str,
    pub full: Vec<usize>,
    pub z_full: f64,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub left_tour: Vec<usize>,
    pub right_tour: Vec<usize>,
    pub removed: [(usize, usize); 2],
    pub inserted: [(usize, usize); 2],
    pub merged: Vec<usize>,
    pub z_dc: f64,
    pub s_f: f64,
    pub t_f: f64,
}

pub fn tsp_report(case: &str, n: usize, seed: u64) -> Result<TspDemo, String> {
    let problem = match case {
        "ms" => GenProblem::TspMs,
        "ma" => GenProblem::TspMa,
        "nms" => GenProblem::TspNms,
        _ => return Err(format!("unknown case {case:?}")),
    };
    let (inst, points) =
        gen_tsp_with_layout(&GenSpec::tsp(problem, n, seed)).map_err(|e| e.to_string())?;
    let oracle = if n <= DEMO_EXACT_LIMIT.min(EXACT_LIMIT) {
        TspOracle::Exact
    } else {
        TspOracle::Heuristic
    };
    let full = timed(|i| oracle.solve(i), &inst);
    let full_tour = full.solution.map_err(|e| e.to_string())?;
    let pair = tsp_split(&inst).map_err(|e| e.to_string())?;
    let solve_child = |child, map: &[usize]| -> Result<(Tour, f64), String> {
        let t = timed(|i| oracle.solve(i), child);
        let tour = t.solution.map_err(|e| e.to_string())?;
        let order = tour.order.iter().map(|&k| map[k]).collect();
        Ok((
            Tour {
                order,
                cost: tour.cost,
            },
            t.wall_time,
        ))
    };
    let (l, tl) = solve_child(&pair.left, &pair.left_map)?;
    let (r, tr) = solve_child(&pair.right, &pair.right_map)?;
    let (merged, arcs) = tsp_merge_detailed(&l, &r, &inst).map_err(|e| e.to_string())?;
    let perf = perf_min(
        full_tour.cost,
        merged.cost,
        (tl + tr).max(1e-9),
        full.wall_time.max(1e-9),
    )
    .map_err(|e| e.to_string())?;
    Ok(TspDemo {
        points,
        oracle: if oracle == TspOracle::Exact {
            "exact"
        } else {
            "heuristic"
        },
        full: full_tour.order,
        z_full: full_tour.cost,
        left: pair.left_map,
        right: pair.right_map,
        left_tour: l.order,
        right_tour: r.order,
        removed: [arcs.removed_left, arcs.removed_right],
        inserted: arcs.inserted,
        merged: merged.order,
        z_dc: merged.cost,
        s_f: perf.s_f,
        t_f: perf.t_f,
    })
}

#[derive(Serialize)]
pub struct BppDemo {
    pub weights: Vec<f64>,
    /// Item indices per bin.
    pub full: Vec<Vec<usize>>,
    pub dc: Vec<Vec<usize>>,
    /// Bins of the combined packing that came from the left half.
    pub dc_left_bins: usize,
    pub volume_bound: usize,
    pub s_f: f64,
    pub t_f: f64,
}

pub fn bpp_report(alg: &str, n: usize, seed: u64) -> Result<BppDemo, String> {
    let alg: PackingAlg = alg.parse().map_err(|e: dcopt::Error| e.to_string())?;
    let inst = gen_bpp(&GenSpec::bpp(n, seed)).map_err(|e| e.to_string())?;
    let full = timed(|i| alg.pack(i), &inst);
    let dc = bpp_dc(&inst, alg, 1).map_err(|e| e.to_string())?;
    let pair = bpp_split(&inst).map_err(|e| e.to_string())?;
    let left_bins = alg.pack(&pair.left).bin_count;
    let perf = perf_min(
        full.solution.bin_count as f64,
        dc.z_dc,
        dc.t_dc.max(1e-9),
        full.wall_time.max(1e-9),
    )
    .map_err(|e| e.to_string())?;
    let bins = |p: &Packing| p.bins();
    Ok(BppDemo {
        weights: inst.weights().to_vec(),
        full: bins(&full.solution),
        dc: bins(&dc.combined),
        dc_left_bins: left_bins,
        volume_bound: inst.volume_bound(),
        s_f: perf.s_f,
        t_f: perf.t_f,
    })
}

#[derive(Serialize)]
pub struct DkpDemo {
    pub capacities: Vec<u64>,
    pub profits: Vec<u64>,
    pub weights: Vec<Vec<u64>>,
    pub efficiency: Vec<f64>,
    pub order: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub left_capacities: Vec<u64>,
    pub right_capacities: Vec<u64>,
    pub full: Vec<usize>,
    pub dc: Vec<usize>,
    pub z_full: u64,
    pub z_dc: f64,
    pub s_f: f64,
    pub t_f: f64,
}

pub fn dkp_report(n: usize, d: usize, tightness: f64, seed: u64) -> Result<DkpDemo, String> {
    let inst = gen_dkp(&GenSpec::dkp(n, d, tightness, seed)).map_err(|e| e.to_string())?;
    let oracle = DkpOracle::Exact;
    let full = timed(|i| oracle.solve(i), &inst);
    let dc = dkp_dc(&inst, oracle, 1).map_err(|e| e.to_string())?;
    let pair = dkp_split(&inst).map_err(|e| e.to_string())?;
    let eff = dkp_efficiency(&inst);
    let perf = perf_dkp(
        dc.z_dc,
        full.solution.value as f64,
        dc.t_dc.max(1e-9),
        full.wall_time.max(1e-9),
    )
    .map_err(|e| e.to_string())?;
    Ok(DkpDemo {
        capacities: inst.capacities().to_vec(),
        profits: inst.profits().to_vec(),
        weights: inst.weights().to_vec(),
        efficiency: eff.coefficients,
        order: eff.order,
        left_capacities: pair.left.capacities().to_vec(),
        right_capacities: pair.right.capacities().to_vec(),
        left: pair.left_map,
        right: pair.right_map,
        full: full.solution.chosen_items(),
        dc: dc.combined.chosen_items(),
        z_full: full.solution.value,
        z_dc: dc.z_dc,
        s_f: perf.s_f,
        t_f: perf.t_f,
    })
}

fn to_json<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

/// Split a random TSP instance, solve both halves and merge the tours.
#[wasm_bindgen]
pub fn tsp_demo(case: &str, n: u32, seed: u32) -> Result<String, JsError> {
    to_json(tsp_report(case, n as usize, seed.into()))
}

/// Pack random weights whole and by halves with `nfd`, `ffd` or `bfd`.
#[wasm_bindgen]
pub fn bpp_demo(alg: &str, n: u32, seed: u32) -> Result<String, JsError> {
    to_json(bpp_report(alg, n as usize, seed.into()))
}

/// Split a random knapsack instance by efficiency and solve both halves
/// exactly.
#[wasm_bindgen]
pub fn dkp_demo(n: u32, d: u32, tightness: f64, seed: u32) -> Result<String, JsError> {
    to_json(dkp_report(n as usize, d as usize, tightness, seed.into()))
}
