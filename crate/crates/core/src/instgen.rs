//! Seeded random instance generators.
//!
//! Every generator draws from a ChaCha8 stream seeded with a 64-bit seed.
//! Trial `i` of an experiment uses `base_seed ^ (i * 0x9E3779B97F4A7C15)`
//! (see [`trial_seed`]), so tables are reproducible from the base seed alone.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binpacking::BppInstance;
use crate::error::{Error, Result};
use crate::knapsack::{dkp_tightness, DkpInstance};
use crate::tsp::TspInstance;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Acceptable distance between generated and requested tightness.
pub const TIGHTNESS_TOLERANCE: f64 = 0.02;
/// Regeneration attempts before a knapsack spec is declared pathological.
pub const DKP_MAX_ATTEMPTS: u32 = 100;

pub fn trial_seed(base_seed: u64, trial: u64) -> u64 {
    base_seed ^ trial.wrapping_mul(GOLDEN_GAMMA)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenProblem {
    Dkp,
    Bpp,
    TspMs,
    TspMa,
    TspNms,
}

impl GenProblem {
    pub fn name(self) -> &'static str {
        match self {
            GenProblem::Dkp => "dkp",
            GenProblem::Bpp => "bpp",
            GenProblem::TspMs => "tsp-ms",
            GenProblem::TspMa => "tsp-ma",
            GenProblem::TspNms => "tsp-nms",
        }
    }
}

impl std::str::FromStr for GenProblem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "dkp" => GenProblem::Dkp,
            "bpp" => GenProblem::Bpp,
            "tsp-ms" => GenProblem::TspMs,
            "tsp-ma" => GenProblem::TspMa,
            "tsp-nms" => GenProblem::TspNms,
            _ => return Err(Error::InvalidArgument(format!("unknown problem {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub problem: GenProblem,
    pub n: usize,
    /// Number of knapsack constraints.
    pub d: usize,
    /// Target knapsack tightness, in (0, 1).
    pub tightness: f64,
    pub seed: u64,
}

impl GenSpec {
    pub fn dkp(n: usize, d: usize, tightness: f64, seed: u64) -> Self {
        Self {
            problem: GenProblem::Dkp,
            n,
            d,
            tightness,
            seed,
        }
    }

    pub fn bpp(n: usize, seed: u64) -> Self {
        Self {
            problem: GenProblem::Bpp,
            n,
            d: 0,
            tightness: 0.0,
            seed,
        }
    }

    pub fn tsp(problem: GenProblem, n: usize, seed: u64) -> Self {
        Self {
            problem,
            n,
            d: 0,
            tightness: 0.0,
            seed,
        }
    }
}

/// Any of the three instance kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Dkp(DkpInstance),
    Bpp(BppInstance),
    Tsp(TspInstance),
}

pub fn generate(spec: &GenSpec) -> Result<Instance> {
    Ok(match spec.problem {
        GenProblem::Dkp => Instance::Dkp(gen_dkp(spec)?),
        GenProblem::Bpp => Instance::Bpp(gen_bpp(spec)?),
        _ => Instance::Tsp(gen_tsp(spec)?),
    })
}

/// Profits uniform on `[1, N*D]`; for each constraint a raw capacity uniform
/// on `[1, N*D]` and weights uniform on `[1, raw]`. The capacity is then
/// recalibrated to `max(max_j w, round(t * sum_j w))` so the tightness lands
/// near the target; draws missing the target by more than
/// [`TIGHTNESS_TOLERANCE`] or leaving a constraint slack are redrawn.
pub fn gen_dkp(spec: &GenSpec) -> Result<DkpInstance> {
    if spec.n < 2 || spec.d < 1 {
        return Err(Error::InvalidArgument(format!(
            "d-KP generation needs n >= 2 and d >= 1 (got n = {}, d = {})",
            spec.n, spec.d
        )));
    }
    let t = spec.tightness;
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "tightness {t} outside (0, 1)"
        )));
    }
    let top = (spec.n * spec.d) as u64;
    for attempt in 0..DKP_MAX_ATTEMPTS {
        let mut rng = rng(trial_seed(spec.seed, attempt as u64));
        let profits: Vec<u64> = (0..spec.n).map(|_| rng.gen_range(1..=top)).collect();
        let mut weights = Vec::with_capacity(spec.d);
        let mut capacities = Vec::with_capacity(spec.d);
        for _ in 0..spec.d {
            let raw = rng.gen_range(1..=top);
            let row: Vec<u64> = (0..spec.n).map(|_| rng.gen_range(1..=raw)).collect();
            let total: u64 = row.iter().sum();
            let heaviest = *row.iter().max().expect("n >= 2");
            capacities.push(heaviest.max((t * total as f64).round() as u64));
            weights.push(row);
        }
        let Ok(inst) = DkpInstance::new(capacities, profits, weights) else {
            continue;
        };
        if dkp_tightness(&inst)
            .iter()
            .all(|ti| (ti - t).abs() <= TIGHTNESS_TOLERANCE)
        {
            return Ok(inst);
        }
    }
    Err(Error::RetriesExhausted {
        attempts: DKP_MAX_ATTEMPTS,
        reason: format!(
            "no d-KP instance with n = {}, d = {} reached tightness {t} +/- {TIGHTNESS_TOLERANCE}",
            spec.n, spec.d
        ),
    })
}

/// Weights i.i.d. uniform on (0, 1).
pub fn gen_bpp(spec: &GenSpec) -> Result<BppInstance> {
    if spec.n < 1 {
        return Err(Error::InvalidArgument("bin packing needs n >= 1".into()));
    }
    let mut rng = rng(spec.seed);
    let weights = (0..spec.n)
        .map(|_| loop {
            let w: f64 = rng.gen();
            if w > 0.0 {
                break w;
            }
        })
        .collect();
    BppInstance::new(weights)
}

pub fn gen_tsp(spec: &GenSpec) -> Result<TspInstance> {
    gen_tsp_with_layout(spec).map(|(inst, _)| inst)
}

/// Generate a TSP instance together with planar positions for drawing it:
/// the sampled points for MS, points on the unit circle for MA, and evenly
/// spaced circle positions for NMS (which has no geometry).
pub fn gen_tsp_with_layout(spec: &GenSpec) -> Result<(TspInstance, Vec<(f64, f64)>)> {
    let n = spec.n;
    if n < 6 {
        return Err(Error::InvalidArgument(format!(
            "TSP generation needs n >= 6, got {n}"
        )));
    }
    let mut rng = rng(spec.seed);
    let mut dist = vec![0.0; n * n];
    match spec.problem {
        GenProblem::TspMs => {
            let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
            for u in 0..n {
                for v in u + 1..n {
                    let d = (pts[u].0 - pts[v].0).hypot(pts[u].1 - pts[v].1);
                    dist[u * n + v] = d;
                    dist[v * n + u] = d;
                }
            }
            Ok((TspInstance::new(n, dist, true, true)?, pts))
        }
        GenProblem::TspMa => {
            let theta: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
            for u in 0..n {
                for v in 0..n {
                    if u != v {
                        dist[u * n + v] = clockwise_arc(theta[u], theta[v]);
                    }
                }
            }
            let pts = theta.iter().map(|t| (t.cos(), t.sin())).collect();
            Ok((TspInstance::new(n, dist, false, true)?, pts))
        }
        GenProblem::TspNms => {
            for u in 0..n {
                for v in u + 1..n {
                    let d: f64 = rng.gen();
                    dist[u * n + v] = d;
                    dist[v * n + u] = d;
                }
            }
            let pts = (0..n)
                .map(|k| {
                    let a = TAU * k as f64 / n as f64;
                    (a.cos(), a.sin())
                })
                .collect();
            Ok((TspInstance::new(n, dist, true, false)?, pts))
        }
        other => Err(Error::InvalidArgument(format!(
            "{} is not a TSP family",
            other.name()
        ))),
    }
}

/// Length of the clockwise (decreasing angle) arc from `from` to `to` on the
/// unit circle.
pub fn clockwise_arc(from: f64, to: f64) -> f64 {
    (from - to).rem_euclid(TAU)
}
