use crate::binpacking::{bpp_dc, BppInstance};
use crate::dc::{timed, DcResult};
use crate::error::{Error, Result};
use crate::instgen::{gen_bpp, gen_dkp, gen_tsp, trial_seed, GenSpec};
use crate::knapsack::dkp_dc;
use crate::stats::{bernoulli_trials, perf_dkp, perf_min, PerfPair, SampleStats};
use crate::tsp::tsp_dc;

use super::report::{CoefStats, ExperimentReport, PilotInfo, ReportRow};
use super::spec::{ExperimentSpec, Variant};

/// Clock readings below this are treated as this, so ratios stay finite.
const MIN_TIME: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub seed: u64,
    pub z_full: f64,
    pub z_dc: f64,
    pub t_full: f64,
    pub t_dc: f64,
    pub perf: PerfPair,
}

/// Generate one instance from `seed`, solve it whole and by divide and
/// conquer, back to back.
pub fn run_trial(variant: &Variant, n: usize, seed: u64, depth: usize) -> Result<TrialOutcome> {
    let (z_full, t_full, z_dc, t_dc) = match *variant {
        Variant::Dkp {
            d,
            tightness,
            oracle,
        } => {
            let inst = gen_dkp(&GenSpec::dkp(n, d, tightness, seed))?;
            let full = timed(|i| oracle.solve(i), &inst);
            let dc = dkp_dc(&inst, oracle, depth)?;
            (full.solution.value as f64, full.wall_time, dc.z_dc, dc.t_dc)
        }
        Variant::Bpp { alg } => {
            let inst: BppInstance = gen_bpp(&GenSpec::bpp(n, seed))?;
            let full = timed(|i| alg.pack(i), &inst);
            let dc = bpp_dc(&inst, alg, depth)?;
            (
                full.solution.bin_count as f64,
                full.wall_time,
                dc.z_dc,
                dc.t_dc,
            )
        }
        Variant::Tsp { case, oracle } => {
            let inst = gen_tsp(&GenSpec::tsp(case.generator(), n, seed))?;
            let full = timed(|i| oracle.solve(i), &inst);
            let tour = full.solution?;
            let dc: DcResult<_> = tsp_dc(&inst, oracle, depth)?;
            (tour.cost, full.wall_time, dc.z_dc, dc.t_dc)
        }
    };
    let (t_full, t_dc) = (t_full.max(MIN_TIME), t_dc.max(MIN_TIME));
    let perf = match variant {
        Variant::Dkp { .. } => perf_dkp(z_dc, z_full, t_dc, t_full)?,
        _ => perf_min(z_full, z_dc, t_dc, t_full)?,
    };
    Ok(TrialOutcome {
        seed,
        z_full,
        z_dc,
        t_full,
        t_dc,
        perf,
    })
}

fn run_cell(
    spec: &ExperimentSpec,
    variant: &Variant,
    n: usize,
    trials: usize,
) -> Result<Vec<TrialOutcome>> {
    (0..trials as u64)
        .map(|i| {
            let seed = trial_seed(spec.base_seed, i);
            run_trial(variant, n, seed, spec.depth)
                .map_err(|e| Error::Spec(format!("{variant} n={n} trial {i} (seed {seed}): {e}")))
        })
        .collect()
}

fn summarize(xs: &[f64]) -> Result<CoefStats> {
    let s = SampleStats::from_samples(xs)?;
    let (ci_low, ci_high) = s.confidence_interval();
    Ok(CoefStats {
        mean: s.mean,
        variance: s.variance,
        ci_low,
        ci_high,
    })
}

/// Run a pilot sample on every cell and return the worst solution-fraction
/// variance, measured on the fraction scale (`S_f / 100`).
fn pilot(spec: &ExperimentSpec, size: usize) -> Result<PilotInfo> {
    let mut worst: Option<PilotInfo> = None;
    for variant in &spec.variants {
        for &n in &spec.n_values {
            let outcomes = run_cell(spec, variant, n, size)?;
            let fractions: Vec<f64> = outcomes.iter().map(|o| o.perf.s_f / 100.0).collect();
            let variance = SampleStats::from_samples(&fractions)?.variance;
            if worst.as_ref().is_none_or(|w| variance > w.variance) {
                worst = Some(PilotInfo {
                    size,
                    variance,
                    recommended_trials: bernoulli_trials(variance)?,
                    cell: format!("{variant} n={n}"),
                });
            }
        }
    }
    Ok(worst.expect("validated spec has at least one cell"))
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let pilot = spec.pilot.map(|size| pilot(spec, size)).transpose()?;
    let trials = match &pilot {
        Some(p) if spec.auto_k => spec.trials.max(p.recommended_trials as usize),
        _ => spec.trials,
    };
    let mut rows = Vec::new();
    for &n in &spec.n_values {
        for variant in &spec.variants {
            let outcomes = run_cell(spec, variant, n, trials)?;
            let sf: Vec<f64> = outcomes.iter().map(|o| o.perf.s_f).collect();
            let tf: Vec<f64> = outcomes.iter().map(|o| o.perf.t_f).collect();
            rows.push(ReportRow {
                variant: *variant,
                n,
                trials: outcomes.len(),
                base_seed: spec.base_seed,
                sf: summarize(&sf)?,
                tf: summarize(&tf)?,
            });
        }
    }
    Ok(ExperimentReport {
        problem: spec.problem,
        rows,
        pilot,
    })
}
