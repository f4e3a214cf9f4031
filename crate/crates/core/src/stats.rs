//! Trial sizing, 95% confidence intervals and the solution/time performance
//! coefficients.

use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.96;
/// Half-width targeted when sizing the number of trials.
pub const MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub n: usize,
    pub mean: f64,
    /// Unbiased (divisor `n - 1`).
    pub variance: f64,
}

impl SampleStats {
    pub fn new(n: usize, mean: f64, variance: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 samples, got {n}"
            )));
        }
        if variance.is_nan() || variance < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "variance must be a non-negative number, got {variance}"
            )));
        }
        Ok(Self { n, mean, variance })
    }

    pub fn from_samples(xs: &[f64]) -> Result<Self> {
        let n = xs.len();
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 samples, got {n}"
            )));
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let variance = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Ok(Self { n, mean, variance })
    }

    pub fn confidence_interval(&self) -> (f64, f64) {
        confidence_interval(self)
    }
}

/// Trials needed for a 95% interval of half-width [`MARGIN`]:
/// `ceil((1.96 / 0.05)^2 * variance)`.
pub fn bernoulli_trials(variance: f64) -> Result<u64> {
    if variance.is_nan() || variance < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "variance must be a non-negative number, got {variance}"
        )));
    }
    Ok(((Z95 / MARGIN).powi(2) * variance).ceil() as u64)
}

/// `mean -/+ 1.96 * sqrt(variance / n)`.
pub fn confidence_interval(stats: &SampleStats) -> (f64, f64) {
    let half = Z95 * (stats.variance / stats.n as f64).sqrt();
    (stats.mean - half, stats.mean + half)
}

/// Solution and time fractions, in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerfPair {
    pub s_f: f64,
    pub t_f: f64,
}

/// Maximisation problems: `S_f = 100 z_dc / z*`, `T_f = 100 T_dc / T*`.
pub fn perf_dkp(z_dc: f64, z_star: f64, t_dc: f64, t_star: f64) -> Result<PerfPair> {
    positive("z*", z_star)?;
    positive("T*", t_star)?;
    Ok(PerfPair {
        s_f: 100.0 * z_dc / z_star,
        t_f: 100.0 * t_dc / t_star,
    })
}

/// Minimisation problems: `S_f = 100 z_full / z_dc`, `T_f = 100 T_dc / T_full`.
pub fn perf_min(z_full: f64, z_dc: f64, t_dc: f64, t_full: f64) -> Result<PerfPair> {
    positive("z_dc", z_dc)?;
    positive("T_full", t_full)?;
    Ok(PerfPair {
        s_f: 100.0 * z_full / z_dc,
        t_f: 100.0 * t_dc / t_full,
    })
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be positive, got {x}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trials_unit_variance() {
        assert_eq!(bernoulli_trials(1.0).unwrap(), 1537);
        assert_eq!(bernoulli_trials(0.0).unwrap(), 0);
        assert!(bernoulli_trials(-0.1).is_err());
        // k = 1000 corresponds to a pilot variance near 0.65
        assert_eq!(bernoulli_trials(0.65).unwrap(), 999);
        assert_eq!(bernoulli_trials(0.651).unwrap(), 1001);
    }

    #[test]
    fn interval_cases() {
        let s = SampleStats::new(10, 50.0, 0.0).unwrap();
        assert_eq!(confidence_interval(&s), (50.0, 50.0));
        let wide = SampleStats::new(10, 5.0, 2.0)
            .unwrap()
            .confidence_interval();
        let narrow = SampleStats::new(40, 5.0, 2.0)
            .unwrap()
            .confidence_interval();
        assert!(wide.1 - wide.0 > narrow.1 - narrow.0);
        // quadrupling n halves the width
        assert!(((wide.1 - wide.0) / (narrow.1 - narrow.0) - 2.0).abs() < 1e-12);
        assert!(SampleStats::new(1, 0.0, 0.0).is_err());
    }

    #[test]
    fn sample_stats_unbiased() {
        let s = SampleStats::from_samples(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert!((s.variance - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn perf_orientation() {
        let p = perf_dkp(90.0, 90.0, 1.0, 2.0).unwrap();
        assert_eq!(
            p,
            PerfPair {
                s_f: 100.0,
                t_f: 50.0
            }
        );
        assert_eq!(perf_dkp(0.0, 7.0, 1.0, 1.0).unwrap().s_f, 0.0);
        assert!(perf_dkp(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(perf_dkp(1.0, 1.0, 1.0, 0.0).is_err());

        let p = perf_min(3.0, 4.0, 1.0, 1.0).unwrap();
        assert_eq!(p.s_f, 75.0);
        // the halves can beat the full run
        assert!(perf_min(5.0, 4.0, 1.0, 1.0).unwrap().s_f > 100.0);
        assert!(perf_min(5.0, 0.0, 1.0, 1.0).is_err());
        assert_eq!(perf_min(4.0, 4.0, 2.0, 2.0).unwrap().s_f, 100.0);
    }
}
