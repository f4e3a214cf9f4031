use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::binpacking::PackingAlg;
use crate::error::{Error, Result};
use crate::instgen::{GenProblem, GenSpec};
use crate::knapsack::DkpOracle;
use crate::tsp::{TspOracle, EXACT_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Dkp,
    Bpp,
    Tsp,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Dkp => "dkp",
            ProblemKind::Bpp => "bpp",
            ProblemKind::Tsp => "tsp",
        }
    }

    /// Whether plots use a logarithmic N axis.
    pub fn log_axis(self) -> bool {
        !matches!(self, ProblemKind::Tsp)
    }
}

impl FromStr for ProblemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dkp" => Ok(ProblemKind::Dkp),
            "bpp" => Ok(ProblemKind::Bpp),
            "tsp" => Ok(ProblemKind::Tsp),
            _ => Err(Error::Spec(format!("unknown problem {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TspCase {
    Ms,
    Ma,
    Nms,
}

impl TspCase {
    pub fn name(self) -> &'static str {
        match self {
            TspCase::Ms => "ms",
            TspCase::Ma => "ma",
            TspCase::Nms => "nms",
        }
    }

    pub fn generator(self) -> GenProblem {
        match self {
            TspCase::Ms => GenProblem::TspMs,
            TspCase::Ma => GenProblem::TspMa,
            TspCase::Nms => GenProblem::TspNms,
        }
    }
}

impl FromStr for TspCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ms" => Ok(TspCase::Ms),
            "ma" => Ok(TspCase::Ma),
            "nms" => Ok(TspCase::Nms),
            _ => Err(Error::Spec(format!("unknown TSP case {s:?}"))),
        }
    }
}

/// One column group of a table: everything about a cell except N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    Dkp {
        d: usize,
        tightness: f64,
        oracle: DkpOracle,
    },
    Bpp {
        alg: PackingAlg,
    },
    Tsp {
        case: TspCase,
        oracle: TspOracle,
    },
}

impl Variant {
    pub fn problem(&self) -> ProblemKind {
        match self {
            Variant::Dkp { .. } => ProblemKind::Dkp,
            Variant::Bpp { .. } => ProblemKind::Bpp,
            Variant::Tsp { .. } => ProblemKind::Tsp,
        }
    }
}

fn dkp_oracle_name(o: DkpOracle) -> &'static str {
    match o {
        DkpOracle::Exact => "exact",
        DkpOracle::Greedy => "greedy",
    }
}

fn tsp_oracle_name(o: TspOracle) -> &'static str {
    match o {
        TspOracle::Exact => "exact",
        TspOracle::Heuristic => "heuristic",
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Dkp {
                d,
                tightness,
                oracle,
            } => write!(f, "d{d}-t{tightness}-{}", dkp_oracle_name(*oracle)),
            Variant::Bpp { alg } => f.write_str(alg.name()),
            Variant::Tsp { case, oracle } => {
                write!(f, "{}-{}", case.name(), tsp_oracle_name(*oracle))
            }
        }
    }
}

impl Variant {
    pub fn parse(problem: ProblemKind, s: &str) -> Result<Self> {
        let bad = || Error::Spec(format!("bad {} variant {s:?}", problem.name()));
        match problem {
            ProblemKind::Bpp => Ok(Variant::Bpp {
                alg: s.parse().map_err(|_| bad())?,
            }),
            ProblemKind::Tsp => {
                let (case, oracle) = s.split_once('-').ok_or_else(bad)?;
                Ok(Variant::Tsp {
                    case: case.parse()?,
                    oracle: oracle.parse().map_err(|_| bad())?,
                })
            }
            ProblemKind::Dkp => {
                let mut parts = s.splitn(3, '-');
                let d = parts
                    .next()
                    .and_then(|p| p.strip_prefix('d'))
                    .ok_or_else(bad)?;
                let t = parts
                    .next()
                    .and_then(|p| p.strip_prefix('t'))
                    .ok_or_else(bad)?;
                let o = parts.next().ok_or_else(bad)?;
                Ok(Variant::Dkp {
                    d: d.parse().map_err(|_| bad())?,
                    tightness: t.parse().map_err(|_| bad())?,
                    oracle: o.parse().map_err(|_| bad())?,
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problem: ProblemKind,
    /// Ascending.
    pub n_values: Vec<usize>,
    pub variants: Vec<Variant>,
    /// Trials per cell.
    pub trials: usize,
    pub base_seed: u64,
    /// Size of an optional pilot sample used to size `trials`.
    pub pilot: Option<usize>,
    /// Raise `trials` to the pilot's recommendation.
    pub auto_k: bool,
    pub depth: usize,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 2 {
            return Err(Error::Spec(format!(
                "trials must be at least 2, got {}",
                self.trials
            )));
        }
        if self.n_values.is_empty() {
            return Err(Error::Spec("no n values".into()));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Spec("n values must be strictly ascending".into()));
        }
        if self.variants.is_empty() {
            return Err(Error::Spec("no variants".into()));
        }
        if self.depth == 0 {
            return Err(Error::Spec("depth must be at least 1".into()));
        }
        if let Some(p) = self.pilot {
            if p < 2 {
                return Err(Error::Spec("pilot must be at least 2".into()));
            }
        }
        let n_min = self.n_values[0];
        let n_max = *self.n_values.last().unwrap();
        for v in &self.variants {
            if v.problem() != self.problem {
                return Err(Error::Spec(format!(
                    "variant {v} does not belong to {}",
                    self.problem.name()
                )));
            }
            match *v {
                Variant::Dkp { d, tightness, .. } => {
                    if d == 0 {
                        return Err(Error::Spec("d must be positive".into()));
                    }
                    if !(tightness > 0.0 && tightness < 1.0) {
                        return Err(Error::Spec(format!("tightness {tightness} outside (0, 1)")));
                    }
                    if n_min < 2 {
                        return Err(Error::Spec("d-KP needs n >= 2".into()));
                    }
                }
                Variant::Bpp { .. } => {
                    if n_min < 2 {
                        return Err(Error::Spec("bin packing needs n >= 2 to split".into()));
                    }
                }
                Variant::Tsp { oracle, .. } => {
                    if n_min < 6 {
                        return Err(Error::Spec("TSP needs n >= 6 to split".into()));
                    }
                    if oracle == TspOracle::Exact && n_max > EXACT_LIMIT {
                        return Err(Error::Spec(format!(
                            "exact TSP oracle is limited to n <= {EXACT_LIMIT}, spec asks for n = {n_max}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parse a flat `key = value` file. `#` starts a comment. Lists are comma
    /// separated.
    ///
    /// ```text
    /// problem = bpp
    /// n = 20, 50, 100
    /// alg = nfd, ffd, bfd
    /// trials = 300
    /// base_seed = 7
    /// ```
    ///
    /// d-KP uses `d`, `tightness` and `oracle` (exact|greedy); TSP uses
    /// `case` (ms|ma|nms) and `oracle` (exact|heuristic). Optional keys:
    /// `pilot`, `auto_k`, `depth`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = read_kv(text)?;
        let mut take = |key: &str| kv.remove(key);
        let problem: ProblemKind = take("problem")
            .ok_or_else(|| Error::Spec("missing key `problem`".into()))?
            .parse()?;
        let n_values =
            list::<usize>("n", take("n"))?.ok_or_else(|| Error::Spec("missing key `n`".into()))?;
        let trials = scalar::<usize>("trials", take("trials"))?.unwrap_or(100);
        let base_seed = scalar::<u64>("base_seed", take("base_seed"))?.unwrap_or(0);
        let pilot = scalar::<usize>("pilot", take("pilot"))?;
        let auto_k = scalar::<bool>("auto_k", take("auto_k"))?.unwrap_or(false);
        let depth = scalar::<usize>("depth", take("depth"))?.unwrap_or(1);
        let variants = match problem {
            ProblemKind::Dkp => {
                let ds = list::<usize>("d", take("d"))?.unwrap_or_else(|| vec![2]);
                let ts = list::<f64>("tightness", take("tightness"))?.unwrap_or_else(|| vec![0.5]);
                let oracles = list::<DkpOracle>("oracle", take("oracle"))?
                    .unwrap_or_else(|| vec![DkpOracle::Exact]);
                let mut vs = Vec::new();
                for &tightness in &ts {
                    for &oracle in &oracles {
                        for &d in &ds {
                            vs.push(Variant::Dkp {
                                d,
                                tightness,
                                oracle,
                            });
                        }
                    }
                }
                vs
            }
            ProblemKind::Bpp => list::<PackingAlg>("alg", take("alg"))?
                .unwrap_or_else(|| PackingAlg::ALL.to_vec())
                .into_iter()
                .map(|alg| Variant::Bpp { alg })
                .collect(),
            ProblemKind::Tsp => {
                let cases = list::<TspCase>("case", take("case"))?
                    .unwrap_or_else(|| vec![TspCase::Ms, TspCase::Ma, TspCase::Nms]);
                let oracles = list::<TspOracle>("oracle", take("oracle"))?
                    .unwrap_or_else(|| vec![TspOracle::Exact]);
                let mut vs = Vec::new();
                for &oracle in &oracles {
                    for &case in &cases {
                        vs.push(Variant::Tsp { case, oracle });
                    }
                }
                vs
            }
        };
        if let Some(k) = kv.keys().next() {
            return Err(Error::Spec(format!(
                "unknown key {k:?} for {}",
                problem.name()
            )));
        }
        let spec = Self {
            problem,
            n_values,
            variants,
            trials,
            base_seed,
            pilot,
            auto_k,
            depth,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn read_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut kv = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Spec(format!("line {}: expected key = value", i + 1)))?;
        let k = k.trim().to_string();
        if kv.insert(k.clone(), v.trim().to_string()).is_some() {
            return Err(Error::Spec(format!("line {}: duplicate key {k:?}", i + 1)));
        }
    }
    Ok(kv)
}

/// Parse a single-instance generator file: `problem` (dkp, bpp, tsp-ms,
/// tsp-ma, tsp-nms), `n`, `seed`, and for d-KP `d` and `tightness`.
pub fn parse_gen_spec(text: &str) -> Result<GenSpec> {
    let mut kv = read_kv(text)?;
    let mut take = |key: &str| kv.remove(key);
    let problem: GenProblem = take("problem")
        .ok_or_else(|| Error::Spec("missing key `problem`".into()))?
        .parse()
        .map_err(|e: Error| Error::Spec(e.to_string()))?;
    let n =
        scalar::<usize>("n", take("n"))?.ok_or_else(|| Error::Spec("missing key `n`".into()))?;
    let seed = scalar::<u64>("seed", take("seed"))?.unwrap_or(0);
    let spec = match problem {
        GenProblem::Dkp => GenSpec::dkp(
            n,
            scalar("d", take("d"))?.unwrap_or(2),
            scalar("tightness", take("tightness"))?.unwrap_or(0.5),
            seed,
        ),
        GenProblem::Bpp => GenSpec::bpp(n, seed),
        tsp => GenSpec::tsp(tsp, n, seed),
    };
    if let Some(k) = kv.keys().next() {
        return Err(Error::Spec(format!(
            "unknown key {k:?} for {}",
            problem.name()
        )));
    }
    Ok(spec)
}

fn scalar<T: FromStr>(key: &str, value: Option<String>) -> Result<Option<T>> {
    value
        .map(|v| {
            v.parse()
                .map_err(|_| Error::Spec(format!("bad value {v:?} for `{key}`")))
        })
        .transpose()
}

fn list<T: FromStr>(key: &str, value: Option<String>) -> Result<Option<Vec<T>>> {
    value
        .map(|v| {
            v.split(',')
                .map(|x| {
                    let x = x.trim();
                    x.parse()
                        .map_err(|_| Error::Spec(format!("bad value {x:?} in `{key}`")))
                })
                .collect()
        })
        .transpose()
}

/// Built-in reproduction configurations, scaled down for a desktop.
pub const PRESETS: [&str; 5] = ["table2", "table3", "table4", "table7", "table8-ms8"];

pub fn preset(name: &str) -> Result<ExperimentSpec> {
    let text = match name {
        "table2" => "problem = dkp\nn = 10, 20, 50\nd = 2, 4, 6\ntightness = 0.25\ntrials = 100\nbase_seed = 2\n",
        "table3" => "problem = dkp\nn = 6, 10, 20, 50\nd = 2, 4, 6\ntightness = 0.5\ntrials = 100\nbase_seed = 3\n",
        "table4" => "problem = dkp\nn = 6, 10, 20, 50\nd = 2, 4, 6\ntightness = 0.75\ntrials = 100\nbase_seed = 4\n",
        "table7" => "problem = bpp\nn = 20, 50, 100, 250, 500, 1000, 1500, 2000\nalg = nfd, ffd, bfd\ntrials = 300\nbase_seed = 7\n",
        "table8-ms8" => "problem = tsp\nn = 8\ncase = ms\noracle = exact\ntrials = 500\nbase_seed = 8\n",
        _ => {
            return Err(Error::Spec(format!(
                "unknown preset {name:?} (available: {})",
                PRESETS.join(", ")
            )))
        }
    };
    ExperimentSpec::parse(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_bpp_spec() {
        let spec = ExperimentSpec::parse(
            "# table 7 style\nproblem = bpp\nn = 20, 50\nalg = ffd\ntrials = 50\nbase_seed = 7\n",
        )
        .unwrap();
        assert_eq!(spec.n_values, vec![20, 50]);
        assert_eq!(
            spec.variants,
            vec![Variant::Bpp {
                alg: PackingAlg::Ffd
            }]
        );
        assert_eq!((spec.trials, spec.base_seed, spec.depth), (50, 7, 1));
    }

    #[test]
    fn variant_labels_round_trip() {
        for name in PRESETS {
            let spec = preset(name).unwrap();
            for v in &spec.variants {
                assert_eq!(Variant::parse(spec.problem, &v.to_string()).unwrap(), *v);
            }
        }
    }

    #[test]
    fn rejects_bad_specs() {
        for text in [
            "problem = bpp\nn = 20\ntrials = 1\n",
            "problem = bpp\nn = 50, 20\n",
            "problem = bpp\nn = 20\ncolour = red\n",
            "problem = tsp\nn = 8, 120\noracle = exact\n",
            "problem = tsp\nn = 4\n",
            "problem = dkp\nn = 10\ntightness = 1.5\n",
            "problem = knapsack\nn = 10\n",
            "n = 10\n",
            "problem = bpp\nproblem = bpp\nn = 10\n",
        ] {
            assert!(ExperimentSpec::parse(text).is_err(), "{text:?}");
        }
        let err = ExperimentSpec::parse("problem = tsp\nn = 8, 120\noracle = exact\n").unwrap_err();
        assert!(err.to_string().contains("18"));
    }

    #[test]
    fn gen_spec_files() {
        let g =
            parse_gen_spec("problem = dkp\nn = 30\nd = 4\ntightness = 0.25\nseed = 11\n").unwrap();
        assert_eq!(g, GenSpec::dkp(30, 4, 0.25, 11));
        let g = parse_gen_spec("problem = tsp-nms\nn = 12\n").unwrap();
        assert_eq!(g, GenSpec::tsp(GenProblem::TspNms, 12, 0));
        assert!(parse_gen_spec("problem = bpp\nn = 12\nd = 3\n").is_err());
        assert!(parse_gen_spec("problem = tsp\nn = 12\n").is_err());
    }
}
