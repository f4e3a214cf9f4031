use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use dcopt::binpacking::{bpp_dc, PackingAlg};
use dcopt::dc::timed;
use dcopt::format::{read_instance, write_instance};
use dcopt::harness::{
    emit_csv, emit_plotdata, emit_table, parse_csv, parse_gen_spec, preset, render_csv,
    render_plotdata, render_table, run_experiment, ExperimentSpec, PRESETS,
};
use dcopt::instgen::generate;
use dcopt::knapsack::{dkp_dc, DkpOracle};
use dcopt::tsp::{tsp_dc, TspOracle};
use dcopt::Instance;

/// Divide-and-conquer experiments for knapsack, bin packing and TSP.
#[derive(Parser)]
#[command(name = "dcopt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one instance from a `key = value` file.
    Generate {
        spec: PathBuf,
        out: PathBuf,
        /// Overrides the file's seed.
        #[arg(long, env = "DCOPT_SEED")]
        seed: Option<u64>,
    },
    /// Solve an instance file, whole or by divide and conquer.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Full)]
        method: Method,
        /// exact|greedy for dkp, nfd|ffd|bfd for bpp, exact|heuristic for tsp.
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Run a Monte-Carlo experiment and write report.csv, table.txt and plot.dat.
    Experiment {
        /// Experiment file; omit when using --preset.
        spec: Option<PathBuf>,
        #[arg(long, conflicts_with = "spec")]
        preset: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        pilot: Option<usize>,
        /// Raise the trial count to the pilot's recommendation.
        #[arg(long)]
        auto_k: bool,
        /// Overrides base_seed.
        #[arg(long, env = "DCOPT_SEED")]
        seed: Option<u64>,
    },
    /// Print a stored report.
    Report {
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Full,
    Dc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Table,
    Plot,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate { spec, out, seed } => {
            let text = read(&spec)?;
            let mut gen =
                parse_gen_spec(&text).with_context(|| format!("in {}", spec.display()))?;
            if let Some(seed) = seed {
                gen.seed = seed;
            }
            write_instance(&generate(&gen)?, &out)?;
        }
        Command::Solve {
            instance,
            method,
            oracle,
            depth,
        } => solve(&instance, method, oracle.as_deref(), depth)?,
        Command::Experiment {
            spec,
            preset: preset_name,
            out,
            trials,
            pilot,
            auto_k,
            seed,
        } => {
            let mut exp = match (&spec, &preset_name) {
                (Some(path), None) => ExperimentSpec::parse(&read(path)?)
                    .with_context(|| format!("in {}", path.display()))?,
                (None, Some(name)) => preset(name)?,
                _ => bail!("give a spec file or --preset ({})", PRESETS.join(", ")),
            };
            if let Some(seed) = seed {
                exp.base_seed = seed;
            }
            if let Some(k) = trials {
                exp.trials = k;
            }
            if pilot.is_some() {
                exp.pilot = pilot;
            }
            exp.auto_k |= auto_k;
            exp.validate()?;
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let report = run_experiment(&exp)?;
            if let Some(p) = &report.pilot {
                let note = format!(
                    "pilot: {} trials per cell, worst variance {} at {}, recommended k = {}\n",
                    p.size, p.variance, p.cell, p.recommended_trials
                );
                eprint!("{note}");
                std::fs::write(out.join("pilot.txt"), note)?;
            }
            emit_csv(&report, out.join("report.csv"))?;
            emit_table(&report, out.join("table.txt"))?;
            emit_plotdata(&report, out.join("plot.dat"))?;
            print!("{}", render_table(&report));
        }
        Command::Report { dir, format } => {
            let report = parse_csv(&read(&dir.join("report.csv"))?)?;
            let text = match format {
                Format::Csv => render_csv(&report),
                Format::Table => render_table(&report),
                Format::Plot => render_plotdata(&report),
            };
            print!("{text}");
        }
    }
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn solve(path: &Path, method: Method, oracle: Option<&str>, depth: usize) -> anyhow::Result<()> {
    let inst = read_instance(path)?;
    let (objective, seconds, detail) = match &inst {
        Instance::Dkp(k) => {
            let oracle: DkpOracle = oracle.unwrap_or("exact").parse()?;
            let (sol, t) = match method {
                Method::Full => {
                    let r = timed(|i| oracle.solve(i), k);
                    (r.solution, r.wall_time)
                }
                Method::Dc => {
                    let r = dkp_dc(k, oracle, depth)?;
                    (r.combined, r.t_dc)
                }
            };
            let items: Vec<String> = sol
                .chosen_items()
                .iter()
                .map(|j| (j + 1).to_string())
                .collect();
            (sol.value as f64, t, format!("items {}", items.join(" ")))
        }
        Instance::Bpp(b) => {
            let alg: PackingAlg = oracle.unwrap_or("ffd").parse()?;
            let (packing, t) = match method {
                Method::Full => {
                    let r = timed(|i| alg.pack(i), b);
                    (r.solution, r.wall_time)
                }
                Method::Dc => {
                    let r = bpp_dc(b, alg, depth)?;
                    (r.combined, r.t_dc)
                }
            };
            let bins: Vec<String> = packing
                .bins()
                .iter()
                .map(|bin| {
                    let items: Vec<String> = bin.iter().map(|j| (j + 1).to_string()).collect();
                    format!("[{}]", items.join(" "))
                })
                .collect();
            (
                packing.bin_count as f64,
                t,
                format!("bins {}", bins.join(" ")),
            )
        }
        Instance::Tsp(g) => {
            let oracle: TspOracle = oracle.unwrap_or("exact").parse()?;
            let (tour, t) = match method {
                Method::Full => {
                    let r = timed(|i| oracle.solve(i), g);
                    (r.solution?, r.wall_time)
                }
                Method::Dc => {
                    let r = tsp_dc(g, oracle, depth)?;
                    (r.combined, r.t_dc)
                }
            };
            let order: Vec<String> = tour
                .canonical()
                .order
                .iter()
                .map(|v| (v + 1).to_string())
                .collect();
            (tour.cost, t, format!("tour {}", order.join(" ")))
        }
    };
    println!("objective {objective}");
    println!("seconds {seconds:.6}");
    println!("{detail}");
    Ok(())
}
