//! Monte-Carlo experiments comparing full solves against divide-and-conquer
//! solves, aggregated into solution/time fraction tables.

mod report;
mod run;
mod spec;

pub use report::{
    emit_csv, emit_plotdata, emit_table, parse_csv, plot_series, render_csv, render_plotdata,
    render_table, CoefStats, ExperimentReport, PilotInfo, PlotSeries, ReportRow,
};
pub use run::{run_experiment, run_trial, TrialOutcome};
pub use spec::{parse_gen_spec, preset, ExperimentSpec, ProblemKind, TspCase, Variant, PRESETS};
