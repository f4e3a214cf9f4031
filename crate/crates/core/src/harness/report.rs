use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::knapsack::DkpOracle;
use crate::tsp::TspOracle;

use super::spec::{ProblemKind, Variant};

/// Mean, unbiased variance and 95% interval of one coefficient over a cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefStats {
    pub mean: f64,
    pub variance: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub variant: Variant,
    pub n: usize,
    pub trials: usize,
    pub base_seed: u64,
    pub sf: CoefStats,
    pub tf: CoefStats,
}

/// Worst-cell pilot variance and the trial count it calls for.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotInfo {
    pub size: usize,
    pub variance: f64,
    pub recommended_trials: u64,
    pub cell: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub problem: ProblemKind,
    pub rows: Vec<ReportRow>,
    pub pilot: Option<PilotInfo>,
}

impl ExperimentReport {
    pub fn row(&self, variant: &Variant, n: usize) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.variant == *variant && r.n == n)
    }

    /// Variants in first-seen order.
    pub fn variants(&self) -> Vec<Variant> {
        let mut vs: Vec<Variant> = Vec::new();
        for r in &self.rows {
            if !vs.contains(&r.variant) {
                vs.push(r.variant);
            }
        }
        vs
    }

    /// Distinct N values, ascending.
    pub fn n_values(&self) -> Vec<usize> {
        let mut ns: Vec<usize> = self.rows.iter().map(|r| r.n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }
}

const CSV_HEADER: [&str; 13] = [
    "problem",
    "variant",
    "n",
    "trials",
    "base_seed",
    "sf_mean",
    "sf_var",
    "sf_ci_low",
    "sf_ci_high",
    "tf_mean",
    "tf_var",
    "tf_ci_low",
    "tf_ci_high",
];

/// Reals are written in their shortest round-trip form, so parsing the CSV
/// back yields bit-identical values.
pub fn render_csv(report: &ExperimentReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in &report.rows {
        let fields = [
            report.problem.name().to_string(),
            r.variant.to_string(),
            r.n.to_string(),
            r.trials.to_string(),
            r.base_seed.to_string(),
            r.sf.mean.to_string(),
            r.sf.variance.to_string(),
            r.sf.ci_low.to_string(),
            r.sf.ci_high.to_string(),
            r.tf.mean.to_string(),
            r.tf.variance.to_string(),
            r.tf.ci_low.to_string(),
            r.tf.ci_high.to_string(),
        ];
        w.write_record(&fields).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
}

pub fn parse_csv(text: &str) -> Result<ExperimentReport> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::MalformedHeader {
        line: 1,
        msg: e.to_string(),
    })?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::MalformedHeader {
            line: 1,
            msg: "expected the report CSV header".into(),
        });
    }
    let mut problem = None;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Spec(format!("report CSV: {e}")))?;
        let line_no = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != CSV_HEADER.len() {
            return Err(Error::CountMismatch {
                line: line_no,
                expected: CSV_HEADER.len(),
                found: record.len(),
            });
        }
        let p: ProblemKind = record[0].parse()?;
        if problem.is_some_and(|q| q != p) {
            return Err(Error::Spec(format!(
                "line {line_no}: mixed problems in one report"
            )));
        }
        problem = Some(p);
        let field = |k: usize| &record[k];
        let num = |k: usize| -> Result<f64> {
            field(k).parse().map_err(|_| Error::Parse {
                line: line_no,
                token: field(k).to_string(),
            })
        };
        let int = |k: usize| -> Result<u64> {
            field(k).parse().map_err(|_| Error::Parse {
                line: line_no,
                token: field(k).to_string(),
            })
        };
        rows.push(ReportRow {
            variant: Variant::parse(p, field(1))?,
            n: int(2)? as usize,
            trials: int(3)? as usize,
            base_seed: int(4)?,
            sf: CoefStats {
                mean: num(5)?,
                variance: num(6)?,
                ci_low: num(7)?,
                ci_high: num(8)?,
            },
            tf: CoefStats {
                mean: num(9)?,
                variance: num(10)?,
                ci_low: num(11)?,
                ci_high: num(12)?,
            },
        });
    }
    let problem = problem.ok_or_else(|| Error::Spec("report CSV has no rows".into()))?;
    Ok(ExperimentReport {
        problem,
        rows,
        pilot: None,
    })
}

fn column_label(v: &Variant) -> String {
    match *v {
        Variant::Dkp {
            d,
            tightness,
            oracle,
        } => {
            let greedy = if oracle == DkpOracle::Greedy {
                " greedy"
            } else {
                ""
            };
            format!("D = {d}, t = {tightness}{greedy}")
        }
        Variant::Bpp { alg } => alg.name().to_uppercase(),
        Variant::Tsp { case, oracle } => {
            let heur = if oracle == TspOracle::Heuristic {
                " heuristic"
            } else {
                ""
            };
            format!("{}{heur}", case.name().to_uppercase())
        }
    }
}

/// One row per N, one `S_f  T_f` column pair per variant.
pub fn render_table(report: &ExperimentReport) -> String {
    let variants = report.variants();
    let cell = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |x| format!("{x:.2}"));
    let mut grid: Vec<Vec<String>> = Vec::new();
    for n in report.n_values() {
        let mut line = vec![n.to_string()];
        for v in &variants {
            let row = report.row(v, n);
            line.push(cell(row.map(|r| r.sf.mean)));
            line.push(cell(row.map(|r| r.tf.mean)));
        }
        grid.push(line);
    }
    let labels: Vec<String> = variants.iter().map(column_label).collect();
    let num_w = grid
        .iter()
        .flat_map(|l| l[1..].iter().map(String::len))
        .chain(std::iter::once(6))
        .max()
        .unwrap();
    let widths: Vec<usize> = labels
        .iter()
        .map(|l| num_w.max(l.len().saturating_sub(num_w + 2)))
        .collect();
    let first_w = grid.iter().map(|l| l[0].len()).max().unwrap_or(1).max(5);

    let mut out = String::new();
    let _ = write!(out, "{:>first_w$} |", "Items");
    for (l, &w) in labels.iter().zip(&widths) {
        let _ = write!(out, "  {:^width$}", l, width = 2 * w + 2);
    }
    out.push('\n');
    let _ = write!(out, "{:>first_w$} |", "N");
    for &w in &widths {
        let _ = write!(out, "  {:>w$}  {:>w$}", "S_f", "T_f");
    }
    out.push('\n');
    let rule = out.lines().map(str::len).max().unwrap_or(0);
    out.push_str(&"-".repeat(rule));
    out.push('\n');
    for line in &grid {
        let _ = write!(out, "{:>first_w$} |", line[0]);
        for (k, &w) in widths.iter().enumerate() {
            let _ = write!(out, "  {:>w$}  {:>w$}", line[1 + 2 * k], line[2 + 2 * k]);
        }
        out.push('\n');
    }
    if let Some(k) = report.rows.first().map(|r| r.trials) {
        let _ = writeln!(out, "trials per cell: {k}");
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    /// `sf` or `tf`.
    pub coefficient: &'static str,
    pub variant: Variant,
    /// `(N, mean)`, ascending in N.
    pub points: Vec<(usize, f64)>,
}

pub fn plot_series(report: &ExperimentReport) -> Vec<PlotSeries> {
    let mut out = Vec::new();
    for coefficient in ["sf", "tf"] {
        for v in report.variants() {
            let mut points: Vec<(usize, f64)> = report
                .rows
                .iter()
                .filter(|r| r.variant == v)
                .map(|r| {
                    (
                        r.n,
                        if coefficient == "sf" {
                            r.sf.mean
                        } else {
                            r.tf.mean
                        },
                    )
                })
                .collect();
            points.sort_by_key(|p| p.0);
            out.push(PlotSeries {
                coefficient,
                variant: v,
                points,
            });
        }
    }
    out
}

/// Gnuplot-style data blocks, one per (coefficient, variant), separated by
/// two blank lines so `index` can address them.
pub fn render_plotdata(report: &ExperimentReport) -> String {
    let log = report.problem.log_axis();
    let mut out = String::new();
    for (k, s) in plot_series(report).iter().enumerate() {
        if k > 0 {
            out.push_str("\n\n");
        }
        let _ = writeln!(out, "# {} {}", s.coefficient, s.variant);
        if log {
            let _ = writeln!(out, "# n log10_n {}", s.coefficient);
        } else {
            let _ = writeln!(out, "# n {}", s.coefficient);
        }
        for &(n, y) in &s.points {
            if log {
                let _ = writeln!(out, "{n} {} {y}", (n as f64).log10());
            } else {
                let _ = writeln!(out, "{n} {y}");
            }
        }
    }
    out
}

fn write(path: &Path, text: String) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn emit_csv(report: &ExperimentReport, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), render_csv(report))
}

pub fn emit_table(report: &ExperimentReport, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), render_table(report))
}

pub fn emit_plotdata(report: &ExperimentReport, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), render_plotdata(report))
}
