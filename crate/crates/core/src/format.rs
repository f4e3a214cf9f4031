//! Line-oriented instance files.
//!
//! ```text
//! dkp N D            bpp N              tsp N sym|asym metric|nonmetric
//! c(1) .. c(D)       w(1) .. w(N)       d(1,1) .. d(1,N)
//! p(1) .. p(N)                          ..
//! w(1,1) .. w(1,N)                      d(N,1) .. d(N,N)
//! ..
//! w(D,1) .. w(D,N)
//! ```
//!
//! Values are single-space separated; lines end in LF. Reals are written in
//! the shortest decimal form that parses back to the same `f64`.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::binpacking::BppInstance;
use crate::error::{Error, Result};
use crate::instgen::Instance;
use crate::knapsack::DkpInstance;
use crate::tsp::TspInstance;

pub fn to_text(inst: &Instance) -> String {
    let mut out = String::new();
    match inst {
        Instance::Dkp(k) => {
            writeln!(out, "dkp {} {}", k.n(), k.d()).unwrap();
            push_row(&mut out, k.capacities());
            push_row(&mut out, k.profits());
            for row in k.weights() {
                push_row(&mut out, row);
            }
        }
        Instance::Bpp(b) => {
            writeln!(out, "bpp {}", b.n()).unwrap();
            push_row(&mut out, b.weights());
        }
        Instance::Tsp(t) => {
            writeln!(
                out,
                "tsp {} {} {}",
                t.n(),
                if t.symmetric() { "sym" } else { "asym" },
                if t.metric() { "metric" } else { "nonmetric" }
            )
            .unwrap();
            for u in 0..t.n() {
                push_row(&mut out, t.row(u));
            }
        }
    }
    out
}

fn push_row<T: std::fmt::Display>(out: &mut String, row: &[T]) {
    for (k, x) in row.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        write!(out, "{x}").unwrap();
    }
    out.push('\n');
}

pub fn write_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_text(inst)).map_err(|e| Error::io(path, e))
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_instance(&text)
}

struct Lines<'a> {
    inner: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let inner = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Self { inner, pos: 0 }
    }

    /// Next non-blank line, split into exactly `expected` tokens.
    fn row(&mut self, expected: usize) -> Result<(usize, Vec<&'a str>)> {
        let Some(&(line, text)) = self.inner.get(self.pos) else {
            let line = self.inner.last().map_or(1, |(l, _)| l + 1);
            return Err(Error::CountMismatch {
                line,
                expected,
                found: 0,
            });
        };
        self.pos += 1;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != expected {
            return Err(Error::CountMismatch {
                line,
                expected,
                found: tokens.len(),
            });
        }
        Ok((line, tokens))
    }

    fn finish(&self) -> Result<()> {
        match self.inner.get(self.pos) {
            None => Ok(()),
            Some(&(line, text)) => Err(Error::CountMismatch {
                line,
                expected: 0,
                found: text.split_whitespace().count(),
            }),
        }
    }
}

fn parse_tokens<T: FromStr>(line: usize, tokens: &[&str]) -> Result<Vec<T>> {
    tokens
        .iter()
        .map(|t| {
            t.parse().map_err(|_| Error::Parse {
                line,
                token: t.to_string(),
            })
        })
        .collect()
}

fn positive_ints(line: usize, tokens: &[&str], what: &str) -> Result<Vec<u64>> {
    let values: Vec<u64> = parse_tokens(line, tokens)?;
    if values.contains(&0) {
        return Err(Error::OutOfRange {
            line,
            msg: format!("{what} must be positive"),
        });
    }
    Ok(values)
}

fn header_count(line: usize, token: Option<&&str>, what: &str) -> Result<usize> {
    let token = token.ok_or_else(|| Error::MalformedHeader {
        line,
        msg: format!("missing {what}"),
    })?;
    token.parse().map_err(|_| Error::MalformedHeader {
        line,
        msg: format!("bad {what} {token:?}"),
    })
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = Lines::new(text);
    let Some(&(hline, header)) = lines.inner.first() else {
        return Err(Error::MalformedHeader {
            line: 1,
            msg: "empty input".into(),
        });
    };
    lines.pos = 1;
    let head: Vec<&str> = header.split_whitespace().collect();
    let malformed = |msg: String| Error::MalformedHeader { line: hline, msg };
    let inst = match head[0] {
        "dkp" => {
            if head.len() != 3 {
                return Err(malformed("expected `dkp N D`".into()));
            }
            let n = header_count(hline, head.get(1), "item count")?;
            let d = header_count(hline, head.get(2), "constraint count")?;
            if n == 0 || d == 0 {
                return Err(malformed("N and D must be positive".into()));
            }
            let (l, t) = lines.row(d)?;
            let capacities = positive_ints(l, &t, "capacities")?;
            let (l, t) = lines.row(n)?;
            let profits = positive_ints(l, &t, "profits")?;
            let mut weights = Vec::with_capacity(d);
            for _ in 0..d {
                let (l, t) = lines.row(n)?;
                weights.push(positive_ints(l, &t, "weights")?);
            }
            Instance::Dkp(DkpInstance::new(capacities, profits, weights)?)
        }
        "bpp" => {
            if head.len() != 2 {
                return Err(malformed("expected `bpp N`".into()));
            }
            let n = header_count(hline, head.get(1), "item count")?;
            if n == 0 {
                return Err(malformed("N must be positive".into()));
            }
            let (l, t) = lines.row(n)?;
            let weights: Vec<f64> = parse_tokens(l, &t)?;
            if let Some(w) = weights.iter().find(|&&w| !(w > 0.0 && w <= 1.0)) {
                return Err(Error::OutOfRange {
                    line: l,
                    msg: format!("weight {w} outside (0, 1]"),
                });
            }
            Instance::Bpp(BppInstance::new(weights)?)
        }
        "tsp" => {
            if head.len() != 4 {
                return Err(malformed(
                    "expected `tsp N sym|asym metric|nonmetric`".into(),
                ));
            }
            let n = header_count(hline, head.get(1), "vertex count")?;
            if n < 3 {
                return Err(malformed("N must be at least 3".into()));
            }
            let symmetric = match head[2] {
                "sym" => true,
                "asym" => false,
                other => return Err(malformed(format!("bad symmetry flag {other:?}"))),
            };
            let metric = match head[3] {
                "metric" => true,
                "nonmetric" => false,
                other => return Err(malformed(format!("bad metric flag {other:?}"))),
            };
            let mut dist = Vec::with_capacity(n * n);
            for u in 0..n {
                let (l, t) = lines.row(n)?;
                let row: Vec<f64> = parse_tokens(l, &t)?;
                if let Some(x) = row.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
                    return Err(Error::OutOfRange {
                        line: l,
                        msg: format!("distance {x} is not a nonnegative real"),
                    });
                }
                if row[u] != 0.0 {
                    return Err(Error::OutOfRange {
                        line: l,
                        msg: format!("diagonal entry {} is not zero", row[u]),
                    });
                }
                dist.extend(row);
            }
            if symmetric {
                if let Some((u, v)) = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .find(|&(u, v)| dist[u * n + v] != dist[v * n + u])
                {
                    return Err(Error::OutOfRange {
                        line: hline + 1 + u,
                        msg: format!(
                            "matrix flagged sym but d({},{}) != d({},{})",
                            u + 1,
                            v + 1,
                            v + 1,
                            u + 1
                        ),
                    });
                }
            }
            Instance::Tsp(TspInstance::new(n, dist, symmetric, metric)?)
        }
        other => return Err(malformed(format!("unknown problem {other:?}"))),
    };
    lines.finish()?;
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::{generate, GenProblem, GenSpec};

    fn table1() -> Instance {
        Instance::Dkp(
            DkpInstance::new(
                vec![16, 11],
                vec![5, 11, 11, 71, 2, 2],
                vec![vec![6, 7, 1, 7, 7, 4], vec![4, 1, 1, 6, 1, 8]],
            )
            .unwrap(),
        )
    }

    #[test]
    fn table1_text() {
        let text = to_text(&table1());
        assert_eq!(
            text,
            "dkp 6 2\n16 11\n5 11 11 71 2 2\n6 7 1 7 7 4\n4 1 1 6 1 8\n"
        );
        assert_eq!(parse_instance(&text).unwrap(), table1());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for spec in [
            GenSpec::bpp(40, 3),
            GenSpec::tsp(GenProblem::TspMa, 9, 3),
            GenSpec::tsp(GenProblem::TspNms, 7, 3),
        ] {
            let inst = generate(&spec).unwrap();
            let path = dir.path().join("inst.txt");
            write_instance(&inst, &path).unwrap();
            assert_eq!(read_instance(&path).unwrap(), inst);
        }
    }

    #[test]
    fn profit_count_mismatch() {
        let err =
            parse_instance("dkp 6 2\n16 11\n5 11 11 71 2\n6 7 1 7 7 4\n4 1 1 6 1 8\n").unwrap_err();
        assert!(matches!(
            err,
            Error::CountMismatch {
                line: 3,
                expected: 6,
                found: 5
            }
        ));
    }

    #[test]
    fn out_of_range_weight() {
        let err = parse_instance("bpp 3\n0.5 1.5 0.2\n").unwrap_err();
        assert!(matches!(err, Error::OutOfRange { line: 2, .. }));
        let err = parse_instance("bpp 2\n0 0.2\n").unwrap_err();
        assert!(matches!(err, Error::OutOfRange { .. }));
    }

    #[test]
    fn malformed_headers() {
        for text in [
            "",
            "knap 3\n1 2 3\n",
            "dkp x 2\n",
            "bpp\n",
            "tsp 3 sym\n",
            "tsp 3 both metric\n",
        ] {
            assert!(
                matches!(parse_instance(text), Err(Error::MalformedHeader { .. })),
                "{text:?}"
            );
        }
    }

    #[test]
    fn parse_and_trailing_errors() {
        assert!(matches!(
            parse_instance("bpp 2\n0.5 abc\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("bpp 2\n0.5 0.2\n0.1\n"),
            Err(Error::CountMismatch { line: 3, .. })
        ));
        assert!(matches!(
            parse_instance("dkp 2 2\n3 3\n1 1\n2 2\n"),
            Err(Error::CountMismatch {
                line: 5,
                found: 0,
                ..
            })
        ));
    }

    #[test]
    fn tsp_checks() {
        let ok = "tsp 3 sym metric\n0 1 2\n1 0 1.5\n2 1.5 0\n";
        assert!(parse_instance(ok).is_ok());
        let asym = "tsp 3 sym metric\n0 1 2\n1 0 1.5\n2 1.4 0\n";
        assert!(matches!(
            parse_instance(asym),
            Err(Error::OutOfRange { .. })
        ));
        let diag = "tsp 3 asym metric\n0 1 2\n1 0.1 1.5\n2 1.4 0\n";
        assert!(matches!(
            parse_instance(diag),
            Err(Error::OutOfRange { line: 3, .. })
        ));
    }

    #[test]
    fn dkp_hypothesis_checked_on_read() {
        let err = parse_instance("dkp 2 1\n10\n1 1\n3 4\n").unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }
}
