//! One-dimensional bin packing with unit bins and the three classic
//! decreasing-order heuristics.

use crate::dc::{self, DcResult, Decomposable, SplitPair};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BppInstance {
    weights: Vec<f64>,
}

impl BppInstance {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInstance("no items".into()));
        }
        if let Some((j, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, &w)| !(w > 0.0 && w <= 1.0))
        {
            return Err(Error::InvalidInstance(format!(
                "weight {w} of item {} outside (0, 1]",
                j + 1
            )));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Item indices by non-increasing weight, ties by ascending index.
    pub fn decreasing_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&a, &b| self.weights[b].total_cmp(&self.weights[a]).then(a.cmp(&b)));
        order
    }

    /// `ceil(sum of weights)`, a lower bound on any packing.
    pub fn volume_bound(&self) -> usize {
        self.weights.iter().sum::<f64>().ceil() as usize
    }
}

/// Item-to-bin assignment. Bins are numbered `0..bin_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    pub bin_of: Vec<usize>,
    pub bin_count: usize,
}

impl Packing {
    /// Items of each bin, in ascending item order.
    pub fn bins(&self) -> Vec<Vec<usize>> {
        let mut bins = vec![Vec::new(); self.bin_count];
        for (j, &b) in self.bin_of.iter().enumerate() {
            if b < self.bin_count {
                bins[b].push(j);
            }
        }
        bins
    }

    pub fn loads(&self, inst: &BppInstance) -> Vec<f64> {
        let mut loads = vec![0.0; self.bin_count];
        for (j, &b) in self.bin_of.iter().enumerate() {
            if b < self.bin_count {
                loads[b] += inst.weights[j];
            }
        }
        loads
    }
}

/// Slack on bin capacity absorbing float rounding in accumulated loads.
pub const LOAD_TOLERANCE: f64 = 1e-9;

fn fits(load: f64, w: f64) -> bool {
    load + w <= 1.0 + LOAD_TOLERANCE
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PackingAlg {
    Nfd,
    Ffd,
    Bfd,
}

impl PackingAlg {
    pub const ALL: [PackingAlg; 3] = [PackingAlg::Nfd, PackingAlg::Ffd, PackingAlg::Bfd];

    pub fn pack(self, inst: &BppInstance) -> Packing {
        match self {
            PackingAlg::Nfd => bpp_nfd(inst),
            PackingAlg::Ffd => bpp_ffd(inst),
            PackingAlg::Bfd => bpp_bfd(inst),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PackingAlg::Nfd => "nfd",
            PackingAlg::Ffd => "ffd",
            PackingAlg::Bfd => "bfd",
        }
    }
}

impl std::str::FromStr for PackingAlg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nfd" => Ok(PackingAlg::Nfd),
            "ffd" => Ok(PackingAlg::Ffd),
            "bfd" => Ok(PackingAlg::Bfd),
            _ => Err(Error::InvalidArgument(format!(
                "unknown packing algorithm {s:?}"
            ))),
        }
    }
}

impl std::fmt::Display for PackingAlg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Next fit decreasing: only the most recent bin is open.
pub fn bpp_nfd(inst: &BppInstance) -> Packing {
    let mut bin_of = vec![0; inst.n()];
    let mut bins = 0;
    let mut load = f64::INFINITY;
    for j in inst.decreasing_order() {
        let w = inst.weights[j];
        if !fits(load, w) {
            bins += 1;
            load = 0.0;
        }
        load += w;
        bin_of[j] = bins - 1;
    }
    Packing {
        bin_of,
        bin_count: bins,
    }
}

/// First fit decreasing: lowest-numbered open bin with room.
pub fn bpp_ffd(inst: &BppInstance) -> Packing {
    pack_with(inst, |loads, w| loads.iter().position(|&l| fits(l, w)))
}

/// Best fit decreasing: the fullest open bin with room, lowest index on ties.
pub fn bpp_bfd(inst: &BppInstance) -> Packing {
    pack_with(inst, best_fit)
}

fn best_fit(loads: &[f64], w: f64) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (b, &l) in loads.iter().enumerate() {
        if fits(l, w) && best.is_none_or(|k| l > loads[k]) {
            best = Some(b);
        }
    }
    best
}

fn pack_with(inst: &BppInstance, choose: impl Fn(&[f64], f64) -> Option<usize>) -> Packing {
    let mut bin_of = vec![0; inst.n()];
    let mut loads: Vec<f64> = Vec::new();
    for j in inst.decreasing_order() {
        let w = inst.weights[j];
        let b = choose(&loads, w).unwrap_or_else(|| {
            loads.push(0.0);
            loads.len() - 1
        });
        loads[b] += w;
        bin_of[j] = b;
    }
    Packing {
        bin_of,
        bin_count: loads.len(),
    }
}

/// Deal the weight-sorted items alternately into two halves.
pub fn bpp_split(inst: &BppInstance) -> Result<SplitPair<BppInstance>> {
    let n = inst.n();
    if n < 2 {
        return Err(Error::TooSmallToSplit { size: n, min: 2 });
    }
    let (left_map, right_map) = dc::alternate(&inst.decreasing_order());
    let restrict = |map: &[usize]| BppInstance {
        weights: map.iter().map(|&j| inst.weights[j]).collect(),
    };
    Ok(SplitPair {
        left: restrict(&left_map),
        right: restrict(&right_map),
        left_map,
        right_map,
        flagged: false,
    })
}

/// True iff every item sits in exactly one of `bin_count` bins, no bin is
/// empty and no load exceeds 1 (up to [`LOAD_TOLERANCE`]).
pub fn bpp_verify(inst: &BppInstance, packing: &Packing) -> bool {
    if packing.bin_of.len() != inst.n() || packing.bin_count == 0 {
        return false;
    }
    if packing.bin_of.iter().any(|&b| b >= packing.bin_count) {
        return false;
    }
    let mut used = vec![false; packing.bin_count];
    for &b in &packing.bin_of {
        used[b] = true;
    }
    used.iter().all(|&u| u)
        && packing
            .loads(inst)
            .iter()
            .all(|&l| l <= 1.0 + LOAD_TOLERANCE)
}

impl Decomposable for BppInstance {
    type Solution = Packing;

    fn min_split_size() -> usize {
        2
    }

    fn size(&self) -> usize {
        self.n()
    }

    fn split(&self) -> Result<SplitPair<Self>> {
        bpp_split(self)
    }

    /// Left bins keep their numbers; right bins follow them.
    fn recombine(&self, pair: &SplitPair<Self>, left: Packing, right: Packing) -> Result<Packing> {
        let mut bin_of = vec![0; self.n()];
        for (k, &j) in pair.left_map.iter().enumerate() {
            bin_of[j] = left.bin_of[k];
        }
        for (k, &j) in pair.right_map.iter().enumerate() {
            bin_of[j] = left.bin_count + right.bin_of[k];
        }
        Ok(Packing {
            bin_of,
            bin_count: left.bin_count + right.bin_count,
        })
    }

    fn objective(solution: &Packing) -> f64 {
        solution.bin_count as f64
    }
}

pub fn bpp_dc(inst: &BppInstance, alg: PackingAlg, depth: usize) -> Result<DcResult<Packing>> {
    dc::dc_solve(inst, &|i: &BppInstance| Ok(alg.pack(i)), depth)
}
