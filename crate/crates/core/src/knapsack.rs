//! Multidimensional 0-1 knapsack (d-KP).
//!
//! Items are ranked by a capacity-normalised efficiency coefficient
//! `g(j) = p(j) / sum_i w(i,j)/c(i)`. The divide-and-conquer split deals the
//! ranked items alternately into two halves and shares every capacity in
//! proportion to the weight each half carries.

use crate::dc::{self, DcResult, Decomposable, SplitPair};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DkpInstance {
    capacities: Vec<u64>,
    profits: Vec<u64>,
    /// `weights[i][j]`: weight of item `j` in constraint `i`.
    weights: Vec<Vec<u64>>,
}

impl DkpInstance {
    /// Build an instance and check that every item fits alone and that no
    /// constraint is slack (sum of weights exceeds capacity).
    pub fn new(capacities: Vec<u64>, profits: Vec<u64>, weights: Vec<Vec<u64>>) -> Result<Self> {
        let inst = Self::from_parts(capacities, profits, weights)?;
        if let Some(msg) = inst.hypothesis_violation() {
            return Err(Error::Hypothesis(msg));
        }
        Ok(inst)
    }

    /// Build an instance checking only shape and positivity of profits and
    /// weights. Capacities may be zero and items may be heavier than their
    /// capacity; such items can never be chosen.
    pub fn from_parts(
        capacities: Vec<u64>,
        profits: Vec<u64>,
        weights: Vec<Vec<u64>>,
    ) -> Result<Self> {
        if capacities.is_empty() {
            return Err(Error::InvalidInstance("no constraints".into()));
        }
        if profits.is_empty() {
            return Err(Error::InvalidInstance("no items".into()));
        }
        if weights.len() != capacities.len() {
            return Err(Error::InvalidInstance(format!(
                "{} weight rows for {} constraints",
                weights.len(),
                capacities.len()
            )));
        }
        if let Some(row) = weights.iter().find(|r| r.len() != profits.len()) {
            return Err(Error::InvalidInstance(format!(
                "weight row of length {} for {} items",
                row.len(),
                profits.len()
            )));
        }
        if profits.contains(&0) {
            return Err(Error::InvalidInstance("profits must be positive".into()));
        }
        if weights.iter().any(|r| r.contains(&0)) {
            return Err(Error::InvalidInstance("weights must be positive".into()));
        }
        Ok(Self {
            capacities,
            profits,
            weights,
        })
    }

    pub fn d(&self) -> usize {
        self.capacities.len()
    }

    pub fn n(&self) -> usize {
        self.profits.len()
    }

    pub fn capacities(&self) -> &[u64] {
        &self.capacities
    }

    pub fn profits(&self) -> &[u64] {
        &self.profits
    }

    pub fn weights(&self) -> &[Vec<u64>] {
        &self.weights
    }

    pub fn weight(&self, constraint: usize, item: usize) -> u64 {
        self.weights[constraint][item]
    }

    fn row_sum(&self, constraint: usize) -> u64 {
        self.weights[constraint].iter().sum()
    }

    pub fn satisfies_hypothesis(&self) -> bool {
        self.hypothesis_violation().is_none()
    }

    fn hypothesis_violation(&self) -> Option<String> {
        for (i, &c) in self.capacities.iter().enumerate() {
            if let Some(j) = self.weights[i].iter().position(|&w| w > c) {
                return Some(format!(
                    "item {} has weight {} > capacity {c} in constraint {}",
                    j + 1,
                    self.weights[i][j],
                    i + 1
                ));
            }
            let total = self.row_sum(i);
            if total <= c {
                return Some(format!(
                    "constraint {} is slack: total weight {total} <= capacity {c}",
                    i + 1
                ));
            }
        }
        None
    }

    /// Whether item `j` fits alone in every constraint.
    pub fn item_fits(&self, j: usize) -> bool {
        (0..self.d()).all(|i| self.weights[i][j] <= self.capacities[i])
    }

    /// Restrict to the given items, with new capacities.
    fn restrict(&self, items: &[usize], capacities: Vec<u64>) -> Self {
        Self {
            capacities,
            profits: items.iter().map(|&j| self.profits[j]).collect(),
            weights: self
                .weights
                .iter()
                .map(|row| items.iter().map(|&j| row[j]).collect())
                .collect(),
        }
    }

    pub fn efficiency(&self) -> EfficiencyOrder {
        dkp_efficiency(self)
    }

    pub fn tightness(&self) -> Vec<f64> {
        dkp_tightness(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DkpSolution {
    pub chosen: Vec<bool>,
    pub value: u64,
}

impl DkpSolution {
    pub fn empty(n: usize) -> Self {
        Self {
            chosen: vec![false; n],
            value: 0,
        }
    }

    pub fn from_chosen(inst: &DkpInstance, chosen: Vec<bool>) -> Self {
        let value = chosen
            .iter()
            .zip(inst.profits())
            .filter(|(&x, _)| x)
            .map(|(_, &p)| p)
            .sum();
        Self { chosen, value }
    }

    /// Load placed on each constraint.
    pub fn loads(&self, inst: &DkpInstance) -> Vec<u64> {
        inst.weights()
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.chosen)
                    .filter(|(_, &x)| x)
                    .map(|(&w, _)| w)
                    .sum()
            })
            .collect()
    }

    pub fn is_feasible(&self, inst: &DkpInstance) -> bool {
        self.chosen.len() == inst.n()
            && self
                .loads(inst)
                .iter()
                .zip(inst.capacities())
                .all(|(l, c)| l <= c)
    }

    pub fn chosen_items(&self) -> Vec<usize> {
        self.chosen
            .iter()
            .enumerate()
            .filter(|(_, &x)| x)
            .map(|(j, _)| j)
            .collect()
    }
}

/// Efficiency coefficients and the descending order they induce.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyOrder {
    pub coefficients: Vec<f64>,
    /// Item indices by non-increasing coefficient, ties by ascending index.
    pub order: Vec<usize>,
}

pub fn dkp_efficiency(inst: &DkpInstance) -> EfficiencyOrder {
    let coefficients: Vec<f64> = (0..inst.n())
        .map(|j| {
            let load: f64 = (0..inst.d())
                .map(|i| inst.weight(i, j) as f64 / inst.capacities[i] as f64)
                .sum();
            // zero capacity makes the load infinite and the item worthless
            inst.profits[j] as f64 / load
        })
        .collect();
    let order = exact_order(inst).unwrap_or_else(|| {
        let mut order: Vec<usize> = (0..inst.n()).collect();
        order.sort_by(|&a, &b| coefficients[b].total_cmp(&coefficients[a]).then(a.cmp(&b)));
        order
    });
    EfficiencyOrder {
        coefficients,
        order,
    }
}

/// Efficiency order from exact integer comparisons, so equal ratios tie
/// exactly and fall back to index order. With `P = prod_i c(i)` and
/// `S(j) = sum_i w(i,j) prod_{k != i} c(k)`, `g(j) = p(j) P / S(j)`, and
/// `g(a) > g(b)` iff `p(a) S(b) > p(b) S(a)`. `None` if the products do not
/// fit in 128 bits.
fn exact_order(inst: &DkpInstance) -> Option<Vec<usize>> {
    let caps: Vec<u128> = inst.capacities.iter().map(|&c| c as u128).collect();
    let mut order: Vec<usize> = (0..inst.n()).collect();
    if caps.contains(&0) {
        // every coefficient is zero
        return Some(order);
    }
    let mut scaled = Vec::with_capacity(inst.n());
    for j in 0..inst.n() {
        let mut s: u128 = 0;
        for i in 0..inst.d() {
            let mut term = inst.weight(i, j) as u128;
            for (k, &c) in caps.iter().enumerate() {
                if k != i {
                    term = term.checked_mul(c)?;
                }
            }
            s = s.checked_add(term)?;
        }
        scaled.push(s);
    }
    let max_p = *inst.profits.iter().max()? as u128;
    max_p.checked_mul(*scaled.iter().max()?)?;
    let p = |j: usize| inst.profits[j] as u128;
    order.sort_by(|&a, &b| (p(b) * scaled[a]).cmp(&(p(a) * scaled[b])).then(a.cmp(&b)));
    Some(order)
}

/// Tightness ratio `c(i) / sum_j w(i,j)` of every constraint.
pub fn dkp_tightness(inst: &DkpInstance) -> Vec<f64> {
    (0..inst.d())
        .map(|i| inst.capacities[i] as f64 / inst.row_sum(i) as f64)
        .collect()
}

/// Split along the efficiency order.
pub fn dkp_split(inst: &DkpInstance) -> Result<SplitPair<DkpInstance>> {
    dkp_split_with_order(inst, &dkp_efficiency(inst).order)
}

/// Split along an explicit item ranking: odd positions left, even right.
/// Capacity `c(i)` is shared as `c_lt(i) = ceil(c(i) * W_lt(i) / W(i))`,
/// `c_rt(i) = c(i) - c_lt(i)` where `W` is total weight on the constraint.
pub fn dkp_split_with_order(inst: &DkpInstance, order: &[usize]) -> Result<SplitPair<DkpInstance>> {
    let n = inst.n();
    if n < 2 {
        return Err(Error::TooSmallToSplit { size: n, min: 2 });
    }
    check_permutation(order, n)?;
    let (left_map, right_map) = dc::alternate(order);
    let mut c_lt = Vec::with_capacity(inst.d());
    let mut c_rt = Vec::with_capacity(inst.d());
    for i in 0..inst.d() {
        let total = inst.row_sum(i) as u128;
        let left: u128 = left_map.iter().map(|&j| inst.weight(i, j) as u128).sum();
        let c = inst.capacities[i] as u128;
        let share = (c * left).div_ceil(total) as u64;
        c_lt.push(share);
        c_rt.push(inst.capacities[i] - share);
    }
    let left = inst.restrict(&left_map, c_lt);
    let right = inst.restrict(&right_map, c_rt);
    let flagged = !(left.satisfies_hypothesis() && right.satisfies_hypothesis());
    Ok(SplitPair {
        left,
        right,
        left_map,
        right_map,
        flagged,
    })
}

pub(crate) fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::InvalidArgument(format!(
            "order has {} entries for {n} items",
            order.len()
        )));
    }
    for &j in order {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return Err(Error::InvalidArgument(format!(
                "order is not a permutation of 0..{n}"
            )));
        }
    }
    Ok(())
}

/// Scan items by efficiency and take each one that fits every residual
/// capacity.
pub fn dkp_solve_greedy(inst: &DkpInstance) -> DkpSolution {
    let mut residual = inst.capacities.clone();
    let mut chosen = vec![false; inst.n()];
    for j in dkp_efficiency(inst).order {
        if (0..inst.d()).all(|i| inst.weight(i, j) <= residual[i]) {
            for (i, r) in residual.iter_mut().enumerate() {
                *r -= inst.weight(i, j);
            }
            chosen[j] = true;
        }
    }
    DkpSolution::from_chosen(inst, chosen)
}

/// Optimal solution by depth-first branch and bound.
///
/// Items are branched in efficiency order, "take" before "skip". A node is
/// pruned unless the tightest single-constraint fractional (Dantzig) bound
/// could strictly beat the incumbent, so among optimal solutions the one
/// whose chosen positions in efficiency order are lexicographically smallest
/// is returned.
pub fn dkp_solve_exact(inst: &DkpInstance) -> DkpSolution {
    let eff = dkp_efficiency(inst);
    let items: Vec<usize> = eff
        .order
        .iter()
        .copied()
        .filter(|&j| inst.item_fits(j))
        .collect();
    let m = items.len();
    let d = inst.d();
    let profit: Vec<u64> = items.iter().map(|&j| inst.profits[j]).collect();
    // weight[pos * d + i]
    let weight: Vec<u64> = items
        .iter()
        .flat_map(|&j| (0..d).map(move |i| inst.weight(i, j)))
        .collect();
    // per constraint: branch positions by decreasing profit/weight
    let ratio_order: Vec<Vec<usize>> = (0..d)
        .map(|i| {
            let mut ord: Vec<usize> = (0..m).collect();
            ord.sort_by(|&a, &b| {
                let ra = profit[a] as f64 / weight[a * d + i] as f64;
                let rb = profit[b] as f64 / weight[b * d + i] as f64;
                rb.total_cmp(&ra).then(a.cmp(&b))
            });
            ord
        })
        .collect();

    let mut search = BranchAndBound {
        d,
        profit: &profit,
        weight: &weight,
        ratio_order: &ratio_order,
        residual: inst.capacities.clone(),
        taken: vec![false; m],
        best_value: 0,
        best: vec![false; m],
    };
    search.descend(0, 0);

    let mut chosen = vec![false; inst.n()];
    for (pos, &j) in items.iter().enumerate() {
        chosen[j] = search.best[pos];
    }
    DkpSolution::from_chosen(inst, chosen)
}

struct BranchAndBound<'a> {
    d: usize,
    profit: &'a [u64],
    weight: &'a [u64],
    ratio_order: &'a [Vec<usize>],
    residual: Vec<u64>,
    taken: Vec<bool>,
    best_value: u64,
    best: Vec<bool>,
}

impl BranchAndBound<'_> {
    fn descend(&mut self, pos: usize, value: u64) {
        if value > self.best_value {
            self.best_value = value;
            self.best.copy_from_slice(&self.taken);
        }
        if pos == self.profit.len() || self.upper_bound(pos, value) <= self.best_value {
            return;
        }
        let d = self.d;
        let w = &self.weight[pos * d..(pos + 1) * d];
        if w.iter().zip(&self.residual).all(|(w, r)| w <= r) {
            for (r, w) in self.residual.iter_mut().zip(w) {
                *r -= w;
            }
            self.taken[pos] = true;
            self.descend(pos + 1, value + self.profit[pos]);
            self.taken[pos] = false;
            for (r, w) in self
                .residual
                .iter_mut()
                .zip(&self.weight[pos * d..(pos + 1) * d])
            {
                *r += w;
            }
        }
        self.descend(pos + 1, value);
    }

    /// Integer upper bound on any completion of the partial solution that
    /// has fixed positions `< pos`.
    fn upper_bound(&self, pos: usize, value: u64) -> u64 {
        let mut bound = f64::INFINITY;
        for i in 0..self.d {
            let mut cap = self.residual[i];
            let mut gain = 0.0;
            for &k in &self.ratio_order[i] {
                if k < pos {
                    continue;
                }
                let w = self.weight[k * self.d + i];
                if w <= cap {
                    cap -= w;
                    gain += self.profit[k] as f64;
                } else {
                    gain += self.profit[k] as f64 * cap as f64 / w as f64;
                    break;
                }
            }
            bound = bound.min(gain);
        }
        // profits are integers, so the fractional part of the bound is slack
        value + (bound + 1e-7).floor() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DkpOracle {
    Exact,
    Greedy,
}

impl DkpOracle {
    pub fn solve(self, inst: &DkpInstance) -> DkpSolution {
        match self {
            DkpOracle::Exact => dkp_solve_exact(inst),
            DkpOracle::Greedy => dkp_solve_greedy(inst),
        }
    }
}

impl std::str::FromStr for DkpOracle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(DkpOracle::Exact),
            "greedy" => Ok(DkpOracle::Greedy),
            _ => Err(Error::InvalidArgument(format!("unknown d-KP oracle {s:?}"))),
        }
    }
}

impl Decomposable for DkpInstance {
    type Solution = DkpSolution;

    fn min_split_size() -> usize {
        2
    }

    fn size(&self) -> usize {
        self.n()
    }

    fn split(&self) -> Result<SplitPair<Self>> {
        dkp_split(self)
    }

    fn recombine(
        &self,
        pair: &SplitPair<Self>,
        left: DkpSolution,
        right: DkpSolution,
    ) -> Result<DkpSolution> {
        let mut chosen = vec![false; self.n()];
        for (map, sol) in [(&pair.left_map, &left), (&pair.right_map, &right)] {
            for (k, &j) in map.iter().enumerate() {
                chosen[j] = sol.chosen[k];
            }
        }
        Ok(DkpSolution {
            chosen,
            value: left.value + right.value,
        })
    }

    fn objective(solution: &DkpSolution) -> f64 {
        solution.value as f64
    }
}

pub fn dkp_dc(
    inst: &DkpInstance,
    oracle: DkpOracle,
    depth: usize,
) -> Result<DcResult<DkpSolution>> {
    dc::dc_solve(inst, &|i: &DkpInstance| Ok(oracle.solve(i)), depth)
}
