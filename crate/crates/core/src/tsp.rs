//! Travelling salesman on complete directed graphs.
//!
//! Vertices are ranked by total incident distance, dealt alternately into
//! two induced subgraphs, and the two child tours are joined by cutting the
//! most expensive arc of each and splicing them with the one pair of
//! replacement arcs that keeps both orientations.

use crate::dc::{self, DcResult, Decomposable, SplitPair};
use crate::error::{Error, Result};

/// Largest instance Held-Karp accepts (table of `2^(n-1) * (n-1)` costs).
pub const EXACT_LIMIT: usize = 18;

/// Relative tolerance used when comparing tour costs.
pub const COST_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TspInstance {
    n: usize,
    /// Row-major `n * n` distance matrix.
    dist: Vec<f64>,
    symmetric: bool,
    metric: bool,
}

impl TspInstance {
    /// `dist` is row-major `n * n`. The symmetry flag is verified here; the
    /// metric flag is trusted (see [`TspInstance::triangle_violation`]).
    pub fn new(n: usize, dist: Vec<f64>, symmetric: bool, metric: bool) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInstance(format!(
                "need at least 3 vertices, got {n}"
            )));
        }
        if dist.len() != n * n {
            return Err(Error::InvalidInstance(format!(
                "{} distances for {n} vertices",
                dist.len()
            )));
        }
        if let Some(d) = dist.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return Err(Error::InvalidInstance(format!("bad distance {d}")));
        }
        if let Some(u) = (0..n).find(|&u| dist[u * n + u] != 0.0) {
            return Err(Error::InvalidInstance(format!(
                "nonzero diagonal at vertex {}",
                u + 1
            )));
        }
        let inst = Self {
            n,
            dist,
            symmetric,
            metric,
        };
        if symmetric && !inst.is_symmetric() {
            return Err(Error::InvalidInstance(
                "matrix flagged symmetric is not".into(),
            ));
        }
        Ok(inst)
    }

    pub fn from_rows(rows: Vec<Vec<f64>>, symmetric: bool, metric: bool) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInstance(
                "distance matrix is not square".into(),
            ));
        }
        Self::new(n, rows.into_iter().flatten().collect(), symmetric, metric)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.n + v]
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn metric(&self) -> bool {
        self.metric
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| (u + 1..self.n).all(|v| self.d(u, v) == self.d(v, u)))
    }

    /// First triple `(u, v, w)` with `d(u,v) > d(u,w) + d(w,v)` beyond a
    /// relative tolerance. O(n^3).
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    let direct = self.d(u, v);
                    let detour = self.d(u, w) + self.d(w, v);
                    if direct > detour + COST_TOLERANCE * detour.max(1.0) {
                        return Some((u, v, w));
                    }
                }
            }
        }
        None
    }

    /// Induced subgraph on `vertices`, in that order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let dist = vertices
            .iter()
            .flat_map(|&u| vertices.iter().map(move |&v| self.d(u, v)))
            .collect();
        Self {
            n: vertices.len(),
            dist,
            symmetric: self.symmetric,
            metric: self.metric,
        }
    }

    pub fn cycle_cost(&self, order: &[usize]) -> f64 {
        let k = order.len();
        (0..k).map(|i| self.d(order[i], order[(i + 1) % k])).sum()
    }
}

/// A Hamiltonian cycle `order[0] -> order[1] -> ... -> order[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    pub order: Vec<usize>,
    pub cost: f64,
}

impl Tour {
    pub fn new(inst: &TspInstance, order: Vec<usize>) -> Result<Self> {
        crate::knapsack::check_permutation(&order, inst.n())?;
        Ok(Self {
            cost: inst.cycle_cost(&order),
            order,
        })
    }

    /// Same cycle rotated to start at its lowest vertex.
    pub fn canonical(&self) -> Tour {
        let start = self
            .order
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map_or(0, |(i, _)| i);
        let mut order = self.order.clone();
        order.rotate_left(start);
        Tour {
            order,
            cost: self.cost,
        }
    }

    /// Arcs of the cycle in traversal order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.order.len();
        (0..k).map(move |i| (self.order[i], self.order[(i + 1) % k]))
    }

    pub fn is_hamiltonian(&self, n: usize) -> bool {
        crate::knapsack::check_permutation(&self.order, n).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexEfficiency {
    pub g: Vec<f64>,
    /// Vertices by non-decreasing `g`, ties by ascending index.
    pub order: Vec<usize>,
}

/// `g(u) = sum_{v != u} d(u,v) + d(v,u)`.
pub fn tsp_efficiency(inst: &TspInstance) -> VertexEfficiency {
    let n = inst.n;
    let g: Vec<f64> = (0..n)
        .map(|u| {
            (0..n)
                .filter(|&v| v != u)
                .map(|v| inst.d(u, v) + inst.d(v, u))
                .sum()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g[a].total_cmp(&g[b]).then(a.cmp(&b)));
    VertexEfficiency { g, order }
}

pub fn tsp_split(inst: &TspInstance) -> Result<SplitPair<TspInstance>> {
    tsp_split_with_order(inst, &tsp_efficiency(inst).order)
}

/// Split along an explicit vertex ranking: odd positions left, even right.
/// Each half needs at least three vertices, so `n >= 6`.
pub fn tsp_split_with_order(inst: &TspInstance, order: &[usize]) -> Result<SplitPair<TspInstance>> {
    if inst.n < 6 {
        return Err(Error::TooSmallToSplit {
            size: inst.n,
            min: 6,
        });
    }
    crate::knapsack::check_permutation(order, inst.n)?;
    let (left_map, right_map) = dc::alternate(order);
    Ok(SplitPair {
        left: inst.induced(&left_map),
        right: inst.induced(&right_map),
        left_map,
        right_map,
        flagged: false,
    })
}

/// Arcs cut and added by a merge, in parent vertex numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergeArcs {
    pub removed_left: (usize, usize),
    pub removed_right: (usize, usize),
    pub inserted: [(usize, usize); 2],
}

/// Position `i` of the most expensive arc `(t[i], t[i+1])`, lowest on ties.
fn most_expensive_arc(inst: &TspInstance, t: &[usize]) -> usize {
    let k = t.len();
    let mut best = 0;
    let mut best_cost = f64::NEG_INFINITY;
    for i in 0..k {
        let c = inst.d(t[i], t[(i + 1) % k]);
        if c > best_cost {
            best = i;
            best_cost = c;
        }
    }
    best
}

/// Join two vertex-disjoint tours covering every vertex of `inst`.
pub fn tsp_merge(left: &Tour, right: &Tour, inst: &TspInstance) -> Result<Tour> {
    tsp_merge_detailed(left, right, inst).map(|(t, _)| t)
}

pub fn tsp_merge_detailed(
    left: &Tour,
    right: &Tour,
    inst: &TspInstance,
) -> Result<(Tour, MergeArcs)> {
    let (u, v) = (&left.order, &right.order);
    if u.is_empty() || v.is_empty() {
        return Err(Error::BadPartition("empty tour".into()));
    }
    let mut seen = vec![false; inst.n];
    for &x in u.iter().chain(v) {
        if x >= inst.n {
            return Err(Error::BadPartition(format!("vertex {x} out of range")));
        }
        if std::mem::replace(&mut seen[x], true) {
            return Err(Error::BadPartition(format!(
                "vertex {} appears twice",
                x + 1
            )));
        }
    }
    if u.len() + v.len() != inst.n {
        return Err(Error::BadPartition(format!(
            "tours cover {} of {} vertices",
            u.len() + v.len(),
            inst.n
        )));
    }
    let (p, q) = (u.len(), v.len());
    let i = most_expensive_arc(inst, u);
    let j = most_expensive_arc(inst, v);
    let mut order = Vec::with_capacity(inst.n);
    order.extend_from_slice(&u[..=i]);
    order.extend((1..=q).map(|s| v[(j + s) % q]));
    order.extend_from_slice(&u[i + 1..]);
    let arcs = MergeArcs {
        removed_left: (u[i], u[(i + 1) % p]),
        removed_right: (v[j], v[(j + 1) % q]),
        inserted: [(u[i], v[(j + 1) % q]), (v[j], u[(i + 1) % p])],
    };
    let cost = inst.cycle_cost(&order);
    Ok((Tour { order, cost }, arcs))
}

/// Optimal tour by Held-Karp dynamic programming. Among optimal tours the
/// lexicographically smallest one starting at vertex 0 is returned.
pub fn tsp_solve_exact(inst: &TspInstance) -> Result<Tour> {
    let n = inst.n;
    if n > EXACT_LIMIT {
        return Err(Error::ExactLimit {
            size: n,
            limit: EXACT_LIMIT,
        });
    }
    // vertices 1..n map to bits 0..m
    let m = n - 1;
    let full = (1usize << m) - 1;
    // rest[mask * m + k]: cheapest way to start at vertex k+1 having visited
    // `mask` (which contains k), cover the rest and return to 0
    let mut rest = vec![f64::INFINITY; (full + 1) * m];
    for k in 0..m {
        rest[full * m + k] = inst.d(k + 1, 0);
    }
    for mask in (1..full).rev() {
        for k in (0..m).filter(|k| mask & (1 << k) != 0) {
            let mut best = f64::INFINITY;
            for l in (0..m).filter(|l| mask & (1 << l) == 0) {
                let c = inst.d(k + 1, l + 1) + rest[(mask | 1 << l) * m + l];
                if c < best {
                    best = c;
                }
            }
            rest[mask * m + k] = best;
        }
    }
    let optimum = (0..m)
        .map(|l| inst.d(0, l + 1) + rest[(1 << l) * m + l])
        .fold(f64::INFINITY, f64::min);
    let slack = COST_TOLERANCE * optimum.abs().max(1.0);

    // walk forward taking the smallest next vertex that stays optimal
    let mut order = Vec::with_capacity(n);
    order.push(0);
    let mut mask = 0usize;
    let mut at = 0usize;
    let mut remaining = optimum;
    while mask != full {
        let next = (0..m)
            .filter(|l| mask & (1 << l) == 0)
            .find(|&l| inst.d(at, l + 1) + rest[(mask | 1 << l) * m + l] <= remaining + slack)
            .expect("held-karp table is consistent");
        remaining = rest[(mask | 1 << next) * m + next];
        mask |= 1 << next;
        at = next + 1;
        order.push(at);
    }
    let cost = inst.cycle_cost(&order);
    Ok(Tour { order, cost })
}

/// Nearest neighbour from vertex 0 (ties to the lowest index), improved by
/// first-improvement 2-opt when the instance is symmetric.
pub fn tsp_solve_heuristic(inst: &TspInstance) -> Tour {
    let n = inst.n;
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut at = 0;
    visited[0] = true;
    order.push(0);
    for _ in 1..n {
        let mut next = usize::MAX;
        for (v, &seen) in visited.iter().enumerate() {
            if !seen && (next == usize::MAX || inst.d(at, v) < inst.d(at, next)) {
                next = v;
            }
        }
        visited[next] = true;
        order.push(next);
        at = next;
    }
    if inst.symmetric {
        two_opt(inst, &mut order);
    }
    let cost = inst.cycle_cost(&order);
    Tour { order, cost }
}

fn two_opt(inst: &TspInstance, order: &mut [usize]) {
    let n = order.len();
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..n - 1 {
            for j in i + 2..n {
                let (a, b) = (order[i], order[i + 1]);
                let (c, d) = (order[j], order[(j + 1) % n]);
                if a == d {
                    continue;
                }
                let delta = inst.d(a, c) + inst.d(b, d) - inst.d(a, b) - inst.d(c, d);
                if delta < -1e-12 {
                    order[i + 1..=j].reverse();
                    improved = true;
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TspOracle {
    Exact,
    Heuristic,
}

impl TspOracle {
    pub fn solve(self, inst: &TspInstance) -> Result<Tour> {
        match self {
            TspOracle::Exact => tsp_solve_exact(inst),
            TspOracle::Heuristic => Ok(tsp_solve_heuristic(inst)),
        }
    }
}

impl std::str::FromStr for TspOracle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(TspOracle::Exact),
            "heuristic" => Ok(TspOracle::Heuristic),
            _ => Err(Error::InvalidArgument(format!("unknown TSP oracle {s:?}"))),
        }
    }
}

impl Decomposable for TspInstance {
    type Solution = Tour;

    fn min_split_size() -> usize {
        6
    }

    fn size(&self) -> usize {
        self.n
    }

    fn split(&self) -> Result<SplitPair<Self>> {
        tsp_split(self)
    }

    fn recombine(&self, pair: &SplitPair<Self>, left: Tour, right: Tour) -> Result<Tour> {
        let lift = |t: Tour, map: &[usize]| Tour {
            order: t.order.iter().map(|&k| map[k]).collect(),
            cost: t.cost,
        };
        tsp_merge(
            &lift(left, &pair.left_map),
            &lift(right, &pair.right_map),
            self,
        )
    }

    fn objective(solution: &Tour) -> f64 {
        solution.cost
    }
}

pub fn tsp_dc(inst: &TspInstance, oracle: TspOracle, depth: usize) -> Result<DcResult<Tour>> {
    dc::dc_solve(inst, &|i: &TspInstance| oracle.solve(i), depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn table6() -> TspInstance {
        TspInstance::from_rows(
            vec![
                vec![0.00, 0.61, 0.10, 1.08, 0.46, 0.11],
                vec![0.61, 0.00, 0.53, 0.71, 0.17, 0.54],
                vec![0.10, 0.53, 0.00, 0.98, 0.39, 0.12],
                vec![1.08, 0.71, 0.98, 0.00, 0.83, 1.07],
                vec![0.46, 0.17, 0.39, 0.83, 0.00, 0.38],
                vec![0.11, 0.54, 0.12, 1.07, 0.38, 0.00],
            ],
            true,
            true,
        )
        .unwrap()
    }

    #[test]
    fn efficiency_table6() {
        let eff = tsp_efficiency(&table6());
        assert!((eff.g[0] - 4.72).abs() < 1e-12);
        for u in 0..6 {
            let row: f64 = table6().row(u).iter().sum();
            assert!((eff.g[u] - 2.0 * row).abs() < 1e-12);
        }
        // v3, v6, v5, v1, v2, v4
        assert_eq!(eff.order, vec![2, 5, 4, 0, 1, 3]);
    }

    #[test]
    fn efficiency_shift_keeps_order() {
        let base = table6();
        let shifted: Vec<f64> = (0..36)
            .map(|k| {
                if k / 6 == k % 6 {
                    0.0
                } else {
                    base.dist[k] + 0.75
                }
            })
            .collect();
        let shifted = TspInstance::new(6, shifted, true, true).unwrap();
        let (a, b) = (tsp_efficiency(&base), tsp_efficiency(&shifted));
        assert_eq!(a.order, b.order);
        for u in 0..6 {
            assert!((b.g[u] - a.g[u] - 2.0 * 0.75 * 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn split_with_printed_order() {
        // v3, v5, v2, v6, v1, v4
        let pair = tsp_split_with_order(&table6(), &[2, 4, 1, 5, 0, 3]).unwrap();
        assert_eq!(pair.left_map, vec![2, 1, 0]);
        assert_eq!(pair.right_map, vec![4, 5, 3]);
        for (child, map) in [(&pair.left, &pair.left_map), (&pair.right, &pair.right_map)] {
            for a in 0..3 {
                for b in 0..3 {
                    assert_eq!(child.d(a, b), table6().d(map[a], map[b]));
                }
            }
        }
    }

    #[test]
    fn split_increasing_g() {
        let n = 6;
        let dist: Vec<f64> = (0..n * n)
            .map(|k| {
                let (u, v) = (k / n, k % n);
                if u == v {
                    0.0
                } else {
                    (u + v) as f64
                }
            })
            .collect();
        let inst = TspInstance::new(n, dist, true, false).unwrap();
        assert_eq!(tsp_split(&inst).unwrap().left_map, vec![0, 2, 4]);
    }

    #[test]
    fn split_rejects_small() {
        let inst = table6().induced(&[0, 1, 2, 3, 4]);
        assert!(matches!(
            tsp_split(&inst),
            Err(Error::TooSmallToSplit { min: 6, .. })
        ));
    }

    #[test]
    fn merge_figure8() {
        let inst = table6();
        let left = Tour {
            order: vec![0, 1, 2],
            cost: inst.cycle_cost(&[0, 1, 2]),
        };
        let right = Tour {
            order: vec![3, 5, 4],
            cost: inst.cycle_cost(&[3, 5, 4]),
        };
        let (merged, arcs) = tsp_merge_detailed(&left, &right, &inst).unwrap();
        assert_eq!(arcs.removed_left, (0, 1));
        assert_eq!(arcs.removed_right, (3, 5));
        assert_eq!(arcs.inserted, [(0, 5), (3, 1)]);
        // v1 v6 v5 v4 v2 v3
        assert_eq!(merged.order, vec![0, 5, 4, 3, 1, 2]);
        let expected = left.cost + right.cost - 0.61 - 1.07 + 0.11 + 0.71;
        assert!((merged.cost - expected).abs() < 1e-12);
    }

    #[test]
    fn merge_ties_take_first_arc() {
        let n = 6;
        let dist: Vec<f64> = (0..n * n)
            .map(|k| if k / n == k % n { 0.0 } else { 1.0 })
            .collect();
        let inst = TspInstance::new(n, dist, true, true).unwrap();
        let l = Tour {
            order: vec![0, 1, 2],
            cost: 3.0,
        };
        let r = Tour {
            order: vec![3, 4, 5],
            cost: 3.0,
        };
        let (t, arcs) = tsp_merge_detailed(&l, &r, &inst).unwrap();
        assert_eq!(arcs.removed_left, (0, 1));
        assert_eq!(arcs.removed_right, (3, 4));
        assert_eq!(t.order, vec![0, 4, 5, 3, 1, 2]);
    }

    #[test]
    fn merge_rejects_bad_partitions() {
        let inst = table6();
        let t = |o: Vec<usize>| Tour {
            order: o,
            cost: 0.0,
        };
        assert!(tsp_merge(&t(vec![0, 1, 2]), &t(vec![2, 3, 4, 5]), &inst).is_err());
        assert!(tsp_merge(&t(vec![0, 1, 2]), &t(vec![3, 4]), &inst).is_err());
        assert!(tsp_merge(&t(vec![0, 1, 2]), &t(vec![3, 4, 9]), &inst).is_err());
    }

    #[test]
    fn exact_triangle() {
        let inst = TspInstance::from_rows(
            vec![
                vec![0.0, 1.0, 5.0],
                vec![2.0, 0.0, 1.0],
                vec![1.0, 7.0, 0.0],
            ],
            false,
            false,
        )
        .unwrap();
        let t = tsp_solve_exact(&inst).unwrap();
        // 0->1->2->0 costs 3, 0->2->1->0 costs 14
        assert_eq!(t.order, vec![0, 1, 2]);
        assert_eq!(t.cost, 3.0);
    }

    #[test]
    fn exact_limit_enforced() {
        let n = EXACT_LIMIT + 1;
        let inst = TspInstance::new(n, vec![0.0; n * n], true, true).unwrap();
        assert!(matches!(
            tsp_solve_exact(&inst),
            Err(Error::ExactLimit { .. })
        ));
    }

    #[test]
    fn exact_lexicographic_tie_break() {
        let n = 5;
        let dist: Vec<f64> = (0..n * n)
            .map(|k| if k / n == k % n { 0.0 } else { 2.0 })
            .collect();
        let inst = TspInstance::new(n, dist, true, true).unwrap();
        let t = tsp_solve_exact(&inst).unwrap();
        assert_eq!(t.order, vec![0, 1, 2, 3, 4]);
        assert_eq!(t.cost, 10.0);
        let h = tsp_solve_heuristic(&inst);
        assert_eq!(h.cost, 10.0);
    }

    #[test]
    fn heuristic_asymmetric_is_nearest_neighbour() {
        let inst = TspInstance::from_rows(
            vec![
                vec![0.0, 1.0, 9.0, 9.0],
                vec![9.0, 0.0, 1.0, 9.0],
                vec![9.0, 9.0, 0.0, 1.0],
                vec![1.0, 9.0, 9.0, 0.0],
            ],
            false,
            true,
        )
        .unwrap();
        let t = tsp_solve_heuristic(&inst);
        assert_eq!(t.order, vec![0, 1, 2, 3]);
        assert_eq!(t.cost, 4.0);
    }

    #[test]
    fn dc_table6_exact() {
        let inst = table6();
        let res = tsp_dc(&inst, TspOracle::Exact, 1).unwrap();
        assert!(res.combined.is_hamiltonian(6));
        let opt = tsp_solve_exact(&inst).unwrap();
        assert!(res.z_dc >= opt.cost - 1e-12);
        assert_eq!(res.t_dc, res.t_left + res.t_right);
    }

    #[test]
    fn flags_and_validation() {
        assert!(TspInstance::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]], true, true).is_err());
        assert!(TspInstance::from_rows(
            vec![
                vec![0.0, 1.0, 1.0],
                vec![2.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0]
            ],
            true,
            true
        )
        .is_err());
        assert!(TspInstance::from_rows(
            vec![
                vec![1.0, 1.0, 1.0],
                vec![1.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0]
            ],
            true,
            true
        )
        .is_err());
        let bad = TspInstance::from_rows(
            vec![
                vec![0.0, 5.0, 1.0],
                vec![5.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
            ],
            true,
            false,
        )
        .unwrap();
        assert_eq!(bad.triangle_violation(), Some((0, 1, 2)));
        assert_eq!(table6().induced(&[0, 2, 5]).triangle_violation(), None);
    }

    #[test]
    fn canonical_rotation() {
        let t = Tour {
            order: vec![3, 1, 0, 2],
            cost: 1.0,
        };
        assert_eq!(t.canonical().order, vec![0, 2, 3, 1]);
    }
}
