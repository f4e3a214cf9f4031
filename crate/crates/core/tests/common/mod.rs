#![allow(dead_code)]

use dcopt::knapsack::DkpInstance;
use dcopt::tsp::TspInstance;

/// Best profit over all 2^N subsets.
pub fn dkp_brute(inst: &DkpInstance) -> u64 {
    let n = inst.n();
    assert!(n <= 20);
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let fits = (0..inst.d()).all(|i| {
            let load: u64 = (0..n)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| inst.weight(i, j))
                .sum();
            load <= inst.capacities()[i]
        });
        if fits {
            let value = (0..n)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| inst.profits()[j])
                .sum();
            best = best.max(value);
        }
    }
    best
}

/// Cheapest Hamiltonian cycle over all (N-1)! orders starting at vertex 0.
pub fn tsp_brute(inst: &TspInstance) -> f64 {
    fn go(inst: &TspInstance, path: &mut Vec<usize>, used: &mut [bool], cost: f64, best: &mut f64) {
        let n = inst.n();
        let last = *path.last().unwrap();
        if path.len() == n {
            *best = best.min(cost + inst.d(last, path[0]));
            return;
        }
        for v in 1..n {
            if !used[v] {
                used[v] = true;
                path.push(v);
                go(inst, path, used, cost + inst.d(last, v), best);
                path.pop();
                used[v] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    let mut used = vec![false; inst.n()];
    used[0] = true;
    go(inst, &mut vec![0], &mut used, 0.0, &mut best);
    best
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
