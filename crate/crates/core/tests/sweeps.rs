//! Seeded sweeps over generated instances, checked against independent
//! computations.

mod common;

use std::f64::consts::TAU;
use std::time::Instant;

use common::{close, dkp_brute};
use dcopt::binpacking::{bpp_dc, bpp_verify, PackingAlg};
use dcopt::instgen::{
    gen_bpp, gen_dkp, gen_tsp, gen_tsp_with_layout, trial_seed, GenProblem, GenSpec,
};
use dcopt::knapsack::{dkp_dc, dkp_solve_exact, dkp_solve_greedy, DkpInstance, DkpOracle};
use dcopt::tsp::{tsp_dc, tsp_solve_exact, tsp_solve_heuristic, tsp_split, TspInstance, TspOracle};

#[test]
fn table1_optimum_matches_enumeration() {
    let inst = DkpInstance::new(
        vec![16, 11],
        vec![5, 11, 11, 71, 2, 2],
        vec![vec![6, 7, 1, 7, 7, 4], vec![4, 1, 1, 6, 1, 8]],
    )
    .unwrap();
    let z = dkp_solve_exact(&inst).value;
    assert_eq!(z, dkp_brute(&inst));
    assert!(dkp_solve_greedy(&inst).value <= z);
}

/// Textbook single-constraint greedy: ratio p/w compared exactly by
/// cross-multiplication, ties by index, take whatever still fits.
fn single_knapsack_greedy(inst: &DkpInstance) -> u64 {
    let (p, w, c) = (inst.profits(), &inst.weights()[0], inst.capacities()[0]);
    let mut order: Vec<usize> = (0..inst.n()).collect();
    order.sort_by(|&a, &b| (p[b] * w[a]).cmp(&(p[a] * w[b])).then(a.cmp(&b)));
    let (mut room, mut value) = (c, 0);
    for j in order {
        if w[j] <= room {
            room -= w[j];
            value += p[j];
        }
    }
    value
}

#[test]
fn one_constraint_greedy_is_the_textbook_greedy() {
    for k in 0..300 {
        let t = [0.25, 0.5, 0.75][k % 3];
        let inst = gen_dkp(&GenSpec::dkp(30, 1, t, trial_seed(11, k as u64))).unwrap();
        assert_eq!(
            dkp_solve_greedy(&inst).value,
            single_knapsack_greedy(&inst),
            "instance {k}"
        );
    }
}

#[test]
fn dkp_halves_are_feasible_and_never_beat_the_optimum() {
    for k in 0..500 {
        let inst = gen_dkp(&GenSpec::dkp(20, 2, 0.5, trial_seed(12, k))).unwrap();
        let z = dkp_solve_exact(&inst).value as f64;
        let dc = dkp_dc(&inst, DkpOracle::Exact, 1).unwrap();
        assert!(dc.combined.is_feasible(&inst));
        assert!(dc.z_dc <= z);
    }
}

#[test]
fn oracles_are_deterministic() {
    let dkp = gen_dkp(&GenSpec::dkp(25, 3, 0.5, 5)).unwrap();
    assert_eq!(dkp_solve_exact(&dkp), dkp_solve_exact(&dkp));
    let bpp = gen_bpp(&GenSpec::bpp(200, 5)).unwrap();
    for alg in PackingAlg::ALL {
        assert_eq!(alg.pack(&bpp), alg.pack(&bpp));
    }
    let tsp = gen_tsp(&GenSpec::tsp(GenProblem::TspNms, 11, 5)).unwrap();
    assert_eq!(
        tsp_solve_exact(&tsp).unwrap(),
        tsp_solve_exact(&tsp).unwrap()
    );
}

#[test]
fn ffd_never_uses_more_bins_than_nfd() {
    for k in 0..1000 {
        let inst = gen_bpp(&GenSpec::bpp(10 + k % 90, trial_seed(13, k as u64))).unwrap();
        assert!(PackingAlg::Ffd.pack(&inst).bin_count <= PackingAlg::Nfd.pack(&inst).bin_count);
    }
}

#[test]
fn search_for_bfd_beating_ffd() {
    let mut found = None;
    for k in 0..10_000u64 {
        let inst = gen_bpp(&GenSpec::bpp(20, trial_seed(14, k))).unwrap();
        let (b, f) = (PackingAlg::Bfd.pack(&inst), PackingAlg::Ffd.pack(&inst));
        assert!(bpp_verify(&inst, &b));
        if b.bin_count < f.bin_count {
            found = Some((k, b.bin_count, f.bin_count));
            break;
        }
    }
    match found {
        Some((k, b, f)) => println!("BFD beats FFD on trial {k}: {b} vs {f} bins"),
        None => println!("BFD never beats FFD in 10000 instances of N = 20"),
    }
}

#[test]
fn deeper_splits_rarely_help_bin_packing() {
    let mut worse_or_equal = 0;
    for k in 0..100 {
        let inst = gen_bpp(&GenSpec::bpp(40, trial_seed(15, k))).unwrap();
        let one = bpp_dc(&inst, PackingAlg::Ffd, 1).unwrap();
        let two = bpp_dc(&inst, PackingAlg::Ffd, 2).unwrap();
        assert!(bpp_verify(&inst, &two.combined));
        if two.z_dc >= one.z_dc {
            worse_or_equal += 1;
        }
    }
    println!("depth 2 >= depth 1 on {worse_or_equal}/100 instances");
    assert!(worse_or_equal >= 90);
}

fn median_seconds(f: impl Fn()) -> f64 {
    let mut times: Vec<f64> = (0..20)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[10]
}

#[test]
fn ffd_time_grows_with_n() {
    let small = gen_bpp(&GenSpec::bpp(100, 16)).unwrap();
    let large = gen_bpp(&GenSpec::bpp(1000, 16)).unwrap();
    let t_small = median_seconds(|| {
        std::hint::black_box(PackingAlg::Ffd.pack(&small));
    });
    let t_large = median_seconds(|| {
        std::hint::black_box(PackingAlg::Ffd.pack(&large));
    });
    assert!(t_large > t_small, "{t_large} vs {t_small}");
}

#[test]
fn circle_instances_cost_one_revolution() {
    for k in 0..20 {
        let n = 6 + k % 7;
        let (inst, points) = gen_tsp_with_layout(&GenSpec::tsp(
            GenProblem::TspMa,
            n,
            trial_seed(17, k as u64),
        ))
        .unwrap();
        let angle = |v: usize| points[v].1.atan2(points[v].0).rem_euclid(TAU);
        let mut clockwise: Vec<usize> = (0..n).collect();
        clockwise.sort_by(|&a, &b| angle(b).total_cmp(&angle(a)));
        assert!(close(inst.cycle_cost(&clockwise), TAU, 1e-9));
        assert!(close(tsp_solve_exact(&inst).unwrap().cost, TAU, 1e-9));
    }
}

#[test]
fn nearest_neighbour_on_equal_distances() {
    let n = 7;
    let dist: Vec<f64> = (0..n * n)
        .map(|k| if k / n == k % n { 0.0 } else { 0.7 })
        .collect();
    let inst = TspInstance::new(n, dist, true, true).unwrap();
    let tour = tsp_solve_heuristic(&inst);
    assert!(tour.is_hamiltonian(n));
    assert!(close(tour.cost, 0.7 * n as f64, 1e-12));
}

#[test]
fn heuristic_handles_120_points_quickly() {
    let inst = gen_tsp(&GenSpec::tsp(GenProblem::TspMs, 120, 18)).unwrap();
    let start = Instant::now();
    let tour = tsp_solve_heuristic(&inst);
    let secs = start.elapsed().as_secs_f64();
    assert!(tour.is_hamiltonian(120));
    assert!(secs < 1.0, "{secs} s");
    assert!(tsp_dc(&inst, TspOracle::Heuristic, 1)
        .unwrap()
        .combined
        .is_hamiltonian(120));
}

#[test]
fn children_are_induced_subgraphs() {
    for problem in [GenProblem::TspMs, GenProblem::TspMa, GenProblem::TspNms] {
        let inst = gen_tsp(&GenSpec::tsp(problem, 13, 19)).unwrap();
        let pair = tsp_split(&inst).unwrap();
        for (child, map) in [(&pair.left, &pair.left_map), (&pair.right, &pair.right_map)] {
            for a in 0..child.n() {
                for b in 0..child.n() {
                    assert_eq!(child.d(a, b), inst.d(map[a], map[b]));
                }
            }
        }
        let six = gen_tsp(&GenSpec::tsp(problem, 6, 19)).unwrap();
        let pair = tsp_split(&six).unwrap();
        assert_eq!((pair.left.n(), pair.right.n()), (3, 3));
    }
}

#[test]
fn tsp_halves_never_beat_the_optimum() {
    for k in 0..200 {
        let inst = gen_tsp(&GenSpec::tsp(GenProblem::TspMs, 12, trial_seed(20, k))).unwrap();
        let z = tsp_solve_exact(&inst).unwrap().cost;
        let dc = tsp_dc(&inst, TspOracle::Exact, 1).unwrap();
        assert!(dc.z_dc >= z - 1e-9);
    }
}
