mod common;

use common::{close, dkp_brute};
use dcopt::binpacking::{bpp_dc, bpp_split, bpp_verify, BppInstance, PackingAlg};
use dcopt::format::{parse_instance, to_text};
use dcopt::instgen::{gen_dkp, gen_tsp, generate, GenProblem, GenSpec};
use dcopt::knapsack::{
    dkp_dc, dkp_efficiency, dkp_solve_exact, dkp_solve_greedy, dkp_split, DkpOracle,
};
use dcopt::stats::{bernoulli_trials, SampleStats};
use dcopt::tsp::{
    tsp_dc, tsp_merge_detailed, tsp_solve_exact, tsp_solve_heuristic, Tour, TspOracle,
};
use proptest::prelude::*;

fn tightness() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.25), Just(0.5), Just(0.75)]
}

fn tsp_problem() -> impl Strategy<Value = GenProblem> {
    prop_oneof![
        Just(GenProblem::TspMs),
        Just(GenProblem::TspMa),
        Just(GenProblem::TspNms)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dkp_split_partitions_items_and_capacity(n in 6usize..40, d in 1usize..5, t in tightness(), seed: u64) {
        let inst = gen_dkp(&GenSpec::dkp(n, d, t, seed)).unwrap();
        let pair = dkp_split(&inst).unwrap();
        let mut all: Vec<usize> = pair.left_map.iter().chain(&pair.right_map).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(pair.left_map.len(), n.div_ceil(2));
        for i in 0..d {
            prop_assert_eq!(pair.left.capacities()[i] + pair.right.capacities()[i], inst.capacities()[i]);
        }
        let order = dkp_efficiency(&inst);
        for w in order.order.windows(2) {
            let (a, b) = (order.coefficients[w[0]], order.coefficients[w[1]]);
            prop_assert!(a >= b || close(a, b, 1e-12));
        }
    }

    #[test]
    fn dkp_dc_is_feasible_and_bounded(n in 6usize..25, d in 1usize..5, t in tightness(), seed: u64) {
        let inst = gen_dkp(&GenSpec::dkp(n, d, t, seed)).unwrap();
        let z = dkp_solve_exact(&inst).value;
        for depth in 1..=3 {
            let dc = dkp_dc(&inst, DkpOracle::Exact, depth).unwrap();
            prop_assert!(dc.combined.is_feasible(&inst));
            prop_assert!(dc.z_dc <= z as f64);
            prop_assert_eq!(dc.t_dc, dc.t_left + dc.t_right);
        }
        let g = dkp_solve_greedy(&inst);
        prop_assert!(g.is_feasible(&inst) && g.value <= z);
    }

    #[test]
    fn dkp_exact_matches_enumeration(n in 6usize..13, d in 1usize..4, t in tightness(), seed: u64) {
        let inst = gen_dkp(&GenSpec::dkp(n, d, t, seed)).unwrap();
        prop_assert_eq!(dkp_solve_exact(&inst).value, dkp_brute(&inst));
    }

    #[test]
    fn packings_are_valid(weights in prop::collection::vec(0.001f64..=1.0, 2..120), depth in 1usize..4) {
        let inst = BppInstance::new(weights).unwrap();
        let bound = inst.volume_bound();
        for alg in PackingAlg::ALL {
            let p = alg.pack(&inst);
            prop_assert!(bpp_verify(&inst, &p));
            prop_assert!(p.bin_count >= bound);
            let dc = bpp_dc(&inst, alg, depth).unwrap();
            prop_assert!(bpp_verify(&inst, &dc.combined));
            prop_assert_eq!(dc.z_dc, dc.combined.bin_count as f64);
        }
        let pair = bpp_split(&inst).unwrap();
        prop_assert_eq!(pair.left.n() + pair.right.n(), inst.n());
        prop_assert!(!pair.flagged);
    }

    #[test]
    fn merged_tours_obey_splice_identity(problem in tsp_problem(), n in 6usize..13, seed: u64) {
        let inst = gen_tsp(&GenSpec::tsp(problem, n, seed)).unwrap();
        let pair = dcopt::tsp::tsp_split(&inst).unwrap();
        let lift = |t: Tour, map: &[usize]| Tour { order: t.order.iter().map(|&x| map[x]).collect(), cost: t.cost };
        let l = lift(tsp_solve_heuristic(&pair.left), &pair.left_map);
        let r = lift(tsp_solve_heuristic(&pair.right), &pair.right_map);
        let (m, arcs) = tsp_merge_detailed(&l, &r, &inst).unwrap();
        prop_assert!(m.is_hamiltonian(n));
        let d = |(a, b): (usize, usize)| inst.d(a, b);
        let spliced = l.cost + r.cost - d(arcs.removed_left) - d(arcs.removed_right) + d(arcs.inserted[0]) + d(arcs.inserted[1]);
        prop_assert!(close(m.cost, spliced, 1e-9));
        prop_assert!(close(m.cost, inst.cycle_cost(&m.order), 1e-9));
    }

    #[test]
    fn tsp_dc_never_beats_the_optimum(problem in tsp_problem(), n in 6usize..12, seed: u64) {
        let inst = gen_tsp(&GenSpec::tsp(problem, n, seed)).unwrap();
        let z = tsp_solve_exact(&inst).unwrap().cost;
        for oracle in [TspOracle::Exact, TspOracle::Heuristic] {
            let dc = tsp_dc(&inst, oracle, 1).unwrap();
            prop_assert!(dc.combined.is_hamiltonian(n));
            prop_assert!(dc.z_dc >= z - 1e-9);
        }
        let h = tsp_solve_heuristic(&inst);
        prop_assert!(h.is_hamiltonian(n) && h.cost >= z - 1e-9);
    }

    #[test]
    fn instance_text_round_trips(kind in 0usize..5, n in 6usize..20, seed: u64) {
        let spec = match kind {
            0 => GenSpec::dkp(n, 3, 0.5, seed),
            1 => GenSpec::bpp(n, seed),
            2 => GenSpec::tsp(GenProblem::TspMs, n, seed),
            3 => GenSpec::tsp(GenProblem::TspMa, n, seed),
            _ => GenSpec::tsp(GenProblem::TspNms, n, seed),
        };
        let inst = generate(&spec).unwrap();
        prop_assert_eq!(parse_instance(&to_text(&inst)).unwrap(), inst.clone());
        prop_assert_eq!(generate(&spec).unwrap(), inst);
    }

    #[test]
    fn trial_count_is_monotone(a in 0.0f64..10.0, b in 0.0f64..10.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(bernoulli_trials(lo).unwrap() <= bernoulli_trials(hi).unwrap());
    }

    #[test]
    fn interval_brackets_the_mean(xs in prop::collection::vec(-1e3f64..1e3, 2..50)) {
        let s = SampleStats::from_samples(&xs).unwrap();
        let (lo, hi) = s.confidence_interval();
        prop_assert!(lo <= s.mean && s.mean <= hi);
    }
}
