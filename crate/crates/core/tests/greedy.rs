use proptest::prelude::*;

use cliquelab::graph::{gen_gnp, is_clique, plant_naive_with, Clique, Placement};
use cliquelab::greedy::{
    cleanup, early_stop_search, exact_max_clique, sm0, sm0_from, sm0_iter_smi, sm0_then_smi, smi, EarlyStopLevel,
};
use cliquelab::SeededRng;
use rand::RngCore;

fn check(g: &cliquelab::Graph, c: &Clique, exact: usize) {
    assert!(is_clique(g, c.vertices()).unwrap());
    assert!(c.size() <= exact);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn heuristics_never_beat_the_optimum(n in 1usize..=40, dense in any::<bool>(), seed in any::<u64>()) {
        let p = if dense { 0.5 } else { 0.1 };
        let g = gen_gnp(n, p, seed).unwrap();
        let exact = exact_max_clique(&g).unwrap().size();
        let mut rng = SeededRng::new(seed ^ 0x5eed);
        let c0 = sm0(&g, &mut rng, None).unwrap();
        check(&g, &c0, exact);
        prop_assert!(c0.is_maximal_in(&g));
        for i in 1..=2 {
            check(&g, &smi(&g, i, &mut rng).unwrap().clique, exact);
            check(&g, &sm0_then_smi(&g, i, &mut rng).unwrap().clique, exact);
            check(&g, &sm0_iter_smi(&g, i, &mut rng).unwrap().clique, exact);
        }
    }

    #[test]
    fn seed_clique_is_kept(seed in any::<u64>()) {
        let g = gen_gnp(40, 0.5, seed).unwrap();
        let (u, v) = g.edges().next().unwrap();
        let c = sm0(&g, &mut SeededRng::new(seed), Some(&[u, v])).unwrap();
        prop_assert!(c.contains(u) && c.contains(v));
        prop_assert!(c.is_maximal_in(&g));
    }
}

#[test]
fn sm1_is_the_best_single_vertex_start() {
    for seed in 0..5 {
        let g = gen_gnp(120, 0.5, seed).unwrap();
        let mut rng = SeededRng::new(seed);
        let base = rng.clone().next_u64();
        let best = (0..g.n()).map(|v| sm0_from(&g, base, &[v]).size()).max().unwrap();
        assert_eq!(smi(&g, 1, &mut rng).unwrap().clique.size(), best);
    }
}

#[test]
fn subset_regrowth_never_shrinks() {
    for seed in 0..10 {
        let g = gen_gnp(200, 0.5, seed).unwrap();
        let first = sm0(&g, &mut SeededRng::new(seed), None).unwrap();
        let out = sm0_then_smi(&g, 2, &mut SeededRng::new(seed)).unwrap();
        assert!(out.clique.size() >= first.size());
        let it = sm0_iter_smi(&g, 2, &mut SeededRng::new(seed)).unwrap();
        assert!(it.clique.size() >= first.size());
        assert!(it.trajectory.windows(2).all(|w| w[1] > w[0]));
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let g = gen_gnp(150, 0.5, 4).unwrap();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let a = smi(&g, 2, &mut SeededRng::new(9)).unwrap().clique;
            let b = sm0_iter_smi(&g, 2, &mut SeededRng::new(9)).unwrap().clique;
            (a, b)
        })
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn early_stop_then_cleanup_recovers_plant() {
    let n = 2000;
    let k = 60;
    let g = gen_gnp(n, 0.5, 11).unwrap();
    let (g, plant) = plant_naive_with(&g, k, 12, Placement::Random).unwrap();
    let out = early_stop_search(&g, EarlyStopLevel::Vertices, 20, &mut SeededRng::new(13)).unwrap();
    assert!(out.stopped_early && out.clique.size() >= 20);
    assert!(out.delta > 0.0 && out.delta <= 1.0);
    let c = cleanup(&g, &out.clique, k).unwrap();
    assert!(plant.vertices.iter().all(|&v| c.contains(v)));
}

#[test]
fn cleanup_completes_a_small_seed_at_scale() {
    let n = 10_000;
    let k = (0.6 * (n as f64).sqrt()).round() as usize;
    let g = gen_gnp(n, 0.5, 21).unwrap();
    let (g, plant) = plant_naive_with(&g, k, 22, Placement::Random).unwrap();
    let seed = Clique::new(&g, plant.vertices[..10].to_vec()).unwrap();
    let c = cleanup(&g, &seed, k).unwrap();
    assert!(plant.vertices.iter().all(|&v| c.contains(v)), "found {}", c.size());
}
