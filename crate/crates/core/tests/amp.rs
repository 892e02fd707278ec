use cliquelab::amp::{amp_init, amp_init_with, amp_recover, amp_step, AmpState};
use cliquelab::graph::gen_gnp;
use cliquelab::rng::{mix_seed, SeededRng};
use cliquelab::spectral::planted_instance;
use rand::seq::SliceRandom;

fn unit(seed: u64, a: usize, b: usize) -> f64 {
    // Deterministic pseudo-random value in [-1, 0) keyed by the ordered pair.
    -((mix_seed(seed, &[a as u64, b as u64]) >> 11) as f64 + 1.0) / (1u64 << 53) as f64
}

#[test]
fn relabelling_permutes_marginals() {
    let n = 150;
    let (g, _) = planted_instance(n, 0.5, 25, 1).unwrap();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut SeededRng::new(2));
    let gp = g.permuted(&perm).unwrap();
    let mut inv = vec![0; n];
    for (v, &p) in perm.iter().enumerate() {
        inv[p] = v;
    }
    let mut a: AmpState<f64> = amp_init_with(n, 25, |f, t| unit(7, f, t)).unwrap();
    let mut b: AmpState<f64> = amp_init_with(n, 25, |f, t| unit(7, inv[f], inv[t])).unwrap();
    for _ in 0..5 {
        amp_step(&mut a, &g).unwrap();
        amp_step(&mut b, &gp).unwrap();
        for v in 0..n {
            let (x, y) = (a.marginals()[v], b.marginals()[perm[v]]);
            assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "{x} vs {y}");
        }
    }
}

#[test]
fn explicit_and_random_init_agree() {
    let n = 60;
    let mut rng = SeededRng::new(4);
    let a: AmpState<f64> = amp_init(n, 7, &mut rng).unwrap();
    let b: AmpState<f64> = amp_init_with(n, 7, |f, t| a.message(f, t)).unwrap();
    for f in 0..n {
        for t in (0..n).filter(|&t| t != f) {
            assert_eq!(a.message(f, t), b.message(f, t));
        }
    }
}

#[test]
fn recovers_an_easy_plant_in_both_precisions() {
    let n = 1500;
    let k = (2.0 * (n as f64).sqrt()) as usize;
    let (g, plant) = planted_instance(n, 0.5, k, 5).unwrap();
    let plant = plant.unwrap();
    let single = amp_recover::<f32, _>(&g, k, &mut SeededRng::new(6), 100, 1e-6).unwrap();
    let double = amp_recover::<f64, _>(&g, k, &mut SeededRng::new(6), 100, 1e-6).unwrap();
    for out in [&single, &double] {
        assert!(out.success() && out.converged, "{:?}", out.failure);
        assert_eq!(out.clique.as_ref().unwrap().vertices(), &plant.vertices[..]);
    }
}

#[test]
fn no_plant_means_no_recovery() {
    let g = gen_gnp(800, 0.5, 3).unwrap();
    let out = amp_recover::<f32, _>(&g, 28, &mut SeededRng::new(1), 60, 1e-6).unwrap();
    assert!(!out.success());
    assert!(out.failure.is_some());
}
