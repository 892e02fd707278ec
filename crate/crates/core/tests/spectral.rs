use nalgebra::{DMatrix, DVector, SymmetricEigen};

use cliquelab::graph::{gen_gnp, Graph};
use cliquelab::rng::SeededRng;
use cliquelab::spectral::{
    matvec, planted_instance, power_top, rank_components, rank_plateau, second_eigen, EigenMethod, MatrixKind,
    SpectralConfig,
};
use rand::Rng;

fn dense(g: &Graph, cfg: &SpectralConfig) -> DMatrix<f64> {
    let n = g.n();
    let s = 1.0 / (n as f64).sqrt();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let a = if g.has_edge(i, j) { 1.0 } else { 0.0 };
            m[(i, j)] = match cfg.matrix_kind {
                MatrixKind::ZeroOneScaled => a * s,
                MatrixKind::PlusMinus { scaled: true } => (2.0 * a - 1.0) * s,
                MatrixKind::PlusMinus { scaled: false } => 2.0 * a - 1.0,
            };
        }
    }
    if let Some(h) = cfg.hint_site {
        m[(h, h)] += cfg.e0;
    }
    m
}

fn configs(n: usize) -> Vec<SpectralConfig> {
    vec![
        SpectralConfig::zero_one(),
        SpectralConfig::plus_minus(true),
        SpectralConfig::plus_minus(false),
        SpectralConfig::plus_minus(true).with_hint(3, 0.5, n),
    ]
}

#[test]
fn matvec_matches_dense_product() {
    let mut rng = SeededRng::new(3);
    for n in [1usize, 7, 64, 65, 300, 2100] {
        let g = gen_gnp(n, 0.5, n as u64).unwrap();
        let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        for cfg in configs(n).into_iter().filter(|c| c.hint_site.is_none_or(|h| h < n)) {
            let want = dense(&g, &cfg) * DVector::from_column_slice(&x);
            let got = matvec(&g, &cfg, &x).unwrap();
            let scale = want.amax().max(1.0);
            for (a, b) in got.iter().zip(want.iter()) {
                assert!((a - b).abs() <= 1e-10 * scale, "n = {n}, {cfg:?}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn matvec_is_linear() {
    let n = 500;
    let g = gen_gnp(n, 0.5, 1).unwrap();
    let cfg = SpectralConfig::plus_minus(true);
    let mut rng = SeededRng::new(2);
    let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
    let y: Vec<f64> = (0..n).map(|_| rng.random()).collect();
    let (a, b) = (1.7, -0.3);
    let z: Vec<f64> = x.iter().zip(&y).map(|(x, y)| a * x + b * y).collect();
    let (mx, my, mz) = (matvec(&g, &cfg, &x).unwrap(), matvec(&g, &cfg, &y).unwrap(), matvec(&g, &cfg, &z).unwrap());
    for i in 0..n {
        assert!((mz[i] - (a * mx[i] + b * my[i])).abs() < 1e-10);
    }
}

#[test]
fn eigenpairs_match_dense_solver() {
    let n = 300;
    let (g, _) = planted_instance(n, 0.5, 30, 5).unwrap();
    for method in [EigenMethod::Lanczos, EigenMethod::Power] {
        let mut cfg = SpectralConfig::plus_minus(true);
        cfg.method = method;
        cfg.tol = 1e-9;
        let eig = SymmetricEigen::new(dense(&g, &cfg));
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| b.total_cmp(a));
        let mut rng = SeededRng::new(6);
        let top = power_top(&g, &cfg, &mut rng).unwrap();
        let second = second_eigen(&g, &cfg, &top, &mut rng).unwrap();
        assert!((top.value - vals[0]).abs() < 1e-8, "{method:?}: {} vs {}", top.value, vals[0]);
        assert!((second.value - vals[1]).abs() < 1e-8, "{method:?}: {} vs {}", second.value, vals[1]);
        assert!(top.residual <= cfg.tol);
    }
}

#[test]
fn zero_one_top_eigenvalue_is_half_sqrt_n() {
    let n = 4000;
    let g = gen_gnp(n, 0.5, 8).unwrap();
    let top = power_top(&g, &SpectralConfig::zero_one(), &mut SeededRng::new(1)).unwrap();
    let want = 0.5 * (n as f64).sqrt();
    assert!((top.value / want - 1.0).abs() < 0.02, "{} vs {want}", top.value);
    // The leading vector is close to uniform.
    let s = 1.0 / (n as f64).sqrt();
    let overlap: f64 = top.vector.iter().map(|v| v * s).sum::<f64>().abs();
    assert!(overlap > 0.99);
}

#[test]
fn unplanted_plus_minus_edge_is_two() {
    let n = 4000;
    let g = gen_gnp(n, 0.5, 9).unwrap();
    let top = power_top(&g, &SpectralConfig::plus_minus(true), &mut SeededRng::new(1)).unwrap();
    assert!((top.value - 2.0).abs() < 0.1, "{}", top.value);
}

#[test]
fn large_plant_dominates_the_top_vector() {
    let n = 2000;
    let k = (3.0 * (n as f64).sqrt()) as usize;
    let (g, plant) = planted_instance(n, 0.5, k, 3).unwrap();
    let plant = plant.unwrap();
    let top = power_top(&g, &SpectralConfig::plus_minus(true), &mut SeededRng::new(4)).unwrap();
    assert!(rank_plateau(&rank_components(&top, &plant), k) > 0.9);
}
