use faer::Mat;
use mz_sphere::geometry::sample_uniform;
use mz_sphere::gram::*;
use mz_sphere::rng::substream;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

/// Independent oracle: `(1/N) L*L` by explicit dense products.
fn dense_normal(points: &mz_sphere::geometry::PointSet, n: usize) -> Mat<f64> {
    let l = explicit_basis_matrix_q2(points, n).unwrap();
    l.transpose() * &l * (1.0 / points.len() as f64)
}

#[test]
fn gram_and_explicit_spectra_agree() {
    for n in [0, 1, 4, 8] {
        let pts = sample_uniform(2, 500, 31 + n as u64);
        let d = (n + 1) * (n + 1);
        let g = gram_matrix(&pts, n).unwrap();
        let mut big = symmetric_eigenvalues(g.entries()).unwrap();
        big.reverse();
        let mut small = symmetric_eigenvalues(dense_normal(&pts, n).as_ref()).unwrap();
        small.reverse();
        for k in 0..d {
            assert!((big[k] - small[k]).abs() < 1e-8, "n {n} k {k}: {} vs {}", big[k], small[k]);
        }
        let e = extremal_eigs(&g, d).unwrap();
        let s = normal_extremal_eigs_q2(&pts, n).unwrap();
        assert!((e.lambda_min - s.lambda_min).abs() < 1e-8 && (e.lambda_max - s.lambda_max).abs() < 1e-8);
    }
}

#[test]
fn trace_and_psd() {
    for q in 2..=4 {
        let n = 3;
        let pts = sample_uniform(q, 120, q as u64);
        let g = gram_matrix(&pts, n).unwrap();
        let d = mz_sphere::sphkernels::poly_space_dim(q, n).unwrap() as f64;
        assert!((g.trace() - d).abs() < 1e-10);
        let ev = symmetric_eigenvalues(g.entries()).unwrap();
        assert!(ev[0] >= -1e-9 * d);
        for i in 0..pts.len() {
            assert_eq!(g.get(i, i), d / pts.len() as f64);
        }
    }
}

#[test]
fn random_gram_is_psd() {
    let g = gram_matrix(&sample_uniform(2, 100, 8), 4).unwrap();
    assert!(symmetric_eigenvalues(g.entries()).unwrap()[0] >= -1e-9);
}

#[test]
fn rayleigh_quotients_are_sandwiched() {
    let n = 5;
    let pts = sample_uniform(2, 300, 3);
    let l = explicit_basis_matrix_q2(&pts, n).unwrap();
    let e = normal_extremal_eigs_q2(&pts, n).unwrap();
    let d = l.ncols();
    let mut rng = substream(5, &[]);
    for _ in 0..100 {
        let x = Mat::<f64>::from_fn(d, 1, |_, _| rng.sample(StandardNormal));
        let lx = &l * &x;
        let num: f64 = (0..lx.nrows()).map(|i| lx[(i, 0)] * lx[(i, 0)]).sum::<f64>() / pts.len() as f64;
        let den: f64 = (0..d).map(|i| x[(i, 0)] * x[(i, 0)]).sum();
        let r = num / den;
        assert!(r >= e.lambda_min - 1e-9 && r <= e.lambda_max + 1e-9);
    }
}

#[test]
fn monte_carlo_normal_matrix_tends_to_identity() {
    let count = 100_000;
    let pts = sample_uniform(2, count, 15);
    let m = weighted_normal_matrix_q2(&pts, None, 2).unwrap();
    let tol = 3.0 / (count as f64).sqrt();
    let mut worst = 0.0f64;
    for i in 0..9 {
        for j in 0..9 {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - target).abs());
        }
    }
    assert!(worst < tol, "worst entry deviation {worst}");
}

#[test]
fn tropp_budget_examples() {
    // independent re-evaluation: ln(2·81/0.01)·3·81/0.81
    let x = (2.0f64 * 81.0 / 0.01).ln() * 3.0 * 81.0 / 0.81;
    assert_eq!(x.floor() as u64 + 1, 2908);
    assert_eq!(budget_tropp(8, 2, 0.9, 0.01).unwrap(), 2908);
    assert_eq!(budget_tropp(0, 2, 0.9, 0.5).unwrap(), 6);
    let d = mz_sphere::sphkernels::poly_space_dim(3, 4).unwrap() as f64;
    let x = (2.0 * d / 0.1).ln() * 3.0 * d / 0.25;
    assert_eq!(budget_even_p(4, 3, 2, 0.5, 0.1).unwrap(), x.floor() as u64 + 1);
    let x = (2.0f64 * 289.0 / 0.01).ln() * 3.0 * 289.0 / 0.81;
    assert_eq!(budget_even_p(8, 2, 4, 0.9, 0.01).unwrap(), x.floor() as u64 + 1);
}

proptest! {
    #[test]
    fn tropp_budget_is_monotone(n in 0usize..30, q in 2usize..5, eta in 0.05f64..0.95, eps in 0.001f64..0.9) {
        let b = budget_tropp(n, q, eta, eps).unwrap();
        prop_assert!(budget_tropp(n + 1, q, eta, eps).unwrap() >= b);
        prop_assert!(budget_tropp(n, q, (eta * 1.05).min(0.99), eps).unwrap() <= b);
        prop_assert!(budget_tropp(n, q, eta, (eps * 1.5).min(0.99)).unwrap() <= b);
    }
}
