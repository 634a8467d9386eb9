//! End-to-end fitting behavior: recovery on synthetic data, determinism,
//! and a loose parametric-bootstrap coverage band.

use glzeta::inference::{fit, log_likelihood, Dataset, FitConfig, FixedParams, UnivariateParams};
use glzeta::model::{preset, Preset};
use glzeta::radial::{sample, RandomSource};
use nalgebra::{DMatrix, DVector};

fn normal_univariate_sample(mu: f64, sigma2: f64, count: usize, seed: u64) -> Dataset {
    let params = preset(Preset::Normal).unwrap();
    let ls = glzeta::model::LocationScale::new(
        DVector::from_element(1, mu),
        DMatrix::from_element(1, 1, sigma2),
    )
    .unwrap();
    let mut src = RandomSource::new(seed);
    let draws = sample(&params, &ls, count, &mut src).unwrap();
    Dataset::new(draws.column(0).iter().copied().collect(), "synthetic").unwrap()
}

fn location_scale_fit_config(initial_mu: f64, initial_sigma2: f64) -> FitConfig {
    let fixed = FixedParams {
        n_shape: Some(1.0),
        a: Some(0.5),
        b: Some(1.0),
        s: Some(1.0),
        r: Some(0.0),
        mu: None,
        sigma2: None,
    };
    let initial = UnivariateParams {
        n_shape: 1.0,
        a: 0.5,
        b: 1.0,
        s: 1.0,
        mu: initial_mu,
        sigma2: initial_sigma2,
        r: 0.0,
    };
    let mut cfg = FitConfig::new(fixed, initial);
    cfg.restarts = 3;
    cfg.max_iterations = 800;
    cfg
}

#[test]
fn recovers_location_on_synthetic_normal() {
    let data = normal_univariate_sample(0.0, 2.0, 500, 101);
    let cfg = location_scale_fit_config(0.5, 1.0);
    let mut src = RandomSource::new(7);
    let result = fit(&data, &cfg, &mut src).unwrap();
    assert!(result.converged);
    assert_eq!(result.free_count, 2);
    // mean estimator sd = sqrt(Var/n) with Var = sigma2 = 2
    let bound = 4.0 * (2.0f64 / 500.0).sqrt();
    assert!(
        result.estimates.mu.abs() < bound,
        "mu = {} exceeds {bound}",
        result.estimates.mu
    );
    assert!((result.estimates.sigma2 - 2.0).abs() < 0.5);
    // AIC identity holds exactly
    assert_eq!(
        result.aic,
        2.0 * result.free_count as f64 - 2.0 * result.log_likelihood
    );
}

#[test]
fn fit_is_deterministic_for_a_seed() {
    let data = normal_univariate_sample(1.0, 1.0, 200, 55);
    let cfg = location_scale_fit_config(0.0, 2.0);
    let a = fit(&data, &cfg, &mut RandomSource::new(9)).unwrap();
    let b = fit(&data, &cfg, &mut RandomSource::new(9)).unwrap();
    assert_eq!(a.estimates, b.estimates);
    assert_eq!(a.log_likelihood, b.log_likelihood);
    assert_eq!(a.function_evaluations, b.function_evaluations);
    assert_eq!(a.ks_statistic, b.ks_statistic);
}

#[test]
fn optimizer_not_worse_than_true_parameters() {
    let data = normal_univariate_sample(0.0, 2.0, 300, 77);
    let cfg = location_scale_fit_config(0.3, 1.5);
    let result = fit(&data, &cfg, &mut RandomSource::new(3)).unwrap();
    let truth = log_likelihood(&data, &preset(Preset::Normal).unwrap(), 0.0, 2.0).unwrap();
    assert!(
        result.log_likelihood >= truth - 1e-9,
        "fitted {} below truth {truth}",
        result.log_likelihood
    );
}

#[test]
fn bootstrap_coverage_band() {
    // 20 replicates of n = 200 from the generating model; the true values
    // should sit inside estimate ± 3 empirical SDs in at least 80% of runs.
    let replicates = 20;
    let mut mu_hat = Vec::with_capacity(replicates);
    let mut s2_hat = Vec::with_capacity(replicates);
    for k in 0..replicates {
        let data = normal_univariate_sample(0.0, 2.0, 200, 1000 + k as u64);
        let mut cfg = location_scale_fit_config(0.2, 1.0);
        cfg.restarts = 2;
        cfg.max_iterations = 500;
        let result = fit(&data, &cfg, &mut RandomSource::new(k as u64)).unwrap();
        mu_hat.push(result.estimates.mu);
        s2_hat.push(result.estimates.sigma2);
    }
    let sd = |xs: &[f64]| {
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
    };
    let mu_sd = sd(&mu_hat);
    let s2_sd = sd(&s2_hat);
    let mu_cover = mu_hat.iter().filter(|m| m.abs() <= 3.0 * mu_sd).count();
    let s2_cover = s2_hat
        .iter()
        .filter(|s| (**s - 2.0).abs() <= 3.0 * s2_sd)
        .count();
    assert!(
        mu_cover as f64 / replicates as f64 >= 0.8,
        "mu coverage {mu_cover}/{replicates}"
    );
    assert!(
        s2_cover as f64 / replicates as f64 >= 0.8,
        "sigma2 coverage {s2_cover}/{replicates}"
    );
}
