//! Dataset handling, log-likelihood, maximum-likelihood fitting with fixed
//! parameter conventions, AIC, and the Kolmogorov-Smirnov test.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{cdf_univariate, log_pdf, GLParams, LocationScale};
use crate::optimize::{nelder_mead, NelderMeadConfig};
use crate::radial::RandomSource;

/// A sorted sample of univariate observations.
#[derive(Debug, Clone)]
pub struct Dataset {
    values: Vec<f64>,
    label: String,
}

impl Dataset {
    pub fn new(mut values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("dataset must not be empty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("dataset entries must be finite"));
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Dataset {
            values,
            label: label.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / self.values.len() as f64
    }
}

const CARBON_FIBER_CSV: &str = include_str!("../data/carbon_fiber.csv");

/// The embedded single-carbon-fiber strength sample (GPa), 63 observations.
pub fn carbon_fiber_dataset() -> Dataset {
    parse_csv(CARBON_FIBER_CSV, "carbon-fiber").expect("embedded carbon-fiber data must parse")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Csv,
    Json,
}

fn parse_csv(text: &str, label: &str) -> Result<Dataset> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim().trim_end_matches(',');
        if trimmed.is_empty() {
            continue;
        }
        match trimmed.parse::<f64>() {
            Ok(v) => {
                if !v.is_finite() {
                    return Err(Error::Parse {
                        line: i + 1,
                        message: format!("non-finite value {trimmed:?}"),
                    });
                }
                values.push(v);
            }
            Err(_) if i == 0 => continue, // header row
            Err(_) => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected a number, found {trimmed:?}"),
                })
            }
        }
    }
    Dataset::new(values, label)
}

/// Loads a one-column dataset from CSV (optional header) or a JSON array.
pub fn load_dataset(path: &Path, format: DataFormat) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    match format {
        DataFormat::Csv => parse_csv(&text, &label),
        DataFormat::Json => {
            let values: Vec<f64> = serde_json::from_str(&text).map_err(|e| Error::Parse {
                line: e.line(),
                message: e.to_string(),
            })?;
            Dataset::new(values, label)
        }
    }
}

/// Σ_i ln f(x_i) under the univariate law with the given shape parameters.
pub fn log_likelihood(data: &Dataset, params: &GLParams, mu: f64, sigma2: f64) -> Result<f64> {
    let ls = LocationScale::univariate(mu, sigma2)?;
    let mut total = 0.0;
    for &x in data.values() {
        let l = log_pdf(params, &ls, &nalgebra::DVector::from_element(1, x))?;
        if l == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        total += l;
    }
    Ok(total)
}

/// Full univariate parameter vector (common exponent s = s1 = s2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnivariateParams {
    #[serde(rename = "N")]
    pub n_shape: f64,
    pub a: f64,
    pub b: f64,
    pub s: f64,
    pub mu: f64,
    pub sigma2: f64,
    pub r: f64,
}

impl UnivariateParams {
    pub fn gl_params(&self) -> Result<GLParams> {
        GLParams::new(self.n_shape, self.a, self.b, self.s, self.s, self.r)
    }
}

/// Which parameters stay pinned during fitting.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct FixedParams {
    #[serde(rename = "N")]
    pub n_shape: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub s: Option<f64>,
    pub mu: Option<f64>,
    pub sigma2: Option<f64>,
    pub r: Option<f64>,
}

/// Fit configuration. Positivity-constrained parameters (a, b, s, r, σ²)
/// are optimized in log space.
#[derive(Debug, Clone)]
pub struct FitConfig {
    pub fixed: FixedParams,
    pub initial: UnivariateParams,
    pub restarts: usize,
    pub max_iterations: usize,
    pub simplex_tolerance: f64,
    pub objective_tolerance: f64,
}

impl FitConfig {
    pub fn new(fixed: FixedParams, initial: UnivariateParams) -> Self {
        FitConfig {
            fixed,
            initial,
            restarts: 8,
            max_iterations: 2000,
            simplex_tolerance: 1e-9,
            objective_tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub estimates: UnivariateParams,
    pub free_count: usize,
    pub log_likelihood: f64,
    pub aic: f64,
    pub ks_statistic: f64,
    pub ks_p_value: f64,
    pub converged: bool,
    pub function_evaluations: usize,
    /// r below 1e-12 leaves the logistic rate b without influence on the
    /// likelihood; the estimate of b is then arbitrary.
    pub b_unidentifiable: bool,
}

/// Names the free coordinates and maps between the packed optimizer vector
/// and the full parameter struct.
struct Packing {
    names: Vec<&'static str>,
}

const LOG_SPACE: [&str; 5] = ["a", "b", "s", "sigma2", "r"];

impl Packing {
    fn new(fixed: &FixedParams) -> Packing {
        let mut names = Vec::new();
        if fixed.n_shape.is_none() {
            names.push("N");
        }
        if fixed.a.is_none() {
            names.push("a");
        }
        if fixed.b.is_none() {
            names.push("b");
        }
        if fixed.s.is_none() {
            names.push("s");
        }
        if fixed.mu.is_none() {
            names.push("mu");
        }
        if fixed.sigma2.is_none() {
            names.push("sigma2");
        }
        if fixed.r.is_none() {
            names.push("r");
        }
        Packing { names }
    }

    fn pack(&self, p: &UnivariateParams) -> Vec<f64> {
        self.names
            .iter()
            .map(|&name| {
                let raw = match name {
                    "N" => p.n_shape,
                    "a" => p.a,
                    "b" => p.b,
                    "s" => p.s,
                    "mu" => p.mu,
                    "sigma2" => p.sigma2,
                    "r" => p.r,
                    _ => unreachable!(),
                };
                if LOG_SPACE.contains(&name) {
                    raw.max(1e-300).ln()
                } else {
                    raw
                }
            })
            .collect()
    }

    fn unpack(&self, x: &[f64], base: &UnivariateParams, fixed: &FixedParams) -> UnivariateParams {
        let mut p = UnivariateParams {
            n_shape: fixed.n_shape.unwrap_or(base.n_shape),
            a: fixed.a.unwrap_or(base.a),
            b: fixed.b.unwrap_or(base.b),
            s: fixed.s.unwrap_or(base.s),
            mu: fixed.mu.unwrap_or(base.mu),
            sigma2: fixed.sigma2.unwrap_or(base.sigma2),
            r: fixed.r.unwrap_or(base.r),
        };
        for (&name, &v) in self.names.iter().zip(x) {
            let value = if LOG_SPACE.contains(&name) {
                v.exp()
            } else {
                v
            };
            match name {
                "N" => p.n_shape = value,
                "a" => p.a = value,
                "b" => p.b = value,
                "s" => p.s = value,
                "mu" => p.mu = value,
                "sigma2" => p.sigma2 = value,
                "r" => p.r = value,
                _ => unreachable!(),
            }
        }
        p
    }
}

/// Maximum-likelihood fit by Nelder-Mead over the free parameters, best of
/// `restarts` runs from jittered initials (restart 0 starts exactly at the
/// configured initial). Ties break toward the earliest restart.
pub fn fit(data: &Dataset, cfg: &FitConfig, src: &mut RandomSource) -> Result<FitResult> {
    let packing = Packing::new(&cfg.fixed);
    let free_count = packing.names.len();
    if free_count == 0 {
        return Err(Error::domain("at least one parameter must be free"));
    }
    if cfg.restarts == 0 {
        return Err(Error::domain("restarts must be at least 1"));
    }
    let x0 = packing.pack(&cfg.initial);

    let objective = |x: &[f64]| -> f64 {
        let p = packing.unpack(x, &cfg.initial, &cfg.fixed);
        let gl = match p.gl_params() {
            Ok(g) => g,
            Err(_) => return f64::INFINITY,
        };
        if gl.check_dimension(1).is_err() || !(p.sigma2 > 0.0) {
            return f64::INFINITY;
        }
        match log_likelihood(data, &gl, p.mu, p.sigma2) {
            Ok(ll) if ll.is_finite() => -ll,
            _ => f64::INFINITY,
        }
    };

    let nm_cfg = NelderMeadConfig {
        max_iterations: cfg.max_iterations,
        simplex_tolerance: cfg.simplex_tolerance,
        objective_tolerance: cfg.objective_tolerance,
        initial_step: 0.25,
    };

    let mut best: Option<crate::optimize::OptimizeResult> = None;
    let mut total_evals = 0usize;
    for restart in 0..cfg.restarts {
        let start: Vec<f64> = if restart == 0 {
            x0.clone()
        } else {
            x0.iter().map(|v| v + 0.5 * src.standard_normal()).collect()
        };
        let run = nelder_mead(objective, &start, &nm_cfg);
        total_evals += run.function_evaluations;
        if run.fx.is_finite() && best.as_ref().is_none_or(|b| run.fx < b.fx) {
            best = Some(run);
        }
    }
    let best =
        best.ok_or_else(|| Error::Fit("no restart produced a finite log-likelihood".into()))?;

    let estimates = packing.unpack(&best.x, &cfg.initial, &cfg.fixed);
    let gl = estimates.gl_params()?;
    let ll = -best.fx;
    let aic_value = aic(free_count, ll)?;
    let (ks_statistic, ks_p_value) = ks_test(data, |x| {
        cdf_univariate(&gl, estimates.mu, estimates.sigma2, x)
    })?;
    Ok(FitResult {
        estimates,
        free_count,
        log_likelihood: ll,
        aic: aic_value,
        ks_statistic,
        ks_p_value,
        converged: best.converged,
        function_evaluations: total_evals,
        b_unidentifiable: estimates.r < 1e-12,
    })
}

/// Akaike information criterion: 2k - 2 lnL.
pub fn aic(free_count: usize, log_likelihood: f64) -> Result<f64> {
    if free_count == 0 {
        return Err(Error::domain("AIC needs at least one free parameter"));
    }
    Ok(2.0 * free_count as f64 - 2.0 * log_likelihood)
}

/// Kolmogorov-Smirnov statistic D against a fitted CDF, with the asymptotic
/// p-value Q(√n·D), Q(λ) = 2 Σ_{k≥1} (-1)^{k-1} e^{-2k²λ²}.
pub fn ks_test<F>(data: &Dataset, cdf: F) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let n = data.len() as f64;
    let mut d: f64 = 0.0;
    let mut prev_f = 0.0;
    for (i, &x) in data.values().iter().enumerate() {
        let f = cdf(x)?;
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::domain(format!(
                "cdf value {f} outside [0,1] at x = {x}"
            )));
        }
        if f < prev_f - 1e-12 {
            return Err(Error::domain(format!(
                "cdf is not monotone on the sample near x = {x}"
            )));
        }
        prev_f = f;
        let upper = (i + 1) as f64 / n - f;
        let lower = f - i as f64 / n;
        d = d.max(upper).max(lower);
    }
    Ok((d, kolmogorov_p_value(n.sqrt() * d)))
}

/// Asymptotic Kolmogorov tail probability, 100 terms, clamped to [0, 1].
/// Below λ = 0.4 the direct alternating series needs far more than 100
/// terms, so the dual theta representation (which converges instantly
/// there) supplies the value.
pub fn kolmogorov_p_value(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.4 {
        let mut cdf = 0.0;
        for k in 1..=100u32 {
            let j = (2 * k - 1) as f64;
            cdf += (-j * j * std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda)).exp();
        }
        cdf *= (2.0 * std::f64::consts::PI).sqrt() / lambda;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let sign = if (k as usize) % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * (-2.0 * k * k * lambda * lambda).exp();
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Log-likelihood of the location-free logistic baseline
/// f(x; θ) = e^{x/θ} / (θ (1 + e^{x/θ})²).
pub fn logistic_baseline_log_likelihood(data: &Dataset, theta: f64) -> Result<f64> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::domain(format!(
            "theta must be positive, got {theta}"
        )));
    }
    let mut total = 0.0;
    for &x in data.values() {
        let z = (x / theta).abs();
        total += -z - theta.ln() - 2.0 * (-z).exp().ln_1p();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{preset, Preset};
    use approx::assert_relative_eq;

    #[test]
    fn embedded_dataset_shape() {
        let data = carbon_fiber_dataset();
        assert_eq!(data.len(), 63);
        assert_eq!(data.values()[0], 1.901);
        assert_eq!(data.values()[62], 5.020);
        assert!((data.mean() - 3.0593).abs() < 5e-3, "mean {}", data.mean());
    }

    #[test]
    fn csv_parsing() {
        let d = parse_csv("x\n1.0\n2.0\n", "t").unwrap();
        assert_eq!(d.values(), &[1.0, 2.0]);
        // unsorted input comes back sorted
        let d = parse_csv("3.0\n1.0\n2.0\n", "t").unwrap();
        assert_eq!(d.values(), &[1.0, 2.0, 3.0]);
        // bad row is named by line
        match parse_csv("x\nabc\n", "t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_csv("", "t").is_err());
    }

    #[test]
    fn json_loading() {
        let dir = std::env::temp_dir();
        let path = dir.join("glzeta_test_data.json");
        std::fs::write(&path, "[2.5, 1.5, 3.5]").unwrap();
        let d = load_dataset(&path, DataFormat::Json).unwrap();
        assert_eq!(d.values(), &[1.5, 2.5, 3.5]);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn log_likelihood_standard_normal_point() {
        let normal = preset(Preset::Normal).unwrap();
        let data = Dataset::new(vec![0.0], "point").unwrap();
        let ll = log_likelihood(&data, &normal, 0.0, 1.0).unwrap();
        assert_relative_eq!(
            ll,
            -(0.5 * (2.0 * std::f64::consts::PI).ln()),
            max_relative = 1e-9
        );
    }

    #[test]
    fn log_likelihood_translation_invariant() {
        let logistic = preset(Preset::Logistic).unwrap();
        let data = Dataset::new(vec![1.0, 2.0, 2.5], "t").unwrap();
        let shifted = Dataset::new(vec![11.0, 12.0, 12.5], "t").unwrap();
        let a = log_likelihood(&data, &logistic, 1.8, 0.7).unwrap();
        let b = log_likelihood(&shifted, &logistic, 11.8, 0.7).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn aic_table_values() {
        assert!((aic(1, -165.5826).unwrap() - 333.1652).abs() < 1e-9);
        assert!((aic(4, -49.6587).unwrap() - 107.3174).abs() < 1e-9);
        assert_eq!(aic(3, 0.0).unwrap(), 6.0);
        assert!(aic(0, 1.0).is_err());
    }

    #[test]
    fn ks_single_point_identity() {
        let data = Dataset::new(vec![0.5], "p").unwrap();
        let (d, _) = ks_test(&data, Ok).unwrap();
        assert_relative_eq!(d, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn ks_p_value_reproduces_table() {
        let p = kolmogorov_p_value(63.0_f64.sqrt() * 0.0987);
        assert!((p - 0.5714).abs() < 2e-4, "p = {p}");
        let p0 = kolmogorov_p_value(63.0_f64.sqrt() * 0.7123);
        assert!(p0 < 1e-10, "p = {p0}");
    }

    #[test]
    fn ks_p_value_monotone_and_limits() {
        let mut prev = 1.0;
        for i in 1..=60 {
            let lambda = 0.05 * i as f64;
            let p = kolmogorov_p_value(lambda);
            assert!(p <= prev + 1e-15);
            prev = p;
        }
        assert_eq!(kolmogorov_p_value(0.0), 1.0);
        assert_eq!(kolmogorov_p_value(1e-12), 1.0);
        assert!(kolmogorov_p_value(10.0) < 1e-30);
    }

    #[test]
    fn ks_invariant_under_increasing_transform() {
        let data = Dataset::new(vec![0.2, 0.5, 0.9, 1.4], "t").unwrap();
        let cdf = |x: f64| Ok(1.0 - (-x).exp());
        let (d1, p1) = ks_test(&data, cdf).unwrap();
        let transformed =
            Dataset::new(data.values().iter().map(|v| v.exp()).collect(), "t").unwrap();
        let (d2, p2) = ks_test(&transformed, |y: f64| Ok(1.0 - (-(y.ln())).exp())).unwrap();
        assert_relative_eq!(d1, d2, max_relative = 1e-12);
        assert_relative_eq!(p1, p2, max_relative = 1e-12);
    }

    #[test]
    fn ks_rejects_non_monotone_cdf() {
        let data = Dataset::new(vec![0.1, 0.2, 0.3], "t").unwrap();
        let r = ks_test(&data, |x| Ok(if x > 0.15 { 0.2 } else { 0.9 }));
        assert!(r.is_err());
    }

    #[test]
    fn logistic_baseline_values() {
        let data = Dataset::new(vec![0.0], "p").unwrap();
        assert_relative_eq!(
            logistic_baseline_log_likelihood(&data, 1.0).unwrap(),
            0.25f64.ln(),
            max_relative = 1e-12
        );
        // symmetric in the sign of the observations
        let pos = Dataset::new(vec![1.3], "p").unwrap();
        let neg = Dataset::new(vec![-1.3], "p").unwrap();
        assert_relative_eq!(
            logistic_baseline_log_likelihood(&pos, 0.7).unwrap(),
            logistic_baseline_log_likelihood(&neg, 0.7).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn logistic_baseline_at_reference_scale() {
        // stable path vs naive direct evaluation; the location-free form
        // sits far below location-family likelihood levels on data centered
        // near 3, which is expected for a density pinned at the origin
        let data = carbon_fiber_dataset();
        let theta = 0.19975;
        let stable = logistic_baseline_log_likelihood(&data, theta).unwrap();
        let direct: f64 = data
            .values()
            .iter()
            .map(|&x| x / theta - theta.ln() - 2.0 * (1.0 + (x / theta).exp()).ln())
            .sum();
        assert_relative_eq!(stable, direct, max_relative = 1e-10);
        assert!(stable < -500.0, "baseline ll = {stable}");
    }

    #[test]
    fn logistic_baseline_unimodal_in_theta() {
        let data = carbon_fiber_dataset();
        let lls: Vec<f64> = (1..60)
            .map(|i| logistic_baseline_log_likelihood(&data, 0.1 * i as f64).unwrap())
            .collect();
        let peak = lls
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        for i in 1..lls.len() {
            if i <= peak {
                assert!(lls[i] >= lls[i - 1], "not increasing before peak at {i}");
            } else {
                assert!(lls[i] <= lls[i - 1], "not decreasing after peak at {i}");
            }
        }
    }
}
