//! Acceptance suite: every criterion runs at its stated tolerance and prints
//! one pass/fail line, with the runtime budget enforced.

// negated comparisons reject NaN deliberately
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::time::Instant;

use nalgebra::{DMatrix, DVector};

use glzeta::analysis::{
    characteristic_function, characteristic_generator_with, mean_cov, product_moment,
    CfRepresentation,
};
use glzeta::inference::{
    aic, carbon_fiber_dataset, fit, kolmogorov_p_value, log_likelihood, FitConfig, FixedParams,
    UnivariateParams,
};
use glzeta::model::{
    log_pdf, normalizing_constant, preset, GLParams, LocationScale, Method, Preset,
};
use glzeta::radial::{build_radial, sample, sample_sphere, sample_with, RandomSource};
use glzeta::special::{
    integrate, integrate_semi_infinite, log_gamma, phi_star, phi_star_integral, QuadratureConfig,
    ZetaArgs,
};
use glzeta::structure::{
    conditional, consistency_defect, generator_step_down, gl_generator, Partition, StepDirection,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, f64);

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !($cond) {
            return Err(format!($($arg)*));
        }
    };
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (
            "01 zeta series vs integral representation",
            criterion_01,
            10.0,
        ),
        (
            "02 normalizing constants, series vs quadrature",
            criterion_02,
            30.0,
        ),
        (
            "03 special-case collapse to the normal law",
            criterion_03,
            30.0,
        ),
        (
            "04 logistic generator derivative/integral chain",
            criterion_04,
            30.0,
        ),
        ("05 dimension-coherence defect witness", criterion_05, 10.0),
        ("06 moments vs Monte Carlo", criterion_06, 60.0),
        (
            "07 characteristic function representations & MC",
            criterion_07,
            60.0,
        ),
        (
            "08 Kolmogorov-Smirnov p-value reproduction",
            criterion_08,
            1.0,
        ),
        ("09 AIC arithmetic reproduction", criterion_09, 1.0),
        ("10 carbon-fiber fitting pipeline", criterion_10, 60.0),
        ("11 sampler validity", criterion_11, 60.0),
        (
            "12 conditional law normalization & closed form",
            criterion_12,
            60.0,
        ),
    ];
    let mut failures = 0usize;
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f);
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(Ok(detail)) if elapsed <= budget => {
                println!("criterion {name} ... PASS [{elapsed:.2}s] {detail}");
            }
            Ok(Ok(_)) => {
                failures += 1;
                println!(
                    "criterion {name} ... FAIL [{elapsed:.2}s] exceeded {budget:.0}s runtime budget"
                );
            }
            Ok(Err(msg)) => {
                failures += 1;
                println!("criterion {name} ... FAIL [{elapsed:.2}s] {msg}");
            }
            Err(_) => {
                failures += 1;
                println!("criterion {name} ... FAIL [{elapsed:.2}s] panicked");
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criterion(s) failed");
        std::process::exit(1);
    }
}

fn criterion_01() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut checked = 0usize;
    let mut worst: f64 = 0.0;
    for &v in &[0.0, 0.5, 1.0, 2.0, 4.0] {
        for &s in &[0.5, 1.0, 2.0, 5.0] {
            for &a in &[0.5, 1.0, 2.0] {
                for &z in &[-1.0, -0.5, 0.5] {
                    let args = ZetaArgs::new(z, s, a, v).map_err(|e| e.to_string())?;
                    let series = phi_star(&args).map_err(|e| e.to_string())?;
                    let integral = phi_star_integral(&args, &cfg).map_err(|e| e.to_string())?;
                    let rel = ((series - integral) / series).abs();
                    ensure!(
                        rel <= 1e-8,
                        "z={z} s={s} a={a} v={v}: relative gap {rel:.2e}"
                    );
                    worst = worst.max(rel);
                    checked += 1;
                }
            }
        }
    }
    ensure!(checked >= 50, "only {checked} grid points checked");
    Ok(format!("{checked} points, worst relative gap {worst:.1e}"))
}

fn criterion_02() -> Outcome {
    let combos: Vec<GLParams> = vec![
        preset(Preset::Logistic).unwrap(),
        preset(Preset::Normal).unwrap(),
        preset(Preset::Laplace).unwrap(),
        preset(Preset::Kotz {
            n_shape: 2.0,
            a: 1.5,
            s1: 1.0,
        })
        .unwrap(),
        preset(Preset::Kotz {
            n_shape: 1.0,
            a: 1.0,
            s1: 2.0,
        })
        .unwrap(),
        preset(Preset::ExponentialPower { a: 0.7, s1: 1.0 }).unwrap(),
        preset(Preset::ExponentialPower { a: 1.0, s1: 0.5 }).unwrap(),
        preset(Preset::GlTypeI { r: 0.5 }).unwrap(),
        preset(Preset::GlTypeI { r: 2.0 }).unwrap(),
        preset(Preset::GlTypeIii { a: 1.5 }).unwrap(),
        preset(Preset::GlTypeIv { a: 1.0, p: 1.0 }).unwrap(),
        preset(Preset::GlTypeIv { a: 2.0, p: 2.0 }).unwrap(),
        preset(Preset::GeneralizedLogistic {
            a: 0.8,
            b: 2.0,
            r: 1.5,
        })
        .unwrap(),
        GLParams::new(2.5, 0.9, 1.3, 1.0, 1.0, 0.7).unwrap(),
    ];
    let mut checked = 0usize;
    let mut worst: f64 = 0.0;
    for p in &combos {
        for dim in 1..=3usize {
            if p.check_dimension(dim).is_err() {
                continue;
            }
            let series = normalizing_constant(p, dim, Method::Series).map_err(|e| e.to_string())?;
            let quad =
                normalizing_constant(p, dim, Method::Quadrature).map_err(|e| e.to_string())?;
            let rel = ((series - quad) / quad).abs();
            ensure!(
                rel <= 1e-8,
                "dim {dim}: series {series} vs quadrature {quad}"
            );
            worst = worst.max(rel);
            checked += 1;
        }
    }
    ensure!(checked >= 20, "only {checked} combinations checked");

    // closed forms of the named subfamilies against the series path
    let half_pi = |n: usize| (0.5 * n as f64) * std::f64::consts::PI.ln();
    for dim in 1..=3usize {
        let n_f = dim as f64;
        // power-exponential subfamily: C_n = s1 Γ(n/2) a^{n/(2 s1)} / (π^{n/2} Γ(n/(2 s1)))
        for (a, s1) in [(0.7, 1.0), (1.0, 0.5), (1.3, 2.0)] {
            let p = preset(Preset::ExponentialPower { a, s1 }).unwrap();
            let kappa = 0.5 * n_f / s1;
            let closed = (log_gamma(0.5 * n_f).unwrap() - log_gamma(kappa).unwrap()
                + kappa * a.ln()
                + s1.ln()
                - half_pi(dim))
            .exp();
            let series = normalizing_constant(&p, dim, Method::Series).unwrap();
            ensure!(
                ((series - closed) / closed).abs() <= 1e-10,
                "power-exponential closed form at n={dim}"
            );
        }
        // Kotz subfamily with its Γ-ratio closed form
        {
            let p = preset(Preset::Kotz {
                n_shape: 2.0,
                a: 1.5,
                s1: 1.0,
            })
            .unwrap();
            let kappa = 2.0 + 0.5 * n_f - 1.0;
            let closed = (log_gamma(0.5 * n_f).unwrap() - log_gamma(kappa).unwrap()
                + kappa * 1.5f64.ln()
                - half_pi(dim))
            .exp();
            let series = normalizing_constant(&p, dim, Method::Series).unwrap();
            ensure!(
                ((series - closed) / closed).abs() <= 1e-10,
                "Kotz closed form at n={dim}"
            );
        }
        // type-I/III/IV subfamilies: C_n = [π^{n/2} Φ*_v(-1, n/2, a)]^{-1}
        let zeta_form = |v: f64, a: f64| -> f64 {
            let zeta = phi_star(&ZetaArgs::new(-1.0, 0.5 * n_f, a, v).unwrap()).unwrap();
            ((-half_pi(dim)).exp()) / zeta
        };
        for (p, closed) in [
            (
                preset(Preset::GlTypeI { r: 2.0 }).unwrap(),
                zeta_form(4.0, 1.0),
            ),
            (
                preset(Preset::GlTypeIii { a: 1.5 }).unwrap(),
                zeta_form(3.0, 1.5),
            ),
            (
                preset(Preset::GlTypeIv { a: 2.0, p: 2.0 }).unwrap(),
                zeta_form(4.0, 2.0),
            ),
        ] {
            let series = normalizing_constant(&p, dim, Method::Series).unwrap();
            ensure!(
                ((series - closed) / closed).abs() <= 1e-10,
                "zeta closed form at n={dim}"
            );
        }
    }
    Ok(format!(
        "{checked} combinations, worst relative gap {worst:.1e}"
    ))
}

fn criterion_03() -> Outcome {
    let normal = preset(Preset::Normal).unwrap();
    let mut src = RandomSource::new(2024);
    let mut worst: f64 = 0.0;
    for dim in 1..=3usize {
        let scales = random_location_scales(dim, 2, &mut src);
        for ls in &scales {
            for _ in 0..17 {
                let x = DVector::from_fn(dim, |_, _| 4.0 * (src.uniform() - 0.5));
                let ours = log_pdf(&normal, ls, &x).map_err(|e| e.to_string())?;
                let q = ls.quadratic_form(&x).unwrap();
                let closed = -0.5 * dim as f64 * (2.0 * std::f64::consts::PI).ln()
                    - 0.5 * ls.log_det_sigma()
                    - 0.5 * q;
                let rel = ((ours.exp() - closed.exp()) / closed.exp()).abs();
                ensure!(rel <= 1e-10, "normal pdf gap {rel:.2e} at dim {dim}");
                worst = worst.max(rel);
            }
        }
    }
    let logistic = preset(Preset::Logistic).unwrap();
    let c2 = normalizing_constant(&logistic, 2, Method::Series).unwrap();
    let rel = ((c2 - 2.0 / std::f64::consts::PI) / (2.0 / std::f64::consts::PI)).abs();
    ensure!(rel <= 1e-10, "logistic C2 = {c2}, gap {rel:.2e}");
    Ok(format!(
        "102 points over n=1..3, worst pdf gap {worst:.1e}; logistic C2 gap {rel:.1e}"
    ))
}

fn criterion_04() -> Outcome {
    let logistic = preset(Preset::Logistic).unwrap();
    let g1 = gl_generator(&logistic, 1).unwrap();
    let mut worst_d: f64 = 0.0;
    for i in 0..80 {
        let t = 0.1 + (10.0 - 0.1) * i as f64 / 79.0;
        let printed = ((-t).exp() - (-2.0 * t).exp()) / (1.0 + (-t).exp()).powi(3);
        let derived =
            generator_step_down(&g1, StepDirection::Differentiate, t).map_err(|e| e.to_string())?;
        let rel = ((derived - printed) / printed).abs();
        ensure!(rel <= 1e-8, "derivative gap {rel:.2e} at t = {t}");
        worst_d = worst_d.max(rel);
    }
    // integrating the two-dimensions-down generator recovers the original
    let g3 = gl_generator(&logistic, 1).unwrap();
    let mut worst_i: f64 = 0.0;
    for &t in &[0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let cfg = QuadratureConfig::default();
        let integral = integrate_semi_infinite(
            |y| {
                let u = t + y;
                ((-u).exp() - (-2.0 * u).exp()) / (1.0 + (-u).exp()).powi(3)
            },
            &cfg,
        )
        .map_err(|e| e.to_string())?;
        let expect = g3.eval(t).unwrap();
        let rel = ((integral - expect) / expect).abs();
        ensure!(rel <= 1e-8, "integral gap {rel:.2e} at t = {t}");
        worst_i = worst_i.max(rel);
    }
    Ok(format!(
        "worst derivative gap {worst_d:.1e}, worst integral gap {worst_i:.1e}"
    ))
}

fn criterion_05() -> Outcome {
    let grid = [0.25, 0.5, 1.0, 2.0, 4.0];
    let normal = preset(Preset::Normal).unwrap();
    let normal_defect = consistency_defect(&normal, 3, &grid).map_err(|e| e.to_string())?;
    ensure!(
        normal_defect <= 1e-7,
        "normal family defect {normal_defect:.2e} too large"
    );
    let logistic = preset(Preset::Logistic).unwrap();
    let logistic_defect = consistency_defect(&logistic, 3, &grid).map_err(|e| e.to_string())?;
    ensure!(
        logistic_defect > 0.01,
        "logistic family defect {logistic_defect:.2e} too small"
    );
    Ok(format!(
        "normal defect {normal_defect:.1e}, logistic defect {logistic_defect:.3}"
    ))
}

fn criterion_06() -> Outcome {
    let cases = [
        preset(Preset::Normal).unwrap(),
        preset(Preset::Logistic).unwrap(),
        preset(Preset::Kotz {
            n_shape: 2.0,
            a: 1.0,
            s1: 1.0,
        })
        .unwrap(),
    ];
    let n_draws = 1_000_000usize;
    let ls = LocationScale::standard(2).unwrap();
    let mut details = Vec::new();
    for (ci, p) in cases.iter().enumerate() {
        let mut src = RandomSource::new(600 + ci as u64);
        let draws = sample(p, &ls, n_draws, &mut src).map_err(|e| e.to_string())?;
        let theory = mean_cov(p, &ls).unwrap();
        // covariance entries with empirical standard errors
        for (i, j) in [(0usize, 0usize), (0, 1), (1, 1)] {
            let prods: Vec<f64> = (0..n_draws)
                .map(|k| draws[(k, i)] * draws[(k, j)])
                .collect();
            let mean = prods.iter().sum::<f64>() / n_draws as f64;
            let var =
                prods.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>() / (n_draws - 1) as f64;
            let se = (var / n_draws as f64).sqrt();
            let expect = theory.covariance[(i, j)];
            ensure!(
                (mean - expect).abs() <= 4.0 * se,
                "case {ci} cov[{i}{j}]: MC {mean:.5} vs {expect:.5} (4se = {:.1e})",
                4.0 * se
            );
        }
        // fourth product moment (2,2)
        let pm = product_moment(p, 2, &[2, 2]).unwrap();
        let prods: Vec<f64> = (0..n_draws)
            .map(|k| draws[(k, 0)].powi(2) * draws[(k, 1)].powi(2))
            .collect();
        let mean = prods.iter().sum::<f64>() / n_draws as f64;
        let var = prods.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>() / (n_draws - 1) as f64;
        let se = (var / n_draws as f64).sqrt();
        ensure!(
            (mean - pm).abs() <= 4.0 * se,
            "case {ci} product moment: MC {mean:.5} vs {pm:.5} (4se = {:.1e})",
            4.0 * se
        );
        details.push(format!("case {ci} ok"));
    }
    Ok("3 presets x (3 covariance entries + product moment) within 4 SE".to_string())
}

fn criterion_07() -> Outcome {
    // exact value at zero
    for p in [
        preset(Preset::Logistic).unwrap(),
        preset(Preset::Normal).unwrap(),
    ] {
        let ls = LocationScale::standard(2).unwrap();
        let at_zero = characteristic_function(&p, &ls, &DVector::zeros(2)).unwrap();
        ensure!(
            at_zero.re == 1.0 && at_zero.im == 0.0,
            "value at zero not exactly 1"
        );
    }
    // three spellings agree pairwise to 1e-9 on |t| <= 1
    let mut worst_rep: f64 = 0.0;
    for p in [
        preset(Preset::Logistic).unwrap(),
        GLParams::new(2.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap(),
    ] {
        for dim in [2usize, 3] {
            for i in 1..=10 {
                let u2 = i as f64 / 10.0;
                let a = characteristic_generator_with(&p, dim, u2, CfRepresentation::BetaRatio)
                    .unwrap()
                    .0;
                let b = characteristic_generator_with(&p, dim, u2, CfRepresentation::GammaRatio)
                    .unwrap()
                    .0;
                let c =
                    characteristic_generator_with(&p, dim, u2, CfRepresentation::Hypergeometric)
                        .unwrap()
                        .0;
                for gap in [
                    ((a - b) / a).abs(),
                    ((a - c) / a).abs(),
                    ((b - c) / b).abs(),
                ] {
                    ensure!(
                        gap <= 1e-9,
                        "spelling gap {gap:.2e} at u2 = {u2}, dim {dim}"
                    );
                    worst_rep = worst_rep.max(gap);
                }
            }
        }
    }
    // series vs Monte Carlo at 10 random arguments
    let logistic = preset(Preset::Logistic).unwrap();
    let ls = LocationScale::standard(2).unwrap();
    let n_draws = 1_000_000usize;
    let mut src = RandomSource::new(7070);
    let draws = sample(&logistic, &ls, n_draws, &mut src).map_err(|e| e.to_string())?;
    for k in 0..10 {
        let t = DVector::from_fn(2, |_, _| 1.4 * (src.uniform() - 0.5));
        let psi = characteristic_function(&logistic, &ls, &t).map_err(|e| e.to_string())?;
        let mut re = 0.0;
        let mut im = 0.0;
        let mut re2 = 0.0;
        let mut im2 = 0.0;
        for i in 0..n_draws {
            let dot = t[0] * draws[(i, 0)] + t[1] * draws[(i, 1)];
            let (s, c) = dot.sin_cos();
            re += c;
            im += s;
            re2 += c * c;
            im2 += s * s;
        }
        let nf = n_draws as f64;
        re /= nf;
        im /= nf;
        let se_re = ((re2 / nf - re * re) / nf).sqrt();
        let se_im = ((im2 / nf - im * im) / nf).sqrt();
        ensure!(
            (psi.re - re).abs() <= 4.0 * se_re,
            "argument {k}: Re series {:.5} vs MC {re:.5}",
            psi.re
        );
        ensure!(
            (psi.im - im).abs() <= 4.0 * se_im,
            "argument {k}: Im series {:.5} vs MC {im:.5}",
            psi.im
        );
    }
    Ok(format!(
        "value at 0 exact; spellings agree (worst {worst_rep:.1e}); 10 MC arguments within 4 SE"
    ))
}

fn criterion_08() -> Outcome {
    let p_mid = kolmogorov_p_value(63.0f64.sqrt() * 0.0987);
    ensure!(
        (p_mid - 0.5714).abs() <= 2e-4,
        "p-value {p_mid:.6} not within 2e-4 of 0.5714"
    );
    let p_far = kolmogorov_p_value(63.0f64.sqrt() * 0.7123);
    ensure!(p_far < 1e-6, "p-value {p_far:.2e} not below 1e-6");
    Ok(format!("p(0.0987) = {p_mid:.4}, p(0.7123) = {p_far:.1e}"))
}

fn criterion_09() -> Outcome {
    let a1 = aic(1, -165.5826).unwrap();
    ensure!((a1 - 333.1652).abs() < 1e-9, "aic(1, -165.5826) = {a1}");
    let a4 = aic(4, -49.6587).unwrap();
    ensure!((a4 - 107.3174).abs() < 1e-9, "aic(4, -49.6587) = {a4}");
    Ok(format!("aic values {a1:.4} and {a4:.4}"))
}

fn criterion_10() -> Outcome {
    let data = carbon_fiber_dataset();
    let table = UnivariateParams {
        n_shape: 1.0,
        a: 1.0,
        b: 8.7827e4,
        s: 1.0,
        mu: 3.0593,
        sigma2: 0.7588,
        r: 4.1739e-38,
    };
    let gl = table.gl_params().unwrap();
    let ll_table = log_likelihood(&data, &gl, table.mu, table.sigma2).map_err(|e| e.to_string())?;

    // independent direct-summation oracle with its own quadrature normalizer
    let cfg = QuadratureConfig::default();
    let radial_integral = integrate_semi_infinite(
        |x| {
            if x <= 0.0 {
                return 0.0;
            }
            let ln_g = -x - 2.0 * table.r * ((-table.b * x).exp()).ln_1p();
            (-0.5 * x.ln() + ln_g).exp()
        },
        &cfg,
    )
    .map_err(|e| e.to_string())?;
    let c1 = 1.0 / radial_integral;
    let sigma = table.sigma2.sqrt();
    let mut oracle = 0.0;
    for &x in data.values() {
        let z2 = (x - table.mu) * (x - table.mu) / table.sigma2;
        let ln_g = -z2 - 2.0 * table.r * ((-table.b * z2).exp()).ln_1p();
        oracle += c1.ln() - sigma.ln() + ln_g;
    }
    let oracle_rel = ((ll_table - oracle) / oracle).abs();
    ensure!(
        oracle_rel <= 1e-8,
        "module path {ll_table:.8} vs direct oracle {oracle:.8}"
    );

    // the fitter must do at least as well as the published point
    let fixed = FixedParams {
        n_shape: Some(1.0),
        a: Some(1.0),
        s: Some(1.0),
        b: None,
        mu: None,
        sigma2: None,
        r: None,
    };
    let initial = UnivariateParams {
        n_shape: 1.0,
        a: 1.0,
        b: 1.0,
        s: 1.0,
        mu: data.mean(),
        sigma2: 2.0 * data.variance(),
        r: 0.5,
    };
    let cfg = FitConfig::new(fixed, initial);
    let mut src = RandomSource::new(88);
    let result = fit(&data, &cfg, &mut src).map_err(|e| e.to_string())?;
    ensure!(
        result.log_likelihood >= ll_table - 1e-9,
        "fitted {:.6} below the published-point value {ll_table:.6}",
        result.log_likelihood
    );
    ensure!(result.free_count == 4, "free count {}", result.free_count);

    // the printed Table value is a documented comparison target, not a gate
    let printed = -49.6587;
    let gap = ll_table - printed;
    Ok(format!(
        "log-likelihood at printed estimates {ll_table:.4} (printed {printed}, deviation {gap:+.4}); fitted {:.4} >= printed-point value; oracle agreement {oracle_rel:.1e}",
        result.log_likelihood
    ))
}

fn criterion_11() -> Outcome {
    // radial histograms against the radial density, chi-squared at alpha = 0.01
    let presets: Vec<(&str, GLParams)> = vec![
        ("normal", preset(Preset::Normal).unwrap()),
        ("logistic", preset(Preset::Logistic).unwrap()),
        ("laplace", preset(Preset::Laplace).unwrap()),
        (
            "kotz",
            preset(Preset::Kotz {
                n_shape: 2.0,
                a: 1.0,
                s1: 1.0,
            })
            .unwrap(),
        ),
        (
            "epower",
            preset(Preset::ExponentialPower { a: 1.0, s1: 1.5 }).unwrap(),
        ),
        ("gl1", preset(Preset::GlTypeI { r: 1.5 }).unwrap()),
        ("gl3", preset(Preset::GlTypeIii { a: 1.2 }).unwrap()),
        ("gl4", preset(Preset::GlTypeIv { a: 1.0, p: 1.0 }).unwrap()),
        (
            "genlogistic",
            preset(Preset::GeneralizedLogistic {
                a: 0.8,
                b: 2.0,
                r: 1.5,
            })
            .unwrap(),
        ),
    ];
    let bins = 20usize;
    let chi2_crit = 36.1909; // upper 1% of chi-squared with 19 dof
    let n_draws = 100_000usize;
    let quad_cfg = QuadratureConfig::default();
    let mut seed = 1100u64;
    for (name, p) in &presets {
        for dim in 1..=3usize {
            if p.check_dimension(dim).is_err() {
                continue;
            }
            let rd = build_radial(p, dim, 2048).map_err(|e| e.to_string())?;
            // bin boundaries from the quantile table; expected masses by quadrature
            let mut bounds = vec![0.0f64];
            for k in 1..bins {
                bounds.push(rd.quantile(k as f64 / bins as f64).unwrap());
            }
            bounds.push(f64::INFINITY);
            let mut expected = Vec::with_capacity(bins);
            for k in 0..bins {
                let mass = if bounds[k + 1].is_finite() {
                    integrate(
                        |v| rd.density(v).unwrap_or(0.0),
                        bounds[k],
                        bounds[k + 1],
                        &quad_cfg,
                    )
                    .map_err(|e| e.to_string())?
                } else {
                    integrate_semi_infinite(|y| rd.density(bounds[k] + y).unwrap_or(0.0), &quad_cfg)
                        .map_err(|e| e.to_string())?
                };
                expected.push(mass * n_draws as f64);
            }
            seed += 1;
            let mut src = RandomSource::new(seed);
            let mut counts = vec![0usize; bins];
            for _ in 0..n_draws {
                let v = rd.sample(&mut src);
                let k = bounds.partition_point(|b| *b <= v).saturating_sub(1);
                counts[k.min(bins - 1)] += 1;
            }
            let chi2: f64 = counts
                .iter()
                .zip(&expected)
                .map(|(&c, &e)| (c as f64 - e) * (c as f64 - e) / e)
                .sum();
            ensure!(
                chi2 < chi2_crit,
                "radial chi2 {chi2:.1} exceeds {chi2_crit} for {name} at n = {dim}"
            );
        }
    }

    // sphere samples: exact unit norms, covariance I/n
    let mut src = RandomSource::new(4242);
    let dim = 3usize;
    let n_draws = 100_000usize;
    let mut sums: DMatrix<f64> = DMatrix::zeros(dim, dim);
    let mut sums_sq: DMatrix<f64> = DMatrix::zeros(dim, dim);
    for _ in 0..n_draws {
        let u = sample_sphere(dim, &mut src);
        ensure!(
            (u.norm() - 1.0).abs() <= 1e-12,
            "sphere norm off by {:1e}",
            (u.norm() - 1.0).abs()
        );
        for i in 0..dim {
            for j in 0..dim {
                let w = u[i] * u[j];
                sums[(i, j)] += w;
                sums_sq[(i, j)] += w * w;
            }
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            let mean = sums[(i, j)] / n_draws as f64;
            let var = sums_sq[(i, j)] / n_draws as f64 - mean * mean;
            let se = (var / n_draws as f64).sqrt();
            let expect = if i == j { 1.0 / dim as f64 } else { 0.0 };
            ensure!(
                (mean - expect).abs() <= 4.0 * se,
                "sphere covariance [{i}{j}] = {mean:.5} vs {expect}"
            );
        }
    }

    // full draws reproduce the location and the covariance
    let logistic = preset(Preset::Logistic).unwrap();
    let mu = DVector::from_row_slice(&[1.0, -2.0]);
    let sigma = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 2.0]);
    let ls = LocationScale::new(mu.clone(), sigma).unwrap();
    let theory = mean_cov(&logistic, &ls).unwrap();
    let rd = build_radial(&logistic, 2, 4096).map_err(|e| e.to_string())?;
    let mut src = RandomSource::new(99);
    let n_draws = 200_000usize;
    let draws = sample_with(&rd, &ls, n_draws, &mut src).map_err(|e| e.to_string())?;
    for d in 0..2 {
        let col: Vec<f64> = (0..n_draws).map(|i| draws[(i, d)]).collect();
        let mean = col.iter().sum::<f64>() / n_draws as f64;
        let var = col.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n_draws as f64;
        let se = (var / n_draws as f64).sqrt();
        ensure!(
            (mean - mu[d]).abs() <= 4.0 * se,
            "sample mean[{d}] {mean:.4} vs {:.4}",
            mu[d]
        );
    }
    for (i, j) in [(0usize, 0usize), (0, 1), (1, 1)] {
        let prods: Vec<f64> = (0..n_draws)
            .map(|k| (draws[(k, i)] - mu[i]) * (draws[(k, j)] - mu[j]))
            .collect();
        let mean = prods.iter().sum::<f64>() / n_draws as f64;
        let var = prods.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>() / (n_draws - 1) as f64;
        let se = (var / n_draws as f64).sqrt();
        ensure!(
            (mean - theory.covariance[(i, j)]).abs() <= 4.0 * se,
            "sample cov[{i}{j}] {mean:.4} vs {:.4}",
            theory.covariance[(i, j)]
        );
    }
    Ok("radial chi-squared, sphere statistics and full-draw moments all pass".to_string())
}

fn criterion_12() -> Outcome {
    // five configurations: conditional densities integrate to one
    let configs: Vec<(GLParams, f64, f64, f64)> = vec![
        (preset(Preset::Logistic).unwrap(), 0.4, 1.1, 0.7),
        (
            preset(Preset::GlTypeIii { a: 1.2 }).unwrap(),
            -0.3,
            0.9,
            -0.5,
        ),
        (
            preset(Preset::Kotz {
                n_shape: 2.0,
                a: 1.0,
                s1: 1.0,
            })
            .unwrap(),
            0.6,
            1.4,
            1.3,
        ),
        (
            preset(Preset::GlTypeIv { a: 1.0, p: 1.0 }).unwrap(),
            0.0,
            1.0,
            2.0,
        ),
        (
            preset(Preset::GeneralizedLogistic {
                a: 0.8,
                b: 2.0,
                r: 1.5,
            })
            .unwrap(),
            0.25,
            0.8,
            -1.1,
        ),
    ];
    let cfg = QuadratureConfig::default();
    let mut worst_mass: f64 = 0.0;
    for (p, rho, s22, x2val) in &configs {
        let sigma = DMatrix::from_row_slice(2, 2, &[1.0, *rho, *rho, *s22]);
        let ls = LocationScale::new(DVector::zeros(2), sigma).map_err(|e| e.to_string())?;
        let part = Partition::new(&ls, 1).unwrap();
        let spec =
            conditional(p, &part, &DVector::from_element(1, *x2val)).map_err(|e| e.to_string())?;
        let mass = integrate(
            |x| spec.density(&DVector::from_element(1, x)).unwrap_or(0.0),
            -30.0,
            30.0,
            &cfg,
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            (mass - 1.0).abs() <= 1e-6,
            "conditional mass {mass:.8} for x2 = {x2val}"
        );
        worst_mass = worst_mass.max((mass - 1.0).abs());
    }

    // logistic closed form against the quadrature-normalized conditional
    let logistic = preset(Preset::Logistic).unwrap();
    let sigma = DMatrix::from_row_slice(2, 2, &[1.0, 0.4, 0.4, 1.0]);
    let ls = LocationScale::new(DVector::zeros(2), sigma).unwrap();
    let part = Partition::new(&ls, 1).unwrap();
    let mut worst_gap: f64 = 0.0;
    for &x2 in &[0.3, 1.1, 2.2] {
        let spec = conditional(&logistic, &part, &DVector::from_element(1, x2)).unwrap();
        let q2 = spec.q2();
        let norm_closed = (log_gamma(0.5).unwrap() - q2).exp()
            * phi_star(&ZetaArgs::new(-(-q2).exp(), 0.5, 1.0, 2.0).unwrap()).unwrap();
        for i in 0..40 {
            let t = 0.05 + 8.0 * i as f64 / 39.0;
            let closed = ((-t - q2).exp() / (1.0 + (-t - q2).exp()).powi(2)) / norm_closed;
            let ours = spec.generator().eval(t).unwrap() / spec.normalizer();
            let rel = ((ours - closed) / closed).abs();
            ensure!(
                rel <= 1e-7,
                "closed-form gap {rel:.2e} at t = {t}, x2 = {x2}"
            );
            worst_gap = worst_gap.max(rel);
        }
    }
    Ok(format!(
        "5 conditional masses within {worst_mass:.1e} of 1; closed form within {worst_gap:.1e}"
    ))
}

fn random_location_scales(dim: usize, count: usize, src: &mut RandomSource) -> Vec<LocationScale> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = DMatrix::from_fn(dim, dim, |_, _| 2.0 * (src.uniform() - 0.5));
        let sigma = &a * a.transpose() + DMatrix::identity(dim, dim) * 0.3;
        let mu = DVector::from_fn(dim, |_, _| 3.0 * (src.uniform() - 0.5));
        if let Ok(ls) = LocationScale::new(mu, sigma) {
            out.push(ls);
        }
    }
    out
}
