//! The GL parameter family: density generator, normalizing constants,
//! pdf/log-pdf and univariate CDF evaluation.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{
    integrate, integrate_semi_infinite, log_gamma, phi_star, QuadratureConfig, ZetaArgs,
};

/// Parameters of the GL density generator
/// g(t) = t^(N-1) exp(-a t^s1) / (1 + exp(-b t^s2))^(2r).
///
/// The shape constraint 2N + n > 2 involves the ambient dimension n and is
/// enforced at every (params, dimension) use site, not at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct GLParams {
    /// Power-law exponent N of the leading t^(N-1) factor.
    pub(crate) n_shape: f64,
    /// Exponential rate a > 0.
    pub(crate) a: f64,
    /// Logistic rate b > 0.
    pub(crate) b: f64,
    /// Exponent s1 > 0 on the exponential argument.
    pub(crate) s1: f64,
    /// Exponent s2 > 0 on the logistic argument.
    pub(crate) s2: f64,
    /// Logistic power r >= 0; r = 0 removes the logistic factor entirely.
    pub(crate) r: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    #[serde(rename = "N")]
    n_shape: f64,
    a: f64,
    b: f64,
    s1: f64,
    s2: f64,
    r: f64,
}

impl TryFrom<RawParams> for GLParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        GLParams::new(raw.n_shape, raw.a, raw.b, raw.s1, raw.s2, raw.r)
    }
}

impl From<GLParams> for RawParams {
    fn from(p: GLParams) -> Self {
        RawParams {
            n_shape: p.n_shape,
            a: p.a,
            b: p.b,
            s1: p.s1,
            s2: p.s2,
            r: p.r,
        }
    }
}

impl GLParams {
    pub fn new(n_shape: f64, a: f64, b: f64, s1: f64, s2: f64, r: f64) -> Result<Self> {
        let all = [n_shape, a, b, s1, s2, r];
        if !all.iter().all(|x| x.is_finite()) {
            return Err(Error::domain("GL parameters must be finite"));
        }
        if a <= 0.0 || b <= 0.0 || s1 <= 0.0 || s2 <= 0.0 {
            return Err(Error::domain("GL parameters a, b, s1, s2 must be positive"));
        }
        if r < 0.0 {
            return Err(Error::domain("GL parameter r must be non-negative"));
        }
        Ok(GLParams {
            n_shape,
            a,
            b,
            s1,
            s2,
            r,
        })
    }

    pub fn n_shape(&self) -> f64 {
        self.n_shape
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn s1(&self) -> f64 {
        self.s1
    }

    pub fn s2(&self) -> f64 {
        self.s2
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// True when s1 = s2. Every series-form result (normalizing constants,
    /// marginals, moments, characteristic functions) requires it.
    pub fn common_exponent(&self) -> bool {
        self.s1 == self.s2
    }

    /// Checks the dimension constraint 2N + n > 2.
    pub fn check_dimension(&self, dim: usize) -> Result<()> {
        if dim == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        if 2.0 * self.n_shape + dim as f64 <= 2.0 {
            return Err(Error::domain(format!(
                "2N + n > 2 violated: N = {}, n = {dim}",
                self.n_shape
            )));
        }
        Ok(())
    }

    fn cache_key(&self, dim: usize, method: Method) -> CnKey {
        (
            [
                self.n_shape.to_bits(),
                self.a.to_bits(),
                self.b.to_bits(),
                self.s1.to_bits(),
                self.s2.to_bits(),
                self.r.to_bits(),
            ],
            dim,
            matches!(method, Method::Series),
        )
    }
}

/// Named special cases with their parameter substitutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// Exponential-over-logistic generator with free rates and power.
    GeneralizedLogistic {
        a: f64,
        b: f64,
        r: f64,
    },
    Normal,
    ExponentialPower {
        a: f64,
        s1: f64,
    },
    Laplace,
    Kotz {
        n_shape: f64,
        a: f64,
        s1: f64,
    },
    Logistic,
    GlTypeI {
        r: f64,
    },
    GlTypeIii {
        a: f64,
    },
    GlTypeIv {
        a: f64,
        p: f64,
    },
}

/// Builds the GLParams for a named special case.
pub fn preset(p: Preset) -> Result<GLParams> {
    match p {
        Preset::GeneralizedLogistic { a, b, r } => GLParams::new(1.0, a, b, 1.0, 1.0, r),
        Preset::Normal => GLParams::new(1.0, 0.5, 1.0, 1.0, 1.0, 0.0),
        Preset::ExponentialPower { a, s1 } => GLParams::new(1.0, a, 1.0, s1, s1, 0.0),
        Preset::Laplace => GLParams::new(1.0, 2.0_f64.sqrt(), 1.0, 0.5, 0.5, 0.0),
        Preset::Kotz { n_shape, a, s1 } => GLParams::new(n_shape, a, 1.0, s1, s1, 0.0),
        Preset::Logistic => GLParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0),
        Preset::GlTypeI { r } => GLParams::new(1.0, 1.0, 1.0, 1.0, 1.0, r),
        Preset::GlTypeIii { a } => GLParams::new(1.0, a, 1.0, 1.0, 1.0, a),
        Preset::GlTypeIv { a, p } => {
            if p <= 0.0 {
                return Err(Error::domain("type-IV exponent p must be positive"));
            }
            GLParams::new(1.0, a, 1.0, 1.0, 1.0, 0.5 * (p + a))
        }
    }
}

/// ln(1 + e^{-x}) for x >= 0 without underflow surprises: the term vanishes
/// exactly once e^{-x} is below f64 range (x > ~745).
fn ln_one_plus_exp_neg(x: f64) -> f64 {
    if x > 745.0 {
        0.0
    } else {
        (-x).exp().ln_1p()
    }
}

/// ln g(t) for the generator of this family; t > 0 (t = 0 allowed for N >= 1).
pub fn log_density_generator(params: &GLParams, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!(
            "generator argument must be >= 0, got {t}"
        )));
    }
    let n_shape = params.n_shape;
    if t == 0.0 {
        if n_shape > 1.0 {
            return Ok(f64::NEG_INFINITY);
        }
        if n_shape < 1.0 {
            return Err(Error::domain("generator has a pole at t = 0 for N < 1"));
        }
        return Ok(-2.0 * params.r * std::f64::consts::LN_2);
    }
    let power = (n_shape - 1.0) * t.ln();
    let exp_term = params.a * t.powf(params.s1);
    let logistic = 2.0 * params.r * ln_one_plus_exp_neg(params.b * t.powf(params.s2));
    Ok(power - exp_term - logistic)
}

/// g(t) itself.
pub fn density_generator(params: &GLParams, t: f64) -> Result<f64> {
    Ok(log_density_generator(params, t)?.exp())
}

/// How to evaluate a quantity that has both a closed zeta-series form and a
/// direct quadrature form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Series,
    Quadrature,
}

type CnKey = ([u64; 6], usize, bool);

fn cn_cache() -> &'static RwLock<HashMap<CnKey, f64>> {
    static CACHE: OnceLock<RwLock<HashMap<CnKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Normalizing constant C_n of the density C_n |Σ|^{-1/2} g(q).
///
/// Series: C_n = c_n*(N, b, s) / Φ*_{2r}(-1, (N + n/2 - 1)/s, a/b) with
/// c_n* = Γ(n/2) b^κ s / (Γ(κ) π^{n/2}); requires s1 = s2.
/// Quadrature: C_n = Γ(n/2)/π^{n/2} / ∫₀^∞ x^{n/2-1} g(x) dx for any
/// parameters. Results are cached per (params, n, method).
pub fn normalizing_constant(params: &GLParams, dim: usize, method: Method) -> Result<f64> {
    params.check_dimension(dim)?;
    let key = params.cache_key(dim, method);
    if let Some(v) = cn_cache().read().unwrap().get(&key) {
        return Ok(*v);
    }
    let value = match method {
        Method::Series => {
            if !params.common_exponent() {
                return Err(Error::domain(
                    "series normalizing constant requires s1 = s2",
                ));
            }
            let s = params.s1;
            let n_f = dim as f64;
            let kappa = (params.n_shape + 0.5 * n_f - 1.0) / s;
            let zeta = phi_star(&ZetaArgs::new(
                -1.0,
                kappa,
                params.a / params.b,
                2.0 * params.r,
            )?)?;
            let ln_cn = log_gamma(0.5 * n_f)? + kappa * params.b.ln() + s.ln()
                - log_gamma(kappa)?
                - 0.5 * n_f * std::f64::consts::PI.ln();
            ln_cn.exp() / zeta
        }
        Method::Quadrature => {
            let n_f = dim as f64;
            let cfg = QuadratureConfig::default();
            let p = *params;
            let radial = integrate_semi_infinite(
                move |x| {
                    if x <= 0.0 {
                        return 0.0;
                    }
                    match log_density_generator(&p, x) {
                        Ok(lg) => ((0.5 * n_f - 1.0) * x.ln() + lg).exp(),
                        Err(_) => 0.0,
                    }
                },
                &cfg,
            )?;
            ((log_gamma(0.5 * n_f)? - 0.5 * n_f * std::f64::consts::PI.ln()).exp()) / radial
        }
    };
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::Evaluation(format!(
            "normalizing constant came out non-finite or non-positive: {value}"
        )));
    }
    cn_cache().write().unwrap().insert(key, value);
    Ok(value)
}

/// Location vector and positive-definite scale matrix with its Cholesky
/// factorization. Immutable after construction.
#[derive(Debug, Clone)]
pub struct LocationScale {
    mu: DVector<f64>,
    sigma: DMatrix<f64>,
    factor: DMatrix<f64>,
    sigma_inv: DMatrix<f64>,
    log_det_sigma: f64,
}

impl LocationScale {
    pub fn new(mu: DVector<f64>, sigma: DMatrix<f64>) -> Result<Self> {
        let n = mu.len();
        if sigma.nrows() != n || sigma.ncols() != n {
            return Err(Error::domain(format!(
                "scale matrix must be {n}x{n} to match the location vector"
            )));
        }
        if n == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        let sym_err = (&sigma - sigma.transpose()).norm();
        if sym_err > 1e-10 * sigma.norm().max(1.0) {
            return Err(Error::domain("scale matrix must be symmetric"));
        }
        let chol = nalgebra::Cholesky::new(sigma.clone())
            .ok_or_else(|| Error::domain("scale matrix must be positive definite"))?;
        let factor = chol.l();
        let log_det_sigma = 2.0 * factor.diagonal().iter().map(|d| d.ln()).sum::<f64>();
        let sigma_inv = chol.inverse();
        Ok(LocationScale {
            mu,
            sigma,
            factor,
            sigma_inv,
            log_det_sigma,
        })
    }

    /// Standard construction: μ = 0, Σ = I_n.
    pub fn standard(n: usize) -> Result<Self> {
        LocationScale::new(DVector::zeros(n), DMatrix::identity(n, n))
    }

    /// Univariate construction from (μ, σ²).
    pub fn univariate(mu: f64, sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(Error::domain(format!(
                "sigma2 must be positive, got {sigma2}"
            )));
        }
        LocationScale::new(
            DVector::from_element(1, mu),
            DMatrix::from_element(1, 1, sigma2),
        )
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    /// Lower-triangular L with L Lᵀ = Σ.
    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    pub fn sigma_inv(&self) -> &DMatrix<f64> {
        &self.sigma_inv
    }

    pub fn log_det_sigma(&self) -> f64 {
        self.log_det_sigma
    }

    /// Quadratic form (x-μ)ᵀ Σ⁻¹ (x-μ) via the triangular factor.
    pub fn quadratic_form(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::domain(format!(
                "point has dimension {}, expected {}",
                x.len(),
                self.dim()
            )));
        }
        let diff = x - &self.mu;
        let w = self
            .factor
            .solve_lower_triangular(&diff)
            .ok_or_else(|| Error::Evaluation("triangular solve failed".into()))?;
        Ok(w.norm_squared())
    }
}

/// ln f(x) = ln C_n - ½ ln|Σ| + ln g(q). Returns -∞ at a q = 0 pole (N < 1)
/// rather than erroring: the pole carries zero measure.
pub fn log_pdf(params: &GLParams, ls: &LocationScale, x: &DVector<f64>) -> Result<f64> {
    let dim = ls.dim();
    params.check_dimension(dim)?;
    let q = ls.quadratic_form(x)?;
    if q == 0.0 && params.n_shape < 1.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let method = if params.common_exponent() {
        Method::Series
    } else {
        Method::Quadrature
    };
    let cn = normalizing_constant(params, dim, method)?;
    #[cfg(debug_assertions)]
    if params.common_exponent() {
        let check = normalizing_constant(params, dim, Method::Quadrature)?;
        debug_assert!(
            ((cn - check) / check).abs() < 1e-6,
            "normalizing-constant paths disagree: {cn} vs {check}"
        );
    }
    Ok(cn.ln() - 0.5 * ls.log_det_sigma() + log_density_generator(params, q)?)
}

/// f(x) itself.
pub fn pdf(params: &GLParams, ls: &LocationScale, x: &DVector<f64>) -> Result<f64> {
    Ok(log_pdf(params, ls, x)?.exp())
}

/// Univariate CDF by symmetry reduction:
/// F(x) = 1/2 + sign(x-μ) · (C₁/2) ∫₀^{z²} u^{-1/2} g(u) du, z = (x-μ)/σ.
pub fn cdf_univariate(params: &GLParams, mu: f64, sigma2: f64, x: f64) -> Result<f64> {
    params.check_dimension(1)?;
    if !(sigma2 > 0.0) {
        return Err(Error::domain(format!(
            "sigma2 must be positive, got {sigma2}"
        )));
    }
    if x == mu {
        return Ok(0.5);
    }
    let method = if params.common_exponent() {
        Method::Series
    } else {
        Method::Quadrature
    };
    let c1 = normalizing_constant(params, 1, method)?;
    let z2 = (x - mu) * (x - mu) / sigma2;
    let p = *params;
    let cfg = QuadratureConfig::default();
    let half_mass = integrate(
        move |u| {
            if u <= 0.0 {
                return 0.0;
            }
            match log_density_generator(&p, u) {
                Ok(lg) => (-0.5 * u.ln() + lg).exp(),
                Err(_) => 0.0,
            }
        },
        0.0,
        z2,
        &cfg,
    )?;
    let f = 0.5 + (x - mu).signum() * 0.5 * c1 * half_mass;
    Ok(f.clamp(0.0, 1.0))
}
