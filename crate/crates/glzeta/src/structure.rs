//! Marginal, conditional and linear-transform structure.
//!
//! Integrating coordinates out of a GL law yields elliptical laws whose
//! generators leave the GL family; the machinery here makes that concrete:
//! marginal generators, the step-down recursion between generator
//! dimensions, a quantitative dimension-coherence defect, conditional
//! distributions, and arbitrary full-rank linear transforms.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{log_density_generator, GLParams, LocationScale, Method};
use crate::special::{integrate_semi_infinite, log_gamma, phi_star, QuadratureConfig, ZetaArgs};

/// Where a generator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorProvenance {
    /// The family's own generator g_n.
    GlNative,
    /// Marginal generator in closed zeta-series form.
    MarginalSeries,
    /// Marginal generator by direct quadrature of the step-down integral.
    MarginalQuadrature,
    /// Conditional generator t ↦ g_n(t + q₂), normalizer attached separately.
    Conditional,
    /// Generator of a full-rank linear image of the law.
    Transformed,
}

/// A density generator as an evaluation rule t ≥ 0 → value ≥ 0.
///
/// Rules are stored unnormalized; densities attach the dimension-appropriate
/// normalizer at evaluation time. Derivative-based step-downs likewise hold
/// only up to positive constants absorbed by those normalizers.
#[derive(Clone)]
pub struct GeneratorFunction {
    rule: Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>,
    provenance: GeneratorProvenance,
    params: GLParams,
    source_dim: usize,
    target_dim: usize,
}

impl std::fmt::Debug for GeneratorFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GeneratorFunction")
            .field("provenance", &self.provenance)
            .field("source_dim", &self.source_dim)
            .field("target_dim", &self.target_dim)
            .finish()
    }
}

impl GeneratorFunction {
    pub fn eval(&self, t: f64) -> Result<f64> {
        (self.rule)(t)
    }

    pub fn provenance(&self) -> GeneratorProvenance {
        self.provenance
    }

    pub fn params(&self) -> &GLParams {
        &self.params
    }

    /// Dimension of the originating law.
    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    /// Dimension the generator targets.
    pub fn target_dim(&self) -> usize {
        self.target_dim
    }
}

/// The family's own generator at dimension n, as a GeneratorFunction.
pub fn gl_generator(params: &GLParams, dim: usize) -> Result<GeneratorFunction> {
    params.check_dimension(dim)?;
    let p = *params;
    Ok(GeneratorFunction {
        rule: Arc::new(move |t| Ok(log_density_generator(&p, t)?.exp())),
        provenance: GeneratorProvenance::GlNative,
        params: p,
        source_dim: dim,
        target_dim: dim,
    })
}

fn falling_factorial(x: f64, j: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..j {
        acc *= x - i as f64;
    }
    acc
}

fn is_positive_integer(x: f64) -> bool {
    x >= 1.0 && x.fract() == 0.0
}

/// Marginal density generator of the first m coordinates of an n-dimensional
/// GL law.
///
/// Quadrature: u ↦ ∫₀^∞ y^{(n-m)/2 - 1} g_n(y + u) dy, any parameters.
/// Series: the closed zeta form, requiring integer N ≥ 1 and s1 = s2 = 1:
/// u ↦ Σ_j (N-1)_j/j! · Γ((n-m)/2 + j)/b^{(n-m)/2+j} · u^{N-1-j} e^{-au}
///        Φ*_{2r}(-e^{-bu}, (n-m)/2 + j, a/b).
pub fn marginal_generator(
    params: &GLParams,
    n: usize,
    m: usize,
    method: Method,
) -> Result<GeneratorFunction> {
    params.check_dimension(n)?;
    if m == 0 || m >= n {
        return Err(Error::domain(format!(
            "marginal dimension must satisfy 1 <= m < n, got m = {m}, n = {n}"
        )));
    }
    let alpha = 0.5 * (n - m) as f64;
    let p = *params;
    let rule: Arc<dyn Fn(f64) -> Result<f64> + Send + Sync> = match method {
        Method::Quadrature => {
            let cfg = QuadratureConfig::default();
            Arc::new(move |u: f64| {
                if !(u >= 0.0) {
                    return Err(Error::domain(format!(
                        "generator argument must be >= 0, got {u}"
                    )));
                }
                integrate_semi_infinite(
                    |y| {
                        if y <= 0.0 {
                            return 0.0;
                        }
                        match log_density_generator(&p, y + u) {
                            Ok(lg) => ((alpha - 1.0) * y.ln() + lg).exp(),
                            Err(_) => 0.0,
                        }
                    },
                    &cfg,
                )
            })
        }
        Method::Series => {
            if !params.common_exponent() || params.s1 != 1.0 {
                return Err(Error::domain(
                    "series marginal generator requires s1 = s2 = 1",
                ));
            }
            if !is_positive_integer(params.n_shape) {
                return Err(Error::domain(
                    "series marginal generator requires integer N >= 1",
                ));
            }
            let n_int = params.n_shape as usize;
            Arc::new(move |u: f64| {
                if !(u >= 0.0) {
                    return Err(Error::domain(format!(
                        "generator argument must be >= 0, got {u}"
                    )));
                }
                let mut sum = 0.0;
                let mut j_fact = 1.0;
                for j in 0..n_int {
                    if j > 0 {
                        j_fact *= j as f64;
                    }
                    let coef = falling_factorial(p.n_shape - 1.0, j) / j_fact;
                    let order = alpha + j as f64;
                    let z = if p.b * u > 745.0 {
                        0.0
                    } else {
                        -(-p.b * u).exp()
                    };
                    let zeta = phi_star(&ZetaArgs::new(z, order, p.a / p.b, 2.0 * p.r)?)?;
                    let ln_scale = log_gamma(order)? - order * p.b.ln() - p.a * u;
                    sum += coef * u.powi((n_int - 1 - j) as i32) * ln_scale.exp() * zeta;
                }
                Ok(sum)
            })
        }
    };
    Ok(GeneratorFunction {
        rule,
        provenance: match method {
            Method::Series => GeneratorProvenance::MarginalSeries,
            Method::Quadrature => GeneratorProvenance::MarginalQuadrature,
        },
        params: p,
        source_dim: n,
        target_dim: m,
    })
}

/// Moving between generator dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepDirection {
    /// ∫_u^∞ g(ω) dω: two dimensions down in the marginal chain.
    Integrate,
    /// -g'(u) by central differences with one Richardson level. The value is
    /// raw; constant factors conventionally attached to the two-up recursion
    /// are absorbed by density normalizers.
    Differentiate,
}

pub fn generator_step_down(g: &GeneratorFunction, direction: StepDirection, u: f64) -> Result<f64> {
    match direction {
        StepDirection::Integrate => {
            let cfg = QuadratureConfig::default();
            integrate_semi_infinite(|y| g.eval(u + y).unwrap_or(0.0), &cfg)
        }
        StepDirection::Differentiate => {
            if !(u > 0.0) {
                return Err(Error::domain("differentiation point must be positive"));
            }
            // floor the step at the unit scale: a purely relative step makes
            // rounding noise dominate for small u
            let h = 3e-5 * u.max(1.0);
            let diff =
                |h: f64| -> Result<f64> { Ok((g.eval(u + h)? - g.eval(u - h)?) / (2.0 * h)) };
            let d1 = diff(h)?;
            let d2 = diff(0.5 * h)?;
            let richardson = (4.0 * d2 - d1) / 3.0;
            if !richardson.is_finite() {
                return Err(Error::Evaluation(format!(
                    "numerical derivative non-finite at u = {u}"
                )));
            }
            Ok(-richardson)
        }
    }
}

/// Maximum relative deviation over `grid` between the one-dimension-down
/// marginal generator and the family's own generator, both normalized to
/// unit integral against t^{(n-1)/2 - 1}. Zero means the family is dimension
/// coherent at this parameter point on this grid.
pub fn consistency_defect(params: &GLParams, n: usize, grid: &[f64]) -> Result<f64> {
    params.check_dimension(n)?;
    if n < 2 {
        return Err(Error::domain("consistency defect needs n >= 2"));
    }
    if grid.iter().any(|&u| u <= 0.0) {
        return Err(Error::domain("defect grid points must be positive"));
    }
    let m = n - 1;
    let marginal = marginal_generator(params, n, m, Method::Quadrature)?;
    let native = gl_generator(params, m)?;
    let cfg = QuadratureConfig::default();
    let half_m = 0.5 * m as f64;
    let weight_norm = |g: &GeneratorFunction| -> Result<f64> {
        integrate_semi_infinite(
            |t| {
                if t <= 0.0 {
                    return 0.0;
                }
                match g.eval(t) {
                    Ok(v) => t.powf(half_m - 1.0) * v,
                    Err(_) => 0.0,
                }
            },
            &cfg,
        )
    };
    let norm_marginal = weight_norm(&marginal)?;
    let norm_native = weight_norm(&native)?;
    let mut worst: f64 = 0.0;
    for &u in grid {
        let a = marginal.eval(u)? / norm_marginal;
        let b = native.eval(u)? / norm_native;
        worst = worst.max(((a - b) / b).abs());
    }
    Ok(worst)
}

/// Head/tail coordinate split of a location/scale pair. Arbitrary index sets
/// are handled by pre-permuting μ and Σ.
#[derive(Debug, Clone)]
pub struct Partition {
    m: usize,
    mu1: DVector<f64>,
    mu2: DVector<f64>,
    s11: DMatrix<f64>,
    s12: DMatrix<f64>,
    s21: DMatrix<f64>,
    s22: DMatrix<f64>,
}

impl Partition {
    pub fn new(ls: &LocationScale, m: usize) -> Result<Self> {
        let n = ls.dim();
        if m == 0 || m >= n {
            return Err(Error::domain(format!(
                "partition needs 1 <= m < n, got m = {m}, n = {n}"
            )));
        }
        let mu = ls.mu();
        let sigma = ls.sigma();
        Ok(Partition {
            m,
            mu1: mu.rows(0, m).into_owned(),
            mu2: mu.rows(m, n - m).into_owned(),
            s11: sigma.view((0, 0), (m, m)).into_owned(),
            s12: sigma.view((0, m), (m, n - m)).into_owned(),
            s21: sigma.view((m, 0), (n - m, m)).into_owned(),
            s22: sigma.view((m, m), (n - m, n - m)).into_owned(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mu1(&self) -> &DVector<f64> {
        &self.mu1
    }

    pub fn mu2(&self) -> &DVector<f64> {
        &self.mu2
    }

    pub fn s11(&self) -> &DMatrix<f64> {
        &self.s11
    }

    pub fn s12(&self) -> &DMatrix<f64> {
        &self.s12
    }

    pub fn s21(&self) -> &DMatrix<f64> {
        &self.s21
    }

    pub fn s22(&self) -> &DMatrix<f64> {
        &self.s22
    }

    /// Reassembles the full (μ, Σ).
    pub fn assemble(&self) -> (DVector<f64>, DMatrix<f64>) {
        let n = self.mu1.len() + self.mu2.len();
        let m = self.m;
        let mut mu = DVector::zeros(n);
        mu.rows_mut(0, m).copy_from(&self.mu1);
        mu.rows_mut(m, n - m).copy_from(&self.mu2);
        let mut sigma = DMatrix::zeros(n, n);
        sigma.view_mut((0, 0), (m, m)).copy_from(&self.s11);
        sigma.view_mut((0, m), (m, n - m)).copy_from(&self.s12);
        sigma.view_mut((m, 0), (n - m, m)).copy_from(&self.s21);
        sigma.view_mut((m, m), (n - m, n - m)).copy_from(&self.s22);
        (mu, sigma)
    }
}

/// Normalizer ∫₀^∞ t^{m/2-1} g_n(t + q₂) dt of a conditional generator.
///
/// Quadrature works for any parameters and is the authoritative value; the
/// series form requires s1 = s2 = 1 and integer N and is exposed for
/// cross-checking.
pub fn conditional_normalizer(params: &GLParams, m: usize, q2: f64, method: Method) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("conditional dimension must be >= 1"));
    }
    if !(q2 >= 0.0) {
        return Err(Error::domain("q2 must be non-negative"));
    }
    let half_m = 0.5 * m as f64;
    match method {
        Method::Quadrature => {
            let p = *params;
            let cfg = QuadratureConfig::default();
            integrate_semi_infinite(
                move |t| {
                    if t <= 0.0 {
                        return 0.0;
                    }
                    match log_density_generator(&p, t + q2) {
                        Ok(lg) => ((half_m - 1.0) * t.ln() + lg).exp(),
                        Err(_) => 0.0,
                    }
                },
                &cfg,
            )
        }
        Method::Series => {
            if !params.common_exponent() || params.s1 != 1.0 {
                return Err(Error::domain(
                    "series conditional normalizer requires s1 = s2 = 1",
                ));
            }
            if !is_positive_integer(params.n_shape) {
                return Err(Error::domain(
                    "series conditional normalizer requires integer N >= 1",
                ));
            }
            let n_int = params.n_shape as usize;
            let mut sum = 0.0;
            let mut j_fact = 1.0;
            for j in 0..n_int {
                if j > 0 {
                    j_fact *= j as f64;
                }
                let coef = falling_factorial(params.n_shape - 1.0, j) / j_fact;
                let order = half_m + j as f64;
                let z = if params.b * q2 > 745.0 {
                    0.0
                } else {
                    -(-params.b * q2).exp()
                };
                let zeta = phi_star(&ZetaArgs::new(
                    z,
                    order,
                    params.a / params.b,
                    2.0 * params.r,
                )?)?;
                let ln_scale = log_gamma(order)? - order * params.b.ln() - params.a * q2;
                sum += coef * q2.powi((n_int - 1 - j) as i32) * ln_scale.exp() * zeta;
            }
            Ok(sum)
        }
    }
}

/// The conditional law of the head block given the tail block.
#[derive(Debug, Clone)]
pub struct ConditionalSpec {
    mu_cond: DVector<f64>,
    sigma_cond: LocationScale,
    generator: GeneratorFunction,
    q2: f64,
    normalizer: f64,
}

impl ConditionalSpec {
    pub fn mu_cond(&self) -> &DVector<f64> {
        &self.mu_cond
    }

    pub fn sigma_cond(&self) -> &DMatrix<f64> {
        self.sigma_cond.sigma()
    }

    pub fn generator(&self) -> &GeneratorFunction {
        &self.generator
    }

    pub fn q2(&self) -> f64 {
        self.q2
    }

    /// ∫₀^∞ t^{m/2-1} g_n(t + q₂) dt (quadrature value).
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// Conditional density at a head-block point.
    pub fn density(&self, x1: &DVector<f64>) -> Result<f64> {
        let m = self.mu_cond.len();
        let q1 = self.sigma_cond.quadratic_form(x1)?;
        let half_m = 0.5 * m as f64;
        let ln_const = log_gamma(half_m)?
            - half_m * std::f64::consts::PI.ln()
            - 0.5 * self.sigma_cond.log_det_sigma()
            - self.normalizer.ln();
        Ok(ln_const.exp() * self.generator.eval(q1)?)
    }
}

/// Conditional distribution of the head block given tail value x₂:
/// μ_cond = μ⁽¹⁾ + Σ₁₂ Σ₂₂⁻¹ (x₂ - μ⁽²⁾), Σ_cond = Σ₁₁ - Σ₁₂ Σ₂₂⁻¹ Σ₂₁,
/// generator t ↦ g_n(t + q₂).
pub fn conditional(
    params: &GLParams,
    part: &Partition,
    x2: &DVector<f64>,
) -> Result<ConditionalSpec> {
    let n = part.mu1.len() + part.mu2.len();
    params.check_dimension(n)?;
    if x2.len() != part.mu2.len() {
        return Err(Error::domain(format!(
            "conditioning vector has length {}, expected {}",
            x2.len(),
            part.mu2.len()
        )));
    }
    let s22_chol = nalgebra::Cholesky::new(part.s22.clone())
        .ok_or_else(|| Error::domain("tail scale block must be positive definite"))?;
    let diff = x2 - &part.mu2;
    let s22_inv_diff = s22_chol.solve(&diff);
    let q2 = diff.dot(&s22_inv_diff);
    let mu_cond = &part.mu1 + &part.s12 * &s22_inv_diff;
    let sigma_cond = &part.s11 - &part.s12 * s22_chol.solve(&part.s21);
    let m = part.m;

    let p = *params;
    let rule = Arc::new(move |t: f64| -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::domain(format!(
                "generator argument must be >= 0, got {t}"
            )));
        }
        Ok(log_density_generator(&p, t + q2)?.exp())
    });
    let generator = GeneratorFunction {
        rule,
        provenance: GeneratorProvenance::Conditional,
        params: p,
        source_dim: n,
        target_dim: m,
    };
    let normalizer = conditional_normalizer(params, m, q2, Method::Quadrature)?;
    Ok(ConditionalSpec {
        mu_cond: mu_cond.clone(),
        sigma_cond: LocationScale::new(mu_cond, sigma_cond)?,
        generator,
        q2,
        normalizer,
    })
}

/// The elliptical law of Y = B X + b for full-row-rank B.
#[derive(Debug, Clone)]
pub struct TransformedSpec {
    mu_t: DVector<f64>,
    scale: LocationScale,
    generator: GeneratorFunction,
    normalizer: f64,
}

impl TransformedSpec {
    pub fn mu_t(&self) -> &DVector<f64> {
        &self.mu_t
    }

    pub fn sigma_t(&self) -> &DMatrix<f64> {
        self.scale.sigma()
    }

    pub fn generator(&self) -> &GeneratorFunction {
        &self.generator
    }

    /// Density of the transformed law.
    pub fn density(&self, y: &DVector<f64>) -> Result<f64> {
        let m = self.mu_t.len();
        let q = self.scale.quadratic_form(y)?;
        let half_m = 0.5 * m as f64;
        let ln_const = log_gamma(half_m)?
            - half_m * std::f64::consts::PI.ln()
            - 0.5 * self.scale.log_det_sigma()
            - self.normalizer.ln();
        Ok(ln_const.exp() * self.generator.eval(q)?)
    }
}

/// Law of Y = B X + b. The image is elliptical with the m-dimensional
/// marginal generator (the family is not closed under projection); for
/// square invertible B the law stays GL with transformed location/scale.
pub fn linear_transform(
    params: &GLParams,
    ls: &LocationScale,
    b_mat: &DMatrix<f64>,
    b_vec: &DVector<f64>,
) -> Result<TransformedSpec> {
    let n = ls.dim();
    params.check_dimension(n)?;
    let m = b_mat.nrows();
    if b_mat.ncols() != n {
        return Err(Error::domain(format!(
            "transform matrix must have {n} columns, got {}",
            b_mat.ncols()
        )));
    }
    if b_vec.len() != m {
        return Err(Error::domain("offset length must match transform rows"));
    }
    if m == 0 || m > n {
        return Err(Error::domain(format!(
            "transform needs 1 <= m <= n, got m = {m}"
        )));
    }
    if b_mat.rank(1e-10) != m {
        return Err(Error::domain("transform matrix must have full row rank"));
    }
    let mu_t = b_mat * ls.mu() + b_vec;
    let sigma_t = b_mat * ls.sigma() * b_mat.transpose();

    let generator = if m == n {
        gl_generator(params, n)?
    } else {
        let method = if params.common_exponent()
            && params.s1 == 1.0
            && is_positive_integer(params.n_shape)
        {
            Method::Series
        } else {
            Method::Quadrature
        };
        let mut g = marginal_generator(params, n, m, method)?;
        g.provenance = GeneratorProvenance::Transformed;
        g
    };

    let half_m = 0.5 * m as f64;
    let cfg = QuadratureConfig::default();
    let g = generator.clone();
    let normalizer = integrate_semi_infinite(
        move |t| {
            if t <= 0.0 {
                return 0.0;
            }
            match g.eval(t) {
                Ok(v) => t.powf(half_m - 1.0) * v,
                Err(_) => 0.0,
            }
        },
        &cfg,
    )?;

    Ok(TransformedSpec {
        mu_t: mu_t.clone(),
        scale: LocationScale::new(mu_t, sigma_t)?,
        generator,
        normalizer,
    })
}
