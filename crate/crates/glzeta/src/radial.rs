//! The stochastic representation X = μ + R Aᵀ U⁽ⁿ⁾: radial density,
//! inverse-CDF sampling of R, uniform sphere directions, full vector draws.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::model::{log_density_generator, GLParams, LocationScale};
use crate::special::{integrate, integrate_semi_infinite, QuadratureConfig};

/// Seedable stream of random draws. Identical seeds yield identical
/// sequences; parallel consumers should use distinct stream ids.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for the same seed (parallel sampling).
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomSource { rng }
    }

    /// Uniform draw on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    /// Standard normal draw.
    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

/// Monotone piecewise-cubic interpolant (Fritsch-Carlson slopes), used for
/// the inverse CDF. Monotone inputs give a monotone interpolant.
#[derive(Debug, Clone)]
struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(Error::domain("interpolant needs at least two knots"));
        }
        let mut deltas = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let h = xs[i + 1] - xs[i];
            if h <= 0.0 {
                return Err(Error::domain(
                    "interpolant knots must be strictly increasing",
                ));
            }
            deltas.push((ys[i + 1] - ys[i]) / h);
        }
        let mut slopes = vec![0.0; n];
        slopes[0] = deltas[0];
        slopes[n - 1] = deltas[n - 2];
        for i in 1..n - 1 {
            let d0 = deltas[i - 1];
            let d1 = deltas[i];
            if d0 * d1 <= 0.0 {
                slopes[i] = 0.0;
            } else {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                slopes[i] = (w1 + w2) / (w1 / d0 + w2 / d1);
            }
        }
        Ok(MonotoneCubic { xs, ys, slopes })
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.xs[mid] <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let h = self.xs[lo + 1] - self.xs[lo];
        let t = (x - self.xs[lo]) / h;
        let (y0, y1) = (self.ys[lo], self.ys[lo + 1]);
        let (m0, m1) = (self.slopes[lo] * h, self.slopes[lo + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }
}

/// Tabulated distribution of the radius R with density
/// f_R(v) = v^(n-1) g(v²) / ∫₀^∞ t^(n-1) g(t²) dt.
#[derive(Debug, Clone)]
pub struct RadialDistribution {
    params: GLParams,
    dim: usize,
    normalizer: f64,
    grid: Vec<f64>,
    cdf_values: Vec<f64>,
    inverse: MonotoneCubic,
}

/// Integrand t^{n/2-1} g(t) restricted to a finite or semi-infinite window,
/// i.e. the radial mass in the u = v² variable (a factor 1/2 applies).
fn radial_mass_integrand(params: &GLParams, dim: usize) -> impl Fn(f64) -> f64 + '_ {
    let half_dim = 0.5 * dim as f64;
    move |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        match log_density_generator(params, u) {
            Ok(lg) => ((half_dim - 1.0) * u.ln() + lg).exp(),
            Err(_) => 0.0,
        }
    }
}

/// Tabulates the radial CDF on a geometric-then-linear grid spanning the
/// [1e-12, 1 - 1e-12] quantile range and fits the monotone inverse.
pub fn build_radial(params: &GLParams, dim: usize, nodes: usize) -> Result<RadialDistribution> {
    params.check_dimension(dim)?;
    if nodes < 16 {
        return Err(Error::domain("radial tabulation needs at least 16 nodes"));
    }
    let cfg = QuadratureConfig::default();
    let mass = radial_mass_integrand(params, dim);
    let total = 0.5 * integrate_semi_infinite(&mass, &cfg)?;
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::Evaluation(
            "radial normalizer is not positive".into(),
        ));
    }

    // bracket the upper quantile by doubling in u = v² space
    let mut u_hi = 1.0f64;
    for _ in 0..120 {
        let tail = 0.5 * integrate_semi_infinite(|y| mass(u_hi + y), &cfg)?;
        if tail <= 1e-12 * total {
            break;
        }
        u_hi *= 2.0;
    }
    // bracket the lower quantile by halving
    let mut u_lo = u_hi.min(1.0);
    for _ in 0..120 {
        let head = 0.5 * integrate(&mass, 0.0, u_lo, &cfg)?;
        if head <= 1e-12 * total {
            break;
        }
        u_lo *= 0.5;
    }

    let v_lo = u_lo.sqrt();
    let v_hi = u_hi.sqrt();
    let v_mid = (v_lo * v_hi).sqrt();
    let half = nodes / 2;
    let mut grid = Vec::with_capacity(nodes + 1);
    let ratio = (v_mid / v_lo).powf(1.0 / half as f64);
    let mut v = v_lo;
    for _ in 0..half {
        grid.push(v);
        v *= ratio;
    }
    let step = (v_hi - v_mid) / (nodes - half) as f64;
    for i in 0..=(nodes - half) {
        grid.push(v_mid + step * i as f64);
    }

    // cumulative masses panel by panel in u-space
    let panel_cfg = QuadratureConfig::new(1e-11, 1e-300, 60)?;
    let head = 0.5 * integrate(&mass, 0.0, u_lo, &cfg)?;
    let mut cum = Vec::with_capacity(grid.len());
    cum.push(head);
    for i in 0..grid.len() - 1 {
        let m = 0.5
            * integrate(
                &mass,
                grid[i] * grid[i],
                grid[i + 1] * grid[i + 1],
                &panel_cfg,
            )?;
        cum.push(cum[i] + m);
    }
    let tail = 0.5 * integrate_semi_infinite(|y| mass(u_hi + y), &cfg)?;
    let normalizer = cum[grid.len() - 1] + tail;
    let cdf_values: Vec<f64> = cum.iter().map(|c| c / normalizer).collect();

    // strictly increasing subset for the inverse map
    let mut xs = vec![cdf_values[0]];
    let mut ys = vec![grid[0]];
    for i in 1..grid.len() {
        if cdf_values[i] > *xs.last().unwrap() {
            xs.push(cdf_values[i]);
            ys.push(grid[i]);
        }
    }
    let inverse = MonotoneCubic::new(xs, ys)?;

    Ok(RadialDistribution {
        params: *params,
        dim,
        normalizer,
        grid,
        cdf_values,
        inverse,
    })
}

impl RadialDistribution {
    pub fn params(&self) -> &GLParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn cdf_values(&self) -> &[f64] {
        &self.cdf_values
    }

    /// f_R(v) = v^(n-1) g(v²)/normalizer.
    pub fn density(&self, v: f64) -> Result<f64> {
        if !(v >= 0.0) {
            return Err(Error::domain(format!("radius must be >= 0, got {v}")));
        }
        if v == 0.0 {
            // v^{n-1} kills the density for n >= 2; n = 1 reduces to g(0)
            if self.dim >= 2 {
                return Ok(0.0);
            }
            return Ok(log_density_generator(&self.params, 0.0)?.exp() / self.normalizer);
        }
        let lg = log_density_generator(&self.params, v * v)?;
        Ok(((self.dim as f64 - 1.0) * v.ln() + lg).exp() / self.normalizer)
    }

    /// Tabulated CDF with monotone-cubic interpolation in between nodes.
    pub fn cdf(&self, v: f64) -> f64 {
        if v <= self.grid[0] {
            return 0.0;
        }
        let n = self.grid.len();
        if v >= self.grid[n - 1] {
            return 1.0;
        }
        // forward interpolation reuses the same nodes with roles swapped
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.grid[mid] <= v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = (v - self.grid[lo]) / (self.grid[lo + 1] - self.grid[lo]);
        self.cdf_values[lo] + t * (self.cdf_values[lo + 1] - self.cdf_values[lo])
    }

    /// Inverse CDF.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::domain(format!(
                "quantile level must be in [0,1], got {u}"
            )));
        }
        Ok(self.inverse.eval(u))
    }

    /// One radius draw by inverse-CDF sampling.
    pub fn sample(&self, src: &mut RandomSource) -> f64 {
        self.inverse.eval(src.uniform())
    }
}

/// One radius draw by inverse-CDF sampling from a built table.
pub fn sample_radius(rd: &RadialDistribution, src: &mut RandomSource) -> f64 {
    rd.sample(src)
}

/// Uniform direction on the unit sphere in R^n: normalized standard normal
/// vector, redrawing the (measure-zero, numerically possible) degenerate case.
pub fn sample_sphere(dim: usize, src: &mut RandomSource) -> DVector<f64> {
    assert!(dim >= 1, "sphere dimension must be at least 1");
    loop {
        let v = DVector::from_fn(dim, |_, _| src.standard_normal());
        let norm = v.norm();
        if norm > 1e-100 {
            return v / norm;
        }
    }
}

/// `count` draws of X = μ + R L u (L the lower Cholesky factor of Σ),
/// one row per draw, using a prebuilt radial table.
pub fn sample_with(
    rd: &RadialDistribution,
    ls: &LocationScale,
    count: usize,
    src: &mut RandomSource,
) -> Result<DMatrix<f64>> {
    let dim = ls.dim();
    if rd.dim() != dim {
        return Err(Error::domain(format!(
            "radial table has dimension {}, location/scale has {}",
            rd.dim(),
            dim
        )));
    }
    let mut out = DMatrix::zeros(count, dim);
    for i in 0..count {
        let r = rd.sample(src);
        let u = sample_sphere(dim, src);
        let x = ls.mu() + ls.factor() * u * r;
        out.row_mut(i).copy_from(&x.transpose());
    }
    Ok(out)
}

/// `count` draws with a freshly built radial table (4096 nodes).
pub fn sample(
    params: &GLParams,
    ls: &LocationScale,
    count: usize,
    src: &mut RandomSource,
) -> Result<DMatrix<f64>> {
    let rd = build_radial(params, ls.dim(), 4096)?;
    sample_with(&rd, ls, count, src)
}
