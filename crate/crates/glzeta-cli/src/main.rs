//! Command-line front door: densities, sampling, fitting, goodness-of-fit,
//! moments, characteristic functions, marginal/conditional reports, local
//! dependence grids, and bivariate pdf surface grids.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain/convergence error,
//! 3 non-converged fit (partial result still printed).

// negated comparisons reject NaN deliberately
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::{Args, Parser, Subcommand};
use nalgebra::{DMatrix, DVector};
use serde_json::json;

use glzeta::analysis;
use glzeta::inference::{self, DataFormat, Dataset, FitConfig, FixedParams, UnivariateParams};
use glzeta::model::{self, GLParams, LocationScale, Method, Preset};
use glzeta::radial::RandomSource;
use glzeta::structure;

#[derive(Parser)]
#[command(
    name = "glzeta",
    version,
    about = "Generalized elliptical logistic distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the density at a point
    Eval(EvalArgs),
    /// Draw samples (CSV by default, one row per draw)
    Sample(SampleArgs),
    /// Maximum-likelihood fit of the univariate law
    Fit(FitArgs),
    /// Goodness-of-fit report for given parameters
    Gof(GofArgs),
    /// Mean, covariance and requested higher moments
    Moments(MomentsArgs),
    /// Characteristic function values
    Cf(CfArgs),
    /// Marginal density generator on a grid
    Marginal(MarginalArgs),
    /// Conditional law given the tail block
    Conditional(ConditionalArgs),
    /// Local dependence H(x, y) on a lattice (CSV)
    Dependence(DependenceArgs),
    /// Bivariate pdf surface grid (CSV)
    Grid(GridArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Named special case: normal | logistic | laplace | kotz:N,a,s |
    /// epower:a,s | gl1:r | gl3:a | gl4:a,p | genlogistic:a,b,r
    #[arg(long)]
    preset: Option<String>,
    /// Inline JSON {"N":..,"a":..,"b":..,"s1":..,"s2":..,"r":..} or @file
    #[arg(long)]
    params: Option<String>,
}

#[derive(Args)]
struct ScaleArgs {
    /// Location vector, comma-separated (default: zeros)
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// Scale matrix rows separated by ';' (default: identity)
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    scale: ScaleArgs,
    /// Dimension (defaults to the point's length)
    #[arg(long)]
    n: Option<usize>,
    /// Evaluation point, comma-separated
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    scale: ScaleArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct FitArgs {
    /// Dataset path, or "table1" for the embedded carbon-fiber sample
    #[arg(long)]
    data: String,
    /// Input format of --data when it is a path
    #[arg(long, default_value = "csv")]
    data_format: String,
    /// Pinned parameters, e.g. N=1,a=1,s=1
    #[arg(long)]
    fix: Option<String>,
    /// Initial values as UnivariateParams JSON or @file (optional)
    #[arg(long)]
    init: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_iterations: usize,
    /// Convergence tolerance on the simplex diameter
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct GofArgs {
    #[arg(long)]
    data: String,
    #[arg(long, default_value = "csv")]
    data_format: String,
    /// Full parameter vector as UnivariateParams JSON or @file
    #[arg(long)]
    fit_params: String,
    /// Number of free parameters for the AIC
    #[arg(long, default_value_t = 1)]
    free_count: usize,
}

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    scale: ScaleArgs,
    #[arg(long)]
    n: Option<usize>,
    /// Radial moment orders, comma-separated
    #[arg(long)]
    radial: Option<String>,
    /// Product-moment exponent vectors, e.g. "2,2;4,0"
    #[arg(long)]
    product: Option<String>,
}

#[derive(Args)]
struct CfArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    scale: ScaleArgs,
    #[arg(long)]
    n: Option<usize>,
    /// Argument vectors separated by ';', e.g. "0.5,0;1,1"
    #[arg(long, allow_hyphen_values = true)]
    points: String,
}

#[derive(Args)]
struct MarginalArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    scale: ScaleArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value = "series")]
    method: String,
    /// Generator grid lo:hi:steps
    #[arg(long, default_value = "0.1:10:50", allow_hyphen_values = true)]
    grid: String,
}

#[derive(Args)]
struct ConditionalArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    scale: ScaleArgs,
    /// Head-block dimension
    #[arg(long)]
    m: usize,
    /// Conditioning tail value, comma-separated
    #[arg(long, allow_hyphen_values = true)]
    x2: String,
    #[arg(long, default_value = "0.1:10:50", allow_hyphen_values = true)]
    grid: String,
}

#[derive(Args)]
struct DependenceArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    rho: f64,
    /// Lattice range lo:hi
    #[arg(long, default_value = "-3:3", allow_hyphen_values = true)]
    range: String,
    #[arg(long, default_value_t = 25)]
    steps: usize,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    rho: f64,
    #[arg(long, default_value = "-3:3", allow_hyphen_values = true)]
    range: String,
    #[arg(long, default_value_t = 50)]
    steps: usize,
}

enum CliError {
    Usage(String),
    Numeric(glzeta::Error),
    NonConverged(String),
}

impl From<glzeta::Error> for CliError {
    fn from(e: glzeta::Error) -> Self {
        CliError::Numeric(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_vector(text: &str) -> CliResult<DVector<f64>> {
    let vals: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match vals {
        Ok(v) if !v.is_empty() => Ok(DVector::from_vec(v)),
        _ => Err(usage(format!("cannot parse vector {text:?}"))),
    }
}

fn parse_matrix(text: &str) -> CliResult<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
        })
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("cannot parse matrix {text:?}")))?;
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(usage(format!("ragged or empty matrix {text:?}")));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn parse_range(text: &str) -> CliResult<(f64, f64)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(usage(format!("expected lo:hi, got {text:?}")));
    }
    let lo = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|_| usage("bad range low end"))?;
    let hi = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|_| usage("bad range high end"))?;
    if !(lo < hi) {
        return Err(usage("range low end must be below high end"));
    }
    Ok((lo, hi))
}

fn parse_grid_spec(text: &str) -> CliResult<(f64, f64, usize)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!("expected lo:hi:steps, got {text:?}")));
    }
    let lo = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|_| usage("bad grid low end"))?;
    let hi = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|_| usage("bad grid high end"))?;
    let steps = parts[2]
        .trim()
        .parse::<usize>()
        .map_err(|_| usage("bad grid step count"))?;
    if !(lo < hi) || steps < 2 {
        return Err(usage("grid needs lo < hi and at least 2 steps"));
    }
    Ok((lo, hi, steps))
}

fn read_inline_or_file(text: &str) -> CliResult<String> {
    if let Some(path) = text.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))
    } else {
        Ok(text.to_string())
    }
}

fn resolve_preset(spec: &str) -> CliResult<GLParams> {
    let (name, args) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let nums = |expected: usize| -> CliResult<Vec<f64>> {
        let raw =
            args.ok_or_else(|| usage(format!("preset {name} needs {expected} argument(s)")))?;
        let vals: Result<Vec<f64>, _> = raw.split(',').map(|s| s.trim().parse::<f64>()).collect();
        match vals {
            Ok(v) if v.len() == expected => Ok(v),
            _ => Err(usage(format!(
                "preset {name} needs {expected} numeric argument(s)"
            ))),
        }
    };
    let preset = match name {
        "normal" => Preset::Normal,
        "logistic" => Preset::Logistic,
        "laplace" => Preset::Laplace,
        "kotz" => {
            let v = nums(3)?;
            Preset::Kotz {
                n_shape: v[0],
                a: v[1],
                s1: v[2],
            }
        }
        "epower" => {
            let v = nums(2)?;
            Preset::ExponentialPower { a: v[0], s1: v[1] }
        }
        "gl1" => Preset::GlTypeI { r: nums(1)?[0] },
        "gl3" => Preset::GlTypeIii { a: nums(1)?[0] },
        "gl4" => {
            let v = nums(2)?;
            Preset::GlTypeIv { a: v[0], p: v[1] }
        }
        "genlogistic" => {
            let v = nums(3)?;
            Preset::GeneralizedLogistic {
                a: v[0],
                b: v[1],
                r: v[2],
            }
        }
        other => return Err(usage(format!("unknown preset {other:?}"))),
    };
    Ok(model::preset(preset)?)
}

impl ModelArgs {
    fn resolve(&self) -> CliResult<GLParams> {
        match (&self.preset, &self.params) {
            (Some(_), Some(_)) => Err(usage("give either --preset or --params, not both")),
            (Some(p), None) => resolve_preset(p),
            (None, Some(raw)) => {
                let text = read_inline_or_file(raw)?;
                serde_json::from_str::<GLParams>(&text)
                    .map_err(|e| usage(format!("cannot parse --params: {e}")))
            }
            (None, None) => Err(usage("one of --preset or --params is required")),
        }
    }
}

fn resolve_scale(scale: &ScaleArgs, dim_hint: Option<usize>) -> CliResult<LocationScale> {
    let mu = scale.mu.as_deref().map(parse_vector).transpose()?;
    let sigma = scale.sigma.as_deref().map(parse_matrix).transpose()?;
    let dim = mu
        .as_ref()
        .map(|m| m.len())
        .or_else(|| sigma.as_ref().map(|s| s.nrows()))
        .or(dim_hint)
        .ok_or_else(|| usage("dimension unknown: give --n, --mu or --sigma"))?;
    let mu = mu.unwrap_or_else(|| DVector::zeros(dim));
    let sigma = sigma.unwrap_or_else(|| DMatrix::identity(dim, dim));
    Ok(LocationScale::new(mu, sigma)?)
}

fn resolve_dataset(data: &str, format: &str) -> CliResult<Dataset> {
    if data == "table1" {
        return Ok(inference::carbon_fiber_dataset());
    }
    let fmt = match format {
        "csv" => DataFormat::Csv,
        "json" => DataFormat::Json,
        other => return Err(usage(format!("unknown data format {other:?}"))),
    };
    Ok(inference::load_dataset(std::path::Path::new(data), fmt)?)
}

fn parse_fix(text: &str) -> CliResult<FixedParams> {
    let mut fixed = FixedParams::default();
    for pair in text.split(',') {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| usage(format!("--fix entries look like k=v, got {pair:?}")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad value in --fix: {pair:?}")))?;
        match key.trim() {
            "N" => fixed.n_shape = Some(v),
            "a" => fixed.a = Some(v),
            "b" => fixed.b = Some(v),
            "s" => fixed.s = Some(v),
            "r" => fixed.r = Some(v),
            "mu" => fixed.mu = Some(v),
            "sigma2" => fixed.sigma2 = Some(v),
            other => return Err(usage(format!("unknown parameter in --fix: {other:?}"))),
        }
    }
    Ok(fixed)
}

fn generator_samples(
    gen: &structure::GeneratorFunction,
    grid: (f64, f64, usize),
) -> CliResult<Vec<(f64, f64)>> {
    let (lo, hi, steps) = grid;
    let mut out = Vec::with_capacity(steps);
    for i in 0..steps {
        let t = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
        out.push((t, gen.eval(t)?));
    }
    Ok(out)
}

fn vector_json(v: &DVector<f64>) -> serde_json::Value {
    json!(v.iter().copied().collect::<Vec<f64>>())
}

fn matrix_json(m: &DMatrix<f64>) -> serde_json::Value {
    let rows: Vec<Vec<f64>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect();
    json!(rows)
}

fn run_eval(args: EvalArgs) -> CliResult<()> {
    let params = args.model.resolve()?;
    let point = parse_vector(&args.point)?;
    let ls = resolve_scale(&args.scale, args.n.or(Some(point.len())))?;
    let log_pdf = model::log_pdf(&params, &ls, &point)?;
    match args.format.as_str() {
        "json" => println!("{}", json!({"pdf": log_pdf.exp(), "log_pdf": log_pdf})),
        "csv" => println!("pdf,log_pdf\n{},{}", log_pdf.exp(), log_pdf),
        other => return Err(usage(format!("unknown format {other:?}"))),
    }
    Ok(())
}

fn run_sample(args: SampleArgs) -> CliResult<()> {
    let params = args.model.resolve()?;
    let ls = resolve_scale(&args.scale, args.n)?;
    let mut src = RandomSource::new(args.seed);
    let draws = glzeta::radial::sample(&params, &ls, args.count, &mut src)?;
    match args.format.as_str() {
        "csv" => {
            let header: Vec<String> = (1..=ls.dim()).map(|i| format!("x{i}")).collect();
            println!("{}", header.join(","));
            for i in 0..draws.nrows() {
                let row: Vec<String> = (0..draws.ncols())
                    .map(|j| draws[(i, j)].to_string())
                    .collect();
                println!("{}", row.join(","));
            }
        }
        "json" => {
            let rows: Vec<Vec<f64>> = (0..draws.nrows())
                .map(|i| (0..draws.ncols()).map(|j| draws[(i, j)]).collect())
                .collect();
            println!("{}", json!(rows));
        }
        other => return Err(usage(format!("unknown format {other:?}"))),
    }
    Ok(())
}

fn run_fit(args: FitArgs) -> CliResult<()> {
    let data = resolve_dataset(&args.data, &args.data_format)?;
    let fixed = match &args.fix {
        Some(text) => parse_fix(text)?,
        None => FixedParams::default(),
    };
    let initial = match &args.init {
        Some(raw) => {
            let text = read_inline_or_file(raw)?;
            serde_json::from_str::<UnivariateParams>(&text)
                .map_err(|e| usage(format!("cannot parse --init: {e}")))?
        }
        None => UnivariateParams {
            n_shape: fixed.n_shape.unwrap_or(1.0),
            a: fixed.a.unwrap_or(1.0),
            b: fixed.b.unwrap_or(1.0),
            s: fixed.s.unwrap_or(1.0),
            mu: fixed.mu.unwrap_or_else(|| data.mean()),
            sigma2: fixed.sigma2.unwrap_or_else(|| 2.0 * data.variance()),
            r: fixed.r.unwrap_or(0.5),
        },
    };
    let mut cfg = FitConfig::new(fixed, initial);
    cfg.restarts = args.restarts;
    cfg.max_iterations = args.max_iterations;
    cfg.simplex_tolerance = args.tol;
    let mut src = RandomSource::new(args.seed);
    let result = inference::fit(&data, &cfg, &mut src)?;
    let rendered = serde_json::to_string_pretty(&result)
        .map_err(|e| CliError::Usage(format!("serialization failed: {e}")))?;
    if result.converged {
        println!("{rendered}");
        Ok(())
    } else {
        Err(CliError::NonConverged(rendered))
    }
}

fn run_gof(args: GofArgs) -> CliResult<()> {
    let data = resolve_dataset(&args.data, &args.data_format)?;
    let text = read_inline_or_file(&args.fit_params)?;
    let p: UnivariateParams = serde_json::from_str(&text)
        .map_err(|e| usage(format!("cannot parse --fit-params: {e}")))?;
    let gl = p.gl_params()?;
    let ll = inference::log_likelihood(&data, &gl, p.mu, p.sigma2)?;
    let aic = inference::aic(args.free_count, ll)?;
    let (ks, pv) = inference::ks_test(&data, |x| model::cdf_univariate(&gl, p.mu, p.sigma2, x))?;
    println!(
        "{}",
        json!({
            "log_likelihood": ll,
            "aic": aic,
            "ks_statistic": ks,
            "ks_p_value": pv,
        })
    );
    Ok(())
}

fn run_moments(args: MomentsArgs) -> CliResult<()> {
    let params = args.model.resolve()?;
    let ls = resolve_scale(&args.scale, args.n)?;
    let mut report = analysis::mean_cov(&params, &ls)?;
    if let Some(radial) = &args.radial {
        report.radial_moments.clear();
        for part in radial.split(',') {
            let p: f64 = part
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad radial order {part:?}")))?;
            report
                .radial_moments
                .push((p, analysis::radial_moment(&params, ls.dim(), p)?));
        }
    }
    if let Some(product) = &args.product {
        for spec in product.split(';') {
            let exps: Result<Vec<u32>, _> =
                spec.split(',').map(|s| s.trim().parse::<u32>()).collect();
            let exps = exps.map_err(|_| usage(format!("bad product exponents {spec:?}")))?;
            let value = analysis::product_moment(&params, ls.dim(), &exps)?;
            report.product_moments.push((exps, value));
        }
    }
    println!(
        "{}",
        json!({
            "mean": vector_json(&report.mean),
            "covariance": matrix_json(&report.covariance),
            "radial_moments": report.radial_moments,
            "product_moments": report
                .product_moments
                .iter()
                .map(|(e, v)| json!({"exponents": e, "value": v}))
                .collect::<Vec<_>>(),
        })
    );
    Ok(())
}

fn run_cf(args: CfArgs) -> CliResult<()> {
    let params = args.model.resolve()?;
    let ls = resolve_scale(&args.scale, args.n)?;
    let mut out = Vec::new();
    for spec in args.points.split(';') {
        let t = parse_vector(spec)?;
        let value = analysis::characteristic_function(&params, &ls, &t)?;
        out.push(json!({
            "t": t.iter().copied().collect::<Vec<f64>>(),
            "re": value.re,
            "im": value.im,
        }));
    }
    println!("{}", json!(out));
    Ok(())
}

fn run_marginal(args: MarginalArgs) -> CliResult<()> {
    let params = args.model.resolve()?;
    let ls = resolve_scale(&args.scale, Some(args.n))?;
    if ls.dim() != args.n {
        return Err(usage("--n disagrees with --mu/--sigma dimensions"));
    }
    let method = match args.method.as_str() {
        "series" => Method::Series,
        "quadrature" => Method::Quadrature,
        other => return Err(usage(format!("unknown method {other:?}"))),
    };
    let gen = structure::marginal_generator(&params, args.n, args.m, method)?;
    let part = structure::Partition::new(&ls, args.m)?;
    let samples = generator_samples(&gen, parse_grid_spec(&args.grid)?)?;
    println!(
        "{}",
        json!({
            "mu": vector_json(part.mu1()),
            "sigma": matrix_json(part.s11()),
            "generator_samples": samples,
        })
    );
    Ok(())
}

fn run_conditional(args: ConditionalArgs) -> CliResult<()> {
    let params = args.model.resolve()?;
    let x2 = parse_vector(&args.x2)?;
    let ls = resolve_scale(&args.scale, Some(args.m + x2.len()))?;
    let part = structure::Partition::new(&ls, args.m)?;
    let spec = structure::conditional(&params, &part, &x2)?;
    let samples = generator_samples(spec.generator(), parse_grid_spec(&args.grid)?)?;
    println!(
        "{}",
        json!({
            "mu": vector_json(spec.mu_cond()),
            "sigma": matrix_json(spec.sigma_cond()),
            "q2": spec.q2(),
            "generator_samples": samples,
        })
    );
    Ok(())
}

fn run_dependence(args: DependenceArgs) -> CliResult<()> {
    let params = args.model.resolve()?;
    let (lo, hi) = parse_range(&args.range)?;
    let steps = args.steps.max(2);
    println!("x,y,h");
    for i in 0..steps {
        let x = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
        for j in 0..steps {
            let y = lo + (hi - lo) * j as f64 / (steps - 1) as f64;
            let h = analysis::local_dependence(&params, args.rho, x, y)?;
            println!("{x},{y},{h}");
        }
    }
    Ok(())
}

fn run_grid(args: GridArgs) -> CliResult<()> {
    let params = args.model.resolve()?;
    if args.rho.abs() >= 1.0 {
        return Err(usage("--rho must lie strictly inside (-1, 1)"));
    }
    let (lo, hi) = parse_range(&args.range)?;
    let steps = args.steps.max(2);
    let sigma = DMatrix::from_row_slice(2, 2, &[1.0, args.rho, args.rho, 1.0]);
    let ls = LocationScale::new(DVector::zeros(2), sigma)?;
    println!("x,y,pdf");
    for i in 0..steps {
        let x = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
        for j in 0..steps {
            let y = lo + (hi - lo) * j as f64 / (steps - 1) as f64;
            let pdf = model::pdf(&params, &ls, &DVector::from_row_slice(&[x, y]))?;
            println!("{x},{y},{pdf}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Eval(a) => run_eval(a),
        Command::Sample(a) => run_sample(a),
        Command::Fit(a) => run_fit(a),
        Command::Gof(a) => run_gof(a),
        Command::Moments(a) => run_moments(a),
        Command::Cf(a) => run_cf(a),
        Command::Marginal(a) => run_marginal(a),
        Command::Conditional(a) => run_conditional(a),
        Command::Dependence(a) => run_dependence(a),
        Command::Grid(a) => run_grid(a),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    let code = match run(cli) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Numeric(e)) => {
            eprintln!("error: {e}");
            2
        }
        Err(CliError::NonConverged(partial)) => {
            println!("{partial}");
            eprintln!("warning: fit did not converge; partial result on stdout");
            3
        }
    };
    std::process::exit(code);
}
