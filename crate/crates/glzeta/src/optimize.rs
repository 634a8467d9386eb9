//! Derivative-free Nelder-Mead minimization.

/// Stopping tolerances and iteration budget.
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadConfig {
    pub max_iterations: usize,
    /// Convergence threshold on the simplex diameter.
    pub simplex_tolerance: f64,
    /// Convergence threshold on the objective spread across vertices.
    pub objective_tolerance: f64,
    /// Absolute step used to build the initial simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        NelderMeadConfig {
            max_iterations: 2000,
            simplex_tolerance: 1e-9,
            objective_tolerance: 1e-10,
            initial_step: 0.25,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub function_evaluations: usize,
    pub converged: bool,
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Minimizes `f` from `x0` with reflection/expansion/contraction/shrink.
/// Non-finite objective values act as infinite penalties.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    cfg: &NelderMeadConfig,
) -> OptimizeResult {
    let dim = x0.len();
    assert!(dim >= 1, "need at least one free coordinate");
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        sanitize(f(x))
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += cfg.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut iterations = 0usize;
    let mut converged = false;

    for _ in 0..cfg.max_iterations {
        iterations += 1;
        // order vertices by objective
        let mut idx: Vec<usize> = (0..=dim).collect();
        idx.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
        let reordered: Vec<Vec<f64>> = idx.iter().map(|&i| simplex[i].clone()).collect();
        let revalues: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalues;

        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        let spread = values[dim] - values[0];
        if diameter < cfg.simplex_tolerance && spread.abs() < cfg.objective_tolerance {
            converged = true;
            break;
        }

        // centroid of all but the worst
        let mut centroid = vec![0.0; dim];
        for v in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / dim as f64;
            }
        }

        let worst = values[dim];
        let second_worst = values[dim - 1];
        let best = values[0];

        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&simplex[dim])
            .map(|(c, w)| c + alpha * (c - w))
            .collect();
        let f_reflect = eval(&reflect, &mut evals);

        if f_reflect < best {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&simplex[dim])
                .map(|(c, w)| c + gamma * (c - w))
                .collect();
            let f_expand = eval(&expand, &mut evals);
            if f_expand < f_reflect {
                simplex[dim] = expand;
                values[dim] = f_expand;
            } else {
                simplex[dim] = reflect;
                values[dim] = f_reflect;
            }
            continue;
        }
        if f_reflect < second_worst {
            simplex[dim] = reflect;
            values[dim] = f_reflect;
            continue;
        }
        // contraction (outside if the reflection improved on the worst)
        let contract: Vec<f64> = if f_reflect < worst {
            centroid
                .iter()
                .zip(&reflect)
                .map(|(c, r)| c + rho * (r - c))
                .collect()
        } else {
            centroid
                .iter()
                .zip(&simplex[dim])
                .map(|(c, w)| c + rho * (w - c))
                .collect()
        };
        let f_contract = eval(&contract, &mut evals);
        if f_contract < worst.min(f_reflect) {
            simplex[dim] = contract;
            values[dim] = f_contract;
            continue;
        }
        // shrink toward the best vertex
        for i in 1..=dim {
            let shrunk: Vec<f64> = simplex[0]
                .iter()
                .zip(&simplex[i])
                .map(|(b, v)| b + sigma * (v - b))
                .collect();
            values[i] = eval(&shrunk, &mut evals);
            simplex[i] = shrunk;
        }
    }

    let mut best_i = 0;
    for i in 1..=dim {
        if values[i] < values[best_i] {
            best_i = i;
        }
    }
    OptimizeResult {
        x: simplex[best_i].clone(),
        fx: values[best_i],
        iterations,
        function_evaluations: evals,
        converged,
    }
}
