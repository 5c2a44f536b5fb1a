//! Firefly-algorithm optimizer for box-constrained continuous minimization,
//! plus the pipeline tuner that searches filter and controller weight
//! diagonals.
//!
//! The canonical update is used: brightness is inverse cost, attractiveness
//! decays as `beta0 * exp(-gamma r^2)` with distance, and every firefly moves
//! toward every brighter firefly each iteration with an annealed uniform
//! randomization term scaled by the box width. A firefly with no brighter
//! partner takes the pure random-walk step. Candidate evaluations within one
//! iteration are independent: each candidate draws from its own stream
//! derived from `(seed, iteration, index)` and results reduce in index order,
//! so outcomes do not depend on evaluation scheduling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Optimizer parameters.
///
/// Defaults: 25 fireflies for 1000 iterations, attractiveness base 2 with
/// absorption 0.3, randomization 0.2 decaying by 0.98 per iteration. A
/// single-firefly population is accepted and degenerates to a pure
/// random walk.
#[derive(Debug, Clone, PartialEq)]
pub struct FireflyParams {
    pub population: usize,
    pub iterations: usize,
    /// Attractiveness at zero distance.
    pub beta0: f64,
    /// Light absorption coefficient.
    pub gamma: f64,
    /// Initial randomization scale.
    pub alpha0: f64,
    /// Per-iteration multiplier on the randomization scale.
    pub alpha_decay: f64,
    pub seed: u64,
}

impl Default for FireflyParams {
    fn default() -> Self {
        Self {
            population: 25,
            iterations: 1000,
            beta0: 2.0,
            gamma: 0.3,
            alpha0: 0.2,
            alpha_decay: 0.98,
            seed: 0,
        }
    }
}

/// Box constraints: the feasible region is `[lower, upper]` componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, FireflyError> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(FireflyError::BadSpace {
                what: "lower and upper bounds must be nonempty and equal length".into(),
            });
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(FireflyError::BadSpace {
                    what: format!("bound {i} invalid: [{lo}, {hi}]"),
                });
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    fn clamp(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }
}

/// Outcome of an optimization run. `history` records the best cost seen up to
/// and including each iteration, so it is non-increasing;
/// `position_history` carries the matching positions.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_position: Vec<f64>,
    pub best_cost: f64,
    pub history: Vec<f64>,
    pub position_history: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FireflyError {
    BadParams { what: String },
    BadSpace { what: String },
    /// Tuning selector validation failures.
    BadSelection { what: String },
    /// Scenario preparation failed before any optimization ran.
    Scenario(String),
}

impl std::fmt::Display for FireflyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FireflyError::BadParams { what } => write!(f, "invalid firefly parameters: {what}"),
            FireflyError::BadSpace { what } => write!(f, "invalid search space: {what}"),
            FireflyError::BadSelection { what } => write!(f, "invalid tuning selection: {what}"),
            FireflyError::Scenario(what) => write!(f, "scenario error: {what}"),
        }
    }
}

impl std::error::Error for FireflyError {}

/// Attractiveness at distance `r`: `beta0 * exp(-gamma * r^2)`.
pub fn attractiveness(beta0: f64, gamma: f64, r: f64) -> f64 {
    beta0 * (-gamma * r * r).exp()
}

fn stream_rng(seed: u64, iteration: usize, index: usize, population: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((iteration * population + index) as u64);
    rng
}

/// One movement of `xi` toward a strictly brighter `xj`:
/// `xi + beta(r) (xj - xi) + alpha_iter * U(-0.5, 0.5) * width`, clamped to
/// the box. `alpha_iter = alpha0 * alpha_decay^iter`.
pub fn move_firefly(
    xi: &[f64],
    xj: &[f64],
    params: &FireflyParams,
    space: &SearchSpace,
    rng: &mut ChaCha8Rng,
    iter: usize,
) -> Vec<f64> {
    let r: f64 = xi
        .iter()
        .zip(xj)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let beta = attractiveness(params.beta0, params.gamma, r);
    let alpha = params.alpha0 * params.alpha_decay.powi(iter as i32);
    let mut out: Vec<f64> = xi
        .iter()
        .zip(xj)
        .zip(space.lower.iter().zip(&space.upper))
        .map(|((a, b), (lo, hi))| {
            let noise: f64 = rng.random_range(-0.5..0.5);
            a + beta * (b - a) + alpha * noise * (hi - lo)
        })
        .collect();
    space.clamp(&mut out);
    out
}

fn random_walk(
    x: &mut [f64],
    alpha: f64,
    space: &SearchSpace,
    rng: &mut ChaCha8Rng,
) {
    for (v, (lo, hi)) in x.iter_mut().zip(space.lower.iter().zip(&space.upper)) {
        let noise: f64 = rng.random_range(-0.5..0.5);
        *v += alpha * noise * (hi - lo);
    }
    space.clamp(x);
}

fn validate_params(params: &FireflyParams) -> Result<(), FireflyError> {
    if params.population < 1 {
        return Err(FireflyError::BadParams {
            what: "population must be at least 1".into(),
        });
    }
    if params.iterations < 1 {
        return Err(FireflyError::BadParams {
            what: "iterations must be at least 1".into(),
        });
    }
    if !(params.beta0 > 0.0) {
        return Err(FireflyError::BadParams {
            what: format!("beta0 must be positive, got {}", params.beta0),
        });
    }
    if !(params.gamma >= 0.0) {
        return Err(FireflyError::BadParams {
            what: format!("gamma must be nonnegative, got {}", params.gamma),
        });
    }
    if !(params.alpha_decay > 0.0 && params.alpha_decay <= 1.0) {
        return Err(FireflyError::BadParams {
            what: format!("alpha_decay must lie in (0, 1], got {}", params.alpha_decay),
        });
    }
    if !(params.alpha0 >= 0.0) {
        return Err(FireflyError::BadParams {
            what: format!("alpha0 must be nonnegative, got {}", params.alpha0),
        });
    }
    Ok(())
}

/// Minimizes `objective` over the box. Non-finite objective values are
/// treated as `+inf` and the run continues; the reported best never worsens;
/// identical inputs and seed give bit-identical results.
pub fn optimize(
    objective: impl Fn(&[f64]) -> f64,
    space: &SearchSpace,
    params: &FireflyParams,
) -> Result<OptimizationResult, FireflyError> {
    validate_params(params)?;
    let dims = space.dims();
    let pop = params.population;
    let eval = |x: &[f64]| -> f64 {
        let c = objective(x);
        if c.is_finite() {
            c
        } else {
            f64::INFINITY
        }
    };

    // initial population from the iteration-0 streams
    let mut positions: Vec<Vec<f64>> = (0..pop)
        .map(|i| {
            let mut rng = stream_rng(params.seed, 0, i, pop);
            (0..dims)
                .map(|d| {
                    if space.lower[d] == space.upper[d] {
                        space.lower[d]
                    } else {
                        rng.random_range(space.lower[d]..space.upper[d])
                    }
                })
                .collect()
        })
        .collect();
    let mut costs: Vec<f64> = positions.iter().map(|x| eval(x)).collect();

    let mut best_idx = (0..pop)
        .min_by(|&a, &b| costs[a].partial_cmp(&costs[b]).unwrap())
        .unwrap();
    let mut best_position = positions[best_idx].clone();
    let mut best_cost = costs[best_idx];

    let mut history = Vec::with_capacity(params.iterations);
    let mut position_history = Vec::with_capacity(params.iterations);

    for t in 0..params.iterations {
        let alpha = params.alpha0 * params.alpha_decay.powi(t as i32);
        let prev_positions = positions.clone();
        let prev_costs = costs.clone();
        for i in 0..pop {
            let mut rng = stream_rng(params.seed, t + 1, i, pop);
            let mut x = prev_positions[i].clone();
            let mut moved = false;
            for j in 0..pop {
                if prev_costs[j] < prev_costs[i] {
                    x = move_firefly(&x, &prev_positions[j], params, space, &mut rng, t);
                    moved = true;
                }
            }
            if !moved {
                random_walk(&mut x, alpha, space, &mut rng);
            }
            let c = eval(&x);
            positions[i] = x;
            costs[i] = c;
        }
        best_idx = (0..pop)
            .min_by(|&a, &b| costs[a].partial_cmp(&costs[b]).unwrap())
            .unwrap();
        if costs[best_idx] < best_cost {
            best_cost = costs[best_idx];
            best_position = positions[best_idx].clone();
        }
        history.push(best_cost);
        position_history.push(best_position.clone());
    }

    Ok(OptimizationResult {
        best_position,
        best_cost,
        history,
        position_history,
    })
}

/// Which diagonal families the pipeline tuner searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TuneSelector {
    /// The filter's assumed process and measurement covariance diagonals.
    KfNoiseDiagonals,
    /// The controller's Q and R weight diagonals.
    LqrWeightDiagonals,
}

/// Outcome of a pipeline tuning run. The optimizer works on base-10
/// logarithms of the selected diagonals; `tuned_diagonals` carries the
/// exponentiated best position and `tuned_scenario` has it applied.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    /// Raw optimizer output in log10 space.
    pub optimization: OptimizationResult,
    /// Best diagonals in linear units, ordered as selected.
    pub tuned_diagonals: Vec<f64>,
    pub tuned_scenario: crate::sim::Scenario,
}

/// Number of decision dimensions each selector contributes for a scenario.
pub fn selector_dims(
    scenario: &crate::sim::Scenario,
    selector: TuneSelector,
) -> Result<usize, FireflyError> {
    let model = scenario
        .build_model()
        .map_err(|e| FireflyError::Scenario(e.to_string()))?;
    Ok(match selector {
        TuneSelector::KfNoiseDiagonals => model.num_noise() + model.num_outputs(),
        TuneSelector::LqrWeightDiagonals => model.num_states() + model.num_inputs(),
    })
}

/// Current diagonal values a selector would tune, in decision-vector order.
pub fn selector_diagonals(
    scenario: &crate::sim::Scenario,
    selectors: &[TuneSelector],
) -> Result<Vec<f64>, FireflyError> {
    use crate::sim::WeightSpec;
    let model = scenario
        .build_model()
        .map_err(|e| FireflyError::Scenario(e.to_string()))?;
    let diag_of = |spec: &WeightSpec, n: usize| -> Vec<f64> {
        match spec {
            WeightSpec::Diagonal(d) => d.clone(),
            WeightSpec::Full(rows) => (0..n)
                .map(|i| rows.get(i).and_then(|r| r.get(i)).copied().unwrap_or(0.0))
                .collect(),
        }
    };
    let mut out = Vec::new();
    for sel in canonical_selectors(selectors)? {
        match sel {
            TuneSelector::KfNoiseDiagonals => {
                out.extend(diag_of(&scenario.assumed_noise.q_process, model.num_noise()));
                out.extend(diag_of(&scenario.assumed_noise.r_meas, model.num_outputs()));
            }
            TuneSelector::LqrWeightDiagonals => {
                out.extend(diag_of(&scenario.lqr_weights.q, model.num_states()));
                out.extend(diag_of(&scenario.lqr_weights.r, model.num_inputs()));
            }
        }
    }
    Ok(out)
}

fn canonical_selectors(selectors: &[TuneSelector]) -> Result<Vec<TuneSelector>, FireflyError> {
    if selectors.is_empty() {
        return Err(FireflyError::BadSelection {
            what: "at least one selector is required".into(),
        });
    }
    let mut out = Vec::new();
    for sel in [TuneSelector::KfNoiseDiagonals, TuneSelector::LqrWeightDiagonals] {
        if selectors.contains(&sel) {
            out.push(sel);
        }
    }
    Ok(out)
}

/// Applies a linear-unit decision vector to the scenario's selected diagonals.
fn apply_diagonals(
    scenario: &crate::sim::Scenario,
    selectors: &[TuneSelector],
    values: &[f64],
) -> Result<crate::sim::Scenario, FireflyError> {
    use crate::sim::WeightSpec;
    let model = scenario
        .build_model()
        .map_err(|e| FireflyError::Scenario(e.to_string()))?;
    let mut out = scenario.clone();
    let mut cursor = 0;
    let mut take = |count: usize| -> Vec<f64> {
        let slice = values[cursor..cursor + count].to_vec();
        cursor += count;
        slice
    };
    for sel in canonical_selectors(selectors)? {
        match sel {
            TuneSelector::KfNoiseDiagonals => {
                out.assumed_noise.q_process = WeightSpec::Diagonal(take(model.num_noise()));
                out.assumed_noise.r_meas = WeightSpec::Diagonal(take(model.num_outputs()));
            }
            TuneSelector::LqrWeightDiagonals => {
                out.lqr_weights.q = WeightSpec::Diagonal(take(model.num_states()));
                out.lqr_weights.r = WeightSpec::Diagonal(take(model.num_inputs()));
            }
        }
    }
    Ok(out)
}

/// Tunes the selected diagonal families by minimizing the mean
/// state-estimate MSE across the scenario's evaluation seed list.
///
/// The decision vector holds base-10 logarithms of the selected diagonals;
/// `space` bounds those logs. Simulation failures inside the objective cost
/// `+inf` for that candidate and the search continues.
pub fn tune_pipeline(
    scenario: &crate::sim::Scenario,
    selectors: &[TuneSelector],
    space: &SearchSpace,
    params: &FireflyParams,
) -> Result<TuneResult, FireflyError> {
    let canonical = canonical_selectors(selectors)?;
    let mut expected = 0;
    for sel in &canonical {
        expected += selector_dims(scenario, *sel)?;
    }
    if space.dims() != expected {
        return Err(FireflyError::BadSelection {
            what: format!(
                "search space has {} dimensions, selection needs {expected}",
                space.dims()
            ),
        });
    }

    let objective = |logv: &[f64]| -> f64 {
        let linear: Vec<f64> = logv.iter().map(|v| 10f64.powf(*v)).collect();
        let candidate = match apply_diagonals(scenario, &canonical, &linear) {
            Ok(c) => c,
            Err(_) => return f64::INFINITY,
        };
        let mut total = 0.0;
        for &seed in &scenario.seeds {
            match crate::sim::run_scenario(&candidate, seed) {
                Ok(trace) => total += trace.metrics.mse,
                Err(_) => return f64::INFINITY,
            }
        }
        total / scenario.seeds.len() as f64
    };

    let optimization = optimize(objective, space, params)?;
    let tuned_diagonals: Vec<f64> = optimization
        .best_position
        .iter()
        .map(|v| 10f64.powf(*v))
        .collect();
    let tuned_scenario = apply_diagonals(scenario, &canonical, &tuned_diagonals)?;
    Ok(TuneResult {
        optimization,
        tuned_diagonals,
        tuned_scenario,
    })
}
