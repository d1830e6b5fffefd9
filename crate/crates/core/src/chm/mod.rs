//! The constrained hybrid metaheuristic: every outer iteration probes all
//! methods from one shared population under a small budget, keeps the best
//! performer and lets it continue under a larger budget. The resulting
//! population seeds the next iteration.

mod objective;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use self::objective::{candidate_to_spec, fitness_of, LooObjective, MIN_BANDWIDTH};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::metaheuristics::{
    make_optimizer, FeBudget, Individual, Method, MethodParams, Objective, OptimizerState, Population, SearchSpace,
};
use crate::pnn::{SmoothingKind, SmoothingSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChmConfig {
    /// Outer iterations.
    pub n: usize,
    /// Population size.
    pub n_p: usize,
    pub methods: Vec<Method>,
    pub fitness_threshold: f64,
    pub probing_multiplier: u64,
    pub fit_multiplier: u64,
    pub init_range: [f64; 2],
    pub bounds: [f64; 2],
    pub smoothing: SmoothingKind,
    pub seed: u64,
}

impl Default for ChmConfig {
    fn default() -> Self {
        Self {
            n: 5,
            n_p: 20,
            methods: vec![Method::Pso, Method::Fpa, Method::Bat, Method::Bfo, Method::Sa],
            fitness_threshold: 1e-8,
            probing_multiplier: 30,
            fit_multiplier: 100,
            init_range: [0.0, 10.0],
            bounds: [0.0, crate::pnn::DEFAULT_UPPER_BOUND],
            smoothing: SmoothingKind::PerFeature,
            seed: 0,
        }
    }
}

impl ChmConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.n == 0 {
            return bad("chm.n must be >= 1");
        }
        if self.n_p == 0 {
            return bad("chm.n_p must be >= 1");
        }
        if self.methods.is_empty() {
            return bad("chm.methods must not be empty");
        }
        if self.probing_multiplier == 0 || self.fit_multiplier == 0 {
            return bad("chm budget multipliers must be >= 1");
        }
        if !self.fitness_threshold.is_finite() {
            return bad("chm.fitness_threshold must be finite");
        }
        self.space().map(|_| ())
    }

    pub fn space(&self) -> Result<SearchSpace> {
        SearchSpace::new(self.bounds, self.init_range)
    }

    /// Probing budget per method for a training sample of `n_t` patterns.
    pub fn probing_budget(&self, n_t: usize) -> u64 {
        self.n_p as u64 * n_t as u64 * self.probing_multiplier
    }

    pub fn fit_budget(&self, n_t: usize) -> u64 {
        self.n_p as u64 * n_t as u64 * self.fit_multiplier
    }

    /// Function evaluations a single method gets when run alone with the
    /// same total budget as the whole portfolio.
    pub fn equivalent_single_budget(&self, n_t: usize) -> u64 {
        self.n as u64 * (self.methods.len() as u64 * self.probing_budget(n_t) + self.fit_budget(n_t))
    }
}

/// Deterministic seed for a component identified by `(a, b)` within a run.
pub fn derive_seed(base: u64, a: u64, b: u64) -> u64 {
    let mut z = base ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub method: Method,
    /// `None` when the method was skipped because an earlier one already
    /// reached the target.
    pub best_fitness: Option<f64>,
    pub fe_used: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub probes: Vec<ProbeRecord>,
    pub selected: Method,
    pub fit_best_fitness: f64,
    pub fit_fe_used: u64,
    /// Error of the overall best candidate on the evaluation set.
    pub eval_error: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChmTrace {
    pub iterations: Vec<IterationRecord>,
}

impl ChmTrace {
    pub fn selected(&self) -> impl Iterator<Item = Method> + '_ {
        self.iterations.iter().map(|r| r.selected)
    }

    /// How often each method was selected.
    pub fn selection_counts(&self, methods: &[Method]) -> Vec<usize> {
        methods
            .iter()
            .map(|m| self.selected().filter(|s| s == m).count())
            .collect()
    }

    pub fn total_fe(&self) -> u64 {
        self.iterations
            .iter()
            .map(|r| r.fit_fe_used + r.probes.iter().map(|p| p.fe_used).sum::<u64>())
            .sum()
    }

    /// One JSON object per line, one line per iteration.
    pub fn to_json_lines(&self) -> Result<String> {
        let mut out = String::new();
        for r in &self.iterations {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_json_lines(text: &str) -> Result<Self> {
        let iterations = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<std::result::Result<_, _>>()?;
        Ok(Self { iterations })
    }
}

/// Result of one probing phase.
pub struct ProbeOutcome {
    /// Index into the probed method list.
    pub winner: usize,
    pub states: Vec<OptimizerState>,
    pub populations: Vec<Population>,
    pub records: Vec<ProbeRecord>,
}

impl ProbeOutcome {
    pub fn winner_method(&self) -> Method {
        self.records[self.winner].method
    }
}

/// Runs every method on its own copy of `pop` with `budget_each` function
/// evaluations and picks the one with the lowest best fitness. Ties are
/// broken uniformly at random with `tie_rng`. Once a method reaches
/// `target` the remaining methods are skipped.
#[allow(clippy::too_many_arguments)]
pub fn probe_phase<R: Rng + ?Sized>(
    pop: &Population,
    methods: &[Method],
    params: &MethodParams,
    space: SearchSpace,
    budget_each: u64,
    objective: &dyn Objective,
    seeds: &[u64],
    target: f64,
    tie_rng: &mut R,
) -> Result<ProbeOutcome> {
    if methods.is_empty() || seeds.len() != methods.len() {
        return Err(Error::InvalidConfig("one seed per probed method is required".into()));
    }
    let mut states = Vec::with_capacity(methods.len());
    let mut populations = Vec::with_capacity(methods.len());
    let mut records = Vec::with_capacity(methods.len());
    let mut done = false;
    for (&method, &seed) in methods.iter().zip(seeds) {
        let mut state = make_optimizer(method, params, space, seed)?.with_target(target);
        let mut p = pop.positions_only();
        let mut budget = FeBudget::new(if done { 0 } else { budget_each });
        state.run_until(&mut p, objective, &mut budget);
        done |= state.converged();
        records.push(ProbeRecord {
            method,
            best_fitness: state.best().and_then(|b| b.fitness),
            fe_used: budget.used,
        });
        states.push(state);
        populations.push(p);
    }
    let score = |r: &ProbeRecord| r.best_fitness.unwrap_or(f64::INFINITY);
    let min = records.iter().map(score).fold(f64::INFINITY, f64::min);
    let tied: Vec<usize> = (0..records.len()).filter(|&i| score(&records[i]) == min).collect();
    let winner = if tied.len() == 1 {
        tied[0]
    } else {
        tied[tie_rng.random_range(0..tied.len())]
    };
    Ok(ProbeOutcome {
        winner,
        states,
        populations,
        records,
    })
}

/// Output of [`chm_train`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChmResult {
    pub smoothing: SmoothingSpec,
    /// Leave-one-out training error of the returned parameters.
    pub fitness: f64,
    pub trace: ChmTrace,
}

/// Optimizes the smoothing parameters of a PNN on `train`, driving the
/// search with leave-one-out training error. `eval_set` is only used for
/// the early-stop check.
pub fn chm_train(train: &Dataset, eval_set: &Dataset, cfg: &ChmConfig, params: &MethodParams) -> Result<ChmResult> {
    cfg.validate()?;
    let params = params.validated()?;
    if train.is_empty() || eval_set.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let objective = LooObjective::new(train, cfg.smoothing)?;
    let dim = cfg.smoothing.dimension(train.n_classes(), train.n_features());
    run_portfolio(&objective, dim, cfg, &params, |candidate| {
        fitness_of(cfg.smoothing, candidate, train, eval_set)
    })
    .and_then(|(best, trace)| {
        Ok(ChmResult {
            smoothing: candidate_to_spec(cfg.smoothing, &best.position, train.n_classes(), train.n_features())?,
            fitness: best.fitness.unwrap_or(f64::INFINITY),
            trace,
        })
    })
}

/// The portfolio loop over an arbitrary objective. `eval_error` scores the
/// current overall best after each fit phase; zero stops the loop.
pub fn run_portfolio<F>(
    objective: &dyn Objective,
    dim: usize,
    cfg: &ChmConfig,
    params: &MethodParams,
    mut eval_error: F,
) -> Result<(Individual, ChmTrace)>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    cfg.validate()?;
    let space = cfg.space()?;
    let n_t = objective.cost() as usize;
    let probing = cfg.probing_budget(n_t);
    let fit = cfg.fit_budget(n_t);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pop = Population::random(cfg.n_p, dim, cfg.init_range, &mut rng);
    let mut best: Option<Individual> = None;
    let mut trace = ChmTrace::default();

    for iteration in 0..cfg.n {
        let seeds: Vec<u64> = (0..cfg.methods.len())
            .map(|k| derive_seed(cfg.seed, iteration as u64, k as u64))
            .collect();
        let mut outcome = probe_phase(
            &pop,
            &cfg.methods,
            params,
            space,
            probing,
            objective,
            &seeds,
            cfg.fitness_threshold,
            &mut rng,
        )?;
        for state in &outcome.states {
            consider(&mut best, state.best());
        }
        let w = outcome.winner;
        let mut state = outcome.states.swap_remove(w);
        let mut winner_pop = outcome.populations.swap_remove(w);
        let mut budget = FeBudget::new(fit);
        state.run_until(&mut winner_pop, objective, &mut budget);
        consider(&mut best, state.best());

        let overall = best.as_ref().expect("probing evaluates at least one candidate");
        let err = eval_error(&overall.position)?;
        let overall_fitness = overall.fitness.unwrap_or(f64::INFINITY);
        trace.iterations.push(IterationRecord {
            iteration,
            probes: outcome.records,
            selected: cfg.methods[w],
            fit_best_fitness: state.best().and_then(|b| b.fitness).unwrap_or(f64::INFINITY),
            fit_fe_used: budget.used,
            eval_error: err,
        });
        if overall_fitness <= cfg.fitness_threshold || err == 0.0 {
            break;
        }
        pop = state.export_population(&winner_pop).positions_only();
    }
    Ok((best.expect("at least one iteration runs"), trace))
}

fn consider(best: &mut Option<Individual>, candidate: Option<&Individual>) {
    let Some(c) = candidate else { return };
    let cf = c.fitness.unwrap_or(f64::INFINITY);
    let better = match best {
        Some(b) => cf < b.fitness.unwrap_or(f64::INFINITY),
        None => true,
    };
    if better {
        *best = Some(c.clone());
    }
}

/// Trains with a single method given the whole portfolio budget
/// ([`ChmConfig::equivalent_single_budget`]), starting from the same initial
/// population the portfolio would use.
pub fn single_train(
    train: &Dataset,
    method: Method,
    cfg: &ChmConfig,
    params: &MethodParams,
) -> Result<(SmoothingSpec, f64)> {
    cfg.validate()?;
    let params = params.validated()?;
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let objective = LooObjective::new(train, cfg.smoothing)?;
    let dim = cfg.smoothing.dimension(train.n_classes(), train.n_features());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pop = Population::random(cfg.n_p, dim, cfg.init_range, &mut rng);
    let mut state = make_optimizer(method, &params, cfg.space()?, derive_seed(cfg.seed, u64::MAX, 0))?
        .with_target(cfg.fitness_threshold);
    let mut budget = FeBudget::new(cfg.equivalent_single_budget(train.len()));
    state.run_until(&mut pop, &objective, &mut budget);
    let best = state.best().ok_or(Error::EmptyDataset)?;
    let spec = candidate_to_spec(cfg.smoothing, &best.position, train.n_classes(), train.n_features())?;
    Ok((spec, best.fitness.unwrap_or(f64::INFINITY)))
}
