//! Five population-based black-box minimizers (PSO, BAT, BFO, SA, FPA)
//! behind one budget-aware interface. Every optimizer can resume from an
//! externally supplied [`Population`], which is what the hybrid portfolio in
//! [`crate::chm`] relies on.

mod bat;
mod bfo;
mod budget;
mod fpa;
mod params;
mod population;
mod pso;
mod reflect;
mod sa;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use self::budget::{CountingObjective, Evaluator, FeBudget, FnObjective, Objective};
pub use self::params::{BatParams, BfoParams, FpaParams, MethodParams, PsoParams, SaParams};
pub use self::population::{Individual, Population};
pub use self::reflect::{reflect, reflect_in_place};

use crate::error::{Error, Result};

/// The optimizers available to the portfolio.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pso,
    Bat,
    Bfo,
    Sa,
    Fpa,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Pso, Method::Bat, Method::Bfo, Method::Sa, Method::Fpa];

    pub fn name(self) -> &'static str {
        match self {
            Self::Pso => "pso",
            Self::Bat => "bat",
            Self::Bfo => "bfo",
            Self::Sa => "sa",
            Self::Fpa => "fpa",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

/// Box constraints of the search and the range used for random
/// (re)initialization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub lower: f64,
    pub upper: f64,
    pub init_lower: f64,
    pub init_upper: f64,
}

impl SearchSpace {
    pub fn new(bounds: [f64; 2], init_range: [f64; 2]) -> Result<Self> {
        let space = Self {
            lower: bounds[0],
            upper: bounds[1],
            init_lower: init_range[0],
            init_upper: init_range[1],
        };
        space.validate()?;
        Ok(space)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lower.is_finite() || !self.upper.is_finite() || self.lower >= self.upper {
            return Err(Error::InvalidConfig(format!(
                "bounds must satisfy lower < upper, got [{}, {}]",
                self.lower, self.upper
            )));
        }
        if !(self.init_lower <= self.init_upper && self.init_lower >= self.lower && self.init_upper <= self.upper) {
            return Err(Error::InvalidConfig(format!(
                "init range [{}, {}] must lie within bounds [{}, {}]",
                self.init_lower, self.init_upper, self.lower, self.upper
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

impl Default for SearchSpace {
    fn default() -> Self {
        Self {
            lower: 0.0,
            upper: 10_000.0,
            init_lower: 0.0,
            init_upper: 10.0,
        }
    }
}

#[derive(Clone, Debug)]
enum MethodState {
    Pso(pso::Pso),
    Bat(bat::Bat),
    Bfo(bfo::Bfo),
    Sa(sa::Sa),
    Fpa(fpa::Fpa),
}

/// Why [`OptimizerState::step`] did not run a full generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Halt {
    /// The FE cap was reached.
    BudgetExhausted,
    /// An evaluation reached the target fitness.
    Converged,
}

/// A seeded optimizer instance: method-specific state, the random stream
/// and the best-so-far archive.
#[derive(Clone, Debug)]
pub struct OptimizerState {
    method: Method,
    space: SearchSpace,
    target: f64,
    rng: ChaCha8Rng,
    best: Option<Individual>,
    generation: u64,
    inner: MethodState,
}

/// Creates an optimizer for `method` with the given parameters, search
/// space and seed.
pub fn make_optimizer(method: Method, params: &MethodParams, space: SearchSpace, seed: u64) -> Result<OptimizerState> {
    space.validate()?;
    let inner = match method {
        Method::Pso => MethodState::Pso(pso::Pso::new(params.pso.validated()?)),
        Method::Bat => MethodState::Bat(bat::Bat::new(params.bat.validated()?)),
        Method::Bfo => MethodState::Bfo(bfo::Bfo::new(params.bfo.validated()?)),
        Method::Sa => MethodState::Sa(sa::Sa::new(params.sa.validated()?)),
        Method::Fpa => MethodState::Fpa(fpa::Fpa::new(params.fpa.validated()?)),
    };
    Ok(OptimizerState {
        method,
        space,
        target: 0.0,
        rng: ChaCha8Rng::seed_from_u64(seed),
        best: None,
        generation: 0,
        inner,
    })
}

/// Context handed to the method implementations for one generation.
pub(crate) struct StepContext<'a, 'b> {
    pub eval: &'a mut Evaluator<'b>,
    pub rng: &'a mut ChaCha8Rng,
    pub space: &'a SearchSpace,
    pub generation: u64,
}

impl StepContext<'_, '_> {
    /// Reflects `position` into the bounds and evaluates it. `None` means the
    /// evaluator has halted and the candidate must be discarded.
    pub fn evaluate(&mut self, position: &mut [f64]) -> Option<f64> {
        reflect_in_place(position, self.space.lower, self.space.upper);
        self.eval.evaluate(position)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

impl OptimizerState {
    /// Stops the search once an evaluation is at or below `target`.
    pub fn with_target(mut self, target: f64) -> Self {
        self.target = target;
        self
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn target(&self) -> f64 {
        self.target
    }

    /// Best individual evaluated so far.
    pub fn best(&self) -> Option<&Individual> {
        self.best.as_ref()
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn params(&self) -> MethodParams {
        let mut p = MethodParams::default();
        match &self.inner {
            MethodState::Pso(s) => p.pso = s.params,
            MethodState::Bat(s) => p.bat = s.params,
            MethodState::Bfo(s) => p.bfo = s.params,
            MethodState::Sa(s) => p.sa = s.params,
            MethodState::Fpa(s) => p.fpa = s.params,
        }
        p
    }

    /// Current SA temperature, if this is an SA instance.
    pub fn temperature(&self) -> Option<f64> {
        match &self.inner {
            MethodState::Sa(s) => Some(s.temperature),
            _ => None,
        }
    }

    pub fn converged(&self) -> bool {
        self.best.as_ref().and_then(|b| b.fitness).is_some_and(|f| f <= self.target)
    }

    /// Runs one generation of the method's update on `pop`.
    ///
    /// Members without a cached fitness are evaluated first. The generation
    /// stops early when the budget runs out or an evaluation reaches the
    /// target, in which case the reason is returned as an error.
    pub fn step(&mut self, pop: &mut Population, objective: &dyn Objective, budget: &mut FeBudget) -> Result<(), Halt> {
        let mut eval = Evaluator::new(objective, budget, &mut self.best, self.target);
        if eval.halted() {
            return Err(eval.halt_reason());
        }
        pop.clamp_into(&self.space);
        for member in pop.members_mut() {
            if member.fitness.is_none() {
                match eval.evaluate(&member.position) {
                    Some(f) => member.fitness = Some(f),
                    None => return Err(eval.halt_reason()),
                }
            }
        }
        if eval.halted() {
            return Err(eval.halt_reason());
        }
        let mut ctx = StepContext {
            eval: &mut eval,
            rng: &mut self.rng,
            space: &self.space,
            generation: self.generation,
        };
        match &mut self.inner {
            MethodState::Pso(s) => s.step(pop, &mut ctx),
            MethodState::Bat(s) => s.step(pop, &mut ctx),
            MethodState::Bfo(s) => s.step(pop, &mut ctx),
            MethodState::Sa(s) => s.step(pop, &mut ctx),
            MethodState::Fpa(s) => s.step(pop, &mut ctx),
        }
        let halted = eval.halted().then(|| eval.halt_reason());
        self.generation += 1;
        match halted {
            Some(reason) => Err(reason),
            None => Ok(()),
        }
    }

    /// Steps until the budget is used up or the target fitness is reached.
    /// A zero cap returns immediately without evaluating anything.
    pub fn run_until(&mut self, pop: &mut Population, objective: &dyn Objective, budget: &mut FeBudget) {
        while !budget.exhausted() && !self.converged() {
            if self.step(pop, objective, budget).is_err() {
                break;
            }
        }
    }

    /// The population to hand to the next phase: current members, with the
    /// archived best replacing the worst member when no member matches it.
    pub fn export_population(&self, pop: &Population) -> Population {
        let mut out = pop.clone();
        if let Some(best) = &self.best {
            let best_f = best.fitness.unwrap_or(f64::INFINITY);
            let present = out
                .members()
                .iter()
                .any(|m| m.fitness.is_some_and(|f| f <= best_f));
            if !present {
                if let Some(w) = out.worst_index() {
                    out.members_mut()[w] = best.clone();
                }
            }
        }
        out
    }
}
