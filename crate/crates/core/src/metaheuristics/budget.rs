use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use super::{Halt, Individual};

/// A function to minimize. `cost` is the number of function evaluations
/// charged per call, e.g. the number of samples a candidate classifies.
pub trait Objective: Sync {
    fn evaluate(&self, position: &[f64]) -> f64;

    fn cost(&self) -> u64 {
        1
    }
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn evaluate(&self, position: &[f64]) -> f64 {
        self(position)
    }
}

/// A closure objective with an explicit per-call cost.
pub struct FnObjective<F> {
    f: F,
    cost: u64,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnObjective<F> {
    pub fn new(f: F, cost: u64) -> Self {
        Self { f, cost }
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Objective for FnObjective<F> {
    fn evaluate(&self, position: &[f64]) -> f64 {
        (self.f)(position)
    }

    fn cost(&self) -> u64 {
        self.cost
    }
}

/// Wraps an objective and counts the calls made through it.
pub struct CountingObjective<'a> {
    inner: &'a dyn Objective,
    calls: AtomicU64,
}

impl<'a> CountingObjective<'a> {
    pub fn new(inner: &'a dyn Objective) -> Self {
        Self {
            inner,
            calls: AtomicU64::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }
}

impl Objective for CountingObjective<'_> {
    fn evaluate(&self, position: &[f64]) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.evaluate(position)
    }

    fn cost(&self) -> u64 {
        self.inner.cost()
    }
}

/// Function-evaluation accounting for one optimization phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeBudget {
    pub used: u64,
    pub cap: u64,
}

impl FeBudget {
    pub fn new(cap: u64) -> Self {
        Self { used: 0, cap }
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.cap
    }

    pub fn remaining(&self) -> u64 {
        self.cap.saturating_sub(self.used)
    }

    /// Fraction of the cap already used, in `[0, 1]`.
    pub fn progress(&self) -> f64 {
        if self.cap == 0 {
            1.0
        } else {
            (self.used as f64 / self.cap as f64).min(1.0)
        }
    }
}

/// Charges the budget for every objective call, keeps the best-so-far
/// archive current and refuses further calls once the cap or the target is
/// reached.
pub struct Evaluator<'a> {
    objective: &'a dyn Objective,
    budget: &'a mut FeBudget,
    archive: &'a mut Option<Individual>,
    target: f64,
    converged: bool,
}

impl<'a> Evaluator<'a> {
    pub fn new(
        objective: &'a dyn Objective,
        budget: &'a mut FeBudget,
        archive: &'a mut Option<Individual>,
        target: f64,
    ) -> Self {
        let converged = archive
            .as_ref()
            .and_then(|b| b.fitness)
            .is_some_and(|f| f <= target);
        Self {
            objective,
            budget,
            archive,
            target,
            converged,
        }
    }

    pub fn halted(&self) -> bool {
        self.converged || self.budget.exhausted()
    }

    pub fn halt_reason(&self) -> Halt {
        if self.converged {
            Halt::Converged
        } else {
            Halt::BudgetExhausted
        }
    }

    pub fn progress(&self) -> f64 {
        self.budget.progress()
    }

    /// Evaluates `position`, or returns `None` without charging anything
    /// when the evaluator has halted.
    pub fn evaluate(&mut self, position: &[f64]) -> Option<f64> {
        if self.halted() {
            return None;
        }
        self.budget.used += self.objective.cost();
        let f = self.objective.evaluate(position);
        let improved = match self.archive.as_ref().and_then(|b| b.fitness) {
            Some(best) => f < best,
            None => true,
        };
        if improved {
            *self.archive = Some(Individual {
                position: position.to_vec(),
                fitness: Some(f),
            });
        }
        if f <= self.target {
            self.converged = true;
        }
        Some(f)
    }

    pub fn best_position(&self) -> Option<&[f64]> {
        self.archive.as_ref().map(|b| b.position.as_slice())
    }
}
