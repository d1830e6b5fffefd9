use rand_distr::{Distribution, Normal};

use super::params::SaParams;
use super::population::Population;
use super::StepContext;

/// Independent annealers sharing one cooling schedule.
#[derive(Clone, Debug)]
pub(crate) struct Sa {
    pub params: SaParams,
    pub temperature: f64,
}

impl Sa {
    pub fn new(params: SaParams) -> Self {
        Self {
            params,
            temperature: params.temperature,
        }
    }

    pub fn step(&mut self, pop: &mut Population, ctx: &mut StepContext) {
        let sigma = self.params.d * ctx.space.width();
        let noise = Normal::new(0.0, sigma).expect("finite sigma");
        for i in 0..pop.len() {
            let current = &pop.members()[i];
            let current_f = current.fitness.unwrap_or(f64::INFINITY);
            let mut candidate: Vec<f64> = current
                .position
                .iter()
                .map(|&x| x + noise.sample(ctx.rng))
                .collect();
            let Some(f) = ctx.evaluate(&mut candidate) else {
                return;
            };
            let delta = f - current_f;
            let accept = delta <= 0.0 || ctx.uniform() < (-delta / self.temperature).exp();
            if accept {
                let m = &mut pop.members_mut()[i];
                m.position = candidate;
                m.fitness = Some(f);
            }
        }
        self.temperature *= self.params.alpha;
        if self.temperature < self.params.s_t {
            self.temperature = self.params.temperature;
        }
    }
}
