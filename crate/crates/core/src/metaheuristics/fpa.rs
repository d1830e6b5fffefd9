use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use super::params::FpaParams;
use super::population::Population;
use super::StepContext;

const LEVY_BETA: f64 = 1.5;
/// Mantegna scale for beta = 1.5:
/// (Γ(1+β) sin(πβ/2) / (Γ((1+β)/2) β 2^((β-1)/2)))^(1/β).
const LEVY_SIGMA: f64 = 0.696_574_502_557_696_7;

#[derive(Clone, Debug)]
pub(crate) struct Fpa {
    pub params: FpaParams,
}

/// One Lévy-distributed step via Mantegna's algorithm.
pub(crate) fn levy_step<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u = Normal::new(0.0, LEVY_SIGMA).expect("valid sigma").sample(rng);
    let v: f64 = StandardNormal.sample(rng);
    u / v.abs().powf(1.0 / LEVY_BETA)
}

impl Fpa {
    pub fn new(params: FpaParams) -> Self {
        Self { params }
    }

    pub fn step(&mut self, pop: &mut Population, ctx: &mut StepContext) {
        let n = pop.len();
        for i in 0..n {
            let Some(g) = pop.best().map(|b| b.position.clone()) else {
                return;
            };
            let current = &pop.members()[i];
            let current_f = current.fitness.unwrap_or(f64::INFINITY);
            let mut candidate = current.position.clone();
            if ctx.uniform() < self.params.switch_probability {
                for d in 0..candidate.len() {
                    let l = levy_step(ctx.rng);
                    candidate[d] += l * (g[d] - candidate[d]);
                }
            } else {
                let a = ctx.rng.random_range(0..n);
                let b = ctx.rng.random_range(0..n);
                let eps = ctx.uniform();
                let (xa, xb) = (&pop.members()[a].position, &pop.members()[b].position);
                for d in 0..candidate.len() {
                    candidate[d] += eps * (xa[d] - xb[d]);
                }
            }
            let Some(f) = ctx.evaluate(&mut candidate) else {
                return;
            };
            if f <= current_f {
                let m = &mut pop.members_mut()[i];
                m.position = candidate;
                m.fitness = Some(f);
            }
        }
    }
}
