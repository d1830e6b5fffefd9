use super::params::PsoParams;
use super::population::Population;
use super::StepContext;

#[derive(Clone, Debug)]
pub(crate) struct Pso {
    pub params: PsoParams,
    velocities: Vec<Vec<f64>>,
    personal: Vec<(Vec<f64>, f64)>,
}

impl Pso {
    pub fn new(params: PsoParams) -> Self {
        Self {
            params,
            velocities: Vec::new(),
            personal: Vec::new(),
        }
    }

    /// Current inertia weight for the given budget progress.
    pub fn inertia(&self, progress: f64) -> f64 {
        let p = &self.params;
        if p.adjust_omega {
            p.omega - (p.omega - p.omega_min) * progress.clamp(0.0, 1.0)
        } else {
            p.omega
        }
    }

    fn sync(&mut self, pop: &Population) {
        if self.velocities.len() == pop.len() && self.velocities.first().map(Vec::len) == Some(pop.dim()) {
            return;
        }
        self.velocities = vec![vec![0.0; pop.dim()]; pop.len()];
        self.personal = pop
            .members()
            .iter()
            .map(|m| (m.position.clone(), m.fitness.unwrap_or(f64::INFINITY)))
            .collect();
    }

    pub fn step(&mut self, pop: &mut Population, ctx: &mut StepContext) {
        self.sync(pop);
        let omega = self.inertia(ctx.eval.progress());
        let vmax = ctx.space.width();
        let (c1, c2) = (self.params.c1, self.params.c2);
        for i in 0..pop.len() {
            let g = self.global_best();
            let member = &pop.members()[i];
            let mut velocity = self.velocities[i].clone();
            let mut position = member.position.clone();
            for d in 0..position.len() {
                let r1 = ctx.uniform();
                let r2 = ctx.uniform();
                let v = omega * velocity[d]
                    + c1 * r1 * (self.personal[i].0[d] - position[d])
                    + c2 * r2 * (g[d] - position[d]);
                velocity[d] = v.clamp(-vmax, vmax);
                position[d] += velocity[d];
            }
            let Some(f) = ctx.evaluate(&mut position) else {
                return;
            };
            if f <= self.personal[i].1 {
                self.personal[i] = (position.clone(), f);
            }
            self.velocities[i] = velocity;
            let m = &mut pop.members_mut()[i];
            m.position = position;
            m.fitness = Some(f);
        }
    }

    fn global_best(&self) -> Vec<f64> {
        self.personal
            .iter()
            .fold(None::<&(Vec<f64>, f64)>, |acc, p| match acc {
                Some(a) if a.1 <= p.1 => Some(a),
                _ => Some(p),
            })
            .map(|p| p.0.clone())
            .unwrap_or_default()
    }
}
