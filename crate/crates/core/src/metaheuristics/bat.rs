use super::params::BatParams;
use super::population::Population;
use super::StepContext;

#[derive(Clone, Debug)]
pub(crate) struct Bat {
    pub params: BatParams,
    velocities: Vec<Vec<f64>>,
    loudness: Vec<f64>,
    pulse: Vec<f64>,
}

impl Bat {
    pub fn new(params: BatParams) -> Self {
        Self {
            params,
            velocities: Vec::new(),
            loudness: Vec::new(),
            pulse: Vec::new(),
        }
    }

    fn sync(&mut self, pop: &Population) {
        if self.velocities.len() == pop.len() && self.velocities.first().map(Vec::len) == Some(pop.dim()) {
            return;
        }
        self.velocities = vec![vec![0.0; pop.dim()]; pop.len()];
        self.loudness = vec![self.params.loudness; pop.len()];
        self.pulse = vec![0.0; pop.len()];
    }

    pub fn step(&mut self, pop: &mut Population, ctx: &mut StepContext) {
        self.sync(pop);
        let p = self.params;
        let vmax = ctx.space.width();
        let t = (ctx.generation + 1) as f64;
        for i in 0..pop.len() {
            let Some(g) = pop.best().map(|b| b.position.clone()) else {
                return;
            };
            let mean_loudness = self.loudness.iter().sum::<f64>() / self.loudness.len() as f64;
            let freq = p.min_f + (p.max_f - p.min_f) * ctx.uniform();
            let current = &pop.members()[i];
            let current_f = current.fitness.unwrap_or(f64::INFINITY);
            let mut candidate = current.position.clone();
            for d in 0..candidate.len() {
                let v = self.velocities[i][d] + (candidate[d] - g[d]) * freq;
                self.velocities[i][d] = v.clamp(-vmax, vmax);
                candidate[d] += self.velocities[i][d];
            }
            if ctx.uniform() > self.pulse[i] {
                for d in 0..candidate.len() {
                    candidate[d] = g[d] + (2.0 * ctx.uniform() - 1.0) * mean_loudness;
                }
            }
            let Some(f) = ctx.evaluate(&mut candidate) else {
                return;
            };
            if f <= current_f && ctx.uniform() < self.loudness[i] {
                let m = &mut pop.members_mut()[i];
                m.position = candidate;
                m.fitness = Some(f);
                self.loudness[i] *= p.alpha;
                self.pulse[i] = p.pulse_rate * (1.0 - (-p.gamma * t).exp());
            }
        }
    }
}
