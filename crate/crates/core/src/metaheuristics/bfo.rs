use super::params::BfoParams;
use super::population::Population;
use super::StepContext;

/// Bacterial foraging. One call to `step` is one chemotactic step of the
/// whole colony; reproduction and elimination-dispersal fire when their
/// counters roll over.
#[derive(Clone, Debug)]
pub(crate) struct Bfo {
    pub params: BfoParams,
    health: Vec<f64>,
    chemotaxis: u32,
    reproduction: u32,
    dispersal: u32,
}

impl Bfo {
    pub fn new(params: BfoParams) -> Self {
        Self {
            params,
            health: Vec::new(),
            chemotaxis: 0,
            reproduction: 0,
            dispersal: 0,
        }
    }

    /// Cell-to-cell attraction and repulsion felt at `x`.
    fn swarming(&self, x: &[f64], pop: &Population) -> f64 {
        let p = &self.params;
        pop.members()
            .iter()
            .map(|m| {
                let d2: f64 = x.iter().zip(&m.position).map(|(a, b)| (a - b) * (a - b)).sum();
                -p.d_a * (-p.w_a * d2).exp() + p.h_r * (-p.w_r * d2).exp()
            })
            .sum()
    }

    pub fn step(&mut self, pop: &mut Population, ctx: &mut StepContext) {
        if self.health.len() != pop.len() {
            self.health = vec![0.0; pop.len()];
        }
        let p = self.params;
        for i in 0..pop.len() {
            let member = &pop.members()[i];
            let mut position = member.position.clone();
            let mut fitness = member.fitness.unwrap_or(f64::INFINITY);
            let mut j_last = fitness + self.swarming(&position, pop);

            let mut direction: Vec<f64> = (0..position.len()).map(|_| 2.0 * ctx.uniform() - 1.0).collect();
            let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                direction.iter_mut().for_each(|v| *v /= norm);
            }

            let mut candidate: Vec<f64> = position.iter().zip(&direction).map(|(x, d)| x + p.c_i * d).collect();
            let mut swims = 0;
            loop {
                let Some(f) = ctx.evaluate(&mut candidate) else {
                    self.commit(pop, i, position, fitness);
                    return;
                };
                let j = f + self.swarming(&candidate, pop);
                let improved = j < j_last;
                // The tumble is always taken; swims continue only while improving.
                if swims == 0 || improved {
                    position = candidate.clone();
                    fitness = f;
                }
                if !improved || swims >= p.n_s {
                    self.health[i] += j.min(j_last);
                    break;
                }
                j_last = j;
                swims += 1;
                candidate = position.iter().zip(&direction).map(|(x, d)| x + p.c_i * d).collect();
            }
            self.commit(pop, i, position, fitness);
        }

        self.chemotaxis += 1;
        if self.chemotaxis < p.n_c {
            return;
        }
        self.chemotaxis = 0;
        self.reproduce(pop);
        self.reproduction += 1;
        if self.reproduction < p.n_re {
            return;
        }
        self.reproduction = 0;
        self.disperse(pop, ctx);
        self.dispersal += 1;
        if self.dispersal >= p.ed_s {
            self.dispersal = 0;
        }
    }

    fn commit(&self, pop: &mut Population, i: usize, position: Vec<f64>, fitness: f64) {
        let m = &mut pop.members_mut()[i];
        if m.position != position {
            m.position = position;
            m.fitness = Some(fitness);
        }
    }

    /// The healthier half (lowest accumulated cost) replaces the other half.
    fn reproduce(&mut self, pop: &mut Population) {
        let n = pop.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.health[a].total_cmp(&self.health[b]).then(a.cmp(&b)));
        let half = n / 2;
        let members = pop.members().to_vec();
        for k in 0..half {
            pop.members_mut()[order[n - 1 - k]] = members[order[k]].clone();
        }
        self.health.iter_mut().for_each(|h| *h = 0.0);
    }

    fn disperse(&mut self, pop: &mut Population, ctx: &mut StepContext) {
        let (lo, hi) = (ctx.space.init_lower, ctx.space.init_upper);
        for i in 0..pop.len() {
            if ctx.uniform() < self.params.p_ed {
                let dim = pop.members()[i].position.len();
                let position = (0..dim).map(|_| lo + (hi - lo) * ctx.uniform()).collect();
                let m = &mut pop.members_mut()[i];
                m.position = position;
                m.fitness = None;
            }
        }
    }
}
