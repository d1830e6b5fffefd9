use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidConfig(what.to_string()))
    }
}

fn finite_nonneg(v: f64) -> bool {
    v.is_finite() && v >= 0.0
}

fn probability(v: f64) -> bool {
    (0.0..=1.0).contains(&v)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoParams {
    /// Inertia weight at the start of a phase.
    pub omega: f64,
    pub c1: f64,
    pub c2: f64,
    /// Decay the inertia linearly to `omega_min` over the phase budget.
    pub adjust_omega: bool,
    pub omega_min: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            omega: 1.0,
            c1: 0.5,
            c2: 1.0,
            adjust_omega: true,
            omega_min: 0.4,
        }
    }
}

impl PsoParams {
    pub fn validated(self) -> Result<Self> {
        check(self.omega.is_finite(), "pso.omega must be finite")?;
        check(finite_nonneg(self.c1), "pso.c1 must be >= 0")?;
        check(finite_nonneg(self.c2), "pso.c2 must be >= 0")?;
        check(self.omega_min.is_finite(), "pso.omega_min must be finite")?;
        Ok(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BatParams {
    /// Initial loudness A.
    pub loudness: f64,
    /// Loudness decay factor.
    pub alpha: f64,
    /// Pulse-rate growth constant.
    pub gamma: f64,
    pub min_f: f64,
    pub max_f: f64,
    /// Asymptotic pulse rate r0.
    pub pulse_rate: f64,
}

impl Default for BatParams {
    fn default() -> Self {
        Self {
            loudness: 10.0,
            alpha: 0.9,
            gamma: 0.9,
            min_f: 0.0,
            max_f: 1.0,
            pulse_rate: 0.5,
        }
    }
}

impl BatParams {
    pub fn validated(self) -> Result<Self> {
        check(finite_nonneg(self.loudness), "bat.loudness must be >= 0")?;
        check(probability(self.alpha), "bat.alpha must lie in [0, 1]")?;
        check(finite_nonneg(self.gamma), "bat.gamma must be >= 0")?;
        check(
            self.min_f.is_finite() && self.max_f.is_finite() && self.min_f <= self.max_f,
            "bat.min_f must not exceed bat.max_f",
        )?;
        check(probability(self.pulse_rate), "bat.pulse_rate must lie in [0, 1]")?;
        Ok(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BfoParams {
    /// Elimination-dispersal events.
    pub ed_s: u32,
    /// Chemotactic step size.
    pub c_i: f64,
    /// Dispersal probability.
    pub p_ed: f64,
    /// Chemotactic steps per reproduction.
    pub n_c: u32,
    /// Maximum swim length.
    pub n_s: u32,
    pub d_a: f64,
    pub w_a: f64,
    pub h_r: f64,
    pub w_r: f64,
    /// Reproduction steps per elimination-dispersal event.
    pub n_re: u32,
}

impl Default for BfoParams {
    fn default() -> Self {
        Self {
            ed_s: 2,
            c_i: 0.2,
            p_ed: 0.25,
            n_c: 4,
            n_s: 4,
            d_a: 0.1,
            w_a: 0.2,
            h_r: 0.1,
            w_r: 10.0,
            n_re: 2,
        }
    }
}

impl BfoParams {
    pub fn validated(self) -> Result<Self> {
        check(self.ed_s >= 1, "bfo.ed_s must be >= 1")?;
        check(self.n_c >= 1, "bfo.n_c must be >= 1")?;
        check(self.n_re >= 1, "bfo.n_re must be >= 1")?;
        check(finite_nonneg(self.c_i), "bfo.c_i must be >= 0")?;
        check(probability(self.p_ed), "bfo.p_ed must lie in [0, 1]")?;
        for (v, name) in [(self.d_a, "d_a"), (self.w_a, "w_a"), (self.h_r, "h_r"), (self.w_r, "w_r")] {
            check(finite_nonneg(v), &format!("bfo.{name} must be >= 0"))?;
        }
        Ok(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FpaParams {
    pub switch_probability: f64,
}

impl Default for FpaParams {
    fn default() -> Self {
        Self { switch_probability: 0.8 }
    }
}

impl FpaParams {
    pub fn validated(self) -> Result<Self> {
        check(probability(self.switch_probability), "fpa.switch_probability must lie in [0, 1]")?;
        Ok(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SaParams {
    /// Starting (and restart) temperature.
    pub temperature: f64,
    /// Cooling factor.
    pub alpha: f64,
    /// Temperature below which cooling restarts.
    pub s_t: f64,
    /// Proposal scale as a fraction of the bound width.
    pub d: f64,
}

impl Default for SaParams {
    fn default() -> Self {
        Self {
            temperature: 100.0,
            alpha: 0.9,
            s_t: 1e-8,
            d: 0.01,
        }
    }
}

impl SaParams {
    pub fn validated(self) -> Result<Self> {
        check(self.temperature.is_finite() && self.temperature > 0.0, "sa.temperature must be > 0")?;
        check(self.alpha > 0.0 && self.alpha < 1.0, "sa.alpha must lie in (0, 1)")?;
        check(self.s_t.is_finite() && self.s_t > 0.0, "sa.s_t must be > 0")?;
        check(finite_nonneg(self.d), "sa.d must be >= 0")?;
        Ok(self)
    }
}

/// Parameters of all five methods, as found in an experiment config.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MethodParams {
    pub pso: PsoParams,
    pub bat: BatParams,
    pub bfo: BfoParams,
    pub fpa: FpaParams,
    pub sa: SaParams,
}

impl MethodParams {
    pub fn validated(self) -> Result<Self> {
        Ok(Self {
            pso: self.pso.validated()?,
            bat: self.bat.validated()?,
            bfo: self.bfo.validated()?,
            fpa: self.fpa.validated()?,
            sa: self.sa.validated()?,
        })
    }
}
