//! The nine experiments and their shared key parsers.

mod analysis;
mod heat;
mod orlicz;
mod picard;

use std::collections::BTreeMap;

use anyhow::{bail, Result};
use expheat_core::picard::{NonlinearitySpec, Sign};
use expheat_core::GridSpec;
use serde_json::Value;

use crate::config::{Config, Keys};
use crate::report::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Norms,
    Embeddings,
    Semigroup,
    Local,
    Blowup,
    Decay,
    Nonexistence,
    Params,
    Catalogue,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::Norms,
        Experiment::Embeddings,
        Experiment::Semigroup,
        Experiment::Local,
        Experiment::Blowup,
        Experiment::Decay,
        Experiment::Nonexistence,
        Experiment::Params,
        Experiment::Catalogue,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Norms => "norms",
            Experiment::Embeddings => "embeddings",
            Experiment::Semigroup => "semigroup",
            Experiment::Local => "local",
            Experiment::Blowup => "blowup",
            Experiment::Decay => "decay",
            Experiment::Nonexistence => "nonexistence",
            Experiment::Params => "params",
            Experiment::Catalogue => "catalogue",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match Self::ALL.into_iter().find(|e| e.name() == name) {
            Some(e) => Ok(e),
            None => {
                let names: Vec<&str> = Self::ALL.iter().map(|e| e.name()).collect();
                bail!("unknown experiment `{name}`; valid names: {}", names.join(", "))
            }
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Experiment::Norms => "closed-form Luxemburg norms of the indicator and log-power profiles",
            Experiment::Embeddings => "Lebesgue embedding and exponential-moment bounds on a random corpus",
            Experiment::Semigroup => "heat semigroup accuracy, smoothing, Orlicz estimates, κ and the discontinuity probe",
            Experiment::Local => "local existence window, contraction and dt-halving agreement",
            Experiment::Blowup => "blow-up time and the logarithmic lower bound on the norm",
            Experiment::Decay => "small-data global run: t^σ decay and the initial layer",
            Experiment::Nonexistence => "divergence of the Duhamel integral for singular data above α₀",
            Experiment::Params => "exponent construction for the global argument, with the Γ-growth bound",
            Experiment::Catalogue => "exp L^p and exp L^p_0 membership of the profile catalogue",
        }
    }

    /// Mathematical statement the experiment exercises.
    pub fn claim(self) -> &'static str {
        match self {
            Experiment::Norms => "‖1_E‖ = (log(1+1/|E|))^{-1/p}; ‖(-log|x|)^{1/2}‖_{exp L^2(-1,1)} = √3",
            Experiment::Embeddings => "‖u‖_q ≤ Γ(q/p+1)^{1/q}‖u‖_{exp L^p}; ‖e^{λ|u|^p} - 1‖_q ≤ (λqK^p)^{1/q} when λqK^p ≤ 1",
            Experiment::Semigroup => "e^{tΔ} is an exp L^p contraction with L^q → exp L^p smoothing",
            Experiment::Local => "local mild solution for data in exp L^p_0",
            Experiment::Blowup => "λ‖u(t)‖^p_{L^p∩L^∞} ≥ C₁|log(T_max - t)| + C₂",
            Experiment::Decay => "‖u(t)‖_a ≤ C t^{-σ} for small data; u(t) - e^{tΔ}u₀ → 0 in exp L^p",
            Experiment::Nonexistence => "no local solution from α(-log|x|)^{1/p} for α > α₀",
            Experiment::Params => "θ_k, ρ_k, q, r exist with the required interpolation identities",
            Experiment::Catalogue => "log-power ∈ exp L^p \\ exp L^p_0; log-log-power ∈ exp L^p_0",
        }
    }

    /// Parses the experiment's keys and runs it.
    pub fn run(self, cfg: &Config) -> Result<(Outcome, BTreeMap<String, Value>)> {
        let mut keys = cfg.keys();
        let job: Box<dyn FnOnce() -> Result<Outcome>> = match self {
            Experiment::Norms => orlicz::norms(&mut keys)?,
            Experiment::Embeddings => orlicz::embeddings(&mut keys, cfg.seed)?,
            Experiment::Catalogue => orlicz::catalogue(&mut keys)?,
            Experiment::Semigroup => heat::semigroup(&mut keys, cfg.seed)?,
            Experiment::Local => picard::local(&mut keys)?,
            Experiment::Blowup => picard::blowup(&mut keys)?,
            Experiment::Decay => picard::decay(&mut keys)?,
            Experiment::Nonexistence => analysis::nonexistence(&mut keys)?,
            Experiment::Params => analysis::params(&mut keys, cfg.seed)?,
        };
        // reject typos before any expensive work
        let used = keys.finish()?;
        Ok((job()?, used))
    }
}

fn full_line(keys: &mut Keys, half_width: f64, n: usize) -> Result<GridSpec> {
    let l = keys.positive("grid.L", half_width)?;
    let n = keys.usize("grid.n", n)?;
    Ok(GridSpec::full(1, l, n)?)
}

fn nonlinearity(keys: &mut Keys, m: f64, p: f64, lambda: f64, sign: &str) -> Result<NonlinearitySpec> {
    let m = keys.f64("f.m", m)?;
    let p = keys.f64("f.p", p)?;
    let lambda = keys.f64("f.lambda", lambda)?;
    let sign = match keys.string("f.sign", sign)?.as_str() {
        "+" | "plus" => Sign::Plus,
        "-" | "minus" => Sign::Minus,
        "0" | "off" => Sign::Off,
        other => bail!("key `f.sign`: expected one of +, -, off; got `{other}`"),
    };
    let c_lip = keys.positive("f.c_lip", 1.0)?;
    Ok(NonlinearitySpec::new(m, p, lambda, sign, c_lip)?)
}
