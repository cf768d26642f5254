//! Parallel driver for the Monte Carlo association oracle.

use std::fmt::Write as _;

use irs_hetnet::oracle::{run_batch, RNG_ALGORITHM};
use irs_hetnet::{OracleConfig, OracleEstimate, Tally};
use rayon::prelude::*;

use crate::error::Result;
use crate::scenario::Scenario;

/// Runs all batches of `cfg` on the rayon pool. The result does not depend
/// on the number of threads.
pub fn run_oracle(cfg: &OracleConfig) -> Result<OracleEstimate> {
    cfg.validate()?;
    let tallies = (0..cfg.batches())
        .into_par_iter()
        .map(|b| run_batch(cfg, b))
        .collect::<std::result::Result<Vec<Tally>, _>>()?;
    Ok(OracleEstimate::from_tally(tallies.into_iter().sum()))
}

/// Equal-exponent oracle configuration for the scenario's tiers: station
/// densities and transmit powers of the macro and direct-link micro layers.
pub fn oracle_config(s: &Scenario, trials: u64, seed: u64) -> Result<OracleConfig> {
    let g = &s.geometry;
    Ok(OracleConfig::equal_exponent(
        g.densities.lambda_ma,
        g.densities.lambda_mi,
        g.macro_bs.transmit_power_w,
        g.micro.transmit_power_w,
        s.oracle.alpha,
        s.oracle.window_radius_m,
        trials,
        seed,
    )?)
}

/// Same tiers with each layer's own path-loss exponent.
pub fn model_gap_config(s: &Scenario, trials: u64, seed: u64) -> Result<OracleConfig> {
    let g = &s.geometry;
    let cfg = OracleConfig {
        alpha_ma: g.macro_bs.pathloss_exponent,
        alpha_mi: g.micro.pathloss_exponent,
        ..oracle_config(s, trials, seed)?
    };
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationRun {
    pub config: OracleConfig,
    pub estimate: OracleEstimate,
    pub closed_form: f64,
}

impl ValidationRun {
    pub fn new(config: OracleConfig) -> Result<Self> {
        Ok(ValidationRun {
            estimate: run_oracle(&config)?,
            closed_form: config.closed_form()?,
            config,
        })
    }

    pub fn discrepancy(&self) -> f64 {
        self.estimate.estimate - self.closed_form
    }

    /// Only equal-exponent runs are judged; the others are measurements.
    pub fn agrees(&self) -> Option<bool> {
        self.config
            .is_equal_exponent()
            .then(|| self.discrepancy().abs() <= self.estimate.tolerance(0.01))
    }
}

pub fn render_report(runs: &[ValidationRun]) -> String {
    let mut out = String::new();
    writeln!(out, "rng: {RNG_ALGORITHM}").unwrap();
    for run in runs {
        let c = &run.config;
        let kind = if c.is_equal_exponent() {
            "equal-exponent"
        } else {
            "model-gap"
        };
        writeln!(out, "[{kind}]").unwrap();
        writeln!(
            out,
            "  lambda_ma={:e} lambda_mi={:e} p_ma_w={} p_mi_w={} alpha_ma={} alpha_mi={}",
            c.lambda_ma, c.lambda_mi, c.p_ma_w, c.p_mi_w, c.alpha_ma, c.alpha_mi
        )
        .unwrap();
        writeln!(
            out,
            "  window_radius_m={} trials={} seed={}",
            c.window_radius_m, c.n_trials, c.seed
        )
        .unwrap();
        writeln!(
            out,
            "  estimate={:.6} std_error={:.6} closed_form={:.6} discrepancy={:+.6} resamples={}",
            run.estimate.estimate,
            run.estimate.std_error,
            run.closed_form,
            run.discrepancy(),
            run.estimate.tally.resamples
        )
        .unwrap();
        match run.agrees() {
            Some(true) => writeln!(out, "  verdict: agree").unwrap(),
            Some(false) => writeln!(out, "  verdict: DISAGREE").unwrap(),
            None => writeln!(out, "  verdict: not asserted").unwrap(),
        }
    }
    out
}
