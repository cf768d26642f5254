//! Monte Carlo validation of the association formula.
//!
//! Each trial drops two independent Poisson point processes of stations in
//! a disk around a device at the origin. The device attaches to the station
//! with the largest `P r^-α`; within a tier that is always the nearest
//! station, so a trial only tracks the nearest point per tier.
//!
//! Trials are grouped in fixed batches of [`BATCH_TRIALS`]. Batch `b` draws
//! from `ChaCha8Rng::seed_from_u64(seed)` on stream `b`, so any partition
//! of batches across threads reproduces the sequential result bit for bit
//! as long as the integer tallies are summed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use core::f64::consts::PI;

use crate::association::{association_probability, AssociationInputs, TierDensities};
use crate::error::{Error, Result};

/// Trials per RNG stream.
pub const BATCH_TRIALS: u64 = 4096;

/// Description of the random number contract, for output metadata.
pub const RNG_ALGORITHM: &str =
    "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(seed), stream = batch index, 4096 trials/batch";

/// Minimum expected number of in-window stations that beat any station
/// outside the window.
pub const MIN_DOMINANT_STATIONS: f64 = 20.0;

/// Maximum consecutive empty-window redraws before a trial is abandoned.
const MAX_RESAMPLES: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub lambda_ma: f64,
    pub lambda_mi: f64,
    pub p_ma_w: f64,
    pub p_mi_w: f64,
    pub alpha_ma: f64,
    pub alpha_mi: f64,
    pub window_radius_m: f64,
    pub n_trials: u64,
    pub seed: u64,
}

impl OracleConfig {
    /// Both tiers share the path-loss exponent `alpha`.
    #[allow(clippy::too_many_arguments)]
    pub fn equal_exponent(
        lambda_ma: f64,
        lambda_mi: f64,
        p_ma_w: f64,
        p_mi_w: f64,
        alpha: f64,
        window_radius_m: f64,
        n_trials: u64,
        seed: u64,
    ) -> Result<Self> {
        let cfg = OracleConfig {
            lambda_ma,
            lambda_mi,
            p_ma_w,
            p_mi_w,
            alpha_ma: alpha,
            alpha_mi: alpha,
            window_radius_m,
            n_trials,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64, name: &'static str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, "must be positive and finite"))
            }
        };
        pos(self.lambda_ma, "lambda_ma")?;
        pos(self.lambda_mi, "lambda_mi")?;
        pos(self.p_ma_w, "p_ma_w")?;
        pos(self.p_mi_w, "p_mi_w")?;
        pos(self.window_radius_m, "window_radius_m")?;
        if !(self.alpha_ma.is_finite() && self.alpha_ma >= 2.0) {
            return Err(Error::invalid("alpha_ma", "must be >= 2"));
        }
        if !(self.alpha_mi.is_finite() && self.alpha_mi >= 2.0) {
            return Err(Error::invalid("alpha_mi", "must be >= 2"));
        }
        if self.n_trials == 0 {
            return Err(Error::invalid("n_trials", "must be >= 1"));
        }
        if self.dominant_stations() < MIN_DOMINANT_STATIONS {
            return Err(Error::invalid(
                "window_radius_m",
                "window too small: fewer than 20 expected stations dominate the window edge",
            ));
        }
        Ok(())
    }

    pub fn is_equal_exponent(&self) -> bool {
        self.alpha_ma == self.alpha_mi
    }

    /// Expected number of stations inside the window whose power exceeds
    /// the strongest power any station outside it could deliver.
    ///
    /// A trial can only differ from the infinite-plane outcome when none of
    /// these exist, which happens with probability `exp(-count)`.
    pub fn dominant_stations(&self) -> f64 {
        let r = self.window_radius_m;
        let edge_mi = self.p_mi_w * libm::pow(r, -self.alpha_mi);
        let edge_ma = self.p_ma_w * libm::pow(r, -self.alpha_ma);
        let edge = edge_mi.max(edge_ma);
        let reach_mi = libm::pow(self.p_mi_w / edge, 1.0 / self.alpha_mi).min(r);
        let reach_ma = libm::pow(self.p_ma_w / edge, 1.0 / self.alpha_ma).min(r);
        PI * (self.lambda_mi * reach_mi * reach_mi + self.lambda_ma * reach_ma * reach_ma)
    }

    /// The closed-form association probability for this configuration,
    /// using the macro exponent.
    pub fn closed_form(&self) -> Result<f64> {
        association_probability(
            &AssociationInputs {
                p_rx_macro_w: self.p_ma_w,
                p_rx_micro_w: self.p_mi_w,
                alpha_ma: self.alpha_ma,
            },
            &TierDensities::new(self.lambda_ma, self.lambda_mi, 0.0)?,
        )
    }

    pub fn batches(&self) -> u64 {
        self.n_trials.div_ceil(BATCH_TRIALS)
    }
}

/// Integer outcome counts; adding tallies is exact and order-insensitive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub trials: u64,
    pub micro_wins: u64,
    pub resamples: u64,
}

impl core::ops::Add for Tally {
    type Output = Tally;

    fn add(self, o: Tally) -> Tally {
        Tally {
            trials: self.trials + o.trials,
            micro_wins: self.micro_wins + o.micro_wins,
            resamples: self.resamples + o.resamples,
        }
    }
}

impl core::iter::Sum for Tally {
    fn sum<I: Iterator<Item = Tally>>(iter: I) -> Tally {
        iter.fold(Tally::default(), |a, b| a + b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub tally: Tally,
}

impl OracleEstimate {
    pub fn from_tally(tally: Tally) -> Self {
        let n = tally.trials as f64;
        let p = tally.micro_wins as f64 / n;
        OracleEstimate {
            estimate: p,
            std_error: libm::sqrt(p * (1.0 - p) / n),
            tally,
        }
    }

    /// `max(floor, 3 σ)`.
    pub fn tolerance(&self, floor: f64) -> f64 {
        floor.max(3.0 * self.std_error)
    }
}

/// Runs batch `batch` of `cfg` and returns its tally.
pub fn run_batch(cfg: &OracleConfig, batch: u64) -> Result<Tally> {
    let start = batch * BATCH_TRIALS;
    if start >= cfg.n_trials {
        return Ok(Tally::default());
    }
    let trials = BATCH_TRIALS.min(cfg.n_trials - start);
    let area = PI * cfg.window_radius_m * cfg.window_radius_m;
    let count_mi = Poisson::new(cfg.lambda_mi * area)
        .map_err(|_| Error::Domain("micro station count outside Poisson sampler range"))?;
    let count_ma = Poisson::new(cfg.lambda_ma * area)
        .map_err(|_| Error::Domain("macro station count outside Poisson sampler range"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(batch);

    let log_p_mi = libm::log(cfg.p_mi_w);
    let log_p_ma = libm::log(cfg.p_ma_w);
    let mut tally = Tally {
        trials,
        ..Tally::default()
    };
    for _ in 0..trials {
        let mut attempts = 0;
        let (near_mi, near_ma) = loop {
            let n_mi = count_mi.sample(&mut rng);
            let mi = nearest_squared_fraction(&mut rng, n_mi);
            let n_ma = count_ma.sample(&mut rng);
            let ma = nearest_squared_fraction(&mut rng, n_ma);
            if mi.is_some() || ma.is_some() {
                break (mi, ma);
            }
            attempts += 1;
            tally.resamples += 1;
            if attempts >= MAX_RESAMPLES {
                return Err(Error::Domain("window repeatedly empty of stations"));
            }
        };
        let micro = match (near_mi, near_ma) {
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(u_mi), Some(u_ma)) => {
                // r = R sqrt(u); compare ln P - α ln r.
                let ln_r_mi = libm::log(cfg.window_radius_m) + 0.5 * libm::log(u_mi);
                let ln_r_ma = libm::log(cfg.window_radius_m) + 0.5 * libm::log(u_ma);
                log_p_mi - cfg.alpha_mi * ln_r_mi > log_p_ma - cfg.alpha_ma * ln_r_ma
            }
            (None, None) => unreachable!(),
        };
        if micro {
            tally.micro_wins += 1;
        }
    }
    Ok(tally)
}

/// Drops `count` points uniformly in the window and returns `(r_min/R)²`.
fn nearest_squared_fraction(rng: &mut ChaCha8Rng, count: f64) -> Option<f64> {
    let n = count as u64;
    if n == 0 {
        return None;
    }
    // (r/R)² is uniform on [0, 1) for a uniform point in the disk.
    let mut best = f64::INFINITY;
    for _ in 0..n {
        let u: f64 = rng.random();
        if u < best {
            best = u;
        }
    }
    // Guard against an exact zero draw so log stays finite.
    Some(best.max(f64::MIN_POSITIVE))
}

/// Sequential run over all batches.
pub fn simulate_association(cfg: &OracleConfig) -> Result<OracleEstimate> {
    cfg.validate()?;
    let mut tally = Tally::default();
    for b in 0..cfg.batches() {
        tally = tally + run_batch(cfg, b)?;
    }
    Ok(OracleEstimate::from_tally(tally))
}
