//! Distance sweeps of the association probability and density sweeps of
//! the micro-cell capacity.

use irs_hetnet::{
    association_probability, cell_capacity, mean_association, AssociationInputs, Carrier, Model,
    Point3,
};
use rayon::prelude::*;

use crate::error::{Result, SimError};
use crate::scenario::{Scenario, Separation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Device distance from the micro station, meters.
    DeviceDistance,
    /// Device density, per m².
    DeviceDensity,
}

impl SweepVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVariable::DeviceDistance => "device_distance",
            SweepVariable::DeviceDensity => "device_density",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "device_distance" => Some(SweepVariable::DeviceDistance),
            "device_density" => Some(SweepVariable::DeviceDensity),
            _ => None,
        }
    }
}

/// `steps` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    /// On failure returns the offending key and the reason.
    pub fn new(
        variable: SweepVariable,
        start: f64,
        stop: f64,
        steps: usize,
    ) -> std::result::Result<Self, (&'static str, &'static str)> {
        if !(start.is_finite() && start >= 0.0) {
            return Err(("start", "must be non-negative and finite"));
        }
        if !(stop.is_finite() && stop > start) {
            return Err(("stop", "must be finite and greater than start"));
        }
        if steps < 2 {
            return Err(("steps", "must be >= 2"));
        }
        Ok(SweepSpec {
            variable,
            start,
            stop,
            steps,
        })
    }

    pub fn value(&self, step: usize) -> f64 {
        if step + 1 == self.steps {
            return self.stop;
        }
        let t = step as f64 / (self.steps - 1) as f64;
        self.start + t * (self.stop - self.start)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(|i| self.value(i))
    }
}

/// One output line. `mean_assoc` and `capacity` are only set by capacity
/// sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub model: Model,
    pub carrier_hz: f64,
    pub x_variable: SweepVariable,
    pub x_value: f64,
    pub p_rx_micro_w: f64,
    pub p_rx_macro_w: f64,
    pub assoc_prob: f64,
    pub mean_assoc: Option<f64>,
    pub capacity: Option<f64>,
}

fn expect_variable(spec: &SweepSpec, want: SweepVariable) -> Result<()> {
    if spec.variable == want {
        Ok(())
    } else {
        Err(SimError::config(
            "sweep.variable",
            format!("expected a {} sweep", want.as_str()),
        ))
    }
}

/// Device position for a swept separation along the +x axis (towards the
/// reflecting surface).
pub(crate) fn device_position(
    s: &Scenario,
    distance: f64,
) -> std::result::Result<Point3, irs_hetnet::Error> {
    let g = &s.geometry;
    let ground = match s.separation {
        Separation::Horizontal => distance,
        Separation::Slant => {
            let dh = g.micro.position.z - g.device.position.z;
            let sq = distance * distance - dh * dh;
            if sq < 0.0 {
                return Err(irs_hetnet::Error::DegenerateGeometry(
                    "slant distance shorter than the height difference",
                ));
            }
            sq.sqrt()
        }
    };
    Ok(g.device_at(ground, 0.0))
}

/// Association probability versus device distance, one row per
/// `(carrier, step)`.
///
/// The macro interference is evaluated once per carrier at the micro-cell
/// center, so each curve isolates the micro link's range dependence.
pub fn run_association_sweep(
    s: &Scenario,
    spec: &SweepSpec,
    model: Model,
) -> Result<Vec<SweepRow>> {
    expect_variable(spec, SweepVariable::DeviceDistance)?;
    let g = &s.geometry;
    let per_carrier = |carrier: &Carrier| -> Result<Vec<SweepRow>> {
        let carrier = *carrier;
        let p_macro = g.macro_power(carrier, g.device_at(0.0, 0.0))?;
        spec.values()
            .enumerate()
            .map(|(step, x)| {
                let row = (|| {
                    let at = device_position(s, x)?;
                    let p_micro = g.micro_power(model, carrier, at)?;
                    let inputs = AssociationInputs {
                        p_rx_macro_w: p_macro,
                        p_rx_micro_w: p_micro,
                        alpha_ma: g.macro_bs.pathloss_exponent,
                    };
                    let assoc = association_probability(&inputs, &g.densities)?;
                    Ok(SweepRow {
                        model,
                        carrier_hz: carrier.frequency_hz(),
                        x_variable: spec.variable,
                        x_value: x,
                        p_rx_micro_w: p_micro,
                        p_rx_macro_w: p_macro,
                        assoc_prob: assoc,
                        mean_assoc: None,
                        capacity: None,
                    })
                })();
                row.map_err(|source| SimError::Step {
                    step,
                    x_value: x,
                    source,
                })
            })
            .collect()
    };
    let blocks = s
        .carriers
        .par_iter()
        .map(per_carrier)
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// Capacity versus device density, one row per `(carrier, step)`.
///
/// The mean association is computed once per carrier; the power and
/// association columns report the micro-cell center.
pub fn run_capacity_sweep(s: &Scenario, spec: &SweepSpec, model: Model) -> Result<Vec<SweepRow>> {
    expect_variable(spec, SweepVariable::DeviceDensity)?;
    let g = &s.geometry;
    let per_carrier = |carrier: &Carrier| -> Result<Vec<SweepRow>> {
        let carrier = *carrier;
        let mean = mean_association(g, model, carrier, s.quadrature)?;
        let center = g.inputs_at(model, carrier, g.device_at(0.0, 0.0))?;
        let assoc = association_probability(&center, &g.densities)?;
        spec.values()
            .enumerate()
            .map(|(step, lambda_u)| {
                let capacity = cell_capacity(&g.densities.with_device_density(lambda_u), mean)
                    .map_err(|source| SimError::Step {
                        step,
                        x_value: lambda_u,
                        source,
                    })?;
                Ok(SweepRow {
                    model,
                    carrier_hz: carrier.frequency_hz(),
                    x_variable: spec.variable,
                    x_value: lambda_u,
                    p_rx_micro_w: center.p_rx_micro_w,
                    p_rx_macro_w: center.p_rx_macro_w,
                    assoc_prob: assoc,
                    mean_assoc: Some(mean),
                    capacity: Some(capacity),
                })
            })
            .collect()
    };
    let blocks = s
        .carriers
        .par_iter()
        .map(per_carrier)
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}
