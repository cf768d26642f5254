//! Single-point link evaluation.

use std::fmt::Write as _;

use irs_hetnet::radio::watts_to_dbm;
use irs_hetnet::{association_probability, Carrier, Model};

use crate::error::{Result, SimError};
use crate::scenario::Scenario;
use crate::sweep::device_position;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkPoint {
    pub model: Model,
    pub carrier: Carrier,
    pub distance_m: f64,
    pub p_rx_micro_w: f64,
    pub p_rx_macro_w: f64,
    pub assoc_prob: f64,
}

/// Received powers and association for a device `distance_m` from the
/// micro station, with both stations evaluated at the device position.
pub fn evaluate(
    s: &Scenario,
    model: Model,
    carrier: Carrier,
    distance_m: f64,
) -> Result<LinkPoint> {
    if !(distance_m.is_finite() && distance_m >= 0.0) {
        return Err(SimError::config(
            "distance",
            "must be non-negative and finite",
        ));
    }
    let g = &s.geometry;
    let at = device_position(s, distance_m)?;
    let inputs = g.inputs_at(model, carrier, at)?;
    Ok(LinkPoint {
        model,
        carrier,
        distance_m,
        p_rx_micro_w: inputs.p_rx_micro_w,
        p_rx_macro_w: inputs.p_rx_macro_w,
        assoc_prob: association_probability(&inputs, &g.densities)?,
    })
}

pub fn render(points: &[LinkPoint]) -> String {
    let mut out = String::new();
    for p in points {
        writeln!(
            out,
            "{:<12} {:>7.2} GHz  d={:.3} m  micro {:.6e} W ({:.2} dBm)  macro {:.6e} W ({:.2} dBm)  assoc {:.6}",
            p.model.as_str(),
            p.carrier.frequency_hz() / 1e9,
            p.distance_m,
            p.p_rx_micro_w,
            watts_to_dbm(p.p_rx_micro_w),
            p.p_rx_macro_w,
            watts_to_dbm(p.p_rx_macro_w),
            p.assoc_prob,
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use irs_hetnet::{conventional_rx_power, Point3};

    #[test]
    fn conventional_point_matches_direct_formula() {
        let s = Scenario::default();
        let c = s.carriers[0];
        let p = evaluate(&s, Model::Conventional, c, 10.0).unwrap();
        let rx = s.geometry.device.at(Point3::new(10.0, 0.0, 1.5));
        let direct = conventional_rx_power(&s.geometry.micro, &rx, c).unwrap();
        assert_eq!(p.p_rx_micro_w, direct);
        let text = render(&[p]);
        assert!(text.contains("30.00 GHz") && text.contains("dBm"));
    }

    #[test]
    fn rejects_negative_distance() {
        let s = Scenario::default();
        assert!(evaluate(&s, Model::Irs, s.carriers[0], -1.0).is_err());
    }
}
