//! Received-power models for the direct micro-cell link and for the
//! cascaded base station → reflecting surface → device link.

use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::radio::{distance3, Carrier, Point3};

/// A transmitting base station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxNode {
    pub position: Point3,
    pub transmit_power_w: f64,
    pub gain_linear: f64,
    pub pathloss_exponent: f64,
}

impl TxNode {
    pub fn new(
        position: Point3,
        transmit_power_w: f64,
        gain_linear: f64,
        pathloss_exponent: f64,
    ) -> Result<Self> {
        let node = TxNode {
            position,
            transmit_power_w,
            gain_linear,
            pathloss_exponent,
        };
        node.validate()?;
        Ok(node)
    }

    pub fn validate(&self) -> Result<()> {
        self.position.validate("position")?;
        positive(self.transmit_power_w, "transmit_power_w")?;
        positive(self.gain_linear, "gain_linear")?;
        if !(self.pathloss_exponent.is_finite() && self.pathloss_exponent >= 1.0) {
            return Err(Error::invalid("pathloss_exponent", "must be >= 1"));
        }
        Ok(())
    }

    pub fn with_power(self, transmit_power_w: f64) -> Self {
        TxNode {
            transmit_power_w,
            ..self
        }
    }
}

/// A receiving device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RxDevice {
    pub position: Point3,
    pub gain_linear: f64,
}

impl RxDevice {
    pub fn new(position: Point3, gain_linear: f64) -> Result<Self> {
        let dev = RxDevice {
            position,
            gain_linear,
        };
        dev.validate()?;
        Ok(dev)
    }

    pub fn validate(&self) -> Result<()> {
        self.position.validate("position")?;
        positive(self.gain_linear, "gain_linear")
    }

    pub fn at(self, position: Point3) -> Self {
        RxDevice { position, ..self }
    }
}

/// How the scattering-element dimensions are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementSize {
    /// `d_x = d_y = λ/2` of whichever carrier is active.
    HalfWavelength,
    Fixed {
        len_m: f64,
        wid_m: f64,
    },
}

impl ElementSize {
    pub fn resolve(&self, carrier: Carrier) -> (f64, f64) {
        match *self {
            ElementSize::HalfWavelength => {
                let half = carrier.wavelength_m() / 2.0;
                (half, half)
            }
            ElementSize::Fixed { len_m, wid_m } => (len_m, wid_m),
        }
    }
}

/// A reflecting surface with `m_elements × n_elements` scattering elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrsPanel {
    pub position: Point3,
    pub m_elements: u32,
    pub n_elements: u32,
    pub element_len_m: f64,
    pub element_wid_m: f64,
    /// Amplitude reflection coefficient in `(0, 1]`.
    pub reflection_coeff: f64,
    /// Incidence angle (base station side), radians in `[0, π/2)`.
    pub theta_t_rad: f64,
    /// Departure angle (device side), radians in `[0, π/2)`.
    pub theta_r_rad: f64,
}

impl IrsPanel {
    pub fn validate(&self) -> Result<()> {
        self.position.validate("position")?;
        if self.m_elements == 0 {
            return Err(Error::invalid("m_elements", "must be >= 1"));
        }
        if self.n_elements == 0 {
            return Err(Error::invalid("n_elements", "must be >= 1"));
        }
        positive(self.element_len_m, "element_len_m")?;
        positive(self.element_wid_m, "element_wid_m")?;
        if !(self.reflection_coeff > 0.0 && self.reflection_coeff <= 1.0) {
            return Err(Error::invalid("reflection_coeff", "must lie in (0, 1]"));
        }
        angle(self.theta_t_rad, "theta_t")?;
        angle(self.theta_r_rad, "theta_r")
    }
}

fn positive(v: f64, name: &'static str) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, "must be positive and finite"))
    }
}

fn angle(v: f64, name: &'static str) -> Result<()> {
    if (0.0..FRAC_PI_2).contains(&v) {
        Ok(())
    } else {
        Err(Error::invalid(name, "must lie in [0, 90) degrees"))
    }
}

/// Direct-link received power `P_Tr λ² / (16 π² R^α)`.
///
/// Antenna gains do not enter this model; callers that want them multiply
/// the result by `G_T G_R`.
pub fn conventional_rx_power(tx: &TxNode, rx: &RxDevice, carrier: Carrier) -> Result<f64> {
    let r = distance3(tx.position, rx.position);
    if !(r > 0.0) {
        return Err(Error::DegenerateGeometry(
            "transmitter and receiver coincide",
        ));
    }
    let lambda = carrier.wavelength_m();
    let p = tx.transmit_power_w * lambda * lambda
        / (16.0 * PI * PI * libm::pow(r, tx.pathloss_exponent));
    finite(p)
}

/// Scattering gain of one element, `4π d_x d_y / λ²`.
pub fn scattering_gain(panel: &IrsPanel, carrier: Carrier) -> f64 {
    let lambda = carrier.wavelength_m();
    panel.element_len_m * panel.element_wid_m * 4.0 * PI / (lambda * lambda)
}

/// Received power over the cascaded link through `panel`.
pub fn irs_rx_power(tx: &TxNode, panel: &IrsPanel, rx: &RxDevice, carrier: Carrier) -> Result<f64> {
    let d1 = distance3(tx.position, panel.position);
    if !(d1 > 0.0) {
        return Err(Error::DegenerateGeometry(
            "transmitter and surface coincide",
        ));
    }
    let d2 = distance3(panel.position, rx.position);
    if !(d2 > 0.0) {
        return Err(Error::DegenerateGeometry("surface and receiver coincide"));
    }
    let lambda = carrier.wavelength_m();
    let m = f64::from(panel.m_elements);
    let n = f64::from(panel.n_elements);
    let a = panel.reflection_coeff;
    let numerator = panel.element_len_m
        * panel.element_wid_m
        * (m * m)
        * (n * n)
        * (lambda * lambda)
        * (a * a)
        * scattering_gain(panel, carrier)
        * tx.gain_linear
        * rx.gain_linear
        * libm::cos(panel.theta_t_rad)
        * libm::cos(panel.theta_r_rad);
    let path = d1 * d2;
    let p = numerator / (path * path * 64.0 * PI * PI * PI) * tx.transmit_power_w;
    finite(p)
}

fn finite(p: f64) -> Result<f64> {
    if p.is_finite() {
        Ok(p)
    } else {
        Err(Error::Domain("received power is not finite"))
    }
}
