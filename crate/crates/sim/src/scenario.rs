//! Scenario documents.
//!
//! A scenario is a TOML document whose sections mirror the network layout.
//! Every key is optional; omitted keys take the reference values listed in
//! `scenarios/table1.default`. Gains are given in dB, carriers in GHz and
//! angles in degrees; [`Scenario`] holds everything in SI units.

use std::f64::consts::PI;
use std::path::Path;

use irs_hetnet::{
    Carrier, CellGeometry, Decibel, DiskQuadrature, ElementSize, PanelLayout, Point3, RxDevice,
    TierDensities, TxNode,
};
use serde::Deserialize;

use crate::error::{in_section, Result, SimError};
use crate::sweep::{SweepSpec, SweepVariable};

/// Micro base stations per m²: 1000 stations in a 100 m radius disk.
pub fn reference_micro_density() -> f64 {
    1000.0 / (PI * 100.0 * 100.0)
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioFile {
    pub carriers_ghz: Option<Vec<f64>>,
    pub micro: MicroSection,
    #[serde(rename = "macro")]
    pub macro_bs: MacroSection,
    pub irs: IrsSection,
    pub device: DeviceSection,
    pub densities: DensitySection,
    pub cell: CellSection,
    pub model: ModelSection,
    pub quadrature: QuadratureSection,
    pub sweep: SweepSection,
    pub oracle: OracleSection,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MicroSection {
    pub height_m: f64,
    /// Transmit power of the direct-link micro station.
    pub tx_power_w: f64,
    pub gain_db: f64,
    pub pathloss_exponent: f64,
}

impl Default for MicroSection {
    fn default() -> Self {
        MicroSection {
            height_m: 5.0,
            tx_power_w: 10.0,
            gain_db: 20.0,
            pathloss_exponent: 2.5,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MacroSection {
    pub height_m: f64,
    pub tx_power_w: f64,
    pub gain_db: f64,
    pub pathloss_exponent: f64,
    /// Ground distance from the micro station, placed on the -x axis.
    pub horizontal_offset_m: Option<f64>,
    /// Carrier of the macro layer; omitted means "same as the micro carrier".
    pub carrier_ghz: Option<f64>,
}

impl Default for MacroSection {
    fn default() -> Self {
        MacroSection {
            height_m: 10.0,
            tx_power_w: 50.0,
            gain_db: 20.0,
            pathloss_exponent: 4.5,
            horizontal_offset_m: None,
            carrier_ghz: Some(DEFAULT_MACRO_CARRIER_GHZ),
        }
    }
}

pub const DEFAULT_MACRO_CARRIER_GHZ: f64 = 2.0;

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IrsSection {
    /// Ground distance from the micro station, placed on the +x axis.
    pub horizontal_offset_m: f64,
    pub height_m: f64,
    /// Micro station transmit power when serving through the surface.
    pub tx_power_w: f64,
    /// Shorthand for `m_elements = n_elements`.
    pub elements: Option<u32>,
    pub m_elements: Option<u32>,
    pub n_elements: Option<u32>,
    pub element_len_m: Option<f64>,
    pub element_wid_m: Option<f64>,
    pub reflection_coeff: f64,
    pub theta_t_deg: f64,
    pub theta_r_deg: f64,
}

impl Default for IrsSection {
    fn default() -> Self {
        IrsSection {
            horizontal_offset_m: 5.0,
            height_m: 6.0,
            tx_power_w: 1.0,
            elements: None,
            m_elements: None,
            n_elements: None,
            element_len_m: None,
            element_wid_m: None,
            reflection_coeff: 0.9,
            theta_t_deg: 45.0,
            theta_r_deg: 45.0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceSection {
    pub height_m: f64,
    pub gain_db: f64,
}

impl Default for DeviceSection {
    fn default() -> Self {
        DeviceSection {
            height_m: 1.5,
            gain_db: 15.0,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensitySection {
    pub micro_per_m2: Option<f64>,
    /// Defaults to a fifth of the micro density.
    pub macro_per_m2: Option<f64>,
    /// Defaults to 500 times the micro density.
    pub device_max_per_m2: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CellSection {
    /// Defaults to the radius of a 200 m² disk.
    pub micro_radius_m: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Separation {
    /// The swept distance is measured along the ground.
    #[default]
    Horizontal,
    /// The swept distance is the 3D distance to the micro station.
    Slant,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub apply_gains_to_conventional: bool,
    pub separation: Separation,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSection {
    pub radial: u32,
    pub angular: u32,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        let q = DiskQuadrature::default();
        QuadratureSection {
            radial: q.radial,
            angular: q.angular,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub distance: DistanceSweepSection,
    pub density: DensitySweepSection,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DistanceSweepSection {
    pub start_m: f64,
    pub stop_m: f64,
    pub steps: usize,
}

impl Default for DistanceSweepSection {
    fn default() -> Self {
        DistanceSweepSection {
            start_m: 1.0,
            stop_m: 50.0,
            steps: 100,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensitySweepSection {
    pub start_per_m2: f64,
    /// Defaults to `densities.device_max_per_m2`.
    pub stop_per_m2: Option<f64>,
    pub steps: usize,
}

impl Default for DensitySweepSection {
    fn default() -> Self {
        DensitySweepSection {
            start_per_m2: 0.0,
            stop_per_m2: None,
            steps: 100,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSection {
    pub window_radius_m: f64,
    pub trials: u64,
    pub seed: u64,
    /// Common path-loss exponent; defaults to the macro exponent.
    pub alpha: Option<f64>,
}

impl Default for OracleSection {
    fn default() -> Self {
        OracleSection {
            window_radius_m: 500.0,
            trials: 10_000,
            seed: 42,
            alpha: None,
        }
    }
}

/// Oracle run parameters carried by a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    pub window_radius_m: f64,
    pub trials: u64,
    pub seed: u64,
    pub alpha: f64,
}

/// A validated experiment description in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub carriers: Vec<Carrier>,
    /// Layout and radio parameters; `densities.lambda_u` is the maximum
    /// device density.
    pub geometry: CellGeometry,
    pub separation: Separation,
    pub quadrature: DiskQuadrature,
    pub distance_sweep: SweepSpec,
    pub density_sweep: SweepSpec,
    pub oracle: OracleSettings,
}

impl Default for Scenario {
    fn default() -> Self {
        ScenarioFile::default()
            .resolve()
            .expect("built-in defaults are valid")
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_named(text, "<scenario>")
    }

    fn parse_named(text: &str, name: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| SimError::Parse {
            path: name.to_string(),
            message: e.to_string(),
        })?;
        file.resolve()
    }

    pub fn micro_density(&self) -> f64 {
        self.geometry.densities.lambda_mi
    }

    /// Same scenario with the surface-assisted link at `tx_power_w`.
    pub fn with_irs_power(mut self, tx_power_w: f64) -> Result<Self> {
        positive("irs.tx_power_w", tx_power_w)?;
        self.geometry.irs_tx_power_w = tx_power_w;
        Ok(self)
    }

    /// Same scenario with `elements × elements` scattering elements.
    pub fn with_elements(mut self, elements: u32) -> Result<Self> {
        if elements == 0 {
            return Err(SimError::config("irs.elements", "must be >= 1"));
        }
        self.geometry.panel = self.geometry.panel.with_elements(elements);
        Ok(self)
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| SimError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Scenario::parse_named(&text, &path.display().to_string())
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(SimError::config(field, "must be positive and finite"))
    }
}

fn non_negative(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(SimError::config(field, "must be non-negative and finite"))
    }
}

fn angle_rad(field: &str, deg: f64) -> Result<f64> {
    if (0.0..90.0).contains(&deg) {
        Ok(deg.to_radians())
    } else {
        Err(SimError::config(field, "must lie in [0, 90) degrees"))
    }
}

fn gain(field: &str, db: f64) -> Result<f64> {
    if db.is_finite() {
        Ok(Decibel(db).to_linear())
    } else {
        Err(SimError::config(field, "must be finite"))
    }
}

fn exponent(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 1.0 {
        Ok(v)
    } else {
        Err(SimError::config(field, "must be >= 1"))
    }
}

fn carrier(field: &str, ghz: f64) -> Result<Carrier> {
    positive(field, ghz)?;
    Carrier::from_ghz(ghz).map_err(|e| SimError::config(field, e.to_string()))
}

impl ScenarioFile {
    /// Fills defaults, converts units and checks every invariant.
    pub fn resolve(self) -> Result<Scenario> {
        let carriers = match self.carriers_ghz {
            Some(list) => {
                if list.is_empty() {
                    return Err(SimError::config("carriers_ghz", "must not be empty"));
                }
                list.into_iter()
                    .map(|f| carrier("carriers_ghz", f))
                    .collect::<Result<Vec<_>>>()?
            }
            None => [30.0, 55.0, 90.0, 120.0]
                .into_iter()
                .map(|f| carrier("carriers_ghz", f))
                .collect::<Result<Vec<_>>>()?,
        };

        let m = &self.micro;
        non_negative("micro.height_m", m.height_m)?;
        positive("micro.tx_power_w", m.tx_power_w)?;
        let micro = TxNode::new(
            Point3::new(0.0, 0.0, m.height_m),
            m.tx_power_w,
            gain("micro.gain_db", m.gain_db)?,
            exponent("micro.pathloss_exponent", m.pathloss_exponent)?,
        )
        .map_err(|e| in_section("micro", e))?;

        let ma = &self.macro_bs;
        non_negative("macro.height_m", ma.height_m)?;
        positive("macro.tx_power_w", ma.tx_power_w)?;
        let macro_offset = ma
            .horizontal_offset_m
            .unwrap_or_else(|| (1000.0 / PI).sqrt());
        non_negative("macro.horizontal_offset_m", macro_offset)?;
        let macro_bs = TxNode::new(
            Point3::new(-macro_offset, 0.0, ma.height_m),
            ma.tx_power_w,
            gain("macro.gain_db", ma.gain_db)?,
            exponent("macro.pathloss_exponent", ma.pathloss_exponent)?,
        )
        .map_err(|e| in_section("macro", e))?;
        let macro_carrier = ma
            .carrier_ghz
            .map(|f| carrier("macro.carrier_ghz", f))
            .transpose()?;

        let s = &self.irs;
        non_negative("irs.horizontal_offset_m", s.horizontal_offset_m)?;
        non_negative("irs.height_m", s.height_m)?;
        positive("irs.tx_power_w", s.tx_power_w)?;
        let both = s.elements.unwrap_or(256);
        let m_elements = s.m_elements.unwrap_or(both);
        let n_elements = s.n_elements.unwrap_or(both);
        if m_elements == 0 {
            return Err(SimError::config("irs.m_elements", "must be >= 1"));
        }
        if n_elements == 0 {
            return Err(SimError::config("irs.n_elements", "must be >= 1"));
        }
        let element_size = match (s.element_len_m, s.element_wid_m) {
            (None, None) => ElementSize::HalfWavelength,
            (Some(len_m), Some(wid_m)) => {
                positive("irs.element_len_m", len_m)?;
                positive("irs.element_wid_m", wid_m)?;
                ElementSize::Fixed { len_m, wid_m }
            }
            (Some(_), None) => {
                return Err(SimError::config(
                    "irs.element_wid_m",
                    "required when element_len_m is set",
                ))
            }
            (None, Some(_)) => {
                return Err(SimError::config(
                    "irs.element_len_m",
                    "required when element_wid_m is set",
                ))
            }
        };
        if !(s.reflection_coeff > 0.0 && s.reflection_coeff <= 1.0) {
            return Err(SimError::config(
                "irs.reflection_coeff",
                "must lie in (0, 1]",
            ));
        }
        let panel = PanelLayout {
            position: Point3::new(s.horizontal_offset_m, 0.0, s.height_m),
            m_elements,
            n_elements,
            element_size,
            reflection_coeff: s.reflection_coeff,
            theta_t_rad: angle_rad("irs.theta_t_deg", s.theta_t_deg)?,
            theta_r_rad: angle_rad("irs.theta_r_deg", s.theta_r_deg)?,
        };

        non_negative("device.height_m", self.device.height_m)?;
        let device = RxDevice::new(
            Point3::new(0.0, 0.0, self.device.height_m),
            gain("device.gain_db", self.device.gain_db)?,
        )
        .map_err(|e| in_section("device", e))?;

        let d = &self.densities;
        let lambda_mi = d.micro_per_m2.unwrap_or_else(reference_micro_density);
        positive("densities.micro_per_m2", lambda_mi)?;
        let lambda_ma = d.macro_per_m2.unwrap_or(lambda_mi / 5.0);
        positive("densities.macro_per_m2", lambda_ma)?;
        let lambda_u = d.device_max_per_m2.unwrap_or(500.0 * lambda_mi);
        non_negative("densities.device_max_per_m2", lambda_u)?;
        let densities = TierDensities::new(lambda_ma, lambda_mi, lambda_u)
            .map_err(|e| in_section("densities", e))?;

        let cell_radius_m = self
            .cell
            .micro_radius_m
            .unwrap_or_else(|| (200.0 / PI).sqrt());
        positive("cell.micro_radius_m", cell_radius_m)?;

        let geometry = CellGeometry {
            micro,
            irs_tx_power_w: s.tx_power_w,
            panel,
            macro_bs,
            macro_carrier,
            device,
            cell_radius_m,
            densities,
            apply_gains_to_conventional: self.model.apply_gains_to_conventional,
        };
        geometry.validate().map_err(|e| in_section("irs", e))?;

        let quadrature = DiskQuadrature::new(self.quadrature.radial, self.quadrature.angular);
        if quadrature.radial == 0 {
            return Err(SimError::config("quadrature.radial", "must be >= 1"));
        }
        if quadrature.angular == 0 {
            return Err(SimError::config("quadrature.angular", "must be >= 1"));
        }

        let ds = &self.sweep.distance;
        let distance_sweep = SweepSpec::new(
            SweepVariable::DeviceDistance,
            ds.start_m,
            ds.stop_m,
            ds.steps,
        )
        .map_err(|(key, reason)| SimError::config(format!("sweep.distance.{key}"), reason))?;
        let dn = &self.sweep.density;
        let density_sweep = SweepSpec::new(
            SweepVariable::DeviceDensity,
            dn.start_per_m2,
            dn.stop_per_m2.unwrap_or(lambda_u),
            dn.steps,
        )
        .map_err(|(key, reason)| SimError::config(format!("sweep.density.{key}"), reason))?;

        let o = &self.oracle;
        positive("oracle.window_radius_m", o.window_radius_m)?;
        if o.trials == 0 {
            return Err(SimError::config("oracle.trials", "must be >= 1"));
        }
        let alpha = o.alpha.unwrap_or(macro_bs.pathloss_exponent);
        if !(alpha.is_finite() && alpha >= 2.0) {
            return Err(SimError::config("oracle.alpha", "must be >= 2"));
        }

        Ok(Scenario {
            carriers,
            geometry,
            separation: self.model.separation,
            quadrature,
            distance_sweep,
            density_sweep,
            oracle: OracleSettings {
                window_radius_m: o.window_radius_m,
                trials: o.trials,
                seed: o.seed,
                alpha,
            },
        })
    }
}
