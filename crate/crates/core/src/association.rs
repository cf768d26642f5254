//! Two-tier user association, its average over a micro cell, and the
//! resulting number of devices a micro base station serves.

use crate::error::{Error, Result};
use crate::linkbudget::{
    conventional_rx_power, irs_rx_power, ElementSize, IrsPanel, RxDevice, TxNode,
};
use crate::quadrature::DiskQuadrature;
use crate::radio::{Carrier, Point3};

/// Load factor of the capacity model.
pub const LOAD_FACTOR: f64 = 1.28;

/// Which micro-cell link model is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    Conventional,
    Irs,
}

impl Model {
    pub const ALL: [Model; 2] = [Model::Conventional, Model::Irs];

    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Conventional => "conventional",
            Model::Irs => "irs",
        }
    }
}

impl core::fmt::Display for Model {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conventional" | "conv" => Ok(Model::Conventional),
            "irs" => Ok(Model::Irs),
            _ => Err(Error::invalid("model", "expected `conventional` or `irs`")),
        }
    }
}

/// Spatial densities (per m²) of macro stations, micro stations and devices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TierDensities {
    pub lambda_ma: f64,
    pub lambda_mi: f64,
    pub lambda_u: f64,
}

impl TierDensities {
    pub fn new(lambda_ma: f64, lambda_mi: f64, lambda_u: f64) -> Result<Self> {
        let d = TierDensities {
            lambda_ma,
            lambda_mi,
            lambda_u,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_ma.is_finite() && self.lambda_ma > 0.0) {
            return Err(Error::invalid("lambda_ma", "must be positive and finite"));
        }
        if !(self.lambda_mi.is_finite() && self.lambda_mi > 0.0) {
            return Err(Error::invalid("lambda_mi", "must be positive and finite"));
        }
        if !(self.lambda_u.is_finite() && self.lambda_u >= 0.0) {
            return Err(Error::invalid(
                "lambda_u",
                "must be non-negative and finite",
            ));
        }
        Ok(())
    }

    pub fn with_device_density(self, lambda_u: f64) -> Self {
        TierDensities { lambda_u, ..self }
    }

    /// Largest capacity the model can produce at this device density.
    pub fn capacity_bound(&self) -> f64 {
        1.0 + LOAD_FACTOR * self.lambda_u / self.lambda_mi
    }
}

/// Received powers at one device position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociationInputs {
    pub p_rx_macro_w: f64,
    pub p_rx_micro_w: f64,
    pub alpha_ma: f64,
}

/// Probability that a device attaches to the micro tier:
/// `(1 + (λ_Ma/λ_Mi)(P_Ma/P_Mi)^(2/α_Ma))⁻¹`.
pub fn association_probability(inputs: &AssociationInputs, d: &TierDensities) -> Result<f64> {
    let AssociationInputs {
        p_rx_macro_w,
        p_rx_micro_w,
        alpha_ma,
    } = *inputs;
    if !(p_rx_macro_w.is_finite() && p_rx_macro_w > 0.0) {
        return Err(Error::Domain(
            "macro received power must be positive and finite",
        ));
    }
    if !(p_rx_micro_w.is_finite() && p_rx_micro_w > 0.0) {
        return Err(Error::Domain(
            "micro received power must be positive and finite",
        ));
    }
    if !(alpha_ma.is_finite() && alpha_ma >= 1.0) {
        return Err(Error::invalid("alpha_ma", "must be >= 1"));
    }
    let ratio = p_rx_macro_w / p_rx_micro_w;
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(Error::Domain("power ratio is not finite"));
    }
    let weighted = d.lambda_ma / d.lambda_mi * libm::pow(ratio, 2.0 / alpha_ma);
    Ok(1.0 / (1.0 + weighted))
}

/// Average number of devices served by a micro station,
/// `1 + 1.28 λ_u Ā / λ_Mi`.
pub fn cell_capacity(d: &TierDensities, mean_assoc: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mean_assoc) {
        return Err(Error::Domain("mean association must lie in [0, 1]"));
    }
    Ok(1.0 + LOAD_FACTOR * d.lambda_u * mean_assoc / d.lambda_mi)
}

/// Capacity of one micro cell for a given model, carrier and device density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult {
    pub mean_assoc: f64,
    pub capacity: f64,
    pub model: Model,
    pub carrier: Carrier,
    pub device_density: f64,
}

impl CapacityResult {
    pub fn new(d: &TierDensities, mean_assoc: f64, model: Model, carrier: Carrier) -> Result<Self> {
        Ok(CapacityResult {
            mean_assoc,
            capacity: cell_capacity(d, mean_assoc)?,
            model,
            carrier,
            device_density: d.lambda_u,
        })
    }
}

/// Reflecting surface placement independent of the carrier; element
/// dimensions are resolved per carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelLayout {
    pub position: Point3,
    pub m_elements: u32,
    pub n_elements: u32,
    pub element_size: ElementSize,
    pub reflection_coeff: f64,
    pub theta_t_rad: f64,
    pub theta_r_rad: f64,
}

impl PanelLayout {
    pub fn panel(&self, carrier: Carrier) -> IrsPanel {
        let (element_len_m, element_wid_m) = self.element_size.resolve(carrier);
        IrsPanel {
            position: self.position,
            m_elements: self.m_elements,
            n_elements: self.n_elements,
            element_len_m,
            element_wid_m,
            reflection_coeff: self.reflection_coeff,
            theta_t_rad: self.theta_t_rad,
            theta_r_rad: self.theta_r_rad,
        }
    }

    pub fn with_elements(self, elements: u32) -> Self {
        PanelLayout {
            m_elements: elements,
            n_elements: elements,
            ..self
        }
    }
}

/// Placement and radio parameters of one micro cell inside a macro cell.
///
/// The micro cell is the disk of `cell_radius_m` around the micro station's
/// ground position. Device positions are given as horizontal offsets from
/// that center at the device template's height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGeometry {
    /// Micro station for the direct link model.
    pub micro: TxNode,
    /// Micro station transmit power when it serves through the surface.
    pub irs_tx_power_w: f64,
    pub panel: PanelLayout,
    pub macro_bs: TxNode,
    /// Carrier of the macro tier. `None` uses the micro carrier.
    pub macro_carrier: Option<Carrier>,
    pub device: RxDevice,
    pub cell_radius_m: f64,
    pub densities: TierDensities,
    /// Multiply direct-link powers (micro and macro) by `G_T G_R`.
    pub apply_gains_to_conventional: bool,
}

impl CellGeometry {
    pub fn validate(&self) -> Result<()> {
        self.micro.validate()?;
        self.micro.with_power(self.irs_tx_power_w).validate()?;
        self.macro_bs.validate()?;
        self.device.validate()?;
        self.densities.validate()?;
        if !(self.cell_radius_m.is_finite() && self.cell_radius_m > 0.0) {
            return Err(Error::invalid(
                "cell_radius_m",
                "must be positive and finite",
            ));
        }
        if let ElementSize::Fixed { len_m, wid_m } = self.panel.element_size {
            if !(len_m.is_finite() && len_m > 0.0) {
                return Err(Error::invalid(
                    "element_len_m",
                    "must be positive and finite",
                ));
            }
            if !(wid_m.is_finite() && wid_m > 0.0) {
                return Err(Error::invalid(
                    "element_wid_m",
                    "must be positive and finite",
                ));
            }
        }
        let probe = Carrier::from_hz(crate::radio::SPEED_OF_LIGHT)?;
        self.panel.panel(probe).validate()
    }

    /// Device position at horizontal offset `(dx, dy)` from the cell center.
    pub fn device_at(&self, dx: f64, dy: f64) -> Point3 {
        Point3::new(
            self.micro.position.x + dx,
            self.micro.position.y + dy,
            self.device.position.z,
        )
    }

    pub fn irs_tx(&self) -> TxNode {
        self.micro.with_power(self.irs_tx_power_w)
    }

    fn direct_gain(&self, tx: &TxNode) -> f64 {
        if self.apply_gains_to_conventional {
            tx.gain_linear * self.device.gain_linear
        } else {
            1.0
        }
    }

    pub fn micro_power(&self, model: Model, carrier: Carrier, at: Point3) -> Result<f64> {
        let rx = self.device.at(at);
        match model {
            Model::Conventional => {
                Ok(conventional_rx_power(&self.micro, &rx, carrier)?
                    * self.direct_gain(&self.micro))
            }
            Model::Irs => irs_rx_power(&self.irs_tx(), &self.panel.panel(carrier), &rx, carrier),
        }
    }

    pub fn macro_power(&self, carrier: Carrier, at: Point3) -> Result<f64> {
        let carrier = self.macro_carrier.unwrap_or(carrier);
        let rx = self.device.at(at);
        Ok(conventional_rx_power(&self.macro_bs, &rx, carrier)? * self.direct_gain(&self.macro_bs))
    }

    pub fn inputs_at(
        &self,
        model: Model,
        carrier: Carrier,
        at: Point3,
    ) -> Result<AssociationInputs> {
        Ok(AssociationInputs {
            p_rx_macro_w: self.macro_power(carrier, at)?,
            p_rx_micro_w: self.micro_power(model, carrier, at)?,
            alpha_ma: self.macro_bs.pathloss_exponent,
        })
    }

    /// Association probability for a device at `at`.
    pub fn association_at(&self, model: Model, carrier: Carrier, at: Point3) -> Result<f64> {
        association_probability(&self.inputs_at(model, carrier, at)?, &self.densities)
    }
}

/// Area-uniform mean of the association probability over the micro cell.
///
/// Both received powers are recomputed at every quadrature node.
pub fn mean_association(
    geometry: &CellGeometry,
    model: Model,
    carrier: Carrier,
    quadrature: DiskQuadrature,
) -> Result<f64> {
    geometry.validate()?;
    quadrature.mean(geometry.cell_radius_m, |dx, dy| {
        geometry.association_at(model, carrier, geometry.device_at(dx, dy))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radio::{db_to_linear, Decibel};
    use core::f64::consts::{FRAC_PI_4, PI};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn reference_geometry() -> CellGeometry {
        let lambda_mi = 1000.0 / (PI * 100.0 * 100.0);
        CellGeometry {
            micro: TxNode::new(Point3::new(0.0, 0.0, 5.0), 10.0, 100.0, 2.5).unwrap(),
            irs_tx_power_w: 1.0,
            panel: PanelLayout {
                position: Point3::new(5.0, 0.0, 6.0),
                m_elements: 256,
                n_elements: 256,
                element_size: ElementSize::HalfWavelength,
                reflection_coeff: 0.9,
                theta_t_rad: FRAC_PI_4,
                theta_r_rad: FRAC_PI_4,
            },
            macro_bs: TxNode::new(
                Point3::new(-(1000.0 / PI).sqrt(), 0.0, 10.0),
                50.0,
                100.0,
                4.5,
            )
            .unwrap(),
            macro_carrier: Some(Carrier::from_ghz(2.0).unwrap()),
            device: RxDevice::new(Point3::new(0.0, 0.0, 1.5), db_to_linear(Decibel(15.0))).unwrap(),
            cell_radius_m: (200.0 / PI).sqrt(),
            densities: TierDensities::new(lambda_mi / 5.0, lambda_mi, 500.0 * lambda_mi).unwrap(),
            apply_gains_to_conventional: false,
        }
    }

    fn dens(ratio: f64) -> TierDensities {
        TierDensities::new(ratio, 1.0, 0.0).unwrap()
    }

    fn inputs(p_ma: f64, p_mi: f64, alpha: f64) -> AssociationInputs {
        AssociationInputs {
            p_rx_macro_w: p_ma,
            p_rx_micro_w: p_mi,
            alpha_ma: alpha,
        }
    }

    #[test]
    fn association_examples() {
        assert_eq!(
            association_probability(&inputs(1.0, 1.0, 4.5), &dens(1.0)).unwrap(),
            0.5
        );
        for alpha in [2.0, 2.5, 4.5] {
            let a = association_probability(&inputs(3e-7, 3e-7, alpha), &dens(0.2)).unwrap();
            assert!((a - 5.0 / 6.0).abs() < 1e-15);
        }
        let a = association_probability(&inputs(1024.0, 1.0, 4.5), &dens(0.2)).unwrap();
        assert!((a - 0.186_757_824_386_348_9).abs() < 1e-12, "{a}");
    }

    #[test]
    fn association_rejects_bad_powers() {
        for (ma, mi) in [
            (0.0, 1.0),
            (1.0, 0.0),
            (f64::NAN, 1.0),
            (1.0, f64::INFINITY),
        ] {
            assert!(matches!(
                association_probability(&inputs(ma, mi, 4.5), &dens(1.0)),
                Err(Error::Domain(_))
            ));
        }
        assert!(matches!(
            association_probability(&inputs(f64::MAX, f64::MIN_POSITIVE, 4.5), &dens(1.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn capacity_examples() {
        let lambda_mi = 1000.0 / (PI * 1e4);
        let d = TierDensities::new(lambda_mi / 5.0, lambda_mi, 500.0 * lambda_mi).unwrap();
        assert_eq!(cell_capacity(&d, 0.0).unwrap(), 1.0);
        assert!((cell_capacity(&d, 1.0).unwrap() - 641.0).abs() < 1e-9);
        assert!((cell_capacity(&d, 0.976_562_5).unwrap() - 626.0).abs() < 1e-9);
        assert!(cell_capacity(&d, 1.01).is_err());
        assert!(cell_capacity(&d, -0.01).is_err());
        assert!((d.capacity_bound() - 641.0).abs() < 1e-9);
    }

    #[test]
    fn capacity_result_recomputable() {
        let d = reference_geometry().densities;
        let c = Carrier::from_ghz(30.0).unwrap();
        let r = CapacityResult::new(&d, 0.4, Model::Irs, c).unwrap();
        assert_eq!(
            r.capacity,
            1.0 + LOAD_FACTOR * d.lambda_u * 0.4 / d.lambda_mi
        );
        assert_eq!(r.device_density, d.lambda_u);
    }

    #[test]
    fn model_parse() {
        assert_eq!("irs".parse::<Model>().unwrap(), Model::Irs);
        assert_eq!(
            "conventional".parse::<Model>().unwrap(),
            Model::Conventional
        );
        assert!("both".parse::<Model>().is_err());
    }

    #[test]
    fn mean_of_constant_association() {
        // Micro and macro co-located with equal exponent and power: the
        // power ratio, hence the association, is the same everywhere.
        let mut g = reference_geometry();
        g.macro_bs = g.micro.with_power(g.micro.transmit_power_w);
        g.macro_bs.pathloss_exponent = g.micro.pathloss_exponent;
        g.macro_carrier = None;
        let c = Carrier::from_ghz(30.0).unwrap();
        let m = mean_association(&g, Model::Conventional, c, DiskQuadrature::default()).unwrap();
        assert!((m - 5.0 / 6.0).abs() < 1e-12, "{m}");
    }

    #[test]
    fn single_node_mean() {
        let g = reference_geometry();
        let c = Carrier::from_ghz(55.0).unwrap();
        for model in Model::ALL {
            let m = mean_association(&g, model, c, DiskQuadrature::single()).unwrap();
            let at = g.device_at(g.cell_radius_m / 2f64.sqrt(), 0.0);
            assert_eq!(m, g.association_at(model, c, at).unwrap());
        }
    }

    #[test]
    fn quadrature_agrees_with_random_positions() {
        let g = reference_geometry();
        let mut rng = rand::rngs::SmallRng::seed_from_u64(7);
        let samples = 200_000;
        for ghz in [30.0, 120.0] {
            let c = Carrier::from_ghz(ghz).unwrap();
            for model in Model::ALL {
                let q = mean_association(&g, model, c, DiskQuadrature::default()).unwrap();
                let mut sum = 0.0;
                for _ in 0..samples {
                    let r = g.cell_radius_m * rng.random::<f64>().sqrt();
                    let phi = 2.0 * PI * rng.random::<f64>();
                    let at = g.device_at(r * phi.cos(), r * phi.sin());
                    sum += g.association_at(model, c, at).unwrap();
                }
                let mc = sum / f64::from(samples);
                assert!((q - mc).abs() < 2e-3, "{ghz} {model}: {q} vs {mc}");
            }
        }
    }

    #[test]
    fn irs_improves_association() {
        let g = reference_geometry();
        for ghz in [30.0, 55.0, 90.0, 120.0] {
            let c = Carrier::from_ghz(ghz).unwrap();
            let conv =
                mean_association(&g, Model::Conventional, c, DiskQuadrature::default()).unwrap();
            for (p, m) in [(0.5, 128), (1.0, 128), (1.0, 256), (2.0, 256)] {
                let mut gi = g;
                gi.irs_tx_power_w = p;
                gi.panel = gi.panel.with_elements(m);
                let irs = mean_association(&gi, Model::Irs, c, DiskQuadrature::default()).unwrap();
                assert!(irs >= conv, "{ghz} GHz {p} W {m}: {irs} < {conv}");
            }
        }
    }

    #[test]
    fn geometry_validation_names_field() {
        let mut g = reference_geometry();
        g.panel.reflection_coeff = 1.3;
        assert!(matches!(
            g.validate(),
            Err(Error::InvalidParameter {
                name: "reflection_coeff",
                ..
            })
        ));
        let mut g = reference_geometry();
        g.cell_radius_m = -1.0;
        assert!(g.validate().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn association_scale_invariant(
            p_ma in 1e-12..1e3f64, p_mi in 1e-12..1e3f64, k in 1e-6..1e6f64,
            ratio in 1e-3..1e3f64, alpha in 1.0..6.0f64,
        ) {
            let d = dens(ratio);
            let a = association_probability(&inputs(p_ma, p_mi, alpha), &d).unwrap();
            let b = association_probability(&inputs(p_ma * k, p_mi * k, alpha), &d).unwrap();
            prop_assert!(((a - b) / a).abs() < 1e-12);
            prop_assert!(a > 0.0 && a < 1.0);
        }

        #[test]
        fn association_increasing_in_micro_power(
            p_ma in 1e-9..1.0f64, p1 in 1e-9..1.0f64, gap in 1e-6..1e3f64, alpha in 2.0..5.0f64,
        ) {
            let p2 = p1 * (1.0 + gap);
            let d = dens(0.2);
            let a1 = association_probability(&inputs(p_ma, p1, alpha), &d).unwrap();
            let a2 = association_probability(&inputs(p_ma, p2, alpha), &d).unwrap();
            prop_assert!(a1 <= a2);
        }

        #[test]
        fn association_limits(p_ma in 1e-6..1.0f64, p_mi in 1e-6..1.0f64, alpha in 2.0..5.0f64) {
            let sparse_macro = TierDensities::new(1e-12, 1.0, 0.0).unwrap();
            let a = association_probability(&inputs(p_ma, p_mi, alpha), &sparse_macro).unwrap();
            prop_assert!(1.0 - a < 1e-5);
            let faint = association_probability(&inputs(p_ma, p_mi * 1e-12, alpha), &dens(1.0)).unwrap();
            let base = association_probability(&inputs(p_ma, p_mi, alpha), &dens(1.0)).unwrap();
            prop_assert!(faint < base && faint < 1e-2);
        }

        #[test]
        fn capacity_affine_and_bounded(a in 0.0..=1.0f64, mult in 0.0..1000.0f64) {
            let d = dens(0.2).with_device_density(mult);
            let c = cell_capacity(&d, a).unwrap();
            prop_assert!(c >= 1.0 && c <= d.capacity_bound() * (1.0 + 1e-15));
        }
    }
}
