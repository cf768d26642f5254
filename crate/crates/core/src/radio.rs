//! Geometry, carriers and decibel conversion shared by the link models.

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s (exact SI value).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// A position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn validate(&self, name: &'static str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid(name, "coordinates must be finite"))
        }
    }

    /// Same point moved by `(dx, dy)` in the horizontal plane.
    pub fn offset_xy(&self, dx: f64, dy: f64) -> Point3 {
        Point3::new(self.x + dx, self.y + dy, self.z)
    }
}

/// Euclidean distance between two points.
pub fn distance3(a: Point3, b: Point3) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dz = a.z - b.z;
    libm::sqrt(dx * dx + dy * dy + dz * dz)
}

/// Wavelength in meters of a carrier at `frequency_hz`.
pub fn wavelength(frequency_hz: f64) -> Result<f64> {
    if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
        return Err(Error::Domain(
            "carrier frequency must be positive and finite",
        ));
    }
    Ok(SPEED_OF_LIGHT / frequency_hz)
}

/// A carrier frequency together with its wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Carrier {
    frequency_hz: f64,
    wavelength_m: f64,
}

impl Carrier {
    pub fn from_hz(frequency_hz: f64) -> Result<Self> {
        let wavelength_m = wavelength(frequency_hz)?;
        Ok(Carrier {
            frequency_hz,
            wavelength_m,
        })
    }

    pub fn from_ghz(frequency_ghz: f64) -> Result<Self> {
        Self::from_hz(frequency_ghz * 1e9)
    }

    pub fn frequency_hz(&self) -> f64 {
        self.frequency_hz
    }

    pub fn wavelength_m(&self) -> f64 {
        self.wavelength_m
    }
}

/// A power ratio expressed in decibels.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Decibel(pub f64);

impl Decibel {
    pub fn to_linear(self) -> f64 {
        db_to_linear(self)
    }

    pub fn from_linear(ratio: f64) -> Decibel {
        Decibel(10.0 * libm::log10(ratio))
    }
}

/// `10^(dB/10)`.
pub fn db_to_linear(g: Decibel) -> f64 {
    libm::pow(10.0, g.0 / 10.0)
}

/// Watts to dBm.
pub fn watts_to_dbm(p_w: f64) -> f64 {
    10.0 * libm::log10(p_w) + 30.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn wavelength_identity_and_30ghz() {
        assert_eq!(wavelength(SPEED_OF_LIGHT).unwrap(), 1.0);
        // 299_792_458 / 30e9 by hand
        assert!(rel(wavelength(30e9).unwrap(), 9.993_081_933_333_333e-3) < 1e-12);
    }

    #[test]
    fn wavelength_rejects_bad_frequency() {
        for f in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(wavelength(f), Err(Error::Domain(_))));
            assert!(Carrier::from_hz(f).is_err());
        }
    }

    #[test]
    fn carrier_wavelength_consistent() {
        let c = Carrier::from_ghz(55.0).unwrap();
        assert_eq!(c.wavelength_m(), SPEED_OF_LIGHT / c.frequency_hz());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance3(Point3::ORIGIN, Point3::ORIGIN), 0.0);
        assert_eq!(
            distance3(Point3::new(0.0, 0.0, 5.0), Point3::new(0.0, 0.0, 1.5)),
            3.5
        );
        assert_eq!(distance3(Point3::new(3.0, 4.0, 0.0), Point3::ORIGIN), 5.0);
    }

    #[test]
    fn db_examples() {
        assert_eq!(db_to_linear(Decibel(0.0)), 1.0);
        assert!(rel(db_to_linear(Decibel(20.0)), 100.0) < 1e-15);
        assert!(rel(db_to_linear(Decibel(15.0)), 31.6228) < 1e-4);
        assert!((Decibel::from_linear(100.0).0 - 20.0).abs() < 1e-12);
        assert!((watts_to_dbm(1.0) - 30.0).abs() < 1e-12);
    }

    #[test]
    fn point_validation() {
        assert!(Point3::new(0.0, f64::NAN, 0.0).validate("p").is_err());
        assert!(Point3::new(1.0, 2.0, 3.0).validate("p").is_ok());
    }

    fn coord() -> impl Strategy<Value = f64> {
        -1e4..1e4f64
    }

    fn point() -> impl Strategy<Value = Point3> {
        (coord(), coord(), coord()).prop_map(|(x, y, z)| Point3::new(x, y, z))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn distance_symmetric(a in point(), b in point()) {
            prop_assert_eq!(distance3(a, b), distance3(b, a));
        }

        #[test]
        fn distance_triangle(a in point(), b in point(), c in point()) {
            let lhs = distance3(a, c);
            let rhs = distance3(a, b) + distance3(b, c);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-9);
        }

        #[test]
        fn wavelength_decreasing(f1 in 1e6..1e12f64, gap in 1e-9..1e3f64) {
            let f2 = f1 * (1.0 + gap);
            prop_assert!(wavelength(f1).unwrap() > wavelength(f2).unwrap());
        }

        #[test]
        fn db_sum_is_product(a in -60.0..60.0f64, b in -60.0..60.0f64) {
            let lhs = db_to_linear(Decibel(a + b));
            let rhs = db_to_linear(Decibel(a)) * db_to_linear(Decibel(b));
            prop_assert!(rel(lhs, rhs) < 1e-12);
        }
    }
}
