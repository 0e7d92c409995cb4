//! WGS-84 geodesy and the line-of-sight pointing solution used for initial
//! acquisition.
//!
//! Azimuth is measured clockwise from true north in the observer's local
//! East-North-Up frame; elevation is measured above the local horizontal.
//! Altitudes are ellipsoidal (no geoid model).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// WGS-84 semi-major axis, metres.
pub const WGS84_A: f64 = 6_378_137.0;
/// WGS-84 flattening.
pub const WGS84_F: f64 = 1.0 / 298.257_223_563;
/// WGS-84 semi-minor axis, metres.
pub const WGS84_B: f64 = WGS84_A * (1.0 - WGS84_F);
/// First eccentricity squared.
pub const WGS84_E2: f64 = WGS84_F * (2.0 - WGS84_F);

/// Pointing solutions closer than this are rejected as coincident.
pub const MIN_SEPARATION_M: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodeticPosition {
    pub latitude_rad: f64,
    pub longitude_rad: f64,
    pub altitude_m: f64,
}

impl GeodeticPosition {
    pub fn new(latitude_rad: f64, longitude_rad: f64, altitude_m: f64) -> Result<Self> {
        let pos = Self {
            latitude_rad,
            longitude_rad,
            altitude_m,
        };
        pos.validate("position")?;
        Ok(pos)
    }

    pub fn from_degrees(latitude_deg: f64, longitude_deg: f64, altitude_m: f64) -> Result<Self> {
        Self::new(latitude_deg.to_radians(), longitude_deg.to_radians(), altitude_m)
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        use std::f64::consts::{FRAC_PI_2, PI};
        if !(self.latitude_rad.abs() <= FRAC_PI_2) {
            return Err(Error::validation(
                format!("{field}.latitude"),
                "latitude must lie in [-90, 90] degrees",
            ));
        }
        if !(self.longitude_rad.abs() <= PI) {
            return Err(Error::validation(
                format!("{field}.longitude"),
                "longitude must lie in [-180, 180] degrees",
            ));
        }
        if !self.altitude_m.is_finite() {
            return Err(Error::validation(
                format!("{field}.altitude_m"),
                "altitude must be finite",
            ));
        }
        Ok(())
    }
}

/// Earth-centered, Earth-fixed Cartesian vector in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EcefVector {
    pub x_m: f64,
    pub y_m: f64,
    pub z_m: f64,
}

impl EcefVector {
    pub fn norm(&self) -> f64 {
        (self.x_m * self.x_m + self.y_m * self.y_m + self.z_m * self.z_m).sqrt()
    }

    fn sub(&self, other: &EcefVector) -> EcefVector {
        EcefVector {
            x_m: self.x_m - other.x_m,
            y_m: self.y_m - other.y_m,
            z_m: self.z_m - other.z_m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PointingAngles {
    pub azimuth_rad: f64,
    pub elevation_rad: f64,
}

impl PointingAngles {
    pub fn new(azimuth_rad: f64, elevation_rad: f64) -> Self {
        Self {
            azimuth_rad,
            elevation_rad,
        }
    }

    /// Unit line-of-sight vector in (east, north, up).
    pub fn unit_vector(&self) -> [f64; 3] {
        let (sa, ca) = self.azimuth_rad.sin_cos();
        let (se, ce) = self.elevation_rad.sin_cos();
        [ce * sa, ce * ca, se]
    }
}

pub fn geodetic_to_ecef(pos: &GeodeticPosition) -> EcefVector {
    let (slat, clat) = pos.latitude_rad.sin_cos();
    let (slon, clon) = pos.longitude_rad.sin_cos();
    // prime vertical radius of curvature
    let n = WGS84_A / (1.0 - WGS84_E2 * slat * slat).sqrt();
    EcefVector {
        x_m: (n + pos.altitude_m) * clat * clon,
        y_m: (n + pos.altitude_m) * clat * slon,
        z_m: (n * (1.0 - WGS84_E2) + pos.altitude_m) * slat,
    }
}

/// Rotates an ECEF offset into the local East-North-Up frame at `origin`.
pub fn ecef_to_enu(offset: &EcefVector, origin: &GeodeticPosition) -> [f64; 3] {
    let (slat, clat) = origin.latitude_rad.sin_cos();
    let (slon, clon) = origin.longitude_rad.sin_cos();
    let (dx, dy, dz) = (offset.x_m, offset.y_m, offset.z_m);
    let east = -slon * dx + clon * dy;
    let north = -slat * clon * dx - slat * slon * dy + clat * dz;
    let up = clat * clon * dx + clat * slon * dy + slat * dz;
    [east, north, up]
}

/// Straight-line (chord) distance between two positions.
pub fn slant_range_m(a: &GeodeticPosition, b: &GeodeticPosition) -> f64 {
    geodetic_to_ecef(b).sub(&geodetic_to_ecef(a)).norm()
}

/// Azimuth and elevation of `target` as seen from `observer`.
///
/// A target straight overhead reports azimuth 0.
pub fn pointing_solution(observer: &GeodeticPosition, target: &GeodeticPosition) -> Result<PointingAngles> {
    let offset = geodetic_to_ecef(target).sub(&geodetic_to_ecef(observer));
    let separation_m = offset.norm();
    if separation_m <= MIN_SEPARATION_M {
        return Err(Error::CoincidentPoints { separation_m });
    }
    let [e, n, u] = ecef_to_enu(&offset, observer);
    let horizontal = e.hypot(n);
    // sub-nanoradian horizontal component counts as zenith/nadir
    let azimuth_rad = if horizontal <= separation_m * 1e-9 {
        0.0
    } else {
        e.atan2(n)
    };
    Ok(PointingAngles {
        azimuth_rad,
        elevation_rad: u.atan2(horizontal),
    })
}

/// Great-circle angle between two line-of-sight directions, in [0, π].
pub fn angular_separation(a: &PointingAngles, b: &PointingAngles) -> f64 {
    let u = a.unit_vector();
    let v = b.unit_vector();
    let cross = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    let sin = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    let cos = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    sin.atan2(cos)
}

/// Wraps an angle into (-π, π].
pub fn wrap_pi(angle: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut a = angle.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    a
}
