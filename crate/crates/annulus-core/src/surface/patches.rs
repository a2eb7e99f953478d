//! Closed-form patches with exact jets. All are conformal.

use super::{Jet2, Orientation, Patch};
use crate::Vec3;

/// `X = a (cosh u cos v, cosh u sin v, u) + (0, 0, z_shift)`, normal pointing
/// away from the axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Catenoid {
    pub scale: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub z_shift: f64,
}

impl Catenoid {
    pub fn new(scale: f64, u_min: f64, u_max: f64) -> Self {
        Self {
            scale,
            u_min,
            u_max,
            z_shift: 0.0,
        }
    }
}

impl Patch for Catenoid {
    fn jet(&self, u: f64, v: f64) -> Jet2 {
        let a = self.scale;
        let (ch, sh) = (libm::cosh(u), libm::sinh(u));
        let (sv, cv) = libm::sincos(v);
        Jet2 {
            position: Vec3::new(a * ch * cv, a * ch * sv, a * u + self.z_shift),
            du: Vec3::new(a * sh * cv, a * sh * sv, a),
            dv: Vec3::new(-a * ch * sv, a * ch * cv, 0.0),
            duu: Vec3::new(a * ch * cv, a * ch * sv, 0.0),
            duv: Vec3::new(-a * sh * sv, a * sh * cv, 0.0),
            dvv: Vec3::new(-a * ch * cv, -a * ch * sv, 0.0),
        }
    }

    fn u_range(&self) -> (f64, f64) {
        (self.u_min, self.u_max)
    }

    fn conformal(&self) -> bool {
        true
    }

    fn orientation(&self) -> Orientation {
        Orientation::Flipped
    }
}

/// Mercator-type conformal sphere
/// `X = c + R (sech u cos v, sech u sin v, tanh u)`, outward normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalSphere {
    pub center: Vec3,
    pub radius: f64,
    pub u_min: f64,
    pub u_max: f64,
}

impl ConformalSphere {
    pub fn unit(u_min: f64, u_max: f64) -> Self {
        Self {
            center: Vec3::ZERO,
            radius: 1.0,
            u_min,
            u_max,
        }
    }
}

impl Patch for ConformalSphere {
    fn jet(&self, u: f64, v: f64) -> Jet2 {
        let r = self.radius;
        let s = 1.0 / libm::cosh(u);
        let t = libm::tanh(u);
        let (sv, cv) = libm::sincos(v);
        let a = s * t * t - s * s * s;
        Jet2 {
            position: self.center + Vec3::new(r * s * cv, r * s * sv, r * t),
            du: Vec3::new(-r * s * t * cv, -r * s * t * sv, r * s * s),
            dv: Vec3::new(-r * s * sv, r * s * cv, 0.0),
            duu: Vec3::new(r * a * cv, r * a * sv, -2.0 * r * s * s * t),
            duv: Vec3::new(r * s * t * sv, -r * s * t * cv, 0.0),
            dvv: Vec3::new(-r * s * cv, -r * s * sv, 0.0),
        }
    }

    fn u_range(&self) -> (f64, f64) {
        (self.u_min, self.u_max)
    }

    fn conformal(&self) -> bool {
        true
    }

    fn orientation(&self) -> Orientation {
        Orientation::Flipped
    }
}

/// `X = (r cos v, r sin v, r u)`, normal pointing away from the axis unless
/// `inward` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cylinder {
    pub radius: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub inward: bool,
}

impl Cylinder {
    pub fn new(radius: f64, u_min: f64, u_max: f64) -> Self {
        Self {
            radius,
            u_min,
            u_max,
            inward: false,
        }
    }
}

impl Patch for Cylinder {
    fn jet(&self, u: f64, v: f64) -> Jet2 {
        let r = self.radius;
        let (sv, cv) = libm::sincos(v);
        Jet2 {
            position: Vec3::new(r * cv, r * sv, r * u),
            du: Vec3::new(0.0, 0.0, r),
            dv: Vec3::new(-r * sv, r * cv, 0.0),
            duu: Vec3::ZERO,
            duv: Vec3::ZERO,
            dvv: Vec3::new(-r * cv, -r * sv, 0.0),
        }
    }

    fn u_range(&self) -> (f64, f64) {
        (self.u_min, self.u_max)
    }

    fn conformal(&self) -> bool {
        true
    }

    fn orientation(&self) -> Orientation {
        if self.inward {
            Orientation::Standard
        } else {
            Orientation::Flipped
        }
    }
}

/// The plane `z = 0` in log-polar coordinates `X = (e^u cos v, e^u sin v, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPlane {
    pub u_min: f64,
    pub u_max: f64,
}

impl Patch for PolarPlane {
    fn jet(&self, u: f64, v: f64) -> Jet2 {
        let r = libm::exp(u);
        let (sv, cv) = libm::sincos(v);
        let radial = Vec3::new(r * cv, r * sv, 0.0);
        let angular = Vec3::new(-r * sv, r * cv, 0.0);
        Jet2 {
            position: radial,
            du: radial,
            dv: angular,
            duu: radial,
            duv: angular,
            dvv: -radial,
        }
    }

    fn u_range(&self) -> (f64, f64) {
        (self.u_min, self.u_max)
    }

    fn conformal(&self) -> bool {
        true
    }

    fn orientation(&self) -> Orientation {
        Orientation::Standard
    }
}
