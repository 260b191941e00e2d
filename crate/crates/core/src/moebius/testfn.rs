//! Cap and annulus test functions built from the dilations `xi_{p,t}`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::map::{geodesic_distance, xi_height, SpherePoint};
use crate::error::{Error, Result};

/// Geodesic annulus `{ r <= d(x, center) < R }`; `r = 0` is a ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub center: SpherePoint,
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub fn new(center: SpherePoint, inner: f64, outer: f64) -> Result<Self> {
        if !(inner >= 0.0 && inner < outer && outer < std::f64::consts::PI) {
            return Err(Error::InvalidParameter(format!(
                "annulus radii must satisfy 0 <= r < R < pi, got r = {inner}, R = {outer}"
            )));
        }
        Ok(Annulus { center, inner, outer })
    }

    pub fn contains(&self, q: &[f64]) -> bool {
        let d = geodesic_distance(self.center.coords(), q);
        d >= self.inner && d < self.outer
    }

    /// Membership in the doubled annulus `{ r/2 <= d < 2R }`.
    pub fn doubled_contains(&self, q: &[f64]) -> bool {
        let d = geodesic_distance(self.center.coords(), q);
        d >= 0.5 * self.inner && d < 2.0 * self.outer
    }
}

/// Dilation `t = tan R` sending `B_{2R}(p)` onto the hemisphere around `p`,
/// and the stereographic radius `rho = 1 + 1/cos R` of the image of
/// `partial B_R(p)`.
pub fn cap_parameters(radius: f64) -> Result<(f64, f64)> {
    if !(radius > 0.0 && radius < FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!(
            "cap radius must lie in (0, pi/2), got {radius}"
        )));
    }
    Ok((radius.tan(), 1.0 + 1.0 / radius.cos()))
}

/// Dilation sending `partial B_{r/2}(p)` onto the equator around `p`.
pub fn bar_parameter(inner: f64) -> Result<f64> {
    if !(inner > 0.0 && inner < std::f64::consts::PI) {
        return Err(Error::InvalidParameter(format!(
            "inner radius must lie in (0, pi), got {inner}"
        )));
    }
    Ok((inner / 4.0).tan())
}

/// `phi_{R,p}`: height above the equator after dilating `B_{2R}(p)` onto a
/// hemisphere; supported in `B_{2R}(p)`, at least 3/5 on `B_R(p)`.
#[derive(Debug, Clone)]
pub struct CapFunction {
    pole: Vec<f64>,
    radius: f64,
    t: f64,
}

impl CapFunction {
    pub fn new(radius: f64, pole: &SpherePoint) -> Result<Self> {
        let (t, _) = cap_parameters(radius)?;
        Ok(CapFunction { pole: pole.coords().to_vec(), radius, t })
    }

    pub fn eval(&self, q: &[f64]) -> f64 {
        if geodesic_distance(&self.pole, q) >= 2.0 * self.radius {
            return 0.0;
        }
        xi_height(&self.pole, self.t, q).max(0.0)
    }
}

/// `bar phi_{r,p}`: vanishes on `B_{r/2}(p)`, at least 3/5 outside `B_r(p)`.
#[derive(Debug, Clone)]
pub struct BarFunction {
    pole: Vec<f64>,
    inner: f64,
    tau: f64,
}

impl BarFunction {
    pub fn new(inner: f64, pole: &SpherePoint) -> Result<Self> {
        Ok(BarFunction { pole: pole.coords().to_vec(), inner, tau: bar_parameter(inner)? })
    }

    pub fn eval(&self, q: &[f64]) -> f64 {
        if geodesic_distance(&self.pole, q) < 0.5 * self.inner {
            return 0.0;
        }
        (-xi_height(&self.pole, self.tau, q)).max(0.0)
    }
}

/// `u_A = phi_{R,a} * bar phi_{r,a}`, with the bar factor dropped for balls.
/// Supported in the doubled annulus and at least 9/25 on `A`.
#[derive(Debug, Clone)]
pub struct AnnulusFunction {
    cap: CapFunction,
    bar: Option<BarFunction>,
}

impl AnnulusFunction {
    /// Requires `R < pi/2`.
    pub fn new(a: &Annulus) -> Result<Self> {
        let cap = CapFunction::new(a.outer, &a.center)?;
        let bar = if a.inner > 0.0 { Some(BarFunction::new(a.inner, &a.center)?) } else { None };
        Ok(AnnulusFunction { cap, bar })
    }

    pub fn eval(&self, q: &[f64]) -> f64 {
        let c = self.cap.eval(q);
        if c == 0.0 {
            return 0.0;
        }
        match &self.bar {
            Some(b) => c * b.eval(q),
            None => c,
        }
    }
}

pub fn phi_cap(radius: f64, p: &SpherePoint, q: &[f64]) -> Result<f64> {
    Ok(CapFunction::new(radius, p)?.eval(q))
}

pub fn bar_phi(inner: f64, p: &SpherePoint, q: &[f64]) -> Result<f64> {
    Ok(BarFunction::new(inner, p)?.eval(q))
}

pub fn u_annulus(a: &Annulus, q: &[f64]) -> Result<f64> {
    Ok(AnnulusFunction::new(a)?.eval(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn at_angle(theta: f64) -> [f64; 3] {
        [theta.sin(), 0.0, theta.cos()]
    }

    #[test]
    fn cap_parameter_values() {
        let (t, rho) = cap_parameters(PI / 4.0).unwrap();
        assert!((t - 1.0).abs() < 1e-15);
        assert!((rho - (1.0 + 2f64.sqrt())).abs() < 1e-14);
        let (t, rho) = cap_parameters(PI / 3.0).unwrap();
        assert!((t - 3f64.sqrt()).abs() < 1e-14);
        assert!((rho - 3.0).abs() < 1e-14);
        assert!(cap_parameters(PI / 2.0).is_err());
    }

    #[test]
    fn cap_boundary_value() {
        let p = SpherePoint::basis(2, 2);
        let v = phi_cap(PI / 3.0, &p, &at_angle(PI / 3.0)).unwrap();
        assert!((v - 0.8).abs() < 1e-14);
        assert_eq!(phi_cap(PI / 3.0, &p, p.coords()).unwrap(), 1.0);
        assert_eq!(phi_cap(0.3, &p, &at_angle(0.61)).unwrap(), 0.0);
    }

    #[test]
    fn bar_sends_half_radius_to_equator() {
        let p = SpherePoint::basis(2, 2);
        let r = 1.1;
        let b = BarFunction::new(r, &p).unwrap();
        assert!(b.eval(&at_angle(0.5 * r + 1e-12)).abs() < 1e-9);
        assert!((b.eval(&[0.0, 0.0, -1.0]) - 1.0).abs() < 1e-15);
        assert_eq!(b.eval(&at_angle(0.4 * r)), 0.0);
    }
}
