//! Tan-power separation family for the two angular flow components.
//!
//! Separating the azimuthal component as a product of a theta profile and a
//! phi profile yields, for each separation constant Gamma >= 0,
//!
//! ```text
//! D = (psi1 e^{sqrt(G) phi} + psi2 e^{-sqrt(G) phi}) tan^G(theta)
//! C = -sqrt(G) (psi1 e^{sqrt(G) phi} - psi2 e^{-sqrt(G) phi}) tan^{G+1}(theta)
//! ```
//!
//! Gamma = 0 collapses to C identically zero and D constant; any Gamma > 0
//! leaves a forcing term in the third diagonal flow equation, which is how
//! the solved solution ends up with a constant azimuthal component.
//!
//! For Gamma > 0 the tan power is evaluated as exp(Gamma ln tan theta) and
//! is only regular on the open band theta in (theta_min, pi/2 - theta_min);
//! evaluation outside the band reports a domain error rather than returning
//! a poisoned value.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::jet::{Coord, DomainLimits, Jet2, JetError, Point4};
use crate::lie::VectorField4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationFamily {
    pub gamma: f64,
    pub psi1: f64,
    pub psi2: f64,
}

impl SeparationFamily {
    pub fn new(gamma: f64, psi1: f64, psi2: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "separation constant must be finite and >= 0, got {gamma}"
            )));
        }
        if !(psi1.is_finite() && psi2.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "separation amplitudes must be finite, got psi1={psi1}, psi2={psi2}"
            )));
        }
        Ok(SeparationFamily { gamma, psi1, psi2 })
    }

    /// tan^e(theta) via exp(e ln tan theta), guarded to the open band
    /// (theta_min, pi/2 - theta_min) where tan is positive and finite.
    fn tan_power(p: &Point4, exponent: f64) -> std::result::Result<Jet2, JetError> {
        let band = DomainLimits::default().theta_min;
        if !(p.theta > band && p.theta < FRAC_PI_2 - band) {
            return Err(JetError::Domain {
                op: "tan power band",
                value: p.theta,
            });
        }
        let t = Jet2::coord(Coord::Theta, p).tan()?;
        Ok(t.ln()?.scale(exponent).exp())
    }

    /// The polar component C.
    pub fn polar_component(&self) -> ScalarField {
        if self.gamma == 0.0 {
            return ScalarField::zero();
        }
        let (g, p1, p2) = (self.gamma, self.psi1, self.psi2);
        let root = g.sqrt();
        ScalarField::from_fn(move |p| {
            let phi = Jet2::coord(Coord::Phi, p);
            let swing = phi.scale(root).exp().scale(p1) - phi.scale(-root).exp().scale(p2);
            Ok((swing * Self::tan_power(p, g + 1.0)?).scale(-root))
        })
    }

    /// The azimuthal component D.
    pub fn azimuthal_component(&self) -> ScalarField {
        if self.gamma == 0.0 {
            return ScalarField::constant(self.psi1 + self.psi2);
        }
        let (g, p1, p2) = (self.gamma, self.psi1, self.psi2);
        let root = g.sqrt();
        ScalarField::from_fn(move |p| {
            let phi = Jet2::coord(Coord::Phi, p);
            let sway = phi.scale(root).exp().scale(p1) + phi.scale(-root).exp().scale(p2);
            Ok(sway * Self::tan_power(p, g)?)
        })
    }

    /// Both angular components, as (C, D).
    pub fn fields(&self) -> (ScalarField, ScalarField) {
        (self.polar_component(), self.azimuthal_component())
    }

    /// The flow field with only the angular components populated.
    pub fn vector_field(&self) -> VectorField4 {
        let (c, d) = self.fields();
        VectorField4::new(ScalarField::zero(), ScalarField::zero(), c, d)
    }
}

/// Residual of the separated azimuthal equation
/// d^2D/dphi^2 - sin(theta)cos(theta) dD/dtheta; identically zero for every
/// member of the family, up to rounding.
pub fn separation_pde_residual(fam: &SeparationFamily, p: &Point4) -> Result<f64> {
    let d = fam.azimuthal_component().eval(p)?;
    let (st, ct) = p.theta.sin_cos();
    let phi = Coord::Phi.index();
    let theta = Coord::Theta.index();
    Ok(d.hess(phi, phi) - st * ct * d.grad[theta])
}

/// Residual of the third diagonal flow equation with the dilation profile
/// B = kappa r / 2 substituted. The dilation terms r B and kappa r^2 / 2
/// cancel identically, leaving the forcing term r^2 dC/dtheta; it vanishes
/// exactly when Gamma = 0 or psi1 = psi2 = 0 and is an obstruction otherwise.
pub fn gamma_forcing_residual(fam: &SeparationFamily, kappa: f64, p: &Point4) -> Result<f64> {
    if !kappa.is_finite() {
        return Err(Error::InvalidInput(format!(
            "kappa must be finite, got {kappa}"
        )));
    }
    let c = fam.polar_component().eval(p)?;
    Ok(p.r * p.r * c.grad[Coord::Theta.index()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

    fn pt(u: f64, r: f64, theta: f64, phi: f64) -> Point4 {
        Point4::new(u, r, theta, phi).unwrap()
    }

    #[test]
    fn gamma_zero_collapses_to_constants() {
        let fam = SeparationFamily::new(0.0, 2.0, -0.5).unwrap();
        let p = pt(0.3, 2.0, 2.6, 4.0); // theta beyond pi/2: fine at Gamma = 0
        let c = fam.polar_component().eval(&p).unwrap();
        let d = fam.azimuthal_component().eval(&p).unwrap();
        assert_eq!(c.val, 0.0);
        assert_eq!(d.val, 1.5);
        assert_eq!(d.grad, [0.0; 4]);
        assert_eq!(separation_pde_residual(&fam, &p).unwrap(), 0.0);
        assert_eq!(gamma_forcing_residual(&fam, 2.0, &p).unwrap(), 0.0);
    }

    #[test]
    fn frozen_profile_values_at_unit_gamma() {
        // tan(pi/4) = 1, e^0 = 1: D = psi1, C = -psi1.
        let fam = SeparationFamily::new(1.0, 1.0, 0.0).unwrap();
        let p = pt(0.0, 1.0, FRAC_PI_4, 0.0);
        let (c, d) = fam.fields();
        assert!((d.eval(&p).unwrap().val - 1.0).abs() < 1e-12);
        assert!((c.eval(&p).unwrap().val + 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_amplitudes_cancel_the_polar_component_at_zero_phi() {
        let fam = SeparationFamily::new(1.0, 0.5, 0.5).unwrap();
        let p = pt(0.0, 2.0, FRAC_PI_8, 0.0);
        assert!(fam.polar_component().eval(&p).unwrap().val.abs() < 1e-15);
    }

    #[test]
    fn pde_residual_vanishes_in_band() {
        for gamma in [0.0, 1.0, 2.5, 4.0] {
            let fam = SeparationFamily::new(gamma, 0.7, -1.3).unwrap();
            for theta in [FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8] {
                for phi in [0.0, 0.3, 1.0, 2.0] {
                    let p = pt(0.5, 2.0, theta, phi);
                    let res = separation_pde_residual(&fam, &p).unwrap();
                    assert!(
                        res.abs() < 1e-10,
                        "gamma={gamma} theta={theta} phi={phi}: residual {res}"
                    );
                }
            }
        }
    }

    #[test]
    fn forcing_residual_is_frozen_at_unit_gamma() {
        // C = -e^phi tan^2(theta); dC/dtheta at (theta=pi/4, phi=0) is
        // -2 tan(pi/4) sec^2(pi/4) = -4, and r = 1.
        let fam = SeparationFamily::new(1.0, 1.0, 0.0).unwrap();
        let p = pt(0.0, 1.0, FRAC_PI_4, 0.0);
        let res = gamma_forcing_residual(&fam, 2.0, &p).unwrap();
        assert!((res + 4.0).abs() < 1e-12, "forcing {res}");
        assert!(res.abs() > 1e-3);
    }

    #[test]
    fn zero_amplitudes_force_nothing() {
        let fam = SeparationFamily::new(3.0, 0.0, 0.0).unwrap();
        let p = pt(0.0, 2.0, FRAC_PI_4, 1.0);
        assert_eq!(gamma_forcing_residual(&fam, 1.5, &p).unwrap(), 0.0);
    }

    #[test]
    fn out_of_band_evaluation_is_a_domain_error() {
        let fam = SeparationFamily::new(1.0, 1.0, 0.0).unwrap();
        for theta in [FRAC_PI_2, 2.0, PI - 0.2] {
            let p = pt(0.0, 2.0, theta, 0.0);
            assert!(
                fam.azimuthal_component().eval(&p).is_err(),
                "theta={theta} should be out of band"
            );
            assert!(fam.polar_component().eval(&p).is_err());
        }
    }

    #[test]
    fn rejects_negative_or_nonfinite_parameters() {
        assert!(SeparationFamily::new(-1.0, 1.0, 1.0).is_err());
        assert!(SeparationFamily::new(f64::NAN, 1.0, 1.0).is_err());
        assert!(SeparationFamily::new(1.0, f64::INFINITY, 1.0).is_err());
        assert!(gamma_forcing_residual(
            &SeparationFamily::new(1.0, 1.0, 0.0).unwrap(),
            f64::NAN,
            &pt(0.0, 1.0, FRAC_PI_4, 0.0)
        )
        .is_err());
    }
}
