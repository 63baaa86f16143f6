//! Wave curves through a state `(rho_hat, q_hat)` in the `(rho, q)` plane.

use crate::error::{Error, Result};
use crate::numerics::integrate_adaptive;
use crate::pressure::PressureLaw;

/// Family sign: `Minus` for the 1-waves, `Plus` for the 2-waves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Minus,
    Plus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Minus => -1.0,
            Branch::Plus => 1.0,
        }
    }
}

const QUAD_TOL: f64 = 1e-13;

/// `P(b) - P(a)` where `P' = sqrt(p'(u)) / u`.
///
/// For `gamma > 1` the substitution `u = t^m`, `m = 2/(gamma - 1)`, removes
/// the `u^((gamma-3)/2)` singularity at the origin, so `a = 0` is allowed.
pub fn p_integral(law: &PressureLaw, a: f64, b: f64) -> Result<f64> {
    let g = law.gamma();
    let rs = law.rho_star();
    for v in [a, b] {
        if !(v >= 0.0 && v < rs) {
            return Err(Error::Domain { rho: v, rho_star: rs });
        }
    }
    if a == b {
        return Ok(0.0);
    }
    let k = (g * rs.powf(g + 1.0)).sqrt();
    if g > 1.0 {
        let m = 2.0 / (g - 1.0);
        let e = -(g + 1.0) / 2.0;
        integrate_adaptive(|t| k * m * (rs - t.powf(m)).powf(e), a.powf(1.0 / m), b.powf(1.0 / m), QUAD_TOL)
    } else {
        if a == 0.0 || b == 0.0 {
            return Err(Error::InvalidArgument(
                "the integral diverges at the origin for gamma <= 1".into(),
            ));
        }
        integrate_adaptive(|u| law.dp_unchecked(u).sqrt() / u, a, b, QUAD_TOL)
    }
}

/// Rarefaction curve `rho u_hat +- rho sqrt(eps) (P(rho) - P(rho_hat))`.
pub fn integral_curve(law: &PressureLaw, rho_hat: f64, q_hat: f64, rho: f64, branch: Branch) -> Result<f64> {
    let u_hat = q_hat / rho_hat;
    Ok(rho * u_hat + branch.sign() * rho * law.epsilon().sqrt() * p_integral(law, rho_hat, rho)?)
}

/// Velocity along the rarefaction curve, finite at `rho = 0`.
pub fn integral_velocity(law: &PressureLaw, rho_hat: f64, q_hat: f64, rho: f64, branch: Branch) -> Result<f64> {
    Ok(q_hat / rho_hat + branch.sign() * law.epsilon().sqrt() * p_integral(law, rho_hat, rho)?)
}

/// Shock curve `rho u_hat +- sqrt(rho/rho_hat) sqrt((rho - rho_hat)(eps p - eps p_hat))`.
pub fn hugoniot_curve(law: &PressureLaw, rho_hat: f64, q_hat: f64, rho: f64, branch: Branch) -> Result<f64> {
    let eps = law.epsilon();
    let jump = (rho - rho_hat) * (eps * law.pressure(rho)? - eps * law.pressure(rho_hat)?);
    Ok(rho * q_hat / rho_hat + branch.sign() * (rho / rho_hat).sqrt() * jump.max(0.0).sqrt())
}

/// Speed `[q]/[rho]` of the discontinuity joining `(rho_hat, q_hat)` to the
/// point of the shock curve at `rho`.
pub fn shock_speed(law: &PressureLaw, rho_hat: f64, q_hat: f64, rho: f64, branch: Branch) -> Result<f64> {
    if rho == rho_hat {
        let u = q_hat / rho_hat;
        return Ok(u + branch.sign() * (law.epsilon() * law.pressure_derivatives(rho)?.0).sqrt());
    }
    let q = hugoniot_curve(law, rho_hat, q_hat, rho, branch)?;
    Ok((q - q_hat) / (rho - rho_hat))
}

/// Characteristic speed `u +- sqrt(eps p'(rho))`.
pub fn characteristic_speed(law: &PressureLaw, rho: f64, u: f64, branch: Branch) -> f64 {
    u + branch.sign() * (law.epsilon() * law.dp_unchecked(rho)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed_form(rho: f64) -> f64 {
        2.0 * 2f64.sqrt() * (rho / (1.0 - rho)).sqrt()
    }

    #[test]
    fn antiderivative_matches_closed_form() {
        let law = PressureLaw::standard(1e-4).unwrap();
        for &(a, b) in &[(0.0, 0.5), (0.3, 0.7), (0.7, 0.3), (0.1, 0.99)] {
            let v = p_integral(&law, a, b).unwrap();
            let e = closed_form(b) - closed_form(a);
            assert!((v - e).abs() < 1e-10 * e.abs().max(1.0), "({a},{b}) {v} vs {e}");
        }
    }

    #[test]
    fn hugoniot_satisfies_jump_conditions() {
        let law = PressureLaw::standard(1e-2).unwrap();
        let (rh, qh) = (0.7, 0.8);
        for &rho in &[0.75, 0.9, 0.99] {
            let q = hugoniot_curve(&law, rh, qh, rho, Branch::Minus).unwrap();
            let s = shock_speed(&law, rh, qh, rho, Branch::Minus).unwrap();
            let mom = |r: f64, q: f64| q * q / r + 1e-2 * law.pressure(r).unwrap();
            assert!(((q - qh) - s * (rho - rh)).abs() < 1e-12);
            let lhs = mom(rho, q) - mom(rh, qh);
            assert!((lhs - s * (q - qh)).abs() < 1e-10 * lhs.abs().max(1.0));
        }
    }
}
