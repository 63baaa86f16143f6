//! Congestion pressure law and its explicit/implicit splitting.
//!
//! `p(rho) = (1/rho - 1/rho_star)^(-gamma)`, singular at `rho_star`. The
//! explicit part `p0` equals `p/2` up to the junction `rho_star - delta`,
//! `delta = eps^(1/(gamma+2))`, and continues as the second-order Taylor
//! expansion of `p/2` beyond it, so `p0` stays finite at `rho_star`.

use crate::error::{Error, Result};

/// How the pressure is split between the explicit and implicit parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Splitting {
    /// `p0 = p/2` away from congestion, Taylor-continued near `rho_star`.
    #[default]
    Standard,
    /// `p0 = 0`, `p1 = p`: the whole pressure is implicit.
    None,
}

/// Relative distance to `rho_star` below which the pressure is undefined.
pub const CONGESTION_GUARD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureLaw {
    gamma: f64,
    rho_star: f64,
    epsilon: f64,
    delta: f64,
    splitting: Splitting,
    // p, p', p'' at the junction rho_star - delta
    junction: [f64; 3],
}

impl PressureLaw {
    pub fn new(gamma: f64, rho_star: f64, epsilon: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidLaw(format!("gamma must be positive, got {gamma}")));
        }
        if !(rho_star > 0.0 && rho_star.is_finite()) {
            return Err(Error::InvalidLaw(format!(
                "rho_star must be positive, got {rho_star}"
            )));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidLaw(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        let delta = epsilon.powf(1.0 / (gamma + 2.0));
        if delta >= rho_star {
            return Err(Error::InvalidLaw(format!(
                "junction width delta = {delta} is not below rho_star = {rho_star}"
            )));
        }
        let mut law = PressureLaw {
            gamma,
            rho_star,
            epsilon,
            delta,
            splitting: Splitting::Standard,
            junction: [0.0; 3],
        };
        let r = rho_star - delta;
        law.junction = [law.raw_p(r), law.raw_dp(r), law.raw_d2p(r)];
        Ok(law)
    }

    /// The law used throughout the test cases: `gamma = 2`, `rho_star = 1`.
    pub fn standard(epsilon: f64) -> Result<Self> {
        Self::new(2.0, 1.0, epsilon)
    }

    pub fn with_splitting(mut self, splitting: Splitting) -> Self {
        self.splitting = splitting;
        self
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Ok(Self::new(self.gamma, self.rho_star, epsilon)?.with_splitting(self.splitting))
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn rho_star(&self) -> f64 {
        self.rho_star
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn splitting(&self) -> Splitting {
        self.splitting
    }

    /// Left end of the Taylor-continued branch of `p0`.
    pub fn junction(&self) -> f64 {
        self.rho_star - self.delta
    }

    fn check(&self, rho: f64) -> Result<()> {
        if rho.is_nan() || rho < 0.0 || rho >= self.rho_star * (1.0 - CONGESTION_GUARD) {
            return Err(Error::Domain {
                rho,
                rho_star: self.rho_star,
            });
        }
        Ok(())
    }

    // w = rho rho* / (rho* - rho), p = w^gamma.
    fn raw_p(&self, rho: f64) -> f64 {
        let w = rho * self.rho_star / (self.rho_star - rho);
        w.powf(self.gamma)
    }

    fn raw_dp(&self, rho: f64) -> f64 {
        let g = self.gamma;
        let rs = self.rho_star;
        g * rho.powf(g - 1.0) * rs.powf(g + 1.0) / (rs - rho).powf(g + 1.0)
    }

    fn raw_d2p(&self, rho: f64) -> f64 {
        let g = self.gamma;
        let rs = self.rho_star;
        let d = rs - rho;
        let w = rho * rs / d;
        let w1 = rs * rs / (d * d);
        let w2 = 2.0 * rs * rs / (d * d * d);
        let mut out = g * w.powf(g - 1.0) * w2;
        if g != 1.0 {
            out += g * (g - 1.0) * w.powf(g - 2.0) * w1 * w1;
        }
        out
    }

    /// `p(rho)`.
    pub fn pressure(&self, rho: f64) -> Result<f64> {
        self.check(rho)?;
        Ok(self.raw_p(rho))
    }

    /// `(p'(rho), p''(rho))`.
    pub fn pressure_derivatives(&self, rho: f64) -> Result<(f64, f64)> {
        self.check(rho)?;
        Ok((self.raw_dp(rho), self.raw_d2p(rho)))
    }

    /// `p'` without the domain check; `+inf` at or beyond `rho_star`.
    pub(crate) fn dp_unchecked(&self, rho: f64) -> f64 {
        if rho >= self.rho_star {
            f64::INFINITY
        } else {
            self.raw_dp(rho.max(0.0))
        }
    }

    /// Explicit pressure part `p0(rho)`, defined for every `rho >= 0`.
    pub fn p0(&self, rho: f64) -> f64 {
        let rho = rho.max(0.0);
        if self.splitting == Splitting::None {
            return 0.0;
        }
        let r = self.junction();
        if rho > r {
            let [p, dp, d2p] = self.junction;
            let h = rho - r;
            0.5 * (p + dp * h + 0.5 * d2p * h * h)
        } else {
            0.5 * self.raw_p(rho)
        }
    }

    /// Derivative `p0'(rho)`.
    pub fn dp0(&self, rho: f64) -> f64 {
        let rho = rho.max(0.0);
        if self.splitting == Splitting::None {
            return 0.0;
        }
        let r = self.junction();
        if rho > r {
            let [_, dp, d2p] = self.junction;
            0.5 * (dp + d2p * (rho - r))
        } else {
            0.5 * self.raw_dp(rho)
        }
    }

    /// Implicit pressure part `p1 = p - p0`.
    pub fn p1(&self, rho: f64) -> Result<f64> {
        Ok(self.pressure(rho)? - self.p0(rho))
    }

    /// Derivative `p1'(rho)`.
    pub fn dp1(&self, rho: f64) -> Result<f64> {
        self.check(rho)?;
        Ok(self.raw_dp(rho) - self.dp0(rho))
    }

    /// Explicit sound speed `sqrt(eps p0'(rho))`.
    pub fn explicit_sound_speed(&self, rho: f64) -> f64 {
        (self.epsilon * self.dp0(rho)).max(0.0).sqrt()
    }

    /// Inverse of the strictly increasing map `rho -> p1(rho)` on `[0, rho_star)`.
    pub fn invert_p1(&self, y: f64) -> Result<f64> {
        if y.is_nan() || y < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "p1 inversion needs a non-negative value, got {y}"
            )));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        if y.is_infinite() {
            return Err(Error::InvalidArgument("p1 inversion of +inf".into()));
        }
        let rs = self.rho_star;
        if self.splitting == Splitting::None {
            return Ok(self.inverse_p(y));
        }
        let r = self.junction();
        if y <= 0.5 * self.junction[0] {
            return Ok(self.inverse_p(2.0 * y).min(r));
        }
        // Convex increasing on [r, rho_star): safeguarded Newton.
        let g = |rho: f64| -> f64 {
            if rho >= rs {
                f64::INFINITY
            } else {
                self.raw_p(rho) - self.p0(rho) - y
            }
        };
        let mut lo = r;
        let mut hi = rs;
        let mut x = self.inverse_p(y).clamp(lo, rs);
        for _ in 0..300 {
            let fx = g(x);
            if fx == 0.0 {
                return Ok(x);
            }
            if fx > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let dfx = self.raw_dp(x) - self.dp0(x);
            let mut next = x - fx / dfx;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 2.0 * f64::EPSILON * x || hi - lo <= 2.0 * f64::EPSILON * hi {
                return Ok(if next < rs { next } else { lo });
            }
            x = next;
        }
        Ok(x)
    }

    // Closed-form inverse of p: w = y^(1/gamma), rho = w rho*/(rho* + w).
    fn inverse_p(&self, y: f64) -> f64 {
        let w = y.powf(1.0 / self.gamma);
        w * self.rho_star / (self.rho_star + w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law() -> PressureLaw {
        PressureLaw::standard(1e-4).unwrap()
    }

    #[test]
    fn pressure_closed_form() {
        let l = law();
        assert!((l.pressure(0.5).unwrap() - 1.0).abs() < 1e-14);
        assert!((l.pressure(0.9).unwrap() - 81.0).abs() < 1e-10);
    }

    #[test]
    fn derivatives_against_rational_forms() {
        let l = law();
        for &rho in &[0.1, 0.5, 0.7, 0.9, 0.99] {
            let (d1, d2) = l.pressure_derivatives(rho).unwrap();
            let om = 1.0 - rho;
            let e1 = 2.0 * rho / om.powi(3);
            let e2 = (2.0 + 4.0 * rho) / om.powi(4);
            assert!((d1 - e1).abs() <= 1e-12 * e1, "p'({rho})");
            assert!((d2 - e2).abs() <= 1e-12 * e2, "p''({rho})");
        }
        let (d1, d2) = l.pressure_derivatives(0.5).unwrap();
        assert!((d1 - 8.0).abs() < 1e-12);
        assert!((d2 - 64.0).abs() < 1e-12);
    }

    #[test]
    fn junction_and_taylor_branch() {
        let l = law();
        assert!((l.delta() - 0.1).abs() < 1e-15);
        assert!((l.p0(1.0) - 270.5).abs() < 1e-9);
        assert!((l.p0(0.5) - 0.5).abs() < 1e-14);
        assert!((l.explicit_sound_speed(0.5) - 0.02).abs() < 1e-14);
        assert!((l.explicit_sound_speed(0.9) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        let l = law();
        assert!(matches!(l.pressure(1.0), Err(Error::Domain { .. })));
        assert!(matches!(l.pressure(-0.1), Err(Error::Domain { .. })));
        assert!(l.invert_p1(-1.0).is_err());
        assert!(PressureLaw::new(2.0, 1.0, 2.0).is_err());
        assert!(PressureLaw::new(0.0, 1.0, 1e-4).is_err());
    }

    #[test]
    fn invert_round_trip() {
        for &eps in &[1e-2, 1e-4, 1e-8] {
            let l = PressureLaw::standard(eps).unwrap();
            for &rho in &[1e-6, 0.1, 0.5, 0.8, 0.95, 0.999, 0.99999] {
                let y = l.p1(rho).unwrap();
                let back = l.invert_p1(y).unwrap();
                assert!((back - rho).abs() <= 1e-12, "eps {eps} rho {rho} got {back}");
            }
        }
    }

    #[test]
    fn no_split_mode() {
        let l = law().with_splitting(Splitting::None);
        assert_eq!(l.p0(0.7), 0.0);
        assert_eq!(l.explicit_sound_speed(0.7), 0.0);
        let y = l.p1(0.7).unwrap();
        assert!((y - l.pressure(0.7).unwrap()).abs() < 1e-14);
        assert!((l.invert_p1(y).unwrap() - 0.7).abs() < 1e-14);
    }
}
