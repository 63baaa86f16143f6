use crate::error::{Error, Result};

/// Two congested clusters `[a, m]` and `[m, b]` moving at `u_l` and `u_r`
/// that collide at time zero. They merge into one cluster moving at the
/// mass-weighted velocity `u`, and the impact pressure `pi(x)` vanishes at
/// both outer edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterCollision {
    pub a: f64,
    pub m: f64,
    pub b: f64,
    pub u_left: f64,
    pub u_right: f64,
    pub rho_star: f64,
}

impl ClusterCollision {
    pub fn new(a: f64, m: f64, b: f64, u_left: f64, u_right: f64, rho_star: f64) -> Result<Self> {
        if !(a < b && a <= m && m <= b) {
            return Err(Error::InvalidArgument(format!(
                "cluster collision needs a <= m <= b with a < b, got ({a}, {m}, {b})"
            )));
        }
        Ok(ClusterCollision {
            a,
            m,
            b,
            u_left,
            u_right,
            rho_star,
        })
    }

    /// Velocity of the merged cluster.
    pub fn velocity(&self) -> f64 {
        (self.u_left * (self.m - self.a) + self.u_right * (self.b - self.m)) / (self.b - self.a)
    }

    /// Impact pressure at `x` in `[a, b]`.
    pub fn pressure(&self, x: f64) -> f64 {
        let u = self.velocity();
        let rs = self.rho_star;
        if self.m == self.a || self.m == self.b {
            return 0.0;
        }
        if x <= self.m {
            rs * (u - self.u_left) * (self.m - x) + rs * (u - self.u_right) * (self.b - self.m)
        } else {
            rs * (u - self.u_right) * (self.b - x)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_halves() {
        let c = ClusterCollision::new(0.0, 0.5, 1.0, 1.0, 0.0, 1.0).unwrap();
        assert!((c.velocity() - 0.5).abs() < 1e-15);
        assert!((c.pressure(0.5) - 0.25).abs() < 1e-15);
        assert!(c.pressure(0.0).abs() < 1e-15);
        assert!(c.pressure(1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_and_invalid() {
        let c = ClusterCollision::new(0.0, 0.0, 1.0, 2.0, -1.0, 1.0).unwrap();
        assert_eq!(c.velocity(), -1.0);
        assert_eq!(c.pressure(0.3), 0.0);
        assert!(ClusterCollision::new(1.0, 0.5, 0.0, 1.0, 0.0, 1.0).is_err());
        assert!(ClusterCollision::new(0.0, 2.0, 1.0, 1.0, 0.0, 1.0).is_err());
    }
}
