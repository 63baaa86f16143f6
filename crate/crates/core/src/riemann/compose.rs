use super::{RiemannState, WaveStructure};
use crate::error::{Error, Result};

/// A Riemann problem centred at `x0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannProblem {
    pub x0: f64,
    pub solution: WaveStructure,
}

/// First time at which the wave fans of neighbouring problems meet.
/// Problems must be ordered by `x0`.
pub fn interaction_time(problems: &[RiemannProblem]) -> f64 {
    let mut t = f64::INFINITY;
    for pair in problems.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let right_edge = a.solution.speed_range().map_or(f64::NEG_INFINITY, |r| r.1);
        let left_edge = b.solution.speed_range().map_or(f64::INFINITY, |r| r.0);
        if right_edge.is_infinite() && right_edge > 0.0 || left_edge.is_infinite() && left_edge < 0.0 {
            return 0.0;
        }
        let closing = right_edge - left_edge;
        if closing > 0.0 {
            t = t.min((b.x0 - a.x0) / closing);
        }
    }
    t
}

/// Piecewise assembly of non-interacting Riemann solutions at time `t`.
pub fn compose_riemann(problems: &[RiemannProblem], t: f64, xs: &[f64]) -> Result<Vec<RiemannState>> {
    if problems.is_empty() {
        return Err(Error::InvalidArgument("no Riemann problems to compose".into()));
    }
    if problems.windows(2).any(|p| p[0].x0 >= p[1].x0) {
        return Err(Error::InvalidArgument("Riemann problems must be ordered by position".into()));
    }
    let tc = interaction_time(problems);
    if t >= tc {
        return Err(Error::Interaction { interaction_time: tc, t });
    }
    // split points in the middle of the constant gaps
    let splits: Vec<f64> = problems
        .windows(2)
        .map(|p| {
            let hi = p[0].x0 + p[0].solution.speed_range().map_or(0.0, |r| r.1) * t;
            let lo = p[1].x0 + p[1].solution.speed_range().map_or(0.0, |r| r.0) * t;
            0.5 * (hi + lo)
        })
        .collect();
    xs.iter()
        .map(|&x| {
            let k = splits.iter().take_while(|&&s| x > s).count();
            let p = &problems[k];
            if t <= 0.0 {
                Ok(if x <= p.x0 { p.solution.left } else { p.solution.right })
            } else {
                p.solution.sample((x - p.x0) / t)
            }
        })
        .collect()
}
