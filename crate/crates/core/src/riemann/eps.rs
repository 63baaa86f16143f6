use super::curves::{self, Branch};
use super::{RiemannState, Wave, WaveKind, WaveStructure};
use crate::error::{Error, Result};
use crate::numerics::find_root_bracketed;
use crate::pressure::PressureLaw;

// Velocity of the state at density `rho` reachable from `anchor` through a
// wave of the given family: shock branch above the anchor, rarefaction below.
fn wave_curve_velocity(law: &PressureLaw, anchor: RiemannState, rho: f64, branch: Branch) -> Result<f64> {
    if rho > anchor.rho {
        Ok(curves::hugoniot_curve(law, anchor.rho, anchor.q, rho, branch)? / rho)
    } else {
        curves::integral_velocity(law, anchor.rho, anchor.q, rho, branch)
    }
}

/// Entropy solution of the Riemann problem for a fixed `eps`.
///
/// The intermediate density solves `u_left(rho) = u_right(rho)`, where the
/// two sides follow the 1-wave curve of the left state and the 2-wave curve
/// of the right state. When the curves only meet at `rho = 0` the solution
/// contains a vacuum between two rarefactions.
pub fn solve_riemann_eps(law: &PressureLaw, left: RiemannState, right: RiemannState) -> Result<WaveStructure> {
    let rs = law.rho_star();
    for s in [left, right] {
        if !(s.rho > 0.0 && s.rho < rs) || !s.q.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "Riemann data needs 0 < rho < rho_star, got ({}, {})",
                s.rho, s.q
            )));
        }
    }
    let mut ws = WaveStructure {
        left,
        right,
        waves: Vec::new(),
        intermediate: Vec::new(),
        law: Some(*law),
    };
    if left == right {
        return Ok(ws);
    }
    let gap = |rho: f64| -> f64 {
        match (
            wave_curve_velocity(law, left, rho, Branch::Minus),
            wave_curve_velocity(law, right, rho, Branch::Plus),
        ) {
            (Ok(a), Ok(b)) => a - b,
            _ => f64::NAN,
        }
    };
    let lambda = |s: RiemannState, b: Branch| curves::characteristic_speed(law, s.rho, s.velocity(), b);

    if law.gamma() > 1.0 && gap(0.0) <= 0.0 {
        let head = wave_curve_velocity(law, left, 0.0, Branch::Minus)?;
        let tail = wave_curve_velocity(law, right, 0.0, Branch::Plus)?;
        let vac = RiemannState::VACUUM;
        ws.waves.push(Wave {
            kind: WaveKind::Rarefaction,
            family: Some(Branch::Minus),
            speed_lo: lambda(left, Branch::Minus),
            speed_hi: head,
            left,
            right: vac,
        });
        ws.waves.push(Wave {
            kind: WaveKind::Vacuum,
            family: None,
            speed_lo: head,
            speed_hi: tail,
            left: vac,
            right: vac,
        });
        ws.waves.push(Wave {
            kind: WaveKind::Rarefaction,
            family: Some(Branch::Plus),
            speed_lo: tail,
            speed_hi: lambda(right, Branch::Plus),
            left: vac,
            right,
        });
        ws.intermediate.push(vac);
        return Ok(ws);
    }

    let hi = rs * (1.0 - 1e-13);
    let lo = if law.gamma() > 1.0 { 0.0 } else { 1e-300 };
    let rho_m = find_root_bracketed(gap, lo, hi)?;
    let u_m = wave_curve_velocity(law, left, rho_m, Branch::Minus)?;
    let u_m_right = wave_curve_velocity(law, right, rho_m, Branch::Plus)?;
    let mid = RiemannState::new(rho_m, rho_m * u_m);

    let same = |a: f64, b: f64| (a - b).abs() <= 1e-14 * a.abs().max(b.abs());
    if !same(rho_m, left.rho) {
        if rho_m > left.rho {
            let s = (mid.q - left.q) / (rho_m - left.rho);
            ws.waves.push(Wave {
                family: Some(Branch::Minus),
                ..Wave::jump(WaveKind::Shock, s, left, mid)
            });
        } else {
            ws.waves.push(Wave {
                kind: WaveKind::Rarefaction,
                family: Some(Branch::Minus),
                speed_lo: lambda(left, Branch::Minus),
                speed_hi: lambda(mid, Branch::Minus),
                left,
                right: mid,
            });
        }
    }
    if !same(rho_m, right.rho) {
        if rho_m > right.rho {
            let s = (right.q - rho_m * u_m_right) / (right.rho - rho_m);
            ws.waves.push(Wave {
                family: Some(Branch::Plus),
                ..Wave::jump(WaveKind::Shock, s, mid, right)
            });
        } else {
            ws.waves.push(Wave {
                kind: WaveKind::Rarefaction,
                family: Some(Branch::Plus),
                speed_lo: lambda(mid, Branch::Plus),
                speed_hi: lambda(right, Branch::Plus),
                left: mid,
                right,
            });
        }
    }
    ws.intermediate.push(mid);
    Ok(ws)
}
