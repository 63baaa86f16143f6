use super::{RiemannState, Wave, WaveKind, WaveStructure};
use crate::error::{Error, Result};
use crate::numerics::find_root_bracketed;
use crate::pressure::PressureLaw;

fn structure(left: RiemannState, right: RiemannState, waves: Vec<Wave>) -> WaveStructure {
    let intermediate = waves.iter().take(waves.len().saturating_sub(1)).map(|w| w.right).collect();
    WaveStructure {
        left,
        right,
        waves,
        intermediate,
        law: None,
    }
}

// contact at u_l, vacuum, contact at u_r; `inner_*` are the states touching the vacuum
fn contact_vacuum_contact(left: RiemannState, right: RiemannState, ul: f64, ur: f64) -> Vec<Wave> {
    let vac = RiemannState::VACUUM;
    vec![
        Wave::jump(WaveKind::Contact, ul, left, vac),
        Wave {
            kind: WaveKind::Vacuum,
            family: None,
            speed_lo: ul,
            speed_hi: ur,
            left: vac,
            right: vac,
        },
        Wave::jump(WaveKind::Contact, ur, vac, right),
    ]
}

/// Closed-form Riemann solution of the `eps -> 0` limit system.
///
/// A state is congested when `rho == rho_star`; only congested states may
/// carry `pbar > 0`. Waves at infinite speed (declustering, or shocks into
/// congested data) have `speed = +-inf`. Two colliding congested states
/// produce an intermediate state with `pbar = +inf`.
pub fn limit_riemann(law: &PressureLaw, left: RiemannState, right: RiemannState) -> Result<WaveStructure> {
    let rs = law.rho_star();
    for s in [left, right] {
        if !(s.rho > 0.0 && s.rho <= rs) || !(s.pbar >= 0.0) || !s.q.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "limit Riemann data needs 0 < rho <= rho_star and pbar >= 0, got {s:?}"
            )));
        }
        if s.pbar > 0.0 && s.rho < rs {
            return Err(Error::InvalidArgument(format!(
                "pbar > 0 requires a congested state, got {s:?}"
            )));
        }
    }
    let cl = left.rho >= rs;
    let cr = right.rho >= rs;
    if !cl && cr {
        return Ok(limit_riemann(law, right.mirrored(), left.mirrored())?.mirrored());
    }
    let (ul, ur) = (left.velocity(), right.velocity());
    let waves = match (cl, cr) {
        (false, false) => {
            if ul < ur {
                contact_vacuum_contact(left, right, ul, ur)
            } else if ul > ur {
                let (rl, rr) = (left.rho, right.rho);
                let wl = ((rs - rl) / (rl * rs)).sqrt();
                let wr = ((rs - rr) / (rr * rs)).sqrt();
                let pbar = (ul - ur).powi(2) / (wl + wr).powi(2);
                let q_m = ul * rs - (rs / rl).sqrt() * ((rs - rl) * pbar).sqrt();
                let s_minus = ul - (rs / (rl * (rs - rl))).sqrt() * pbar.sqrt();
                let s_plus = ur + (rs / (rr * (rs - rr))).sqrt() * pbar.sqrt();
                let mid = RiemannState::congested(rs, q_m, pbar);
                vec![
                    Wave::jump(WaveKind::Shock, s_minus, left, mid),
                    Wave::jump(WaveKind::Shock, s_plus, mid, right),
                ]
            } else if left.rho != right.rho {
                vec![Wave::jump(WaveKind::Contact, ul, left, right)]
            } else {
                Vec::new()
            }
        }
        (true, false) => {
            let released = RiemannState::congested(rs, left.q, 0.0);
            if ul < ur {
                let mut w = vec![Wave::jump(WaveKind::Declustering, f64::NEG_INFINITY, left, released)];
                w.extend(contact_vacuum_contact(released, right, ul, ur));
                w
            } else if ul > ur {
                let rr = right.rho;
                let pbar = rs * rr * (ul - ur).powi(2) / (rs - rr);
                let mid = RiemannState::congested(rs, rs * ul, pbar);
                let s_plus = ur + (rs / rr).sqrt() * (pbar / (rs - rr)).sqrt();
                vec![
                    Wave::jump(WaveKind::Shock, f64::NEG_INFINITY, left, mid),
                    Wave::jump(WaveKind::Shock, s_plus, mid, right),
                ]
            } else {
                let mut w = Vec::new();
                if left.pbar > 0.0 {
                    w.push(Wave::jump(WaveKind::Declustering, f64::NEG_INFINITY, left, released));
                }
                w.push(Wave::jump(WaveKind::Contact, ul, released, right));
                w
            }
        }
        (true, true) => {
            if ul < ur {
                let rel_l = RiemannState::congested(rs, left.q, 0.0);
                let rel_r = RiemannState::congested(rs, right.q, 0.0);
                let mut w = Vec::new();
                if left.pbar > 0.0 {
                    w.push(Wave::jump(WaveKind::Declustering, f64::NEG_INFINITY, left, rel_l));
                }
                w.extend(contact_vacuum_contact(rel_l, rel_r, ul, ur));
                if right.pbar > 0.0 {
                    w.push(Wave::jump(WaveKind::Declustering, f64::INFINITY, rel_r, right));
                }
                w
            } else if ul > ur {
                let q_m = colliding_momentum(law, left, right)?;
                let mid = RiemannState::congested(rs, q_m, f64::INFINITY);
                vec![
                    Wave::jump(WaveKind::Shock, f64::NEG_INFINITY, left, mid),
                    Wave::jump(WaveKind::Shock, f64::INFINITY, mid, right),
                ]
            } else if left.pbar != right.pbar {
                vec![Wave::jump(WaveKind::Declustering, f64::NEG_INFINITY, left, right)]
            } else {
                Vec::new()
            }
        }
        (false, true) => unreachable!(),
    };
    Ok(structure(left, right, waves))
}

/// Momentum between two colliding congested states:
/// `|q - q_l| / |q - q_r| = (pbar_r / pbar_l)^(1/(2 gamma))`, `q` in `(q_r, q_l)`.
fn colliding_momentum(law: &PressureLaw, left: RiemannState, right: RiemannState) -> Result<f64> {
    let (ql, qr) = (left.q, right.q);
    let k = match (left.pbar > 0.0, right.pbar > 0.0) {
        (true, true) => (right.pbar / left.pbar).powf(1.0 / (2.0 * law.gamma())),
        (false, true) => return Ok(qr),
        (true, false) => return Ok(ql),
        // no information on the approach rates: equal weights
        (false, false) => 1.0,
    };
    find_root_bracketed(|q| (ql - q) - k * (q - qr), qr, ql)
}
