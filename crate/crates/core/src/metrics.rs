//! Error measures against reference profiles.
//!
//! Multi-component versions treat a state as the tuple of its fields: norms
//! and total variations are summed over components.

use crate::error::{Error, Result};

fn check(w: &[f64], r: &[f64]) -> Result<()> {
    if w.len() != r.len() || w.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "field lengths differ or are empty ({} vs {})",
            w.len(),
            r.len()
        )));
    }
    Ok(())
}

/// Total variation `sum |w_{j+1} - w_j|`.
pub fn total_variation(w: &[f64]) -> f64 {
    w.windows(2).map(|p| (p[1] - p[0]).abs()).sum()
}

/// `||W - w|| / ||w||` with the discrete L1 norm.
pub fn l1_relative_error(numerical: &[f64], reference: &[f64]) -> Result<f64> {
    l1_relative_error_multi(&[(numerical, reference)])
}

/// `|TV(W) - TV(w)| / TV(w)`.
pub fn tv_relative_error(numerical: &[f64], reference: &[f64]) -> Result<f64> {
    tv_relative_error_multi(&[(numerical, reference)])
}

pub fn l1_relative_error_multi(pairs: &[(&[f64], &[f64])]) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for (w, r) in pairs {
        check(w, r)?;
        num += w.iter().zip(r.iter()).map(|(a, b)| (a - b).abs()).sum::<f64>();
        den += r.iter().map(|v| v.abs()).sum::<f64>();
    }
    if den == 0.0 {
        return Err(Error::InvalidArgument("reference has zero norm".into()));
    }
    Ok(num / den)
}

pub fn tv_relative_error_multi(pairs: &[(&[f64], &[f64])]) -> Result<f64> {
    let mut tw = 0.0;
    let mut tr = 0.0;
    for (w, r) in pairs {
        check(w, r)?;
        tw += total_variation(w);
        tr += total_variation(r);
    }
    if tr == 0.0 {
        return Err(Error::InvalidArgument("reference has zero total variation".into()));
    }
    Ok((tw - tr).abs() / tr)
}

/// `max_lambda * dt / dx`.
pub fn courant_number(max_lambda: f64, dt: f64, dx: f64) -> f64 {
    max_lambda * dt / dx
}
