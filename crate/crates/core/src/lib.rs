//! Asymptotic-preserving finite-difference solvers for the isentropic Euler
//! system with a singular congestion pressure `eps * p(rho)`.
//!
//! The pressure is split into an explicit part `p0` and an implicit part
//! `p1`. Three time-stepping schemes are provided in one and two space
//! dimensions:
//!
//! * `Direct`: a nonlinear elliptic equation for `p1` followed by an
//!   explicit momentum update.
//! * `Gauge1` / `Gauge2`: the momentum is reconstructed from a gauge
//!   decomposition `q = a - grad(phi)`, which damps the oscillations of the
//!   direct scheme in congested zones.
//!
//! Exact reference solutions live in [`riemann`]: a finite-`eps` Riemann
//! solver, the closed-form `eps -> 0` limit solutions, and the
//! cluster-collision formula.

pub mod error;
pub mod harness;
pub mod mesh;
pub mod metrics;
pub mod numerics;
pub mod par;
pub mod pressure;
pub mod riemann;
pub mod schemes;

pub use error::{Error, Result};
pub use mesh::{BoundaryRule, Grid1D, Grid2D, GridState1D, GridState2D};
pub use pressure::{PressureLaw, Splitting};
pub use schemes::{SchemeConfig, SchemeKind};
