//! Linear solvers, Newton iteration, root finding and quadrature.

pub mod banded;
pub mod krylov;
pub mod newton;
pub mod quadrature;
pub mod roots;

pub use banded::{solve_banded, BandedMatrix, BandedSystem};
pub use krylov::{solve_bicgstab, solve_pcg, KrylovOptions};
pub use newton::{newton_solve, LinearSolve, NewtonOptions, NewtonOutcome};
pub use quadrature::integrate_adaptive;
pub use roots::{find_root_bracketed, find_root_with, RootOptions};
