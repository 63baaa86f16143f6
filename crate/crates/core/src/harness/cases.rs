//! Named initial data and their reference solutions.

use crate::error::{Error, Result};
use crate::mesh::{BoundaryRule, Grid1D, Grid2D, GridState1D, GridState2D};
use crate::pressure::PressureLaw;
use crate::riemann::{compose_riemann, limit_riemann, solve_riemann_eps, RiemannProblem, RiemannState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    /// Two shocks: `(0.7, 0.8) | (0.7, -0.8)`.
    P1,
    /// Vacuum: `(0.7, -0.8) | (0.7, 0.8)`.
    P2,
    /// Two colliding congested regions.
    P3,
    /// `(0.8, 0.3) | (0.5, 0.1)`.
    P4,
    /// P1 with momenta scaled by 0.1, far from congestion.
    P1Prime,
    /// Two moving blocks on the unit square.
    Cluster2D,
    /// One Riemann problem with user-supplied states.
    Custom,
}

impl CaseId {
    pub fn name(self) -> &'static str {
        match self {
            CaseId::P1 => "P1",
            CaseId::P2 => "P2",
            CaseId::P3 => "P3",
            CaseId::P4 => "P4",
            CaseId::P1Prime => "P1prime",
            CaseId::Cluster2D => "cluster2d",
            CaseId::Custom => "custom",
        }
    }

    pub fn is_2d(self) -> bool {
        self == CaseId::Cluster2D
    }
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CaseId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p1" => Ok(CaseId::P1),
            "p2" => Ok(CaseId::P2),
            "p3" => Ok(CaseId::P3),
            "p4" => Ok(CaseId::P4),
            "p1prime" | "p1'" | "p1p" => Ok(CaseId::P1Prime),
            "cluster2d" | "cluster" => Ok(CaseId::Cluster2D),
            "custom" => Ok(CaseId::Custom),
            _ => Err(Error::Config(format!("unknown case '{s}'"))),
        }
    }
}

/// Piecewise-constant 1D data: `states[k]` holds on `(breaks[k-1], breaks[k]]`.
/// A node exactly on a break takes the value from its left.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise {
    pub breaks: Vec<f64>,
    pub states: Vec<RiemannState>,
}

impl Piecewise {
    pub fn at(&self, x: f64) -> RiemannState {
        let k = self.breaks.iter().take_while(|&&b| x > b).count();
        self.states[k]
    }
}

/// Initial data of a named case.
#[derive(Debug, Clone, PartialEq)]
pub enum Case {
    OneD(Piecewise),
    TwoD,
}

const CLUSTER_A: [f64; 4] = [1.0 / 6.0, 5.0 / 12.0, 1.0 / 3.0, 7.0 / 12.0];
const CLUSTER_B: [f64; 4] = [7.0 / 12.0, 5.0 / 6.0, 5.0 / 12.0, 2.0 / 3.0];

fn inside(r: &[f64; 4], x: f64, y: f64) -> bool {
    x >= r[0] && x <= r[1] && y >= r[2] && y <= r[3]
}

/// `(rho, q1, q2)` of the cluster case.
pub fn cluster2d_state(x: f64, y: f64) -> (f64, f64, f64) {
    if inside(&CLUSTER_A, x, y) {
        (0.8, 1.0, 0.0)
    } else if inside(&CLUSTER_B, x, y) {
        (0.8, -1.0, 0.0)
    } else {
        (0.6, 0.0, 0.0)
    }
}

pub fn build_case(id: CaseId, custom: Option<&Piecewise>) -> Result<Case> {
    let s = RiemannState::new;
    let two = |l: RiemannState, r: RiemannState| Piecewise {
        breaks: vec![0.5],
        states: vec![l, r],
    };
    Ok(match id {
        CaseId::P1 => Case::OneD(two(s(0.7, 0.8), s(0.7, -0.8))),
        CaseId::P2 => Case::OneD(two(s(0.7, -0.8), s(0.7, 0.8))),
        CaseId::P1Prime => Case::OneD(two(s(0.7, 0.08), s(0.7, -0.08))),
        CaseId::P4 => Case::OneD(two(s(0.8, 0.3), s(0.5, 0.1))),
        CaseId::P3 => Case::OneD(Piecewise {
            breaks: vec![0.25, 0.75],
            states: vec![s(0.7, 0.8), s(0.8, -0.3), s(0.7, -1.2)],
        }),
        CaseId::Cluster2D => Case::TwoD,
        CaseId::Custom => Case::OneD(
            custom
                .cloned()
                .ok_or_else(|| Error::Config("custom case needs left/right states".into()))?,
        ),
    })
}

impl Case {
    pub fn initial_1d(&self, grid: &Grid1D, rule: BoundaryRule) -> Result<GridState1D> {
        match self {
            Case::OneD(p) => Ok(GridState1D::from_fn(grid, rule, |x| {
                let s = p.at(x);
                (s.rho, s.q)
            })),
            Case::TwoD => Err(Error::Config("two-dimensional case on a 1D grid".into())),
        }
    }

    pub fn initial_2d(&self, grid: &Grid2D, rule: BoundaryRule) -> Result<GridState2D> {
        match self {
            Case::TwoD => Ok(GridState2D::from_fn(grid, rule, cluster2d_state)),
            Case::OneD(_) => Err(Error::Config("one-dimensional case on a 2D grid".into())),
        }
    }

    /// Riemann problems at each break, solved in the `eps -> 0` limit or
    /// for the given `eps`.
    pub fn riemann_problems(&self, law: &PressureLaw, limit: bool) -> Result<Vec<RiemannProblem>> {
        let p = match self {
            Case::OneD(p) => p,
            Case::TwoD => return Err(Error::Config("no Riemann reference in 2D".into())),
        };
        p.breaks
            .iter()
            .enumerate()
            .map(|(k, &x0)| {
                let (l, r) = (p.states[k], p.states[k + 1]);
                let solution = if limit {
                    limit_riemann(law, l, r)?
                } else {
                    solve_riemann_eps(law, l, r)?
                };
                Ok(RiemannProblem { x0, solution })
            })
            .collect()
    }

    /// Reference profile at time `t` on the nodes `xs`.
    pub fn reference(&self, law: &PressureLaw, t: f64, xs: &[f64], limit: bool) -> Result<Vec<RiemannState>> {
        let problems = self.riemann_problems(law, limit)?;
        if t <= 0.0 {
            if let Case::OneD(p) = self {
                return Ok(xs.iter().map(|&x| p.at(x)).collect());
            }
        }
        compose_riemann(&problems, t, xs)
    }
}
