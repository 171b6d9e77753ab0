//! Boundary conditions of the general self-adjoint real-coupled ("GSARC")
//! family and its named limits, with exact-rational classification.
//!
//! The coupled family is
//!
//! ```text
//! u'(0) = alpha*u(0) + beta*u(1),   u'(1) = -beta*u(0) + delta*u(1),
//! ```
//!
//! where the `-beta` coupling (gamma = -beta, never stored) makes the
//! operator self-adjoint. Limits with `alpha -> infinity` pin `u(0) = 0` and
//! are kept as distinct variants so classification stays exact.

use crate::rational::{fmt_rat, int, to_f64, Rat};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BcError {
    #[error("discriminant is not defined for {0}")]
    NotApplicable(String),
    #[error("beta = 0: separated boundary conditions have no coupling matrix")]
    SeparatedBc,
    #[error("boundary condition is not of coupled (GSARC) form")]
    NotGsarc,
    #[error("coupling matrix must have determinant 1, got {0}")]
    NotUnimodular(String),
    #[error("n*r^2*cos(theta) - sin(theta) = 0: no finite GSARC parameters")]
    DegenerateAngle,
    #[error("tau must be nonzero")]
    ZeroTau,
}

/// A boundary condition for `-u''` on `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryCondition {
    /// Coupled self-adjoint conditions with exact rational parameters.
    Gsarc {
        #[serde(with = "rat_string")]
        alpha: Rat,
        #[serde(with = "rat_string")]
        beta: Rat,
        #[serde(with = "rat_string")]
        delta: Rat,
    },
    /// `u(0) = u(1) = 0`.
    Dirichlet,
    /// `u(0) = 0`, `u'(1) = delta*u(1)`; the `alpha -> infinity` limit of the
    /// separated Robin family.
    LeftDirichletRightRobin {
        #[serde(with = "rat_string")]
        delta: Rat,
    },
    /// `u(0) = u(1)`, `u'(0) = u'(1)`.
    Periodic,
    /// `u(0) = -u(1)`, `u'(0) = -u'(1)`.
    AntiPeriodic,
}

mod rat_string {
    use super::Rat;
    use crate::rational::{fmt_rat, parse_rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// Value of the discriminant `Delta = delta - alpha - 2*beta + beta^2 +
/// alpha*delta`, extended to the separated limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Discriminant {
    Finite(Rat),
    PlusInfinity,
    MinusInfinity,
}

impl Discriminant {
    pub fn as_string(&self) -> String {
        match self {
            Discriminant::Finite(r) => fmt_rat(r),
            Discriminant::PlusInfinity => "inf".into(),
            Discriminant::MinusInfinity => "-inf".into(),
        }
    }
}

impl BoundaryCondition {
    pub fn gsarc(alpha: Rat, beta: Rat, delta: Rat) -> Self {
        BoundaryCondition::Gsarc { alpha, beta, delta }
    }

    /// The free nonlocal problem: `u'(0) = -u(0) - u(1)`, `u'(1) = u(0) + u(1)`.
    pub fn nonlocal() -> Self {
        Self::gsarc(int(-1), int(-1), int(1))
    }

    /// The Krein-von Neumann extension: `(alpha, beta, delta) = (-1, 1, 1)`.
    pub fn krein_von_neumann() -> Self {
        Self::gsarc(int(-1), int(1), int(1))
    }

    pub fn neumann() -> Self {
        Self::gsarc(int(0), int(0), int(0))
    }

    /// Separated Robin conditions `u'(0) = alpha*u(0)`, `u'(1) = delta*u(1)`.
    pub fn robin(alpha: Rat, delta: Rat) -> Self {
        Self::gsarc(alpha, int(0), delta)
    }

    /// `u(0) = 0`, `u'(1) = u(1)` (the tan-root problem).
    pub fn radoux() -> Self {
        BoundaryCondition::LeftDirichletRightRobin { delta: int(1) }
    }

    /// `u(0) = 0`, `tau*u'(1) - u(1) = 0`, i.e. `delta = 1/tau`.
    pub fn kato_293(tau: Rat) -> Result<Self, BcError> {
        if tau.is_zero() {
            return Err(BcError::ZeroTau);
        }
        Ok(BoundaryCondition::LeftDirichletRightRobin {
            delta: tau.recip(),
        })
    }

    /// `u(0) = 0`, `u'(1) + tau*u(1) = 0`, i.e. `delta = -tau`.
    pub fn kato_367(tau: Rat) -> Self {
        BoundaryCondition::LeftDirichletRightRobin { delta: -tau }
    }

    /// Angle-parametrized one-sided Robin condition `u(0) = 0`,
    /// `u'(1) = -t * u(1)` with rational `t = tan(theta)`; coincides with
    /// [`BoundaryCondition::kato_367`] at `tau = t`.
    pub fn stakgold(tan_theta: Rat) -> Self {
        BoundaryCondition::LeftDirichletRightRobin { delta: -tan_theta }
    }

    /// `u(0) = 0`, `u'(1) = 0`.
    pub fn dirichlet_neumann_mixed() -> Self {
        BoundaryCondition::LeftDirichletRightRobin { delta: int(0) }
    }

    pub fn name(&self) -> String {
        match self {
            BoundaryCondition::Gsarc { alpha, beta, delta } => {
                if self == &Self::nonlocal() {
                    "nonlocal".into()
                } else if self == &Self::krein_von_neumann() {
                    "krein-von-neumann".into()
                } else if self == &Self::neumann() {
                    "neumann".into()
                } else if beta.is_zero() {
                    format!("robin({}, {})", fmt_rat(alpha), fmt_rat(delta))
                } else {
                    format!(
                        "gsarc({}, {}, {})",
                        fmt_rat(alpha),
                        fmt_rat(beta),
                        fmt_rat(delta)
                    )
                }
            }
            BoundaryCondition::Dirichlet => "dirichlet".into(),
            BoundaryCondition::LeftDirichletRightRobin { delta } => {
                if delta.is_one() {
                    "radoux".into()
                } else if delta.is_zero() {
                    "dirichlet-neumann-mixed".into()
                } else {
                    format!("left-dirichlet-right-robin({})", fmt_rat(delta))
                }
            }
            BoundaryCondition::Periodic => "periodic".into(),
            BoundaryCondition::AntiPeriodic => "anti-periodic".into(),
        }
    }
}

/// `Delta = delta - alpha - 2*beta + beta^2 + alpha*delta`, exact. Zero
/// exactly when the homogeneous problem has a linear solution, i.e. when 0 is
/// an eigenvalue.
pub fn discriminant(bc: &BoundaryCondition) -> Result<Discriminant, BcError> {
    match bc {
        BoundaryCondition::Gsarc { alpha, beta, delta } => Ok(Discriminant::Finite(
            delta - alpha - int(2) * beta + beta * beta + alpha * delta,
        )),
        BoundaryCondition::Dirichlet => Ok(Discriminant::PlusInfinity),
        BoundaryCondition::LeftDirichletRightRobin { delta } => {
            // Limit of the Robin discriminant delta - alpha + alpha*delta as
            // alpha -> infinity: the sign of (delta - 1) wins, and delta = 1
            // gives exactly 1 for every alpha.
            if delta.is_one() {
                Ok(Discriminant::Finite(int(1)))
            } else if delta > &int(1) {
                Ok(Discriminant::PlusInfinity)
            } else {
                Ok(Discriminant::MinusInfinity)
            }
        }
        BoundaryCondition::Periodic | BoundaryCondition::AntiPeriodic => {
            Err(BcError::NotApplicable(bc.name()))
        }
    }
}

/// Whether 0 is an eigenvalue of the boundary value problem.
pub fn has_zero_eigenvalue(bc: &BoundaryCondition) -> bool {
    match bc {
        BoundaryCondition::Gsarc { .. } => matches!(
            discriminant(bc),
            Ok(Discriminant::Finite(d)) if d.is_zero()
        ),
        BoundaryCondition::Dirichlet => false,
        BoundaryCondition::LeftDirichletRightRobin { delta } => delta.is_one(),
        BoundaryCondition::Periodic => true,
        BoundaryCondition::AntiPeriodic => false,
    }
}

/// 2x2 coupling matrix `(u(1), u'(1))^T = B (u(0), u'(0))^T` with exact
/// rational entries and determinant 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingMatrix {
    pub entries: [[Rat; 2]; 2],
}

impl CouplingMatrix {
    pub fn new(entries: [[Rat; 2]; 2]) -> Self {
        CouplingMatrix { entries }
    }

    pub fn det(&self) -> Rat {
        let e = &self.entries;
        &e[0][0] * &e[1][1] - &e[0][1] * &e[1][0]
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        [
            [to_f64(&self.entries[0][0]), to_f64(&self.entries[0][1])],
            [to_f64(&self.entries[1][0]), to_f64(&self.entries[1][1])],
        ]
    }
}

/// Parameters of the Iwasawa factorization `B = K(theta) A(r) N(n)` with
/// `K` a rotation, `A = diag(r, 1/r)`, `r > 0`, and `N` unipotent upper
/// triangular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KanParams {
    pub theta: f64,
    pub r: f64,
    pub n: f64,
}

impl KanParams {
    pub fn reconstruct(&self) -> [[f64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        let k = [[c, -s], [s, c]];
        // A*N = [[r, r*n], [0, 1/r]]
        let an = [[self.r, self.r * self.n], [0.0, 1.0 / self.r]];
        let mut b = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                b[i][j] = k[i][0] * an[0][j] + k[i][1] * an[1][j];
            }
        }
        b
    }
}

/// `B = [[-alpha/beta, 1/beta], [-(beta^2+alpha*delta)/beta, delta/beta]]`.
/// Defined only for coupled conditions with `beta != 0`; `det B = 1` holds
/// identically.
pub fn to_coupling_matrix(bc: &BoundaryCondition) -> Result<CouplingMatrix, BcError> {
    let BoundaryCondition::Gsarc { alpha, beta, delta } = bc else {
        return Err(BcError::NotGsarc);
    };
    if beta.is_zero() {
        return Err(BcError::SeparatedBc);
    }
    let b = CouplingMatrix::new([
        [-alpha / beta, beta.recip()],
        [-(beta * beta + alpha * delta) / beta, delta / beta],
    ]);
    debug_assert!(b.det().is_one());
    Ok(b)
}

/// Iwasawa (KAN) factorization of a det-1 matrix, via Gram-Schmidt on the
/// first column: `r = |b_1|`, `theta = atan2`, then `n` from the rotated
/// second column. `theta` is kept in `(-pi, pi]`.
pub fn kan_decompose(b: &CouplingMatrix) -> Result<KanParams, BcError> {
    if !b.det().is_one() {
        return Err(BcError::NotUnimodular(fmt_rat(&b.det())));
    }
    let m = b.to_f64();
    let r = m[0][0].hypot(m[1][0]);
    let mut theta = m[1][0].atan2(m[0][0]);
    if theta <= -std::f64::consts::PI {
        theta = std::f64::consts::PI;
    }
    let (s, c) = theta.sin_cos();
    let n = (m[0][1] * c + m[1][1] * s) / r;
    Ok(KanParams { theta, r, n })
}

/// Recovers the GSARC parameters from KAN data. Inverts the identities
/// `-alpha/beta = r cos(theta)`, `1/beta = r n cos(theta) - sin(theta)/r`,
/// `delta/beta = r n sin(theta) + cos(theta)/r`, which give
///
/// ```text
/// den   = n r^2 cos(theta) - sin(theta)
/// beta  = r / den
/// alpha = -r^2 cos(theta) / den
/// delta = (n r^2 sin(theta) + cos(theta)) / den
/// ```
///
/// so that `to_coupling_matrix(kan_to_bc(p))` reconstructs `K A N` exactly.
pub fn kan_to_bc(p: &KanParams) -> Result<(f64, f64, f64), BcError> {
    let (s, c) = p.theta.sin_cos();
    let den = p.n * p.r * p.r * c - s;
    if den.abs() < 1e-14 {
        return Err(BcError::DegenerateAngle);
    }
    let beta = p.r / den;
    let alpha = -p.r * p.r * c / den;
    let delta = (p.n * p.r * p.r * s + c) / den;
    Ok((alpha, beta, delta))
}

/// Convenience: exact-rational GSARC discriminant.
pub fn gsarc_discriminant(alpha: &Rat, beta: &Rat, delta: &Rat) -> Rat {
    delta - alpha - int(2) * beta + beta * beta + alpha * delta
}

/// Robin-family discriminant `delta - alpha + alpha*delta` (the `beta = 0`
/// slice of the general formula).
pub fn robin_discriminant(alpha: &Rat, delta: &Rat) -> Rat {
    gsarc_discriminant(alpha, &Rat::zero(), delta)
}

pub fn bc_from_named(name: &str) -> Option<BoundaryCondition> {
    match name.to_ascii_lowercase().replace('_', "-").as_str() {
        "nonlocal" | "saito" => Some(BoundaryCondition::nonlocal()),
        "kvn" | "krein-von-neumann" => Some(BoundaryCondition::krein_von_neumann()),
        "dirichlet" => Some(BoundaryCondition::Dirichlet),
        "neumann" => Some(BoundaryCondition::neumann()),
        "periodic" => Some(BoundaryCondition::Periodic),
        "antiperiodic" | "anti-periodic" => Some(BoundaryCondition::AntiPeriodic),
        "radoux" => Some(BoundaryCondition::radoux()),
        "mixed" | "dirichlet-neumann" | "dirichlet-neumann-mixed" => {
            Some(BoundaryCondition::dirichlet_neumann_mixed())
        }
        _ => None,
    }
}
