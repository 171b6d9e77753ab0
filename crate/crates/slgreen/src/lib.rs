//! Integral-operator realizations of coupled self-adjoint Sturm-Liouville
//! problems on `[0,1]`.
//!
//! Every boundary value problem `-u'' = f` with general real-coupled
//! self-adjoint ("GSARC") boundary conditions
//!
//! ```text
//! u'(0) = alpha*u(0) + beta*u(1),    u'(1) = -beta*u(0) + delta*u(1),
//! ```
//!
//! together with the Dirichlet, periodic, anti-periodic and one-sided Robin
//! limits, is represented here by
//!
//! * its Green's function `G0(x,y) = -1/2*|x-y| + polynomial` with exact
//!   rational coefficients ([`greens`]),
//! * its Riesz projection kernel `p(x,y)` onto the zero eigenspace
//!   ([`greens::riesz_kernel`]),
//! * the closed-form resolvent kernel `G(z,x,y)` and its Laurent data,
//!   evaluated numerically ([`resolvent`]),
//! * the finite-rank perturbation `T = kappa - G0` relating the problem to
//!   the free nonlocal operator `Kf = -1/2 * Int |x-y| f(y) dy`, with exact
//!   matrices, eigenpairs and rank ([`perturbation`]),
//! * Nystrom discretizations serving as independent spectral oracles
//!   ([`nystrom`]).
//!
//! Exact rational arithmetic is used end-to-end in the kernel algebra;
//! floating point enters only through the resolvent evaluators and the
//! Nystrom oracles.
//!
//! ```
//! use slgreen::{green_kernel, perturbation::rank, BoundaryCondition};
//!
//! let bc = BoundaryCondition::krein_von_neumann();
//! let pkg = green_kernel(&bc).unwrap();
//! assert_eq!(pkg.multiplicity, 2);          // 0 is a double eigenvalue
//! assert_eq!(rank(&bc).unwrap(), 4);        // the farthest from the free operator
//! assert_eq!(rank(&BoundaryCondition::AntiPeriodic).unwrap(), 1); // the closest
//! ```

pub mod bc;
pub mod bivar;
pub mod greens;
pub mod kernel;
pub mod nystrom;
pub mod perturbation;
pub mod poly;
pub mod rational;
pub mod resolvent;

pub use bc::{BcError, BoundaryCondition, CouplingMatrix, Discriminant, KanParams};
pub use bivar::BivarPoly;
pub use greens::{green_kernel, riesz_kernel, verify_green, GreenPackage, GreensError};
pub use kernel::PiecewiseKernel;
pub use perturbation::{
    perturbation_kernel, perturbation_matrix, perturbation_spectrum, rank, PerturbationSpectrum,
};
pub use poly::Poly;
pub use rational::Rat;
