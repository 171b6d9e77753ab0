//! Piecewise-symmetric kernels of the form
//! `K(x,y) = a*|x-y| + q(min(x,y), max(x,y))`
//! on `[0,1]^2`, together with exact integral-operator algebra.
//!
//! Every Green's function produced in this crate has this shape with a
//! symmetric polynomial part, so `K(x,y) = K(y,x)` holds by construction and
//! the two branches agree on the diagonal.

use crate::bivar::BivarPoly;
use crate::poly::Poly;
use crate::rational::{fmt_rat, int, parse_rat, to_f64, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on the degree of polynomial inputs to [`PiecewiseKernel::apply_to_polynomial`].
/// Nothing in this crate needs beyond degree 4; the cap guards composed tests
/// against accidental blowup.
pub const DEGREE_CAP: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("point ({0}, {1}) outside [0,1]^2")]
    OutOfDomain(String, String),
    #[error("polynomial degree {0} exceeds cap {DEGREE_CAP}")]
    DegreeCapExceeded(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseKernel {
    abs_coeff: Rat,
    lower: BivarPoly,
}

#[derive(Serialize, Deserialize)]
struct KernelRepr {
    abs: String,
    #[serde(flatten)]
    lower: BivarPoly,
}

impl PiecewiseKernel {
    /// `abs_coeff * |x-y| + lower(min(x,y), max(x,y))`. The `lower` polynomial
    /// is interpreted on the region `x <= y`.
    pub fn new(abs_coeff: Rat, lower: BivarPoly) -> Self {
        PiecewiseKernel { abs_coeff, lower }
    }

    /// The free-space kernel `kappa(x,y) = -1/2 * |x-y|`.
    pub fn kappa() -> Self {
        PiecewiseKernel::new(crate::rational::rat(-1, 2), BivarPoly::zero())
    }

    pub fn abs_coeff(&self) -> &Rat {
        &self.abs_coeff
    }

    pub fn lower(&self) -> &BivarPoly {
        &self.lower
    }

    /// Exact evaluation. Symmetric in its arguments.
    pub fn eval(&self, x: &Rat, y: &Rat) -> Result<Rat, AlgebraError> {
        let zero = Rat::zero();
        let one = int(1);
        if x < &zero || x > &one || y < &zero || y > &one {
            return Err(AlgebraError::OutOfDomain(fmt_rat(x), fmt_rat(y)));
        }
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        let abs = hi - lo;
        Ok(&self.abs_coeff * abs + self.lower.eval(lo, hi))
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        to_f64(&self.abs_coeff) * (hi - lo) + self.lower.eval_f64(lo, hi)
    }

    /// `u(x) = Int_0^1 K(x,y) f(y) dy`, exact. Splitting at `y = x` resolves
    /// `|x-y|` on each branch, so both integrands are polynomials and `u` is a
    /// single polynomial in `x`.
    pub fn apply_to_polynomial(&self, f: &Poly) -> Result<Poly, AlgebraError> {
        if f.degree() > DEGREE_CAP && !f.is_zero() {
            return Err(AlgebraError::DegreeCapExceeded(f.degree()));
        }
        // y <= x branch: a*(x-y) + lower(y,x); lower(y,x) = transpose evaluated at (x,y).
        let abs_low = BivarPoly::from_terms([
            (1, 0, self.abs_coeff.clone()),
            (0, 1, -self.abs_coeff.clone()),
        ]);
        let low = self.lower.transpose() + abs_low;
        let u1 = low.mul_poly_in_y(f).integrate_y_0_to_x();
        // x <= y branch: a*(y-x) + lower(x,y).
        let abs_high = BivarPoly::from_terms([
            (0, 1, self.abs_coeff.clone()),
            (1, 0, -self.abs_coeff.clone()),
        ]);
        let high = self.lower.clone() + abs_high;
        let u2 = high.mul_poly_in_y(f).integrate_y_x_to_1();
        Ok(u1 + u2)
    }

    /// `R(x,y) = Int_0^1 K(x,s) Q(s,y) ds`, exact. The `y`-coefficients of `Q`
    /// are treated as parameters and the `s`-integral is split at `s = x`.
    pub fn compose_with_poly(&self, q: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (j, qj) in q.y_coefficients().into_iter().enumerate() {
            if qj.is_zero() {
                continue;
            }
            let col = self
                .apply_to_polynomial(&qj)
                .expect("kernel sections stay below the degree cap");
            for (i, c) in col.coeffs().iter().enumerate() {
                out.add_term(i as u32, j as u32, c.clone());
            }
        }
        out
    }
}

impl Serialize for PiecewiseKernel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        KernelRepr {
            abs: fmt_rat(&self.abs_coeff),
            lower: self.lower.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PiecewiseKernel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = KernelRepr::deserialize(deserializer)?;
        Ok(PiecewiseKernel::new(
            parse_rat(&repr.abs).map_err(serde::de::Error::custom)?,
            repr.lower,
        ))
    }
}

/// `C = Int_0^1 A(x,s) B(s,y) ds` for global polynomial kernels.
pub fn compose_poly_kernels(a: &BivarPoly, b: &BivarPoly) -> BivarPoly {
    a.compose(b)
}

pub fn second_derivative_in_x(u: &Poly) -> Poly {
    u.second_derivative()
}

pub fn inner_product(f: &Poly, g: &Poly) -> Rat {
    f.inner_product(g)
}
