//! Bivariate polynomials in `(x, y)` with exact rational coefficients,
//! stored sparsely as `(i, j) -> c_ij` for monomials `x^i y^j`.

use crate::poly::Poly;
use crate::rational::{fmt_rat, int, parse_rat, to_f64, Rat};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    i: u32,
    j: u32,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct BivarRepr {
    terms: Vec<TermRepr>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn term(i: u32, j: u32, c: Rat) -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, Rat)>) -> Self {
        let mut p = BivarPoly::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn max_deg_x(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn max_deg_y(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rat) -> BivarPoly {
        BivarPoly::from_terms(self.terms.iter().map(|(&(i, j), v)| (i, j, v * c)))
    }

    /// Swaps the roles of `x` and `y`.
    pub fn transpose(&self) -> BivarPoly {
        BivarPoly::from_terms(self.terms.iter().map(|(&(i, j), v)| (j, i, v.clone())))
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(&(i, j), c)| &self.coeff(j, i) == c)
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (&(i, j), c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..i {
                t *= x;
            }
            for _ in 0..j {
                t *= y;
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for (&(i, j), c) in &self.terms {
            acc += to_f64(c) * x.powi(i as i32) * y.powi(j as i32);
        }
        acc
    }

    /// The polynomial as a function of `y` alone after substituting the outer
    /// variable: returns the coefficient of `y^j` as a polynomial in `x`.
    pub fn y_coefficients(&self) -> Vec<Poly> {
        let dy = self.max_deg_y() as usize;
        let mut out = vec![Poly::zero(); dy + 1];
        for (&(i, j), c) in &self.terms {
            let mut coeffs = vec![Rat::zero(); i as usize + 1];
            coeffs[i as usize] = c.clone();
            out[j as usize] = std::mem::take(&mut out[j as usize]) + Poly::from_coeffs(coeffs);
        }
        out
    }

    /// Multiplies by a univariate polynomial in `y`.
    pub fn mul_poly_in_y(&self, f: &Poly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(i, j), c) in &self.terms {
            for (k, a) in f.coeffs().iter().enumerate() {
                out.add_term(i, j + k as u32, c * a);
            }
        }
        out
    }

    /// `Int_0^x P(x,y) dy`, a univariate polynomial in `x`.
    pub fn integrate_y_0_to_x(&self) -> Poly {
        let mut out = Poly::zero();
        for (&(i, j), c) in &self.terms {
            let k = (i + j + 1) as usize;
            let mut coeffs = vec![Rat::zero(); k + 1];
            coeffs[k] = c / int(j as i64 + 1);
            out = out + Poly::from_coeffs(coeffs);
        }
        out
    }

    /// `Int_x^1 P(x,y) dy`, a univariate polynomial in `x`.
    pub fn integrate_y_x_to_1(&self) -> Poly {
        let mut out = Poly::zero();
        for (&(i, j), c) in &self.terms {
            let w = c / int(j as i64 + 1);
            // x^i * (1 - x^(j+1)) / (j+1)
            let mut coeffs = vec![Rat::zero(); (i + j + 1) as usize + 1];
            coeffs[i as usize] = w.clone();
            coeffs[(i + j + 1) as usize] = -w;
            out = out + Poly::from_coeffs(coeffs);
        }
        out
    }

    /// `Int_0^1 P(x,y) dy` as a polynomial in `x`.
    pub fn integrate_y_full(&self) -> Poly {
        let mut out = Poly::zero();
        for (&(i, j), c) in &self.terms {
            let mut coeffs = vec![Rat::zero(); i as usize + 1];
            coeffs[i as usize] = c / int(j as i64 + 1);
            out = out + Poly::from_coeffs(coeffs);
        }
        out
    }

    /// Applies the polynomial as an integral kernel: `(Tf)(x) = Int_0^1
    /// P(x,y) f(y) dy`, exact.
    pub fn apply_poly(&self, f: &Poly) -> Poly {
        self.mul_poly_in_y(f).integrate_y_full()
    }

    /// Kernel-kernel composition `C(x,y) = Int_0^1 A(x,s) B(s,y) ds`, exact.
    pub fn compose(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                // Int_0^1 s^(j+k) ds = 1/(j+k+1)
                out.add_term(i, l, a * b / int((j + k) as i64 + 1));
            }
        }
        out
    }

    /// Restriction to the diagonal, `P(x,x)` as a univariate polynomial.
    pub fn diagonal(&self) -> Poly {
        let mut out = Poly::zero();
        for (&(i, j), c) in &self.terms {
            let mut coeffs = vec![Rat::zero(); (i + j) as usize + 1];
            coeffs[(i + j) as usize] = c.clone();
            out = out + Poly::from_coeffs(coeffs);
        }
        out
    }

    /// Tensor product `f(x) g(y)` scaled by `c`.
    pub fn outer(f: &Poly, g: &Poly, c: &Rat) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (i, a) in f.coeffs().iter().enumerate() {
            for (j, b) in g.coeffs().iter().enumerate() {
                out.add_term(i as u32, j as u32, a * b * c);
            }
        }
        out
    }
}

impl Add for BivarPoly {
    type Output = BivarPoly;
    fn add(mut self, rhs: BivarPoly) -> BivarPoly {
        for ((i, j), c) in rhs.terms {
            self.add_term(i, j, c);
        }
        self
    }
}

impl Sub for BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: BivarPoly) -> BivarPoly {
        self + (-rhs)
    }
}

impl Neg for BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in &self.terms {
            let s = fmt_rat(&c.abs());
            let sign = if c < &Rat::zero() { "-" } else { "+" };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let mut vars = String::new();
            if i == 1 {
                vars.push('x');
            } else if i > 1 {
                vars.push_str(&format!("x^{i}"));
            }
            if j >= 1 {
                if !vars.is_empty() {
                    vars.push('*');
                }
                if j == 1 {
                    vars.push('y');
                } else {
                    vars.push_str(&format!("y^{j}"));
                }
            }
            if vars.is_empty() {
                write!(f, "{s}")?;
            } else if s == "1" {
                write!(f, "{vars}")?;
            } else {
                write!(f, "{s}*{vars}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for BivarPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = BivarRepr {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| TermRepr { i, j, c: fmt_rat(c) })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BivarPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = BivarRepr::deserialize(deserializer)?;
        let mut p = BivarPoly::zero();
        for t in repr.terms {
            p.add_term(t.i, t.j, parse_rat(&t.c).map_err(serde::de::Error::custom)?);
        }
        Ok(p)
    }
}
