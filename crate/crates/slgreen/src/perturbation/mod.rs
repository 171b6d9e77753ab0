//! The finite-rank perturbation `T = kappa - G0` for every boundary
//! condition: its polynomial kernel, the exact matrix of the operator on the
//! natural polynomial basis, eigenpairs, rank, and the normalized spectral
//! resolution `T(x,y) = sum_k lambda_k u_k(x) u_k(y)` with unit-norm `u_k`.
//!
//! The perturbation always subtracts the `|x-y|` kink exactly: `T` is a
//! global symmetric polynomial of per-variable degree at most 3, and its
//! rank never exceeds 4.

pub mod charpoly;

use crate::bc::{self, BoundaryCondition};
use crate::bivar::BivarPoly;
use crate::greens::{green_kernel, GreensError};
use crate::kernel::PiecewiseKernel;
use crate::poly::Poly;
use crate::rational::{fmt_rat, int, rat, to_f64, Rat};
use charpoly::{char_poly, rational_nullspace, rational_rank, real_eigenvalues, EigenValueRep};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PerturbError {
    #[error(transparent)]
    Greens(#[from] GreensError),
    #[error("perturbation kernel is not symmetric: {0}")]
    AsymmetricKernel(String),
    #[error("no closed-form spectrum is tabulated for {0}")]
    NoClosedForm(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbationKernel {
    pub bc: BoundaryCondition,
    pub t: BivarPoly,
}

/// `T = kappa - G0`. The `|x-y|` coefficients cancel exactly, so `T` is the
/// negated polynomial part of the Green's function.
pub fn perturbation_kernel(bc: &BoundaryCondition) -> Result<PerturbationKernel, PerturbError> {
    let pkg = green_kernel(bc)?;
    let kappa = PiecewiseKernel::kappa();
    let abs_diff = kappa.abs_coeff() - pkg.g0.abs_coeff();
    assert!(abs_diff.is_zero(), "the |x-y| parts must cancel exactly");
    let t = -pkg.g0.lower().clone();
    if !t.is_symmetric() {
        return Err(PerturbError::AsymmetricKernel(t.to_string()));
    }
    Ok(PerturbationKernel { bc: bc.clone(), t })
}

/// The polynomial basis spanning the `x`-sections of `T`, chosen per family
/// so matrices are comparable with the published displays.
pub fn basis_for(bc: &BoundaryCondition) -> Vec<Poly> {
    let monomials = |k: usize| (0..=k).map(Poly::monomial).collect::<Vec<_>>();
    match bc {
        BoundaryCondition::Dirichlet => monomials(1),
        BoundaryCondition::AntiPeriodic => vec![Poly::one()],
        BoundaryCondition::Periodic => monomials(2),
        BoundaryCondition::LeftDirichletRightRobin { delta } => {
            if delta.is_one() {
                // Radoux: {x, 1 + x^3}.
                vec![
                    Poly::x(),
                    Poly::from_coeffs(vec![int(1), int(0), int(0), int(1)]),
                ]
            } else {
                monomials(1)
            }
        }
        BoundaryCondition::Gsarc { alpha, beta, delta } => {
            if bc == &BoundaryCondition::neumann() {
                // {1, x - x^2}.
                vec![Poly::one(), Poly::from_coeffs(vec![int(0), int(1), int(-1)])]
            } else if bc::gsarc_discriminant(alpha, beta, delta).is_zero() {
                monomials(3)
            } else {
                monomials(1)
            }
        }
    }
}

/// Coordinates of `p` in `basis`, solved exactly; `None` if `p` is outside
/// the span.
fn coordinates_in(basis: &[Poly], p: &Poly) -> Option<Vec<Rat>> {
    let dim = basis
        .iter()
        .chain(std::iter::once(p))
        .map(|q| q.degree() + 1)
        .max()
        .unwrap_or(1);
    // Augmented system [B | p] over the monomial coefficients.
    let mut a: Vec<Vec<Rat>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Rat> = basis.iter().map(|b| b.coeff(r)).collect();
            row.push(p.coeff(r));
            row
        })
        .collect();
    let rows = dim;
    let cols = basis.len();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = a[rank][col].recip();
        for c in 0..=cols {
            a[rank][c] = &a[rank][c] * &inv;
        }
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..=cols {
                    a[r][c] = &a[r][c] - &f * &a[rank][c];
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    // Inconsistent if a zero row has nonzero rhs.
    for r in rank..rows {
        if !a[r][cols].is_zero() {
            return None;
        }
    }
    let mut coords = vec![Rat::zero(); cols];
    for &(r, c) in &pivots {
        coords[c] = a[r][cols].clone();
    }
    Some(coords)
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenPair {
    pub lambda_float: f64,
    pub lambda_exact: Option<String>,
    /// Coefficients of the eigenfunction in the monomial basis, ascending.
    pub vector: Vec<f64>,
    /// Exact coefficients when the eigenvalue is rational.
    pub vector_exact: Option<Poly>,
}

fn ser_rat_matrix<S: serde::Serializer>(m: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
    let strings: Vec<Vec<String>> = m
        .iter()
        .map(|row| row.iter().map(fmt_rat).collect())
        .collect();
    strings.serialize(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbationSpectrum {
    pub bc: BoundaryCondition,
    pub t: BivarPoly,
    pub basis: Vec<Poly>,
    /// `matrix[i][j]` = coefficient of `basis[i]` in `T(basis[j])`.
    #[serde(serialize_with = "ser_rat_matrix")]
    pub matrix: Vec<Vec<Rat>>,
    pub eigen: Vec<EigenPair>,
    pub rank: usize,
    /// `(lambda_k, unit-norm eigenfunction)` for the nonzero eigenvalues.
    pub resolution: Vec<(f64, Vec<f64>)>,
}

impl PerturbationSpectrum {
    pub fn matrix_strings(&self) -> Vec<Vec<String>> {
        self.matrix
            .iter()
            .map(|row| row.iter().map(fmt_rat).collect())
            .collect()
    }
}

/// Exact matrix of `T` on [`basis_for`]: column `j` holds the coordinates of
/// `Int T(.,y) basis_j(y) dy`. Rank is computed by exact elimination.
pub fn perturbation_matrix(bc: &BoundaryCondition) -> Result<PerturbationSpectrum, PerturbError> {
    let kernel = perturbation_kernel(bc)?;
    let basis = basis_for(bc);
    let n = basis.len();
    let mut matrix = vec![vec![Rat::zero(); n]; n];
    for (j, b) in basis.iter().enumerate() {
        let image = kernel.t.apply_poly(b);
        let coords = coordinates_in(&basis, &image)
            .expect("perturbation image must stay inside the section basis");
        for (i, c) in coords.into_iter().enumerate() {
            matrix[i][j] = c;
        }
    }
    let rank = rational_rank(&matrix);
    Ok(PerturbationSpectrum {
        bc: bc.clone(),
        t: kernel.t,
        basis,
        matrix,
        eigen: Vec::new(),
        rank,
        resolution: Vec::new(),
    })
}

fn poly_f64_from_coords(basis: &[Poly], coords: &[f64]) -> Vec<f64> {
    let dim = basis.iter().map(|b| b.degree() + 1).max().unwrap_or(1);
    let mut out = vec![0.0; dim];
    for (b, &c) in basis.iter().zip(coords) {
        for (k, a) in b.coeffs_f64().iter().enumerate() {
            out[k] += c * a;
        }
    }
    out
}

fn poly_inner_f64(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            acc += x * y / (i + j + 1) as f64;
        }
    }
    acc
}

fn matrix_f64(m: &[Vec<Rat>]) -> nalgebra::DMatrix<f64> {
    let n = m.len();
    nalgebra::DMatrix::from_fn(n, n, |i, j| to_f64(&m[i][j]))
}

/// Full spectral data: eigenvalues from the exact characteristic polynomial
/// (rational roots and quadratic-surd factors recognized exactly, the rest
/// isolated to full double precision), eigenvectors, rank, and the
/// L2-normalized resolution of `T`.
pub fn perturbation_spectrum(bc: &BoundaryCondition) -> Result<PerturbationSpectrum, PerturbError> {
    let mut spec = perturbation_matrix(bc)?;
    let n = spec.basis.len();
    let cp = char_poly(&spec.matrix);
    let roots = real_eigenvalues(&cp);
    let total: usize = roots.iter().map(|(_, m)| m).sum();
    assert_eq!(total, n, "real spectrum must account for every eigenvalue");

    let mut eigen = Vec::new();
    for (root, mult) in &roots {
        match root {
            EigenValueRep::Rational(r) => {
                // Exact eigenvectors; orthogonalize inside the eigenspace in
                // the L2 inner product of the represented functions.
                let shifted: Vec<Vec<Rat>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                if i == j {
                                    &spec.matrix[i][j] - r
                                } else {
                                    spec.matrix[i][j].clone()
                                }
                            })
                            .collect()
                    })
                    .collect();
                let null = rational_nullspace(&shifted);
                assert_eq!(null.len(), *mult, "semisimple eigenvalue expected");
                let mut funcs: Vec<Poly> = Vec::new();
                for coords in &null {
                    let mut f = Poly::zero();
                    for (b, c) in spec.basis.iter().zip(coords) {
                        f = f + b.scale(c);
                    }
                    for prev in &funcs {
                        let proj = f.inner_product(prev) / prev.inner_product(prev);
                        f = f - prev.scale(&proj);
                    }
                    funcs.push(f);
                }
                for f in funcs {
                    eigen.push(EigenPair {
                        lambda_float: to_f64(r),
                        lambda_exact: Some(fmt_rat(r)),
                        vector: f.coeffs_f64(),
                        vector_exact: Some(f),
                    });
                }
            }
            _ => {
                assert_eq!(*mult, 1, "irrational eigenvalues are simple here");
                let lambda = root.to_f64();
                let m = matrix_f64(&spec.matrix) - nalgebra::DMatrix::identity(n, n) * lambda;
                let svd = m.svd(false, true);
                let vt = svd.v_t.as_ref().expect("svd with v_t");
                let coords: Vec<f64> = (0..n).map(|j| vt[(n - 1, j)]).collect();
                eigen.push(EigenPair {
                    lambda_float: lambda,
                    lambda_exact: root.exact_string(),
                    vector: poly_f64_from_coords(&spec.basis, &coords),
                    vector_exact: None,
                });
            }
        }
    }
    eigen.sort_by(|a, b| a.lambda_float.partial_cmp(&b.lambda_float).unwrap());

    let nonzero = eigen.iter().filter(|e| e.lambda_float != 0.0).count();
    assert_eq!(nonzero, spec.rank, "rank equals the number of nonzero eigenvalues");

    let mut resolution = Vec::new();
    for e in &eigen {
        if e.lambda_float == 0.0 {
            continue;
        }
        let norm = poly_inner_f64(&e.vector, &e.vector).sqrt();
        let unit: Vec<f64> = e.vector.iter().map(|c| c / norm).collect();
        resolution.push((e.lambda_float, unit));
    }
    spec.eigen = eigen;
    spec.resolution = resolution;
    Ok(spec)
}

/// Rank of the perturbation, by exact elimination on the matrix.
pub fn rank(bc: &BoundaryCondition) -> Result<usize, PerturbError> {
    Ok(perturbation_matrix(bc)?.rank)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedEigen {
    pub lambda: f64,
    pub exact: Option<String>,
    /// Monomial coefficients, ascending.
    pub vector: Vec<f64>,
}

fn surd_pair(a: f64, s: f64) -> (f64, f64) {
    (a - s, a + s)
}

/// Closed-form eigenpairs where a published formula exists: the named
/// problems, the coupled family with nonzero discriminant, the
/// `beta = -alpha` zero-discriminant family, and the one-sided Robin family.
/// Values are evaluated in double precision and must agree with
/// [`perturbation_spectrum`] to 1e-12.
pub fn closed_form_spectrum(bc: &BoundaryCondition) -> Result<Vec<ClosedEigen>, PerturbError> {
    let s30 = 30f64.sqrt();
    let named = |items: Vec<(f64, &str, Vec<f64>)>| {
        items
            .into_iter()
            .map(|(l, s, v)| ClosedEigen { lambda: l, exact: Some(s.to_string()), vector: v })
            .collect::<Vec<_>>()
    };

    if bc == &BoundaryCondition::Dirichlet {
        return Ok(named(vec![
            (-0.25, "-1/4", vec![1.0]),
            (1.0 / 12.0, "1/12", vec![-0.5, 1.0]),
        ]));
    }
    if bc == &BoundaryCondition::AntiPeriodic {
        return Ok(named(vec![(-0.25, "-1/4", vec![1.0])]));
    }
    if bc == &BoundaryCondition::Periodic {
        return Ok(named(vec![
            (1.0 / 12.0, "1/12", vec![-0.5, 1.0]),
            (
                (-5.0 - s30) / 60.0,
                "(-5-sqrt(30))/60",
                vec![(10.0 + s30) / 30.0, -1.0, 1.0],
            ),
            (
                (-5.0 + s30) / 60.0,
                "(-5+sqrt(30))/60",
                vec![(10.0 - s30) / 30.0, -1.0, 1.0],
            ),
        ]));
    }
    if bc == &BoundaryCondition::neumann() {
        return Ok(named(vec![
            (
                (-5.0 - s30) / 60.0,
                "(-5-sqrt(30))/60",
                vec![-(10.0 + s30) / 30.0, 1.0, -1.0],
            ),
            (
                (-5.0 + s30) / 60.0,
                "(-5+sqrt(30))/60",
                vec![(-10.0 + s30) / 30.0, 1.0, -1.0],
            ),
        ]));
    }
    if bc == &BoundaryCondition::krein_von_neumann() {
        let s462 = 462f64.sqrt();
        return Ok(named(vec![
            (
                (-5.0 - s30) / 60.0,
                "(-5-sqrt(30))/60",
                vec![(10.0 + s30) / 30.0, -1.0, 1.0],
            ),
            (
                (-5.0 + s30) / 60.0,
                "(-5+sqrt(30))/60",
                vec![(10.0 - s30) / 30.0, -1.0, 1.0],
            ),
            (
                (21.0 - s462) / 420.0,
                "(21-sqrt(462))/420",
                vec![(14.0 - s462) / 140.0, -(21.0 + s462) / 70.0, -1.5, 1.0],
            ),
            (
                (21.0 + s462) / 420.0,
                "(21+sqrt(462))/420",
                vec![(14.0 + s462) / 140.0, -(21.0 - s462) / 70.0, -1.5, 1.0],
            ),
        ]));
    }
    if bc == &BoundaryCondition::radoux() {
        let s2982 = 2982f64.sqrt();
        let c1 = -5.0 / 921.0 * (126.0 + s2982);
        let c2 = 5.0 / 921.0 * (-126.0 + s2982);
        return Ok(named(vec![
            (
                (-21.0 - s2982) / 420.0,
                "(-21-sqrt(2982))/420",
                vec![c1, 1.0, 0.0, c1],
            ),
            (
                (-21.0 + s2982) / 420.0,
                "(-21+sqrt(2982))/420",
                vec![c2, 1.0, 0.0, c2],
            ),
        ]));
    }

    match bc {
        BoundaryCondition::Gsarc { alpha, beta, delta } => {
            let disc = bc::gsarc_discriminant(alpha, beta, delta);
            if !disc.is_zero() {
                return Ok(gsarc_nonzero_closed_form(alpha, beta, delta, &disc));
            }
            if beta == &-alpha.clone() && !alpha.is_zero() && alpha != &int(-1) {
                // Quadratic reduction: the Neumann pair plus alpha/(12(1+alpha))
                // on x - 1/2.
                let a = to_f64(alpha);
                let l1 = a / (12.0 * (1.0 + a));
                let exact1 = fmt_rat(&(alpha / (int(12) * (int(1) + alpha))));
                let (lm, lp) = surd_pair(-5.0 / 60.0, s30 / 60.0);
                return Ok(vec![
                    ClosedEigen { lambda: l1, exact: Some(exact1), vector: vec![-0.5, 1.0] },
                    ClosedEigen {
                        lambda: lm,
                        exact: Some("(-5-sqrt(30))/60".into()),
                        vector: vec![(10.0 + s30) / 30.0, -1.0, 1.0],
                    },
                    ClosedEigen {
                        lambda: lp,
                        exact: Some("(-5+sqrt(30))/60".into()),
                        vector: vec![(10.0 - s30) / 30.0, -1.0, 1.0],
                    },
                ]);
            }
            Err(PerturbError::NoClosedForm(bc.name()))
        }
        BoundaryCondition::LeftDirichletRightRobin { delta } => {
            Ok(ldrr_closed_form(delta))
        }
        _ => Err(PerturbError::NoClosedForm(bc.name())),
    }
}

/// Nonzero-discriminant coupled family. With
/// `tilde = (3 - 3d - b^2 - ad)^2 + 3 (3 + a - 2d - b^2 - ad)(a + d)`
/// the eigenvalues are `[(6 + 3a - 3d - b^2 - ad) -+ 2 sqrt(tilde)] / (12 Delta)`
/// and the eigenvectors `(3 - 3d - b^2 - ad -+ sqrt(tilde)) / (3(a + d)) + x`
/// when `a + d != 0`; when `a + d = 0` the matrix is triangular.
fn gsarc_nonzero_closed_form(alpha: &Rat, beta: &Rat, delta: &Rat, disc: &Rat) -> Vec<ClosedEigen> {
    let q = beta * beta + alpha * delta;
    let apd = alpha + delta;
    if apd.is_zero() {
        let m11 = (int(4) + alpha - int(3) * delta - &q) / (int(4) * disc);
        let m12 = (int(3) + alpha - int(2) * delta - &q) / (int(6) * disc);
        let m22 = (int(3) * alpha + int(3) * delta + &q) / (int(12) * disc);
        if m11 == m22 {
            return vec![
                ClosedEigen { lambda: to_f64(&m11), exact: Some(fmt_rat(&m11)), vector: vec![1.0] },
                ClosedEigen { lambda: to_f64(&m22), exact: Some(fmt_rat(&m22)), vector: vec![0.0, 1.0] },
            ];
        }
        let a0 = &m12 / (&m22 - &m11);
        return vec![
            ClosedEigen { lambda: to_f64(&m11), exact: Some(fmt_rat(&m11)), vector: vec![1.0] },
            ClosedEigen {
                lambda: to_f64(&m22),
                exact: Some(fmt_rat(&m22)),
                vector: vec![to_f64(&a0), 1.0],
            },
        ];
    }
    let core = int(3) - int(3) * delta - &q;
    let tilde = &core * &core + int(3) * (int(3) + alpha - int(2) * delta - &q) * &apd;
    let tilde_f = to_f64(&tilde);
    assert!(tilde_f >= 0.0, "real spectrum");
    let sq = tilde_f.sqrt();
    let head = to_f64(&(int(6) + int(3) * alpha - int(3) * delta - &q));
    let dd = to_f64(disc);
    let core_f = to_f64(&core);
    let apd_f = to_f64(&apd);
    let mut out = Vec::new();
    for sign in [-1.0, 1.0] {
        let lambda = (head + 2.0 * sign * sq) / (12.0 * dd);
        let a0 = (core_f + sign * sq) / (3.0 * apd_f);
        out.push(ClosedEigen { lambda, exact: None, vector: vec![a0, 1.0] });
    }
    out.sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).unwrap());
    out
}

/// One-sided Robin family `u(0) = 0`, `u'(1) = d*u(1)`, `d != 1`. The exact
/// 2x2 matrix is `[[-1/4, -1/6], [1/(2(d-1)), (d+3)/(12(d-1))]]` with
/// determinant -1/48, so
/// `lambda = (3-d)/(12(d-1)) +- sqrt(d^2 - 3d + 3)/(6(d-1))`.
fn ldrr_closed_form(delta: &Rat) -> Vec<ClosedEigen> {
    assert!(!delta.is_one(), "the Radoux case is tabulated separately");
    let d = to_f64(delta);
    let head = (3.0 - d) / (12.0 * (d - 1.0));
    let sq = (d * d - 3.0 * d + 3.0).sqrt() / (6.0 * (d - 1.0));
    let m22 = (d + 3.0) / (12.0 * (d - 1.0));
    let m21 = 1.0 / (2.0 * (d - 1.0));
    // Exact surd strings from the integerized characteristic quadratic.
    let m = vec![
        vec![rat(-1, 4), rat(-1, 6)],
        vec![
            int(1) / (int(2) * (delta - int(1))),
            (delta + int(3)) / (int(12) * (delta - int(1))),
        ],
    ];
    let cp = char_poly(&m);
    let roots = real_eigenvalues(&cp);
    let mut out = Vec::new();
    for sign in [-1.0, 1.0] {
        let lambda = head + sign * sq;
        let a0 = (lambda - m22) / m21;
        let exact = roots
            .iter()
            .find(|(r, _)| (r.to_f64() - lambda).abs() < 1e-13)
            .and_then(|(r, _)| r.exact_string());
        out.push(ClosedEigen { lambda, exact, vector: vec![a0, 1.0] });
    }
    out.sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).unwrap());
    out
}

#[derive(Debug, Clone)]
pub struct VolterraDecomposition {
    /// Matrix of `T_V f = -1/2 Int (x-y) f(y) dy` on coordinates `(m, b)` of
    /// `f = m x + b`.
    pub matrix: [[Rat; 2]; 2],
    pub eigenvalues: [Complex64; 2],
    /// Eigenvector coefficients `[c1, c0]` for `u = c1 x + c0`.
    pub eigenvectors: [[Complex64; 2]; 2],
    pub kernel_identity_ok: bool,
}

/// Splitting of the squared Volterra operator into Hermitian components:
/// `V^2 = K - T_V` where `K` has kernel `-1/2|x-y|` and
/// `T_V f = -1/2 Int (x-y) f(y) dy` is a rank-2 skew remainder with purely
/// imaginary spectrum `+-i/(2 sqrt(12))`.
pub fn volterra_decomposition() -> VolterraDecomposition {
    // Branch identity: (x-y)*[x<=y] - 1/2 (x-y) = -1/2|x-y| on both branches.
    let v2_on_lower = BivarPoly::from_terms([(1, 0, int(1)), (0, 1, int(-1))]);
    let tv = BivarPoly::from_terms([(1, 0, rat(-1, 2)), (0, 1, rat(1, 2))]);
    // x <= y: kappa = (x-y)/2; x > y: kappa = (y-x)/2.
    let kappa_lower = BivarPoly::from_terms([(1, 0, rat(1, 2)), (0, 1, rat(-1, 2))]);
    let kappa_upper = BivarPoly::from_terms([(1, 0, rat(-1, 2)), (0, 1, rat(1, 2))]);
    let lower_ok = v2_on_lower + tv.clone() == kappa_lower;
    let upper_ok = tv == kappa_upper;
    let kernel_identity_ok = lower_ok && upper_ok;

    let matrix = [
        [rat(-1, 4), rat(-1, 2)],
        [rat(1, 6), rat(1, 4)],
    ];
    let lam = 1.0 / (2.0 * 12f64.sqrt());
    let l1 = Complex64::new(0.0, lam);
    let l2 = Complex64::new(0.0, -lam);
    let s3 = 3f64.sqrt();
    let u1 = [Complex64::new(-1.5, s3 / 2.0), Complex64::new(1.0, 0.0)];
    let u2 = [Complex64::new(-1.5, -s3 / 2.0), Complex64::new(1.0, 0.0)];
    VolterraDecomposition {
        matrix,
        eigenvalues: [l1, l2],
        eigenvectors: [u1, u2],
        kernel_identity_ok,
    }
}
