//! Cross-module invariants: coupling-matrix round trips, kernel symmetry on
//! rational grids, Neumann-series decay of the resolvent, trace consistency
//! of the perturbation, and property tests for the exact algebra.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use slgreen::bc::{self, BoundaryCondition as BC};
use slgreen::bivar::BivarPoly;
use slgreen::greens::green_kernel;
use slgreen::kernel::PiecewiseKernel;
use slgreen::nystrom::{self, KernelF64};
use slgreen::perturbation::{perturbation_kernel, perturbation_matrix, perturbation_spectrum};
use slgreen::poly::Poly;
use slgreen::rational::{int, rat, to_f64, Rat};
use slgreen::resolvent::{characteristic_roots, ResolventForm};
use num_complex::Complex64;
use num_traits::Zero;

fn named_bcs() -> Vec<BC> {
    vec![
        BC::nonlocal(),
        BC::krein_von_neumann(),
        BC::Dirichlet,
        BC::neumann(),
        BC::Periodic,
        BC::AntiPeriodic,
        BC::radoux(),
        BC::dirichlet_neumann_mixed(),
        BC::kato_293(rat(1, 2)).unwrap(),
        BC::robin(int(2), rat(-1, 3)),
        BC::gsarc(rat(1, 2), rat(2, 3), rat(-3, 5)),
        BC::gsarc(int(2), int(-2), int(-2)),
        BC::gsarc(int(0), int(1), int(1)),
    ]
}

#[test]
fn kan_round_trip_on_random_triples() {
    let mut rng = StdRng::seed_from_u64(11);
    let mut done = 0;
    while done < 100 {
        let a = rat(rng.gen_range(-8i64..=8), rng.gen_range(1i64..=5));
        let b = rat(rng.gen_range(-8i64..=8), rng.gen_range(1i64..=5));
        let d = rat(rng.gen_range(-8i64..=8), rng.gen_range(1i64..=5));
        if b.is_zero() {
            continue;
        }
        let bc = BC::gsarc(a.clone(), b.clone(), d.clone());
        let m = bc::to_coupling_matrix(&bc).unwrap();
        assert!(m.det() == int(1));
        let p = bc::kan_decompose(&m).unwrap();
        // Reconstruction K A N = B.
        let rec = p.reconstruct();
        let mf = m.to_f64();
        for i in 0..2 {
            for j in 0..2 {
                assert!((rec[i][j] - mf[i][j]).abs() <= 1e-12 * (1.0 + mf[i][j].abs()));
            }
        }
        let Ok((af, bf, df)) = bc::kan_to_bc(&p) else {
            continue; // degenerate angle: excluded by the invariant's wording
        };
        let scale = 1.0 + to_f64(&a).abs() + to_f64(&b).abs() + to_f64(&d).abs();
        assert!((af - to_f64(&a)).abs() < 1e-9 * scale, "alpha: {af} vs {a}");
        assert!((bf - to_f64(&b)).abs() < 1e-9 * scale, "beta");
        assert!((df - to_f64(&d)).abs() < 1e-9 * scale, "delta");
        done += 1;
    }
}

#[test]
fn kernels_symmetric_on_rational_grid() {
    for bc in named_bcs() {
        let pkg = green_kernel(&bc).unwrap();
        for i in 0..20u32 {
            for j in 0..20u32 {
                let x = rat(i as i64, 19);
                let y = rat(j as i64, 19);
                let a = pkg.g0.eval(&x, &y).unwrap();
                let b = pkg.g0.eval(&y, &x).unwrap();
                assert_eq!(a, b, "{} at ({i},{j})/19", bc.name());
                assert_eq!(pkg.p.eval(&x, &y), pkg.p.eval(&y, &x));
            }
        }
    }
}

#[test]
fn perturbation_shape_invariants() {
    for bc in named_bcs() {
        let k = perturbation_kernel(&bc).unwrap();
        assert!(k.t.max_deg_x() <= 3 && k.t.max_deg_y() <= 3, "{}", bc.name());
        assert!(k.t.is_symmetric());
        let spec = perturbation_matrix(&bc).unwrap();
        assert!(spec.rank <= 4);
        // Gram representation has the same rank as the coordinate matrix.
        let n = spec.basis.len();
        let mut gram = vec![vec![Rat::zero(); n]; n];
        for (j, bj) in spec.basis.iter().enumerate() {
            let image = k.t.apply_poly(bj);
            for (i, bi) in spec.basis.iter().enumerate() {
                gram[i][j] = bi.inner_product(&image);
            }
        }
        let gram_rank = slgreen::perturbation::charpoly::rational_rank(&gram);
        assert_eq!(gram_rank, spec.rank, "{}", bc.name());
    }
}

#[test]
fn matrix_consistent_with_kernel_action() {
    // For random exact polynomials inside the section basis span, the matrix
    // action equals the kernel action.
    let mut rng = StdRng::seed_from_u64(22);
    for bc in [BC::krein_von_neumann(), BC::Periodic, BC::Dirichlet, BC::radoux()] {
        let spec = perturbation_matrix(&bc).unwrap();
        let n = spec.basis.len();
        for _ in 0..20 {
            let coords: Vec<Rat> = (0..n)
                .map(|_| rat(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=5)))
                .collect();
            let mut f = Poly::zero();
            for (b, c) in spec.basis.iter().zip(&coords) {
                f = f + b.scale(c);
            }
            let via_kernel = spec.t.apply_poly(&f);
            let mut via_matrix = Poly::zero();
            for i in 0..n {
                let mut acc = Rat::zero();
                for j in 0..n {
                    acc += &spec.matrix[i][j] * &coords[j];
                }
                via_matrix = via_matrix + spec.basis[i].scale(&acc);
            }
            assert_eq!(via_kernel, via_matrix, "{}", bc.name());
        }
    }
}

#[test]
fn eigenfunctions_orthogonal_across_distinct_eigenvalues() {
    for bc in [BC::krein_von_neumann(), BC::Periodic, BC::neumann(), BC::radoux()] {
        let spec = perturbation_spectrum(&bc).unwrap();
        for (i, a) in spec.eigen.iter().enumerate() {
            for b in spec.eigen.iter().skip(i + 1) {
                if (a.lambda_float - b.lambda_float).abs() < 1e-14 {
                    continue;
                }
                let mut ip = 0.0;
                for (p, x) in a.vector.iter().enumerate() {
                    for (q, y) in b.vector.iter().enumerate() {
                        ip += x * y / (p + q + 1) as f64;
                    }
                }
                assert!(ip.abs() < 1e-12, "{}: <u_i, u_j> = {ip}", bc.name());
            }
        }
    }
}

#[test]
fn dirichlet_reconstruction_exact_in_rationals() {
    // -1/4 * 1x1 + (1/12) * 12 (x-1/2)(y-1/2) = xy - (x+y)/2, exactly.
    let spec = perturbation_spectrum(&BC::Dirichlet).unwrap();
    let mut recon = BivarPoly::zero();
    for e in &spec.eigen {
        let u = e.vector_exact.as_ref().expect("rational eigenpairs");
        let lam = match e.lambda_exact.as_deref() {
            Some(s) => slgreen::rational::parse_rat(s).unwrap(),
            None => unreachable!(),
        };
        let w = lam / u.inner_product(u);
        recon = recon + BivarPoly::outer(u, u, &w);
    }
    assert_eq!(recon, spec.t);
}

#[test]
fn neumann_series_partial_sums_decay_geometrically() {
    // At z = 1 the Dirichlet resolvent equals sum_k T^(k+1) z^k; the partial
    // sums converge geometrically with ratio ~ z/pi^2. Iterated kernels come
    // from powers of the symmetrized Nystrom matrix: K_m(x_i, x_j) =
    // sym^m[i][j] / sqrt(w_i w_j).
    let pkg = green_kernel(&BC::Dirichlet).unwrap();
    let n = 128;
    let gf = KernelF64::from_kernel(&pkg.g0);
    let sys = nystrom::build_system(&gf, n).unwrap();
    let form = ResolventForm::new(&BC::Dirichlet);
    let (i0, j0) = (n / 3, (3 * n) / 4);
    let (x, y) = (sys.nodes[i0], sys.nodes[j0]);
    let g_true = form.eval(Complex64::new(1.0, 0.0), x, y).re;
    let scale = (sys.weights[i0] * sys.weights[j0]).sqrt();

    let mut power = sys.sym.clone();
    let mut partial = power[(i0, j0)] / scale;
    let mut errs = vec![(g_true - partial).abs()];
    for _ in 1..8 {
        power = &power * &sys.sym;
        partial += power[(i0, j0)] / scale;
        errs.push((g_true - partial).abs());
    }
    // Ratio of successive errors near 1/pi^2 (between 0.05 and 0.2).
    for w in errs.windows(2).take(5) {
        let ratio = w[1] / w[0];
        assert!(
            (0.05..0.2).contains(&ratio),
            "decay ratio {ratio} outside the geometric band, errs {errs:?}"
        );
    }
}

#[test]
fn trace_consistency_of_perturbation() {
    for bc in [BC::Dirichlet, BC::krein_von_neumann(), BC::Periodic, BC::radoux()] {
        let spec = perturbation_matrix(&bc).unwrap();
        // Exact operator trace = Int T(x,x) dx = trace of the matrix.
        let exact = spec.t.diagonal().integral_01();
        let mut mtrace = Rat::zero();
        for i in 0..spec.basis.len() {
            mtrace += &spec.matrix[i][i];
        }
        assert_eq!(exact, mtrace, "{}", bc.name());
        // Nystrom eigenvalues of T sum to the same trace.
        let eigs = nystrom::nystrom_eigs_kernel(&KernelF64::from_poly(&spec.t), 128).unwrap();
        let total: f64 = eigs.iter().sum();
        assert!((total - to_f64(&exact)).abs() < 1e-10, "{}", bc.name());
    }
}

#[test]
fn duality_converse_direction() {
    // Leading Nystrom eigenvalues (zero modes removed) are reciprocals of
    // characteristic roots; the free nonlocal operator also has one negative
    // eigenvalue, matched by the hyperbolic-axis root.
    for bc in [BC::Dirichlet, BC::nonlocal()] {
        let pkg = green_kernel(&bc).unwrap();
        let eigs = nystrom::nystrom_eigs(&pkg.g0, 256, 5).unwrap();
        let mut roots: Vec<f64> = characteristic_roots(&bc, 2000.0).iter().map(|r| r.z).collect();
        roots.extend(slgreen::resolvent::negative_characteristic_roots(&bc));
        for e in eigs {
            let hit = roots.iter().any(|&z| ((1.0 / z - e) / e).abs() < 1e-5);
            assert!(hit, "{}: eigenvalue {e} has no matching root", bc.name());
        }
    }
}

#[test]
fn nystrom_doubling_agreement() {
    for bc in [BC::Dirichlet, BC::krein_von_neumann(), BC::Periodic] {
        let pkg = green_kernel(&bc).unwrap();
        let a = nystrom::nystrom_eigs(&pkg.g0, 256, 1).unwrap()[0];
        let b = nystrom::nystrom_eigs(&pkg.g0, 512, 1).unwrap()[0];
        assert!(((a - b) / b).abs() < 1e-8, "{}: {a} vs {b}", bc.name());
    }
}

// ------------------------------------------------------------ property tests

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec(arb_rat(), 1..=max_deg + 1).prop_map(Poly::from_coeffs)
}

fn arb_bivar() -> impl Strategy<Value = BivarPoly> {
    proptest::collection::vec(((0u32..=3, 0u32..=3), arb_rat()), 0..8)
        .prop_map(|terms| BivarPoly::from_terms(terms.into_iter().map(|((i, j), c)| (i, j, c))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_is_linear(f in arb_poly(4), g in arb_poly(4), c in arb_rat()) {
        let k = PiecewiseKernel::new(rat(-1, 2), BivarPoly::from_terms([
            (1, 0, rat(1, 2)), (0, 1, rat(1, 2)), (1, 1, int(-1)),
        ]));
        let lhs = k.apply_to_polynomial(&(f.clone() + g.clone())).unwrap();
        let rhs = k.apply_to_polynomial(&f).unwrap() + k.apply_to_polynomial(&g).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = k.apply_to_polynomial(&f.scale(&c)).unwrap();
        let rhs = k.apply_to_polynomial(&f).unwrap().scale(&c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_is_bilinear_and_transposes(a in arb_bivar(), b in arb_bivar(), c in arb_bivar()) {
        let left = (a.clone() + b.clone()).compose(&c);
        let right = a.compose(&c) + b.compose(&c);
        prop_assert_eq!(left, right);
        let lhs = a.compose(&b).transpose();
        let rhs = b.transpose().compose(&a.transpose());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kernel_eval_symmetric(x in 0u32..=12, y in 0u32..=12, p in arb_bivar()) {
        // Symmetrize p so the kernel contract holds, then evaluate both ways.
        let sym = {
            let mut s = p.clone() + p.transpose();
            s = s.scale(&rat(1, 2));
            s
        };
        let k = PiecewiseKernel::new(rat(-1, 2), sym);
        let xr = rat(x as i64, 12);
        let yr = rat(y as i64, 12);
        prop_assert_eq!(k.eval(&xr, &yr).unwrap(), k.eval(&yr, &xr).unwrap());
    }

    #[test]
    fn serde_round_trip_kernel(p in arb_bivar(), abs in arb_rat()) {
        let k = PiecewiseKernel::new(abs, p);
        let json = serde_json::to_string(&k).unwrap();
        let back: PiecewiseKernel = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(k, back);
    }
}
