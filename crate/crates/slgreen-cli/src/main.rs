//! Command-line front end: classification, Green's functions, Riesz kernels,
//! resolvent evaluation, root scans, Laurent data, perturbation spectra, the
//! Volterra splitting, validation suites, and table regeneration.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;
use slgreen::bc::{self, BoundaryCondition};
use slgreen::greens::{green_kernel, riesz_kernel, verify_green};
use slgreen::nystrom;
use slgreen::perturbation::{
    self, perturbation_spectrum, volterra_decomposition, PerturbationSpectrum,
};
use slgreen::rational::{fmt_rat, parse_rat};
use slgreen::resolvent::{
    adaptive_epsilon, characteristic_roots, laurent_contour, laurent_limits, resolvent_eval,
};

#[derive(Parser)]
#[command(
    name = "slgreen",
    about = "Integral-operator realizations of coupled self-adjoint Sturm-Liouville problems on [0,1]",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BcArgs {
    /// Named problem: nonlocal | kvn | dirichlet | neumann | periodic |
    /// anti-periodic | radoux | mixed | kato293 | kato367 | stakgold
    #[arg(long)]
    named: Option<String>,
    /// Coupled parameters as exact rationals "p/q" (requires beta and delta).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// One-sided Robin: u(0) = 0, u'(1) = <LDRR> * u(1), rational "p/q".
    #[arg(long, allow_hyphen_values = true)]
    ldrr: Option<String>,
    /// Parameter for kato293 (delta = 1/tau), kato367 (delta = -tau) and
    /// stakgold (tan(theta), delta = -tan(theta)).
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
}

#[derive(Clone, Copy, PartialEq, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Discriminant, zero-eigenvalue flag and perturbation rank.
    Classify {
        #[command(flatten)]
        bc: BcArgs,
    },
    /// Green's function G0 with exact rational coefficients.
    Green {
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Sample grid size per axis for CSV output.
        #[arg(long, default_value_t = 11)]
        grid: usize,
    },
    /// Riesz projection kernel p (kernel of -P).
    Riesz {
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = 11)]
        grid: usize,
    },
    /// Evaluate the closed-form resolvent kernel G(z, x, y).
    ResolventEval {
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        z_im: f64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Real characteristic roots (eigenvalues) up to --zmax.
    Roots {
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, default_value_t = 400.0)]
        zmax: f64,
        /// Also scan the negative (hyperbolic) axis.
        #[arg(long, default_value_t = false)]
        negative: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Laurent data (p, G0, D) at a sample point, by limits and by contour.
    Laurent {
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        /// Contour radius; defaults to half the first characteristic root,
        /// capped at 1.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 256)]
        nodes: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Perturbation matrix, spectrum, rank and resolution.
    Perturb {
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Splitting of the squared Volterra operator and its rank-2 remainder.
    Volterra {
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Exact identity checks plus Nystrom spectral validation.
    Validate {
        /// Nystrom resolution (multiple of 8, between 16 and 2048).
        #[arg(long, default_value_t = 128)]
        n: usize,
        /// Number of discrete eigenvalues used in the duality check.
        #[arg(long, default_value_t = 12)]
        top: usize,
        /// Verify identities on monomials up to this degree (max 6).
        #[arg(long, default_value_t = 4)]
        max_deg: usize,
        /// Seed for the random coupled-parameter sweep.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Markdown reproductions of the classification, Green's-function and
    /// Riesz tables and the named perturbation matrices.
    Tables,
}

fn fail(msg: impl std::fmt::Display) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(1);
}

fn resolve_bc(args: &BcArgs) -> BoundaryCondition {
    if let Some(name) = &args.named {
        let lname = name.to_ascii_lowercase();
        if let Some(bc) = bc::bc_from_named(&lname) {
            return bc;
        }
        let tau = args.tau.as_deref().map(|t| {
            parse_rat(t).unwrap_or_else(|e| fail(format!("invalid --tau: {e}")))
        });
        return match (lname.as_str(), tau) {
            ("kato293", Some(t)) => BoundaryCondition::kato_293(t)
                .unwrap_or_else(|e| fail(e)),
            ("kato367", Some(t)) => BoundaryCondition::kato_367(t),
            ("stakgold", Some(t)) => BoundaryCondition::stakgold(t),
            ("kato293" | "kato367" | "stakgold", None) => {
                fail(format!("--named {lname} requires --tau"))
            }
            _ => fail(format!("unknown named boundary condition: {name}")),
        };
    }
    if let Some(d) = &args.ldrr {
        let delta = parse_rat(d).unwrap_or_else(|e| fail(format!("invalid --ldrr: {e}")));
        return BoundaryCondition::LeftDirichletRightRobin { delta };
    }
    match (&args.alpha, &args.beta, &args.delta) {
        (Some(a), Some(b), Some(d)) => {
            let parse = |s: &String, which: &str| {
                parse_rat(s).unwrap_or_else(|e| fail(format!("invalid --{which}: {e}")))
            };
            BoundaryCondition::gsarc(parse(a, "alpha"), parse(b, "beta"), parse(d, "delta"))
        }
        (None, None, None) => fail("select a problem with --named, --ldrr, or --alpha/--beta/--delta"),
        _ => fail("--alpha, --beta and --delta must be given together"),
    }
}

fn kernel_csv(k: impl Fn(f64, f64) -> f64, grid: usize) -> String {
    let mut out = String::from("x,y,value\n");
    for i in 0..grid {
        for j in 0..grid {
            let x = i as f64 / (grid - 1) as f64;
            let y = j as f64 / (grid - 1) as f64;
            out.push_str(&format!("{x:.6},{y:.6},{:.15e}\n", k(x, y)));
        }
    }
    out
}

fn spectrum_json(spec: &PerturbationSpectrum) -> serde_json::Value {
    json!({
        "bc": spec.bc,
        "t": spec.t,
        "basis": spec.basis,
        "matrix": spec.matrix.iter().map(|row| row.iter().map(fmt_rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "eigen": spec.eigen.iter().map(|e| json!({
            "lambda_float": e.lambda_float,
            "lambda_exact": e.lambda_exact,
            "vector": e.vector,
        })).collect::<Vec<_>>(),
        "rank": spec.rank,
        "resolution": spec.resolution.iter().map(|(l, u)| json!({
            "lambda": l,
            "unit_vector": u,
        })).collect::<Vec<_>>(),
    })
}

fn cmd_classify(args: &BcArgs) {
    let bc = resolve_bc(args);
    let disc = match bc::discriminant(&bc) {
        Ok(d) => Some(d.as_string()),
        Err(_) => None,
    };
    let rank = perturbation::rank(&bc).unwrap_or_else(|e| fail(e));
    let out = json!({
        "name": bc.name(),
        "delta": disc,
        "rank": rank,
        "zero_eig": bc::has_zero_eigenvalue(&bc),
    });
    println!("{out}");
}

fn cmd_green(args: &BcArgs, format: Format, grid: usize) {
    let bc = resolve_bc(args);
    let pkg = green_kernel(&bc).unwrap_or_else(|e| fail(e));
    match format {
        Format::Json => println!("{}", serde_json::to_string(&pkg).unwrap()),
        Format::Csv => print!("{}", kernel_csv(|x, y| pkg.g0.eval_f64(x, y), grid)),
        Format::Md => {
            println!("| problem | G0(x,y) |");
            println!("|---|---|");
            println!(
                "| {} | {}*\\|x-y\\| + {} |",
                bc.name(),
                fmt_rat(pkg.g0.abs_coeff()),
                pkg.g0.lower()
            );
        }
    }
}

fn cmd_riesz(args: &BcArgs, format: Format, grid: usize) {
    let bc = resolve_bc(args);
    let p = riesz_kernel(&bc);
    match format {
        Format::Json => println!("{}", json!({ "bc": bc, "p": p })),
        Format::Csv => print!("{}", kernel_csv(|x, y| p.eval_f64(x, y), grid)),
        Format::Md => {
            println!("| problem | p(x,y) |");
            println!("|---|---|");
            println!("| {} | {} |", bc.name(), p);
        }
    }
}

fn cmd_resolvent_eval(args: &BcArgs, z: f64, z_im: f64, x: f64, y: f64, format: Format) {
    let bc = resolve_bc(args);
    let val = resolvent_eval(&bc, Complex64::new(z, z_im), x, y).unwrap_or_else(|e| fail(e));
    match format {
        Format::Csv => println!("z_re,z_im,x,y,re,im\n{z},{z_im},{x},{y},{:.15e},{:.15e}", val.re, val.im),
        _ => println!(
            "{}",
            json!({ "z_re": z, "z_im": z_im, "x": x, "y": y, "re": val.re, "im": val.im })
        ),
    }
}

fn cmd_roots(args: &BcArgs, zmax: f64, negative: bool, format: Format) {
    let bc = resolve_bc(args);
    if zmax > 1e4 {
        fail("--zmax must be at most 1e4");
    }
    let roots = characteristic_roots(&bc, zmax);
    let neg = if negative {
        slgreen::resolvent::negative_characteristic_roots(&bc)
    } else {
        Vec::new()
    };
    match format {
        Format::Csv => {
            println!("z,multiplicity");
            for z in &neg {
                println!("{z:.12},1");
            }
            for r in &roots {
                println!("{:.12},{}", r.z, r.multiplicity);
            }
        }
        _ => println!(
            "{}",
            json!({
                "bc": bc,
                "roots": roots.iter().map(|r| json!({"z": r.z, "multiplicity": r.multiplicity})).collect::<Vec<_>>(),
                "negative_roots": neg,
            })
        ),
    }
}

fn cmd_laurent(args: &BcArgs, x: f64, y: f64, epsilon: Option<f64>, nodes: usize, format: Format) {
    let bc = resolve_bc(args);
    let eps = epsilon.unwrap_or_else(|| adaptive_epsilon(&bc));
    let limits = laurent_limits(&bc, &[(x, y)]).unwrap_or_else(|e| fail(e));
    let pc = laurent_contour(&bc, -1, x, y, eps, nodes).unwrap_or_else(|e| fail(e));
    let gc = laurent_contour(&bc, 0, x, y, eps, nodes).unwrap_or_else(|e| fail(e));
    let dc = laurent_contour(&bc, -2, x, y, eps, nodes).unwrap_or_else(|e| fail(e));
    match format {
        Format::Csv => {
            println!("x,y,p_limit,g0_limit,d_limit,p_contour,g0_contour,d_contour,epsilon,nodes");
            println!(
                "{x},{y},{:.15e},{:.15e},{:.15e},{pc:.15e},{gc:.15e},{dc:.15e},{eps},{nodes}",
                limits.p_hat[0], limits.g0_hat[0], limits.d_hat[0]
            );
        }
        _ => println!(
            "{}",
            json!({
                "bc": bc, "x": x, "y": y, "epsilon": eps, "nodes": nodes,
                "limit": { "p": limits.p_hat[0], "g0": limits.g0_hat[0], "d": limits.d_hat[0] },
                "contour": { "p": pc, "g0": gc, "d": dc },
            })
        ),
    }
}

fn cmd_perturb(args: &BcArgs, format: Format) {
    let bc = resolve_bc(args);
    let spec = perturbation_spectrum(&bc).unwrap_or_else(|e| fail(e));
    match format {
        Format::Md => {
            println!("basis: {}", spec.basis.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", "));
            println!("{}", matrix_md(&spec));
            println!();
            println!("| lambda | exact | eigenfunction |");
            println!("|---|---|---|");
            for e in &spec.eigen {
                let poly: Vec<String> = e.vector.iter().map(|c| format!("{c:.12}")).collect();
                println!(
                    "| {:.15} | {} | [{}] |",
                    e.lambda_float,
                    e.lambda_exact.clone().unwrap_or_else(|| "-".into()),
                    poly.join(", ")
                );
            }
            println!();
            println!("rank: {}", spec.rank);
        }
        _ => println!("{}", spectrum_json(&spec)),
    }
}

fn matrix_md(spec: &PerturbationSpectrum) -> String {
    let rows: Vec<String> = spec
        .matrix
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(fmt_rat).collect();
            format!("| {} |", cells.join(" | "))
        })
        .collect();
    rows.join("\n")
}

fn cmd_volterra(format: Format) {
    let v = volterra_decomposition();
    let out = json!({
        "matrix": v.matrix.iter().map(|row| row.iter().map(fmt_rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "eigen": v.eigenvalues.iter().zip(v.eigenvectors.iter()).map(|(l, u)| json!({
            "lambda_re": l.re,
            "lambda_im": l.im,
            "lambda_exact": if l.im > 0.0 { "i/(2*sqrt(12))" } else { "-i/(2*sqrt(12))" },
            "vector_re": [u[0].re, u[1].re],
            "vector_im": [u[0].im, u[1].im],
        })).collect::<Vec<_>>(),
        "kernel_identity_ok": v.kernel_identity_ok,
    });
    match format {
        Format::Md => {
            println!("matrix on (m, b) for f = m*x + b:");
            println!("| -1/4 | -1/2 |");
            println!("| 1/6 | 1/4 |");
            println!("eigenvalues: +-i/(2*sqrt(12))");
        }
        _ => println!("{out}"),
    }
}

fn cmd_validate(n: usize, top: usize, max_deg: usize, seed: u64, format: Format) {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    if max_deg > 6 {
        fail("--max-deg is capped at 6");
    }
    let mut results: Vec<serde_json::Value> = Vec::new();
    let mut ok = true;
    let named = [
        BoundaryCondition::nonlocal(),
        BoundaryCondition::krein_von_neumann(),
        BoundaryCondition::Dirichlet,
        BoundaryCondition::neumann(),
        BoundaryCondition::Periodic,
        BoundaryCondition::AntiPeriodic,
        BoundaryCondition::radoux(),
        BoundaryCondition::dirichlet_neumann_mixed(),
    ];
    for bc in &named {
        let verified = verify_green(bc, max_deg).is_ok();
        let identity = nystrom::operator_identity_check(bc, n)
            .map(|r| r.max_residual)
            .unwrap_or(f64::NAN);
        let identity_ok = identity < 1e-12;
        // Pole/eigenvalue duality: first three characteristic roots against
        // the leading discrete spectrum.
        let duality = green_kernel(bc).ok().and_then(|pkg| {
            let roots: Vec<f64> = characteristic_roots(bc, 400.0)
                .iter()
                .take(3)
                .map(|r| r.z)
                .collect();
            let eigs = nystrom::nystrom_eigs(&pkg.g0, n, top).ok()?;
            nystrom::match_roots_to_eigs(&roots, &eigs)
        });
        let duality_ok = duality.map_or(false, |w| w < 1e-4);
        ok &= verified && identity_ok && duality_ok;
        results.push(json!({
            "bc": bc.name(),
            "identities_exact": verified,
            "nystrom_identity_residual": identity,
            "duality_rel_err": duality,
        }));
    }
    // One-sided Robin with delta > 1: the unique negative eigenvalue is seen
    // by both the hyperbolic root scan and the discrete spectrum.
    let kato = BoundaryCondition::kato_293(slgreen::rational::rat(1, 2)).unwrap();
    let neg = nystrom::negative_eigenvalue_scan(&kato, n).unwrap_or_else(|e| fail(e));
    let neg_ok = neg.characteristic_roots.len() == 1
        && neg.negative_eigs.len() == 1
        && neg.rel_err.map_or(false, |r| r < 1e-4);
    ok &= neg_ok;
    results.push(json!({
        "bc": kato.name(),
        "negative_root": neg.characteristic_roots.first(),
        "negative_eigenvalue": neg.negative_eigs.first(),
        "negative_rel_err": neg.rel_err,
    }));
    // Random coupled sweep: exact identities at modest degree.
    let mut rng = StdRng::seed_from_u64(seed);
    let mut sweep_ok = true;
    let mut done = 0;
    while done < 10 {
        let a = slgreen::rational::rat(rng.gen_range(-5i64..=5), rng.gen_range(1i64..=3));
        let b = slgreen::rational::rat(rng.gen_range(-5i64..=5), rng.gen_range(1i64..=3));
        let d = slgreen::rational::rat(rng.gen_range(-5i64..=5), rng.gen_range(1i64..=3));
        let bc = BoundaryCondition::gsarc(a, b, d);
        match verify_green(&bc, 2) {
            Ok(_) => {}
            Err(slgreen::greens::GreensError::LimitingCase) => continue,
            Err(e) => {
                sweep_ok = false;
                results.push(json!({"bc": bc.name(), "error": e.to_string()}));
            }
        }
        done += 1;
    }
    ok &= sweep_ok;
    let out = json!({ "n": n, "max_deg": max_deg, "ok": ok, "results": results });
    match format {
        Format::Md => {
            for r in &results {
                println!("- {}", r);
            }
            println!("overall: {}", if ok { "ok" } else { "FAILED" });
        }
        _ => println!("{out}"),
    }
    if !ok {
        std::process::exit(1);
    }
}

fn cmd_tables() {
    println!("## Classification: discriminant and perturbation rank");
    println!();
    println!("| problem | alpha | beta | delta | discriminant | zero eigenvalue | rank |");
    println!("|---|---|---|---|---|---|---|");
    let rows: Vec<(&str, BoundaryCondition)> = vec![
        ("nonlocal", BoundaryCondition::nonlocal()),
        ("krein-von-neumann", BoundaryCondition::krein_von_neumann()),
        ("dirichlet", BoundaryCondition::Dirichlet),
        ("neumann", BoundaryCondition::neumann()),
        ("dirichlet-neumann-mixed", BoundaryCondition::dirichlet_neumann_mixed()),
        ("radoux", BoundaryCondition::radoux()),
        ("periodic", BoundaryCondition::Periodic),
        ("anti-periodic", BoundaryCondition::AntiPeriodic),
    ];
    for (name, bc) in &rows {
        let (a, b, d) = match bc {
            BoundaryCondition::Gsarc { alpha, beta, delta } => {
                (fmt_rat(alpha), fmt_rat(beta), fmt_rat(delta))
            }
            BoundaryCondition::Dirichlet => ("inf".into(), "0".into(), "inf".into()),
            BoundaryCondition::LeftDirichletRightRobin { delta } => {
                ("inf".into(), "0".into(), fmt_rat(delta))
            }
            _ => ("-".into(), "-".into(), "-".into()),
        };
        let disc = bc::discriminant(bc).map(|v| v.as_string()).unwrap_or_else(|_| "-".into());
        let rank = perturbation::rank(bc).map(|r| r.to_string()).unwrap_or_else(|_| "-".into());
        println!(
            "| {name} | {a} | {b} | {d} | {disc} | {} | {rank} |",
            bc::has_zero_eigenvalue(bc)
        );
    }
    println!();
    println!("## Green's functions G0(x,y) = -1/2*|x-y| + q(x,y)");
    println!();
    println!("| problem | polynomial part q(x,y) |");
    println!("|---|---|");
    for (name, bc) in &rows {
        match green_kernel(bc) {
            Ok(pkg) => println!("| {name} | {} |", pkg.g0.lower()),
            Err(_) => println!("| {name} | - |"),
        }
    }
    println!();
    println!("## Riesz projection kernels p(x,y)");
    println!();
    println!("| problem | p(x,y) |");
    println!("|---|---|");
    for (name, bc) in &rows {
        println!("| {name} | {} |", riesz_kernel(bc));
    }
    println!();
    println!("## Perturbation matrices");
    println!();
    for (name, bc) in &rows {
        if let Ok(spec) = perturbation_spectrum(bc) {
            println!("### {name}");
            println!();
            println!(
                "basis: {}",
                spec.basis.iter().map(|b| format!("{b}")).collect::<Vec<_>>().join(", ")
            );
            println!();
            println!("{}", matrix_md(&spec));
            println!();
            let eigen: Vec<String> = spec
                .eigen
                .iter()
                .map(|e| e.lambda_exact.clone().unwrap_or_else(|| format!("{:.15}", e.lambda_float)))
                .collect();
            println!("eigenvalues: {}", eigen.join(", "));
            println!();
        }
    }
    println!("### volterra remainder");
    println!();
    println!("matrix on (m, b) for f = m*x + b:");
    println!();
    println!("| -1/4 | -1/2 |");
    println!("| 1/6 | 1/4 |");
    println!();
    println!("eigenvalues: i/(2*sqrt(12)), -i/(2*sqrt(12))");
}

fn main() {
    let cli = Cli::parse();
    match cli.command {
        Command::Classify { bc } => cmd_classify(&bc),
        Command::Green { bc, format, grid } => cmd_green(&bc, format, grid.max(2)),
        Command::Riesz { bc, format, grid } => cmd_riesz(&bc, format, grid.max(2)),
        Command::ResolventEval { bc, z, z_im, x, y, format } => {
            cmd_resolvent_eval(&bc, z, z_im, x, y, format)
        }
        Command::Roots { bc, zmax, negative, format } => cmd_roots(&bc, zmax, negative, format),
        Command::Laurent { bc, x, y, epsilon, nodes, format } => {
            cmd_laurent(&bc, x, y, epsilon, nodes, format)
        }
        Command::Perturb { bc, format } => cmd_perturb(&bc, format),
        Command::Volterra { format } => cmd_volterra(format),
        Command::Validate { n, top, max_deg, seed, format } => cmd_validate(n, top, max_deg, seed, format),
        Command::Tables => cmd_tables(),
    }
}
