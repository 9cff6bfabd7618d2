use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use lp_homotopy::constants::{appendix_table, bound_ball, gt06_table, AppendixTable};
use lp_homotopy::form::random::{random_closed_form, random_form, RandomFormSpec};
use lp_homotopy::form::{format_form, parse_form, rat, KForm};
use lp_homotopy::geometry::{lp_norm, ratio_check, Domain, QuadratureConfig};
use lp_homotopy::homotopy::{homotopy_s, poincare_residual};
use lp_homotopy::il::{discretize_t, homotopy_residual, smooth_suite, DiscretizeOptions, IlOperator, Mollifier};
use lp_homotopy::lipschitz::{
    parse_map, pullback, pullback_at, pullback_pointwise_bound, transfer_check, LipschitzMap, TransferOperator,
};
use lp_homotopy::pharmonic::{p_harmonic_representative, EnergyModel, SolutionSpace, SolverOptions};
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::output::{Check, Failure, Report};
use crate::{Command, Format, Global};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Appendix,
    Gt06,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, value_enum, default_value = "appendix")]
    pub table: Table,
    /// Dimensions: `5`, `2,3,4` or `2..10`; repeatable.
    #[arg(long = "n")]
    pub n: Vec<String>,
    /// Exponents p (appendix table); repeatable.
    #[arg(long = "p")]
    pub p: Vec<f64>,
    /// Radius for the sphere table.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// ω − dSω − Sdω = 0 exactly on random forms.
    Poincare {
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Form degree; all of 1..=n when omitted.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// ‖Sω‖_p ≤ C‖ω‖_p on the unit ball for random forms.
    Bound {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 4.0)]
        p: f64,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Standard errors allowed on the Monte Carlo path.
        #[arg(long, default_value_t = 4.0)]
        sigmas: f64,
    },
    /// Pointwise pullback bound and d-commutation for random affine maps.
    Pullback {
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Certified Lipschitz constant of the maps.
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 10_000)]
        points: usize,
    },
    /// d(γω) = ω and the transferred bound for identity, scaling and shear.
    Transfer {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 4.0)]
        sigmas: f64,
    },
    /// Homotopy identity of T on the smooth suite, plus its spectrum.
    Il {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 16)]
        grid: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// Points per form for the identity residual.
        #[arg(long, default_value_t = 16)]
        points: usize,
        #[arg(long, default_value_t = 0.05)]
        max_residual: f64,
        /// Also require σ25/σ1 below this value.
        #[arg(long)]
        decay_threshold: Option<f64>,
    },
    /// Direct vs iterative p = 2 solve, the coclosed primitive of dx1∧dx2,
    /// and gradients against finite differences.
    Pharmonic {
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
    },
}

#[derive(Debug, Args)]
pub struct TransferArgs {
    /// Map file for α: V → U (see the README for the format).
    #[arg(long)]
    pub map: PathBuf,
    /// Closed form on U.
    #[arg(long)]
    pub form: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Radius of the ball V.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 4.0)]
    pub sigmas: f64,
}

#[derive(Debug, Args)]
pub struct CompactnessArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, default_value_t = 16)]
    pub grid: usize,
    /// Print only the largest N singular values.
    #[arg(long)]
    pub top: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainKind {
    Ball,
    Simplex,
}

#[derive(Debug, Args)]
pub struct PharmonicArgs {
    /// Exact form file.
    pub form: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 3)]
    pub max_degree: u32,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iterations: usize,
    #[arg(long, value_enum, default_value = "ball")]
    pub domain: DomainKind,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
}

pub fn run(command: &Command, global: &Global, cfg: &QuadratureConfig) -> Result<Report, Failure> {
    match command {
        Command::Constants(a) => constants(a, global.format.unwrap_or(Format::Pretty)),
        Command::Verify(s) => verify(s, global.format.unwrap_or(Format::Json), cfg),
        Command::TransferCheck(a) => transfer_file(a, global.format.unwrap_or(Format::Json), cfg),
        Command::IlCompactness(a) => compactness(a, global.format.unwrap_or(Format::Csv), cfg),
        Command::Pharmonic(a) => pharmonic(a, global.format.unwrap_or(Format::Json), cfg),
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_dims(specs: &[String]) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for spec in specs {
        for part in spec.split(',') {
            let part = part.trim();
            let bad = || usage(format!("bad dimension list {spec:?}"));
            if let Some((a, b)) = part.split_once("..") {
                let a: usize = a.parse().map_err(|_| bad())?;
                let b: usize = b.trim_start_matches('=').parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            } else {
                out.push(part.parse().map_err(|_| bad())?);
            }
        }
    }
    Ok(out)
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn constants(a: &ConstantsArgs, format: Format) -> Result<Report, Failure> {
    let parameters = json!({ "table": format!("{:?}", a.table).to_lowercase(), "n": a.n, "p": a.p, "r": a.r });
    let body = match a.table {
        Table::Appendix => {
            let dims = if a.n.is_empty() { vec![2, 3, 4, 5, 6, 7, 10] } else { parse_dims(&a.n)? };
            let ps = if a.p.is_empty() { vec![2.0, 2.5, 10.0] } else { a.p.clone() };
            let tables: Vec<AppendixTable> =
                dims.iter().map(|&n| appendix_table(n, &ps)).collect::<Result<_, _>>()?;
            match format {
                Format::Pretty => tables.iter().map(AppendixTable::render_pretty).collect::<Vec<_>>().join("\n"),
                Format::Csv => tables.iter().enumerate().map(|(i, t)| t.render_csv(i == 0)).collect(),
                Format::Json => to_json(&tables),
            }
        }
        Table::Gt06 => {
            let dims = if a.n.is_empty() { (2..=10).collect() } else { parse_dims(&a.n)? };
            let rows = gt06_table(dims, a.r)?;
            match format {
                Format::Pretty => {
                    let mut s = "  n |  r·2π^(n/2)/Γ(n/2)\n".to_string();
                    for (n, v) in &rows {
                        s.push_str(&format!("{n:>3} | {v:>10.4}\n"));
                    }
                    s
                }
                Format::Csv => std::iter::once("n,value\n".to_string())
                    .chain(rows.iter().map(|(n, v)| format!("{n},{v:.4}\n")))
                    .collect(),
                Format::Json => to_json(&rows.iter().map(|(n, v)| json!({"n": n, "value": v})).collect::<Vec<_>>()),
            }
        }
    };
    Ok(Report {
        body,
        parameters,
        checks: Vec::new(),
    })
}

fn checks_body(format: Format, suite: &str, checks: &[Check], extra: serde_json::Value) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(to_json(&json!({ "suite": suite, "checks": checks, "data": extra }))),
        Format::Pretty => Ok(checks
            .iter()
            .map(|c| format!("{:<28} {}  {}\n", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail))
            .collect()),
        Format::Csv => Err(usage("csv output is only available for `verify il`")),
    }
}

fn rational(x: f64) -> BigRational {
    rat((x * 1000.0).round() as i64, 1000)
}

/// Random affine map whose certified constant is at most `c`.
fn affine_within(rng: &mut ChaCha8Rng, n: usize, c: f64) -> LipschitzMap {
    loop {
        let m: Vec<Vec<BigRational>> = (0..n)
            .map(|_| (0..n).map(|_| rational(rng.random_range(-1.0..1.0))).collect())
            .collect();
        let shift: Vec<BigRational> = (0..n).map(|_| rational(rng.random_range(-0.5..0.5))).collect();
        let Ok(raw) = LipschitzMap::affine(m.clone(), shift.clone()) else {
            continue;
        };
        let s = rat(((c / raw.lipschitz_constant()) * 1000.0).floor() as i64, 1000);
        if s == rat(0, 1) {
            continue;
        }
        let scaled: Vec<Vec<BigRational>> = m.iter().map(|row| row.iter().map(|a| a * &s).collect()).collect();
        if let Ok(map) = LipschitzMap::affine(scaled, shift) {
            if map.lipschitz_constant() <= c {
                return map;
            }
        }
    }
}

fn verify(suite: &Suite, format: Format, cfg: &QuadratureConfig) -> Result<Report, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (name, parameters, checks, data) = match *suite {
        Suite::Poincare { n, k, max_degree, count } => {
            let degrees: Vec<usize> = match k {
                Some(k) if (1..=n).contains(&k) => vec![k],
                Some(k) => return Err(usage(format!("k = {k} outside 1..={n}"))),
                None => (1..=n).collect(),
            };
            let mut zero = 0;
            for _ in 0..count {
                let k = degrees[rng.random_range(0..degrees.len())];
                let w = random_form(&mut rng, RandomFormSpec::new(n, k, max_degree));
                if poincare_residual(&w)?.is_zero() {
                    zero += 1;
                }
            }
            let checks = vec![Check::new("exact_zero_residuals", zero == count, format!("{zero}/{count}"))];
            (
                "poincare",
                json!({"n": n, "k": k, "max_degree": max_degree, "count": count}),
                checks,
                json!({"zero_residuals": zero, "count": count}),
            )
        }
        Suite::Bound { n, k, p, max_degree, count, sigmas } => {
            let bound = bound_ball(n, k, p, 1.0)?;
            let dom = Domain::unit_ball(n);
            let (mut worst, mut violations, mut exact) = (0.0f64, 0, true);
            for _ in 0..count {
                let w = random_form(&mut rng, RandomFormSpec::new(n, k, max_degree));
                let r = ratio_check(&homotopy_s(&w)?, &w, &dom, p, bound, cfg)?;
                worst = worst.max(r.ratio);
                exact &= r.exact;
                violations += usize::from(r.violated(sigmas));
            }
            let checks = vec![Check::new(
                "ratio_within_bound",
                violations == 0,
                format!("max ratio {worst:.6} vs constant {bound:.6}, {violations} violations"),
            )];
            (
                "bound",
                json!({"n": n, "k": k, "p": p, "max_degree": max_degree, "count": count, "sigmas": sigmas}),
                checks,
                json!({"max_ratio": worst, "constant": bound, "margin": bound - worst, "exact": exact}),
            )
        }
        Suite::Pullback { n, c, count, points } => {
            if c.is_nan() || c <= 0.0 || n == 0 {
                return Err(usage("need n >= 1 and c > 0"));
            }
            let (mut violations, mut d_failures, mut worst) = (0, 0, 0.0f64);
            for i in 0..count {
                let k = i % (n + 1);
                let phi = affine_within(&mut rng, n, c);
                let w = random_form(&mut rng, RandomFormSpec::new(n, k, 3));
                if k < n && pullback(&phi, &w.exterior_derivative()?)? != pullback(&phi, &w)?.exterior_derivative()? {
                    d_failures += 1;
                }
                let bound = pullback_pointwise_bound(n, k, c)?;
                let fw = w.to_float();
                for _ in 0..points {
                    let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                    let lhs = pullback_at(&phi, &fw, &x).iter().map(|v| v * v).sum::<f64>().sqrt();
                    let rhs = bound * fw.norm_sq(&phi.apply(&x)).sqrt();
                    if rhs > 0.0 {
                        worst = worst.max(lhs / rhs);
                    }
                    violations += usize::from(lhs > rhs * (1.0 + 1e-12) + 1e-12);
                }
            }
            let checks = vec![
                Check::new("pointwise_bound", violations == 0, format!("{violations} violations, max lhs/bound {worst:.6}")),
                Check::new("d_commutes", d_failures == 0, format!("{d_failures} failures")),
            ];
            (
                "pullback",
                json!({"n": n, "c": c, "count": count, "points": points}),
                checks,
                json!({"max_ratio_to_bound": worst}),
            )
        }
        Suite::Transfer { n, k, p, count, sigmas } => {
            if n < 2 || k == 0 || k > n {
                return Err(usage("need n >= 2 and 1 <= k <= n"));
            }
            let pairs = [
                ("identity", TransferOperator::identity(n)),
                ("scaling", TransferOperator::scaling(n, rat(1, 2))?),
                ("shear", TransferOperator::shear(n, 0, 1, rat(1, 2))?),
            ];
            let v = Domain::unit_ball(n);
            let mut checks = Vec::new();
            let mut data = Vec::new();
            for (label, t) in &pairs {
                let (mut id_fail, mut violations, mut worst) = (0, 0, 0.0f64);
                for _ in 0..count {
                    let w = random_closed_form(&mut rng, RandomFormSpec::new(n, k, 2));
                    let r = transfer_check(t, &w, &v, p, cfg)?;
                    id_fail += usize::from(!r.exact_identity);
                    violations += usize::from(r.check.violated(sigmas));
                    worst = worst.max(r.check.ratio / r.check.bound);
                }
                checks.push(Check::new(format!("{label}: d(gamma w) = w"), id_fail == 0, format!("{id_fail} failures")));
                checks.push(Check::new(
                    format!("{label}: norm bound"),
                    violations == 0,
                    format!("{violations} violations, max ratio/bound {worst:.6}"),
                ));
                data.push(json!({"pair": label, "max_ratio_to_bound": worst}));
            }
            ("transfer", json!({"n": n, "k": k, "p": p, "count": count, "sigmas": sigmas}), checks, json!(data))
        }
        Suite::Il { n, k, grid, p, q, points, max_residual, decay_threshold } => {
            let dom = Domain::unit_ball(n);
            let op = IlOperator::for_domain(dom.clone(), *cfg)?;
            let mut checks = Vec::new();
            let mut residuals = Vec::new();
            for item in smooth_suite(n)? {
                let r = homotopy_residual(&op, &item.form, points, cfg.seed)?;
                checks.push(Check::new(
                    format!("identity: {}", item.name),
                    r.relative_l2 <= max_residual,
                    format!("relative residual {:.3e}", r.relative_l2),
                ));
                residuals.push(json!({"form": item.name, "relative_l2": r.relative_l2}));
            }
            let phi = Mollifier::for_domain(&dom)?;
            let spectrum = discretize_t(n, k, p, q, DiscretizeOptions::new(grid), &phi, &dom, cfg)?.spectrum();
            let ratio = spectrum.ratio(25);
            let monotone = spectrum.sigma.windows(2).all(|w| w[0] >= w[1]);
            checks.push(Check::new("spectrum_nonincreasing", monotone, format!("{} values", spectrum.sigma.len())));
            if let Some(t) = decay_threshold {
                checks.push(Check::new(
                    "decay",
                    ratio.is_some_and(|r| r < t),
                    format!("sigma25/sigma1 = {ratio:?} vs {t}"),
                ));
            }
            if format == Format::Csv {
                let body = sigma_csv(&spectrum.sigma);
                return Ok(Report {
                    body,
                    parameters: json!({"suite": "il", "n": n, "k": k, "grid": grid, "p": p, "q": q}),
                    checks,
                });
            }
            (
                "il",
                json!({"n": n, "k": k, "grid": grid, "p": p, "q": q, "points": points, "max_residual": max_residual}),
                checks,
                json!({"residuals": residuals, "sigma25_over_sigma1": ratio, "sigma": spectrum.sigma}),
            )
        }
        Suite::Pharmonic { max_degree } => {
            let disc = Domain::unit_ball(2);
            let omega = parse_form("1,2 : x1^2 + x2 + 1", Some(2))?;
            let opts = SolverOptions::default().with_max_degree(max_degree);
            let direct = p_harmonic_representative(&omega, &disc, 2.0, &opts, cfg)?;
            let iterative = SolverOptions { force_iterative: true, tol: 1e-9, ..opts };
            let descent = p_harmonic_representative(&omega, &disc, 2.0, &iterative, cfg)?;
            let gap = (descent.energy - direct.energy).abs() / direct.energy;

            let area = KForm::basis(2, &[1, 2])?;
            let r = p_harmonic_representative(&area, &disc, 2.0, &iterative, cfg)?;
            let correction = lp_norm(&r.eta.try_sub(&homotopy_s(&area)?)?, &disc, 2.0, cfg)?.value;

            let space = SolutionSpace::for_target(&omega, max_degree)?;
            let mut fd = Vec::new();
            for p in [2.0, 3.0, 4.0] {
                let model = EnergyModel::new(&space, &disc, p, cfg)?;
                let c: Vec<f64> = (0..space.len()).map(|_| rng.random_range(-0.5..0.5)).collect();
                let g = model.gradient(&c)?;
                let h = 1e-5;
                let mut err = 0.0;
                for b in 0..c.len() {
                    let (mut cp, mut cm) = (c.clone(), c.clone());
                    cp[b] += h;
                    cm[b] -= h;
                    let d = (model.energy(&cp)? - model.energy(&cm)?) / (2.0 * h);
                    err += (g[b] - d).powi(2);
                }
                let size = g.iter().map(|v| v * v).sum::<f64>().sqrt();
                fd.push(if size > 0.0 { err.sqrt() / size } else { err.sqrt() });
            }
            let fd_worst = fd.iter().copied().fold(0.0, f64::max);
            let checks = vec![
                Check::new("p2_direct_vs_descent", gap <= 1e-8, format!("relative energy gap {gap:.2e}")),
                Check::new("coclosed_primitive", correction <= 1e-5, format!("correction norm {correction:.2e}")),
                Check::new("gradient_vs_fd", fd_worst <= 1e-4, format!("worst relative error {fd_worst:.2e}")),
            ];
            (
                "pharmonic",
                json!({"max_degree": max_degree}),
                checks,
                json!({"energy_gap": gap, "correction": correction, "gradient_fd_error": fd}),
            )
        }
    };
    let body = checks_body(format, name, &checks, data)?;
    Ok(Report {
        body,
        parameters: json!({"suite": name, "args": parameters}),
        checks,
    })
}

fn sigma_csv(sigma: &[f64]) -> String {
    std::iter::once("index,sigma\n".to_string())
        .chain(sigma.iter().enumerate().map(|(i, s)| format!("{},{s:.12e}\n", i + 1)))
        .collect()
}

fn transfer_file(a: &TransferArgs, format: Format, cfg: &QuadratureConfig) -> Result<Report, Failure> {
    let alpha = parse_map(&read(&a.map)?)?;
    let beta = alpha
        .inverse()
        .cloned()
        .ok_or_else(|| usage("the map file must describe an invertible map"))?;
    let n = alpha.dim();
    let w = parse_form(&read(&a.form)?, Some(n))?;
    let t = TransferOperator::new(alpha, beta)?;
    let v = Domain::ball(n, a.radius)?;
    let r = transfer_check(&t, &w, &v, a.p, cfg)?;
    let checks = vec![
        Check::new("d(gamma w) = w", r.exact_identity, "exact rational comparison"),
        Check::new(
            "norm_bound",
            !r.check.violated(a.sigmas),
            format!("ratio {:.6} vs bound {:.6} (z = {:.2})", r.check.ratio, r.check.bound, r.check.z_score),
        ),
    ];
    let gamma = lp_homotopy::lipschitz::transfer_gamma(&t, &w)?;
    let body = match format {
        Format::Json => to_json(&json!({ "report": r, "gamma": format_form(&gamma), "checks": checks })),
        Format::Pretty => {
            let mut s = format!("gamma(w):\n{}\n", format_form(&gamma));
            for c in &checks {
                s.push_str(&format!("{:<16} {}  {}\n", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail));
            }
            s
        }
        Format::Csv => return Err(usage("transfer-check supports pretty and json")),
    };
    Ok(Report {
        body,
        parameters: json!({"map": a.map, "form": a.form, "p": a.p, "radius": a.radius, "sigmas": a.sigmas}),
        checks,
    })
}

fn compactness(a: &CompactnessArgs, format: Format, cfg: &QuadratureConfig) -> Result<Report, Failure> {
    let dom = Domain::unit_ball(a.n);
    let phi = Mollifier::for_domain(&dom)?;
    let spectrum = discretize_t(a.n, a.k, a.p, a.q, DiscretizeOptions::new(a.grid), &phi, &dom, cfg)?.spectrum();
    let shown = &spectrum.sigma[..a.top.unwrap_or(spectrum.sigma.len()).min(spectrum.sigma.len())];
    let body = match format {
        Format::Csv | Format::Pretty => sigma_csv(shown),
        Format::Json => to_json(&json!({ "sigma": shown, "sigma25_over_sigma1": spectrum.ratio(25) })),
    };
    Ok(Report {
        body,
        parameters: json!({"n": a.n, "k": a.k, "p": a.p, "q": a.q, "grid": a.grid, "top": a.top}),
        checks: Vec::new(),
    })
}

fn pharmonic(a: &PharmonicArgs, format: Format, cfg: &QuadratureConfig) -> Result<Report, Failure> {
    let w = parse_form(&read(&a.form)?, None)?;
    let dom = match a.domain {
        DomainKind::Ball => Domain::ball(w.dim(), a.radius)?,
        DomainKind::Simplex => Domain::simplex(w.dim())?,
    };
    let opts = SolverOptions {
        max_degree: a.max_degree,
        tol: a.tol,
        max_iterations: a.max_iterations,
        force_iterative: false,
    };
    let parameters = json!({"form": a.form, "p": a.p, "max_degree": a.max_degree, "tol": a.tol,
        "max_iterations": a.max_iterations, "domain": format!("{:?}", a.domain).to_lowercase(), "radius": a.radius});
    let (result, checks) = match p_harmonic_representative(&w, &dom, a.p, &opts, cfg) {
        Ok(r) => {
            let ok = r.el_residual <= a.tol;
            let checks = vec![
                Check::new("converged", ok, format!("el_residual {:.3e}", r.el_residual)),
                Check::new("d(eta) = w", r.eta.exterior_derivative()? == w, "exact"),
            ];
            (
                json!({
                    "energy": r.energy,
                    "el_residual": r.el_residual,
                    "iterations": r.iterations,
                    "coefficients": r.coefficients,
                    "base_energy": r.base_energy,
                    "exact_quadrature": r.exact_quadrature,
                    "eta": format_form(&r.eta),
                }),
                checks,
            )
        }
        Err(lp_homotopy::Error::Convergence { iterations, residual, best_coefficients, best_energy }) => (
            json!({
                "energy": best_energy,
                "el_residual": residual,
                "iterations": iterations,
                "coefficients": best_coefficients,
            }),
            vec![Check::new("converged", false, format!("stopped at residual {residual:.3e}"))],
        ),
        Err(e) => return Err(e.into()),
    };
    let body = match format {
        Format::Json => to_json(&result),
        Format::Pretty => format!(
            "energy       {}\nel_residual  {}\niterations   {}\ncoefficients {}\n",
            result["energy"], result["el_residual"], result["iterations"], result["coefficients"]
        ),
        Format::Csv => return Err(usage("pharmonic supports pretty and json")),
    };
    Ok(Report { body, parameters, checks })
}
