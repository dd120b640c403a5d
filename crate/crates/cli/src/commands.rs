//! Subcommand implementations.

use rayon::prelude::*;
use relaxkit::fitio::{fit, fit_auto, parse_csv_path, synthesize, DataDomain, Dataset, FitOptions, FitResult, Grid, Spacing};
use relaxkit::kernels::{characteristic_exponent, memory_k_time, memory_m_time, KernelConfig};
use relaxkit::models::{pdf_g, permittivity, relaxation, response, spectral, ModelKind, ModelSpec, PermittivityScale};
use relaxkit::verify::{run, Report, VerifyOptions};
use relaxkit::Error;

use crate::args::{Format, Global, Quantity};
use crate::output::{emit, Table};
use crate::CliError;

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

/// The law described by the model flags.
pub fn model_spec(g: &Global) -> Result<ModelSpec, CliError> {
    let Some(kind) = g.model else { return usage("--model is required") };
    let mut alpha = 1.0;
    let mut beta = 1.0;
    for (name, free, val, slot) in [("alpha", kind.alpha_free(), g.alpha, &mut alpha), ("beta", kind.beta_free(), g.beta, &mut beta)] {
        match (free, val) {
            (true, Some(v)) => *slot = v,
            (true, None) => return usage(format!("model {kind} needs --{name}")),
            (false, Some(_)) => return usage(format!("--{name} does not apply to model {kind}")),
            (false, None) => {}
        }
    }
    let tau = g.tau.unwrap_or(1.0);
    let spec = if g.allow_negative {
        ModelSpec::with_override(kind, alpha, beta, tau)?
    } else {
        ModelSpec::new(kind, alpha, beta, tau)?
    };
    Ok(if g.strict_experimental { spec.strict()? } else { spec })
}

fn scale(g: &Global) -> Result<PermittivityScale, CliError> {
    Ok(PermittivityScale::new(g.eps0.unwrap_or(1.0), g.epsinf.unwrap_or(0.0))?)
}

fn default_grid(q: Quantity) -> Grid {
    let (a, b, n) = match q {
        Quantity::Fig1 | Quantity::Fig3 => (1e-3, 1e2, 101),
        Quantity::Fig2 | Quantity::Fig6 => (1e-3, 1e3, 121),
        Quantity::Fig4a | Quantity::Fig4b | Quantity::Fig5a | Quantity::Fig5b => (1e-3, 1e3, 121),
        _ => (1e-3, 1e3, 61),
    };
    Grid { start: a, stop: b, points: n, spacing: Spacing::Log }
}

fn tabulate<F>(grid: &[f64], f: F) -> Result<Vec<Vec<f64>>, CliError>
where
    F: Fn(f64) -> relaxkit::Result<Vec<f64>> + Sync,
{
    let rows = grid
        .par_iter()
        .map(|&x| {
            let mut r = vec![x];
            r.extend(f(x)?);
            Ok(r)
        })
        .collect::<relaxkit::Result<Vec<_>>>()?;
    Ok(rows)
}

/// A family of curves for one of the classic figure panels.
struct Family {
    abscissa: &'static str,
    prefix: &'static str,
    members: Vec<(String, ModelSpec)>,
    eval: fn(&ModelSpec, f64) -> relaxkit::Result<f64>,
}

fn family(q: Quantity) -> relaxkit::Result<Family> {
    let phi: fn(&ModelSpec, f64) -> relaxkit::Result<f64> = |s, t| Ok(response(s, t)?.regular);
    let n: fn(&ModelSpec, f64) -> relaxkit::Result<f64> = relaxation;
    let g: fn(&ModelSpec, f64) -> relaxkit::Result<f64> = pdf_g;
    let over_beta = |kind: ModelKind, a: f64, betas: &[(&str, f64)]| {
        betas
            .iter()
            .map(|&(l, b)| Ok((format!("beta{l}"), ModelSpec::with_override(kind, a, b, 1.0)?)))
            .collect::<relaxkit::Result<Vec<_>>>()
    };
    let over_alpha = |kind: ModelKind, b: f64, alphas: &[(&str, f64)]| {
        alphas
            .iter()
            .map(|&(l, a)| Ok((format!("alpha{l}"), ModelSpec::with_override(kind, a, b, 1.0)?)))
            .collect::<relaxkit::Result<Vec<_>>>()
    };
    let phi_betas = [("1/2", 0.5), ("1", 1.0), ("2", 2.0), ("3", 3.0)];
    let n_betas = [("1/4", 0.25), ("1/2", 0.5), ("3/4", 0.75)];
    let g_betas = [("1/3", 1.0 / 3.0), ("4/3", 4.0 / 3.0), ("7/3", 7.0 / 3.0)];
    let g_alphas = [("1/4", 0.25), ("1/2", 0.5), ("3/4", 0.75)];
    Ok(match q {
        Quantity::Fig1 => Family { abscissa: "t", prefix: "phi_hn", members: over_beta(ModelKind::HN, 0.5, &phi_betas)?, eval: phi },
        Quantity::Fig2 => Family { abscissa: "t", prefix: "n_hn", members: over_beta(ModelKind::HN, 0.5, &n_betas)?, eval: n },
        Quantity::Fig3 => Family { abscissa: "t", prefix: "phi_jws", members: over_beta(ModelKind::JWS, 0.5, &phi_betas)?, eval: phi },
        Quantity::Fig4a => Family { abscissa: "xi", prefix: "g_jws", members: over_beta(ModelKind::JWS, 0.75, &g_betas)?, eval: g },
        Quantity::Fig4b => Family { abscissa: "xi", prefix: "g_jws", members: over_alpha(ModelKind::JWS, 1.0 / 3.0, &g_alphas)?, eval: g },
        Quantity::Fig5a => Family { abscissa: "xi", prefix: "g_hn", members: over_beta(ModelKind::HN, 0.75, &g_betas)?, eval: g },
        Quantity::Fig5b => Family { abscissa: "xi", prefix: "g_hn", members: over_alpha(ModelKind::HN, 1.0 / 3.0, &g_alphas)?, eval: g },
        Quantity::Fig6 => Family { abscissa: "t", prefix: "n_jws", members: over_beta(ModelKind::JWS, 0.5, &n_betas)?, eval: n },
        _ => unreachable!("not a figure quantity"),
    })
}

fn quantity_name(q: Quantity) -> String {
    use clap::ValueEnum;
    q.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

pub fn eval(g: &Global, q: Quantity, rate: f64) -> Result<(), CliError> {
    let grid = g.grid.unwrap_or_else(|| default_grid(q)).values();
    let name = quantity_name(q);
    let is_figure = matches!(
        q,
        Quantity::Fig1 | Quantity::Fig2 | Quantity::Fig3 | Quantity::Fig4a | Quantity::Fig4b | Quantity::Fig5a | Quantity::Fig5b | Quantity::Fig6
    );
    let table = if is_figure {
        let fam = family(q)?;
        let mut columns = vec![fam.abscissa.to_string()];
        columns.extend(fam.members.iter().map(|(l, _)| format!("{}_{l}", fam.prefix)));
        let rows = tabulate(&grid, |x| fam.members.iter().map(|(_, s)| (fam.eval)(s, x)).collect())?;
        Table { quantity: name, model: None, singular_weight: None, columns, rows }
    } else {
        let spec = model_spec(g)?;
        let model = Some(serde_json::to_value(spec).expect("specs serialize"));
        let cols = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let kcfg = KernelConfig::new(spec).with_rate(rate);
        let (columns, singular_weight, rows) = match q {
            Quantity::Spectral => (
                cols(&["omega", "re", "im"]),
                None,
                tabulate(&grid, |w| spectral(&spec, w * spec.tau).map(|z| vec![z.re, z.im]))?,
            ),
            Quantity::Permittivity => {
                let sc = scale(g)?;
                (cols(&["omega", "eps_re", "eps_im"]), None, tabulate(&grid, |w| permittivity(&spec, &sc, w).map(|(a, b)| vec![a, b]))?)
            }
            Quantity::Response => {
                let w = response(&spec, grid[0].max(f64::MIN_POSITIVE))?.singular_weight;
                (cols(&["t", "phi"]), Some(w), tabulate(&grid, |t| Ok(vec![response(&spec, t)?.regular]))?)
            }
            Quantity::Relaxation => (cols(&["t", "n"]), None, tabulate(&grid, |t| Ok(vec![relaxation(&spec, t)?]))?),
            Quantity::Pdf => (cols(&["xi", "g"]), None, tabulate(&grid, |x| Ok(vec![pdf_g(&spec, x)?]))?),
            Quantity::KernelM => {
                let w = memory_m_time(&kcfg, grid[0].max(f64::MIN_POSITIVE))?.singular_weight;
                (cols(&["t", "M"]), Some(w), tabulate(&grid, |t| Ok(vec![memory_m_time(&kcfg, t)?.regular]))?)
            }
            Quantity::KernelK => {
                let w = memory_k_time(&kcfg, grid[0].max(f64::MIN_POSITIVE))?.singular_weight;
                (cols(&["t", "k"]), Some(w), tabulate(&grid, |t| Ok(vec![memory_k_time(&kcfg, t)?.regular]))?)
            }
            Quantity::Psi => (cols(&["s", "psi"]), None, tabulate(&grid, |s| Ok(vec![characteristic_exponent(&kcfg, s)?]))?),
            _ => unreachable!(),
        };
        Table { quantity: name, model, singular_weight, columns, rows }
    };
    emit(&table.render(g.format.unwrap_or(Format::Csv)), g.output.as_deref())
}

const FIT_COLUMNS: [&str; 9] =
    ["model", "alpha", "beta", "tau", "eps_static", "eps_inf", "residual_norm", "converged", "iterations"];

fn render_fit(r: &FitResult, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("fit results serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:e}"));
            format!(
                "{}\n{},{:e},{:e},{:e},{},{},{:e},{},{}\n",
                FIT_COLUMNS.join(","),
                r.model,
                r.alpha,
                r.beta,
                r.tau,
                opt(r.eps_static),
                opt(r.eps_inf),
                r.residual_norm,
                r.converged,
                r.iterations
            )
        }
    }
}

pub fn fit_cmd(g: &Global, input: &std::path::Path, domain: DataDomain, auto: bool) -> Result<(), CliError> {
    let data = parse_csv_path(input, domain)?;
    for w in data.warnings() {
        eprintln!("warning: {w}");
    }
    let explicit = g.alpha.is_some() || g.beta.is_some() || g.tau.is_some();
    let opts = FitOptions {
        init: if explicit && !auto { Some(model_spec(g)?) } else { None },
        strict_experimental: g.strict_experimental,
        ..FitOptions::default()
    };
    let result = if auto {
        let ranked = fit_auto(&data, &opts)?;
        let best = ranked[0].score;
        eprintln!("rank  model  aicc  delta");
        for (i, r) in ranked.iter().enumerate() {
            eprintln!("{:>4}  {:<5}  {:.6e}  {:.6e}", i + 1, r.kind, r.score, r.score - best);
        }
        ranked.into_iter().next().expect("at least one candidate").result
    } else {
        let Some(kind) = g.model else { return usage("fit needs --model or --auto") };
        if kind == ModelKind::KWW && domain == DataDomain::Frequency {
            return usage("kww is fitted in the time domain only (--domain time)");
        }
        fit(&data, kind, &opts)?
    };
    emit(&render_fit(&result, g.format.unwrap_or(Format::Json)), g.output.as_deref())?;
    if !result.converged {
        return Err(CliError::Core(Error::NonConvergence(format!(
            "{} fit stopped after {} iterations (residual {:e})",
            result.model, result.iterations, result.residual_norm
        ))));
    }
    Ok(())
}

pub fn synth(g: &Global, domain: DataDomain, noise: f64) -> Result<(), CliError> {
    let spec = model_spec(g)?;
    let sc = scale(g)?;
    let grid = g.grid.unwrap_or(Grid { start: 1e-3, stop: 1e3, points: 40, spacing: Spacing::Log });
    let data = synthesize(&spec, &sc, &grid.values(), domain, noise, g.seed)?;
    let text = match g.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let meta = match &data {
                Dataset::Frequency(d) => &d.meta,
                Dataset::Time(d) => &d.meta,
            };
            format!("# {meta}\n{}", data.to_csv())
        }
        Format::Json => {
            let mut s = match &data {
                Dataset::Frequency(d) => serde_json::to_string_pretty(d),
                Dataset::Time(d) => serde_json::to_string_pretty(d),
            }
            .expect("datasets serialize");
            s.push('\n');
            s
        }
    };
    emit(&text, g.output.as_deref())
}

fn render_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("suite,check,max_error,tolerance,passed\n");
            for c in &r.checks {
                let e = c.max_error.map_or(String::new(), |v| format!("{v:e}"));
                s.push_str(&format!("{},{},{e},{:e},{}\n", c.suite, c.name, c.tolerance, c.passed));
            }
            s
        }
    }
}

pub fn verify(g: &Global, suite: relaxkit::verify::Suite) -> Result<(), CliError> {
    let report = run(suite, &VerifyOptions { tolerance: g.tol });
    emit(&render_report(&report, g.format.unwrap_or(Format::Csv)), g.output.as_deref())?;
    let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
    for c in &failed {
        eprintln!("FAIL {}/{}: max_error {:?} > {:e} {}", c.suite, c.name, c.max_error, c.tolerance, c.detail);
    }
    if failed.is_empty() {
        eprintln!("{}: {} checks passed", suite, report.checks.len());
        Ok(())
    } else {
        Err(CliError::VerifyFailed(failed.len()))
    }
}
