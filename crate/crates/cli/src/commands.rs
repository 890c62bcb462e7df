use std::fs::File;
use std::io::{BufWriter, Write};
use std::process::ExitCode;

use ghostdim::measures::{
    default_limit_depth, write_fourier_csv, write_staircase_csv, write_staircase_svg,
};
use ghostdim::{
    asymptotic_probe, fourier_ghost_product, fourier_level_measure, fourier_limit,
    ghost_level_measure, oracle_prefix, staircase_samples, Budget, DigitPolynomial, DigitSet,
    Execution, FourierCoefficient, FourierRoute, MahlerEquation,
};
use serde_json::{json, Map, Value};

use crate::args::{Cli, Command, Common};
use crate::output::{emit, open, CliError, CliResult, Meta};
use crate::verify;

pub fn run(cli: &Cli) -> CliResult<ExitCode> {
    match &cli.command {
        Command::Analyze(common) => analyze(common),
        Command::Sequence { common, k, oracle } => sequence(common, *k, *oracle),
        Command::Fourier {
            common,
            k,
            n_min,
            n_max,
            depth,
            routes,
        } => fourier(common, *k, *n_min, *n_max, *depth, routes),
        Command::Staircase {
            common,
            k,
            grid,
            svg,
        } => staircase(common, *k, *grid, svg.as_deref()),
        Command::Probe {
            common,
            t_min,
            t_max,
            step,
        } => probe(common, *t_min, *t_max, *step),
        Command::Verify {
            suite,
            k_max,
            n_max,
            budget,
        } => verify::run(*suite, *k_max, *n_max, Budget(*budget)),
    }
    .map(|()| ExitCode::SUCCESS)
    .or_else(|e| match e {
        Outcome::Failed => Ok(ExitCode::from(1)),
        Outcome::Error(e) => Err(e),
    })
}

/// Command results: a hard error, or a verification run that completed with
/// failed checks.
pub enum Outcome {
    Failed,
    Error(CliError),
}

impl From<CliError> for Outcome {
    fn from(e: CliError) -> Self {
        Outcome::Error(e)
    }
}

impl From<ghostdim::Error> for Outcome {
    fn from(e: ghostdim::Error) -> Self {
        Outcome::Error(e.into())
    }
}

pub type Run = Result<(), Outcome>;

fn digit_set(common: &Common) -> CliResult<DigitSet> {
    Ok(DigitSet::new(common.q, &common.digits)?)
}

fn analyze(common: &Common) -> Run {
    let ds = digit_set(common)?;
    let sub = ds.substitution();
    let pf = DigitPolynomial::new(&ds);
    let eq = MahlerEquation::for_digit_set(&ds);
    let chi = eq.characteristic_polynomial();
    if let Some(w) = chi.warning() {
        eprintln!("warning: {w}");
    }
    let eigenvalue = eq.mahler_eigenvalue().map_err(CliError::from)?;
    let dim_digits = ds.hausdorff_dimension();
    let dim_eigen = eigenvalue.value().ln() / f64::from(ds.base()).ln();
    let agree = (dim_digits - dim_eigen).abs() <= 1e-12;

    let fields: Vec<(&str, Value)> = vec![
        ("q", json!(ds.base())),
        ("digits", json!(ds.digits())),
        ("m", json!(ds.m())),
        ("substitution_1", json!(sub.image_of_one().to_string())),
        ("substitution_0", json!(sub.image_of_zero().to_string())),
        ("digit_polynomial", json!(pf.to_string())),
        ("mahler_equation", json!(eq.to_string())),
        ("characteristic_polynomial", json!(chi.to_string())),
        ("mahler_eigenvalue", json!(eigenvalue.to_string())),
        ("dimension_log_q_m", json!(dim_digits)),
        ("dimension_log_q_eigenvalue", json!(dim_eigen)),
        ("routes_agree", json!(agree)),
    ];
    let meta = Meta::new("analyze", common);
    emit(
        common,
        &meta,
        |out| {
            writeln!(out, "field,value")?;
            for (k, v) in &fields {
                let shown = match v {
                    Value::String(s) => s.clone(),
                    Value::Array(a) => a.iter().map(Value::to_string).collect::<Vec<_>>().join(" "),
                    Value::Number(n) => match n.as_f64() {
                        Some(x) if !n.is_u64() => ghostdim::report::sig17(x),
                        _ => n.to_string(),
                    },
                    other => other.to_string(),
                };
                writeln!(out, "{k},{shown}")?;
            }
            Ok(())
        },
        || {
            let mut body = Map::new();
            body.insert(
                "report".into(),
                Value::Object(
                    fields
                        .iter()
                        .map(|(k, v)| (k.to_string(), v.clone()))
                        .collect(),
                ),
            );
            body
        },
    )?;
    if !agree {
        return Err(Outcome::Failed);
    }
    Ok(())
}

fn sequence(common: &Common, k: u32, oracle: bool) -> Run {
    let ds = digit_set(common)?;
    let budget = Budget(common.budget);
    let prefix = if oracle {
        oracle_prefix(&ds, k, budget)?
    } else {
        ds.substitution().iterate(k, budget)?
    };
    let mut out = open(common)?;
    match common.format {
        crate::args::Format::Csv => writeln!(out, "{prefix}").map_err(CliError::from)?,
        crate::args::Format::Json => {
            let meta = Meta::new("sequence", common)
                .with("k", k)
                .with("oracle", oracle);
            let mut body = Map::new();
            body.insert("level".into(), json!(k));
            body.insert("word".into(), json!(prefix.to_string()));
            meta.write_json(&mut out, body).map_err(CliError::from)?;
        }
    }
    out.flush().map_err(CliError::from)?;
    Ok(())
}

fn fourier(
    common: &Common,
    k: u32,
    n_min: i64,
    n_max: i64,
    depth: Option<u32>,
    routes: &[String],
) -> Run {
    let ds = digit_set(common)?;
    if n_min > n_max {
        return Err(CliError::Usage(format!("empty frequency range {n_min}..={n_max}")).into());
    }
    let routes = routes
        .iter()
        .map(|r| {
            FourierRoute::parse(r.trim())
                .ok_or_else(|| CliError::Usage(format!("unknown route {r:?}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let frequencies: Vec<i64> = (n_min..=n_max).collect();
    let exec = Execution::default();

    let mut columns: Vec<Vec<FourierCoefficient>> = Vec::new();
    for &route in &routes {
        let column = match route {
            FourierRoute::Direct => ghost_level_measure(&ds, k, Budget(common.budget))?
                .fourier_table(&frequencies, exec),
            FourierRoute::FiniteProduct => {
                exec.map_slice(&frequencies, |&n| fourier_ghost_product(&ds, k, n))
            }
            FourierRoute::LevelMeasure => {
                exec.map_slice(&frequencies, |&n| fourier_level_measure(&ds, k, n))
            }
            FourierRoute::TruncatedLimit => exec.map_slice(&frequencies, |&n| {
                let l = depth.unwrap_or_else(|| default_limit_depth(ds.base(), n));
                fourier_limit(&ds, n, l)
            }),
        };
        columns.push(column);
    }
    let rows: Vec<FourierCoefficient> = (0..frequencies.len())
        .flat_map(|i| columns.iter().map(move |c| c[i]))
        .collect();

    // discrepancies against the product route, when it was requested
    let mut summary = Map::new();
    if let Some(pi) = routes
        .iter()
        .position(|&r| r == FourierRoute::FiniteProduct)
    {
        for (ri, &route) in routes.iter().enumerate() {
            if ri == pi {
                continue;
            }
            let max = columns[ri]
                .iter()
                .zip(&columns[pi])
                .map(|(a, b)| (a.value - b.value).norm())
                .fold(0.0, f64::max);
            eprintln!("max |{route} - product| = {:.3e}", max);
            summary.insert(format!("max_abs_{route}_minus_product"), json!(max));
        }
    }

    let meta = Meta::new("fourier", common)
        .with("k", k)
        .with("n_min", n_min)
        .with("n_max", n_max)
        .with("L", depth.map_or(Value::Null, |d| json!(d)))
        .with(
            "routes",
            json!(routes.iter().map(|r| r.as_str()).collect::<Vec<_>>()),
        );
    emit(
        common,
        &meta,
        |out| write_fourier_csv(out, &rows),
        || {
            let mut body = Map::new();
            body.insert(
                "rows".into(),
                rows.iter()
                    .map(|c| {
                        json!({"n": c.n, "route": c.route.as_str(), "k_or_L": c.param,
                               "re": c.value.re, "im": c.value.im})
                    })
                    .collect(),
            );
            body.insert("summary".into(), Value::Object(summary.clone()));
            body
        },
    )?;
    Ok(())
}

fn staircase(common: &Common, k: u32, grid: usize, svg: Option<&std::path::Path>) -> Run {
    let ds = digit_set(common)?;
    let samples = staircase_samples(&ds, k, grid)?;
    if let Some(path) = svg {
        let mut file = BufWriter::new(File::create(path).map_err(CliError::from)?);
        write_staircase_svg(&mut file, &samples).map_err(CliError::from)?;
        file.flush().map_err(CliError::from)?;
    }
    let meta = Meta::new("staircase", common)
        .with("k", k)
        .with("grid", grid);
    emit(
        common,
        &meta,
        |out| write_staircase_csv(out, &samples),
        || {
            let mut body = Map::new();
            body.insert("rows".into(), json!(samples));
            body
        },
    )?;
    Ok(())
}

fn probe(common: &Common, t_min: f64, t_max: f64, step: f64) -> Run {
    let ds = digit_set(common)?;
    let report = asymptotic_probe(&ds, t_min, t_max, step)?;
    if let Some((lo, hi)) = report.range() {
        eprintln!("G in [{lo:.12}, {hi:.12}]");
    }
    let meta = Meta::new("probe", common)
        .with("t_min", t_min)
        .with("t_max", t_max)
        .with("step", step);
    emit(
        common,
        &meta,
        |out| report.write_csv(out),
        || {
            let mut body = Map::new();
            body.insert("rows".into(), json!(report.samples));
            if let Some((lo, hi)) = report.range() {
                body.insert("summary".into(), json!({"min_G": lo, "max_G": hi}));
            }
            body
        },
    )?;
    Ok(())
}
