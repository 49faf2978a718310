//! Experiment runner: symbolic queries on growth expressions, orbit point
//! dumps, equidistribution reports, and correlation diagnostics.
//!
//! Exit codes: 0 success, 2 validation failure (bad config, bad
//! expression, bad range), 3 numeric-budget violation.

mod config;
mod report;
mod runner;
mod selftest;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use config::ExperimentConfig;
use nilsampler_core::equidist::{self, Frequency, Thresholds};
use nilsampler_core::hardy::{parse_expr, GrowthRelation, HardyExpr, Precision};
use nilsampler_core::normal_form::{
    check_property_p, check_property_p_w, choose_w, normal_form, WScheme,
};
use nilsampler_core::orbit::{self, OrbitError};
use runner::RunSettings;
use std::io::Write;

const EXIT_VALIDATION: i32 = 2;
const EXIT_NUMERIC: i32 = 3;

#[derive(Parser)]
#[command(
    name = "nilsampler",
    about = "Orbit sampling and equidistribution statistics on unitriangular nilmanifolds"
)]
struct Cli {
    /// Worker threads for the orbit and statistics engines.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Scalar evaluation precision inside the orbit engine.
    #[arg(long, global = true, default_value = "extended")]
    precision: String,
    /// Seed for the randomized self-test subcommand.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Growth comparison of two expressions.
    Compare { f: String, g: String },
    /// Exact derivative of an expression.
    Diff { f: String },
    /// Derivative-closed normal form of a family (JSON).
    NormalForm { exprs: Vec<String> },
    /// Growth-property check of a family, optionally against a scheme.
    CheckP {
        /// Summation scheme (cesaro, powlog:G, log, loglog); cesaro tests
        /// the plain log-t threshold.
        #[arg(long = "w")]
        w: Option<String>,
        exprs: Vec<String>,
    },
    /// Pick the weakest catalogue scheme that repairs the growth property.
    ChooseW { exprs: Vec<String> },
    /// Run an orbit and dump the reduced points as CSV.
    Orbit {
        config: String,
        #[arg(long)]
        dump: Option<String>,
    },
    /// Run the equidistribution criterion check and emit the report.
    Equidist {
        config: String,
        #[arg(long)]
        report: Option<String>,
        #[arg(long)]
        series: Option<String>,
    },
    /// Correlation diagnostics of the orbit's character sequence.
    Vdc {
        config: String,
        #[arg(short = 'H', long = "h-max", default_value_t = 100)]
        h_max: usize,
        #[arg(long)]
        report: Option<String>,
    },
    /// Randomized property checks of the numeric kernels.
    Selftest,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = classify_exit(&e);
            std::process::exit(code);
        }
    }
}

fn classify_exit(e: &anyhow::Error) -> i32 {
    if let Some(oe) = e.downcast_ref::<OrbitError>() {
        return match oe {
            OrbitError::NumericBudget(_) => EXIT_NUMERIC,
            _ => EXIT_VALIDATION,
        };
    }
    EXIT_VALIDATION
}

fn max_n_from_env() -> u64 {
    match std::env::var("NILSAMPLER_MAX_N") {
        Ok(v) => match v.parse::<u64>() {
            Ok(n) => {
                eprintln!(
                    "warning: NILSAMPLER_MAX_N overrides the range cap: {n} (default {})",
                    orbit::DEFAULT_MAX_N
                );
                n
            }
            Err(_) => {
                eprintln!("warning: ignoring unparsable NILSAMPLER_MAX_N={v}");
                orbit::DEFAULT_MAX_N
            }
        },
        Err(_) => orbit::DEFAULT_MAX_N,
    }
}

fn parse_precision(s: &str) -> Result<Precision> {
    match s {
        "standard" => Ok(Precision::Standard),
        "extended" => Ok(Precision::Extended),
        _ => Err(anyhow!("precision must be standard or extended, got {s}")),
    }
}

fn parse_family(exprs: &[String]) -> Result<Vec<HardyExpr>> {
    if exprs.is_empty() {
        return Err(anyhow!("at least one expression is required"));
    }
    exprs
        .iter()
        .map(|s| parse_expr(s).map_err(|e| anyhow!("{s:?}: {e}")))
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    let settings = RunSettings {
        threads: cli.threads.max(1),
        precision: parse_precision(&cli.precision)?,
        max_n: max_n_from_env(),
    };
    match cli.command {
        Command::Compare { f, g } => {
            let fe = parse_expr(&f).map_err(|e| anyhow!("{f:?}: {e}"))?;
            let ge = parse_expr(&g).map_err(|e| anyhow!("{g:?}: {e}"))?;
            let rel = fe.compare(&ge).map_err(|e| anyhow!("{e}"))?;
            let text = match rel {
                GrowthRelation::StrictlySlower => "strictly slower".to_string(),
                GrowthRelation::StrictlyFaster => "strictly faster".to_string(),
                GrowthRelation::SameOrder(c) => format!("same order (ratio {c})"),
                GrowthRelation::Equal => "equal".to_string(),
            };
            println!("{text}");
        }
        Command::Diff { f } => {
            let fe = parse_expr(&f).map_err(|e| anyhow!("{f:?}: {e}"))?;
            println!("{}", fe.differentiate());
        }
        Command::NormalForm { exprs } => {
            let fam = parse_family(&exprs)?;
            let nf = normal_form(&fam).map_err(|e| anyhow!("{e}"))?;
            let prop = check_property_p(&fam);
            let w = choose_w(&fam).map_err(|e| anyhow!("{e}"))?;
            let json = report::normal_form_json(&nf, prop.holds, &w.name());
            println!("{}", serde_json::to_string_pretty(&json)?);
        }
        Command::CheckP { w, exprs } => {
            let fam = parse_family(&exprs)?;
            let (rep, threshold) = match w {
                None => (check_property_p(&fam), "log(t)".to_string()),
                Some(name) => {
                    let scheme = WScheme::parse(&name).map_err(|e| anyhow!(e))?;
                    let t = scheme.log_w().describe();
                    (check_property_p_w(&fam, &scheme), t)
                }
            };
            let json = report::property_json(&rep, &threshold);
            println!("{}", serde_json::to_string_pretty(&json)?);
        }
        Command::ChooseW { exprs } => {
            let fam = parse_family(&exprs)?;
            let w = choose_w(&fam).map_err(|e| anyhow!("{e}"))?;
            println!("{}", w.name());
        }
        Command::Orbit { config, dump } => {
            cmd_orbit(&config, dump.as_deref(), &settings)?;
        }
        Command::Equidist {
            config,
            report,
            series,
        } => {
            cmd_equidist(&config, report.as_deref(), series.as_deref(), &settings)?;
        }
        Command::Vdc {
            config,
            h_max,
            report,
        } => {
            cmd_vdc(&config, h_max, report.as_deref(), &settings)?;
        }
        Command::Selftest => {
            selftest::run(cli.seed)?;
        }
    }
    Ok(())
}

fn load_and_announce(path: &str) -> Result<(ExperimentConfig, String)> {
    let cfg = ExperimentConfig::load(path)?;
    let hash = cfg.hash();
    eprintln!(
        "config {hash}: thresholds weyl<{} discrepancy<{}, max frequency {}",
        cfg.analysis.weyl_threshold, cfg.analysis.discrepancy_threshold, cfg.analysis.max_frequency
    );
    Ok((cfg, hash))
}

fn cmd_orbit(path: &str, dump: Option<&str>, settings: &RunSettings) -> Result<()> {
    let (cfg, hash) = load_and_announce(path)?;
    let spec = cfg.orbit.to_spec()?;
    print_diagnostics(&spec);
    let co = orbit::compile(&spec).map_err(keep_orbit_error)?;
    let dim = co.dim();
    let mut out: Box<dyn Write> = match dump {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).with_context(|| format!("creating {p}"))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    };
    // header: n, coord_*, torus_*, weight
    let coords = nilsampler_core::nilgroup::positions(dim);
    let mut header = String::from("n");
    for (i, j) in &coords {
        header.push_str(&format!(",coord_{}_{}", i + 1, j + 1));
    }
    for i in 0..dim - 1 {
        header.push_str(&format!(",torus_{}", i + 1));
    }
    header.push_str(",weight");
    writeln!(out, "{header}")?;
    let count = runner::run_points(&co, spec.range, spec.progression, settings, |pts| {
        for p in pts {
            let mut line = format!("{}", p.n);
            for c in &p.coords {
                line.push_str(&format!(",{c}"));
            }
            for t in p.torus(dim) {
                line.push_str(&format!(",{t}"));
            }
            line.push_str(&format!(",{}", p.weight));
            let _ = writeln!(out, "{line}");
        }
    })
    .map_err(keep_orbit_error)?;
    out.flush()?;
    eprintln!("config {hash}: wrote {count} points");
    Ok(())
}

fn keep_orbit_error(e: OrbitError) -> anyhow::Error {
    anyhow::Error::new(e)
}

fn print_diagnostics(spec: &nilsampler_core::orbit::OrbitSpec) {
    for d in spec.validate() {
        let tag = if d.ok { "ok " } else { "FAIL" };
        eprintln!("  [{tag}] {}: {}", d.code, d.detail);
    }
}

fn cmd_equidist(
    path: &str,
    report_path: Option<&str>,
    series_path: Option<&str>,
    settings: &RunSettings,
) -> Result<()> {
    let (cfg, hash) = load_and_announce(path)?;
    let spec = cfg.orbit.to_spec()?;
    print_diagnostics(&spec);
    let thresholds = Thresholds {
        weyl: cfg.analysis.weyl_threshold,
        discrepancy: cfg.analysis.discrepancy_threshold,
    };
    let sweep: Vec<(u64, u64)> = match cfg.analysis.sweep_q {
        None => vec![spec.progression],
        Some(q) => (0..q).map(|r| (q, r)).collect(),
    };
    let co = orbit::compile(&spec).map_err(keep_orbit_error)?;
    let mut reports = Vec::new();
    for progression in sweep {
        let mut series_file = match series_path {
            Some(p) if progression == spec.progression || cfg.analysis.sweep_q.is_none() => {
                let f = std::fs::File::create(p).with_context(|| format!("creating {p}"))?;
                let mut w = std::io::BufWriter::new(f);
                writeln!(w, "n,weight_total,max_weyl_abs")?;
                Some(w)
            }
            _ => None,
        };
        let mut sink = |seen: u64, acc: &equidist::EquidistAccumulator| {
            if let Some(w) = series_file.as_mut() {
                let max_abs = acc
                    .running_weyl()
                    .iter()
                    .map(|e| e.value.norm())
                    .fold(0.0f64, f64::max);
                let _ = writeln!(w, "{seen},{},{max_abs}", acc.count());
            }
        };
        let rep = runner::run_equidist(
            &co,
            spec.range,
            progression,
            cfg.analysis.max_frequency,
            thresholds,
            settings,
            if series_path.is_some() {
                Some(&mut sink)
            } else {
                None
            },
        )
        .map_err(keep_orbit_error)?;
        eprintln!(
            "config {hash}: progression ({}, {}) verdicts torus={} full={} consistent={} (max |weyl| {:.6}, torus disc {:.6}, full disc {:.6})",
            progression.0,
            progression.1,
            rep.torus_equidistributed,
            rep.full_equidistributed,
            rep.criterion_consistent,
            rep.max_weyl_abs,
            rep.torus_discrepancy,
            rep.full_discrepancy
        );
        reports.push(report::equidist_json(&rep, &hash, progression, &spec.validate()));
    }
    let json = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])?
    } else {
        serde_json::to_string_pretty(&reports)?
    };
    match report_path.or(cfg.output.report.as_deref()) {
        Some(p) => {
            std::fs::write(p, json.as_bytes()).with_context(|| format!("writing {p}"))?;
            eprintln!("config {hash}: report written to {p}");
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_vdc(path: &str, h_max: usize, report_path: Option<&str>, settings: &RunSettings) -> Result<()> {
    let (cfg, hash) = load_and_announce(path)?;
    let spec = cfg.orbit.to_spec()?;
    let co = orbit::compile(&spec).map_err(keep_orbit_error)?;
    let freq_components = cfg
        .analysis
        .vdc_frequency
        .clone()
        .unwrap_or_else(|| {
            let mut k = vec![0i32; spec.dim - 1];
            k[0] = 1;
            k
        });
    let k = Frequency::new(freq_components.clone())
        .map_err(|e| anyhow!("vdc frequency: {e}"))?;
    let values =
        equidist::character_sequence(&co, spec.range, spec.progression, &k, settings.max_n)
            .map_err(|e| anyhow!("{e}"))?;
    let n_start = orbit::progression_indices(spec.range, spec.progression)
        .next()
        .ok_or_else(|| anyhow!("empty progression"))?;
    let table = equidist::vdc_correlations(&values, &spec.scheme, n_start, h_max)
        .map_err(|e| anyhow!("{e}"))?;
    let json = report::correlation_json(&table, &hash, &spec.scheme.name(), &freq_components);
    let text = serde_json::to_string_pretty(&json)?;
    eprintln!(
        "config {hash}: vdc bound {} (lhs {:.3e} <= rhs {:.3e} + slack {:.3e})",
        if table.bound_ok { "holds" } else { "VIOLATED" },
        table.bound_lhs,
        table.bound_rhs,
        table.bound_slack
    );
    match report_path {
        Some(p) => std::fs::write(p, text.as_bytes())?,
        None => println!("{text}"),
    }
    Ok(())
}
