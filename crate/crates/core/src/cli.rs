//! Command-line front end. Every subcommand builds tables and hands them to
//! one ordered emitter.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::closure::{solve_premium, PremiumCase};
use crate::error::{Error, Result};
use crate::extensions::{clock, estimate_kappa, ClockSpec};
use crate::inference::{
    banded_envelope, default_pe_variants, default_tf_variants, envelope, tier_scores_pe,
    tier_scores_tf, InferenceMode,
};
use crate::investment::compute_bounds;
use crate::model::{check_scope, stability_surplus, step_debt};
use crate::scenario::{
    emit_csv, load_scenario, read_series, render_csv, tables, Cell, Scenario, TableArtifact,
};
use crate::transition::{
    feasibility_label, joint_feasibility, required_growth_endogenous, required_growth_exogenous,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Pe,
    Tf,
}

#[derive(Debug, Parser)]
#[command(
    name = "sovereign-regime",
    version,
    about = "Debt-regime diagnostics, premium closure and regime inference"
)]
struct Cli {
    /// Scenario file; `baseline` selects the built-in defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides `mc.seed`.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Write `<table_id>.csv` files here instead of printing to stdout.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for Monte Carlo and sweeps; never changes results.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full report: debt step, surplus, scope, clock, bounds, closure, thresholds.
    Scenario,
    /// Residual-time clocks for the scenario, alternative rates and the monitoring layer.
    Clock,
    /// Investment bounds.
    Bounds,
    /// Closure solution, or a stress sweep with `--sweep`.
    Closure {
        #[arg(long, value_name = "NAME")]
        sweep: Option<String>,
    },
    /// Growth thresholds, feasibility label and joint check.
    Transition,
    /// Banded envelope on a `t,value` series: observed θ (pe) or proposed growth (tf).
    Infer {
        #[arg(long, value_name = "PATH")]
        series: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Pe)]
        mode: Mode,
        /// Widest admissible tier included in the envelope.
        #[arg(long, default_value_t = 2)]
        tier: u8,
    },
    /// Monte Carlo comparison of classifiers.
    Mc {
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        quarters: Option<usize>,
    },
    /// Every standard table.
    Tables,
    /// Captive-share trend and break test on a `t,value` series.
    Kappa {
        #[arg(long, value_name = "PATH")]
        series: PathBuf,
        #[arg(long)]
        break_index: Option<usize>,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let mut scenario = match &cli.config {
        Some(p) => load_scenario(p)?,
        None => Scenario::default(),
    };
    if let Some(seed) = cli.seed {
        scenario.mc.seed = seed;
    }
    let Format::Csv = cli.format;
    let artifacts = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.into())
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} threads: {e}")))?
            .install(|| build(&cli.command, &mut scenario))?,
        None => build(&cli.command, &mut scenario)?,
    };
    emit(&artifacts, cli.out.as_deref())
}

fn emit(artifacts: &[TableArtifact], out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(dir) => {
            for a in artifacts {
                let path = emit_csv(a, dir)?;
                eprintln!("wrote {}", path.display());
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for (i, a) in artifacts.iter().enumerate() {
                if i > 0 {
                    writeln!(stdout).map_err(|e| Error::io("<stdout>", e))?;
                }
                stdout
                    .write_all(render_csv(a).as_bytes())
                    .map_err(|e| Error::io("<stdout>", e))?;
            }
        }
    }
    Ok(())
}

fn build(cmd: &Command, s: &mut Scenario) -> Result<Vec<TableArtifact>> {
    Ok(match cmd {
        Command::Scenario => vec![report(s)?],
        Command::Clock => vec![clock_table(s)?],
        Command::Bounds => vec![bounds_table(s)?],
        Command::Closure { sweep: None } => vec![tables::baseline_v2(s)?],
        Command::Closure { sweep: Some(name) } => {
            let mut v = vec![tables::stress_table(s, name)?];
            if name == "stress_v2" {
                v.push(tables::stress_annotations(s)?);
            }
            v
        }
        Command::Transition => vec![transition_table(s)?],
        Command::Infer { series, mode, tier } => vec![infer_table(s, series, *mode, *tier)?],
        Command::Mc { reps, quarters } => {
            if let Some(n) = reps {
                s.mc.n_reps = *n;
            }
            if let Some(q) = quarters {
                s.mc.quarters = *q;
            }
            tables::mc_tables(s)?
        }
        Command::Tables => tables::all_tables(s)?,
        Command::Kappa {
            series,
            break_index,
        } => vec![kappa_table(s, series, *break_index)?],
    })
}

fn table(s: &Scenario, id: &str, columns: &[&str]) -> TableArtifact {
    let mut a = TableArtifact::new(id, columns);
    a.meta("scenario", &s.name)
        .meta("config_hash", &s.config_hash);
    a
}

fn report(s: &Scenario) -> Result<TableArtifact> {
    let mut a = table(s, "scenario", &["section", "quantity", "value"]);
    let mut put = |section: &str, q: &str, v: Cell| a.push(vec![section.into(), q.into(), v]);

    put("recursion", "debt_next", step_debt(&s.econ)?.into());
    put(
        "recursion",
        "stability_surplus",
        stability_surplus(&s.econ, &s.regime)?.into(),
    );
    let scope = check_scope(&s.regime);
    put("scope", "sc1", scope.sc1.into());
    put("scope", "sc2", scope.sc2.into());
    match clock(&s.clock_spec()) {
        Ok(c) => {
            put("clock", "t_star_linear", c.t_linear.into());
            put("clock", "t_star_exp", c.t_exp.into());
        }
        Err(e) => put("clock", "error", e.to_string().into()),
    }
    let b = compute_bounds(&s.investment_inputs())?;
    put("bounds", "x_max_operational", b.x_max_operational.into());
    put("bounds", "x_min_operational", b.x_min_operational.into());
    put("bounds", "feasible", b.feasible.into());

    let p = s.closure_params()?;
    let sol = solve_premium(&p)?;
    put("closure", "case", sol.case.name().into());
    put("closure", "phi_d0", sol.phi_d_at_zero.into());
    put("closure", "rho_star", sol.rho.into());
    put("closure", "slack", sol.slack.into());
    put("closure", "label", tables::pe_label(&p).into());

    let spec = s.transition_spec();
    let exo = required_growth_exogenous(&spec)?;
    put(
        "transition",
        "delta_g_min_exogenous",
        exo.delta_g_min.into(),
    );
    match required_growth_endogenous(&spec)? {
        Some(g) => {
            put("transition", "delta_g_min_endogenous", g.delta_g_min.into());
            let label = feasibility_label(
                g.delta_g_min,
                s.transition.mu_range,
                s.transition.label_x_max,
            )?;
            put("transition", "label", label.as_str().into());
            let j = joint_feasibility(&spec, g.delta_g_min)?;
            put("transition", "financeable", j.financeable.into());
            put("transition", "timely", j.timely.into());
            put("transition", "feasible", j.feasible.into());
        }
        None => put("transition", "label", "Infeasible".into()),
    }
    Ok(a)
}

fn clock_table(s: &Scenario) -> Result<TableArtifact> {
    let mut a = table(
        s,
        "clock",
        &[
            "layer",
            "phi",
            "phi_bar",
            "kappa",
            "t_star_linear",
            "t_star_exp",
        ],
    );
    let mut rows: Vec<(String, ClockSpec)> = vec![("scenario".into(), s.clock_spec())];
    for &k in &s.alt_kappas {
        rows.push((
            format!("kappa_{k}"),
            ClockSpec {
                kappa: k,
                kappa_exp: Some(k),
                ..s.clock_spec()
            },
        ));
    }
    rows.push(("monitoring".into(), s.monitoring));
    for (name, spec) in rows {
        let c = clock(&spec)?;
        a.push(vec![
            name.into(),
            spec.phi.into(),
            spec.phi_bar.into(),
            spec.kappa.into(),
            c.t_linear.into(),
            c.t_exp.into(),
        ]);
    }
    Ok(a)
}

fn bounds_table(s: &Scenario) -> Result<TableArtifact> {
    let b = compute_bounds(&s.investment_inputs())?;
    let mut a = table(s, "bounds", &["bound", "value"]);
    let rows: [(&str, Cell); 10] = [
        ("x_max_arith", b.x_max_arith.into()),
        ("x_max_rd", b.x_max_rd.into()),
        ("x_max_safe", b.x_max_safe.into()),
        ("x_max_operational", b.x_max_operational.into()),
        ("x_min_static", b.x_min_static.into()),
        ("x_min_shock", b.x_min_shock.into()),
        ("x_min_demo_lo", b.x_min_demo_lo.into()),
        ("x_min_demo_hi", b.x_min_demo_hi.into()),
        ("x_min_operational", b.x_min_operational.into()),
        ("feasible", b.feasible.into()),
    ];
    for (name, v) in rows {
        a.push(vec![name.into(), v]);
    }
    a.meta("units", "fractions of GDP per year");
    Ok(a)
}

fn transition_table(s: &Scenario) -> Result<TableArtifact> {
    let mut a = table(
        s,
        "transition",
        &[
            "reading",
            "b_prev",
            "rho",
            "threshold",
            "delta_g_min",
            "label",
        ],
    );
    let spec = s.transition_spec();
    let label = |dg: f64| -> Result<Cell> {
        Ok(
            feasibility_label(dg, s.transition.mu_range, s.transition.label_x_max)?
                .as_str()
                .into(),
        )
    };
    let mon = crate::transition::TransitionSpec {
        state: crate::model::EconState {
            b_prev: s.transition.b_monitoring,
            ..spec.state
        },
        ..spec.clone()
    };
    let readings = [
        ("exogenous", spec.clone()),
        (
            "exogenous_alt",
            crate::transition::TransitionSpec {
                rho_bar: s.transition.rho_bar_alt,
                ..spec.clone()
            },
        ),
        ("monitoring_concept", mon),
    ];
    for (name, sp) in readings {
        let g = required_growth_exogenous(&sp)?;
        a.push(vec![
            name.into(),
            sp.state.b_prev.into(),
            g.rho.into(),
            g.threshold.into(),
            g.delta_g_min.into(),
            label(g.delta_g_min)?,
        ]);
    }
    match required_growth_endogenous(&spec)? {
        Some(g) => a.push(vec![
            "endogenous".into(),
            spec.state.b_prev.into(),
            g.rho.into(),
            g.threshold.into(),
            g.delta_g_min.into(),
            label(g.delta_g_min)?,
        ]),
        None => a.push(vec![
            "endogenous".into(),
            spec.state.b_prev.into(),
            Cell::Missing,
            Cell::Missing,
            Cell::Missing,
            "Infeasible".into(),
        ]),
    }
    if let Some(sol) = spec.closure.as_ref().map(solve_premium).transpose()? {
        a.meta("closure_case", sol.case.name());
        if sol.case == PremiumCase::HardFailure {
            a.meta("note", "no premium clears the bond market");
        }
    }
    a.meta("units", "fractions per year");
    Ok(a)
}

fn infer_table(
    s: &Scenario,
    path: &std::path::Path,
    mode: Mode,
    tier: u8,
) -> Result<TableArtifact> {
    let series = read_series(path)?;
    let (lower, upper): (Vec<f64>, Vec<f64>) = match mode {
        Mode::Pe => {
            let base = s.closure_params()?;
            let inf = &s.inference;
            let variants = default_pe_variants(inf.theta_shift, &inf.tier3_powers, base.c_bar);
            series
                .iter()
                .enumerate()
                .map(|(t, &(_, theta))| {
                    let p = crate::closure::TwoLayerParams {
                        theta: theta.clamp(0.0, 1.0),
                        ..base.clone()
                    };
                    let e = envelope(t, &tier_scores_pe(&p, &variants, tier))?;
                    Ok((e.lower, e.upper))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .unzip()
        }
        Mode::Tf => {
            let base = s.transition_spec();
            let variants = default_tf_variants(s.econ.b_prev, s.transition.b_monitoring);
            series
                .iter()
                .enumerate()
                .map(|(t, &(_, g_new))| {
                    let sp = crate::transition::TransitionSpec {
                        g_new,
                        ..base.clone()
                    };
                    let e = envelope(t, &tier_scores_tf(&sp, &variants, tier))?;
                    Ok((e.lower, e.upper))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .unzip()
        }
    };
    let mode = match mode {
        Mode::Pe => InferenceMode::Pe,
        Mode::Tf => InferenceMode::Tf,
    };
    let points = banded_envelope(&lower, &upper, &s.inference.subsample)?;
    let mut a = table(
        s,
        "envelope",
        &["t", "lower", "upper", "c_lower", "c_upper", "label"],
    );
    a.meta(
        "mode",
        if mode == InferenceMode::Pe {
            "pe"
        } else {
            "tf"
        },
    )
    .meta("tier", tier)
    .meta("window_h", s.inference.subsample.window_h)
    .meta("block_len", s.inference.subsample.block_len)
    .meta("alpha", s.inference.subsample.alpha)
    .meta("statistic", "window mean of detrended envelope edge")
    .meta(
        "quantile",
        "type 1 (right-continuous empirical, no interpolation)",
    );
    for p in points {
        a.push(vec![
            series[p.t].0.into(),
            p.lower.into(),
            p.upper.into(),
            p.c_lower.into(),
            p.c_upper.into(),
            p.label.name(mode).into(),
        ]);
    }
    Ok(a)
}

fn kappa_table(
    s: &Scenario,
    path: &std::path::Path,
    break_index: Option<usize>,
) -> Result<TableArtifact> {
    let series = read_series(path)?;
    let k = estimate_kappa(&series, break_index)?;
    let mut a = table(s, "kappa", &["quantity", "value"]);
    a.push(vec!["kappa".into(), k.kappa().into()]);
    a.push(vec!["slope_full".into(), k.slope_full.into()]);
    a.push(vec!["slope_pre".into(), k.slope_pre.into()]);
    a.push(vec!["slope_post".into(), k.slope_post.into()]);
    a.push(vec!["chow_f".into(), k.chow_f.into()]);
    a.meta("observations", series.len());
    if let Some(b) = break_index {
        a.meta("break_index", b);
    }
    Ok(a)
}
