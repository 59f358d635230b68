//! Standard tables built from a scenario, with reference columns from the
//! bundled data file.

use super::{Cell, ReferenceValues, Scenario, Sweep, TableArtifact};
use crate::closure::{
    feedback_gain, pe_sensitivities, rho_closed_form, solve_premium, PremiumCase, TwoLayerParams,
};
use crate::error::{Error, Result};
use crate::extensions::{
    clock, paradox_test, psi_composite, repression_dividend, sprint_cumulative_improvement,
    ClockSpec, PsiSpec,
};
use crate::inference::mc::{
    run_mc_pe, run_mc_tf, LabelCounts, McConfig, PeMethod, PeMetrics, TfMethod, TfMetrics,
};
use crate::inference::{envelope, score_pe, BandLabel, InferenceMode, PeOverlay};
use crate::investment::{compute_bounds, InvestmentInputs};
use crate::model::{stability_surplus, step_debt, EconState, RegimeParams};
use crate::transition::{
    feasibility_label, required_growth_endogenous, required_growth_exogenous, TransitionSpec,
};

const PCT: f64 = 100.0;

/// Built-in six-row stress grid over (θ, z).
pub const STRESS_V2: &str = "\
sweep.stress_v2.baseline = closure.theta:0.65, closure.z:0.02
sweep.stress_v2.core_erosion_1 = closure.theta:0.60, closure.z:0.02
sweep.stress_v2.core_erosion_2 = closure.theta:0.55, closure.z:0.02
sweep.stress_v2.external_stress = closure.theta:0.65, closure.z:0.03
sweep.stress_v2.combined_stress = closure.theta:0.55, closure.z:0.03
sweep.stress_v2.severe = closure.theta:0.45, closure.z:0.035
";

/// Control-rights sub-indices (monetary, absorption proxy, FX).
pub const PSI_COUNTRIES: [(&str, f64, f64, f64); 3] = [
    ("japan", 1.0, 0.93, 1.0),
    ("italy", 0.5, 0.67, 0.0),
    ("greece", 0.5, 0.33, 0.0),
];

/// Alternative weightings (w_mon, w_abs, w_fx).
pub const PSI_WEIGHTS: [(&str, (f64, f64, f64)); 4] = [
    ("equal", (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)),
    ("mon_heavy", (0.50, 0.25, 0.25)),
    ("abs_heavy", (0.25, 0.50, 0.25)),
    ("fx_light", (0.40, 0.40, 0.20)),
];

fn artifact(s: &Scenario, id: &str, columns: &[&str]) -> TableArtifact {
    let mut a = TableArtifact::new(id, columns);
    a.meta("scenario", &s.name)
        .meta("config_hash", &s.config_hash);
    a
}

fn reference_cell(r: &ReferenceValues, key: &str) -> Cell {
    r.num(key).into()
}

fn quantity_row(
    a: &mut TableArtifact,
    r: &ReferenceValues,
    prefix: &str,
    name: &str,
    unit: &str,
    engine: Option<f64>,
) {
    let reference = r.num(&format!("{prefix}.{name}"));
    let diff = engine.zip(reference).map(|(e, r)| e - r);
    a.push(vec![
        name.into(),
        unit.into(),
        engine.into(),
        reference.into(),
        diff.into(),
    ]);
}

/// Calibration quantities of the baseline regime.
pub fn calibration(s: &Scenario) -> Result<TableArtifact> {
    let r = ReferenceValues::builtin();
    let mut a = artifact(
        s,
        "calibration",
        &["quantity", "unit", "engine", "reference", "difference"],
    );
    let b = compute_bounds(&s.investment_inputs())?;
    let c = clock(&s.clock_spec())?;
    let gamma = paradox_test(s.econ.spread(), s.fiscal.gamma)
        .ok()
        .map(|p| p.gamma_threshold * PCT);
    let rd = repression_dividend(s.regime.epsilon, s.econ.b_prev);
    let rows: [(&str, &str, Option<f64>); 13] = [
        (
            "sprint_improvement",
            "pp",
            Some(sprint_cumulative_improvement(&s.sprint)? * PCT),
        ),
        (
            "repression_dividend",
            "pct_gdp",
            rd.active.then_some(rd.value * PCT),
        ),
        ("gamma_threshold", "pp", gamma),
        ("t_star_linear", "years", Some(c.t_linear)),
        ("t_star_exp", "years", c.t_exp),
        ("x_max_rd", "pct_gdp", b.x_max_rd.map(|x| x * PCT)),
        ("x_min_shock", "pct_gdp", Some(b.x_min_shock * PCT)),
        ("x_min_demo_lo", "pct_gdp", Some(b.x_min_demo_lo * PCT)),
        ("x_min_demo_hi", "pct_gdp", Some(b.x_min_demo_hi * PCT)),
        ("x_max_safe", "pct_gdp", Some(b.x_max_safe * PCT)),
        ("x_max_arith", "pct_gdp", Some(b.x_max_arith * PCT)),
        ("debt_next", "pct_gdp", Some(step_debt(&s.econ)? * PCT)),
        (
            "stability_surplus",
            "pp",
            Some(stability_surplus(&s.econ, &s.regime)? * PCT),
        ),
    ];
    for (name, unit, v) in rows {
        quantity_row(&mut a, &r, "calibration", name, unit, v);
    }
    for &k in &s.alt_kappas {
        let t = clock(&ClockSpec {
            kappa: k,
            ..s.clock_spec()
        })?
        .t_linear;
        quantity_row(
            &mut a,
            &r,
            "calibration",
            &format!("t_star_linear_kappa_{k}"),
            "years",
            Some(t),
        );
    }
    Ok(a)
}

/// Observed monitoring layer: clock and control-rights proxy.
pub fn monitoring(s: &Scenario) -> Result<TableArtifact> {
    let r = ReferenceValues::builtin();
    let mut a = artifact(
        s,
        "monitoring",
        &["quantity", "unit", "engine", "reference", "difference"],
    );
    let m = &s.monitoring;
    let t = clock(m)?.t_linear;
    let psi = psi_composite(&PsiSpec::equal_weights(1.0, m.phi, 1.0))?;
    quantity_row(&mut a, &r, "monitoring", "t_star_linear", "years", Some(t));
    quantity_row(&mut a, &r, "monitoring", "psi", "index", Some(psi));
    a.meta(
        "note",
        "the reference clock is a rounded figure; the stated inputs give the engine value and acceptance allows 0.2 years",
    );
    Ok(a)
}

/// Closure solution at the scenario point.
pub fn baseline_v2(s: &Scenario) -> Result<TableArtifact> {
    let r = ReferenceValues::builtin();
    let mut a = artifact(
        s,
        "baseline_v2",
        &["quantity", "unit", "engine", "reference", "difference"],
    );
    let p = s.closure_params()?;
    let sol = solve_premium(&p)?;
    a.meta("case", sol.case.name());
    let rows: Vec<(&str, &str, Option<f64>)> = vec![
        ("phi_d0", "share", Some(sol.phi_d_at_zero)),
        ("phi_d_max", "share", Some(sol.phi_d_max)),
        ("rho_star", "pct", sol.rho.map(|x| x * PCT)),
        ("slack", "pp", Some(sol.slack * PCT)),
        ("score_pe", "pp", Some(score_pe(&p) * PCT)),
        ("feedback_gain", "ratio", Some(feedback_gain(&p, &s.law))),
    ];
    for (name, unit, v) in rows {
        quantity_row(&mut a, &r, "baseline_v2", name, unit, v);
    }
    if let Ok(sens) = pe_sensitivities(&p) {
        quantity_row(
            &mut a,
            &r,
            "baseline_v2",
            "d_score_d_theta",
            "ratio",
            Some(sens.d_b_d_theta),
        );
        quantity_row(
            &mut a,
            &r,
            "baseline_v2",
            "d_score_d_psi",
            "ratio",
            Some(sens.d_b_d_psi),
        );
        quantity_row(
            &mut a,
            &r,
            "baseline_v2",
            "d_score_d_z",
            "ratio",
            Some(sens.d_b_d_z),
        );
    }
    Ok(a)
}

/// The named sweep, falling back to the built-in stress grid.
pub fn resolve_sweep(s: &Scenario, name: &str) -> Result<Sweep> {
    if let Some(sw) = s.sweep(name) {
        return Ok(sw.clone());
    }
    if name == "stress_v2" {
        let builtin = Scenario::from_text(STRESS_V2)?;
        return Ok(builtin.sweep(name).expect("built-in sweep").clone());
    }
    Err(Error::Config(format!("no sweep named `{name}`")))
}

/// One evaluated stress row.
#[derive(Debug, Clone, PartialEq)]
pub struct StressRow {
    pub name: String,
    pub theta: f64,
    pub z: f64,
    pub phi_d0: f64,
    pub case: PremiumCase,
    /// Solver premium; `None` in case d.
    pub rho_star: Option<f64>,
    /// Closed-form premium, for comparison with the solver.
    pub rho_closed_form: f64,
    pub required_dg: Option<f64>,
    pub label: String,
}

pub fn stress_rows(s: &Scenario, sweep: &Sweep) -> Result<Vec<StressRow>> {
    sweep
        .rows
        .iter()
        .map(|row| {
            let sc = s.with_overrides(&row.overrides)?;
            let p = sc.closure_params()?;
            let sol = solve_premium(&p)?;
            let spec = sc.transition_spec();
            let dg = required_growth_endogenous(&spec)?.map(|g| g.delta_g_min);
            let label = match dg {
                Some(dg) => {
                    feasibility_label(dg, sc.transition.mu_range, sc.transition.label_x_max)?
                        .as_str()
                }
                None => "Infeasible",
            };
            Ok(StressRow {
                name: row.name.clone(),
                theta: p.theta,
                z: p.z,
                phi_d0: sol.phi_d_at_zero,
                case: sol.case,
                rho_star: sol.rho,
                rho_closed_form: rho_closed_form(&p),
                required_dg: dg,
                label: label.to_string(),
            })
        })
        .collect()
}

/// Stress grid with engine premia; premia and growth gaps in percent.
pub fn stress_table(s: &Scenario, sweep_name: &str) -> Result<TableArtifact> {
    let r = ReferenceValues::builtin();
    let sweep = resolve_sweep(s, sweep_name)?;
    let id = if sweep_name == "stress_v2" {
        "stress_v2".to_string()
    } else {
        format!("sweep_{sweep_name}")
    };
    let mut a = artifact(
        s,
        &id,
        &[
            "scenario",
            "theta",
            "z",
            "phi_d0",
            "rho_star",
            "required_dg",
            "label",
            "paper_rho_ref",
        ],
    );
    for row in stress_rows(s, &sweep)? {
        let reference = r.num(&format!("stress_v2.{}.rho_star", row.name));
        a.push(vec![
            row.name.as_str().into(),
            row.theta.into(),
            row.z.into(),
            row.phi_d0.into(),
            row.rho_star.map(|x| x * PCT).into(),
            row.required_dg.map(|x| x * PCT).into(),
            row.label.into(),
            reference.into(),
        ]);
    }
    a.meta(
        "units",
        "rho_star, required_dg and paper_rho_ref in percent",
    );
    Ok(a)
}

/// Engine values beside the reference grid, with the solver-vs-formula gap.
pub fn stress_annotations(s: &Scenario) -> Result<TableArtifact> {
    let r = ReferenceValues::builtin();
    let sweep = resolve_sweep(s, "stress_v2")?;
    let mut a = artifact(
        s,
        "stress_v2_annotations",
        &[
            "scenario",
            "case",
            "engine_phi_d0",
            "reference_phi_d0",
            "engine_rho_star",
            "closed_form_rho_star",
            "solver_formula_gap",
            "reference_rho_star",
            "rho_star_gap",
            "engine_required_dg",
            "reference_required_dg",
            "engine_label",
            "reference_label",
        ],
    );
    for row in stress_rows(s, &sweep)? {
        let key = |k: &str| format!("stress_v2.{}.{k}", row.name);
        let engine_rho = row.rho_star.map(|x| x * PCT);
        let ref_rho = r.num(&key("rho_star"));
        let solver_gap = row.rho_star.map(|x| (x - row.rho_closed_form).abs());
        a.push(vec![
            row.name.as_str().into(),
            row.case.code().into(),
            row.phi_d0.into(),
            reference_cell(&r, &key("phi_d0")),
            engine_rho.into(),
            (row.rho_closed_form * PCT).into(),
            solver_gap.into(),
            ref_rho.into(),
            engine_rho.zip(ref_rho).map(|(e, p)| e - p).into(),
            row.required_dg.map(|x| x * PCT).into(),
            reference_cell(&r, &key("required_dg")),
            row.label.into(),
            r.text(&key("label")).unwrap_or("").into(),
        ]);
    }
    a.meta(
        "note",
        "engine premia solve the clearing condition at psi, c_bar and phi_req of the scenario; reference premia are reported values that do not all follow from that condition",
    );
    Ok(a)
}

/// Cumulative premium-emergence envelope over three readings.
pub fn tier_pe(s: &Scenario) -> Result<TableArtifact> {
    let r = ReferenceValues::builtin();
    let base = s.closure_params()?;
    let mut a = artifact(
        s,
        "tier_pe",
        &[
            "tier",
            "reading",
            "theta",
            "z",
            "score",
            "reference_score",
            "lower",
            "upper",
            "label",
            "reference_label",
        ],
    );
    let readings = [
        (1, "baseline", PeOverlay::default()),
        (
            2,
            "core_erosion_1",
            PeOverlay {
                theta: Some(0.60),
                ..PeOverlay::default()
            },
        ),
        (
            2,
            "external_stress",
            PeOverlay {
                z: Some(0.03),
                ..PeOverlay::default()
            },
        ),
    ];
    let mut scores = Vec::new();
    for (tier, id, ov) in readings {
        let p = ov.apply(&base);
        let sc = score_pe(&p);
        scores.push((id.to_string(), sc));
        let env = envelope(0, &scores)?;
        a.push(vec![
            Cell::Int(tier),
            id.into(),
            p.theta.into(),
            p.z.into(),
            (sc * PCT).into(),
            reference_cell(&r, &format!("tier_pe.{id}.score")),
            (env.lower * PCT).into(),
            (env.upper * PCT).into(),
            env.label.name(InferenceMode::Pe).into(),
            r.text(&format!("tier_pe.{id}.label")).unwrap_or("").into(),
        ]);
    }
    a.meta("units", "scores and envelope edges in pp");
    Ok(a)
}

/// Growth gap a zero-premium transition needs at debt concept `b`.
fn tf_threshold(spec: &TransitionSpec, b: f64) -> Result<f64> {
    let mut t = spec.clone();
    t.state.b_prev = b;
    t.rho_bar = 0.0;
    Ok(required_growth_exogenous(&t)?.delta_g_min)
}

/// Debt-concept widening of the transition threshold.
pub fn tier_tf(s: &Scenario) -> Result<TableArtifact> {
    let r = ReferenceValues::builtin();
    let spec = s.transition_spec();
    let mut a = artifact(
        s,
        "tier_tf",
        &[
            "tier",
            "reading",
            "b_prev",
            "threshold",
            "reference_threshold",
            "widening",
            "reference_widening",
            "formula_widening",
        ],
    );
    let base = tf_threshold(&spec, s.econ.b_prev)?;
    let mon = tf_threshold(&spec, s.transition.b_monitoring)?;
    let burden = s.econ.d - s.econ.s;
    let formula = burden * (1.0 / s.transition.b_monitoring - 1.0 / s.econ.b_prev);
    a.push(vec![
        Cell::Int(1),
        "baseline_concept".into(),
        s.econ.b_prev.into(),
        (base * PCT).into(),
        reference_cell(&r, "tier_tf.baseline_concept.threshold"),
        Cell::Missing,
        Cell::Missing,
        Cell::Missing,
    ]);
    a.push(vec![
        Cell::Int(2),
        "monitoring_concept".into(),
        s.transition.b_monitoring.into(),
        (mon * PCT).into(),
        reference_cell(&r, "tier_tf.monitoring_concept.threshold"),
        ((mon - base) * PCT).into(),
        reference_cell(&r, "tier_tf.monitoring_concept.widening"),
        (formula * PCT).into(),
    ]);
    a.meta("units", "thresholds and widening in pp");
    Ok(a)
}

fn psi_at(country: (&str, f64, f64, f64), weights: (f64, f64, f64)) -> Result<f64> {
    let (_, mon, abs_proxy, fx) = country;
    psi_composite(&PsiSpec {
        mon,
        abs_proxy,
        fx,
        weights,
    })
}

pub fn psi_countries(s: &Scenario) -> Result<TableArtifact> {
    let r = ReferenceValues::builtin();
    let mut a = artifact(
        s,
        "psi_countries",
        &[
            "country",
            "psi_mon",
            "psi_abs",
            "psi_fx",
            "psi",
            "reference_psi",
        ],
    );
    for c in PSI_COUNTRIES {
        let psi = psi_at(c, PSI_WEIGHTS[0].1)?;
        a.push(vec![
            c.0.into(),
            c.1.into(),
            c.2.into(),
            c.3.into(),
            psi.into(),
            reference_cell(&r, &format!("psi.{}", c.0)),
        ]);
    }
    Ok(a)
}

pub fn psi_weights(s: &Scenario) -> Result<TableArtifact> {
    let r = ReferenceValues::builtin();
    let mut a = artifact(
        s,
        "psi_weights",
        &[
            "scheme",
            "w_mon",
            "w_abs",
            "w_fx",
            "japan",
            "italy",
            "greece",
            "reference_japan",
            "reference_italy",
            "reference_greece",
            "ordering_preserved",
        ],
    );
    for (scheme, w) in PSI_WEIGHTS {
        let v: Vec<f64> = PSI_COUNTRIES
            .iter()
            .map(|&c| psi_at(c, w))
            .collect::<Result<_>>()?;
        let refs = r.list(&format!("psi_weights.{scheme}"));
        let mut row: Vec<Cell> = vec![scheme.into(), w.0.into(), w.1.into(), w.2.into()];
        row.extend(v.iter().map(|&x| Cell::Num(x)));
        row.extend((0..3).map(|i| Cell::from(refs.get(i).copied())));
        row.push((v[0] > v[1] && v[1] > v[2]).into());
        a.push(row);
    }
    Ok(a)
}

/// Observed-layer outputs under the two growth windows.
pub fn window_sensitivity(s: &Scenario) -> Result<TableArtifact> {
    let r = ReferenceValues::builtin();
    let w = &s.window;
    let mut a = artifact(
        s,
        "window_sensitivity",
        &[
            "quantity",
            "unit",
            "window_12q",
            "window_24q",
            "reference_12q",
            "reference_24q",
        ],
    );
    let eval = |g_star: f64| -> Result<[Option<f64>; 6]> {
        let econ = EconState {
            b_prev: w.b_prev,
            r_n: w.r_n,
            g_n: g_star,
            pi: w.pi,
            d: w.d,
            s: 0.0,
        };
        let regime = RegimeParams {
            epsilon: w.pi - w.r_n,
            g_star,
            phi: w.phi,
            kappa: w.kappa,
            ..s.regime
        };
        let inputs = InvestmentInputs {
            state: econ,
            regime,
            m: 0.0,
            ..s.investment
        };
        let b = compute_bounds(&inputs)?;
        let c = clock(&ClockSpec {
            phi: w.phi,
            phi_bar: regime.phi_bar,
            kappa: w.kappa,
            kappa_exp: None,
        })?;
        let gamma = paradox_test(w.r_n - g_star, 0.0)
            .ok()
            .map(|p| p.gamma_threshold * PCT);
        let spec = TransitionSpec {
            state: econ,
            g_star,
            rho_bar: 0.0,
            m: 0.0,
            closure: None,
            ..s.transition_spec()
        };
        let dg = required_growth_exogenous(&spec)?.delta_g_min;
        let dg_p = required_growth_exogenous(&TransitionSpec {
            rho_bar: s.transition.rho_bar_alt,
            ..spec
        })?
        .delta_g_min;
        Ok([
            Some(b.x_max_safe * PCT),
            b.x_max_rd.map(|x| x * PCT),
            Some(c.t_linear),
            gamma,
            Some(dg * PCT),
            Some(dg_p * PCT),
        ])
    };
    let short = eval(w.g_star_short)?;
    let long = eval(w.g_star_long)?;
    let names = [
        ("x_max_safe", "pct_gdp"),
        ("x_max_rd", "pct_gdp"),
        ("t_star_linear", "years"),
        ("gamma_threshold", "pp"),
        ("required_dg", "pp"),
        ("required_dg_premium", "pp"),
    ];
    a.push(vec![
        "g_star".into(),
        "pct".into(),
        (w.g_star_short * PCT).into(),
        (w.g_star_long * PCT).into(),
        Cell::Missing,
        Cell::Missing,
    ]);
    for (i, (name, unit)) in names.iter().enumerate() {
        a.push(vec![
            (*name).into(),
            (*unit).into(),
            short[i].into(),
            long[i].into(),
            r.num(&format!("window.short.{name}")).into(),
            r.num(&format!("window.long.{name}")).into(),
        ]);
    }
    a.meta("rho_bar_premium", s.transition.rho_bar_alt);
    Ok(a)
}

fn mc_meta(a: &mut TableArtifact, cfg: &McConfig) {
    a.meta("seed", cfg.seed)
        .meta("n_reps", cfg.n_reps)
        .meta("quarters", cfg.quarters)
        .meta("alpha", cfg.subsample.alpha)
        .meta("window_h", cfg.subsample.window_h)
        .meta("block_len", cfg.subsample.block_len)
        .meta("pool_quarters", cfg.pool_quarters)
        .meta("statistic", "window mean of detrended envelope edge")
        .meta(
            "quantile",
            "type 1 (right-continuous empirical, no interpolation)",
        )
        .meta(
            "rng",
            "ChaCha8 seeded by seed xor replication index, one stream per experiment",
        )
        .meta("units", "rates in percent");
}

fn rates(c: &LabelCounts) -> [f64; 4] {
    [
        c.false_positive_rate() * PCT,
        c.false_negative_rate() * PCT,
        c.coverage() * PCT,
        c.ambiguous_rate() * PCT,
    ]
}

fn push_rates(row: &mut Vec<Cell>, c: &LabelCounts, reference: Option<&Vec<f64>>) {
    row.extend(rates(c).map(Cell::Num));
    row.extend((0..4).map(|i| Cell::from(reference.and_then(|r| r.get(i).copied()))));
}

/// Premium-emergence classifier comparison across horizons.
pub fn mc_pe(s: &Scenario, m: &PeMetrics) -> TableArtifact {
    let r = ReferenceValues::builtin();
    let cfg = s.mc_config();
    let mut a = artifact(
        s,
        "mc_pe",
        &[
            "horizon_years",
            "method",
            "false_safety",
            "false_alarm",
            "coverage",
            "warning",
            "reference_false_safety",
            "reference_false_alarm",
            "reference_coverage",
            "reference_warning",
        ],
    );
    mc_meta(&mut a, &cfg);
    a.meta("truth_stress_share", m.truth_stress_share * PCT);
    let ref_h = r.list("mc_pe.horizons");
    for (hi, h) in m.horizons.iter().enumerate() {
        let ref_idx = ref_h.iter().position(|&x| (x - h.years).abs() < 0.06);
        for method in PeMethod::ALL {
            let groups = r.groups(&format!("mc_pe.{}", method.name()));
            let mut row = vec![h.years.into(), method.name().into()];
            push_rates(
                &mut row,
                &m.get(hi, method),
                ref_idx.and_then(|i| groups.get(i)),
            );
            a.push(row);
        }
    }
    a
}

pub fn mc_pe_blocks(s: &Scenario, m: &PeMetrics) -> TableArtifact {
    let r = ReferenceValues::builtin();
    let cfg = s.mc_config();
    let mut a = artifact(
        s,
        "mc_pe_blocks",
        &[
            "block_len",
            "false_safety",
            "false_alarm",
            "coverage",
            "warning",
            "reference_false_safety",
            "reference_false_alarm",
            "reference_coverage",
            "reference_warning",
        ],
    );
    mc_meta(&mut a, &cfg);
    a.meta("method", PeMethod::Tier2.name());
    for (l, c) in &m.blocks {
        let reference = r.list(&format!("mc_pe_blocks.{l}"));
        let mut row = vec![Cell::from(*l)];
        push_rates(&mut row, c, (!reference.is_empty()).then_some(&reference));
        a.push(row);
    }
    a
}

fn tf_ref_index(rho_bar: f64) -> Option<usize> {
    [0.0, 0.005, 0.01]
        .iter()
        .position(|&x| (x - rho_bar).abs() < 1e-9)
}

/// Transition-feasibility classifier comparison at the terminal horizon.
pub fn mc_tf(s: &Scenario, m: &TfMetrics) -> TableArtifact {
    let r = ReferenceValues::builtin();
    let cfg = s.mc_config();
    let mut a = artifact(
        s,
        "mc_tf",
        &[
            "rho_bar",
            "method",
            "false_feasible",
            "false_infeasible",
            "coverage",
            "marginal",
            "reference_false_feasible",
            "reference_false_infeasible",
            "reference_coverage",
            "reference_marginal",
        ],
    );
    mc_meta(&mut a, &cfg);
    for (ri, row) in m.rows.iter().enumerate() {
        for method in TfMethod::ALL {
            let groups = r.groups(&format!("mc_tf.{}", method.name()));
            let mut cells = vec![(row.rho_bar * PCT).into(), method.name().into()];
            push_rates(
                &mut cells,
                &m.get(ri, method),
                tf_ref_index(row.rho_bar).and_then(|i| groups.get(i)),
            );
            a.push(cells);
        }
    }
    a
}

pub fn mc_tf_blocks(s: &Scenario, m: &TfMetrics) -> TableArtifact {
    let r = ReferenceValues::builtin();
    let cfg = s.mc_config();
    let mut a = artifact(
        s,
        "mc_tf_blocks",
        &[
            "rho_bar",
            "block_len",
            "false_feasible",
            "false_infeasible",
            "coverage",
            "marginal",
            "reference_false_feasible",
            "reference_false_infeasible",
            "reference_coverage",
            "reference_marginal",
        ],
    );
    mc_meta(&mut a, &cfg);
    a.meta("method", TfMethod::Tier2.name());
    for row in &m.rows {
        for (l, c) in &row.blocks {
            // Block references exist for the 0.5% premium bound only.
            let reference = r.list(&format!("mc_tf_blocks.{l}"));
            let use_ref = tf_ref_index(row.rho_bar) == Some(1) && !reference.is_empty();
            let mut cells = vec![(row.rho_bar * PCT).into(), Cell::from(*l)];
            push_rates(&mut cells, c, use_ref.then_some(&reference));
            a.push(cells);
        }
    }
    a
}

pub fn mc_tf_width(s: &Scenario, m: &TfMetrics) -> TableArtifact {
    let r = ReferenceValues::builtin();
    let cfg = s.mc_config();
    let mut a = artifact(
        s,
        "mc_tf_width",
        &["statistic", "engine_bp", "reference_bp"],
    );
    mc_meta(&mut a, &cfg);
    a.meta("units", "basis points");
    a.push(vec![
        "mean".into(),
        (m.width_mean * 1e4).into(),
        reference_cell(&r, "mc_tf_width.mean_bp"),
    ]);
    a.push(vec![
        "median".into(),
        (m.width_median * 1e4).into(),
        reference_cell(&r, "mc_tf_width.median_bp"),
    ]);
    a
}

/// Both Monte Carlo experiments rendered as five tables.
pub fn mc_tables(s: &Scenario) -> Result<Vec<TableArtifact>> {
    let cfg = s.mc_config();
    let pe = run_mc_pe(&cfg)?;
    let tf = run_mc_tf(&cfg)?;
    Ok(vec![
        mc_pe(s, &pe),
        mc_pe_blocks(s, &pe),
        mc_tf(s, &tf),
        mc_tf_blocks(s, &tf),
        mc_tf_width(s, &tf),
    ])
}

/// Every standard table, in a fixed order.
pub fn all_tables(s: &Scenario) -> Result<Vec<TableArtifact>> {
    let mut out = vec![
        calibration(s)?,
        monitoring(s)?,
        baseline_v2(s)?,
        stress_table(s, "stress_v2")?,
        stress_annotations(s)?,
        tier_pe(s)?,
        tier_tf(s)?,
        psi_countries(s)?,
        psi_weights(s)?,
        window_sensitivity(s)?,
    ];
    out.extend(mc_tables(s)?);
    Ok(out)
}

/// Label of a closure reading under the sign rule, for reports.
pub fn pe_label(p: &TwoLayerParams) -> &'static str {
    let sc = score_pe(p);
    let label = if sc > 0.0 {
        BandLabel::Positive
    } else if sc < 0.0 {
        BandLabel::Negative
    } else {
        BandLabel::Ambiguous
    };
    label.name(InferenceMode::Pe)
}
