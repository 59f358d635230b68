//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the test log; exits non-zero on any FAIL.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sovereign_regime::closure::{
    amplification_response, demand_at, fixed_point_scan, pe_sensitivities, rho_bisection,
    rho_closed_form, solve_premium, FixedPointKind, MapKind, MarginDist, PremiumCase, ThetaLaw,
    TwoLayerParams, FIXED_POINT_TOL,
};
use sovereign_regime::extensions::{clock, psi_composite, PsiSpec};
use sovereign_regime::inference::mc::{run_mc_pe, run_mc_tf, PeMethod, TfMethod};
use sovereign_regime::inference::score_pe;
use sovereign_regime::scenario::tables::{
    calibration, monitoring, resolve_sweep, stress_annotations, stress_rows, PSI_COUNTRIES,
    PSI_WEIGHTS,
};
use sovereign_regime::scenario::{fmt_sig6, render_csv, Cell, Scenario};
use sovereign_regime::transition::required_growth_exogenous;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn baseline() -> Scenario {
    Scenario::from_text("").expect("defaults load")
}

fn single_thread<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("pool")
        .install(f)
}

fn engine(table: &sovereign_regime::scenario::TableArtifact, quantity: &str) -> f64 {
    match table.lookup("quantity", quantity, "engine") {
        Some(Cell::Num(x)) => *x,
        other => panic!("{quantity}: no engine value ({other:?})"),
    }
}

/// Rounds to the number of decimals a published figure is printed with.
fn at_published_precision(x: f64, decimals: i32) -> f64 {
    let k = 10f64.powi(decimals);
    (x * k).round() / k
}

fn c1_calibration() -> Outcome {
    let s = baseline();
    let start = Instant::now();
    let t = calibration(&s).expect("calibration");
    let elapsed = start.elapsed();
    // (quantity, published value, decimals printed)
    let published = [
        ("sprint_improvement", 2.4, 1),
        ("repression_dividend", 1.2, 1),
        ("gamma_threshold", 0.8, 1),
        ("t_star_linear", 3.0, 1),
        ("t_star_exp", 3.47, 2),
        ("x_max_rd", 0.6, 1),
        ("x_min_shock", 20.0, 0),
        ("x_min_demo_lo", 10.0, 0),
        ("x_min_demo_hi", 16.0, 0),
        ("x_max_safe", -0.08, 2),
    ];
    let mut worst = (0.0_f64, "none");
    for (q, value, decimals) in published {
        let d = (at_published_precision(engine(&t, q), decimals) - value).abs();
        if d > worst.0 {
            worst = (d, q);
        }
    }
    let t_exp = engine(&t, "t_star_exp");
    let exact_exp = (0.88f64 / 0.85).ln() / 0.01;
    let pass =
        worst.0 <= 1e-3 && (t_exp - exact_exp).abs() <= 1e-12 && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "max |engine - published| at printed precision = {:.2e} (worst: {}); raw T_exp = {} vs printed 3.47; {:.1} ms",
            worst.0,
            worst.1,
            fmt_sig6(t_exp),
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn c2_closure_baseline() -> Outcome {
    let p = baseline().closure_params().expect("closure");
    let sol = solve_premium(&p).expect("solve");
    let oracle = 0.65 + 0.35 * (1.0 - 0.02 / (0.97 * 0.06));
    let pass = (sol.phi_d_at_zero - 0.88).abs() <= 0.005
        && (sol.phi_d_at_zero - oracle).abs() <= 1e-12
        && sol.case == PremiumCase::Interior
        && sol.rho == Some(0.0)
        && (sol.slack * 100.0 - 3.0).abs() <= 0.1;
    outcome(
        pass,
        format!(
            "phi_d(0) = {}, case {}, rho = {:?}, slack = {} pp",
            fmt_sig6(sol.phi_d_at_zero),
            sol.case.code(),
            sol.rho,
            fmt_sig6(sol.slack * 100.0)
        ),
    )
}

fn c3_sensitivities() -> Outcome {
    let p = baseline().closure_params().expect("closure");
    let s = pe_sensitivities(&p).expect("sensitivities");
    let analytic = [s.d_b_d_theta, s.d_b_d_psi, s.d_b_d_z];
    let published = [0.344, 0.124, -6.01];
    let central = |f: &dyn Fn(f64) -> TwoLayerParams, x: f64| {
        let h = 1e-6 * x.abs().max(1e-3);
        (score_pe(&f(x + h)) - score_pe(&f(x - h))) / (2.0 * h)
    };
    let fd = [
        central(
            &|v| TwoLayerParams {
                theta: v,
                ..p.clone()
            },
            p.theta,
        ),
        central(
            &|v| TwoLayerParams {
                psi: v,
                ..p.clone()
            },
            p.psi,
        ),
        central(&|v| TwoLayerParams { z: v, ..p.clone() }, p.z),
    ];
    let mut pass = true;
    let mut worst_rel = 0.0_f64;
    for i in 0..3 {
        pass &= (analytic[i] - published[i]).abs() <= 0.005;
        let rel = (analytic[i] - fd[i]).abs() / analytic[i].abs();
        worst_rel = worst_rel.max(rel);
    }
    pass &= worst_rel <= 1e-6;
    outcome(
        pass,
        format!(
            "({}, {}, {}); worst finite-difference gap {:.1e} relative",
            fmt_sig6(analytic[0]),
            fmt_sig6(analytic[1]),
            fmt_sig6(analytic[2]),
            worst_rel
        ),
    )
}

fn c4_thresholds() -> Outcome {
    let s = baseline();
    let spec = s.transition_spec();
    let at = |rho_bar: f64, b: f64| {
        let mut t = spec.clone();
        t.rho_bar = rho_bar;
        t.state.b_prev = b;
        required_growth_exogenous(&t)
            .expect("threshold")
            .delta_g_min
            * 100.0
    };
    let base = at(0.0, 2.40);
    let premium = at(0.005, 2.40);
    let mon = at(0.0, 1.574);
    let widening = mon - base;
    let formula = (0.02 - 0.0) * (1.0 / 1.574 - 1.0 / 2.40) * 100.0;
    let pass = (base - 0.533).abs() <= 0.005
        && (premium - 1.03).abs() <= 0.005
        && (mon - 0.971).abs() <= 0.005
        && (0.437..=0.438).contains(&widening)
        && (widening - formula).abs() <= 1e-12;
    outcome(
        pass,
        format!(
            "{} / {} / {} pp; widening {} pp, formula gap {:.1e}",
            fmt_sig6(base),
            fmt_sig6(premium),
            fmt_sig6(mon),
            fmt_sig6(widening),
            (widening - formula).abs()
        ),
    )
}

fn c5_monitoring_clock() -> Outcome {
    let s = baseline();
    let t = clock(&s.monitoring).expect("clock").t_linear;
    let exact = (0.932 - 0.85) / 0.001876;
    let table = monitoring(&s).expect("monitoring table");
    let noted = table
        .metadata
        .iter()
        .any(|(k, v)| k == "note" && v.contains("rounded"));
    let pass = (t - exact).abs() <= 1e-12
        && (t - 43.71).abs() <= 0.005
        && (t - 43.6).abs() <= 0.2
        && noted;
    outcome(
        pass,
        format!(
            "{} yr vs published 43.6 (tolerance 0.2 yr); rounding note present: {noted}",
            fmt_sig6(t)
        ),
    )
}

fn random_instance(rng: &mut ChaCha8Rng) -> TwoLayerParams {
    TwoLayerParams {
        theta: rng.random_range(0.0..0.99),
        psi: rng.random_range(0.05..=1.0),
        z: rng.random_range(0.001..0.1),
        c_bar: rng.random_range(0.005..0.2),
        phi_req: rng.random_range(0.0..=1.0),
        dist: MarginDist::Uniform,
    }
}

fn c6_complementarity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let start = Instant::now();
    let (mut worst_slack, mut worst_product, mut worst_gap) = (0.0_f64, 0.0_f64, 0.0_f64);
    let (mut negative, mut stress) = (0, 0);
    for _ in 0..1000 {
        let p = random_instance(&mut rng);
        let sol = solve_premium(&p).expect("solve");
        let Some(rho) = sol.rho else { continue };
        let excess = demand_at(rho, &p) - p.phi_req;
        negative += usize::from(rho < 0.0);
        worst_slack = worst_slack.min(excess);
        worst_product = worst_product.max(rho * excess);
        if sol.case == PremiumCase::Stress {
            stress += 1;
            worst_gap = worst_gap.max((rho_closed_form(&p) - rho_bisection(&p)).abs());
        }
    }
    let elapsed = start.elapsed();
    let pass = negative == 0
        && worst_slack >= -1e-12
        && worst_product <= 1e-10
        && worst_gap <= 1e-10
        && elapsed < Duration::from_secs(5);
    outcome(
        pass,
        format!(
            "1000 instances ({stress} in case c): min slack {:.1e}, max product {:.1e}, max closed-form gap {:.1e}; {:.0} ms",
            worst_slack,
            worst_product,
            worst_gap,
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn c7_contraction_and_fixed_points() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut checked, mut bound_ok, mut one_point_ok, mut residual_ok) = (0, true, true, true);
    let mut worst_ratio = 0.0_f64;
    while checked < 40 {
        let p = TwoLayerParams {
            theta: rng.random_range(0.45..0.7),
            ..TwoLayerParams::default()
        };
        let law = ThetaLaw {
            kappa_theta: rng.random_range(0.0..0.04),
            g0: rng.random_range(0.0..8.0),
            eps_cap: 0.02,
        };
        let delta = rng.random_range(0.002..0.02);
        let a = amplification_response(&p, &law, 0.027, 0.022, delta, 401).expect("amplification");
        if a.eta_max > 0.9 {
            continue;
        }
        checked += 1;
        let bound = a.bound_theta.expect("contraction bound");
        worst_ratio = worst_ratio.max(a.theta_shift / bound);
        bound_ok &= a.theta_shift <= 1.05 * bound;
        let scan =
            fixed_point_scan(&p, &law, 0.027, 0.022, MapKind::Expectations, 20001).expect("scan");
        one_point_ok &= scan.points.len() <= 1;
        residual_ok &= scan.points.iter().all(|f| f.residual <= FIXED_POINT_TOL);
    }

    // Thin margin above the boundary and strong maintenance: the loop has a
    // safe and a stress equilibrium separated by an unstable crossing.
    let p = TwoLayerParams {
        theta: 0.95,
        phi_req: 0.97,
        ..TwoLayerParams::default()
    };
    let law = ThetaLaw {
        kappa_theta: 0.06,
        g0: 30.0,
        eps_cap: 0.02,
    };
    let scan =
        fixed_point_scan(&p, &law, 0.027, 0.026, MapKind::Expectations, 20001).expect("scan");
    let boundary = scan.theta_boundary.expect("boundary");
    let eta = sovereign_regime::closure::feedback_gain(
        &TwoLayerParams {
            theta: boundary,
            ..p.clone()
        },
        &law,
    );
    let stable: Vec<_> = scan.stable().collect();
    let two_sided = stable.len() == 2
        && stable
            .iter()
            .any(|f| f.kind == FixedPointKind::Safe && f.theta_star > boundary)
        && stable
            .iter()
            .any(|f| f.kind == FixedPointKind::Stress && f.theta_star < boundary);
    residual_ok &= scan.points.iter().all(|f| f.residual <= FIXED_POINT_TOL);
    let pass = bound_ok && one_point_ok && residual_ok && two_sided && eta >= 1.0;
    let positions: Vec<String> = stable
        .iter()
        .map(|f| format!("{} {}", f.kind.as_str(), fmt_sig6(f.theta_star)))
        .collect();
    outcome(
        pass,
        format!(
            "{checked} contraction instances, worst response/bound {:.3}, at most one fixed point: {one_point_ok}; \
             engineered eta {} at boundary {}: stable points [{}]",
            worst_ratio,
            fmt_sig6(eta),
            fmt_sig6(boundary),
            positions.join(", ")
        ),
    )
}

fn c8_mc_pe() -> Outcome {
    let cfg = baseline().mc_config();
    let start = Instant::now();
    let m = single_thread(|| run_mc_pe(&cfg)).expect("pe monte carlo");
    let elapsed = start.elapsed();
    let mut pass = cfg.n_reps == 500 && cfg.quarters == 60 && cfg.subsample.alpha == 0.10;
    let (mut fs_max, mut warn_lo, mut warn_hi, mut naive_min) =
        (0.0_f64, 1.0_f64, 0.0_f64, 1.0_f64);
    for h in 0..m.horizons.len() {
        let t2 = m.get(h, PeMethod::Tier2);
        fs_max = fs_max.max(t2.false_positive_rate());
        warn_lo = warn_lo.min(t2.ambiguous_rate());
        warn_hi = warn_hi.max(t2.ambiguous_rate());
        naive_min = naive_min.min(m.get(h, PeMethod::Naive).false_positive_rate());
    }
    let metric = |f: fn(&sovereign_regime::inference::mc::LabelCounts) -> f64| {
        let v: Vec<f64> = m.blocks.iter().map(|(_, c)| f(c) * 100.0).collect();
        v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - v.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let spread = [
        metric(|c| c.false_positive_rate()),
        metric(|c| c.false_negative_rate()),
        metric(|c| c.coverage()),
        metric(|c| c.ambiguous_rate()),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    pass &= fs_max <= 0.005
        && warn_lo >= 0.15
        && warn_hi <= 0.45
        && naive_min > 0.0
        && spread <= 3.0
        && elapsed < Duration::from_secs(120);
    outcome(
        pass,
        format!(
            "Tier-2 false safety <= {:.1}%, warning {:.1}-{:.1}%; naive false safety >= {:.1}%; block spread {:.1} pp; {:.2} s single-threaded",
            fs_max * 100.0,
            warn_lo * 100.0,
            warn_hi * 100.0,
            naive_min * 100.0,
            spread,
            elapsed.as_secs_f64()
        ),
    )
}

fn c9_mc_tf() -> Outcome {
    let cfg = baseline().mc_config();
    let m = run_mc_tf(&cfg).expect("tf monte carlo");
    let width_bp = m.width_mean * 1e4;
    let false_feasible: u64 = (0..m.rows.len())
        .map(|r| m.get(r, TfMethod::Tier2).false_positive)
        .sum();
    let marginal: Vec<f64> = (0..m.rows.len())
        .map(|r| m.get(r, TfMethod::Tier2).ambiguous_rate() * 100.0)
        .collect();
    let decreasing = marginal.windows(2).all(|w| w[1] <= w[0]);
    let bars: Vec<f64> = m.rows.iter().map(|r| r.rho_bar).collect();
    let pass = (40.0..=48.0).contains(&width_bp)
        && false_feasible == 0
        && decreasing
        && bars == [0.0, 0.005, 0.01];
    let shown: Vec<String> = marginal.iter().map(|x| format!("{x:.1}")).collect();
    outcome(
        pass,
        format!(
            "width mean {:.2} bp; Tier-2 false feasible {false_feasible}; marginal % across rho_bar {{0, 0.5, 1.0}}: {}",
            width_bp,
            shown.join(" / ")
        ),
    )
}

fn c10_stress_divergence() -> Outcome {
    let s = baseline();
    let sweep = resolve_sweep(&s, "stress_v2").expect("sweep");
    let rows = stress_rows(&s, &sweep).expect("rows");
    let ext = rows
        .iter()
        .find(|r| r.name == "external_stress")
        .expect("external stress row");
    let mut worst_gap = 0.0_f64;
    for r in rows.iter().filter(|r| r.case == PremiumCase::Stress) {
        worst_gap = worst_gap.max((r.rho_star.expect("case c premium") - r.rho_closed_form).abs());
    }
    let csv = render_csv(&stress_annotations(&s).expect("annotations"));
    let line = csv
        .lines()
        .find(|l| l.starts_with("external_stress,"))
        .unwrap_or("");
    let engine_pct = fmt_sig6(ext.rho_star.unwrap_or(f64::NAN) * 100.0);
    let renders_both = line.contains(&engine_pct) && line.split(',').any(|f| f == "0.39");
    let pass = (ext.phi_d0 - 0.82).abs() <= 0.005
        && ext.case == PremiumCase::Stress
        && worst_gap <= 1e-10
        && (ext.rho_star.unwrap_or(0.0) * 100.0 - 0.505).abs() <= 0.001
        && renders_both;
    outcome(
        pass,
        format!(
            "external stress phi_d(0) = {}, engine rho* = {}% vs reference 0.39%; solver-formula gap {:.1e}; annotation renders both: {renders_both}",
            fmt_sig6(ext.phi_d0),
            engine_pct,
            worst_gap
        ),
    )
}

fn c11_psi() -> Outcome {
    let published = [0.977, 0.39, 0.277];
    let mut pass = true;
    let mut values = Vec::new();
    for (i, &(_, mon, abs_proxy, fx)) in PSI_COUNTRIES.iter().enumerate() {
        let v = psi_composite(&PsiSpec::equal_weights(mon, abs_proxy, fx)).expect("psi");
        pass &= (v - published[i]).abs() <= 0.005;
        values.push(fmt_sig6(v));
    }
    let mut ordered = 0;
    for (_, weights) in PSI_WEIGHTS {
        let v: Vec<f64> = PSI_COUNTRIES
            .iter()
            .map(|&(_, mon, abs_proxy, fx)| {
                psi_composite(&PsiSpec {
                    mon,
                    abs_proxy,
                    fx,
                    weights,
                })
                .expect("psi")
            })
            .collect();
        ordered += usize::from(v[0] > v[1] && v[1] > v[2]);
    }
    pass &= ordered == PSI_WEIGHTS.len();
    outcome(
        pass,
        format!(
            "Japan/Italy/Greece = {}; ordering kept under {ordered}/{} weight vectors",
            values.join(" / "),
            PSI_WEIGHTS.len()
        ),
    )
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_sovereign-regime"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn c12_determinism() -> Outcome {
    let mc = ["mc", "--reps", "500", "--seed", "42"];
    let mut same = true;
    for cmd in [&mc[..], &["tables"][..]] {
        let first = cli(cmd);
        let again = cli(cmd);
        let one = cli(&[&["--threads", "1"][..], cmd].concat());
        let eight = cli(&[&["--threads", "8"][..], cmd].concat());
        same &= first == again && first == one && first == eight && !first.is_empty();
    }
    outcome(
        same,
        "mc --reps 500 --seed 42 and tables: repeated runs and --threads 1 vs 8 byte-identical",
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        ("calibration quantities", c1_calibration),
        ("closure baseline", c2_closure_baseline),
        ("score sensitivities", c3_sensitivities),
        ("transition thresholds", c4_thresholds),
        ("monitoring clock", c5_monitoring_clock),
        ("complementarity suite", c6_complementarity),
        (
            "contraction and fixed points",
            c7_contraction_and_fixed_points,
        ),
        ("premium-emergence Monte Carlo", c8_mc_pe),
        ("transition Monte Carlo", c9_mc_tf),
        ("stress grid divergence", c10_stress_divergence),
        ("control-rights composites", c11_psi),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.pass);
        println!(
            "criterion {:>2} {:<30} {}  {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
