//! Acceptance gate for the workspace. Nine behavioral criteria, each
//! printing exactly one pass or fail line. A criterion that misses panics
//! with every sub-check that failed, so the suite stays red until the
//! behavior is restored; nothing here is tuned to the implementation.

use std::collections::BTreeMap;
use std::process::Command;

use weakmeas::gaussian_oracle::hermite_identity_residuals;
use weakmeas::tolerances::scaled_residual;
use weakmeas::{
    aav_closed_forms, aav_optimal_expectation, aav_optimal_snr, aav_setup, argmax_scan,
    density_p_orthogonal, density_q_orthogonal, dsjh_amplification, dsjh_closed_forms,
    dsjh_global_max, dsjh_optimal_expectation, dsjh_optimal_snr, dsjh_setup, ks_critical_1pct,
    ks_statistic, moments_nonorthogonal, moments_orthogonal, oracle_report,
    orthogonal_grid_reference, sample_density, series_moments, series_z, snr_scaling,
    wu_li_shifts, AavPoint, Curve, DensityForm, DsjhPoint, GridSpec, MeasurementPoint,
    SetupPoint, WeakValue,
};

/// Coupling lattice shared by the equivalence criteria.
const S_LATTICE: [f64; 4] = [0.01, 0.1, 1.0, 10.0];
/// Angle lattice shared by the equivalence criteria, valid as a spin
/// pre-selection angle and as a dark-port phase alike.
const ANGLE_LATTICE: [f64; 4] = [0.3, 1.0, 2.0, 2.8];
/// Grid-route agreement demanded of every closed form.
const GRID_TOL: f64 = 1e-8;
/// Series-route agreement demanded at 60 terms for s up to 5.
const SERIES_TOL: f64 = 1e-10;
const SERIES_TERMS: usize = 60;
/// Ensemble seed, identical to the command-line default.
const SEED: u64 = 20240813;

/// Scan objective over the post-selection angle at a fixed coupling.
type Objective = Box<dyn Fn(f64) -> f64>;

fn verdict(name: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("{name}: pass");
    } else {
        println!("{name}: FAIL");
        panic!("{name}: FAIL\n  {}", failures.join("\n  "));
    }
}

fn check(failures: &mut Vec<String>, ok: bool, detail: impl FnOnce() -> String) {
    if !ok {
        failures.push(detail());
    }
}

/// Weak value realized by the spin pair at pre-selection angle alpha.
fn spin_weak_value(alpha: f64) -> WeakValue {
    WeakValue::new((0.5 * alpha).tan(), 0.0)
}

/// Weak value realized by the dark port at phase phi.
fn sagnac_weak_value(phi: f64) -> WeakValue {
    WeakValue::new(0.0, -1.0 / (0.5 * phi).tan())
}

#[test]
fn criterion_1_closed_forms_match_the_grid_simulation() {
    let mut failures = Vec::new();
    for s in S_LATTICE {
        let spec = GridSpec::default_for(s).expect("lattice couplings are valid");
        for angle in ANGLE_LATTICE {
            for (family, setup) in [("spin", aav_setup(angle)), ("sagnac", dsjh_setup(angle))] {
                let report = oracle_report(&setup, s, spec).expect("lattice points simulate");
                for (key, residual) in &report.residuals_vs_closed_form {
                    check(&mut failures, *residual <= GRID_TOL, || {
                        format!(
                            "{family} s={s} angle={angle}: {key} residual {residual:.3e} \
                             exceeds {GRID_TOL:.0e}"
                        )
                    });
                }
            }
        }
    }
    verdict("criterion 1 (closed forms vs grid simulation)", &failures);
}

#[test]
fn criterion_2_closed_forms_match_the_operator_series() {
    let mut failures = Vec::new();
    for s in S_LATTICE.into_iter().filter(|&s| s <= 5.0) {
        for angle in ANGLE_LATTICE {
            for (family, w) in [
                ("spin", spin_weak_value(angle)),
                ("sagnac", sagnac_weak_value(angle)),
            ] {
                let pt = MeasurementPoint::new(s, w).expect("lattice points are valid");
                let closed = moments_nonorthogonal(pt);
                let z = series_z(pt, SERIES_TERMS).expect("series converges on the lattice");
                let m = series_moments(pt, SERIES_TERMS).expect("series converges on the lattice");
                let pairs = [
                    ("z", z, closed.z),
                    ("mean_q", m.mean_q, closed.mean_q),
                    ("mean_p", m.mean_p, closed.mean_p),
                    ("var_q", m.var_q, closed.var_q),
                    ("var_p", m.var_p, closed.var_p),
                ];
                for (key, got, want) in pairs {
                    let residual = scaled_residual(got, want);
                    check(&mut failures, residual <= SERIES_TOL, || {
                        format!(
                            "{family} s={s} angle={angle}: series {key} residual \
                             {residual:.3e} exceeds {SERIES_TOL:.0e}"
                        )
                    });
                }
            }
        }
    }
    verdict("criterion 2 (closed forms vs operator series)", &failures);
}

#[test]
fn criterion_3_optimal_working_point_constants() {
    let mut failures = Vec::new();

    let (s_m, phi_m, signal) = dsjh_global_max();
    check(&mut failures, (s_m - 0.79681).abs() <= 1e-4, || {
        format!("global-maximum coupling {s_m} is not 0.79681 within 1e-4")
    });
    check(&mut failures, (signal - 0.402371).abs() <= 1e-5, || {
        format!("maximal dimensionless signal {signal} is not 0.402371 within 1e-5")
    });
    check(&mut failures, (phi_m - 1.103).abs() <= 1e-3, || {
        format!("global-maximum phase {phi_m} is not 1.103 rad within 1e-3")
    });

    let small = aav_optimal_snr(1e-4)
        .expect("s = 1e-4 is valid")
        .objective_value;
    check(&mut failures, (small - 1.0746).abs() <= 1e-3, || {
        format!("spin optimized snr at s = 1e-4 is {small}, not 1.0746 within 1e-3")
    });

    // The optimized dark-port snr approaches sqrt(2/sqrt(3)) from below as
    // s tends to zero and decreases from there.
    let bound = (2.0 / 3f64.sqrt()).sqrt();
    for s in [0.01, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let snr = dsjh_optimal_snr(s).expect("positive s is valid").objective_value;
        check(&mut failures, snr < bound, || {
            format!("sagnac optimized snr {snr} at s = {s} reaches the bound {bound}")
        });
    }
    let below = dsjh_optimal_snr(0.14).expect("valid").objective_value;
    let above = dsjh_optimal_snr(0.16).expect("valid").objective_value;
    check(&mut failures, below > 1.0 && above < 1.0, || {
        format!(
            "sagnac optimized snr should cross 1 between s = 0.14 and 0.16, \
             got {below} and {above}"
        )
    });

    // Known red. The target band of 600 within 15 percent and the maximal
    // signal cannot both hold: with k = 2e-5 and delta = 3 the band asks
    // for a dimensionless signal near 600 * k * delta = 0.036, while both
    // independent oracle routes confirm the maximal signal 0.402371
    // checked above, which gives 0.402371 / (k delta) = 6.7e3. The
    // computed value follows the confirmed signal, so this sub-check
    // documents the inconsistency rather than hiding it.
    let pt = DsjhPoint::new(s_m, phi_m).expect("the global maximum is valid");
    let amp = dsjh_amplification(pt, 2e-5, 3.0).expect("positive k and delta");
    check(&mut failures, (510.0..=690.0).contains(&amp), || {
        format!(
            "amplification at k = 2e-5 per um, delta = 3 um is {amp:.2}, outside the \
             target band 510..690; the band implies a dimensionless signal near 0.036, \
             contradicting the confirmed maximal signal 0.402371 (= {amp:.2} * k * delta), \
             so the band and the signal cannot both hold and the computed value follows \
             the signal"
        )
    });

    verdict("criterion 3 (optimal working-point constants)", &failures);
}

#[test]
fn criterion_4_closed_form_optima_match_dense_scans() {
    let mut failures = Vec::new();
    let scan_points = 2001;
    for s in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let cases: [(&str, (f64, f64), Objective, _); 4] = [
            (
                "spin deflection",
                (1.0, 3.13),
                Box::new(move |a| {
                    aav_closed_forms(AavPoint::new(s, a).expect("window is valid"))
                        .expect("window is non-orthogonal")
                        .mean_pz
                }),
                aav_optimal_expectation(s).expect("positive s is valid"),
            ),
            (
                "spin snr",
                (1.0, 3.13),
                Box::new(move |a| {
                    aav_closed_forms(AavPoint::new(s, a).expect("window is valid"))
                        .expect("window is non-orthogonal")
                        .snr
                }),
                aav_optimal_snr(s).expect("positive s is valid"),
            ),
            (
                "sagnac signal",
                (0.02, 1.77),
                Box::new(move |p| {
                    -dsjh_closed_forms(DsjhPoint::new(s, p).expect("window is valid"))
                        .expect("window is non-orthogonal")
                        .mean_kx
                }),
                dsjh_optimal_expectation(s).expect("positive s is valid"),
            ),
            (
                "sagnac snr",
                (0.005, 1.77),
                Box::new(move |p| {
                    dsjh_closed_forms(DsjhPoint::new(s, p).expect("window is valid"))
                        .expect("window is non-orthogonal")
                        .snr
                }),
                dsjh_optimal_snr(s).expect("positive s is valid"),
            ),
        ];
        for (label, (lo, hi), objective, closed) in cases {
            let (angle, _) = argmax_scan(objective.as_ref(), lo, hi, scan_points)
                .expect("objectives are finite on the window");
            check(&mut failures, (angle - closed.angle).abs() <= 1e-8, || {
                format!(
                    "{label} s={s}: scan angle {angle} vs closed angle {} differs by {:.3e}",
                    closed.angle,
                    (angle - closed.angle).abs()
                )
            });
            for key in ["defining_residual", "quadratic_residual"] {
                if let Some(residual) = closed.companion_stats.get(key) {
                    check(&mut failures, *residual <= 1e-12, || {
                        format!("{label} s={s}: {key} {residual:.3e} exceeds 1e-12")
                    });
                }
            }
        }
    }
    verdict("criterion 4 (closed-form optima vs dense scans)", &failures);
}

#[test]
fn criterion_5_limits_of_the_closed_forms() {
    let mut failures = Vec::new();

    // Strong limit: the conditional state collapses onto the observable's
    // eigenbasis and the pointer mean saturates at 2 Re w / (1 + |w|^2).
    for (re, im) in [(0.5, 0.0), (0.3, 0.4), (0.0, 2.0)] {
        let w = WeakValue::new(re, im);
        let pt = MeasurementPoint::new(50.0, w).expect("s = 50 is valid");
        let saturated = 2.0 * re / (1.0 + w.modulus_sq());
        let got = moments_nonorthogonal(pt).mean_q;
        check(&mut failures, (got - saturated).abs() <= 1e-10, || {
            format!("strong-limit mean_q for w = {re}+{im}i is {got}, want {saturated}")
        });
    }
    for alpha in ANGLE_LATTICE {
        let got = aav_closed_forms(AavPoint::new(50.0, alpha).expect("valid"))
            .expect("non-orthogonal")
            .mean_pz;
        check(&mut failures, (got - alpha.sin()).abs() <= 1e-10, || {
            format!("strong-limit spin deflection at alpha = {alpha} is {got}, want sin")
        });
    }

    // Weak limit: mean_q approaches Re w linearly in s, so the error over s
    // is a bounded ratio across two decades.
    let w = WeakValue::new(0.5, 0.0);
    let ratios: Vec<f64> = [1e-4, 1e-3, 1e-2]
        .into_iter()
        .map(|s| {
            let pt = MeasurementPoint::new(s, w).expect("valid");
            (moments_nonorthogonal(pt).mean_q - w.re).abs() / s
        })
        .collect();
    let spread = ratios.iter().cloned().fold(f64::MIN, f64::max)
        / ratios.iter().cloned().fold(f64::MAX, f64::min);
    check(&mut failures, spread <= 1.2, || {
        format!("weak-limit error is not linear in s, ratio spread {spread} over {ratios:?}")
    });

    // Linear-response shifts for an involutory observable (the A^2 weak
    // value is 1, the initial state has no qp correlation).
    for (re, im) in [(0.3, 0.4), (2.0, -1.0)] {
        let pt = MeasurementPoint::new(1e-3, WeakValue::new(re, im)).expect("valid");
        let exact = moments_nonorthogonal(pt);
        let (dq, dp) = wu_li_shifts(pt, WeakValue::new(1.0, 0.0), 0.0);
        let rel_q = (dq - exact.mean_q).abs() / exact.mean_q.abs();
        let rel_p = (dp - exact.mean_p).abs() / exact.mean_p.abs();
        check(&mut failures, rel_q <= 5e-3, || {
            format!("linear-response q shift for w = {re}+{im}i is off by {rel_q:.3e}")
        });
        check(&mut failures, rel_p <= 5e-3, || {
            format!("linear-response p shift for w = {re}+{im}i is off by {rel_p:.3e}")
        });
    }

    verdict("criterion 5 (limits of the closed forms)", &failures);
}

#[test]
fn criterion_6_orthogonal_post_selection_arbitration() {
    let mut failures = Vec::new();
    for s in [0.05, 0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0] {
        let stats = moments_orthogonal(s).expect("positive s is valid");
        let grid = orthogonal_grid_reference(s).expect("positive s is valid");

        let z_residual = scaled_residual(grid.z_o, stats.z_o_series);
        check(&mut failures, z_residual <= GRID_TOL, || {
            format!("s={s}: orthogonal normalization series vs grid residual {z_residual:.3e}")
        });

        // The post-selected densities are even, so both means are exactly
        // the zero the constructor writes, not merely small.
        check(
            &mut failures,
            stats.mean_q.to_bits() == 0 && stats.mean_p.to_bits() == 0,
            || format!("s={s}: orthogonal means are not bitwise zero"),
        );

        // Unit normalization of the closed orthogonal densities, integrated
        // over a window wide enough that the clipped tails are negligible.
        let half_u = 5.0 + 13.0 * stats.var_p_grid.sqrt();
        let half_v = 5.0 + 13.0 * stats.var_q_grid.sqrt();
        let int_u = Curve::tabulate(
            |u| density_p_orthogonal(s, u, DensityForm::Normalized).expect("valid"),
            -half_u,
            half_u,
            4001,
        )
        .expect("window is finite")
        .integral();
        let int_v = Curve::tabulate(
            |v| density_q_orthogonal(s, v, DensityForm::Normalized).expect("valid"),
            -half_v,
            half_v,
            4001,
        )
        .expect("window is finite")
        .integral();
        check(&mut failures, (int_u - 1.0).abs() <= 1e-9, || {
            format!("s={s}: normalized momentum density integrates to {int_u}")
        });
        check(&mut failures, (int_v - 1.0).abs() <= 1e-9, || {
            format!("s={s}: normalized position density integrates to {int_v}")
        });

        // Pointwise agreement with the simulated post-selected wave.
        let spec = GridSpec::default_for(s).expect("valid");
        let report = oracle_report(&aav_setup(std::f64::consts::PI), s, spec)
            .expect("the orthogonal vehicle simulates");
        for (key, residual) in &report.residuals_vs_closed_form {
            check(&mut failures, *residual <= GRID_TOL, || {
                format!("s={s}: orthogonal {key} residual {residual:.3e} exceeds {GRID_TOL:.0e}")
            });
        }
    }

    // The errata table records the disagreement of the commonly quoted
    // closed forms without asserting anything about its size.
    let out = Command::new(env!("CARGO_BIN_EXE_weakmeas"))
        .arg("errata")
        .output()
        .expect("errata subcommand runs");
    check(&mut failures, out.status.code() == Some(0), || {
        format!("errata subcommand exited {:?}", out.status.code())
    });
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    check(
        &mut failures,
        text.contains("s,z_o_closed,z_o_series,z_o_grid,series_vs_grid,closed_vs_series"),
        || "errata table is missing its dual-reporting columns".to_string(),
    );
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("s,")) {
        let fields: Vec<&str> = line.split(',').collect();
        let series_vs_grid: f64 = fields[4].parse().expect("numeric errata field");
        let closed_vs_series: f64 = fields[5].parse().expect("numeric errata field");
        check(&mut failures, series_vs_grid <= GRID_TOL, || {
            format!("errata row {line} shows series vs grid residual above {GRID_TOL:.0e}")
        });
        check(&mut failures, closed_vs_series.is_finite(), || {
            format!("errata row {line} failed to record the closed-form residual")
        });
    }

    verdict("criterion 6 (orthogonal post-selection arbitration)", &failures);
}

#[test]
fn criterion_7_hermite_identity_suite() {
    let mut failures = Vec::new();
    let xs = [-3.0, -1.0, -0.25, 0.0, 0.25, 1.0, 3.0];
    let residuals = hermite_identity_residuals(12, &xs).expect("order 12 is supported");
    check(&mut failures, residuals.len() == 11, || {
        format!("expected 11 identity families, got {}", residuals.len())
    });
    for (name, residual) in &residuals {
        check(&mut failures, *residual <= 1e-9, || {
            format!("identity {name} residual {residual:.3e} exceeds 1e-9")
        });
    }
    verdict("criterion 7 (hermite identity suite)", &failures);
}

#[test]
fn criterion_8_ensemble_square_root_scaling() {
    let mut failures = Vec::new();
    let n_values = [1usize, 10, 100, 1000, 10000];

    let spin_angle = aav_optimal_snr(1.0).expect("s = 1 is valid").angle;
    let spin_pt = AavPoint::new(1.0, spin_angle).expect("optimal angle is valid");
    let s_m = dsjh_global_max().0;
    let sagnac_angle = dsjh_optimal_snr(s_m).expect("s_m is valid").angle;
    let sagnac_pt = DsjhPoint::new(s_m, sagnac_angle).expect("optimal angle is valid");

    let cases = [
        (
            "spin",
            SetupPoint::Aav(spin_pt),
            aav_closed_forms(spin_pt).expect("valid").snr.abs(),
        ),
        (
            "sagnac",
            SetupPoint::Dsjh(sagnac_pt),
            dsjh_closed_forms(sagnac_pt).expect("valid").snr.abs(),
        ),
    ];
    for (label, point, closed_snr) in cases {
        let table = snr_scaling(point, &n_values, 4000, SEED).expect("the scaling run is valid");
        check(
            &mut failures,
            (0.45..=0.55).contains(&table.slope),
            || format!("{label} log-log snr slope {} is outside 0.45..0.55", table.slope),
        );
        let last = table.rows.last().expect("rows are non-empty");
        let expected = closed_snr * (last.n as f64).sqrt();
        let rel = (last.snr - expected).abs() / expected;
        check(&mut failures, rel <= 0.05, || {
            format!(
                "{label} snr at N = {} is {}, {rel:.3} away from the closed prediction \
                 {expected}",
                last.n, last.snr
            )
        });

        let curve = point.density_curve(4001).expect("density tabulates");
        let batch = sample_density(&curve, 100_000, SEED).expect("sampling is valid");
        let ks = ks_statistic(&batch.draws, &curve).expect("draws came from this curve");
        let critical = ks_critical_1pct(100_000);
        check(&mut failures, ks <= critical, || {
            format!("{label} sampler KS statistic {ks:.3e} exceeds the 1% value {critical:.3e}")
        });
    }
    verdict("criterion 8 (ensemble square-root scaling)", &failures);
}

struct Table {
    header: String,
    rows: Vec<Vec<String>>,
}

fn figure_table(number: u32) -> Table {
    let out = Command::new(env!("CARGO_BIN_EXE_weakmeas"))
        .args(["figure", &number.to_string()])
        .output()
        .expect("figure subcommand runs");
    assert_eq!(out.status.code(), Some(0), "figure {number} failed");
    let text = String::from_utf8(out.stdout).expect("figure output is utf-8");
    let mut lines = text.lines().filter(|line| !line.starts_with('#'));
    let header = lines.next().expect("figure output has a header").to_string();
    let rows = lines
        .map(|line| line.split(',').map(str::to_string).collect())
        .collect();
    Table { header, rows }
}

fn trapezoid(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|pair| 0.5 * (pair[1].0 - pair[0].0) * (pair[0].1 + pair[1].1))
        .sum()
}

/// Argmax angle per (panel, s) group of a surface table, with the angle and
/// value columns given by index.
fn ridge_argmax(table: &Table, angle_col: usize, value_col: usize) -> BTreeMap<(String, String), f64> {
    let mut best: BTreeMap<(String, String), (f64, f64)> = BTreeMap::new();
    for row in &table.rows {
        let key = (row[0].clone(), row[1].clone());
        let angle: f64 = row[angle_col].parse().expect("numeric angle");
        let value: f64 = row[value_col].parse().expect("numeric value");
        let entry = best.entry(key).or_insert((f64::NEG_INFINITY, f64::NAN));
        if value > entry.0 {
            *entry = (value, angle);
        }
    }
    best.into_iter().map(|(key, (_, angle))| (key, angle)).collect()
}

#[test]
fn criterion_9_figure_lattices_and_ridges() {
    let mut failures = Vec::new();

    let headers = [
        (1, "panel,s,alpha,mean_pz"),
        (2, "s,alpha,mean,delta,mean_plus_delta,mean_minus_delta"),
        (3, "s,abscissa,initial,post_selected"),
        (4, "panel,s,alpha,snr"),
        (5, "s,alpha,snr"),
        (6, "panel,s,phi,signal"),
        (7, "s,phi,signal"),
        (8, "s,abscissa,initial,post_selected"),
        (9, "s,phi,snr"),
        (10, "s,phi,snr"),
    ];
    let mut tables = BTreeMap::new();
    for (number, want) in headers {
        let table = figure_table(number);
        check(&mut failures, table.header == want, || {
            format!("figure {number} header is {:?}, want {want:?}", table.header)
        });
        check(&mut failures, !table.rows.is_empty(), || {
            format!("figure {number} emitted no rows")
        });
        tables.insert(number, table);
    }

    // The deflection surface peaks along cos alpha = -e^(-s) at every fixed
    // coupling, to within one lattice spacing of the angle grid.
    let spacing = std::f64::consts::TAU / 121.0;
    for ((panel, s_txt), angle) in ridge_argmax(&tables[&1], 2, 3) {
        let s: f64 = s_txt.parse().expect("numeric s");
        let expected = (-(-s).exp()).acos();
        check(&mut failures, (angle - expected).abs() <= spacing, || {
            format!(
                "figure 1 panel {panel} s={s}: ridge at alpha {angle}, want {expected} \
                 within {spacing:.3e}"
            )
        });
    }

    // The dark-port signal surface peaks along cos phi = e^(-s).
    let spacing = std::f64::consts::PI / 121.0;
    for ((panel, s_txt), angle) in ridge_argmax(&tables[&6], 2, 3) {
        let s: f64 = s_txt.parse().expect("numeric s");
        let expected = (-s).exp().acos();
        check(&mut failures, (angle - expected).abs() <= spacing, || {
            format!(
                "figure 6 panel {panel} s={s}: ridge at phi {angle}, want {expected} \
                 within {spacing:.3e}"
            )
        });
    }

    // Density figures carry non-negative, unit-normalized curves for each
    // tabulated coupling.
    for number in [3u32, 8] {
        let table = &tables[&number];
        let mut blocks: BTreeMap<String, Vec<(f64, f64, f64)>> = BTreeMap::new();
        for row in &table.rows {
            blocks.entry(row[0].clone()).or_default().push((
                row[1].parse().expect("numeric abscissa"),
                row[2].parse().expect("numeric density"),
                row[3].parse().expect("numeric density"),
            ));
        }
        check(&mut failures, blocks.len() == 4, || {
            format!("figure {number} has {} coupling blocks, want 4", blocks.len())
        });
        for (s_txt, rows) in blocks {
            let initial: Vec<(f64, f64)> = rows.iter().map(|r| (r.0, r.1)).collect();
            let post: Vec<(f64, f64)> = rows.iter().map(|r| (r.0, r.2)).collect();
            check(
                &mut failures,
                post.iter().all(|&(_, y)| y >= -1e-12),
                || format!("figure {number} s={s_txt}: density goes negative"),
            );
            let int_initial = trapezoid(&initial);
            let int_post = trapezoid(&post);
            check(&mut failures, (int_initial - 1.0).abs() <= 1e-6, || {
                format!("figure {number} s={s_txt}: initial density integrates to {int_initial}")
            });
            check(&mut failures, (int_post - 1.0).abs() <= 1e-6, || {
                format!("figure {number} s={s_txt}: post-selected density integrates to {int_post}")
            });
        }
    }

    verdict("criterion 9 (figure lattices and ridges)", &failures);
}
