//! The point, lattice, density, optimum, and ensemble subcommands.

use weakmeas::{
    aav_closed_forms, aav_optimal_expectation, aav_optimal_snr, aav_setup, density_p_nonorthogonal,
    density_p_orthogonal, density_q_nonorthogonal, density_q_orthogonal, dsjh_closed_forms,
    dsjh_global_max, dsjh_optimal_expectation, dsjh_optimal_snr, dsjh_setup, moments_nonorthogonal,
    moments_orthogonal, weak_value_of, AavPoint, DensityForm, DsjhPoint, MeasurementPoint,
    OptimalPoint, PostSelection, SetupPoint, WeakValue,
};

use crate::output::{emit, fmt_e17, Page};
use crate::{
    forbid_weak_value, require_angle, require_weak_value, to_radians, CliError, DensityArgs,
    EnsembleArgs, OptimalArgs, OptimalKind, ScanArgs, SetupKind, SpaceArg, StatsArgs,
};

use std::f64::consts::PI;

pub fn stats(args: StatsArgs) -> Result<i32, CliError> {
    let line = match args.setup {
        SetupKind::Aav => {
            forbid_weak_value(args.weak_value, args.setup)?;
            let alpha = require_angle(args.angle, args.degrees, args.setup)?;
            let stats = aav_closed_forms(AavPoint::new(args.s, alpha)?)?;
            format!(
                "setup=aav s={} alpha={} z={} mean_pz={} delta_pz_sq={} delta_z_sq={} snr={}",
                fmt_e17(args.s),
                fmt_e17(alpha),
                fmt_e17(stats.z),
                fmt_e17(stats.mean_pz),
                fmt_e17(stats.delta_pz_sq),
                fmt_e17(stats.delta_z_sq),
                fmt_e17(stats.snr),
            )
        }
        SetupKind::Dsjh => {
            forbid_weak_value(args.weak_value, args.setup)?;
            let phi = require_angle(args.angle, args.degrees, args.setup)?;
            let stats = dsjh_closed_forms(DsjhPoint::new(args.s, phi)?)?;
            format!(
                "setup=dsjh s={} phi={} z={} mean_kx={} delta_x_sq={} delta_p_sq={} snr={}",
                fmt_e17(args.s),
                fmt_e17(phi),
                fmt_e17(stats.z),
                fmt_e17(stats.mean_kx),
                fmt_e17(stats.delta_x_sq),
                fmt_e17(stats.delta_p_sq),
                fmt_e17(stats.snr),
            )
        }
        SetupKind::Custom => {
            let (re, im) = require_weak_value(args.weak_value)?;
            if args.angle.is_some() {
                return Err(CliError::Usage(
                    "the custom setup takes --weak-value, not --angle".into(),
                ));
            }
            let pt = MeasurementPoint::new(args.s, WeakValue::new(re, im))?;
            let stats = moments_nonorthogonal(pt);
            format!(
                "setup=custom s={} a_w_re={} a_w_im={} z={} mean_q={} mean_p={} var_q={} var_p={}",
                fmt_e17(args.s),
                fmt_e17(re),
                fmt_e17(im),
                fmt_e17(stats.z),
                fmt_e17(stats.mean_q),
                fmt_e17(stats.mean_p),
                fmt_e17(stats.var_q),
                fmt_e17(stats.var_p),
            )
        }
    };
    emit(format!("{line}\n"), None)?;
    Ok(0)
}

pub fn scan(args: ScanArgs) -> Result<i32, CliError> {
    if args.setup == SetupKind::Custom {
        return Err(CliError::Usage(
            "scan varies the setup angle; the custom setup has none (use aav or dsjh)".into(),
        ));
    }
    let angles: Vec<f64> = args
        .angle_range
        .values()
        .into_iter()
        .map(|a| to_radians(a, args.degrees))
        .collect();
    let s_values = args.s_range.values();

    let mut page = Page::new("scan");
    page.meta(format!(
        "setup={} s_range={}:{}:{} angle_range={}:{}:{} (radians)",
        args.setup.label(),
        fmt_e17(args.s_range.lo),
        fmt_e17(args.s_range.hi),
        args.s_range.steps,
        fmt_e17(angles[0]),
        fmt_e17(*angles.last().expect("a range has at least two points")),
        angles.len(),
    ));
    page.meta(match args.setup {
        SetupKind::Aav => "mean=<p_z>'/g, var_pointer=(Delta p_z/g)^2, var_conjugate=(g Delta z)^2",
        SetupKind::Dsjh => "mean=k<x>', var_pointer=(k Delta x)^2, var_conjugate=(Delta p/(hbar k))^2",
        SetupKind::Custom => unreachable!("rejected above"),
    });
    page.header(&[
        "s",
        "angle",
        "z",
        "mean",
        "var_pointer",
        "var_conjugate",
        "snr",
    ]);
    for &s in &s_values {
        for &angle in &angles {
            let cells = match args.setup {
                SetupKind::Aav => {
                    let st = aav_closed_forms(AavPoint::new(s, angle)?)?;
                    [st.z, st.mean_pz, st.delta_pz_sq, st.delta_z_sq, st.snr]
                }
                SetupKind::Dsjh => {
                    let st = dsjh_closed_forms(DsjhPoint::new(s, angle)?)?;
                    [st.z, st.mean_kx, st.delta_x_sq, st.delta_p_sq, st.snr]
                }
                SetupKind::Custom => unreachable!("rejected above"),
            };
            let mut row = vec![fmt_e17(s), fmt_e17(angle)];
            row.extend(cells.iter().map(|&v| fmt_e17(v)));
            page.row(&row);
        }
    }
    emit(page.finish(), args.output.as_deref())?;
    Ok(0)
}

/// What the density subcommand resolved the working point into.
enum DensityCase {
    Regular(MeasurementPoint),
    Orthogonal { s: f64 },
}

pub fn density(args: DensityArgs) -> Result<i32, CliError> {
    if args.points < 2 {
        return Err(CliError::Usage(format!(
            "--points must be at least 2, got {}",
            args.points
        )));
    }
    if let Some(h) = args.half_width {
        if !(h.is_finite() && h > 0.0) {
            return Err(CliError::Usage(format!(
                "--half-width must be positive and finite, got {h}"
            )));
        }
    }

    let mut page = Page::new("density");
    let case = match args.setup {
        SetupKind::Aav | SetupKind::Dsjh => {
            forbid_weak_value(args.weak_value, args.setup)?;
            let angle = require_angle(args.angle, args.degrees, args.setup)?;
            let setup = match args.setup {
                SetupKind::Aav => aav_setup(angle),
                SetupKind::Dsjh => dsjh_setup(angle),
                SetupKind::Custom => unreachable!("matched above"),
            };
            page.meta(format!(
                "setup={} s={} angle={}",
                args.setup.label(),
                fmt_e17(args.s),
                fmt_e17(angle),
            ));
            match weak_value_of(&setup)? {
                PostSelection::Regular { weak_value, .. } => {
                    DensityCase::Regular(MeasurementPoint::new(args.s, weak_value)?)
                }
                PostSelection::Orthogonal { .. } => DensityCase::Orthogonal { s: args.s },
            }
        }
        SetupKind::Custom => {
            let (re, im) = require_weak_value(args.weak_value)?;
            page.meta(format!(
                "setup=custom s={} a_w={}{}{}i",
                fmt_e17(args.s),
                fmt_e17(re),
                if im < 0.0 { "" } else { "+" },
                fmt_e17(im),
            ));
            DensityCase::Regular(MeasurementPoint::new(args.s, WeakValue::new(re, im))?)
        }
    };

    let s = args.s;
    let (center, sigma): (f64, f64) = match &case {
        DensityCase::Regular(pt) => {
            let st = moments_nonorthogonal(*pt);
            match args.space {
                SpaceArg::P => (st.mean_p, st.var_p.sqrt()),
                SpaceArg::Q => (st.mean_q, st.var_q.sqrt()),
            }
        }
        DensityCase::Orthogonal { s } => {
            let st = moments_orthogonal(*s)?;
            match args.space {
                SpaceArg::P => (0.0, st.var_p_grid.sqrt()),
                SpaceArg::Q => (0.0, st.var_q_grid.sqrt()),
            }
        }
    };
    let half = args.half_width.unwrap_or(13.0 * sigma);
    let (lo, hi) = (center - half, center + half);

    let initial: Box<dyn Fn(f64) -> f64> = match args.space {
        SpaceArg::P => Box::new(move |u| (-u * u / s).exp() / (PI * s).sqrt()),
        SpaceArg::Q => Box::new(move |v| (s / PI).sqrt() * (-s * v * v).exp()),
    };
    let post: Box<dyn Fn(f64) -> f64> = match &case {
        DensityCase::Regular(pt) => {
            let pt = *pt;
            match args.space {
                SpaceArg::P => Box::new(move |u| density_p_nonorthogonal(pt, u)),
                SpaceArg::Q => Box::new(move |v| density_q_nonorthogonal(pt, v)),
            }
        }
        DensityCase::Orthogonal { s } => {
            let s = *s;
            // s was validated by moments_orthogonal above.
            match args.space {
                SpaceArg::P => Box::new(move |u| {
                    density_p_orthogonal(s, u, DensityForm::Normalized)
                        .expect("validated coupling")
                }),
                SpaceArg::Q => Box::new(move |v| {
                    density_q_orthogonal(s, v, DensityForm::Normalized)
                        .expect("validated coupling")
                }),
            }
        }
    };

    page.meta(format!(
        "selection={} space={} window={}..{} points={}",
        match &case {
            DensityCase::Regular(_) => "regular",
            DensityCase::Orthogonal { .. } => "orthogonal (normalized form)",
        },
        match args.space {
            SpaceArg::P => "p (u = g p)",
            SpaceArg::Q => "q (v = q / g)",
        },
        fmt_e17(lo),
        fmt_e17(hi),
        args.points,
    ));
    page.header(&["abscissa", "initial", "post_selected"]);
    let last = args.points - 1;
    for i in 0..args.points {
        let x = if i == last {
            hi
        } else {
            lo + (hi - lo) * i as f64 / last as f64
        };
        page.row(&[fmt_e17(x), fmt_e17(initial(x)), fmt_e17(post(x))]);
    }
    emit(page.finish(), args.output.as_deref())?;
    Ok(0)
}

fn optimal_row(page: &mut Page, point: &OptimalPoint) {
    let mut row = vec![
        fmt_e17(point.s),
        fmt_e17(point.angle),
        fmt_e17(point.objective_value),
    ];
    row.extend(point.companion_stats.values().map(|&v| fmt_e17(v)));
    page.row(&row);
}

fn optimal_header(page: &mut Page, point: &OptimalPoint) {
    let mut columns = vec!["s", "angle", "objective"];
    columns.extend(point.companion_stats.keys().map(String::as_str));
    page.header(&columns);
}

pub fn optimal(args: OptimalArgs) -> Result<i32, CliError> {
    if args.setup == SetupKind::Custom {
        return Err(CliError::Usage(
            "optimal lines are defined for the angle-parameterized setups (aav, dsjh)".into(),
        ));
    }
    let mut page = Page::new("optimal");
    page.meta(format!(
        "setup={} kind={}",
        args.setup.label(),
        match args.kind {
            OptimalKind::Expectation => "expectation",
            OptimalKind::Snr => "snr",
            OptimalKind::Max => "max",
        }
    ));

    if args.kind == OptimalKind::Max {
        if args.setup != SetupKind::Dsjh {
            return Err(CliError::Usage(
                "the spin-1/2 deflection keeps growing toward the orthogonality limit; \
                 --kind max applies to dsjh"
                    .into(),
            ));
        }
        if args.s_range.is_some() {
            return Err(CliError::Usage(
                "--kind max locates its own coupling; drop --s-range".into(),
            ));
        }
        let (s_m, _, _) = dsjh_global_max();
        let point = dsjh_optimal_expectation(s_m)?;
        page.meta("objective=k<x>' at the joint maximum over s and phi");
        optimal_header(&mut page, &point);
        optimal_row(&mut page, &point);
        emit(page.finish(), args.output.as_deref())?;
        return Ok(0);
    }

    let range = args.s_range.ok_or_else(|| {
        CliError::Usage("--kind expectation and --kind snr need --s-range LO:HI:STEPS".into())
    })?;
    page.meta(match (args.setup, args.kind) {
        (SetupKind::Aav, OptimalKind::Expectation) => {
            "objective=<p_z>'/g on the line cos alpha = -exp(-s)"
        }
        (SetupKind::Aav, OptimalKind::Snr) => "objective=single-shot snr at its optimal alpha",
        (SetupKind::Dsjh, OptimalKind::Expectation) => {
            "objective=k<x>' on the line cos phi = exp(-s)"
        }
        (SetupKind::Dsjh, OptimalKind::Snr) => "objective=single-shot snr at its optimal phi",
        _ => unreachable!("custom and max were handled above"),
    });

    let mut first = true;
    for s in range.values() {
        let point = match (args.setup, args.kind) {
            (SetupKind::Aav, OptimalKind::Expectation) => aav_optimal_expectation(s)?,
            (SetupKind::Aav, OptimalKind::Snr) => aav_optimal_snr(s)?,
            (SetupKind::Dsjh, OptimalKind::Expectation) => dsjh_optimal_expectation(s)?,
            (SetupKind::Dsjh, OptimalKind::Snr) => dsjh_optimal_snr(s)?,
            _ => unreachable!("custom and max were handled above"),
        };
        if first {
            optimal_header(&mut page, &point);
            first = false;
        }
        optimal_row(&mut page, &point);
    }
    emit(page.finish(), args.output.as_deref())?;
    Ok(0)
}

pub fn ensemble(args: EnsembleArgs) -> Result<i32, CliError> {
    let (point, angle) = match args.setup {
        SetupKind::Aav => {
            let angle = match args.angle {
                Some(a) => to_radians(a, args.degrees),
                None => aav_optimal_snr(args.s)?.angle,
            };
            (SetupPoint::Aav(AavPoint::new(args.s, angle)?), angle)
        }
        SetupKind::Dsjh => {
            let angle = match args.angle {
                Some(a) => to_radians(a, args.degrees),
                None => dsjh_optimal_snr(args.s)?.angle,
            };
            (SetupPoint::Dsjh(DsjhPoint::new(args.s, angle)?), angle)
        }
        SetupKind::Custom => {
            return Err(CliError::Usage(
                "the ensemble protocol reads out a named axis; use aav or dsjh".into(),
            ))
        }
    };
    let n_values = args
        .n_values
        .unwrap_or_else(|| vec![1, 10, 100, 1000, 10000]);
    let table = weakmeas::snr_scaling(point, &n_values, args.trials, args.seed)?;

    let mut page = Page::new("ensemble");
    page.meta(format!(
        "setup={} s={} angle={} trials={} seed={}",
        args.setup.label(),
        fmt_e17(args.s),
        fmt_e17(angle),
        args.trials,
        args.seed,
    ));
    page.meta(format!("slope={}", fmt_e17(table.slope)));
    page.header(&["n", "snr"]);
    for row in &table.rows {
        page.row(&[row.n.to_string(), fmt_e17(row.snr)]);
    }
    emit(page.finish(), args.output.as_deref())?;
    Ok(0)
}
