//! Data tables behind the ten standard plots.
//!
//! Surfaces use 60 coupling steps on a half-open (0, s_max] grid and 120
//! interior angles, so no lattice point ever lands on an orthogonal
//! post-selection. Lines use 500 coupling steps; density sections use 2001
//! abscissa points on windows wide enough that every curve integrates to
//! one at working precision.

use weakmeas::{
    aav_closed_forms, aav_density, aav_optimal_expectation, aav_optimal_snr, dsjh_closed_forms,
    dsjh_density, dsjh_optimal_expectation, dsjh_optimal_snr, AavPoint, DsjhPoint,
};

use crate::output::{emit, fmt_e17, Page};
use crate::{CliError, FigureArgs};

use std::f64::consts::PI;

const SURFACE_S_STEPS: usize = 60;
/// Angles sit at j / 121 of the span for j = 1..=120, keeping both ends open.
const ANGLE_DIVISIONS: usize = 121;
const LINE_POINTS: usize = 500;
const DENSITY_POINTS: usize = 2001;
const DENSITY_S_VALUES: [f64; 4] = [0.1, 1.0, 10.0, 1000.0];

fn open_s_grid(s_max: f64, steps: usize) -> Vec<f64> {
    (1..=steps).map(|i| s_max * i as f64 / steps as f64).collect()
}

fn open_angle_grid(lo: f64, hi: f64) -> Vec<f64> {
    (1..ANGLE_DIVISIONS)
        .map(|j| lo + (hi - lo) * j as f64 / ANGLE_DIVISIONS as f64)
        .collect()
}

fn closed_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let last = points - 1;
    (0..points)
        .map(|i| {
            if i == last {
                hi
            } else {
                lo + (hi - lo) * i as f64 / last as f64
            }
        })
        .collect()
}

pub fn figure(args: FigureArgs) -> Result<i32, CliError> {
    let page = match args.number {
        1 => fig1()?,
        2 => fig2()?,
        3 => fig3()?,
        4 => fig4()?,
        5 => fig5()?,
        6 => fig6()?,
        7 => fig7()?,
        8 => fig8()?,
        9 => fig9()?,
        10 => fig10()?,
        n => {
            return Err(CliError::Usage(format!(
                "figure number must be between 1 and 10, got {n}"
            )))
        }
    };
    emit(page.finish(), args.output.as_deref())?;
    Ok(0)
}

/// Spin-1/2 mean deflection surface over coupling and pre-selection angle.
fn fig1() -> Result<Page, CliError> {
    let mut page = Page::new("figure 1");
    page.meta("spin-1/2 read-out deflection <p_z>'/g over coupling and pre-selection angle");
    page.meta("panels: a s in (0,0.1], b s in (0,1], c s in (0,10]; alpha in (0, 2 pi)");
    page.header(&["panel", "s", "alpha", "mean_pz"]);
    for (panel, s_max) in [("a", 0.1), ("b", 1.0), ("c", 10.0)] {
        for s in open_s_grid(s_max, SURFACE_S_STEPS) {
            for alpha in open_angle_grid(0.0, 2.0 * PI) {
                let st = aav_closed_forms(AavPoint::new(s, alpha)?)?;
                page.row(&[
                    panel.to_string(),
                    fmt_e17(s),
                    fmt_e17(alpha),
                    fmt_e17(st.mean_pz),
                ]);
            }
        }
    }
    Ok(page)
}

/// Optimal-deflection line: the angle and the resulting mean with its
/// spread, against coupling.
fn fig2() -> Result<Page, CliError> {
    let mut page = Page::new("figure 2");
    page.meta("spin-1/2 optimal-deflection line cos alpha = -exp(-s) and the on-line read-out");
    page.header(&[
        "s",
        "alpha",
        "mean",
        "delta",
        "mean_plus_delta",
        "mean_minus_delta",
    ]);
    for s in open_s_grid(5.0, LINE_POINTS) {
        let point = aav_optimal_expectation(s)?;
        let mean = point.objective_value;
        let delta = point.companion_stats["delta_pz"];
        page.row(&[
            fmt_e17(s),
            fmt_e17(point.angle),
            fmt_e17(mean),
            fmt_e17(delta),
            fmt_e17(mean + delta),
            fmt_e17(mean - delta),
        ]);
    }
    Ok(page)
}

/// Read-out densities on the spin-1/2 optimal-deflection line.
fn fig3() -> Result<Page, CliError> {
    let mut page = Page::new("figure 3");
    page.meta("spin-1/2 read-out densities on the optimal-deflection line, x = p_z/g");
    page.meta("initial density sqrt(s/pi) exp(-s x^2); window half-width 1 + 13/sqrt(2 s)");
    page.header(&["s", "abscissa", "initial", "post_selected"]);
    for s in DENSITY_S_VALUES {
        let point = aav_optimal_expectation(s)?;
        let pt = AavPoint::new(s, point.angle)?;
        let half = 1.0 + 13.0 / (2.0 * s).sqrt();
        for x in closed_grid(-half, half, DENSITY_POINTS) {
            page.row(&[
                fmt_e17(s),
                fmt_e17(x),
                fmt_e17((s / PI).sqrt() * (-s * x * x).exp()),
                fmt_e17(aav_density(pt, x)?),
            ]);
        }
    }
    Ok(page)
}

/// Spin-1/2 single-shot SNR surface.
fn fig4() -> Result<Page, CliError> {
    let mut page = Page::new("figure 4");
    page.meta("spin-1/2 single-shot snr over coupling and pre-selection angle");
    page.meta("panels: a s in (0,1] with alpha in (pi/2, pi), b s in (0,10] with alpha in (0, pi)");
    page.header(&["panel", "s", "alpha", "snr"]);
    for (panel, s_max, alpha_lo, alpha_hi) in
        [("a", 1.0, 0.5 * PI, PI), ("b", 10.0, 0.0, PI)]
    {
        for s in open_s_grid(s_max, SURFACE_S_STEPS) {
            for alpha in open_angle_grid(alpha_lo, alpha_hi) {
                let st = aav_closed_forms(AavPoint::new(s, alpha)?)?;
                page.row(&[
                    panel.to_string(),
                    fmt_e17(s),
                    fmt_e17(alpha),
                    fmt_e17(st.snr),
                ]);
            }
        }
    }
    Ok(page)
}

/// Spin-1/2 optimal-SNR line: angle and optimized value against coupling.
fn fig5() -> Result<Page, CliError> {
    let mut page = Page::new("figure 5");
    page.meta("spin-1/2 optimal-snr angle and the optimized snr against coupling");
    page.header(&["s", "alpha", "snr"]);
    for s in open_s_grid(10.0, LINE_POINTS) {
        let point = aav_optimal_snr(s)?;
        page.row(&[
            fmt_e17(s),
            fmt_e17(point.angle),
            fmt_e17(point.objective_value),
        ]);
    }
    Ok(page)
}

/// Sagnac mean-deflection surface over coupling and phase.
fn fig6() -> Result<Page, CliError> {
    let mut page = Page::new("figure 6");
    page.meta("sagnac dark-port deflection -k<x>' over coupling and phase");
    page.meta("panels: a s in (0,10], b s in (0,2]; phi in (0, pi)");
    page.header(&["panel", "s", "phi", "signal"]);
    for (panel, s_max) in [("a", 10.0), ("b", 2.0)] {
        for s in open_s_grid(s_max, SURFACE_S_STEPS) {
            for phi in open_angle_grid(0.0, PI) {
                let st = dsjh_closed_forms(DsjhPoint::new(s, phi)?)?;
                page.row(&[
                    panel.to_string(),
                    fmt_e17(s),
                    fmt_e17(phi),
                    fmt_e17(-st.mean_kx),
                ]);
            }
        }
    }
    Ok(page)
}

/// Sagnac optimal-deflection line.
fn fig7() -> Result<Page, CliError> {
    let mut page = Page::new("figure 7");
    page.meta("sagnac optimal-deflection line cos phi = exp(-s) and the on-line signal -k<x>'");
    page.header(&["s", "phi", "signal"]);
    for s in open_s_grid(5.0, LINE_POINTS) {
        let point = dsjh_optimal_expectation(s)?;
        page.row(&[
            fmt_e17(s),
            fmt_e17(point.angle),
            fmt_e17(point.objective_value),
        ]);
    }
    Ok(page)
}

/// Read-out densities on the Sagnac optimal-deflection line.
fn fig8() -> Result<Page, CliError> {
    let mut page = Page::new("figure 8");
    page.meta("sagnac read-out densities on the optimal-deflection line, abscissa k x");
    page.meta("initial density exp(-(kx)^2/s)/sqrt(pi s); window half-width 1 + 13 sqrt(s/2)");
    page.header(&["s", "abscissa", "initial", "post_selected"]);
    for s in DENSITY_S_VALUES {
        let point = dsjh_optimal_expectation(s)?;
        let pt = DsjhPoint::new(s, point.angle)?;
        let half = 1.0 + 13.0 * (0.5 * s).sqrt();
        for kx in closed_grid(-half, half, DENSITY_POINTS) {
            page.row(&[
                fmt_e17(s),
                fmt_e17(kx),
                fmt_e17((-kx * kx / s).exp() / (PI * s).sqrt()),
                fmt_e17(dsjh_density(pt, kx)?),
            ]);
        }
    }
    Ok(page)
}

/// Sagnac single-shot SNR surface.
fn fig9() -> Result<Page, CliError> {
    let mut page = Page::new("figure 9");
    page.meta("sagnac single-shot snr over coupling and phase; s in (0,2], phi in (0, pi)");
    page.header(&["s", "phi", "snr"]);
    for s in open_s_grid(2.0, SURFACE_S_STEPS) {
        for phi in open_angle_grid(0.0, PI) {
            let st = dsjh_closed_forms(DsjhPoint::new(s, phi)?)?;
            page.row(&[fmt_e17(s), fmt_e17(phi), fmt_e17(st.snr)]);
        }
    }
    Ok(page)
}

/// Sagnac optimal-SNR line.
fn fig10() -> Result<Page, CliError> {
    let mut page = Page::new("figure 10");
    page.meta("sagnac optimal-snr phase and the optimized snr against coupling");
    page.header(&["s", "phi", "snr"]);
    for s in open_s_grid(2.0, LINE_POINTS) {
        let point = dsjh_optimal_snr(s)?;
        page.row(&[
            fmt_e17(s),
            fmt_e17(point.angle),
            fmt_e17(point.objective_value),
        ]);
    }
    Ok(page)
}
