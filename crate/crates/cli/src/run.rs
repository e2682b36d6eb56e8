//! Dispatch of a validated [`RunConfig`] to the library and emission of the
//! result files.

use std::io::Write;
use std::path::Path;

use chkp_core::error::{Error, Result};
use chkp_core::functionals::{self, functionals_closed, functionals_quadrature, FunctionalReport};
use chkp_core::output::{fmt_f64, CsvTable};
use chkp_core::profile::{invariant_residuals, Profile};
use chkp_core::puiseux::{self, puiseux_coefficients, PuiseuxReport};
use chkp_core::specdisc::{
    full_spectrum, track_resonances, Discretization, SpectrumReport, Tracking,
};
use chkp_core::symbol::{continuous_spectrum_bound, figure1_curve};
use rayon::prelude::*;

use crate::config::{Command, Format, Point, RunConfig};

/// Writes `bytes` to a temporary file next to `path` and renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn f(v: f64) -> String {
    fmt_f64(v)
}

/// Runs the configuration and returns the one-line summary.
pub fn run(cfg: &RunConfig) -> Result<String> {
    if cfg.command == Command::Sweep {
        return sweep(cfg);
    }
    let point = cfg.points()[0];
    let (body, summary) = single(cfg, &point)?;
    write_atomic(&cfg.out, body.as_bytes())?;
    Ok(format!(
        "{}: {summary} -> {}",
        cfg.command.name(),
        cfg.out.display()
    ))
}

fn solve(cfg: &RunConfig, point: &Point) -> Result<Profile> {
    Profile::solve(point.params, &cfg.numerics.profile_options())
}

fn discretize(cfg: &RunConfig, point: &Point) -> Result<Discretization> {
    let profile = solve(cfg, point)?;
    let l = cfg.domain_length_for(&point.params);
    Discretization::new(&profile, point.nu, point.eta, cfg.numerics.n_modes, l)
}

fn single(cfg: &RunConfig, point: &Point) -> Result<(String, String)> {
    let p = &point.params;
    let csv = cfg.format == Format::Csv;
    match cfg.command {
        Command::Profile => {
            let profile = solve(cfg, point)?;
            let r = invariant_residuals(&profile);
            let body = if csv {
                profile.to_csv().to_string()
            } else {
                json(&profile.header())?
            };
            Ok((
                body,
                format!(
                    "peak = {}, invariant residual = {}",
                    f(profile.peak()),
                    f(r.r3)
                ),
            ))
        }
        Command::Functionals => {
            let profile = solve(cfg, point)?;
            let reports = [functionals_closed(p), functionals_quadrature(&profile)];
            let body = if csv {
                functionals::sweep_table(&reports).to_string()
            } else {
                json(&reports)?
            };
            let q = &reports[1];
            Ok((
                body,
                format!(
                    "M = {}, E = {}, norm2 = {}",
                    f(q.mass),
                    f(q.energy),
                    f(q.norm2)
                ),
            ))
        }
        Command::Symbol => {
            let xi_max = cfg.numerics.xi_max_for(p);
            let bound =
                continuous_spectrum_bound(p, point.nu, point.eta, xi_max, cfg.numerics.n_xi)?;
            let body = if csv {
                let mut t = CsvTable::new(&SYMBOL_HEADER);
                t.push_row(symbol_row(cfg, point)?);
                t.to_string()
            } else {
                json(&bound)?
            };
            Ok((body, format!("b = {}", f(bound.b))))
        }
        Command::Figure1 => {
            let curve = figure1_curve(
                p,
                point.nu,
                point.eta,
                cfg.numerics.xi_max_for(p),
                cfg.numerics.n_xi,
            )?;
            let body = match cfg.format {
                Format::Svg => curve.to_svg(),
                Format::Csv => curve.to_csv().to_string(),
                Format::Json => json(&curve)?,
            };
            Ok((body, format!("max Re = {}", f(curve.max_re()))))
        }
        Command::Puiseux => {
            let report = puiseux_coefficients(p).report();
            let body = if csv {
                puiseux::sweep_table(&[report]).to_string()
            } else {
                json(&report)?
            };
            Ok((
                body,
                format!(
                    "lambda1_sq = {}, lambda2 = {}",
                    f(report.lambda1_sq),
                    f(report.lambda2)
                ),
            ))
        }
        Command::Eigs => {
            let report = full_spectrum(&discretize(cfg, point)?)?;
            let body = if csv {
                report.to_csv().to_string()
            } else {
                json(&report)?
            };
            Ok((body, eigs_summary(&report)))
        }
        Command::Track => {
            let tracking = track(cfg, point)?;
            let body = if csv {
                tracking.to_csv().to_string()
            } else {
                json(&tracking)?
            };
            let r = &tracking.rows[0];
            Ok((
                body,
                format!(
                    "lambda+ = {} + {}i, distance = {}",
                    f(r.measured[0].re),
                    f(r.measured[0].im),
                    f(r.distance)
                ),
            ))
        }
        Command::Sweep => unreachable!("sweeps are dispatched separately"),
    }
}

fn eigs_summary(report: &SpectrumReport) -> String {
    let mut s = format!(
        "band estimate = {}, cluster size = {}",
        f(report.continuous_band_estimate),
        report.diagnostics.cluster.len()
    );
    if let Some(m) = &report.resonance_pair {
        s.push_str(&format!(
            ", lambda+ = {} + {}i",
            f(m.measured[0].re),
            f(m.measured[0].im)
        ));
    }
    s
}

fn track(cfg: &RunConfig, point: &Point) -> Result<Tracking> {
    let profile = solve(cfg, point)?;
    let l = cfg.domain_length_for(&point.params);
    track_resonances(&profile, point.nu, &[point.eta], cfg.numerics.n_modes, l)
}

const PROFILE_HEADER: [&str; 6] = ["c", "peak", "r1", "r2", "r3", "tail_slope"];
const SYMBOL_HEADER: [&str; 5] = ["c", "nu", "eta", "b", "argmax_xi"];
const FIGURE1_HEADER: [&str; 5] = ["c", "nu", "eta", "max_re", "conjugate_defect"];
const EIGS_HEADER: [&str; 9] = [
    "c",
    "nu",
    "eta",
    "scale",
    "band_estimate",
    "cluster_size",
    "re_pair",
    "im_pair",
    "dist",
];
const TRACK_HEADER: [&str; 8] = [
    "c", "nu", "eta", "re_meas", "im_meas", "re_pred", "im_pred", "dist",
];

fn sweep_header(target: Command) -> Vec<&'static str> {
    match target {
        Command::Profile => PROFILE_HEADER.to_vec(),
        Command::Functionals => FunctionalReport::CSV_HEADER.to_vec(),
        Command::Symbol => SYMBOL_HEADER.to_vec(),
        Command::Figure1 => FIGURE1_HEADER.to_vec(),
        Command::Puiseux => PuiseuxReport::CSV_HEADER.to_vec(),
        Command::Eigs => EIGS_HEADER.to_vec(),
        Command::Track => TRACK_HEADER.to_vec(),
        Command::Sweep => unreachable!("validated"),
    }
}

fn symbol_row(cfg: &RunConfig, point: &Point) -> Result<Vec<String>> {
    let p = &point.params;
    let b = continuous_spectrum_bound(
        p,
        point.nu,
        point.eta,
        cfg.numerics.xi_max_for(p),
        cfg.numerics.n_xi,
    )?;
    Ok(vec![
        f(p.c()),
        f(point.nu),
        f(point.eta),
        f(b.b),
        f(b.argmax_xi),
    ])
}

fn sweep_row(cfg: &RunConfig, point: &Point) -> Result<Vec<String>> {
    let p = &point.params;
    let (c, nu, eta) = (f(p.c()), f(point.nu), f(point.eta));
    Ok(match cfg.target {
        Command::Profile => {
            let profile = solve(cfg, point)?;
            let r = invariant_residuals(&profile);
            vec![
                c,
                f(profile.peak()),
                f(r.r1),
                f(r.r2),
                f(r.r3),
                f(profile.tail_slope()),
            ]
        }
        Command::Functionals => functionals_closed(p).csv_row(),
        Command::Symbol => symbol_row(cfg, point)?,
        Command::Figure1 => {
            let curve = figure1_curve(
                p,
                point.nu,
                point.eta,
                cfg.numerics.xi_max_for(p),
                cfg.numerics.n_xi,
            )?;
            vec![c, nu, eta, f(curve.max_re()), f(curve.conjugate_defect())]
        }
        Command::Puiseux => puiseux_coefficients(p).report().csv_row(),
        Command::Eigs => {
            let r = full_spectrum(&discretize(cfg, point)?)?;
            let (re, im, dist) = match &r.resonance_pair {
                Some(m) => (m.measured[0].re, m.measured[0].im, m.distance),
                None => (f64::NAN, f64::NAN, f64::NAN),
            };
            vec![
                c,
                nu,
                eta,
                f(r.scale),
                f(r.continuous_band_estimate),
                r.diagnostics.cluster.len().to_string(),
                f(re),
                f(im),
                f(dist),
            ]
        }
        Command::Track => {
            let row = track(cfg, point)?.rows[0];
            let mut out = vec![c, nu];
            out.extend(row.csv_row());
            out
        }
        Command::Sweep => unreachable!("validated"),
    })
}

fn sweep(cfg: &RunConfig) -> Result<String> {
    let points = cfg.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start {} workers: {e}", cfg.jobs)))?;
    let rows = pool.install(|| {
        points
            .par_iter()
            .map(|p| sweep_row(cfg, p))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut table = CsvTable::new(&sweep_header(cfg.target));
    for row in rows {
        table.push_row(row);
    }
    write_atomic(&cfg.out, table.to_string().as_bytes())?;
    Ok(format!(
        "sweep {}: {} rows -> {}",
        cfg.target.name(),
        table.rows.len(),
        cfg.out.display()
    ))
}
