use crate::args::{BoundaryArgs, Which};
use crate::checks::{boundary_gap, oracle_boundary, BoundaryKind};
use crate::csv::{num, Table};
use crate::error::{domain, CliError, CliResult};
use crate::par_map;
use crate::sweep::{Axis, Point, SweepSpec};

use super::{error_label, Settings};

/// Slack allowed when asserting that the biseparable boundary does not
/// exceed the fully separable one.
pub const CONTAINMENT_SLACK: f64 = 1e-9;

pub fn run(args: &BoundaryArgs) -> CliResult<()> {
    let settings = Settings::load(&args.common)?;
    let point = settings.point(&args.point)?;
    let axes = settings.grid(&args.grid)?;
    if let Some(a) = axes.iter().find(|a| !matches!(a.axis, Axis::Eta0p | Axis::Eta1p)) {
        return domain(format!("boundaries are asymptotic curves in (eta0p, eta1p); cannot sweep {}", a.axis));
    }
    let which = match args.which {
        Some(w) => w,
        None => match settings.config.get("which") {
            None | Some("both") => Which::Both,
            Some("fullsep") => Which::Fullsep,
            Some("bisep") => Which::Bisep,
            Some(other) => return domain(format!("config key `which`: unknown value `{other}`")),
        },
    };
    let check = args.check || settings.config.parsed::<bool>("check")?.unwrap_or(false);
    let spec = SweepSpec::new(axes, point)?;
    table(&spec.points(), which, check, settings.jobs)?.write(settings.out.as_deref())
}

/// Occupation needed to reach a boundary in `n'^2`; zero when no noise is
/// needed.
pub fn nbar_of(n_prime2: Option<f64>) -> f64 {
    match n_prime2 {
        Some(v) if v > 1.0 => 0.5 * (v.sqrt() - 1.0),
        _ => 0.0,
    }
}

fn kinds(which: Which) -> Vec<(BoundaryKind, &'static str)> {
    let mut out = Vec::new();
    if which != Which::Bisep {
        out.push((BoundaryKind::FullySeparable, "fullsep"));
    }
    if which != Which::Fullsep {
        out.push((BoundaryKind::Biseparable, "bisep"));
    }
    out
}

pub fn table(points: &[Point], which: Which, check: bool, jobs: usize) -> CliResult<Table> {
    let kinds = kinds(which);
    let mut header = vec!["eta0p".to_string(), "eta1p".into(), "zeta0".into(), "zeta1".into()];
    for (_, name) in &kinds {
        header.push(format!("{name}_nprime2"));
        header.push(format!("{name}_nbar"));
    }
    if check {
        for (_, name) in &kinds {
            header.push(format!("{name}_oracle"));
            header.push(format!("{name}_gap"));
        }
        header.push("status".into());
    }
    let rows = par_map(jobs, points, |p| row(p, &kinds, check))?;
    let mut table = Table::new(header);
    for r in rows {
        table.push(r?);
    }
    Ok(table)
}

fn row(p: &Point, kinds: &[(BoundaryKind, &'static str)], check: bool) -> CliResult<Vec<String>> {
    let (z0, z1) = p.zeta();
    let mut cells: Vec<String> = [p.eta0p, p.eta1p, z0, z1].iter().map(|&v| num(v)).collect();
    let mut closed = Vec::new();
    for (kind, _) in kinds {
        let b = kind.closed_form(z0, z1)?;
        cells.push(num(b.unwrap_or(f64::NAN)));
        cells.push(num(nbar_of(b)));
        closed.push(b);
    }
    if let [Some(full), Some(bisep)] = closed[..] {
        if bisep > full + CONTAINMENT_SLACK * full.abs().max(1.0) {
            return Err(CliError::Verification(format!(
                "biseparable boundary {bisep} exceeds fully separable boundary {full} at ({}, {})",
                p.eta0p, p.eta1p
            )));
        }
    }
    if check {
        let mut status = "ok".to_string();
        for ((kind, _), b) in kinds.iter().zip(&closed) {
            match oracle_boundary(*kind, z0, z1) {
                Ok(o) => {
                    cells.push(num(o.unwrap_or(f64::NAN)));
                    cells.push(num(boundary_gap(*b, o)));
                }
                Err(e) => {
                    cells.push(num(f64::NAN));
                    cells.push(num(f64::NAN));
                    status = error_label(&CliError::Core(e));
                }
            }
        }
        cells.push(status);
    }
    Ok(cells)
}
