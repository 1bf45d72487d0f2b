use std::path::PathBuf;

use crate::args::FigureArgs;
use crate::checks::{linspace, BoundaryKind};
use crate::csv::{num, Table};
use crate::error::{domain, CliResult};
use crate::par_map;

use super::boundary::nbar_of;
use super::Settings;

pub const AXIS_MIN: f64 = -2.0;
pub const AXIS_MAX: f64 = 2.0;
/// Samples of `|eta1'|` scanned before refining a noiseless crossing.
const CROSSING_SCAN: usize = 4000;
const CROSSING_BISECTIONS: usize = 60;
/// A noiseless state counts as outside a region once the boundary exceeds
/// `n'^2 = 1` by more than rounding. Both curves use the same threshold, so
/// the pointwise ordering of the boundaries carries over to the crossings.
pub const NOISELESS_SLACK: f64 = 1e-12;

pub fn run(args: &FigureArgs) -> CliResult<()> {
    let settings = Settings::load(&args.common)?;
    let out = settings.out.clone().unwrap_or_else(|| PathBuf::from(format!("fig{}.csv", args.n)));
    let table = match args.n {
        1 => surface(BoundaryKind::FullySeparable, args.points, settings.jobs)?,
        2 => surface(BoundaryKind::Biseparable, args.points, settings.jobs)?,
        3 => {
            let t = crossings(args.points, settings.jobs)?;
            let (gap, at) = max_difference(&t);
            println!("max difference = {} at eta0p = {}", num(gap), num(at));
            t
        }
        n => return domain(format!("no figure {n}")),
    };
    table.write(Some(&out))?;
    println!("wrote {} rows to {}", table.rows.len(), out.display());
    Ok(())
}

fn zeta(e0: f64, e1: f64) -> (f64, f64) {
    (e0 + 2.0 * e1, e0 - e1)
}

/// Boundary occupation over the `(eta0', eta1')` square, `eta1'` fastest.
pub fn surface(kind: BoundaryKind, points: usize, jobs: usize) -> CliResult<Table> {
    if points < 2 {
        return domain("need at least 2 points per axis");
    }
    let axis = linspace(AXIS_MIN, AXIS_MAX, points);
    let grid: Vec<(f64, f64)> = axis.iter().flat_map(|&a| axis.iter().map(move |&b| (a, b))).collect();
    let rows = par_map(jobs, &grid, |&(e0, e1)| -> CliResult<Vec<String>> {
        let (z0, z1) = zeta(e0, e1);
        let b = kind.closed_form(z0, z1)?;
        Ok(vec![num(e0), num(e1), num(z0), num(z1), num(b.unwrap_or(f64::NAN)), num(nbar_of(b))])
    })?;
    let mut t = Table::new(["eta0p", "eta1p", "zeta0", "zeta1", "nprime2_boundary", "nbar_boundary"]);
    for r in rows {
        t.push(r?);
    }
    Ok(t)
}

/// Whether the noiseless state at `(eta0', eta1')` lies outside the region
/// bounded by `kind`.
fn noiseless_outside(kind: BoundaryKind, e0: f64, e1: f64) -> CliResult<bool> {
    let (z0, z1) = zeta(e0, e1);
    Ok(kind.closed_form(z0, z1)?.is_some_and(|b| b > 1.0 + NOISELESS_SLACK))
}

/// First `eta1' = branch * s` (s in `[0, 2]`) at which the noiseless state
/// leaves the region; NaN if it never does.
pub fn noiseless_crossing(kind: BoundaryKind, e0: f64, branch: f64) -> CliResult<f64> {
    let step = (AXIS_MAX - 0.0) / CROSSING_SCAN as f64;
    let mut prev = 0.0;
    for k in 1..=CROSSING_SCAN {
        let s = step * k as f64;
        if noiseless_outside(kind, e0, branch * s)? {
            let (mut lo, mut hi) = (prev, s);
            for _ in 0..CROSSING_BISECTIONS {
                let mid = 0.5 * (lo + hi);
                if noiseless_outside(kind, e0, branch * mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(branch * 0.5 * (lo + hi));
        }
        prev = s;
    }
    Ok(f64::NAN)
}

/// Noiseless region edges for both signs of `eta1'`, their separation and
/// the separation magnified a hundredfold.
pub fn crossings(points: usize, jobs: usize) -> CliResult<Table> {
    if points < 2 {
        return domain("need at least 2 points per axis");
    }
    let rows_in: Vec<(f64, f64)> =
        linspace(AXIS_MIN, AXIS_MAX, points).into_iter().flat_map(|e0| [(e0, 1.0), (e0, -1.0)]).collect();
    let rows = par_map(jobs, &rows_in, |&(e0, branch)| -> CliResult<Vec<String>> {
        let full = noiseless_crossing(BoundaryKind::FullySeparable, e0, branch)?;
        let bisep = noiseless_crossing(BoundaryKind::Biseparable, e0, branch)?;
        let diff = bisep.abs() - full.abs();
        Ok(vec![num(e0), num(branch), num(full), num(bisep), num(diff), num(100.0 * diff)])
    })?;
    let mut t = Table::new(["eta0p", "branch", "eta1p_fullsep", "eta1p_bisep", "difference", "difference_x100"]);
    for r in rows {
        t.push(r?);
    }
    Ok(t)
}

/// Largest finite `difference` entry and the `eta0p` where it occurs.
pub fn max_difference(t: &Table) -> (f64, f64) {
    let (d, e) = (t.column("difference").unwrap(), t.column("eta0p").unwrap());
    t.rows
        .iter()
        .filter_map(|r| Some((r[d].parse::<f64>().ok()?, r[e].parse::<f64>().ok()?)))
        .filter(|(v, _)| v.is_finite())
        .fold((0.0, f64::NAN), |best, c| if c.0 > best.0 { c } else { best })
}
