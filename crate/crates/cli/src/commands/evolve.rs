use crate::args::EvolveArgs;
use crate::csv::{num, Table};
use crate::error::{domain, CliResult};
use crate::par_map;
use crate::sweep::Point;
use trimode::evolution::Horizon;

use super::{classify_point, error_label, Settings};

pub const DEFAULT_TMAX: f64 = 5.0;
pub const DEFAULT_STEPS: usize = 101;

pub fn run(args: &EvolveArgs) -> CliResult<()> {
    let settings = Settings::load(&args.common)?;
    let point = settings.point(&args.point)?;
    let tmax = settings.get(args.tmax, "tmax", DEFAULT_TMAX)?;
    let steps = settings.get(args.steps, "steps", DEFAULT_STEPS)?;
    trace(&point, tmax, steps, settings.tol, settings.jobs)?.write(settings.out.as_deref())
}

/// Rows at `t' = tmax k / (steps - 1)`; the `tprime` of `point` is ignored.
pub fn trace(point: &Point, tmax: f64, steps: usize, tol: f64, jobs: usize) -> CliResult<Table> {
    if steps < 2 {
        return domain(format!("steps must be at least 2, got {steps}"));
    }
    if !(tmax > 0.0) || !tmax.is_finite() {
        return domain(format!("tmax must be positive and finite, got {tmax}"));
    }
    let points: Vec<Point> = (0..steps)
        .map(|k| {
            let t = if k + 1 == steps { tmax } else { tmax * k as f64 / (steps - 1) as f64 };
            Point { tprime: Horizon::Finite(t), ..*point }
        })
        .collect();
    let mut table = Table::new(["tprime", "zeta0", "zeta1", "nprime", "a", "b", "c", "d", "class", "marginal"]);
    let rows = par_map(jobs, &points, |p| {
        let (z0, z1) = p.zeta();
        let mut row: Vec<String> =
            [p.tprime.finite().unwrap_or(f64::INFINITY), z0, z1, p.n_prime()].iter().map(|&v| num(v)).collect();
        match classify_point(p, tol) {
            Ok(c) => {
                row.extend([c.entries.a, c.entries.b, c.entries.c, c.entries.d].iter().map(|&v| num(v)));
                row.push(c.report.class.to_string());
                row.push(c.report.marginal.to_string());
            }
            Err(e) => {
                let entries = p.family().and_then(|f| Ok(trimode::evolution::symmetric_entries(&f)?));
                match entries {
                    Ok(e) => row.extend([e.a, e.b, e.c, e.d].iter().map(|&v| num(v))),
                    Err(_) => row.extend(std::iter::repeat_n(num(f64::NAN), 4)),
                }
                row.push(error_label(&e));
                row.push(String::new());
            }
        }
        row
    })?;
    for r in rows {
        table.push(r);
    }
    Ok(table)
}
