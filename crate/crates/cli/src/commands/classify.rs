use std::fmt::Write;

use crate::args::ClassifyArgs;
use crate::csv::{num, Table};
use crate::error::CliResult;
use crate::par_map;
use crate::sweep::{horizon_value, Point, SweepSpec};

use super::{classify_point, entry_cells, error_label, Settings, ENTRY_COLUMNS};

pub fn run(args: &ClassifyArgs) -> CliResult<()> {
    let settings = Settings::load(&args.common)?;
    let point = settings.point(&args.point)?;
    let axes = settings.grid(&args.grid)?;
    if axes.is_empty() {
        let text = report(&point, settings.tol)?;
        print!("{text}");
        if settings.out.is_some() {
            sweep_table(&[point], settings.tol, 1)?.write(settings.out.as_deref())?;
        }
        return Ok(());
    }
    let spec = SweepSpec::new(axes, point)?;
    sweep_table(&spec.points(), settings.tol, settings.jobs)?.write(settings.out.as_deref())
}

/// Human-readable report followed by one `key=value` machine line.
pub fn report(p: &Point, tol: f64) -> CliResult<String> {
    let c = classify_point(p, tol)?;
    let (z0, z1) = p.zeta();
    let e = &c.entries;
    let mut s = String::new();
    let tp = horizon_value(p.tprime);
    let _ = writeln!(s, "eta0' = {}  eta1' = {}  nbar = {}  t' = {}", p.eta0p, p.eta1p, p.nbar, tp);
    let _ = writeln!(s, "zeta0 = {z0}  zeta1 = {z1}  n' = {}", p.n_prime());
    let _ = writeln!(s, "a = {:e}  b = {:e}  c = {:e}  d = {:e}", e.a, e.b, e.c, e.d);
    let _ = writeln!(s, "a' = {:e}  b' = {:e}  c' = {:e}  d' = {:e}", e.a_p, e.b_p, e.c_p, e.d_p);
    if c.report.ppt_margins.is_empty() {
        let _ = writeln!(s, "PPT: covariance diverges; decided by the asymptotic boundaries");
    }
    for (j, m) in c.report.ppt_margins.iter().enumerate() {
        let verdict = if *m >= -tol { "pass" } else { "fail" };
        let _ = writeln!(s, "PPT mode {}: min eig = {:e} ({verdict})", j + 1, m);
    }
    if let Some(f) = &c.report.feasibility {
        let _ = writeln!(s, "full separability: feasible = {}  slack = {:e}  method = {:?}", f.feasible, f.slack, f.method);
    }
    let _ = writeln!(s, "class: {}{}", c.report.class, if c.report.marginal { " (marginal)" } else { "" });
    let _ = writeln!(
        s,
        "result,zeta0={},zeta1={},nprime={},class={},marginal={}",
        num(z0),
        num(z1),
        num(p.n_prime()),
        c.report.class,
        c.report.marginal
    );
    Ok(s)
}

pub fn sweep_table(points: &[Point], tol: f64, jobs: usize) -> CliResult<Table> {
    let mut header = vec!["eta0p", "eta1p", "nbar", "tprime", "zeta0", "zeta1", "nprime"];
    header.extend(ENTRY_COLUMNS);
    header.extend(["class", "marginal"]);
    let mut table = Table::new(header);
    let rows = par_map(jobs, points, |p| {
        let (z0, z1) = p.zeta();
        let mut row: Vec<String> =
            [p.eta0p, p.eta1p, p.nbar, horizon_value(p.tprime), z0, z1, p.n_prime()].iter().map(|&v| num(v)).collect();
        match classify_point(p, tol) {
            Ok(c) => {
                row.extend(entry_cells(Some(&c.entries)));
                row.push(c.report.class.to_string());
                row.push(c.report.marginal.to_string());
            }
            Err(e) => {
                row.extend(entry_cells(None));
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
