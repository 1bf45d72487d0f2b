//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines are printed on success as well; exits non-zero if
//! any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use trimode::evolution::{
    build_symmetric_gamma, complex_to_real_cm, evolve_equal_damping, steady_alpha_beta, symmetric_entries,
    ComplexMoments, Horizon, SymmetricFamily,
};
use trimode::oracles::{grid_feasibility, GridConfig};
use trimode::separability::{
    bisep_boundary, classify_family, fully_sep_boundary, schur_complements, section_feasibility, weak_bisep_boundary_eta,
    FeasibilityProblem, SeparabilityClass,
};
use trimode_cli::checks::{
    boundary_gap, family_gamma, linspace, oracle_boundary, ppt_suite,
    propagator_suite, steady_suite, BoundaryKind, BOUNDARY_PAIRS,
};
use trimode_cli::commands::figure::{crossings, max_difference};

type Check = fn() -> Outcome;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn propagators() -> Outcome {
    let start = Instant::now();
    let r = propagator_suite(20, &[0.5, 1.0, 3.0], 1e-3, 2024);
    let elapsed = start.elapsed();
    let ok = r.passed() && r.checked == 120 && elapsed < Duration::from_secs(5);
    let mut d = format!("max |closed form - RK4| = {:e} over {} cases in {:.2?}", r.max_deviation, r.checked, elapsed);
    for f in &r.failures {
        d.push_str(&format!("\n    {f}"));
    }
    outcome(ok, d)
}

fn steady_moments() -> Outcome {
    let r = steady_suite(50, 2025);
    let ok = r.passed() && r.checked == 50;
    outcome(ok, format!("max residual / coefficient deviation = {:e} over {} sets; failures {:?}", r.max_deviation, r.checked, r.failures))
}

fn pipeline() -> Outcome {
    const GAMMA: f64 = 1.0;
    let zetas = [-1.6, -0.7, -0.2, 0.1, 0.55, 1.3];
    let horizons = [Horizon::Finite(0.3), Horizon::Finite(1.0), Horizon::Finite(2.5), Horizon::Infinite];
    let (mut checked, mut worst, mut failures) = (0, 0.0f64, Vec::new());
    for &z0 in &zetas {
        for &z1 in &zetas {
            for n in [1.0, 1.7, 3.0] {
                for h in horizons {
                    let run = || -> trimode::Result<Option<f64>> {
                        let f = SymmetricFamily::from_zeta(z0, z1, n, h)?;
                        if h.is_infinite() && !f.is_weak() {
                            return Ok(None);
                        }
                        let (eta, bath) = (f.amplifier(GAMMA), f.bath(GAMMA)?);
                        let moments = match f.time(GAMMA) {
                            Some(t) => evolve_equal_damping(&ComplexMoments::vacuum(3), &eta, &bath, t)?,
                            None => steady_alpha_beta(&eta, &bath)?,
                        };
                        let got = complex_to_real_cm(&moments)?;
                        let expect = build_symmetric_gamma(&symmetric_entries(&f)?, 1.0)?;
                        let scale = expect.entries().amax().max(1.0);
                        Ok(Some((got.entries() - expect.entries()).amax() / scale))
                    };
                    match run() {
                        Ok(Some(d)) => {
                            checked += 1;
                            worst = worst.max(d);
                            if !(d < 1e-10) {
                                failures.push(format!("zeta=({z0},{z1}) n'={n} {h:?}: {d:e}"));
                            }
                        }
                        Ok(None) => {}
                        Err(e) => failures.push(format!("zeta=({z0},{z1}) n'={n} {h:?}: {e}")),
                    }
                }
            }
        }
    }
    let ok = failures.is_empty() && checked >= 300;
    outcome(ok, format!("max relative deviation = {worst:e} over {checked} points; failures {failures:?}"))
}

fn ppt_algebra() -> Outcome {
    let horizons = [Horizon::Finite(0.5), Horizon::Finite(2.0), Horizon::Infinite];
    let r = ppt_suite(&linspace(-1.9, 1.9, 20), &linspace(1.0, 5.0, 5), &horizons, 1e-6);
    let rate = r.agreement().unwrap_or(0.0);
    let mut d = format!(
        "agreement {:.2}% over {} off-band points ({} skipped: in band or divergent at t'=inf)",
        100.0 * rate,
        r.checked,
        r.skipped
    );
    for f in &r.failures {
        d.push_str(&format!("\n    disagreement: {f}"));
    }
    outcome(r.passed() && r.checked > 0, d)
}

fn fullsep_boundary() -> Outcome {
    let exact = (fully_sep_boundary(0.8, -0.4) - 2.52f64).abs() < 1e-12 && (fully_sep_boundary(2.0, -2.0) - 9.0f64).abs() < 1e-12;
    let mut gaps = Vec::new();
    let mut failures = Vec::new();
    for &(z0, z1) in &BOUNDARY_PAIRS {
        let closed = fully_sep_boundary(z0, z1);
        match oracle_boundary(BoundaryKind::FullySeparable, z0, z1) {
            Ok(o) => {
                let gap = boundary_gap(Some(closed), o);
                gaps.push(format!("({z0},{z1}): {closed:.6} vs {:.6}", o.unwrap_or(f64::NAN)));
                if !(gap < 1e-3) {
                    failures.push(format!("({z0},{z1}) gap {gap:e}"));
                }
            }
            Err(e) => failures.push(format!("({z0},{z1}): {e}")),
        }
    }
    let ok = exact && failures.is_empty();
    outcome(ok, format!("closed form vs bisection: {}; failures {failures:?}", gaps.join(", ")))
}

fn bisep_boundary_values() -> Outcome {
    let weak_form = weak_bisep_boundary_eta(0.0, 0.5f64);
    let at_seam = bisep_boundary(1.0, -0.5f64).ok().flatten().unwrap_or(f64::NAN);
    let two_zero = bisep_boundary(2.0, 0.0f64).ok().flatten().unwrap_or(f64::NAN);
    let two_two = bisep_boundary(2.0, -2.0f64).ok().flatten().unwrap_or(f64::NAN);
    let mut ok = (weak_form - 2.75).abs() < 1e-12
        && (at_seam - 2.75).abs() < 1e-12
        && (two_zero - 25.0 / 9.0).abs() < 1e-12
        && (two_two - 8.0).abs() < 1e-12;
    let mut d = format!("2.75 -> {weak_form:.15}, 25/9 -> {two_zero:.15}, 8 -> {two_two:.15}");
    for (z0, z1, expect) in [(2.0, 0.0, 25.0 / 9.0), (2.0, -2.0, 8.0)] {
        match oracle_boundary(BoundaryKind::Biseparable, z0, z1) {
            Ok(Some(o)) => {
                ok &= (o - expect).abs() < 1e-3;
                d.push_str(&format!("; PPT bisection at ({z0},{z1}) = {o:.6}"));
            }
            other => {
                ok = false;
                d.push_str(&format!("; PPT bisection at ({z0},{z1}) failed: {other:?}"));
            }
        }
    }
    // (eta0', eta1') = (0, 0.5) sits on the resonance zeta0 = 1, where no
    // finite-n' state exists; bisect just inside the weak regime instead.
    let (e0, e1) = (-1e-5, 0.5);
    let (z0, z1) = (e0 + 2.0 * e1, e0 - e1);
    match oracle_boundary(BoundaryKind::Biseparable, z0, z1) {
        Ok(Some(o)) => {
            ok &= (o - 2.75).abs() < 1e-3;
            d.push_str(&format!("; (0,0.5) is resonant, PPT bisection at zeta0 = {z0} gives {o:.6}"));
        }
        other => {
            ok = false;
            d.push_str(&format!("; near-resonant PPT bisection failed: {other:?}"));
        }
    }
    outcome(ok, d)
}

fn three_class_witness() -> Outcome {
    let expect = [
        (1.0f64, SeparabilityClass::FullyInseparable, false),
        (2.45, SeparabilityClass::Biseparable, false),
        (2.6, SeparabilityClass::FullySeparable, true),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (n2, class, feasible) in expect {
        let run = || -> trimode::Result<(SeparabilityClass, bool, bool)> {
            let f = SymmetricFamily::from_zeta(0.8, -0.4, n2.sqrt(), Horizon::Infinite)?;
            let got = classify_family(&f, 1e-9)?.class;
            let pair = schur_complements(&family_gamma(0.8, -0.4, n2.sqrt(), Horizon::Infinite)?)?;
            let section = section_feasibility(&FeasibilityProblem::new(&pair), 1e-9)
                .ok_or_else(|| trimode::Error::Inconsistency("section reduction not applicable".into()))?;
            let grid = grid_feasibility(&pair, &GridConfig::default());
            Ok((got, section.feasible, grid.feasible))
        };
        match run() {
            Ok((got, section, grid)) => {
                ok &= got == class && section == feasible && grid == feasible;
                parts.push(format!("n'^2={n2}: {got}, section feasible {section}, grid feasible {grid}"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("n'^2={n2}: {e}"));
            }
        }
    }
    outcome(ok, parts.join("; "))
}

fn figure_three() -> Outcome {
    let start = Instant::now();
    let table = match crossings(101, 0) {
        Ok(t) => t,
        Err(e) => return outcome(false, format!("figure 3 failed: {e}")),
    };
    let elapsed = start.elapsed();
    let col = table.column("difference").unwrap();
    let diffs: Vec<f64> = table.rows.iter().map(|r| r[col].parse().unwrap_or(f64::NAN)).collect();
    let contained = diffs.iter().all(|&d| d >= 0.0);
    let (gap, at) = max_difference(&table);
    let range = 4.0;
    let ok = contained && gap < 0.05 * range && elapsed < Duration::from_secs(30) && diffs.iter().all(|d| d.is_finite());
    outcome(
        ok,
        format!(
            "containment {contained}, max gap {gap:.6} at eta0'={at} (limit {}), {} rows in {elapsed:.2?}",
            0.05 * range,
            table.rows.len()
        ),
    )
}

fn noise_monotonicity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(99);
    let mut violations = Vec::new();
    let mut rays = 0;
    while rays < 50 {
        let (z0, z1): (f64, f64) = (rng.gen_range(-2.5..2.5), rng.gen_range(-2.5..2.5));
        if (z0.abs() - 1.0).abs() < 1e-3 || (z1.abs() - 1.0).abs() < 1e-3 {
            continue;
        }
        rays += 1;
        let mut last = SeparabilityClass::FullyInseparable;
        for k in 0..60 {
            let n = 1.0 + 0.05 * k as f64;
            let class = SymmetricFamily::from_zeta(z0, z1, n, Horizon::Infinite).and_then(|f| classify_family(&f, 1e-9));
            match class {
                Ok(r) => {
                    if r.class < last {
                        violations.push(format!("({z0:.3},{z1:.3}) n'={n}: {} after {last}", r.class));
                    }
                    last = r.class;
                }
                Err(e) => violations.push(format!("({z0:.3},{z1:.3}) n'={n}: {e}")),
            }
        }
    }
    outcome(violations.is_empty(), format!("{rays} rays of 60 noise levels; violations {violations:?}"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("temporary directory");
    let bin = env!("CARGO_BIN_EXE_trimode");
    let run = |name: &str, jobs: &str| -> Result<Vec<u8>, String> {
        let path = dir.path().join(name);
        let status = Command::new(bin)
            .args(["figure", "3", "--jobs", jobs, "--out"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(String::from_utf8_lossy(&status.stderr).into_owned());
        }
        std::fs::read(&path).map_err(|e| e.to_string())
    };
    match (run("a.csv", "1"), run("b.csv", "1"), run("c.csv", "8")) {
        (Ok(a), Ok(b), Ok(c)) => {
            outcome(a == b && a == c && !a.is_empty(), format!("run twice identical {}, jobs 1 vs 8 identical {}, {} bytes", a == b, a == c, a.len()))
        }
        (a, b, c) => outcome(false, format!("figure 3 failed: {:?} {:?} {:?}", a.err(), b.err(), c.err())),
    }
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("propagator correctness", propagators),
        ("steady moments", steady_moments),
        ("pipeline consistency", pipeline),
        ("PPT algebra vs spectra", ppt_algebra),
        ("fully separable boundary", fullsep_boundary),
        ("biseparable boundary values", bisep_boundary_values),
        ("three-class witness", three_class_witness),
        ("figure 3 reproduction", figure_three),
        ("monotonicity in noise", noise_monotonicity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        failed += usize::from(!o.passed);
        println!(
            "criterion {:>2} {:<28} {}  ({:.2?})  {}",
            i + 1,
            name,
            if o.passed { "PASS" } else { "FAIL" },
            start.elapsed(),
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
