use crate::args::{LevelArg, VerifyArgs};
use crate::checks::{run_suites, Level, SuiteReport};
use crate::csv::num;
use crate::error::{domain, CliError, CliResult};

use super::Settings;

pub fn run(args: &VerifyArgs) -> CliResult<()> {
    let settings = Settings::load(&args.common)?;
    let level = match args.level {
        Some(LevelArg::Quick) => Level::Quick,
        Some(LevelArg::Full) => Level::Full,
        None => match settings.config.get("level") {
            None | Some("quick") => Level::Quick,
            Some("full") => Level::Full,
            Some(other) => return domain(format!("config key `level`: unknown value `{other}`")),
        },
    };
    let reports = run_suites(level);
    print!("{}", render(&reports));
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}

pub fn render(reports: &[SuiteReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&format!(
            "{:<32} {}  checked={} skipped={} max_deviation={} threshold={}\n",
            r.name,
            if r.passed() { "PASS" } else { "FAIL" },
            r.checked,
            r.skipped,
            num(r.max_deviation),
            num(r.threshold)
        ));
        if let Some(rate) = r.agreement() {
            s.push_str(&format!("    agreement = {:.2}% of {} checks\n", 100.0 * rate, r.checked));
        }
        for f in &r.failures {
            s.push_str(&format!("    {f}\n"));
        }
    }
    s
}
