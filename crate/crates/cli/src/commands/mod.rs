pub mod boundary;
pub mod classify;
pub mod evolve;
pub mod figure;
pub mod verify;

use std::path::PathBuf;
use std::str::FromStr;

use trimode::evolution::{symmetric_entries, Horizon, SymmetricEntries};
use trimode::separability::{classify_family, ClassificationReport};

use crate::args::{CommonArgs, PointArgs};
use crate::config::Config;
use crate::csv::num;
use crate::error::{CliError, CliResult};
use crate::sweep::{parse_horizon, AxisSpec, Point};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Flag values merged over the optional config file.
pub(crate) struct Settings {
    pub config: Config,
    pub out: Option<PathBuf>,
    pub tol: f64,
    pub jobs: usize,
}

impl Settings {
    pub fn load(common: &CommonArgs) -> CliResult<Self> {
        let config = match &common.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        let out = match &common.out {
            Some(p) => Some(p.clone()),
            None => config.get("out").map(PathBuf::from),
        };
        let tol = pick(common.tol, &config, "tol", DEFAULT_TOL)?;
        if !(tol >= 0.0) || !tol.is_finite() {
            return Err(CliError::Domain(format!("tolerance must be non-negative, got {tol}")));
        }
        let jobs = pick(common.jobs, &config, "jobs", 0)?;
        Ok(Self { config, out, tol, jobs })
    }

    pub fn point(&self, p: &PointArgs) -> CliResult<Point> {
        let tprime = match &p.tprime {
            Some(s) => parse_horizon(s)?,
            None => match self.config.get("tprime") {
                Some(s) => parse_horizon(s)?,
                None => Horizon::Infinite,
            },
        };
        let point = Point {
            eta0p: pick(p.eta0p, &self.config, "eta0p", 0.0)?,
            eta1p: pick(p.eta1p, &self.config, "eta1p", 0.0)?,
            nbar: pick(p.nbar, &self.config, "nbar", 0.0)?,
            tprime,
        };
        if !(point.nbar >= 0.0) || !point.nbar.is_finite() {
            return Err(CliError::Domain(format!("nbar must be finite and non-negative, got {}", point.nbar)));
        }
        if !point.eta0p.is_finite() || !point.eta1p.is_finite() {
            return Err(CliError::Domain("amplification ratios must be finite".into()));
        }
        Ok(point)
    }

    pub fn grid(&self, flags: &[String]) -> CliResult<Vec<AxisSpec>> {
        let raw = if flags.is_empty() { self.config.all("grid") } else { flags };
        raw.iter().map(|s| s.parse()).collect()
    }

    pub fn get<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T>
    where
        T::Err: std::fmt::Display,
    {
        pick(flag, &self.config, key, default)
    }
}

fn pick<T: FromStr>(flag: Option<T>, config: &Config, key: &str, default: T) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    match flag {
        Some(v) => Ok(v),
        None => Ok(config.parsed(key)?.unwrap_or(default)),
    }
}

/// Short label for a point that could not be classified.
pub fn error_label(e: &CliError) -> String {
    let reason = match e {
        CliError::Core(trimode::Error::Resonance { .. }) => "resonance",
        CliError::Core(trimode::Error::Singular { .. }) => "singular",
        CliError::Core(trimode::Error::InvalidArgument(_)) => "invalid",
        CliError::Core(trimode::Error::NumericalFailure(_)) => "numerical",
        CliError::Core(trimode::Error::Bracket { .. }) => "bracket",
        CliError::Core(trimode::Error::Inconsistency(_)) => "inconsistent",
        CliError::Domain(_) => "domain",
        CliError::Io { .. } => "io",
        CliError::Verification(_) => "verification",
    };
    format!("error:{reason}")
}

pub struct Classified {
    pub entries: SymmetricEntries<f64>,
    pub report: ClassificationReport<f64>,
}

pub fn classify_point(p: &Point, tol: f64) -> CliResult<Classified> {
    let family = p.family()?;
    let entries = symmetric_entries(&family)?;
    let report = classify_family(&family, tol)?;
    Ok(Classified { entries, report })
}

pub const ENTRY_COLUMNS: [&str; 8] = ["a", "b", "c", "d", "a_p", "b_p", "c_p", "d_p"];

pub fn entry_cells(e: Option<&SymmetricEntries<f64>>) -> Vec<String> {
    match e {
        Some(e) => [e.a, e.b, e.c, e.d, e.a_p, e.b_p, e.c_p, e.d_p].iter().map(|&v| num(v)).collect(),
        None => vec![num(f64::NAN); 8],
    }
}
