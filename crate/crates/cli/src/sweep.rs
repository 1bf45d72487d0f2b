use std::fmt;
use std::str::FromStr;

use trimode::evolution::{Horizon, SymmetricFamily};

use crate::error::{domain, CliError, CliResult};

pub const MAX_AXES: usize = 2;

/// A point of the user-facing parameter space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub eta0p: f64,
    pub eta1p: f64,
    pub nbar: f64,
    pub tprime: Horizon<f64>,
}

impl Point {
    pub fn family(&self) -> CliResult<SymmetricFamily<f64>> {
        if !(self.nbar >= 0.0) {
            return domain(format!("nbar must be non-negative, got {}", self.nbar));
        }
        Ok(SymmetricFamily::with_occupation(self.eta0p, self.eta1p, self.nbar, self.tprime)?)
    }

    pub fn zeta(&self) -> (f64, f64) {
        (self.eta0p + 2.0 * self.eta1p, self.eta0p - self.eta1p)
    }

    pub fn n_prime(&self) -> f64 {
        2.0 * self.nbar + 1.0
    }
}

pub fn parse_horizon(s: &str) -> CliResult<Horizon<f64>> {
    let s = s.trim();
    if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity" | "+inf") {
        return Ok(Horizon::Infinite);
    }
    let t: f64 = s.parse().map_err(|_| CliError::Domain(format!("invalid t' value `{s}`")))?;
    if !(t >= 0.0) || !t.is_finite() {
        return domain(format!("t' must be a non-negative number or `inf`, got `{s}`"));
    }
    Ok(Horizon::Finite(t))
}

pub fn horizon_value(h: Horizon<f64>) -> f64 {
    h.finite().unwrap_or(f64::INFINITY)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Eta0p,
    Eta1p,
    Nbar,
    Tprime,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Eta0p => "eta0p",
            Self::Eta1p => "eta1p",
            Self::Nbar => "nbar",
            Self::Tprime => "tprime",
        }
    }

    fn set(&self, p: &mut Point, v: f64) {
        match self {
            Self::Eta0p => p.eta0p = v,
            Self::Eta1p => p.eta1p = v,
            Self::Nbar => p.nbar = v,
            Self::Tprime => p.tprime = Horizon::Finite(v),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "eta0p" => Ok(Self::Eta0p),
            "eta1p" => Ok(Self::Eta1p),
            "nbar" => Ok(Self::Nbar),
            "tprime" => Ok(Self::Tprime),
            _ => domain(format!("unknown axis `{s}` (expected eta0p, eta1p, nbar or tprime)")),
        }
    }
}

/// One swept axis: `count` evenly spaced values from `min` to `max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

impl FromStr for AxisSpec {
    type Err = CliError;

    /// `AXIS:MIN:MAX:COUNT`
    fn from_str(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [axis, min, max, count] = parts.as_slice() else {
            return domain(format!("grid `{s}` must look like AXIS:MIN:MAX:COUNT"));
        };
        let num = |x: &str| -> CliResult<f64> {
            x.trim().parse().map_err(|_| CliError::Domain(format!("grid `{s}`: `{x}` is not a number")))
        };
        let spec = Self {
            axis: axis.trim().parse()?,
            min: num(min)?,
            max: num(max)?,
            count: count
                .trim()
                .parse()
                .map_err(|_| CliError::Domain(format!("grid `{s}`: `{count}` is not a count")))?,
        };
        if spec.count < 2 {
            return domain(format!("grid `{s}`: count must be at least 2"));
        }
        if !(spec.min < spec.max) || !spec.min.is_finite() || !spec.max.is_finite() {
            return domain(format!("grid `{s}`: need finite MIN < MAX"));
        }
        if matches!(spec.axis, Axis::Nbar | Axis::Tprime) && spec.min < 0.0 {
            return domain(format!("grid `{s}`: {} cannot be negative", spec.axis));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axes: Vec<AxisSpec>,
    pub base: Point,
}

impl SweepSpec {
    pub fn new(axes: Vec<AxisSpec>, base: Point) -> CliResult<Self> {
        if axes.len() > MAX_AXES {
            return domain(format!("at most {MAX_AXES} swept axes per run, got {}", axes.len()));
        }
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].iter().any(|b| b.axis == a.axis) {
                return domain(format!("axis {} swept twice", a.axis));
            }
        }
        Ok(Self { axes, base })
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points in row-major order (the first axis varies slowest).
    pub fn points(&self) -> Vec<Point> {
        let mut out = vec![self.base];
        for axis in &self.axes {
            out = out
                .iter()
                .flat_map(|p| {
                    axis.values().into_iter().map(move |v| {
                        let mut q = *p;
                        axis.axis.set(&mut q, v);
                        q
                    })
                })
                .collect();
        }
        out
    }
}
