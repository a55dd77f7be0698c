//! Flat `key = value` experiment configuration.
//!
//! One key per line; `#` starts a comment. Keys:
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `experiment` | `rate`, `kernel-decay`, `weak-type`, `domination`, `sharpness`, `identity-suite` | required |
//! | `n` | dimension | 1 (2 for `domination`) |
//! | `delta`, `gamma`, `lambda`, `p` | multiplier parameters; `delta` defaults to `delta_p` when `p` is given | `gamma = 2`, `lambda = 0` |
//! | `N`, `L` | grid points per axis and box half width | per experiment |
//! | `R_min`, `R_max`, `ratio` | geometric grid of radii `R` | per experiment |
//! | `seed`, `count` | first seed and number of seeded instances | 0, per experiment |
//! | `kernel` | `k0`, `k1`, `kinf` or `br` | `k1` |
//! | `radius` | `R` of the `br` kernel | 1 |
//! | `order` | derivative order 0..=2 of the kernel profile | 0 |
//! | `r_min`, `r_max`, `r_step` | kernel radius window and sample step | per kernel |
//! | `width` | Gaussian width | 1 |
//! | `cube_side` | atom cube side | 1 |
//! | `out` | output directory | `brlab-out` |

use std::path::PathBuf;
use std::str::FromStr;

use brlab_core::multipliers::{delta_p, MultiplierSpec};
use serde::Serialize;

use crate::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Rate,
    KernelDecay,
    WeakType,
    Domination,
    Sharpness,
    IdentitySuite,
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "rate" => Experiment::Rate,
            "kernel-decay" => Experiment::KernelDecay,
            "weak-type" => Experiment::WeakType,
            "domination" => Experiment::Domination,
            "sharpness" => Experiment::Sharpness,
            "identity-suite" => Experiment::IdentitySuite,
            other => return Err(format!("unknown experiment '{other}'")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelChoice {
    K0,
    K1,
    Kinf,
    Br,
}

impl FromStr for KernelChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "k0" => KernelChoice::K0,
            "k1" => KernelChoice::K1,
            "kinf" => KernelChoice::Kinf,
            "br" => KernelChoice::Br,
            other => return Err(format!("unknown kernel '{other}' (expected k0, k1, kinf or br)")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub dim: usize,
    pub delta: Option<f64>,
    pub gamma: f64,
    pub lambda: f64,
    pub p: Option<f64>,
    pub points: Option<usize>,
    pub half_width: Option<f64>,
    pub r_grid_min: Option<f64>,
    pub r_grid_max: Option<f64>,
    pub r_grid_ratio: Option<f64>,
    pub seed: u64,
    pub count: Option<usize>,
    pub kernel: KernelChoice,
    pub radius: f64,
    pub order: u32,
    pub window_min: Option<f64>,
    pub window_max: Option<f64>,
    pub window_step: Option<f64>,
    pub width: f64,
    pub cube_side: f64,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Defaults for `experiment`.
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            dim: if experiment == Experiment::Domination { 2 } else { 1 },
            delta: None,
            gamma: 2.0,
            lambda: 0.0,
            p: None,
            points: None,
            half_width: None,
            r_grid_min: None,
            r_grid_max: None,
            r_grid_ratio: None,
            seed: 0,
            count: None,
            kernel: KernelChoice::K1,
            radius: 1.0,
            order: 0,
            window_min: None,
            window_max: None,
            window_step: None,
            width: 1.0,
            cube_side: 1.0,
            out: None,
        }
    }

    /// Parses and validates a config file's text.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs: Vec<(usize, String, String)> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| LabError::Config {
                line: line_no,
                message: format!("expected key = value, got '{line}'"),
            })?;
            let key = key.trim().to_string();
            if pairs.iter().any(|(_, k, _)| *k == key) {
                return Err(LabError::Config { line: line_no, message: format!("duplicate key '{key}'") });
            }
            pairs.push((line_no, key, value.trim().to_string()));
        }
        let (exp_line, _, exp_value) = pairs
            .iter()
            .find(|(_, k, _)| k == "experiment")
            .ok_or_else(|| invalid("missing required key 'experiment'"))?;
        let experiment = exp_value.parse().map_err(|m| LabError::Config { line: *exp_line, message: m })?;
        let mut cfg = ExperimentConfig::new(experiment);
        for (line, key, value) in &pairs {
            cfg.set(key, value).map_err(|message| LabError::Config { line: *line, message })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
            value.parse().map_err(|_| format!("'{value}' is not a valid value for '{key}'"))
        }
        match key {
            "experiment" => {}
            "n" => self.dim = num(key, value)?,
            "delta" => self.delta = Some(num(key, value)?),
            "gamma" => self.gamma = num(key, value)?,
            "lambda" => self.lambda = num(key, value)?,
            "p" => self.p = Some(num(key, value)?),
            "N" => self.points = Some(num(key, value)?),
            "L" => self.half_width = Some(num(key, value)?),
            "R_min" => self.r_grid_min = Some(num(key, value)?),
            "R_max" => self.r_grid_max = Some(num(key, value)?),
            "ratio" => self.r_grid_ratio = Some(num(key, value)?),
            "seed" => self.seed = num(key, value)?,
            "count" => self.count = Some(num(key, value)?),
            "kernel" => self.kernel = value.parse()?,
            "radius" => self.radius = num(key, value)?,
            "order" => self.order = num(key, value)?,
            "r_min" => self.window_min = Some(num(key, value)?),
            "r_max" => self.window_max = Some(num(key, value)?),
            "r_step" => self.window_step = Some(num(key, value)?),
            "width" => self.width = num(key, value)?,
            "cube_side" => self.cube_side = num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// `delta`, or `delta_p` when only `p` is given.
    pub fn effective_delta(&self) -> Option<f64> {
        self.delta.or_else(|| self.p.map(|p| delta_p(self.dim, p)))
    }

    /// The multiplier parameters, with `p` attached when given.
    pub fn spec(&self) -> Result<MultiplierSpec> {
        let delta = self
            .effective_delta()
            .ok_or_else(|| invalid("either delta or p must be given to fix the smoothness index delta"))?;
        let spec = MultiplierSpec::new(self.dim, delta, self.gamma, self.lambda)?;
        Ok(match self.p {
            Some(p) => spec.with_p(p)?,
            None => spec,
        })
    }

    /// Re-checks every parameter constraint the chosen experiment relies on.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim as f64;
        if !(1..=3).contains(&self.dim) {
            return Err(invalid(format!("n = {} must be 1, 2 or 3", self.dim)));
        }
        if let Some(points) = self.points {
            if points < 4 || !points.is_power_of_two() {
                return Err(invalid(format!("N = {points} must be a power of two >= 4")));
            }
        }
        if let Some(l) = self.half_width {
            if !(l > 0.0 && l.is_finite()) {
                return Err(invalid(format!("L = {l} must be positive")));
            }
        }
        if let Some(p) = self.p {
            if !(p > 0.0 && p <= 1.0) {
                return Err(invalid(format!("p = {p} must lie in (0, 1], the Hardy space range")));
            }
        }
        if let Some(delta) = self.effective_delta() {
            if !(delta > -1.0) {
                return Err(invalid(format!(
                    "delta = {delta} must exceed -1 so that (1 - |xi|^gamma)_+^delta is locally integrable"
                )));
            }
        }
        if !(self.gamma > 0.0) {
            return Err(invalid(format!("gamma = {} must be positive", self.gamma)));
        }
        if !(self.lambda >= 0.0) {
            return Err(invalid(format!("lambda = {} must be nonnegative", self.lambda)));
        }
        if self.order > 2 {
            return Err(invalid(format!("order = {} exceeds the supported derivative order 2", self.order)));
        }
        if self.r_grid_ratio.is_some_and(|q| !(q > 1.0)) {
            return Err(invalid("ratio must exceed 1 for a geometric R grid"));
        }
        if !(self.width > 0.0) || !(self.cube_side > 0.0) || !(self.radius > 0.0) {
            return Err(invalid("width, cube_side and radius must be positive"));
        }
        let lambda_le_gamma = || {
            if self.lambda > self.gamma {
                Err(invalid(format!(
                    "lambda = {} must not exceed gamma = {} (rates are stated for 0 <= lambda <= gamma)",
                    self.lambda, self.gamma
                )))
            } else {
                Ok(())
            }
        };
        let delta = self.effective_delta();
        match self.experiment {
            Experiment::Rate => {
                lambda_le_gamma()?;
                delta.ok_or_else(|| invalid("rate needs delta or p"))?;
            }
            Experiment::KernelDecay => {
                delta.ok_or_else(|| invalid("kernel-decay needs delta or p"))?;
                match self.kernel {
                    KernelChoice::K0 => lambda_le_gamma()?,
                    KernelChoice::Kinf if self.lambda == 0.0 => {
                        return Err(invalid(
                            "kernel kinf needs lambda > 0: |xi|^-lambda at lambda = 0 has a distributional kernel",
                        ))
                    }
                    _ => {}
                }
            }
            Experiment::WeakType => {
                let p = self.p.ok_or_else(|| invalid("weak-type needs p"))?;
                if p >= 1.0 {
                    return Err(invalid(format!("p = {p} must lie in (0, 1) for the weak-type bound on atoms")));
                }
                lambda_le_gamma()?;
            }
            Experiment::Domination => {
                let delta = delta.ok_or_else(|| invalid("domination needs delta"))?;
                let alpha = 0.5 * (n - 1.0) - delta;
                if alpha <= 0.0 {
                    return Err(invalid(format!(
                        "delta = {delta} must be below (n-1)/2 = {} for the pointwise domination bound",
                        0.5 * (n - 1.0)
                    )));
                }
                if self.lambda < alpha || self.lambda > self.gamma {
                    return Err(invalid(format!(
                        "lambda = {} must lie in [(n-1)/2 - delta, gamma] = [{alpha}, {}] for the pointwise domination bound",
                        self.lambda, self.gamma
                    )));
                }
            }
            Experiment::Sharpness => {
                delta.ok_or_else(|| invalid("sharpness needs delta or p"))?;
                if self.lambda != self.gamma {
                    return Err(invalid(format!(
                        "sharpness requires lambda = gamma (the saturation case of the rate bound), got lambda = {} and gamma = {}",
                        self.lambda, self.gamma
                    )));
                }
            }
            Experiment::IdentitySuite => {}
        }
        Ok(())
    }
}

fn invalid(message: impl Into<String>) -> LabError {
    LabError::InvalidConfig(message.into())
}
