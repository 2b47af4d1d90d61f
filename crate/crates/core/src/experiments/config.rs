//! Flat `key = value` configuration files.
//!
//! One key per line, `#` starts a comment. Apparatus keys follow the usual
//! names (`g1 g4 T2 T3 tau1 tau4 nth1 nth4`); the rest describe the scenario
//! and, for `sweep`, the swept axis.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use super::sweep::{Curve, Grid, SweepAxis, SweepSpec};
use crate::error::{Error, Result};
use crate::optimizer::{Constraint, FreeParams, GainSplit, Scenario};
use crate::states::Family;
use crate::swapping::ApparatusParams;

const KEYS: &[&str] = &[
    "input", "resource", "r12", "r34", "phi12", "phi34", "theta12", "theta34", "delta12", "delta34", "g1", "g4", "T2",
    "T3", "tau1", "tau4", "nth1", "nth4", "constraint", "free", "split", "axis", "start", "stop", "step",
    "reference_input", "reference_resource", "output",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            let k = k.trim();
            if cfg.entries.contains_key(k) {
                return Err(Error::Config(format!("line {}: duplicate key {k}", n + 1)));
            }
            cfg.set(k, v.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sets or overrides one key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown key {key}")));
        }
        if value.is_empty() {
            return Err(Error::Config(format!("empty value for {key}")));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Parses a `key=value` override as given on the command line.
    pub fn set_assignment(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got {assignment}")))?;
        self.set(k.trim(), v.trim())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    fn real(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => parse_real(v).ok_or_else(|| Error::Config(format!("{key}: not a number: {v}"))),
        }
    }

    fn family(&self, key: &str, default: Family) -> Result<Family> {
        self.get(key).map_or(Ok(default), str::parse)
    }

    pub fn apparatus(&self) -> Result<ApparatusParams> {
        let d = ApparatusParams::ideal();
        let app = ApparatusParams {
            g1: self.real("g1", d.g1)?,
            g4: self.real("g4", d.g4)?,
            t2: self.real("T2", d.t2)?,
            t3: self.real("T3", d.t3)?,
            tau1: self.real("tau1", d.tau1)?,
            tau4: self.real("tau4", d.tau4)?,
            nth1: self.real("nth1", d.nth1)?,
            nth4: self.real("nth4", d.nth4)?,
        };
        app.validate()?;
        Ok(app)
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let mut s = Scenario::new(
            self.family("input", Family::SB)?,
            self.family("resource", Family::TB)?,
            self.real("r12", 1.0)?,
            self.real("r34", 1.0)?,
        );
        s.phi12 = self.real("phi12", PI)?;
        s.phi34 = self.real("phi34", PI)?;
        s.theta12 = self.real("theta12", 0.0)?;
        s.theta34 = self.real("theta34", 0.0)?;
        s.delta12 = self.real("delta12", 0.0)?;
        s.delta34 = self.real("delta34", 0.0)?;
        s.apparatus = self.apparatus()?;
        s.constraint = match self.get("constraint").unwrap_or("none") {
            "none" => Constraint::None,
            "symmetric" => Constraint::Symmetric,
            other => return Err(Error::Config(format!("constraint: unknown value {other}"))),
        };
        if let Some(list) = self.get("free") {
            s.free = parse_free(list)?;
        }
        if let Some(split) = self.get("split") {
            s.gain_split = parse_split(split)?;
        }
        s.validate()?;
        Ok(s)
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let template = self.scenario()?;
        let axis = match self.get("axis").unwrap_or("r12") {
            "r12" => SweepAxis::R12,
            "r34" => SweepAxis::R34,
            "symmetric" => SweepAxis::Symmetric,
            other => return Err(Error::Config(format!("axis: unknown value {other}"))),
        };
        let grid = Grid::new(self.real("start", 0.0)?, self.real("stop", 2.0)?, self.real("step", 0.1)?)?;
        let main = Curve::swapped(template.clone());
        let mut curves = vec![main.clone()];
        let mut comparisons = Vec::new();
        if self.get("reference_input").is_some() || self.get("reference_resource").is_some() {
            let mut reference = template.clone();
            reference.input_family = self.family("reference_input", template.input_family)?;
            reference.resource_family = self.family("reference_resource", template.resource_family)?;
            reference.validate()?;
            let reference = Curve::swapped(reference);
            if reference.label() == main.label() {
                return Err(Error::Config("reference families equal the scenario families".into()));
            }
            comparisons.push((main.label(), reference.label()));
            curves.push(reference);
        }
        let spec = SweepSpec {
            axis,
            grid,
            curves,
            comparisons,
            output: self.get("output").map(PathBuf::from),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Accepts plain numbers and `pi`, `-pi`, `pi/2` style multiples.
fn parse_real(v: &str) -> Option<f64> {
    if let Ok(x) = v.parse::<f64>() {
        return Some(x);
    }
    let (sign, rest) = match v.strip_prefix('-') {
        Some(r) => (-1.0, r),
        None => (1.0, v),
    };
    let (num, den) = match rest.split_once('/') {
        Some((a, b)) => (a, b.parse::<f64>().ok()?),
        None => (rest, 1.0),
    };
    let factor = match num {
        "pi" => 1.0,
        other => other.strip_suffix("pi")?.trim_end_matches('*').parse::<f64>().ok()?,
    };
    Some(sign * factor * PI / den)
}

fn parse_free(list: &str) -> Result<FreeParams> {
    let mut free = FreeParams::NONE;
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "delta12" => free.delta12 = true,
            "delta34" => free.delta34 = true,
            "gain" => free.gain = true,
            "none" => {}
            other => return Err(Error::Config(format!("free: unknown parameter {other}"))),
        }
    }
    Ok(free)
}

fn parse_split(v: &str) -> Result<GainSplit> {
    match v {
        "mode4" => Ok(GainSplit::Mode4),
        "even" => Ok(GainSplit::Even),
        other => {
            let f = other
                .strip_prefix("fraction:")
                .and_then(|f| f.parse::<f64>().ok())
                .ok_or_else(|| Error::Config(format!("split: expected mode4, even or fraction:<f>, got {other}")))?;
            Ok(GainSplit::Fraction(f))
        }
    }
}
