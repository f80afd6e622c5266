//! Scan configuration: plain-text `key = value` files plus flag overrides.
//!
//! A line starting with `#` is a comment. Output files carry their effective
//! configuration as `#! key = value` lines; when a file contains any such
//! line, only those lines are read, so a scan output doubles as its own
//! config file.

use std::fmt::Write as _;
use std::path::PathBuf;

use ncforce::kinematics::DisplacementConvention;
use ncforce::{AppendixReading, Vector3};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Hydrogen,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    Leading,
    FullIdentical,
    FullDissimilar,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObservationTime {
    Seconds(f64),
    /// One lifetime of atom A.
    Lifetime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomSpec {
    pub omega0: Option<f64>,
    pub gamma: Option<f64>,
    pub mass: Option<f64>,
    pub dipoles: Option<Vec<Vector3>>,
}

impl AtomSpec {
    const fn empty() -> Self {
        AtomSpec {
            omega0: None,
            gamma: None,
            mass: None,
            dipoles: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub preset: Preset,
    pub tier: Tier,
    pub r_min: f64,
    pub r_max: f64,
    pub r_points: usize,
    pub t_obs: ObservationTime,
    /// `(omega_A - omega_B) / Gamma_A`.
    pub detuning_ratio: f64,
    pub output_path: PathBuf,
    pub format: Format,
    pub convention: DisplacementConvention,
    pub displacement: bool,
    pub diagnostic: bool,
    pub reading: AppendixReading,
    /// Worker threads; `None` uses rayon's default pool.
    pub threads: Option<usize>,
    pub atom_a: AtomSpec,
    pub atom_b: AtomSpec,
    pub axis: Option<Vector3>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            preset: Preset::Hydrogen,
            tier: Tier::Leading,
            r_min: 20e-9,
            r_max: 200e-9,
            r_points: 500,
            t_obs: ObservationTime::Seconds(0.0),
            detuning_ratio: 0.0,
            output_path: PathBuf::from("scan.csv"),
            format: Format::Csv,
            convention: DisplacementConvention::TruncateAtLifetime,
            displacement: false,
            diagnostic: false,
            reading: AppendixReading::Reconciled,
            threads: None,
            atom_a: AtomSpec::empty(),
            atom_b: AtomSpec::empty(),
            axis: None,
        }
    }
}

fn field_err(field: &str, msg: impl Into<String>) -> CliError {
    CliError::Config {
        line: None,
        field: field.to_string(),
        message: msg.into(),
    }
}

fn parse_f64(field: &str, value: &str) -> Result<f64, CliError> {
    let x: f64 = value
        .parse()
        .map_err(|_| field_err(field, format!("expected a number, got `{value}`")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(field_err(
            field,
            format!("expected a finite number, got `{value}`"),
        ))
    }
}

fn parse_bool(field: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(field_err(
            field,
            format!("expected true or false, got `{value}`"),
        )),
    }
}

fn parse_vector(field: &str, value: &str) -> Result<Vector3, CliError> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(field_err(
            field,
            format!("expected three components, got `{value}`"),
        ));
    }
    Ok(Vector3::new(
        parse_f64(field, parts[0])?,
        parse_f64(field, parts[1])?,
        parse_f64(field, parts[2])?,
    ))
}

fn parse_dipoles(field: &str, value: &str) -> Result<Vec<Vector3>, CliError> {
    let list: Vec<Vector3> = value
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_vector(field, s))
        .collect::<Result<_, _>>()?;
    if list.is_empty() {
        return Err(field_err(field, "expected at least one dipole"));
    }
    Ok(list)
}

pub fn parse_preset(v: &str) -> Result<Preset, CliError> {
    match v {
        "hydrogen" => Ok(Preset::Hydrogen),
        "custom" => Ok(Preset::Custom),
        _ => Err(field_err("preset", format!("unknown preset `{v}`"))),
    }
}

pub fn parse_tier(v: &str) -> Result<Tier, CliError> {
    match v {
        "leading" => Ok(Tier::Leading),
        "full-identical" => Ok(Tier::FullIdentical),
        "full-dissimilar" => Ok(Tier::FullDissimilar),
        _ => Err(field_err("tier", format!("unknown tier `{v}`"))),
    }
}

pub fn parse_tobs(v: &str) -> Result<ObservationTime, CliError> {
    if v == "lifetime" {
        Ok(ObservationTime::Lifetime)
    } else {
        Ok(ObservationTime::Seconds(parse_f64("tobs", v)?))
    }
}

pub fn parse_format(v: &str) -> Result<Format, CliError> {
    match v {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        _ => Err(field_err("format", format!("unknown format `{v}`"))),
    }
}

pub fn parse_convention(v: &str) -> Result<DisplacementConvention, CliError> {
    match v {
        "truncate" => Ok(DisplacementConvention::TruncateAtLifetime),
        "full-decay" => Ok(DisplacementConvention::FullDecay),
        _ => Err(field_err("convention", format!("unknown convention `{v}`"))),
    }
}

pub fn parse_reading(v: &str) -> Result<AppendixReading, CliError> {
    match v {
        "reconciled" => Ok(AppendixReading::Reconciled),
        "printed" => Ok(AppendixReading::Printed),
        _ => Err(field_err("reading", format!("unknown reading `{v}`"))),
    }
}

fn tier_name(t: Tier) -> &'static str {
    match t {
        Tier::Leading => "leading",
        Tier::FullIdentical => "full-identical",
        Tier::FullDissimilar => "full-dissimilar",
    }
}

fn convention_name(c: DisplacementConvention) -> &'static str {
    match c {
        DisplacementConvention::TruncateAtLifetime => "truncate",
        DisplacementConvention::FullDecay => "full-decay",
    }
}

fn vector_text(v: Vector3) -> String {
    format!("{:e} {:e} {:e}", v.x, v.y, v.z)
}

impl ScanConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "preset" => self.preset = parse_preset(value)?,
            "tier" => self.tier = parse_tier(value)?,
            "rmin" => self.r_min = parse_f64(key, value)?,
            "rmax" => self.r_max = parse_f64(key, value)?,
            "rpoints" => {
                self.r_points = value
                    .parse()
                    .map_err(|_| field_err(key, format!("expected a count, got `{value}`")))?
            }
            "tobs" => self.t_obs = parse_tobs(value)?,
            "detuning_ratio" => self.detuning_ratio = parse_f64(key, value)?,
            "format" => self.format = parse_format(value)?,
            "convention" => self.convention = parse_convention(value)?,
            "displacement" => self.displacement = parse_bool(key, value)?,
            "diagnostic" => self.diagnostic = parse_bool(key, value)?,
            "reading" => self.reading = parse_reading(value)?,
            "axis" => self.axis = Some(parse_vector(key, value)?),
            _ => {
                let (atom, field) = match key.split_once('.') {
                    Some(("a", f)) => (&mut self.atom_a, f),
                    Some(("b", f)) => (&mut self.atom_b, f),
                    _ => return Err(field_err(key, "unknown key")),
                };
                match field {
                    "omega0" => atom.omega0 = Some(parse_f64(key, value)?),
                    "gamma" => atom.gamma = Some(parse_f64(key, value)?),
                    "mass" => atom.mass = Some(parse_f64(key, value)?),
                    "dipoles" => atom.dipoles = Some(parse_dipoles(key, value)?),
                    _ => return Err(field_err(key, "unknown key")),
                }
            }
        }
        Ok(())
    }

    /// Apply the settings of a config file's text.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        let header_only = text.lines().any(|l| l.trim_start().starts_with("#!"));
        let mut seen: Vec<String> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = raw.trim_start();
            let body = if let Some(rest) = trimmed.strip_prefix("#!") {
                rest
            } else if header_only {
                continue;
            } else {
                trimmed
            };
            let body = body.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let at_line = |e: CliError| match e {
                CliError::Config { field, message, .. } => CliError::Config {
                    line: Some(line_no),
                    field,
                    message,
                },
                e => e,
            };
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| at_line(field_err(body, "expected `key = value`")))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return Err(at_line(field_err(key, "set more than once")));
            }
            seen.push(key.to_string());
            self.set(key, value).map_err(at_line)?;
        }
        Ok(())
    }

    /// Checks everything that can be checked before any output is written.
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.r_min > 0.0) {
            return Err(field_err("rmin", "must be positive"));
        }
        if !(self.r_min < self.r_max) {
            return Err(field_err(
                "rmax",
                format!(
                    "rmin ({:e}) must be smaller than rmax ({:e})",
                    self.r_min, self.r_max
                ),
            ));
        }
        if self.r_points < 2 {
            return Err(field_err("rpoints", "need at least two grid points"));
        }
        if let ObservationTime::Seconds(t) = self.t_obs {
            if t < 0.0 {
                return Err(field_err("tobs", "must be >= 0"));
            }
        }
        if self.threads == Some(0) {
            return Err(field_err("threads", "must be at least 1"));
        }
        match self.tier {
            Tier::FullDissimilar if self.detuning_ratio == 0.0 => {
                return Err(field_err(
                    "detuning_ratio",
                    "the full-dissimilar tier needs a nonzero detuning",
                ))
            }
            Tier::Leading | Tier::FullIdentical if self.detuning_ratio != 0.0 => {
                return Err(field_err(
                    "detuning_ratio",
                    "detuned atoms need the full-dissimilar tier",
                ))
            }
            _ => {}
        }
        if self.displacement && self.detuning_ratio != 0.0 {
            return Err(field_err(
                "displacement",
                "displacements are available for identical atoms only",
            ));
        }
        if self.preset == Preset::Custom {
            for (name, atom) in [("a", &self.atom_a), ("b", &self.atom_b)] {
                let missing = [
                    ("omega0", atom.omega0.is_none()),
                    ("gamma", atom.gamma.is_none()),
                    ("mass", atom.mass.is_none()),
                    ("dipoles", atom.dipoles.is_none()),
                ];
                if let Some((f, _)) = missing.iter().find(|m| m.1) {
                    return Err(field_err(
                        &format!("{name}.{f}"),
                        "required by the custom preset",
                    ));
                }
            }
            if self.axis.is_none() {
                return Err(field_err("axis", "required by the custom preset"));
            }
        }
        Ok(())
    }

    /// `#! key = value` lines that reproduce this configuration. The output
    /// path and thread count are left out: neither changes the results.
    pub fn header(&self) -> String {
        let mut h = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(h, "#! {k} = {v}");
        };
        put(
            "preset",
            match self.preset {
                Preset::Hydrogen => "hydrogen",
                Preset::Custom => "custom",
            }
            .into(),
        );
        put("tier", tier_name(self.tier).into());
        put("rmin", format!("{:e}", self.r_min));
        put("rmax", format!("{:e}", self.r_max));
        put("rpoints", self.r_points.to_string());
        put(
            "tobs",
            match self.t_obs {
                ObservationTime::Seconds(t) => format!("{t:e}"),
                ObservationTime::Lifetime => "lifetime".into(),
            },
        );
        put("detuning_ratio", format!("{:e}", self.detuning_ratio));
        put(
            "format",
            match self.format {
                Format::Csv => "csv",
                Format::Json => "json",
            }
            .into(),
        );
        put("convention", convention_name(self.convention).into());
        put("displacement", self.displacement.to_string());
        put("diagnostic", self.diagnostic.to_string());
        put(
            "reading",
            match self.reading {
                AppendixReading::Reconciled => "reconciled",
                AppendixReading::Printed => "printed",
            }
            .into(),
        );
        if self.preset == Preset::Custom {
            for (name, atom) in [("a", &self.atom_a), ("b", &self.atom_b)] {
                if let Some(x) = atom.omega0 {
                    put(&format!("{name}.omega0"), format!("{x:e}"));
                }
                if let Some(x) = atom.gamma {
                    put(&format!("{name}.gamma"), format!("{x:e}"));
                }
                if let Some(x) = atom.mass {
                    put(&format!("{name}.mass"), format!("{x:e}"));
                }
                if let Some(d) = &atom.dipoles {
                    let list: Vec<String> = d.iter().map(|v| vector_text(*v)).collect();
                    put(&format!("{name}.dipoles"), list.join("; "));
                }
            }
            if let Some(axis) = self.axis {
                put("axis", vector_text(axis));
            }
        }
        h
    }

    /// The header as key/value pairs, in header order.
    pub fn header_pairs(&self) -> Vec<(String, String)> {
        self.header()
            .lines()
            .filter_map(|l| l.strip_prefix("#! "))
            .filter_map(|l| l.split_once(" = "))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_file_with_comments() {
        let mut c = ScanConfig::default();
        c.apply_text(
            "# a scan\ntier = full-identical  # trailing\nrpoints = 7\n\ntobs = lifetime\n",
        )
        .unwrap();
        assert_eq!(c.tier, Tier::FullIdentical);
        assert_eq!(c.r_points, 7);
        assert_eq!(c.t_obs, ObservationTime::Lifetime);
    }

    #[test]
    fn header_lines_take_precedence() {
        let mut c = ScanConfig::default();
        c.apply_text("#! rpoints = 9\nrpoints = 3\nR_m,v\n1,2\n")
            .unwrap();
        assert_eq!(c.r_points, 9);
    }

    #[test]
    fn errors_name_line_and_field() {
        let mut c = ScanConfig::default();
        let e = c.apply_text("tier = leading\nrmin = abc\n").unwrap_err();
        match e {
            CliError::Config { line, field, .. } => {
                assert_eq!(line, Some(2));
                assert_eq!(field, "rmin");
            }
            e => panic!("{e}"),
        }
        let e = ScanConfig::default().apply_text("bogus = 1").unwrap_err();
        assert!(e.to_string().contains("bogus"));
        assert!(ScanConfig::default()
            .apply_text("rmin = 1\nrmin = 2")
            .is_err());
        assert!(ScanConfig::default().apply_text("rmin 1").is_err());
    }

    #[test]
    fn validation() {
        let mut c = ScanConfig::default();
        assert!(c.validate().is_ok());
        c.r_min = 3e-7;
        assert!(matches!(c.validate(), Err(CliError::Config { .. })));
        let mut c = ScanConfig::default();
        c.tier = Tier::FullDissimilar;
        assert!(c.validate().is_err());
        c.detuning_ratio = 100.0;
        assert!(c.validate().is_ok());
        c.tier = Tier::Leading;
        assert!(c.validate().is_err());
        let mut c = ScanConfig::default();
        c.preset = Preset::Custom;
        let e = c.validate().unwrap_err();
        assert!(e.to_string().contains("a.omega0"));
    }

    #[test]
    fn header_round_trips() {
        let mut c = ScanConfig::default();
        c.apply_text(
            "preset = custom\na.omega0 = 1.5e16\na.gamma = 6e8\na.mass = 1.67e-27\n\
             a.dipoles = 1e-30 0 1e-30\nb.omega0 = 1.5e16\nb.gamma = 6e8\nb.mass = 1.67e-27\n\
             b.dipoles = 1e-30 0 0; 0 1e-30 0\naxis = 0 0 1\ndisplacement = true\nrmin = 3.3e-8\n",
        )
        .unwrap();
        c.output_path = PathBuf::from("elsewhere.csv");
        c.threads = Some(3);
        let mut again = ScanConfig::default();
        again.apply_text(&c.header()).unwrap();
        again.output_path = c.output_path.clone();
        again.threads = c.threads;
        assert_eq!(again, c);
        assert_eq!(again.header(), c.header());
    }
}
