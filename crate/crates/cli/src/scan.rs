//! Separation scans and reference-shape emission.

use std::fs;
use std::path::{Path, PathBuf};

use ncforce::force::{force_sample, force_terms, ForceTerm};
use ncforce::kinematics::{check_grid, displacement_with_convention, shape_a, shape_b};
use ncforce::model::{hydrogen_preset, Atom};
use ncforce::{AtomId, Error, FormulaTier, TwoAtomSystem, Vector3};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{Format, ObservationTime, Preset, ScanConfig, Tier};
use crate::error::CliError;

const FORCE_COLUMNS: [&str; 13] = [
    "F_A_x",
    "F_A_y",
    "F_A_z",
    "F_B_x",
    "F_B_y",
    "F_B_z",
    "F_net_x",
    "F_net_y",
    "F_net_z",
    "F_A_par",
    "F_A_perp_mag",
    "F_B_par",
    "F_B_perp_mag",
];

const DISPLACEMENT_COLUMNS: [&str; 6] = ["S_A_x", "S_A_y", "S_A_z", "S_B_x", "S_B_y", "S_B_z"];

/// Column names of a scan, in output order.
pub fn columns(displacement: bool) -> Vec<&'static str> {
    let mut c = vec!["R_m", "v"];
    c.extend(FORCE_COLUMNS);
    if displacement {
        c.extend(DISPLACEMENT_COLUMNS);
    }
    c.push("status");
    c
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Evenly spaced separations from `r_min` to `r_max` inclusive.
pub fn r_grid(config: &ScanConfig) -> Vec<f64> {
    let n = config.r_points;
    let span = config.r_max - config.r_min;
    (0..n)
        .map(|i| {
            if i + 1 == n {
                config.r_max
            } else {
                config.r_min + span * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// The two-atom system of `config` at separation `r`.
pub fn build_system(config: &ScanConfig, r: f64) -> Result<TwoAtomSystem, CliError> {
    let base = match config.preset {
        Preset::Hydrogen => hydrogen_preset(r)?,
        Preset::Custom => {
            let make = |name: &str, s: &crate::config::AtomSpec| {
                Atom::new(
                    s.omega0.unwrap_or(f64::NAN),
                    s.gamma.unwrap_or(f64::NAN),
                    s.mass.unwrap_or(f64::NAN),
                    s.dipoles.clone().unwrap_or_default(),
                )
                .map_err(|e| CliError::Config {
                    line: None,
                    field: format!("{name}.*"),
                    message: e.to_string(),
                })
            };
            let a = make("a", &config.atom_a)?;
            let b = make("b", &config.atom_b)?;
            let axis =
                config
                    .axis
                    .and_then(Vector3::normalized)
                    .ok_or_else(|| CliError::Config {
                        line: None,
                        field: "axis".into(),
                        message: "must be a nonzero vector".into(),
                    })?;
            TwoAtomSystem::new(a, b, axis.scale(r))?
        }
    };
    if config.detuning_ratio == 0.0 {
        return Ok(base);
    }
    let delta = config.detuning_ratio * base.atom_a().gamma();
    base.with_detuning(delta).map_err(|e| CliError::Config {
        line: None,
        field: "detuning_ratio".into(),
        message: e.to_string(),
    })
}

fn tier_of(t: Tier) -> FormulaTier {
    match t {
        Tier::Leading => FormulaTier::LeadingClosed,
        Tier::FullIdentical => FormulaTier::FullIdentical,
        Tier::FullDissimilar => FormulaTier::FullDissimilar,
    }
}

fn observation_time(config: &ScanConfig, system: &TwoAtomSystem) -> f64 {
    match config.t_obs {
        ObservationTime::Seconds(t) => t,
        ObservationTime::Lifetime => 1.0 / system.atom_a().gamma(),
    }
}

/// Full validation, including checks that need the physical system.
pub fn prepare(config: &ScanConfig) -> Result<(), CliError> {
    config.validate()?;
    let near = build_system(config, config.r_min)?;
    build_system(config, config.r_max)?;
    if config.tier == Tier::Leading && near.v() < ncforce::force::MIN_LEADING_V {
        return Err(CliError::Config {
            line: None,
            field: "rmin".into(),
            message: format!(
                "k0 R = {:e} is below {} where the leading tier does not apply",
                near.v(),
                ncforce::force::MIN_LEADING_V
            ),
        });
    }
    Ok(())
}

struct Row {
    r: f64,
    v: f64,
    values: Option<Vec<f64>>,
    status: String,
    terms: Vec<(AtomId, ForceTerm)>,
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::NonConvergence { .. } => "nonconvergence",
        Error::Singular => "singular",
        Error::InvalidInput(_) => "invalid-input",
        Error::WrongTier(_) => "wrong-tier",
        Error::NotFound(_) => "not-found",
    }
}

fn compute_row(config: &ScanConfig, r: f64) -> Result<Row, CliError> {
    let sys = build_system(config, r)?;
    let v = sys.v();
    let t = observation_time(config, &sys);
    let tier = tier_of(config.tier);
    let eval = || -> Result<(Vec<f64>, Vec<(AtomId, ForceTerm)>), Error> {
        let s = force_sample(&sys, t, tier, config.reading)?;
        let mut vals = Vec::with_capacity(19);
        for f in [s.f_a, s.f_b, s.f_net] {
            vals.extend(f.to_array());
        }
        vals.extend([s.f_a_par, s.f_a_perp.norm(), s.f_b_par, s.f_b_perp.norm()]);
        if config.displacement {
            for which in [AtomId::A, AtomId::B] {
                vals.extend(
                    displacement_with_convention(&sys, which, config.convention)?.to_array(),
                );
            }
        }
        let mut terms = Vec::new();
        if config.diagnostic {
            for which in [AtomId::A, AtomId::B] {
                for term in force_terms(&sys, t, which, tier, config.reading)? {
                    terms.push((which, term));
                }
            }
        }
        Ok((vals, terms))
    };
    Ok(match eval() {
        Ok((vals, terms)) => Row {
            r,
            v,
            values: Some(vals),
            status: "ok".into(),
            terms,
        },
        Err(e) => Row {
            r,
            v,
            values: None,
            status: status_of(&e).into(),
            terms: Vec::new(),
        },
    })
}

/// Rendered scan outputs, before anything touches the file system.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanOutput {
    pub main: String,
    /// Per-term breakdown, present in diagnostic mode.
    pub terms: Option<String>,
    pub rows: usize,
    pub failed_rows: usize,
}

/// Computes a scan and renders it in the configured format.
pub fn render_scan(config: &ScanConfig) -> Result<ScanOutput, CliError> {
    prepare(config)?;
    let grid = r_grid(config);
    let compute = || -> Result<Vec<Row>, CliError> {
        grid.par_iter().map(|&r| compute_row(config, r)).collect()
    };
    let rows = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config {
                line: None,
                field: "threads".into(),
                message: e.to_string(),
            })?
            .install(compute)?,
        None => compute()?,
    };

    let header = config.header();
    let cols = columns(config.displacement);
    let width = cols.len() - 3;
    let failed_rows = rows.iter().filter(|r| r.values.is_none()).count();

    let main = match config.format {
        Format::Csv => {
            let mut out = header.clone();
            out.push_str(&cols.join(","));
            out.push('\n');
            for row in &rows {
                let mut cells = vec![num(row.r), num(row.v)];
                match &row.values {
                    Some(v) => cells.extend(v.iter().map(|x| num(*x))),
                    None => cells.extend(std::iter::repeat_n(String::new(), width)),
                }
                cells.push(row.status.clone());
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let config_map: Map<String, Value> = config
                .header_pairs()
                .into_iter()
                .map(|(k, v)| (k, Value::String(v)))
                .collect();
            let data: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let mut cells = vec![json!(row.r), json!(row.v)];
                    match &row.values {
                        Some(v) => cells.extend(v.iter().map(|x| json!(x))),
                        None => cells.extend(std::iter::repeat_n(Value::Null, width)),
                    }
                    Value::Array(cells)
                })
                .collect();
            let status: Vec<&str> = rows.iter().map(|r| r.status.as_str()).collect();
            let doc = json!({
                "config": config_map,
                "columns": &cols[..cols.len() - 1],
                "rows": data,
                "status": status,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("scan output serializes");
            s.push('\n');
            s
        }
    };

    let terms = config.diagnostic.then(|| {
        let mut out = header.clone();
        out.push_str("R_m,v,atom,term,F_x,F_y,F_z\n");
        for row in &rows {
            for (which, term) in &row.terms {
                let atom = match which {
                    AtomId::A => "A",
                    AtomId::B => "B",
                };
                let f = term.force;
                out.push_str(&format!(
                    "{},{},{atom},{},{},{},{}\n",
                    num(row.r),
                    num(row.v),
                    term.label,
                    num(f.x),
                    num(f.y),
                    num(f.z)
                ));
            }
        }
        out
    });

    Ok(ScanOutput {
        main,
        terms,
        rows: rows.len(),
        failed_rows,
    })
}

/// Where the diagnostic breakdown of a scan written to `out` goes.
pub fn terms_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scan".into());
    out.with_file_name(format!("{stem}.terms.csv"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub rows: usize,
    pub failed_rows: usize,
    pub output: PathBuf,
    pub terms_output: Option<PathBuf>,
}

impl ScanReport {
    /// 0 when every row succeeded, 2 when some rows failed numerically.
    pub fn exit_code(&self) -> i32 {
        if self.failed_rows == 0 {
            0
        } else {
            2
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Runs a scan and writes its output file(s). Nothing is written when the
/// configuration is invalid. Rows that fail numerically are written with
/// empty fields and a status, and counted in the report.
pub fn run_scan(config: &ScanConfig) -> Result<ScanReport, CliError> {
    let out = render_scan(config)?;
    write(&config.output_path, &out.main)?;
    let terms_output = match &out.terms {
        Some(text) => {
            let p = terms_path(&config.output_path);
            write(&p, text)?;
            Some(p)
        }
        None => None,
    };
    Ok(ScanReport {
        rows: out.rows,
        failed_rows: out.failed_rows,
        output: config.output_path.clone(),
        terms_output,
    })
}

/// `v, f_A, f_B` as CSV text.
pub fn reference_shapes_csv(v_grid: &[f64]) -> Result<String, CliError> {
    check_grid(v_grid).map_err(|e| CliError::Config {
        line: None,
        field: "grid".into(),
        message: e.to_string(),
    })?;
    let mut out = String::from("v,f_A,f_B\n");
    for &v in v_grid {
        out.push_str(&format!(
            "{},{},{}\n",
            num(v),
            num(shape_a(v)),
            num(shape_b(v))
        ));
    }
    Ok(out)
}

/// Writes the displacement shape functions over `v_grid` to `path`.
pub fn emit_reference_shapes(v_grid: &[f64], path: &Path) -> Result<(), CliError> {
    let text = reference_shapes_csv(v_grid)?;
    write(path, &text)
}
