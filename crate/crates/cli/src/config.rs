//! Command-line flags, the optional JSON config file, and their merge into
//! one validated [`RunConfig`]. Flags take precedence over the file.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fobie_core::lift::{Axis, LiftFault};
use fobie_core::oracle::MultipoleSpec;
use fobie_core::HarmonicIndex;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "fobie", version, about = "Spectral field-only scattering toolkit for the unit sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Per-degree table of s_l, lambda1, lambda2 and the layer spectra.
    Spectrum,
    /// Run the invariant battery; exits 1 if any invariant fails.
    Verify,
    /// Solve a scattering problem with one or both formulations.
    Solve,
    /// Per-wavenumber spectral extremes over a k-grid.
    Sweep,
}

#[derive(ValueEnum, Deserialize, Debug, Clone, Copy, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(ValueEnum, Deserialize, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FormulationSel {
    #[value(name = "1")]
    #[serde(rename = "1")]
    One,
    #[value(name = "2")]
    #[serde(rename = "2")]
    Two,
    #[default]
    #[serde(rename = "both")]
    Both,
}

#[derive(ValueEnum, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum IncidentKind {
    Planewave,
    Multipole,
}

#[derive(ValueEnum, Deserialize, Debug, Clone, Copy, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {s:?}"));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(parts) {
        *slot = p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(v)
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// Wavenumber.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Smallest wavenumber of a sweep.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k_min: Option<f64>,
    /// Largest wavenumber of a sweep.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k_max: Option<f64>,
    /// Number of sweep points.
    #[arg(long, global = true)]
    pub k_count: Option<usize>,
    /// Spacing of sweep points.
    #[arg(long, global = true, value_enum)]
    pub k_spacing: Option<Spacing>,
    /// Coupling parameter; defaults to max(1, k).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Truncation degree.
    #[arg(long, global = true)]
    pub lmax: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub formulation: Option<FormulationSel>,
    #[arg(long, global = true, value_enum)]
    pub incident: Option<IncidentKind>,
    /// Plane-wave direction as x,y,z.
    #[arg(long, global = true, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub dir: Option<[f64; 3]>,
    /// Plane-wave polarization as x,y,z.
    #[arg(long, global = true, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub pol: Option<[f64; 3]>,
    /// JSON file with {"terms": [{"l", "m", "a": [re, im], "b": [re, im]}, ...]}.
    #[arg(long, global = true)]
    pub multipole_file: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Reduced verification battery.
    #[arg(long, global = true)]
    pub quick: bool,
    /// Pass/fail tolerance for solve diagnostics.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// JSON config file with the same keys as the flags (snake_case).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Test hook for `verify`: scale the lift of `Y_l^m` along one axis,
    /// given as `axis,l,m,factor` with axis 1, 2 or 3.
    #[arg(long, global = true, hide = true, value_parser = parse_fault, allow_hyphen_values = true)]
    pub inject_lift_fault: Option<LiftFault>,
}

fn parse_fault(s: &str) -> Result<LiftFault, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [axis, l, m, factor] = parts.as_slice() else {
        return Err(format!("expected axis,l,m,factor, got {s:?}"));
    };
    let err = |e: &dyn std::fmt::Display| e.to_string();
    let axis = Axis::from_index(axis.parse().map_err(|e| err(&e))?).map_err(|e| err(&e))?;
    let source = HarmonicIndex::new(l.parse().map_err(|e| err(&e))?, m.parse().map_err(|e| err(&e))?).map_err(|e| err(&e))?;
    Ok(LiftFault { axis, source, factor: factor.parse().map_err(|e| err(&e))? })
}

/// Contents of a `--config` file.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub k: Option<f64>,
    pub k_min: Option<f64>,
    pub k_max: Option<f64>,
    pub k_count: Option<usize>,
    pub k_spacing: Option<Spacing>,
    pub eta: Option<f64>,
    pub lmax: Option<usize>,
    pub formulation: Option<FormulationSel>,
    pub incident: Option<IncidentKind>,
    pub dir: Option<[f64; 3]>,
    pub pol: Option<[f64; 3]>,
    pub multipole_file: Option<PathBuf>,
    pub multipole: Option<MultipoleSpec>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub quick: Option<bool>,
    pub tol: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// The merged configuration. Numeric invariants are checked here; the
/// per-command requirements are checked by the commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub k: Option<f64>,
    pub k_min: Option<f64>,
    pub k_max: Option<f64>,
    pub k_count: Option<usize>,
    pub k_spacing: Spacing,
    pub eta: Option<f64>,
    pub lmax: Option<usize>,
    pub formulation: FormulationSel,
    pub incident: Option<IncidentKind>,
    pub dir: Option<[f64; 3]>,
    pub pol: Option<[f64; 3]>,
    pub multipole: Option<MultipoleSpec>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub quick: bool,
    pub tol: Option<f64>,
    pub lift_fault: Option<LiftFault>,
}

fn positive(name: &str, v: Option<f64>) -> Result<Option<f64>, CliError> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => {
            Err(CliError::Usage(format!("{name} must be positive and finite ({name} > 0), got {x}")))
        }
        other => Ok(other),
    }
}

fn load_multipole(path: &Path) -> Result<MultipoleSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read multipole file {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid multipole file {}: {e}", path.display())))
}

impl RunConfig {
    pub fn merge(flags: Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let multipole = match flags.multipole_file.as_ref().or(file.multipole_file.as_ref()) {
            Some(p) if flags.multipole_file.is_some() || file.multipole.is_none() => Some(load_multipole(p)?),
            _ => file.multipole,
        };
        let cfg = RunConfig {
            k: positive("k", flags.k.or(file.k))?,
            k_min: positive("k-min", flags.k_min.or(file.k_min))?,
            k_max: positive("k-max", flags.k_max.or(file.k_max))?,
            k_count: flags.k_count.or(file.k_count),
            k_spacing: flags.k_spacing.or(file.k_spacing).unwrap_or_default(),
            eta: positive("eta", flags.eta.or(file.eta))?,
            lmax: flags.lmax.or(file.lmax),
            formulation: flags.formulation.or(file.formulation).unwrap_or_default(),
            incident: flags.incident.or(file.incident),
            dir: flags.dir.or(file.dir),
            pol: flags.pol.or(file.pol),
            multipole,
            out: flags.out.or(file.out),
            format: flags.format.or(file.format).unwrap_or_default(),
            quick: flags.quick || file.quick.unwrap_or(false),
            tol: positive("tol", flags.tol.or(file.tol))?,
            lift_fault: flags.inject_lift_fault,
        };
        if cfg.lmax == Some(0) {
            return Err(CliError::Usage("lmax must be at least 1 (lmax >= 1)".into()));
        }
        Ok(cfg)
    }

    /// The wavenumber grid of a sweep: an explicit range, or the single
    /// point `--k`.
    pub fn k_grid(&self) -> Result<Vec<f64>, CliError> {
        match (self.k_min, self.k_max, self.k_count) {
            (_, _, Some(0)) => Err(CliError::Usage("empty k-grid (k-count = 0)".into())),
            (Some(a), Some(b), n) => {
                if a > b {
                    return Err(CliError::Usage(format!("k-min {a} exceeds k-max {b}")));
                }
                let n = n.unwrap_or(if a == b { 1 } else { 2 });
                if n == 1 {
                    return Ok(vec![a]);
                }
                Ok(match self.k_spacing {
                    Spacing::Log => fobie_core::verify::log_grid(a, b, n)?,
                    Spacing::Linear => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
                })
            }
            (None, None, _) => match self.k {
                Some(k) => Ok(vec![k]),
                None => Err(CliError::Usage("empty k-grid: give --k-min/--k-max/--k-count or --k".into())),
            },
            _ => Err(CliError::Usage("k-min and k-max must be given together".into())),
        }
    }

    pub fn require_k(&self) -> Result<f64, CliError> {
        self.k.ok_or_else(|| CliError::Usage("missing --k".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("fobie").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn vec3_parser() {
        assert_eq!(parse_vec3("0, 0,1").unwrap(), [0.0, 0.0, 1.0]);
        assert!(parse_vec3("1,2").is_err());
        assert!(parse_vec3("1,a,2").is_err());
    }

    #[test]
    fn negative_k_is_a_usage_error_naming_the_invariant() {
        let cli = parse(&["spectrum", "--k", "-1"]);
        let err = RunConfig::merge(cli.flags).unwrap_err();
        assert!(err.to_string().contains("k > 0"), "{err}");
    }

    #[test]
    fn flags_win_over_file() {
        let dir = std::env::temp_dir().join(format!("fobie-config-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.json");
        std::fs::write(&path, r#"{"k": 2.0, "lmax": 7, "format": "json", "formulation": "2"}"#).unwrap();
        let cli = parse(&["spectrum", "--k", "3", "--config", path.to_str().unwrap()]);
        let cfg = RunConfig::merge(cli.flags).unwrap();
        assert_eq!(cfg.k, Some(3.0));
        assert_eq!(cfg.lmax, Some(7));
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.formulation, FormulationSel::Two);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn grids() {
        let mut cfg = RunConfig::merge(Flags { k: Some(1.5), ..Default::default() }).unwrap();
        assert_eq!(cfg.k_grid().unwrap(), vec![1.5]);
        cfg.k_min = Some(1.0);
        cfg.k_max = Some(3.0);
        cfg.k_count = Some(3);
        cfg.k_spacing = Spacing::Linear;
        assert_eq!(cfg.k_grid().unwrap(), vec![1.0, 2.0, 3.0]);
        cfg.k_count = Some(0);
        assert!(cfg.k_grid().is_err());
    }
}
