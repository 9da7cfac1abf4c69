//! Strictly validated JSON run configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use stakit::fields::{Grid, LatticeSpec, MultivectorField};
use stakit::{Error, Multivector, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Invert,
    Identities,
    Hertz,
    Maxwell,
    Mde1,
    Mde2,
    Sw,
    WeylGauge,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Invert,
        Command::Identities,
        Command::Hertz,
        Command::Maxwell,
        Command::Mde1,
        Command::Mde2,
        Command::Sw,
        Command::WeylGauge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Invert => "invert",
            Command::Identities => "identities",
            Command::Hertz => "hertz",
            Command::Maxwell => "maxwell",
            Command::Mde1 => "mde1",
            Command::Mde2 => "mde2",
            Command::Sw => "sw",
            Command::WeylGauge => "weyl-gauge",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }

    /// (required inputs, optional inputs)
    pub fn inputs(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Command::Invert => (&["F"], &[]),
            Command::Identities => (&[], &[]),
            Command::Hertz => (&["Pi"], &[]),
            Command::Maxwell => (&["F"], &["Je", "Jm"]),
            Command::Mde1 => (&["psi"], &["Jcal"]),
            Command::Mde2 => (&["G", "Pi", "P"], &["Je"]),
            Command::Sw => (&["psi"], &["A", "F"]),
            Command::WeylGauge => (&["psi", "theta"], &["B"]),
        }
    }

    /// (required params, optional params), tolerances aside.
    pub fn params(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Command::Invert => (&[], &["nu", "phi"]),
            Command::Identities => (&[], &["n"]),
            Command::Hertz | Command::Maxwell => (&[], &["h", "levels"]),
            Command::Mde1 => (&[], &["h", "levels", "lambda", "beta0"]),
            Command::Mde2 => (&["m"], &["h", "levels"]),
            Command::Sw => (&["lambda"], &["h", "levels", "ansatz"]),
            Command::WeylGauge => (&["g"], &["h", "levels"]),
        }
    }

    pub fn needs_lattice(self) -> bool {
        !matches!(self, Command::Invert | Command::Identities)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A field given as an expression or as lattice samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldConfig {
    Expr { src: String },
    Lattice { spec: LatticeSpec, values: Vec<Multivector> },
}

impl FieldConfig {
    pub fn build(&self) -> Result<MultivectorField> {
        match self {
            FieldConfig::Expr { src } => MultivectorField::parse(src),
            FieldConfig::Lattice { spec, values } => {
                spec.validate()?;
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidLattice("lattice values must be finite".into()));
                }
                Ok(MultivectorField::from_grid(Grid::from_values(*spec, values.clone())?))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub inputs: BTreeMap<String, FieldConfig>,
    #[serde(default)]
    pub lattice: Option<LatticeSpec>,
    /// Numeric knobs; `tol` is the default tolerance and `tol:<residual>`
    /// overrides it for one residual.
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: Option<String>,
    /// Per-point residual trace.
    #[serde(default)]
    pub csv: Option<String>,
}

impl RunConfig {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }

    pub fn param_or(&self, name: &str, default: f64) -> f64 {
        self.param(name).unwrap_or(default)
    }

    /// Tolerance for a residual: `tol:<name>` first, then `tol` unless the
    /// residual is informational.
    pub fn tolerance(&self, residual: &str, informational: bool) -> Option<f64> {
        self.param(&format!("tol:{residual}")).or_else(|| if informational { None } else { self.param("tol") })
    }

    pub fn validate(&self) -> Result<()> {
        let cmd = self.command;
        let (req_in, opt_in) = cmd.inputs();
        for name in req_in {
            if !self.inputs.contains_key(*name) {
                return Err(Error::Config(format!("inputs.{name}: required by `{cmd}`")));
            }
        }
        for name in self.inputs.keys() {
            if !req_in.contains(&name.as_str()) && !opt_in.contains(&name.as_str()) {
                return Err(Error::Config(format!("inputs.{name}: not an input of `{cmd}`")));
            }
        }
        let (req_p, opt_p) = cmd.params();
        for name in req_p {
            if !self.params.contains_key(*name) {
                return Err(Error::Config(format!("params.{name}: required by `{cmd}`")));
            }
        }
        for (name, value) in &self.params {
            if !value.is_finite() {
                return Err(Error::Config(format!("params.{name}: must be finite")));
            }
            if name == "tol" || name.starts_with("tol:") {
                if *value <= 0.0 {
                    return Err(Error::Config(format!("params.{name}: tolerances must be positive")));
                }
                continue;
            }
            if !req_p.contains(&name.as_str()) && !opt_p.contains(&name.as_str()) {
                return Err(Error::Config(format!("params.{name}: not a parameter of `{cmd}`")));
            }
        }
        for (name, positive) in [("h", true), ("m", true), ("levels", true), ("n", true)] {
            if let Some(v) = self.param(name) {
                if positive && v <= 0.0 {
                    return Err(Error::Config(format!("params.{name}: must be positive")));
                }
            }
        }
        for name in ["levels", "n"] {
            if let Some(v) = self.param(name) {
                if v.fract() != 0.0 || v > 1e7 {
                    return Err(Error::Config(format!("params.{name}: must be a whole number")));
                }
            }
        }
        if let Some(l) = &self.lattice {
            l.validate().map_err(|e| Error::Config(format!("lattice: {e}")))?;
        }
        let sampled = self.inputs.values().any(|f| matches!(f, FieldConfig::Lattice { .. }));
        if cmd.needs_lattice() && self.lattice.is_none() && !sampled {
            return Err(Error::Config(format!("lattice: required by `{cmd}` for expression inputs")));
        }
        Ok(())
    }

    /// Lattice with the `h` override applied.
    pub fn lattice_spec(&self) -> Result<Option<LatticeSpec>> {
        match (self.lattice, self.param("h")) {
            (Some(l), Some(h)) => {
                let l = l.with_spacing(h);
                l.validate()?;
                Ok(Some(l))
            }
            (l, _) => Ok(l),
        }
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_invert() {
        let cfg = parse_config(r#"{"command":"invert","inputs":{"F":{"kind":"expr","src":"g21"}},"params":{"nu":0,"phi":0}}"#)
            .unwrap();
        assert_eq!(cfg.command, Command::Invert);
    }

    #[test]
    fn missing_command_is_named() {
        let err = parse_config(r#"{"inputs":{}}"#).unwrap_err().to_string();
        assert!(err.contains("command"), "{err}");
    }

    #[test]
    fn negative_spacing() {
        let err = parse_config(
            r#"{"command":"hertz","inputs":{"Pi":{"kind":"expr","src":"g12"}},
                "lattice":{"origin":[0,0,0,0],"spacing":-0.1,"dims":[5,5,5,5]}}"#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("spacing"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(parse_config(r#"{"command":"identities","extra":1}"#).is_err());
        assert!(parse_config(r#"{"command":"identities","params":{"bogus":1}}"#).is_err());
        assert!(parse_config(r#"{"command":"invert","inputs":{"F":{"kind":"expr","src":"g21","x":1}}}"#).is_err());
        assert!(parse_config(r#"{"command":"invert","inputs":{"F":{"kind":"expr","src":"g21"},"G":{"kind":"expr","src":"1"}}}"#).is_err());
    }

    #[test]
    fn tolerances() {
        let cfg = parse_config(r#"{"command":"identities","params":{"tol":1e-10,"tol:boomerang":1e-9}}"#).unwrap();
        assert_eq!(cfg.tolerance("boomerang", false), Some(1e-9));
        assert_eq!(cfg.tolerance("fierz_j_squared", false), Some(1e-10));
        assert_eq!(cfg.tolerance("info", true), None);
        assert!(parse_config(r#"{"command":"identities","params":{"tol":0}}"#).is_err());
    }

    #[test]
    fn lattice_field_round_trip() {
        let spec = LatticeSpec::new([0.0; 4], 1.0, [5; 4]).unwrap();
        let values = vec![Multivector::ONE; spec.len()];
        let fc = FieldConfig::Lattice { spec, values };
        let text = serde_json::to_string(&fc).unwrap();
        let back: FieldConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, fc);
        assert!(back.build().is_ok());
    }
}
