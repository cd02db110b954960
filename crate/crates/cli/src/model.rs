//! Resolves the `[run] scenario` / `[params]` or `[model]` sections into
//! something the commands can run.

use hybrid_core::gaussian::{build_cavity_atom_mirror_model, CavityAtomMirror, MembraneAtomParams};
use hybrid_core::scenarios::{builtin, Platform, Scenario};
use hybrid_core::GaussianModel;
use serde_json::{json, Value as Json};

use crate::config::{Config, Section};
use crate::error::CliError;

const RAD_S: &str = "rad/s";

/// Where the physics of a run comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Scenario(Scenario),
    JaynesCummings { lambda: f64, omega_m: f64, detuning: f64 },
    SpinResonator { lambda: f64, omega_l: f64, omega_m: f64, rwa: bool },
    MembraneAtom(MembraneAtomParams),
    CavityAtomMirror(CavityAtomMirror),
}

type Schema = &'static [(&'static str, &'static str, Option<f64>)];

const JC_KEYS: Schema = &[("lambda", RAD_S, None), ("omega_m", RAD_S, None), ("detuning", RAD_S, Some(0.0))];
const SPIN_KEYS: Schema = &[("lambda", RAD_S, None), ("omega_l", RAD_S, None), ("omega_m", RAD_S, None)];
const MEMBRANE_KEYS: Schema = &[
    ("omega_m", RAD_S, None),
    ("omega_at", RAD_S, None),
    ("lambda_n", RAD_S, None),
    ("r", "1", None),
    ("gamma_m", RAD_S, None),
    ("gamma_cool", RAD_S, None),
    ("n_th", "1", Some(0.0)),
];
const MIRROR_KEYS: Schema = &[
    ("omega_m", RAD_S, None),
    ("gamma_m", RAD_S, None),
    ("g", RAD_S, None),
    ("kappa", RAD_S, None),
    ("delta_f", RAD_S, Some(0.0)),
    ("g_a", RAD_S, None),
    ("gamma_a", RAD_S, None),
    ("delta_a", RAD_S, None),
    ("n_th", "1", Some(0.0)),
];

/// Reads the keys of `schema` (plus the `kind` key and any `extra` flags).
fn read(section: &Section, schema: Schema, extra: &[&str]) -> Result<Vec<f64>, CliError> {
    let mut allowed: Vec<&str> = schema.iter().map(|(k, _, _)| *k).collect();
    allowed.push("kind");
    allowed.extend_from_slice(extra);
    section.only_keys(&allowed)?;
    schema
        .iter()
        .map(|&(key, unit, default)| match default {
            Some(d) => section.f64_or(key, unit, d),
            None => section.f64(key, unit),
        })
        .collect()
}

impl Source {
    pub fn from_config(cfg: &Config) -> Result<Self, CliError> {
        let scenario = match cfg.section("run").and_then(|r| r.entry("scenario")) {
            Some(e) if e.raw.is_empty() => return Err(CliError::config(e.line, "`scenario` is empty")),
            Some(e) => Some(e),
            None => None,
        };
        match (scenario, cfg.section("model")) {
            (Some(e), Some(m)) => Err(CliError::config(
                m.line,
                format!("both `scenario` (line {}) and [model] given; choose one", e.line),
            )),
            (None, None) => Err(CliError::usage("no scenario: set `scenario` in [run] or add a [model] section")),
            (Some(e), None) => {
                let mut s = builtin(&e.raw).map_err(|err| CliError::config(e.line, err.to_string()))?;
                if let Some(p) = cfg.section("params") {
                    apply_overrides(&mut s, p)?;
                }
                Ok(Source::Scenario(s))
            }
            (None, Some(m)) => {
                if let Some(p) = cfg.section("params") {
                    return Err(CliError::config(p.line, "[params] overrides need a scenario; put values in [model]"));
                }
                Self::inline(m)
            }
        }
    }

    fn inline(m: &Section) -> Result<Self, CliError> {
        let kind = m.str("kind")?;
        Ok(match kind {
            "jaynes_cummings" => {
                let v = read(m, JC_KEYS, &[])?;
                Source::JaynesCummings { lambda: v[0], omega_m: v[1], detuning: v[2] }
            }
            "spin_resonator" => {
                let v = read(m, SPIN_KEYS, &["rwa"])?;
                Source::SpinResonator { lambda: v[0], omega_l: v[1], omega_m: v[2], rwa: m.bool_or("rwa", false)? }
            }
            "membrane_atom" => {
                let v = read(m, MEMBRANE_KEYS, &["cascade_noise"])?;
                let p = MembraneAtomParams {
                    omega_m: v[0],
                    omega_at: v[1],
                    lambda_n: v[2],
                    r: v[3],
                    gamma_m: v[4],
                    gamma_cool: v[5],
                    n_th: v[6],
                    cascade_noise: m.bool_or("cascade_noise", true)?,
                };
                p.validate().map_err(CliError::from)?;
                Source::MembraneAtom(p)
            }
            "cavity_atom_mirror" => {
                let v = read(m, MIRROR_KEYS, &[])?;
                Source::CavityAtomMirror(CavityAtomMirror {
                    omega_m: v[0],
                    gamma_m: v[1],
                    g: v[2],
                    kappa: v[3],
                    delta_f: v[4],
                    g_a: v[5],
                    gamma_a: v[6],
                    delta_a: v[7],
                    n_th: v[8],
                })
            }
            other => {
                let line = m.entry("kind").map_or(m.line, |e| e.line);
                return Err(CliError::config(
                    line,
                    format!(
                        "unknown model kind `{other}`; valid kinds: jaynes_cummings, spin_resonator, membrane_atom, cavity_atom_mirror"
                    ),
                ));
            }
        })
    }

    pub fn label(&self) -> String {
        match self {
            Source::Scenario(s) => format!("scenario {}", s.name()),
            Source::JaynesCummings { .. } => "model jaynes_cummings".into(),
            Source::SpinResonator { .. } => "model spin_resonator".into(),
            Source::MembraneAtom(_) => "model membrane_atom".into(),
            Source::CavityAtomMirror(_) => "model cavity_atom_mirror".into(),
        }
    }

    pub fn scenario(&self) -> Option<&Scenario> {
        match self {
            Source::Scenario(s) => Some(s),
            _ => None,
        }
    }

    /// Membrane–atom parameters, from either a scenario or an inline model.
    pub fn membrane_atom(&self) -> Option<Result<MembraneAtomParams, CliError>> {
        match self {
            Source::MembraneAtom(p) => Some(Ok(*p)),
            Source::Scenario(s) if !s.platform().is_qubit() && s.platform() != Platform::CavityAtomMirror => {
                Some(s.membrane_atom_params().map_err(CliError::from))
            }
            _ => None,
        }
    }

    pub fn gaussian(&self) -> Result<GaussianModel, CliError> {
        match self {
            Source::Scenario(s) if s.platform().is_qubit() => Err(CliError::Precondition(format!(
                "{} is a qubit platform and has no Gaussian model",
                s.name()
            ))),
            Source::Scenario(s) => s.gaussian_model().map_err(CliError::from),
            Source::MembraneAtom(p) => p.gaussian().map_err(CliError::from),
            Source::CavityAtomMirror(p) => build_cavity_atom_mirror_model(p).map_err(CliError::from),
            Source::JaynesCummings { .. } | Source::SpinResonator { .. } => {
                Err(CliError::Precondition(format!("{} has no Gaussian model", self.label())))
            }
        }
    }

    /// All resolved inputs, for the run metadata.
    pub fn resolved(&self) -> Json {
        match self {
            Source::Scenario(s) => json!({ "scenario": s.name(), "params": s.params(), "derived": s.derived() }),
            Source::JaynesCummings { lambda, omega_m, detuning } => {
                json!({ "lambda": lambda, "omega_m": omega_m, "detuning": detuning })
            }
            Source::SpinResonator { lambda, omega_l, omega_m, rwa } => {
                json!({ "lambda": lambda, "omega_l": omega_l, "omega_m": omega_m, "rwa": rwa })
            }
            Source::MembraneAtom(p) => json!({
                "omega_m": p.omega_m, "omega_at": p.omega_at, "lambda_n": p.lambda_n, "r": p.r,
                "gamma_m": p.gamma_m, "gamma_cool": p.gamma_cool, "n_th": p.n_th, "cascade_noise": p.cascade_noise,
            }),
            Source::CavityAtomMirror(p) => json!({
                "omega_m": p.omega_m, "gamma_m": p.gamma_m, "g": p.g, "kappa": p.kappa, "delta_f": p.delta_f,
                "g_a": p.g_a, "gamma_a": p.gamma_a, "delta_a": p.delta_a, "n_th": p.n_th,
            }),
        }
    }
}

/// Applies `[params]` to a scenario, checking units against each parameter.
pub fn apply_overrides(s: &mut Scenario, section: &Section) -> Result<(), CliError> {
    for e in &section.entries {
        let unit = s
            .params()
            .iter()
            .find(|q| q.name == e.key)
            .map(|q| q.unit)
            .ok_or_else(|| CliError::config(e.line, format!("`{}` is not a parameter of {}", e.key, s.name())))?;
        let unit = if unit == "bool" { "1" } else { unit };
        let v = e.number(unit)?;
        s.set(&e.key, v).map_err(|err| match CliError::from(err) {
            CliError::Precondition(m) => CliError::Precondition(format!("line {}: {m}", e.line)),
            other => other,
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn source(text: &str) -> Result<Source, CliError> {
        Source::from_config(&Config::parse(text).unwrap())
    }

    #[test]
    fn scenario_with_overrides() {
        let s = source("[run]\nscenario = ion_direct\n[params]\nepsilon = 0.5\n").unwrap();
        let sc = s.scenario().unwrap();
        assert_eq!(sc.param("epsilon").unwrap(), 0.5);
        assert_eq!(s.label(), "scenario ion_direct");
    }

    #[test]
    fn override_units_are_checked() {
        let err = source("[run]\nscenario = ion_direct\n[params]\nm_eff = 2 s\n").unwrap_err();
        assert_eq!(err.line(), Some(4));
        let ok = source("[run]\nscenario = ion_direct\n[params]\nm_eff = 2 pg\nomega_m = 2pi*70 MHz\n").unwrap();
        assert!((ok.scenario().unwrap().param("m_eff").unwrap() - 2e-15).abs() < 1e-27);
    }

    #[test]
    fn bad_sources() {
        assert_eq!(source("[run]\nscenario = nope\n").unwrap_err().exit_code(), 2);
        assert_eq!(source("[run]\nscenario =\n").unwrap_err().exit_code(), 2);
        assert_eq!(source("[run]\ncommand = evolve\n").unwrap_err().exit_code(), 2);
        assert_eq!(source("[run]\nscenario = ion_direct\n[params]\nfoo = 1\n").unwrap_err().line(), Some(4));
        assert_eq!(source("[run]\nscenario = ion_direct\n[params]\nm_eff = -1\n").unwrap_err().exit_code(), 3);
        assert_eq!(source("[model]\nkind = warp\n").unwrap_err().line(), Some(2));
        assert!(source("[run]\nscenario = ion_direct\n[model]\nkind = jaynes_cummings\n").is_err());
    }

    #[test]
    fn inline_models() {
        let s = source("[model]\nkind = jaynes_cummings\nlambda = 0.05\nomega_m = 1\n").unwrap();
        assert_eq!(s, Source::JaynesCummings { lambda: 0.05, omega_m: 1.0, detuning: 0.0 });
        let m = source(
            "[model]\nkind = membrane_atom\nomega_m = 1\nomega_at = 1\nlambda_n = 0.01\nr = 0.3\ngamma_m = 0.01\ngamma_cool = 0.2\n",
        )
        .unwrap();
        assert!(m.gaussian().unwrap().is_stable());
        assert_eq!(source("[model]\nkind = membrane_atom\nomega_m = 1\n").unwrap_err().exit_code(), 2);
        let e = source("[model]\nkind = jaynes_cummings\nlambda = 1\nomega_m = 1\nspeed = 3\n").unwrap_err();
        assert_eq!(e.line(), Some(5));
    }

    #[test]
    fn qubit_scenarios_have_no_gaussian_model() {
        let s = source("[run]\nscenario = cpb_resonator\n").unwrap();
        assert_eq!(s.gaussian().unwrap_err().exit_code(), 3);
        assert!(s.membrane_atom().is_none());
    }
}
