use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dominating::DominatingConfig;
use crate::engine::{Algorithm, Annealer, BoxSet, EngineConfig, GridSet, ParameterSet, TauSchedule};
use crate::error::{ConfigError, Result};
use crate::models::ModelSpec;
use crate::with_model;

pub const DEFAULT_ETA: f64 = 0.01;
pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_N_REPS: usize = 10_000;
pub const DEFAULT_REPLICATIONS: usize = 100;

/// An experiment file. After [`ExperimentConfig::load`] every optional
/// entry is filled in, and serialising it gives the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: String,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_params: Option<toml::Table>,
    pub set: SetSection,
    pub engine: EngineSection,
    pub dominating: DominatingSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    Box,
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSection {
    #[serde(default = "default_kind")]
    pub kind: SetKind,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineSection {
    #[serde(default = "default_eta")]
    pub eta: f64,
    pub c: f64,
    pub d: f64,
    pub k_star: u64,
    #[serde(default = "default_algorithm")]
    pub algorithm: Algorithm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DominatingSection {
    pub delta: f64,
    #[serde(default = "default_sigma")]
    pub sigma: u32,
    pub kappa: f64,
    /// Defaults to the model's increment bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_n_reps")]
    pub n_reps: usize,
    /// Start of `W`; defaults to `f(Y_0)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w0: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Every upper bound of the set.
    Upper,
    /// Every lower bound of the set.
    Lower,
    /// Moves the set so each lower bound equals the value, keeping widths.
    Offset,
    Delta,
    KStar,
    C,
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParameter::Upper => "upper",
            SweepParameter::Lower => "lower",
            SweepParameter::Offset => "offset",
            SweepParameter::Delta => "delta",
            SweepParameter::KStar => "k_star",
            SweepParameter::C => "c",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

fn default_replications() -> usize {
    DEFAULT_REPLICATIONS
}
fn default_kind() -> SetKind {
    SetKind::Box
}
fn default_eta() -> f64 {
    DEFAULT_ETA
}
fn default_algorithm() -> Algorithm {
    Algorithm::Global
}
fn default_sigma() -> u32 {
    1
}
fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}
fn default_n_reps() -> usize {
    DEFAULT_N_REPS
}

/// One fully built point of a sweep. `engine.seed` is the root seed; each
/// replication derives its own.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub sweep_value: Option<f64>,
    pub model: ModelSpec,
    pub set: ParameterSet,
    pub engine: EngineConfig,
    pub dominating: DominatingConfig,
    pub n_reps: usize,
    pub w0: Option<f64>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text)
            .map_err(|e| ConfigError::new("<document>", e.to_string().trim_end().to_string()))?;
        let mut cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let key = if path == "." { "<document>".to_string() } else { path };
            ConfigError::new(key, e.into_inner().message().to_string())
        })?;
        cfg.resolve()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Applies an edit and re-checks the config.
    pub fn amended(mut self, edit: impl FnOnce(&mut Self)) -> Result<Self> {
        edit(&mut self);
        self.resolve()?;
        Ok(self)
    }

    /// The resolved config as TOML; parsing it gives back the same config.
    pub fn manifest(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    fn resolve(&mut self) -> Result<()> {
        if self.seed > i64::MAX as u64 {
            return Err(ConfigError::new("seed", format!("must be at most {}", i64::MAX)).into());
        }
        if self.replications < 1 {
            return Err(ConfigError::new("replications", "must be at least 1").into());
        }
        let model = ModelSpec::from_id(&self.model, self.model_params.as_ref())?;
        let params = with_model!(&model, m => toml::Table::try_from(m)).expect("model params serialise");
        self.model_params = (!params.is_empty()).then_some(params);
        if self.dominating.phi.is_none() {
            self.dominating.phi = Some(model.increment_bound());
        }
        match self.set.kind {
            SetKind::Box => {
                if self.set.h.is_some() {
                    return Err(ConfigError::new("set.h", "only valid with kind = \"grid\"").into());
                }
                if self.set.radius.is_some() {
                    return Err(ConfigError::new("set.radius", "only valid with kind = \"grid\"").into());
                }
            }
            SetKind::Grid => {
                if self.set.h.is_none() {
                    return Err(ConfigError::new("set.h", "required for kind = \"grid\"").into());
                }
                self.set.radius.get_or_insert(1);
            }
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(ConfigError::new("sweep.values", "must not be empty").into());
            }
        }
        let scenarios = self.scenarios()?;
        for s in &scenarios {
            with_model!(&s.model, m => Annealer::new(m, &s.set, &s.engine, None, None).map(|_| ()))?;
            if let Some(w0) = s.w0 {
                if !(w0 >= 0.0 && w0.is_finite()) {
                    return Err(ConfigError::new("dominating.w0", "must be finite and nonnegative").into());
                }
            }
            if s.n_reps < crate::dominating::MIN_REPLICATIONS {
                return Err(ConfigError::new(
                    "dominating.n_reps",
                    format!("must be at least {}, got {}", crate::dominating::MIN_REPLICATIONS, s.n_reps),
                )
                .into());
            }
        }
        Ok(())
    }

    /// Builds every sweep point, or the single base point without a sweep.
    pub fn scenarios(&self) -> Result<Vec<Scenario>> {
        match &self.sweep {
            None => Ok(vec![self.scenario(None)?]),
            Some(s) => s.values.iter().map(|&v| self.scenario(Some((s.parameter, v)))).collect(),
        }
    }

    fn scenario(&self, sweep: Option<(SweepParameter, f64)>) -> Result<Scenario> {
        let mut set = self.set.clone();
        let mut engine = self.engine.clone();
        let mut dom = self.dominating.clone();
        if let Some((parameter, v)) = sweep {
            match parameter {
                SweepParameter::Upper => set.upper.iter_mut().for_each(|u| *u = v),
                SweepParameter::Lower => set.lower.iter_mut().for_each(|l| *l = v),
                SweepParameter::Offset => {
                    for (l, u) in set.lower.iter_mut().zip(set.upper.iter_mut()) {
                        *u = v + (*u - *l);
                        *l = v;
                    }
                }
                SweepParameter::Delta => dom.delta = v,
                SweepParameter::KStar => {
                    if !(v >= 1.0 && v.fract() == 0.0 && v < 2f64.powi(63)) {
                        return Err(ConfigError::new("sweep.values", format!("k_star value {v} is not a positive integer")).into());
                    }
                    engine.k_star = v as u64;
                }
                SweepParameter::C => engine.c = v,
            }
        }
        let model = ModelSpec::from_id(&self.model, self.model_params.as_ref())?;
        let bounds = BoxSet::new(set.lower, set.upper)?;
        let set = match set.kind {
            SetKind::Box => ParameterSet::Box(bounds),
            SetKind::Grid => ParameterSet::Grid(GridSet::new(
                bounds,
                set.h.expect("checked"),
                set.radius.unwrap_or(1),
            )?),
        };
        let tau = TauSchedule::new(engine.c, engine.d)?;
        let engine_cfg = EngineConfig::new(engine.eta, tau, engine.algorithm, self.seed, engine.k_star)?;
        let phi = dom.phi.unwrap_or_else(|| model.increment_bound());
        let dominating = DominatingConfig::new(dom.delta, dom.sigma, dom.kappa, phi, tau, dom.alpha)?;
        Ok(Scenario {
            sweep_value: sweep.map(|(_, v)| v),
            model,
            set,
            engine: engine_cfg,
            dominating,
            n_reps: dom.n_reps,
            w0: dom.w0,
        })
    }

    /// Human-readable notes about hypotheses the dominating chain relies on.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let Ok(scenarios) = self.scenarios() else {
            return out;
        };
        for s in scenarios {
            let diag = s.dominating.diagnostics();
            if !diag.monotone_kernel {
                let at = s.sweep_value.map(|v| format!(" (sweep value {v})")).unwrap_or_default();
                out.push(format!(
                    "n(w) <= w fails for some w >= w* = {}{at}; W may not be stochastically monotone in its start",
                    diag.w_star
                ));
            }
        }
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    const BASE: &str = r#"
model = "simple-queue"
replications = 3
seed = 7

[set]
lower = [0.0]
upper = [0.4]

[engine]
c = 0.5
d = 1.0
k_star = 1000

[dominating]
delta = 0.05
kappa = 1.0
"#;

    #[test]
    fn defaults_filled() {
        let cfg = ExperimentConfig::parse(BASE).unwrap();
        assert_eq!(cfg.engine.eta, 0.01);
        assert_eq!(cfg.engine.algorithm, Algorithm::Global);
        assert_eq!(cfg.dominating.alpha, 0.05);
        assert_eq!(cfg.dominating.n_reps, 10_000);
        assert_eq!(cfg.dominating.sigma, 1);
        assert_eq!(cfg.dominating.phi, Some(1.0));
        assert_eq!(cfg.set.kind, SetKind::Box);
        let mp = cfg.model_params.as_ref().unwrap();
        assert_eq!(mp["service_prob"].as_float(), Some(0.5));
    }

    #[test]
    fn manifest_round_trips() {
        let cfg = ExperimentConfig::parse(BASE).unwrap();
        let text = cfg.manifest();
        let again = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(text, again.manifest());
    }

    #[test]
    fn unknown_key_reports_path() {
        let text = BASE.replace("kappa = 1.0", "kappa = 1.0\nkapa = 2.0");
        let err = ExperimentConfig::parse(&text).unwrap_err();
        let Error::Config(e) = err else { panic!("{err}") };
        assert!(e.key.starts_with("dominating"), "{e}");
        assert!(e.message.contains("kapa"), "{e}");
    }

    #[test]
    fn wrong_type_reports_path() {
        let text = BASE.replace("k_star = 1000", "k_star = \"lots\"");
        let Error::Config(e) = ExperimentConfig::parse(&text).unwrap_err() else { panic!() };
        assert_eq!(e.key, "engine.k_star");
    }

    #[test]
    fn out_of_range_bounds_rejected() {
        let text = BASE.replace("upper = [0.4]", "upper = [1.4]");
        let Error::Config(e) = ExperimentConfig::parse(&text).unwrap_err() else { panic!() };
        assert_eq!(e.key, "set.upper");
    }

    #[test]
    fn missing_section() {
        let text = BASE.replace("[engine]", "[engin]");
        assert!(ExperimentConfig::parse(&text).unwrap_err().is_config());
    }

    #[test]
    fn local_needs_grid() {
        let text = BASE.replace("k_star = 1000", "k_star = 1000\nalgorithm = \"local\"");
        let Error::Config(e) = ExperimentConfig::parse(&text).unwrap_err() else { panic!() };
        assert_eq!(e.key, "set.kind");
        let text = text.replace("upper = [0.4]", "upper = [0.4]\nkind = \"grid\"\nh = 0.05");
        let cfg = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(cfg.set.radius, Some(1));
    }

    #[test]
    fn too_few_dominating_replications() {
        let text = BASE.replace("kappa = 1.0", "kappa = 1.0\nn_reps = 10");
        match ExperimentConfig::parse(&text).unwrap_err() {
            Error::Config(e) => assert_eq!(e.key, "dominating.n_reps"),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn sweep_expansion() {
        let text = format!("{BASE}\n[sweep]\nparameter = \"offset\"\nvalues = [0.1, 0.5]\n");
        let cfg = ExperimentConfig::parse(&text).unwrap();
        let s = cfg.scenarios().unwrap();
        assert_eq!(s.len(), 2);
        let b = s[1].set.bounds();
        assert_eq!(b.lower(), &[0.5]);
        assert!((b.upper()[0] - 0.9).abs() < 1e-12);
        let text = format!("{BASE}\n[sweep]\nparameter = \"k_star\"\nvalues = [10, 100.5]\n");
        let Error::Config(e) = ExperimentConfig::parse(&text).unwrap_err() else { panic!() };
        assert_eq!(e.key, "sweep.values");
        let text = format!("{BASE}\n[sweep]\nparameter = \"upper\"\nvalues = [0.2, 0.6]\n");
        let s = ExperimentConfig::parse(&text).unwrap().scenarios().unwrap();
        assert_eq!(s[1].set.bounds().upper(), &[0.6]);
        assert_eq!(s[1].sweep_value, Some(0.6));
    }

    #[test]
    fn steep_schedule_warns() {
        let text = BASE.replace("c = 0.5", "c = 1.5");
        let cfg = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(cfg.warnings().len(), 1);
        assert!(ExperimentConfig::parse(BASE).unwrap().warnings().is_empty());
    }
}
