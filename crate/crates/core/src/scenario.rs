//! Scenario configuration, bath-strength sweeps, and figure presets.
//!
//! Physical inputs (Rabi frequency in 1e6 rad/s, bath cutoff in 1e6 rad/s,
//! temperature in kelvin) are converted at this boundary into a_11 = 1
//! scaled units, in which the whole pipeline operates: frequencies in
//! units of a_11, times as the scaled variable T = a_11 t (plotted in
//! degrees), bath coupling kappa dimensionless.
//!
//! Inverse-temperature convention: profiles are built with
//! `beta = 1 / temperature_k` in scaled units. With the reference numbers
//! (cutoff 1200e6 rad/s, T = 0.03 K) the bath then sits in its
//! effectively-cold regime, which is the regime the published damping
//! trends (graded peak suppression across kappa = 0.001..0.1) correspond
//! to. Reading beta as hbar/(k_B T) * a_11 instead puts every mode at the
//! system frequency thousands of quanta hot, coherence then dies within a
//! degree of scaled time for every nonzero kappa, and the kappa sweep
//! becomes indistinguishable; see docs/PHYSICS.md.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::bath::{build_profile, BathSpec};
use crate::entanglement::{
    embed_tripartite, linear_entropy, negativity, reduced_density, Subsystem, TripartiteIndex,
};
use crate::error::{Error, Result};
use crate::evolution::{evolve_dephasing, InitialState};
use crate::leakage::{leakage_series, FockSpace};
use crate::model::{analytic_eigensystem, SystemParams};
use crate::observables::{ghz_probability, population_inversion, GhzTarget};

/// One column of a scenario run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Observable {
    Pghz,
    Inversion,
    NegativityA,
    NegativityB,
    NegativityC,
    LinearEntropyA,
    LinearEntropyB,
    LinearEntropyC,
    Leakage,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::Pghz => "pghz",
            Observable::Inversion => "inversion",
            Observable::NegativityA => "negativity_a",
            Observable::NegativityB => "negativity_b",
            Observable::NegativityC => "negativity_c",
            Observable::LinearEntropyA => "linear_entropy_a",
            Observable::LinearEntropyB => "linear_entropy_b",
            Observable::LinearEntropyC => "linear_entropy_c",
            Observable::Leakage => "leakage",
        }
    }

    /// Expand a config-file output group into concrete columns. Only the
    /// five group names are accepted.
    pub fn parse_group(s: &str) -> Result<Vec<Observable>> {
        match s {
            "pghz" => Ok(vec![Observable::Pghz]),
            "inversion" => Ok(vec![Observable::Inversion]),
            "negativity" => Ok(vec![
                Observable::NegativityA,
                Observable::NegativityB,
                Observable::NegativityC,
            ]),
            "linear_entropy" => Ok(vec![
                Observable::LinearEntropyA,
                Observable::LinearEntropyB,
                Observable::LinearEntropyC,
            ]),
            "leakage" => Ok(vec![Observable::Leakage]),
            other => Err(Error::ValidationError(format!(
                "unknown output '{other}' (expected pghz, inversion, negativity, linear_entropy, leakage)"
            ))),
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fully validated description of one simulation run.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    /// Rabi frequency in units of 1e6 rad/s.
    pub omega_rabi_e6rad: f64,
    /// Ratio mu_11 / a_11.
    pub alpha: f64,
    /// Bath spectral cutoff in units of 1e6 rad/s.
    pub bath_cutoff_e6rad: f64,
    /// Bath temperature in kelvin.
    pub temperature_k: f64,
    /// Bath coupling strengths to sweep.
    pub kappas: Vec<f64>,
    /// Scaled-time extent of the grid, in degrees of T = a_11 t.
    pub t_max_deg: f64,
    /// Number of grid points (>= 2), endpoints included.
    pub grid_points: usize,
    /// (phonon, photon) truncation for leakage runs.
    pub fock_cutoffs: (usize, usize),
    /// Which columns to compute.
    pub outputs: BTreeSet<Observable>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            omega_rabi_e6rad: 8.95,
            alpha: 4.0,
            bath_cutoff_e6rad: 1200.0,
            temperature_k: 0.03,
            kappas: vec![0.0, 0.001, 0.01, 0.02, 0.05, 0.1],
            t_max_deg: 180.0,
            grid_points: 721,
            fock_cutoffs: (6, 6),
            outputs: [
                Observable::Pghz,
                Observable::Inversion,
                Observable::NegativityA,
                Observable::NegativityB,
                Observable::NegativityC,
                Observable::LinearEntropyA,
                Observable::LinearEntropyB,
                Observable::LinearEntropyC,
            ]
            .into_iter()
            .collect(),
        }
    }
}

impl ScenarioConfig {
    /// Check every invariant, reporting all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut violations = Vec::new();
        if !(self.omega_rabi_e6rad > 0.0) {
            violations.push(format!(
                "omega_rabi_e6rad must be > 0, got {}",
                self.omega_rabi_e6rad
            ));
        }
        if !(self.alpha > 1.0) {
            violations.push(format!("alpha must be > 1, got {}", self.alpha));
        }
        if !(self.bath_cutoff_e6rad > 0.0) {
            violations.push(format!(
                "bath_cutoff_e6rad must be > 0, got {}",
                self.bath_cutoff_e6rad
            ));
        }
        if !(self.temperature_k > 0.0) {
            violations.push(format!(
                "temperature_k must be > 0, got {}",
                self.temperature_k
            ));
        }
        if self.kappas.is_empty() {
            violations.push("kappas must not be empty".into());
        }
        if self.kappas.iter().any(|k| !(*k >= 0.0)) {
            violations.push(format!("all kappas must be >= 0, got {:?}", self.kappas));
        }
        if !(self.t_max_deg > 0.0) {
            violations.push(format!("t_max_deg must be > 0, got {}", self.t_max_deg));
        }
        if self.grid_points < 2 {
            violations.push(format!(
                "grid_points must be >= 2, got {}",
                self.grid_points
            ));
        }
        if self.fock_cutoffs.0 < 2 || self.fock_cutoffs.1 < 2 {
            violations.push(format!(
                "fock_cutoffs must be >= 2 each, got {:?}",
                self.fock_cutoffs
            ));
        }
        if self.outputs.is_empty() {
            violations.push("outputs must not be empty".into());
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::ValidationError(violations.join("; ")))
        }
    }

    /// The scaled-time grid in degrees.
    pub fn grid_deg(&self) -> Vec<f64> {
        let n = self.grid_points;
        (0..n)
            .map(|k| self.t_max_deg * k as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Optional-field mirror of [`ScenarioConfig`] used by both config syntaxes.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    omega_rabi_e6rad: Option<f64>,
    alpha: Option<f64>,
    bath_cutoff_e6rad: Option<f64>,
    temperature_k: Option<f64>,
    kappas: Option<Vec<f64>>,
    t_max_deg: Option<f64>,
    grid_points: Option<usize>,
    fock_cutoffs: Option<(usize, usize)>,
    outputs: Option<Vec<String>>,
}

impl RawConfig {
    fn into_config(self) -> Result<ScenarioConfig> {
        let defaults = ScenarioConfig::default();
        let outputs = match self.outputs {
            None => defaults.outputs,
            Some(groups) => {
                let mut set = BTreeSet::new();
                for g in groups {
                    set.extend(Observable::parse_group(g.trim())?);
                }
                set
            }
        };
        let cfg = ScenarioConfig {
            omega_rabi_e6rad: self.omega_rabi_e6rad.unwrap_or(defaults.omega_rabi_e6rad),
            alpha: self.alpha.unwrap_or(defaults.alpha),
            bath_cutoff_e6rad: self.bath_cutoff_e6rad.unwrap_or(defaults.bath_cutoff_e6rad),
            temperature_k: self.temperature_k.unwrap_or(defaults.temperature_k),
            kappas: self.kappas.unwrap_or(defaults.kappas),
            t_max_deg: self.t_max_deg.unwrap_or(defaults.t_max_deg),
            grid_points: self.grid_points.unwrap_or(defaults.grid_points),
            fock_cutoffs: self.fock_cutoffs.unwrap_or(defaults.fock_cutoffs),
            outputs,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parse and validate a scenario config file.
///
/// Two syntaxes are accepted: a JSON object with exactly the
/// [`ScenarioConfig`] keys, or `key = value` lines (`#` comments; lists
/// comma-separated, brackets optional). Unknown keys are errors, and an
/// empty file yields the defaults.
pub fn parse_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text)
}

/// [`parse_config`] on an in-memory string.
pub fn parse_config_str(text: &str) -> Result<ScenarioConfig> {
    let trimmed = text.trim_start();
    let raw = if trimmed.starts_with('{') {
        serde_json::from_str::<RawConfig>(text)
            .map_err(|e| Error::ParseError(format!("json: {e}")))?
    } else {
        parse_key_value(text)?
    };
    raw.into_config()
}

fn parse_key_value(text: &str) -> Result<RawConfig> {
    fn scalar<T: FromStr>(line_no: usize, key: &str, v: &str) -> Result<T> {
        v.parse().map_err(|_| {
            Error::ParseError(format!(
                "line {line_no}: cannot parse value '{v}' for key '{key}'"
            ))
        })
    }
    fn list(v: &str) -> Vec<&str> {
        v.trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect()
    }

    let mut raw = RawConfig::default();
    let mut seen = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::ParseError(format!(
                "line {line_no}: expected 'key = value', got '{line}'"
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_string()) {
            return Err(Error::ParseError(format!(
                "line {line_no}: duplicate key '{key}'"
            )));
        }
        match key {
            "omega_rabi_e6rad" => raw.omega_rabi_e6rad = Some(scalar(line_no, key, value)?),
            "alpha" => raw.alpha = Some(scalar(line_no, key, value)?),
            "bath_cutoff_e6rad" => raw.bath_cutoff_e6rad = Some(scalar(line_no, key, value)?),
            "temperature_k" => raw.temperature_k = Some(scalar(line_no, key, value)?),
            "t_max_deg" => raw.t_max_deg = Some(scalar(line_no, key, value)?),
            "grid_points" => raw.grid_points = Some(scalar(line_no, key, value)?),
            "kappas" => {
                let vals = list(value)
                    .into_iter()
                    .map(|v| scalar(line_no, key, v))
                    .collect::<Result<Vec<f64>>>()?;
                raw.kappas = Some(vals);
            }
            "fock_cutoffs" => {
                let vals = list(value)
                    .into_iter()
                    .map(|v| scalar(line_no, key, v))
                    .collect::<Result<Vec<usize>>>()?;
                if vals.len() != 2 {
                    return Err(Error::ParseError(format!(
                        "line {line_no}: fock_cutoffs needs exactly two integers"
                    )));
                }
                raw.fock_cutoffs = Some((vals[0], vals[1]));
            }
            "outputs" => {
                raw.outputs = Some(
                    list(value)
                        .into_iter()
                        .map(|s| s.trim_matches('"').to_string())
                        .collect(),
                )
            }
            other => {
                return Err(Error::ParseError(format!(
                    "line {line_no}: unknown key '{other}'"
                )))
            }
        }
    }
    Ok(raw)
}

/// Preset configs for the six reference figures: generation probability
/// and inversion over the short kappa list, negativity and linear entropy
/// (cut A, then the identical B/C cuts) over the full kappa list.
pub fn figure_preset(n: u32) -> Result<ScenarioConfig> {
    let short = vec![0.0, 0.001, 0.01, 0.1];
    let full = vec![0.0, 0.001, 0.01, 0.02, 0.05, 0.1];
    let (kappas, outputs): (Vec<f64>, Vec<Observable>) = match n {
        1 => (short, vec![Observable::Pghz]),
        2 => (short, vec![Observable::Inversion]),
        3 => (full, vec![Observable::NegativityA]),
        4 => (full, vec![Observable::NegativityB, Observable::NegativityC]),
        5 => (full, vec![Observable::LinearEntropyA]),
        6 => (
            full,
            vec![Observable::LinearEntropyB, Observable::LinearEntropyC],
        ),
        other => return Err(Error::UnknownFigure(other)),
    };
    Ok(ScenarioConfig {
        kappas,
        outputs: outputs.into_iter().collect(),
        ..ScenarioConfig::default()
    })
}

/// Time series of every requested observable, one column per kappa.
#[derive(Clone, Debug)]
pub struct ObservableSeries {
    pub t_deg: Vec<f64>,
    pub kappas: Vec<f64>,
    /// `columns[obs][kappa_index][t_index]`.
    pub columns: BTreeMap<Observable, Vec<Vec<f64>>>,
}

impl ObservableSeries {
    pub fn column(&self, obs: Observable, kappa_index: usize) -> Option<&[f64]> {
        self.columns
            .get(&obs)
            .map(|per_kappa| per_kappa[kappa_index].as_slice())
    }
}

/// Run one scenario: convert units, build a dephasing profile per kappa,
/// evolve the default initial state across the grid, and evaluate every
/// requested observable. Deterministic for a given config.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ObservableSeries> {
    cfg.validate()?;
    let params = SystemParams::scaled(cfg.alpha)?;
    let eig = analytic_eigensystem(&params);
    let a11 = cfg.omega_rabi_e6rad * 1e6 / (cfg.alpha * cfg.alpha - 1.0).sqrt();
    let cutoff_scaled = cfg.bath_cutoff_e6rad * 1e6 / a11;
    let beta_scaled = 1.0 / cfg.temperature_k;

    let t_deg = cfg.grid_deg();
    let t_rad: Vec<f64> = t_deg.iter().map(|d| d.to_radians()).collect();
    let rho0 = InitialState::default().density();
    let minus = GhzTarget::minus();
    let idx = TripartiteIndex;

    let wants_entanglement = cfg.outputs.iter().any(|o| {
        matches!(
            o,
            Observable::NegativityA
                | Observable::NegativityB
                | Observable::NegativityC
                | Observable::LinearEntropyA
                | Observable::LinearEntropyB
                | Observable::LinearEntropyC
        )
    });

    // kappa-independent leakage column, computed once and reused
    let leakage_col = if cfg.outputs.contains(&Observable::Leakage) {
        let space = FockSpace::new(cfg.fock_cutoffs.0, cfg.fock_cutoffs.1)?;
        Some(leakage_series(&params, &space, &t_rad)?)
    } else {
        None
    };

    let mut columns: BTreeMap<Observable, Vec<Vec<f64>>> =
        cfg.outputs.iter().map(|&o| (o, Vec::new())).collect();

    for &kappa in &cfg.kappas {
        let spec = BathSpec::new(kappa, cutoff_scaled, beta_scaled)?;
        let profile = build_profile(&spec, &params, &t_rad)?;
        let mut per_obs: BTreeMap<Observable, Vec<f64>> = cfg
            .outputs
            .iter()
            .map(|&o| (o, Vec::with_capacity(t_rad.len())))
            .collect();

        for &t in &t_rad {
            let rho = evolve_dephasing(&rho0, &eig, &profile, t)?;
            if cfg.outputs.contains(&Observable::Pghz) {
                per_obs
                    .get_mut(&Observable::Pghz)
                    .unwrap()
                    .push(ghz_probability(&rho, &minus)?);
            }
            if cfg.outputs.contains(&Observable::Inversion) {
                per_obs
                    .get_mut(&Observable::Inversion)
                    .unwrap()
                    .push(population_inversion(&rho)?);
            }
            if wants_entanglement {
                let rho8 = embed_tripartite(&rho, &idx)?;
                for (obs, sub) in [
                    (Observable::NegativityA, Subsystem::A),
                    (Observable::NegativityB, Subsystem::B),
                    (Observable::NegativityC, Subsystem::C),
                ] {
                    if cfg.outputs.contains(&obs) {
                        per_obs
                            .get_mut(&obs)
                            .unwrap()
                            .push(negativity(&rho8, &idx, sub)?);
                    }
                }
                for (obs, sub) in [
                    (Observable::LinearEntropyA, Subsystem::A),
                    (Observable::LinearEntropyB, Subsystem::B),
                    (Observable::LinearEntropyC, Subsystem::C),
                ] {
                    if cfg.outputs.contains(&obs) {
                        let red = reduced_density(&rho8, &idx, sub)?;
                        per_obs.get_mut(&obs).unwrap().push(linear_entropy(&red));
                    }
                }
            }
        }
        if let Some(leak) = &leakage_col {
            per_obs.insert(Observable::Leakage, leak.clone());
        }
        for (obs, col) in per_obs {
            columns.get_mut(&obs).unwrap().push(col);
        }
    }

    Ok(ObservableSeries {
        t_deg,
        kappas: cfg.kappas.clone(),
        columns,
    })
}
