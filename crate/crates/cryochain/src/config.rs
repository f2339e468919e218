//! Run configuration: one JSON file per invocation, discriminated by a
//! `command` field that must match the subcommand being run. File paths
//! inside a config resolve relative to the config file's directory, so a run
//! behaves the same from any working directory.

use std::fs;
use std::path::{Path, PathBuf};

use cryochain_core::budget::{BiasStage, DeploymentSpec, StageSpec};
use cryochain_core::noisecal::NoiseSource;
use cryochain_core::readout::{ReadoutConfig, ResonatorModel};
use cryochain_core::rfnet::{
    CableThermalModel, ChainElement, FrequencyGrid, SignalChain, TwoPortRecord,
    DEFAULT_CABLE_SEGMENTS,
};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::touchstone::parse_touchstone;
use crate::AppError;

/// A parsed config file plus the directory its relative paths anchor to.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub path: PathBuf,
    pub dir: PathBuf,
    pub value: Value,
}

pub fn load_config(path: &Path) -> Result<LoadedConfig, AppError> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::invalid(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| AppError::invalid(format!("{}: {e}", path.display())))?;
    if !value.is_object() {
        return Err(AppError::invalid(format!(
            "{}: top level must be a JSON object",
            path.display()
        )));
    }
    let dir = match path.parent() {
        Some(p) if p.as_os_str().is_empty() => PathBuf::from("."),
        Some(p) => p.to_path_buf(),
        None => PathBuf::from("."),
    };
    Ok(LoadedConfig { path: path.to_path_buf(), dir, value })
}

impl LoadedConfig {
    /// The `command` discriminator.
    pub fn command(&self) -> Result<&str, AppError> {
        self.value.get("command").and_then(Value::as_str).ok_or_else(|| {
            AppError::invalid(format!(
                "{}: missing string field \"command\"",
                self.path.display()
            ))
        })
    }

    /// Deserialize everything except `command` into a command config.
    pub fn body<T: DeserializeOwned>(&self) -> Result<T, AppError> {
        let mut obj = self.value.as_object().cloned().unwrap_or_default();
        obj.remove("command");
        serde_json::from_value(Value::Object(obj))
            .map_err(|e| AppError::invalid(format!("{}: {e}", self.path.display())))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start_hz: f64,
    pub stop_hz: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<FrequencyGrid, AppError> {
        FrequencyGrid::linspace(self.start_hz, self.stop_hz, self.points)
            .map_err(AppError::invalid)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ThermalSpec {
    Midpoint(MidpointThermal),
    Distributed(DistributedThermal),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MidpointThermal {
    pub t_mid_k: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributedThermal {
    #[serde(default = "default_segments")]
    pub segments: u32,
}

fn default_segments() -> u32 {
    DEFAULT_CABLE_SEGMENTS
}

impl ThermalSpec {
    fn build(&self) -> CableThermalModel {
        match self {
            ThermalSpec::Midpoint(m) => CableThermalModel::Midpoint { t_mid_k: m.t_mid_k },
            ThermalSpec::Distributed(d) => {
                CableThermalModel::Distributed { segments: d.segments }
            }
        }
    }
}

/// One chain stage as written in a config. File-backed stages name an .s2p
/// relative to the config directory.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ElementSpec {
    Attenuator(AttenuatorSpec),
    Amplifier(AmplifierSpec),
    AmplifierFile(AmplifierFileSpec),
    Cable(CableSpec),
    SparamFile(SparamFileSpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttenuatorSpec {
    pub label: String,
    pub loss_db: f64,
    pub t_phys_k: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplifierSpec {
    pub label: String,
    pub gain_db: f64,
    pub te_k: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplifierFileSpec {
    pub label: String,
    pub s2p: PathBuf,
    pub te_k: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CableSpec {
    pub label: String,
    pub loss_db: f64,
    pub t_in_k: f64,
    pub t_out_k: f64,
    pub thermal: ThermalSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SparamFileSpec {
    pub label: String,
    pub s2p: PathBuf,
    pub te_k: f64,
}

/// Read and parse an .s2p referenced by a config.
pub fn load_record(base_dir: &Path, rel: &Path) -> Result<TwoPortRecord, AppError> {
    let path = if rel.is_absolute() { rel.to_path_buf() } else { base_dir.join(rel) };
    let text = fs::read_to_string(&path)
        .map_err(|e| AppError::invalid(format!("{}: {e}", path.display())))?;
    let doc = parse_touchstone(&text)
        .map_err(|e| AppError::invalid(format!("{}: {e}", path.display())))?;
    Ok(doc.data)
}

impl ElementSpec {
    pub fn build(&self, base_dir: &Path) -> Result<ChainElement, AppError> {
        Ok(match self {
            ElementSpec::Attenuator(a) => {
                ChainElement::attenuator(&a.label, a.loss_db, a.t_phys_k)
            }
            ElementSpec::Amplifier(a) => ChainElement::amplifier_db(&a.label, a.gain_db, a.te_k),
            ElementSpec::AmplifierFile(a) => {
                ChainElement::amplifier_record(&a.label, load_record(base_dir, &a.s2p)?, a.te_k)
            }
            ElementSpec::Cable(c) => {
                ChainElement::cable(&c.label, c.loss_db, c.t_in_k, c.t_out_k, c.thermal.build())
            }
            ElementSpec::SparamFile(s) => {
                ChainElement::sparam_block(&s.label, load_record(base_dir, &s.s2p)?, s.te_k)
            }
        })
    }
}

pub fn build_chain(specs: &[ElementSpec], base_dir: &Path) -> Result<SignalChain, AppError> {
    let mut elements = Vec::with_capacity(specs.len());
    for spec in specs {
        elements.push(spec.build(base_dir)?);
    }
    SignalChain::new(elements).map_err(AppError::invalid)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainCommand {
    pub grid: GridSpec,
    pub elements: Vec<ElementSpec>,
}

/// Hot/cold source description: physical hot temperature or an ENR rating.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub t_cold_k: f64,
    #[serde(default)]
    pub t_hot_k: Option<f64>,
    #[serde(default)]
    pub enr_db: Option<f64>,
}

impl SourceSpec {
    pub fn build(&self) -> Result<NoiseSource, AppError> {
        match (self.t_hot_k, self.enr_db) {
            (Some(t_hot), None) => {
                NoiseSource::from_temperatures(t_hot, self.t_cold_k).map_err(AppError::invalid)
            }
            (None, Some(enr)) => {
                NoiseSource::from_enr(enr, self.t_cold_k).map_err(AppError::invalid)
            }
            _ => Err(AppError::invalid("source needs exactly one of t_hot_k or enr_db")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoisecalCommand {
    pub measurements_csv: PathBuf,
    pub source: SourceSpec,
    /// Source plane to DUT input, usually lossy and cold.
    pub input_chain: Vec<ElementSpec>,
    pub backend_te_k: f64,
    pub dut_gain_db: f64,
    #[serde(default)]
    pub reference_plane: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonatorSpec {
    pub f_r_hz: f64,
    pub kappa_hz: f64,
    pub chi_hz: f64,
}

impl ResonatorSpec {
    pub fn build(&self) -> Result<ResonatorModel, AppError> {
        let model =
            ResonatorModel { f_r_hz: self.f_r_hz, kappa_hz: self.kappa_hz, chi_hz: self.chi_hz };
        model.validate().map_err(AppError::invalid)?;
        Ok(model)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutCommand {
    pub resonator: ResonatorSpec,
    pub probe_freq_hz: f64,
    pub p_in_w: f64,
    pub tau_s: f64,
    pub t_sys_k: f64,
    #[serde(default)]
    pub decay_prob: f64,
    pub n_per_state: usize,
    #[serde(default)]
    pub seed: u64,
    /// Shot-generation threads; artifacts are identical for any count.
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_bins")]
    pub n_bins: usize,
}

fn default_workers() -> usize {
    1
}

fn default_bins() -> usize {
    61
}

impl ReadoutCommand {
    pub fn readout_config(&self) -> Result<ReadoutConfig, AppError> {
        let cfg = ReadoutConfig {
            probe_freq_hz: self.probe_freq_hz,
            p_in_w: self.p_in_w,
            tau_s: self.tau_s,
            t_sys_k: self.t_sys_k,
            decay_prob: self.decay_prob,
        };
        cfg.validate().map_err(AppError::invalid)?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeploymentConfig {
    pub n_qubits: u64,
    pub qubits_per_line: u64,
    pub p_lna_w: f64,
    #[serde(default = "default_bias_lines")]
    pub bias_lines_per_lna: u64,
}

fn default_bias_lines() -> u64 {
    1
}

impl DeploymentConfig {
    pub fn build(&self) -> DeploymentSpec {
        DeploymentSpec {
            n_qubits: self.n_qubits,
            qubits_per_line: self.qubits_per_line,
            p_lna_w: self.p_lna_w,
            bias_lines_per_lna: self.bias_lines_per_lna,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageConfig {
    pub name: String,
    pub temperature_k: f64,
    pub cooling_power_w: f64,
    pub allocation_fraction: f64,
}

impl StageConfig {
    pub fn build(&self) -> StageSpec {
        StageSpec {
            name: self.name.clone(),
            temperature_k: self.temperature_k,
            cooling_power_w: self.cooling_power_w,
            allocation_fraction: self.allocation_fraction,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiasSpec {
    pub rail_voltage_v: f64,
    pub stages: Vec<BiasStageSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiasStageSpec {
    pub v_drop_v: f64,
    pub i_a: f64,
}

impl BiasSpec {
    pub fn stages(&self) -> Vec<BiasStage> {
        self.stages.iter().map(|s| BiasStage { v_drop_v: s.v_drop_v, i_a: s.i_a }).collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetCommand {
    pub deployment: DeploymentConfig,
    pub stage: StageConfig,
    #[serde(default)]
    pub bias: Option<BiasSpec>,
}
