//! Refrigerator power planning for multiplexed readout lines and DC bias
//! topology comparison.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors from budget planning inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum BudgetError {
    /// A count field must be at least 1.
    ZeroCount { what: &'static str },
    /// A scalar field is out of its physical range.
    OutOfRange { what: &'static str, value: f64 },
    /// A bias topology needs at least one stage.
    NoStages,
}

impl fmt::Display for BudgetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BudgetError::ZeroCount { what } => write!(f, "{what} must be at least 1"),
            BudgetError::OutOfRange { what, value } => {
                write!(f, "{what} out of range: {value}")
            }
            BudgetError::NoStages => write!(f, "bias topology has no stages"),
        }
    }
}

impl core::error::Error for BudgetError {}

/// One refrigerator stage with a dissipation allowance.
#[derive(Debug, Clone, PartialEq)]
pub struct StageSpec {
    pub name: String,
    pub temperature_k: f64,
    pub cooling_power_w: f64,
    /// Fraction of the cooling power granted to readout amplifiers.
    pub allocation_fraction: f64,
}

impl StageSpec {
    pub fn validate(&self) -> Result<(), BudgetError> {
        if !self.temperature_k.is_finite() || self.temperature_k <= 0.0 {
            return Err(BudgetError::OutOfRange {
                what: "stage temperature",
                value: self.temperature_k,
            });
        }
        if !self.cooling_power_w.is_finite() || self.cooling_power_w <= 0.0 {
            return Err(BudgetError::OutOfRange {
                what: "cooling power",
                value: self.cooling_power_w,
            });
        }
        if !self.allocation_fraction.is_finite()
            || self.allocation_fraction <= 0.0
            || self.allocation_fraction > 1.0
        {
            return Err(BudgetError::OutOfRange {
                what: "allocation fraction",
                value: self.allocation_fraction,
            });
        }
        Ok(())
    }
}

/// Readout deployment shape: how many amplifiers the qubit count implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeploymentSpec {
    pub n_qubits: u64,
    pub qubits_per_line: u64,
    /// DC dissipation of one line amplifier, W.
    pub p_lna_w: f64,
    pub bias_lines_per_lna: u64,
}

impl DeploymentSpec {
    pub fn validate(&self) -> Result<(), BudgetError> {
        if self.n_qubits == 0 {
            return Err(BudgetError::ZeroCount { what: "n_qubits" });
        }
        if self.qubits_per_line == 0 {
            return Err(BudgetError::ZeroCount { what: "qubits_per_line" });
        }
        if self.bias_lines_per_lna == 0 {
            return Err(BudgetError::ZeroCount { what: "bias_lines_per_lna" });
        }
        if !self.p_lna_w.is_finite() || self.p_lna_w < 0.0 {
            return Err(BudgetError::OutOfRange { what: "LNA power", value: self.p_lna_w });
        }
        Ok(())
    }
}

/// Outcome of [`plan_budget`].
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetReport {
    pub n_lines: u64,
    pub total_power_w: f64,
    pub budget_w: f64,
    /// `total_power_w / budget_w`.
    pub utilization: f64,
    pub feasible: bool,
    pub total_bias_lines: u64,
}

/// Size the readout amplifier deployment against a stage's allowance.
///
/// `n_lines = ceil(n_qubits / qubits_per_line)`; the plan is feasible when
/// `n_lines * p_lna` fits inside `cooling_power * allocation_fraction`.
pub fn plan_budget(d: &DeploymentSpec, s: &StageSpec) -> Result<BudgetReport, BudgetError> {
    d.validate()?;
    s.validate()?;
    let n_lines = d.n_qubits.div_ceil(d.qubits_per_line);
    let total_power_w = n_lines as f64 * d.p_lna_w;
    let budget_w = s.cooling_power_w * s.allocation_fraction;
    let utilization = total_power_w / budget_w;
    Ok(BudgetReport {
        n_lines,
        total_power_w,
        budget_w,
        utilization,
        feasible: total_power_w <= budget_w,
        total_bias_lines: n_lines * d.bias_lines_per_lna,
    })
}

/// One transistor stage of a bias network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasStage {
    /// Voltage the stage drops, V.
    pub v_drop_v: f64,
    /// Current the stage draws, A.
    pub i_a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiasKind {
    /// Every stage draws its own current from the full rail.
    Direct,
    /// Stages stack in series and share one current.
    Multiplexed,
}

/// A bias network: stages fed from one supply rail.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasTopology {
    pub kind: BiasKind,
    pub stages: Vec<BiasStage>,
    pub rail_voltage_v: f64,
}

impl BiasTopology {
    fn validate(&self) -> Result<(), BudgetError> {
        if self.stages.is_empty() {
            return Err(BudgetError::NoStages);
        }
        if !self.rail_voltage_v.is_finite() || self.rail_voltage_v < 0.0 {
            return Err(BudgetError::OutOfRange {
                what: "rail voltage",
                value: self.rail_voltage_v,
            });
        }
        for st in &self.stages {
            if !st.v_drop_v.is_finite() || st.v_drop_v < 0.0 {
                return Err(BudgetError::OutOfRange { what: "stage drop", value: st.v_drop_v });
            }
            if !st.i_a.is_finite() || st.i_a < 0.0 {
                return Err(BudgetError::OutOfRange { what: "stage current", value: st.i_a });
            }
        }
        Ok(())
    }

    fn currents_mismatch(&self) -> bool {
        self.stages.iter().any(|s| s.i_a != self.stages[0].i_a)
    }
}

/// Supply power drawn by a bias network.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasPower {
    pub power_w: f64,
    /// Multiplexed stacks assume one shared current; set when stage
    /// currents differ and the largest was used.
    pub current_mismatch: bool,
}

/// DC power drawn from the rail.
///
/// Direct biasing feeds each stage separately, `sum(rail * i_i)`; a
/// multiplexed stack reuses one current through every stage,
/// `rail * max(i_i)`.
pub fn bias_power(t: &BiasTopology) -> Result<BiasPower, BudgetError> {
    t.validate()?;
    match t.kind {
        BiasKind::Direct => Ok(BiasPower {
            power_w: t.stages.iter().map(|s| t.rail_voltage_v * s.i_a).sum(),
            current_mismatch: false,
        }),
        BiasKind::Multiplexed => {
            let i_max = t.stages.iter().map(|s| s.i_a).fold(0.0_f64, f64::max);
            Ok(BiasPower {
                power_w: t.rail_voltage_v * i_max,
                current_mismatch: t.currents_mismatch(),
            })
        }
    }
}

/// Both topologies over the same stages and rail.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasComparison {
    pub direct_w: f64,
    pub multiplexed_w: f64,
    /// `direct_w / multiplexed_w`.
    pub ratio: f64,
    pub current_mismatch: bool,
}

pub fn compare_bias(stages: &[BiasStage], rail_voltage_v: f64) -> Result<BiasComparison, BudgetError> {
    let direct = bias_power(&BiasTopology {
        kind: BiasKind::Direct,
        stages: stages.to_vec(),
        rail_voltage_v,
    })?;
    let multiplexed = bias_power(&BiasTopology {
        kind: BiasKind::Multiplexed,
        stages: stages.to_vec(),
        rail_voltage_v,
    })?;
    let ratio = if multiplexed.power_w == 0.0 {
        1.0
    } else {
        direct.power_w / multiplexed.power_w
    };
    Ok(BiasComparison {
        direct_w: direct.power_w,
        multiplexed_w: multiplexed.power_w,
        ratio,
        current_mismatch: multiplexed.current_mismatch,
    })
}
