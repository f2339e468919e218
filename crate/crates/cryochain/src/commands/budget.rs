//! `budget` command: stage power plan and optional bias-topology
//! comparison; writes budget.json and prints a short table.

use std::path::Path;

use cryochain_core::budget::{compare_bias, plan_budget};
use serde::Serialize;

use crate::config::BudgetCommand;
use crate::report::{round_sig, OutputStage};
use crate::AppError;

use super::SummaryRow;

#[derive(Serialize)]
struct PlanJson {
    n_lines: u64,
    total_power_w: f64,
    budget_w: f64,
    utilization: f64,
    feasible: bool,
    total_bias_lines: u64,
}

#[derive(Serialize)]
struct BiasJson {
    direct_w: f64,
    multiplexed_w: f64,
    ratio: f64,
    current_mismatch: bool,
}

#[derive(Serialize)]
struct BudgetJson {
    plan: PlanJson,
    bias: Option<BiasJson>,
}

pub fn run(cfg: &BudgetCommand, out_dir: &Path) -> Result<SummaryRow, AppError> {
    let deployment = cfg.deployment.build();
    let stage_spec = cfg.stage.build();
    let plan = plan_budget(&deployment, &stage_spec).map_err(AppError::invalid)?;
    let bias = match &cfg.bias {
        Some(spec) => {
            Some(compare_bias(&spec.stages(), spec.rail_voltage_v).map_err(AppError::invalid)?)
        }
        None => None,
    };

    println!(
        "stage {}: budget {:.3} W of {:.3} W cooling power",
        stage_spec.name, plan.budget_w, stage_spec.cooling_power_w
    );
    println!(
        "lines: {} x {:.1} mW -> {:.3} W total, {} bias lines",
        plan.n_lines,
        deployment.p_lna_w * 1e3,
        plan.total_power_w,
        plan.total_bias_lines
    );
    println!(
        "utilization: {:.1}% -> {}",
        plan.utilization * 100.0,
        if plan.feasible { "feasible" } else { "INFEASIBLE" }
    );
    if let Some(b) = &bias {
        println!(
            "bias: direct {:.2} mW, multiplexed {:.2} mW, ratio {:.2}{}",
            b.direct_w * 1e3,
            b.multiplexed_w * 1e3,
            b.ratio,
            if b.current_mismatch { " (current mismatch; largest stage current assumed)" } else { "" }
        );
    }

    let json = BudgetJson {
        plan: PlanJson {
            n_lines: plan.n_lines,
            total_power_w: round_sig(plan.total_power_w),
            budget_w: round_sig(plan.budget_w),
            utilization: round_sig(plan.utilization),
            feasible: plan.feasible,
            total_bias_lines: plan.total_bias_lines,
        },
        bias: bias.as_ref().map(|b| BiasJson {
            direct_w: round_sig(b.direct_w),
            multiplexed_w: round_sig(b.multiplexed_w),
            ratio: round_sig(b.ratio),
            current_mismatch: b.current_mismatch,
        }),
    };
    let mut text = serde_json::to_string_pretty(&json)
        .map_err(|e| AppError::invalid(format!("budget serialization: {e}")))?;
    text.push('\n');

    let mut out = OutputStage::new(out_dir)?;
    out.write("budget.json", &text)?;
    out.commit()?;

    Ok(vec![
        ("n_lines", plan.n_lines.to_string()),
        ("total_power_w", crate::report::fmt_float(plan.total_power_w)),
        ("utilization", crate::report::fmt_float(plan.utilization)),
        ("feasible", u8::from(plan.feasible).to_string()),
    ])
}
