//! `readout` command: counter-based shot simulation, rotation alignment,
//! threshold classification, and a Q-axis histogram. Outputs are bitwise
//! deterministic for a given (config, seed) and independent of worker count.

use std::path::Path;
use std::thread;

use cryochain_core::readout::{
    classify_and_confusion, fidelity_from_snr, q_histogram, snr_estimate, BlobModel, IQPoint,
    ReadoutError, ShotSet,
};
use log::info;
use serde::Serialize;

use crate::config::ReadoutCommand;
use crate::report::{fmt_float, round_sig, OutputStage};
use crate::AppError;

use super::{readout_eval_error, SummaryRow};

#[derive(Serialize)]
struct Summary {
    snr_model: f64,
    snr_eq1: f64,
    fidelity_from_snr: f64,
    f0: f64,
    f1: f64,
    f_avg: f64,
    threshold_q: f64,
    rotation_angle_rad: f64,
    n_per_state: u64,
    seed: u64,
}

/// Split `0..2n` into contiguous ranges, one thread each. The generator is
/// counter-based, so concatenating the parts reproduces the serial run.
fn generate_sharded(
    model: &BlobModel,
    n_per_state: usize,
    seed: u64,
    workers: usize,
) -> Result<ShotSet, AppError> {
    let total = n_per_state
        .checked_mul(2)
        .ok_or_else(|| AppError::invalid("n_per_state overflows the shot counter"))?;
    let w = workers.min(total).max(1);
    let chunk = total.div_ceil(w);
    let mut parts: Vec<Vec<IQPoint>> = Vec::new();
    thread::scope(|scope| -> Result<(), AppError> {
        let mut handles = Vec::new();
        for i in 0..w {
            let start = i * chunk;
            let end = ((i + 1) * chunk).min(total);
            if start >= end {
                break;
            }
            handles.push(scope.spawn(move || model.generate_range(start, end, n_per_state, seed)));
        }
        for handle in handles {
            let part = handle
                .join()
                .map_err(|_| AppError::numerical("shot generation thread panicked"))?
                .map_err(readout_eval_error)?;
            parts.push(part);
        }
        Ok(())
    })?;
    let points: Vec<IQPoint> = parts.into_iter().flatten().collect();
    ShotSet::from_points(points).map_err(readout_eval_error)
}

pub fn run(
    cfg: &ReadoutCommand,
    seed_override: Option<u64>,
    out_dir: &Path,
) -> Result<SummaryRow, AppError> {
    let seed = seed_override.unwrap_or(cfg.seed);
    if cfg.n_per_state == 0 {
        return Err(AppError::invalid("n_per_state must be at least 1"));
    }
    if cfg.workers == 0 {
        return Err(AppError::invalid("workers must be at least 1"));
    }
    if cfg.n_bins == 0 {
        return Err(AppError::invalid("n_bins must be at least 1"));
    }
    let resonator = cfg.resonator.build()?;
    let readout_cfg = cfg.readout_config()?;

    let model = BlobModel::from_chain(&readout_cfg, &resonator).map_err(readout_eval_error)?;
    // Coincident model centers leave no discrimination axis; fail before
    // sampling noise manufactures one.
    if model.c0() == model.c1() {
        return Err(readout_eval_error(ReadoutError::DegenerateBlobs));
    }
    let snr_model = model.snr().map_err(readout_eval_error)?;
    info!(
        "readout: {} shots per state, seed {seed}, {} workers, model SNR {snr_model:.3}",
        cfg.n_per_state, cfg.workers
    );
    let shots = generate_sharded(&model, cfg.n_per_state, seed, cfg.workers)?;
    let confusion = classify_and_confusion(&shots).map_err(readout_eval_error)?;
    let snr_eq1 = snr_estimate(&shots).map_err(readout_eval_error)?;
    let fidelity = fidelity_from_snr(snr_model).map_err(readout_eval_error)?;
    let histogram = q_histogram(&confusion.rotated, cfg.n_bins).map_err(readout_eval_error)?;

    let mut shots_csv = String::from("i,q,true_state,assigned_state\n");
    for (point, assigned) in shots.shots().iter().zip(&confusion.assigned) {
        shots_csv.push_str(&fmt_float(point.i));
        shots_csv.push(',');
        shots_csv.push_str(&fmt_float(point.q));
        shots_csv.push(',');
        shots_csv.push_str(&point.true_state.index().to_string());
        shots_csv.push(',');
        shots_csv.push_str(&assigned.index().to_string());
        shots_csv.push('\n');
    }

    let mut hist_csv = String::from("bin_center_q,count_state0,count_state1\n");
    for (i, center) in histogram.bin_centers_q.iter().enumerate() {
        hist_csv.push_str(&fmt_float(*center));
        hist_csv.push(',');
        hist_csv.push_str(&histogram.count_state0[i].to_string());
        hist_csv.push(',');
        hist_csv.push_str(&histogram.count_state1[i].to_string());
        hist_csv.push('\n');
    }

    let summary = Summary {
        snr_model: round_sig(snr_model),
        snr_eq1: round_sig(snr_eq1),
        fidelity_from_snr: round_sig(fidelity),
        f0: round_sig(confusion.f0),
        f1: round_sig(confusion.f1),
        f_avg: round_sig(confusion.f_avg),
        threshold_q: round_sig(confusion.threshold_q),
        rotation_angle_rad: round_sig(confusion.angle_rad),
        n_per_state: cfg.n_per_state as u64,
        seed,
    };
    let mut summary_json = serde_json::to_string_pretty(&summary)
        .map_err(|e| AppError::invalid(format!("summary serialization: {e}")))?;
    summary_json.push('\n');

    let mut stage = OutputStage::new(out_dir)?;
    stage.write("shots.csv", &shots_csv)?;
    stage.write("histogram.csv", &hist_csv)?;
    stage.write("summary.json", &summary_json)?;
    stage.commit()?;

    Ok(vec![
        ("snr_model", fmt_float(snr_model)),
        ("snr_eq1", fmt_float(snr_eq1)),
        ("fidelity_from_snr", fmt_float(fidelity)),
        ("f0", fmt_float(confusion.f0)),
        ("f1", fmt_float(confusion.f1)),
        ("f_avg", fmt_float(confusion.f_avg)),
    ])
}
