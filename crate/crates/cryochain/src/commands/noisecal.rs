//! `noisecal` command: Y-factor system noise per measurement row, then a
//! per-frequency de-embed of the DUT contribution. Rows that fail stay in
//! the output with a reason; the run only fails when every row does.

use std::fs;
use std::path::Path;

use cryochain_core::noisecal::{deembed_dut_te, y_factor_te, DeembedContext, NoiseMeasurement};
use cryochain_core::rfnet::{ChainElement, SignalChain};
use log::info;

use crate::config::{build_chain, NoisecalCommand};
use crate::report::{fmt_float, OutputStage};
use crate::AppError;

use super::SummaryRow;

enum RowInput {
    Y(f64),
    Powers { p_hot_w: f64, p_cold_w: f64 },
}

fn parse_measurements(text: &str, label: &str) -> Result<Vec<(f64, RowInput)>, AppError> {
    let bad = |line: usize, msg: String| AppError::invalid(format!("{label}:{line}: {msg}"));
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (header_line, header) =
        lines.next().ok_or_else(|| AppError::invalid(format!("{label}: empty CSV")))?;
    let columns: Vec<String> =
        header.split(',').map(|t| t.trim().to_ascii_lowercase()).collect();
    let powers = match columns.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["freq_hz", "y_linear"] => false,
        ["freq_hz", "p_hot_w", "p_cold_w"] => true,
        _ => {
            return Err(bad(
                header_line,
                format!("header must be freq_hz,y_linear or freq_hz,p_hot_w,p_cold_w, got {header:?}"),
            ))
        }
    };
    let mut rows = Vec::new();
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != columns.len() {
            return Err(bad(
                line_no,
                format!("expected {} fields, got {}", columns.len(), fields.len()),
            ));
        }
        let mut nums = Vec::with_capacity(fields.len());
        for f in &fields {
            let v: f64 =
                f.parse().map_err(|_| bad(line_no, format!("unparseable number {f:?}")))?;
            if !v.is_finite() {
                return Err(bad(line_no, format!("non-finite value {f:?}")));
            }
            nums.push(v);
        }
        if nums[0] <= 0.0 {
            return Err(bad(line_no, format!("frequency {} not positive", nums[0])));
        }
        let input = if powers {
            RowInput::Powers { p_hot_w: nums[1], p_cold_w: nums[2] }
        } else {
            RowInput::Y(nums[1])
        };
        rows.push((nums[0], input));
    }
    if rows.is_empty() {
        return Err(AppError::invalid(format!("{label}: no measurement rows")));
    }
    Ok(rows)
}

/// Quote a CSV field (status strings may contain commas).
fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

pub fn run(cfg: &NoisecalCommand, base_dir: &Path, out_dir: &Path) -> Result<SummaryRow, AppError> {
    let csv_path = if cfg.measurements_csv.is_absolute() {
        cfg.measurements_csv.clone()
    } else {
        base_dir.join(&cfg.measurements_csv)
    };
    let text = fs::read_to_string(&csv_path)
        .map_err(|e| AppError::invalid(format!("{}: {e}", csv_path.display())))?;
    let rows = parse_measurements(&text, &csv_path.display().to_string())?;

    let source = cfg.source.build()?;
    // An empty input chain means the source sits at the DUT plane; model it
    // as a lossless through.
    let input_chain = if cfg.input_chain.is_empty() {
        SignalChain::new(vec![ChainElement::attenuator("through", 0.0, 0.0)])
            .map_err(AppError::invalid)?
    } else {
        build_chain(&cfg.input_chain, base_dir)?
    };
    if !cfg.backend_te_k.is_finite() || cfg.backend_te_k < 0.0 {
        return Err(AppError::invalid(format!(
            "backend_te_k must be finite and nonnegative, got {}",
            cfg.backend_te_k
        )));
    }
    if !cfg.dut_gain_db.is_finite() {
        return Err(AppError::invalid("dut_gain_db must be finite"));
    }
    let ctx = DeembedContext {
        input_chain,
        backend_te_k: cfg.backend_te_k,
        dut_gain_db: cfg.dut_gain_db,
    };
    let plane = cfg.reference_plane.as_deref().unwrap_or("source");
    info!("noisecal: {} rows from {}", rows.len(), csv_path.display());

    let mut out = String::from("freq_hz,te_sys_k,te_dut_k,backend_term_k,status\n");
    let mut n_ok = 0usize;
    let mut te_dut_sum = 0.0;
    for (freq_hz, input) in &rows {
        let measurement = match input {
            RowInput::Y(y) => NoiseMeasurement::from_y(source, *y),
            RowInput::Powers { p_hot_w, p_cold_w } => {
                NoiseMeasurement::from_powers(source, *p_hot_w, *p_cold_w)
            }
        }
        .map(|m| m.with_reference_plane(plane));
        let te_sys = measurement.and_then(|m| y_factor_te(&m));
        let (te_sys_field, te_dut_field, backend_field, status) = match te_sys {
            Err(e) => (String::new(), String::new(), String::new(), format!("error: {e}")),
            Ok(te_sys_k) => match deembed_dut_te(te_sys_k, &ctx, *freq_hz) {
                Err(e) => {
                    (fmt_float(te_sys_k), String::new(), String::new(), format!("error: {e}"))
                }
                Ok(result) => {
                    n_ok += 1;
                    te_dut_sum += result.te_dut_k;
                    let status = if result.warnings.is_empty() {
                        "ok".to_string()
                    } else {
                        let notes: Vec<String> =
                            result.warnings.iter().map(|w| w.to_string()).collect();
                        format!("warning: {}", notes.join("; "))
                    };
                    (
                        fmt_float(te_sys_k),
                        fmt_float(result.te_dut_k),
                        fmt_float(result.backend_term_k),
                        status,
                    )
                }
            },
        };
        out.push_str(&fmt_float(*freq_hz));
        out.push(',');
        out.push_str(&te_sys_field);
        out.push(',');
        out.push_str(&te_dut_field);
        out.push(',');
        out.push_str(&backend_field);
        out.push(',');
        out.push_str(&quoted(&status));
        out.push('\n');
    }

    // The flagged table is still written when everything failed; the exit
    // code alone reports the run as unusable.
    let mut stage = OutputStage::new(out_dir)?;
    stage.write("te_dut.csv", &out)?;
    stage.commit()?;

    if n_ok == 0 {
        return Err(AppError::numerical(format!(
            "{}: all {} measurement rows failed",
            csv_path.display(),
            rows.len()
        )));
    }

    Ok(vec![
        ("n_rows", rows.len().to_string()),
        ("n_ok", n_ok.to_string()),
        ("mean_te_dut_k", fmt_float(te_dut_sum / n_ok as f64)),
    ])
}
