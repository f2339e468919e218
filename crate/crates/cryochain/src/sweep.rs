//! `--sweep key=v1,v2,...`: run one command per value of a single scalar
//! config key, each run in its own subdirectory, plus a concatenated
//! summary CSV at the sweep root.

use serde_json::Value;

use crate::commands::SummaryRow;
use crate::report::sanitize_label;
use crate::AppError;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Dotted path into the config object, e.g. `p_in_w` or `stage.name`.
    pub key: String,
    /// Raw value tokens in sweep order.
    pub tokens: Vec<String>,
}

pub fn parse_sweep(arg: &str) -> Result<SweepSpec, AppError> {
    let (key, list) = arg
        .split_once('=')
        .ok_or_else(|| AppError::invalid("--sweep expects key=v1,v2,..."))?;
    let key = key.trim();
    if key.is_empty() || key.split('.').any(|p| p.is_empty()) {
        return Err(AppError::invalid(format!("--sweep: bad key {key:?}")));
    }
    let tokens: Vec<String> = list.split(',').map(|t| t.trim().to_string()).collect();
    if tokens.is_empty() || tokens.iter().any(String::is_empty) {
        return Err(AppError::invalid("--sweep: empty value list"));
    }
    Ok(SweepSpec { key: key.to_string(), tokens })
}

fn token_value(token: &str) -> Value {
    match serde_json::from_str::<Value>(token) {
        Ok(v) if v.is_number() || v.is_boolean() => v,
        _ => Value::String(token.to_string()),
    }
}

/// Copy of `root` with `dotted` set to the token, parsed as a JSON scalar
/// when possible. Intermediate objects must already exist.
pub fn with_override(root: &Value, dotted: &str, token: &str) -> Result<Value, AppError> {
    let mut value = root.clone();
    let parts: Vec<&str> = dotted.split('.').collect();
    let mut cursor = &mut value;
    for (i, part) in parts[..parts.len() - 1].iter().enumerate() {
        cursor = cursor
            .as_object_mut()
            .ok_or_else(|| {
                AppError::invalid(format!(
                    "sweep key {dotted}: {} is not an object",
                    parts[..i].join(".")
                ))
            })?
            .get_mut(*part)
            .ok_or_else(|| AppError::invalid(format!("sweep key {dotted}: no field {part:?}")))?;
    }
    cursor
        .as_object_mut()
        .ok_or_else(|| {
            AppError::invalid(format!(
                "sweep key {dotted}: {} is not an object",
                parts[..parts.len() - 1].join(".")
            ))
        })?
        .insert(parts[parts.len() - 1].to_string(), token_value(token));
    Ok(value)
}

/// Subdirectory for one sweep point, stable across runs.
pub fn subdir_name(key: &str, index: usize) -> String {
    format!("{}_{index:03}", sanitize_label(key))
}

/// Concatenated per-run summaries: `index,key,value` plus each command's
/// summary columns.
pub fn summary_csv(key: &str, tokens: &[String], rows: &[SummaryRow]) -> String {
    let mut out = String::from("index,key,value");
    if let Some(first) = rows.first() {
        for (name, _) in first {
            out.push(',');
            out.push_str(name);
        }
    }
    out.push('\n');
    for (i, (token, row)) in tokens.iter().zip(rows).enumerate() {
        out.push_str(&i.to_string());
        out.push(',');
        out.push_str(key);
        out.push(',');
        out.push_str(token);
        for (_, value) in row {
            out.push(',');
            out.push_str(value);
        }
        out.push('\n');
    }
    out
}
