use std::collections::HashMap;
use std::path::PathBuf;

use cmf_core::channel::{ChannelParams, RdModel};
use cmf_core::network::{Scenario, Scheme, Strategy};

use crate::sweep::SweepConfig;

/// Flat `key = value` experiment files; `#` starts a comment. Recognized
/// keys: `L, M, N, Rt, scheme, strategy, rd, q, cee_var, snr_db_start,
/// snr_db_stop, snr_db_step, trials, seed, workers, out`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let mut map: HashMap<&str, &str> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError(format!(
                "line {}: expected 'key = value', got '{raw}'",
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        const KNOWN: &[&str] = &[
            "L", "M", "N", "Rt", "scheme", "strategy", "rd", "q", "cee_var", "snr_db_start",
            "snr_db_stop", "snr_db_step", "trials", "seed", "workers", "out",
        ];
        if !KNOWN.contains(&key) {
            return Err(ConfigError(format!("line {}: unknown key '{key}'", lineno + 1)));
        }
        if map.insert(key, value).is_some() {
            return Err(ConfigError(format!("duplicate key '{key}'")));
        }
    }

    let required = |key: &str| -> Result<&str, ConfigError> {
        map.get(key)
            .copied()
            .ok_or_else(|| ConfigError(format!("missing required key '{key}'")))
    };
    let parse_usize = |key: &str, v: &str| -> Result<usize, ConfigError> {
        v.parse()
            .map_err(|_| ConfigError(format!("key '{key}': '{v}' is not a count")))
    };
    let parse_f64 = |key: &str, v: &str| -> Result<f64, ConfigError> {
        v.parse()
            .map_err(|_| ConfigError(format!("key '{key}': '{v}' is not a number")))
    };
    let parse_u64 = |key: &str, v: &str| -> Result<u64, ConfigError> {
        v.parse()
            .map_err(|_| ConfigError(format!("key '{key}': '{v}' is not an integer")))
    };

    let users = parse_usize("L", required("L")?)?;
    let relays = parse_usize("M", required("M")?)?;
    let antennas = parse_usize("N", required("N")?)?;
    let target_sum_rate = parse_f64("Rt", required("Rt")?)?;

    let scheme = match required("scheme")? {
        "std" => Scheme::StdCM,
        "ext" => Scheme::ExtCM,
        "suc" => Scheme::SucCM,
        other => return Err(ConfigError(format!("scheme must be std|ext|suc, got '{other}'"))),
    };
    let strategy = match required("strategy")? {
        "stdfw" => Strategy::StdFW,
        "selfw" => Strategy::SelFW,
        "selfw_fb" => Strategy::SelFWFeedback,
        other => {
            return Err(ConfigError(format!(
                "strategy must be stdfw|selfw|selfw_fb, got '{other}'"
            )))
        }
    };
    let rd = match map.get("rd").copied().unwrap_or("ideal") {
        "ideal" => RdModel::Ideal,
        "nakagami" => {
            let q = parse_f64("q", required("q")?)?;
            RdModel::Nakagami { q }
        }
        other => return Err(ConfigError(format!("rd must be ideal|nakagami, got '{other}'"))),
    };
    let cee_var = match map.get("cee_var") {
        Some(v) => parse_f64("cee_var", v)?,
        None => 0.0,
    };

    let start = parse_f64("snr_db_start", required("snr_db_start")?)?;
    let stop = parse_f64("snr_db_stop", required("snr_db_stop")?)?;
    let step = parse_f64("snr_db_step", required("snr_db_step")?)?;
    if !(step > 0.0) {
        return Err(ConfigError("snr_db_step must be positive".into()));
    }
    if stop < start {
        return Err(ConfigError("snr_db_stop must be >= snr_db_start".into()));
    }
    let n_points = ((stop - start) / step + 1e-9).floor() as usize + 1;
    let snr_db_grid: Vec<f64> = (0..n_points).map(|i| start + i as f64 * step).collect();

    let trials_per_point = parse_u64("trials", required("trials")?)?;
    let master_seed = parse_u64("seed", required("seed")?)?;
    let workers = match map.get("workers") {
        Some(v) => parse_usize("workers", v)?,
        None => 0,
    };
    let output_path = map.get("out").map(PathBuf::from);

    let cfg = SweepConfig {
        scenario: Scenario {
            params: ChannelParams {
                users,
                relays,
                antennas,
                snr_db: start,
                rd,
                cee_var,
            },
            target_sum_rate,
            scheme,
            strategy,
        },
        snr_db_grid,
        trials_per_point,
        master_seed,
        output_path,
        workers,
    };
    cfg.validate().map_err(|e| ConfigError(e.to_string()))?;
    Ok(cfg)
}
