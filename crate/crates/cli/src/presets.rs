use cmf_core::channel::{ChannelParams, RdModel};
use cmf_core::network::{Scenario, Scheme, Strategy};

use crate::sweep::SweepConfig;

/// Desk-scale default; deep outage tails need more and can be requested
/// with `--trials`.
pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 1;

/// One curve of a figure: a label for the output file plus its sweep.
#[derive(Clone, Debug)]
pub struct LabeledSweep {
    pub label: String,
    pub config: SweepConfig,
}

/// A figure or table reproduced as a bundle of sweeps, one per curve.
#[derive(Clone, Debug)]
pub struct FigurePreset {
    pub name: String,
    pub sweeps: Vec<LabeledSweep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownPreset(pub String);

impl std::fmt::Display for UnknownPreset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "unknown preset '{}'; expected one of fig2..fig9 or table1",
            self.0
        )
    }
}

impl std::error::Error for UnknownPreset {}

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..n).map(|i| start + i as f64 * step).collect()
}

fn scenario(
    l: usize,
    m: usize,
    n: usize,
    rt: f64,
    scheme: Scheme,
    strategy: Strategy,
    rd: RdModel,
    cee_var: f64,
) -> Scenario {
    Scenario {
        params: ChannelParams {
            users: l,
            relays: m,
            antennas: n,
            snr_db: 0.0, // overridden per grid point
            rd,
            cee_var,
        },
        target_sum_rate: rt,
        scheme,
        strategy,
    }
}

fn sweep(label: &str, sc: Scenario, snr_db_grid: Vec<f64>) -> LabeledSweep {
    LabeledSweep {
        label: label.to_string(),
        config: SweepConfig {
            scenario: sc,
            snr_db_grid,
            trials_per_point: DEFAULT_TRIALS,
            master_seed: DEFAULT_SEED,
            output_path: None,
            workers: 0,
        },
    }
}

/// The experiment bundles behind the standard figures and the SNR-target
/// table: exact network parameters per curve, desk-scale trial defaults.
pub fn figure_presets(name: &str) -> Result<FigurePreset, UnknownPreset> {
    let ideal = RdModel::Ideal;
    let sweeps = match name {
        // rank-failure probability of the original method, ideal R-D links
        "fig2" => vec![
            sweep("orig_L2_M2_N2", scenario(2, 2, 2, 2.0, Scheme::StdCM, Strategy::StdFW, ideal, 0.0), grid(0.0, 30.0, 5.0)),
            sweep("orig_L2_M4_N2", scenario(2, 4, 2, 2.0, Scheme::StdCM, Strategy::StdFW, ideal, 0.0), grid(0.0, 30.0, 5.0)),
            sweep("orig_L4_M4_N4", scenario(4, 4, 4, 2.0, Scheme::StdCM, Strategy::StdFW, ideal, 0.0), grid(0.0, 30.0, 5.0)),
            sweep("orig_L2_M2_N4", scenario(2, 2, 4, 2.0, Scheme::StdCM, Strategy::StdFW, ideal, 0.0), grid(0.0, 30.0, 5.0)),
        ],
        // average sum rate, three methods, L in {2, 4}, M = 4, N = 4
        "fig3" | "fig4" => {
            let mut v = Vec::new();
            for &l in &[2usize, 4] {
                v.push(sweep(
                    &format!("orig_L{l}"),
                    scenario(l, 4, 4, 2.0, Scheme::StdCM, Strategy::StdFW, ideal, 0.0),
                    grid(0.0, 30.0, 5.0),
                ));
                v.push(sweep(
                    &format!("ext_L{l}"),
                    scenario(l, 4, 4, 2.0, Scheme::ExtCM, Strategy::SelFW, ideal, 0.0),
                    grid(0.0, 30.0, 5.0),
                ));
                v.push(sweep(
                    &format!("suc_L{l}"),
                    scenario(l, 4, 4, 2.0, Scheme::SucCM, Strategy::SelFW, ideal, 0.0),
                    grid(0.0, 30.0, 5.0),
                ));
            }
            v
        }
        // outage of extended and successive for several (M, N), L = 4, R_t = 1
        "fig5" => {
            let mut v = Vec::new();
            for &(m, n) in &[(2usize, 2usize), (4, 2), (2, 4)] {
                v.push(sweep(
                    &format!("ext_M{m}_N{n}"),
                    scenario(4, m, n, 1.0, Scheme::ExtCM, Strategy::SelFW, ideal, 0.0),
                    grid(0.0, 30.0, 5.0),
                ));
                v.push(sweep(
                    &format!("suc_M{m}_N{n}"),
                    scenario(4, m, n, 1.0, Scheme::SucCM, Strategy::SelFW, ideal, 0.0),
                    grid(0.0, 30.0, 5.0),
                ));
            }
            v
        }
        // per-relay average sum rate against the number of users at 10 dB
        "fig6" => {
            let mut v = Vec::new();
            for &n in &[2usize, 6] {
                for l in 1..=6usize {
                    v.push(sweep(
                        &format!("ext_N{n}_L{l}"),
                        scenario(l, 1, n, 1.0, Scheme::ExtCM, Strategy::SelFW, ideal, 0.0),
                        vec![10.0],
                    ));
                    v.push(sweep(
                        &format!("suc_N{n}_L{l}"),
                        scenario(l, 1, n, 1.0, Scheme::SucCM, Strategy::SelFW, ideal, 0.0),
                        vec![10.0],
                    ));
                }
            }
            v
        }
        // successive method with destination feedback over Nakagami links
        "fig7" => {
            let mut v = vec![sweep(
                "suc_ideal",
                scenario(4, 2, 4, 2.0, Scheme::SucCM, Strategy::SelFW, ideal, 0.0),
                grid(0.0, 30.0, 5.0),
            )];
            for &q in &[0.5f64, 1.0, 2.0, 3.0] {
                v.push(sweep(
                    &format!("suc_q{q}_wf"),
                    scenario(4, 2, 4, 2.0, Scheme::SucCM, Strategy::SelFWFeedback, RdModel::Nakagami { q }, 0.0),
                    grid(0.0, 30.0, 5.0),
                ));
            }
            v
        }
        // feedback against no feedback for the successive method
        "fig8" => {
            let mut v = vec![sweep(
                "suc_ideal",
                scenario(4, 2, 4, 2.0, Scheme::SucCM, Strategy::SelFW, ideal, 0.0),
                grid(0.0, 30.0, 5.0),
            )];
            for &q in &[1.0f64, 3.0] {
                v.push(sweep(
                    &format!("suc_q{q}_nf"),
                    scenario(4, 2, 4, 2.0, Scheme::SucCM, Strategy::SelFW, RdModel::Nakagami { q }, 0.0),
                    grid(0.0, 30.0, 5.0),
                ));
                v.push(sweep(
                    &format!("suc_q{q}_wf"),
                    scenario(4, 2, 4, 2.0, Scheme::SucCM, Strategy::SelFWFeedback, RdModel::Nakagami { q }, 0.0),
                    grid(0.0, 30.0, 5.0),
                ));
            }
            v
        }
        // channel estimation error sensitivity of extended vs successive
        "fig9" => {
            let mut v = Vec::new();
            for &cee in &[0.0f64, 0.01, 0.05] {
                v.push(sweep(
                    &format!("ext_cee{cee}"),
                    scenario(4, 1, 4, 1.0, Scheme::ExtCM, Strategy::SelFW, ideal, cee),
                    grid(0.0, 16.0, 2.0),
                ));
                v.push(sweep(
                    &format!("suc_cee{cee}"),
                    scenario(4, 1, 4, 1.0, Scheme::SucCM, Strategy::SelFW, ideal, cee),
                    grid(0.0, 16.0, 2.0),
                ));
            }
            v
        }
        // SNR needed for 1% outage, clean and with estimation error
        "table1" => {
            let mut v = Vec::new();
            for &cee in &[0.0f64, 0.05] {
                v.push(sweep(
                    &format!("ext_cee{cee}"),
                    scenario(4, 1, 4, 1.0, Scheme::ExtCM, Strategy::SelFW, ideal, cee),
                    grid(2.0, 14.0, 1.0),
                ));
                v.push(sweep(
                    &format!("suc_cee{cee}"),
                    scenario(4, 1, 4, 1.0, Scheme::SucCM, Strategy::SelFW, ideal, cee),
                    grid(2.0, 14.0, 1.0),
                ));
            }
            v
        }
        other => return Err(UnknownPreset(other.to_string())),
    };
    Ok(FigurePreset {
        name: name.to_string(),
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for name in ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "table1"] {
            let preset = figure_presets(name).unwrap();
            assert!(!preset.sweeps.is_empty(), "{name} has no sweeps");
            for s in &preset.sweeps {
                s.config.validate().unwrap_or_else(|e| {
                    panic!("{name}/{}: {e}", s.label);
                });
                assert_eq!(s.config.trials_per_point, DEFAULT_TRIALS);
            }
        }
    }

    #[test]
    fn cee_table_settings() {
        let preset = figure_presets("fig9").unwrap();
        assert_eq!(preset.sweeps.len(), 6);
        for s in &preset.sweeps {
            let p = s.config.scenario.params;
            assert_eq!((p.users, p.relays, p.antennas), (4, 1, 4));
            assert_eq!(s.config.scenario.target_sum_rate, 1.0);
        }
        let cees: Vec<f64> = preset
            .sweeps
            .iter()
            .map(|s| s.config.scenario.params.cee_var)
            .collect();
        assert!(cees.contains(&0.0) && cees.contains(&0.01) && cees.contains(&0.05));
    }

    #[test]
    fn feedback_preset_settings() {
        let preset = figure_presets("fig7").unwrap();
        let p = preset.sweeps[1].config.scenario.params;
        assert_eq!((p.users, p.relays, p.antennas), (4, 2, 4));
        assert_eq!(preset.sweeps[1].config.scenario.target_sum_rate, 2.0);
        assert!(matches!(p.rd, RdModel::Nakagami { .. }));
    }

    #[test]
    fn unknown_name_rejected() {
        assert!(figure_presets("fig99").is_err());
    }
}
