//! Forwarding strategies and per-frame system outcomes: standard forwarding
//! with destination-side rank-failure detection, best-relay selection with
//! and without a destination feedback pass over the relay-destination
//! links, plus the closed-form outage compositions used to cross-check the
//! Monte Carlo results.

use crate::channel::{effective_channel, rd_channel_rate, ChannelParams, ChannelRealization, RdModel};
use crate::cmf::{
    ext_cm, gram_std, std_cm, suc_cm, CmfError, ComputingOutcome, EffectiveChannel,
};
use crate::lattice::{is_independent_of, IntVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    StdCM,
    ExtCM,
    SucCM,
}

/// Forwarding strategy. Relay selection is modeled as an argmax over the
/// relays' minimum rates: whether the winner is picked via a destination
/// feedback message (ceil(log2 M) bits per selection interval) or via
/// distributed timers, the outcome is the same relay, so the signaling
/// itself is not simulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    StdFW,
    SelFW,
    /// Selection restricted to relays whose R-D links are out of outage,
    /// which the destination learns from local CSI and feeds back (one
    /// state bit per relay).
    SelFWFeedback,
}

#[derive(Clone, Debug)]
pub enum NetworkError {
    Config(String),
    Domain(String),
    Cmf(CmfError),
}

impl std::fmt::Display for NetworkError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NetworkError::Config(s) => write!(f, "configuration error: {s}"),
            NetworkError::Domain(s) => write!(f, "domain error: {s}"),
            NetworkError::Cmf(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for NetworkError {}

impl From<CmfError> for NetworkError {
    fn from(e: CmfError) -> Self {
        NetworkError::Cmf(e)
    }
}

/// A complete experiment configuration: channel parameters, target sum
/// rate, and the computing/forwarding pairing.
#[derive(Clone, Copy, Debug)]
pub struct Scenario {
    pub params: ChannelParams,
    /// Target sum rate R_t in bits per frame.
    pub target_sum_rate: f64,
    pub scheme: Scheme,
    pub strategy: Strategy,
}

impl Scenario {
    /// Check the supported pairings: standard forwarding runs the standard
    /// scheme with at least as many relays as users over ideal R-D links;
    /// selection forwarding runs the extended or successive scheme (a single
    /// best equation cannot serve L messages); the feedback variant needs
    /// fading R-D links to react to.
    pub fn validate(&self) -> Result<(), NetworkError> {
        self.params.validate().map_err(NetworkError::Config)?;
        if !self.target_sum_rate.is_finite() || self.target_sum_rate < 0.0 {
            return Err(NetworkError::Config("target sum rate must be >= 0".into()));
        }
        match self.strategy {
            Strategy::StdFW => {
                if self.scheme != Scheme::StdCM {
                    return Err(NetworkError::Config(
                        "standard forwarding pairs with the standard computing scheme".into(),
                    ));
                }
                if self.params.relays < self.params.users {
                    return Err(NetworkError::Config(
                        "standard forwarding needs at least as many relays as users".into(),
                    ));
                }
                if self.params.rd != RdModel::Ideal {
                    return Err(NetworkError::Config(
                        "standard forwarding is only modeled over ideal R-D links".into(),
                    ));
                }
            }
            Strategy::SelFW => {
                if self.scheme == Scheme::StdCM {
                    return Err(NetworkError::Config(
                        "selection forwarding needs L independent equations per relay".into(),
                    ));
                }
            }
            Strategy::SelFWFeedback => {
                if self.scheme == Scheme::StdCM {
                    return Err(NetworkError::Config(
                        "selection forwarding needs L independent equations per relay".into(),
                    ));
                }
                if !matches!(self.params.rd, RdModel::Nakagami { .. }) {
                    return Err(NetworkError::Config(
                        "destination feedback requires fading R-D links".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Result of one simulated transmission frame.
#[derive(Clone, Debug)]
pub struct FrameOutcome {
    /// Delivered sum rate in bits per frame (time-slot normalized).
    pub sum_rate: f64,
    pub outage: bool,
    pub rank_failure: bool,
    pub selected_relay: Option<usize>,
    /// Achieved minimum computation rate of the selected relay.
    pub rho: Option<f64>,
    pub rd_outage: bool,
}

/// Run the configured computing scheme at every relay, on the channel each
/// relay has estimated.
pub fn relay_outcomes(
    real: &ChannelRealization,
    sc: &Scenario,
) -> Result<Vec<ComputingOutcome>, NetworkError> {
    let snr = sc.params.snr_db;
    (0..sc.params.relays)
        .map(|m| {
            let ch = effective_channel(real.estimated(m), snr);
            let out = match sc.scheme {
                Scheme::ExtCM => ext_cm(&ch)?,
                Scheme::SucCM => suc_cm(&ch)?,
                Scheme::StdCM => {
                    return Err(NetworkError::Config(
                        "relay_outcomes applies to multi-equation schemes".into(),
                    ))
                }
            };
            Ok(out)
        })
        .collect()
}

/// Minimum rate the destination actually achieves from a relay's equations.
/// With estimation error the relay has committed to an ECV sequence chosen
/// from its estimate, but the combining stage adapts to the channel as
/// received, so each step achieves the optimal-combiner rate of the chosen
/// (possibly suboptimal) ECV over the true channel. Keeping the estimated
/// combiners as well would add an SNR-independent mismatch noise term and
/// pin the outage probability to a floor, which contradicts the finite
/// SNR targets this model is expected to reproduce.
fn achieved_rho(
    real: &ChannelRealization,
    sc: &Scenario,
    m: usize,
    out: &ComputingOutcome,
) -> Result<f64, NetworkError> {
    if real.h_est.is_none() {
        return Ok(out.rho);
    }
    let truth = effective_channel(&real.h[m], sc.params.snr_db);
    let mut worst = f64::MAX;
    for k in 0..out.users() {
        // the extended scheme never reuses equations (empty beta), the
        // successive scheme reuses all k previous ones
        let priors = out.combiners[k].beta.len();
        let r = achieved_step_rate(&truth, &out.ecvs[..priors], &out.ecvs[k])?;
        worst = worst.min(r);
    }
    Ok(worst)
}

/// Best achievable rate of an equation with a fixed ECV over the given
/// channel, with the prior equations available for cancellation:
/// `1/2 log2^+(1 / a^T Q_k a)` with the step Gram form built from the true
/// channel and the committed integer priors.
fn achieved_step_rate(
    truth: &EffectiveChannel,
    prior: &[IntVector],
    ecv: &[i64],
) -> Result<f64, NetworkError> {
    use crate::cmf::{rate_from_form_value, step_gram};
    use crate::numerics::quadratic_form;

    let af: Vec<f64> = ecv.iter().map(|&x| x as f64).collect();
    if prior.is_empty() {
        let q = gram_std(truth).map_err(CmfError::from)?;
        return Ok(rate_from_form_value(q.quadratic_form(&af)));
    }
    let qk = step_gram(truth, prior)?;
    Ok(rate_from_form_value(quadratic_form(&qk, &af)))
}

/// Standard forwarding: every relay decodes its single best equation; the
/// destination keeps the L highest-rate linearly independent ones (greedy,
/// which is optimal for the worst-kept-rate objective) and recovers the
/// messages, or declares rank failure. The delivered sum rate carries the
/// `(L+1)/(M+1)` time-slot normalization so frames are comparable with the
/// selection strategies.
pub fn std_fw_frame(
    real: &ChannelRealization,
    sc: &Scenario,
) -> Result<FrameOutcome, NetworkError> {
    if sc.params.relays < sc.params.users {
        return Err(NetworkError::Config(
            "standard forwarding needs at least as many relays as users".into(),
        ));
    }
    let l = sc.params.users;
    let snr = sc.params.snr_db;

    struct Entry {
        ecv: IntVector,
        reported: f64,
        achieved: f64,
    }
    let mut entries = Vec::with_capacity(sc.params.relays);
    for m in 0..sc.params.relays {
        let ch_est = effective_channel(real.estimated(m), snr);
        let (ecv, reported) = std_cm(&ch_est)?;
        let achieved = if real.h_est.is_none() {
            reported
        } else {
            let truth = effective_channel(&real.h[m], snr);
            achieved_step_rate(&truth, &[], &ecv)?
        };
        entries.push(Entry {
            ecv,
            reported,
            achieved,
        });
    }

    // highest reported rate first; relay index breaks ties
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| {
        entries[b]
            .reported
            .partial_cmp(&entries[a].reported)
            .unwrap()
            .then(a.cmp(&b))
    });

    let mut kept: Vec<IntVector> = Vec::with_capacity(l);
    let mut worst_achieved = f64::MAX;
    for &idx in &order {
        if kept.len() == l {
            break;
        }
        if is_independent_of(&kept, &entries[idx].ecv) {
            worst_achieved = worst_achieved.min(entries[idx].achieved);
            kept.push(entries[idx].ecv.clone());
        }
    }

    if kept.len() < l {
        return Ok(FrameOutcome {
            sum_rate: 0.0,
            outage: sc.target_sum_rate > 0.0,
            rank_failure: true,
            selected_relay: None,
            rho: None,
            rd_outage: false,
        });
    }

    let slot_scale = (l as f64 + 1.0) / (sc.params.relays as f64 + 1.0);
    let sum_rate = l as f64 * worst_achieved * slot_scale;
    Ok(FrameOutcome {
        sum_rate,
        outage: sum_rate < sc.target_sum_rate,
        rank_failure: false,
        selected_relay: None,
        rho: Some(worst_achieved),
        rd_outage: false,
    })
}

/// Selection forwarding over ideal R-D links: the relay with the highest
/// minimum computation rate forwards its L independent equations, so rank
/// failure cannot occur. Ties go to the lowest relay index, matching the
/// distributed timer selection whose outcome this reproduces.
pub fn sel_fw_frame(
    real: &ChannelRealization,
    sc: &Scenario,
) -> Result<FrameOutcome, NetworkError> {
    let outcomes = relay_outcomes(real, sc)?;
    sel_fw_among(real, sc, &outcomes, &(0..outcomes.len()).collect::<Vec<_>>())
}

fn sel_fw_among(
    real: &ChannelRealization,
    sc: &Scenario,
    outcomes: &[ComputingOutcome],
    participants: &[usize],
) -> Result<FrameOutcome, NetworkError> {
    assert!(!participants.is_empty());
    let mut selected = participants[0];
    for &m in &participants[1..] {
        if outcomes[m].rho > outcomes[selected].rho {
            selected = m;
        }
    }
    let rho = achieved_rho(real, sc, selected, &outcomes[selected])?;
    let sum_rate = sc.params.users as f64 * rho;
    Ok(FrameOutcome {
        sum_rate,
        outage: sum_rate < sc.target_sum_rate,
        rank_failure: false,
        selected_relay: Some(selected),
        rho: Some(rho),
        rd_outage: false,
    })
}

/// True when the selected relay's R-D link cannot carry its L equations:
/// `L * r_m < R_t` (strict).
pub fn rd_outage_flag(f_sq: f64, sc: &Scenario) -> bool {
    let r = rd_channel_rate(f_sq, sc.params.snr_db);
    (sc.params.users as f64) * r < sc.target_sum_rate
}

/// Selection forwarding over fading R-D links without destination feedback:
/// the relays select among themselves unaware of the R-D states, and the
/// frame is lost outright if the winner's R-D link is in outage.
pub fn frame_no_feedback(
    real: &ChannelRealization,
    sc: &Scenario,
) -> Result<FrameOutcome, NetworkError> {
    let mut outcome = sel_fw_frame(real, sc)?;
    let selected = outcome.selected_relay.expect("selection always picks a relay");
    if rd_outage_flag(real.f_sq[selected], sc) {
        outcome.rd_outage = true;
        outcome.outage = true;
        outcome.sum_rate = 0.0;
    }
    Ok(outcome)
}

/// Selection forwarding with destination feedback: only relays whose R-D
/// links are good participate in the selection; with no participants the
/// frame is lost.
pub fn frame_with_feedback(
    real: &ChannelRealization,
    sc: &Scenario,
) -> Result<FrameOutcome, NetworkError> {
    let participants: Vec<usize> = (0..sc.params.relays)
        .filter(|&m| !rd_outage_flag(real.f_sq[m], sc))
        .collect();
    if participants.is_empty() {
        return Ok(FrameOutcome {
            sum_rate: 0.0,
            outage: true,
            rank_failure: false,
            selected_relay: None,
            rho: None,
            rd_outage: true,
        });
    }
    let outcomes = relay_outcomes(real, sc)?;
    sel_fw_among(real, sc, &outcomes, &participants)
}

/// Dispatch a frame according to the scenario's strategy and R-D model.
pub fn evaluate_frame(
    real: &ChannelRealization,
    sc: &Scenario,
) -> Result<FrameOutcome, NetworkError> {
    match (sc.strategy, sc.params.rd) {
        (Strategy::StdFW, _) => std_fw_frame(real, sc),
        (Strategy::SelFW, RdModel::Ideal) => sel_fw_frame(real, sc),
        (Strategy::SelFW, RdModel::Nakagami { .. }) => frame_no_feedback(real, sc),
        (Strategy::SelFWFeedback, RdModel::Nakagami { .. }) => frame_with_feedback(real, sc),
        (Strategy::SelFWFeedback, RdModel::Ideal) => Err(NetworkError::Config(
            "destination feedback requires fading R-D links".into(),
        )),
    }
}

/// Closed-form outage probability of one R-D link: the CDF of the squared
/// gain at threshold `(2^(2 R_t / L) - 1) / gamma`. Uses the same
/// Gamma(q, 1/q) convention as the sampler so analytic and Monte Carlo
/// curves are directly comparable.
pub fn analytic_rd_outage(sc: &Scenario) -> Result<f64, NetworkError> {
    use statrs::distribution::{ContinuousCDF, Gamma};
    let q = match sc.params.rd {
        RdModel::Nakagami { q } => q,
        RdModel::Ideal => return Ok(0.0),
    };
    let threshold =
        (2f64.powf(2.0 * sc.target_sum_rate / sc.params.users as f64) - 1.0) / sc.params.gamma();
    let dist = Gamma::new(q, q).map_err(|e| NetworkError::Domain(e.to_string()))?;
    Ok(dist.cdf(threshold))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeedbackMode {
    NoFeedback,
    WithFeedback,
}

/// Compose system outage from the R-D outage probability and the m-relay
/// ideal-link outage probabilities `p_ideal_per_m[m]` for m = 0..=M (index
/// 0 is 1: with nobody participating the frame is always lost).
///
/// Without feedback the selected relay's link fails independently of the
/// selection: `p_rd + (1 - p_rd) * p_ideal[M]`. With feedback the
/// participant count is binomial and each count contributes its own
/// ideal-system term.
pub fn analytic_system_outage(
    p_rd: f64,
    p_ideal_per_m: &[f64],
    mode: FeedbackMode,
) -> Result<f64, NetworkError> {
    if !(0.0..=1.0).contains(&p_rd) {
        return Err(NetworkError::Domain(format!(
            "R-D outage probability {p_rd} outside [0, 1]"
        )));
    }
    for &p in p_ideal_per_m {
        if !(0.0..=1.0).contains(&p) {
            return Err(NetworkError::Domain(format!(
                "ideal outage probability {p} outside [0, 1]"
            )));
        }
    }
    if p_ideal_per_m.is_empty() || (p_ideal_per_m[0] - 1.0).abs() > 1e-12 {
        return Err(NetworkError::Domain(
            "p_ideal_per_m[0] must be 1 (zero participating relays)".into(),
        ));
    }
    let m_relays = p_ideal_per_m.len() - 1;
    let composed = match mode {
        FeedbackMode::NoFeedback => p_rd + (1.0 - p_rd) * p_ideal_per_m[m_relays],
        FeedbackMode::WithFeedback => {
            let mut total = 0.0;
            for (m, &p_ideal) in p_ideal_per_m.iter().enumerate() {
                let good = (1.0 - p_rd).powi(m as i32);
                let bad = p_rd.powi((m_relays - m) as i32);
                total += binomial(m_relays, m) * good * bad * p_ideal;
            }
            total
        }
    };
    Ok(composed.clamp(0.0, 1.0))
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k.min(n));
    let mut c = 1.0f64;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}
