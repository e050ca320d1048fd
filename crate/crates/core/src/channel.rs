//! Random channel generation: real Gaussian user-relay matrices,
//! Nakagami relay-destination power gains, and channel-estimation-error
//! perturbation, all driven by explicit counter-based RNG streams so every
//! trial is reproducible independent of scheduling.
//!
//! Only the real model is implemented. A complex L x N channel decomposes
//! into an equivalent real 2L x 2N one at the same SNR, so complex setups
//! are covered by doubling the dimensions; no separate code path exists.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::cmf::EffectiveChannel;
use crate::numerics::Matrix;

/// Relay-destination link model. `Ideal` links are noiseless with
/// sufficient capacity and can never be in outage; `Nakagami` links carry a
/// unit-mean squared gain with fading parameter `q` (q = 1 is Rayleigh,
/// larger q approaches a static link).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RdModel {
    Ideal,
    Nakagami { q: f64 },
}

#[derive(Clone, Copy, Debug)]
pub struct ChannelParams {
    /// Number of users L.
    pub users: usize,
    /// Number of relays M.
    pub relays: usize,
    /// Receive antennas per relay N.
    pub antennas: usize,
    /// Average SNR gamma in dB; equal transmit power and unit noise
    /// variance make the linear SNR the common transmit power.
    pub snr_db: f64,
    pub rd: RdModel,
    /// Channel estimation error variance sigma_e^2 in [0, 1).
    pub cee_var: f64,
}

impl ChannelParams {
    pub fn validate(&self) -> Result<(), String> {
        if self.users == 0 || self.relays == 0 || self.antennas == 0 {
            return Err("L, M, N must all be at least 1".into());
        }
        if !self.snr_db.is_finite() {
            return Err("snr_db must be finite".into());
        }
        if !(0.0..1.0).contains(&self.cee_var) {
            return Err("cee_var must lie in [0, 1)".into());
        }
        if let RdModel::Nakagami { q } = self.rd {
            if !(q > 0.0) || !q.is_finite() {
                return Err("Nakagami q must be positive and finite".into());
            }
        }
        Ok(())
    }

    /// Linear average SNR `10^(snr_db/10)`.
    pub fn gamma(&self) -> f64 {
        10f64.powf(self.snr_db / 10.0)
    }
}

/// One frame's worth of fading: per-relay true channel matrices, their
/// estimation-error-perturbed versions when CEE is active, and the squared
/// relay-destination gains (fixed at 1 for ideal links).
#[derive(Clone, Debug)]
pub struct ChannelRealization {
    /// True L x N coefficient matrices, one per relay.
    pub h: Vec<Matrix>,
    /// Perturbed estimates; `None` when `cee_var = 0` (estimates are exact).
    pub h_est: Option<Vec<Matrix>>,
    /// Squared R-D gains `|f_m|^2`, unit mean.
    pub f_sq: Vec<f64>,
}

impl ChannelRealization {
    /// The channel matrix relay `m` believes in.
    pub fn estimated(&self, m: usize) -> &Matrix {
        match &self.h_est {
            Some(est) => &est[m],
            None => &self.h[m],
        }
    }
}

/// Deterministic RNG stream for one trial, derived from the master seed and
/// the trial's coordinates. Streams for distinct coordinates are
/// independent, so workers may consume trials in any order.
pub fn trial_rng(master_seed: u64, snr_index: u64, trial_index: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[0..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&snr_index.to_le_bytes());
    seed[16..24].copy_from_slice(&trial_index.to_le_bytes());
    seed[24..32].copy_from_slice(&0x7fb5_d32a_9c41_e687u64.to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}

/// Draw one frame: i.i.d. standard normal `h` entries; estimates
/// `h_est = sqrt(1 - sigma_e^2) h + sigma_e eps` with independent standard
/// normal `eps`; squared R-D gains from Gamma(shape q, scale 1/q) so their
/// mean is 1 and variance 1/q. The draw order is fixed, so a given stream
/// always produces the same realization.
pub fn sample_realization<R: Rng>(params: &ChannelParams, rng: &mut R) -> ChannelRealization {
    let (l, n, m_relays) = (params.users, params.antennas, params.relays);

    let mut h = Vec::with_capacity(m_relays);
    for _ in 0..m_relays {
        let mut hm = Matrix::zeros(l, n);
        for i in 0..l {
            for j in 0..n {
                hm[(i, j)] = StandardNormal.sample(rng);
            }
        }
        h.push(hm);
    }

    let h_est = if params.cee_var > 0.0 {
        let keep = (1.0 - params.cee_var).sqrt();
        let noise = params.cee_var.sqrt();
        let mut est = Vec::with_capacity(m_relays);
        for hm in &h {
            let mut em = Matrix::zeros(l, n);
            for i in 0..l {
                for j in 0..n {
                    let eps: f64 = StandardNormal.sample(rng);
                    em[(i, j)] = keep * hm[(i, j)] + noise * eps;
                }
            }
            est.push(em);
        }
        Some(est)
    } else {
        None
    };

    let f_sq = match params.rd {
        RdModel::Ideal => vec![1.0; m_relays],
        RdModel::Nakagami { q } => {
            let gamma_dist = Gamma::new(q, 1.0 / q).expect("valid Nakagami parameter");
            (0..m_relays).map(|_| gamma_dist.sample(rng)).collect()
        }
    };

    ChannelRealization { h, h_est, f_sq }
}

/// Scale a coefficient matrix into the SNR-normalized effective channel
/// `G = sqrt(gamma) * H`.
pub fn effective_channel(h_mat: &Matrix, snr_db: f64) -> EffectiveChannel {
    let gamma = 10f64.powf(snr_db / 10.0);
    EffectiveChannel::new(h_mat.scale(gamma.sqrt()))
}

/// Rate of one relay-destination channel use: `1/2 log2(1 + gamma |f|^2)`.
pub fn rd_channel_rate(f_sq: f64, snr_db: f64) -> f64 {
    assert!(f_sq >= 0.0);
    let gamma = 10f64.powf(snr_db / 10.0);
    0.5 * (1.0 + gamma * f_sq).log2()
}
