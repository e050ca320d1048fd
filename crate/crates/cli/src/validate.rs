//! Self-check suites runnable from the command line: cross-checks of the
//! fast paths against exhaustive oracles (`oracles`), the closed-form and
//! dominance properties of the computing schemes (`lemma`), and agreement
//! between Monte Carlo and the analytic outage compositions (`analytic`).

use cmf_core::channel::{
    effective_channel, sample_realization, trial_rng, ChannelParams, RdModel,
};
use cmf_core::cmf::{
    ext_cm, gram_std, iflr_oracle, psd_constrained_min, rate_from_form_value, rate_of, suc_cm,
    EffectiveChannel, SucStepState,
};
use cmf_core::lattice::{brute_force_svp, hnf, svp_enumerate, IntMatrix};
use cmf_core::network::{
    analytic_rd_outage, analytic_system_outage, frame_no_feedback, frame_with_feedback,
    rd_outage_flag, sel_fw_frame, FeedbackMode, Scenario, Scheme, Strategy,
};
use cmf_core::numerics::{norm_sq, quadratic_form, symmetric_eigenvalues};
use rand::Rng;

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {} ({})\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        out.push_str(&format!(
            "suite '{}': {}\n",
            self.suite,
            if self.passed() { "all checks passed" } else { "FAILURES PRESENT" }
        ));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownSuite(pub String);

impl std::fmt::Display for UnknownSuite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "unknown suite '{}'; expected oracles|lemma|analytic", self.0)
    }
}

impl std::error::Error for UnknownSuite {}

pub fn run_suite(name: &str) -> Result<SuiteReport, UnknownSuite> {
    match name {
        "oracles" => Ok(oracles_suite()),
        "lemma" => Ok(lemma_suite()),
        "analytic" => Ok(analytic_suite()),
        other => Err(UnknownSuite(other.to_string())),
    }
}

fn ideal_params(l: usize, n: usize) -> ChannelParams {
    ChannelParams {
        users: l,
        relays: 1,
        antennas: n,
        snr_db: 10.0,
        rd: RdModel::Ideal,
        cee_var: 0.0,
    }
}

fn random_channel(l: usize, n: usize, snr_db: f64, stream: u64) -> EffectiveChannel {
    let mut params = ideal_params(l, n);
    params.snr_db = snr_db;
    let real = sample_realization(&params, &mut trial_rng(0x7a1, 0, stream));
    effective_channel(&real.h[0], snr_db)
}

fn check(name: &str, failures: usize, total: usize, extra: &str) -> CheckResult {
    CheckResult {
        name: name.into(),
        passed: failures == 0,
        detail: if extra.is_empty() {
            format!("{}/{} instances ok", total - failures, total)
        } else {
            format!("{}/{} instances ok; {extra}", total - failures, total)
        },
    }
}

fn oracles_suite() -> SuiteReport {
    let mut checks = Vec::new();

    // sphere enumeration against the exhaustive box scan
    let total = 200;
    let mut failures = 0;
    let mut skipped = 0;
    for t in 0..total {
        let l = 2 + t % 3;
        let ch = random_channel(l, l, 10.0, 1000 + t as u64);
        let q = gram_std(&ch).expect("gram");
        let radius = (0..l).map(|i| q.as_matrix()[(i, i)]).fold(f64::MAX, f64::min);
        let needed = (radius / q.min_eigenvalue()).sqrt().ceil() as i64;
        if needed > 8 {
            skipped += 1;
            continue;
        }
        let (_, v1) = svp_enumerate(&q, radius).expect("enumerate");
        let (_, v2) = brute_force_svp(&q, 8, None).expect("brute force");
        if (v1 - v2).abs() > 1e-9 * v2.max(1.0) {
            failures += 1;
        }
    }
    checks.push(check(
        "svp-enumeration-vs-box-oracle",
        failures,
        total - skipped,
        &format!("{skipped} skipped for box coverage"),
    ));

    // Hermite normal form contract
    let total = 200;
    let mut failures = 0;
    let mut rng = trial_rng(0x44e, 0, 0);
    for _ in 0..total {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let flat: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-9..=9)).collect();
        let row_refs: Vec<&[i64]> = flat.chunks(cols).collect();
        let a = IntMatrix::from_i64_rows(&row_refs);
        let (h, u) = hnf(&a);
        if a.matmul(&u) != h || !u.is_unimodular() {
            failures += 1;
        }
    }
    checks.push(check("hnf-transform-contract", failures, total, ""));

    // projection-lattice basis: projector times lift reproduces the basis
    let total = 50;
    let mut failures = 0;
    for t in 0..total {
        let l = 3 + t % 2;
        let k = 1 + t % (l - 1);
        let ch = random_channel(l, l, 10.0, 2000 + t as u64);
        let out = match ext_cm(&ch) {
            Ok(o) => o,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let state = match SucStepState::new(&ch, &out.ecvs[..k]) {
            Ok(s) => s,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let projected = state
            .f_proj
            .as_matrix()
            .matmul(&state.reduction.lift.to_real());
        if projected.max_abs_diff(&state.reduction.basis) > 1e-10 {
            failures += 1;
        }
    }
    checks.push(check("projection-basis-reconstruction", failures, total, ""));

    SuiteReport {
        suite: "oracles".into(),
        checks,
    }
}

fn lemma_suite() -> SuiteReport {
    let mut checks = Vec::new();

    // sequential selection achieves the joint-selection sum rate
    let mut failures = 0;
    let total = 120;
    for t in 0..total {
        let l = if t < 100 { 2 } else { 3 };
        let ch = random_channel(l, l, 10.0, 3000 + t as u64);
        let out = ext_cm(&ch).expect("ext");
        let bound = out
            .ecvs
            .iter()
            .flat_map(|a| a.iter().map(|x| x.abs()))
            .max()
            .unwrap()
            .max(8);
        let joint = iflr_oracle(&ch, bound).expect("oracle");
        if (out.sum_rate - joint).abs() > 1e-9 {
            failures += 1;
        }
    }
    checks.push(check("sequential-equals-joint-sum-rate", failures, total, ""));

    // successive never trails extended
    let mut failures = 0;
    let total = 300;
    for t in 0..total {
        let ch = random_channel(4, 4, [0.0, 10.0, 20.0][t % 3], 4000 + t as u64);
        let ext = ext_cm(&ch).expect("ext");
        let suc = suc_cm(&ch).expect("suc");
        if suc.sum_rate < ext.sum_rate - 1e-9 {
            failures += 1;
        }
    }
    checks.push(check("successive-dominates-extended", failures, total, ""));

    // step Gram forms are semi-definite and vanish on the prior ECVs
    let mut failures = 0;
    let total = 50;
    for t in 0..total {
        let ch = random_channel(3, 3, 10.0, 5000 + t as u64);
        let out = suc_cm(&ch).expect("suc");
        for k in 1..out.users() {
            let state = SucStepState::new(&ch, &out.ecvs[..k]).expect("state");
            let qk = state.full_gram();
            let eig = symmetric_eigenvalues(&qk);
            if eig[0] < -1e-10 {
                failures += 1;
            }
            for a in &out.ecvs[..k] {
                let af: Vec<f64> = a.iter().map(|&x| x as f64).collect();
                if quadratic_form(&qk, &af).abs() > 1e-10 {
                    failures += 1;
                }
            }
        }
    }
    checks.push(check("step-gram-structure", failures, total, ""));

    // closed-form combiners sit at the objective minimum
    let mut failures = 0;
    let total = 50;
    let mut rng = trial_rng(0x7e2, 1, 0);
    for t in 0..total {
        let ch = random_channel(3, 3, 10.0, 6000 + t as u64);
        let out = suc_cm(&ch).expect("suc");
        let k = 1 + t % 2;
        let prior = &out.ecvs[..k];
        let a = &out.ecvs[k];
        let objective = |b: &[f64], beta: &[f64]| {
            let mut mis = ch.matrix().mul_vec(b);
            for (p, &c) in prior.iter().zip(beta) {
                for (m, &pi) in mis.iter_mut().zip(p) {
                    *m += c * pi as f64;
                }
            }
            for (m, &ai) in mis.iter_mut().zip(a) {
                *m -= ai as f64;
            }
            norm_sq(b) + norm_sq(&mis)
        };
        let f0 = objective(&out.combiners[k].b, &out.combiners[k].beta);
        let consistent = (rate_of(&ch, &out.combiners[k].b, &out.combiners[k].beta, prior, a)
            - out.raw_step_rates[k])
            .abs()
            <= 1e-9;
        let mut minimal = true;
        for _ in 0..100 {
            let b: Vec<f64> = out.combiners[k]
                .b
                .iter()
                .map(|x| x + rng.gen_range(-1e-3..1e-3))
                .collect();
            let beta: Vec<f64> = out.combiners[k]
                .beta
                .iter()
                .map(|x| x + rng.gen_range(-1e-3..1e-3))
                .collect();
            if objective(&b, &beta) < f0 {
                minimal = false;
            }
        }
        if !(consistent && minimal) {
            failures += 1;
        }
    }
    checks.push(check("combiner-optimality", failures, total, ""));

    // reduced step optimization equals direct constrained enumeration
    let mut failures = 0;
    let total = 50;
    for t in 0..total {
        let l = 2 + t % 3;
        let ch = random_channel(l, l, 10.0, 7000 + t as u64);
        let out = suc_cm(&ch).expect("suc");
        for k in 0..out.users() {
            let state = SucStepState::new(&ch, &out.ecvs[..k]).expect("state");
            let qk = state.full_gram();
            let bound = out.ecvs[k].iter().map(|x| x.abs()).max().unwrap().max(6);
            let (_, val) = psd_constrained_min(&qk, &out.ecvs[..k], bound).expect("direct");
            if (rate_from_form_value(val) - out.raw_step_rates[k]).abs() > 1e-9 {
                failures += 1;
            }
        }
    }
    checks.push(check("reduced-step-equals-direct", failures, total, ""));

    SuiteReport {
        suite: "lemma".into(),
        checks,
    }
}

fn analytic_suite() -> SuiteReport {
    let mut checks = Vec::new();

    // sampled R-D outage frequency against the closed-form CDF
    let mut failures = 0;
    let configs = [(1.0f64, 5.0f64), (2.0, 8.0), (0.5, 3.0)];
    for (i, &(q, snr_db)) in configs.iter().enumerate() {
        let sc = Scenario {
            params: ChannelParams {
                users: 2,
                relays: 1,
                antennas: 2,
                snr_db,
                rd: RdModel::Nakagami { q },
                cee_var: 0.0,
            },
            target_sum_rate: 1.5,
            scheme: Scheme::ExtCM,
            strategy: Strategy::SelFW,
        };
        let p = analytic_rd_outage(&sc).expect("cdf");
        let n = 200_000u64;
        let mut hits = 0u64;
        for t in 0..n {
            let real = sample_realization(&sc.params, &mut trial_rng(0xa0 + i as u64, 0, t));
            hits += rd_outage_flag(real.f_sq[0], &sc) as u64;
        }
        let emp = hits as f64 / n as f64;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        if (emp - p).abs() > 3.0 * sigma {
            failures += 1;
        }
    }
    checks.push(check("rd-outage-sampler-vs-cdf", failures, configs.len(), ""));

    // composed no-feedback / with-feedback outage against frame-level MC
    let mut failures = 0;
    let snrs = [6.0f64, 10.0, 14.0];
    let trials = 20_000u64;
    for (i, &snr_db) in snrs.iter().enumerate() {
        let base = Scenario {
            params: ChannelParams {
                users: 2,
                relays: 2,
                antennas: 2,
                snr_db,
                rd: RdModel::Nakagami { q: 1.0 },
                cee_var: 0.0,
            },
            target_sum_rate: 1.0,
            scheme: Scheme::ExtCM,
            strategy: Strategy::SelFW,
        };

        // per-relay ideal outage from single-relay frames
        let mut single = base;
        single.params.relays = 1;
        single.params.rd = RdModel::Ideal;
        let mut relay_out = 0u64;
        for t in 0..trials {
            let real = sample_realization(&single.params, &mut trial_rng(0xb0 + i as u64, 0, t));
            relay_out += sel_fw_frame(&real, &single).expect("frame").outage as u64;
        }
        let p_rel = relay_out as f64 / trials as f64;
        let sigma_rel = (p_rel * (1.0 - p_rel) / trials as f64).sqrt();

        let p_rd = analytic_rd_outage(&base).expect("cdf");
        let p_ideal = [1.0, p_rel, p_rel * p_rel];

        for (mode, strategy) in [
            (FeedbackMode::NoFeedback, Strategy::SelFW),
            (FeedbackMode::WithFeedback, Strategy::SelFWFeedback),
        ] {
            let composed = analytic_system_outage(p_rd, &p_ideal, mode).expect("compose");
            let mut sc = base;
            sc.strategy = strategy;
            let mut out = 0u64;
            for t in 0..trials {
                let real =
                    sample_realization(&sc.params, &mut trial_rng(0xc0 + i as u64, 0, t));
                let frame = match mode {
                    FeedbackMode::NoFeedback => frame_no_feedback(&real, &sc),
                    FeedbackMode::WithFeedback => frame_with_feedback(&real, &sc),
                }
                .expect("frame");
                out += frame.outage as u64;
            }
            let emp = out as f64 / trials as f64;
            let sigma_mc = (emp * (1.0 - emp) / trials as f64).sqrt();
            // the composition inherits error from the estimated p_rel
            let dcomp = match mode {
                FeedbackMode::NoFeedback => (1.0 - p_rd) * 2.0 * p_rel,
                FeedbackMode::WithFeedback => {
                    (1.0 - p_rd) * (1.0 - p_rd) * 2.0 * p_rel
                        + 2.0 * (1.0 - p_rd) * p_rd
                }
            };
            let sigma = (sigma_mc * sigma_mc + dcomp * dcomp * sigma_rel * sigma_rel).sqrt();
            if (emp - composed).abs() > 3.0 * sigma {
                failures += 1;
            }
        }
    }
    checks.push(check(
        "system-outage-composition-vs-monte-carlo",
        failures,
        snrs.len() * 2,
        "",
    ));

    SuiteReport {
        suite: "analytic".into(),
        checks,
    }
}
