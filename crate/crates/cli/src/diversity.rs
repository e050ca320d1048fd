use crate::sweep::OutageCurve;

/// Diversity-order estimate: the negated least-squares slope of
/// `log10 p_out` against `log10 gamma` over the highest-SNR points that are
/// still statistically resolvable.
#[derive(Clone, Copy, Debug)]
pub struct DiversityEstimate {
    pub d_hat: f64,
    /// Half-width of a 95% confidence band from the regression standard
    /// error; zero when only two points were fit.
    pub ci: f64,
    pub points_used: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiversityError {
    /// Fewer than two SNR points have enough outage events (at least 100)
    /// to resolve a slope.
    InsufficientData,
}

impl std::fmt::Display for DiversityError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DiversityError::InsufficientData => {
                write!(f, "need at least two SNR points with p_out >= 100/trials")
            }
        }
    }
}

impl std::error::Error for DiversityError {}

/// How many qualifying high-SNR points the fit uses by default.
pub const FIT_POINTS: usize = 3;

pub fn estimate_diversity(curve: &OutageCurve) -> Result<DiversityEstimate, DiversityError> {
    estimate_diversity_over(curve, FIT_POINTS)
}

pub fn estimate_diversity_over(
    curve: &OutageCurve,
    fit_points: usize,
) -> Result<DiversityEstimate, DiversityError> {
    let min_p = 100.0 / curve.trials as f64;
    // log10(gamma) = snr_db / 10 exactly
    let qualifying: Vec<(f64, f64)> = curve
        .snr_db
        .iter()
        .zip(&curve.p_out)
        .filter(|(_, &p)| p >= min_p)
        .map(|(&snr, &p)| (snr / 10.0, p.log10()))
        .collect();
    if qualifying.len() < 2 {
        return Err(DiversityError::InsufficientData);
    }
    let take = fit_points.max(2).min(qualifying.len());
    let pts = &qualifying[qualifying.len() - take..];

    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = pts.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mean_x) * (x - mean_x)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = sxy / sxx;

    let ci = if pts.len() > 2 {
        let ss_res: f64 = pts
            .iter()
            .map(|(x, y)| {
                let fitted = mean_y + slope * (x - mean_x);
                (y - fitted) * (y - fitted)
            })
            .sum();
        let se = (ss_res / (n - 2.0) / sxx).sqrt();
        1.96 * se
    } else {
        0.0
    };

    Ok(DiversityEstimate {
        d_hat: -slope,
        ci,
        points_used: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic_curve(c: f64, d: f64, snrs: &[f64], trials: u64) -> OutageCurve {
        let p: Vec<f64> = snrs
            .iter()
            .map(|&s| c / 10f64.powf(s / 10.0).powf(d))
            .collect();
        OutageCurve {
            snr_db: snrs.to_vec(),
            stderr: p.iter().map(|&x| (x * (1.0 - x) / trials as f64).sqrt()).collect(),
            avg_sum_rate: vec![0.0; snrs.len()],
            rank_failure_rate: vec![0.0; snrs.len()],
            p_out: p,
            trials,
            seed: 0,
        }
    }

    #[test]
    fn exact_power_laws() {
        let curve = synthetic_curve(10.0, 2.0, &[5.0, 10.0, 15.0, 20.0], 1_000_000);
        let est = estimate_diversity(&curve).unwrap();
        assert!((est.d_hat - 2.0).abs() < 0.01, "d_hat {}", est.d_hat);
        assert!(est.ci < 0.01);

        let curve = synthetic_curve(3.0, 1.0, &[5.0, 10.0, 15.0, 20.0], 1_000_000);
        let est = estimate_diversity(&curve).unwrap();
        assert!((est.d_hat - 1.0).abs() < 0.01);
    }

    #[test]
    fn unresolvable_points_are_dropped() {
        // at 10^6 trials the cutoff is 1e-4; the last point falls below it
        let mut curve = synthetic_curve(10.0, 2.0, &[5.0, 10.0, 15.0, 20.0, 45.0], 1_000_000);
        curve.p_out[4] = 1e-7;
        let est = estimate_diversity(&curve).unwrap();
        assert_eq!(est.points_used, 3);
        assert!((est.d_hat - 2.0).abs() < 0.02);
    }

    #[test]
    fn refuses_hopeless_input() {
        let mut curve = synthetic_curve(1.0, 2.0, &[5.0, 10.0], 100);
        curve.p_out = vec![1e-6, 1e-7];
        assert!(matches!(
            estimate_diversity(&curve),
            Err(DiversityError::InsufficientData)
        ));
    }

    #[test]
    fn two_point_fit_has_zero_ci() {
        let curve = synthetic_curve(5.0, 1.5, &[10.0, 20.0], 1_000_000);
        let est = estimate_diversity(&curve).unwrap();
        assert_eq!(est.points_used, 2);
        assert_eq!(est.ci, 0.0);
        assert!((est.d_hat - 1.5).abs() < 1e-9);
    }
}
