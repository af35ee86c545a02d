//! Distribution taxonomy: localization, Gaussian (classical-like) shape,
//! and the two/three/four-peak zones, plus trapping and transfer detectors.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_8, SQRT_2};

use crate::coin::CoinSpec;
use crate::error::{Error, Result};
use crate::init::InitialStateSpec;
use crate::observables::{mean_and_variance, PddSnapshot};
use crate::walk::Trajectory;

/// Classifier thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierConfig {
    /// Mass that `k` sites must hold for `LocalizedK`.
    pub loc_mass: f64,
    /// Radius for the self-trapping detector.
    pub r_trap: usize,
    /// Mass at a light-cone front (or trapped near the origin) that counts
    /// as a transfer (or partial trapping) component.
    pub pt_mass: f64,
    /// Total-variation distance below which a density is called Gaussian.
    pub gauss_tol: f64,
    /// Peak height relative to the tallest outer site.
    pub min_frac: f64,
    /// Half-width of the peak neighbourhood.
    pub window: usize,
    /// Sites with `|x| ≤ central_radius` form the central zone.
    pub central_radius: usize,
    /// Central zone mass that counts as one more peak.
    pub central_mass: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            loc_mass: 0.999,
            r_trap: 2,
            pt_mass: 0.2,
            gauss_tol: 0.34,
            min_frac: 0.15,
            window: 7,
            central_radius: 2,
            central_mass: 0.10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKind {
    LocalizedOne,
    LocalizedTwo,
    LocalizedThree,
    TwoPeaks,
    ThreePeaks,
    FourPeaks,
    Gaussian,
    Other,
}

impl ClassKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::LocalizedOne => "LOCALIZED_ONE",
            Self::LocalizedTwo => "LOCALIZED_TWO",
            Self::LocalizedThree => "LOCALIZED_THREE",
            Self::TwoPeaks => "TWO_PEAKS",
            Self::ThreePeaks => "THREE_PEAKS",
            Self::FourPeaks => "FOUR_PEAKS",
            Self::Gaussian => "GAUSSIAN",
            Self::Other => "OTHER",
        }
    }
}

impl core::fmt::Display for ClassKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub mean: f64,
    pub sigma2: f64,
    pub tv_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionClass {
    pub kind: ClassKind,
    pub peaks: Vec<(i64, f64)>,
    pub gaussian_fit: Option<FitResult>,
    /// The step before the last classifies the same way.
    pub stable: bool,
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + libm::erf(z / SQRT_2))
}

/// Moment-matched normal mass function, integrated over unit cells, and its
/// total-variation distance to `p`. Normal mass beyond the support counts
/// towards the distance.
pub fn gaussian_fit(p: &PddSnapshot) -> Result<FitResult> {
    let (mean, sigma2) = mean_and_variance(p);
    if !(sigma2 > 0.0) {
        return Err(Error::Domain("gaussian fit needs positive variance"));
    }
    let sigma = libm::sqrt(sigma2);
    let total = p.total();
    let t = p.step() as f64;
    let outside =
        1.0 - (normal_cdf((t + 0.5 - mean) / sigma) - normal_cdf((-t - 0.5 - mean) / sigma));
    let tv = 0.5 * outside.max(0.0)
        + 0.5
            * p.iter()
                .map(|(x, w)| {
                    let x = x as f64;
                    let g =
                        normal_cdf((x + 0.5 - mean) / sigma) - normal_cdf((x - 0.5 - mean) / sigma);
                    (w / total - g).abs()
                })
                .sum::<f64>();
    Ok(FitResult {
        mean,
        sigma2,
        tv_distance: tv,
    })
}

/// `max_x |p(x) − p(−x)|`.
pub fn symmetry_defect(p: &PddSnapshot) -> f64 {
    (0..=p.step() as i64)
        .map(|x| (p.get(x) - p.get(-x)).abs())
        .fold(0.0, f64::max)
}

/// Candidate peak indices: sites at least `min_frac · reference` that are a
/// maximum over `±window`; candidates closer than `window` keep the taller.
fn peak_indices(q: &[f64], reference: f64, min_frac: f64, window: usize) -> Vec<usize> {
    let n = q.len();
    let mut out: Vec<usize> = Vec::new();
    for i in 0..n {
        if q[i] < min_frac * reference || q[i] <= 0.0 {
            continue;
        }
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(n);
        if q[lo..hi].iter().any(|v| *v > q[i]) {
            continue;
        }
        match out.last_mut() {
            Some(last) if i - *last <= window => {
                if q[i] > q[*last] {
                    *last = i;
                }
            }
            _ => out.push(i),
        }
    }
    out
}

/// Local maxima over `±window` with height at least `min_frac · max p`.
pub fn detect_peaks(p: &PddSnapshot, min_frac: f64, window: usize) -> Vec<(i64, f64)> {
    let q = p.probs();
    let reference = q.iter().copied().fold(0.0, f64::max);
    peak_indices(q, reference, min_frac, window)
        .into_iter()
        .map(|i| (i as i64 + p.offset(), q[i]))
        .collect()
}

/// Peaks outside the central zone, with heights relative to the tallest
/// site outside it.
pub fn outer_peaks(p: &PddSnapshot, cfg: &ClassifierConfig) -> Vec<(i64, f64)> {
    let r = cfg.central_radius as i64;
    let q = p.probs();
    let reference = p
        .iter()
        .filter(|(x, _)| x.abs() > r)
        .map(|(_, w)| w)
        .fold(0.0, f64::max);
    peak_indices(q, reference, cfg.min_frac, cfg.window)
        .into_iter()
        .map(|i| (i as i64 + p.offset(), q[i]))
        .filter(|(x, _)| x.abs() > r)
        .collect()
}

fn localized_sites(p: &PddSnapshot, loc_mass: f64) -> Option<usize> {
    let mut sorted: Vec<f64> = p.probs().to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    for (k, w) in sorted.iter().take(3).enumerate() {
        acc += w;
        if acc >= loc_mass {
            return Some(k + 1);
        }
    }
    None
}

/// Classifies a single density.
pub fn classify_snapshot(p: &PddSnapshot, cfg: &ClassifierConfig) -> DistributionClass {
    if let Some(k) = localized_sites(p, cfg.loc_mass) {
        let kind = match k {
            1 => ClassKind::LocalizedOne,
            2 => ClassKind::LocalizedTwo,
            _ => ClassKind::LocalizedThree,
        };
        return DistributionClass {
            kind,
            peaks: detect_peaks(p, cfg.min_frac, cfg.window),
            gaussian_fit: None,
            stable: true,
        };
    }
    let fit = gaussian_fit(p).ok();
    let peaks = outer_peaks(p, cfg);
    if let Some(f) = fit {
        if f.tv_distance < cfg.gauss_tol {
            return DistributionClass {
                kind: ClassKind::Gaussian,
                peaks,
                gaussian_fit: fit,
                stable: true,
            };
        }
    }
    let central = p.mass_within(cfg.central_radius) >= cfg.central_mass;
    let kind = match peaks.len() + usize::from(central) {
        2 => ClassKind::TwoPeaks,
        3 => ClassKind::ThreePeaks,
        4 => ClassKind::FourPeaks,
        _ => ClassKind::Other,
    };
    DistributionClass {
        kind,
        peaks,
        gaussian_fit: fit,
        stable: true,
    }
}

/// Classifies the final snapshot of a trajectory and records whether the
/// previous step agrees.
pub fn classify_distribution(
    traj: &Trajectory,
    cfg: &ClassifierConfig,
) -> Result<DistributionClass> {
    if traj.steps() < 2 {
        return Err(Error::Usage("classification needs at least 2 steps"));
    }
    let n = traj.snapshots.len();
    let mut class = classify_snapshot(&traj.snapshots[n - 1], cfg);
    class.stable = classify_snapshot(&traj.snapshots[n - 2], cfg).kind == class.kind;
    Ok(class)
}

/// Trapped and mobile components of a trajectory, each as the worst value
/// over all recorded steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportReport {
    /// `min_t` mass within `r_trap` of the origin.
    pub trapped_mass: f64,
    /// `min_{t ≥ 1} max(p_t(t), p_t(−t))`.
    pub front_mass: f64,
    /// All but `1 − loc_mass` of the walker stays near the origin.
    pub self_trapped: bool,
    /// At least `pt_mass` stays near the origin.
    pub partially_trapped: bool,
    /// At least `pt_mass` rides a light-cone front at every step.
    pub perfect_transfer: bool,
}

pub fn transport_report(traj: &Trajectory, cfg: &ClassifierConfig) -> TransportReport {
    let trapped_mass = traj
        .snapshots
        .iter()
        .map(|s| s.mass_within(cfg.r_trap))
        .fold(f64::INFINITY, f64::min);
    let front_mass = traj
        .snapshots
        .iter()
        .skip(1)
        .map(|s| {
            let t = s.step() as i64;
            s.get(t).max(s.get(-t))
        })
        .fold(f64::INFINITY, f64::min);
    let front_mass = if front_mass.is_finite() {
        front_mass
    } else {
        0.0
    };
    TransportReport {
        trapped_mass,
        front_mass,
        self_trapped: trapped_mass >= cfg.loc_mass,
        partially_trapped: trapped_mass >= cfg.pt_mass,
        perfect_transfer: traj.steps() >= 1 && front_mass >= cfg.pt_mass,
    }
}

pub fn detect_self_trapping(traj: &Trajectory, cfg: &ClassifierConfig) -> bool {
    transport_report(traj, cfg).self_trapped
}

pub fn detect_perfect_transfer(traj: &Trajectory, cfg: &ClassifierConfig) -> bool {
    transport_report(traj, cfg).perfect_transfer
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    T1,
    T2,
    T3,
}

impl TableId {
    pub fn name(self) -> &'static str {
        match self {
            Self::T1 => "T1",
            Self::T2 => "T2",
            Self::T3 => "T3",
        }
    }
}

/// One parameter probe and the class(es) its table row calls for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub table: TableId,
    pub row: &'static str,
    pub coin: CoinSpec,
    pub init: InitialStateSpec,
    pub expected: &'static [ClassKind],
}

/// Step count at which probes are classified.
pub const PROBE_STEPS: usize = 50;

/// Offset used for the "angle approaches a limit" rows.
pub const NEAR_LIMIT: f64 = 0.05 * FRAC_PI_2;

/// Probes for every row of the distribution tables.
///
/// `ψ1` and `ψ2` probes use `η = α = π/4, φ = 0`; `ψ3` probes use
/// `α = η = β = π/4, φ = π/2`. Non-identical rows fix `γ = π/8`.
pub fn table_probes() -> Vec<Probe> {
    use ClassKind::*;
    let d = NEAR_LIMIT;
    let g = FRAC_PI_8;
    let psi1 = InitialStateSpec::psi1(FRAC_PI_4, 0.0);
    let psi2 = InitialStateSpec::psi2(FRAC_PI_4, 0.0);
    let psi3 = InitialStateSpec::psi3(FRAC_PI_4, FRAC_PI_4, FRAC_PI_4, FRAC_PI_2);
    let mut out = Vec::new();
    let mut push = |table, row, theta: f64, gamma: f64, init, expected: &'static [ClassKind]| {
        out.push(Probe {
            table,
            row,
            coin: CoinSpec::rotation(theta, gamma),
            init,
            expected,
        })
    };

    let t1: [(
        &'static str,
        f64,
        &'static [ClassKind],
        &'static [ClassKind],
    ); 6] = [
        ("theta = 0", 0.0, &[LocalizedTwo], &[LocalizedOne]),
        ("theta -> 0", d, &[TwoPeaks], &[ThreePeaks]),
        ("theta -> pi/2", FRAC_PI_2 - d, &[Gaussian], &[Gaussian]),
        ("theta = pi/2", FRAC_PI_2, &[LocalizedOne], &[LocalizedOne]),
        (
            "otherwise",
            FRAC_PI_4,
            &[ThreePeaks, FourPeaks],
            &[ThreePeaks, FourPeaks],
        ),
        (
            "otherwise",
            FRAC_PI_3,
            &[ThreePeaks, FourPeaks],
            &[ThreePeaks, FourPeaks],
        ),
    ];
    for (row, theta, e1, e2) in t1 {
        push(TableId::T1, row, theta, theta, psi1, e1);
        push(TableId::T1, row, theta, theta, psi2, e2);
    }

    let t2: [(&'static str, f64, &'static [ClassKind]); 5] = [
        ("theta -> pi/2", FRAC_PI_2 - d, &[TwoPeaks]),
        ("theta = pi/2", FRAC_PI_2, &[TwoPeaks]),
        ("theta -> gamma", g + d, &[ThreePeaks]),
        ("theta = gamma", g, &[ThreePeaks]),
        ("otherwise", FRAC_PI_3, &[FourPeaks]),
    ];
    for (row, theta, e) in t2 {
        push(TableId::T2, row, theta, g, psi1, e);
        push(TableId::T2, row, theta, g, psi2, e);
    }

    // identical column, rows ordered as in the identical-coin table
    let t3_identical: [(&'static str, f64, &'static [ClassKind]); 5] = [
        ("identical, theta = 0", 0.0, &[LocalizedThree]),
        ("identical, theta -> 0", d, &[ThreePeaks]),
        ("identical, theta -> pi/2", FRAC_PI_2 - d, &[Gaussian]),
        ("identical, theta = pi/2", FRAC_PI_2, &[LocalizedOne]),
        ("identical, otherwise", FRAC_PI_4, &[ThreePeaks]),
    ];
    for (row, theta, e) in t3_identical {
        push(TableId::T3, row, theta, theta, psi3, e);
    }
    for (row, theta, e) in t2 {
        let row = match row {
            "theta -> pi/2" => "non-identical, theta -> pi/2",
            "theta = pi/2" => "non-identical, theta = pi/2",
            "theta -> gamma" => "non-identical, theta -> gamma",
            "theta = gamma" => "non-identical, theta = gamma",
            _ => "non-identical, otherwise",
        };
        push(TableId::T3, row, theta, g, psi3, e);
    }
    out
}
