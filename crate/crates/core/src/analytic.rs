//! Momentum-space evolution and the closed-form limiting distribution
//! for identical sub-coins.
//!
//! With `Ψ(k) = Σ_x e^{ikx} Ψ(x)` a step acts as `U(k) = U₁(k/2) ⊗ U₂(k/2)`,
//! `U_i(k/2) = diag(e^{ik/2}, e^{−ik/2}) C_i`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::coin::{make_sub_coin, CoinSpec, SubCoinSpec};
use crate::error::{Error, Result};
use crate::init::InitialStateSpec;
use crate::linalg::{cis, kron_vec, tensor2, vec_norm, Amp, Matrix, Unitary2, Unitary4, ONE, ZERO};
use crate::observables::{pdd, PddSnapshot};
use crate::state::{CoinVector, WalkerState};
use crate::walk::WalkParams;
use crate::NORM_TOL;

/// Eigenvalues closer than this share one spectral projector.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// `diag(e^{ik/2}, e^{−ik/2}) C`.
pub fn momentum_sub_coin(spec: SubCoinSpec, k: f64) -> Unitary2 {
    let c = make_sub_coin(spec);
    let d = Unitary2::from_trusted(Matrix::from_diagonal([cis(k / 2.0), cis(-k / 2.0)]));
    d * c
}

pub fn momentum_operator(coin: CoinSpec, k: f64) -> Unitary4 {
    tensor2(
        &momentum_sub_coin(coin.sub1, k),
        &momentum_sub_coin(coin.sub2, k),
    )
}

/// Eigenpairs `(λ₊, λ₋, v₊, v₋)` of one momentum-space sub-coin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubSpectrum {
    pub plus: Amp,
    pub minus: Amp,
    pub v_plus: [Amp; 2],
    pub v_minus: [Amp; 2],
}

fn normalize2(v: [Amp; 2]) -> [Amp; 2] {
    let n = vec_norm(&v);
    [v[0] / n, v[1] / n]
}

/// Eigenvector of a 2×2 matrix for `lambda`, from whichever row of
/// `M − λI` is better conditioned.
fn eigvec2(m: &Matrix<2>, lambda: Amp) -> [Amp; 2] {
    let a = [m.0[0][1], lambda - m.0[0][0]];
    let b = [lambda - m.0[1][1], m.0[1][0]];
    if vec_norm(&a) >= vec_norm(&b) {
        normalize2(a)
    } else {
        normalize2(b)
    }
}

fn spectrum_from(m: &Matrix<2>, plus: Amp, minus: Amp) -> SubSpectrum {
    if (plus - minus).norm() < DEGENERACY_TOL {
        // M is a multiple of the identity
        return SubSpectrum {
            plus,
            minus,
            v_plus: [ONE, ZERO],
            v_minus: [ZERO, ONE],
        };
    }
    SubSpectrum {
        plus,
        minus,
        v_plus: eigvec2(m, plus),
        v_minus: eigvec2(m, minus),
    }
}

/// Closed form for the rotation sub-coin:
/// `λ± = ±√(1 − cos²θ sin²(k/2)) + i cos θ sin(k/2)`.
pub fn sub_coin_spectrum(theta: f64, k: f64) -> SubSpectrum {
    let c = libm::cos(theta);
    let sk = libm::sin(k / 2.0);
    let root = libm::sqrt((1.0 - c * c * sk * sk).max(0.0));
    let im = c * sk;
    let m = momentum_sub_coin(SubCoinSpec::rotation(theta), k);
    spectrum_from(m.matrix(), Amp::new(root, im), Amp::new(-root, im))
}

/// Spectrum of any 2×2 momentum-space sub-coin from its characteristic
/// polynomial. `λ₊` takes the principal square root branch.
pub fn general_sub_spectrum(spec: SubCoinSpec, k: f64) -> SubSpectrum {
    let m = momentum_sub_coin(spec, k);
    let mm = m.matrix();
    let half_tr = (mm.0[0][0] + mm.0[1][1]) * 0.5;
    let disc = (half_tr * half_tr - mm.det()).sqrt();
    spectrum_from(mm, half_tr + disc, half_tr - disc)
}

fn sub_spectrum(spec: SubCoinSpec, k: f64) -> SubSpectrum {
    if spec.is_rotation() {
        sub_coin_spectrum(spec.theta, k)
    } else {
        general_sub_spectrum(spec, k)
    }
}

/// Eigensystem of `U(k)`. Index order for `big_lambda` and `vectors` is
/// `(++, +−, −+, −−)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSpectrum {
    pub k: f64,
    pub lambda1: (Amp, Amp),
    pub lambda2: (Amp, Amp),
    pub big_lambda: [Amp; 4],
    pub vectors: [CoinVector; 4],
}

pub fn walk_spectrum(coin: CoinSpec, k: f64) -> LimitSpectrum {
    let s1 = sub_spectrum(coin.sub1, k);
    let s2 = sub_spectrum(coin.sub2, k);
    let pairs = [
        (s1.plus, s1.v_plus, s2.plus, s2.v_plus),
        (s1.plus, s1.v_plus, s2.minus, s2.v_minus),
        (s1.minus, s1.v_minus, s2.plus, s2.v_plus),
        (s1.minus, s1.v_minus, s2.minus, s2.v_minus),
    ];
    let mut big_lambda = [ZERO; 4];
    let mut vectors = [[ZERO; 4]; 4];
    for (z, (l1, v1, l2, v2)) in pairs.into_iter().enumerate() {
        big_lambda[z] = l1 * l2;
        vectors[z] = kron_vec(&v1, &v2);
    }
    LimitSpectrum {
        k,
        lambda1: (s1.plus, s1.minus),
        lambda2: (s2.plus, s2.minus),
        big_lambda,
        vectors,
    }
}

/// `(Λ, P Ψ₀)` per eigenspace, with eigenvalues within [`DEGENERACY_TOL`]
/// merged.
fn projected_components(sp: &LimitSpectrum, psi0: &CoinVector) -> Vec<(Amp, CoinVector)> {
    let mut groups: Vec<(Amp, CoinVector)> = Vec::with_capacity(4);
    for z in 0..4 {
        let v = &sp.vectors[z];
        let overlap: Amp = v.iter().zip(psi0).map(|(a, b)| a.conj() * b).sum();
        let mut part = [ZERO; 4];
        for i in 0..4 {
            part[i] = v[i] * overlap;
        }
        let lam = sp.big_lambda[z];
        match groups
            .iter_mut()
            .find(|(l, _)| (*l - lam).norm() < DEGENERACY_TOL)
        {
            Some((_, acc)) => {
                for i in 0..4 {
                    acc[i] += part[i];
                }
            }
            None => groups.push((lam, part)),
        }
    }
    groups
}

/// Smallest power of two at least `4(T + 1)`.
pub fn default_num_k(steps: usize) -> usize {
    (4 * (steps + 1)).next_power_of_two()
}

fn inverse_fourier(samples: &[CoinVector], radius: usize) -> Vec<CoinVector> {
    let n = samples.len();
    let mut out = vec![[ZERO; 4]; 2 * radius + 1];
    for (i, site) in out.iter_mut().enumerate() {
        let x = i as i64 - radius as i64;
        for (j, s) in samples.iter().enumerate() {
            // e^{−i k_j x} with k_j x reduced mod N to keep the angle small
            let r = ((j as i64 * x).rem_euclid(n as i64)) as f64;
            let ph = cis(-2.0 * PI * r / n as f64);
            for z in 0..4 {
                site[z] += ph * s[z];
            }
        }
        for z in site.iter_mut() {
            *z /= n as f64;
        }
    }
    out
}

/// `Ψ_T` reconstructed from the spectral sum
/// `Ψ_T(x) = (1/N) Σ_j e^{−ik_j x} Σ_z Λ_z^T P_z Ψ₀`, `k_j = 2πj/N`.
pub fn evolve_fourier_state(params: &WalkParams, num_k: usize) -> Result<WalkerState> {
    let t = params.steps;
    if num_k < 2 * t + 3 {
        return Err(Error::Usage("num_k must be at least 2·steps + 3"));
    }
    if t > params.max_steps {
        return Err(Error::Resource {
            what: "walk steps",
            requested: t,
            limit: params.max_steps,
        });
    }
    let psi0 = params.init.coin_vector();
    let samples: Vec<CoinVector> = (0..num_k)
        .map(|j| {
            let k = 2.0 * PI * j as f64 / num_k as f64;
            let sp = walk_spectrum(params.coin, k);
            let mut acc = [ZERO; 4];
            for (lam, part) in projected_components(&sp, &psi0) {
                let f = lam.powu(t as u32);
                for z in 0..4 {
                    acc[z] += f * part[z];
                }
            }
            acc
        })
        .collect();
    WalkerState::from_sites(t, inverse_fourier(&samples, t))
}

pub fn evolve_fourier(params: &WalkParams, num_k: usize) -> Result<PddSnapshot> {
    Ok(pdd(&evolve_fourier_state(params, num_k)?))
}

/// Order of the four amplitudes in a [`BetaVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaOrder {
    /// `(|00>, |01>, |10>, |11>)`, the crate's coin layout.
    Canonical,
    /// `β₁ = |00>`, `β₂ = |10>`, `β₃ = |01>`, `β₄ = |11>`: the layout in which
    /// the closed-form limit is written.
    Limit,
}

/// Initial coin amplitudes in the layout expected by [`LimitingDistribution`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaVector {
    pub beta: [Amp; 4],
    pub order: BetaOrder,
}

impl BetaVector {
    pub fn new(beta: [Amp; 4], order: BetaOrder) -> Result<Self> {
        let n: f64 = beta.iter().map(|b| b.norm_sqr()).sum();
        if !n.is_finite() || (n - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain("beta vector must have unit norm"));
        }
        Ok(Self { beta, order })
    }

    pub fn from_coin_vector(v: &CoinVector) -> Result<Self> {
        Self::new(*v, BetaOrder::Canonical).map(|b| b.to_limit_order())
    }

    /// `ψ1 → (cos η, 0, 0, e^{iφ} sin η)`, `ψ2 → (0, cos α, e^{iφ} sin α, 0)`.
    pub fn from_spec(spec: &InitialStateSpec) -> Result<Self> {
        Self::from_coin_vector(&spec.coin_vector())
    }

    pub fn to_limit_order(self) -> Self {
        match self.order {
            BetaOrder::Limit => self,
            BetaOrder::Canonical => Self {
                beta: [self.beta[0], self.beta[2], self.beta[1], self.beta[3]],
                order: BetaOrder::Limit,
            },
        }
    }

    pub fn to_canonical(self) -> CoinVector {
        match self.order {
            BetaOrder::Canonical => self.beta,
            BetaOrder::Limit => [self.beta[0], self.beta[2], self.beta[1], self.beta[3]],
        }
    }
}

/// Large-time stationary density for identical rotation sub-coins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitingDistribution {
    pub theta: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub beta: BetaVector,
}

impl LimitingDistribution {
    pub fn new(theta: f64, beta: BetaVector) -> Result<Self> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(Error::Domain(
                "limiting distribution needs 0 < theta < pi/2: sec(theta) diverges at pi/2 and the localized branch vanishes at 0",
            ));
        }
        let (s, c) = libm::sincos(theta);
        Ok(Self {
            theta,
            // sec θ (1 − sin θ) written without the cancellation near π/2
            mu1: c / (1.0 + s),
            mu2: (1.0 + s) / c,
            beta: beta.to_limit_order(),
        })
    }

    fn parts(&self) -> ([f64; 4], impl Fn(usize, usize) -> f64 + '_) {
        let b = &self.beta.beta;
        let sq = [
            b[0].norm_sqr(),
            b[1].norm_sqr(),
            b[2].norm_sqr(),
            b[3].norm_sqr(),
        ];
        // Re(β_i conj β_j)
        let re = move |i: usize, j: usize| (b[i] * b[j].conj()).re;
        (sq, re)
    }

    pub fn p0(&self) -> f64 {
        let (s, c) = libm::sincos(self.theta);
        let tan = s / c;
        let sec = 1.0 / c;
        let m1 = self.mu1;
        let (sq, re) = self.parts();
        tan * tan * m1 * m1 * (sq[0] + sq[3])
            + sec * m1 * (sq[1] + sq[2])
            + tan * m1 * m1 * (re(1, 3) + re(2, 3) - re(0, 1) - re(0, 2))
            - 2.0 * tan * m1 * re(1, 2)
    }

    /// `p(x)` for any integer `x`.
    ///
    /// The bracket carrying `μ₂²|β₁|²` belongs to the side the `|11>`
    /// component shifts towards, which under this crate's shift is `x < 0`.
    pub fn p(&self, x: i64) -> f64 {
        if x == 0 {
            return self.p0();
        }
        let (s, c) = libm::sincos(self.theta);
        let tan2 = (s / c) * (s / c);
        let (m1, m2) = (self.mu1, self.mu2);
        let (sq, re) = self.parts();
        let n = x.unsigned_abs() as i32;
        let decay = libm::pow(m1, (4 * n) as f64);
        let common = sq[1] + sq[2] + 2.0 * (re(0, 3) + re(1, 2));
        let bracket = if x < 0 {
            m2 * m2 * sq[0] + m1 * m1 * sq[3] + common
                - 2.0 * m2 * (re(0, 1) + re(0, 2))
                - 2.0 * m1 * (re(1, 3) + re(2, 3))
        } else {
            m1 * m1 * sq[0]
                + m2 * m2 * sq[3]
                + common
                + 2.0 * m1 * (re(0, 1) + re(0, 2))
                + 2.0 * m2 * (re(1, 3) + re(2, 3))
        };
        decay * tan2 * bracket
    }

    /// `p(x)` for `x ∈ [−x_max, x_max]`.
    pub fn pdd(&self, x_max: usize) -> PddSnapshot {
        let probs = (-(x_max as i64)..=x_max as i64)
            .map(|x| self.p(x).max(0.0))
            .collect();
        PddSnapshot::from_probs(x_max, probs).expect("finite non-negative by construction")
    }

    /// Total probability held by the stationary component.
    pub fn trapped_mass(&self, x_max: usize) -> f64 {
        (-(x_max as i64)..=x_max as i64).map(|x| self.p(x)).sum()
    }
}

pub fn limiting_pdd(theta: f64, beta: BetaVector) -> Result<LimitingDistribution> {
    LimitingDistribution::new(theta, beta)
}

/// Density of the `Λ = −1` component of the walk, computed numerically by
/// projecting `Ψ₀` onto that eigenspace of `U(k)` at `num_k` momenta.
///
/// This part of `Ψ_T` only changes sign from step to step, so its density is
/// the long-time average of `p_T(x)`. It exists for identical sub-coins.
pub fn stationary_pdd(
    coin: CoinSpec,
    init: &InitialStateSpec,
    x_max: usize,
    num_k: usize,
) -> Result<PddSnapshot> {
    if !coin.is_identical() {
        return Err(Error::Domain(
            "stationary component needs identical sub-coins",
        ));
    }
    if num_k < 2 * x_max + 3 {
        return Err(Error::Usage("num_k must be at least 2·x_max + 3"));
    }
    let psi0 = init.coin_vector();
    let minus_one = Amp::new(-1.0, 0.0);
    let samples: Vec<CoinVector> = (0..num_k)
        .map(|j| {
            let k = 2.0 * PI * j as f64 / num_k as f64;
            let sp = walk_spectrum(coin, k);
            projected_components(&sp, &psi0)
                .into_iter()
                .find(|(l, _)| (*l - minus_one).norm() < 1e-9)
                .map(|(_, p)| p)
                .unwrap_or([ZERO; 4])
        })
        .collect();
    let sites = inverse_fourier(&samples, x_max);
    let probs = sites
        .iter()
        .map(|v| v.iter().map(|z| z.norm_sqr()).sum())
        .collect();
    PddSnapshot::from_probs(x_max, probs)
}
