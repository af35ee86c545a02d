//! Probability densities, moments and entropies.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{jacobi_hermitian, CMatrix, ZERO};
use crate::state::WalkerState;

/// Eigenvalues (or probabilities) at or below this are left out of entropy sums.
pub const EIG_FLOOR: f64 = 1e-12;

/// Hermiticity tolerance accepted by [`von_neumann_entropy`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// `p_T(x)` over `x ∈ [−T, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PddSnapshot {
    step: usize,
    probs: Vec<f64>,
}

impl PddSnapshot {
    /// `probs[i]` is the weight at `x = i − step`. Weights must be finite and
    /// non-negative; they need not sum to one.
    pub fn from_probs(step: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 2 * step + 1 {
            return Err(Error::Shape("site count must be 2·step + 1"));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Numeric(
                "probabilities must be finite and non-negative",
            ));
        }
        Ok(Self { step, probs })
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn offset(&self) -> i64 {
        -(self.step as i64)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Zero outside `[−T, T]`.
    pub fn get(&self, x: i64) -> f64 {
        let i = x + self.step as i64;
        if i < 0 || i as usize >= self.probs.len() {
            0.0
        } else {
            self.probs[i as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let off = self.offset();
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, p)| (off + i as i64, *p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Probability within `|x| ≤ radius`.
    pub fn mass_within(&self, radius: usize) -> f64 {
        let r = radius as i64;
        self.iter()
            .filter(|(x, _)| x.abs() <= r)
            .map(|(_, p)| p)
            .sum()
    }
}

pub fn pdd(state: &WalkerState) -> PddSnapshot {
    let probs = state
        .sites()
        .iter()
        .map(|v| v.iter().map(|z| z.norm_sqr()).sum())
        .collect();
    PddSnapshot {
        step: state.step(),
        probs,
    }
}

/// `(⟨x⟩, σ²)`. The variance is clamped at zero against rounding.
pub fn mean_and_variance(p: &PddSnapshot) -> (f64, f64) {
    let mut m0 = 0.0;
    let mut m1 = 0.0;
    for (x, w) in p.iter() {
        m0 += w;
        m1 += x as f64 * w;
    }
    if m0 == 0.0 {
        return (0.0, 0.0);
    }
    let mean = m1 / m0;
    let var: f64 = p
        .iter()
        .map(|(x, w)| w * (x as f64 - mean) * (x as f64 - mean))
        .sum::<f64>()
        / m0;
    (mean, var.max(0.0))
}

/// `−Σ w log₂ w` over weights above [`EIG_FLOOR`].
pub fn entropy_bits(weights: impl Iterator<Item = f64>) -> f64 {
    let s: f64 = weights
        .filter(|w| *w > EIG_FLOOR)
        .map(|w| -w * libm::log2(w))
        .sum();
    s.max(0.0)
}

pub fn shannon_entropy(p: &PddSnapshot) -> f64 {
    entropy_bits(p.probs.iter().copied())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Position,
    Coin,
    Qubit1,
    Qubit2,
}

impl Subsystem {
    pub fn name(self) -> &'static str {
        match self {
            Self::Position => "position",
            Self::Coin => "coin",
            Self::Qubit1 => "qubit1",
            Self::Qubit2 => "qubit2",
        }
    }
}

impl core::str::FromStr for Subsystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "position" => Ok(Self::Position),
            "coin" => Ok(Self::Coin),
            "qubit1" => Ok(Self::Qubit1),
            "qubit2" => Ok(Self::Qubit2),
            _ => Err(Error::Usage(
                "subsystem must be position, coin, qubit1 or qubit2",
            )),
        }
    }
}

/// Reduced density matrix of a pure walker state.
#[derive(Debug, Clone)]
pub struct ReducedDensity {
    pub label: Subsystem,
    pub matrix: CMatrix,
    /// For [`Subsystem::Position`], the `(2T+1) × 4` amplitude matrix `A`
    /// with `ρ = A A†`.
    pub factor: Option<CMatrix>,
}

impl ReducedDensity {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

fn amplitude_matrix(state: &WalkerState) -> CMatrix {
    let sites = state.sites();
    let mut a = CMatrix::zeros(sites.len(), 4);
    for (i, v) in sites.iter().enumerate() {
        for (z, amp) in v.iter().enumerate() {
            a[(i, z)] = *amp;
        }
    }
    a
}

pub fn reduce(state: &WalkerState, keep: Subsystem) -> ReducedDensity {
    match keep {
        Subsystem::Position => {
            let a = amplitude_matrix(state);
            let matrix = a.matmul(&a.adjoint()).expect("conformable");
            ReducedDensity {
                label: keep,
                matrix,
                factor: Some(a),
            }
        }
        Subsystem::Coin => ReducedDensity {
            label: keep,
            matrix: coin_gram(state),
            factor: None,
        },
        Subsystem::Qubit1 | Subsystem::Qubit2 => {
            let mut m = CMatrix::zeros(2, 2);
            for v in state.sites() {
                for r in 0..2 {
                    for c in 0..2 {
                        for o in 0..2 {
                            let (i, j) = if keep == Subsystem::Qubit1 {
                                (2 * r + o, 2 * c + o)
                            } else {
                                (2 * o + r, 2 * o + c)
                            };
                            m[(r, c)] += v[i] * v[j].conj();
                        }
                    }
                }
            }
            ReducedDensity {
                label: keep,
                matrix: m,
                factor: None,
            }
        }
    }
}

/// `ρ_C[z][z'] = Σ_x ψ(x,z) conj(ψ(x,z'))`.
fn coin_gram(state: &WalkerState) -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    for v in state.sites() {
        if v.iter().all(|z| *z == ZERO) {
            continue;
        }
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    m
}

/// `−Tr ρ log₂ ρ`.
///
/// Position densities carrying their factor `A` are diagonalized through the
/// 4×4 Gram matrix `A†A`, which has the same non-zero spectrum as `A A†`.
pub fn von_neumann_entropy(rho: &ReducedDensity) -> Result<f64> {
    if rho.matrix.hermiticity_defect() > HERMITIAN_TOL {
        return Err(Error::Numeric("density matrix is not Hermitian"));
    }
    let target = match &rho.factor {
        Some(a) => {
            let g = a.adjoint().matmul(a)?;
            jacobi_hermitian(&g, HERMITIAN_TOL)?
        }
        None => jacobi_hermitian(&rho.matrix, HERMITIAN_TOL)?,
    };
    Ok(entropy_bits(target.values.into_iter()))
}

/// Position entanglement entropy without forming the `(2T+1)²` matrix:
/// by Schmidt symmetry it equals the entropy of the coin density.
pub fn position_entropy(state: &WalkerState) -> Result<f64> {
    let eig = jacobi_hermitian(&coin_gram(state), HERMITIAN_TOL)?;
    Ok(entropy_bits(eig.values.into_iter()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::CoinSpec;
    use crate::init::InitialStateSpec;
    use crate::linalg::{Amp, ONE};
    use crate::walk::{run, WalkParams};
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
    use proptest::prelude::*;

    fn walk(theta: f64, gamma: f64, init: InitialStateSpec, steps: usize) -> WalkerState {
        run(&WalkParams::new(
            CoinSpec::rotation(theta, gamma),
            init,
            steps,
        ))
        .unwrap()
    }

    #[test]
    fn delta_density() {
        let s = WalkerState::at_origin([ONE, ZERO, ZERO, ZERO]);
        let p = pdd(&s);
        assert_eq!(p.probs(), &[1.0]);
        assert_eq!(mean_and_variance(&p), (0.0, 0.0));
        assert_eq!(shannon_entropy(&p), 0.0);
    }

    #[test]
    fn psi2_one_step_hadamard_density() {
        let p = pdd(&walk(
            FRAC_PI_4,
            FRAC_PI_4,
            InitialStateSpec::psi2(0.0, 0.0),
            1,
        ));
        for (x, want) in [(-1, 0.25), (0, 0.5), (1, 0.25)] {
            assert!((p.get(x) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn two_point_moments() {
        for eta in [0.0, 0.3, FRAC_PI_4, 1.2] {
            let t = 7.0;
            let p = pdd(&walk(0.0, 0.0, InitialStateSpec::psi1(eta, 0.0), 7));
            let (m, v) = mean_and_variance(&p);
            assert!((m - t * libm::cos(2.0 * eta)).abs() < 1e-12);
            assert!((v - t * t * libm::sin(2.0 * eta).powi(2)).abs() < 1e-10);
        }
    }

    #[test]
    fn shannon_examples() {
        let u = PddSnapshot::from_probs(1, alloc::vec![1.0 / 3.0; 3]).unwrap();
        assert!((shannon_entropy(&u) - 1.584_962_500_721_156).abs() < 1e-14);
        let p = pdd(&walk(
            FRAC_PI_4,
            FRAC_PI_4,
            InitialStateSpec::psi1(FRAC_PI_4, 0.0),
            1,
        ));
        assert!((shannon_entropy(&p) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn snapshot_validation() {
        assert!(PddSnapshot::from_probs(1, alloc::vec![1.0]).is_err());
        assert!(PddSnapshot::from_probs(0, alloc::vec![-0.1]).is_err());
        assert!(PddSnapshot::from_probs(0, alloc::vec![f64::NAN]).is_err());
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let s = walk(0.3, 0.3, InitialStateSpec::psi1(FRAC_PI_4, 0.0), 0);
        let r = reduce(&s, Subsystem::Qubit1);
        assert!((r.matrix[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((r.matrix[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(r.matrix[(0, 1)].norm() < 1e-15);
        assert!((von_neumann_entropy(&r).unwrap() - 1.0).abs() < 1e-14);
        let q2 = reduce(&s, Subsystem::Qubit2);
        assert!((von_neumann_entropy(&q2).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn origin_position_density_is_pure() {
        for spec in [
            InitialStateSpec::psi1(0.4, 0.1),
            InitialStateSpec::psi2(0.2, 0.0),
            InitialStateSpec::psi3(0.1, 0.2, 0.3, 0.4),
        ] {
            let r = reduce(&crate::init::build_initial(&spec), Subsystem::Position);
            assert_eq!(r.dim(), 1);
            assert!((r.matrix[(0, 0)] - ONE).norm() < 1e-15);
            assert!(von_neumann_entropy(&r).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn coin_density_after_one_step() {
        let s = walk(
            FRAC_PI_4,
            FRAC_PI_4,
            InitialStateSpec::psi1(FRAC_PI_4, 0.0),
            1,
        );
        let r = reduce(&s, Subsystem::Coin);
        assert_eq!(r.dim(), 4);
        assert!((r.matrix.trace() - ONE).norm() < 1e-14);
        assert!(r.matrix.hermiticity_defect() < 1e-15);
        // after H⊗H the Bell vector is back on |00>, |11>, which then separate
        assert!((r.matrix[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((r.matrix[(3, 3)].re - 0.5).abs() < 1e-15);
        assert!(r.matrix[(0, 3)].norm() < 1e-15);
    }

    #[test]
    fn position_entropy_matches_svd_oracle() {
        let s = walk(
            FRAC_PI_4,
            FRAC_PI_4,
            InitialStateSpec::psi1(FRAC_PI_4, 0.0),
            1,
        );
        let vn = von_neumann_entropy(&reduce(&s, Subsystem::Position)).unwrap();
        assert!(vn > 0.0 && vn <= 2.0);
        for (theta, gamma, steps) in [(FRAC_PI_4, FRAC_PI_4, 1), (0.4, 1.1, 9), (1.0, 0.2, 25)] {
            let s = walk(
                theta,
                gamma,
                InitialStateSpec::psi3(0.3, 0.9, 0.5, 1.0),
                steps,
            );
            let sites = s.sites();
            let m = nalgebra::DMatrix::<Amp>::from_fn(sites.len(), 4, |i, j| sites[i][j]);
            let sv = m.svd(false, false).singular_values;
            let want = entropy_bits(sv.iter().map(|x| x * x));
            let got = von_neumann_entropy(&reduce(&s, Subsystem::Position)).unwrap();
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
            assert!((position_entropy(&s).unwrap() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn non_hermitian_density_is_rejected() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = ONE;
        m[(0, 1)] = Amp::new(0.1, 0.0);
        let r = ReducedDensity {
            label: Subsystem::Coin,
            matrix: m,
            factor: None,
        };
        assert!(matches!(von_neumann_entropy(&r), Err(Error::Numeric(_))));
    }

    #[test]
    fn subsystem_names_parse() {
        for s in [
            Subsystem::Position,
            Subsystem::Coin,
            Subsystem::Qubit1,
            Subsystem::Qubit2,
        ] {
            assert_eq!(s.name().parse::<Subsystem>().unwrap(), s);
        }
        assert!(matches!("spin".parse::<Subsystem>(), Err(Error::Usage(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn schmidt_duality_and_dephasing(
            theta in 0.0..FRAC_PI_2, gamma in 0.0..FRAC_PI_2,
            alpha in 0.0..FRAC_PI_2, eta in 0.0..FRAC_PI_2, beta in 0.0..FRAC_PI_2, phi in 0.0..PI,
            steps in 0usize..24,
        ) {
            let s = walk(theta, gamma, InitialStateSpec::psi3(alpha, eta, beta, phi), steps);
            let pos = von_neumann_entropy(&reduce(&s, Subsystem::Position)).unwrap();
            let coin = von_neumann_entropy(&reduce(&s, Subsystem::Coin)).unwrap();
            prop_assert!((pos - coin).abs() < 1e-9);
            prop_assert!(pos <= 2.0 + 1e-12);
            prop_assert!(shannon_entropy(&pdd(&s)) >= pos - 1e-9);
            let p = pdd(&s);
            prop_assert!((p.total() - 1.0).abs() < 1e-10);
            prop_assert!(shannon_entropy(&p) <= libm::log2((2 * steps + 1) as f64) + 1e-12);
        }
    }
}
