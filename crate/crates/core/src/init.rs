//! Initial coin states of the walker, all localized at `x = 0`.

use crate::linalg::{cis, Amp, ZERO};
use crate::observables::entropy_bits;
use crate::state::{CoinVector, WalkerState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialFamily {
    /// `cos η |00> + e^{iφ} sin η |11>`
    Psi1,
    /// `cos α |10> + e^{iφ} sin α |01>`
    Psi2,
    /// `e^{iφ} sin β (cos α |10> + sin α |01>) + cos β (cos η |00> + sin η |11>)`
    Psi3,
}

impl InitialFamily {
    pub fn name(self) -> &'static str {
        match self {
            Self::Psi1 => "psi1",
            Self::Psi2 => "psi2",
            Self::Psi3 => "psi3",
        }
    }
}

impl core::str::FromStr for InitialFamily {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "psi1" => Ok(Self::Psi1),
            "psi2" => Ok(Self::Psi2),
            "psi3" => Ok(Self::Psi3),
            _ => Err(crate::Error::Usage(
                "initial family must be psi1, psi2 or psi3",
            )),
        }
    }
}

/// Family tag plus the angles it reads. Fields a family does not use are
/// ignored (`Psi1` reads `eta`, `phi`; `Psi2` reads `alpha`, `phi`; `Psi3`
/// reads all four).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialStateSpec {
    pub family: InitialFamily,
    pub eta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
}

impl InitialStateSpec {
    pub const fn psi1(eta: f64, phi: f64) -> Self {
        Self {
            family: InitialFamily::Psi1,
            eta,
            alpha: 0.0,
            beta: 0.0,
            phi,
        }
    }

    pub const fn psi2(alpha: f64, phi: f64) -> Self {
        Self {
            family: InitialFamily::Psi2,
            eta: 0.0,
            alpha,
            beta: 0.0,
            phi,
        }
    }

    pub const fn psi3(alpha: f64, eta: f64, beta: f64, phi: f64) -> Self {
        Self {
            family: InitialFamily::Psi3,
            eta,
            alpha,
            beta,
            phi,
        }
    }

    /// Coin amplitudes in the canonical `(|00>, |01>, |10>, |11>)` layout.
    pub fn coin_vector(&self) -> CoinVector {
        let ph = cis(self.phi);
        let re = |x: f64| Amp::new(x, 0.0);
        match self.family {
            InitialFamily::Psi1 => {
                let (s, c) = libm::sincos(self.eta);
                [re(c), ZERO, ZERO, ph * s]
            }
            InitialFamily::Psi2 => {
                let (s, c) = libm::sincos(self.alpha);
                [ZERO, ph * s, re(c), ZERO]
            }
            InitialFamily::Psi3 => {
                let (sa, ca) = libm::sincos(self.alpha);
                let (se, ce) = libm::sincos(self.eta);
                let (sb, cb) = libm::sincos(self.beta);
                [re(cb * ce), ph * (sb * sa), ph * (sb * ca), re(cb * se)]
            }
        }
    }
}

pub fn build_initial(spec: &InitialStateSpec) -> WalkerState {
    WalkerState::at_origin(spec.coin_vector())
}

/// Entanglement entropy (bits) between the two qubits of a pure coin state.
pub fn coin_entanglement(v: &CoinVector) -> f64 {
    // ρ₁[a][a'] = Σ_b c_{ab} conj(c_{a'b})
    let r00 = v[0].norm_sqr() + v[1].norm_sqr();
    let r11 = v[2].norm_sqr() + v[3].norm_sqr();
    let r01 = v[0] * v[2].conj() + v[1] * v[3].conj();
    let tr = r00 + r11;
    let half_gap = libm::sqrt((r00 - r11) * (r00 - r11) * 0.25 + r01.norm_sqr());
    let lo = (tr * 0.5 - half_gap).max(0.0);
    let hi = tr * 0.5 + half_gap;
    entropy_bits([hi, lo].into_iter())
}

/// Entanglement entropy of the qubit pair in the initial state, in bits.
pub fn initial_entanglement(spec: &InitialStateSpec) -> f64 {
    coin_entanglement(&spec.coin_vector())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{vec_norm, ONE};
    use crate::state::inner_product;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
    use proptest::prelude::*;

    #[test]
    fn separable_psi1() {
        let s = build_initial(&InitialStateSpec::psi1(0.0, 0.0));
        assert_eq!(s.step(), 0);
        assert_eq!(s.site(0), [ONE, ZERO, ZERO, ZERO]);
        assert_eq!(initial_entanglement(&InitialStateSpec::psi1(0.0, 1.3)), 0.0);
    }

    #[test]
    fn bell_psi1() {
        let v = InitialStateSpec::psi1(FRAC_PI_4, 0.0).coin_vector();
        assert!((v[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((v[3].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(v[1], ZERO);
        for phi in [0.0, 0.4, PI] {
            let e = initial_entanglement(&InitialStateSpec::psi1(FRAC_PI_4, phi));
            assert!((e - 1.0).abs() < 1e-15, "{e}");
        }
    }

    #[test]
    fn bell_psi2() {
        for phi in [0.0, PI] {
            let e = initial_entanglement(&InitialStateSpec::psi2(FRAC_PI_4, phi));
            assert!((e - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn psi3_with_zero_beta_is_psi1() {
        let a = InitialStateSpec::psi3(0.9, 0.4, 0.0, 0.7).coin_vector();
        let b = InitialStateSpec::psi1(0.4, 0.7).coin_vector();
        // psi1 puts the phase on |11>, psi3's cos β branch carries none
        assert!((a[0] - b[0]).norm() < 1e-16);
        assert!((a[3].norm() - b[3].norm()).abs() < 1e-16);
        let a0 = InitialStateSpec::psi3(0.9, 0.4, 0.0, 0.0);
        let b0 = InitialStateSpec::psi1(0.4, 0.0);
        let ip = inner_product(&build_initial(&a0), &build_initial(&b0)).unwrap();
        assert!((ip - ONE).norm() < 1e-15);
    }

    #[test]
    fn psi2_entropy_matches_binary_entropy() {
        // oracle: ρ₁ = diag(sin²α, cos²α) by inspection of the Schmidt form
        let lam = libm::cos(FRAC_PI_8).powi(2);
        let want = -lam * libm::log2(lam) - (1.0 - lam) * libm::log2(1.0 - lam);
        let got = initial_entanglement(&InitialStateSpec::psi2(FRAC_PI_8, 0.0));
        assert!((got - want).abs() < 1e-14);
        assert!((lam - 0.853_553_390_593_273_7).abs() < 1e-15);
    }

    #[test]
    fn family_names_round_trip() {
        for f in [
            InitialFamily::Psi1,
            InitialFamily::Psi2,
            InitialFamily::Psi3,
        ] {
            assert_eq!(f.name().parse::<InitialFamily>().unwrap(), f);
        }
        assert!("psi4".parse::<InitialFamily>().is_err());
    }

    proptest! {
        #[test]
        fn every_family_is_normalized(
            eta in 0.0..FRAC_PI_2, alpha in 0.0..FRAC_PI_2, beta in 0.0..FRAC_PI_2, phi in 0.0..FRAC_PI_2
        ) {
            for spec in [
                InitialStateSpec::psi1(eta, phi),
                InitialStateSpec::psi2(alpha, phi),
                InitialStateSpec::psi3(alpha, eta, beta, phi),
            ] {
                prop_assert!((vec_norm(&spec.coin_vector()) - 1.0).abs() < 1e-15);
                let e = initial_entanglement(&spec);
                prop_assert!((-1e-15..=1.0 + 1e-12).contains(&e));
            }
        }

        #[test]
        fn psi1_entanglement_is_mirror_symmetric(eta in 0.0..FRAC_PI_2, phi in 0.0..FRAC_PI_2) {
            let a = initial_entanglement(&InitialStateSpec::psi1(eta, phi));
            let b = initial_entanglement(&InitialStateSpec::psi1(FRAC_PI_2 - eta, phi));
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
