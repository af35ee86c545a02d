//! Sub-coins and the composite two-qubit coin `C = C1 ⊗ C2`.

use crate::linalg::{cis, tensor2, Amp, Matrix, Unitary2, Unitary4};

/// Parameters of one single-qubit coin
/// `[[e^{iξ} cos θ, e^{iζ} sin θ], [e^{−iζ} sin θ, −e^{−iξ} cos θ]]`.
///
/// With `xi = zeta = 0` this is the rotation coin `cos θ σ_Z + sin θ σ_X`.
/// Angles are not range-checked here.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SubCoinSpec {
    pub theta: f64,
    pub xi: f64,
    pub zeta: f64,
}

impl SubCoinSpec {
    pub const fn rotation(theta: f64) -> Self {
        Self {
            theta,
            xi: 0.0,
            zeta: 0.0,
        }
    }

    pub const fn su2(theta: f64, xi: f64, zeta: f64) -> Self {
        Self { theta, xi, zeta }
    }

    pub fn is_rotation(&self) -> bool {
        self.xi == 0.0 && self.zeta == 0.0
    }
}

/// The two sub-coins; the first acts on the left qubit of `|ab>`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoinSpec {
    pub sub1: SubCoinSpec,
    pub sub2: SubCoinSpec,
}

impl CoinSpec {
    /// Rotation sub-coins with angles `theta` and `gamma`.
    pub const fn rotation(theta: f64, gamma: f64) -> Self {
        Self {
            sub1: SubCoinSpec::rotation(theta),
            sub2: SubCoinSpec::rotation(gamma),
        }
    }

    pub const fn new(sub1: SubCoinSpec, sub2: SubCoinSpec) -> Self {
        Self { sub1, sub2 }
    }

    pub fn theta(&self) -> f64 {
        self.sub1.theta
    }

    pub fn gamma(&self) -> f64 {
        self.sub2.theta
    }

    /// Both qubits are rotated by the same coin.
    pub fn is_identical(&self) -> bool {
        self.sub1 == self.sub2
    }

    pub fn is_rotation(&self) -> bool {
        self.sub1.is_rotation() && self.sub2.is_rotation()
    }
}

pub fn make_sub_coin(spec: SubCoinSpec) -> Unitary2 {
    let (s, c) = libm::sincos(spec.theta);
    let m = Matrix([
        [cis(spec.xi) * c, cis(spec.zeta) * s],
        [cis(-spec.zeta) * s, -cis(-spec.xi) * c],
    ]);
    Unitary2::from_trusted(m)
}

pub fn make_coin(spec: CoinSpec) -> Unitary4 {
    tensor2(&make_sub_coin(spec.sub1), &make_sub_coin(spec.sub2))
}

/// `cos θ σ_Z + sin θ σ_X`, written out independently of [`make_sub_coin`].
pub fn pauli_rotation(theta: f64) -> Matrix<2> {
    let (s, c) = libm::sincos(theta);
    let z = Matrix([
        [Amp::new(1.0, 0.0), Amp::new(0.0, 0.0)],
        [Amp::new(0.0, 0.0), Amp::new(-1.0, 0.0)],
    ]);
    let x = Matrix([
        [Amp::new(0.0, 0.0), Amp::new(1.0, 0.0)],
        [Amp::new(1.0, 0.0), Amp::new(0.0, 0.0)],
    ]);
    let mut m = Matrix::<2>::zeros();
    for i in 0..2 {
        for j in 0..2 {
            m.0[i][j] = z.0[i][j] * c + x.0[i][j] * s;
        }
    }
    m
}
