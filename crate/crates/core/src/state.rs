//! The walker's wave function over lattice sites and coin states.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{is_finite, Amp, ZERO};

/// Index of a coin basis state. The layout is fixed crate-wide:
/// `0 ↔ |00>`, `1 ↔ |01>`, `2 ↔ |10>`, `3 ↔ |11>`, i.e. index `2a + b` for
/// the first qubit in `|a>` and the second in `|b>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoinBasis {
    Q00 = 0,
    Q01 = 1,
    Q10 = 2,
    Q11 = 3,
}

impl CoinBasis {
    pub const ALL: [CoinBasis; 4] = [Self::Q00, Self::Q01, Self::Q10, Self::Q11];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub const fn from_bits(first: u8, second: u8) -> Self {
        match (first & 1, second & 1) {
            (0, 0) => Self::Q00,
            (0, 1) => Self::Q01,
            (1, 0) => Self::Q10,
            _ => Self::Q11,
        }
    }

    /// Displacement applied by the conditional shift.
    pub const fn displacement(self) -> i64 {
        match self {
            Self::Q00 => 1,
            Self::Q11 => -1,
            Self::Q01 | Self::Q10 => 0,
        }
    }
}

impl fmt::Display for CoinBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Q00 => "|00>",
            Self::Q01 => "|01>",
            Self::Q10 => "|10>",
            Self::Q11 => "|11>",
        };
        f.write_str(s)
    }
}

/// Coin register amplitudes at one lattice site.
pub type CoinVector = [Amp; 4];

/// Wave function `Ψ_T(x, z)` at step `T`, stored densely over `x ∈ [−T, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    step: usize,
    amps: Vec<CoinVector>,
}

impl WalkerState {
    /// Walker at the origin with the given coin vector, at step 0.
    pub fn at_origin(coin: CoinVector) -> Self {
        Self {
            step: 0,
            amps: vec![coin],
        }
    }

    /// Builds a state from `2·step + 1` site vectors ordered from `x = −step`.
    pub fn from_sites(step: usize, amps: Vec<CoinVector>) -> Result<Self> {
        if amps.len() != 2 * step + 1 {
            return Err(Error::Shape("site count must be 2·step + 1"));
        }
        if !amps.iter().flatten().all(|z| is_finite(*z)) {
            return Err(Error::Numeric("non-finite amplitude"));
        }
        Ok(Self { step, amps })
    }

    pub(crate) fn from_sites_unchecked(step: usize, amps: Vec<CoinVector>) -> Self {
        debug_assert_eq!(amps.len(), 2 * step + 1);
        Self { step, amps }
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// Position of `sites()[0]`.
    pub fn offset(&self) -> i64 {
        -(self.step as i64)
    }

    pub fn sites(&self) -> &[CoinVector] {
        &self.amps
    }

    pub(crate) fn sites_mut(&mut self) -> &mut [CoinVector] {
        &mut self.amps
    }

    pub fn site(&self, x: i64) -> CoinVector {
        let i = x - self.offset();
        if i < 0 || i as usize >= self.amps.len() {
            [ZERO; 4]
        } else {
            self.amps[i as usize]
        }
    }

    pub fn amp(&self, x: i64, z: CoinBasis) -> Amp {
        self.site(x)[z.index()]
    }

    /// `(x, coin vector)` pairs from left to right.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &CoinVector)> + '_ {
        let off = self.offset();
        self.amps
            .iter()
            .enumerate()
            .map(move |(i, v)| (off + i as i64, v))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by `e^{i angle}`.
    pub fn with_global_phase(mut self, angle: f64) -> Self {
        let ph = crate::linalg::cis(angle);
        for z in self.amps.iter_mut().flatten() {
            *z *= ph;
        }
        self
    }
}

/// `⟨a|b⟩ = Σ_x Σ_z conj(a(x,z)) b(x,z)`.
pub fn inner_product(a: &WalkerState, b: &WalkerState) -> Result<Amp> {
    if a.step != b.step {
        return Err(Error::Shape("states are at different steps"));
    }
    Ok(a.amps
        .iter()
        .zip(&b.amps)
        .flat_map(|(u, v)| u.iter().zip(v))
        .map(|(x, y)| x.conj() * y)
        .sum())
}
