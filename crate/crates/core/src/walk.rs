//! The walk protocol `|ψ_T> = (S C)^T |ψ_0>`: coin first, then shift.

use alloc::vec;
use alloc::vec::Vec;

use crate::coin::{make_coin, CoinSpec};
use crate::error::{Error, Result};
use crate::init::{build_initial, InitialStateSpec};
use crate::linalg::{Unitary4, ZERO};
use crate::observables::{pdd, PddSnapshot};
use crate::state::{CoinBasis, WalkerState};
use crate::NORM_TOL;

/// Default cap on the number of steps of a single walk.
pub const MAX_STEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    pub coin: CoinSpec,
    pub init: InitialStateSpec,
    pub steps: usize,
    pub max_steps: usize,
}

impl WalkParams {
    pub fn new(coin: CoinSpec, init: InitialStateSpec, steps: usize) -> Self {
        Self {
            coin,
            init,
            steps,
            max_steps: MAX_STEPS,
        }
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    fn check_budget(&self) -> Result<()> {
        if self.steps > self.max_steps {
            return Err(Error::Resource {
                what: "walk steps",
                requested: self.steps,
                limit: self.max_steps,
            });
        }
        Ok(())
    }
}

/// Per-step record of a walk, `snapshots[t]` for `t = 0..=T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<PddSnapshot>,
    /// Full wave functions, only when requested.
    pub states: Option<Vec<WalkerState>>,
    pub final_state: WalkerState,
}

impl Trajectory {
    pub fn last(&self) -> &PddSnapshot {
        self.snapshots
            .last()
            .expect("trajectory always holds step 0")
    }

    pub fn steps(&self) -> usize {
        self.snapshots.len() - 1
    }
}

/// Replaces each site's coin vector `v` by `C v`.
pub fn apply_coin(state: &WalkerState, coin: &Unitary4) -> WalkerState {
    let mut out = state.clone();
    for v in out.sites_mut() {
        *v = coin.apply(v);
    }
    out
}

/// Conditional shift: `|00>` moves to `x + 1`, `|11>` to `x − 1`, `|01>` and
/// `|10>` stay. The support grows by one site on each side.
pub fn apply_shift(state: &WalkerState) -> WalkerState {
    let t = state.step();
    let src = state.sites();
    let mut dst = vec![[ZERO; 4]; 2 * t + 3];
    // source index i sits at x = i − t, destination index j at x = j − t − 1
    for (i, v) in src.iter().enumerate() {
        dst[i + 2][CoinBasis::Q00.index()] = v[CoinBasis::Q00.index()];
        dst[i + 1][CoinBasis::Q01.index()] = v[CoinBasis::Q01.index()];
        dst[i + 1][CoinBasis::Q10.index()] = v[CoinBasis::Q10.index()];
        dst[i][CoinBasis::Q11.index()] = v[CoinBasis::Q11.index()];
    }
    WalkerState::from_sites_unchecked(t + 1, dst)
}

/// One step `S C`.
pub fn step(state: &WalkerState, coin: &Unitary4) -> WalkerState {
    // fused coin + shift, same result as apply_shift(&apply_coin(..))
    let t = state.step();
    let mut dst = vec![[ZERO; 4]; 2 * t + 3];
    for (i, v) in state.sites().iter().enumerate() {
        if v.iter().all(|z| *z == ZERO) {
            continue;
        }
        let w = coin.apply(v);
        dst[i + 2][0] = w[0];
        dst[i + 1][1] = w[1];
        dst[i + 1][2] = w[2];
        dst[i][3] = w[3];
    }
    WalkerState::from_sites_unchecked(t + 1, dst)
}

/// Inverse of [`step`]: `C† S†`, shrinking the support back to `[−(T−1), T−1]`.
///
/// Amplitude that `S†` would place outside the smaller light cone is
/// dropped; for a state produced by [`step`] it is exactly zero.
pub fn reverse_step(state: &WalkerState, coin: &Unitary4) -> Result<WalkerState> {
    let t = state.step();
    if t == 0 {
        return Err(Error::Usage("cannot step back from step 0"));
    }
    let src = state.sites();
    let adj = coin.adjoint();
    let mut dst = vec![[ZERO; 4]; 2 * t - 1];
    // destination index j sits at x = j − (t − 1), source index i at x = i − t
    for (j, out) in dst.iter_mut().enumerate() {
        let v = [src[j + 2][0], src[j + 1][1], src[j + 1][2], src[j][3]];
        *out = adj.apply(&v);
    }
    Ok(WalkerState::from_sites_unchecked(t - 1, dst))
}

/// Iterator over successive states, starting with step 0.
#[derive(Debug, Clone)]
pub struct Walker {
    coin: Unitary4,
    state: Option<WalkerState>,
    remaining: usize,
}

impl Walker {
    pub fn new(params: &WalkParams) -> Result<Self> {
        params.check_budget()?;
        Ok(Self::from_state(
            make_coin(params.coin),
            build_initial(&params.init),
            params.steps,
        ))
    }

    pub fn from_state(coin: Unitary4, state: WalkerState, steps: usize) -> Self {
        Self {
            coin,
            state: Some(state),
            remaining: steps,
        }
    }
}

impl Iterator for Walker {
    type Item = WalkerState;

    fn next(&mut self) -> Option<WalkerState> {
        let current = self.state.take()?;
        if self.remaining > 0 {
            self.remaining -= 1;
            self.state = Some(step(&current, &self.coin));
        }
        Some(current)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = if self.state.is_some() {
            self.remaining + 1
        } else {
            0
        };
        (n, Some(n))
    }
}

fn check_norm(state: &WalkerState, steps: usize) -> Result<()> {
    let drift = (state.norm_sqr() - 1.0).abs();
    if drift > NORM_TOL * (steps.max(1) as f64) {
        return Err(Error::Numeric("norm drifted beyond tolerance"));
    }
    Ok(())
}

/// Final state after `params.steps` steps.
pub fn run(params: &WalkParams) -> Result<WalkerState> {
    let coin = make_coin(params.coin);
    run_from(
        &coin,
        build_initial(&params.init),
        params.steps,
        params.max_steps,
    )
}

pub fn run_from(
    coin: &Unitary4,
    initial: WalkerState,
    steps: usize,
    max_steps: usize,
) -> Result<WalkerState> {
    if steps > max_steps {
        return Err(Error::Resource {
            what: "walk steps",
            requested: steps,
            limit: max_steps,
        });
    }
    check_norm(&initial, 0)?;
    let mut state = initial;
    for _ in 0..steps {
        state = step(&state, coin);
    }
    check_norm(&state, steps)?;
    Ok(state)
}

/// Runs the walk and records a density for every step, plus full states
/// when `keep_states` is set.
pub fn run_recorded(params: &WalkParams, keep_states: bool) -> Result<Trajectory> {
    let walker = Walker::new(params)?;
    let mut snapshots = Vec::with_capacity(params.steps + 1);
    let mut states = keep_states.then(|| Vec::with_capacity(params.steps + 1));
    let mut last = None;
    for s in walker {
        snapshots.push(pdd(&s));
        if let Some(v) = states.as_mut() {
            v.push(s.clone());
        }
        last = Some(s);
    }
    let final_state = last.expect("walker yields step 0");
    check_norm(&final_state, params.steps)?;
    Ok(Trajectory {
        snapshots,
        states,
        final_state,
    })
}
