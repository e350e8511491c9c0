//! The walk operators: rotation matrices, the memory update, the
//! memory-conditioned coin, and the position shift.
//!
//! A full step is shift . coin . memory: the walker first records its
//! presence into the local memory qubit, the coin then mixes the direction
//! register with an angle chosen by that qubit, and the shift moves the
//! walker one site along its coin.
//!
//! Every operator builds its output amplitudes from fixed two-term sums
//! over basis pairs, so results never depend on traversal order and whole
//! trajectories are reproducible bit for bit.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{BasisLabel, Coin, SparseState, MAX_STEPS};

/// 2x2 unitary acting on a two-level register. `entry(from, to)` is the
/// transition weight from input index `from` to output index `to`; for the
/// coin the indices are ordered (coin -1, coin +1), for a memory qubit
/// (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix {
    m: [[Complex64; 2]; 2],
}

impl CoinMatrix {
    pub fn entry(&self, from: usize, to: usize) -> Complex64 {
        self.m[from][to]
    }

    /// Largest per-entry deviation of `U^dagger U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let mut dot = Complex64::ZERO;
                for k in 0..2 {
                    dot += self.m[k][i].conj() * self.m[k][j];
                }
                let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((dot - expect).norm());
            }
        }
        worst
    }
}

/// The Pauli-X rotation `[[cos t, -i sin t], [-i sin t, cos t]]`:
/// the identity at `t = 0`, a full bit-flip (up to the `-i` phase) at
/// `t = pi/2`, a balanced mix at `t = pi/4`.
pub fn rotation(theta: f64) -> CoinMatrix {
    let c = Complex64::new(theta.cos(), 0.0);
    let s = Complex64::new(0.0, -theta.sin());
    CoinMatrix { m: [[c, s], [s, c]] }
}

/// Probability of direction reversal at a site whose memory qubit is set:
/// `|sin theta_b|^2`. 0 at `theta_b = 0`, 1 at `theta_b = pi/2`.
pub fn reflectivity(theta_b: f64) -> f64 {
    let s = theta_b.sin();
    s * s
}

/// Which input state a walk starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    /// Equal coin superposition; mirror-symmetric dynamics.
    Symmetrized,
    /// Single right-moving component.
    Unsymmetrized,
}

/// Full experiment configuration for one walk.
///
/// `theta_c` is the coin angle on unvisited sites (pi/4 for a balanced
/// walk), `theta_b` the coin angle on visited sites (the memory
/// back-action), and `theta_m` the memory recording strength. Angles are
/// arbitrary finite reals; the physically distinct range is `[0, pi/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    pub theta_c: f64,
    pub theta_b: f64,
    pub theta_m: f64,
    pub steps: usize,
    pub input: InputKind,
}

impl WalkParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta_c.is_finite() && self.theta_b.is_finite() && self.theta_m.is_finite()) {
            return Err(Error::NonFiniteAngle);
        }
        if self.steps > MAX_STEPS {
            return Err(Error::StepsOverCap {
                steps: self.steps,
                cap: MAX_STEPS,
            });
        }
        Ok(())
    }
}

/// Rotates each entry's memory qubit at the walker's own site by
/// `theta_m`: the entry keeps its label with weight `cos theta_m` and
/// branches to the bit-flipped label with weight `-i sin theta_m`.
/// Position and coin are untouched.
pub fn apply_memory(state: &SparseState, theta_m: f64) -> SparseState {
    let r = rotation(theta_m);
    // Pair labels that differ only in the memory bit at their own site.
    let mut bases: BTreeSet<BasisLabel> = BTreeSet::new();
    for (label, _) in state.iter() {
        let mut base = *label;
        base.memory &= !(1u64 << label.site);
        bases.insert(base);
    }
    let mut out = SparseState::empty_like(state);
    for clear in bases {
        let set = clear.with_memory_flipped_at(clear.site);
        let a0 = state.amplitude(&clear);
        let a1 = state.amplitude(&set);
        out.set_amplitude(clear, r.entry(0, 0) * a0 + r.entry(1, 0) * a1);
        out.set_amplitude(set, r.entry(0, 1) * a0 + r.entry(1, 1) * a1);
    }
    out
}

/// Mixes each entry's coin with `rotation(theta_c)` when the memory qubit
/// at the walker's site is clear, `rotation(theta_b)` when it is set.
/// Position and memory are untouched.
pub fn apply_coin(state: &SparseState, theta_c: f64, theta_b: f64) -> SparseState {
    let r_clear = rotation(theta_c);
    let r_set = rotation(theta_b);
    // Pair labels that differ only in the coin.
    let mut bases: BTreeSet<(usize, u64)> = BTreeSet::new();
    for (label, _) in state.iter() {
        bases.insert((label.site, label.memory));
    }
    let mut out = SparseState::empty_like(state);
    for (site, memory) in bases {
        let left = BasisLabel::new(site, Coin::Left, memory);
        let right = BasisLabel::new(site, Coin::Right, memory);
        let u = if left.local_memory_bit() { &r_set } else { &r_clear };
        let a_l = state.amplitude(&left);
        let a_r = state.amplitude(&right);
        // out_j = sum_c U[c][j] * a_c
        out.set_amplitude(left, u.entry(0, 0) * a_l + u.entry(1, 0) * a_r);
        out.set_amplitude(right, u.entry(0, 1) * a_l + u.entry(1, 1) * a_r);
    }
    out
}

/// Moves every entry one site along its coin: `(x, c, m) -> (x+c, c, m)`.
/// A pure basis permutation; amplitudes are carried over bit-identically.
pub fn apply_step(state: &SparseState) -> Result<SparseState> {
    let n = state.lattice().n_sites();
    let mut out = SparseState::empty_like(state);
    for (label, amp) in state.iter() {
        let next = label.site as i64 + label.coin.offset();
        if next < 0 || next >= n as i64 {
            return Err(Error::BoundaryViolation {
                site: label.site,
                coin: label.coin.offset(),
            });
        }
        out.set_amplitude(BasisLabel::new(next as usize, label.coin, label.memory), *amp);
    }
    Ok(out)
}

/// One full evolution step: memory recording, then the conditional coin,
/// then the shift.
pub fn walk_step(state: &SparseState, params: &WalkParams) -> Result<SparseState> {
    let recorded = apply_memory(state, params.theta_m);
    let mixed = apply_coin(&recorded, params.theta_c, params.theta_b);
    apply_step(&mixed)
}
