//! Lattice geometry, basis labeling, and the sparse state-vector container.
//!
//! A basis element of the memory-augmented walk is `(site, coin, memory)`:
//! the walker's position, its direction register, and one qubit per lattice
//! site packed into a 64-bit mask. States are kept as an ordered sparse map
//! from labels to complex amplitudes, so every traversal is deterministic
//! and repeated runs are bit-identical.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on walk length. The memory register packs one qubit per site
/// into a `u64`, and a walk of `t` steps needs `2t + 3` sites, so `t = 30`
/// (63 sites) is the longest walk the fixed-width mask supports.
pub const MAX_STEPS: usize = 30;

/// Coin direction. Matrix rows/columns are indexed in the fixed order
/// (`Left` = coin -1, `Right` = coin +1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coin {
    Left,
    Right,
}

impl Coin {
    pub const BOTH: [Coin; 2] = [Coin::Left, Coin::Right];

    /// Position displacement of one step: -1 or +1.
    pub fn offset(self) -> i64 {
        match self {
            Coin::Left => -1,
            Coin::Right => 1,
        }
    }

    /// Row/column index into a [`crate::ops::CoinMatrix`].
    pub fn index(self) -> usize {
        match self {
            Coin::Left => 0,
            Coin::Right => 1,
        }
    }

    pub fn flipped(self) -> Coin {
        match self {
            Coin::Left => Coin::Right,
            Coin::Right => Coin::Left,
        }
    }
}

/// Finite one-dimensional lattice, sized so that a walk launched at the
/// center can never touch a boundary site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    n_sites: usize,
    start_index: usize,
}

/// Builds the lattice for a walk of at most `max_steps` steps:
/// `2*max_steps + 3` sites with the walker centered at `max_steps + 1`.
/// Amplitude support grows by at most one site per step, so sites
/// `0`, `1`, `N-2`, `N-1` stay empty for the whole evolution.
pub fn make_lattice(max_steps: usize) -> Result<Lattice> {
    if max_steps == 0 {
        return Err(Error::ZeroSteps);
    }
    if max_steps > MAX_STEPS {
        return Err(Error::StepsOverCap {
            steps: max_steps,
            cap: MAX_STEPS,
        });
    }
    Ok(Lattice {
        n_sites: 2 * max_steps + 3,
        start_index: max_steps + 1,
    })
}

impl Lattice {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Site the walker starts on (the lattice midpoint).
    pub fn start_index(&self) -> usize {
        self.start_index
    }

    /// Position of `site` relative to the start site.
    pub fn relative(&self, site: usize) -> i64 {
        site as i64 - self.start_index as i64
    }
}

/// Dimension of the full position x coin x memory Hilbert space,
/// `N * 2^(N+1)`. Overflow is reported, never wrapped.
pub fn hilbert_dimension(lattice: &Lattice) -> Result<u64> {
    let n_sites = lattice.n_sites;
    let overflow = || Error::DimensionOverflow { n_sites };
    let shift = u32::try_from(n_sites + 1).map_err(|_| overflow())?;
    let pow = 1u64.checked_shl(shift).ok_or_else(overflow)?;
    (n_sites as u64).checked_mul(pow).ok_or_else(overflow)
}

/// One computational basis element: walker site, coin direction, and the
/// per-site memory mask (bit `i` is the qubit at site `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel {
    pub site: usize,
    pub coin: Coin,
    pub memory: u64,
}

impl BasisLabel {
    pub fn new(site: usize, coin: Coin, memory: u64) -> Self {
        BasisLabel { site, coin, memory }
    }

    /// Value of the memory qubit at the walker's own site.
    pub fn local_memory_bit(&self) -> bool {
        (self.memory >> self.site) & 1 == 1
    }

    /// Same label with the memory qubit at `site` toggled.
    pub fn with_memory_flipped_at(&self, site: usize) -> Self {
        BasisLabel {
            memory: self.memory ^ (1u64 << site),
            ..*self
        }
    }
}

/// Sparse complex state vector over the walk basis.
///
/// Exactly-zero amplitudes are removed on write, so the stored support is
/// always the true support. An optional prune threshold (squared magnitude)
/// can additionally drop near-zero entries; it defaults to 0 and should stay
/// there for exact unitary evolution, since any positive threshold discards
/// probability and lets the norm drift.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    lattice: Lattice,
    amplitudes: BTreeMap<BasisLabel, Complex64>,
    prune_threshold: f64,
}

impl SparseState {
    pub fn empty(lattice: Lattice) -> Self {
        SparseState {
            lattice,
            amplitudes: BTreeMap::new(),
            prune_threshold: 0.0,
        }
    }

    /// Empty state sharing `other`'s lattice and prune threshold.
    pub(crate) fn empty_like(other: &SparseState) -> Self {
        SparseState {
            lattice: other.lattice,
            amplitudes: BTreeMap::new(),
            prune_threshold: other.prune_threshold,
        }
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    /// Squared-magnitude cutoff below which written amplitudes are dropped.
    /// Non-zero values trade exactness for sparsity: pruned probability is
    /// gone for good and the norm will drift below 1.
    pub fn set_prune_threshold(&mut self, threshold: f64) {
        assert!(threshold >= 0.0, "prune threshold must be non-negative");
        self.prune_threshold = threshold;
    }

    pub fn prune_threshold(&self) -> f64 {
        self.prune_threshold
    }

    /// Amplitude of `label`, zero if absent.
    pub fn amplitude(&self, label: &BasisLabel) -> Complex64 {
        self.amplitudes
            .get(label)
            .copied()
            .unwrap_or(Complex64::ZERO)
    }

    /// Writes `amp` at `label`, removing the entry when the squared
    /// magnitude is at or below the prune threshold (exact zeros always go).
    pub fn set_amplitude(&mut self, label: BasisLabel, amp: Complex64) {
        let n = self.lattice.n_sites;
        assert!(label.site < n, "site {} outside lattice of {} sites", label.site, n);
        assert!(
            n >= 64 || label.memory >> n == 0,
            "memory mask has bits beyond site {}",
            n - 1
        );
        if amp.norm_sqr() <= self.prune_threshold {
            self.amplitudes.remove(&label);
        } else {
            self.amplitudes.insert(label, amp);
        }
    }

    /// Entries in canonical `(site, coin, memory)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&BasisLabel, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Sum of squared amplitude magnitudes; 1 for any physical state.
    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }
}

/// Input state `(|left> + |right>)/sqrt(2)` at the start site with all
/// memory qubits clear; its position distribution stays mirror-symmetric
/// for every parameter choice.
pub fn prepare_symmetrized(lattice: Lattice) -> SparseState {
    let mut state = SparseState::empty(lattice);
    let amp = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let start = lattice.start_index;
    state.set_amplitude(BasisLabel::new(start, Coin::Left, 0), amp);
    state.set_amplitude(BasisLabel::new(start, Coin::Right, 0), amp);
    state
}

/// Input state `|right>` at the start site with all memory qubits clear.
pub fn prepare_unsymmetrized(lattice: Lattice) -> SparseState {
    let mut state = SparseState::empty(lattice);
    let start = lattice.start_index;
    state.set_amplitude(BasisLabel::new(start, Coin::Right, 0), Complex64::ONE);
    state
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_lattice_sizes_for_the_walk() {
        let lattice = make_lattice(7).unwrap();
        assert_eq!(lattice.n_sites(), 17);
        assert_eq!(lattice.start_index(), 8);

        let lattice = make_lattice(1).unwrap();
        assert_eq!(lattice.n_sites(), 5);
        assert_eq!(lattice.start_index(), 2);
    }

    #[test]
    fn make_lattice_rejects_zero_steps() {
        assert!(matches!(make_lattice(0), Err(Error::ZeroSteps)));
    }

    #[test]
    fn make_lattice_rejects_steps_over_cap() {
        assert!(make_lattice(MAX_STEPS).is_ok());
        assert!(matches!(
            make_lattice(MAX_STEPS + 1),
            Err(Error::StepsOverCap { .. })
        ));
    }

    #[test]
    fn hilbert_dimension_matches_closed_form() {
        // N * 2^(N+1) for a few hand-evaluated sizes
        let dim = |n_sites| {
            hilbert_dimension(&Lattice {
                n_sites,
                start_index: n_sites / 2,
            })
        };
        assert_eq!(dim(1).unwrap(), 4);
        assert_eq!(dim(3).unwrap(), 48);
        assert_eq!(dim(17).unwrap(), 4_456_448);
        assert_eq!(dim(57).unwrap(), 57u64 << 58);
    }

    #[test]
    fn hilbert_dimension_reports_overflow() {
        let big = Lattice {
            n_sites: 58,
            start_index: 29,
        };
        assert!(matches!(
            hilbert_dimension(&big),
            Err(Error::DimensionOverflow { n_sites: 58 })
        ));
        let bigger = Lattice {
            n_sites: 63,
            start_index: 31,
        };
        assert!(hilbert_dimension(&bigger).is_err());
    }

    #[test]
    fn symmetrized_input_is_an_equal_coin_superposition() {
        let lattice = make_lattice(7).unwrap();
        let state = prepare_symmetrized(lattice);
        assert_eq!(state.len(), 2);
        for (label, amp) in state.iter() {
            assert_eq!(label.site, 8);
            assert_eq!(label.memory, 0);
            assert!((amp.norm_sqr() - 0.5).abs() < 1e-15);
        }
        assert!((state.norm_squared() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unsymmetrized_input_is_a_single_right_mover() {
        let lattice = make_lattice(3).unwrap();
        let state = prepare_unsymmetrized(lattice);
        assert_eq!(state.len(), 1);
        let (label, amp) = state.iter().next().unwrap();
        assert_eq!(label.coin, Coin::Right);
        assert_eq!(label.site, lattice.start_index());
        assert_eq!(label.memory, 0);
        assert_eq!(*amp, Complex64::ONE);
        assert_eq!(state.norm_squared(), 1.0);
    }

    #[test]
    fn zero_amplitudes_are_removed_on_write() {
        let lattice = make_lattice(2).unwrap();
        let mut state = SparseState::empty(lattice);
        let label = BasisLabel::new(3, Coin::Left, 0b101);
        state.set_amplitude(label, Complex64::new(0.3, -0.4));
        assert_eq!(state.len(), 1);
        state.set_amplitude(label, Complex64::ZERO);
        assert!(state.is_empty());
        assert_eq!(state.norm_squared(), 0.0);
    }

    #[test]
    fn prune_threshold_drops_small_entries() {
        let lattice = make_lattice(2).unwrap();
        let mut state = SparseState::empty(lattice);
        state.set_prune_threshold(1e-20);
        state.set_amplitude(BasisLabel::new(3, Coin::Left, 0), Complex64::new(1e-11, 0.0));
        assert!(state.is_empty());
        state.set_amplitude(BasisLabel::new(3, Coin::Left, 0), Complex64::new(1e-9, 0.0));
        assert_eq!(state.len(), 1);
    }

    #[test]
    #[should_panic(expected = "outside lattice")]
    fn labels_outside_the_lattice_are_rejected() {
        let lattice = make_lattice(1).unwrap();
        let mut state = SparseState::empty(lattice);
        state.set_amplitude(BasisLabel::new(5, Coin::Left, 0), Complex64::ONE);
    }

    #[test]
    #[should_panic(expected = "memory mask")]
    fn memory_bits_beyond_the_lattice_are_rejected() {
        let lattice = make_lattice(1).unwrap();
        let mut state = SparseState::empty(lattice);
        state.set_amplitude(BasisLabel::new(2, Coin::Left, 1 << 5), Complex64::ONE);
    }
}
