//! Full walk evolution: iterates the composed step and records the
//! marginal position distribution and its moments at every time.

use crate::analysis::{moments, VariancePoint, VarianceSeries};
use crate::error::Result;
use crate::ops::{walk_step, InputKind, WalkParams};
use crate::state::{make_lattice, prepare_symmetrized, prepare_unsymmetrized, Lattice, SparseState};

/// Position probability distribution after tracing out the coin and
/// memory registers.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal {
    lattice: Lattice,
    probabilities: Vec<f64>,
}

impl Marginal {
    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    /// Probabilities indexed by absolute site, length `n_sites`.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Probability at position `offset` relative to the start site
    /// (zero outside the lattice).
    pub fn probability_at_offset(&self, offset: i64) -> f64 {
        let site = self.lattice.start_index() as i64 + offset;
        if site < 0 || site >= self.lattice.n_sites() as i64 {
            0.0
        } else {
            self.probabilities[site as usize]
        }
    }

    #[cfg(test)]
    pub(crate) fn from_raw(lattice: Lattice, probabilities: Vec<f64>) -> Self {
        assert_eq!(probabilities.len(), lattice.n_sites());
        Marginal {
            lattice,
            probabilities,
        }
    }
}

/// `p_x = sum over entries at site x of |amplitude|^2`.
pub fn marginal(state: &SparseState) -> Marginal {
    let lattice = state.lattice();
    let mut probabilities = vec![0.0; lattice.n_sites()];
    for (label, amp) in state.iter() {
        probabilities[label.site] += amp.norm_sqr();
    }
    Marginal {
        lattice,
        probabilities,
    }
}

/// Everything recorded over one walk: the marginal at every `t = 0..=steps`
/// and the aligned `(t, mu, var)` series. Full states are kept only on
/// request since their support can grow as `4^t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub params: WalkParams,
    pub marginals: Vec<Marginal>,
    pub variances: VarianceSeries,
    pub states: Option<Vec<SparseState>>,
}

impl Trajectory {
    /// Variance at the last recorded step.
    pub fn final_variance(&self) -> f64 {
        self.variances.entries().last().expect("trajectory has t = 0").var
    }
}

/// Runs the composed evolution for `params.steps` steps and records
/// marginals and moments (positions measured relative to the start site).
/// Deterministic: identical params give bit-identical trajectories.
pub fn run_walk(params: &WalkParams) -> Result<Trajectory> {
    run_walk_impl(params, false)
}

/// Like [`run_walk`] but also retains the full state at every step, at a
/// memory cost that grows with the `4^t` branch count.
pub fn run_walk_with_states(params: &WalkParams) -> Result<Trajectory> {
    run_walk_impl(params, true)
}

fn run_walk_impl(params: &WalkParams, keep_states: bool) -> Result<Trajectory> {
    params.validate()?;
    let lattice = make_lattice(params.steps.max(1))?;
    let mut state = match params.input {
        InputKind::Symmetrized => prepare_symmetrized(lattice),
        InputKind::Unsymmetrized => prepare_unsymmetrized(lattice),
    };
    let origin = lattice.start_index();

    let mut marginals = Vec::with_capacity(params.steps + 1);
    let mut points = Vec::with_capacity(params.steps + 1);
    let mut states = keep_states.then(|| Vec::with_capacity(params.steps + 1));

    for t in 0..=params.steps {
        if t > 0 {
            state = walk_step(&state, params)?;
        }
        let m = marginal(&state);
        let (mu, var) = moments(&m, origin);
        points.push(VariancePoint { t, mu, var });
        marginals.push(m);
        if let Some(states) = states.as_mut() {
            states.push(state.clone());
        }
    }

    Ok(Trajectory {
        params: *params,
        marginals,
        variances: VarianceSeries::new(points).expect("recorded series is well formed"),
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn params(theta_c: f64, theta_b: f64, theta_m: f64, steps: usize, input: InputKind) -> WalkParams {
        WalkParams {
            theta_c,
            theta_b,
            theta_m,
            steps,
            input,
        }
    }

    #[test]
    fn marginal_of_the_input_is_a_delta_at_the_start() {
        let lattice = make_lattice(7).unwrap();
        let m = marginal(&prepare_symmetrized(lattice));
        assert!((m.probability_at_offset(0) - 1.0).abs() < 1e-15);
        assert!((m.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(m.probability_at_offset(1), 0.0);
    }

    #[test]
    fn one_balanced_step_splits_half_half() {
        let p = params(FRAC_PI_4, FRAC_PI_4, 0.0, 1, InputKind::Symmetrized);
        let tr = run_walk(&p).unwrap();
        let m = &tr.marginals[1];
        assert!((m.probability_at_offset(-1) - 0.5).abs() < 1e-15);
        assert!((m.probability_at_offset(1) - 0.5).abs() < 1e-15);
        assert!(m.probability_at_offset(0) < 1e-30);
    }

    #[test]
    fn marginals_stay_normalized() {
        let p = params(FRAC_PI_4, 1.1, 0.4, 6, InputKind::Symmetrized);
        let tr = run_walk(&p).unwrap();
        for m in &tr.marginals {
            let total: f64 = m.probabilities().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ballistic_corner_spreads_quadratically() {
        let p = params(FRAC_PI_4, 0.0, FRAC_PI_2, 7, InputKind::Symmetrized);
        let tr = run_walk(&p).unwrap();
        let last = &tr.marginals[7];
        assert!((last.probability_at_offset(-7) - 0.5).abs() < 1e-12);
        assert!((last.probability_at_offset(7) - 0.5).abs() < 1e-12);
        for (point, t) in tr.variances.entries().iter().zip(0..) {
            assert!((point.var - (t * t) as f64).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn unsymmetrized_ballistic_twin_has_zero_variance() {
        let p = params(FRAC_PI_4, 0.0, FRAC_PI_2, 7, InputKind::Unsymmetrized);
        let tr = run_walk(&p).unwrap();
        for point in tr.variances.entries() {
            assert!(point.var <= 1e-12, "t = {}", point.t);
        }
        assert!((tr.marginals[7].probability_at_offset(7) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_recording_reduces_to_the_memory_free_walk() {
        for theta_b in [0.0, 0.7, FRAC_PI_2] {
            let p = params(FRAC_PI_4, theta_b, 0.0, 7, InputKind::Symmetrized);
            let tr = run_walk(&p).unwrap();
            let reference = reference::coined_walk_marginals(FRAC_PI_4, 7, true);
            for (t, m) in tr.marginals.iter().enumerate() {
                for (site, (&got, &want)) in
                    m.probabilities().iter().zip(&reference[t]).enumerate()
                {
                    assert!(
                        (got - want).abs() < 1e-12,
                        "theta_b = {theta_b}, t = {t}, site = {site}"
                    );
                }
            }
        }
    }

    #[test]
    fn zero_recording_trajectory_ignores_back_action_bit_for_bit() {
        let a = run_walk(&params(FRAC_PI_4, 0.3, 0.0, 7, InputKind::Symmetrized)).unwrap();
        let b = run_walk(&params(FRAC_PI_4, 1.2, 0.0, 7, InputKind::Symmetrized)).unwrap();
        assert_eq!(a.marginals, b.marginals);
        assert_eq!(a.variances, b.variances);
    }

    #[test]
    fn run_walk_is_deterministic() {
        let p = params(0.81, 0.47, 0.33, 6, InputKind::Symmetrized);
        let a = run_walk_with_states(&p).unwrap();
        let b = run_walk_with_states(&p).unwrap();
        assert_eq!(a.marginals, b.marginals);
        assert_eq!(a.variances, b.variances);
        assert_eq!(a.states, b.states);
    }

    #[test]
    fn support_respects_the_light_cone_and_parity() {
        let p = params(FRAC_PI_4, 0.9, 0.6, 6, InputKind::Symmetrized);
        let tr = run_walk(&p).unwrap();
        for (t, m) in tr.marginals.iter().enumerate() {
            for (site, &prob) in m.probabilities().iter().enumerate() {
                if prob == 0.0 {
                    continue;
                }
                let dx = m.lattice().relative(site);
                assert!(dx.unsigned_abs() as usize <= t, "outside light cone at t = {t}");
                assert_eq!(
                    (dx.rem_euclid(2)) as usize,
                    t % 2,
                    "parity break at t = {t}, site = {site}"
                );
            }
        }
    }

    #[test]
    fn zero_step_walk_records_only_the_input() {
        let p = params(FRAC_PI_4, 0.2, 0.9, 0, InputKind::Unsymmetrized);
        let tr = run_walk(&p).unwrap();
        assert_eq!(tr.marginals.len(), 1);
        assert_eq!(tr.variances.entries().len(), 1);
        assert_eq!(tr.final_variance(), 0.0);
    }

    #[test]
    fn steps_over_the_cap_are_rejected() {
        let p = params(FRAC_PI_4, 0.2, 0.9, 31, InputKind::Symmetrized);
        assert!(run_walk(&p).is_err());
    }
}
