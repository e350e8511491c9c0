//! Brute-force reference implementations used to cross-check the engine.
//!
//! These recompute everything from the operator definitions alone — the
//! path sum enumerates all `4^t` branch sequences and multiplies matrix
//! elements along each path, the coined walk uses a dense two-component
//! array — and share none of the sparse-state operator code they validate.
//! Exponential in `t` by construction; fine for the short walks the test
//! suite checks.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::Result;
use crate::ops::{InputKind, WalkParams};
use crate::state::{make_lattice, BasisLabel, Coin};

/// Final amplitude map after `params.steps` steps, obtained by summing
/// over every branch sequence (memory keep/flip times coin left/right per
/// step) and merging identical end labels.
pub fn path_sum_amplitudes(params: &WalkParams) -> Result<BTreeMap<BasisLabel, Complex64>> {
    params.validate()?;
    let lattice = make_lattice(params.steps.max(1))?;
    let start = lattice.start_index();

    let initial: Vec<(BasisLabel, Complex64)> = match params.input {
        InputKind::Symmetrized => {
            let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            vec![
                (BasisLabel::new(start, Coin::Left, 0), amp),
                (BasisLabel::new(start, Coin::Right, 0), amp),
            ]
        }
        InputKind::Unsymmetrized => vec![(BasisLabel::new(start, Coin::Right, 0), Complex64::ONE)],
    };

    let weights = PathWeights {
        cos_m: params.theta_m.cos(),
        sin_m: params.theta_m.sin(),
        cos_c: params.theta_c.cos(),
        sin_c: params.theta_c.sin(),
        cos_b: params.theta_b.cos(),
        sin_b: params.theta_b.sin(),
    };

    let mut merged = BTreeMap::new();
    for (label, amp) in initial {
        extend_paths(&weights, label, amp, params.steps, &mut merged);
    }
    Ok(merged)
}

struct PathWeights {
    cos_m: f64,
    sin_m: f64,
    cos_c: f64,
    sin_c: f64,
    cos_b: f64,
    sin_b: f64,
}

fn extend_paths(
    w: &PathWeights,
    label: BasisLabel,
    amp: Complex64,
    remaining: usize,
    merged: &mut BTreeMap<BasisLabel, Complex64>,
) {
    if remaining == 0 {
        *merged.entry(label).or_insert(Complex64::ZERO) += amp;
        return;
    }
    for flip in [false, true] {
        let memory_weight = if flip {
            Complex64::new(0.0, -w.sin_m)
        } else {
            Complex64::new(w.cos_m, 0.0)
        };
        let recorded = if flip {
            label.with_memory_flipped_at(label.site)
        } else {
            label
        };
        let (cos, sin) = if recorded.local_memory_bit() {
            (w.cos_b, w.sin_b)
        } else {
            (w.cos_c, w.sin_c)
        };
        for coin in Coin::BOTH {
            let coin_weight = if coin == label.coin {
                Complex64::new(cos, 0.0)
            } else {
                Complex64::new(0.0, -sin)
            };
            let moved = BasisLabel::new(
                (recorded.site as i64 + coin.offset()) as usize,
                coin,
                recorded.memory,
            );
            extend_paths(w, moved, amp * memory_weight * coin_weight, remaining - 1, merged);
        }
    }
}

/// Marginal position distributions of a plain memory-free coined walk with
/// coin `rotation(theta)`, one dense array per `t = 0..=steps`, over the
/// same `2*steps + 3`-site lattice the engine uses.
pub fn coined_walk_marginals(theta: f64, steps: usize, symmetrized: bool) -> Vec<Vec<f64>> {
    let n = 2 * steps.max(1) + 3;
    let start = steps.max(1) + 1;
    // amp[x][0] = left-moving component, amp[x][1] = right-moving
    let mut amp = vec![[Complex64::ZERO; 2]; n];
    if symmetrized {
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amp[start] = [a, a];
    } else {
        amp[start][1] = Complex64::ONE;
    }
    let cos = Complex64::new(theta.cos(), 0.0);
    let sin = Complex64::new(0.0, -theta.sin());

    let marginal = |amp: &Vec<[Complex64; 2]>| -> Vec<f64> {
        amp.iter()
            .map(|pair| pair[0].norm_sqr() + pair[1].norm_sqr())
            .collect()
    };

    let mut out = Vec::with_capacity(steps + 1);
    out.push(marginal(&amp));
    for _ in 0..steps {
        let mut next = vec![[Complex64::ZERO; 2]; n];
        // support never reaches the outermost sites by the sizing rule
        for x in 1..n - 1 {
            let pair = amp[x];
            let mixed_left = cos * pair[0] + sin * pair[1];
            let mixed_right = sin * pair[0] + cos * pair[1];
            next[x - 1][0] += mixed_left;
            next[x + 1][1] += mixed_right;
        }
        amp = next;
        out.push(marginal(&amp));
    }
    out
}

/// Per-step variances of the memory-free coined walk, positions relative
/// to the start site.
pub fn coined_walk_variances(theta: f64, steps: usize, symmetrized: bool) -> Vec<f64> {
    let start = steps.max(1) + 1;
    coined_walk_marginals(theta, steps, symmetrized)
        .iter()
        .map(|p| {
            let mu: f64 = p
                .iter()
                .enumerate()
                .map(|(x, &px)| px * (x as f64 - start as f64))
                .sum();
            p.iter()
                .enumerate()
                .map(|(x, &px)| {
                    let d = x as f64 - start as f64 - mu;
                    px * d * d
                })
                .sum()
        })
        .collect()
}
