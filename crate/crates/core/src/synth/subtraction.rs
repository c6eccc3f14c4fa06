//! Photon-subtraction synthesis of an arbitrary two-resonator state.
//!
//! Stage 1 walks the Fock grid row-by-row (j = N_b down to 1) and
//! column-by-column (k = N_a down to 0 unless reversed), each step
//! subtracting one mode-B photon from |0,k,j> through the qubit. The
//! rotations are selective on n_a = k so previously cleared states are
//! unaffected. Stage 2 removes the photons accumulated in mode A with a
//! Law-Eberly chain along n_b = 0, selective on the Fock state it empties.

use num_complex::Complex64;

use crate::error::Result;
use crate::gates::{Instruction, Selectivity};
use crate::state::{make_state, wrap_angle};

use super::{solve_zeroing, ReverseBuilder, StepLabel, Synthesis};

/// Knobs exposed by the algorithm.
#[derive(Debug, Clone, Copy, Default)]
pub struct SubtractionOptions {
    /// Iterate stage-1 columns k = 0 up to N_a instead of N_a down to 0.
    /// Some number-state-selective interactions prefer this ordering.
    pub reverse_columns: bool,
}

/// Compile an arbitrary |0> (x) sum c_{n_a,n_b} |n_a, n_b> target.
/// `coeffs[n_a][n_b]` indexes the grid; rows may be ragged.
pub fn synth_subtraction(
    coeffs: &[Vec<Complex64>],
    options: SubtractionOptions,
) -> Result<Synthesis> {
    let target = make_state(coeffs)?;
    let dims = target.dims();
    let mut walk = ReverseBuilder::new(target.clone());

    // Stage 1: clear every row with mode-B photons.
    for j in (1..=dims.n_b_max).rev() {
        let columns: Vec<usize> = if options.reverse_columns {
            (0..=dims.n_a_max).collect()
        } else {
            (0..=dims.n_a_max).rev().collect()
        };
        for k in columns {
            // Zero <0,k,j| onto |1,k,j-1>.
            let psi = walk.state();
            let (phase, x) = solve_zeroing(psi.amp(0, k, j), psi.amp(1, k, j - 1));
            let alpha = wrap_angle(-phase);
            let theta = x / (j as f64).sqrt();
            walk.step(Instruction::QubitPhase { angle: alpha })?;
            walk.step(Instruction::SwapB { angle: theta })?;

            // Zero <1,k,j-1| onto |0,k,j-1>, selective on n_a = k.
            let psi = walk.state();
            let (phase, x) = solve_zeroing(psi.amp(1, k, j - 1), psi.amp(0, k, j - 1));
            let beta = phase;
            let gamma = 2.0 * x;
            walk.step(Instruction::QubitPhase { angle: beta })?;
            walk.step(Instruction::SelectiveRotation {
                angle: gamma,
                selectivity: Selectivity::ModeA { n_a: k },
            })?;

            walk.snapshot(
                StepLabel::RowColumn { j, k },
                vec![
                    ("alpha", alpha),
                    ("theta", theta),
                    ("beta", beta),
                    ("gamma", gamma),
                ],
            );
        }
    }

    // Stage 2: Law-Eberly along n_b = 0, rotations selective on the state
    // they empty so the already-accumulated ground amplitude stays put.
    for j in (1..=dims.n_a_max).rev() {
        let psi = walk.state();
        let (phase, x) = solve_zeroing(psi.amp(0, j, 0), psi.amp(1, j - 1, 0));
        let alpha = wrap_angle(-phase);
        let theta = x / (j as f64).sqrt();
        walk.step(Instruction::QubitPhase { angle: alpha })?;
        walk.step(Instruction::SwapA { angle: theta })?;

        let psi = walk.state();
        let (phase, x) = solve_zeroing(psi.amp(1, j - 1, 0), psi.amp(0, j - 1, 0));
        let beta = phase;
        let gamma = 2.0 * x;
        walk.step(Instruction::QubitPhase { angle: beta })?;
        walk.step(Instruction::SelectiveRotation {
            angle: gamma,
            selectivity: Selectivity::ExactFock { n_a: j - 1, n_b: 0 },
        })?;

        walk.snapshot(
            StepLabel::ModeAChain { j },
            vec![
                ("alpha", alpha),
                ("theta", theta),
                ("beta", beta),
                ("gamma", gamma),
            ],
        );
    }

    walk.finish("subtraction", &target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{fidelity, run_program};
    use crate::state::{random_target, Dims, StateVector, AMP_EPS};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid_from_state(psi: &StateVector) -> Vec<Vec<Complex64>> {
        let d = psi.dims();
        (0..=d.n_a_max)
            .map(|na| (0..=d.n_b_max).map(|nb| psi.amp(0, na, nb)).collect())
            .collect()
    }

    #[test]
    fn ground_target_gives_empty_program() {
        let synth =
            synth_subtraction(&[vec![c(1.0, 0.0)]], SubtractionOptions::default()).unwrap();
        assert!(synth.program.instructions.is_empty());
    }

    #[test]
    fn random_targets_are_exact_both_column_orders() {
        for seed in 0..12u64 {
            let psi = random_target(Dims::new(3, 3), seed);
            let grid = grid_from_state(&psi);
            for reverse_columns in [false, true] {
                let synth =
                    synth_subtraction(&grid, SubtractionOptions { reverse_columns }).unwrap();
                let ground = StateVector::ground(synth.program.dims);
                let out = run_program(&synth.program, &ground).unwrap();
                let f = fidelity(&out, &psi).unwrap();
                assert!(
                    (f - 1.0).abs() < 1e-9,
                    "fidelity {f} at seed {seed}, reversed = {reverse_columns}"
                );
            }
        }
    }

    #[test]
    fn census_counts_swaps_and_rotations() {
        // Generic targets prune nothing: N_a + N_b + N_a N_b swaps, as many
        // rotations, twice as many phase shifts.
        let (n_a, n_b) = (3usize, 2usize);
        let psi = random_target(Dims::new(n_a, n_b), 7);
        let synth =
            synth_subtraction(&grid_from_state(&psi), SubtractionOptions::default()).unwrap();
        let expected = n_a + n_b + n_a * n_b;
        assert_eq!(synth.program.count_swap_a() + synth.program.count_swap_b(), expected);
        assert_eq!(synth.program.count_rotations(), expected);
        assert_eq!(synth.program.count_phases(), 2 * expected);
    }

    #[test]
    fn cleared_states_stay_cleared() {
        // After step (j,k): row j holds nothing at n_a >= k, rows above j
        // hold nothing at all (q = 0).
        let psi = random_target(Dims::new(2, 2), 21);
        let synth =
            synth_subtraction(&grid_from_state(&psi), SubtractionOptions::default()).unwrap();
        for step in &synth.trace.steps {
            let StepLabel::RowColumn { j, k } = step.label else {
                continue;
            };
            let s = &step.state_after;
            let d = s.dims();
            for na in 0..=d.n_a_max {
                for nb in 0..=d.n_b_max {
                    let cleared = nb > j || (nb == j && na >= k);
                    if cleared {
                        let a = s.amp(0, na, nb).norm();
                        assert!(
                            a < AMP_EPS,
                            "amplitude {a} resurfaced at (0,{na},{nb}) after step ({j},{k})"
                        );
                    }
                }
            }
        }
    }
}
