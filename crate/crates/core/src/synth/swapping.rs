//! Photon-swapping synthesis of an arbitrary two-resonator state.
//!
//! The reverse evolution walks diagonals of fixed total quantum number
//! n_a + n_b + q, highest first. Along diagonal l it repeatedly swaps quanta
//! from mode B to mode A (B then A half-steps, m = l down to 2), folds the
//! corner |0,l,0> into the qubit with a modified final swap (m = 1), and
//! closes the diagonal with one phase + rotation pair that need only be
//! selective on n_a = l - 1. States confined to a single diagonal need no
//! selectivity at all, which is what [`synth_diagonal`] emits.

use num_complex::Complex64;

use crate::error::Result;
use crate::gates::{Instruction, Selectivity};
use crate::state::{make_state, wrap_angle, Dims, StateVector};

use super::{solve_zeroing, ReverseBuilder, StepLabel, Synthesis};

/// Compile an arbitrary target supported on n_a + n_b <= some total.
/// `coeffs[n_a][n_b]` indexes the grid; rows may be ragged.
pub fn synth_swapping(coeffs: &[Vec<Complex64>]) -> Result<Synthesis> {
    let target = make_state(coeffs)?;
    walk_diagonals(&target, true, "swapping")
}

/// Compile a diagonal state sum_n c_n |N - n, n> (fixed total photon
/// number N). The emitted program contains no selective rotations.
pub fn synth_diagonal(coeffs: &[Complex64]) -> Result<Synthesis> {
    let n_total = coeffs.len().saturating_sub(1);
    let mut grid = vec![vec![Complex64::new(0.0, 0.0); n_total + 1]; n_total + 1];
    for (n, &c) in coeffs.iter().enumerate() {
        grid[n_total - n][n] = c;
    }
    let target = make_state(&grid)?;
    walk_diagonals(&target, false, "diagonal")
}

/// Re-home the target on a square space just large enough for the walk:
/// forward A-swaps drive n_a up to the largest occupied total.
fn fit_to_square(target: &StateVector) -> StateVector {
    let (_, _, l_max) = target.support_bounds();
    let dims = Dims::new(l_max, l_max);
    let mut out = StateVector::zeros(dims);
    for na in 0..=target.dims().n_a_max.min(l_max) {
        for nb in 0..=target.dims().n_b_max.min(l_max.saturating_sub(na)) {
            out.set_amp(0, na, nb, target.amp(0, na, nb));
        }
    }
    out.normalize().expect("support bound keeps the norm");
    out
}

fn walk_diagonals(raw_target: &StateVector, selective: bool, algorithm: &str) -> Result<Synthesis> {
    let target = fit_to_square(raw_target);
    let l_max = target.dims().n_a_max;
    let mut walk = ReverseBuilder::new(target.clone());

    for l in (1..=l_max).rev() {
        for m in (1..=l).rev() {
            // B half: zero <0,l-m,m| onto |1,l-m,m-1>.
            let psi = walk.state();
            let (phase, x) = solve_zeroing(psi.amp(0, l - m, m), psi.amp(1, l - m, m - 1));
            let alpha = wrap_angle(-phase);
            let eta = x / (m as f64).sqrt();
            walk.step(Instruction::QubitPhase { angle: alpha })?;
            walk.step(Instruction::SwapB { angle: eta })?;

            let (beta, theta) = if m >= 2 {
                // A half: zero <1,l-m,m-1| onto |0,l-m+1,m-1>.
                let psi = walk.state();
                let (phase, x) =
                    solve_zeroing(psi.amp(1, l - m, m - 1), psi.amp(0, l - m + 1, m - 1));
                (phase, x / ((l - m + 1) as f64).sqrt())
            } else {
                // Modified final swap: zero <0,l,0| onto |1,l-1,0>.
                let psi = walk.state();
                let (phase, x) = solve_zeroing(psi.amp(0, l, 0), psi.amp(1, l - 1, 0));
                (wrap_angle(-phase), x / (l as f64).sqrt())
            };
            walk.step(Instruction::QubitPhase { angle: beta })?;
            walk.step(Instruction::SwapA { angle: theta })?;

            walk.snapshot(
                StepLabel::Diagonal { l, m },
                vec![
                    ("alpha", alpha),
                    ("eta", eta),
                    ("beta", beta),
                    ("theta", theta),
                ],
            );
        }

        // Close the diagonal: zero <1,l-1,0| onto |0,l-1,0>.
        let psi = walk.state();
        let (phase, x) = solve_zeroing(psi.amp(1, l - 1, 0), psi.amp(0, l - 1, 0));
        let phi = phase;
        let gamma = 2.0 * x;
        walk.step(Instruction::QubitPhase { angle: phi })?;
        walk.step(if selective {
            Instruction::SelectiveRotation {
                angle: gamma,
                selectivity: Selectivity::ModeA { n_a: l - 1 },
            }
        } else {
            Instruction::QubitRotation { angle: gamma }
        })?;
        walk.snapshot(
            StepLabel::DiagonalClose { l },
            vec![("phi", phi), ("gamma", gamma)],
        );
    }

    walk.finish(algorithm, &target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{fidelity, required_selectivity, run_program, Instruction};
    use crate::state::{random_target_with, random_triangle_target_with, StateVector};
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

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
        let synth = synth_swapping(&[vec![c(1.0, 0.0)]]).unwrap();
        assert!(synth.program.instructions.is_empty());
        let synth = synth_diagonal(&[c(1.0, 0.0)]).unwrap();
        assert!(synth.program.instructions.is_empty());
    }

    #[test]
    fn random_triangle_targets_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let psi = random_triangle_target_with(4, &mut rng);
            let synth = synth_swapping(&grid_from_state(&psi)).unwrap();
            let ground = StateVector::ground(synth.program.dims);
            let out = run_program(&synth.program, &ground).unwrap();
            let target = synth.program.target_state().unwrap();
            let f = fidelity(&out, &target).unwrap();
            assert!((f - 1.0).abs() < 1e-9, "fidelity {f}");

            let flags = required_selectivity(&synth.program, &ground).unwrap();
            let closes = synth
                .program
                .instructions
                .iter()
                .filter(|i| matches!(i, Instruction::SelectiveRotation { .. }))
                .count();
            assert!(flags.iter().filter(|f| f.required).count() <= closes);
        }
    }

    #[test]
    fn rectangular_targets_are_exact() {
        // Uneven cutoffs exercise the square re-homing.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..6 {
            let psi = random_target_with(crate::state::Dims::new(3, 1), &mut rng);
            let synth = synth_swapping(&grid_from_state(&psi)).unwrap();
            assert_eq!(synth.program.dims, Dims::new(4, 4));
            let out =
                run_program(&synth.program, &StateVector::ground(synth.program.dims)).unwrap();
            let target = synth.program.target_state().unwrap();
            assert!((fidelity(&out, &target).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn support_never_leaves_processed_diagonals() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let psi = random_triangle_target_with(4, &mut rng);
        let synth = synth_swapping(&grid_from_state(&psi)).unwrap();
        for step in &synth.trace.steps {
            let l = match step.label {
                StepLabel::Diagonal { l, .. } => l,
                StepLabel::DiagonalClose { l } => l - 1,
                _ => unreachable!(),
            };
            let (_, _, max_total) = step.state_after.support_bounds();
            assert!(
                max_total <= l,
                "support total {max_total} above diagonal {l}"
            );
        }
    }

    #[test]
    fn diagonal_targets_need_no_selectivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4usize {
            let psi = random_target_with(crate::state::Dims::new(n, 0), &mut rng);
            let coeffs: Vec<Complex64> = (0..=n).map(|k| psi.amp(0, k, 0)).collect();
            let synth = synth_diagonal(&coeffs).unwrap();
            assert!(
                synth
                    .program
                    .instructions
                    .iter()
                    .all(|i| !matches!(i, Instruction::SelectiveRotation { .. })),
                "diagonal program leaked a selective rotation at N = {n}"
            );
            let ground = StateVector::ground(synth.program.dims);
            let out = run_program(&synth.program, &ground).unwrap();
            let target = synth.program.target_state().unwrap();
            assert!((fidelity(&out, &target).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn diagonal_census_matches_swap_counts() {
        // N rotations, 2N-1 A-swaps, N B-swaps for any diagonal state.
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for n in 1..=5usize {
            let psi = random_target_with(crate::state::Dims::new(n, 0), &mut rng);
            let coeffs: Vec<Complex64> = (0..=n).map(|k| psi.amp(0, k, 0)).collect();
            let synth = synth_diagonal(&coeffs).unwrap();
            assert_eq!(synth.program.count_rotations(), n, "rotations at N = {n}");
            assert_eq!(synth.program.count_swap_a(), 2 * n - 1, "A-swaps at N = {n}");
            assert_eq!(synth.program.count_swap_b(), n, "B-swaps at N = {n}");
        }
    }
}
