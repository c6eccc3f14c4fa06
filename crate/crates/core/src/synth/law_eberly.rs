//! Law-Eberly synthesis of an arbitrary single-resonator state.
//!
//! Reverse evolution: for j = N_max down to 1, a phase + swap pair zeroes
//! <0,j| (moving its amplitude onto |1,j-1>), then a phase + rotation pair
//! zeroes <1,j-1|. The form of the sequence never sends amplitude to higher
//! photon numbers, so after step j nothing occupies levels >= j.

use num_complex::Complex64;

use crate::error::Result;
use crate::gates::Instruction;
use crate::state::{make_single_mode, wrap_angle};

use super::{solve_zeroing, ReverseBuilder, StepLabel, Synthesis};

/// Compile |0> (x) sum_n c_n |n> into qubit phases, rotations, and mode-A
/// swaps. `coeffs[n]` is c_n; the maximum photon number is its top index.
pub fn synth_law_eberly(coeffs: &[Complex64]) -> Result<Synthesis> {
    let target = make_single_mode(coeffs)?;
    let n_max = target.dims().n_a_max;
    let mut walk = ReverseBuilder::new(target.clone());

    for j in (1..=n_max).rev() {
        // Zero <0,j| onto |1,j-1>: e^{-i alpha} tan(sqrt(j) theta) = rho.
        let psi = walk.state();
        let (phase, x) = solve_zeroing(psi.amp(0, j, 0), psi.amp(1, j - 1, 0));
        let alpha = wrap_angle(-phase);
        let theta = x / (j as f64).sqrt();
        walk.step(Instruction::QubitPhase { angle: alpha })?;
        walk.step(Instruction::SwapA { angle: theta })?;

        // Zero <1,j-1| onto |0,j-1>: e^{+i beta} tan(gamma/2) = rho.
        let psi = walk.state();
        let (phase, x) = solve_zeroing(psi.amp(1, j - 1, 0), psi.amp(0, j - 1, 0));
        let beta = phase;
        let gamma = 2.0 * x;
        walk.step(Instruction::QubitPhase { angle: beta })?;
        walk.step(Instruction::QubitRotation { angle: gamma })?;

        walk.snapshot(
            StepLabel::Level { j },
            vec![
                ("alpha", alpha),
                ("theta", theta),
                ("beta", beta),
                ("gamma", gamma),
            ],
        );
    }

    walk.finish("law-eberly", &target)
}
