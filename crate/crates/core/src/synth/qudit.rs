//! Qudit state synthesis by two routes: the closed-form spherical-coordinate
//! product, and the reverse-evolution solver. Both land on the same state,
//! absolute phase included; the angle sequences differ only in how phases
//! are split across levels.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{Instruction, PulseProgram};
use crate::state::{
    arg_or_zero, make_single_mode, to_spherical, wrap_angle, StateVector, AMP_EPS,
};

use super::{record_target, solve_zeroing, ReverseBuilder, StepLabel, Synthesis, SynthesisTrace, TraceStep, PRUNE_EPS};

/// Closed-form synthesis: one two-level rotation and up to two phase shifts
/// per level, read directly off the target's spherical coordinates.
pub fn synth_qudit_direct(coeffs: &[Complex64]) -> Result<Synthesis> {
    let d = coeffs.len();
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let target = make_single_mode(coeffs)?;
    let normalized: Vec<Complex64> = (0..d).map(|n| target.amp(0, n, 0)).collect();
    let coords = to_spherical(&normalized);

    let mut instructions = Vec::new();
    let mut steps = Vec::new();
    let mut chain_alive = true;
    for k in 0..d - 1 {
        let theta = coords.thetas[k];
        let phi = coords.phis[k];
        if theta.abs() >= PRUNE_EPS {
            instructions.push(Instruction::QuditRotation {
                angle: 2.0 * theta,
                level: k,
            });
            instructions.push(Instruction::QuditPhase {
                angle: std::f64::consts::FRAC_PI_2,
                level: k + 1,
            });
            if phi.abs() >= PRUNE_EPS {
                instructions.push(Instruction::QuditPhase { angle: phi, level: k });
            }
        } else {
            // sin chain is dead: no amplitude ever reaches higher levels.
            if phi.abs() >= PRUNE_EPS {
                instructions.push(Instruction::QuditPhase { angle: phi, level: k });
            }
            chain_alive = false;
        }
        steps.push(TraceStep {
            label: StepLabel::Level { j: k + 1 },
            angles: vec![("theta", theta), ("phi", phi)],
            state_after: target.clone(),
        });
        if !chain_alive {
            break;
        }
    }
    if chain_alive {
        let phi_top = coords.phis[d - 1];
        if phi_top.abs() >= PRUNE_EPS {
            instructions.push(Instruction::QuditPhase {
                angle: phi_top,
                level: d - 1,
            });
        }
    }

    let program = PulseProgram {
        algorithm: "qudit-direct".into(),
        dims: target.dims(),
        target: record_target(&target),
        residual_global_phase: 0.0,
        instructions,
    };
    Ok(Synthesis {
        program,
        trace: SynthesisTrace { steps },
    })
}

/// Reverse-evolution synthesis: for j = d-1 down to 1 choose phases and a
/// rotation so that <j|psi_j> = 0. The level-0 phase of the last step pins
/// the absolute phase, so the residual global phase is zero here too.
pub fn synth_qudit_reverse(coeffs: &[Complex64]) -> Result<Synthesis> {
    let d = coeffs.len();
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let target = make_single_mode(coeffs)?;
    let mut walk = ReverseBuilder::new(target.clone());

    for j in (1..=d - 1).rev() {
        let psi = walk.state();
        let top = psi.amp(0, j, 0);
        let below = psi.amp(0, j - 1, 0);

        let (alpha, beta, gamma) = if top.norm() <= AMP_EPS {
            (0.0, 0.0, 0.0)
        } else {
            let gamma = 2.0 * if below.norm() <= AMP_EPS {
                std::f64::consts::FRAC_PI_2
            } else {
                (top.norm() / below.norm()).atan()
            };
            let alpha = arg_or_zero(below);
            let beta = wrap_angle(std::f64::consts::FRAC_PI_2 + top.arg());
            (alpha, beta, gamma)
        };

        walk.step(Instruction::QuditPhase { angle: alpha, level: j - 1 })?;
        walk.step(Instruction::QuditPhase { angle: beta, level: j })?;
        walk.step(Instruction::QuditRotation { angle: gamma, level: j - 1 })?;
        walk.snapshot(
            StepLabel::Level { j },
            vec![("alpha", alpha), ("beta", beta), ("gamma", gamma)],
        );
    }

    walk.finish("qudit-reverse", &target)
}

/// Forward state prepared by a qudit program from |0>, for cross-checking
/// the two routes against each other.
pub fn run_from_ground(program: &PulseProgram) -> Result<StateVector> {
    crate::gates::run_program(program, &StateVector::ground(program.dims))
}
