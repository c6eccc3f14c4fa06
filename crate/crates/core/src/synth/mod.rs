//! The four state-synthesis algorithms.
//!
//! Each drives the target down to the ground state with per-step zeroing
//! conditions (reverse evolution), then inverts the operation sequence into
//! an executable [`PulseProgram`]. The residual global phase of the reverse
//! evolution is recorded, never discarded.

mod law_eberly;
mod qudit;
mod subtraction;
mod swapping;

pub use law_eberly::synth_law_eberly;
pub use qudit::{synth_qudit_direct, synth_qudit_reverse};
pub use subtraction::{synth_subtraction, SubtractionOptions};
pub use swapping::{synth_diagonal, synth_swapping};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{apply, Direction, Instruction, PulseProgram, TargetAmplitude};
use crate::state::{StateVector, AMP_EPS};

/// Instructions with |angle| below this are dropped before emission.
/// The trace retains them so censuses stay honest.
pub const PRUNE_EPS: f64 = 1e-12;

/// Relative imaginary-part tolerance for detecting a real-negative ratio.
const FOLD_EPS: f64 = 1e-12;

/// Where a step sits in its algorithm's schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepLabel {
    /// Law-Eberly step j, or the qudit reverse step j.
    Level { j: usize },
    /// Photon-subtraction stage 1, row j (n_b), column k (n_a).
    RowColumn { j: usize, k: usize },
    /// Photon-subtraction stage 2, step j along n_b = 0.
    ModeAChain { j: usize },
    /// Photon-swapping diagonal l, position m.
    Diagonal { l: usize, m: usize },
    /// Photon-swapping final phase/rotation pair closing diagonal l.
    DiagonalClose { l: usize },
}

/// One reverse-evolution step: its schedule label, the solved angles
/// (pre-pruning), and the state snapshot after the step.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub label: StepLabel,
    pub angles: Vec<(&'static str, f64)>,
    pub state_after: StateVector,
}

impl TraceStep {
    pub fn angle(&self, name: &str) -> Option<f64> {
        self.angles
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
    }
}

/// Reverse-evolution record kept alongside every synthesized program.
#[derive(Debug, Clone, Default)]
pub struct SynthesisTrace {
    pub steps: Vec<TraceStep>,
}

impl SynthesisTrace {
    /// Sum of |angle| over all recorded phase slots with the given names.
    pub fn sum_abs(&self, names: &[&str]) -> f64 {
        self.steps
            .iter()
            .flat_map(|s| s.angles.iter())
            .filter(|(n, _)| names.contains(n))
            .map(|(_, v)| v.abs())
            .sum()
    }
}

/// A synthesized program together with its reverse-evolution trace.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub program: PulseProgram,
    pub trace: SynthesisTrace,
}

/// Solution of one zeroing condition e^{+-i phase} tan(x) = i moving/receiving.
///
/// `moving` is the amplitude being zeroed, `receiving` its pair partner.
/// Branches (the formulas are silent on 0/0):
/// * |moving| at the zero threshold: nothing to transfer, both angles 0;
/// * |receiving| at the threshold: maximal transfer x = pi/2, phase free (0);
/// * ratio real and negative: the phase would be exactly pi, which folds
///   into the supplementary transfer branch x = pi - arctan, phase 0.
///   Tables I-II are built from this branch;
/// * otherwise the principal branch x = arctan with phase = arg(ratio).
///
/// Call sites negate `phase` where the condition carries e^{-i phase}.
pub(crate) fn solve_zeroing(moving: Complex64, receiving: Complex64) -> (f64, f64) {
    let m = moving.norm();
    let r = receiving.norm();
    if m <= AMP_EPS {
        return (0.0, 0.0);
    }
    if r <= AMP_EPS {
        return (0.0, std::f64::consts::FRAC_PI_2);
    }
    let rho = Complex64::i() * moving / receiving;
    let x = (m / r).atan();
    if rho.im.abs() <= FOLD_EPS * rho.norm() && rho.re < 0.0 {
        (0.0, std::f64::consts::PI - x)
    } else {
        (rho.arg(), x)
    }
}

/// Drives the reverse evolution, accumulating instructions (stored with
/// their forward angles) and trace snapshots.
pub(crate) struct ReverseBuilder {
    psi: StateVector,
    reverse_ops: Vec<Instruction>,
    steps: Vec<TraceStep>,
}

impl ReverseBuilder {
    pub fn new(target: StateVector) -> Self {
        ReverseBuilder {
            psi: target,
            reverse_ops: Vec::new(),
            steps: Vec::new(),
        }
    }

    pub fn state(&self) -> &StateVector {
        &self.psi
    }

    /// Apply the instruction's adjoint to the running state and record it.
    pub fn step(&mut self, instr: Instruction) -> Result<()> {
        apply(&instr, &mut self.psi, Direction::Inverse)?;
        self.reverse_ops.push(instr);
        Ok(())
    }

    pub fn snapshot(&mut self, label: StepLabel, angles: Vec<(&'static str, f64)>) {
        self.steps.push(TraceStep {
            label,
            angles,
            state_after: self.psi.clone(),
        });
    }

    /// Invert the reverse sequence into a forward program. The reverse
    /// evolution must have reached e^{i chi}|0,0,0>; chi is recorded as the
    /// residual global phase.
    pub fn finish(self, algorithm: &str, target: &StateVector) -> Result<Synthesis> {
        let ground_amp = self.psi.amp(0, 0, 0);
        let overlap = ground_amp.norm();
        if (overlap - 1.0).abs() > 1e-9 {
            return Err(Error::ReverseEvolutionStalled { overlap });
        }
        let instructions: Vec<Instruction> = self
            .reverse_ops
            .into_iter()
            .rev()
            .filter(|i| i.angle().abs() >= PRUNE_EPS)
            .collect();
        let program = PulseProgram {
            algorithm: algorithm.to_string(),
            dims: target.dims(),
            target: record_target(target),
            residual_global_phase: ground_amp.arg(),
            instructions,
        };
        Ok(Synthesis {
            program,
            trace: SynthesisTrace { steps: self.steps },
        })
    }
}

pub(crate) fn record_target(target: &StateVector) -> Vec<TargetAmplitude> {
    let mut out = Vec::new();
    for b in target.basis() {
        if b.q == 0 {
            let a = target.amp(0, b.n_a, b.n_b);
            if a.norm() > 1e-15 {
                out.push(TargetAmplitude {
                    n_a: b.n_a,
                    n_b: b.n_b,
                    re: a.re,
                    im: a.im,
                });
            }
        }
    }
    out
}
