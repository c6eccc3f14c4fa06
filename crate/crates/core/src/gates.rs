//! Instruction vocabulary and its exact unitary action on [`StateVector`].
//!
//! Conventions, fixed once for the whole crate:
//!
//! * sigma_z = |0><0| - |1><1|, so `QubitPhase(phi)` multiplies q = 0
//!   amplitudes by exp(-i phi/2) and q = 1 by exp(+i phi/2);
//! * `QubitRotation(gamma)` maps |0> -> cos(gamma/2)|0> - i sin(gamma/2)|1>;
//! * `SwapA(theta)` rotates each pair {|0,n_a,n_b>, |1,n_a-1,n_b>} by the
//!   angle sqrt(n_a) theta with -i sin cross terms; `SwapB` likewise on n_b;
//! * `QuditRotation(theta, n)` rotates the mode-A pair {|n>, |n+1>} inside
//!   q = 0, and `QuditPhase(phi, n)` multiplies |n> by exp(+i phi).
//!
//! Inverse application is the adjoint, i.e. the same gate at negated angle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{Dims, StateVector, NORM_EPS};

/// Occupancy above this at a truncation boundary makes a swap unsound.
const LEAK_EPS: f64 = 1e-9;

/// Which basis pairs a selective rotation addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selectivity {
    /// Only the single Fock pair (n_a, n_b); the paper's R_{n_a,n_b}.
    ExactFock { n_a: usize, n_b: usize },
    /// All pairs with the given n_a; the paper's R_{n_a = k}.
    ModeA { n_a: usize },
    /// All pairs with the given n_b. Included for symmetry.
    ModeB { n_b: usize },
}

impl Selectivity {
    pub fn matches(&self, n_a: usize, n_b: usize) -> bool {
        match *self {
            Selectivity::ExactFock { n_a: a, n_b: b } => n_a == a && n_b == b,
            Selectivity::ModeA { n_a: a } => n_a == a,
            Selectivity::ModeB { n_b: b } => n_b == b,
        }
    }

    fn validate(&self, dims: Dims) -> Result<()> {
        let (n_a, n_b) = match *self {
            Selectivity::ExactFock { n_a, n_b } => (Some(n_a), Some(n_b)),
            Selectivity::ModeA { n_a } => (Some(n_a), None),
            Selectivity::ModeB { n_b } => (None, Some(n_b)),
        };
        let a_ok = n_a.map_or(true, |v| v <= dims.n_a_max);
        let b_ok = n_b.map_or(true, |v| v <= dims.n_b_max);
        if a_ok && b_ok {
            Ok(())
        } else {
            Err(Error::SelectivityOutOfRange {
                n_a,
                n_b,
                max_a: dims.n_a_max,
                max_b: dims.n_b_max,
            })
        }
    }
}

/// One elementary operation, stored with its forward angle in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Instruction {
    /// R(gamma): unconditioned qubit rotation about x.
    QubitRotation { angle: f64 },
    /// Z(phi): qubit phase about z.
    QubitPhase { angle: f64 },
    /// A(theta): Jaynes-Cummings swap with mode A.
    SwapA { angle: f64 },
    /// B(theta): Jaynes-Cummings swap with mode B.
    SwapB { angle: f64 },
    /// Number-state-selective qubit rotation.
    SelectiveRotation { angle: f64, selectivity: Selectivity },
    /// Two-level rotation R_{n,n+1} of a directly driven qudit (mode A).
    QuditRotation { angle: f64, level: usize },
    /// Single-level phase Z_n = exp(+i phi |n><n|) of a qudit (mode A).
    QuditPhase { angle: f64, level: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

impl Instruction {
    pub fn angle(&self) -> f64 {
        match *self {
            Instruction::QubitRotation { angle }
            | Instruction::QubitPhase { angle }
            | Instruction::SwapA { angle }
            | Instruction::SwapB { angle }
            | Instruction::SelectiveRotation { angle, .. }
            | Instruction::QuditRotation { angle, .. }
            | Instruction::QuditPhase { angle, .. } => angle,
        }
    }

    pub fn is_swap(&self) -> bool {
        matches!(self, Instruction::SwapA { .. } | Instruction::SwapB { .. })
    }

    pub fn is_rotation(&self) -> bool {
        matches!(
            self,
            Instruction::QubitRotation { .. }
                | Instruction::SelectiveRotation { .. }
                | Instruction::QuditRotation { .. }
        )
    }

    pub fn is_phase(&self) -> bool {
        matches!(
            self,
            Instruction::QubitPhase { .. } | Instruction::QuditPhase { .. }
        )
    }
}

/// Rotate the ordered pair (a, b) by exp(-i x X): -i sin cross terms.
fn mix_pair(a: &mut Complex64, b: &mut Complex64, x: f64) {
    let (s, c) = x.sin_cos();
    let is = Complex64::new(0.0, -s);
    let (na, nb) = (c * *a + is * *b, c * *b + is * *a);
    *a = na;
    *b = nb;
}

/// Apply one instruction to the state, mutating it in place.
pub fn apply(instr: &Instruction, state: &mut StateVector, direction: Direction) -> Result<()> {
    let angle = instr.angle();
    if !angle.is_finite() {
        return Err(Error::NonFiniteAngle);
    }
    let sign = match direction {
        Direction::Forward => 1.0,
        Direction::Inverse => -1.0,
    };
    let angle = sign * angle;
    let dims = state.dims();

    match *instr {
        Instruction::QubitRotation { .. } => {
            for n_a in 0..=dims.n_a_max {
                for n_b in 0..=dims.n_b_max {
                    let (a0, a1) = state.amp_pair_mut((0, n_a, n_b), (1, n_a, n_b));
                    mix_pair(a0, a1, angle / 2.0);
                }
            }
        }
        Instruction::QubitPhase { .. } => {
            let f0 = Complex64::from_polar(1.0, -angle / 2.0);
            let f1 = Complex64::from_polar(1.0, angle / 2.0);
            for n_a in 0..=dims.n_a_max {
                for n_b in 0..=dims.n_b_max {
                    let v0 = state.amp(0, n_a, n_b) * f0;
                    state.set_amp(0, n_a, n_b, v0);
                    let v1 = state.amp(1, n_a, n_b) * f1;
                    state.set_amp(1, n_a, n_b, v1);
                }
            }
        }
        Instruction::SwapA { .. } => {
            // The ladder couples {|0,n_a>, |1,n_a-1>} only; the topmost q = 1
            // level would need n_a = N_a + 1 and must be unoccupied.
            for n_b in 0..=dims.n_b_max {
                let top = state.amp(1, dims.n_a_max, n_b).norm();
                if top > LEAK_EPS {
                    return Err(Error::TruncationLeak { mode: 'A', amp: top });
                }
            }
            for n_a in 1..=dims.n_a_max {
                let strength = (n_a as f64).sqrt() * angle;
                for n_b in 0..=dims.n_b_max {
                    let (a0, a1) = state.amp_pair_mut((0, n_a, n_b), (1, n_a - 1, n_b));
                    mix_pair(a0, a1, strength);
                }
            }
        }
        Instruction::SwapB { .. } => {
            for n_a in 0..=dims.n_a_max {
                let top = state.amp(1, n_a, dims.n_b_max).norm();
                if top > LEAK_EPS {
                    return Err(Error::TruncationLeak { mode: 'B', amp: top });
                }
            }
            for n_b in 1..=dims.n_b_max {
                let strength = (n_b as f64).sqrt() * angle;
                for n_a in 0..=dims.n_a_max {
                    let (a0, a1) = state.amp_pair_mut((0, n_a, n_b), (1, n_a, n_b - 1));
                    mix_pair(a0, a1, strength);
                }
            }
        }
        Instruction::SelectiveRotation { selectivity, .. } => {
            selectivity.validate(dims)?;
            for n_a in 0..=dims.n_a_max {
                for n_b in 0..=dims.n_b_max {
                    if selectivity.matches(n_a, n_b) {
                        let (a0, a1) = state.amp_pair_mut((0, n_a, n_b), (1, n_a, n_b));
                        mix_pair(a0, a1, angle / 2.0);
                    }
                }
            }
        }
        Instruction::QuditRotation { level, .. } => {
            if level + 1 > dims.n_a_max {
                return Err(Error::LevelOutOfRange {
                    kind: "qudit rotation",
                    level,
                    max: dims.n_a_max,
                });
            }
            for n_b in 0..=dims.n_b_max {
                let (a0, a1) = state.amp_pair_mut((0, level, n_b), (0, level + 1, n_b));
                mix_pair(a0, a1, angle / 2.0);
            }
        }
        Instruction::QuditPhase { level, .. } => {
            if level > dims.n_a_max {
                return Err(Error::LevelOutOfRange {
                    kind: "qudit phase",
                    level,
                    max: dims.n_a_max,
                });
            }
            let f = Complex64::from_polar(1.0, angle);
            for n_b in 0..=dims.n_b_max {
                let v = state.amp(0, level, n_b) * f;
                state.set_amp(0, level, n_b, v);
            }
        }
    }
    Ok(())
}

/// A complex amplitude of the recorded target, keyed by photon numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetAmplitude {
    pub n_a: usize,
    pub n_b: usize,
    pub re: f64,
    pub im: f64,
}

/// Ordered instruction list plus provenance. Instructions are stored in
/// execution order (earliest first); the ordering is part of the file format.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseProgram {
    pub algorithm: String,
    pub dims: Dims,
    pub target: Vec<TargetAmplitude>,
    pub residual_global_phase: f64,
    pub instructions: Vec<Instruction>,
}

impl PulseProgram {
    /// The target recorded in the program as a normalized state.
    pub fn target_state(&self) -> Result<StateVector> {
        let mut psi = StateVector::zeros(self.dims);
        for t in &self.target {
            psi.set_amp(0, t.n_a, t.n_b, Complex64::new(t.re, t.im));
        }
        psi.normalize()?;
        Ok(psi)
    }

    pub fn count_swap_a(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| matches!(i, Instruction::SwapA { .. }))
            .count()
    }

    pub fn count_swap_b(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| matches!(i, Instruction::SwapB { .. }))
            .count()
    }

    pub fn count_rotations(&self) -> usize {
        self.instructions.iter().filter(|i| i.is_rotation()).count()
    }

    pub fn count_phases(&self) -> usize {
        self.instructions.iter().filter(|i| i.is_phase()).count()
    }
}

/// Left-fold of [`apply`] over the program in execution order.
pub fn run_program(prog: &PulseProgram, initial: &StateVector) -> Result<StateVector> {
    let mut psi = initial.clone();
    for instr in &prog.instructions {
        apply(instr, &mut psi, Direction::Forward)?;
    }
    Ok(psi)
}

/// Forward run that also reports the worst per-step norm drift |norm - 1|.
pub fn run_program_with_drift(
    prog: &PulseProgram,
    initial: &StateVector,
) -> Result<(StateVector, f64)> {
    let mut psi = initial.clone();
    let mut drift: f64 = (psi.norm() - 1.0).abs();
    for instr in &prog.instructions {
        apply(instr, &mut psi, Direction::Forward)?;
        drift = drift.max((psi.norm() - 1.0).abs());
    }
    Ok((psi, drift))
}

/// Per-instruction selectivity requirement flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectivityFlag {
    /// Index into the program's instruction list.
    pub index: usize,
    /// True when replacing the selective rotation with an unconditioned
    /// qubit rotation moves the running state by more than 1e-10 in 2-norm.
    pub required: bool,
}

/// For each `SelectiveRotation`, test whether selectivity is load-bearing
/// at its point in the program. Used to certify selectivity-free programs.
pub fn required_selectivity(
    prog: &PulseProgram,
    initial: &StateVector,
) -> Result<Vec<SelectivityFlag>> {
    let mut flags = Vec::new();
    let mut psi = initial.clone();
    for (index, instr) in prog.instructions.iter().enumerate() {
        if let Instruction::SelectiveRotation { angle, .. } = *instr {
            let mut plain = psi.clone();
            apply(
                &Instruction::QubitRotation { angle },
                &mut plain,
                Direction::Forward,
            )?;
            apply(instr, &mut psi, Direction::Forward)?;
            let dist: f64 = psi
                .amps()
                .iter()
                .zip(plain.amps())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            flags.push(SelectivityFlag {
                index,
                required: dist > 1e-10,
            });
        } else {
            apply(instr, &mut psi, Direction::Forward)?;
        }
    }
    Ok(flags)
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SelectivityRecord {
    mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_b: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct InstructionRecord {
    kind: String,
    angle: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    selectivity: Option<SelectivityRecord>,
}

#[derive(Serialize, Deserialize)]
struct ProgramRecord {
    algorithm: String,
    dims: [usize; 2],
    target: Vec<TargetAmplitude>,
    residual_global_phase: f64,
    instructions: Vec<InstructionRecord>,
}

impl From<&Instruction> for InstructionRecord {
    fn from(instr: &Instruction) -> Self {
        let (kind, level, selectivity) = match *instr {
            Instruction::QubitRotation { .. } => ("qubit_rotation", None, None),
            Instruction::QubitPhase { .. } => ("qubit_phase", None, None),
            Instruction::SwapA { .. } => ("swap_a", None, None),
            Instruction::SwapB { .. } => ("swap_b", None, None),
            Instruction::SelectiveRotation { selectivity, .. } => {
                let rec = match selectivity {
                    Selectivity::ExactFock { n_a, n_b } => SelectivityRecord {
                        mode: "exact".into(),
                        n_a: Some(n_a),
                        n_b: Some(n_b),
                    },
                    Selectivity::ModeA { n_a } => SelectivityRecord {
                        mode: "mode_a".into(),
                        n_a: Some(n_a),
                        n_b: None,
                    },
                    Selectivity::ModeB { n_b } => SelectivityRecord {
                        mode: "mode_b".into(),
                        n_a: None,
                        n_b: Some(n_b),
                    },
                };
                ("selective_rotation", None, Some(rec))
            }
            Instruction::QuditRotation { level, .. } => ("qudit_rotation", Some(level), None),
            Instruction::QuditPhase { level, .. } => ("qudit_phase", Some(level), None),
        };
        InstructionRecord {
            kind: kind.into(),
            angle: instr.angle(),
            level,
            selectivity,
        }
    }
}

impl InstructionRecord {
    fn into_instruction(self) -> std::result::Result<Instruction, String> {
        let angle = self.angle;
        match self.kind.as_str() {
            "qubit_rotation" => Ok(Instruction::QubitRotation { angle }),
            "qubit_phase" => Ok(Instruction::QubitPhase { angle }),
            "swap_a" => Ok(Instruction::SwapA { angle }),
            "swap_b" => Ok(Instruction::SwapB { angle }),
            "selective_rotation" => {
                let sel = self
                    .selectivity
                    .ok_or_else(|| "selective_rotation needs a selectivity".to_string())?;
                let selectivity = match sel.mode.as_str() {
                    "exact" => Selectivity::ExactFock {
                        n_a: sel.n_a.ok_or("exact selectivity needs n_a")?,
                        n_b: sel.n_b.ok_or("exact selectivity needs n_b")?,
                    },
                    "mode_a" => Selectivity::ModeA {
                        n_a: sel.n_a.ok_or("mode_a selectivity needs n_a")?,
                    },
                    "mode_b" => Selectivity::ModeB {
                        n_b: sel.n_b.ok_or("mode_b selectivity needs n_b")?,
                    },
                    other => return Err(format!("unknown selectivity mode `{other}`")),
                };
                Ok(Instruction::SelectiveRotation { angle, selectivity })
            }
            "qudit_rotation" => Ok(Instruction::QuditRotation {
                angle,
                level: self.level.ok_or("qudit_rotation needs a level")?,
            }),
            "qudit_phase" => Ok(Instruction::QuditPhase {
                angle,
                level: self.level.ok_or("qudit_phase needs a level")?,
            }),
            other => Err(format!("unknown instruction kind `{other}`")),
        }
    }
}

impl PulseProgram {
    /// Serialize to the pulse-program document format (JSON, UTF-8).
    pub fn to_json(&self) -> String {
        let record = ProgramRecord {
            algorithm: self.algorithm.clone(),
            dims: [self.dims.n_a_max, self.dims.n_b_max],
            target: self.target.clone(),
            residual_global_phase: self.residual_global_phase,
            instructions: self.instructions.iter().map(InstructionRecord::from).collect(),
        };
        serde_json::to_string_pretty(&record).expect("program serialization cannot fail")
    }

    /// Parse the pulse-program document format.
    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        let record: ProgramRecord =
            serde_json::from_str(text).map_err(|e| format!("malformed program file: {e}"))?;
        let instructions = record
            .instructions
            .into_iter()
            .map(InstructionRecord::into_instruction)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(PulseProgram {
            algorithm: record.algorithm,
            dims: Dims::new(record.dims[0], record.dims[1]),
            target: record.target,
            residual_global_phase: record.residual_global_phase,
            instructions,
        })
    }
}

/// Check that a state reproduces another up to global phase within `tol`
/// in overlap modulus.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.overlap(b)?.norm())
}

/// Sanity check used by tests: norm preserved within `NORM_EPS`.
pub fn assert_normalized(state: &StateVector) {
    debug_assert!((state.norm() - 1.0).abs() < NORM_EPS * 100.0);
}
