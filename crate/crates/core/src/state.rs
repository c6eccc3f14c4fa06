//! Dense states of a qubit coupled to two truncated resonator modes.
//!
//! Every state lives on the basis |q, n_a, n_b> with q in {0, 1} and photon
//! numbers bounded by per-mode cutoffs. Single-resonator and qudit problems
//! use the degenerate cases N_b = 0 and (amplitudes confined to q = 0), so
//! one representation serves all four synthesis algorithms.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Amplitudes below this are treated as zero when branching on occupancy.
///
/// Well above the 1e-12 norm-drift budget, well below any physical
/// amplitude in targets of interest.
pub const AMP_EPS: f64 = 1e-10;

/// Norm bookkeeping tolerance for constructed states and applied gates.
pub const NORM_EPS: f64 = 1e-12;

/// Argument of a complex number, with arg(0) defined as 0.
pub fn arg_or_zero(z: Complex64) -> f64 {
    if z.norm() <= AMP_EPS {
        0.0
    } else {
        z.arg()
    }
}

/// Wrap an angle into (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let mut x = a.rem_euclid(std::f64::consts::TAU);
    if x > std::f64::consts::PI {
        x -= std::f64::consts::TAU;
    }
    x
}

/// Photon-number cutoffs (inclusive) of the two resonator modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Dims {
    pub n_a_max: usize,
    pub n_b_max: usize,
}

impl Dims {
    pub fn new(n_a_max: usize, n_b_max: usize) -> Self {
        Dims { n_a_max, n_b_max }
    }

    /// Number of complex amplitudes: 2 (N_a+1) (N_b+1).
    pub fn len(&self) -> usize {
        2 * (self.n_a_max + 1) * (self.n_b_max + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn index(&self, q: usize, n_a: usize, n_b: usize) -> usize {
        debug_assert!(q <= 1 && n_a <= self.n_a_max && n_b <= self.n_b_max);
        (q * (self.n_a_max + 1) + n_a) * (self.n_b_max + 1) + n_b
    }
}

impl std::fmt::Display for Dims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.n_a_max, self.n_b_max)
    }
}

/// One basis label |q, n_a, n_b>.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisIndex {
    pub q: usize,
    pub n_a: usize,
    pub n_b: usize,
}

/// Dense complex state over the qubit x mode-A x mode-B basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Dims,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The ground state |0, 0, 0>.
    pub fn ground(dims: Dims) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); dims.len()];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { dims, amps }
    }

    pub fn zeros(dims: Dims) -> Self {
        StateVector {
            dims,
            amps: vec![Complex64::new(0.0, 0.0); dims.len()],
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn amp(&self, q: usize, n_a: usize, n_b: usize) -> Complex64 {
        self.amps[self.dims.index(q, n_a, n_b)]
    }

    pub fn set_amp(&mut self, q: usize, n_a: usize, n_b: usize, value: Complex64) {
        let i = self.dims.index(q, n_a, n_b);
        self.amps[i] = value;
    }

    pub(crate) fn amp_pair_mut(
        &mut self,
        a: (usize, usize, usize),
        b: (usize, usize, usize),
    ) -> (&mut Complex64, &mut Complex64) {
        let ia = self.dims.index(a.0, a.1, a.2);
        let ib = self.dims.index(b.0, b.1, b.2);
        debug_assert_ne!(ia, ib);
        if ia < ib {
            let (lo, hi) = self.amps.split_at_mut(ib);
            (&mut lo[ia], &mut hi[0])
        } else {
            let (lo, hi) = self.amps.split_at_mut(ia);
            (&mut hi[0], &mut lo[ib])
        }
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Iterate over all basis labels of the space.
    pub fn basis(&self) -> impl Iterator<Item = BasisIndex> + '_ {
        let d = self.dims;
        (0..2).flat_map(move |q| {
            (0..=d.n_a_max).flat_map(move |n_a| {
                (0..=d.n_b_max).map(move |n_b| BasisIndex { q, n_a, n_b })
            })
        })
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n <= AMP_EPS {
            return Err(Error::ZeroNormTarget);
        }
        for a in &mut self.amps {
            *a /= n;
        }
        Ok(())
    }

    /// Inner product <self|other>.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                left: self.dims.to_string(),
                right: other.dims.to_string(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Re-embed into a larger space, padding with zeros.
    pub fn embed(&self, dims: Dims) -> Result<StateVector> {
        if dims.n_a_max < self.dims.n_a_max || dims.n_b_max < self.dims.n_b_max {
            return Err(Error::DimensionMismatch {
                left: self.dims.to_string(),
                right: dims.to_string(),
            });
        }
        let mut out = StateVector::zeros(dims);
        for b in self.basis() {
            out.set_amp(b.q, b.n_a, b.n_b, self.amp(b.q, b.n_a, b.n_b));
        }
        Ok(out)
    }

    /// Largest occupied indices above the `AMP_EPS` threshold:
    /// (max n_a, max n_b, max n_a + n_b + q). All zero for the ground state.
    pub fn support_bounds(&self) -> (usize, usize, usize) {
        let mut max_a = 0;
        let mut max_b = 0;
        let mut max_total = 0;
        for b in self.basis() {
            if self.amp(b.q, b.n_a, b.n_b).norm() > AMP_EPS {
                max_a = max_a.max(b.n_a);
                max_b = max_b.max(b.n_b);
                max_total = max_total.max(b.n_a + b.n_b + b.q);
            }
        }
        (max_a, max_b, max_total)
    }
}

/// Normalized two-mode target from a coefficient grid indexed by (n_a, n_b).
///
/// Rows may be ragged; missing entries are zero. The qubit amplitude sits
/// entirely in q = 0. An all-zero grid is an invalid target.
pub fn make_state(coeffs: &[Vec<Complex64>]) -> Result<StateVector> {
    if coeffs.is_empty() {
        return Err(Error::ZeroNormTarget);
    }
    let n_a_max = coeffs.len() - 1;
    let n_b_max = coeffs.iter().map(|row| row.len()).max().unwrap_or(1).max(1) - 1;
    let mut psi = StateVector::zeros(Dims::new(n_a_max, n_b_max));
    for (n_a, row) in coeffs.iter().enumerate() {
        for (n_b, &c) in row.iter().enumerate() {
            psi.set_amp(0, n_a, n_b, c);
        }
    }
    psi.normalize()?;
    Ok(psi)
}

/// Normalized single-mode target |0> (x) sum_n c_n |n> on mode A (N_b = 0).
pub fn make_single_mode(coeffs: &[Complex64]) -> Result<StateVector> {
    make_state(
        &coeffs
            .iter()
            .map(|&c| vec![c])
            .collect::<Vec<_>>(),
    )
}

/// Haar-uniform normalized state on the q = 0 subspace, deterministic per seed.
pub fn random_target(dims: Dims, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_target_with(dims, &mut rng)
}

/// Haar-uniform state on q = 0 drawn from a caller-supplied stream.
pub fn random_target_with<R: Rng>(dims: Dims, rng: &mut R) -> StateVector {
    let mut psi = StateVector::zeros(dims);
    for n_a in 0..=dims.n_a_max {
        for n_b in 0..=dims.n_b_max {
            psi.set_amp(0, n_a, n_b, standard_complex_gaussian(rng));
        }
    }
    psi.normalize().expect("gaussian vector has positive norm");
    psi
}

/// Haar-uniform state confined to total photon number n_a + n_b <= max_total.
pub fn random_triangle_target_with<R: Rng>(
    max_total: usize,
    rng: &mut R,
) -> StateVector {
    let dims = Dims::new(max_total, max_total);
    let mut psi = StateVector::zeros(dims);
    for n_a in 0..=max_total {
        for n_b in 0..=(max_total - n_a) {
            psi.set_amp(0, n_a, n_b, standard_complex_gaussian(rng));
        }
    }
    psi.normalize().expect("gaussian vector has positive norm");
    psi
}

/// Coefficient grid of the NOON state (|N,0> + |0,N>)/sqrt(2).
pub fn noon_coefficients(n: usize) -> Vec<Vec<Complex64>> {
    let mut grid = vec![vec![Complex64::new(0.0, 0.0); n + 1]; n + 1];
    grid[n][0] = Complex64::new(1.0, 0.0);
    grid[0][n] = Complex64::new(1.0, 0.0);
    grid
}

/// Standard complex gaussian via two Box-Muller normals.
fn standard_complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    // Box-Muller; u clamped away from 0 so ln is finite.
    let u: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let v: f64 = rng.gen();
    let r = (-2.0 * u.ln()).sqrt();
    let t = std::f64::consts::TAU * v;
    Complex64::new(r * t.cos(), r * t.sin())
}

/// d-dimensional spherical polar decomposition of a complex unit vector:
/// d-1 polar angles in [0, pi/2] and d phases in (-pi, pi].
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalCoords {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
}

/// Decompose a normalized d-vector into spherical coordinates.
///
/// When a prefix amplitude chain sin th_0 ... sin th_k vanishes, all later
/// angles and phases are set to 0; together with arg(0) = 0 this makes the
/// decomposition total.
pub fn to_spherical(coeffs: &[Complex64]) -> SphericalCoords {
    let d = coeffs.len();
    let mut thetas = vec![0.0; d.saturating_sub(1)];
    let mut phis = vec![0.0; d];
    // tail[k] = sqrt(sum_{i >= k} |c_i|^2)
    let mut tail = vec![0.0; d + 1];
    for k in (0..d).rev() {
        tail[k] = (tail[k + 1] * tail[k + 1] + coeffs[k].norm_sqr()).sqrt();
    }
    for k in 0..d {
        if tail[k] <= AMP_EPS {
            break; // prefix chain vanished: remaining angles stay 0
        }
        phis[k] = arg_or_zero(coeffs[k]);
        if k < d - 1 {
            thetas[k] = tail[k + 1].atan2(coeffs[k].norm());
        }
    }
    SphericalCoords { thetas, phis }
}

/// Rebuild the complex vector from spherical coordinates.
pub fn from_spherical(coords: &SphericalCoords) -> Vec<Complex64> {
    let d = coords.phis.len();
    let mut out = Vec::with_capacity(d);
    let mut prefix = 1.0;
    for k in 0..d {
        let mag = if k < d - 1 {
            prefix * coords.thetas[k].cos()
        } else {
            prefix
        };
        out.push(Complex64::from_polar(mag, coords.phis[k]));
        if k < d - 1 {
            prefix *= coords.thetas[k].sin();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn make_state_ground() {
        let psi = make_state(&[vec![c(1.0, 0.0)]]).unwrap();
        assert_eq!(psi.dims(), Dims::new(0, 0));
        assert!((psi.amp(0, 0, 0) - c(1.0, 0.0)).norm() < NORM_EPS);
    }

    #[test]
    fn make_state_noon_three() {
        // (|0,3,0> + |0,0,3>)/sqrt(2)
        let mut grid = vec![vec![c(0.0, 0.0); 4]; 4];
        grid[3][0] = c(1.0, 0.0);
        grid[0][3] = c(1.0, 0.0);
        let psi = make_state(&grid).unwrap();
        let expected = 1.0 / 2.0_f64.sqrt();
        assert!((psi.amp(0, 3, 0).re - expected).abs() < NORM_EPS);
        assert!((psi.amp(0, 0, 3).re - expected).abs() < NORM_EPS);
        assert!((psi.norm() - 1.0).abs() < NORM_EPS);
    }

    #[test]
    fn make_state_normalizes_three_four() {
        // {(1,0): 3, (0,1): 4} -> amplitudes 0.6, 0.8 since 5 = sqrt(9 + 16)
        let psi = make_state(&[
            vec![c(0.0, 0.0), c(4.0, 0.0)],
            vec![c(3.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!((psi.amp(0, 1, 0).re - 0.6).abs() < NORM_EPS);
        assert!((psi.amp(0, 0, 1).re - 0.8).abs() < NORM_EPS);
    }

    #[test]
    fn make_state_rejects_zero() {
        let err = make_state(&[vec![c(0.0, 0.0)]]).unwrap_err();
        assert!(matches!(err, Error::ZeroNormTarget));
    }

    #[test]
    fn overlap_self_and_orthogonal() {
        let psi = random_target(Dims::new(2, 1), 11);
        let o = psi.overlap(&psi).unwrap();
        assert!((o - c(1.0, 0.0)).norm() < NORM_EPS);

        let dims = Dims::new(1, 0);
        let g = StateVector::ground(dims);
        let mut e = StateVector::zeros(dims);
        e.set_amp(1, 0, 0, c(1.0, 0.0));
        assert!(g.overlap(&e).unwrap().norm() < NORM_EPS);
    }

    #[test]
    fn overlap_dimension_mismatch() {
        let a = StateVector::ground(Dims::new(1, 0));
        let b = StateVector::ground(Dims::new(2, 0));
        assert!(a.overlap(&b).is_err());
    }

    #[test]
    fn spherical_trivial_cases() {
        let coords = to_spherical(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(coords.thetas[0].abs() < NORM_EPS);
        assert!(coords.phis[0].abs() < NORM_EPS);
        assert!(coords.phis[1].abs() < NORM_EPS);

        let x = 1.0 / 2.0_f64.sqrt();
        let coords = to_spherical(&[c(x, 0.0), c(x, 0.0)]);
        assert!((coords.thetas[0] - FRAC_PI_4).abs() < NORM_EPS);
    }

    #[test]
    fn spherical_round_trip_random() {
        for seed in 0..40u64 {
            let psi = random_target(Dims::new(3, 0), seed);
            let coeffs: Vec<Complex64> = (0..4).map(|n| psi.amp(0, n, 0)).collect();
            let back = from_spherical(&to_spherical(&coeffs));
            for (a, b) in coeffs.iter().zip(&back) {
                assert!((a - b).norm() < NORM_EPS, "round trip drift at seed {seed}");
            }
        }
    }

    #[test]
    fn spherical_degenerate_branch_zeroed() {
        // c_1 = 0 kills the sin chain: theta_1, phi_1, phi_2 all canonical 0.
        let coords = to_spherical(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(coords.thetas, vec![0.0, 0.0]);
        assert_eq!(coords.phis, vec![0.0, 0.0, 0.0]);
        let back = from_spherical(&coords);
        assert!((back[0] - c(1.0, 0.0)).norm() < NORM_EPS);
    }

    #[test]
    fn random_target_is_deterministic_and_normalized() {
        let a = random_target(Dims::new(2, 2), 7);
        let b = random_target(Dims::new(2, 2), 7);
        assert_eq!(a.amps(), b.amps());
        for seed in 0..100u64 {
            let psi = random_target(Dims::new(3, 0), seed);
            assert!((psi.norm() - 1.0).abs() < NORM_EPS);
        }
    }

    #[test]
    fn haar_marginal_mean_qubit() {
        // E[|c_0|^2] = 1/2 for d = 2 under the Haar measure.
        let n = 10_000;
        let mut acc = 0.0;
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        for _ in 0..n {
            let psi = random_target_with(Dims::new(1, 0), &mut rng);
            acc += psi.amp(0, 0, 0).norm_sqr();
        }
        let mean = acc / n as f64;
        assert!(
            (mean - 0.5).abs() < 0.01,
            "Haar marginal off: {mean} vs 0.5"
        );
    }

    #[test]
    fn support_bounds_cases() {
        let g = StateVector::ground(Dims::new(3, 3));
        assert_eq!(g.support_bounds(), (0, 0, 0));

        let mut grid = vec![vec![c(0.0, 0.0); 4]; 4];
        grid[3][0] = c(1.0, 0.0);
        grid[0][3] = c(1.0, 0.0);
        let noon = make_state(&grid).unwrap();
        assert_eq!(noon.support_bounds(), (3, 3, 3));
    }

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(PI) - PI).abs() < NORM_EPS);
        assert!((wrap_angle(-PI) - PI).abs() < NORM_EPS);
        assert!((wrap_angle(3.0 * PI) - PI).abs() < NORM_EPS);
        assert!(wrap_angle(0.1 - std::f64::consts::TAU) - 0.1 < NORM_EPS);
    }
}
