//! Fourier modes, closed-form spectra of the offset and Rabi-controlled
//! Hamiltonians, the mixing angle and its rate, and gauge-continuous numeric
//! eigenbranch tracking with adiabaticity diagnostics.
//!
//! The numeric eigensystem is the ground truth throughout; the closed forms
//! are evaluated as printed and their agreement is measured, not assumed.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::hamiltonians::{CirculantParams, RotatingParams};
use crate::numerics::{hermitian_eigensystem, NumericsError, Operator, StateVector, DIM};
use crate::schedules::RabiSchedule;

/// Normalization of the eight Fourier modes, 1/(2√2).
pub const MODE_NORM: f64 = 0.35355339059327373;

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("coupling and Rabi magnitudes must be nonnegative, got {0}")]
    NegativeInput(f64),
    #[error("closed-form spectrum hit a degenerate point (resolvent S = 0)")]
    FormulaDomain,
    #[error("time grid must be strictly increasing with at least 2 points")]
    BadGrid,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// The eight discrete-Fourier-transform column states over the spin basis,
/// `ψ_j[k] = ω^{jk}/(2√2)` with ω = exp(iπ/4).
#[derive(Debug, Clone)]
pub struct FourierModes {
    pub psi: [StateVector; DIM],
}

/// ω = exp(iπ/4), the eighth root of unity behind the mode phases.
pub fn mode_phase() -> C64 {
    C64::from_polar(1.0, FRAC_PI_4)
}

pub fn fourier_modes() -> FourierModes {
    let psi = core::array::from_fn(|j| {
        let mut v = StateVector::zero();
        for k in 0..DIM {
            v.amps[k] = C64::from_polar(MODE_NORM, FRAC_PI_4 * (j * k % 8) as f64);
        }
        v
    });
    FourierModes { psi }
}

/// Eigenvalues of a circulant Hamiltonian straight from its first row:
/// `λ_j = Σ_k row[k]·ω^{jk}`. Hermiticity makes them real; the residual
/// imaginary parts stay below 1e-12 and are dropped.
pub fn circulant_eigenvalues(p: &CirculantParams) -> [f64; DIM] {
    let row = p.first_row();
    core::array::from_fn(|j| {
        let mut acc = C64::new(0.0, 0.0);
        for (k, r) in row.iter().enumerate() {
            acc += r * C64::from_polar(1.0, FRAC_PI_4 * (j * k % 8) as f64);
        }
        debug_assert!(acc.im.abs() < 1e-12 * (1.0 + acc.re.abs()));
        acc.re
    })
}

/// A ± eigenvalue pair with the antisymmetry minus = -plus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmPair {
    pub plus: f64,
    pub minus: f64,
}

impl PmPair {
    fn antisymmetric(plus: f64) -> Self {
        PmPair { plus, minus: -plus }
    }
}

/// Intermediate quantities of the closed-form offset spectrum, kept for
/// diagnostics. `a..d` are the quartic coefficients in y = λ²; the rest is
/// the resolvent chain.
#[derive(Debug, Clone, Copy)]
pub struct OffsetInternals {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub p: f64,
    pub q: f64,
    pub s: f64,
    pub big_q: f64,
    pub delta0: f64,
    pub delta_disc: f64,
}

/// Closed-form eigenfrequencies of H_cir + H_0 at φ = π/2, labeled by the
/// detuning patterns they reduce to when the couplings vanish:
/// λ ↔ Δ1+Δ2+Δ3, δ ↔ Δ1+Δ2-Δ3, μ ↔ Δ1-Δ2+Δ3, γ ↔ Δ1-Δ2-Δ3.
#[derive(Debug, Clone, Copy)]
pub struct OffsetSpectrum {
    pub lambda: PmPair,
    pub delta: PmPair,
    pub mu: PmPair,
    pub gamma: PmPair,
    pub internals: OffsetInternals,
}

impl OffsetSpectrum {
    pub fn all_values(&self) -> [f64; DIM] {
        [
            self.lambda.plus,
            self.lambda.minus,
            self.delta.plus,
            self.delta.minus,
            self.mu.plus,
            self.mu.minus,
            self.gamma.plus,
            self.gamma.minus,
        ]
    }
}

/// Characteristic-polynomial coefficients in y = λ² for H_cir(J, J1, φ=π/2)
/// plus detunings: y⁴ + A·y³ + B·y² + C·y + D.
fn offset_quartic_coefficients(j: f64, j1: f64, d1: f64, d2: f64, d3: f64) -> (f64, f64, f64, f64) {
    let (j2, j12) = (j * j, j1 * j1);
    let (d12, d22, d32) = (d1 * d1, d2 * d2, d3 * d3);
    let (d14, d24, d34) = (d12 * d12, d22 * d22, d32 * d32);
    let (d16, d26, d36) = (d14 * d12, d24 * d22, d34 * d32);
    let (d18, d28, d38) = (d14 * d14, d24 * d24, d34 * d34);
    let j14 = j12 * j12;

    let a = -16.0 * j2 - 4.0 * d12 - 4.0 * d22 - 4.0 * d32 - 8.0 * j12;

    let b = 32.0 * j2 * d12
        + 32.0 * j2 * d22
        + 48.0 * j2 * d32
        + 128.0 * j2 * j12
        + 6.0 * d14
        + 4.0 * d12 * d22
        + 4.0 * d12 * d32
        + 16.0 * d12 * j12
        + 6.0 * d24
        + 4.0 * d22 * d32
        + 24.0 * d22 * j12
        + 6.0 * d34
        + 8.0 * d32 * j12
        + 16.0 * j14;

    let c = -16.0 * j2 * d14
        - 32.0 * j2 * d12 * d22
        - 128.0 * j2 * d12 * j12
        - 16.0 * j2 * d24
        - 128.0 * j2 * d22 * j12
        - 48.0 * j2 * d34
        - 256.0 * j2 * j14
        - 4.0 * d16
        + 4.0 * d14 * d22
        + 4.0 * d14 * d32
        - 8.0 * d14 * j12
        + 4.0 * d12 * d24
        - 40.0 * d12 * d22 * d32
        + 4.0 * d12 * d34
        - 32.0 * d12 * d32 * j12
        - 4.0 * d26
        + 4.0 * d24 * d32
        - 24.0 * d24 * j12
        + 4.0 * d22 * d34
        + 16.0 * d22 * d32 * j12
        - 32.0 * d22 * j14
        - 4.0 * d36
        + 8.0 * d34 * j12
        - 32.0 * d32 * j14;

    let d = 4.0 * d14 * d22 * d32 + 4.0 * d12 * d24 * d32 + 4.0 * d12 * d22 * d34
        - 4.0 * d16 * d22
        - 4.0 * d16 * d32
        + 6.0 * d14 * d24
        + 6.0 * d14 * d34
        - 4.0 * d12 * d26
        - 4.0 * d12 * d36
        - 4.0 * d26 * d32
        + 6.0 * d24 * d34
        - 4.0 * d22 * d36
        + 16.0 * d24 * j14
        - 8.0 * d36 * j12
        + 16.0 * d34 * j14
        + 16.0 * j2 * d36
        + 8.0 * d26 * j12
        + 16.0 * d12 * d34 * j12
        - 24.0 * d24 * d32 * j12
        + 24.0 * d22 * d34 * j12
        - 32.0 * d22 * d32 * j14
        + 8.0 * d14 * d22 * j12
        - 8.0 * d14 * d32 * j12
        - 16.0 * d12 * d24 * j12
        - 128.0 * j2 * d34 * j12
        + 256.0 * j2 * d32 * j14
        + 16.0 * j2 * d14 * d32
        - 32.0 * j2 * d12 * d34
        + 16.0 * j2 * d24 * d32
        - 32.0 * j2 * d22 * d34
        + 32.0 * j2 * d12 * d22 * d32
        + 128.0 * j2 * d12 * d32 * j12
        + 128.0 * j2 * d22 * d32 * j12
        + d18
        + d28
        + d38;

    (a, b, c, d)
}

/// Standard quartic resolvent for y⁴ + a·y³ + b·y² + c·y + d with all-real
/// roots. When the cubic discriminant goes negative (the usual case here)
/// the real root of the resolvent cubic comes from the trigonometric form,
/// which is what the modulus signs in the printed radicals resolve to.
fn quartic_roots(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
) -> Result<([f64; 4], OffsetInternals), SpectraError> {
    let p = (8.0 * b - 3.0 * a * a) / 8.0;
    let q = (a * a * a - 4.0 * a * b + 8.0 * c) / 8.0;
    let delta0 = b * b - 3.0 * a * c + 12.0 * d;
    let delta_disc =
        2.0 * b * b * b - 9.0 * a * b * c + 27.0 * c * c + 27.0 * a * a * d - 72.0 * b * d;

    let disc2 = delta_disc * delta_disc - 4.0 * delta0 * delta0 * delta0;
    // W = Q + Δ0/Q, kept real either way.
    let (w, big_q) = if disc2 >= 0.0 {
        let qq = (0.5 * (delta_disc + disc2.sqrt())).cbrt();
        if qq == 0.0 {
            (0.0, 0.0)
        } else {
            (qq + delta0 / qq, qq)
        }
    } else {
        let sqrt_d0 = delta0.sqrt();
        let cosarg = (delta_disc / (2.0 * sqrt_d0 * sqrt_d0 * sqrt_d0)).clamp(-1.0, 1.0);
        let w = 2.0 * sqrt_d0 * (cosarg.acos() / 3.0).cos();
        (w, w / 2.0)
    };

    let s = 0.5 * (((-2.0 * p + w) / 3.0).abs()).sqrt();
    if s == 0.0 || !(q / s).is_finite() {
        return Err(SpectraError::FormulaDomain);
    }

    let r1 = 0.5 * (-4.0 * s * s - 2.0 * p + q / s).abs().sqrt();
    let r2 = 0.5 * (-4.0 * s * s - 2.0 * p - q / s).abs().sqrt();
    let base = -a / 4.0;
    let roots = [
        (base - s + r1).max(0.0),
        (base - s - r1).max(0.0),
        (base + s + r2).max(0.0),
        (base + s - r2).max(0.0),
    ];
    let internals = OffsetInternals {
        a,
        b,
        c,
        d,
        p,
        q,
        s,
        big_q,
        delta0,
        delta_disc,
    };
    Ok((roots, internals))
}

/// Closed-form spectrum of H_cir(J, J1, φ=π/2) + H_0(Δ1, Δ2, Δ3).
///
/// The four squared eigenvalues solve a quartic; each is assigned to the
/// detuning pattern (±Δ1±Δ2±Δ3) it collapses to in the J = J1 = 0 limit, by
/// magnitude rank, and the plus branch carries the sign of that pattern.
pub fn closed_form_offset_spectrum(
    j: f64,
    j1: f64,
    d1: f64,
    d2: f64,
    d3: f64,
) -> Result<OffsetSpectrum, SpectraError> {
    let (a, b, c, d) = offset_quartic_coefficients(j, j1, d1, d2, d3);
    let (roots, internals) = quartic_roots(a, b, c, d)?;

    let patterns = [
        d1 + d2 + d3, // λ
        d1 + d2 - d3, // δ
        d1 - d2 + d3, // μ
        d1 - d2 - d3, // γ
    ];
    // Rank roots and patterns by magnitude, largest first, and pair them up.
    let mut root_order = [0usize, 1, 2, 3];
    root_order.sort_by(|&i, &k| roots[k].partial_cmp(&roots[i]).unwrap().then(i.cmp(&k)));
    let mut pattern_order = [0usize, 1, 2, 3];
    pattern_order.sort_by(|&i, &k| {
        patterns[k]
            .abs()
            .partial_cmp(&patterns[i].abs())
            .unwrap()
            .then(i.cmp(&k))
    });

    let mut plus = [0.0f64; 4];
    for rank in 0..4 {
        let root = roots[root_order[rank]];
        let pat = patterns[pattern_order[rank]];
        let sign = if pat < 0.0 { -1.0 } else { 1.0 };
        plus[pattern_order[rank]] = sign * root.sqrt();
    }

    Ok(OffsetSpectrum {
        lambda: PmPair::antisymmetric(plus[0]),
        delta: PmPair::antisymmetric(plus[1]),
        mu: PmPair::antisymmetric(plus[2]),
        gamma: PmPair::antisymmetric(plus[3]),
        internals,
    })
}

/// Closed-form spectrum of the Rabi-controlled Hamiltonian at φ = π/4,
/// with the mixing angle κ and the eigenvector phase α = π/4 - κ.
#[derive(Debug, Clone, Copy)]
pub struct RotatingSpectrum {
    pub lambda: [f64; DIM],
    pub kappa: f64,
    pub alpha: f64,
}

pub fn closed_form_rotating_spectrum(p: &RotatingParams) -> Result<RotatingSpectrum, SpectraError> {
    let (j, j1, o2, o3) = (p.j, p.j1, p.omega2, p.omega3);
    let base_a = (o3 - j).powi(2) + j1 * j1 + o2 * o2;
    let inner_a = (2.0 * (o3 - j).powi(2) * (j1 - o2).powi(2)).sqrt();
    let base_b = 5.0 * o3 * o3 + 2.0 * j * o3 + j * j + j1 * j1 + o2 * o2;
    let inner_b = (2.0 * o3 * o3 * (9.0 * o2 * o2 + 2.0 * j1 * o2 + 9.0 * j1 * j1)
        + 2.0 * j * (j1 + o2).powi(2) * (2.0 * o3 + j))
        .max(0.0)
        .sqrt();

    let l0 = (base_a + inner_a).max(0.0).sqrt();
    let l2 = (base_a - inner_a).max(0.0).sqrt();
    let l4 = (base_b + inner_b).max(0.0).sqrt();
    let l6 = (base_b - inner_b).max(0.0).sqrt();

    let kappa = mixing_angle(o2, o3, j1, j)?;
    Ok(RotatingSpectrum {
        lambda: [l0, -l0, l2, -l2, l4, -l4, l6, -l6],
        kappa,
        alpha: FRAC_PI_4 - kappa,
    })
}

/// The closed-form eigenvector family: Fourier mode ψ_i with the phase
/// e^{-iα} (even i) or e^{+iα} (odd i) on the |↓↓↓⟩,|↓↓↑⟩,|↑↓↓⟩,|↑↓↑⟩
/// components. At α = 0 these are exactly the Fourier modes.
pub fn rotating_eigenvectors(p: &RotatingParams) -> Result<[StateVector; DIM], SpectraError> {
    let spectrum = closed_form_rotating_spectrum(p)?;
    let alpha = spectrum.alpha;
    let modes = fourier_modes();
    Ok(core::array::from_fn(|i| {
        let sign = if i % 2 == 0 { -1.0 } else { 1.0 };
        let phase = C64::from_polar(1.0, sign * alpha);
        let mut v = modes.psi[i];
        for k in [0usize, 1, 4, 5] {
            v.amps[k] *= phase;
        }
        v
    }))
}

/// Mixing angle κ with tan κ = Ω2/(2J1) + Ω3/(2J). The J1 = 0 or J = 0
/// limit is κ = π/2, which makes the start of the Rabi schedule (where both
/// couplings vanish) well defined.
pub fn mixing_angle(omega2: f64, omega3: f64, j1: f64, j: f64) -> Result<f64, SpectraError> {
    for v in [omega2, omega3, j1, j] {
        if v < 0.0 {
            return Err(SpectraError::NegativeInput(v));
        }
    }
    if j1 == 0.0 || j == 0.0 {
        return Ok(FRAC_PI_2);
    }
    Ok((omega2 / (2.0 * j1) + omega3 / (2.0 * j)).atan())
}

/// Mixing angle along a Rabi schedule.
pub fn mixing_angle_at(s: &RabiSchedule, t: f64) -> Result<f64, SpectraError> {
    let p = s.params_at(t);
    mixing_angle(p.omega2, p.omega3, p.j1, p.j)
}

/// dκ/dt along a Rabi schedule, in closed form.
///
/// With u = sin²(ω′t) and R = Υ0/(2J01) + Υ′0/(2J0), the schedule gives
/// tan κ = (1 + R·cos²(ω′t))/u, whose derivative is
///
///   κ̇(t) = -ω′·sin(2ω′t)·(1 + R) / (u² + (1 + R·cos²(ω′t))²).
///
/// Zero exactly at t = 0 and t = t_max, negative in between (κ descends
/// from π/2 to π/4). The counter-driving stencil carries -κ̇.
pub fn kappa_rate(s: &RabiSchedule, t: f64) -> f64 {
    let t_max = s.t_max();
    if t <= 0.0 || t >= t_max {
        return 0.0;
    }
    if s.j01 == 0.0 || s.j0 == 0.0 {
        // κ is pinned at π/2 when either coupling amplitude is absent.
        return 0.0;
    }
    let r = s.upsilon0 / (2.0 * s.j01) + s.upsilon0_prime / (2.0 * s.j0);
    let u = (s.omega_prime * t).sin().powi(2);
    let c2 = 1.0 - u;
    let denom = u * u + (1.0 + r * c2).powi(2);
    -s.omega_prime * (2.0 * s.omega_prime * t).sin() * (1.0 + r) / denom
}

/// Gauge-continuous eigenvalue/eigenvector tracks over a time grid.
///
/// Branches are ordered by descending eigenvalue at the first grid point;
/// afterwards each branch follows the eigenvector of maximal overlap, and
/// every vector is re-phased so its overlap with the predecessor is real
/// and nonnegative.
#[derive(Debug, Clone)]
pub struct SpectrumBranches {
    pub times: Vec<f64>,
    /// Time-major: `values[idx][branch]`.
    values: Vec<[f64; DIM]>,
    vectors: Vec<[StateVector; DIM]>,
    /// (time, min pairwise gap) where the gap fell below 1e-9·max|λ|.
    pub degeneracy_warnings: Vec<(f64, f64)>,
}

impl SpectrumBranches {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn value(&self, branch: usize, idx: usize) -> f64 {
        self.values[idx][branch]
    }

    pub fn vector(&self, branch: usize, idx: usize) -> &StateVector {
        &self.vectors[idx][branch]
    }

    pub fn branch_values(&self, branch: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[branch]).collect()
    }

    pub fn min_pairwise_gap(&self, idx: usize) -> f64 {
        let row = &self.values[idx];
        let mut sorted = *row;
        sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
        sorted
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Greedy bijection from initial-state targets to branches by overlap
    /// magnitude at the first grid point.
    pub fn match_initial_states(&self, targets: &[StateVector]) -> Vec<usize> {
        let first = &self.vectors[0];
        let mut overlap = vec![[0.0f64; DIM]; targets.len()];
        for (ti, t) in targets.iter().enumerate() {
            for b in 0..DIM {
                overlap[ti][b] = t.dot(&first[b]).norm();
            }
        }
        let mut assignment = vec![usize::MAX; targets.len()];
        let mut branch_taken = [false; DIM];
        for _ in 0..targets.len() {
            let mut best = (-1.0, usize::MAX, usize::MAX);
            for ti in 0..targets.len() {
                if assignment[ti] != usize::MAX {
                    continue;
                }
                for b in 0..DIM {
                    if branch_taken[b] {
                        continue;
                    }
                    if overlap[ti][b] > best.0 {
                        best = (overlap[ti][b], ti, b);
                    }
                }
            }
            assignment[best.1] = best.2;
            branch_taken[best.2] = true;
        }
        assignment
    }

    /// Cumulative trapezoid integral of one branch along the grid; entry k is
    /// ∫ from `times[0]` to `times[k]`.
    pub fn running_integral(&self, branch: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        let mut acc = 0.0;
        out.push(0.0);
        for k in 1..self.len() {
            acc += 0.5
                * (self.value(branch, k - 1) + self.value(branch, k))
                * (self.times[k] - self.times[k - 1]);
            out.push(acc);
        }
        out
    }
}

pub fn track_spectrum(
    hamiltonian_at: impl Fn(f64) -> Operator,
    grid: &[f64],
) -> Result<SpectrumBranches, SpectraError> {
    if grid.len() < 2 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SpectraError::BadGrid);
    }

    let mut values = Vec::with_capacity(grid.len());
    let mut vectors = Vec::with_capacity(grid.len());
    let mut warnings = Vec::new();

    for (idx, &t) in grid.iter().enumerate() {
        let eig = hermitian_eigensystem(&hamiltonian_at(t))?;
        let (row_vals, row_vecs): ([f64; DIM], [StateVector; DIM]) = if idx == 0 {
            // Descending eigenvalue order defines the branch labels.
            let vals = core::array::from_fn(|b| eig.values[DIM - 1 - b]);
            let vecs = core::array::from_fn(|b| eig.vectors[DIM - 1 - b]);
            (vals, vecs)
        } else {
            let prev: &[StateVector; DIM] = &vectors[idx - 1];
            let mut overlap = [[0.0f64; DIM]; DIM];
            for (b, pv) in prev.iter().enumerate() {
                for (j, nv) in eig.vectors.iter().enumerate() {
                    overlap[b][j] = pv.dot(nv).norm();
                }
            }
            // Greedy maximal-overlap assignment.
            let mut branch_of = [usize::MAX; DIM];
            let mut taken = [false; DIM];
            for _ in 0..DIM {
                let mut best = (-1.0, usize::MAX, usize::MAX);
                for b in 0..DIM {
                    if branch_of[b] != usize::MAX {
                        continue;
                    }
                    for j in 0..DIM {
                        if taken[j] {
                            continue;
                        }
                        if overlap[b][j] > best.0 {
                            best = (overlap[b][j], b, j);
                        }
                    }
                }
                branch_of[best.1] = best.2;
                taken[best.2] = true;
            }
            let vals: [f64; DIM] = core::array::from_fn(|b| eig.values[branch_of[b]]);
            let vecs: [StateVector; DIM] = core::array::from_fn(|b| {
                let mut v = eig.vectors[branch_of[b]];
                let ov = prev[b].dot(&v);
                if ov.norm() > 0.0 {
                    v = v.scaled(ov.conj() / ov.norm());
                }
                v
            });
            (vals, vecs)
        };

        let scale = row_vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut sorted = row_vals;
        sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let min_gap = sorted
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if min_gap < 1e-9 * scale {
            warnings.push((t, min_gap));
        }

        values.push(row_vals);
        vectors.push(row_vecs);
    }

    Ok(SpectrumBranches {
        times: grid.to_vec(),
        values,
        vectors,
        degeneracy_warnings: warnings,
    })
}

/// Gap and nonadiabatic-coupling series for one branch pair.
#[derive(Debug, Clone)]
pub struct PairMargin {
    pub branch_i: usize,
    pub branch_j: usize,
    pub gaps: Vec<f64>,
    pub couplings: Vec<f64>,
    /// gap / coupling, infinite where the coupling vanishes.
    pub margins: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct AdiabaticityReport {
    pub pairs: Vec<PairMargin>,
}

impl AdiabaticityReport {
    pub fn min_margin(&self) -> f64 {
        self.pairs
            .iter()
            .flat_map(|p| p.margins.iter())
            .fold(f64::INFINITY, |m, &v| m.min(v))
    }
}

/// Per-pair gap |λ_i - λ_j| and coupling |⟨∂_t v_i|v_j⟩| series, the
/// derivative taken by centered differences on the gauge-fixed vectors
/// (one-sided at the grid ends).
pub fn adiabaticity_report(b: &SpectrumBranches) -> AdiabaticityReport {
    let n = b.len();
    let deriv = |branch: usize, k: usize| -> StateVector {
        let (k0, k1) = if k == 0 {
            (0, 1)
        } else if k == n - 1 {
            (n - 2, n - 1)
        } else {
            (k - 1, k + 1)
        };
        let dt = b.times[k1] - b.times[k0];
        b.vector(branch, k1)
            .sub(b.vector(branch, k0))
            .scaled(C64::new(1.0 / dt, 0.0))
    };

    let mut pairs = Vec::new();
    for i in 0..DIM {
        // Differentiating branch i once per pair row keeps this O(DIM²).
        let dvi: Vec<StateVector> = (0..n).map(|k| deriv(i, k)).collect();
        for j in 0..DIM {
            if j == i {
                continue;
            }
            if j < i {
                continue;
            }
            let mut gaps = Vec::with_capacity(n);
            let mut couplings = Vec::with_capacity(n);
            let mut margins = Vec::with_capacity(n);
            for (k, dv) in dvi.iter().enumerate() {
                let gap = (b.value(i, k) - b.value(j, k)).abs();
                let coupling = dv.dot(b.vector(j, k)).norm();
                gaps.push(gap);
                couplings.push(coupling);
                margins.push(if coupling == 0.0 {
                    f64::INFINITY
                } else {
                    gap / coupling
                });
            }
            pairs.push(PairMargin {
                branch_i: i,
                branch_j: j,
                gaps,
                couplings,
                margins,
            });
        }
    }
    AdiabaticityReport { pairs }
}

/// The rotating product state |s1's2's3'⟩ mapped to Fourier mode ψ_i: spin
/// signs from the bits of i (0 → minus, 1 → plus), with the e^{iφ} phase on
/// the ↓ component of the middle spin.
pub fn rotating_spin_state(i: usize, phi: f64) -> StateVector {
    let sign = |bit: bool| if bit { 1.0 } else { -1.0 };
    let s1 = sign(i & 4 != 0);
    let s2 = sign(i & 2 != 0);
    let s3 = sign(i & 1 != 0);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    // Per-spin (↓, ↑) amplitudes.
    let f1 = [C64::new(inv_sqrt2, 0.0), C64::new(s1 * inv_sqrt2, 0.0)];
    let f2 = [
        C64::from_polar(inv_sqrt2, phi),
        C64::new(s2 * inv_sqrt2, 0.0),
    ];
    let f3 = [C64::new(inv_sqrt2, 0.0), C64::new(s3 * inv_sqrt2, 0.0)];
    let mut v = StateVector::zero();
    for k in 0..DIM {
        let b1 = (k >> 2) & 1;
        let b2 = (k >> 1) & 1;
        let b3 = k & 1;
        v.amps[k] = f1[b1] * f2[b2] * f3[b3];
    }
    v
}
