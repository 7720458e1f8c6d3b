//! Fixed-dimension complex linear algebra and Schrödinger propagation.
//!
//! Everything in this crate lives in an 8-dimensional Hilbert space (three
//! qubits), so matrices and vectors are plain fixed-size arrays. Time is in
//! ms, frequencies are angular (rad/ms), and ħ = 1 throughout.

// Index loops mirror the textbook kernels (pivoting, paired row/column
// rotations); iterator forms obscure them.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Hilbert-space dimension for three qubits.
pub const DIM: usize = 8;

/// Off-diagonal convergence target for the Jacobi sweep, relative to ‖H‖_F.
const JACOBI_TOL: f64 = 1e-14;
/// Maximum Jacobi sweeps before giving up.
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("matrix is not Hermitian: max |M - M†| entry = {max_asymmetry:.3e}")]
    NotHermitian { max_asymmetry: f64 },
    #[error(
        "Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {offdiag:.3e})"
    )]
    NoConvergence { sweeps: usize, offdiag: f64 },
    #[error("propagator lost unitarity: ‖U†U - I‖_max = {drift:.3e} after {steps} steps")]
    UnitarityLost { drift: f64, steps: usize },
    #[error("invalid time interval: t1 = {t1} must exceed t0 = {t0}")]
    BadInterval { t0: f64, t1: f64 },
    #[error("step count must be at least 1")]
    NoSteps,
}

/// An 8-component complex amplitude vector over the spin basis
/// |↓↓↓⟩,|↓↓↑⟩,|↓↑↓⟩,|↓↑↑⟩,|↑↓↓⟩,|↑↓↑⟩,|↑↑↓⟩,|↑↑↑⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub amps: [C64; DIM],
}

impl StateVector {
    pub fn zero() -> Self {
        StateVector {
            amps: [C64::new(0.0, 0.0); DIM],
        }
    }

    /// The computational basis state with index `k` in the frozen basis order.
    pub fn basis(k: usize) -> Self {
        let mut v = Self::zero();
        v.amps[k] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_amps(amps: [C64; DIM]) -> Self {
        StateVector { amps }
    }

    /// Inner product ⟨self|other⟩, conjugate-linear in `self`.
    pub fn dot(&self, other: &StateVector) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).re.sqrt()
    }

    pub fn scaled(&self, c: C64) -> StateVector {
        let mut out = *self;
        for a in out.amps.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn add(&self, other: &StateVector) -> StateVector {
        let mut out = *self;
        for (a, b) in out.amps.iter_mut().zip(other.amps.iter()) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &StateVector) -> StateVector {
        let mut out = *self;
        for (a, b) in out.amps.iter_mut().zip(other.amps.iter()) {
            *a -= b;
        }
        out
    }

    pub fn normalized(&self) -> StateVector {
        let n = self.norm();
        if n == 0.0 {
            return *self;
        }
        self.scaled(C64::new(1.0 / n, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.amps
            .iter()
            .all(|a| a.re.is_finite() && a.im.is_finite())
    }
}

/// Dense 8×8 complex matrix. Hamiltonians carry rad/ms entries, propagators
/// and gates are dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator {
    pub entries: [[C64; DIM]; DIM],
}

impl Operator {
    pub fn zero() -> Self {
        Operator {
            entries: [[C64::new(0.0, 0.0); DIM]; DIM],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for k in 0..DIM {
            m.entries[k][k] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_entries(entries: [[C64; DIM]; DIM]) -> Self {
        Operator { entries }
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.entries[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.entries[r][c] = v;
    }

    pub fn adjoint(&self) -> Operator {
        let mut out = Self::zero();
        for r in 0..DIM {
            for c in 0..DIM {
                out.entries[r][c] = self.entries[c][r].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &Operator) -> Operator {
        let mut out = Self::zero();
        for r in 0..DIM {
            for k in 0..DIM {
                let a = self.entries[r][k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for c in 0..DIM {
                    out.entries[r][c] += a * other.entries[k][c];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Operator) -> Operator {
        let mut out = *self;
        for r in 0..DIM {
            for c in 0..DIM {
                out.entries[r][c] += other.entries[r][c];
            }
        }
        out
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        let mut out = *self;
        for r in 0..DIM {
            for c in 0..DIM {
                out.entries[r][c] -= other.entries[r][c];
            }
        }
        out
    }

    pub fn scaled(&self, c: C64) -> Operator {
        let mut out = *self;
        for r in 0..DIM {
            for col in 0..DIM {
                out.entries[r][col] *= c;
            }
        }
        out
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        let mut out = StateVector::zero();
        for r in 0..DIM {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..DIM {
                acc += self.entries[r][c] * v.amps[c];
            }
            out.amps[r] = acc;
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..DIM).map(|k| self.entries[k][k]).sum()
    }

    /// Largest entry magnitude, the ‖·‖_max norm used by tolerances here.
    pub fn norm_max(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Max entry magnitude of M - M†.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..DIM {
            for c in 0..DIM {
                let d = (self.entries[r][c] - self.entries[c][r].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Max entry magnitude of U†U - I.
    pub fn unitarity_error(&self) -> f64 {
        let gram = self.adjoint().mul(self);
        let mut worst = 0.0f64;
        for r in 0..DIM {
            for c in 0..DIM {
                let target = if r == c { 1.0 } else { 0.0 };
                let d = (gram.entries[r][c] - C64::new(target, 0.0)).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn column(&self, c: usize) -> StateVector {
        let mut v = StateVector::zero();
        for r in 0..DIM {
            v.amps[r] = self.entries[r][c];
        }
        v
    }

    pub fn set_column(&mut self, c: usize, v: &StateVector) {
        for r in 0..DIM {
            self.entries[r][c] = v.amps[r];
        }
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn determinant(&self) -> C64 {
        let mut a = self.entries;
        let mut det = C64::new(1.0, 0.0);
        for col in 0..DIM {
            let mut pivot = col;
            let mut best = a[col][col].norm();
            for r in col + 1..DIM {
                if a[r][col].norm() > best {
                    best = a[r][col].norm();
                    pivot = r;
                }
            }
            if best == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= a[col][col];
            for r in col + 1..DIM {
                let f = a[r][col] / a[col][col];
                for c in col..DIM {
                    let sub = f * a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
        det
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors of a
/// Hermitian operator.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: [f64; DIM],
    pub vectors: [StateVector; DIM],
}

impl EigenSystem {
    /// Rebuild V·diag(λ)·V†, for residual checks.
    pub fn reconstruct(&self) -> Operator {
        let mut out = Operator::zero();
        for k in 0..DIM {
            let v = &self.vectors[k];
            for r in 0..DIM {
                for c in 0..DIM {
                    out.entries[r][c] +=
                        C64::new(self.values[k], 0.0) * v.amps[r] * v.amps[c].conj();
                }
            }
        }
        out
    }
}

/// Diagonalize a Hermitian 8×8 matrix with cyclic complex Jacobi rotations.
///
/// Rejects inputs whose asymmetry ‖H - H†‖_max exceeds 1e-10·(1 + ‖H‖_max).
/// Eigenvalues come back ascending; ties keep the pre-sort (rotation) order.
pub fn hermitian_eigensystem(h: &Operator) -> Result<EigenSystem, NumericsError> {
    let asym = h.hermiticity_error();
    if asym > 1e-10 * (1.0 + h.norm_max()) {
        return Err(NumericsError::NotHermitian {
            max_asymmetry: asym,
        });
    }

    let mut a = h.entries;
    // Symmetrize away the (tolerated) rounding-level asymmetry.
    for r in 0..DIM {
        for c in r..DIM {
            let avg = (a[r][c] + a[c][r].conj()) * 0.5;
            a[r][c] = avg;
            a[c][r] = avg.conj();
        }
        a[r][r] = C64::new(a[r][r].re, 0.0);
    }

    let mut v = Operator::identity().entries;
    let norm_fro = h.norm_fro();
    let target = JACOBI_TOL * norm_fro;

    let offdiag = |a: &[[C64; DIM]; DIM]| -> f64 {
        let mut s = 0.0;
        for r in 0..DIM {
            for c in 0..DIM {
                if r != c {
                    s += a[r][c].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while offdiag(&a) > target && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..DIM {
            for q in p + 1..DIM {
                let apq = a[p][q];
                let m = apq.norm();
                if m == 0.0 {
                    continue;
                }
                let phase = apq / m;
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let zeta = (app - aqq) / (2.0 * m);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (zeta * zeta + 1.0).sqrt())
                } else {
                    -1.0 / (-zeta + (zeta * zeta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = c * t;

                // Column update A <- A·U with U[p][p]=c, U[p][q]=-s·e^{iφ},
                // U[q][p]=s·e^{-iφ}, U[q][q]=c.
                for k in 0..DIM {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = akp * c + akq * (s * phase.conj());
                    a[k][q] = akp * (-s * phase) + akq * c;
                }
                // Row update A <- U†·A.
                for k in 0..DIM {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = apk * c + aqk * (s * phase);
                    a[q][k] = apk * (-s * phase.conj()) + aqk * c;
                }
                // Accumulate eigenvectors V <- V·U.
                for k in 0..DIM {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = vkp * c + vkq * (s * phase.conj());
                    v[k][q] = vkp * (-s * phase) + vkq * c;
                }
                a[p][q] = C64::new(0.0, 0.0);
                a[q][p] = C64::new(0.0, 0.0);
                a[p][p] = C64::new(a[p][p].re, 0.0);
                a[q][q] = C64::new(a[q][q].re, 0.0);
            }
        }
        sweeps += 1;
    }

    let off = offdiag(&a);
    if off > target && off > 1e-12 * (1.0 + norm_fro) {
        return Err(NumericsError::NoConvergence {
            sweeps,
            offdiag: off,
        });
    }

    let mut order: [usize; DIM] = [0, 1, 2, 3, 4, 5, 6, 7];
    let vals: [f64; DIM] = core::array::from_fn(|k| a[k][k].re);
    // Stable sort keeps original index order on degenerate eigenvalues.
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap().then(i.cmp(&j)));

    let values: [f64; DIM] = core::array::from_fn(|k| vals[order[k]]);
    let vectors: [StateVector; DIM] = core::array::from_fn(|k| {
        let mut sv = StateVector::zero();
        for r in 0..DIM {
            sv.amps[r] = v[r][order[k]];
        }
        sv
    });

    Ok(EigenSystem { values, vectors })
}

/// exp(-i·H·dt) for Hermitian H, through its eigensystem.
pub fn hermitian_exp(h: &Operator, dt: f64) -> Result<Operator, NumericsError> {
    let eig = hermitian_eigensystem(h)?;
    let mut out = Operator::zero();
    for k in 0..DIM {
        let phase = C64::from_polar(1.0, -eig.values[k] * dt);
        let v = &eig.vectors[k];
        for r in 0..DIM {
            for c in 0..DIM {
                out.entries[r][c] += phase * v.amps[r] * v.amps[c].conj();
            }
        }
    }
    Ok(out)
}

/// Step budget: at least 40 integrator steps per fastest oscillation period
/// of the sampled Hamiltonian, never fewer than 4000 overall.
pub fn default_steps(hamiltonian_at: impl Fn(f64) -> Operator, t0: f64, t1: f64) -> usize {
    let mut hmax = 0.0f64;
    let probes = 32;
    for k in 0..=probes {
        let t = t0 + (t1 - t0) * (k as f64) / (probes as f64);
        hmax = hmax.max(hamiltonian_at(t).norm_max());
    }
    let budget = (40.0 * (t1 - t0) * hmax / (2.0 * std::f64::consts::PI)).ceil() as usize;
    budget.max(4000)
}

/// Integrate dU/dt = -i·H(t)·U from U(t0) = I with second-order midpoint
/// exponential stepping: U <- exp(-i·H(t_mid)·δt)·U.
pub fn evolve_propagator(
    hamiltonian_at: impl Fn(f64) -> Operator,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<Operator, NumericsError> {
    // partial_cmp so NaN endpoints are rejected along with bad ordering.
    if t1.partial_cmp(&t0) != Some(std::cmp::Ordering::Greater) {
        return Err(NumericsError::BadInterval { t0, t1 });
    }
    if steps == 0 {
        return Err(NumericsError::NoSteps);
    }
    let dt = (t1 - t0) / steps as f64;
    let mut u = Operator::identity();
    for k in 0..steps {
        let t_mid = t0 + (k as f64 + 0.5) * dt;
        let step = hermitian_exp(&hamiltonian_at(t_mid), dt)?;
        u = step.mul(&u);
    }
    let drift = u.unitarity_error();
    if drift > 1e-6 {
        return Err(NumericsError::UnitarityLost { drift, steps });
    }
    Ok(u)
}

/// Propagator sampled on an inclusive uniform grid of `samples` points over
/// [t0, t1], with `substeps` midpoint-exponential steps between samples.
/// Returns (times, U(t) at each time); U(t0) = I.
pub fn propagate_sampled(
    hamiltonian_at: impl Fn(f64) -> Operator,
    t0: f64,
    t1: f64,
    samples: usize,
    substeps: usize,
) -> Result<(Vec<f64>, Vec<Operator>), NumericsError> {
    // partial_cmp so NaN endpoints are rejected along with bad ordering.
    if t1.partial_cmp(&t0) != Some(std::cmp::Ordering::Greater) {
        return Err(NumericsError::BadInterval { t0, t1 });
    }
    if samples < 2 || substeps == 0 {
        return Err(NumericsError::NoSteps);
    }
    let mut times = Vec::with_capacity(samples);
    let mut ops = Vec::with_capacity(samples);
    let mut u = Operator::identity();
    times.push(t0);
    ops.push(u);
    let sample_dt = (t1 - t0) / (samples - 1) as f64;
    let dt = sample_dt / substeps as f64;
    for k in 0..samples - 1 {
        let ta = t0 + k as f64 * sample_dt;
        for j in 0..substeps {
            let t_mid = ta + (j as f64 + 0.5) * dt;
            let step = hermitian_exp(&hamiltonian_at(t_mid), dt)?;
            u = step.mul(&u);
        }
        let t_next = if k + 2 == samples { t1 } else { ta + sample_dt };
        times.push(t_next);
        ops.push(u);
    }
    let drift = u.unitarity_error();
    if drift > 1e-6 {
        return Err(NumericsError::UnitarityLost {
            drift,
            steps: substeps * (samples - 1),
        });
    }
    Ok((times, ops))
}

/// Substeps per sample interval that realize at least the default budget.
pub fn substeps_for(
    hamiltonian_at: impl Fn(f64) -> Operator,
    t0: f64,
    t1: f64,
    samples: usize,
) -> usize {
    let total = default_steps(hamiltonian_at, t0, t1);
    total.div_ceil(samples.saturating_sub(1).max(1)).max(1)
}
