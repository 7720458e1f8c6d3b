//! Effective spin-spin and trilinear couplings between trapped ions, from
//! normal-mode data and drive parameters. Only the final algebraic coupling
//! sums live here; phonon dynamics stay out of scope.
//!
//! SI units appear in `lamb_dicke` alone; every coupling sum works in the
//! crate's rad/ms convention with the dimensionless Lamb-Dicke factors
//! already folded into the per-mode coupling lists.

use thiserror::Error;

use crate::hamiltonians::CirculantParams;

/// ħ in J·s, used only by the Lamb-Dicke parameter.
pub const HBAR_SI: f64 = 1.054571817e-34;

/// Lamb-Dicke regime advisory threshold.
pub const LAMB_DICKE_ADVISORY: f64 = 0.3;

#[derive(Debug, Error)]
pub enum IonError {
    #[error("mass and mode frequencies must be positive, got {0}")]
    NonPositive(f64),
    #[error("per-mode lists must have equal lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("drive frequency is resonant with vibration mode {mode} (Ω_n = {omega_n} rad/ms)")]
    Resonance { mode: usize, omega_n: f64 },
}

/// Radial vibration modes: angular frequencies, normal-mode coefficients and
/// Lamb-Dicke parameters per ion (rows) per mode (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    /// Mode angular frequencies, rad/ms; all positive.
    pub omega_n: Vec<f64>,
    /// Normal-mode transformation coefficients `b[ion][mode]`, dimensionless.
    pub b: [Vec<f64>; 3],
    /// Lamb-Dicke parameters `η[ion][mode]`, dimensionless.
    pub eta: [Vec<f64>; 3],
}

impl ModeSet {
    /// Build from normal-mode coefficients and trap data; η is computed per
    /// ion and mode. `k` is the laser wavenumber (1/m), `mass` in kg, and
    /// `omega_n_si` the mode frequencies in rad/s; `omega_n` is stored in
    /// rad/ms (1 rad/s = 1e-3 rad/ms).
    pub fn from_trap(
        b: [Vec<f64>; 3],
        k: f64,
        mass: f64,
        omega_n_si: &[f64],
    ) -> Result<Self, IonError> {
        for row in &b {
            if row.len() != omega_n_si.len() {
                return Err(IonError::LengthMismatch(row.len(), omega_n_si.len()));
            }
        }
        let mut eta: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for ion in 0..3 {
            for (m, &w) in omega_n_si.iter().enumerate() {
                eta[ion].push(lamb_dicke(b[ion][m], k, mass, w)?);
            }
        }
        let omega_n = omega_n_si.iter().map(|w| w * 1e-3).collect();
        Ok(ModeSet { omega_n, b, eta })
    }

    /// True when any Lamb-Dicke parameter exceeds the small-η advisory bound.
    pub fn lamb_dicke_advisory(&self) -> bool {
        self.eta
            .iter()
            .flatten()
            .any(|e| e.abs() > LAMB_DICKE_ADVISORY)
    }
}

/// Beat-note and laser Rabi frequencies, rad/ms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    pub nu: f64,
    pub omega_x: f64,
    pub omega_z: f64,
    pub omega_alpha: f64,
}

/// η = b·k·√(ħ/(2·M·Ω_n)), all SI inputs.
pub fn lamb_dicke(b: f64, k: f64, mass: f64, omega_n: f64) -> Result<f64, IonError> {
    if mass <= 0.0 {
        return Err(IonError::NonPositive(mass));
    }
    if omega_n <= 0.0 {
        return Err(IonError::NonPositive(omega_n));
    }
    Ok(b * k * (HBAR_SI / (2.0 * mass * omega_n)).sqrt())
}

fn check_modes(len_a: usize, len_b: usize, nu: f64, omega_n: &[f64]) -> Result<(), IonError> {
    if len_a != len_b {
        return Err(IonError::LengthMismatch(len_a, len_b));
    }
    if len_a != omega_n.len() {
        return Err(IonError::LengthMismatch(len_a, omega_n.len()));
    }
    for (mode, &w) in omega_n.iter().enumerate() {
        if nu * nu == w * w {
            return Err(IonError::Resonance { mode, omega_n: w });
        }
    }
    Ok(())
}

/// Bilinear coupling between two ions: Σ_n J_{j,n}·J_{p,n}/(ν² - Ω_n²).
pub fn pairwise_coupling(
    j_j: &[f64],
    j_p: &[f64],
    nu: f64,
    omega_n: &[f64],
) -> Result<f64, IonError> {
    check_modes(j_j.len(), j_p.len(), nu, omega_n)?;
    Ok(j_j
        .iter()
        .zip(j_p)
        .zip(omega_n)
        .map(|((a, b), w)| a * b / (nu * nu - w * w))
        .sum())
}

/// Trilinear coupling: Σ_n J_{j,n}·J_{p,n}·h_n/(ν² - Ω_n²).
pub fn trilinear_coupling(
    j_j: &[f64],
    j_p: &[f64],
    h: &[f64],
    nu: f64,
    omega_n: &[f64],
) -> Result<f64, IonError> {
    check_modes(j_j.len(), j_p.len(), nu, omega_n)?;
    if h.len() != j_j.len() {
        return Err(IonError::LengthMismatch(h.len(), j_j.len()));
    }
    Ok(j_j
        .iter()
        .zip(j_p)
        .zip(h)
        .zip(omega_n)
        .map(|(((a, b), hn), w)| a * b * hn / (nu * nu - w * w))
        .sum())
}

/// The four couplings of the three-ion configuration and the distance from
/// the circulant constraint J2 = J3 = J, together with the single uniform
/// drive rescaling that minimizes it.
#[derive(Debug, Clone)]
pub struct CirculantPoint {
    /// Circulant parameters (variant 1, φ = π/2) built from the rescaled
    /// couplings: J = mean of the three tied couplings, J1 as computed.
    pub params: CirculantParams,
    /// Couplings after the best rescaling: (J1, J2, J3, J_trilinear) rad/ms.
    pub couplings: (f64, f64, f64, f64),
    /// Best uniform scale applied to the three drive amplitudes.
    pub scale: f64,
    /// RMS deviation of (J2, J3, J) from their common mean, rad/ms.
    pub residual: f64,
    /// Lamb-Dicke advisory from the mode set.
    pub lamb_dicke_advisory: bool,
}

fn tie_residual(j2: f64, j3: f64, j_tri: f64) -> f64 {
    let mean = (j2 + j3 + j_tri) / 3.0;
    (((j2 - mean).powi(2) + (j3 - mean).powi(2) + (j_tri - mean).powi(2)) / 3.0).sqrt()
}

/// Compute J1, J2, J3, J from the mode data, then search one uniform drive
/// scale c (bilinears ∝ c², trilinear ∝ c³) minimizing the tie residual by
/// golden section on c ∈ [0.1, 10]. The J2-J3 imbalance is scale-invariant,
/// so the residual floor is reported rather than optimized away.
pub fn circulant_point_search(
    modes: &ModeSet,
    drive: &DriveParams,
) -> Result<CirculantPoint, IonError> {
    let n = modes.omega_n.len();
    let j1n: Vec<f64> = modes.eta[0].iter().map(|e| e * drive.omega_x).collect();
    let j2n: Vec<f64> = modes.eta[1].iter().map(|e| e * drive.omega_x).collect();
    let j3n: Vec<f64> = modes.eta[2].iter().map(|e| e * drive.omega_z).collect();
    let hn: Vec<f64> = modes.eta[2].iter().map(|e| e * drive.omega_alpha).collect();

    let (j1, j2, j3, j_tri) = if n == 0 {
        (0.0, 0.0, 0.0, 0.0)
    } else {
        (
            pairwise_coupling(&j1n, &j2n, drive.nu, &modes.omega_n)?,
            pairwise_coupling(&j2n, &j3n, drive.nu, &modes.omega_n)?,
            pairwise_coupling(&j1n, &j3n, drive.nu, &modes.omega_n)?,
            trilinear_coupling(&j1n, &j2n, &hn, drive.nu, &modes.omega_n)?,
        )
    };

    let residual_at = |c: f64| tie_residual(c * c * j2, c * c * j3, c * c * c * j_tri);

    let scale = if n == 0 || (j2 == 0.0 && j3 == 0.0 && j_tri == 0.0) {
        1.0
    } else {
        let (mut lo, mut hi) = (0.1f64, 10.0f64);
        let inv_phi = 0.6180339887498949;
        let mut c1 = hi - inv_phi * (hi - lo);
        let mut c2 = lo + inv_phi * (hi - lo);
        let (mut f1, mut f2) = (residual_at(c1), residual_at(c2));
        for _ in 0..80 {
            if f1 < f2 {
                hi = c2;
                c2 = c1;
                f2 = f1;
                c1 = hi - inv_phi * (hi - lo);
                f1 = residual_at(c1);
            } else {
                lo = c1;
                c1 = c2;
                f1 = f2;
                c2 = lo + inv_phi * (hi - lo);
                f2 = residual_at(c2);
            }
        }
        0.5 * (lo + hi)
    };

    let scaled = (
        scale * scale * j1,
        scale * scale * j2,
        scale * scale * j3,
        scale * scale * scale * j_tri,
    );
    let residual = tie_residual(scaled.1, scaled.2, scaled.3);
    let j_common = (scaled.1 + scaled.2 + scaled.3) / 3.0;
    Ok(CirculantPoint {
        params: CirculantParams::variant1(j_common, scaled.0, std::f64::consts::FRAC_PI_2),
        couplings: scaled,
        scale,
        residual,
        lamb_dicke_advisory: modes.lamb_dicke_advisory(),
    })
}
