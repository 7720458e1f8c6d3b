//! Builders for every Hamiltonian of the three-qubit circulant gate model,
//! all in the frozen spin-basis ordering
//! |↓↓↓⟩,|↓↓↑⟩,|↓↑↓⟩,|↓↑↑⟩,|↑↓↓⟩,|↑↓↑⟩,|↑↑↓⟩,|↑↑↑⟩.
//!
//! Sign conventions: σ_z = |↓⟩⟨↓| - |↑⟩⟨↑|, so the energy offset gives the
//! |↓↓↓⟩ state the eigenvalue +(Δ1+Δ2+Δ3). All couplings are angular
//! frequencies in rad/ms; phases are in radians and carry the signs.

use num_complex::Complex64 as C64;

use crate::numerics::{Operator, DIM};

/// Every parameter of the full three-spin Hamiltonian: bilinear couplings
/// J1 (spins 1-2), J2 (spins 2-3), J3 (spins 1-3), the trilinear coupling J,
/// single-qubit Rabi frequencies Ω1..Ω3 with phases θ1..θ3, bilinear phases
/// φ12/φ21, φ23/φ32, φ13/φ31 and trilinear phases φ1..φ3.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FullParams {
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub j: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub phi12: f64,
    pub phi21: f64,
    pub phi23: f64,
    pub phi32: f64,
    pub phi13: f64,
    pub phi31: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
}

impl FullParams {
    /// The parameter assignment that collapses the full Hamiltonian onto the
    /// first circulant form: J1 = Ω2, J = J2 = J3 = Ω3, Ω1 = 0 and the phase
    /// pattern θ2 = θ3 = φ32 = φ3 = φ21 = -φ31 = φ, everything else zero.
    pub fn configuration_1(j: f64, j1: f64, phi: f64) -> Self {
        FullParams {
            j1,
            j2: j,
            j3: j,
            j,
            omega1: 0.0,
            omega2: j1,
            omega3: j,
            theta2: phi,
            theta3: phi,
            phi32: phi,
            phi3: phi,
            phi21: phi,
            phi31: -phi,
            ..Default::default()
        }
    }

    /// Same as configuration 1 but with a nonzero Ω1, which lands on the
    /// second circulant form.
    pub fn configuration_2(j: f64, j1: f64, omega1: f64, phi: f64) -> Self {
        let mut p = Self::configuration_1(j, j1, phi);
        p.omega1 = omega1;
        p
    }
}

/// Parameters of the two circulant Hamiltonians. Variant 1 has no Ω1 term;
/// variant 2 places Ω1 on the shift-by-four diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirculantParams {
    pub variant: CirculantVariant,
    pub j: f64,
    pub j1: f64,
    /// Used by variant 2 only; variant 1 forces this to zero.
    pub omega1: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CirculantVariant {
    One,
    Two,
}

impl CirculantParams {
    pub fn variant1(j: f64, j1: f64, phi: f64) -> Self {
        CirculantParams {
            variant: CirculantVariant::One,
            j,
            j1,
            omega1: 0.0,
            phi,
        }
    }

    pub fn variant2(j: f64, j1: f64, omega1: f64, phi: f64) -> Self {
        CirculantParams {
            variant: CirculantVariant::Two,
            j,
            j1,
            omega1,
            phi,
        }
    }

    /// First row of the circulant matrix; row r is its right cyclic shift by r.
    pub fn first_row(&self) -> [C64; DIM] {
        let ep = C64::from_polar(1.0, self.phi);
        let em = ep.conj();
        let j = C64::new(self.j, 0.0);
        let j1 = C64::new(self.j1, 0.0);
        let omega1 = match self.variant {
            CirculantVariant::One => C64::new(0.0, 0.0),
            CirculantVariant::Two => C64::new(self.omega1, 0.0),
        };
        [
            C64::new(0.0, 0.0),
            j * ep,
            j1 * ep,
            j * em,
            omega1,
            j * ep,
            j1 * em,
            j * em,
        ]
    }
}

/// Per-qubit energy offsets (detunings), rad/ms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffsetParams {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
}

impl OffsetParams {
    pub fn new(delta1: f64, delta2: f64, delta3: f64) -> Self {
        OffsetParams {
            delta1,
            delta2,
            delta3,
        }
    }

    /// Detunings must be pairwise distinct when the offsets prepare the
    /// initial eigenbasis, or the spectrum starts degenerate.
    pub fn pairwise_distinct(&self) -> bool {
        self.delta1 != self.delta2 && self.delta2 != self.delta3 && self.delta1 != self.delta3
    }
}

/// Parameters of the Rabi-controlled Hamiltonian: constant couplings J
/// (trilinear) and J1 (spins 1-2), with Ω2 and Ω3 driving the remaining
/// single-qubit and bilinear terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatingParams {
    pub j: f64,
    pub j1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub phi: f64,
}

/// The full 8×8 matrix with all ten derived phase angles
/// ξ1=φ23+φ32, ξ2=φ13+φ31, ξ3=φ12+φ21, ξ4=φ23-φ32, ξ5=φ13-φ31, ξ6=φ12-φ21,
/// ξ7=φ1+φ2+φ3, ξ8=φ1+φ2-φ3, ξ9=φ1-φ2+φ3, ξ10=φ1-φ2-φ3.
pub fn build_full(p: &FullParams) -> Operator {
    let xi1 = p.phi23 + p.phi32;
    let xi2 = p.phi13 + p.phi31;
    let xi3 = p.phi12 + p.phi21;
    let xi4 = p.phi23 - p.phi32;
    let xi5 = p.phi13 - p.phi31;
    let xi6 = p.phi12 - p.phi21;
    let xi7 = p.phi1 + p.phi2 + p.phi3;
    let xi8 = p.phi1 + p.phi2 - p.phi3;
    let xi9 = p.phi1 - p.phi2 + p.phi3;
    let xi10 = p.phi1 - p.phi2 - p.phi3;

    let amp = |mag: f64, phase: f64| C64::from_polar(mag, phase);
    let o1 = amp(p.omega1, p.theta1);
    let o2 = amp(p.omega2, p.theta2);
    let o3 = amp(p.omega3, p.theta3);

    let mut h = Operator::zero();
    let mut put = |r: usize, c: usize, v: C64| {
        h.entries[r][c] = v;
        h.entries[c][r] = v.conj();
    };

    put(0, 1, o3);
    put(0, 2, o2);
    put(0, 3, amp(p.j2, -xi1));
    put(0, 4, o1);
    put(0, 5, amp(p.j3, -xi2));
    put(0, 6, amp(p.j1, -xi3));
    put(0, 7, amp(p.j, -xi7));

    put(1, 2, amp(p.j2, -xi4));
    put(1, 3, o2);
    put(1, 4, amp(p.j3, -xi5));
    put(1, 5, o1);
    put(1, 6, amp(p.j, -xi8));
    put(1, 7, amp(p.j1, -xi3));

    put(2, 3, o3);
    put(2, 4, amp(p.j1, -xi6));
    put(2, 5, amp(p.j, -xi9));
    put(2, 6, o1);
    put(2, 7, amp(p.j3, -xi2));

    put(3, 4, amp(p.j, -xi10));
    put(3, 5, amp(p.j1, -xi6));
    put(3, 6, amp(p.j3, -xi5));
    put(3, 7, o1);

    put(4, 5, o3);
    put(4, 6, o2);
    put(4, 7, amp(p.j2, -xi1));

    put(5, 6, amp(p.j2, -xi4));
    put(5, 7, o2);

    put(6, 7, o3);

    h
}

/// Circulant Hamiltonian: entry (r, c) = first_row[(c - r) mod 8].
pub fn build_circulant(p: &CirculantParams) -> Operator {
    let row = p.first_row();
    let mut h = Operator::zero();
    for r in 0..DIM {
        for c in 0..DIM {
            h.entries[r][c] = row[(c + DIM - r) % DIM];
        }
    }
    h
}

/// Diagonal energy offset Σ_j Δ_j σ_j^z. Basis index bit b (value 4, 2, 1 for
/// spins 1, 2, 3) contributes +Δ for ↓ (bit clear) and -Δ for ↑ (bit set).
pub fn build_offset(p: &OffsetParams) -> Operator {
    let mut h = Operator::zero();
    for k in 0..DIM {
        let s1 = if k & 4 == 0 { 1.0 } else { -1.0 };
        let s2 = if k & 2 == 0 { 1.0 } else { -1.0 };
        let s3 = if k & 1 == 0 { 1.0 } else { -1.0 };
        h.entries[k][k] = C64::new(s1 * p.delta1 + s2 * p.delta2 + s3 * p.delta3, 0.0);
    }
    h
}

/// The Rabi-controlled Hamiltonian: the full matrix under the circulant phase
/// pattern but with the 2-3 and 1-3 couplings and the σ2/σ3 drives replaced
/// by Ω3(t) and Ω2(t). Equal to the variant-1 circulant when Ω2 = J1, Ω3 = J.
pub fn build_rotating(p: &RotatingParams) -> Operator {
    let full = FullParams {
        j1: p.j1,
        j2: p.omega3,
        j3: p.omega3,
        j: p.j,
        omega1: 0.0,
        omega2: p.omega2,
        omega3: p.omega3,
        theta2: p.phi,
        theta3: p.phi,
        phi32: p.phi,
        phi3: p.phi,
        phi21: p.phi,
        phi31: -p.phi,
        ..Default::default()
    };
    build_full(&full)
}

/// Counter-driving field: -κ̇ on the |↓↓↓⟩↔|↑↓↓⟩ and |↓↓↑⟩↔|↑↓↑⟩ pairs,
/// i.e. entries (0,4), (1,5), (4,0), (5,1).
pub fn build_counter_driving(kappa_rate: f64) -> Operator {
    let mut h = Operator::zero();
    let v = C64::new(-kappa_rate, 0.0);
    h.entries[0][4] = v;
    h.entries[4][0] = v;
    h.entries[1][5] = v;
    h.entries[5][1] = v;
    h
}

/// Check `M[r][c] = M[0][(c-r) mod 8]` for all entries; returns the verdict and
/// the largest deviation found.
pub fn is_circulant(m: &Operator, tol: f64) -> (bool, f64) {
    let mut worst = 0.0f64;
    for r in 0..DIM {
        for c in 0..DIM {
            let d = (m.entries[r][c] - m.entries[0][(c + DIM - r) % DIM]).norm();
            worst = worst.max(d);
        }
    }
    (worst <= tol, worst)
}

/// The cyclic one-step shift permutation; circulant matrices commute with it.
pub fn shift_matrix() -> Operator {
    let mut p = Operator::zero();
    for k in 0..DIM {
        p.entries[k][(k + 1) % DIM] = C64::new(1.0, 0.0);
    }
    p
}
