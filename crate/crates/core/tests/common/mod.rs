//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls into the symplectic code under test: Clifford
//! conjugation is recomputed with dense complex matrices and sampler checks
//! use a chi-square bound derived from first principles.

#![allow(dead_code)]

use mqnc::circuit::CircuitStats;
use mqnc::pauli::{Gate1, Gate2, Pauli};
use num_complex::Complex64 as C;

pub type M2 = [[C; 2]; 2];
pub type M4 = [[C; 4]; 4];

const O: C = C { re: 0.0, im: 0.0 };
const ONE: C = C { re: 1.0, im: 0.0 };
const I: C = C { re: 0.0, im: 1.0 };

pub fn pauli_matrix(p: Pauli) -> M2 {
    match p {
        Pauli::I => [[ONE, O], [O, ONE]],
        Pauli::X => [[O, ONE], [ONE, O]],
        Pauli::Y => [[O, -I], [I, O]],
        Pauli::Z => [[ONE, O], [O, -ONE]],
    }
}

pub fn gate1_matrix(g: Gate1) -> M2 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match g {
        Gate1::H => [
            [C::new(h, 0.0), C::new(h, 0.0)],
            [C::new(h, 0.0), C::new(-h, 0.0)],
        ],
        Gate1::S => [[ONE, O], [O, I]],
        Gate1::X => pauli_matrix(Pauli::X),
        Gate1::Y => pauli_matrix(Pauli::Y),
        Gate1::Z => pauli_matrix(Pauli::Z),
    }
}

/// Basis order `|ab>` with `a` the high bit; CNOT controls on `a`.
pub fn gate2_matrix(g: Gate2) -> M4 {
    let mut m = [[O; 4]; 4];
    match g {
        Gate2::Cz => {
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = if i == 3 { -ONE } else { ONE };
            }
        }
        Gate2::Cnot => {
            m[0][0] = ONE;
            m[1][1] = ONE;
            m[2][3] = ONE;
            m[3][2] = ONE;
        }
    }
    m
}

pub fn kron(a: &M2, b: &M2) -> M4 {
    let mut m = [[O; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = a[i >> 1][j >> 1] * b[i & 1][j & 1];
        }
    }
    m
}

fn mul<const N: usize>(a: &[[C; N]; N], b: &[[C; N]; N]) -> [[C; N]; N] {
    let mut m = [[O; N]; N];
    for i in 0..N {
        for j in 0..N {
            m[i][j] = (0..N).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

fn dagger<const N: usize>(a: &[[C; N]; N]) -> [[C; N]; N] {
    let mut m = [[O; N]; N];
    for i in 0..N {
        for j in 0..N {
            m[i][j] = a[j][i].conj();
        }
    }
    m
}

/// `U P U^dagger`.
pub fn conjugate<const N: usize>(u: &[[C; N]; N], p: &[[C; N]; N]) -> [[C; N]; N] {
    mul(&mul(u, p), &dagger(u))
}

/// True iff `a = c b` for a unit-modulus scalar `c`.
pub fn equal_up_to_phase<const N: usize>(a: &[[C; N]; N], b: &[[C; N]; N]) -> bool {
    let mut phase = None;
    for i in 0..N {
        for j in 0..N {
            let (x, y) = (a[i][j], b[i][j]);
            if y.norm() < 1e-9 {
                if x.norm() > 1e-9 {
                    return false;
                }
                continue;
            }
            let c = x / y;
            match phase {
                None => phase = Some(c),
                Some(p) => {
                    if (c - p).norm() > 1e-9 {
                        return false;
                    }
                }
            }
        }
    }
    phase.is_some_and(|p: C| (p.norm() - 1.0).abs() < 1e-9)
}

/// Single-qubit Pauli equal (up to phase) to `m`, if any.
pub fn identify_1q(m: &M2) -> Option<Pauli> {
    Pauli::ALL
        .into_iter()
        .find(|&p| equal_up_to_phase(m, &pauli_matrix(p)))
}

/// Two-qubit Pauli equal (up to phase) to `m`, if any.
pub fn identify_2q(m: &M4) -> Option<(Pauli, Pauli)> {
    Pauli::ALL
        .into_iter()
        .flat_map(|a| Pauli::ALL.map(|b| (a, b)))
        .find(|&(a, b)| equal_up_to_phase(m, &kron(&pauli_matrix(a), &pauli_matrix(b))))
}

/// Upper chi-square quantile at `z` standard deviations (Wilson-Hilferty).
pub fn chi_square_bound(df: f64, z: f64) -> f64 {
    let c = 2.0 / (9.0 * df);
    df * (1.0 - c + z * c.sqrt()).powi(3)
}

/// Pearson statistic of `counts` against equal expected frequencies.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let n: u64 = counts.iter().sum();
    let e = n as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum()
}

/// Expected resource counts, in MQNC, QNC, ES, ESP order.
pub const EXPECTED_STATS: [CircuitStats; 4] = [
    CircuitStats {
        qubits: 14,
        entangling_ops: 7,
        single_qubit_gates: 14,
        byproduct_count: 14,
        two_qubit_gates: 8,
        measurements: 10,
        depth: 10,
        kq: 140,
    },
    CircuitStats {
        qubits: 14,
        entangling_ops: 7,
        single_qubit_gates: 16,
        byproduct_count: 11,
        two_qubit_gates: 8,
        measurements: 10,
        depth: 23,
        kq: 322,
    },
    CircuitStats {
        qubits: 12,
        entangling_ops: 6,
        single_qubit_gates: 12,
        byproduct_count: 8,
        two_qubit_gates: 4,
        measurements: 4,
        depth: 12,
        kq: 144,
    },
    CircuitStats {
        qubits: 12,
        entangling_ops: 6,
        single_qubit_gates: 8,
        byproduct_count: 4,
        two_qubit_gates: 4,
        measurements: 4,
        depth: 6,
        kq: 72,
    },
];
