//! Stabilizer tableau in the destabilizer form, used as an exact oracle for
//! ideal circuit behavior.
//!
//! Rows `0..n` are destabilizers, rows `n..2n` stabilizers. Each row packs
//! its X and Z parts into `u64` masks plus a sign bit (`true` = `-1`). A
//! row with both bits set on a qubit denotes `Y` there.

mod agreement;
mod verify;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{OperationKind, OutcomeLabel, PairKind};
use crate::error::Error;
use crate::pauli::{Basis, Gate1, Gate2, Pauli};

pub use agreement::{frame_tableau_agreement, AgreementMismatch, AgreementReport, FaultLocation};
pub use verify::{
    verify_all, verify_protocol, BranchFailure, Expectation, VerificationReport, Waypoint,
};

/// Signed Pauli string on up to 64 qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    pub n: usize,
    pub x: u64,
    pub z: u64,
    /// `true` for an overall `-1`.
    pub negative: bool,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 64, "at most 64 qubits");
        PauliString {
            n,
            x: 0,
            z: 0,
            negative: false,
        }
    }

    /// Builds `+ P_q1 P_q2 ...` from `(qubit, Pauli)` terms.
    pub fn from_terms(n: usize, terms: &[(usize, Pauli)]) -> Self {
        let mut s = Self::identity(n);
        for &(q, p) in terms {
            s.set(q, p);
        }
        s
    }

    /// The ideal generators of a two-qubit state on `(lo, hi)`.
    pub fn pair_generators(n: usize, lo: usize, hi: usize, kind: PairKind) -> [PauliString; 2] {
        kind.generators()
            .map(|(a, b)| PauliString::from_terms(n, &[(lo, a), (hi, b)]))
    }

    pub fn get(&self, q: usize) -> Pauli {
        assert!(q < self.n, "qubit {q} out of range");
        Pauli::from_bits((self.x >> q) & 1 == 1, (self.z >> q) & 1 == 1)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range");
        let bit = 1u64 << q;
        self.x = (self.x & !bit) | if p.x_bit() { bit } else { 0 };
        self.z = (self.z & !bit) | if p.z_bit() { bit } else { 0 };
    }

    pub fn negated(mut self) -> Self {
        self.negative = !self.negative;
        self
    }

    pub fn with_sign(mut self, negative: bool) -> Self {
        self.negative = negative;
        self
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }
}

/// Sparse rendering, e.g. `+X0 Z5` or `-Y3`.
impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        let mut first = true;
        for q in 0..self.n {
            let p = self.get(q);
            if !p.is_identity() {
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{p}{q}")?;
                first = false;
            }
        }
        if first {
            f.write_str("I")?;
        }
        Ok(())
    }
}

impl PauliString {
    /// Parses the sparse form `[+|-]P<q> P<q> ...` on `n` qubits.
    pub fn parse_sparse(n: usize, s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let mut out = PauliString::identity(n).with_sign(negative);
        for tok in body.split_whitespace() {
            if tok == "I" {
                continue;
            }
            let mut chars = tok.chars();
            let p = chars
                .next()
                .and_then(Pauli::from_symbol)
                .ok_or_else(|| Error::parse(format!("bad term {tok:?}")))?;
            let q: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::parse(format!("bad term {tok:?}")))?;
            if q >= n {
                return Err(Error::parse(format!("term {tok:?} out of range")));
            }
            if !out.get(q).is_identity() {
                return Err(Error::parse(format!("qubit {q} repeated")));
            }
            out.set(q, p);
        }
        Ok(out)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Dense form `[+|-]IXZY...`, one symbol per qubit.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let paulis = body
            .chars()
            .map(|c| {
                Pauli::from_symbol(c).ok_or_else(|| Error::parse(format!("bad Pauli symbol {c:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if paulis.len() > 64 {
            return Err(Error::parse("at most 64 qubits"));
        }
        let mut out = PauliString::identity(paulis.len()).with_sign(negative);
        for (q, p) in paulis.into_iter().enumerate() {
            out.set(q, p);
        }
        Ok(out)
    }
}

/// How a measurement outcome is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeChoice {
    /// Fair coin for random outcomes.
    Random,
    /// Forces a random outcome; forcing a contradicting deterministic
    /// outcome is a contract violation.
    Force(bool),
    /// Like `Force` for random outcomes; deterministic ones are kept.
    Prefer(bool),
}

/// Result of a single-qubit projective measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureResult {
    /// `true` for the `-1` eigenvalue.
    pub outcome: bool,
    pub deterministic: bool,
}

/// Aaronson-Gottesman tableau on `n <= 64` qubits, initialized to `|0...0>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    r: Vec<bool>,
}

/// Phase exponent (mod 4) contributed when left-multiplying qubit factors.
#[inline]
fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 as i32 - x2 as i32,
        (true, false) => z2 as i32 * (2 * x2 as i32 - 1),
        (false, true) => x2 as i32 * (1 - 2 * z2 as i32),
    }
}

impl StabilizerTableau {
    pub fn new(n: usize) -> Self {
        assert!(n <= 64, "at most 64 qubits");
        let mut t = StabilizerTableau {
            n,
            x: vec![0; 2 * n],
            z: vec![0; 2 * n],
            r: vec![false; 2 * n],
        };
        for q in 0..n {
            t.x[q] = 1 << q;
            t.z[n + q] = 1 << q;
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, q: usize) {
        assert!(
            q < self.n,
            "qubit {q} out of range for {}-qubit tableau",
            self.n
        );
    }

    /// Stabilizer generators as signed Pauli strings.
    pub fn stabilizers(&self) -> Vec<PauliString> {
        (self.n..2 * self.n).map(|i| self.row(i)).collect()
    }

    fn row(&self, i: usize) -> PauliString {
        PauliString {
            n: self.n,
            x: self.x[i],
            z: self.z[i],
            negative: self.r[i],
        }
    }

    /// Left-multiplies row `i` into `(hx, hz, hr)`.
    fn rowmul(&self, hx: &mut u64, hz: &mut u64, hr: &mut bool, i: usize) {
        let mut phase = 2 * (*hr as i32) + 2 * (self.r[i] as i32);
        for q in 0..self.n {
            let bit = 1u64 << q;
            phase += g(
                self.x[i] & bit != 0,
                self.z[i] & bit != 0,
                *hx & bit != 0,
                *hz & bit != 0,
            );
        }
        let phase = phase.rem_euclid(4);
        debug_assert!(phase == 0 || phase == 2, "rows must commute");
        *hr = phase == 2;
        *hx ^= self.x[i];
        *hz ^= self.z[i];
    }

    fn rowsum(&mut self, h: usize, i: usize) {
        let (mut hx, mut hz, mut hr) = (self.x[h], self.z[h], self.r[h]);
        self.rowmul(&mut hx, &mut hz, &mut hr, i);
        self.x[h] = hx;
        self.z[h] = hz;
        self.r[h] = hr;
    }

    pub fn h(&mut self, q: usize) {
        self.check(q);
        let bit = 1u64 << q;
        for i in 0..2 * self.n {
            let (xb, zb) = (self.x[i] & bit != 0, self.z[i] & bit != 0);
            self.r[i] ^= xb && zb;
            self.x[i] = (self.x[i] & !bit) | if zb { bit } else { 0 };
            self.z[i] = (self.z[i] & !bit) | if xb { bit } else { 0 };
        }
    }

    pub fn s(&mut self, q: usize) {
        self.check(q);
        let bit = 1u64 << q;
        for i in 0..2 * self.n {
            let (xb, zb) = (self.x[i] & bit != 0, self.z[i] & bit != 0);
            self.r[i] ^= xb && zb;
            if xb {
                self.z[i] ^= bit;
            }
        }
    }

    pub fn s_dag(&mut self, q: usize) {
        self.s(q);
        self.s(q);
        self.s(q);
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        self.check(c);
        self.check(t);
        assert!(c != t, "CNOT on a single qubit");
        let (cb, tb) = (1u64 << c, 1u64 << t);
        for i in 0..2 * self.n {
            let (xc, zc) = (self.x[i] & cb != 0, self.z[i] & cb != 0);
            let (xt, zt) = (self.x[i] & tb != 0, self.z[i] & tb != 0);
            self.r[i] ^= xc && zt && (xt == zc);
            if xc {
                self.x[i] ^= tb;
            }
            if zt {
                self.z[i] ^= cb;
            }
        }
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        self.h(b);
        self.cnot(a, b);
        self.h(b);
    }

    /// Applies a Pauli gate (a sign flip on anticommuting rows).
    pub fn pauli(&mut self, q: usize, p: Pauli) {
        self.check(q);
        let bit = 1u64 << q;
        for i in 0..2 * self.n {
            let (xb, zb) = (self.x[i] & bit != 0, self.z[i] & bit != 0);
            self.r[i] ^= (p.x_bit() && zb) ^ (p.z_bit() && xb);
        }
    }

    pub fn gate1(&mut self, gate: Gate1, q: usize) {
        match gate {
            Gate1::H => self.h(q),
            Gate1::S => self.s(q),
            Gate1::X => self.pauli(q, Pauli::X),
            Gate1::Y => self.pauli(q, Pauli::Y),
            Gate1::Z => self.pauli(q, Pauli::Z),
        }
    }

    pub fn gate2(&mut self, gate: Gate2, a: usize, b: usize) {
        match gate {
            Gate2::Cz => self.cz(a, b),
            Gate2::Cnot => self.cnot(a, b),
        }
    }

    /// Z-basis measurement.
    pub fn measure_z(
        &mut self,
        q: usize,
        choice: OutcomeChoice,
        rng: &mut impl Rng,
    ) -> MeasureResult {
        self.check(q);
        let n = self.n;
        let bit = 1u64 << q;
        if let Some(p) = (n..2 * n).find(|&i| self.x[i] & bit != 0) {
            for i in 0..2 * n {
                if i != p && self.x[i] & bit != 0 {
                    self.rowsum(i, p);
                }
            }
            self.x[p - n] = self.x[p];
            self.z[p - n] = self.z[p];
            self.r[p - n] = self.r[p];
            let outcome = match choice {
                OutcomeChoice::Random => rng.random::<bool>(),
                OutcomeChoice::Force(b) | OutcomeChoice::Prefer(b) => b,
            };
            self.x[p] = 0;
            self.z[p] = bit;
            self.r[p] = outcome;
            MeasureResult {
                outcome,
                deterministic: false,
            }
        } else {
            let (mut hx, mut hz, mut hr) = (0u64, 0u64, false);
            for i in 0..n {
                if self.x[i] & bit != 0 {
                    self.rowmul(&mut hx, &mut hz, &mut hr, i + n);
                }
            }
            if let OutcomeChoice::Force(f) = choice {
                assert_eq!(
                    f, hr,
                    "forced outcome contradicts a deterministic measurement of qubit {q}"
                );
            }
            MeasureResult {
                outcome: hr,
                deterministic: true,
            }
        }
    }

    /// Measurement in any Pauli basis, implemented by rotating to Z.
    pub fn measure(
        &mut self,
        basis: Basis,
        q: usize,
        choice: OutcomeChoice,
        rng: &mut impl Rng,
    ) -> MeasureResult {
        match basis {
            Basis::Z => self.measure_z(q, choice, rng),
            Basis::X => {
                self.h(q);
                let r = self.measure_z(q, choice, rng);
                self.h(q);
                r
            }
            Basis::Y => {
                // H S^dagger maps Y to Z.
                self.s_dag(q);
                self.h(q);
                let r = self.measure_z(q, choice, rng);
                self.h(q);
                self.s(q);
                r
            }
        }
    }

    /// Measures `q` and rotates it back into the `+1` eigenstate of
    /// `basis` with a Pauli correction.
    pub fn reset(&mut self, basis: Basis, q: usize, rng: &mut impl Rng) {
        let r = self.measure(basis, q, OutcomeChoice::Random, rng);
        if r.outcome {
            let flip = match basis {
                Basis::Z => Pauli::X,
                Basis::X | Basis::Y => Pauli::Z,
            };
            self.pauli(q, flip);
        }
    }

    /// True iff `s`, including its sign, is in the stabilizer group.
    pub fn stabilizes(&self, s: &PauliString) -> bool {
        assert_eq!(s.n, self.n, "Pauli string length mismatch");
        let n = self.n;
        if (n..2 * n).any(|i| !self.row(i).commutes_with(s)) {
            return false;
        }
        // s = product of stabilizer rows i where s anticommutes with
        // destabilizer i.
        let (mut hx, mut hz, mut hr) = (0u64, 0u64, false);
        for i in 0..n {
            if !self.row(i).commutes_with(s) {
                self.rowmul(&mut hx, &mut hz, &mut hr, i + n);
            }
        }
        debug_assert!(hx == s.x && hz == s.z);
        hx == s.x && hz == s.z && hr == s.negative
    }

    /// Sign of `s` if `+-s` is a stabilizer, otherwise `None`.
    pub fn sign_of(&self, s: &PauliString) -> Option<bool> {
        let plus = s.with_sign(false);
        if self.stabilizes(&plus) {
            Some(false)
        } else if self.stabilizes(&plus.negated()) {
            Some(true)
        } else {
            None
        }
    }

    /// Rows independent and pairwise commuting, with the symplectic
    /// pairing between destabilizers and stabilizers intact.
    pub fn is_consistent(&self) -> bool {
        let n = self.n;
        for i in 0..2 * n {
            for j in 0..2 * n {
                let commute = self.row(i).commutes_with(&self.row(j));
                let expect_anti = i != j && (i % n == j % n) && (i / n != j / n);
                if commute == expect_anti {
                    return false;
                }
            }
        }
        true
    }

    /// Applies one circuit operation. `choose` picks each measurement
    /// outcome by label; recorded outcomes are written to `record` as bits
    /// indexed by label, and byproducts read `record`.
    pub fn apply(
        &mut self,
        op: &OperationKind,
        choose: &mut dyn FnMut(OutcomeLabel) -> OutcomeChoice,
        record: &mut u64,
        rng: &mut impl Rng,
    ) {
        match op {
            OperationKind::Prepare { basis, q } => self.reset(*basis, *q, rng),
            OperationKind::Entangle2 { kind, a, b } => match kind {
                PairKind::BellPhiPlus => self.cnot(*a, *b),
                PairKind::TwoQubitCluster => self.cz(*a, *b),
            },
            OperationKind::Gate1 { gate, q } => self.gate1(*gate, *q),
            OperationKind::Gate2 { gate, a, b } => self.gate2(*gate, *a, *b),
            OperationKind::Measure { basis, q, label } => {
                let r = self.measure(*basis, *q, choose(*label), rng);
                set_bit(record, label.0, r.outcome);
            }
            OperationKind::MeasurePair {
                a,
                b,
                label_a,
                label_b,
            } => {
                let ra = self.measure_z(*a, choose(*label_a), rng);
                set_bit(record, label_a.0, ra.outcome);
                let rb = self.measure_z(*b, choose(*label_b), rng);
                set_bit(record, label_b.0, rb.outcome);
            }
            OperationKind::Byproduct {
                pauli,
                target,
                condition,
            } => {
                if condition.evaluate(*record) {
                    self.pauli(*target, *pauli);
                }
            }
        }
    }
}

fn set_bit(record: &mut u64, bit: u8, value: bool) {
    if value {
        *record |= 1 << bit;
    } else {
        *record &= !(1 << bit);
    }
}
