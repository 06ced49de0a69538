//! Phase-free Pauli algebra.
//!
//! A single-qubit Pauli is stored as its symplectic bits `(x, z)`:
//! `I = 00`, `X = 10`, `Z = 01`, `Y = 11`. Composition is bitwise XOR and
//! global phases are discarded throughout, which is exact for error
//! tracking because only commutation with measurement bases and output
//! stabilizers is ever observed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Single-qubit Pauli operator modulo phase.
///
/// The discriminant packs the symplectic bits: bit 0 is `x`, bit 1 is `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[repr(u8)]
pub enum Pauli {
    #[default]
    I = 0b00,
    X = 0b01,
    Z = 0b10,
    Y = 0b11,
}

/// Single-qubit measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

/// Single-qubit Clifford gates that appear in the protocol circuits.
///
/// `X`, `Y`, `Z` act trivially on a phase-free frame; they are listed so
/// byproduct Paulis and explicit Pauli gates share one conjugation path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate1 {
    H,
    S,
    X,
    Y,
    Z,
}

/// Two-qubit Clifford gates. For `Cnot` the first operand is the control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate2 {
    Cz,
    Cnot,
}

impl Pauli {
    /// All four operators in the canonical order `I < X < Y < Z`.
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    /// The three non-identity operators in canonical order.
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    #[inline]
    pub const fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }

    #[inline]
    const fn from_code(code: u8) -> Pauli {
        match code & 0b11 {
            0b00 => Pauli::I,
            0b01 => Pauli::X,
            0b10 => Pauli::Z,
            _ => Pauli::Y,
        }
    }

    #[inline]
    pub const fn x_bit(self) -> bool {
        (self as u8) & 0b01 != 0
    }

    #[inline]
    pub const fn z_bit(self) -> bool {
        (self as u8) & 0b10 != 0
    }

    #[inline]
    pub const fn is_identity(self) -> bool {
        matches!(self, Pauli::I)
    }

    /// Product modulo phase.
    #[inline]
    pub const fn compose(self, other: Pauli) -> Pauli {
        Pauli::from_code(self as u8 ^ other as u8)
    }

    /// True iff the two operators anticommute.
    #[inline]
    pub const fn anticommutes_with(self, other: Pauli) -> bool {
        (self.x_bit() & other.z_bit()) ^ (self.z_bit() & other.x_bit())
    }

    /// Position in the canonical order `I=0, X=1, Y=2, Z=3`.
    #[inline]
    pub const fn order_index(self) -> usize {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    /// Inverse of [`Pauli::order_index`].
    pub const fn from_order_index(i: usize) -> Pauli {
        Pauli::ALL[i & 3]
    }

    pub const fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Pauli> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// The Pauli whose eigenbasis is `basis`.
    pub const fn of_basis(basis: Basis) -> Pauli {
        match basis {
            Basis::X => Pauli::X,
            Basis::Y => Pauli::Y,
            Basis::Z => Pauli::Z,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.trim().chars();
        match (chars.next().and_then(Pauli::from_symbol), chars.next()) {
            (Some(p), None) => Ok(p),
            _ => Err(Error::parse(format!("not a Pauli symbol: {s:?}"))),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Pauli::of_basis(*self).fmt(f)
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "X" => Ok(Basis::X),
            "Y" => Ok(Basis::Y),
            "Z" => Ok(Basis::Z),
            _ => Err(Error::parse(format!("not a measurement basis: {s:?}"))),
        }
    }
}

impl fmt::Display for Gate1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gate1::H => "H",
            Gate1::S => "S",
            Gate1::X => "X",
            Gate1::Y => "Y",
            Gate1::Z => "Z",
        })
    }
}

impl FromStr for Gate1 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "H" => Ok(Gate1::H),
            "S" => Ok(Gate1::S),
            "X" => Ok(Gate1::X),
            "Y" => Ok(Gate1::Y),
            "Z" => Ok(Gate1::Z),
            _ => Err(Error::parse(format!("unknown single-qubit gate: {s:?}"))),
        }
    }
}

impl fmt::Display for Gate2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gate2::Cz => "CZ",
            Gate2::Cnot => "CNOT",
        })
    }
}

impl FromStr for Gate2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "CZ" => Ok(Gate2::Cz),
            "CNOT" | "CX" => Ok(Gate2::Cnot),
            _ => Err(Error::parse(format!("unknown two-qubit gate: {s:?}"))),
        }
    }
}

/// `U P U^dagger` modulo phase for a single-qubit Clifford `U`.
#[inline]
pub const fn conjugate_1q(p: Pauli, gate: Gate1) -> Pauli {
    match gate {
        // X <-> Z, Y fixed.
        Gate1::H => Pauli::from_bits(p.z_bit(), p.x_bit()),
        // X -> Y, Y -> X, Z fixed.
        Gate1::S => Pauli::from_bits(p.x_bit(), p.z_bit() ^ p.x_bit()),
        Gate1::X | Gate1::Y | Gate1::Z => p,
    }
}

/// `U (a (x) b) U^dagger` modulo phase for a two-qubit Clifford `U`.
#[inline]
pub const fn conjugate_2q(a: Pauli, b: Pauli, gate: Gate2) -> (Pauli, Pauli) {
    let (xa, za, xb, zb) = (a.x_bit(), a.z_bit(), b.x_bit(), b.z_bit());
    match gate {
        // X_a -> X_a Z_b, X_b -> Z_a X_b.
        Gate2::Cz => (Pauli::from_bits(xa, za ^ xb), Pauli::from_bits(xb, zb ^ xa)),
        // X_c -> X_c X_t, Z_t -> Z_c Z_t.
        Gate2::Cnot => (Pauli::from_bits(xa, za ^ zb), Pauli::from_bits(xb ^ xa, zb)),
    }
}

/// True iff `p` anticommutes with the eigenbasis operator of `basis`,
/// i.e. iff `p` flips a readout in that basis.
#[inline]
pub const fn anticommutes(p: Pauli, basis: Basis) -> bool {
    p.anticommutes_with(Pauli::of_basis(basis))
}

/// Ordered two-qubit Pauli on an output pair. Slots follow ascending
/// qubit index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PauliPair {
    pub first: Pauli,
    pub second: Pauli,
}

impl PauliPair {
    pub const IDENTITY: PauliPair = PauliPair::new(Pauli::I, Pauli::I);

    pub const fn new(first: Pauli, second: Pauli) -> Self {
        PauliPair { first, second }
    }

    /// Class index `4 * first + second` under the order `I < X < Y < Z`.
    #[inline]
    pub const fn index(self) -> usize {
        4 * self.first.order_index() + self.second.order_index()
    }

    pub const fn from_index(i: usize) -> Self {
        PauliPair::new(Pauli::from_order_index(i >> 2), Pauli::from_order_index(i))
    }

    /// All sixteen pairs in class-index order.
    pub fn all() -> impl Iterator<Item = PauliPair> {
        (0..16).map(PauliPair::from_index)
    }

    #[inline]
    pub const fn compose(self, other: PauliPair) -> PauliPair {
        PauliPair::new(
            self.first.compose(other.first),
            self.second.compose(other.second),
        )
    }

    pub const fn is_identity(self) -> bool {
        self.first.is_identity() && self.second.is_identity()
    }

    /// True iff the two-qubit operators anticommute.
    pub const fn anticommutes_with(self, other: PauliPair) -> bool {
        self.first.anticommutes_with(other.first) ^ self.second.anticommutes_with(other.second)
    }
}

impl fmt::Display for PauliPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.first, self.second)
    }
}

impl FromStr for PauliPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars().map(Pauli::from_symbol);
        match (chars.next(), chars.next(), chars.next()) {
            (Some(Some(a)), Some(Some(b)), None) => Ok(PauliPair::new(a, b)),
            _ => Err(Error::parse(format!("not a two-qubit Pauli: {s:?}"))),
        }
    }
}

/// Phase-free Pauli frame on up to 64 qubits, stored as two bitmasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliFrame {
    x: u64,
    z: u64,
    len: usize,
}

impl PauliFrame {
    pub const MAX_QUBITS: usize = 64;

    /// The identity frame on `len` qubits.
    pub fn identity(len: usize) -> Self {
        assert!(
            len <= Self::MAX_QUBITS,
            "frame length {len} exceeds {}",
            Self::MAX_QUBITS
        );
        PauliFrame { x: 0, z: 0, len }
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let mut frame = Self::identity(paulis.len());
        for (q, &p) in paulis.iter().enumerate() {
            frame.set(q, p);
        }
        frame
    }

    pub const fn len(&self) -> usize {
        self.len
    }

    pub const fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub const fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Bitmask of qubits carrying a non-identity Pauli.
    pub const fn support(&self) -> u64 {
        self.x | self.z
    }

    #[inline]
    fn check(&self, q: usize) {
        assert!(
            q < self.len,
            "qubit {q} out of range for frame of length {}",
            self.len
        );
    }

    #[inline]
    pub fn get(&self, q: usize) -> Pauli {
        self.check(q);
        Pauli::from_bits((self.x >> q) & 1 == 1, (self.z >> q) & 1 == 1)
    }

    #[inline]
    pub fn set(&mut self, q: usize, p: Pauli) {
        self.check(q);
        let bit = 1u64 << q;
        self.x = (self.x & !bit) | if p.x_bit() { bit } else { 0 };
        self.z = (self.z & !bit) | if p.z_bit() { bit } else { 0 };
    }

    /// Multiplies `p` onto qubit `q`.
    #[inline]
    pub fn apply(&mut self, q: usize, p: Pauli) {
        self.check(q);
        if p.x_bit() {
            self.x ^= 1 << q;
        }
        if p.z_bit() {
            self.z ^= 1 << q;
        }
    }

    /// Multiplies `pair` onto qubits `(a, b)` in that slot order.
    #[inline]
    pub fn apply_pair(&mut self, a: usize, b: usize, pair: PauliPair) {
        self.apply(a, pair.first);
        self.apply(b, pair.second);
    }

    #[inline]
    pub fn conjugate_1q(&mut self, q: usize, gate: Gate1) {
        let p = self.get(q);
        self.set(q, conjugate_1q(p, gate));
    }

    #[inline]
    pub fn conjugate_2q(&mut self, a: usize, b: usize, gate: Gate2) {
        assert!(a != b, "two-qubit gate on a single qubit {a}");
        let (pa, pb) = conjugate_2q(self.get(a), self.get(b), gate);
        self.set(a, pa);
        self.set(b, pb);
    }

    /// Composes two frames of equal length.
    pub fn compose(&self, other: &PauliFrame) -> PauliFrame {
        assert_eq!(self.len, other.len, "frame length mismatch");
        PauliFrame {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            len: self.len,
        }
    }

    pub fn pair(&self, a: usize, b: usize) -> PauliPair {
        PauliPair::new(self.get(a), self.get(b))
    }
}

impl fmt::Display for PauliFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.len {
            write!(f, "{}", self.get(q))?;
        }
        Ok(())
    }
}
