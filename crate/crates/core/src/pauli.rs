//! Signed Pauli strings in symplectic (x, z) bit form.
//!
//! Qubits are labelled 1..=n. Qubit `k` is stored in bit `k - 1` of the
//! `x`/`z` masks. The basis index used for coverage-matrix columns is the
//! base-4 number with digits (I, X, Y, Z) = (0, 1, 2, 3), qubit 1 being the
//! most significant digit, offset by one (the identity is index 1).

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest register for which basis indices fit in a `u64`.
pub const MAX_QUBITS: usize = 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Digit in the base-4 basis ordering.
    pub fn digit(self) -> u64 {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    pub fn from_digit(d: u64) -> Pauli {
        Pauli::ALL[(d & 3) as usize]
    }

    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    pub fn from_value(v: i8) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

/// A product of single-qubit Pauli factors with a real sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x_bits: u64,
    z_bits: u64,
    sign: Sign,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::range(format!(
            "qubit count {n} outside [1, {MAX_QUBITS}]"
        )));
    }
    Ok(())
}

impl PauliString {
    /// The identity on `n` qubits.
    pub fn identity(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(PauliString {
            n,
            x_bits: 0,
            z_bits: 0,
            sign: Sign::Plus,
        })
    }

    /// Builds a string from factors listed for qubits 1..=n.
    pub fn from_factors(factors: &[Pauli], sign: Sign) -> Result<Self> {
        check_qubits(factors.len())?;
        let mut p = PauliString::identity(factors.len())?;
        for (i, &f) in factors.iter().enumerate() {
            p.set_factor(i + 1, f);
        }
        p.sign = sign;
        Ok(p)
    }

    /// Decodes a 1-based basis index.
    pub fn from_index(n: usize, idx: u64) -> Result<Self> {
        check_qubits(n)?;
        let count = 1u64 << (2 * n);
        if idx == 0 || idx > count {
            return Err(Error::range(format!(
                "Pauli index {idx} outside [1, {count}] for n = {n}"
            )));
        }
        let mut rest = idx - 1;
        let mut p = PauliString::identity(n)?;
        for q in (1..=n).rev() {
            p.set_factor(q, Pauli::from_digit(rest & 3));
            rest >>= 2;
        }
        Ok(p)
    }

    /// 1-based basis index, ignoring the sign.
    pub fn index(&self) -> u64 {
        (1..=self.n).fold(0u64, |acc, q| acc * 4 + self.factor(q).digit()) + 1
    }

    /// The diagonal operator with Z on every qubit whose bit is set in `mask`.
    /// Qubit 1 corresponds to the most significant of the `n` bits, so
    /// `mask` enumerates {I, Z}^n in basis order.
    pub fn z_string(n: usize, mask: u64) -> Result<Self> {
        let mut p = PauliString::identity(n)?;
        for q in 1..=n {
            if (mask >> (n - q)) & 1 == 1 {
                p.set_factor(q, Pauli::Z);
            }
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn x_bits(&self) -> u64 {
        self.x_bits
    }

    pub fn z_bits(&self) -> u64 {
        self.z_bits
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    /// Factor on qubit `q` (1-based).
    pub fn factor(&self, q: usize) -> Pauli {
        debug_assert!(q >= 1 && q <= self.n);
        let bit = 1u64 << (q - 1);
        Pauli::from_bits(self.x_bits & bit != 0, self.z_bits & bit != 0)
    }

    pub fn set_factor(&mut self, q: usize, p: Pauli) {
        debug_assert!(q >= 1 && q <= self.n);
        let bit = 1u64 << (q - 1);
        let (x, z) = p.bits();
        self.x_bits = (self.x_bits & !bit) | if x { bit } else { 0 };
        self.z_bits = (self.z_bits & !bit) | if z { bit } else { 0 };
    }

    pub fn factors(&self) -> Vec<Pauli> {
        (1..=self.n).map(|q| self.factor(q)).collect()
    }

    /// Number of qubits carrying X or Y.
    pub fn xy_weight(&self) -> u32 {
        self.x_bits.count_ones()
    }

    /// Unsigned label such as `"IXZ"`.
    pub fn label(&self) -> String {
        (1..=self.n).map(|q| self.factor(q).symbol()).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "{s}{}", self.label())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `"XYZ"`, `"+XYZ"` or `"-XYZ"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, body) = match s.chars().next() {
            Some('-') => (Sign::Minus, &s[1..]),
            Some('+') => (Sign::Plus, &s[1..]),
            _ => (Sign::Plus, s),
        };
        let factors = body
            .chars()
            .enumerate()
            .map(|(i, c)| {
                Pauli::from_symbol(c)
                    .ok_or_else(|| Error::parse(1, i + 1, format!("unexpected character {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PauliString::from_factors(&factors, sign)
    }
}
