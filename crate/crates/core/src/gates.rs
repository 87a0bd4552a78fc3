//! Readout gates, measurement settings and their Pauli conjugation rules.
//!
//! Rotation convention: `R_a(theta) = exp(-i theta/2 sigma_a)`, so `RotX` is
//! `exp(-i pi/4 sigma_x)`. The two-qubit gates are `YY = exp(-i pi/4 Y(k)Y(l))`
//! and `XY = exp(-i pi/4 X(k)Y(l))` on the ordered pair `(k, l)`.
//!
//! Conjugation is looked up in fixed tables giving `U^dagger P U`. The
//! tables are cross-checked against dense matrices in the test suite.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Id,
    RotX,
    RotY,
    /// `exp(-i pi/4 sigma_z)`
    RotZPos,
    /// `exp(+i pi/4 sigma_z)`
    RotZNeg,
    /// `exp(-i pi/2 sigma_y)`
    RotYPi,
    /// `exp(+i pi/2 sigma_y)`
    RotYMinusPi,
    YY,
    XY,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl GateKind {
    pub const SINGLE: [GateKind; 7] = [
        GateKind::Id,
        GateKind::RotX,
        GateKind::RotY,
        GateKind::RotZPos,
        GateKind::RotZNeg,
        GateKind::RotYPi,
        GateKind::RotYMinusPi,
    ];

    pub fn is_two_qubit(self) -> bool {
        matches!(self, GateKind::YY | GateKind::XY)
    }

    /// Kinds allowed inside a measurement setting.
    pub fn is_readout(self) -> bool {
        matches!(
            self,
            GateKind::Id | GateKind::RotX | GateKind::RotY | GateKind::YY | GateKind::XY
        )
    }

    /// Rotation axis and angle for single-qubit kinds other than `Id`.
    pub fn rotation(self) -> Option<(Axis, f64)> {
        use std::f64::consts::{FRAC_PI_2, PI};
        match self {
            GateKind::RotX => Some((Axis::X, FRAC_PI_2)),
            GateKind::RotY => Some((Axis::Y, FRAC_PI_2)),
            GateKind::RotZPos => Some((Axis::Z, FRAC_PI_2)),
            GateKind::RotZNeg => Some((Axis::Z, -FRAC_PI_2)),
            GateKind::RotYPi => Some((Axis::Y, PI)),
            GateKind::RotYMinusPi => Some((Axis::Y, -PI)),
            GateKind::Id | GateKind::YY | GateKind::XY => None,
        }
    }

    /// Short code used in catalog files.
    pub fn code(self) -> &'static str {
        match self {
            GateKind::Id => "ID",
            GateKind::RotX => "RX",
            GateKind::RotY => "RY",
            GateKind::RotZPos => "RZ+",
            GateKind::RotZNeg => "RZ-",
            GateKind::RotYPi => "RY+PI",
            GateKind::RotYMinusPi => "RY-PI",
            GateKind::YY => "YY",
            GateKind::XY => "XY",
        }
    }

    pub fn from_code(code: &str) -> Option<GateKind> {
        Some(match code {
            "ID" => GateKind::Id,
            "RX" => GateKind::RotX,
            "RY" => GateKind::RotY,
            "RZ+" => GateKind::RotZPos,
            "RZ-" => GateKind::RotZNeg,
            "RY+PI" => GateKind::RotYPi,
            "RY-PI" => GateKind::RotYMinusPi,
            "YY" => GateKind::YY,
            "XY" => GateKind::XY,
            _ => return None,
        })
    }

    fn table_row(self) -> usize {
        match self {
            GateKind::Id => 0,
            GateKind::RotX => 1,
            GateKind::RotY => 2,
            GateKind::RotZPos => 3,
            GateKind::RotZNeg => 4,
            GateKind::RotYPi | GateKind::RotYMinusPi => 5,
            GateKind::YY | GateKind::XY => unreachable!("two-qubit kind has no single-qubit row"),
        }
    }
}

use Pauli::{I, X, Y, Z};
use Sign::{Minus as M, Plus as P};

// U^dagger p U for p in (I, X, Y, Z).
const SINGLE_TABLE: [[(Pauli, Sign); 4]; 6] = [
    [(I, P), (X, P), (Y, P), (Z, P)],
    [(I, P), (X, P), (Z, M), (Y, P)],
    [(I, P), (Z, P), (Y, P), (X, M)],
    [(I, P), (Y, M), (X, P), (Z, P)],
    [(I, P), (Y, P), (X, M), (Z, P)],
    [(I, P), (X, M), (Y, P), (Z, M)],
];

// U^dagger (a (x) b) U indexed by 4 * digit(a) + digit(b).
const YY_TABLE: [(Pauli, Pauli, Sign); 16] = [
    (I, I, P),
    (Y, Z, P),
    (I, Y, P),
    (Y, X, M),
    (Z, Y, P),
    (X, X, P),
    (Z, I, P),
    (X, Z, P),
    (Y, I, P),
    (I, Z, P),
    (Y, Y, P),
    (I, X, M),
    (X, Y, M),
    (Z, X, P),
    (X, I, M),
    (Z, Z, P),
];

const XY_TABLE: [(Pauli, Pauli, Sign); 16] = [
    (I, I, P),
    (X, Z, P),
    (I, Y, P),
    (X, X, M),
    (X, I, P),
    (I, Z, P),
    (X, Y, P),
    (I, X, M),
    (Z, Y, M),
    (Y, X, P),
    (Z, I, M),
    (Y, Z, P),
    (Y, Y, P),
    (Z, X, P),
    (Y, I, P),
    (Z, Z, P),
];

/// `U^dagger p U` for a single-qubit gate kind.
pub fn conjugate_single(kind: GateKind, p: Pauli) -> Result<(Pauli, Sign)> {
    if kind.is_two_qubit() {
        return Err(Error::contract(format!(
            "{} is not a single-qubit gate",
            kind.code()
        )));
    }
    Ok(SINGLE_TABLE[kind.table_row()][p.digit() as usize])
}

/// `U^dagger (a (x) b) U` for `YY` or `XY` acting on the ordered pair.
pub fn conjugate_pair(kind: GateKind, a: Pauli, b: Pauli) -> Result<(Pauli, Pauli, Sign)> {
    let idx = (4 * a.digit() + b.digit()) as usize;
    match kind {
        GateKind::YY => Ok(YY_TABLE[idx]),
        GateKind::XY => Ok(XY_TABLE[idx]),
        _ => Err(Error::contract(format!(
            "{} is not a two-qubit gate",
            kind.code()
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Targets {
    One(usize),
    Pair(usize, usize),
}

/// A gate from the readout gate set placed on specific qubits (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReadoutGate {
    kind: GateKind,
    targets: Targets,
}

impl ReadoutGate {
    pub fn single(kind: GateKind, qubit: usize) -> Result<Self> {
        if kind.is_two_qubit() {
            return Err(Error::contract(format!(
                "{} needs two qubits",
                kind.code()
            )));
        }
        if qubit == 0 {
            return Err(Error::range("qubit labels start at 1"));
        }
        Ok(ReadoutGate {
            kind,
            targets: Targets::One(qubit),
        })
    }

    pub fn pair(kind: GateKind, k: usize, l: usize) -> Result<Self> {
        if !kind.is_two_qubit() {
            return Err(Error::contract(format!(
                "{} acts on a single qubit",
                kind.code()
            )));
        }
        if k == 0 || l == 0 {
            return Err(Error::range("qubit labels start at 1"));
        }
        if k == l {
            return Err(Error::range(format!("pair ({k}, {l}) is not distinct")));
        }
        Ok(ReadoutGate {
            kind,
            targets: Targets::Pair(k, l),
        })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> Targets {
        self.targets
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self.targets {
            Targets::One(q) => vec![q],
            Targets::Pair(k, l) => vec![k, l],
        }
    }

    fn first_qubit(&self) -> usize {
        match self.targets {
            Targets::One(q) => q,
            Targets::Pair(k, l) => k.min(l),
        }
    }
}

impl fmt::Display for ReadoutGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.targets) {
            (GateKind::Id, Targets::One(q)) => write!(f, "Id{q}"),
            (GateKind::RotX, Targets::One(q)) => write!(f, "Rx{q}"),
            (GateKind::RotY, Targets::One(q)) => write!(f, "Ry{q}"),
            (kind, Targets::One(q)) => write!(f, "{}{q}", kind.code()),
            (kind, Targets::Pair(k, l)) => write!(f, "{}{k}-{l}", kind.code()),
        }
    }
}

/// A readout operation applied to every qubit before Z-basis measurement.
///
/// Every qubit is acted on by exactly one gate (identity included) and at
/// most one gate is a two-qubit `YY`/`XY`. Gates are kept sorted by their
/// lowest qubit so equal settings compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MeasurementSetting {
    n: usize,
    gates: Vec<ReadoutGate>,
}

impl MeasurementSetting {
    pub fn new(n: usize, mut gates: Vec<ReadoutGate>) -> Result<Self> {
        if n == 0 || n > crate::pauli::MAX_QUBITS {
            return Err(Error::range(format!("qubit count {n} out of range")));
        }
        let mut seen = vec![false; n + 1];
        let mut pairs = 0;
        for g in &gates {
            if !g.kind.is_readout() {
                return Err(Error::contract(format!(
                    "{} is not a readout gate",
                    g.kind.code()
                )));
            }
            if g.kind.is_two_qubit() {
                pairs += 1;
            }
            for q in g.qubits() {
                if q == 0 || q > n {
                    return Err(Error::range(format!("qubit {q} outside [1, {n}]")));
                }
                if seen[q] {
                    return Err(Error::contract(format!("qubit {q} appears twice")));
                }
                seen[q] = true;
            }
        }
        if pairs > 1 {
            return Err(Error::contract("at most one two-qubit gate per setting"));
        }
        if let Some(q) = (1..=n).find(|&q| !seen[q]) {
            return Err(Error::contract(format!("qubit {q} has no gate")));
        }
        gates.sort_by_key(ReadoutGate::first_qubit);
        Ok(MeasurementSetting { n, gates })
    }

    /// Identity on every qubit.
    pub fn identity(n: usize) -> Result<Self> {
        let gates = (1..=n)
            .map(|q| ReadoutGate::single(GateKind::Id, q))
            .collect::<Result<_>>()?;
        MeasurementSetting::new(n, gates)
    }

    /// Builds a setting from per-qubit local kinds plus an optional pair gate.
    /// Entries of `locals` for the pair's qubits are ignored.
    pub fn from_parts(
        n: usize,
        locals: &[GateKind],
        pair: Option<(GateKind, usize, usize)>,
    ) -> Result<Self> {
        if locals.len() != n {
            return Err(Error::contract(format!(
                "expected {n} local gates, got {}",
                locals.len()
            )));
        }
        let mut gates = Vec::with_capacity(n);
        let mut skip = (0, 0);
        if let Some((kind, k, l)) = pair {
            gates.push(ReadoutGate::pair(kind, k, l)?);
            skip = (k, l);
        }
        for (i, &kind) in locals.iter().enumerate() {
            let q = i + 1;
            if q != skip.0 && q != skip.1 {
                gates.push(ReadoutGate::single(kind, q)?);
            }
        }
        MeasurementSetting::new(n, gates)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[ReadoutGate] {
        &self.gates
    }

    /// The two-qubit gate, if any.
    pub fn pair_gate(&self) -> Option<&ReadoutGate> {
        self.gates.iter().find(|g| g.kind.is_two_qubit())
    }

    /// Gates other than identities.
    pub fn active_gates(&self) -> impl Iterator<Item = &ReadoutGate> {
        self.gates.iter().filter(|g| g.kind != GateKind::Id)
    }

    /// Compact label such as `"Rx1 YY2-3"`; `"Id"` for the all-identity setting.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.active_gates().map(|g| g.to_string()).collect();
        if parts.is_empty() {
            "Id".to_string()
        } else {
            parts.join(" ")
        }
    }

    /// Inverse of [`label`](Self::label). Qubits not named get `Id`.
    pub fn from_label(n: usize, label: &str) -> Result<Self> {
        let mut gates = Vec::new();
        let tokens: Vec<&str> = label.split_whitespace().collect();
        if tokens != ["Id"] {
            for tok in tokens {
                let bad = || Error::contract(format!("unrecognised gate {tok:?}"));
                let (kind, rest) = match tok.get(..2) {
                    Some("Rx") => (GateKind::RotX, &tok[2..]),
                    Some("Ry") => (GateKind::RotY, &tok[2..]),
                    Some("YY") => (GateKind::YY, &tok[2..]),
                    Some("XY") => (GateKind::XY, &tok[2..]),
                    _ => return Err(bad()),
                };
                let gate = if kind.is_two_qubit() {
                    let (k, l) = rest.split_once('-').ok_or_else(bad)?;
                    ReadoutGate::pair(kind, k.parse().map_err(|_| bad())?, l.parse().map_err(|_| bad())?)?
                } else {
                    ReadoutGate::single(kind, rest.parse().map_err(|_| bad())?)?
                };
                gates.push(gate);
            }
        }
        let mut used = vec![false; n + 1];
        for q in gates.iter().flat_map(ReadoutGate::qubits) {
            if q <= n {
                used[q] = true;
            }
        }
        for q in (1..=n).filter(|&q| !used[q]) {
            gates.push(ReadoutGate::single(GateKind::Id, q)?);
        }
        MeasurementSetting::new(n, gates)
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `M^dagger p M` for a whole setting.
pub fn conjugate_setting(m: &MeasurementSetting, p: &PauliString) -> Result<PauliString> {
    if m.n() != p.n() {
        return Err(Error::contract(format!(
            "setting on {} qubits applied to Pauli on {}",
            m.n(),
            p.n()
        )));
    }
    let mut out = *p;
    let mut sign = p.sign();
    for g in m.gates() {
        match g.targets() {
            Targets::One(q) => {
                let (f, s) = conjugate_single(g.kind(), p.factor(q))?;
                out.set_factor(q, f);
                sign = sign * s;
            }
            Targets::Pair(k, l) => {
                let (a, b, s) = conjugate_pair(g.kind(), p.factor(k), p.factor(l))?;
                out.set_factor(k, a);
                out.set_factor(l, b);
                sign = sign * s;
            }
        }
    }
    Ok(out.with_sign(sign))
}

/// Checks that settings in a list are pairwise distinct.
pub(crate) fn ensure_distinct(settings: &[MeasurementSetting]) -> Result<()> {
    let mut seen = HashSet::with_capacity(settings.len());
    for (i, s) in settings.iter().enumerate() {
        if !seen.insert(s) {
            return Err(Error::contract(format!(
                "setting {} ({}) is duplicated",
                i,
                s.label()
            )));
        }
    }
    Ok(())
}
