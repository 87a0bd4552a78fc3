//! Measurement-setting catalogs and their JSON file format.
//!
//! Canonical order of generated catalogs:
//!
//! 1. all `{Id, Rx, Ry}^n` assignments counted in base 3 with qubit 1 most
//!    significant and digit order (Id, Rx, Ry);
//! 2. for each edge `(k, l)` in ascending order, for `YY` then `XY`, the
//!    `{Id, Rx, Ry}` assignments of the remaining qubits in base 3.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gates::{ensure_distinct, GateKind, MeasurementSetting, ReadoutGate};
use crate::graph::ConnectivityGraph;

const LOCAL_KINDS: [GateKind; 3] = [GateKind::Id, GateKind::RotX, GateKind::RotY];
pub const CATALOG_FORMAT: &str = "tomoplan-catalog/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Traditional,
    New,
    Custom,
    Lemma2,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Traditional => "traditional",
            Provenance::New => "new",
            Provenance::Custom => "custom",
            Provenance::Lemma2 => "lemma2",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "traditional" => Ok(Provenance::Traditional),
            "new" => Ok(Provenance::New),
            "custom" => Ok(Provenance::Custom),
            "lemma2" => Ok(Provenance::Lemma2),
            other => Err(Error::range(format!("unknown catalog provenance {other:?}"))),
        }
    }
}

/// An ordered list of pairwise distinct settings on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SettingCatalog {
    n: usize,
    settings: Vec<MeasurementSetting>,
    provenance: Provenance,
}

impl SettingCatalog {
    pub fn new(n: usize, settings: Vec<MeasurementSetting>, provenance: Provenance) -> Result<Self> {
        if let Some(s) = settings.iter().find(|s| s.n() != n) {
            return Err(Error::contract(format!(
                "setting {} is on {} qubits, catalog on {n}",
                s.label(),
                s.n()
            )));
        }
        ensure_distinct(&settings)?;
        Ok(SettingCatalog {
            n,
            settings,
            provenance,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn settings(&self) -> &[MeasurementSetting] {
        &self.settings
    }

    pub fn len(&self) -> usize {
        self.settings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.settings.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Sub-catalog of the given rows, in the given order.
    pub fn subset(&self, rows: &[usize]) -> Result<SettingCatalog> {
        let settings = rows
            .iter()
            .map(|&r| {
                self.settings
                    .get(r)
                    .cloned()
                    .ok_or_else(|| Error::range(format!("row {r} outside catalog of {}", self.len())))
            })
            .collect::<Result<Vec<_>>>()?;
        SettingCatalog::new(self.n, settings, Provenance::Custom)
    }

    /// Position of a setting in the catalog.
    pub fn position(&self, m: &MeasurementSetting) -> Option<usize> {
        self.settings.iter().position(|s| s == m)
    }

    /// SHA-256 over the canonical serialisation of `n` and the settings.
    /// Provenance is not part of the hash.
    pub fn content_hash(&self) -> String {
        let body = serde_json::to_string(&(self.n, records(&self.settings)))
            .expect("catalog records serialise");
        hex::encode(Sha256::digest(body.as_bytes()))
    }
}

/// Every `{Id, Rx, Ry}` assignment to `qubits`, in base-3 order with the
/// first listed qubit most significant.
fn local_assignments(qubits: &[usize]) -> Vec<Vec<(usize, GateKind)>> {
    let count = 3usize.pow(qubits.len() as u32);
    (0..count)
        .map(|mut code| {
            let mut out = vec![(0, GateKind::Id); qubits.len()];
            for (slot, &q) in out.iter_mut().zip(qubits).rev() {
                *slot = (q, LOCAL_KINDS[code % 3]);
                code /= 3;
            }
            out
        })
        .collect()
}

fn setting_from(n: usize, locals: &[(usize, GateKind)], pair: Option<ReadoutGate>) -> MeasurementSetting {
    let mut gates: Vec<ReadoutGate> = locals
        .iter()
        .map(|&(q, k)| ReadoutGate::single(k, q).expect("valid local gate"))
        .collect();
    gates.extend(pair);
    MeasurementSetting::new(n, gates).expect("generated setting is valid")
}

/// The `3^n` single-qubit settings `{Id, Rx, Ry}^n`.
pub fn catalog_traditional(n: usize) -> Result<SettingCatalog> {
    if n == 0 || n > crate::pauli::MAX_QUBITS {
        return Err(Error::range(format!("qubit count {n} out of range")));
    }
    let qubits: Vec<usize> = (1..=n).collect();
    let settings = local_assignments(&qubits)
        .iter()
        .map(|locals| setting_from(n, locals, None))
        .collect();
    SettingCatalog::new(n, settings, Provenance::Traditional)
}

/// Single-qubit settings plus, for every edge and each of `YY`/`XY`, all
/// `{Id, Rx, Ry}` assignments of the other qubits. Size
/// `3^n + 2 |E| 3^(n-2)`.
pub fn catalog_new(g: &ConnectivityGraph) -> Result<SettingCatalog> {
    let n = g.n();
    if n < 2 && g.num_edges() > 0 {
        return Err(Error::contract("edges need at least two qubits"));
    }
    let mut settings = catalog_traditional(n)?.settings;
    for (k, l) in g.edges() {
        let rest: Vec<usize> = (1..=n).filter(|&q| q != k && q != l).collect();
        let assignments = local_assignments(&rest);
        for kind in [GateKind::YY, GateKind::XY] {
            let pair = ReadoutGate::pair(kind, k, l)?;
            settings.extend(assignments.iter().map(|locals| setting_from(n, locals, Some(pair))));
        }
    }
    SettingCatalog::new(n, settings, Provenance::New)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for q in start..=n {
            if n - q + 1 < k - cur.len() {
                break;
            }
            cur.push(q);
            rec(q + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Constructive all-to-all scheme of size `(3^n + 2n + 1) / 2`.
///
/// Contains the identity, every single-excitation setting, and for each
/// subset of `k >= 2` excited qubits a `YY` or `XY` on its two lowest
/// qubits with `Rx`/`Ry` on the remaining `k - 2`.
pub fn lemma2_scheme(n: usize) -> Result<SettingCatalog> {
    if !(2..=crate::pauli::MAX_QUBITS).contains(&n) {
        return Err(Error::range(format!("scheme needs n >= 2, got {n}")));
    }
    let ids = vec![GateKind::Id; n];
    let mut settings = vec![MeasurementSetting::identity(n)?];
    for q in 1..=n {
        for kind in [GateKind::RotX, GateKind::RotY] {
            let mut locals = ids.clone();
            locals[q - 1] = kind;
            settings.push(MeasurementSetting::from_parts(n, &locals, None)?);
        }
    }
    for k in 2..=n {
        for subset in combinations(n, k) {
            let (a, b) = (subset[0], subset[1]);
            let rest = &subset[2..];
            for kind in [GateKind::YY, GateKind::XY] {
                for code in 0..(1usize << rest.len()) {
                    let mut locals = ids.clone();
                    for (i, &q) in rest.iter().enumerate() {
                        let bit = (code >> (rest.len() - 1 - i)) & 1;
                        locals[q - 1] = if bit == 0 { GateKind::RotX } else { GateKind::RotY };
                    }
                    settings.push(MeasurementSetting::from_parts(n, &locals, Some((kind, a, b)))?);
                }
            }
        }
    }
    SettingCatalog::new(n, settings, Provenance::Lemma2)
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    kind: String,
    qubits: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SettingRecord {
    gates: Vec<GateRecord>,
}

#[derive(Serialize, Deserialize)]
struct CatalogHeader {
    format: String,
    n: usize,
    provenance: String,
    settings: Vec<SettingRecord>,
}

/// Settings as file records; identities are implicit and omitted.
fn records(settings: &[MeasurementSetting]) -> Vec<SettingRecord> {
    settings.iter().map(setting_record).collect()
}

fn setting_record(m: &MeasurementSetting) -> SettingRecord {
    SettingRecord {
        gates: m
            .active_gates()
            .map(|g| GateRecord {
                kind: g.kind().code().to_string(),
                qubits: g.qubits(),
            })
            .collect(),
    }
}

fn setting_from_record(n: usize, rec: &SettingRecord, index: usize) -> Result<MeasurementSetting> {
    let err = |msg: String| Error::contract(format!("setting {index}: {msg}"));
    let mut gates = Vec::new();
    let mut covered = vec![false; n + 1];
    for g in &rec.gates {
        let kind = GateKind::from_code(&g.kind).ok_or_else(|| err(format!("unknown gate kind {:?}", g.kind)))?;
        let gate = match g.qubits.as_slice() {
            [q] => ReadoutGate::single(kind, *q),
            [k, l] => ReadoutGate::pair(kind, *k, *l),
            other => return Err(err(format!("gate acts on {} qubits", other.len()))),
        }
        .map_err(|e| err(e.to_string()))?;
        for q in gate.qubits() {
            if q <= n {
                covered[q] = true;
            }
        }
        gates.push(gate);
    }
    for q in (1..=n).filter(|&q| !covered[q]) {
        gates.push(ReadoutGate::single(GateKind::Id, q)?);
    }
    MeasurementSetting::new(n, gates).map_err(|e| err(e.to_string()))
}

/// Parses settings records against a register size.
pub(crate) fn settings_from_json(n: usize, value: serde_json::Value) -> Result<Vec<MeasurementSetting>> {
    let recs: Vec<SettingRecord> = serde_json::from_value(value)?;
    recs.iter()
        .enumerate()
        .map(|(i, r)| setting_from_record(n, r, i))
        .collect()
}

pub(crate) fn settings_to_json(settings: &[MeasurementSetting]) -> serde_json::Value {
    serde_json::to_value(records(settings)).expect("records serialise")
}

/// Serialises a catalog, one setting record per line.
pub fn save_catalog(c: &SettingCatalog) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"format\": \"{CATALOG_FORMAT}\",\n"));
    out.push_str(&format!("  \"n\": {},\n", c.n));
    out.push_str(&format!("  \"provenance\": \"{}\",\n", c.provenance));
    out.push_str("  \"settings\": [\n");
    let lines: Vec<String> = c
        .settings
        .iter()
        .map(|m| format!("    {}", serde_json::to_string(&setting_record(m)).expect("record serialises")))
        .collect();
    out.push_str(&lines.join(",\n"));
    if !lines.is_empty() {
        out.push('\n');
    }
    out.push_str("  ]\n}\n");
    out
}

/// Parses the catalog format written by [`save_catalog`].
pub fn load_catalog(text: &str) -> Result<SettingCatalog> {
    let header: CatalogHeader = serde_json::from_str(text)?;
    if header.format != CATALOG_FORMAT {
        return Err(Error::parse(1, 1, format!("unsupported format {:?}", header.format)));
    }
    if header.n == 0 || header.n > crate::pauli::MAX_QUBITS {
        return Err(Error::range(format!("qubit count {} out of range", header.n)));
    }
    let provenance = header.provenance.parse()?;
    let settings = header
        .settings
        .iter()
        .enumerate()
        .map(|(i, r)| setting_from_record(header.n, r, i))
        .collect::<Result<Vec<_>>>()?;
    SettingCatalog::new(header.n, settings, provenance)
}

/// Parses a plain setting list: an `n <count>` header, then one setting
/// label per line (`Rx1 YY2-3`, `Id`). `#` starts a comment. The result is
/// a custom catalog in file order.
pub fn load_setting_list(text: &str) -> Result<SettingCatalog> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "missing header `n <count>`"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["n", count] => count
            .parse::<usize>()
            .map_err(|_| Error::parse(hl, 3, format!("bad qubit count {count:?}")))?,
        _ => return Err(Error::parse(hl, 1, "expected header `n <count>`")),
    };
    if n == 0 || n > crate::pauli::MAX_QUBITS {
        return Err(Error::range(format!("qubit count {n} out of range")));
    }
    let settings = lines
        .map(|(ln, l)| MeasurementSetting::from_label(n, l).map_err(|e| Error::parse(ln, 1, e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    SettingCatalog::new(n, settings, Provenance::Custom)
}
