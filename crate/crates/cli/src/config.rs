use std::fmt;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;
use tomoplan_core::catalog::{catalog_new, catalog_traditional, lemma2_scheme};
use tomoplan_core::{ConnectivityGraph, SettingCatalog};

use crate::error::Failure;
use crate::output::read_text;
use crate::Setup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CatalogKind {
    /// Local rotations only, 3^n settings.
    Traditional,
    /// Local rotations plus one YY or XY gate on a coupled pair.
    New,
    /// Constructive all-to-all scheme.
    Lemma2,
}

impl fmt::Display for CatalogKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CatalogKind::Traditional => "traditional",
            CatalogKind::New => "new",
            CatalogKind::Lemma2 => "lemma2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Topology {
    Chain,
    Complete,
    Grid(usize, usize),
    Custom,
}

impl FromStr for Topology {
    type Err = Failure;

    fn from_str(s: &str) -> Result<Self, Failure> {
        let s = s.trim();
        match s {
            "chain" => return Ok(Topology::Chain),
            "complete" => return Ok(Topology::Complete),
            "custom" => return Ok(Topology::Custom),
            _ => {}
        }
        let dims = s.strip_prefix("grid:").or_else(|| s.strip_prefix("grid")).unwrap_or(s).trim();
        let parsed = dims
            .split_once(['x', 'X'])
            .and_then(|(r, c)| Some((r.trim().parse().ok()?, c.trim().parse().ok()?)));
        match parsed {
            Some((r, c)) => Ok(Topology::Grid(r, c)),
            None => Err(Failure::Usage(format!(
                "unknown topology {s:?}; expected chain, complete, grid:RxC or custom"
            ))),
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Chain => f.write_str("chain"),
            Topology::Complete => f.write_str("complete"),
            Topology::Grid(r, c) => write!(f, "grid:{r}x{c}"),
            Topology::Custom => f.write_str("custom"),
        }
    }
}

/// A resolved register: topology, its graph and the catalog kind.
pub struct Register {
    pub topology: Topology,
    pub graph: ConnectivityGraph,
    pub kind: CatalogKind,
}

impl Register {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn catalog(&self) -> Result<SettingCatalog, Failure> {
        Ok(match self.kind {
            CatalogKind::Traditional => catalog_traditional(self.n())?,
            CatalogKind::New => catalog_new(&self.graph)?,
            CatalogKind::Lemma2 => lemma2_scheme(self.n())?,
        })
    }
}

pub fn resolve_graph(n: Option<usize>, topology: &Topology, graph: Option<&Path>) -> Result<ConnectivityGraph, Failure> {
    if graph.is_some() && *topology != Topology::Custom {
        return Err(Failure::Usage("--graph requires --topology custom".into()));
    }
    let g = match topology {
        Topology::Chain => ConnectivityGraph::chain(require_n(n)?)?,
        Topology::Complete => ConnectivityGraph::complete(require_n(n)?)?,
        Topology::Grid(r, c) => ConnectivityGraph::grid(*r, *c)?,
        Topology::Custom => {
            let path = graph.ok_or_else(|| Failure::Usage("--topology custom requires --graph".into()))?;
            ConnectivityGraph::from_text(&read_text(path)?)?
        }
    };
    if let Some(n) = n {
        if n != g.n() {
            return Err(Failure::Usage(format!("--n {n} disagrees with the {}-qubit topology {topology}", g.n())));
        }
    }
    Ok(g)
}

fn require_n(n: Option<usize>) -> Result<usize, Failure> {
    n.ok_or_else(|| Failure::Usage("--n is required for this topology".into()))
}

impl Setup {
    /// True when the user named a catalog explicitly.
    pub fn names_catalog(&self) -> bool {
        self.topology.is_some() || self.catalog.is_some() || self.graph.is_some()
    }

    pub fn resolve(&self) -> Result<Register, Failure> {
        let topology = match (&self.topology, &self.graph) {
            (Some(t), _) => t.parse()?,
            (None, Some(_)) => Topology::Custom,
            (None, None) => Topology::Complete,
        };
        let graph = resolve_graph(self.n, &topology, self.graph.as_deref())?;
        Ok(Register {
            topology,
            graph,
            kind: self.catalog.unwrap_or(CatalogKind::New),
        })
    }
}

/// Noise-parameter grid: `a:b:k` for `k` evenly spaced points from `a` to
/// `b`, or a comma-separated list.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number {:?}", t.trim()));
        let parts: Vec<&str> = s.split(':').collect();
        let values = match parts.as_slice() {
            [a, b, k] => {
                let (a, b) = (num(a)?, num(b)?);
                let k: usize = k.trim().parse().map_err(|_| format!("bad point count {:?}", k.trim()))?;
                match k {
                    0 => return Err("grid needs at least one point".into()),
                    1 => vec![a],
                    _ => (0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect(),
                }
            }
            [_] => s.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
            _ => return Err(format!("expected `a:b:k` or a comma list, found {s:?}")),
        };
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(format!("grid values must be finite and non-negative, found {v}"));
        }
        Ok(Grid(values))
    }
}
