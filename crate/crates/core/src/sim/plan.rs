use serde::{Deserialize, Serialize};

use crate::catalog::{settings_from_json, settings_to_json, SettingCatalog};
use crate::coverage::{build_coverage, coverage_row, CoverageEntry, CoverageMatrix};
use crate::error::{Error, Result};
use crate::gates::MeasurementSetting;
use crate::pauli::PauliString;

pub const PLAN_FORMAT: &str = "tomoplan-plan/1";

/// Selected settings together with the signed map from each
/// `(setting, O_j)` pair to the Pauli coefficient it reads out.
#[derive(Clone, Debug, PartialEq)]
pub struct TomographyPlan {
    n: usize,
    catalog_hash: String,
    selected: Vec<usize>,
    settings: Vec<MeasurementSetting>,
    map: Vec<Vec<CoverageEntry>>,
}

fn check_complete(n: usize, map: &[Vec<CoverageEntry>]) -> Result<()> {
    let cols = 1usize << (2 * n);
    let mut seen = vec![false; cols];
    for e in map.iter().flatten() {
        seen[e.column as usize] = true;
    }
    let uncovered: Vec<String> = (0..cols)
        .filter(|&c| !seen[c])
        .map(|c| PauliString::from_index(n, c as u64 + 1).expect("index in range").label())
        .collect();
    if uncovered.is_empty() {
        Ok(())
    } else {
        Err(Error::Infeasible { uncovered })
    }
}

impl TomographyPlan {
    /// Plan for rows `selected` of `catalog`; fails unless they cover all
    /// `4^n` coefficients.
    pub fn from_catalog(catalog: &SettingCatalog, selected: &[usize]) -> Result<Self> {
        let mut selected = selected.to_vec();
        selected.sort_unstable();
        selected.dedup();
        if let Some(&r) = selected.iter().find(|&&r| r >= catalog.len()) {
            return Err(Error::range(format!("row {r} outside catalog of {}", catalog.len())));
        }
        let settings: Vec<MeasurementSetting> = selected.iter().map(|&r| catalog.settings()[r].clone()).collect();
        let map: Vec<_> = settings.iter().map(coverage_row).collect();
        check_complete(catalog.n(), &map)?;
        Ok(TomographyPlan {
            n: catalog.n(),
            catalog_hash: catalog.content_hash(),
            selected,
            settings,
            map,
        })
    }

    /// Plan using every setting of `catalog`.
    pub fn from_settings(catalog: &SettingCatalog) -> Result<Self> {
        let all: Vec<usize> = (0..catalog.len()).collect();
        TomographyPlan::from_catalog(catalog, &all)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Content hash of the catalog the plan was drawn from.
    pub fn catalog_hash(&self) -> &str {
        &self.catalog_hash
    }

    /// Catalog rows of the settings, ascending.
    pub fn selected(&self) -> &[usize] {
        &self.selected
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

    /// Entry `j` of `map()[i]` is the coefficient read by `O_j` in setting `i`.
    pub fn map(&self) -> &[Vec<CoverageEntry>] {
        &self.map
    }

    /// The plan's rows as a coverage matrix, in plan order.
    pub fn coverage(&self) -> CoverageMatrix {
        let c = SettingCatalog::new(self.n, self.settings.clone(), crate::catalog::Provenance::Custom)
            .expect("plan settings are distinct");
        build_coverage(&c)
    }
}

#[derive(Serialize, Deserialize)]
struct PlanFile {
    format: String,
    n: usize,
    catalog_hash: String,
    selected: Vec<usize>,
    settings: serde_json::Value,
}

pub fn save_plan(plan: &TomographyPlan) -> String {
    let file = PlanFile {
        format: PLAN_FORMAT.into(),
        n: plan.n,
        catalog_hash: plan.catalog_hash.clone(),
        selected: plan.selected.clone(),
        settings: settings_to_json(&plan.settings),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("plan serialises");
    s.push('\n');
    s
}

/// Plan file contents before the coverage check.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanRecord {
    pub n: usize,
    pub catalog_hash: String,
    pub selected: Vec<usize>,
    pub settings: Vec<MeasurementSetting>,
}

/// Parses a plan file without requiring it to be complete.
pub fn read_plan(text: &str) -> Result<PlanRecord> {
    let file: PlanFile = serde_json::from_str(text)?;
    if file.format != PLAN_FORMAT {
        return Err(Error::parse(1, 1, format!("unsupported format {:?}", file.format)));
    }
    if file.n == 0 || file.n > crate::pauli::MAX_QUBITS {
        return Err(Error::range(format!("qubit count {} out of range", file.n)));
    }
    let settings = settings_from_json(file.n, file.settings)?;
    if settings.len() != file.selected.len() {
        return Err(Error::parse(
            1,
            1,
            format!("{} settings but {} selected rows", settings.len(), file.selected.len()),
        ));
    }
    Ok(PlanRecord {
        n: file.n,
        catalog_hash: file.catalog_hash,
        selected: file.selected,
        settings,
    })
}

/// Parses a plan file and re-derives its coverage map.
pub fn load_plan(text: &str) -> Result<TomographyPlan> {
    let r = read_plan(text)?;
    let map: Vec<_> = r.settings.iter().map(coverage_row).collect();
    check_complete(r.n, &map)?;
    Ok(TomographyPlan {
        n: r.n,
        catalog_hash: r.catalog_hash,
        selected: r.selected,
        settings: r.settings,
        map,
    })
}
