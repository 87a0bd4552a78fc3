//! JSON interchange for problems and solutions.

use serde::{Deserialize, Serialize};

use super::{CoverProblem, CoverSolution, Status};
use crate::error::{Error, Result};

const PROBLEM_FORMAT: &str = "tomoplan-problem/1";
const SOLUTION_FORMAT: &str = "tomoplan-solution/1";

#[derive(Serialize, Deserialize)]
struct ProblemRecord {
    format: String,
    col_labels: Vec<String>,
    supports: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct SolutionRecord {
    format: String,
    catalog_hash: String,
    selected: Vec<usize>,
    objective: usize,
    status: String,
    lower_bound: usize,
    nodes: u64,
}

/// A solution tied to the catalog it was solved from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionFile {
    pub catalog_hash: String,
    pub solution: CoverSolution,
}

fn check_format(found: &str, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::parse(1, 1, format!("expected format {expected:?}, found {found:?}")));
    }
    Ok(())
}

pub fn save_problem(p: &CoverProblem) -> String {
    let rec = ProblemRecord {
        format: PROBLEM_FORMAT.into(),
        col_labels: (0..p.num_cols()).map(|c| p.col_label(c).to_string()).collect(),
        supports: p.supports().to_vec(),
    };
    serde_json::to_string_pretty(&rec).expect("problem serialises") + "\n"
}

pub fn load_problem(text: &str) -> Result<CoverProblem> {
    let rec: ProblemRecord = serde_json::from_str(text)?;
    check_format(&rec.format, PROBLEM_FORMAT)?;
    CoverProblem::with_labels(rec.supports, rec.col_labels)
}

pub fn save_solution(f: &SolutionFile) -> String {
    let s = &f.solution;
    let rec = SolutionRecord {
        format: SOLUTION_FORMAT.into(),
        catalog_hash: f.catalog_hash.clone(),
        selected: s.selected.clone(),
        objective: s.objective,
        status: s.status.to_string(),
        lower_bound: s.lower_bound,
        nodes: s.nodes,
    };
    serde_json::to_string_pretty(&rec).expect("solution serialises") + "\n"
}

pub fn load_solution(text: &str) -> Result<SolutionFile> {
    let rec: SolutionRecord = serde_json::from_str(text)?;
    check_format(&rec.format, SOLUTION_FORMAT)?;
    if rec.objective != rec.selected.len() {
        return Err(Error::contract(format!(
            "objective {} does not match {} selected rows",
            rec.objective,
            rec.selected.len()
        )));
    }
    let status: Status = rec.status.parse()?;
    Ok(SolutionFile {
        catalog_hash: rec.catalog_hash,
        solution: CoverSolution {
            selected: rec.selected,
            objective: rec.objective,
            status,
            lower_bound: rec.lower_bound,
            nodes: rec.nodes,
        },
    })
}
