//! Reading problems and measurement tables.

mod smtlib;
mod tables;

use std::collections::BTreeSet;
use std::path::Path;

pub use smtlib::{parse_smtlib, ProblemInstance, SmtError};
pub use tables::{
    load_cellcounts, load_choices, load_projection_times, load_timings, natural_cmp, CellCountTable,
    ProjectionTimeTable, TimingTable, VariableMap,
};

use crate::error::{Error, Result};
use crate::metrics::{uniqueness_cluster, ProblemTimings};

/// Parses one SMT-LIB file; the problem id is the file stem.
pub fn load_problem(path: &Path) -> Result<ProblemInstance> {
    let text = std::fs::read_to_string(path)?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .ok_or_else(|| Error::Data(format!("{}: no file name", path.display())))?;
    parse_smtlib(&id, &text).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

/// Parses every `*.smt2` file of a directory, sorted by problem id.
pub fn load_problem_dir(dir: &Path) -> Result<Vec<ProblemInstance>> {
    let mut paths = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "smt2") {
            paths.push(path);
        }
    }
    paths.sort();
    let mut out: Vec<ProblemInstance> = paths.iter().map(|p| load_problem(p)).collect::<Result<_>>()?;
    out.sort_by(|a, b| a.problem_id.cmp(&b.problem_id));
    for pair in out.windows(2) {
        if pair[0].problem_id == pair[1].problem_id {
            return Err(Error::Data(format!("duplicate problem id `{}`", pair[0].problem_id)));
        }
    }
    Ok(out)
}

pub fn variable_map(problems: &[ProblemInstance]) -> VariableMap {
    problems.iter().map(|p| (p.problem_id.clone(), p.variables.clone())).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct DatasetStats {
    pub total: usize,
    pub all_timeout: usize,
    pub duplicates: usize,
    pub unique: usize,
    /// Kept without clustering for lack of complete cell counts.
    pub unclustered: usize,
}

/// Joins the tables into per-problem timings, drops problems where every
/// ordering timed out and clusters by cell-count vectors when available.
///
/// With `problems` given, timing rows for any other problem id are an error.
pub fn assemble_dataset(
    problems: Option<&VariableMap>,
    timings: TimingTable,
    cellcounts: Option<CellCountTable>,
    projection_times: Option<ProjectionTimeTable>,
) -> Result<(Vec<ProblemTimings>, DatasetStats)> {
    if let Some(problems) = problems {
        let orphans: Vec<&str> =
            timings.records.keys().filter(|id| !problems.contains_key(*id)).map(String::as_str).collect();
        if !orphans.is_empty() {
            return Err(Error::Data(format!("timing rows for unknown problems: {}", orphans.join(", "))));
        }
        for id in problems.keys().filter(|id| !timings.records.contains_key(*id)) {
            log::warn!("{id}: no timing rows, left out of the dataset");
        }
    }
    let TimingTable { variables, records } = timings;
    let mut cellcounts = cellcounts.map(|c| c.counts);
    let mut projection_times = projection_times.map(|p| p.steps);
    let timed: BTreeSet<&String> = records.keys().collect();
    for table in [cellcounts.as_ref().map(|c| c.keys().collect::<Vec<_>>()), projection_times.as_ref().map(|p| p.keys().collect())]
        .into_iter()
        .flatten()
    {
        for id in table.into_iter().filter(|id| !timed.contains(id)) {
            log::warn!("{id}: measurements without timing rows are ignored");
        }
    }
    let dataset: Vec<ProblemTimings> = records
        .into_iter()
        .map(|(id, recs)| {
            let vars = problems.and_then(|p| p.get(&id)).or(variables.get(&id)).cloned().expect("resolved while loading");
            ProblemTimings {
                cell_counts: cellcounts.as_mut().and_then(|c| c.remove(&id)),
                projection_times: projection_times.as_mut().and_then(|p| p.remove(&id)),
                problem_id: id,
                variables: vars,
                records: recs,
            }
        })
        .collect();
    let total = dataset.len();
    let outcome = uniqueness_cluster(dataset);
    let stats = DatasetStats {
        total,
        all_timeout: outcome.all_timeout.len(),
        duplicates: outcome.duplicates.len(),
        unique: outcome.kept.len(),
        unclustered: outcome.unclustered.len(),
    };
    Ok((outcome.kept, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "problem_id,ordering,cad_time_seconds,timed_out,time_limit_seconds\n";

    fn timings(body: &str) -> TimingTable {
        load_timings(format!("{HEAD}{body}").as_bytes(), None).unwrap()
    }

    #[test]
    fn drops_all_timeout_problems() {
        let t = timings(
            "a,\"x1,x2\",1,false,30\na,\"x2,x1\",2,false,30\n\
             b,\"x1,x2\",30,true,30\nb,\"x2,x1\",30,true,30\n\
             c,\"x1,x2\",4,false,30\nc,\"x2,x1\",30,true,30\n",
        );
        let (ds, stats) = assemble_dataset(None, t, None, None).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(stats, DatasetStats { total: 3, all_timeout: 1, duplicates: 0, unique: 2, unclustered: 2 });
    }

    #[test]
    fn clusters_identical_cell_counts() {
        let t = timings("a,\"x1,x2\",1,false,30\na,\"x2,x1\",2,false,30\nb,\"x1,x2\",3,false,30\nb,\"x2,x1\",4,false,30\n");
        let cc = load_cellcounts(
            "problem_id,ordering,cell_count\na,\"x1,x2\",5\na,\"x2,x1\",7\nb,\"x1,x2\",5\nb,\"x2,x1\",7\n".as_bytes(),
            Some(&t.variables),
        )
        .unwrap();
        let (ds, stats) = assemble_dataset(None, t, Some(cc), None).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].problem_id, "a");
        assert_eq!(stats.duplicates, 1);
    }

    #[test]
    fn orphan_rows_are_errors() {
        let t = timings("a,\"x1\",1,false,30\nz,\"x1\",1,false,30\n");
        let known: VariableMap = [("a".to_string(), crate::Variables::indexed(1))].into_iter().collect();
        let err = assemble_dataset(Some(&known), t, None, None).unwrap_err().to_string();
        assert!(err.contains('z'), "{err}");
    }
}
