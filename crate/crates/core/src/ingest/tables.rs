//! CSV tables of recorded measurements.
//!
//! Orderings are written as quoted, comma-separated variable names in
//! projection order, e.g. `"x3,x1,x2"`. When a table is loaded without a map
//! of declared variables, each problem's variables are the names seen in its
//! rows in natural order (`x2` before `x10`).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use crate::error::{Error, Result};
use crate::heuristics::{HeuristicChoice, HeuristicName};
use crate::metrics::{HeuristicChoices, StepTime, TimingRecord};
use crate::polyarith::Variables;
use crate::projection::VariableOrdering;

/// Declared variables per problem id.
pub type VariableMap = BTreeMap<String, Variables>;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimingTable {
    pub variables: VariableMap,
    pub records: BTreeMap<String, BTreeMap<VariableOrdering, TimingRecord>>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CellCountTable {
    pub variables: VariableMap,
    pub counts: BTreeMap<String, BTreeMap<VariableOrdering, u64>>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProjectionTimeTable {
    pub variables: VariableMap,
    /// Keyed by the variables eliminated so far, the current step included.
    pub steps: BTreeMap<String, BTreeMap<Vec<usize>, StepTime>>,
}

struct Row {
    line: u64,
    fields: Vec<String>,
}

fn read_rows<R: Read>(reader: R, context: &str, columns: &[&str]) -> Result<Vec<Row>> {
    let mut csv = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(reader);
    let headers = csv
        .headers()
        .map_err(|e| Error::table(context, 1, format!("unreadable header: {e}")))?
        .clone();
    let mut index = Vec::with_capacity(columns.len());
    for col in columns {
        match headers.iter().position(|h| h.trim() == *col) {
            Some(i) => index.push(i),
            None => return Err(Error::table(context, 1, format!("missing column `{col}`"))),
        }
    }
    let mut rows = Vec::new();
    for record in csv.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::table(context, line, format!("malformed row: {e}"))
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let mut fields = Vec::with_capacity(columns.len());
        for (col, &i) in columns.iter().zip(&index) {
            match record.get(i) {
                Some(f) => fields.push(f.trim().to_string()),
                None => return Err(Error::table(context, line, format!("missing field `{col}`"))),
            }
        }
        rows.push(Row { line, fields });
    }
    Ok(rows)
}

/// Orders `x2` before `x10` by comparing digit runs numerically.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for ((da, sa), (db, sb)) in ca.iter().zip(&cb) {
        let ord = if *da && *db {
            let (ta, tb) = (sa.trim_start_matches('0'), sb.trim_start_matches('0'));
            ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
        } else {
            sa.cmp(sb)
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

fn split_names(text: &str) -> Vec<&str> {
    text.split(',').map(str::trim).collect()
}

/// Resolves each problem's variables from `known` or from the names in its rows.
fn resolve_variables<'a, I>(context: &str, known: Option<&VariableMap>, names: I) -> Result<VariableMap>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let mut seen: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (problem, ordering) in names {
        let entry = seen.entry(problem.to_string()).or_default();
        entry.extend(split_names(ordering).into_iter().filter(|n| !n.is_empty()).map(str::to_string));
    }
    let mut out = VariableMap::new();
    for (problem, names) in seen {
        let vars = match known.and_then(|k| k.get(&problem)) {
            Some(v) => v.clone(),
            None => {
                let mut names: Vec<String> = names.into_iter().collect();
                names.sort_by(|a, b| natural_cmp(a, b));
                Variables::new(names).map_err(|e| Error::table(context, 0, e.to_string()))?
            }
        };
        out.insert(problem, vars);
    }
    Ok(out)
}

fn parse_ordering(context: &str, line: u64, text: &str, vars: &Variables) -> Result<VariableOrdering> {
    VariableOrdering::parse(text, vars).map_err(|e| Error::table(context, line, e.to_string()))
}

fn parse_seconds(context: &str, line: u64, column: &str, text: &str) -> Result<f64> {
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        _ => Err(Error::table(context, line, format!("{column}: expected non-negative seconds, got `{text}`"))),
    }
}

fn parse_bool(context: &str, line: u64, column: &str, text: &str) -> Result<bool> {
    match text.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::table(context, line, format!("{column}: expected true or false, got `{text}`"))),
    }
}

fn require_problem_id(context: &str, line: u64, id: &str) -> Result<()> {
    if id.is_empty() {
        return Err(Error::table(context, line, "empty problem_id"));
    }
    Ok(())
}

/// Loads `problem_id,ordering,cad_time_seconds,timed_out,time_limit_seconds`.
pub fn load_timings<R: Read>(reader: R, known: Option<&VariableMap>) -> Result<TimingTable> {
    const CTX: &str = "timings";
    let rows = read_rows(
        reader,
        CTX,
        &["problem_id", "ordering", "cad_time_seconds", "timed_out", "time_limit_seconds"],
    )?;
    let variables = resolve_variables(CTX, known, rows.iter().map(|r| (r.fields[0].as_str(), r.fields[1].as_str())))?;
    let mut records: BTreeMap<String, BTreeMap<VariableOrdering, TimingRecord>> = BTreeMap::new();
    for Row { line, fields } in rows {
        let [id, ordering, time, out, limit] = <[String; 5]>::try_from(fields).expect("five columns");
        require_problem_id(CTX, line, &id)?;
        let ordering = parse_ordering(CTX, line, &ordering, &variables[&id])?;
        let cad_time = parse_seconds(CTX, line, "cad_time_seconds", &time)?;
        let timed_out = parse_bool(CTX, line, "timed_out", &out)?;
        let time_limit = parse_seconds(CTX, line, "time_limit_seconds", &limit)?;
        if time_limit == 0.0 {
            return Err(Error::table(CTX, line, "time_limit_seconds must be positive"));
        }
        let per_problem = records.entry(id.clone()).or_default();
        if per_problem.contains_key(&ordering) {
            return Err(Error::table(
                CTX,
                line,
                format!("duplicate row for problem `{id}`, ordering {}", ordering.render(&variables[&id])),
            ));
        }
        let record = TimingRecord { problem_id: id, ordering: ordering.clone(), cad_time, timed_out, time_limit };
        per_problem.insert(ordering, record);
    }
    Ok(TimingTable { variables, records })
}

/// Loads `problem_id,ordering,cell_count`.
pub fn load_cellcounts<R: Read>(reader: R, known: Option<&VariableMap>) -> Result<CellCountTable> {
    const CTX: &str = "cell counts";
    let rows = read_rows(reader, CTX, &["problem_id", "ordering", "cell_count"])?;
    let variables = resolve_variables(CTX, known, rows.iter().map(|r| (r.fields[0].as_str(), r.fields[1].as_str())))?;
    let mut counts: BTreeMap<String, BTreeMap<VariableOrdering, u64>> = BTreeMap::new();
    for Row { line, fields } in rows {
        let [id, ordering, count] = <[String; 3]>::try_from(fields).expect("three columns");
        require_problem_id(CTX, line, &id)?;
        let ordering = parse_ordering(CTX, line, &ordering, &variables[&id])?;
        let count: u64 = count
            .parse()
            .map_err(|_| Error::table(CTX, line, format!("cell_count: expected a non-negative integer, got `{count}`")))?;
        let per_problem = counts.entry(id.clone()).or_default();
        if per_problem.insert(ordering.clone(), count).is_some() {
            return Err(Error::table(
                CTX,
                line,
                format!("duplicate row for problem `{id}`, ordering {}", ordering.render(&variables[&id])),
            ));
        }
    }
    Ok(CellCountTable { variables, counts })
}

/// Loads `problem_id,ordering_prefix,step_index,seconds,timed_out`.
///
/// `ordering_prefix` lists the variables eliminated up to and including the
/// step, so `step_index` (1-based) equals its length.
pub fn load_projection_times<R: Read>(reader: R, known: Option<&VariableMap>) -> Result<ProjectionTimeTable> {
    const CTX: &str = "projection times";
    let rows = read_rows(reader, CTX, &["problem_id", "ordering_prefix", "step_index", "seconds", "timed_out"])?;
    let variables = resolve_variables(CTX, known, rows.iter().map(|r| (r.fields[0].as_str(), r.fields[1].as_str())))?;
    let mut steps: BTreeMap<String, BTreeMap<Vec<usize>, StepTime>> = BTreeMap::new();
    for Row { line, fields } in rows {
        let [id, prefix, index, seconds, out] = <[String; 5]>::try_from(fields).expect("five columns");
        require_problem_id(CTX, line, &id)?;
        let vars = &variables[&id];
        let mut seq = Vec::new();
        for name in split_names(&prefix) {
            let v = vars
                .position(name)
                .ok_or_else(|| Error::table(CTX, line, format!("unknown variable `{name}`")))?;
            if seq.contains(&v) {
                return Err(Error::table(CTX, line, format!("variable `{name}` repeated in prefix")));
            }
            seq.push(v);
        }
        let index: usize = index
            .parse()
            .map_err(|_| Error::table(CTX, line, format!("step_index: expected a positive integer, got `{index}`")))?;
        if index != seq.len() {
            return Err(Error::table(
                CTX,
                line,
                format!("step_index {index} does not match a prefix of {} variables", seq.len()),
            ));
        }
        let step = StepTime {
            seconds: parse_seconds(CTX, line, "seconds", &seconds)?,
            timed_out: parse_bool(CTX, line, "timed_out", &out)?,
        };
        if steps.entry(id.clone()).or_default().insert(seq, step).is_some() {
            return Err(Error::table(CTX, line, format!("duplicate row for problem `{id}`, prefix {prefix}")));
        }
    }
    Ok(ProjectionTimeTable { variables, steps })
}

/// Loads `problem_id,heuristic,ordering,heuristic_cost_seconds`, one group per
/// heuristic in order of first appearance.
pub fn load_choices<R: Read>(reader: R, known: Option<&VariableMap>) -> Result<Vec<HeuristicChoices>> {
    const CTX: &str = "choices";
    let rows = read_rows(reader, CTX, &["problem_id", "heuristic", "ordering", "heuristic_cost_seconds"])?;
    let variables = resolve_variables(CTX, known, rows.iter().map(|r| (r.fields[0].as_str(), r.fields[2].as_str())))?;
    let mut groups: Vec<HeuristicChoices> = Vec::new();
    for Row { line, fields } in rows {
        let [id, heuristic, ordering, cost] = <[String; 4]>::try_from(fields).expect("four columns");
        require_problem_id(CTX, line, &id)?;
        let name: HeuristicName = heuristic.parse().map_err(|e: Error| Error::table(CTX, line, e.to_string()))?;
        let ordering = parse_ordering(CTX, line, &ordering, &variables[&id])?;
        let heuristic_cost = parse_seconds(CTX, line, "heuristic_cost_seconds", &cost)?;
        let group = match groups.iter().position(|g| g.heuristic == name.as_str()) {
            Some(i) => &mut groups[i],
            None => {
                groups.push(HeuristicChoices { heuristic: name.as_str().to_string(), choices: BTreeMap::new() });
                groups.last_mut().expect("just pushed")
            }
        };
        let choice = HeuristicChoice { heuristic: name, ordering, heuristic_cost, diagnostics: Vec::new() };
        if group.choices.insert(id.clone(), choice).is_some() {
            return Err(Error::table(CTX, line, format!("duplicate choice of {name} for problem `{id}`")));
        }
    }
    Ok(groups)
}
