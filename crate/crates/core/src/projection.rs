//! McCallum projection, projection chains and their enumeration over all
//! variable orderings.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::polyarith::squarefree::squarefree_factors;
use crate::polyarith::{
    coprime_basis, content_and_primitive, discriminant, resultant, PolySet, Polynomial, Variables,
};

/// Default number of variables above which ordering enumeration is refused.
pub const DEFAULT_ENUMERATION_CAP: usize = 7;

/// A permutation of variable positions in projection order: the first entry
/// is projected first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariableOrdering(Vec<usize>);

impl VariableOrdering {
    pub fn new(sequence: Vec<usize>, nvars: usize) -> Result<Self> {
        if sequence.len() != nvars {
            return Err(Error::InvalidOrdering(format!(
                "ordering has {} variables, problem has {nvars}",
                sequence.len()
            )));
        }
        let mut seen = vec![false; nvars];
        for &v in &sequence {
            if v >= nvars || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidOrdering(format!(
                    "{sequence:?} is not a permutation of 0..{nvars}"
                )));
            }
        }
        Ok(VariableOrdering(sequence))
    }

    pub fn identity(nvars: usize) -> Self {
        VariableOrdering((0..nvars).collect())
    }

    /// Every ordering of `nvars` variables, in lexicographic index order.
    pub fn all(nvars: usize) -> Vec<VariableOrdering> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(nvars);
        let mut used = vec![false; nvars];
        permutations(nvars, &mut current, &mut used, &mut out);
        out
    }

    /// Parses a comma-separated list of variable names.
    pub fn parse(text: &str, vars: &Variables) -> Result<Self> {
        let seq = text
            .split(',')
            .map(str::trim)
            .map(|name| {
                vars.position(name)
                    .ok_or_else(|| Error::InvalidOrdering(format!("unknown variable `{name}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        VariableOrdering::new(seq, vars.len())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Comma-separated variable names in projection order.
    pub fn render(&self, vars: &Variables) -> String {
        self.0.iter().map(|&v| vars.name(v)).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for VariableOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.0.iter().map(|v| format!("x{}", v + 1)).collect();
        f.write_str(&names.join(","))
    }
}

fn permutations(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<VariableOrdering>) {
    if current.len() == n {
        out.push(VariableOrdering(current.clone()));
        return;
    }
    for v in 0..n {
        if !used[v] {
            used[v] = true;
            current.push(v);
            permutations(n, current, used, out);
            current.pop();
            used[v] = false;
        }
    }
}

/// One McCallum projection step eliminating `var`.
///
/// The output holds the contents of the inputs, the polynomials free of
/// `var`, every coefficient and the discriminant of each element of a
/// squarefree coprime basis of the primitive parts, and the pairwise
/// resultants of that basis. Everything is split into normalized squarefree
/// factors and constants are dropped.
pub fn project_step(set: &PolySet, var: usize) -> PolySet {
    let mut out = PolySet::new(set.nvars());
    let mut candidates = Vec::new();
    let emit = |out: &mut PolySet, p: &Polynomial| {
        if !p.is_constant() {
            out.extend(squarefree_factors(p, var));
        }
    };
    for p in set {
        if !p.contains_var(var) {
            emit(&mut out, p);
            continue;
        }
        let (content, primitive) = content_and_primitive(p, var).expect("set members are nonzero");
        emit(&mut out, &content);
        for f in squarefree_factors(&primitive, var) {
            if f.contains_var(var) {
                candidates.push(f);
            } else {
                out.insert(f);
            }
        }
    }

    let basis = coprime_basis(candidates);
    for (i, b) in basis.iter().enumerate() {
        for c in b.coefficients(var) {
            emit(&mut out, &c);
        }
        if b.degree(var) >= 2 {
            emit(&mut out, &discriminant(b, var).expect("degree ≥ 2"));
        }
        for other in &basis[i + 1..] {
            emit(&mut out, &resultant(b, other, var).expect("positive degrees"));
        }
    }
    out
}

/// The projection sets `S_n, …, S_1` for one ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionChain {
    pub ordering: VariableOrdering,
    /// `sets[0]` is the input; `sets[k]` is free of the first `k` ordering variables.
    pub sets: Vec<PolySet>,
    /// Wall-clock seconds of each completed projection step.
    pub step_times: Vec<f64>,
    /// A step exceeded the limit; `sets` stops before it.
    pub timed_out: bool,
}

impl ProjectionChain {
    pub fn is_complete(&self) -> bool {
        !self.timed_out
    }

    /// Dump format: an ordering header, then one `S<k>: {…}` line per set.
    pub fn render(&self, vars: &Variables) -> String {
        let n = self.ordering.len();
        let mut out = format!("ordering: {}\n", self.ordering.render(vars));
        for (k, set) in self.sets.iter().enumerate() {
            out.push_str(&format!("S{}: {}\n", n - k, set.render(vars)));
        }
        if self.timed_out {
            out.push_str(&format!(
                "timed out: projection of {} exceeded the step limit\n",
                vars.name(self.ordering.as_slice()[self.sets.len() - 1])
            ));
        }
        out
    }
}

#[derive(Clone, Debug)]
struct StepOutcome {
    set: Option<PolySet>,
    seconds: f64,
}

fn timed_step(set: &PolySet, var: usize, limit: f64) -> StepOutcome {
    let start = Instant::now();
    let projected = project_step(set, var);
    let seconds = start.elapsed().as_secs_f64();
    StepOutcome { set: (seconds <= limit).then_some(projected), seconds }
}

/// Projects `set` along `ordering`. The last variable needs no projection.
///
/// A step whose wall-clock time exceeds `step_time_limit` seconds marks the
/// chain as timed out and its result is discarded.
pub fn project_chain(set: &PolySet, ordering: &VariableOrdering, step_time_limit: f64) -> ProjectionChain {
    chain_with(set, ordering, |s, v| timed_step(s, v, step_time_limit))
}

fn chain_with<F>(set: &PolySet, ordering: &VariableOrdering, mut step: F) -> ProjectionChain
where
    F: FnMut(&PolySet, usize) -> StepOutcome,
{
    let mut chain = ProjectionChain {
        ordering: ordering.clone(),
        sets: vec![set.clone()],
        step_times: Vec::new(),
        timed_out: false,
    };
    let steps = ordering.len().saturating_sub(1);
    for &var in &ordering.as_slice()[..steps] {
        let current = chain.sets.last().expect("nonempty");
        let outcome = step(current, var);
        chain.step_times.push(outcome.seconds);
        match outcome.set {
            Some(next) => chain.sets.push(next),
            None => {
                chain.step_times.pop();
                chain.timed_out = true;
                break;
            }
        }
    }
    chain
}

/// Memo of single projection steps keyed by the input set and variable, so
/// prefixes shared between orderings are projected once.
#[derive(Debug, Default)]
pub struct ChainForest {
    memo: HashMap<(PolySet, usize), StepOutcome>,
    step_time_limit: f64,
    computed_seconds: f64,
}

impl ChainForest {
    pub fn new(step_time_limit: f64) -> Self {
        ChainForest { memo: HashMap::new(), step_time_limit, computed_seconds: 0.0 }
    }

    fn step(&mut self, set: &PolySet, var: usize) -> StepOutcome {
        let key = (set.clone(), var);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let outcome = timed_step(set, var, self.step_time_limit);
        self.computed_seconds += outcome.seconds;
        self.memo.insert(key, outcome.clone());
        outcome
    }

    /// Memoised single step; `None` if it exceeded the time limit.
    pub fn project(&mut self, set: &PolySet, var: usize) -> (Option<PolySet>, f64) {
        let o = self.step(set, var);
        (o.set, o.seconds)
    }

    pub fn chain(&mut self, set: &PolySet, ordering: &VariableOrdering) -> ProjectionChain {
        chain_with(set, ordering, |s, v| self.step(s, v))
    }

    /// Total time of the distinct steps actually computed.
    pub fn computed_seconds(&self) -> f64 {
        self.computed_seconds
    }

    pub fn distinct_steps(&self) -> usize {
        self.memo.len()
    }
}

/// Chains for every ordering of a set, with the deduplicated projection cost.
#[derive(Clone, Debug)]
pub struct ChainEnumeration {
    pub chains: BTreeMap<VariableOrdering, ProjectionChain>,
    pub projection_seconds: f64,
    pub distinct_steps: usize,
}

pub fn check_enumeration_cap(nvars: usize, cap: usize) -> Result<()> {
    if nvars > cap {
        let count: num_bigint::BigUint = (1..=nvars as u64).product();
        return Err(Error::EnumerationTooLarge { n: nvars, count: format!("{nvars}! = {count}"), cap });
    }
    Ok(())
}

/// Enumerates the projection chain of every ordering of `set`'s variables.
pub fn all_chains(set: &PolySet, step_time_limit: f64, cap: usize) -> Result<ChainEnumeration> {
    check_enumeration_cap(set.nvars(), cap)?;
    let mut forest = ChainForest::new(step_time_limit);
    let chains = VariableOrdering::all(set.nvars())
        .into_iter()
        .map(|o| {
            let chain = forest.chain(set, &o);
            (o, chain)
        })
        .collect();
    Ok(ChainEnumeration {
        chains,
        projection_seconds: forest.computed_seconds(),
        distinct_steps: forest.distinct_steps(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::parse_polynomial;

    fn set(polys: &[&str]) -> PolySet {
        let vars = Variables::indexed(3);
        PolySet::from_polys(3, polys.iter().map(|s| parse_polynomial(s, &vars).unwrap()))
    }

    fn s3() -> PolySet {
        set(&["x3^3 + x2^3 + x2 - x1^4", "x2^3 - x1"])
    }

    #[test]
    fn worked_projection_steps() {
        let s2 = project_step(&s3(), 2);
        assert_eq!(s2, set(&["x2^3 + x2 - x1^4", "x2^3 - x1"]));
        let s1 = project_step(&s2, 0);
        assert_eq!(s1, set(&["x2", "x2^2 + 1", "x2^11 - x2^2 - 1"]));
    }

    #[test]
    fn variable_free_set_passes_through() {
        let s = set(&["x1^2 + x2", "x2 - 3"]);
        assert_eq!(project_step(&s, 2), s);
    }

    #[test]
    fn empty_set_projects_to_empty() {
        assert!(project_step(&PolySet::new(2), 0).is_empty());
    }

    #[test]
    fn chain_for_worked_ordering() {
        let o = VariableOrdering::new(vec![2, 0, 1], 3).unwrap();
        let chain = project_chain(&s3(), &o, 10.0);
        assert!(chain.is_complete());
        assert_eq!(chain.sets.len(), 3);
        assert_eq!(chain.step_times.len(), 2);
        assert_eq!(chain.sets[1], set(&["x2^3 + x2 - x1^4", "x2^3 - x1"]));
        assert_eq!(chain.sets[2], set(&["x2", "x2^2 + 1", "x2^11 - x2^2 - 1"]));
    }

    #[test]
    fn univariate_chain_has_no_steps() {
        let s = PolySet::from_polys(1, [parse_polynomial("x1^2 - 2", &Variables::indexed(1)).unwrap()]);
        let chain = project_chain(&s, &VariableOrdering::identity(1), 10.0);
        assert_eq!(chain.sets, vec![s]);
        assert!(chain.step_times.is_empty());
    }

    #[test]
    fn zero_limit_times_out() {
        let o = VariableOrdering::identity(3);
        let chain = project_chain(&s3(), &o, -1.0);
        assert!(chain.timed_out);
        assert_eq!(chain.sets.len(), 1);
        assert!(chain.render(&Variables::indexed(3)).contains("timed out"));
    }

    #[test]
    fn enumeration_shares_prefixes() {
        let all = all_chains(&s3(), 10.0, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(all.chains.len(), 6);
        // three first steps plus one second step per ordering
        assert_eq!(all.distinct_steps, 3 + 6);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let err = all_chains(&PolySet::new(8), 10.0, 7).unwrap_err();
        assert!(err.to_string().contains("8! = 40320"), "{err}");
    }

    #[test]
    fn ordering_validation() {
        assert!(VariableOrdering::new(vec![0, 0, 1], 3).is_err());
        assert!(VariableOrdering::new(vec![0, 1], 3).is_err());
        assert!(VariableOrdering::new(vec![0, 3, 1], 3).is_err());
        let vars = Variables::indexed(3);
        let o = VariableOrdering::parse("x3, x1,x2", &vars).unwrap();
        assert_eq!(o.as_slice(), &[2, 0, 1]);
        assert_eq!(o.render(&vars), "x3,x1,x2");
        assert!(VariableOrdering::parse("x3,x4,x1", &vars).is_err());
        assert_eq!(VariableOrdering::all(3).len(), 6);
        assert_eq!(VariableOrdering::all(3)[0], VariableOrdering::identity(3));
    }
}
