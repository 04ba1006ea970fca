use std::collections::BTreeSet;

use super::{Polynomial, Variables};

/// A set of nonconstant polynomials in normal form over a fixed variable universe.
///
/// Normal form: integer content removed and the leading coefficient positive.
/// Constants are dropped on insertion and duplicates collapse, so two sets
/// built from the same polynomials in any order are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolySet {
    nvars: usize,
    polys: BTreeSet<Polynomial>,
}

impl PolySet {
    pub fn new(nvars: usize) -> Self {
        PolySet { nvars, polys: BTreeSet::new() }
    }

    pub fn from_polys<I>(nvars: usize, polys: I) -> Self
    where
        I: IntoIterator<Item = Polynomial>,
    {
        let mut set = PolySet::new(nvars);
        set.extend(polys);
        set
    }

    /// Inserts the normal form of `p`; returns false for constants and repeats.
    pub fn insert(&mut self, p: Polynomial) -> bool {
        if p.is_constant() {
            return false;
        }
        debug_assert!(p.width() <= self.nvars, "polynomial uses a variable outside the universe");
        self.polys.insert(p.primitive_normal_form())
    }

    /// Number of variables in the universe (not all need occur).
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.polys.contains(&p.primitive_normal_form())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Polynomial> {
        self.polys.iter()
    }

    pub fn render(&self, vars: &Variables) -> String {
        let parts: Vec<String> = self.polys.iter().map(|p| p.render(vars)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl Extend<Polynomial> for PolySet {
    fn extend<I: IntoIterator<Item = Polynomial>>(&mut self, iter: I) {
        for p in iter {
            self.insert(p);
        }
    }
}

impl<'a> IntoIterator for &'a PolySet {
    type Item = &'a Polynomial;
    type IntoIter = std::collections::btree_set::Iter<'a, Polynomial>;
    fn into_iter(self) -> Self::IntoIter {
        self.polys.iter()
    }
}

/// Sum over the set of the degree of `var` in each polynomial.
pub fn degree_sum(set: &PolySet, var: usize) -> u64 {
    set.iter().map(|p| u64::from(p.degree(var))).sum()
}

/// Sum of the total degrees of every monomial of every polynomial.
pub fn sotd_value(set: &PolySet) -> u64 {
    set.iter()
        .flat_map(|p| p.terms().map(|(m, _)| m.total_degree()))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::parse_polynomial;

    fn set(polys: &[&str]) -> PolySet {
        let vars = Variables::indexed(3);
        PolySet::from_polys(3, polys.iter().map(|s| parse_polynomial(s, &vars).unwrap()))
    }

    #[test]
    fn degree_sums_of_worked_sets() {
        let s3 = set(&["x3^3 + x2^3 + x2 - x1^4", "x2^3 - x1"]);
        assert_eq!(degree_sum(&s3, 0), 5);
        assert_eq!(degree_sum(&s3, 1), 6);
        assert_eq!(degree_sum(&s3, 2), 3);
        assert_eq!(degree_sum(&PolySet::new(3), 0), 0);
        let s1 = set(&["x2", "x2^2 + 1", "x2^11 - x2^2 - 1"]);
        assert_eq!(degree_sum(&s1, 1), 14);
    }

    #[test]
    fn sotd_values() {
        assert_eq!(sotd_value(&set(&["x3^3 + x2^3 + x2 - x1^4", "x2^3 - x1"])), 15);
        assert_eq!(sotd_value(&set(&["x2", "x2^2 + 1", "x2^11 - x2^2 - 1"])), 16);
        assert_eq!(sotd_value(&PolySet::new(2)), 0);
    }

    #[test]
    fn normal_form_dedupes_and_drops_constants() {
        let s = set(&["2 x1 - 4", "x1 - 2", "2 - x1", "7", "0"]);
        assert_eq!(s.len(), 1);
        assert!(s.contains(&parse_polynomial("-3x1 + 6", &Variables::indexed(1)).unwrap()));
    }

    #[test]
    fn insertion_order_is_irrelevant() {
        let a = set(&["x1 + x2", "x3^2 - 1", "x1 x2"]);
        let b = set(&["x1 x2", "x3^2 - 1", "x2 + x1"]);
        assert_eq!(a, b);
    }
}
