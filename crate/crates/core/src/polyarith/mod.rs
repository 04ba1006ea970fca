//! Exact sparse multivariate polynomials over the integers.
//!
//! Variables are addressed by their zero-based position in a problem's
//! variable list; position `k` is the variable usually written `x{k+1}`.
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic with lower-indexed variables more significant, so
//! the last entry of the map is always the leading term.

mod gcd;
mod polyset;
pub(crate) mod squarefree;
mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use gcd::{content_and_primitive, discriminant, gcd, pseudo_remainder, resultant};
pub use polyset::{degree_sum, sotd_value, PolySet};
pub use squarefree::{coprime_basis, squarefree_part};
pub use text::{parse_polynomial, ParseError};

/// A named problem variable. `index` is 1-based and fixes tie-breaking order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub index: usize,
    pub name: String,
}

/// The ordered variable list of one problem.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Variables {
    vars: Vec<Variable>,
}

impl Variables {
    /// Builds a variable list from names; indices are assigned in order.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vars: Vec<Variable> = Vec::new();
        for name in names {
            let name = name.into();
            if vars.iter().any(|v| v.name == name) {
                return Err(Error::Data(format!("duplicate variable name `{name}`")));
            }
            vars.push(Variable { index: vars.len() + 1, name });
        }
        Ok(Variables { vars })
    }

    /// The default naming `x1, x2, …, xn`.
    pub fn indexed(n: usize) -> Self {
        Variables {
            vars: (1..=n)
                .map(|index| Variable { index, name: format!("x{index}") })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn name(&self, pos: usize) -> &str {
        &self.vars[pos].name
    }

    pub fn get(&self, pos: usize) -> Option<&Variable> {
        self.vars.get(pos)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Variable> {
        self.vars.iter()
    }

    /// True when every name lexes as a single identifier in infix text.
    pub fn infix_safe(&self) -> bool {
        self.vars.iter().all(|v| {
            let mut b = v.name.bytes();
            b.next().is_some_and(|c| c.is_ascii_alphabetic() || c == b'_')
                && b.all(|c| c.is_ascii_alphanumeric() || c == b'_')
        })
    }
}

/// Exponent vector with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// The monomial `x_var^exp`.
    pub fn var_pow(var: usize, exp: u32) -> Self {
        let mut exps = vec![0; var + 1];
        exps[var] = exp;
        Monomial::new(exps)
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of exponent slots in use (one past the highest variable present).
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial::new((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut out = self.0.clone();
        for (i, &e) in other.0.iter().enumerate() {
            out[i] = out[i].checked_sub(e)?;
        }
        Some(Monomial::new(out))
    }

    fn with_exp(&self, var: usize, exp: u32) -> Monomial {
        let mut exps = self.0.clone();
        if exps.len() <= var {
            exps.resize(var + 1, 0);
        }
        exps[var] = exp;
        Monomial::new(exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            (0..n)
                .map(|i| self.exp(i).cmp(&other.exp(i)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with arbitrary-precision integer coefficients.
///
/// No stored coefficient is zero, so structural equality is mathematical
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Polynomial::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    /// The polynomial `x_var`.
    pub fn var(var: usize) -> Self {
        Polynomial::term(Monomial::var_pow(var, 1), 1)
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut out = Polynomial::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the zero polynomial and nonzero integers.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.get(&Monomial::one()).cloned().unwrap_or_default())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading term under the graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.leading_term().map(|(_, c)| c)
    }

    /// Highest exponent of `var`; 0 for the zero polynomial.
    pub fn degree(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    /// Positions of the variables occurring in the polynomial, ascending.
    pub fn variables(&self) -> Vec<usize> {
        let width = self.terms.keys().map(Monomial::width).max().unwrap_or(0);
        (0..width).filter(|&v| self.contains_var(v)).collect()
    }

    /// Number of exponent slots needed to describe every term.
    pub fn width(&self) -> usize {
        self.terms.keys().map(Monomial::width).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(t, k)| (t.mul(m), k.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Gcd of all integer coefficients (non-negative; zero for the zero polynomial).
    pub fn integer_content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides every coefficient by `d`, which must divide all of them.
    pub fn div_integer(&self, d: &BigInt) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c / d)).collect(),
        }
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (dm, dc) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let m = rm.div(dm)?;
            let (c, r) = rc.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            rem = &rem - &divisor.mul_monomial(&m).scale(&c);
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Coefficients with respect to `var`: entry `k` multiplies `var^k`.
    pub fn coefficients(&self, var: usize) -> Vec<Polynomial> {
        let deg = self.degree(var) as usize;
        let mut out = vec![Polynomial::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let k = m.exp(var) as usize;
            out[k].add_term(m.with_exp(var, 0), c.clone());
        }
        out
    }

    /// Inverse of [`Polynomial::coefficients`].
    pub fn from_coefficients(var: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                out.add_term(m.with_exp(var, k as u32), v.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `var` (a polynomial free of `var`).
    pub fn leading_coefficient_in(&self, var: usize) -> Polynomial {
        self.coefficients(var).pop().unwrap_or_default()
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e > 0 {
                out.add_term(m.with_exp(var, e - 1), c * BigInt::from(e));
            }
        }
        out
    }

    /// Substitutes the integer `value` for `var`.
    pub fn evaluate(&self, var: usize, value: &BigInt) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            out.add_term(m.with_exp(var, 0), c * num_traits::pow(value.clone(), e as usize));
        }
        out
    }

    /// Renames variables: variable `v` becomes `map[v]`.
    pub fn remap(&self, map: &[usize]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let width = map.iter().copied().max().map_or(0, |w| w + 1);
            let mut exps = vec![0; width];
            for (v, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    exps[map[v]] += e;
                }
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        out
    }

    /// Flips the sign so the leading coefficient is positive.
    pub fn sign_normalized(&self) -> Polynomial {
        match self.leading_coefficient() {
            Some(c) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Sign-normalized and integer-content-free (the set normal form).
    pub fn primitive_normal_form(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let content = self.integer_content();
        self.div_integer(&content).sign_normalized()
    }
}

impl Ord for Polynomial {
    /// Compares term lists from the leading term down.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ca)), Some((mb, cb))) => {
                    let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
                    if o.is_ne() {
                        return o;
                    }
                }
            }
        }
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = Variables::indexed(self.width());
        f.write_str(&text::render(self, &vars))
    }
}

impl Polynomial {
    /// Infix rendering using the given variable names, leading term first.
    pub fn render(&self, vars: &Variables) -> String {
        text::render(self, vars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &Variables::indexed(3)).unwrap()
    }

    #[test]
    fn degree_examples() {
        assert_eq!(p("x3^3 + x2^3 + x2 - x1^4").degree(0), 4);
        assert_eq!(p("x2^3 - x1").degree(2), 0);
        assert_eq!(Polynomial::zero().degree(0), 0);
    }

    #[test]
    fn product_of_conjugates() {
        assert_eq!(&p("x1 + 1") * &p("x1 - 1"), p("x1^2 - 1"));
    }

    #[test]
    fn leading_term_is_graded_lex() {
        let q = p("x2^3 + x2 - x1^4");
        let (m, c) = q.leading_term().unwrap();
        assert_eq!(m, &Monomial::var_pow(0, 4));
        assert_eq!(c, &BigInt::from(-1));
        // x1 outranks x2 at equal total degree
        assert!(Monomial::var_pow(0, 2) > Monomial::var_pow(1, 2));
        assert!(Monomial::new(vec![1, 1]) > Monomial::var_pow(1, 2));
    }

    #[test]
    fn exact_division() {
        let a = p("x1^2 - x2^2");
        assert_eq!(a.div_exact(&p("x1 - x2")), Some(p("x1 + x2")));
        assert_eq!(a.div_exact(&p("x1 + 2")), None);
        assert_eq!(p("6x1").div_exact(&p("4")), None);
    }

    #[test]
    fn coefficients_round_trip() {
        let a = p("x1^2 x2 + 3 x1 x3 - x2 + 7");
        let cs = a.coefficients(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[1], p("3 x3"));
        assert_eq!(Polynomial::from_coefficients(0, &cs), a);
    }

    #[test]
    fn derivative_and_evaluate() {
        let a = p("x1^3 x2 - 2 x1 + 5");
        assert_eq!(a.derivative(0), p("3 x1^2 x2 - 2"));
        assert_eq!(a.evaluate(0, &BigInt::from(2)), p("8 x2 + 1"));
    }

    #[test]
    fn normal_form_strips_content_and_sign() {
        assert_eq!(p("-4 x1^2 + 6 x2").primitive_normal_form(), p("2 x1^2 - 3 x2"));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let a = p("x1 - 2 x2 + 1");
        assert_eq!(a.pow(3), &(&a * &a) * &a);
        assert!(a.pow(0).is_one());
    }
}
