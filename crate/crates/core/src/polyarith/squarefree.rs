//! Squarefree splitting and coprime refinement.
//!
//! This is the factorization level used by projection: integer content,
//! monomial content, contents with respect to each variable, and Yun's
//! squarefree decomposition. No irreducible factorization is attempted.

use std::collections::BTreeSet;

use super::{content_and_primitive, gcd, Monomial, PolySet, Polynomial};
use crate::error::{Error, Result};

/// Normalized squarefree factors of `p`, starting the derivative-gcd split
/// from `var`.
///
/// Every returned factor is primitive with respect to each variable it
/// contains, so `gcd(f, ∂f/∂v) = 1` for each such variable `v`.
pub fn squarefree_part(p: &Polynomial, var: usize) -> Result<PolySet> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let nvars = p.width().max(var + 1);
    Ok(PolySet::from_polys(nvars, squarefree_factors(p, var)))
}

pub(crate) fn squarefree_factors(p: &Polynomial, var: usize) -> BTreeSet<Polynomial> {
    let mut out = BTreeSet::new();
    let mut work = vec![p.clone()];
    while let Some(f) = work.pop() {
        let f = f.primitive_normal_form();
        if f.is_constant() {
            continue;
        }

        // monomial content
        let width = f.width();
        let min_exps: Vec<u32> = (0..width)
            .map(|v| f.terms().map(|(m, _)| m.exp(v)).min().unwrap_or(0))
            .collect();
        let monomial = Monomial::new(min_exps);
        if !monomial.is_one() {
            for (v, &e) in monomial.exps().iter().enumerate() {
                if e > 0 {
                    out.insert(Polynomial::var(v));
                }
            }
            let divisor = Polynomial::term(monomial, 1);
            work.push(f.div_exact(&divisor).expect("monomial content divides"));
            continue;
        }

        let vars = f.variables();
        let mut order: Vec<usize> = vars.iter().copied().filter(|&v| v == var).collect();
        order.extend(vars.iter().copied().filter(|&v| v != var));

        let mut split = false;
        for &v in &order {
            let (content, primitive) = content_and_primitive(&f, v).expect("nonzero");
            if !content.is_constant() {
                work.push(content);
                work.push(primitive);
                split = true;
                break;
            }
        }
        if split {
            continue;
        }

        let parts = yun(&f, order[0]);
        if parts.len() == 1 && parts[0].primitive_normal_form() == f {
            out.insert(f);
        } else {
            work.extend(parts);
        }
    }
    out
}

/// Yun's algorithm for `f` primitive in `var` with positive degree.
/// Returns the nonconstant squarefree parts of each multiplicity.
fn yun(f: &Polynomial, var: usize) -> Vec<Polynomial> {
    let df = f.derivative(var);
    let g = gcd(f, &df);
    if g.degree(var) == 0 {
        return vec![f.clone()];
    }
    let exact = |a: &Polynomial, b: &Polynomial| a.div_exact(b).expect("Yun division is exact");
    let mut b = exact(f, &g);
    let c = exact(&df, &g);
    let mut d = &c - &b.derivative(var);
    let mut out = Vec::new();
    while b.degree(var) > 0 {
        let a = gcd(&b, &d);
        let c = exact(&d, &a);
        b = exact(&b, &a);
        d = &c - &b.derivative(var);
        if !a.is_constant() {
            out.push(a);
        }
    }
    out
}

/// Refines squarefree polynomials into a pairwise coprime set with the same
/// zero locus, by repeatedly splitting off common gcds.
pub fn coprime_basis<I>(polys: I) -> Vec<Polynomial>
where
    I: IntoIterator<Item = Polynomial>,
{
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut work: Vec<Polynomial> = polys.into_iter().collect();
    work.reverse();
    'next: while let Some(f) = work.pop() {
        let f = f.primitive_normal_form();
        if f.is_constant() || basis.contains(&f) {
            continue;
        }
        for i in 0..basis.len() {
            let g = gcd(&f, &basis[i]);
            if !g.is_constant() {
                let b = basis.swap_remove(i);
                work.push(b.div_exact(&g).expect("gcd divides"));
                work.push(f.div_exact(&g).expect("gcd divides"));
                work.push(g);
                continue 'next;
            }
        }
        basis.push(f);
    }
    basis.sort();
    basis
}
