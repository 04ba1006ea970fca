//! Pseudo-division, contents, gcds, resultants and discriminants.
//!
//! Gcds and resultants both run the subresultant polynomial remainder
//! sequence, so intermediate coefficients stay polynomial in size without
//! taking primitive parts at every step.

use num_integer::Integer;

use super::{Monomial, Polynomial};
use crate::error::{Error, Result};

/// Pseudo-remainder of `p` by `q` with respect to `var`.
///
/// Returns `prem` with `lc(q)^k · p = quot · q + prem`, `deg(prem) < deg(q)`
/// and `k = deg(p) − deg(q) + 1`. When `deg(p) < deg(q)` this is `p` itself.
pub fn pseudo_remainder(p: &Polynomial, q: &Polynomial, var: usize) -> Result<Polynomial> {
    let dq = q.degree(var);
    if dq == 0 {
        return Err(Error::DivisorConstant);
    }
    let dp = p.degree(var);
    if p.is_zero() || dp < dq {
        return Ok(p.clone());
    }
    let lcq = q.leading_coefficient_in(var);
    let k = dp - dq + 1;
    let mut r = p.clone();
    let mut steps = 0;
    while !r.is_zero() && r.degree(var) >= dq {
        let dr = r.degree(var);
        let lcr = r.leading_coefficient_in(var);
        let shift = Monomial::var_pow(var, dr - dq);
        r = &(&lcq * &r) - &(&lcr * &q.mul_monomial(&shift));
        steps += 1;
    }
    Ok(&r * &lcq.pow(k - steps))
}

/// Highest variable position occurring in either polynomial.
fn main_variable(p: &Polynomial, q: &Polynomial) -> Option<usize> {
    let top = |x: &Polynomial| x.variables().last().copied();
    match (top(p), top(q)) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    }
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
fn content_in(p: &Polynomial, var: usize) -> Polynomial {
    let mut acc = Polynomial::zero();
    for c in p.coefficients(var).iter().rev() {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Splits `p` into its content and primitive part with respect to `var`.
///
/// The content is a polynomial free of `var` with positive leading
/// coefficient; `content · primitive = p`.
pub fn content_and_primitive(p: &Polynomial, var: usize) -> Result<(Polynomial, Polynomial)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let content = content_in(p, var);
    let primitive = p
        .div_exact(&content)
        .expect("content divides every coefficient");
    Ok((content, primitive))
}

/// Greatest common divisor in `Z[x1, …, xn]`, with positive leading coefficient.
///
/// `gcd(p, 0)` is `p` up to sign and `gcd(0, 0) = 0`.
pub fn gcd(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return q.sign_normalized();
    }
    if q.is_zero() {
        return p.sign_normalized();
    }
    let Some(var) = main_variable(p, q) else {
        return Polynomial::constant(p.integer_content().gcd(&q.integer_content()));
    };
    if !p.contains_var(var) {
        return gcd(p, &content_in(q, var));
    }
    if !q.contains_var(var) {
        return gcd(&content_in(p, var), q);
    }
    let cp = content_in(p, var);
    let cq = content_in(q, var);
    let content = gcd(&cp, &cq);
    let pp = p.div_exact(&cp).expect("content divides");
    let qp = q.div_exact(&cq).expect("content divides");
    let g = primitive_gcd(pp, qp, var);
    (&content * &g).sign_normalized()
}

/// Gcd of two polynomials that are primitive in `var` and of positive degree.
fn primitive_gcd(p: Polynomial, q: Polynomial, var: usize) -> Polynomial {
    let (mut a, mut b) = if p.degree(var) >= q.degree(var) { (p, q) } else { (q, p) };
    let mut g = Polynomial::one();
    let mut h = Polynomial::one();
    loop {
        let delta = a.degree(var) - b.degree(var);
        let r = pseudo_remainder(&a, &b, var).expect("divisor has positive degree");
        if r.is_zero() {
            break;
        }
        if r.degree(var) == 0 {
            return Polynomial::one();
        }
        a = b;
        b = r
            .div_exact(&(&g * &h.pow(delta)))
            .expect("subresultant division is exact");
        g = a.leading_coefficient_in(var);
        h = step_h(&h, &g, delta);
    }
    let c = content_in(&b, var);
    b.div_exact(&c).expect("content divides").sign_normalized()
}

/// `h^(1−δ) · g^δ`, which is always a polynomial in the subresultant PRS.
fn step_h(h: &Polynomial, g: &Polynomial, delta: u32) -> Polynomial {
    if delta == 0 {
        return h.clone();
    }
    g.pow(delta)
        .div_exact(&h.pow(delta - 1))
        .expect("subresultant division is exact")
}

/// Resultant of `p` and `q` with respect to `var`, equal to the determinant
/// of their Sylvester matrix.
pub fn resultant(p: &Polynomial, q: &Polynomial, var: usize) -> Result<Polynomial> {
    let (dp, dq) = (p.degree(var), q.degree(var));
    if dp == 0 || dq == 0 {
        return Err(Error::ResultantDegree);
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut negate = false;
    if dp < dq {
        std::mem::swap(&mut a, &mut b);
        negate = dp % 2 == 1 && dq % 2 == 1;
    }
    let mut g = Polynomial::one();
    let mut h = Polynomial::one();
    loop {
        let (da, db) = (a.degree(var), b.degree(var));
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = pseudo_remainder(&a, &b, var)?;
        if r.is_zero() {
            return Ok(Polynomial::zero());
        }
        a = b;
        b = r
            .div_exact(&(&g * &h.pow(delta)))
            .expect("subresultant division is exact");
        g = a.leading_coefficient_in(var);
        h = step_h(&h, &g, delta);
        if b.degree(var) == 0 {
            let da = a.degree(var);
            let res = b
                .pow(da)
                .div_exact(&h.pow(da - 1))
                .expect("subresultant division is exact");
            return Ok(if negate { -res } else { res });
        }
    }
}

/// Discriminant of `p` with respect to `var`:
/// `lc(p) · disc(p) = (−1)^(d(d−1)/2) · res(p, ∂p/∂var)`.
pub fn discriminant(p: &Polynomial, var: usize) -> Result<Polynomial> {
    let d = p.degree(var);
    if d < 2 {
        return Err(Error::DiscriminantDegree);
    }
    let res = resultant(p, &p.derivative(var), var)?;
    let signed = if (d * (d - 1) / 2) % 2 == 1 { -res } else { res };
    let lc = p.leading_coefficient_in(var);
    Ok(signed.div_exact(&lc).expect("leading coefficient divides the resultant"))
}
