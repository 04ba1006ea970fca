#![allow(dead_code)]

use cadorder::polyarith::{parse_polynomial, Monomial};
use cadorder::{PolySet, Polynomial, Variables};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn set(n: usize, polys: &[&str]) -> PolySet {
    let vars = Variables::indexed(n);
    PolySet::from_polys(n, polys.iter().map(|s| parse_polynomial(s, &vars).expect("fixture parses")))
}

pub fn poly(n: usize, s: &str) -> Polynomial {
    parse_polynomial(s, &Variables::indexed(n)).expect("fixture parses")
}

pub fn s3() -> PolySet {
    set(3, &["x3^3 + x2^3 + x2 - x1^4", "x2^3 - x1"])
}

/// Determinant by fraction-free Gaussian elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Sylvester determinant from coefficient lists, entry `k` multiplying `y^k`.
/// The list lengths fix the formal degrees.
pub fn sylvester_resultant(p: &[BigInt], q: &[BigInt]) -> BigInt {
    let (m, n) = (p.len() - 1, q.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in p.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in q.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    bareiss_det(rows)
}

/// Integer coefficients of `p` in `var` after substituting `point` for `at`,
/// padded to the formal degree of `p` in `var`.
pub fn specialized_coeffs(p: &Polynomial, var: usize, at: usize, point: i64) -> Vec<BigInt> {
    p.coefficients(var)
        .into_iter()
        .map(|c| {
            let v = c.evaluate(at, &BigInt::from(point));
            v.constant_value().unwrap_or_default()
        })
        .collect()
}

/// Random polynomial in `x1, x2` of total degree at most `max_deg`, with
/// positive degree in `x2` and coefficients in `[-9, 9]`.
pub fn random_bivariate(rng: &mut ChaCha8Rng, max_deg: u32) -> Polynomial {
    let deg = rng.gen_range(1..=max_deg);
    let nterms = rng.gen_range(1..=6);
    let mut p = Polynomial::zero();
    for _ in 0..nterms {
        let i = rng.gen_range(0..=deg);
        let j = rng.gen_range(0..=deg - i);
        let c: i64 = rng.gen_range(-9..=9);
        p = &p + &Polynomial::term(Monomial::new(vec![i, j]), c);
    }
    if p.degree(1) == 0 {
        let c: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        p = &p + &Polynomial::term(Monomial::var_pow(1, rng.gen_range(1..=deg)), c);
    }
    p
}

/// Random univariate polynomial in `x1` of exact degree `deg`, coefficients in `[-9, 9]`.
pub fn random_univariate(rng: &mut ChaCha8Rng, deg: u32) -> Polynomial {
    let mut p = Polynomial::zero();
    for k in 0..deg {
        let c: i64 = rng.gen_range(-9..=9);
        p = &p + &Polynomial::term(Monomial::var_pow(0, k), c);
    }
    let mut lead: i64 = rng.gen_range(1..=9);
    if rng.gen_bool(0.5) {
        lead = -lead;
    }
    &p + &Polynomial::term(Monomial::var_pow(0, deg), lead)
}

/// Compares `resultant(p, q, x2)` with Sylvester determinants at enough
/// integer values of `x1` to pin down a polynomial of its degree.
pub fn check_resultant_against_sylvester(p: &Polynomial, q: &Polynomial) -> Result<(), String> {
    let res = cadorder::polyarith::resultant(p, q, 1).map_err(|e| e.to_string())?;
    let bound = (p.total_degree() * q.total_degree()) as i64;
    if res.degree(0) as i64 > bound {
        return Err(format!("resultant degree {} exceeds Bezout bound {bound}", res.degree(0)));
    }
    for a in -(bound / 2 + 1)..=(bound / 2 + 1) {
        let expected = sylvester_resultant(&specialized_coeffs(p, 1, 0, a), &specialized_coeffs(q, 1, 0, a));
        let got = res.evaluate(0, &BigInt::from(a)).constant_value().unwrap_or_default();
        if got != expected {
            return Err(format!("p = {p}, q = {q}: at x1 = {a} resultant gives {got}, Sylvester gives {expected}"));
        }
    }
    Ok(())
}

pub const TIMINGS_CSV: &str = include_str!("../fixtures/timings.csv");
pub const CHOICES_CSV: &str = include_str!("../fixtures/choices.csv");

/// Hand-computed report of the `gmods` choices on the fixture.
pub struct Golden {
    pub accuracy: f64,
    pub total_with: f64,
    pub total_without: f64,
    pub markup_with: f64,
    pub markup_without: f64,
    pub completed_with: usize,
    pub completed_without: usize,
}

/// Optimal times are 2, 8 and 12 s. The choices pick 5 s (+0.5 s cost), a timeout
/// at limit 30 charged 60 s (+1 s) and a tied 12 s (+0.25 s).
pub fn golden_gmods() -> Golden {
    Golden {
        accuracy: 1.0 / 3.0,
        total_with: 5.5 + 61.0 + 12.25,
        total_without: 5.0 + 60.0 + 12.0,
        markup_with: (3.5 / 3.0 + 53.0 / 9.0 + 0.25 / 13.0) / 3.0,
        markup_without: (1.0 + 52.0 / 9.0 + 0.0) / 3.0,
        completed_with: 2,
        completed_without: 2,
    }
}

/// Random set of one to three small polynomials in `nvars` variables.
pub fn random_set(rng: &mut ChaCha8Rng, nvars: usize) -> PolySet {
    let count = rng.gen_range(1..=3);
    let polys = (0..count).map(|_| {
        let terms = rng.gen_range(1..=3);
        let mut p = Polynomial::zero();
        for _ in 0..terms {
            let exps = (0..nvars).map(|_| rng.gen_range(0..3)).collect();
            let c: i64 = rng.gen_range(-5..=5);
            p = &p + &Polynomial::term(Monomial::new(exps), c);
        }
        p
    });
    PolySet::from_polys(nvars, polys.collect::<Vec<_>>())
}
